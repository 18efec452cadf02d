"""Kernels and cokernels relative to trivial objects, the canonical factorisation, and law suites.

Every law check walks a finite catalog and returns a ``LawReport``.  A
failing report always carries at least one witness diagram; witnesses are
chosen as the first offending case in catalog order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .core import (Catalog, CategoryError, CompositionError, Mor, Obj, Square, TrivialClass, Unsupported,
                   BackendBug, backend_of, compose, identity, induced_map, is_injective, is_iso, is_mono,
                   is_pullback, is_surjective, is_trivial_map, mor_from_json, mor_to_json, obj_to_json)

MAX_WITNESSES = 5


# --------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class KernelResult:
    K: Obj
    k: Mor
    square: Square  # top: K -> corefl(cod f), left: k, right: counit, bottom: f


@dataclass(frozen=True)
class CokernelResult:
    Q: Obj
    q: Mor
    congruence_used: object = None
    info: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Factorisation:
    f: Mor
    e: Mor
    m: Mor
    e_is_normal_epi: bool
    m_has_trivial_kernel: bool
    witness_on_failure: tuple | None = None
    kernel: KernelResult | None = field(default=None, compare=False)
    cokernel: CokernelResult | None = field(default=None, compare=False)


class LiftFailure(CategoryError):
    """No diagonal, or more than one, for a commuting square."""

    def __init__(self, message, candidates=0):
        super().__init__(message)
        self.candidates = candidates


@dataclass
class LawReport:
    law: str
    verdict: str = "pass"  # pass | fail | unsupported
    witnesses: list = field(default_factory=list)
    cases: int = 0
    mode: str = "exhaustive"
    notes: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def fail(self, case: str, detail: str = "", **arrows):
        self.verdict = "fail"
        self.stats[case] = self.stats.get(case, 0) + 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append({"case": case, "detail": detail,
                                   "arrows": {k: mor_to_json(v) for k, v in arrows.items()}})

    def count(self, key: str, n: int = 1):
        self.stats[key] = self.stats.get(key, 0) + n

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {"law": self.law, "verdict": self.verdict, "cases": self.cases, "mode": self.mode,
                "stats": dict(sorted(self.stats.items())), "notes": list(self.notes),
                "witnesses": self.witnesses}

    def to_text(self) -> str:
        lines = [f"{self.law}: {self.verdict.upper()} ({self.cases} cases, {self.mode})"]
        for k, v in sorted(self.stats.items()):
            lines.append(f"  {k}: {v}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        for w in self.witnesses:
            maps = ", ".join(f"{name}={a['map']}" for name, a in w["arrows"].items())
            lines.append(f"  witness [{w['case']}] {w['detail']} {maps}".rstrip())
        return "\n".join(lines)


def merge_reports(law: str, reports: list[LawReport]) -> LawReport:
    out = LawReport(law)
    for r in reports:
        out.cases += r.cases
        out.notes.extend(r.notes)
        for k, v in r.stats.items():
            out.count(f"{r.law}/{k}", v)
        out.witnesses.extend(r.witnesses[: MAX_WITNESSES - len(out.witnesses)])
        out.mode = r.mode
    verdicts = {r.verdict for r in reports}
    out.verdict = "fail" if "fail" in verdicts else ("unsupported" if verdicts == {"unsupported"} else "pass")
    return out


# --------------------------------------------------------------------------
# kernels, cokernels, factorisation


def _counit(B: Obj, Z: TrivialClass | None = None) -> Mor:
    if Z is None:
        return backend_of(B).coreflection(B)
    return Z.coreflector(B)[1]


def kernel(f: Mor, Z: TrivialClass | None = None) -> KernelResult:
    """Kernel of ``f`` as the pullback of the counit of the codomain's coreflection along ``f``."""
    return _kernel(f) if Z is None else _kernel_with(f, Z)


@lru_cache(maxsize=100_000)
def _kernel(f: Mor) -> KernelResult:
    return _kernel_with(f, None)


def _kernel_with(f, Z):
    c = _counit(f.cod, Z)
    P, pf, pc = backend_of(f.dom).pullback(f, c)
    return KernelResult(P, pf, Square(pc, pf, c, f))


def cokernel(k: Mor, Z: TrivialClass | None = None) -> CokernelResult:
    """Cokernel relative to trivial objects, for the maps the backend can handle."""
    return _cokernel(k)


@lru_cache(maxsize=100_000)
def _cokernel(k: Mor) -> CokernelResult:
    res = backend_of(k.dom).cokernel(k)
    return CokernelResult(res.quotient, res.projection, res.congruence, res.info)


def cokernel_of_kernel(kr: KernelResult, Z: TrivialClass | None = None) -> CokernelResult:
    return cokernel(kr.k, Z)


@lru_cache(maxsize=100_000)
def _canonical(f: Mor):
    kr = _kernel(f)
    cr = _cokernel(kr.k)
    table = induced_map(cr.q, f)
    B = backend_of(f.dom)
    if table is None:
        raise BackendBug(f"{f!r} is not constant on the classes of the cokernel of its kernel")
    if not B.is_morphism(cr.Q, f.cod, table):
        raise BackendBug(f"induced map for {f!r} is not a morphism")
    return kr, cr, Mor(cr.Q, f.cod, table)


def factorise(f: Mor, Z: TrivialClass | None = None) -> Factorisation:
    """``f = m . e`` with ``e`` the cokernel of the kernel of ``f``; both flags are computed."""
    kr, cr, m = _canonical(f)
    e_ok = is_normal_epi(cr.q)
    mk = kernel(m)
    B = backend_of(f.dom)
    m_ok = B.is_trivial(mk.K)
    witness = None
    if not m_ok:
        piece = B.nontrivial_witness(mk.K)
        witness = _lift_witness(piece, mk.k, cr.q)
    return Factorisation(f, cr.q, m, e_ok, m_ok, witness, kr, cr)


def _lift_witness(piece, k, q):
    """Express a piece of the kernel of ``m`` in the elements of ``dom f`` (least preimages)."""
    if piece is None:
        return None
    pre = {}
    for x, y in enumerate(q.map):
        pre.setdefault(y, x)
    if isinstance(piece, tuple):
        classes = tuple(k.map[p] for p in piece)
        return {"quotient": classes, "domain": tuple(pre[c] for c in classes)}
    c = k.map[piece]
    return {"quotient": c, "domain": pre[c]}


def is_normal_epi(f: Mor, Z: TrivialClass | None = None) -> bool:
    _, _, m = _canonical(f)
    return is_iso(m)


def has_trivial_kernel(f: Mor, Z: TrivialClass | None = None) -> bool:
    K = kernel(f, Z).K
    return Z.membership(K) if Z is not None else backend_of(K).is_trivial(K)


def _comparison_into(sub: Mor, k: Mor) -> Mor | None:
    """The map ``t`` with ``k . t = sub`` when ``k`` is injective, or None."""
    pos = {y: i for i, y in enumerate(k.map)}
    table = []
    for y in sub.map:
        if y not in pos:
            return None
        table.append(pos[y])
    if not backend_of(sub.dom).is_morphism(sub.dom, k.dom, table):
        return None
    return Mor(sub.dom, k.dom, tuple(table))


def is_normal_mono(m: Mor, Z: TrivialClass | None = None) -> bool:
    """Whether ``m`` is (isomorphic to) the kernel of its own cokernel."""
    if not is_injective(m):
        return False
    try:
        cr = cokernel(m, Z)
    except Unsupported:
        raise Unsupported(f"{backend_of(m).tag} cannot decide normal monos without cokernels") from None
    kr = kernel(cr.q, Z)
    t = _comparison_into(m, kr.k)
    return t is not None and is_iso(t)


def kernel_pair(f: Mor):
    return backend_of(f.dom).pullback(f, f)


def is_regular_epi(f: Mor) -> bool:
    """Whether ``f`` is the coequalizer of its kernel pair, compared up to isomorphism."""
    B = backend_of(f.dom)
    P, p0, p1 = kernel_pair(f)
    res = B.coequalizer_seed(f.dom, list(zip(p0.map, p1.map)))
    table = induced_map(res.projection, f)
    if table is None or not B.is_morphism(res.quotient, f.cod, table):
        return False
    return is_iso(Mor(res.quotient, f.cod, table))


def _regular_or_none(f: Mor):
    """``is_regular_epi`` or None when the backend cannot form the coequalizer."""
    try:
        return is_regular_epi(f)
    except Unsupported:
        return None


def _normal_epi_gate(f: Mor):
    """Hypothesis of the non-pointed lemmas: the normal epi is also regular. Automatic when pointed,
    since a cokernel is then the coequalizer of a map and the zero map."""
    if backend_of(f.dom).pointed:
        return True
    return _regular_or_none(f)


def lift_diagonal(e: Mor, m: Mor, top: Mor, bottom: Mor) -> Mor:
    """The unique ``d`` with ``d . e = top`` and ``m . d = bottom``."""
    if top.dom != e.dom or bottom.dom != e.cod or top.cod != m.dom or bottom.cod != m.cod:
        raise CompositionError("lifting square corners do not match")
    if compose(top, m).map != compose(e, bottom).map:
        raise CompositionError("lifting square does not commute")
    B = backend_of(e.dom)
    if is_surjective(e):
        table = induced_map(e, top)
        if table is None or not B.is_morphism(e.cod, m.dom, table):
            raise LiftFailure("no diagonal filler", 0)
        d = Mor(e.cod, m.dom, table)
        if compose(d, m).map != bottom.map:
            raise LiftFailure("diagonal does not satisfy the lower triangle", 0)
        return d
    found = [Mor(e.cod, m.dom, t) for t in B.homs(e.cod, m.dom)
             if compose(e, Mor(e.cod, m.dom, t)).map == top.map and tuple(m.map[v] for v in t) == bottom.map]
    if len(found) != 1:
        raise LiftFailure(f"{len(found)} diagonal fillers", len(found))
    return found[0]


def trivial_factorisation(f: Mor) -> Mor | None:
    """Lift of a trivial map through the counit of its codomain (None if ``f`` is not trivial)."""
    c = _counit(f.cod)
    t = _comparison_into(f, c)
    return t


# --------------------------------------------------------------------------
# pushouts and universal properties (bounded by the catalog)


def is_pushout(sq: Square, catalog: Catalog) -> tuple[bool, int]:
    """Check the pushout property against every catalog object; returns (ok, cocones examined)."""
    if not sq.commutes():
        return False, 0
    B = catalog.backend
    top, left, right, bottom = sq.top, sq.left, sq.right, sq.bottom
    examined = 0
    for W in catalog.objects:
        homs_D = [Mor(right.cod, W, t) for t in B.homs(right.cod, W)]
        from_D = {}
        for w in homs_D:
            key = (tuple(w.map[y] for y in right.map), tuple(w.map[y] for y in bottom.map))
            from_D.setdefault(key, []).append(w)
        for u in catalog.homs(right.dom, W):
            ut = tuple(u.map[y] for y in top.map)
            for v in catalog.homs(bottom.dom, W):
                if tuple(v.map[y] for y in left.map) != ut:
                    continue
                examined += 1
                if len(from_D.get((u.map, v.map), ())) != 1:
                    return False, examined
    return True, examined


def kernel_is_universal(kr: KernelResult, f: Mor, catalog: Catalog) -> bool:
    """Every catalog map ``g`` with ``f . g`` trivial factors uniquely through the kernel."""
    for W in catalog.objects:
        for g in catalog.homs(W, f.dom):
            if is_trivial_map(compose(g, f)):
                if _comparison_into(g, kr.k) is None:
                    return False
    return True


def cokernel_is_universal(cr: CokernelResult, k: Mor, catalog: Catalog) -> bool:
    B = catalog.backend
    for W in catalog.objects:
        for g in catalog.homs(k.cod, W):
            if is_trivial_map(compose(k, g)):
                t = induced_map(cr.q, g)
                if t is None or not B.is_morphism(cr.Q, W, t):
                    return False
    return True


# --------------------------------------------------------------------------
# suite helpers


class _Flags:
    """Per-run memo of class membership."""

    def __init__(self):
        self.nepi: dict = {}
        self.tker: dict = {}

    def is_nepi(self, f):
        v = self.nepi.get(f)
        if v is None:
            v = self.nepi[f] = is_normal_epi(f)
        return v

    def is_tker(self, f):
        v = self.tker.get(f)
        if v is None:
            v = self.tker[f] = has_trivial_kernel(f)
        return v


def _sampler(mode: str, seed, samples):
    if mode == "exhaustive":
        return lambda xs: xs
    if seed is None:
        raise ValueError("sampled mode needs a seed")
    rng = random.Random(seed)

    def pick(xs):
        xs = list(xs)
        if samples is None or len(xs) <= samples:
            return xs
        idx = sorted(rng.sample(range(len(xs)), samples))
        return [xs[i] for i in idx]
    return pick


def _mode_name(mode, seed):
    return "exhaustive" if mode == "exhaustive" else f"sampled(seed={seed})"


def _maps(catalog: Catalog, pick, reps=True) -> list[Mor]:
    out = []
    for A in catalog.objects:
        for B in catalog.objects:
            out.extend(catalog.orbit_reps(A, B) if reps else catalog.homs(A, B))
    return pick(out)


# --------------------------------------------------------------------------
# factorisation-system axioms


def check_fs_axioms(catalog: Catalog, Z: TrivialClass | None = None, mode="exhaustive", seed=None,
                    samples=None, flags: _Flags | None = None) -> LawReport:
    """Isos in both classes, composition closure, factorisation, orthogonality and consequences."""
    rep = LawReport("fs-axioms", mode=_mode_name(mode, seed))
    rep.notes.append("maps range over representatives up to isomorphism of domain and codomain")
    rep.notes.append("class-quantified equivalents (some class M or E) are not finitely checkable")
    pick = _sampler(mode, seed, samples)
    flags = flags or _Flags()
    maps = _maps(catalog, pick)

    for f in maps:
        rep.cases += 1
        ne, tk = flags.is_nepi(f), flags.is_tker(f)
        iso = is_iso(f)
        if iso and not (ne and tk):
            rep.fail("iso-in-both-classes", "an isomorphism is missing from a class", f=f)
        if ne and tk and not iso:
            rep.fail("both-classes-implies-iso", "map in both classes is not an isomorphism", f=f)
        fa = factorise(f)
        if not (fa.e_is_normal_epi and fa.m_has_trivial_kernel):
            rep.fail("factorisation", f"canonical factorisation fails; kernel witness {fa.witness_on_failure}",
                     f=f, e=fa.e, m=fa.m)
        if compose(fa.e, fa.m).map != f.map:
            rep.fail("factorisation", "m . e differs from f", f=f)

    _check_composition(catalog, rep, flags, pick)
    _check_orthogonality(catalog, rep, flags, pick)
    if rep.passed:
        rep.notes.append(f"no violation found within {catalog.name}; this is a bounded check, not a proof")
    return rep


def _check_composition(catalog, rep, flags, pick):
    for A in catalog.objects:
        for B in catalog.objects:
            fs = catalog.orbit_reps(A, B, pre=True, post=False)
            if not fs:
                continue
            for C in catalog.objects:
                gs = catalog.orbit_reps(B, C, pre=False, post=True)
                for f, g in pick([(f, g) for f in fs for g in gs]):
                    rep.count("composable-pairs")
                    gf = compose(f, g)
                    nf, ng, ngf = flags.is_nepi(f), flags.is_nepi(g), flags.is_nepi(gf)
                    tf, tg, tgf = flags.is_tker(f), flags.is_tker(g), flags.is_tker(gf)
                    if nf and ng and not ngf:
                        rep.fail("normal-epis-compose", "composite of normal epis is not a normal epi", f=f, g=g)
                    if tf and tg and not tgf:
                        rep.fail("trivial-kernels-compose", "composite of trivial-kernel maps", f=f, g=g)
                    if ngf and nf and not ng:
                        rep.fail("cancel-normal-epi", "g . f and f normal epis but g is not", f=f, g=g)
                    if tgf and tg and not tf:
                        rep.fail("cancel-trivial-kernel", "g . f and g trivial-kernel but f is not", f=f, g=g)


def _check_orthogonality(catalog, rep, flags, pick):
    B = catalog.backend
    reps = {(X, Y): catalog.orbit_reps(X, Y) for X in catalog.objects for Y in catalog.objects}
    es = [e for hs in reps.values() for e in hs if flags.is_nepi(e)]
    ms = [m for hs in reps.values() for m in hs if flags.is_tker(m)]
    for e in es:
        for m in ms:
            for top in pick(catalog.homs(e.dom, m.dom)):
                mt = tuple(m.map[v] for v in top.map)
                if is_surjective(e):
                    bt = induced_map(e, Mor(e.dom, m.cod, mt))
                    if bt is None or not B.is_morphism(e.cod, m.cod, bt):
                        continue
                    bottoms = [Mor(e.cod, m.cod, bt)]
                else:
                    bottoms = [b for b in catalog.homs(e.cod, m.cod) if tuple(b.map[y] for y in e.map) == mt]
                for bottom in bottoms:
                    rep.count("lifting-squares")
                    try:
                        lift_diagonal(e, m, top, bottom)
                    except LiftFailure as exc:
                        rep.fail("orthogonality", str(exc), e=e, m=m, top=top, bottom=bottom)


# --------------------------------------------------------------------------
# stability


def _normal_monos_into(catalog, C, flags_cache):
    out = []
    for D in catalog.objects:
        for f in catalog.orbit_reps(D, C, pre=True, post=False):
            key = f
            v = flags_cache.get(key)
            if v is None:
                v = flags_cache[key] = is_normal_mono(f)
            if v:
                out.append(f)
    return out


def check_pullback_stability(catalog: Catalog, Z: TrivialClass | None = None, along: str = "all",
                             mode="exhaustive", seed=None, samples=None, flags: _Flags | None = None) -> LawReport:
    """Pull every normal epi back along every map (or normal mono / mono) into its codomain."""
    if along not in ("all", "normal_monos", "monos"):
        raise ValueError(f"unknown restriction {along!r}")
    rep = LawReport(f"stability[{along}]", mode=_mode_name(mode, seed))
    pick = _sampler(mode, seed, samples)
    flags = flags or _Flags()
    B = catalog.backend
    nm_cache: dict = {}
    for g in _maps(catalog, pick):
        if not flags.is_nepi(g):
            continue
        C = g.cod
        if along == "normal_monos":
            fs = _normal_monos_into(catalog, C, nm_cache)
        else:
            fs = [f for D in catalog.objects for f in catalog.orbit_reps(D, C, pre=True, post=False)]
            if along == "monos":
                fs = [f for f in fs if is_mono(f)]
        for f in pick(fs):
            rep.cases += 1
            P, to_d, _ = B.pullback(f, g)
            if not is_normal_epi(to_d):
                rep.fail("pullback-not-normal-epi", "pullback of a normal epi is not a normal epi",
                         g=g, along=f, pulled_back=to_d)
    return rep


# --------------------------------------------------------------------------
# pullback lemmas


def check_pb_square_is_pushout(sq: Square, catalog: Catalog) -> LawReport:
    """Square ``top=q``, ``left=g``, ``right=f``, ``bottom=p``: a pullback with p regular epi, g normal epi, q epi."""
    rep = LawReport("pb-square-is-pushout")
    reasons = []
    if not is_pullback(sq):
        reasons.append("square is not a pullback")
    if not _regular_or_none(sq.bottom):
        reasons.append("p is not (known to be) a regular epi")
    if not is_normal_epi(sq.left):
        reasons.append("g is not a normal epi")
    if not _is_epi(sq.top, catalog):
        reasons.append("q is not an epi")
    if reasons:
        rep.verdict = "unsupported"
        rep.notes.extend(reasons)
        return rep
    rep.cases = 1
    ok, n = is_pushout(sq, catalog)
    rep.count("cocones", n)
    rep.notes.append("bounded verification against the catalog")
    if not ok:
        rep.fail("not-a-pushout", "pullback square fails the pushout property", top=sq.top, left=sq.left,
                 right=sq.right, bottom=sq.bottom)
    return rep


def _is_epi(f, catalog):
    from .core import is_epi
    return is_epi(f, catalog)


def suite_pb_pushout(catalog: Catalog, mode="exhaustive", seed=None, samples=None, flags=None) -> LawReport:
    """Pull back each regular epi ``p`` along maps ``f`` into its codomain and test the pushout property."""
    rep = LawReport("pb-square-is-pushout", mode=_mode_name(mode, seed))
    rep.notes.append("bounded verification against the catalog")
    pick = _sampler(mode, seed, samples)
    flags = flags or _Flags()
    B = catalog.backend
    for p in _maps(catalog, pick):
        if not flags.is_nepi(p):
            continue
        regular = _regular_or_none(p)
        if regular is None:
            rep.count("regularity-undecidable")
        if not regular:
            continue
        D = p.cod
        for X in catalog.objects:
            for f in pick(catalog.orbit_reps(X, D, pre=True, post=False)):
                P, pf, pp = B.pullback(f, p)
                sq = Square(pf, pp, f, p)
                if not flags.is_nepi(pp) or not _is_epi(pf, catalog):
                    rep.count("hypotheses-unmet")
                    continue
                rep.cases += 1
                ok, n = is_pushout(sq, catalog)
                rep.count("cocones", n)
                if not ok:
                    rep.fail("not-a-pushout", "pullback square fails the pushout property",
                             top=pf, left=pp, right=f, bottom=p)
    return rep


def check_cancellation(left: Square, right: Square, catalog: Catalog | None = None) -> LawReport:
    """``left = (f, a, b, f')`` and ``right = (g, b, c, g')``; outer rectangle and left square pullbacks, f' normal epi."""
    rep = LawReport("pullback-cancellation")
    if left.right != right.left:
        raise CompositionError("squares do not share the middle vertical")
    reasons = []
    if not is_pullback(left):
        reasons.append("left square is not a pullback")
    outer = Square(compose(left.top, right.top), left.left, right.right, compose(left.bottom, right.bottom))
    if not is_pullback(outer):
        reasons.append("outer rectangle is not a pullback")
    if not is_normal_epi(left.bottom):
        reasons.append("f' is not a normal epi")
    elif not _normal_epi_gate(left.bottom):
        reasons.append("f' is not (known to be) a regular epi")
    if reasons:
        rep.verdict = "unsupported"
        rep.notes.extend(reasons)
        return rep
    rep.cases = 1
    if not is_pullback(right):
        rep.fail("right-square-not-pullback", "", f=left.top, g=right.top, a=left.left, b=right.left,
                 c=right.right, f_=left.bottom, g_=right.bottom)
    return rep


def suite_cancellation(catalog: Catalog, mode="exhaustive", seed=None, samples=None, flags=None,
                       prefilter: bool = True) -> LawReport:
    """Instances built from catalog data: f' normal epi, g', c, and a commuting right square given by u: B -> B' x_C' C.

    The right square is a pullback exactly when u is an iso, so only non-iso u are interesting. With
    ``prefilter`` the outer rectangle is first compared at the level of carriers: by cardinality, and for
    surjective f' by bijectivity of u, which is what the outer pullback property says on elements.
    """
    rep = LawReport("pullback-cancellation", mode=_mode_name(mode, seed))
    pick = _sampler(mode, seed, samples)
    flags = flags or _Flags()
    Bk = catalog.backend
    injective: dict = {}
    pullbacks: dict = {}
    for fp in _maps(catalog, pick):
        if not flags.is_nepi(fp):
            continue
        gate = _normal_epi_gate(fp)
        if gate is None:
            rep.count("regularity-undecidable")
        if not gate:
            continue
        if is_iso(fp):
            rep.count("f-iso")
            continue
        Bp = fp.cod
        surjective = is_surjective(fp)
        fibre = [0] * Bp.size
        for v in fp.map:
            fibre[v] += 1
        for Cp in catalog.objects:
            for gp in pick(catalog.orbit_reps(Bp, Cp, pre=False, post=True)):
                outer_bottom = compose(fp, gp)
                for C in catalog.objects:
                    for c in pick(catalog.orbit_reps(C, Cp, pre=True, post=False)):
                        if (gp, c) not in pullbacks:
                            pullbacks[(gp, c)] = Bk.pullback(gp, c)
                        P, to_bp, to_c = pullbacks[(gp, c)]
                        outer_pb = Bk.pullback(c, outer_bottom)
                        target = outer_pb[0].size
                        for Bo in catalog.objects:
                            # for surjective f' the outer rectangle is a pullback on carriers only if u is bijective
                            if prefilter and surjective and Bo.size != P.size:
                                continue
                            if prefilter and surjective:
                                key = (Bo, P)
                                if key not in injective:
                                    homs = catalog.homs(Bo, P)
                                    injective[key] = ([u for u in homs if is_injective(u)], len(homs))
                                us, total = injective[key]
                                rep.cases += total - len(us)
                                rep.count("outer-not-pullback", total - len(us))
                                us = pick(us)
                            else:
                                us = pick(catalog.homs(Bo, P))
                            for u in us:
                                rep.cases += 1
                                if is_iso(u):
                                    # both squares are pullbacks, hence so is the outer rectangle
                                    rep.count("right-square-pullback")
                                    rep.count("hypotheses-met")
                                    continue
                                b, g = compose(u, to_bp), compose(u, to_c)
                                if prefilter and sum(fibre[v] for v in b.map) != target:
                                    rep.count("outer-not-pullback")
                                    continue
                                A, pa, pb = Bk.pullback(fp, b)
                                cmp = Bk.pairing(*outer_pb, compose(pb, g), pa)
                                if cmp is None or not is_iso(cmp):
                                    rep.count("outer-not-pullback")
                                    continue
                                rep.count("hypotheses-met")
                                if not is_pullback(Square(g, b, c, gp)):
                                    rep.fail("right-square-not-pullback", "outer and left squares are pullbacks",
                                             f_=fp, g_=gp, b=b, c=c, g=g)
    return rep


def check_barr_kock(f: Mor, g: Mor, v: Mor, w: Mor, catalog: Catalog | None = None) -> LawReport:
    """Top row the kernel pair of ``f``, bottom row that of ``g``; verticals ``v: dom f -> dom g``, ``w``."""
    rep = LawReport("barr-kock")
    if not is_normal_epi(f):
        rep.verdict = "unsupported"
        rep.notes.append("f is not a normal epi")
        return rep
    if not _normal_epi_gate(f):
        rep.verdict = "unsupported"
        rep.notes.append("f is not (known to be) a regular epi (hypothesis gate)")
        return rep
    if compose(f, w).map != compose(v, g).map:
        raise CompositionError("right square does not commute")
    _barr_kock_case(f, g, v, w, rep)
    return rep


def _barr_kock_case(f, g, v, w, rep):
    B = backend_of(f.dom)
    R, r0, r1 = B.pullback(f, f)
    S, s0, s1 = B.pullback(g, g)
    u = B.pairing(S, s0, s1, compose(r0, v), compose(r1, v))
    if u is None:
        raise BackendBug("kernel pairs admit no induced map")
    left0 = Square(r0, u, v, s0)
    left1 = Square(r1, u, v, s1)
    if not (is_pullback(left0) or is_pullback(left1)):
        rep.count("left-squares-not-pullbacks")
        return
    rep.cases += 1
    if not is_pullback(Square(f, v, w, g)):
        rep.fail("right-square-not-pullback", "", f=f, g=g, v=v, w=w)


def suite_barr_kock(catalog: Catalog, mode="exhaustive", seed=None, samples=None, flags=None) -> LawReport:
    rep = LawReport("barr-kock", mode=_mode_name(mode, seed))
    pick = _sampler(mode, seed, samples)
    flags = flags or _Flags()
    for f in _maps(catalog, pick):
        if not flags.is_nepi(f):
            continue
        gate = _normal_epi_gate(f)
        if not gate:
            rep.count("not-regular-epi" if gate is False else "regularity-undecidable")
            continue
        for X in catalog.objects:
            for v in pick(catalog.homs(f.dom, X)):
                for Y in catalog.objects:
                    for g in catalog.orbit_reps(X, Y, pre=False, post=True):
                        gv = Mor(f.dom, Y, tuple(g.map[x] for x in v.map))
                        t = induced_map(f, gv)
                        if t is None or not catalog.backend.is_morphism(f.cod, Y, t):
                            continue
                        _barr_kock_case(f, g, v, Mor(f.cod, Y, t), rep)
    return rep


# --------------------------------------------------------------------------
# exact sequences


@dataclass
class ExactnessResult:
    exact: bool
    f_is_kernel: bool
    g_is_cokernel: bool
    square_pullback: bool | None = None
    square_pushout: bool | None = None
    reflection_ok: bool | None = None


def exactness(f: Mor, g: Mor, catalog: Catalog | None = None) -> ExactnessResult:
    if f.cod != g.dom:
        raise CompositionError("sequence maps are not composable")
    kr = kernel(g)
    t = _comparison_into(f, kr.k)
    f_ker = t is not None and is_iso(t)
    g_coker = False
    try:
        cr = cokernel(f)
        table = induced_map(cr.q, g)
        B = backend_of(f.dom)
        g_coker = table is not None and B.is_morphism(cr.Q, g.cod, table) and is_iso(Mor(cr.Q, g.cod, table))
    except Unsupported:
        pass
    res = ExactnessResult(f_ker and g_coker, f_ker, g_coker)
    if res.exact:
        c = _counit(g.cod)
        u = trivial_factorisation(compose(f, g))
        sq = Square(f, u, g, c)
        res.square_pullback = is_pullback(sq)
        if catalog is not None:
            res.square_pushout = is_pushout(sq, catalog)[0]
        refl = cokernel(identity(f.dom))
        tt = induced_map(refl.q, u)
        res.reflection_ok = (tt is not None and backend_of(u.dom).is_morphism(refl.Q, u.cod, tt)
                             and is_iso(Mor(refl.Q, u.cod, tt)))
    return res


def check_exact_sequence(f: Mor, g: Mor, Z: TrivialClass | None = None, catalog: Catalog | None = None) -> LawReport:
    """Exactness of ``f`` then ``g``; for exact rows also the trivial square of ``g . f``."""
    rep = LawReport("exact-sequence", cases=1)
    r = exactness(f, g, catalog)
    rep.stats.update({"f_is_kernel": int(r.f_is_kernel), "g_is_cokernel": int(r.g_is_cokernel)})
    if not r.exact:
        rep.fail("not-exact", f"f is kernel: {r.f_is_kernel}; g is cokernel: {r.g_is_cokernel}", f=f, g=g)
        return rep
    if not r.square_pullback:
        rep.fail("square-not-pullback", "trivial square of an exact sequence is not a pullback", f=f, g=g)
    if r.square_pushout is False:
        rep.fail("square-not-pushout", "trivial square of an exact sequence is not a pushout", f=f, g=g)
    if not r.reflection_ok:
        rep.fail("corner-not-reflection", "lift of g . f is not the reflection of the domain", f=f, g=g)
    return rep


def product_map(f: Mor, g: Mor) -> Mor:
    B = backend_of(f.dom)
    P, p1, p2 = B.product(f.dom, g.dom)
    Q, q1, q2 = B.product(f.cod, g.cod)
    t = B.pairing(Q, q1, q2, compose(p1, f), compose(p2, g))
    if t is None:
        raise BackendBug("product of maps has no pairing")
    return t


def check_product_exactness(E: tuple, E2: tuple, Z: TrivialClass | None = None) -> LawReport:
    (f, g), (f2, g2) = E, E2
    rep = LawReport("product-exactness", cases=1)
    pf, pg = product_map(f, f2), product_map(g, g2)
    if not is_normal_epi(pg):
        rep.fail("product-not-normal-epi", "", g=g, g2=g2)
    if not exactness(pf, pg).exact:
        rep.fail("product-not-exact", "", f=f, g=g, f2=f2, g2=g2)
    return rep


def pullback_sequence(E: tuple, c: Mor):
    f, g = E
    B = backend_of(f.dom)
    Bp, pb, pg = B.pullback(g, c)  # pb: B' -> B, pg: B' -> C'
    Ap, pa, pf = B.pullback(f, pb)  # pa: A' -> A, pf: A' -> B'
    return pf, pg, pa, pb


def check_pullback_exactness(E: tuple, c: Mor, Z: TrivialClass | None = None) -> LawReport:
    """The pulled-back sequence is exact exactly when ``c`` has a trivial kernel."""
    rep = LawReport("pullback-exactness", cases=1)
    fp, gp, _, _ = pullback_sequence(E, c)
    ex = exactness(fp, gp).exact
    tk = has_trivial_kernel(c)
    rep.stats.update({"exact": int(ex), "c_trivial_kernel": int(tk)})
    if ex != tk:
        rep.fail("iff-violated", f"pulled-back exact={ex}, c has trivial kernel={tk}", f=E[0], g=E[1], c=c)
    return rep


def suite_exactness(catalog: Catalog, mode="exhaustive", seed=None, samples=None, flags=None,
                    max_product_size: int = 32) -> LawReport:
    """Kernel/cokernel sequences of catalog normal epis: exactness, products, and pullbacks along every map."""
    rep = LawReport("exact-sequences", mode=_mode_name(mode, seed))
    pick = _sampler(mode, seed, samples)
    flags = flags or _Flags()
    seqs = []
    for g in _maps(catalog, pick):
        if not flags.is_nepi(g):
            continue
        f = kernel(g).k
        rep.cases += 1
        r = check_exact_sequence(f, g, catalog=catalog)
        if not r.passed:
            rep.fail("kernel-sequence", "", f=f, g=g)
        seqs.append((f, g))
    rep.count("sequences", len(seqs))
    for i, E in enumerate(seqs):
        for E2 in seqs[i:]:
            if E[1].dom.size * E2[1].dom.size > max_product_size:
                rep.count("products-skipped-size")
                continue
            rep.count("products")
            r = check_product_exactness(E, E2)
            if not r.passed:
                rep.fail("product-exactness", "", f=E[0], g=E[1], f2=E2[0], g2=E2[1])
    both = {True: 0, False: 0}
    for E in seqs:
        C = E[1].cod
        for X in catalog.objects:
            for c in pick(catalog.orbit_reps(X, C, pre=True, post=False)):
                rep.count("pullbacks")
                r = check_pullback_exactness(E, c)
                both[bool(r.stats["exact"])] += 1
                if not r.passed:
                    rep.fail("pullback-exactness", r.witnesses[0]["detail"], f=E[0], g=E[1], c=c)
    rep.count("pullbacks-exact", both[True])
    rep.count("pullbacks-not-exact", both[False])
    return rep


# --------------------------------------------------------------------------
# Noether


@dataclass
class NoetherReport:
    m: Mor
    n: Mor
    j: Mor
    p: Mor
    q: Mor
    r: Mor
    phi: Mor
    psi: Mor
    phi_is_normal_mono: bool
    comparison: Mor | None
    comparison_is_iso: bool
    squares_commute: bool

    @property
    def verdict(self):
        return self.phi_is_normal_mono and self.comparison_is_iso and self.squares_commute

    def to_json(self):
        out = {k: mor_to_json(getattr(self, k)) for k in ("m", "n", "j", "p", "q", "r", "phi", "psi")}
        out["comparison"] = mor_to_json(self.comparison) if self.comparison is not None else None
        out.update(phi_is_normal_mono=self.phi_is_normal_mono, comparison_is_iso=self.comparison_is_iso,
                   squares_commute=self.squares_commute)
        return out


def factor_through_mono(n: Mor, m: Mor) -> Mor:
    t = _comparison_into(n, m)
    if t is None:
        raise CompositionError("n does not factor through m")
    return t


def noether_third(m: Mor, n: Mor, Z: TrivialClass | None = None) -> NoetherReport:
    """For normal monos ``n: N -> A`` factoring as ``m . j`` with ``m: M -> A``.

    Builds ``p = coker m``, ``q = coker n``, ``r = coker j``, the induced
    ``phi: M/N -> A/N`` and ``psi: A/N -> A/M``, and the comparison
    ``(A/N)/(M/N) -> A/M``.
    """
    if m.cod != n.cod:
        raise CompositionError("m and n must share a codomain")
    j = factor_through_mono(n, m)
    B = backend_of(m.dom)
    p, q, r = cokernel(m).q, cokernel(n).q, cokernel(j).q
    qm = compose(m, q)
    phi_t = induced_map(r, qm)
    psi_t = induced_map(q, p)
    if phi_t is None or psi_t is None or not B.is_morphism(r.cod, q.cod, phi_t) or not B.is_morphism(q.cod, p.cod, psi_t):
        raise BackendBug("induced maps of the Noether diagram do not exist")
    phi, psi = Mor(r.cod, q.cod, phi_t), Mor(q.cod, p.cod, psi_t)
    commute = (compose(j, m).map == n.map and compose(r, phi).map == qm.map
               and compose(q, psi).map == p.map)
    phi_nm = is_normal_mono(phi)
    s = cokernel(phi).q
    t = induced_map(s, psi)
    comp = None
    comp_iso = False
    if t is not None and B.is_morphism(s.cod, p.cod, t):
        comp = Mor(s.cod, p.cod, t)
        comp_iso = is_iso(comp)
    return NoetherReport(m, n, j, p, q, r, phi, psi, phi_nm, comp, comp_iso, commute)


def normal_subobjects(A: Obj) -> list[Mor]:
    B = backend_of(A)
    return [s for s in B.subobjects(A) if is_normal_mono(s)]


def suite_noether(catalog: Catalog, mode="exhaustive", seed=None, samples=None, flags=None) -> LawReport:
    rep = LawReport("noether-third", mode=_mode_name(mode, seed))
    pick = _sampler(mode, seed, samples)
    for A in catalog.objects:
        subs = normal_subobjects(A)
        for m in subs:
            for n in pick(subs):
                if _comparison_into(n, m) is None:
                    continue
                rep.cases += 1
                nr = noether_third(m, n)
                if not nr.verdict:
                    rep.fail("noether", f"phi normal mono={nr.phi_is_normal_mono}, comparison iso={nr.comparison_is_iso}",
                             m=m, n=n)
    return rep


# --------------------------------------------------------------------------
# further invariants


def cross_validate(catalog: Catalog, mode="exhaustive", seed=None, samples=None, flags=None) -> LawReport:
    """``is_normal_epi`` against the backend's characterisation on every catalog map."""
    rep = LawReport("normal-epi-characterisation", mode=_mode_name(mode, seed))
    pick = _sampler(mode, seed, samples)
    flags = flags or _Flags()
    B = catalog.backend
    for f in pick(list(catalog.morphisms())):
        c = B.normal_epi_char(f)
        if c is None:
            rep.verdict = "unsupported"
            rep.notes.append(f"{B.tag} has no characterisation")
            return rep
        rep.cases += 1
        e = flags.is_nepi(f)
        rep.count("normal-epis" if e else "not-normal-epis")
        if c != e:
            rep.fail("disagreement", f"engine={e}, characterisation={c}", f=f)
    return rep


def check_trivial_kernel_cancellation(catalog: Catalog, mode="exhaustive", seed=None, samples=None,
                                      flags=None) -> LawReport:
    """Trivial kernel iff every ``g`` with ``f . g`` trivial is itself trivial (over catalog maps g)."""
    rep = LawReport("trivial-kernel-cancellation", mode=_mode_name(mode, seed))
    pick = _sampler(mode, seed, samples)
    flags = flags or _Flags()
    for f in _maps(catalog, pick):
        rep.cases += 1
        cancels = True
        for W in catalog.objects:
            for g in catalog.homs(W, f.dom):
                if is_trivial_map(compose(g, f)) and not is_trivial_map(g):
                    cancels = False
                    break
            if not cancels:
                break
        tk = flags.is_tker(f)
        if tk and not cancels:
            rep.fail("trivial-kernel-not-cancelling", "", f=f)
        if not tk and cancels:
            rep.count("not-detected-by-catalog")
    if rep.stats.get("not-detected-by-catalog"):
        rep.notes.append("some non-trivial kernels are not detected by maps from catalog objects "
                         "(the kernel object itself lies outside the catalog)")
    return rep


def check_kernel_formulas(catalog: Catalog, mode="exhaustive", seed=None, samples=None, flags=None) -> LawReport:
    """Kernel as pullback agrees with preimage-of-basepoint (pointed) or ``K_f ∧ rho`` (relations)."""
    rep = LawReport("kernel-formula", mode=_mode_name(mode, seed))
    B = catalog.backend
    pick = _sampler(mode, seed, samples)
    for f in pick(list(catalog.morphisms())):
        kr = kernel(f)
        rep.cases += 1
        if not kr.square.commutes() or not is_mono(kr.k) or not is_trivial_map(compose(kr.k, f)):
            rep.fail("kernel-invalid", "", f=f)
        if hasattr(B, "kernel_formula"):
            if kr.K != B.kernel_formula(f) or kr.k.map != tuple(range(f.dom.size)):
                rep.fail("formula-mismatch", "", f=f)
        elif B.pointed:
            base = _base_of(f.cod)
            pre = tuple(x for x in range(f.dom.size) if f.map[x] == base)
            if kr.k.map != pre:
                rep.fail("formula-mismatch", "", f=f)
    return rep


def _base_of(X):
    return X.get("base", X.get("unit"))


def check_counits(catalog: Catalog, **_) -> LawReport:
    rep = LawReport("coreflection-counits")
    B = catalog.backend
    for X in catalog.objects:
        rep.cases += 1
        c = B.coreflection(X)
        if not B.is_trivial(c.dom) or not is_mono(c):
            rep.fail("counit", "", counit=c)
            continue
        for T in catalog.objects:
            if not B.is_trivial(T):
                continue
            for t in catalog.homs(T, X):
                if _comparison_into(t, c) is None:
                    rep.fail("counit-not-universal", "", counit=c, t=t)
    return rep


LAWS: dict[str, Callable] = {
    "fs-axioms": check_fs_axioms,
    "stability": lambda cat, **kw: check_pullback_stability(cat, along="all", **kw),
    "stability-normal-monos": lambda cat, **kw: check_pullback_stability(cat, along="normal_monos", **kw),
    "cross-validation": cross_validate,
    "pb-pushout": suite_pb_pushout,
    "cancellation": suite_cancellation,
    "barr-kock": suite_barr_kock,
    "exactness": suite_exactness,
    "noether": suite_noether,
    "kernel-formula": check_kernel_formulas,
    "trivial-kernel-cancellation": check_trivial_kernel_cancellation,
    "counits": check_counits,
}

FULL_SUITE = ("fs-axioms", "stability", "cross-validation")


def run_laws(catalog: Catalog, laws=FULL_SUITE, **opts) -> list[LawReport]:
    flags = _Flags()
    out = []
    for name in laws:
        fn = LAWS[name]
        kw = dict(opts)
        if name not in ("counits",):
            kw["flags"] = flags
        out.append(fn(catalog, **kw))
    return out


def recheck_witness(witness: dict) -> bool:
    """Re-run the predicate behind a witness; True when the violation reproduces."""
    a = {k: mor_from_json(v) for k, v in witness["arrows"].items()}
    case = witness["case"]
    if case == "factorisation":
        fa = factorise(a["f"])
        return not (fa.e_is_normal_epi and fa.m_has_trivial_kernel)
    if case == "pullback-not-normal-epi":
        P, to_d, _ = backend_of(a["g"]).pullback(a["along"], a["g"])
        return not is_normal_epi(to_d)
    if case == "disagreement":
        f = a["f"]
        return backend_of(f).normal_epi_char(f) != is_normal_epi(f)
    if case == "orthogonality":
        try:
            lift_diagonal(a["e"], a["m"], a["top"], a["bottom"])
            return False
        except LiftFailure:
            return True
    if case == "both-classes-implies-iso":
        f = a["f"]
        return is_normal_epi(f) and has_trivial_kernel(f) and not is_iso(f)
    if case == "iso-in-both-classes":
        f = a["f"]
        return is_iso(f) and not (is_normal_epi(f) and has_trivial_kernel(f))
    if case == "not-exact":
        return not exactness(a["f"], a["g"]).exact
    raise ValueError(f"no re-check for witness case {case!r}")


def report_json(reports: list[LawReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=False)
