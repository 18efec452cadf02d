"""Backends built from other backends: slices over a fixed object and diagram categories over a finite poset."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import product as cartesian

from .core import (Backend, Catalog, CongruenceError, InvalidObject, Mor, Obj, QuotientResult, Unsupported,
                   _REGISTRY, dumps, induced_map, obj_from_json, obj_to_json, register_backend,
                   register_loader)


def _digest(X: Obj) -> str:
    return hashlib.sha1(dumps(X).encode()).hexdigest()[:10]


# --------------------------------------------------------------------------
# slices


class SliceBackend(Backend):
    """Objects ``(X, x: X -> C)``; maps commute with the structure maps."""

    def __init__(self, base: Backend, C: Obj):
        self.base, self.C = base, C
        self.tag = f"slice:{base.tag}:{_digest(C)}"
        self.pointed = False
        self.mono_injective = base.mono_injective
        self.epi_surjective = base.epi_surjective

    def obj(self, X: Obj, arrow) -> Obj:
        Y = Obj(self.tag, X.size, {"base": X, "arrow": tuple(arrow), "over": self.C})
        self.validate_object(Y)
        return Y

    def underlying(self, f: Mor) -> Mor:
        return Mor(f.dom["base"], f.cod["base"], f.map)

    def lift(self, f: Mor, X: Obj, Y: Obj) -> Mor:
        return Mor(X, Y, f.map)

    def validate_object(self, X):
        if X["over"] != self.C:
            raise InvalidObject("object lies over another base object")
        self.base.validate_object(X["base"])
        if not self.base.is_morphism(X["base"], self.C, X["arrow"]) or len(X["arrow"]) != X.size:
            raise InvalidObject("structure map is not a morphism into the base object")

    def is_morphism(self, A, B, t):
        if not self.base.is_morphism(A["base"], B["base"], t):
            return False
        y, x = B["arrow"], A["arrow"]
        return all(y[t[a]] == x[a] for a in range(A.size))

    def homs(self, A, B):
        y, x = B["arrow"], A["arrow"]
        for t in self.base.homs(A["base"], B["base"]):
            if all(y[t[a]] == x[a] for a in range(A.size)):
                yield t

    def _wrap(self, X: Obj, arrow) -> Obj:
        return Obj(self.tag, X.size, {"base": X, "arrow": tuple(arrow), "over": self.C})

    def subproduct(self, A, B, pairs):
        P = self.base.subproduct(A["base"], B["base"], pairs)
        return self._wrap(P, [A["arrow"][a] for a, _ in pairs])

    def product(self, A, B):
        x, y = A["arrow"], B["arrow"]
        pairs = [(a, b) for a in range(A.size) for b in range(B.size) if x[a] == y[b]]
        P = self.subproduct(A, B, pairs)
        return P, Mor(P, A, tuple(a for a, _ in pairs)), Mor(P, B, tuple(b for _, b in pairs))

    def restrict(self, X, subset):
        subset = sorted(subset)
        return self._wrap(self.base.restrict(X["base"], subset), [X["arrow"][s] for s in subset])

    def relabel(self, X, r):
        arrow = [0] * X.size
        for a in range(X.size):
            arrow[r[a]] = X["arrow"][a]
        return self._wrap(self.base.relabel(X["base"], r), arrow)

    def is_trivial(self, X):
        return self.base.is_trivial(X["base"])

    def coreflection(self, B):
        c = self.base.coreflection(B["base"])
        Z = self._wrap(c.dom, [B["arrow"][v] for v in c.map])
        return Mor(Z, B, c.map)

    def nontrivial_witness(self, K):
        return self.base.nontrivial_witness(K["base"])

    def _over(self, res: QuotientResult, X: Obj) -> QuotientResult:
        arrow = induced_map(Mor(X["base"], res.quotient, res.projection.map), Mor(X["base"], self.C, X["arrow"]))
        if arrow is None or not self.base.is_morphism(res.quotient, self.C, arrow):
            raise Unsupported("the structure map does not factor through the quotient")
        Q = self._wrap(res.quotient, arrow)
        return QuotientResult(Q, Mor(X, Q, res.projection.map), res.class_table, res.congruence, res.info)

    def quotient(self, X, c):
        return self._over(self.base.quotient(X["base"], c), X)

    def coequalizer_seed(self, X, seed):
        return self._over(self.base.coequalizer_seed(X["base"], seed), X)

    def cokernel(self, k):
        """Base cokernel, with structure map induced from the codomain's (exists for kernels)."""
        res = self.base.cokernel(self.underlying(k))
        return self._over(res, k.cod)

    def subobjects(self, A):
        out = []
        for s in self.base.subobjects(A["base"]):
            X = self._wrap(s.dom, [A["arrow"][v] for v in s.map])
            out.append(Mor(X, A, s.map))
        return out

    def normal_epi_char(self, f):
        from .engine import is_normal_epi
        return is_normal_epi(self.underlying(f))

    def structure_to_json(self, X):
        return {"base": obj_to_json(X["base"]), "arrow": list(X["arrow"]), "over": obj_to_json(self.C)}

    def structure_from_json(self, size, structure):
        if set(structure) != {"base", "arrow", "over"}:
            raise InvalidObject("slice object needs exactly base, arrow, over")
        return self._wrap(obj_from_json(structure["base"]), structure["arrow"])

    def catalog(self, base_catalog: Catalog | None = None, cap: int = 40, **caps):
        base_catalog = base_catalog or self.base.catalog(**caps)
        objs = []
        for X in base_catalog.objects:
            for x in base_catalog.orbit_reps(X, self.C, pre=True, post=False):
                objs.append(self._wrap(X, x.map))
                if len(objs) >= cap:
                    return Catalog(self, objs, f"{self.tag} (cap {cap})")
        return Catalog(self, objs, f"{self.tag}")


def slice_backend(base: Backend, C: Obj) -> SliceBackend:
    return register_backend(SliceBackend(base, C))


def _load_slice(tag, size, structure):
    over = obj_from_json(structure["over"])
    from .core import backend_of
    return slice_backend(backend_of(over), over)


# --------------------------------------------------------------------------
# diagram categories over a finite poset


@dataclass(frozen=True)
class Shape:
    """A finite poset presented by generating arrows ``(i, j)``; all parallel paths commute."""

    name: str
    size: int
    arrows: tuple = ()

    def paths(self):
        """Pairs of distinct generator paths with common ends, as lists of generator indices."""
        out: dict = {}

        def walk(start, node, path):
            out.setdefault((start, node), []).append(tuple(path))
            for g, (i, j) in enumerate(self.arrows):
                if i == node:
                    walk(start, j, path + [g])

        for s in range(self.size):
            walk(s, s, [])
        return out


SINGLE = Shape("single", 1)
ARROW = Shape("arrow", 2, ((0, 1),))
SHAPES = {"single": SINGLE, "arrow": ARROW}


class FunctorBackend(Backend):
    """Diagrams of a fixed shape in ``base``; the carrier is the disjoint union of the components."""

    def __init__(self, base: Backend, shape: Shape):
        self.base, self.shape = base, shape
        self.tag = f"fun:{shape.name}:{base.tag}"
        self.pointed = base.pointed and shape.size == 1
        self.mono_injective = base.mono_injective
        self.epi_surjective = base.epi_surjective

    # -- helpers
    def offsets(self, X):
        offs, o = [], 0
        for C in X["components"]:
            offs.append(o)
            o += C.size
        return offs

    def component(self, f: Mor, i: int) -> Mor:
        """Evaluation at shape object ``i``."""
        A, B = f.dom["components"][i], f.cod["components"][i]
        oa, ob = self.offsets(f.dom)[i], self.offsets(f.cod)[i]
        return Mor(A, B, tuple(f.map[oa + a] - ob for a in range(A.size)))

    def _split(self, X, t):
        out = []
        for i, C in enumerate(X["components"]):
            o = self.offsets(X)[i]
            out.append(tuple(t[o:o + C.size]))
        return out

    def diagram(self, components, arrows) -> Obj:
        components = tuple(components)
        X = Obj(self.tag, sum(C.size for C in components),
                {"components": components, "arrows": tuple(tuple(a) for a in arrows)})
        self.validate_object(X)
        return X

    def _wrap(self, components, arrows) -> Obj:
        components = tuple(components)
        return Obj(self.tag, sum(C.size for C in components),
                   {"components": components, "arrows": tuple(tuple(a) for a in arrows)})

    def mor_from_components(self, A, B, comps) -> Mor:
        ob = self.offsets(B)
        table = []
        for i, t in enumerate(comps):
            table.extend(v + ob[i] for v in t)
        return Mor(A, B, tuple(table))

    # -- contract
    def validate_object(self, X):
        comps, arrows = X["components"], X["arrows"]
        if len(comps) != self.shape.size or len(arrows) != len(self.shape.arrows):
            raise InvalidObject("diagram does not match the shape")
        for C in comps:
            self.base.validate_object(C)
        for (i, j), a in zip(self.shape.arrows, arrows):
            if len(a) != comps[i].size or not self.base.is_morphism(comps[i], comps[j], a):
                raise InvalidObject("diagram arrow is not a morphism")
        for (s, e), paths in self.shape.paths().items():
            results = set()
            for p in paths:
                t = tuple(range(comps[s].size))
                for g in p:
                    t = tuple(arrows[g][v] for v in t)
                results.add(t)
            if len(results) > 1:
                raise InvalidObject("diagram is not functorial (paths disagree)")

    def is_morphism(self, A, B, t):
        parts = self._split(A, t)
        ob = self.offsets(B)
        local = []
        for i, p in enumerate(parts):
            C = B["components"][i]
            q = tuple(v - ob[i] for v in p)
            if any(not 0 <= v < C.size for v in q):
                return False
            if not self.base.is_morphism(A["components"][i], C, q):
                return False
            local.append(q)
        return self._natural(A, B, local)

    def _natural(self, A, B, local):
        for g, (i, j) in enumerate(self.shape.arrows):
            a, b = A["arrows"][g], B["arrows"][g]
            if any(local[j][a[x]] != b[local[i][x]] for x in range(len(a))):
                return False
        return True

    def homs(self, A, B):
        choices = [list(self.base.homs(A["components"][i], B["components"][i])) for i in range(self.shape.size)]
        for local in cartesian(*choices):
            if self._natural(A, B, local):
                yield self.mor_from_components(A, B, local).map

    def _component_pairs(self, A, B, pairs):
        oa, ob = self.offsets(A), self.offsets(B)
        per = [[] for _ in range(self.shape.size)]
        for a, b in pairs:
            i = max(k for k in range(self.shape.size) if oa[k] <= a)
            per[i].append((a - oa[i], b - ob[i]))
        return per

    def subproduct(self, A, B, pairs):
        per = self._component_pairs(A, B, pairs)
        comps = [self.base.subproduct(A["components"][i], B["components"][i], per[i]) for i in range(self.shape.size)]
        arrows = []
        for g, (i, j) in enumerate(self.shape.arrows):
            idx = {p: n for n, p in enumerate(per[j])}
            a, b = A["arrows"][g], B["arrows"][g]
            arrows.append(tuple(idx[(a[x], b[y])] for x, y in per[i]))
        return self._wrap(comps, arrows)

    def product(self, A, B):
        oa, ob = self.offsets(A), self.offsets(B)
        pairs = [(oa[i] + a, ob[i] + b) for i in range(self.shape.size)
                 for a in range(A["components"][i].size) for b in range(B["components"][i].size)]
        P = self.subproduct(A, B, pairs)
        return P, Mor(P, A, tuple(a for a, _ in pairs)), Mor(P, B, tuple(b for _, b in pairs))

    def restrict(self, X, subset):
        subset = sorted(subset)
        offs = self.offsets(X)
        per = [[] for _ in range(self.shape.size)]
        for s in subset:
            i = max(k for k in range(self.shape.size) if offs[k] <= s)
            per[i].append(s - offs[i])
        comps = [self.base.restrict(X["components"][i], per[i]) for i in range(self.shape.size)]
        arrows = []
        for g, (i, j) in enumerate(self.shape.arrows):
            pos = {v: n for n, v in enumerate(per[j])}
            arrows.append(tuple(pos[X["arrows"][g][v]] for v in per[i]))
        return self._wrap(comps, arrows)

    def relabel(self, X, r):
        offs = self.offsets(X)
        comps, local = [], []
        for i, C in enumerate(X["components"]):
            rl = [r[offs[i] + v] - offs[i] for v in range(C.size)]
            if sorted(rl) != list(range(C.size)):
                raise InvalidObject("relabelling mixes components")
            local.append(rl)
            comps.append(self.base.relabel(C, rl))
        arrows = []
        for g, (i, j) in enumerate(self.shape.arrows):
            a = X["arrows"][g]
            new = [0] * len(a)
            for v in range(len(a)):
                new[local[i][v]] = local[j][a[v]]
            arrows.append(tuple(new))
        return self._wrap(comps, arrows)

    def is_trivial(self, X):
        return all(self.base.is_trivial(C) for C in X["components"])

    def coreflection(self, B):
        counits = [self.base.coreflection(C) for C in B["components"]]
        arrows = []
        for g, (i, j) in enumerate(self.shape.arrows):
            a = B["arrows"][g]
            pos = {v: n for n, v in enumerate(counits[j].map)}
            arrows.append(tuple(pos[a[v]] for v in counits[i].map))
        Z = self._wrap([c.dom for c in counits], arrows)
        return self.mor_from_components(Z, B, [c.map for c in counits])

    def nontrivial_witness(self, K):
        for i, C in enumerate(K["components"]):
            w = self.base.nontrivial_witness(C)
            if w is not None:
                return (i, w)
        return None

    def _assemble(self, X, results) -> QuotientResult:
        comps = [r.quotient for r in results]
        arrows = []
        for g, (i, j) in enumerate(self.shape.arrows):
            qa = Mor(X["components"][i], comps[j],
                     tuple(results[j].projection.map[v] for v in X["arrows"][g]))
            t = induced_map(results[i].projection, qa)
            if t is None or not self.base.is_morphism(comps[i], comps[j], t):
                raise Unsupported("pointwise quotients do not assemble into a diagram")
            arrows.append(t)
        Q = self._wrap(comps, arrows)
        q = self.mor_from_components(X, Q, [r.projection.map for r in results])
        offs = self.offsets(X)
        table = tuple(offs[i] + v for i, r in enumerate(results) for v in r.class_table)
        return QuotientResult(Q, q, table, None, {"components": results})

    def quotient(self, X, c):
        from .closure import Congruence
        offs = self.offsets(X)
        results = []
        for i, C in enumerate(X["components"]):
            o = offs[i]
            pairs = frozenset((a - o, b - o) for a, b in c.pairs if o <= a < o + C.size)
            results.append(self.base.quotient(C, Congruence(C.size, pairs, c.kind)))
        return self._assemble(X, results)

    def coequalizer_seed(self, X, seed):
        offs = self.offsets(X)
        per = [set() for _ in range(self.shape.size)]
        for a, b in seed:
            i = max(k for k in range(self.shape.size) if offs[k] <= a)
            per[i].add((a - offs[i], b - offs[i]))
        # push seeds forward along the diagram so the pointwise quotients are compatible
        changed = True
        while changed:
            changed = False
            for g, (i, j) in enumerate(self.shape.arrows):
                a = X["arrows"][g]
                new = {(a[x], a[y]) for x, y in per[i]} - per[j]
                if new:
                    per[j] |= new
                    changed = True
        results = [self.base.coequalizer_seed(C, sorted(per[i])) for i, C in enumerate(X["components"])]
        return self._assemble(X, results)

    def cokernel(self, k):
        results = [self.base.cokernel(self.component(k, i)) for i in range(self.shape.size)]
        return self._assemble(k.cod, results)

    def normal_epi_char(self, f):
        from .engine import is_normal_epi
        return all(is_normal_epi(self.component(f, i)) for i in range(self.shape.size))

    def structure_to_json(self, X):
        return {"components": [obj_to_json(C) for C in X["components"]],
                "arrows": [list(a) for a in X["arrows"]]}

    def structure_from_json(self, size, structure):
        if set(structure) != {"components", "arrows"}:
            raise InvalidObject("diagram needs exactly components and arrows")
        return self._wrap([obj_from_json(c) for c in structure["components"]], structure["arrows"])

    def subobjects(self, A):
        subs = [self.base.subobjects(C) for C in A["components"]]
        out = []
        for pick in cartesian(*subs):
            arrows = []
            ok = True
            for g, (i, j) in enumerate(self.shape.arrows):
                a = A["arrows"][g]
                pos = {v: n for n, v in enumerate(pick[j].map)}
                try:
                    t = tuple(pos[a[v]] for v in pick[i].map)
                except KeyError:
                    ok = False
                    break
                if not self.base.is_morphism(pick[i].dom, pick[j].dom, t):
                    ok = False
                    break
                arrows.append(t)
            if ok:
                X = self._wrap([s.dom for s in pick], arrows)
                out.append(self.mor_from_components(X, A, [s.map for s in pick]))
        return out

    def catalog(self, base_catalog: Catalog | None = None, cap: int = 40, max_component: int = 4, **caps):
        base_catalog = base_catalog or self.base.catalog(**caps)
        objs = [X for X in base_catalog.objects if X.size <= max_component]
        out = []
        if self.shape.size == 1:
            out = [self._wrap([X], []) for X in objs]
        elif self.shape is ARROW or self.shape.arrows == ARROW.arrows:
            for X in objs:
                for Y in objs:
                    for d in base_catalog.orbit_reps(X, Y):
                        out.append(self._wrap([X, Y], [d.map]))
                        if len(out) >= cap:
                            return Catalog(self, out, f"{self.tag} (cap {cap})")
        else:
            raise Unsupported("catalogs are generated for the single and arrow shapes only")
        return Catalog(self, out[:cap], self.tag)


def functor_backend(base: Backend, shape: Shape | str) -> FunctorBackend:
    if isinstance(shape, str):
        shape = SHAPES[shape]
    return register_backend(FunctorBackend(base, shape))


def _load_functor(tag, size, structure):
    _, shape, base_tag = tag.split(":", 2)
    return functor_backend(_REGISTRY[base_tag], SHAPES[shape])


def check_evaluation(backend: FunctorBackend, catalog: Catalog):
    """Evaluation at each shape object preserves trivial objects, counits, kernels and both classes."""
    from .engine import LawReport, has_trivial_kernel, is_normal_epi, kernel
    rep = LawReport("evaluation-preserves")
    for X in catalog.objects:
        c = backend.coreflection(X)
        for i in range(backend.shape.size):
            if backend.component(c, i).map != backend.base.coreflection(X["components"][i]).map:
                rep.fail("coreflection", f"component {i}", counit=c)
    for f in catalog.morphisms():
        rep.cases += 1
        kr = kernel(f)
        ne, tk = is_normal_epi(f), has_trivial_kernel(f)
        for i in range(backend.shape.size):
            fi = backend.component(f, i)
            ki = kernel(fi)
            if backend.component(kr.k, i).map != ki.k.map or kr.K["components"][i] != ki.K:
                rep.fail("kernel", f"component {i}", f=f)
            if ne and not is_normal_epi(fi):
                rep.fail("normal-epi", f"component {i}", f=f)
            if tk and not has_trivial_kernel(fi):
                rep.fail("trivial-kernel", f"component {i}", f=f)
            if backend.is_trivial(f.dom) and not backend.base.is_trivial(fi.dom):
                rep.fail("trivial-object", f"component {i}", f=f)
    return rep


register_loader("slice:", _load_slice)
register_loader("fun:", _load_functor)
