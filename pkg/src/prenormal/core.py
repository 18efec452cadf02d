"""Finite concrete categories: objects, morphisms, limits and trivial objects.

Every backend stores objects as an ``Obj`` whose carrier is ``range(size)``
plus a tuple of named structure tables, and morphisms as a ``Mor`` holding the
underlying function as a tuple.  Object equality is structural.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as _cartesian
from typing import Callable, Iterable, Iterator


class CategoryError(Exception):
    pass


class CompositionError(CategoryError):
    pass


class InvalidObject(CategoryError):
    pass


class InvalidMorphism(CategoryError):
    pass


class Unsupported(CategoryError):
    pass


class CongruenceError(CategoryError):
    """A relation is not compatible with the structure; ``witness`` names the offending elements."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BackendBug(CategoryError):
    pass


class Obj:
    """A finite structure with carrier ``0..size-1``.

    ``data`` is a tuple of ``(name, value)`` pairs sorted by name; values must
    be hashable (tuples, frozensets, ints, strings or nested ``Obj``).
    """

    __slots__ = ("tag", "size", "data", "_h", "_d")

    def __init__(self, tag: str, size: int, data=()):
        if isinstance(data, dict):
            data = tuple(sorted(data.items()))
        else:
            data = tuple(sorted(data))
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "_h", hash((tag, size, data)))
        object.__setattr__(self, "_d", dict(data))

    def __setattr__(self, name, value):
        raise AttributeError("Obj is immutable")

    def __getitem__(self, key):
        return self._d[key]

    def get(self, key, default=None):
        return self._d.get(key, default)

    @property
    def carrier(self):
        return range(self.size)

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Obj):
            return NotImplemented
        return (self._h == other._h and self.tag == other.tag
                and self.size == other.size and self.data == other.data)

    def __repr__(self):
        return f"Obj({self.tag!r}, size={self.size})"


@dataclass(frozen=True)
class Mor:
    dom: Obj
    cod: Obj
    map: tuple

    def __post_init__(self):
        if not isinstance(self.map, tuple):
            object.__setattr__(self, "map", tuple(self.map))

    def __call__(self, x):
        return self.map[x]

    def __repr__(self):
        return f"Mor({self.dom!r} -> {self.cod!r}, {list(self.map)})"

    @property
    def backend(self) -> "Backend":
        return backend_of(self.dom)


def identity(A: Obj) -> Mor:
    return Mor(A, A, tuple(range(A.size)))


def compose(f: Mor, g: Mor) -> Mor:
    """Return ``g . f`` (first ``f``, then ``g``)."""
    if f.cod != g.dom:
        raise CompositionError(f"cannot compose: codomain of {f!r} is not the domain of {g!r}")
    gm = g.map
    return Mor(f.dom, g.cod, tuple(gm[x] for x in f.map))


def is_injective(f: Mor) -> bool:
    return len(set(f.map)) == len(f.map)


def is_surjective(f: Mor) -> bool:
    return len(set(f.map)) == f.cod.size


def induced_map(q: Mor, f: Mor) -> tuple | None:
    """Table of the unique ``m`` with ``m . q = f`` on underlying sets, or None.

    ``q`` must be surjective; returns None if ``f`` is not constant on the
    fibres of ``q``.
    """
    if q.dom != f.dom:
        raise CompositionError("induced_map needs maps with a common domain")
    table = [None] * q.cod.size
    for x, qx in enumerate(q.map):
        fx = f.map[x]
        if table[qx] is None:
            table[qx] = fx
        elif table[qx] != fx:
            return None
    if any(v is None for v in table):
        return None
    return tuple(table)


@dataclass(frozen=True)
class Square:
    """A square ``top: A->B``, ``left: A->C``, ``right: B->D``, ``bottom: C->D``."""

    top: Mor
    left: Mor
    right: Mor
    bottom: Mor

    def __post_init__(self):
        if not (self.top.dom == self.left.dom and self.top.cod == self.right.dom
                and self.left.cod == self.bottom.dom and self.right.cod == self.bottom.cod):
            raise CompositionError("square corners do not match")

    def commutes(self) -> bool:
        return compose(self.top, self.right).map == compose(self.left, self.bottom).map


@dataclass(frozen=True)
class Cospan:
    left: Mor
    right: Mor


@dataclass(frozen=True)
class Cone:
    apex: Obj
    legs: tuple


# --------------------------------------------------------------------------
# Backends

_REGISTRY: dict[str, "Backend"] = {}


def register_backend(backend: "Backend") -> "Backend":
    existing = _REGISTRY.get(backend.tag)
    if existing is not None:
        return existing
    _REGISTRY[backend.tag] = backend
    return backend


_LOADERS: dict[str, Callable] = {}


def register_loader(prefix: str, loader: Callable) -> None:
    """Derived backends rebuild themselves from serialized provenance via these."""
    _LOADERS[prefix] = loader


def backend_of(x) -> "Backend":
    tag = x.tag if isinstance(x, Obj) else x.dom.tag
    try:
        return _REGISTRY[tag]
    except KeyError:
        raise Unsupported(f"no backend registered for tag {tag!r}") from None


def registered_backends() -> dict[str, "Backend"]:
    return dict(_REGISTRY)


@dataclass(frozen=True)
class TrivialClass:
    backend_tag: str
    membership: Callable[[Obj], bool]
    coreflector: Callable[[Obj], tuple]


@dataclass(frozen=True)
class QuotientResult:
    quotient: Obj
    projection: Mor
    class_table: tuple
    congruence: object = None
    info: dict = field(default_factory=dict, compare=False)


class Backend:
    """Contract for a finite concrete category with a class of trivial objects.

    Subclasses implement the structure-specific primitives; limits, kernels
    and the law suites in ``prenormal.engine`` are built on top of them.
    """

    tag: str = "abstract"
    pointed: bool = False
    # monos are injective / epis are surjective in the full category
    mono_injective: bool = True
    epi_surjective: bool = False
    kernel_is_full_carrier: bool = False

    # -- objects and maps
    def validate_object(self, X: Obj) -> None:
        raise NotImplementedError

    def is_morphism(self, A: Obj, B: Obj, table) -> bool:
        raise NotImplementedError

    def validate_morphism(self, f: Mor) -> None:
        if f.dom.tag != self.tag or f.cod.tag != self.tag:
            raise InvalidMorphism("morphism between objects of another backend")
        if len(f.map) != f.dom.size or any(not 0 <= y < f.cod.size for y in f.map):
            raise InvalidMorphism("map table is not a total function into the codomain")
        if not self.is_morphism(f.dom, f.cod, f.map):
            raise InvalidMorphism(f"{f!r} does not preserve the {self.tag} structure")

    def mor(self, A: Obj, B: Obj, table) -> Mor:
        f = Mor(A, B, tuple(table))
        self.validate_morphism(f)
        return f

    def homs(self, A: Obj, B: Obj) -> Iterator[tuple]:
        """All morphism tables ``A -> B`` in lexicographic order."""
        raise NotImplementedError

    # -- limits
    def subproduct(self, A: Obj, B: Obj, pairs: list) -> Obj:
        """Substructure of ``A x B`` on the given (sorted, closed) list of pairs."""
        raise NotImplementedError

    def restrict(self, X: Obj, subset) -> Obj:
        """Induced substructure on a closed subset (kept in increasing order)."""
        raise NotImplementedError

    def relabel(self, X: Obj, r) -> Obj:
        """Isomorphic copy of ``X`` where element ``x`` becomes ``r[x]``."""
        raise NotImplementedError

    def subobjects(self, A: Obj) -> list[Mor]:
        """Inclusions of the substructures of ``A`` (monomorphisms into ``A``)."""
        raise Unsupported(f"{self.tag} does not enumerate subobjects")

    def product(self, A: Obj, B: Obj) -> tuple[Obj, Mor, Mor]:
        pairs = [(a, b) for a in range(A.size) for b in range(B.size)]
        P = self.subproduct(A, B, pairs)
        return P, Mor(P, A, tuple(a for a, _ in pairs)), Mor(P, B, tuple(b for _, b in pairs))

    def pullback(self, f: Mor, g: Mor) -> tuple[Obj, Mor, Mor]:
        if f.cod != g.cod:
            raise CompositionError("pullback needs a cospan")
        fibres: dict[int, list[int]] = {}
        for b, gb in enumerate(g.map):
            fibres.setdefault(gb, []).append(b)
        pairs = [(a, b) for a, fa in enumerate(f.map) for b in fibres.get(fa, ())]
        P = self.subproduct(f.dom, g.dom, pairs)
        return P, Mor(P, f.dom, tuple(a for a, _ in pairs)), Mor(P, g.dom, tuple(b for _, b in pairs))

    def pairing(self, P: Obj, pf: Mor, pg: Mor, u: Mor, v: Mor) -> Mor | None:
        """Mediating map ``W -> P`` for a cone ``(u, v)`` or None if it does not exist."""
        index = {(a, b): i for i, (a, b) in enumerate(zip(pf.map, pg.map))}
        table = []
        for x in range(u.dom.size):
            i = index.get((u.map[x], v.map[x]))
            if i is None:
                return None
            table.append(i)
        if not self.is_morphism(u.dom, P, table):
            return None
        return Mor(u.dom, P, tuple(table))

    # -- trivial objects
    def is_trivial(self, X: Obj) -> bool:
        raise NotImplementedError

    def coreflection(self, B: Obj) -> Mor:
        """The counit ``corefl(B) -> B``."""
        raise NotImplementedError

    def trivial_class(self) -> TrivialClass:
        def coreflector(B):
            c = self.coreflection(B)
            return c.dom, c
        return TrivialClass(self.tag, self.is_trivial, coreflector)

    def nontrivial_witness(self, K: Obj):
        """Some piece of ``K`` that keeps it out of the trivial class (None if trivial)."""
        return None

    # -- quotients
    def quotient(self, X: Obj, congruence) -> QuotientResult:
        raise NotImplementedError

    def coequalizer_seed(self, X: Obj, seed) -> QuotientResult:
        """Quotient of ``X`` by the smallest congruence containing ``seed`` (a coequalizer)."""
        raise Unsupported(f"{self.tag} has no generic coequalizers")

    def cokernel(self, k: Mor) -> QuotientResult:
        """The trivial-object cokernel of an arbitrary map ``k``."""
        raise Unsupported(f"{self.tag} has no generic cokernels")

    def normal_epi_char(self, f: Mor) -> bool | None:
        """Backend-specific characterisation of normal epimorphisms (None if absent)."""
        return None

    # -- serialization hooks
    def structure_to_json(self, X: Obj) -> dict:
        return {k: _jsonable(v) for k, v in X.data}

    def structure_from_json(self, size: int, structure: dict) -> Obj:
        raise Unsupported(f"{self.tag} does not load from JSON")

    def catalog(self, **caps) -> "Catalog":
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.tag}>"


# --------------------------------------------------------------------------
# generic morphism calculus


def product(A: Obj, B: Obj):
    return backend_of(A).product(A, B)


def pullback(f: Mor, g: Mor) -> tuple[Obj, Mor, Mor]:
    """Pullback ``(P, p_f, p_g)`` with ``f . p_f = g . p_g``; pairs ordered lexicographically."""
    if f.cod != g.cod:
        raise CompositionError("pullback needs maps with a common codomain")
    return backend_of(f.dom).pullback(f, g)


def is_iso(f: Mor) -> bool:
    if f.dom.size != f.cod.size or not is_injective(f):
        return False
    inverse = [0] * f.cod.size
    for x, y in enumerate(f.map):
        inverse[y] = x
    return backend_of(f.dom).is_morphism(f.cod, f.dom, inverse)


def inverse(f: Mor) -> Mor:
    if not is_iso(f):
        raise InvalidMorphism("map is not an isomorphism")
    inv = [0] * f.cod.size
    for x, y in enumerate(f.map):
        inv[y] = x
    return Mor(f.cod, f.dom, tuple(inv))


def is_mono(f: Mor, catalog: "Catalog | None" = None) -> bool:
    """Monomorphism test.

    Injective maps are monos in any concrete category.  For non-injective maps
    the backend either certifies the answer or we test left cancellation
    against the catalog (a bounded check).
    """
    if is_injective(f):
        return True
    B = backend_of(f.dom)
    if B.mono_injective or catalog is None:
        return False
    for W in catalog.objects:
        seen = {}
        for u in catalog.homs(W, f.dom):
            key = tuple(f.map[x] for x in u.map)
            if key in seen and seen[key] != u.map:
                return False
            seen[key] = u.map
    return True


def is_epi(f: Mor, catalog: "Catalog | None" = None) -> bool:
    """Epimorphism test, surjectivity first, then bounded right cancellation."""
    if is_surjective(f):
        return True
    B = backend_of(f.dom)
    if B.epi_surjective:
        return False
    if catalog is None:
        raise Unsupported(f"deciding non-surjective epis in {B.tag} needs a catalog")
    for W in catalog.objects:
        seen = {}
        for u in catalog.homs(f.cod, W):
            key = tuple(u.map[y] for y in f.map)
            if key in seen and seen[key] != u.map:
                return False
            seen[key] = u.map
    return True


def is_pullback(sq: Square) -> bool:
    """Whether ``sq`` is a pullback: the comparison map into the computed pullback is an iso."""
    if not sq.commutes():
        return False
    B = backend_of(sq.top.dom)
    P, p1, p2 = B.pullback(sq.right, sq.bottom)
    u = B.pairing(P, p1, p2, sq.top, sq.left)
    return u is not None and is_iso(u)


def coreflection(B: Obj, Z: TrivialClass | None = None) -> tuple[Obj, Mor]:
    Z = Z or backend_of(B).trivial_class()
    return Z.coreflector(B)


def is_trivial_map(f: Mor, Z: TrivialClass | None = None) -> bool:
    """Whether ``f`` factors through a trivial object.

    Such a factorisation exists iff ``f`` lifts along the counit of the
    coreflection of its codomain; the counit is injective, so the lift is
    unique when it exists and only needs to be a morphism.
    """
    Z = Z or backend_of(f.dom).trivial_class()
    C, counit = Z.coreflector(f.cod)
    back = {y: x for x, y in enumerate(counit.map)}
    lift = []
    for y in f.map:
        if y not in back:
            return False
        lift.append(back[y])
    return backend_of(f.dom).is_morphism(f.dom, C, lift)


@dataclass
class ReflectionReport:
    exists: bool
    reflection: Obj | None = None
    unit: Mor | None = None
    unit_is_epi: bool | None = None
    maps_checked: int = 0
    message: str = ""


def check_subreflectivity(X: Obj, Z: TrivialClass | None = None, catalog: "Catalog | None" = None) -> ReflectionReport:
    """Reflection of ``X`` into the trivial objects, computed as the cokernel of ``id_X``.

    With a catalog, first checks that some map ``X -> T`` with ``T`` trivial
    exists, then that every such map factors uniquely through the unit.
    """
    backend = backend_of(X)
    Z = Z or backend.trivial_class()
    targets = []
    if catalog is not None:
        for T in catalog.objects:
            if Z.membership(T):
                targets.extend(catalog.homs(X, T))
        if not targets:
            return ReflectionReport(False, message="X admits no map into a trivial object of the workspace")
    try:
        res = backend.cokernel(identity(X))
    except Unsupported as exc:
        return ReflectionReport(False, message=str(exc))
    R, unit = res.quotient, res.projection
    if not Z.membership(R):
        return ReflectionReport(False, R, unit, message="cokernel of the identity is not trivial")
    unit_epi = is_epi(unit, catalog)
    for t in targets:
        if induced_map(unit, t) is None:
            return ReflectionReport(False, R, unit, unit_epi, len(targets),
                                    message=f"map {t!r} does not factor through the unit")
        table = induced_map(unit, t)
        if not backend.is_morphism(R, t.cod, table):
            return ReflectionReport(False, R, unit, unit_epi, len(targets),
                                    message=f"induced map for {t!r} is not a morphism")
    return ReflectionReport(True, R, unit, unit_epi, len(targets), "bounded verification")


# --------------------------------------------------------------------------
# catalogs


class Catalog:
    """A finite full subcategory used as the workspace for bounded checks."""

    def __init__(self, backend: Backend, objects: Iterable[Obj], name: str = ""):
        self.backend = backend
        seen = []
        for X in objects:
            if X not in seen:
                seen.append(X)
        self.objects: list[Obj] = seen
        self.name = name or backend.tag
        self._homs: dict = {}
        self._auts: dict = {}

    def __len__(self):
        return len(self.objects)

    def __iter__(self):
        return iter(self.objects)

    def homs(self, A: Obj, B: Obj) -> list[Mor]:
        key = (A, B)
        hs = self._homs.get(key)
        if hs is None:
            hs = [Mor(A, B, t) for t in self.backend.homs(A, B)]
            self._homs[key] = hs
        return hs

    def morphisms(self) -> Iterator[Mor]:
        for A in self.objects:
            for B in self.objects:
                yield from self.homs(A, B)

    def automorphisms(self, A: Obj) -> list[tuple]:
        auts = self._auts.get(A)
        if auts is None:
            auts = [f.map for f in self.homs(A, A) if is_iso(f)]
            self._auts[A] = auts
        return auts

    def orbit_reps(self, A: Obj, B: Obj, pre=True, post=True) -> list[Mor]:
        """Hom representatives up to pre-composition by Aut(A) and post-composition by Aut(B)."""
        pres = self.automorphisms(A) if pre else [tuple(range(A.size))]
        posts = self.automorphisms(B) if post else [tuple(range(B.size))]
        seen = set()
        reps = []
        for f in self.homs(A, B):
            if f.map in seen:
                continue
            reps.append(f)
            for a in pres:
                fa = tuple(f.map[x] for x in a)
                for b in posts:
                    seen.add(tuple(b[y] for y in fa))
        return reps

    def with_objects(self, extra: Iterable[Obj], name: str | None = None) -> "Catalog":
        return Catalog(self.backend, list(self.objects) + list(extra), name or self.name)

    def closed_under_products(self, max_size: int) -> "Catalog":
        objs = list(self.objects)
        for A in self.objects:
            for B in self.objects:
                if A.size * B.size <= max_size:
                    objs.append(self.backend.product(A, B)[0])
        return Catalog(self.backend, objs, self.name + "+products")

    def __repr__(self):
        return f"<Catalog {self.name}: {len(self.objects)} objects>"


def canonical_form(backend: Backend, X: Obj, fixed: Iterable[int] = ()) -> Obj:
    """Lexicographically least relabelling of ``X`` (for isomorphism reduction)."""
    from itertools import permutations
    n = X.size
    fixed = tuple(fixed)
    free = [i for i in range(n) if i not in fixed]
    best = None
    for perm in permutations(free):
        order = list(fixed) + list(perm)
        relabel = [0] * n
        for new, old in enumerate(order):
            relabel[old] = new
        Y = backend.relabel(X, relabel)
        key = _sort_key(Y)
        if best is None or key < best[0]:
            best = (key, Y)
    return best[1] if best else X


def _sort_key(X: Obj):
    return repr([(k, _jsonable(v)) for k, v in X.data])


def iso_reduce(backend: Backend, objects: Iterable[Obj], fixed=()) -> list[Obj]:
    reps = {}
    for X in objects:
        C = canonical_form(backend, X, fixed)
        reps.setdefault(C, C)
    return list(reps)


def search_maps(n_dom: int, candidates: Callable[[int, list], Iterable[int]],
                consistent: Callable[[int, list], bool]) -> Iterator[tuple]:
    """Backtracking enumeration of tables ``t`` of length ``n_dom``.

    ``candidates(i, t)`` lists images for position ``i`` given ``t[:i]``;
    ``consistent(i, t)`` checks every constraint whose positions are ``<= i``.
    """
    table: list[int] = []

    def rec(i):
        if i == n_dom:
            yield tuple(table)
            return
        for y in candidates(i, table):
            table.append(y)
            if consistent(i, table):
                yield from rec(i + 1)
            table.pop()

    yield from rec(0)


def all_functions(n_dom: int, n_cod: int) -> Iterator[tuple]:
    return _cartesian(range(n_cod), repeat=n_dom)


# --------------------------------------------------------------------------
# JSON

SCHEMA_VERSION = 1


def _jsonable(v):
    if isinstance(v, Obj):
        return obj_to_json(v)
    if isinstance(v, Mor):
        return mor_to_json(v)
    if isinstance(v, frozenset):
        return sorted((_jsonable(x) for x in v), key=lambda x: json.dumps(x))
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def obj_to_json(X: Obj) -> dict:
    return {"backend": X.tag, "size": X.size, "structure": backend_of(X).structure_to_json(X)}


def obj_from_json(d: dict) -> Obj:
    unknown = set(d) - {"backend", "size", "structure"}
    if unknown:
        raise InvalidObject(f"unknown object fields: {sorted(unknown)}")
    backend = _REGISTRY.get(d["backend"])
    if backend is None:
        for prefix, loader in _LOADERS.items():
            if d["backend"].startswith(prefix):
                backend = loader(d["backend"], d["size"], d["structure"])
                break
    if backend is None:
        raise Unsupported(f"unknown backend {d['backend']!r}")
    X = backend.structure_from_json(d["size"], d["structure"])
    backend.validate_object(X)
    return X


def mor_to_json(f: Mor) -> dict:
    return {"dom": obj_to_json(f.dom), "cod": obj_to_json(f.cod), "map": list(f.map)}


def mor_from_json(d: dict) -> Mor:
    unknown = set(d) - {"dom", "cod", "map"}
    if unknown:
        raise InvalidMorphism(f"unknown morphism fields: {sorted(unknown)}")
    A, B = obj_from_json(d["dom"]), obj_from_json(d["cod"])
    return backend_of(A).mor(A, B, d["map"])


def dumps(x) -> str:
    return json.dumps(_jsonable(x), sort_keys=False, separators=(",", ":"))
