"""Pointed backends: pointed sets and (ordered) monoids, with zero objects as trivial class."""

from __future__ import annotations

from itertools import product as cartesian

import numpy as np

from ..closure import (Congruence, equivalence_table, from_table, monoid_congruence_table,
                       partition_pairs, transitive_closure)
from ..core import (Backend, Catalog, CongruenceError, InvalidObject, Mor, Obj, QuotientResult,
                    _sort_key, all_functions, is_surjective, iso_reduce, register_backend)


# --------------------------------------------------------------------------
# pointed sets


class PSet(Backend):
    tag = "pset"
    pointed = True
    epi_surjective = True

    def make(self, size, base=0) -> Obj:
        X = Obj(self.tag, size, {"base": base})
        self.validate_object(X)
        return X

    def validate_object(self, X):
        if X.size < 1:
            raise InvalidObject("a pointed set needs a basepoint")
        if not 0 <= X["base"] < X.size:
            raise InvalidObject("basepoint outside the carrier")

    def is_morphism(self, A, B, table):
        return table[A["base"]] == B["base"]

    def homs(self, A, B):
        base_a, base_b = A["base"], B["base"]
        others = [x for x in range(A.size) if x != base_a]
        for images in cartesian(range(B.size), repeat=len(others)):
            t = [base_b] * A.size
            for x, y in zip(others, images):
                t[x] = y
            yield tuple(t)

    def subproduct(self, A, B, pairs):
        index = {p: i for i, p in enumerate(pairs)}
        return Obj(self.tag, len(pairs), {"base": index[(A["base"], B["base"])]})

    def restrict(self, X, subset):
        subset = sorted(subset)
        return Obj(self.tag, len(subset), {"base": subset.index(X["base"])})

    def relabel(self, X, r):
        return Obj(self.tag, X.size, {"base": r[X["base"]]})

    def zero(self):
        return self.make(1)

    def is_trivial(self, X):
        return X.size == 1

    def coreflection(self, B):
        return Mor(self.zero(), B, (B["base"],))

    def nontrivial_witness(self, K):
        return next((x for x in range(K.size) if x != K["base"]), None)

    def quotient(self, X, c):
        table = c.class_table()
        reps = sorted(set(table))
        pos = {r: i for i, r in enumerate(reps)}
        Q = Obj(self.tag, len(reps), {"base": pos[table[X["base"]]]})
        return QuotientResult(Q, Mor(X, Q, tuple(pos[t] for t in table)), table, c)

    def coequalizer_seed(self, X, seed):
        return self.quotient(X, from_table(equivalence_table(seed, X.size)))

    def cokernel(self, k):
        return self.coequalizer_seed(k.cod, [(y, k.cod["base"]) for y in k.map])

    def subobjects(self, A):
        base = A["base"]
        others = [x for x in range(A.size) if x != base]
        out = []
        for bits in cartesian((0, 1), repeat=len(others)):
            subset = sorted([base] + [x for x, b in zip(others, bits) if b])
            out.append(Mor(self.restrict(A, subset), A, tuple(subset)))
        return out

    def normal_epi_char(self, f):
        return pset_normal_epi_char(f)

    def structure_from_json(self, size, structure):
        _check_keys(structure, {"base"})
        return Obj(self.tag, size, {"base": structure["base"]})

    def catalog(self, max_order=4, **_):
        return Catalog(self, [self.make(n) for n in range(1, max_order + 1)], f"pset<= {max_order}")


def pset_normal_epi_char(f: Mor) -> bool:
    """Surjective, and every fibre over a non-basepoint has exactly one element."""
    if not is_surjective(f):
        return False
    counts = [0] * f.cod.size
    for y in f.map:
        counts[y] += 1
    base = f.cod["base"]
    return all(c == 1 for y, c in enumerate(counts) if y != base)


# --------------------------------------------------------------------------
# monoids


def submonoid_closure(op, unit, elements) -> set:
    S = {unit} | set(elements)
    frontier = list(S)
    while frontier:
        new = []
        for x in frontier:
            for y in list(S):
                for z in (op[x][y], op[y][x]):
                    if z not in S:
                        S.add(z)
                        new.append(z)
        frontier = new
    return S


def generators(op, unit) -> list[int]:
    S = {unit}
    gens = []
    for x in range(len(op)):
        if x not in S:
            gens.append(x)
            S = submonoid_closure(op, unit, S | {x})
    return gens


def monoid_hom_tables(A: Obj, B: Obj):
    """All unit-preserving multiplicative maps, by generator assignment with propagation."""
    opA, opB = A["op"], B["op"]
    n = A.size
    gens = generators(opA, A["unit"])

    def assign(t, x, y):
        t[x] = y
        stack = [x]
        assigned = [i for i in range(n) if t[i] >= 0]
        while stack:
            u = stack.pop()
            for v in assigned:
                for a, b in ((u, v), (v, u)):
                    z = opA[a][b]
                    w = opB[t[a]][t[b]]
                    if t[z] < 0:
                        t[z] = w
                        stack.append(z)
                        assigned.append(z)
                    elif t[z] != w:
                        return False
        return True

    start = [-1] * n
    if not assign(start, A["unit"], B["unit"]):
        return

    def rec(i, t):
        if i == len(gens):
            yield tuple(t)
            return
        g = gens[i]
        if t[g] >= 0:
            yield from rec(i + 1, t)
            return
        for y in range(B.size):
            t2 = list(t)
            if assign(t2, g, y):
                yield from rec(i + 1, t2)

    yield from rec(0, start)


def is_associative(op) -> bool:
    n = len(op)
    return all(op[op[x][y]][z] == op[x][op[y][z]] for x in range(n) for y in range(n) for z in range(n))


def enumerate_monoid_tables(n: int, commutative: bool = False) -> list[tuple]:
    """All monoid tables on ``0..n-1`` with unit 0 (labelled), via a vectorised search."""
    if n == 1:
        return [((0,),)]
    m = n - 1
    cells = m * m
    grid = np.array(list(cartesian(range(n), repeat=cells)), dtype=np.int8) if cells <= 9 else None
    if grid is None:
        raise ValueError("order too large for exhaustive enumeration")
    N = grid.shape[0]
    T = np.empty((N, n, n), dtype=np.int8)
    T[:, 0, :] = np.arange(n)
    T[:, :, 0] = np.arange(n)
    T[:, 1:, 1:] = grid.reshape(N, m, m)
    ok = np.ones(N, dtype=bool)
    rows = np.arange(N)
    if commutative:
        ok &= (T == T.transpose(0, 2, 1)).all(axis=(1, 2))
    for x in range(1, n):
        for y in range(1, n):
            xy = T[:, x, y]
            for z in range(1, n):
                yz = T[:, y, z]
                ok &= T[rows, xy, z] == T[rows, x, yz]
    return [tuple(tuple(int(v) for v in row) for row in T[i]) for i in np.nonzero(ok)[0]]


class Mon(Backend):
    """Finite monoids; objects carry ``op`` (table) and ``unit``."""

    tag = "mon"
    pointed = True
    commutative = False
    ordered = False
    antisymmetric = False

    def make(self, op, unit=0, leq=None) -> Obj:
        op = tuple(tuple(row) for row in op)
        data = {"op": op, "unit": unit}
        if self.ordered:
            n = len(op)
            data["leq"] = transitive_closure(leq or (), n)
        X = Obj(self.tag, len(op), data)
        self.validate_object(X)
        return X

    def validate_object(self, X):
        op, n = X["op"], X.size
        if n < 1:
            raise InvalidObject("a monoid needs a unit")
        if len(op) != n or any(len(r) != n or any(not 0 <= v < n for v in r) for r in op):
            raise InvalidObject("operation table is not total")
        u = X["unit"]
        if any(op[u][x] != x or op[x][u] != x for x in range(n)):
            raise InvalidObject("unit law fails")
        if not is_associative(op):
            raise InvalidObject("operation is not associative")
        if self.commutative and any(op[x][y] != op[y][x] for x in range(n) for y in range(n)):
            raise InvalidObject("operation is not commutative")
        if self.ordered:
            leq = X["leq"]
            if any((x, x) not in leq for x in range(n)):
                raise InvalidObject("order is not reflexive")
            if transitive_closure(leq, n) != leq:
                raise InvalidObject("order is not transitive")
            for x, y in leq:
                for a in range(n):
                    if (op[x][a], op[y][a]) not in leq or (op[a][x], op[a][y]) not in leq:
                        raise InvalidObject("order is not compatible with the operation")
            if self.antisymmetric and any(x != y and (y, x) in leq for x, y in leq):
                raise InvalidObject("order is not antisymmetric")

    def is_morphism(self, A, B, t):
        if t[A["unit"]] != B["unit"]:
            return False
        opA, opB = A["op"], B["op"]
        for x in range(A.size):
            rx, tx = opA[x], opB[t[x]]
            for y in range(A.size):
                if t[rx[y]] != tx[t[y]]:
                    return False
        if self.ordered:
            leqB = B["leq"]
            return all((t[x], t[y]) in leqB for x, y in A["leq"])
        return True

    def homs(self, A, B):
        for t in monoid_hom_tables(A, B):
            if not self.ordered or all((t[x], t[y]) in B["leq"] for x, y in A["leq"]):
                yield t

    def subproduct(self, A, B, pairs):
        index = {p: i for i, p in enumerate(pairs)}
        opA, opB = A["op"], B["op"]
        op = tuple(tuple(index[(opA[a][c], opB[b][d])] for c, d in pairs) for a, b in pairs)
        data = {"op": op, "unit": index[(A["unit"], B["unit"])]}
        if self.ordered:
            la, lb = A["leq"], B["leq"]
            data["leq"] = frozenset((i, j) for i, (a, b) in enumerate(pairs) for j, (c, d) in enumerate(pairs)
                                    if (a, c) in la and (b, d) in lb)
        return Obj(self.tag, len(pairs), data)

    def restrict(self, X, subset):
        subset = sorted(subset)
        pos = {x: i for i, x in enumerate(subset)}
        op = X["op"]
        data = {"op": tuple(tuple(pos[op[x][y]] for y in subset) for x in subset), "unit": pos[X["unit"]]}
        if self.ordered:
            data["leq"] = frozenset((pos[x], pos[y]) for x, y in X["leq"] if x in pos and y in pos)
        return Obj(self.tag, len(subset), data)

    def relabel(self, X, r):
        n = X.size
        op = [[0] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                op[r[x]][r[y]] = r[X["op"][x][y]]
        data = {"op": tuple(map(tuple, op)), "unit": r[X["unit"]]}
        if self.ordered:
            data["leq"] = frozenset((r[x], r[y]) for x, y in X["leq"])
        return Obj(self.tag, n, data)

    def zero(self):
        return self.make(((0,),))

    def is_trivial(self, X):
        return X.size == 1

    def coreflection(self, B):
        return Mor(self.zero(), B, (B["unit"],))

    def nontrivial_witness(self, K):
        return next((x for x in range(K.size) if x != K["unit"]), None)

    def quotient(self, X, c):
        table = c.class_table()
        reps = sorted(set(table))
        pos = {r: i for i, r in enumerate(reps)}
        cls = [pos[t] for t in table]
        op = X["op"]
        qop = [[cls[op[a][b]] for b in reps] for a in reps]
        for x in range(X.size):
            for y in range(X.size):
                if cls[op[x][y]] != qop[cls[x]][cls[y]]:
                    raise CongruenceError("relation is not compatible with the operation", (x, y))
        data = {"op": tuple(map(tuple, qop)), "unit": cls[X["unit"]]}
        info = {}
        if self.ordered:
            image = frozenset((cls[x], cls[y]) for x, y in X["leq"])
            closed = transitive_closure(image, len(reps))
            info["image_order"] = image
            info["closure_added"] = closed - image
            data["leq"] = closed
        Q = Obj(self.tag, len(reps), data)
        res = QuotientResult(Q, Mor(X, Q, tuple(cls)), table, c, info)
        if self.antisymmetric:
            res = self._antisymmetrize(res)
        return res

    def _antisymmetrize(self, res: QuotientResult) -> QuotientResult:
        Q = res.quotient
        leq = Q["leq"]
        t = equivalence_table([(x, y) for x, y in leq if (y, x) in leq], Q.size)
        if len(set(t)) == Q.size:
            return res
        # x <= y <= x is a monoid congruence for a compatible preorder
        inner = Mon.quotient(self, Q, from_table(t, "monoid-congruence"))
        rQ = inner.quotient
        composite = tuple(inner.projection.map[v] for v in res.projection.map)
        table = tuple(min(x for x in range(len(composite)) if composite[x] == composite[y]) for y in range(len(composite)))
        info = dict(res.info)
        info["reflection"] = inner.projection
        info["preorder_quotient"] = Q
        return QuotientResult(rQ, Mor(res.projection.dom, rQ, composite), table,
                              from_table(table, "monoid-congruence"), info)

    def coequalizer_seed(self, X, seed):
        t = monoid_congruence_table(seed, X["op"], self.commutative)
        return self.quotient(X, from_table(t, "monoid-congruence"))

    def cokernel(self, k):
        u = k.cod["unit"]
        return self.coequalizer_seed(k.cod, [(y, u) for y in set(k.map)])

    def subobjects(self, A):
        op, u = A["op"], A["unit"]
        others = [x for x in range(A.size) if x != u]
        out = []
        seen = set()
        for bits in cartesian((0, 1), repeat=len(others)):
            subset = frozenset([u] + [x for x, b in zip(others, bits) if b])
            if subset in seen or submonoid_closure(op, u, subset) != subset:
                continue
            seen.add(subset)
            s = sorted(subset)
            out.append(Mor(self.restrict(A, s), A, tuple(s)))
        return out

    def structure_from_json(self, size, structure):
        keys = {"op", "unit"} | ({"leq"} if self.ordered else set())
        _check_keys(structure, keys)
        data = {"op": tuple(tuple(r) for r in structure["op"]), "unit": structure["unit"]}
        if self.ordered:
            data["leq"] = frozenset(tuple(p) for p in structure["leq"])
        return Obj(self.tag, size, data)

    def enumerate(self, max_order: int) -> list[Obj]:
        """Objects of order <= max_order up to isomorphism (unit relabelled to 0)."""
        out = []
        for n in range(1, max_order + 1):
            objs = [Obj(self.tag, n, self._data_for(op)) for op in enumerate_monoid_tables(n, self.commutative)]
            if self.ordered:
                objs = [Obj(self.tag, X.size, dict(X.data, leq=leq)) for X in objs for leq in _preorders(n)]
                objs = [X for X in objs if self._valid(X)]
            reps = iso_reduce(self, objs, fixed=(0,))
            out.extend(sorted(reps, key=_sort_key))
        return out

    def _data_for(self, op):
        return {"op": op, "unit": 0}

    def _valid(self, X):
        try:
            self.validate_object(X)
        except InvalidObject:
            return False
        return True

    def catalog(self, max_order=3, seeds=True, **_):
        objs = self.enumerate(max_order)
        if seeds:
            objs += self.seeds()
        return Catalog(self, objs, f"{self.tag}<= {max_order}")

    def seeds(self) -> list[Obj]:
        return []


def _preorders(n):
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    diag = {(x, x) for x in range(n)}
    out = []
    for bits in cartesian((0, 1), repeat=len(off)):
        rel = frozenset(diag | {p for p, b in zip(off, bits) if b})
        if transitive_closure(rel, n) == rel:
            out.append(rel)
    return out


class CMon(Mon):
    tag = "cmon"
    commutative = True

    def normal_epi_char(self, f):
        return cmon_normal_epi_char(f)

    def catalog(self, max_order=4, seeds=True, **_):
        return Mon.catalog(self, max_order=max_order, seeds=seeds)

    def seeds(self):
        return [cyclic_monoid(self, 4), join_square(self)]


class PreordCMon(CMon):
    tag = "preordcmon"
    ordered = True

    def normal_epi_char(self, f):
        return preordcmon_normal_epi_char(f)

    def seeds(self):
        return list(unstable_regular_epi_objects(self).values())

    def catalog(self, max_order=2, seeds=True, **_):
        return Mon.catalog(self, max_order=max_order, seeds=seeds)


class POCMon(PreordCMon):
    tag = "pocmon"
    antisymmetric = True

    def normal_epi_char(self, f):
        return pocmon_normal_epi_char(f)

    def catalog(self, max_order=3, seeds=True, **_):
        return Mon.catalog(self, max_order=max_order, seeds=seeds)


def cmon_normal_epi_char(f: Mor) -> bool:
    """Surjective, and ``f(x) = f(y)`` implies ``x + a = y + b`` for some ``a, b`` in the kernel."""
    if not is_surjective(f):
        return False
    op, zero = f.dom["op"], f.cod["unit"]
    K = [a for a in range(f.dom.size) if f.map[a] == zero]
    for x in range(f.dom.size):
        for y in range(x + 1, f.dom.size):
            if f.map[x] != f.map[y]:
                continue
            sums_x = {op[x][a] for a in K}
            if not any(op[y][b] in sums_x for b in K):
                return False
    return True


def _order_lifts(f: Mor) -> bool:
    images = {(f.map[x], f.map[y]) for x, y in f.dom["leq"]}
    return f.cod["leq"] <= images


def preordcmon_normal_epi_char(f: Mor) -> bool:
    """The commutative-monoid condition plus: every ``u <= v`` lifts to some ``x <= y``."""
    return cmon_normal_epi_char(f) and _order_lifts(f)


def pocmon_normal_epi_char(f: Mor) -> bool:
    """Surjective, order lifting, and equal images only when ``x+a <= y+b`` and ``y+c <= x+d`` in the kernel."""
    if not is_surjective(f) or not _order_lifts(f):
        return False
    op, leq, zero = f.dom["op"], f.dom["leq"], f.cod["unit"]
    K = [a for a in range(f.dom.size) if f.map[a] == zero]

    def below(x, y):
        xs = {op[x][a] for a in K}
        ys = {op[y][b] for b in K}
        return any((u, v) in leq for u in xs for v in ys)

    return all(below(x, y) and below(y, x)
               for x in range(f.dom.size) for y in range(f.dom.size)
               if x < y and f.map[x] == f.map[y])


# --------------------------------------------------------------------------
# named objects


def cyclic_monoid(backend: Mon, n: int) -> Obj:
    """The cyclic group Z_n as a monoid."""
    return backend.make([[(x + y) % n for y in range(n)] for x in range(n)])


def truncated_addition(backend: Mon, n: int) -> Obj:
    return backend.make([[min(x + y, n - 1) for y in range(n)] for x in range(n)])


def join_chain(backend: Mon, n: int, leq=None) -> Obj:
    """``{0..n-1}`` with ``max`` as operation."""
    return backend.make([[max(x, y) for y in range(n)] for x in range(n)], leq=leq)


def join_square(backend: Mon) -> Obj:
    T = join_chain(backend, 2)
    return backend.product(T, T)[0]


def unstable_regular_epi_objects(backend: Mon) -> dict[str, Obj]:
    """The four preordered commutative monoids of the non-regularity example.

    ``A`` has carrier ``0, 1, 1', 2`` encoded as ``0, 1, 2, 3``; its operation
    is the join for ``0 < 1 < 1' < 2`` and its order is generated by
    ``0 <= 1`` and ``1' <= 2``.  ``B`` is the chain ``0 <= 1 <= 2`` with join,
    ``C`` the full subobject on ``{0, 2}`` of ``B`` and ``D`` the discrete
    ``{0, 2}`` with the join.
    """
    A = join_chain(backend, 4, leq={(0, 1), (2, 3)})
    B = join_chain(backend, 3, leq={(0, 1), (1, 2), (0, 2)})
    C = join_chain(backend, 2, leq={(0, 1)})
    D = join_chain(backend, 2)
    return {"A": A, "B": B, "C": C, "D": D}


def _check_keys(structure, keys):
    unknown = set(structure) - set(keys)
    missing = set(keys) - set(structure)
    if unknown or missing:
        raise InvalidObject(f"structure keys mismatch: unknown {sorted(unknown)}, missing {sorted(missing)}")


PSET = register_backend(PSet())
MON = register_backend(Mon())
CMON = register_backend(CMon())
PREORDCMON = register_backend(PreordCMon())
POCMON = register_backend(POCMon())
