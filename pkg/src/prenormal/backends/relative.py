"""Non-pointed backends: relations, groupoids and preordered groups."""

from __future__ import annotations

from itertools import combinations, permutations
from itertools import product as cartesian

from ..closure import (equivalence_table, from_table, groupoid_congruence_table, groupoid_normal_closure,
                       monoid_congruence_table, transitive_closure)
from ..core import (Backend, Catalog, CongruenceError, InvalidObject, Mor, Obj, QuotientResult,
                    Unsupported, _sort_key, is_surjective, iso_reduce, register_backend, search_maps)
from .pointed import _check_keys, is_associative, monoid_hom_tables, submonoid_closure


# --------------------------------------------------------------------------
# relations


def kind_closure(kind: str, pairs, n: int) -> frozenset:
    """Least relation of the given kind on ``0..n-1`` containing ``pairs``."""
    diag = {(x, x) for x in range(n)}
    if kind == "reflexive":
        return frozenset(set(pairs) | diag)
    if kind == "preorder":
        return transitive_closure(pairs, n)
    if kind == "equivalence":
        pairs = set(pairs)
        return transitive_closure(pairs | {(y, x) for x, y in pairs}, n)
    raise ValueError(kind)


def _is_kind(kind, rel, n):
    return kind_closure(kind, rel, n) == rel


class Rel(Backend):
    """Sets with a relation of a fixed kind; trivial objects carry the identity relation."""

    kind = "reflexive"
    epi_surjective = True
    kernel_is_full_carrier = True

    def __init__(self, kind):
        self.kind = kind
        self.tag = f"rel-{kind}"

    def make(self, size, rel=()) -> Obj:
        X = Obj(self.tag, size, {"rel": kind_closure(self.kind, rel, size)})
        self.validate_object(X)
        return X

    def validate_object(self, X):
        rel = X["rel"]
        if any(not (0 <= x < X.size and 0 <= y < X.size) for x, y in rel):
            raise InvalidObject("relation leaves the carrier")
        if not _is_kind(self.kind, rel, X.size):
            raise InvalidObject(f"relation is not a {self.kind} relation")

    def is_morphism(self, A, B, t):
        rb = B["rel"]
        return all((t[x], t[y]) in rb for x, y in A["rel"])

    def homs(self, A, B):
        rel = sorted(A["rel"], key=lambda p: max(p))
        rb = B["rel"]
        by_top: dict[int, list] = {}
        for x, y in rel:
            by_top.setdefault(max(x, y), []).append((x, y))

        def consistent(i, t):
            return all((t[x], t[y]) in rb for x, y in by_top.get(i, ()))

        yield from search_maps(A.size, lambda i, t: range(B.size), consistent)

    def subproduct(self, A, B, pairs):
        index = {p: i for i, p in enumerate(pairs)}
        ra, rb = A["rel"], B["rel"]
        rel = frozenset((index[(a, b)], index[(c, d)]) for a, c in ra for b, d in rb
                        if (a, b) in index and (c, d) in index)
        return Obj(self.tag, len(pairs), {"rel": rel})

    def restrict(self, X, subset):
        subset = sorted(subset)
        pos = {x: i for i, x in enumerate(subset)}
        return Obj(self.tag, len(subset), {"rel": frozenset((pos[x], pos[y]) for x, y in X["rel"]
                                                            if x in pos and y in pos)})

    def relabel(self, X, r):
        return Obj(self.tag, X.size, {"rel": frozenset((r[x], r[y]) for x, y in X["rel"])})

    def is_trivial(self, X):
        return all(x == y for x, y in X["rel"])

    def coreflection(self, B):
        return Mor(self.make(B.size), B, tuple(range(B.size)))

    def nontrivial_witness(self, K):
        return min(((x, y) for x, y in K["rel"] if x != y), default=None)

    def kernel_formula(self, f: Mor) -> Obj:
        """``(X, K_f ∧ rho)`` computed directly."""
        t = f.map
        return Obj(self.tag, f.dom.size, {"rel": frozenset((x, y) for x, y in f.dom["rel"] if t[x] == t[y])})

    def quotient(self, X, c):
        table = c.class_table()
        reps = sorted(set(table))
        pos = {r: i for i, r in enumerate(reps)}
        cls = tuple(pos[t] for t in table)
        image = frozenset((cls[x], cls[y]) for x, y in X["rel"])
        rel = kind_closure(self.kind, image, len(reps))
        Q = Obj(self.tag, len(reps), {"rel": rel})
        return QuotientResult(Q, Mor(X, Q, cls), table, c, {"image_relation": image, "closure_added": rel - image})

    def coequalizer_seed(self, X, seed):
        return self.quotient(X, from_table(equivalence_table(seed, X.size)))

    def cokernel(self, k):
        t = k.map
        return self.coequalizer_seed(k.cod, [(t[x], t[y]) for x, y in k.dom["rel"]])

    def subobjects(self, A):
        out = []
        for r in range(A.size + 1):
            for subset in combinations(range(A.size), r):
                induced = self.restrict(A, subset)
                for rel in relations_of_kind(self.kind, len(subset)):
                    if rel <= induced["rel"]:
                        out.append(Mor(Obj(self.tag, len(subset), {"rel": rel}), A, subset))
        return out

    def normal_epi_char(self, f):
        return rel_normal_epi_char(f, self.kind)

    def structure_from_json(self, size, structure):
        _check_keys(structure, {"rel"})
        return Obj(self.tag, size, {"rel": frozenset(tuple(p) for p in structure["rel"])})

    def enumerate(self, max_size: int) -> list[Obj]:
        out = []
        for n in range(0, max_size + 1):
            objs = [Obj(self.tag, n, {"rel": rel}) for rel in relations_of_kind(self.kind, n)]
            out.extend(sorted(iso_reduce(self, objs), key=_sort_key))
        return out

    def catalog(self, max_order=3, seeds=True, **_):
        objs = self.enumerate(max_order)
        if seeds and self.kind == "preorder":
            X, Y, _ = preorder_counterexample(self)
            objs += [X, Y]
        return Catalog(self, objs, f"{self.tag}<= {max_order}")


def relations_of_kind(kind, n) -> list[frozenset]:
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    out = []
    seen = set()
    for bits in cartesian((0, 1), repeat=len(off)):
        rel = kind_closure(kind, [p for p, b in zip(off, bits) if b], n)
        if rel not in seen and sum(bits) == len(rel) - n:
            seen.add(rel)
            out.append(rel)
    return out


def rel_normal_epi_char(f: Mor, kind: str) -> bool:
    """Surjective, codomain relation generated by the image, kernel pair generated by ``K_f ∧ rho``."""
    if not is_surjective(f):
        return False
    t = f.map
    image = {(t[x], t[y]) for x, y in f.dom["rel"]}
    if kind_closure(kind, image, f.cod.size) != f.cod["rel"]:
        return False
    generated = equivalence_table([(x, y) for x, y in f.dom["rel"] if t[x] == t[y]], f.dom.size)
    return all((generated[x] == generated[y]) == (t[x] == t[y])
               for x in range(f.dom.size) for y in range(f.dom.size))


def preorder_counterexample(backend: Rel):
    """The 4-element preorder map whose canonical factorisation fails.

    Elements ``1, 2, 2', 3`` are encoded ``0, 1, 2, 3``; the codomain is
    ``{1, 2}`` with the full relation.
    """
    X = backend.make(4, {(0, 1), (2, 1), (2, 3)})
    Y = backend.make(2, {(0, 1), (1, 0)})
    return X, Y, Mor(X, Y, (0, 1, 1, 0))


# --------------------------------------------------------------------------
# groupoids


class Grpd(Backend):
    """Finite groupoids stored by their arrows; identities have ``src[a] == a``.

    ``comp[a][b]`` is ``a . b`` (first ``b``) or ``-1`` when undefined.
    """

    tag = "grpd"

    def make(self, src, tgt, comp, inv=None) -> Obj:
        n = len(src)
        comp = tuple(tuple(row) for row in comp)
        if inv is None:
            inv = tuple(next(b for b in range(n) if comp[a][b] == tgt[a]) for a in range(n))
        X = Obj(self.tag, n, {"src": tuple(src), "tgt": tuple(tgt), "comp": comp, "inv": tuple(inv)})
        self.validate_object(X)
        return X

    def objects(self, X):
        return [a for a in range(X.size) if X["src"][a] == a]

    def validate_object(self, X):
        n = X.size
        src, tgt, comp, inv = X["src"], X["tgt"], X["comp"], X["inv"]
        if len(src) != n or len(tgt) != n or len(comp) != n or len(inv) != n:
            raise InvalidObject("groupoid tables have the wrong size")
        ids = set()
        for a in range(n):
            s, t = src[a], tgt[a]
            if src[s] != s or tgt[s] != s or src[t] != t or tgt[t] != t:
                raise InvalidObject("source or target is not an identity")
            if src[a] == a:
                if tgt[a] != a:
                    raise InvalidObject("identity with distinct endpoints")
                ids.add(a)
        for a in range(n):
            for b in range(n):
                c = comp[a][b]
                if (src[a] == tgt[b]) != (c >= 0):
                    raise InvalidObject("composition defined off composable pairs")
                if c >= 0 and (src[c] != src[b] or tgt[c] != tgt[a]):
                    raise InvalidObject("composite has wrong endpoints")
        for a in range(n):
            if comp[a][src[a]] != a or comp[tgt[a]][a] != a:
                raise InvalidObject("identity law fails")
            i = inv[a]
            if comp[a][i] != tgt[a] or comp[i][a] != src[a]:
                raise InvalidObject("inverse law fails")
        for a in range(n):
            for b in range(n):
                ab = comp[a][b]
                if ab < 0:
                    continue
                for c in range(n):
                    bc = comp[b][c]
                    if bc >= 0 and comp[ab][c] != comp[a][bc]:
                        raise InvalidObject("composition is not associative")

    def is_morphism(self, A, B, t):
        sa, ta, ca = A["src"], A["tgt"], A["comp"]
        sb, tb, cb = B["src"], B["tgt"], B["comp"]
        for a in range(A.size):
            if t[sa[a]] != sb[t[a]] or t[ta[a]] != tb[t[a]]:
                return False
            if sa[a] == a and sb[t[a]] != t[a]:
                return False
        for a in range(A.size):
            for b in range(A.size):
                c = ca[a][b]
                if c >= 0 and t[c] != cb[t[a]][t[b]]:
                    return False
        return True

    def homs(self, A, B):
        sa, ta, ca = A["src"], A["tgt"], A["comp"]
        sb, tb, cb = B["src"], B["tgt"], B["comp"]
        # identities first so endpoint constraints are available for the other arrows
        order = sorted(range(A.size), key=lambda a: (sa[a] != a, a))
        pos = {a: i for i, a in enumerate(order)}
        objs_b = [b for b in range(B.size) if sb[b] == b]

        def candidates(i, t):
            a = order[i]
            if sa[a] == a:
                return objs_b
            s, e = t[pos[sa[a]]], t[pos[ta[a]]]
            return [b for b in range(B.size) if sb[b] == s and tb[b] == e]

        def consistent(i, t):
            a = order[i]
            for j in range(i + 1):
                b = order[j]
                for x, y in ((a, b), (b, a)):
                    c = ca[x][y]
                    if c >= 0 and pos[c] <= i and t[pos[c]] != cb[t[pos[x]]][t[pos[y]]]:
                        return False
            return True

        for raw in search_maps(A.size, candidates, consistent):
            yield tuple(raw[pos[a]] for a in range(A.size))

    def subproduct(self, A, B, pairs):
        index = {p: i for i, p in enumerate(pairs)}
        sa, ta, ca, ia = A["src"], A["tgt"], A["comp"], A["inv"]
        sb, tb, cb, ib = B["src"], B["tgt"], B["comp"], B["inv"]
        src = tuple(index[(sa[a], sb[b])] for a, b in pairs)
        tgt = tuple(index[(ta[a], tb[b])] for a, b in pairs)
        comp = tuple(tuple(index[(ca[a][c], cb[b][d])] if ca[a][c] >= 0 and cb[b][d] >= 0 else -1
                           for c, d in pairs) for a, b in pairs)
        inv = tuple(index[(ia[a], ib[b])] for a, b in pairs)
        return Obj(self.tag, len(pairs), {"src": src, "tgt": tgt, "comp": comp, "inv": inv})

    def restrict(self, X, subset):
        subset = sorted(subset)
        pos = {x: i for i, x in enumerate(subset)}
        comp = X["comp"]
        return Obj(self.tag, len(subset), {
            "src": tuple(pos[X["src"][a]] for a in subset),
            "tgt": tuple(pos[X["tgt"][a]] for a in subset),
            "comp": tuple(tuple(pos[comp[a][b]] if comp[a][b] >= 0 else -1 for b in subset) for a in subset),
            "inv": tuple(pos[X["inv"][a]] for a in subset)})

    def relabel(self, X, r):
        n = X.size
        comp = [[-1] * n for _ in range(n)]
        src, tgt, inv = [0] * n, [0] * n, [0] * n
        for a in range(n):
            src[r[a]] = r[X["src"][a]]
            tgt[r[a]] = r[X["tgt"][a]]
            inv[r[a]] = r[X["inv"][a]]
            for b in range(n):
                c = X["comp"][a][b]
                comp[r[a]][r[b]] = r[c] if c >= 0 else -1
        return Obj(self.tag, n, {"src": tuple(src), "tgt": tuple(tgt), "comp": tuple(map(tuple, comp)),
                                 "inv": tuple(inv)})

    def is_trivial(self, X):
        return all(X["src"][a] == a for a in range(X.size))

    def coreflection(self, B):
        ids = self.objects(B)
        return Mor(self.restrict(B, ids), B, tuple(ids))

    def nontrivial_witness(self, K):
        return next((a for a in range(K.size) if K["src"][a] != a), None)

    def quotient(self, X, c):
        table = c.class_table()
        reps = sorted(set(table))
        pos = {r: i for i, r in enumerate(reps)}
        cls = tuple(pos[t] for t in table)
        m = len(reps)
        src, tgt, comp = X["src"], X["tgt"], X["comp"]
        qsrc = [None] * m
        qtgt = [None] * m
        for a in range(X.size):
            for arr, val in ((qsrc, cls[src[a]]), (qtgt, cls[tgt[a]])):
                if arr[cls[a]] is None:
                    arr[cls[a]] = val
                elif arr[cls[a]] != val:
                    raise CongruenceError("congruence relates arrows with unrelated endpoints", (reps[cls[a]], a))
        qcomp = [[-1] * m for _ in range(m)]
        for a in range(X.size):
            for b in range(X.size):
                ab = comp[a][b]
                if ab < 0:
                    continue
                u, v = cls[a], cls[b]
                if qcomp[u][v] < 0:
                    qcomp[u][v] = cls[ab]
                elif qcomp[u][v] != cls[ab]:
                    raise CongruenceError("composition is not well defined on classes", (a, b))
        for u in range(m):
            for v in range(m):
                if qsrc[u] == qtgt[v] and qcomp[u][v] < 0:
                    raise CongruenceError("quotient needs composites not realised by representatives", (reps[u], reps[v]))
        qinv = [cls[X["inv"][reps[u]]] for u in range(m)]
        Q = Obj(self.tag, m, {"src": tuple(qsrc), "tgt": tuple(qtgt), "comp": tuple(map(tuple, qcomp)),
                              "inv": tuple(qinv)})
        return QuotientResult(Q, Mor(X, Q, cls), table, c)

    def quotient_by_normal(self, X, normal) -> QuotientResult:
        """``X / N`` for a normal subgroupoid: classes ``g ~ n1 g n2``, composites ``[a][b] = [a n b]``."""
        src, tgt, comp = X["src"], X["tgt"], X["comp"]
        pairs = [(a, src[a]) for a in normal]
        table = groupoid_congruence_table(X, pairs)
        c = from_table(table, "groupoid-congruence")
        reps = sorted(set(table))
        pos = {r: i for i, r in enumerate(reps)}
        cls = tuple(pos[t] for t in table)
        m = len(reps)
        qsrc = [cls[src[r]] for r in reps]
        qtgt = [cls[tgt[r]] for r in reps]
        qcomp = [[-1] * m for _ in range(m)]
        links: dict = {}
        for n in normal:
            links.setdefault((src[n], tgt[n]), n)
        for a in range(X.size):
            for b in range(X.size):
                n = links.get((tgt[b], src[a]))
                if n is None:
                    continue
                val = cls[comp[a][comp[n][b]]]
                u, v = cls[a], cls[b]
                if qcomp[u][v] < 0:
                    qcomp[u][v] = val
                elif qcomp[u][v] != val:
                    raise CongruenceError("normal-subgroupoid quotient is not well defined", (a, b))
        qinv = [cls[X["inv"][r]] for r in reps]
        Q = Obj(self.tag, m, {"src": tuple(qsrc), "tgt": tuple(qtgt), "comp": tuple(map(tuple, qcomp)),
                              "inv": tuple(qinv)})
        self.validate_object(Q)
        return QuotientResult(Q, Mor(X, Q, cls), table, c, {"normal_subgroupoid": frozenset(normal)})

    def coequalizer_seed(self, X, seed):
        src, tgt, comp, inv = X["src"], X["tgt"], X["comp"], X["inv"]
        gens = []
        for a, b in seed:
            if src[a] != src[b]:
                raise Unsupported("coequalizing arrows with different sources may leave finite groupoids")
            gens.append(comp[a][inv[b]])
        return self.quotient_by_normal(X, groupoid_normal_closure(X, gens))

    def cokernel(self, k):
        return self.quotient_by_normal(k.cod, groupoid_normal_closure(k.cod, set(k.map)))

    def subobjects(self, A):
        src, tgt, comp, inv = A["src"], A["tgt"], A["comp"], A["inv"]
        out = []
        seen = set()
        for bits in cartesian((0, 1), repeat=A.size):
            S = {a for a, b in zip(range(A.size), bits) if b}
            if S in seen:
                continue
            if any(src[a] not in S or tgt[a] not in S or inv[a] not in S for a in S):
                continue
            if any(comp[a][b] >= 0 and comp[a][b] not in S for a in S for b in S):
                continue
            seen.add(frozenset(S))
            s = sorted(S)
            out.append(Mor(self.restrict(A, s), A, tuple(s)))
        return out

    def normal_epi_char(self, f):
        return grpd_normal_epi_char(f)

    def structure_from_json(self, size, structure):
        _check_keys(structure, {"src", "tgt", "comp", "inv"})
        return Obj(self.tag, size, {"src": tuple(structure["src"]), "tgt": tuple(structure["tgt"]),
                                    "comp": tuple(tuple(r) for r in structure["comp"]),
                                    "inv": tuple(structure["inv"])})

    def catalog(self, max_order=6, **_):
        objs = [discrete_groupoid(1), discrete_groupoid(2), group_as_groupoid(cyclic_table(2)),
                group_as_groupoid(cyclic_table(3)), codiscrete_groupoid(2),
                coproduct_groupoid(group_as_groupoid(cyclic_table(2)), discrete_groupoid(1))]
        if max_order >= 4:
            objs += [group_as_groupoid(cyclic_table(4)), group_as_groupoid(klein_table())]
        if max_order >= 6:
            objs += [group_as_groupoid(symmetric3_table())]
        objs = [X for X in objs if X.size <= max(max_order, 4)]
        return Catalog(self, objs, f"grpd<= {max_order}")


def grpd_normal_epi_char(F: Mor) -> bool:
    """Strictly surjective on arrows; equal images are reconciled by arrows sent to identities."""
    if not is_surjective(F):
        return False
    A, B = F.dom, F.cod
    src, tgt, comp = A["src"], A["tgt"], A["comp"]
    t = F.map
    killed = [u for u in range(A.size) if B["src"][t[u]] == t[u]]
    for g in range(A.size):
        for h in range(A.size):
            if g == h or t[g] != t[h]:
                continue
            right = {comp[g][u] for u in killed if tgt[u] == src[g]}
            if not any(comp[u][h] in right for u in killed if src[u] == tgt[h]):
                return False
    return True


def group_as_groupoid(op, unit=0) -> Obj:
    """One-object groupoid of a group table (the identity is arrow ``unit``, relabelled to 0)."""
    n = len(op)
    order = [unit] + [x for x in range(n) if x != unit]
    r = {x: i for i, x in enumerate(order)}
    comp = [[0] * n for _ in range(n)]
    inv = [0] * n
    for x in range(n):
        for y in range(n):
            comp[r[x]][r[y]] = r[op[x][y]]
            if op[x][y] == unit:
                inv[r[x]] = r[y]
    return GRPD.make([0] * n, [0] * n, comp, inv)


def discrete_groupoid(k: int) -> Obj:
    comp = [[a if a == b else -1 for b in range(k)] for a in range(k)]
    return GRPD.make(list(range(k)), list(range(k)), comp, list(range(k)))


def codiscrete_groupoid(k: int) -> Obj:
    """One arrow between any two of ``k`` objects; arrow ``(i, j)`` is numbered so identities come first."""
    arrows = [(i, i) for i in range(k)] + [(i, j) for i in range(k) for j in range(k) if i != j]
    idx = {a: n for n, a in enumerate(arrows)}
    src = [i for i, _ in arrows]
    tgt = [j for _, j in arrows]
    comp = [[idx[(b[0], a[1])] if b[1] == a[0] else -1 for b in arrows] for a in arrows]
    inv = [idx[(j, i)] for i, j in arrows]
    return GRPD.make(src, tgt, comp, inv)


def coproduct_groupoid(X: Obj, Y: Obj) -> Obj:
    n = X.size
    sh = lambda v: v + n if v >= 0 else -1
    src = list(X["src"]) + [sh(v) for v in Y["src"]]
    tgt = list(X["tgt"]) + [sh(v) for v in Y["tgt"]]
    inv = list(X["inv"]) + [sh(v) for v in Y["inv"]]
    comp = [list(r) + [-1] * Y.size for r in X["comp"]] + [[-1] * n + [sh(v) for v in r] for r in Y["comp"]]
    return GRPD.make(src, tgt, comp, inv)


# --------------------------------------------------------------------------
# groups


def cyclic_table(n):
    return tuple(tuple((x + y) % n for y in range(n)) for x in range(n))


def klein_table():
    return tuple(tuple(x ^ y for y in range(4)) for x in range(4))


def symmetric3_table():
    perms = sorted(permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p * q)(i) = p(q(i))
    return tuple(tuple(idx[tuple(p[q[i]] for i in range(3))] for q in perms) for p in perms)


def group_inverses(op, unit):
    return tuple(next(y for y in range(len(op)) if op[x][y] == unit) for x in range(len(op)))


def normal_subgroups(op, unit) -> list[frozenset]:
    """Conjugation-closed submonoids of a finite group (these are exactly the normal subgroups)."""
    n = len(op)
    inv = group_inverses(op, unit)
    found = set()
    for bits in cartesian((0, 1), repeat=n - 1):
        S = frozenset([unit] + [x for x, b in zip([y for y in range(n) if y != unit], bits) if b])
        if submonoid_closure(op, unit, S) == S and conjugation_closed(op, inv, S):
            found.add(S)
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def conjugation_closed(op, inv, S) -> bool:
    return all(op[op[g][s]][inv[g]] in S for g in range(len(op)) for s in S)


class OrdGrp(Backend):
    """Pairs ``(G, M)``: a finite group table and a conjugation-closed submonoid ``cone``."""

    tag = "ordgrp"
    epi_surjective = True
    kernel_is_full_carrier = True

    def make(self, op, unit=0, cone=None) -> Obj:
        op = tuple(tuple(r) for r in op)
        X = Obj(self.tag, len(op), {"op": op, "unit": unit,
                                    "cone": frozenset(cone) if cone is not None else frozenset([unit])})
        self.validate_object(X)
        return X

    def validate_object(self, X):
        op, u, M = X["op"], X["unit"], X["cone"]
        n = X.size
        if n < 1 or len(op) != n or any(len(r) != n or any(not 0 <= v < n for v in r) for r in op):
            raise InvalidObject("group table is not total")
        if any(op[u][x] != x or op[x][u] != x for x in range(n)):
            raise InvalidObject("unit law fails")
        if not is_associative(op):
            raise InvalidObject("operation is not associative")
        if any(all(op[x][y] != u for y in range(n)) for x in range(n)):
            raise InvalidObject("an element has no inverse")
        if u not in M or submonoid_closure(op, u, M) != M:
            raise InvalidObject("positive cone is not a submonoid")
        if not conjugation_closed(op, group_inverses(op, u), M):
            raise InvalidObject("positive cone is not closed under conjugation")

    def is_morphism(self, A, B, t):
        if t[A["unit"]] != B["unit"]:
            return False
        opA, opB = A["op"], B["op"]
        if any(t[opA[x][y]] != opB[t[x]][t[y]] for x in range(A.size) for y in range(A.size)):
            return False
        N = B["cone"]
        return all(t[m] in N for m in A["cone"])

    def homs(self, A, B):
        N = B["cone"]
        for t in monoid_hom_tables(A, B):
            if all(t[m] in N for m in A["cone"]):
                yield t

    def subproduct(self, A, B, pairs):
        index = {p: i for i, p in enumerate(pairs)}
        opA, opB = A["op"], B["op"]
        op = tuple(tuple(index[(opA[a][c], opB[b][d])] for c, d in pairs) for a, b in pairs)
        cone = frozenset(index[(a, b)] for a, b in pairs if a in A["cone"] and b in B["cone"])
        return Obj(self.tag, len(pairs), {"op": op, "unit": index[(A["unit"], B["unit"])], "cone": cone})

    def restrict(self, X, subset):
        subset = sorted(subset)
        pos = {x: i for i, x in enumerate(subset)}
        op = X["op"]
        return Obj(self.tag, len(subset), {"op": tuple(tuple(pos[op[x][y]] for y in subset) for x in subset),
                                           "unit": pos[X["unit"]],
                                           "cone": frozenset(pos[m] for m in X["cone"] if m in pos)})

    def relabel(self, X, r):
        n = X.size
        op = [[0] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                op[r[x]][r[y]] = r[X["op"][x][y]]
        return Obj(self.tag, n, {"op": tuple(map(tuple, op)), "unit": r[X["unit"]],
                                 "cone": frozenset(r[m] for m in X["cone"])})

    def is_trivial(self, X):
        return X["cone"] == frozenset([X["unit"]])

    def coreflection(self, B):
        return Mor(Obj(self.tag, B.size, {"op": B["op"], "unit": B["unit"], "cone": frozenset([B["unit"]])}),
                   B, tuple(range(B.size)))

    def nontrivial_witness(self, K):
        return min((m for m in K["cone"] if m != K["unit"]), default=None)

    def quotient(self, X, c):
        table = c.class_table()
        reps = sorted(set(table))
        pos = {r: i for i, r in enumerate(reps)}
        cls = tuple(pos[t] for t in table)
        op = X["op"]
        qop = [[cls[op[a][b]] for b in reps] for a in reps]
        for x in range(X.size):
            for y in range(X.size):
                if cls[op[x][y]] != qop[cls[x]][cls[y]]:
                    raise CongruenceError("relation is not compatible with the group operation", (x, y))
        Q = Obj(self.tag, len(reps), {"op": tuple(map(tuple, qop)), "unit": cls[X["unit"]],
                                      "cone": frozenset(cls[m] for m in X["cone"])})
        return QuotientResult(Q, Mor(X, Q, cls), table, c)

    def coequalizer_seed(self, X, seed):
        return self.quotient(X, from_table(monoid_congruence_table(seed, X["op"]), "monoid-congruence"))

    def cokernel(self, k):
        """Quotient of the codomain group by the normal subgroup generated by the image of the domain's cone."""
        X = k.cod
        u = X["unit"]
        image = {k.map[m] for m in k.dom["cone"]}
        res = self.coequalizer_seed(X, [(y, u) for y in image])
        generated = frozenset(x for x in range(X.size) if res.class_table[x] == res.class_table[u])
        info = {"generated_subgroup": generated}
        if k.dom["op"] == X["op"] and k.map == tuple(range(X.size)):
            # for a finite group a conjugation-closed submonoid is already a normal subgroup
            if generated != frozenset(image):
                raise CongruenceError("generated subgroup differs from the cone on a finite group",
                                      sorted(generated - image))
            info["generated_equals_cone"] = True
        return QuotientResult(res.quotient, res.projection, res.class_table, res.congruence, info)

    def subobjects(self, A):
        out = []
        for S in subgroups(A["op"], A["unit"]):
            s = sorted(S)
            base = self.restrict(A, s)
            for cone in normal_subgroups(base["op"], base["unit"]):
                if all(s[m] in A["cone"] for m in cone):
                    out.append(Mor(Obj(self.tag, len(s), dict(base.data, cone=cone)), A, tuple(s)))
        return out

    def normal_epi_char(self, f):
        return ordgrp_normal_epi_char(f)

    def structure_from_json(self, size, structure):
        _check_keys(structure, {"op", "unit", "cone"})
        return Obj(self.tag, size, {"op": tuple(tuple(r) for r in structure["op"]), "unit": structure["unit"],
                                    "cone": frozenset(structure["cone"])})

    def catalog(self, max_order=6, **_):
        tables = [cyclic_table(1), cyclic_table(2), cyclic_table(3), cyclic_table(4), klein_table()]
        if max_order >= 6:
            tables.append(symmetric3_table())
        objs = []
        for op in tables:
            if len(op) > max(max_order, 1):
                continue
            for N in normal_subgroups(op, 0):
                objs.append(self.make(op, 0, N))
        return Catalog(self, objs, f"ordgrp<= {max_order}")


def subgroups(op, unit) -> list[frozenset]:
    n = len(op)
    found = set()
    others = [y for y in range(n) if y != unit]
    for bits in cartesian((0, 1), repeat=n - 1):
        S = frozenset([unit] + [x for x, b in zip(others, bits) if b])
        if submonoid_closure(op, unit, S) == S:
            found.add(S)
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def ordgrp_normal_epi_char(f: Mor) -> bool:
    """``f(G) = H``, ``f(M) = N`` and ``ker f`` generated by ``M ∩ ker f``."""
    if not is_surjective(f):
        return False
    A, B = f.dom, f.cod
    if {f.map[m] for m in A["cone"]} != set(B["cone"]):
        return False
    u = B["unit"]
    ker = {x for x in range(A.size) if f.map[x] == u}
    gens = ker & set(A["cone"])
    return submonoid_closure(A["op"], A["unit"], gens | {group_inverses(A["op"], A["unit"])[g] for g in gens}) == ker


REL_REFLEXIVE = register_backend(Rel("reflexive"))
REL_EQUIVALENCE = register_backend(Rel("equivalence"))
REL_PREORDER = register_backend(Rel("preorder"))
GRPD = register_backend(Grpd())
ORDGRP = register_backend(OrdGrp())
