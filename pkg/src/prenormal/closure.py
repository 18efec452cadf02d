"""Fixpoint closures: equivalence, preorder, monoid and groupoid congruences."""

from __future__ import annotations

from dataclasses import dataclass

from .core import CongruenceError, Obj, backend_of

KINDS = ("equivalence", "preorder", "monoid-congruence", "groupoid-congruence")


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True

    def table(self):
        """Element -> least element of its class."""
        return tuple(self.find(x) for x in range(len(self.parent)))


@dataclass(frozen=True)
class Congruence:
    size: int
    pairs: frozenset
    kind: str

    @property
    def symmetric(self):
        return self.kind != "preorder"

    def relates(self, x, y):
        return x == y or (x, y) in self.pairs

    def class_table(self) -> tuple:
        """Element -> minimal representative of its class (symmetric kinds only)."""
        if not self.symmetric:
            raise ValueError("a preorder has no classes")
        uf = UnionFind(self.size)
        for x, y in self.pairs:
            uf.union(x, y)
        return uf.table()

    def classes(self) -> list[tuple]:
        table = self.class_table()
        out: dict[int, list[int]] = {}
        for x, r in enumerate(table):
            out.setdefault(r, []).append(x)
        return [tuple(out[r]) for r in sorted(out)]


def partition_pairs(table) -> frozenset:
    """All pairs ``(x, y)`` with ``table[x] == table[y]``."""
    blocks: dict = {}
    for x, r in enumerate(table):
        blocks.setdefault(r, []).append(x)
    return frozenset((x, y) for b in blocks.values() for x in b for y in b)


def from_table(table, kind="equivalence") -> Congruence:
    return Congruence(len(table), partition_pairs(table), kind)


def transitive_closure(pairs, n: int, reflexive: bool = True) -> frozenset:
    """Reflexive (optional) transitive closure by Warshall's algorithm on bitsets."""
    rows = [0] * n
    for x, y in pairs:
        rows[x] |= 1 << y
    if reflexive:
        for x in range(n):
            rows[x] |= 1 << x
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return frozenset((x, y) for x in range(n) for y in range(n) if rows[x] >> y & 1)


def equivalence_table(seed, n: int) -> tuple:
    uf = UnionFind(n)
    for x, y in seed:
        uf.union(x, y)
    return uf.table()


def monoid_congruence_table(seed, op, commutative: bool = False) -> tuple:
    """Smallest congruence of the monoid with table ``op`` containing ``seed``.

    Every processed pair ``(x, y)`` enqueues its one-sided translates, so the
    resulting partition is closed under two-sided multiplication.
    """
    n = len(op)
    uf = UnionFind(n)
    queue = list(seed)
    while queue:
        x, y = queue.pop()
        if not uf.union(x, y):
            continue
        ox, oy = op[x], op[y]
        for c in range(n):
            queue.append((ox[c], oy[c]))
            if not commutative:
                queue.append((op[c][x], op[c][y]))
    return uf.table()


def groupoid_normal_closure(X: Obj, seeds) -> frozenset:
    """Smallest wide subgroupoid containing ``seeds`` closed under conjugation of loops."""
    src, tgt, comp, inv = X["src"], X["tgt"], X["comp"], X["inv"]
    n = X.size
    N = {a for a in range(n) if src[a] == a} | set(seeds)
    changed = True
    while changed:
        changed = False
        new = set()
        for a in N:
            new.add(inv[a])
            for b in N:
                c = comp[a][b]
                if c >= 0:
                    new.add(c)
            if src[a] == tgt[a]:
                for g in range(n):
                    if src[g] == src[a]:
                        new.add(comp[comp[g][a]][inv[g]])
        if not new <= N:
            N |= new
            changed = True
    return frozenset(N)


def groupoid_congruence_table(X: Obj, seed) -> tuple:
    """Arrow classes ``g ~ n1 g n2`` for the normal subgroupoid generated by the seed.

    A seed pair ``(a, b)`` with a common source forces ``a . b^-1`` to become
    an identity.
    """
    src, tgt, comp, inv = X["src"], X["tgt"], X["comp"], X["inv"]
    gens = []
    for a, b in seed:
        if src[a] != src[b]:
            raise CongruenceError("groupoid seed pairs must share a source", (a, b))
        gens.append(comp[a][inv[b]])
    N = groupoid_normal_closure(X, gens)
    uf = UnionFind(X.size)
    for g in range(X.size):
        for n2 in N:
            if tgt[n2] != src[g]:
                continue
            h = comp[g][n2]
            for n1 in N:
                if src[n1] == tgt[g]:
                    uf.union(g, comp[n1][h])
    return uf.table()


def smallest_congruence(seed, X: Obj, kind: str) -> Congruence:
    """Least relation of the given kind on ``X`` containing ``seed``."""
    seed = [(int(x), int(y)) for x, y in seed]
    for x, y in seed:
        if not (0 <= x < X.size and 0 <= y < X.size):
            raise CongruenceError("seed pair outside the carrier", (x, y))
    if kind == "equivalence":
        return from_table(equivalence_table(seed, X.size), kind)
    if kind == "preorder":
        return Congruence(X.size, transitive_closure(seed, X.size), kind)
    if kind == "monoid-congruence":
        commutative = getattr(backend_of(X), "commutative", False)
        return from_table(monoid_congruence_table(seed, X["op"], commutative), kind)
    if kind == "groupoid-congruence":
        return from_table(groupoid_congruence_table(X, seed), kind)
    raise ValueError(f"unknown congruence kind {kind!r}")


def quotient(X: Obj, c: Congruence):
    """Quotient of ``X`` by ``c`` with structure induced by the backend."""
    return backend_of(X).quotient(X, c)


def image_relation(rel, table) -> set:
    return {(table[x], table[y]) for x, y in rel}
