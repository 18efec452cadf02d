from itertools import product

from hypothesis import given, strategies as st

from prenormal.backends.pointed import CMON, MON
from prenormal.backends.relative import GRPD
from prenormal.closure import (UnionFind, equivalence_table, from_table, groupoid_congruence_table,
                               monoid_congruence_table, partition_pairs, smallest_congruence, transitive_closure)


def set_partitions(n):
    """Restricted growth strings, as class tables with minimal representatives."""
    def grow(prefix, top):
        if len(prefix) == n:
            reps = {}
            yield tuple(reps.setdefault(c, i) for i, c in enumerate(prefix))
            return
        for c in range(top + 2):
            yield from grow(prefix + [c], max(top, c))
    yield from grow([], -1)


def naive_closure(pairs, n):
    rel = set(pairs) | {(x, x) for x in range(n)}
    while True:
        new = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not new:
            return frozenset(rel)
        rel |= new


def is_monoid_congruence(table, op):
    n = len(op)
    return all(table[op[x][c]] == table[op[y][c]] and table[op[c][x]] == table[op[c][y]]
               for x in range(n) for y in range(n) if table[x] == table[y] for c in range(n))


MONOIDS = [X for X in MON.catalog(max_order=3).objects] + [X for X in CMON.catalog(max_order=4).objects]


@given(st.sampled_from(MONOIDS), st.data())
def test_monoid_congruence_is_least_containing_seed(X, data):
    n = X.size
    seed = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3))
    op = X["op"]
    got = partition_pairs(monoid_congruence_table(seed, op))
    meet = None
    for t in set_partitions(n):
        if all(t[a] == t[b] for a, b in seed) and is_monoid_congruence(t, op):
            pairs = partition_pairs(t)
            meet = pairs if meet is None else meet & pairs
    assert got == meet


@given(st.integers(1, 6), st.data())
def test_transitive_closure_matches_naive(n, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=10))
    assert transitive_closure(pairs, n) == naive_closure(pairs, n)


@given(st.integers(1, 7), st.data())
def test_union_find_matches_equivalence_closure(n, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=8))
    table = equivalence_table(pairs, n)
    sym = pairs + [(b, a) for a, b in pairs]
    assert partition_pairs(table) == naive_closure(sym, n)
    # representatives are the class minima
    assert all(table[x] <= x and table[table[x]] == table[x] for x in range(n))


def test_union_find_reports_merges():
    uf = UnionFind(3)
    assert uf.union(0, 2)
    assert not uf.union(2, 0)
    assert uf.table() == (0, 1, 0)


def test_congruence_classes():
    c = from_table((0, 1, 0, 1))
    assert c.classes() == [(0, 2), (1, 3)]
    assert c.relates(0, 2) and not c.relates(0, 1)


def test_smallest_congruence_kinds():
    X = CMON.catalog(max_order=4).objects[-1]
    c = smallest_congruence([(0, 1)], X, "monoid-congruence")
    assert c.relates(0, 1)
    pre = smallest_congruence([(0, 1), (1, 2)], X, "preorder")
    assert pre.relates(0, 2) and not pre.relates(2, 0)


def test_groupoid_congruence_is_composition_compatible():
    for X in GRPD.catalog().objects:
        comp = X["comp"]
        for a, b in product(range(X.size), repeat=2):
            table = groupoid_congruence_table(X, [(a, b)] if X["src"][a] == X["src"][b] and X["tgt"][a] == X["tgt"][b] else [])
            for x, y in product(range(X.size), repeat=2):
                if table[x] != table[y]:
                    continue
                for c in range(X.size):
                    if comp[x][c] >= 0 and comp[y][c] >= 0:
                        assert table[comp[x][c]] == table[comp[y][c]]
