from itertools import product

import pytest
from hypothesis import given, strategies as st

from prenormal import engine as E
from prenormal.backends.relative import (GRPD, ORDGRP, REL_EQUIVALENCE, REL_PREORDER, REL_REFLEXIVE,
                                         codiscrete_groupoid, cyclic_table, discrete_groupoid, grpd_normal_epi_char,
                                         group_as_groupoid, kind_closure, klein_table, normal_subgroups,
                                         ordgrp_normal_epi_char, preorder_counterexample, rel_normal_epi_char,
                                         relations_of_kind, symmetric3_table)
from prenormal.core import Unsupported, identity


@pytest.mark.parametrize("kind,counts", [("reflexive", [1, 1, 4, 64, 4096]), ("preorder", [1, 1, 4, 29, 355]),
                                         ("equivalence", [1, 1, 2, 5, 15])])
def test_labelled_relation_counts(kind, counts):
    assert [len(relations_of_kind(kind, n)) for n in range(5)] == counts


def test_preorders_up_to_iso():
    from collections import Counter
    got = Counter(X.size for X in REL_PREORDER.enumerate(3))
    assert [got[n] for n in range(4)] == [1, 1, 3, 9]  # OEIS A000798


def test_counterexample_factorisation():
    X, Y, f = preorder_counterexample(REL_PREORDER)
    K = E.kernel(f).K
    assert sorted(K["rel"]) == [(0, 0), (1, 1), (2, 1), (2, 2), (3, 3)]
    fa = E.factorise(f)
    assert fa.e.map == (0, 1, 1, 2)
    assert fa.m.map == (0, 1, 0)
    assert fa.e_is_normal_epi and not fa.m_has_trivial_kernel
    # elements 1 and 3 of the domain, i.e. classes 0 and 2 of the quotient
    assert fa.witness_on_failure == {"quotient": (0, 2), "domain": (0, 3)}


def test_kernel_formula_is_kernel_pair_meet_domain_relation():
    for f in REL_REFLEXIVE.catalog(max_order=3).morphisms():
        K = E.kernel(f).K
        rho = f.dom["rel"]
        expected = {(a, b) for a, b in rho if f.map[a] == f.map[b]}
        assert set(K["rel"]) == expected


@given(st.sampled_from(["reflexive", "preorder", "equivalence"]), st.integers(1, 4), st.data())
def test_kind_closure_is_idempotent_and_of_kind(kind, n, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=6))
    r = kind_closure(kind, pairs, n)
    assert kind_closure(kind, r, n) == r
    assert r in relations_of_kind(kind, n)
    assert set(pairs) <= r


@pytest.mark.parametrize("backend", [REL_REFLEXIVE, REL_EQUIVALENCE, REL_PREORDER])
def test_relation_characterisation(backend):
    for f in backend.catalog(max_order=3).morphisms():
        assert rel_normal_epi_char(f, backend.kind) == E.is_normal_epi(f)


def test_groupoid_examples():
    Z2 = group_as_groupoid(cyclic_table(2))
    one = group_as_groupoid(cyclic_table(1))
    f = GRPD.mor(Z2, one, (0, 0))
    assert E.is_normal_epi(f) and grpd_normal_epi_char(f)
    D2 = discrete_groupoid(2)
    g = GRPD.mor(D2, one, (0, 0))
    assert grpd_normal_epi_char(g) == E.is_normal_epi(g)
    assert GRPD.is_trivial(D2) and not GRPD.is_trivial(Z2)


def test_groupoid_coequalizer_of_non_parallel_seed_is_unsupported():
    C = codiscrete_groupoid(2)
    with pytest.raises(Unsupported):
        GRPD.coequalizer_seed(C, [(0, 1)])


def test_groupoid_cokernel_of_normal_subgroup():
    V = group_as_groupoid(klein_table())
    sub = [s for s in GRPD.subobjects(V) if s.dom.size == 2]
    cr = E.cokernel(sub[0])
    assert cr.Q.size == 2


def test_normal_subgroups_of_s3():
    op = symmetric3_table()
    sizes = sorted(len(N) for N in normal_subgroups(op, 0))
    assert sizes == [1, 3, 6]


def test_ordgrp_kernel_and_cokernel():
    G = ORDGRP.make(cyclic_table(4), 0, list(range(4)))
    H = ORDGRP.make(cyclic_table(2), 0, [0, 1])
    f = ORDGRP.mor(G, H, (0, 1, 0, 1))
    kr = E.kernel(f)
    assert sorted(kr.K["cone"]) == [0, 2]
    assert kr.k.map == (0, 1, 2, 3)
    cr = E.cokernel(kr.k)
    assert cr.info["generated_equals_cone"]
    assert E.is_normal_epi(f) and ordgrp_normal_epi_char(f)


def test_ordgrp_coreflection():
    for X in ORDGRP.catalog().objects:
        c = ORDGRP.coreflection(X)
        assert c.map == tuple(range(X.size))
        assert sorted(c.dom["cone"]) == [0]


@pytest.mark.parametrize("backend", [GRPD, ORDGRP])
def test_structured_characterisations(backend):
    for f in backend.catalog().morphisms():
        assert backend.normal_epi_char(f) == E.is_normal_epi(f)


def test_groupoid_identities_and_inverses():
    for X in GRPD.catalog().objects:
        comp, inv = X["comp"], X["inv"]
        for a in range(X.size):
            assert comp[a][inv[a]] == X["tgt"][a]
            assert comp[inv[a]][a] == X["src"][a]
        for a, b in product(range(X.size), repeat=2):
            if comp[a][b] >= 0:
                assert X["src"][comp[a][b]] == X["src"][b]
        assert E.is_normal_epi(identity(X))
