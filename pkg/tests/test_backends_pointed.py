from collections import Counter

import pytest
from hypothesis import given, strategies as st

from prenormal import engine as E
from prenormal.backends.pointed import (CMON, MON, POCMON, PREORDCMON, PSET, cmon_normal_epi_char, cyclic_monoid,
                                        enumerate_monoid_tables, is_associative, join_chain, join_square,
                                        monoid_hom_tables, unstable_regular_epi_objects, pocmon_normal_epi_char,
                                        preordcmon_normal_epi_char, pset_normal_epi_char, truncated_addition)
from prenormal.core import CongruenceError, all_functions, identity, is_iso, is_mono, pullback
from prenormal.closure import from_table


# OEIS A058129 (monoids) and A058131 (commutative monoids) up to iso
@pytest.mark.parametrize("backend,counts", [(MON, [1, 2, 7, 35]), (CMON, [1, 2, 5, 19])])
def test_monoid_counts_up_to_iso(backend, counts):
    got = Counter(X.size for X in backend.enumerate(4))
    assert [got[n] for n in range(1, 5)] == counts


def test_ordered_monoid_counts():
    pre = Counter(X.size for X in PREORDCMON.enumerate(3))
    po = Counter(X.size for X in POCMON.enumerate(3))
    assert [pre[n] for n in (1, 2, 3)] == [1, 6, 48]
    assert [po[n] for n in (1, 2, 3)] == [1, 4, 27]


def test_enumerated_tables_are_monoids():
    for op in enumerate_monoid_tables(3):
        assert is_associative(op)
        assert all(op[0][x] == x == op[x][0] for x in range(3))


def brute_homs(A, B):
    return {t for t in all_functions(A.size, B.size) if MON.is_morphism(A, B, t)}


@given(st.sampled_from(MON.catalog(max_order=3).objects), st.sampled_from(MON.catalog(max_order=3).objects))
def test_hom_search_matches_brute_force(A, B):
    assert set(monoid_hom_tables(A, B)) == brute_homs(A, B)


def test_unstable_regular_epi_objects():
    o = unstable_regular_epi_objects(PREORDCMON)
    A, B, C = o["A"], o["B"], o["C"]
    p = PREORDCMON.mor(A, B, (0, 1, 1, 2))
    i = PREORDCMON.mor(C, B, (0, 2))
    assert E.is_regular_epi(p)
    assert not E.is_normal_epi(p)
    assert not preordcmon_normal_epi_char(p)
    D, _, pc = pullback(p, i)
    assert D == o["D"] or D.size == 2
    assert is_mono(pc) and not is_iso(pc) and not E.is_regular_epi(pc)
    # the discrete preorder with 0+0=0, 0+2=2, 2+2=2
    assert sorted(D["leq"]) == [(0, 0), (1, 1)]
    assert D["op"] == ((0, 1), (1, 1))


def test_join_square_kernel_and_factorisation():
    T = join_chain(CMON, 2)
    P = join_square(CMON)
    f = CMON.mor(P, T, (0, 1, 1, 1))
    kr = E.kernel(f)
    assert kr.K.size == 1
    fa = E.factorise(f)
    assert fa.e.map == (0, 1, 2, 3) and fa.m.map == f.map
    assert fa.m_has_trivial_kernel and not E.is_normal_epi(f)
    assert not cmon_normal_epi_char(f)


def test_cokernel_of_cyclic_subgroup():
    Z4 = cyclic_monoid(CMON, 4)
    sub = CMON.subobjects(Z4)
    k = next(s for s in sub if s.dom.size == 2)
    cr = E.cokernel(k)
    assert cr.Q.size == 2
    assert cr.q.map == (0, 1, 0, 1)


def test_truncated_addition_is_not_a_group():
    T = truncated_addition(CMON, 3)
    assert T["op"][2][2] == 2


def test_quotient_rejects_incompatible_congruence():
    T = truncated_addition(CMON, 3)
    with pytest.raises(CongruenceError):
        CMON.quotient(T, from_table((0, 0, 2)))


def test_pset_normal_epis():
    two, one = PSET.make(2), PSET.make(1)
    p = PSET.mor(two, one, (0, 0))
    assert E.is_normal_epi(p) and pset_normal_epi_char(p)
    P, a, _ = pullback(p, p)
    assert not E.is_normal_epi(a) and not pset_normal_epi_char(a)


@pytest.mark.parametrize("backend,char", [(CMON, cmon_normal_epi_char), (PREORDCMON, preordcmon_normal_epi_char),
                                          (POCMON, pocmon_normal_epi_char), (PSET, pset_normal_epi_char)])
def test_characterisations_agree_on_small_catalogs(backend, char):
    cat = backend.catalog(max_order=3) if backend is not PREORDCMON else backend.catalog(max_order=2)
    for f in cat.morphisms():
        assert char(f) == E.is_normal_epi(f), f


def test_kernels_of_pointed_maps_are_preimages_of_zero():
    cat = CMON.catalog(max_order=3)
    for f in cat.morphisms():
        kr = E.kernel(f)
        assert sorted(kr.k.map) == [x for x in range(f.dom.size) if f.map[x] == 0]


def test_identity_is_in_both_classes():
    for X in PREORDCMON.catalog().objects:
        f = identity(X)
        assert E.is_normal_epi(f) and E.has_trivial_kernel(f)
