import pytest

from prenormal.casestudies import (BoundedFPMonoid, IdealCategory, InputError, displayed_formula, ideal_cokernel,
                                   ideal_factorise, ideal_kernel, ideal_normal_epis, ideal_report,
                                   mon_counterexample_check, orbit_maxima, transposed_formula)
from math import gcd


def test_bound_must_contain_witnesses():
    with pytest.raises(InputError):
        mon_counterexample_check(3)


@pytest.mark.parametrize("L", [4, 5, 6, 7, 8, 9, 10])
def test_verdict_stable_across_bounds(L):
    rep = mon_counterexample_check(L)
    assert rep.passed
    assert rep.stats["in_kernel_pair"] and not rep.stats["related_in_congruence"]


def test_chi_values():
    rep = mon_counterexample_check(4)
    assert rep.stats["chi"]["xzx"] == {"x": 2, "y": 0, "z": 1}
    assert rep.stats["chi"]["yzy"]["y"] == 2


def test_class_maxima_match_orbit_search():
    M = BoundedFPMonoid("xyz", [("xx", "yy")], 6)
    maxima = M.letter_maxima()
    for w in M.words[::7]:
        assert maxima[M.cls(w)] == orbit_maxima(M, w)


def test_classes_embed_as_bound_grows():
    small = BoundedFPMonoid("xyz", [("xx", "yy")], 5)
    big = BoundedFPMonoid("xyz", [("xx", "yy")], 6)
    for u in small.words:
        for v in small.words[:40]:
            assert small.same(u, v) == big.same(u, v)


def test_bounded_monoid_basics():
    M = BoundedFPMonoid("xy", [("xx", "yy")], 4)
    assert M.same("xx", "yy")
    assert M.same("xxy", "yyy")
    assert not M.same("x", "y")
    assert M.unit == M.cls("")
    assert M.multiply("xy", "xyx") is None
    assert M.multiply("x", "x") == M.cls("yy")


def test_ideal_examples():
    assert ideal_kernel(25) == 2
    assert ideal_kernel(3) == 10
    assert ideal_normal_epis() == {1, 2, 5, 10}
    fac = ideal_factorise(25)
    assert not fac["exists"]
    assert fac["obstruction"] == {"kernel": 2, "forced_q": 5, "m": 5, "kernel_of_m": 2}


def test_ideal_kernel_closed_form_up_to_200():
    cat = IdealCategory(bound=200)
    for n in range(1, 201):
        assert cat.kernel(n) == 10 // gcd(n, 10) == transposed_formula(n)
        assert cat.kernel(n) == cat.cokernel(n)


def test_displayed_formula_disagrees_at_25():
    assert displayed_formula(25) == 5
    assert ideal_kernel(25) == 2
    assert ideal_factorise(25)["formula_mismatch"]


def test_ideal_is_absorbing_and_20_is_trivial():
    cat = IdealCategory(bound=100)
    assert cat.trivial(20)
    assert all(cat.trivial(10 * k * m) for k in range(1, 5) for m in range(1, 5))
    assert ideal_cokernel(4) == 5


def test_ideal_report_passes():
    rep = ideal_report(300)
    assert rep.passed and rep.stats["normal_epis"] == [1, 2, 5, 10]


def test_out_of_range_arrow():
    with pytest.raises(InputError):
        IdealCategory(bound=10).kernel(11)
