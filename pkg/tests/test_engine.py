import json

import pytest
from hypothesis import given, strategies as st

from prenormal import engine as E
from prenormal.backends.pointed import CMON, MON, PREORDCMON, PSET, cyclic_monoid, join_chain, unstable_regular_epi_objects
from prenormal.backends.relative import GRPD, ORDGRP, REL_EQUIVALENCE, REL_PREORDER, REL_REFLEXIVE
from prenormal.core import CompositionError, Mor, Square, compose, identity, induced_map, is_iso, is_trivial_map

SMALL = {
    "cmon": CMON.catalog(max_order=3),
    "preordcmon": PREORDCMON.catalog(max_order=2),
    "rel-equivalence": REL_EQUIVALENCE.catalog(max_order=3),
    "rel-reflexive": REL_REFLEXIVE.catalog(max_order=2),
    "ordgrp": ORDGRP.catalog(max_order=4),
    "grpd": GRPD.catalog(max_order=4),
}
MAPS = [f for cat in SMALL.values() for f in cat.morphisms()]


@given(st.sampled_from(MAPS))
def test_factorisation_composes_back(f):
    fa = E.factorise(f)
    assert compose(fa.e, fa.m).map == f.map
    assert fa.e_is_normal_epi
    assert fa.m_has_trivial_kernel


@given(st.sampled_from(MAPS))
def test_kernel_composite_is_trivial(f):
    kr = E.kernel(f)
    assert is_trivial_map(compose(kr.k, f))
    assert kr.square.commutes()


def is_cokernel_of_some_subobject(f):
    """Oracle: f is, up to iso of codomains, the cokernel of the inclusion of some submonoid."""
    for s in CMON.subobjects(f.dom):
        q = E.cokernel(s).q
        t = induced_map(q, f)
        if t is not None and CMON.is_morphism(q.cod, f.cod, t) and is_iso(Mor(q.cod, f.cod, t)):
            return True
    return False


@given(st.sampled_from(list(CMON.catalog(max_order=3).morphisms())))
def test_normal_epi_matches_cokernel_oracle(f):
    assert E.is_normal_epi(f) == is_cokernel_of_some_subobject(f)


@given(st.sampled_from(MAPS))
def test_kernel_is_normal_mono(f):
    assert E.is_normal_mono(E.kernel(f).k)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_kernel_and_cokernel_universal_on_catalog(name):
    cat = SMALL[name]
    for f in list(cat.morphisms())[:60]:
        kr = E.kernel(f)
        assert E.kernel_is_universal(kr, f, cat)
        assert E.cokernel_is_universal(E.cokernel(kr.k), kr.k, cat)


def test_lift_diagonal_unique_and_rejects_non_commuting():
    Z4 = cyclic_monoid(CMON, 4)
    Z2 = cyclic_monoid(CMON, 2)
    e = CMON.mor(Z4, Z2, (0, 1, 0, 1))
    m = identity(Z2)
    d = E.lift_diagonal(e, m, e, identity(Z2))
    assert d.map == (0, 1)
    with pytest.raises(CompositionError):
        E.lift_diagonal(e, m, CMON.mor(Z4, Z2, (0, 0, 0, 0)), identity(Z2))


@pytest.mark.parametrize("name", sorted(SMALL))
def test_fs_axioms_on_small_catalogs(name):
    rep = E.check_fs_axioms(SMALL[name])
    assert rep.verdict == "pass", rep.to_text()


def test_mon_reports_no_violation_without_claiming_prenormality():
    rep = E.check_fs_axioms(MON.catalog(max_order=3))
    assert rep.passed
    assert any("not a proof" in n for n in rep.notes)


def test_preorder_relations_fail_factorisation_with_witness():
    rep = E.check_fs_axioms(REL_PREORDER.catalog(max_order=3))
    assert rep.verdict == "fail"
    w = next(w for w in rep.witnesses if w["case"] == "factorisation")
    assert E.recheck_witness(w)


def test_pset_stability_witness_rechecks():
    rep = E.check_pullback_stability(PSET.catalog(), along="all")
    assert rep.verdict == "fail"
    assert all(E.recheck_witness(w) for w in rep.witnesses)
    assert E.check_pullback_stability(PSET.catalog(), along="monos").passed
    assert E.check_pullback_stability(PSET.catalog(), along="normal_monos").passed


def test_report_serialisation_is_deterministic():
    a = E.report_json(E.run_laws(SMALL["cmon"], ["fs-axioms"], mode="sampled", seed=3, samples=10))
    b = E.report_json(E.run_laws(SMALL["cmon"], ["fs-axioms"], mode="sampled", seed=3, samples=10))
    assert a == b
    assert json.loads(a)[0]["law"] == "fs-axioms"


def test_merge_reports():
    r1, r2 = E.LawReport("a", cases=2), E.LawReport("b", cases=3)
    r2.fail("x", "boom")
    m = E.merge_reports("both", [r1, r2])
    assert m.verdict == "fail" and m.cases == 5 and m.stats == {"b/x": 1}


def test_witness_cap():
    r = E.LawReport("many")
    for i in range(20):
        r.fail("case", str(i))
    assert len(r.witnesses) == E.MAX_WITNESSES and r.stats["case"] == 20


def test_pb_square_of_normal_epis_is_pushout():
    Z2 = cyclic_monoid(CMON, 2)
    one = cyclic_monoid(CMON, 1)
    p = CMON.mor(Z2, one, (0, 0))
    P, a, b = CMON.pullback(p, p)
    rep = E.check_pb_square_is_pushout(Square(a, b, p, p), SMALL["cmon"])
    assert rep.verdict == "pass"


def test_pb_square_hypotheses_reported():
    T = join_chain(CMON, 2)
    f = CMON.mor(T, T, (0, 0))
    rep = E.check_pb_square_is_pushout(Square(identity(T), identity(T), f, f), SMALL["cmon"])
    assert rep.verdict == "unsupported"


def test_cancellation_prefilter_agrees_with_full_check():
    for cat in (CMON.catalog(max_order=2), REL_PREORDER.catalog(max_order=2), GRPD.catalog(max_order=2)):
        a = E.suite_cancellation(cat)
        b = E.suite_cancellation(cat, prefilter=False)
        assert a.verdict == b.verdict
        assert a.stats.get("hypotheses-met") == b.stats.get("hypotheses-met")
        assert a.stats.get("right-square-pullback") == b.stats.get("right-square-pullback")


@pytest.mark.parametrize("name", ["cmon", "preordcmon", "rel-equivalence"])
def test_lemma_suites_on_small_catalogs(name):
    for law in ("pb-pushout", "cancellation", "barr-kock", "exactness", "noether", "kernel-formula",
                "trivial-kernel-cancellation", "counits"):
        rep = E.LAWS[law](SMALL[name])
        assert rep.verdict == "pass", (law, rep.to_text())


def test_exactness_of_kernel_cokernel_pair():
    Z4 = cyclic_monoid(CMON, 4)
    Z2 = cyclic_monoid(CMON, 2)
    q = CMON.mor(Z4, Z2, (0, 1, 0, 1))
    k = E.kernel(q).k
    res = E.exactness(k, q)
    assert res.exact and res.f_is_kernel and res.g_is_cokernel


def test_pullback_exactness_iff_trivial_kernel():
    rep = E.suite_exactness(SMALL["rel-equivalence"])
    assert rep.passed
    assert rep.stats["pullbacks-exact"] > 0 and rep.stats["pullbacks-not-exact"] > 0


def test_noether_explicit_iso():
    from prenormal.backends.pointed import join_square
    for A in SMALL["cmon"].objects + [join_square(CMON)]:
        subs = E.normal_subobjects(A)
        for m in subs:
            for n in subs:
                if E._comparison_into(n, m) is not None:
                    nr = E.noether_third(m, n)
                    assert nr.verdict and is_iso(nr.comparison)
                    assert json.dumps(nr.to_json())


def test_regular_epi_examples():
    o = unstable_regular_epi_objects(PREORDCMON)
    p = PREORDCMON.mor(o["A"], o["B"], (0, 1, 1, 2))
    assert E.is_regular_epi(p) and not E.is_normal_epi(p)
    for f in SMALL["cmon"].morphisms():
        if E.is_normal_epi(f):
            assert E.is_regular_epi(f)


def test_cross_validation_all_backends():
    for cat in SMALL.values():
        assert E.cross_validate(cat).passed
