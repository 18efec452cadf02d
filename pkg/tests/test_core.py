import json

import pytest
from hypothesis import given, strategies as st

from prenormal.backends.pointed import CMON, PREORDCMON, PSET, cyclic_monoid, join_chain, unstable_regular_epi_objects
from prenormal.backends.relative import REL_EQUIVALENCE, REL_PREORDER
from prenormal.core import (CompositionError, InvalidMorphism, InvalidObject, Mor, Obj, Square, Unsupported,
                            all_functions, check_subreflectivity, compose, coreflection, identity, induced_map,
                            inverse, is_epi, is_iso, is_mono, is_pullback, is_trivial_map, mor_from_json,
                            mor_to_json, obj_from_json, obj_to_json, pullback)


def test_compose_is_diagrammatic_order():
    Z4 = cyclic_monoid(CMON, 4)
    double = CMON.mor(Z4, Z4, (0, 2, 0, 2))
    assert compose(double, double).map == (0, 0, 0, 0)
    with pytest.raises(CompositionError):
        compose(double, identity(join_chain(CMON, 2)))


def test_obj_is_hashable_and_structural():
    a, b = cyclic_monoid(CMON, 3), cyclic_monoid(CMON, 3)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1


def test_validate_rejects_bad_tables():
    with pytest.raises(InvalidObject):
        CMON.make([[0, 1], [1, 1], [0, 0]])
    Z2 = cyclic_monoid(CMON, 2)
    with pytest.raises(InvalidMorphism):
        CMON.mor(Z2, Z2, (1, 0))


def test_pullback_along_identity():
    A = cyclic_monoid(CMON, 4)
    B = cyclic_monoid(CMON, 2)
    f = CMON.mor(A, B, (0, 1, 0, 1))
    P, to_f, to_id = pullback(f, identity(B))
    assert P.size == A.size
    assert is_iso(to_f)
    assert is_pullback(Square(to_id, to_f, identity(B), f)) or is_pullback(Square(to_f, to_id, f, identity(B)))


def test_pset_product_pullback():
    two, one = PSET.make(2), PSET.make(1)
    p = PSET.mor(two, one, (0, 0))
    P, a, b = pullback(p, p)
    assert P.size == 4
    assert is_epi(p)


def test_preordcmon_pullback_is_mono_not_iso():
    o = unstable_regular_epi_objects(PREORDCMON)
    p = PREORDCMON.mor(o["A"], o["B"], (0, 1, 1, 2))
    i = PREORDCMON.mor(o["C"], o["B"], (0, 2))
    D, pd, pc = pullback(p, i)
    assert D.size == 2
    assert D["leq"] == frozenset({(0, 0), (1, 1)}) or sorted(D["leq"]) == [(0, 0), (1, 1)]
    assert is_mono(pc) and not is_iso(pc)


def test_iso_checks_inverse_preserves_structure():
    two = join_chain(PREORDCMON, 2)
    chain = join_chain(PREORDCMON, 2, leq=[(0, 1)])
    f = PREORDCMON.mor(two, chain, (0, 1))
    assert not is_iso(f)
    assert is_iso(identity(chain))
    g = inverse(identity(chain))
    assert g.map == (0, 1)


def test_trivial_maps_and_coreflections():
    X = REL_EQUIVALENCE.make(2, [(0, 1)])
    Z, c = coreflection(X)
    assert Z["rel"] == frozenset({(0, 0), (1, 1)})
    assert c.map == (0, 1)
    assert is_trivial_map(REL_EQUIVALENCE.mor(X, X, (0, 0)))
    assert not is_trivial_map(identity(X))


def test_subreflectivity_of_a_chain():
    X = REL_PREORDER.make(2, [(0, 1)])
    rep = check_subreflectivity(X, catalog=REL_PREORDER.catalog(max_order=2))
    assert rep.exists and rep.reflection.size == 1


def test_induced_map():
    Z4 = cyclic_monoid(CMON, 4)
    q = CMON.mor(Z4, cyclic_monoid(CMON, 2), (0, 1, 0, 1))
    assert induced_map(q, identity(Z4)) is None
    assert induced_map(q, q) == (0, 1)


def test_json_round_trip_and_rejects_unknown_fields():
    for X in CMON.catalog(max_order=3).objects + REL_PREORDER.catalog(max_order=2).objects:
        d = json.loads(json.dumps(obj_to_json(X)))
        assert obj_from_json(d) == X
        with pytest.raises(InvalidObject):
            obj_from_json({**d, "colour": "red"})
    f = CMON.mor(cyclic_monoid(CMON, 4), cyclic_monoid(CMON, 2), (0, 1, 0, 1))
    assert mor_from_json(json.loads(json.dumps(mor_to_json(f)))) == f
    with pytest.raises(Unsupported):
        obj_from_json({"backend": "no-such", "size": 0, "structure": {}})


@given(st.integers(0, 3), st.integers(1, 3))
def test_all_functions_counts(n, m):
    assert sum(1 for _ in all_functions(n, m)) == m ** n


def test_catalog_orbit_reps_cover_homs(cmon_small):
    cat = cmon_small
    for A in cat.objects:
        for B in cat.objects:
            reps = cat.orbit_reps(A, B)
            homs = {f.map for f in cat.homs(A, B)}
            assert {f.map for f in reps} <= homs
            closure = set()
            for f in reps:
                for a in cat.automorphisms(A):
                    for b in cat.automorphisms(B):
                        closure.add(tuple(b[f.map[x]] for x in a))
            assert closure == homs


def test_mor_is_immutable():
    f = identity(cyclic_monoid(CMON, 2))
    with pytest.raises(Exception):
        f.map = (1, 0)
    assert isinstance(f, Mor) and isinstance(f.dom, Obj)
