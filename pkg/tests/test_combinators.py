import json

import pytest

from prenormal import core
from prenormal import engine as E
from prenormal.backends.pointed import CMON, cyclic_monoid
from prenormal.backends.relative import REL_EQUIVALENCE, REL_REFLEXIVE
from prenormal.combinators import ARROW, SINGLE, Shape, check_evaluation, functor_backend, slice_backend
from prenormal.core import InvalidObject, Unsupported, obj_from_json, obj_to_json


@pytest.fixture(scope="module")
def cmon_base():
    return CMON.catalog(max_order=2)


def test_slice_over_cmon_laws(cmon_base):
    C = cyclic_monoid(CMON, 2)
    S = slice_backend(CMON, C)
    cat = S.catalog(cmon_base, cap=20)
    assert len(cat.objects) > 1
    for rep in E.run_laws(cat, ["fs-axioms", "cross-validation", "counits"]):
        assert rep.passed, rep.to_text()


def test_slice_normal_epis_match_base(cmon_base):
    C = cyclic_monoid(CMON, 2)
    S = slice_backend(CMON, C)
    for f in S.catalog(cmon_base, cap=20).morphisms():
        assert E.is_normal_epi(f) == E.is_normal_epi(S.underlying(f))
        assert E.kernel(f).k.map == E.kernel(S.underlying(f)).k.map


def test_slice_trivial_objects_and_coreflection():
    base_cat = REL_EQUIVALENCE.catalog(max_order=2)
    C = REL_EQUIVALENCE.make(2, [(0, 1)])
    S = slice_backend(REL_EQUIVALENCE, C)
    cat = S.catalog(base_cat, cap=30)
    for X in cat.objects:
        c = S.coreflection(X)
        assert S.is_trivial(c.dom)
        # the structure map of the coreflection is x . counit
        assert c.dom["arrow"] == tuple(X["arrow"][v] for v in c.map)
    for rep in E.run_laws(cat, ["fs-axioms", "stability", "cross-validation"]):
        assert rep.passed, rep.to_text()


def test_slice_rejects_wrong_structure_map():
    C = cyclic_monoid(CMON, 2)
    S = slice_backend(CMON, C)
    with pytest.raises(InvalidObject):
        S.obj(cyclic_monoid(CMON, 3), (0, 1, 1))


@pytest.mark.parametrize("base,order", [(CMON, 2), (REL_EQUIVALENCE, 2)])
def test_arrow_category_pointwise(base, order):
    F = functor_backend(base, "arrow")
    cat = F.catalog(base.catalog(max_order=order), cap=16)
    assert check_evaluation(F, cat).passed
    for rep in E.run_laws(cat, ["fs-axioms", "cross-validation"]):
        assert rep.passed, rep.to_text()


def test_arrow_category_normal_epi_is_componentwise():
    F = functor_backend(CMON, ARROW)
    cat = F.catalog(CMON.catalog(max_order=2), cap=16)
    for f in cat.morphisms():
        assert E.is_normal_epi(f) == all(E.is_normal_epi(F.component(f, i)) for i in range(2))


def test_single_shape_is_the_base():
    F = functor_backend(REL_REFLEXIVE, SINGLE)
    base = REL_REFLEXIVE.catalog(max_order=2)
    cat = F.catalog(base)
    assert len(cat.objects) == len(base.objects)
    assert sum(1 for _ in cat.morphisms()) == sum(1 for _ in base.morphisms())


def test_functoriality_enforced():
    shape = Shape("square", 4, ((0, 1), (0, 2), (1, 3), (2, 3)))
    F = functor_backend(CMON, shape)
    Z2, one = cyclic_monoid(CMON, 2), cyclic_monoid(CMON, 1)
    ok = F.diagram([Z2, Z2, Z2, Z2], [(0, 1), (0, 1), (0, 1), (0, 1)])
    assert ok.size == 8
    with pytest.raises(InvalidObject):
        F.diagram([Z2, Z2, Z2, Z2], [(0, 1), (0, 0), (0, 1), (0, 1)])
    with pytest.raises(Unsupported):
        F.catalog(CMON.catalog(max_order=1))


def test_derived_objects_round_trip_from_provenance():
    C = cyclic_monoid(CMON, 2)
    S = slice_backend(CMON, C)
    F = functor_backend(REL_EQUIVALENCE, "arrow")
    X = S.catalog(CMON.catalog(max_order=2), cap=5).objects[-1]
    Y = F.catalog(REL_EQUIVALENCE.catalog(max_order=2), cap=5).objects[-1]
    dx, dy = json.dumps(obj_to_json(X)), json.dumps(obj_to_json(Y))
    core._REGISTRY.pop(S.tag)
    core._REGISTRY.pop(F.tag)
    assert obj_from_json(json.loads(dx)) == X
    assert obj_from_json(json.loads(dy)) == Y
    assert json.loads(dx)["backend"].startswith("slice:cmon:")
    assert json.loads(dy)["backend"] == "fun:arrow:rel-equivalence"
