"""Named scenarios: each JSON file under ``scenarios/`` names a runner, its parameters and the expected observations."""

from __future__ import annotations

import json
from importlib import resources

from . import engine as E
from .backends import get_backend
from .backends.pointed import CMON, PREORDCMON, PSET, join_chain, unstable_regular_epi_objects
from .backends.relative import (GRPD, ORDGRP, REL_PREORDER, codiscrete_groupoid, cyclic_table, group_as_groupoid,
                                preorder_counterexample)
from .casestudies import ideal_factorise, ideal_kernel, ideal_report, mon_counterexample_check
from .core import Mor, is_iso, is_mono, is_surjective, mor_to_json

SCHEMA_VERSION = 1
SCENARIO_FIELDS = {"schema_version", "name", "runner", "summary", "params", "expect"}


class ScenarioError(ValueError):
    pass


def load_scenario(text: str) -> dict:
    d = json.loads(text)
    if not isinstance(d, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(d) - SCENARIO_FIELDS
    if unknown:
        raise ScenarioError(f"unknown scenario fields: {sorted(unknown)}")
    missing = SCENARIO_FIELDS - {"params"} - set(d)
    if missing:
        raise ScenarioError(f"missing scenario fields: {sorted(missing)}")
    if d["schema_version"] != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema_version {d['schema_version']!r}")
    if d["runner"] not in RUNNERS:
        raise ScenarioError(f"unknown runner {d['runner']!r}")
    if not isinstance(d["expect"], dict) or not d["expect"]:
        raise ScenarioError("scenario must declare at least one expectation")
    d.setdefault("params", {})
    return d


def registry() -> dict[str, dict]:
    out = {}
    for entry in sorted(resources.files("prenormal").joinpath("scenarios").iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            sc = load_scenario(entry.read_text())
            if sc["name"] in out:
                raise ScenarioError(f"duplicate demo name {sc['name']!r}")
            out[sc["name"]] = sc
    return out


def run_scenario(sc: dict) -> dict:
    observed, reports, artefacts = RUNNERS[sc["runner"]](**sc["params"])
    mismatches = {k: {"expected": v, "observed": observed.get(k)}
                  for k, v in sc["expect"].items() if observed.get(k) != v}
    return {"name": sc["name"], "summary": sc["summary"], "ok": not mismatches, "observed": observed,
            "mismatches": mismatches, "reports": [r.to_json() for r in reports], "artefacts": artefacts}


def render_text(result: dict) -> str:
    lines = [f"demo {result['name']}: {'OK' if result['ok'] else 'UNEXPECTED'}", f"  {result['summary']}"]
    for k, v in result["observed"].items():
        lines.append(f"  {k} = {json.dumps(v, sort_keys=True)}")
    for k, v in result["mismatches"].items():
        lines.append(f"  mismatch {k}: expected {v['expected']!r}, observed {v['observed']!r}")
    for r in result["reports"]:
        lines.append(f"  law {r['law']}: {r['verdict']} ({r['cases']} cases)")
        for w in r["witnesses"][:2]:
            lines.append(f"    witness [{w['case']}] {w['detail']}".rstrip())
    return "\n".join(lines)


# --------------------------------------------------------------------------
# runners: each returns (observations, law reports, extra json)


def _cmon_join():
    T = join_chain(CMON, 2)
    P, _, _ = CMON.product(T, T)
    f = Mor(P, T, tuple(max(a, b) for a in range(2) for b in range(2)))
    fa = E.factorise(f)
    kr = E.kernel(f)
    obs = {
        "surjective": is_surjective(f),
        "kernel_size": kr.K.size,
        "has_trivial_kernel": E.has_trivial_kernel(f),
        "is_normal_epi": E.is_normal_epi(f),
        "characterisation": CMON.normal_epi_char(f),
        "e_is_identity": fa.e.map == tuple(range(P.size)),
        "m_equals_f": fa.m.map == f.map,
    }
    return obs, [], {"f": mor_to_json(f)}


def _preord_not_regular(catalog_order=2):
    o = unstable_regular_epi_objects(PREORDCMON)
    A, B, C = o["A"], o["B"], o["C"]
    p = PREORDCMON.mor(A, B, (0, 1, 1, 2))
    i = PREORDCMON.mor(C, B, (0, 2))
    D, p_pulled, _ = PREORDCMON.pullback(p, i)
    reports = E.run_laws(PREORDCMON.catalog(max_order=catalog_order))
    obs = {
        "p_is_regular_epi": E.is_regular_epi(p),
        "p_is_normal_epi": E.is_normal_epi(p),
        "pullback_size": D.size,
        "p_pulled_is_mono": is_mono(p_pulled),
        "p_pulled_is_iso": is_iso(p_pulled),
        "p_pulled_is_regular_epi": E.is_regular_epi(p_pulled),
        "suite_passes": all(r.passed for r in reports),
    }
    return obs, reports, {"p": mor_to_json(p), "p_pulled": mor_to_json(p_pulled)}


def _pset_stability():
    two, one = PSET.make(2), PSET.make(1)
    p = PSET.mor(two, one, (0, 0))
    P, proj, _ = PSET.pullback(p, p)
    stab = E.check_pullback_stability(PSET.catalog(), along="monos")
    allmaps = E.check_pullback_stability(PSET.catalog(), along="all")
    obs = {
        "p_is_normal_epi": E.is_normal_epi(p),
        "pullback_size": P.size,
        "projection_is_normal_epi": E.is_normal_epi(proj),
        "projection_characterisation": PSET.normal_epi_char(proj),
        "stable_along_monos": stab.passed,
        "stable_along_all": allmaps.passed,
    }
    return obs, [stab, allmaps], {"projection": mor_to_json(proj)}


def _preord_rel():
    X, Y, f = preorder_counterexample(REL_PREORDER)
    fa = E.factorise(f)
    w = fa.witness_on_failure
    labels = ("1", "2", "2'", "3")
    fs = E.check_fs_axioms(REL_PREORDER.catalog())
    obs = {
        "e": list(fa.e.map),
        "m": list(fa.m.map),
        "e_is_normal_epi": fa.e_is_normal_epi,
        "m_has_trivial_kernel": fa.m_has_trivial_kernel,
        "kernel_of_m_pair": sorted(labels[x] for x in w["domain"]) if w else None,
        "fs_axioms_on_catalog": fs.verdict,
    }
    return obs, [fs], {"f": mor_to_json(f), "witness": w}


def _mon_word(L=8):
    rep = mon_counterexample_check(L)
    obs = {"verdict": rep.verdict, "bound": L,
           "in_kernel_pair": rep.stats["in_kernel_pair"],
           "related_in_congruence": rep.stats["related_in_congruence"],
           "chi_xzx": rep.stats["chi"]["xzx"], "chi_yzy": rep.stats["chi"]["yzy"]}
    return obs, [rep], {}


def _ideal(limit=1000):
    rep = ideal_report(limit)
    fac = ideal_factorise(25)
    obs = {"verdict": rep.verdict, "kernel_25": ideal_kernel(25), "kernel_3": ideal_kernel(3),
           "normal_epis": rep.stats["normal_epis"], "factorisation_25_exists": fac["exists"],
           "obstruction_25": fac["obstruction"], "displayed_formula_kernel_25": fac["displayed_formula_kernel"]}
    return obs, [rep], {}


def _noether(backend="cmon", max_order=None):
    B = get_backend(backend)
    cat = B.catalog(max_order=max_order) if max_order else B.catalog()
    rep = E.suite_noether(cat)
    example = None
    for A in cat.objects:
        subs = E.normal_subobjects(A)
        for m in subs:
            for n in subs:
                if 1 < n.dom.size < m.dom.size < A.size and E._comparison_into(n, m) is not None:
                    example = E.noether_third(m, n)
                    break
            if example:
                break
        if example:
            break
    obs = {"verdict": rep.verdict, "triples": rep.cases,
           "example_comparison_is_iso": example.comparison_is_iso if example else None}
    return obs, [rep], {"example": example.to_json() if example else None}


def _grpd():
    Z2 = group_as_groupoid(cyclic_table(2))
    one = group_as_groupoid(cyclic_table(1))
    f = GRPD.mor(Z2, one, (0, 0))
    cod2 = codiscrete_groupoid(2)
    g = GRPD.mor(cod2, one, (0,) * cod2.size)
    cv = E.cross_validate(GRPD.catalog())
    obs = {
        "Z2_to_point_is_normal_epi": E.is_normal_epi(f),
        "Z2_to_point_characterisation": GRPD.normal_epi_char(f),
        "codiscrete_to_point_is_normal_epi": E.is_normal_epi(g),
        "codiscrete_to_point_characterisation": GRPD.normal_epi_char(g),
        "cross_validation": cv.verdict,
    }
    return obs, [cv], {}


def _ordgrp():
    op = cyclic_table(4)
    G = ORDGRP.make(op, 0, list(range(4)))
    H = ORDGRP.make(cyclic_table(2), 0, [0, 1])
    f = ORDGRP.mor(G, H, (0, 1, 0, 1))
    kr = E.kernel(f)
    cr = E.cokernel(kr.k)
    obs = {
        "kernel_cone": sorted(kr.K["cone"]),
        "cokernel_size": cr.Q.size,
        "cokernel_cone": sorted(cr.Q["cone"]),
        "generated_equals_cone": cr.info.get("generated_equals_cone"),
        "f_is_normal_epi": E.is_normal_epi(f),
        "characterisation": ORDGRP.normal_epi_char(f),
    }
    return obs, [], {"f": mor_to_json(f), "cokernel": mor_to_json(cr.q)}


RUNNERS = {
    "cmon-join": _cmon_join,
    "preord-not-regular": _preord_not_regular,
    "pset-stability": _pset_stability,
    "preord-rel-factorisation": _preord_rel,
    "mon-bounded-word": _mon_word,
    "divisibility-ideal": _ideal,
    "noether": _noether,
    "grpd-normal-epi": _grpd,
    "ordgrp-cokernel": _ordgrp,
}

