import json

import pytest

from vertextwist.harness import SUITES, SuiteConfig, run_suite
from vertextwist.models import Registry


@pytest.fixture(scope="module")
def registry():
    return Registry()


def test_all_suites_execute(registry):
    # smallest meaningful configs; twist-all and mixed-products included
    plans = {
        "axioms": ("fermion", 2, 3),
        "jordan": ("heis3", 1, 2),
        "twisted-jacobi": ("ramond", 1, 3),
        "weak-comm": ("z2boson", 1, 3),
        "commutator": ("ramond", 1, 3),
        "equivariance": ("z2boson", 1, 3),
        "polynomiality": ("ramond", 1, 3),
        "twist-all": ("ramond", 1, 2),
        "mixed-products": ("z2boson", 1, 2),
    }
    assert set(plans) == set(SUITES)
    for suite, (model, cut, hw) in plans.items():
        rep = run_suite(SuiteConfig(model=model, suite=suite, max_weight=cut,
                                    halfwidth=hw), registry)
        assert rep.ok, (suite, [r.to_json() for r in rep.records if not r.ok][:1])
        assert rep.records


def test_suite_validation(registry):
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(model="fermion", suite="nope"), registry)
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(model="fermion", suite="axioms", max_weight=-1),
                  registry)
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(model="ramond", suite="jordan"), registry)


def test_parallel_matches_serial(registry):
    a = run_suite(SuiteConfig("ramond", "commutator", 1, 3, jobs=1),
                  registry).to_json(with_timing=False)
    b = run_suite(SuiteConfig("ramond", "commutator", 1, 3, jobs=4),
                  registry).to_json(with_timing=False)
    assert a["records"] == b["records"] and a["summary"] == b["summary"]


def test_report_schema(registry):
    rep = run_suite(SuiteConfig("ramond", "weak-comm", 1, 3), registry)
    doc = json.loads(rep.dumps())
    assert {"engine_version", "config", "records", "summary"} <= set(doc)
    for rec in doc["records"]:
        assert {"identity", "inputs", "window", "status"} <= set(rec)