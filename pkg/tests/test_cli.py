import json

import pytest

from vertextwist.cli import main
from vertextwist.harness import Report, SuiteConfig, run_suite
from vertextwist.models import Registry


def test_expand_fermion_two_point(capsys):
    rc = main(["expand", "fermion", "Y(psi,x) psi", "--window", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "x^-1" in out


def test_expand_twist_leading(capsys):
    rc = main(["expand", "ramond", "Ytw(vac,x) psi", "--window", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    # leading term e^(-pi i/2) 2^(-1/2) x^(-1/2), in canonical phase form
    assert "x^-1/2" in out and "-1/2*e(1/4) + -1/2*e(3/4)" in out


def test_expand_parse_error():
    assert main(["expand", "fermion", "Y(vac"]) == 2


def test_expand_mode_application(capsys):
    rc = main(["expand", "fermion", "Y(psi(-3/2) 1, x) psi", "--window", "4"])
    assert rc == 0
    assert "x^-2" in capsys.readouterr().out


def test_unknown_suite_exit_2(capsys):
    rc = main(["run", "--model", "fermion", "--suite", "nonsense"])
    assert rc == 2


def test_unknown_model_exit_2(capsys):
    rc = main(["run", "--model", "nope", "--suite", "axioms"])
    assert rc == 2


def test_run_axioms_exit_0(tmp_path, capsys):
    rc = main(["run", "--model", "fermion", "--suite", "axioms",
               "--max-weight", "2", "--window", "3",
               "--report", str(tmp_path / "r.json")])
    assert rc == 0
    doc = json.loads((tmp_path / "r.json").read_text())
    assert doc["summary"]["failed"] == 0
    assert doc["engine_version"]


def test_run_equivariance_twisted(capsys):
    rc = main(["run", "--model", "ramond", "--suite", "equivariance",
               "--max-weight", "1", "--window", "3", "--jobs", "2"])
    assert rc == 0


def test_decompose_parity(capsys):
    rc = main(["decompose", "fermion", "parity", "--max-weight", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    doc = json.loads(out)
    assert doc["spectrum"] == ["0", "1/2"]


def test_decompose_unipotent(capsys):
    rc = main(["decompose", "heis3", "unipotent", "--max-weight", "1"])
    doc = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert doc["blocks"]["1"]["nilpotency_index"] == 3


def test_dump_basis_deterministic(capsys):
    assert main(["dump-basis", "fermion", "--max-weight", "2"]) == 0
    first = capsys.readouterr().out
    assert main(["dump-basis", "fermion", "--max-weight", "2"]) == 0
    assert capsys.readouterr().out == first


def test_report_determinism_modulo_timing():
    reg = Registry()
    cfg = SuiteConfig(model="ramond", suite="weak-comm", max_weight=1,
                      halfwidth=3)
    a = run_suite(cfg, reg).dumps(with_timing=False)
    reg2 = Registry()
    cfg2 = SuiteConfig(model="ramond", suite="weak-comm", max_weight=1,
                       halfwidth=3)
    b = run_suite(cfg2, reg2).dumps(with_timing=False)
    assert a == b


def test_run_detects_fault(tmp_path):
    reg = Registry(fault="twisted-seed-sign")
    cfg = SuiteConfig(model="ramond", suite="twisted-jacobi", max_weight=1,
                      halfwidth=3)
    rep = run_suite(cfg, reg)
    assert not rep.ok
    bad = [r for r in rep.records if not r.ok]
    assert bad and bad[0].first_mismatch
