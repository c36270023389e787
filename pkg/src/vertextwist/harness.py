"""Batch verification driver: suites, reports, parallel execution."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .automorphism import (check_conjugation, check_derivation,
                           check_homomorphism, jordan_decompose)
from .results import CheckResult
from .scalars import Vec
from .twisted import (check_commutator_formula, check_equivariance,
                      check_g_compatibility, check_L_minus1_derivative_W,
                      check_permutation_symmetry, check_product_polynomiality,
                      check_twisted_jacobi, check_twisted_weak_commutativity,
                      check_y0_decomposition)
from .twistop import (check_gen_commutator, check_gen_weak_commutativity,
                      check_L_minus1_twist, check_mixed_product,
                      check_twist_decomposition, check_twist_jacobi,
                      check_twist_vacuum_identity, check_weak_associativity)
from .vosa import check_axioms

SUITES = ("axioms", "jordan", "twisted-jacobi", "weak-comm", "commutator",
          "equivariance", "polynomiality", "twist-all", "mixed-products")


@dataclass
class SuiteConfig:
    model: str
    suite: str
    max_weight: Fraction = Fraction(2)
    halfwidth: int = 4
    log_bound: int = None
    jobs: int = 1
    basis_order: str = "weight-lex"

    def validate(self):
        if self.suite not in SUITES:
            raise ValueError("unknown suite id %r (known: %s)"
                             % (self.suite, ", ".join(SUITES)))
        if self.max_weight <= 0 or self.halfwidth <= 0:
            raise ValueError("cutoff and window must be positive")
        if self.basis_order not in ("weight-lex", "weight-revlex"):
            raise ValueError("unknown basis order %r" % self.basis_order)

    def to_json(self):
        return {"model": self.model, "suite": self.suite,
                "max_weight": str(self.max_weight),
                "window_halfwidth": self.halfwidth,
                "log_bound": self.log_bound, "jobs": self.jobs,
                "basis_order": self.basis_order}


@dataclass
class Report:
    config: SuiteConfig
    records: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def to_json(self, with_timing=True):
        recs = []
        for r in self.records:
            doc = r.to_json()
            if not with_timing:
                doc.pop("timing_ms", None)
            recs.append(doc)
        return {
            "engine_version": __version__,
            "config": self.config.to_json(),
            "records": recs,
            "summary": {"total": len(self.records),
                        "passed": sum(1 for r in self.records if r.ok),
                        "failed": sum(1 for r in self.records if not r.ok)},
        }

    def dumps(self, with_timing=True) -> str:
        return json.dumps(self.to_json(with_timing), indent=2, sort_keys=True)


def _timed(fn):
    t0 = time.monotonic()
    try:
        res = fn()
    except Exception as exc:   # a crashed check is a failed check, not a crash
        res = CheckResult("error", False, {},
                          first_mismatch={"error": repr(exc)})
    res.time_ms = (time.monotonic() - t0) * 1000.0
    return res


def _run_all(tasks, jobs: int):
    if jobs <= 1:
        return [_timed(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_timed, tasks))


def _algebra_basis_vectors(V, cutoff, order):
    return [Vec.basis(k) for k in V.basis(cutoff, order)]


def _suite_tasks(cfg: SuiteConfig, registry):
    kind, obj = registry.resolve(cfg.model)
    hw = cfg.halfwidth
    cut = cfg.max_weight
    order = cfg.basis_order

    if cfg.suite == "axioms":
        V = obj.algebra if kind == "algebra" else obj.V
        return [lambda: _merge(check_axioms(V, cut, hw), "axioms")]

    if cfg.suite == "jordan":
        if kind != "algebra":
            raise ValueError("jordan suite runs on an algebra model id")
        V = obj.algebra
        tasks = []
        for name, g in sorted(obj.automorphisms.items()):
            def t(g=g, name=name):
                jd = jordan_decompose(g, cut)
                rec = CheckResult("jordan-decomposition", True,
                                  {"automorphism": name,
                                   "spectrum": [str(a) for a in jd.spectrum]})
                return rec
            tasks.append(t)
            tasks.append(lambda g=g: check_homomorphism(V, g.apply, cut, hw))
            tasks.append(lambda g=g: check_homomorphism(V, g.unipotent_exp,
                                                        cut, hw))
            tasks.append(lambda g=g: check_homomorphism(V, g.semisimple_exp,
                                                        cut, hw))
            tasks.append(lambda g=g: check_derivation(V, g, cut, hw))
            tasks.append(lambda g=g: check_conjugation(V, g, cut, hw))
        return tasks

    if kind != "twisted":
        raise ValueError("suite %r runs on a twisted module id" % cfg.suite)
    W = obj
    if cfg.log_bound is not None and W.log_bound > cfg.log_bound:
        raise ValueError(
            "module carries log powers up to %d, beyond the declared bound %d"
            % (W.log_bound, cfg.log_bound))
    V = W.V
    us = _algebra_basis_vectors(V, cut, order)
    ws = [Vec.basis(k) for k in W.basis(cut, order)]
    tasks = []

    if cfg.suite == "twisted-jacobi":
        for u in us:
            for v in us:
                for w in ws:
                    tasks.append(lambda u=u, v=v, w=w:
                                 check_twisted_jacobi(W, u, v, w, None, hw))
    elif cfg.suite == "weak-comm":
        for u in us:
            for v in us:
                for w in ws:
                    tasks.append(lambda u=u, v=v, w=w:
                                 check_twisted_weak_commutativity(
                                     W, u, v, w, None, hw))
        for u in us:
            for w in ws:
                tasks.append(lambda u=u, w=w:
                             check_L_minus1_derivative_W(W, u, w, None, hw))
    elif cfg.suite == "commutator":
        for u in us:
            for v in us:
                for w in ws:
                    tasks.append(lambda u=u, v=v, w=w:
                                 check_commutator_formula(W, u, v, w, None, hw))
    elif cfg.suite == "equivariance":
        for u in us:
            for w in ws:
                tasks.append(lambda u=u, w=w:
                             check_equivariance(W, u, w, None, hw))
                tasks.append(lambda u=u, w=w:
                             check_g_compatibility(W, u, w, hw))
    elif cfg.suite == "polynomiality":
        gens = [V.gen_vector(g.name) for g in V.gens]
        for w in ws:
            for wp in ws:
                for u in gens:
                    tasks.append(lambda u=u, w=w, wp=wp:
                                 check_product_polynomiality(
                                     W, [u, u], w, wp, hw))
            tasks.append(lambda w=w: check_product_polynomiality(
                W, [gens[0]] * 3, w, ws[0], hw))
            tasks.append(lambda w=w: check_permutation_symmetry(
                W, [gens[0], gens[0]], w, ws[0], [1, 0], hw))
    elif cfg.suite == "twist-all":
        for w in ws:
            tasks.append(lambda w=w: check_twist_vacuum_identity(W, w, hw))
        for u in us:
            for v in us:
                for w in ws:
                    tasks.append(lambda u=u, v=v, w=w:
                                 check_weak_associativity(W, u, v, w, None, hw))
                    tasks.append(lambda u=u, v=v, w=w:
                                 check_twist_jacobi(W, u, v, w, None, hw))
                    tasks.append(lambda u=u, v=v, w=w:
                                 check_gen_commutator(W, u, v, w, None, hw))
                    tasks.append(lambda u=u, v=v, w=w:
                                 check_gen_weak_commutativity(
                                     W, u, v, w, None, hw))
        for w in ws:
            for v in us:
                tasks.append(lambda w=w, v=v:
                             check_twist_decomposition(W, w, v, None, hw))
                tasks.append(lambda w=w, v=v:
                             check_L_minus1_twist(W, w, v, None, hw))
        for u in us:
            for w in ws:
                tasks.append(lambda u=u, w=w:
                             check_y0_decomposition(W, u, w, None, hw))
    elif cfg.suite == "mixed-products":
        gens = [V.gen_vector(g.name) for g in V.gens]
        one = Vec.basis(V.vac)
        for w in ws:
            for u in gens:
                tasks.append(lambda u=u, w=w: check_mixed_product(
                    W, [u], w, [], u, None, hw))
                tasks.append(lambda u=u, w=w: check_mixed_product(
                    W, [u], w, [u], one, None, hw))
                tasks.append(lambda u=u, w=w: check_mixed_product(
                    W, [], w, [], u, None, hw))
    else:
        raise ValueError("unhandled suite %r" % cfg.suite)
    return tasks


def _merge(results, label) -> CheckResult:
    bad = [r for r in results if not r.ok]
    if bad:
        return bad[0]
    return CheckResult(label, True, {"checks": len(results)})


def run_suite(cfg: SuiteConfig, registry) -> Report:
    cfg.validate()
    tasks = _suite_tasks(cfg, registry)
    records = _run_all(tasks, cfg.jobs)
    return Report(cfg, records)
