"""Acceptance suite: every exit criterion at its stated range, exact arithmetic.

Run with `pytest tests/test_acceptance.py -s` to see one pass/fail line per
criterion.  Module cutoffs count degrees above the twisted vacuum.
"""

from fractions import Fraction

import pytest

from vertextwist.automorphism import (Automorphism, check_conjugation,
                                      check_derivation, check_homomorphism,
                                      jordan_decompose, parity_automorphism,
                                      orthogonal_automorphism)
from vertextwist.models import (GRAM3, UNIPOTENT3, Registry,
                                build_free_fermion, build_heisenberg,
                                build_ramond_module, build_unipotent_toy,
                                build_z2_twisted_boson)
from vertextwist.scalars import Scalar, Vec
from vertextwist.twisted import (check_commutator_formula, check_equivariance,
                                 check_product_polynomiality,
                                 check_twisted_jacobi,
                                 check_twisted_weak_commutativity,
                                 check_y0_decomposition)
from vertextwist.twistop import (check_gen_commutator,
                                 check_gen_weak_commutativity,
                                 check_mixed_product,
                                 check_twist_decomposition, check_twist_jacobi,
                                 check_twist_vacuum_identity,
                                 check_weak_associativity)
from vertextwist.vosa import check_axioms

F = Fraction
FH = F(1, 2)


def report(name, ok, detail=""):
    line = "%s: %s%s" % (name, "PASS" if ok else "FAIL",
                         (" " + detail if detail else ""))
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def registry():
    return Registry()


@pytest.fixture(scope="module")
def fermion(registry):
    return registry.algebra("fermion").algebra


@pytest.fixture(scope="module")
def boson(registry):
    return registry.algebra("boson1").algebra


@pytest.fixture(scope="module")
def heis3(registry):
    return registry.algebra("heis3").algebra


@pytest.fixture(scope="module")
def ramond(registry):
    return registry.twisted("ramond")


@pytest.fixture(scope="module")
def z2(registry):
    return registry.twisted("z2boson")


@pytest.fixture(scope="module")
def toy(registry):
    bundle = registry.algebra("heis3")
    return build_unipotent_toy(bundle.algebra,
                               bundle.automorphisms["unipotent"])


def algebra_vectors(V, cutoff):
    return [Vec.basis(k) for k in V.basis(cutoff)]


def module_vectors(W, cutoff):
    return [Vec.basis(k) for k in W.basis(cutoff)]


# -- A1 ----------------------------------------------------------------------

def test_a1_axioms(fermion, boson, heis3):
    for name, V, cut in (("fermion", fermion, F(9, 2)),
                         ("heisenberg rank 1", boson, F(4)),
                         ("heisenberg rank 3", heis3, F(4))):
        results = check_axioms(V, cut, halfwidth=4)
        bad = [r for r in results if not r.ok]
        report("A1 axioms (%s, weight <= %s)" % (name, cut), not bad,
               str(bad[0].first_mismatch) if bad else
               "%d axioms" % len(results))


# -- A2 ----------------------------------------------------------------------

def test_a2_jordan(fermion, heis3, registry):
    parity = registry.algebra("fermion").automorphisms["parity"]
    jd = jordan_decompose(parity, F(9, 2))
    ok = jd.spectrum == [0, FH] and all(
        all(x.is_zero() for row in b.K for x in row) for b in jd.blocks.values())
    # semisimple part alone reproduces g
    for key in fermion.basis(F(5, 2)):
        ok = ok and parity.semisimple_exp(Vec.basis(key)) == \
            parity.apply(Vec.basis(key))
    report("A2 parity decomposition (S reproduces g, N = 0, P_V = {0, 1/2})", ok)

    unip = registry.algebra("heis3").automorphisms["unipotent"]
    jd = jordan_decompose(unip, 1)
    blk = jd.blocks[F(1)]
    a, b, c = (heis3.gen_vector(n) for n in "abc")
    ok = (jd.spectrum == [0] and blk.nilpotency_index == 3
          and unip.K_apply(b) == -c and unip.K_apply(c) == a
          and unip.K_apply(a).is_zero())
    # e^{2 pi i (S+N)} = g, exactly, on the weight-2 block as well
    for key in heis3.basis(2):
        ok = ok and unip.unipotent_exp(unip.semisimple_exp(Vec.basis(key))) \
            == unip.apply_key(key)
    report("A2 unipotent decomposition (2 pi i N: b -> -c -> ... , exp = g)", ok)

    images = {g.name: unip.unipotent_exp(unip.semisimple_exp(
        heis3.gen_vector(g.name))) for g in heis3.gens}
    jd2 = jordan_decompose(Automorphism(heis3, images, "rebuilt"), 2)
    ok = jd2.spectrum == jd.spectrum
    for w in jd.blocks:
        if w in jd2.blocks:
            ok = ok and all(r1 == r2 for r1, r2 in
                            zip(jd.blocks[w].K, jd2.blocks[w].K))
    report("A2 decomposition idempotent", ok)


# -- A3 ----------------------------------------------------------------------

def test_a3_derivation_conjugation(heis3, registry):
    unip = registry.algebra("heis3").automorphisms["unipotent"]
    r = check_derivation(heis3, unip, 3, halfwidth=6)
    report("A3 nilpotent derivation (weight <= 3, |exp| <= 6)", r.ok,
           str(r.first_mismatch) if not r.ok else "")
    r = check_conjugation(heis3, unip, 3, halfwidth=6)
    report("A3 nilpotent conjugation (weight <= 3, |exp| <= 6)", r.ok,
           str(r.first_mismatch) if not r.ok else "")


# -- A4 / A5 / A6 ------------------------------------------------------------

def _sweep(W, checker, cut_uv, cut_w, hw):
    us = algebra_vectors(W.V, cut_uv)
    ws = module_vectors(W, cut_w)
    for u in us:
        for v in us:
            for w in ws:
                r = checker(W, u, v, w, None, hw)
                if not r.ok:
                    return r
    return None


def test_a4_twisted_jacobi(ramond, z2):
    for W in (ramond, z2):
        bad = _sweep(W, check_twisted_jacobi, 2, 2, 4)
        report("A4 twisted Jacobi (%s, u,v,w to weight 2, |exp| <= 4)" % W.name,
               bad is None, str((bad.inputs, bad.first_mismatch)) if bad else "")


def test_a5_weak_comm_and_commutator(ramond, z2):
    for W in (ramond, z2):
        bad = _sweep(W, check_twisted_weak_commutativity, 2, 2, 4)
        report("A5 twisted weak commutativity (%s)" % W.name, bad is None,
               str((bad.inputs, bad.first_mismatch)) if bad else "")
        bad = _sweep(W, check_commutator_formula, 2, 2, 4)
        report("A5 commutator formula (%s)" % W.name, bad is None,
               str((bad.inputs, bad.first_mismatch)) if bad else "")


def test_a6_equivariance(ramond, z2):
    for W in (ramond, z2):
        bad = None
        for u in algebra_vectors(W.V, 2):
            for w in module_vectors(W, 2):
                r = check_equivariance(W, u, w, None, 4)
                if not r.ok:
                    bad = r
                    break
        report("A6 equivariance surrogate (%s)" % W.name, bad is None,
               str(bad.first_mismatch) if bad else "")


# -- A7 ----------------------------------------------------------------------

def test_a7_twist_vacuum_identity(ramond, z2):
    for W in (ramond, z2):
        bad = None
        for w in module_vectors(W, F(5, 2)):
            r = check_twist_vacuum_identity(W, w, 4)
            if not r.ok:
                bad = r
                break
        report("A7 twist vacuum identity (%s, w to weight 5/2)" % W.name,
               bad is None, str(bad.first_mismatch) if bad else "")


# -- A8 ----------------------------------------------------------------------

def test_a8_twist_identities(ramond, z2):
    plans = ((ramond, F(3, 2)), (z2, F(1)))
    for W, cut_uv in plans:
        us = algebra_vectors(W.V, cut_uv)
        ws = module_vectors(W, F(3, 2))
        for name, checker in (
                ("weak associativity", check_weak_associativity),
                ("twist Jacobi", check_twist_jacobi),
                ("generalized commutator", check_gen_commutator),
                ("generalized weak commutativity",
                 check_gen_weak_commutativity)):
            bad = None
            for u in us:
                for v in us:
                    for w in ws:
                        r = checker(W, u, v, w, None, 3)
                        if not r.ok:
                            bad = r
                            break
            report("A8 %s (%s, |exp| <= 3)" % (name, W.name), bad is None,
                   str((bad.inputs, bad.first_mismatch)) if bad else "")


# -- A9 ----------------------------------------------------------------------

def test_a9_decompositions(ramond, z2, toy):
    for W, cut in ((ramond, F(3, 2)), (z2, F(1))):
        bad = None
        for u in algebra_vectors(W.V, cut):
            for w in module_vectors(W, 1):
                r = check_y0_decomposition(W, u, w, None, 3)
                if not r.ok:
                    bad = r
                    break
        report("A9 log decompositions, log-free case (%s)" % W.name,
               bad is None, str(bad.first_mismatch) if bad else "")
        bad = None
        for w in module_vectors(W, 1):
            for v in algebra_vectors(W.V, cut):
                r = check_twist_decomposition(W, w, v, None, 3)
                if not r.ok:
                    bad = r
                    break
        report("A9 twist decomposition, log-free case (%s)" % W.name,
               bad is None, str(bad.first_mismatch) if bad else "")
    V3 = toy.V
    picks = [V3.gen_vector("b"), V3.gen_vector("c"),
             V3.mode_vec(V3.gen_vector("b"), -2, 0, Vec.basis(V3.vac))]
    bad = None
    for u in picks:
        for w in (Vec.basis(V3.vac), V3.gen_vector("a")):
            r = check_y0_decomposition(toy, u, w, None, 2)
            if not r.ok:
                bad = r
                break
    report("A9 log decompositions, log case (unipotent view)", bad is None,
           str(bad.first_mismatch) if bad else "")
    bad = None
    for w in (V3.gen_vector("a"), V3.gen_vector("c")):
        for v in (V3.gen_vector("b"), V3.gen_vector("c")):
            r = check_twist_decomposition(toy, w, v, None, 2)
            if not r.ok:
                bad = r
                break
    report("A9 twist decomposition, log case (unipotent view)", bad is None,
           str(bad.first_mismatch) if bad else "")


# -- A10 ---------------------------------------------------------------------

def test_a10_polynomiality(ramond, z2):
    for W in (ramond, z2):
        gen = W.V.gen_vector(W.V.gens[0].name)
        ws = module_vectors(W, 1)
        bad = None
        for w in ws:
            for wp in ws:
                for k in (2, 3):
                    r = check_product_polynomiality(W, [gen] * k, w, wp, 6)
                    if not r.ok:
                        bad = r
                        break
        report("A10 product polynomiality k <= 3 (%s, half-width 6)" % W.name,
               bad is None, str(bad.first_mismatch) if bad else "")
        one = Vec.basis(W.V.vac)
        vac = ws[0]
        combos = (([], []), ([gen], []), ([], [gen]), ([gen, gen], []),
                  ([gen], [gen]))
        bad = None
        for tw, alg in combos:
            r = check_mixed_product(W, tw, vac, alg, gen if not alg else one,
                                    None, 6)
            if not r.ok:
                bad = r
                break
        report("A10 mixed products k+l <= 2 (%s, half-width 6)" % W.name,
               bad is None, str((bad.inputs, bad.first_mismatch)) if bad else "")


# -- A11 ---------------------------------------------------------------------

def test_a11_vacuum_weights(ramond, z2):
    for W in (ramond, z2):
        h = W.vacuum_weight()
        ok = h == F(1, 16) and W.check_L0_grading(2).ok
        report("A11 twisted vacuum weight from the extension (%s) = %s"
               % (W.name, h), ok)


# -- A12 ---------------------------------------------------------------------

FAULTS = (
    ("fermion clifford sign", "A1", lambda f: _axioms_fail(
        build_free_fermion(fault="clifford-sign"), F(5, 2))),
    ("fermion creation sign", "A1", lambda f: _axioms_fail(
        build_free_fermion(fault="creation-sign"), F(7, 2))),
    ("fermion conformal scale", "A1", lambda f: _axioms_fail(
        build_free_fermion(fault="omega-scale"), F(5, 2))),
    ("boson bracket sign", "A1", lambda f: _axioms_fail(
        build_heisenberg([[1]], fault="bracket-sign"), 3)),
    ("boson conformal scale", "A1", lambda f: _axioms_fail(
        build_heisenberg([[1]], fault="omega-scale"), 3)),
    ("rank-3 bracket sign", "A1", lambda f: _axioms_fail(
        build_heisenberg(GRAM3, fault="bracket-sign"), 2)),
    ("twisted zero-mode scale", "A4", lambda f: _jacobi_fail(
        build_ramond_module(f, parity_automorphism(f),
                            fault="zero-mode-scale", crosscheck=False))),
    ("twisted seed sign", "A4", lambda f: _jacobi_fail(
        build_ramond_module(f, parity_automorphism(f),
                            fault="twisted-seed-sign", crosscheck=False))),
    ("zero-mode sector sign", "A8", lambda f: _twistop_fail(
        build_ramond_module(f, parity_automorphism(f),
                            fault="zero-mode-sector-sign", crosscheck=False))),
    ("twisted bracket sign", "A4", lambda f: _z2_jacobi_fail()),
)


def _axioms_fail(V, cut):
    bad = [r for r in check_axioms(V, cut, halfwidth=3) if not r.ok]
    return bad[0].first_mismatch if bad else None


def _jacobi_fail(W):
    gen = W.V.gen_vector(W.V.gens[0].name)
    r = check_twisted_jacobi(W, gen, gen, Vec.basis(W.basis(0)[0]), None, 3)
    return r.first_mismatch if not r.ok else None


def _z2_jacobi_fail():
    boson = build_heisenberg([[1]])
    W = build_z2_twisted_boson(boson, orthogonal_automorphism(
        boson, [[-1]], "minus1"), fault="twisted-bracket-sign",
        crosscheck=False)
    return _jacobi_fail(W)


def _twistop_fail(W):
    gen = W.V.gen_vector(W.V.gens[0].name)
    r = check_twist_jacobi(W, gen, gen, Vec.basis(W.basis(0)[0]), None, 2)
    if not r.ok:
        return r.first_mismatch
    r = check_weak_associativity(W, gen, gen, Vec.basis(W.basis(0)[0]), None, 2)
    return r.first_mismatch if not r.ok else None


def test_a12_fault_sensitivity():
    fermion = build_free_fermion()
    located = 0
    for name, crit, run in FAULTS:
        try:
            mismatch = run(fermion)
        except Exception as exc:
            mismatch = {"error": repr(exc)}
        ok = mismatch is not None
        report("A12 fault '%s' breaks %s" % (name, crit), ok,
               "located %s" % mismatch)
        located += bool(mismatch)
    report("A12 mutation suite (%d faults, all located)" % len(FAULTS),
           located == len(FAULTS))
