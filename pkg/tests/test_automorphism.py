from fractions import Fraction

import pytest

from vertextwist.automorphism import (Automorphism, check_conjugation,
                                      check_derivation, check_homomorphism,
                                      identity_automorphism, jordan_decompose,
                                      nilpotent_power_coeffs,
                                      orthogonal_automorphism,
                                      parity_automorphism)
from vertextwist.errors import NotIsometry
from vertextwist.scalars import Scalar, Vec
from vertextwist.vosa import FermionAlgebra, HeisenbergAlgebra

F = Fraction

GRAM3 = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
# a -> a, c -> c + a, b -> b - c - a/2, columns in basis order (a, b, c)
UNIP = [[1, F(-1, 2), 1], [0, 1, 0], [0, -1, 1]]


@pytest.fixture(scope="module")
def fermion():
    return FermionAlgebra()


@pytest.fixture(scope="module")
def heis3():
    return HeisenbergAlgebra(GRAM3)


@pytest.fixture(scope="module")
def unip(heis3):
    return orthogonal_automorphism(heis3, UNIP, name="unipotent")


def test_identity_jordan(fermion):
    jd = jordan_decompose(identity_automorphism(fermion), 2)
    assert jd.spectrum == [0]
    for blk in jd.blocks.values():
        assert blk.nilpotency_index <= 1
        assert all(x.is_zero() for row in blk.K for x in row)


def test_parity_jordan(fermion):
    g = parity_automorphism(fermion)
    jd = jordan_decompose(g, F(9, 2))
    assert jd.spectrum == [0, F(1, 2)]
    for blk in jd.blocks.values():
        assert all(x.is_zero() for row in blk.K for x in row)
    # e^{2 pi i S} reproduces g: odd vectors scale by -1
    psi = fermion.gen_vector("psi")
    assert g.semisimple_exp(psi) == psi.scale(-1)
    assert g.apply(psi) == psi.scale(-1)


def test_not_isometry_rejected(heis3):
    bad = [[1, 0, 0], [0, 1, 0], [0, 1, 1]]
    with pytest.raises(NotIsometry):
        orthogonal_automorphism(heis3, bad)


def test_unipotent_gen_block(unip, heis3):
    # (g-1)^3 = 0 on generators and 2 pi i N_g: b -> -c, c -> a, a -> 0
    a = heis3.gen_vector("a")
    b = heis3.gen_vector("b")
    c = heis3.gen_vector("c")
    assert unip.apply(a) == a
    assert unip.apply(c) == c + a
    assert unip.apply(b) == b - c - a.scale(F(1, 2))
    assert unip.K_apply(b) == -c
    assert unip.K_apply(c) == a
    assert unip.K_apply(a).is_zero()


def test_unipotent_jordan_block(unip):
    jd = jordan_decompose(unip, 1)
    assert jd.spectrum == [0]
    blk = jd.blocks[F(1)]
    assert blk.nilpotency_index == 3
    # K matrix in basis order (a, b, c): Kb = -c, Kc = a
    K = blk.K
    assert K[0][2] == Scalar.one()
    assert K[2][1] == Scalar.rational(-1)
    assert all(K[i][0].is_zero() for i in range(3))


def test_jordan_idempotent(unip, heis3):
    # rebuild an automorphism from e^{2 pi i (S+N)} on generators and re-decompose
    images = {g.name: unip.unipotent_exp(unip.semisimple_exp(
        heis3.gen_vector(g.name))) for g in heis3.gens}
    g2 = Automorphism(heis3, images, name="rebuilt")
    jd1 = jordan_decompose(unip, 2)
    jd2 = jordan_decompose(g2, 2)
    assert jd1.spectrum == jd2.spectrum
    for w in jd1.blocks:
        assert jd1.blocks[w].basis == jd2.blocks[w].basis
        for r1, r2 in zip(jd1.blocks[w].K, jd2.blocks[w].K):
            assert r1 == r2


def test_blockwise_matches_pointwise(unip, heis3):
    jd = jordan_decompose(unip, 2)
    for w, blk in jd.blocks.items():
        for j, key in enumerate(blk.basis):
            got = unip.K_apply(Vec.basis(key))
            want = Vec({blk.basis[i]: blk.K[i][j] for i in range(len(blk.basis))
                        if not blk.K[i][j].is_zero()})
            assert got == want, (w, key)


def test_alpha_decompose(fermion, heis3, unip):
    g = parity_automorphism(fermion)
    psi = fermion.gen_vector("psi")
    assert g.alpha_decompose(psi) == {F(1, 2): psi}
    two = fermion.mode_vec(psi, -2, 0, psi)  # psi(-3/2)psi, even
    assert list(g.alpha_decompose(two)) == [F(0)]
    mix = heis3.gen_vector("a") + heis3.gen_vector("c") + heis3.gen_vector("b")
    assert list(unip.alpha_decompose(mix)) == [F(0)]


def test_homomorphism_checks(fermion, unip, heis3):
    g = parity_automorphism(fermion)
    assert check_homomorphism(fermion, g.apply, 2, 3).ok
    assert check_homomorphism(heis3, unip.apply, 2, 3).ok
    # e^{2 pi i N} and e^{2 pi i S} are automorphisms as well
    assert check_homomorphism(heis3, unip.unipotent_exp, 2, 3).ok
    assert check_homomorphism(heis3, unip.semisimple_exp, 2, 3).ok


def test_derivation_and_conjugation_small(heis3, unip):
    assert check_derivation(heis3, unip, 2, halfwidth=4).ok
    assert check_conjugation(heis3, unip, 2, halfwidth=4).ok


def test_conjugation_has_pi_inverse_payload(unip, heis3):
    b = heis3.gen_vector("b")
    coeffs = nilpotent_power_coeffs(unip, b)
    assert len(coeffs) == 3
    # N b = -c/(2 PI)
    assert coeffs[1] == heis3.gen_vector("c").scale(
        Scalar.pi(-1) * F(-1, 2))


def test_two_step_unipotent_on_degenerate_form():
    # a null, c of norm 1; g: a -> a, c -> c + a is an isometry with
    # (g-1)^2 = 0, so the log series truncates at one term: K = g - 1
    import warnings
    from vertextwist.vosa import HeisenbergAlgebra, check_axioms
    V = HeisenbergAlgebra([[0, 0], [0, 1]], names=["a", "c"])
    assert V.degenerate
    g = orthogonal_automorphism(V, [[1, 1], [0, 1]], name="shear")
    a, c = V.gen_vector("a"), V.gen_vector("c")
    assert g.apply(c) == c + a
    assert g.K_apply(c) == a and g.K_apply(a).is_zero()
    jd = jordan_decompose(g, 1)
    assert jd.spectrum == [0]
    assert jd.blocks[F(1)].nilpotency_index == 2
    # axiom checks still run, minus the conformal ones
    results = check_axioms(V, 2, halfwidth=3)
    assert all(r.ok for r in results)
    assert {r.identity for r in results} == {
        "vacuum-identity", "creation", "L(-1)-derivative"}
    assert check_derivation(V, g, 2, halfwidth=3).ok


def test_non_cyclotomic_spectrum_rejected():
    from vertextwist.errors import NonCyclotomicSpectrum
    from vertextwist.vosa import HeisenbergAlgebra
    # diag(2, 1/2) preserves the hyperbolic form but has non-unit eigenvalues
    V = HeisenbergAlgebra([[0, 1], [1, 0]], names=["a", "b"])
    g = orthogonal_automorphism(V, [[2, 0], [0, F(1, 2)]], name="boost")
    with pytest.raises(NonCyclotomicSpectrum):
        jordan_decompose(g, 1)
