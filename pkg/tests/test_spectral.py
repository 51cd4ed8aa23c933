"""Fixed operators of the geometry and the defining residual checks."""

import numpy as np
import pytest

from twistsm.algebra import random_element, random_twist_invariant
from twistsm.layout import DIM, dagger, kron, rel_residual
from twistsm.spectral import (FiniteDiracParams, antiparticle_block_residual,
                              build_flavour_dirac, build_gamma,
                              build_singlet_dirac, build_spectral_data,
                              first_order_residual, grading_residuals,
                              naive_first_order_violation, order_zero_residual,
                              real_structure_factor_signs, regularity_residual,
                              right_action_sign, spin_connection_residual)

TOL = 1e-10


# ---------------------------------------------------------------------------
# parameters and the finite Dirac pieces
# ---------------------------------------------------------------------------

def test_params_validate():
    with pytest.raises(ValueError):
        FiniteDiracParams(k_nu=np.nan)
    p = FiniteDiracParams(k_nu=0.5, k_e=0.6, k_u=0.7, k_d=0.8, k_R=0.9)
    assert np.array_equal(p.up_couplings(), [0.5, 0.7, 0.7, 0.7])
    assert np.array_equal(p.down_couplings(), [0.6, 0.8, 0.8, 0.8])


def test_flavour_dirac_frozen_entries():
    d0 = build_flavour_dirac(FiniteDiracParams())
    # per lepto-colour sector the two flavour pairs couple: lepton sector
    # with (0.1, 0.2), each colour sector with (0.3, 0.4)
    assert d0[0, 2] == 0.1 and d0[2, 0] == 0.1
    assert d0[1, 3] == 0.2 and d0[3, 1] == 0.2
    assert d0[4, 6] == 0.3 and d0[6, 4] == 0.3
    assert d0[5, 7] == 0.4 and d0[7, 5] == 0.4
    assert np.count_nonzero(d0) == 16
    assert np.allclose(d0, dagger(d0), atol=0)


def test_singlet_dirac_single_entry():
    dr = build_singlet_dirac(FiniteDiracParams(k_R=2.5))
    assert dr[0, 0] == 2.5
    assert np.count_nonzero(dr) == 1


def test_zero_couplings_give_zero_operators():
    data = build_spectral_data(FiniteDiracParams(0.0, 0.0, 0.0, 0.0, 0.0))
    assert not data.DY_op.any()
    assert not data.DM_op.any()
    assert not data.DF_op.any()


def test_finite_dirac_operators_hermitian(data):
    assert rel_residual(data.DY_op, dagger(data.DY_op)) < 1e-15
    assert rel_residual(data.DM_op, dagger(data.DM_op)) < 1e-15
    assert np.allclose(data.DF_op, data.DY_op + data.DM_op, atol=0)


# ---------------------------------------------------------------------------
# gamma matrices and the frame
# ---------------------------------------------------------------------------

def test_gamma_validation():
    with pytest.raises(ValueError):
        build_gamma(np.eye(3))
    with pytest.raises(ValueError):
        build_gamma(np.zeros((4, 4)))  # singular
    bad = np.eye(4)
    bad[0, 0] = np.inf
    with pytest.raises(ValueError):
        build_gamma(bad)


def test_flat_gamma5_frozen():
    _, gamma5, metric = build_gamma(np.eye(4))
    assert np.array_equal(gamma5, np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex))
    assert np.array_equal(metric, np.eye(4))


def test_clifford_relation_random_frame(rng):
    e = rng.standard_normal((4, 4))
    assert abs(np.linalg.det(e)) > 1e-6
    gammas, _, metric = build_gamma(e)
    assert np.allclose(metric, e @ e.T, atol=0)
    for mu in range(4):
        for nu in range(4):
            anti = gammas[mu] @ gammas[nu] + gammas[nu] @ gammas[mu]
            assert np.allclose(anti, 2 * metric[mu, nu] * np.eye(4), atol=1e-12)


def test_gamma_hermiticity_flat():
    gammas, _, _ = build_gamma(np.eye(4))
    for g in gammas:
        assert rel_residual(g, dagger(g)) < 1e-15


# ---------------------------------------------------------------------------
# structural identities of the fixed operators
# ---------------------------------------------------------------------------

def test_grading_residuals_flat(data):
    res = grading_residuals(data)
    assert res, "no identities measured"
    worst = max(res.values())
    assert worst <= 1e-12, f"worst identity residual {worst:.2e}: {res}"


def test_grading_residuals_curved(curved_data):
    res = grading_residuals(curved_data)
    assert max(res.values()) <= 1e-12


def test_real_structure_factor_signs(data):
    signs = real_structure_factor_signs(data)
    assert signs == {"internal": 1, "spinor": -1}


def test_right_action_sign_positive(data, rng):
    for _ in range(5):
        sign, res = right_action_sign(data, random_element(rng))
        assert sign == 1
        assert res < 1e-12


def test_internal_grading_frozen(data):
    eta2 = np.diag([1.0, -1.0])
    eta4 = np.diag([1.0, 1.0, -1.0, -1.0])
    assert np.array_equal(data.internal_grading,
                          kron(eta2, np.eye(4), eta4))


# ---------------------------------------------------------------------------
# defining conditions
# ---------------------------------------------------------------------------

def test_order_zero(data, rng):
    for _ in range(5):
        a, b = random_element(rng), random_element(rng)
        assert order_zero_residual(data, a, b) < TOL


def test_first_order_flavour_twisted_outer(data, rng):
    for _ in range(5):
        a, b = random_element(rng), random_element(rng)
        assert first_order_residual(data, data.DY_op, a, b) < TOL


def test_first_order_singlet_plain_outer(data, rng):
    for _ in range(5):
        a, b = random_element(rng), random_element(rng)
        assert first_order_residual(data, data.DM_op, a, b,
                                    twist_outer=False) < TOL


def test_first_order_conventions_are_not_interchangeable(data, rng):
    """Each Dirac piece satisfies exactly one outer-bracket convention: the
    flavour piece needs the twisted outer bracket and fails the plain one,
    the singlet piece the reverse."""
    a, b = random_element(rng), random_element(rng)
    assert first_order_residual(data, data.DY_op, a, b, twist_outer=False) > 1e-2
    assert first_order_residual(data, data.DM_op, a, b, twist_outer=True) > 1e-2


def test_first_order_curved_frame(curved_data, rng):
    a, b = random_element(rng), random_element(rng)
    assert first_order_residual(curved_data, curved_data.DY_op, a, b) < TOL
    assert first_order_residual(curved_data, curved_data.DM_op, a, b,
                                twist_outer=False) < TOL


def test_regularity(data, rng):
    for _ in range(3):
        assert regularity_residual(data, random_element(rng)) < TOL


def test_spin_connection_drops_out(data, rng):
    for _ in range(3):
        coeffs = rng.standard_normal((4, 4, 4))
        assert spin_connection_residual(data, random_element(rng), coeffs) < TOL


def test_antiparticle_block_vanishes(data, rng):
    for _ in range(3):
        assert antiparticle_block_residual(data, random_element(rng)) < TOL


# ---------------------------------------------------------------------------
# the flavour-blind representation violates the first-order condition
# ---------------------------------------------------------------------------

def test_naive_violation_generic(data, rng):
    values = [naive_first_order_violation(data, random_element(rng),
                                          random_element(rng))
              for _ in range(20)]
    assert np.mean(np.asarray(values) >= 1e-3) >= 0.99


def test_naive_violation_vanishes_untwisted(data, rng):
    for _ in range(5):
        v = naive_first_order_violation(data, random_twist_invariant(rng),
                                        random_twist_invariant(rng))
        assert v <= 1e-12


def test_naive_violation_linear_in_inner_element(data, rng):
    from twistsm.algebra import AlgebraElement
    a = random_element(rng)
    b = random_element(rng)
    b2 = AlgebraElement(c=b.c * 2, cp=b.cp * 2, q=b.q * 2, qp=b.qp * 2,
                        m=b.m * 2, mp=b.mp * 2)
    v1 = naive_first_order_violation(data, a, b)
    v2 = naive_first_order_violation(data, a, b2)
    assert abs(v2 - 2.0 * v1) / v2 < 1e-12
