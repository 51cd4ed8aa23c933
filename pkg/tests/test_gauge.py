"""Gauge transformations: group laws, covariance, and induced field laws."""

import numpy as np
import pytest

from twistsm.algebra import random_element, represent
from twistsm.fluct import (KIND_FREE, KIND_MAJORANA, KIND_YUKAWA,
                           TwistedOneForm, gauge_sector, majorana_form,
                           one_form, random_selfadjoint_free,
                           random_selfadjoint_majorana,
                           random_selfadjoint_yukawa, selfadjoint_residual,
                           unimodularity)
from twistsm.gauge import (GaugeUnitary, colour_phase_locked_unitary,
                           covariance_residual, field_law_residuals,
                           gauge_transform, group_action_residual,
                           higgs_law_residuals, identity_gauge_unitary,
                           random_gauge_unitary, sigma_invariance_residual,
                           unitary_product)
from twistsm.jets import Jet, const_jet, jet_residual, real_scalar_jet, zero_jet
from twistsm.layout import DIM, rel_residual

TOL = 1e-10


def _forms(data, rng):
    pair = [(random_element(rng), random_element(rng))]
    return {
        KIND_YUKAWA: one_form(data, pair, KIND_YUKAWA),
        KIND_MAJORANA: one_form(data, pair, KIND_MAJORANA),
        KIND_FREE: one_form(data, pair, KIND_FREE),
    }


def _form_distance(one, two) -> float:
    if one.kind == KIND_FREE:
        return max(rel_residual(x, y) for x, y in zip(one.A_mu, two.A_mu))
    return jet_residual(one.raw, two.raw)


# ---------------------------------------------------------------------------
# group structure
# ---------------------------------------------------------------------------

def test_identity_fixes_every_kind(data, rng):
    e = identity_gauge_unitary()
    for form in _forms(data, rng).values():
        assert _form_distance(gauge_transform(data, form, e), form) < TOL


def test_transform_composes_as_group_action(data, rng):
    u = random_gauge_unitary(rng)
    v = random_gauge_unitary(rng)
    for form in _forms(data, rng).values():
        assert group_action_residual(data, form, u, v) < TOL


def test_unitary_product_multiplies_representations(rng):
    u = random_gauge_unitary(rng)
    v = random_gauge_unitary(rng)
    prod = represent(unitary_product(v, u).element())
    split = represent(v.element()) @ represent(u.element())
    assert jet_residual(prod, split) < TOL


def test_gauge_unitary_validation(rng):
    good = identity_gauge_unitary()
    with pytest.raises(ValueError):
        GaugeUnitary(alpha=const_jet(np.array([[0.3j]])), alpha_p=good.alpha_p,
                     q=good.q, q_p=good.q_p, m=good.m, m_p=good.m_p)
    with pytest.raises(ValueError):
        GaugeUnitary(alpha=const_jet(np.eye(2)), alpha_p=good.alpha_p,
                     q=good.q, q_p=good.q_p, m=good.m, m_p=good.m_p)
    with pytest.raises(ValueError):
        GaugeUnitary(alpha=good.alpha, alpha_p=good.alpha_p,
                     q=const_jet(2.0 * np.eye(2)), q_p=good.q_p,
                     m=good.m, m_p=good.m_p)
    # unitary but not quaternionic 2x2 block
    with pytest.raises(ValueError):
        GaugeUnitary(alpha=good.alpha, alpha_p=good.alpha_p,
                     q=const_jet(np.diag([1j, 1j])), q_p=good.q_p,
                     m=good.m, m_p=good.m_p)
    # tangent slot leaving the unitary group
    broken = Jet(np.eye(2, dtype=np.complex128),
                 (np.eye(2, dtype=np.complex128),) + (np.zeros((2, 2)),) * 3)
    with pytest.raises(ValueError):
        GaugeUnitary(alpha=good.alpha, alpha_p=good.alpha_p,
                     q=broken, q_p=good.q_p, m=good.m, m_p=good.m_p)
    with pytest.raises(ValueError):
        GaugeUnitary(alpha=good.alpha, alpha_p=good.alpha_p,
                     q=good.q, q_p=good.q_p, m=const_jet(np.eye(2)),
                     m_p=good.m_p)


def test_transform_rejects_unknown_kind(data, rng):
    bogus = TwistedOneForm(kind="bogus", raw=zero_jet(DIM))
    with pytest.raises(ValueError):
        gauge_transform(data, bogus, random_gauge_unitary(rng))


# ---------------------------------------------------------------------------
# covariance of the fluctuated operator
# ---------------------------------------------------------------------------

def test_flavour_covariance_generic_and_invariant(data, rng):
    for twist_invariant in (False, True):
        form = one_form(data, [(random_element(rng), random_element(rng))],
                        KIND_YUKAWA)
        u = random_gauge_unitary(rng, twist_invariant=twist_invariant)
        assert covariance_residual(data, form, u) < TOL


def test_singlet_covariance_twist_invariant(data, rng):
    form = random_selfadjoint_majorana(data, rng)
    u = random_gauge_unitary(rng, twist_invariant=True)
    assert covariance_residual(data, form, u) < TOL


def test_covariance_rejects_free_kind(data, rng):
    form = random_selfadjoint_free(data, rng)
    with pytest.raises(ValueError):
        covariance_residual(data, form, random_gauge_unitary(rng))


# ---------------------------------------------------------------------------
# induced laws on the physical fields
# ---------------------------------------------------------------------------

def test_field_laws_under_twist_invariant_unitary(data, rng):
    for _ in range(3):
        form = random_selfadjoint_free(data, rng, unimodular=True)
        u = random_gauge_unitary(rng, twist_invariant=True)
        res = field_law_residuals(data, form, u)
        assert max(res.values()) < TOL, res
    with pytest.raises(ValueError):
        field_law_residuals(data, random_selfadjoint_majorana(data, rng),
                            random_gauge_unitary(rng, twist_invariant=True))


def test_pure_phase_shifts_only_the_abelian_field(data, rng):
    alpha = real_scalar_jet(rng)
    u = GaugeUnitary(alpha=alpha, alpha_p=alpha,
                     q=const_jet(np.eye(2)), q_p=const_jet(np.eye(2)),
                     m=const_jet(np.eye(3)), m_p=const_jet(np.eye(3)))
    form = random_selfadjoint_free(data, rng)
    before = gauge_sector(data, form)
    after = gauge_sector(data, gauge_transform(data, form, u))
    for mu in range(4):
        da = float(alpha.d[mu][0, 0].real)
        shifted = before.components.c_r[mu] - 1j * da
        assert abs(after.components.c_r[mu] - shifted) < 1e-10
        assert abs(after.a[mu] - before.a[mu]) < 1e-10
        assert abs(after.B[mu] - before.B[mu] - 2.0 * da) < 1e-10
    # the quaternion and colour blocks never move under a pure phase
    assert np.allclose(after.W_mat, before.W_mat, atol=1e-10)
    assert np.allclose(after.g, before.g, atol=1e-10)
    assert np.allclose(after.V_mat, before.V_mat, atol=1e-10)
    assert np.allclose(after.V0, before.V0, atol=1e-10)


def test_higgs_doublet_law(data, rng):
    for _ in range(3):
        form = random_selfadjoint_yukawa(data, rng)
        u = random_gauge_unitary(rng, twist_invariant=True)
        res = higgs_law_residuals(data, form, u)
        assert max(res.values()) < TOL, res
    with pytest.raises(ValueError):
        higgs_law_residuals(data, random_selfadjoint_majorana(data, rng),
                            random_gauge_unitary(rng, twist_invariant=True))


def test_sigma_invariance(data, rng):
    for _ in range(3):
        form = random_selfadjoint_majorana(data, rng)
        u = random_gauge_unitary(rng, twist_invariant=True)
        assert sigma_invariance_residual(data, form, u) < TOL
    with pytest.raises(ValueError):
        sigma_invariance_residual(data, random_selfadjoint_yukawa(data, rng),
                                  random_gauge_unitary(rng, twist_invariant=True))


def test_zero_singlet_form_stays_zero(data, rng):
    zero_scalar = const_jet(np.zeros((1, 1)))
    zero_form = majorana_form(data, zero_scalar, zero_scalar)
    u = random_gauge_unitary(rng, twist_invariant=True)
    moved = gauge_transform(data, zero_form, u)
    assert jet_residual(moved.raw, zero_jet(DIM)) < TOL


# ---------------------------------------------------------------------------
# selfadjointness under transformation
# ---------------------------------------------------------------------------

def test_twist_invariant_unitaries_preserve_selfadjointness(data, rng):
    form = random_selfadjoint_free(data, rng, unimodular=True)
    for offset in (0.0, 0.7, -2.1):
        u = random_gauge_unitary(rng, twist_invariant=True,
                                 phase_offset=offset)
        assert selfadjoint_residual(gauge_transform(data, form, u)) < TOL
    yuk = random_selfadjoint_yukawa(data, rng)
    u = random_gauge_unitary(rng, twist_invariant=True)
    assert selfadjoint_residual(gauge_transform(data, yuk, u)) < TOL


def test_generic_unitary_breaks_selfadjointness(data, rng):
    form = random_selfadjoint_free(data, rng, unimodular=True)
    u = random_gauge_unitary(rng)  # independent primed data
    assert selfadjoint_residual(gauge_transform(data, form, u)) > 1e-4


# ---------------------------------------------------------------------------
# reduction of the colour phase
# ---------------------------------------------------------------------------

def test_locked_colour_phase_preserves_trace_defect(data, rng):
    form = random_selfadjoint_free(data, rng)
    before = unimodularity(data, form).defect
    locked = colour_phase_locked_unitary(rng)
    after = unimodularity(data, gauge_transform(data, form, locked)).defect
    assert float(np.abs(after - before).max()) < TOL


def test_free_colour_phase_moves_trace_defect(data, rng):
    form = random_selfadjoint_free(data, rng)
    before = unimodularity(data, form).defect
    u = random_gauge_unitary(rng, twist_invariant=True)
    after = unimodularity(data, gauge_transform(data, form, u)).defect
    assert float(np.abs(after - before).max()) > 1e-4
