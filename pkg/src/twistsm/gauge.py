"""Gauge transformations of twisted one-forms and the induced field laws.

A gauge unitary is an algebra element whose slots are unitary-valued jets:
two phases ``exp(i alpha), exp(i alpha_p)``, two unit quaternions (SU(2))
and two U(3) blocks.  A one-form transforms as

    A -> rho(u) ( [D, u*]_rho + A u* )

which for the free kind reduces componentwise to
``A_mu -> u (d_mu u*) + u A_mu u*``.  Selfadjointness of the transformed
form is preserved exactly when the unitary is twist-invariant with the two
phases allowed to differ by a constant; the induced laws on the physical
fields are the familiar abelian shift, the SU(2) and SU(3) conjugations
with their derivative terms, and a locked shift of the two abelian pieces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraElement, adjoint, conj_by, represent,
                      twist_flip, twist_rho)
from .fluct import (KIND_FREE, KIND_MAJORANA, KIND_YUKAWA, Couplings,
                    TwistedOneForm, _wrap, extract_higgs, free_form,
                    gauge_sector)
from .jets import (Jet, const_jet, const_twisted_commutator, jet_residual,
                   jet_scalar_mul, phase_jet, quaternion_jet_residual,
                   random_su2_jet, random_su3_jet, random_u3_jet,
                   real_scalar_jet, su3_reduce, unitary_jet_residual)
from .layout import dagger, rel_residual
from .spectral import SpectralData

UNITARY_TOL = 1e-9


@dataclass(frozen=True)
class GaugeUnitary:
    """Unitary algebra element, stored with the phases as real angle jets."""

    alpha: Jet    # 1x1 real jet: angle of the unprimed phase
    alpha_p: Jet  # 1x1 real jet: angle of the primed phase
    q: Jet        # 2x2 unit quaternion jet
    q_p: Jet
    m: Jet        # 3x3 unitary jet
    m_p: Jet

    def __post_init__(self):
        for name in ("alpha", "alpha_p"):
            jet = getattr(self, name)
            if jet.n != 1:
                raise ValueError(f"{name} must be a 1x1 jet")
            worst = max(float(np.abs(s.imag).max()) for s in (jet.value, *jet.d))
            if worst > UNITARY_TOL:
                raise ValueError(f"{name} must be real (residual {worst:.2e})")
        for name, side in (("q", 2), ("q_p", 2), ("m", 3), ("m_p", 3)):
            jet = getattr(self, name)
            if jet.n != side:
                raise ValueError(f"{name} must be {side}x{side}")
            res = unitary_jet_residual(jet)
            if res > UNITARY_TOL:
                raise ValueError(f"{name} is not a unitary jet (residual {res:.2e})")
        for name in ("q", "q_p"):
            res = quaternion_jet_residual(getattr(self, name))
            if res > UNITARY_TOL:
                raise ValueError(f"{name} is not quaternionic (residual {res:.2e})")

    def element(self) -> AlgebraElement:
        """The underlying algebra element (phases exponentiated)."""
        return AlgebraElement(c=phase_jet(self.alpha), cp=phase_jet(self.alpha_p),
                              q=self.q, qp=self.q_p, m=self.m, mp=self.m_p)


def identity_gauge_unitary() -> GaugeUnitary:
    """The unit of the gauge group: zero angles, identity matrices."""
    zero_angle = const_jet(np.zeros((1, 1)))
    eye2 = const_jet(np.eye(2))
    eye3 = const_jet(np.eye(3))
    return GaugeUnitary(alpha=zero_angle, alpha_p=zero_angle,
                        q=eye2, q_p=eye2, m=eye3, m_p=eye3)


def random_gauge_unitary(rng: np.random.Generator, twist_invariant: bool = False,
                         phase_offset: float = 0.0,
                         scale: float = 1.0) -> GaugeUnitary:
    """Draw a random gauge unitary.

    ``twist_invariant=True`` duplicates the unprimed data into the primed
    slots; ``phase_offset`` additionally shifts the primed angle by a
    constant, which commutes with the twist on the represented phases
    (a constant relative phase never enters any commutator).
    """
    alpha = real_scalar_jet(rng, scale)
    q = random_su2_jet(rng, scale)
    m = random_u3_jet(rng, scale)
    if twist_invariant:
        alpha_p = Jet(alpha.value + phase_offset, alpha.d)
        return GaugeUnitary(alpha=alpha, alpha_p=alpha_p, q=q, q_p=q, m=m, m_p=m)
    return GaugeUnitary(alpha=alpha, alpha_p=real_scalar_jet(rng, scale),
                        q=q, q_p=random_su2_jet(rng, scale),
                        m=m, m_p=random_u3_jet(rng, scale))


def colour_phase_locked_unitary(rng: np.random.Generator,
                                scale: float = 1.0) -> GaugeUnitary:
    """Twist-invariant unitary whose colour phase is locked to minus a third
    of the abelian angle.

    Splitting the 3x3 block as ``m = exp(i theta) n`` with ``det n = 1``, the
    lock ``theta = -alpha / 3`` is the unique choice that keeps the
    unimodularity defect of a transformed free one-form invariant: it cancels
    the abelian shift against the colour-phase shift, reducing the colour
    group from U(3) to SU(3).
    """
    alpha = real_scalar_jet(rng, scale)
    q = random_su2_jet(rng, scale)
    n = random_su3_jet(rng, scale)
    theta = Jet(-alpha.value / 3.0, tuple(-m / 3.0 for m in alpha.d))
    m = jet_scalar_mul(phase_jet(theta), n)
    return GaugeUnitary(alpha=alpha, alpha_p=alpha, q=q, q_p=q, m=m, m_p=m)


def unitary_product(v: GaugeUnitary, u: GaugeUnitary) -> GaugeUnitary:
    """Slotwise product ``v u`` (angles add, matrices multiply)."""
    return GaugeUnitary(alpha=v.alpha + u.alpha, alpha_p=v.alpha_p + u.alpha_p,
                        q=v.q @ u.q, q_p=v.q_p @ u.q_p,
                        m=v.m @ u.m, m_p=v.m_p @ u.m_p)


def gauge_transform(data: SpectralData, form: TwistedOneForm,
                    u: GaugeUnitary) -> TwistedOneForm:
    """Transform a one-form: ``A -> rho(u) ([D, u*]_rho + A u*)``."""
    el = u.element()
    el_star = adjoint(el)
    rep_star = represent(el_star)
    if form.kind == KIND_FREE:
        u_val = represent(el)
        rep_rho_u = twist_flip(u_val)
        a_mu = []
        for mu in range(4):
            a_mu.append(u_val.value @ rep_star.d[mu]
                        + u_val.value @ form.A_mu[mu] @ rep_star.value)
        new_form = free_form(data, a_mu)
        # the same transformation applied to the contracted operator agrees
        inhom = sum(-1j * g @ rep_star.d[mu]
                    for mu, g in enumerate(data.gamma_ops))
        raw_level = rep_rho_u.value @ (inhom + form.raw.value @ rep_star.value)
        check = rel_residual(new_form.raw.value, raw_level)
        if check > 1e-9:
            raise AssertionError(
                f"componentwise and contracted transforms disagree ({check:.2e})")
        return new_form
    if form.kind == KIND_YUKAWA:
        d_op = data.DY_op
    elif form.kind == KIND_MAJORANA:
        d_op = data.DM_op
    else:
        raise ValueError(f"unknown kind {form.kind!r}")
    comm = const_twisted_commutator(d_op, rep_star, twist_flip(rep_star))
    raw = represent(twist_rho(el)) @ (comm + form.raw @ rep_star)
    return _wrap(form.kind, raw)


def adjoint_action(data: SpectralData, u: AlgebraElement) -> Jet:
    """Two-sided action ``pi(u) J pi(u) J^{-1}`` implementing conjugation of
    operators that commute with the right action (jets, Leibniz throughout)."""
    return represent(u) @ conj_by(data.K, represent(u))


def covariance_residual(data: SpectralData, form: TwistedOneForm,
                        u: GaugeUnitary) -> float:
    """Residual of the covariance of the fluctuated finite operator.

    ``Ad(rho(u)) (D + A + JAJ^{-1}) Ad(u*) = D + A^u + J A^u J^{-1}`` for the
    finite Dirac pieces, with ``Ad(v) = pi(v) J pi(v) J^{-1}``.
    """
    if form.kind == KIND_FREE:
        raise ValueError("covariance of the derivative piece is not a finite-"
                         "matrix statement; use the finite kinds")
    d_op = data.DY_op if form.kind == KIND_YUKAWA else data.DM_op
    el = u.element()
    ad_rho_u = adjoint_action(data, twist_rho(el))
    ad_u_star = adjoint_action(data, adjoint(el))
    fluct = const_jet(d_op) + form.raw + conj_by(data.K, form.raw)
    lhs = ad_rho_u @ fluct @ ad_u_star
    transformed = gauge_transform(data, form, u)
    rhs = const_jet(d_op) + transformed.raw + conj_by(data.K, transformed.raw)
    return jet_residual(lhs, rhs)


# ---------------------------------------------------------------------------
# induced laws on the physical fields
# ---------------------------------------------------------------------------

def field_law_residuals(data: SpectralData, form: TwistedOneForm,
                        u: GaugeUnitary,
                        couplings: Couplings = Couplings()) -> dict[str, float]:
    """Residuals of the transformation laws of the extracted gauge fields.

    Requires a twist-invariant unitary (otherwise the laws do not close on
    the fields).  The abelian field shifts by ``(2/g1) d alpha``; the weak
    triplet conjugates by the quaternion with inhomogeneous term
    ``(2i/g2) q d(q*)``; the colour data splits into an SU(3) part acting on
    ``V`` and ``g`` and a phase whose derivative shifts ``V0``; ``a`` and
    ``w`` are invariant.
    """
    if form.kind != KIND_FREE:
        raise ValueError("field laws apply to the free kind")
    before = gauge_sector(data, form, couplings)
    after = gauge_sector(data, gauge_transform(data, form, u), couplings)
    theta, n = su3_reduce(u.m)
    qv = u.q.value
    out: dict[str, float] = {}
    worst_a = worst_w = worst_b = worst_wmat = worst_g = worst_v = worst_v0 = 0.0
    for mu in range(4):
        worst_a = max(worst_a, abs(after.a[mu] - before.a[mu])
                      / max(1.0, abs(before.a[mu])))
        worst_w = max(worst_w, abs(after.w[mu] - before.w[mu])
                      / max(1.0, abs(before.w[mu])))
        b_claim = before.B[mu] + (2.0 / couplings.g1) * float(u.alpha.d[mu][0, 0].real)
        worst_b = max(worst_b, abs(after.B[mu] - b_claim) / max(1.0, abs(b_claim)))
        w_claim = qv @ before.W_mat[mu] @ dagger(qv) \
            + (2j / couplings.g2) * qv @ dagger(u.q.d[mu])
        worst_wmat = max(worst_wmat, rel_residual(after.W_mat[mu], w_claim))
        nv = n.value
        g_claim = nv @ before.g[mu] @ dagger(nv)
        worst_g = max(worst_g, rel_residual(after.g[mu], g_claim))
        v_claim = nv @ before.V_mat[mu] @ dagger(nv) \
            - (2j / couplings.g3) * nv @ dagger(n.d[mu])
        worst_v = max(worst_v, rel_residual(after.V_mat[mu], v_claim))
        v0_claim = before.V0[mu] - float(theta.d[mu][0, 0].real)
        worst_v0 = max(worst_v0, abs(after.V0[mu] - v0_claim) / max(1.0, abs(v0_claim)))
    out["a_invariant"] = worst_a
    out["w_invariant"] = worst_w
    out["abelian_shift"] = worst_b
    out["weak_conjugation"] = worst_wmat
    out["colour_obstruction_conjugation"] = worst_g
    out["colour_conjugation"] = worst_v
    out["colour_phase_shift"] = worst_v0
    return out


def higgs_law_residuals(data: SpectralData, form: TwistedOneForm,
                        u: GaugeUnitary) -> dict[str, float]:
    """Residuals of the doublet law ``H + I -> q (H + I) alpha*`` for both
    chirality blocks of a flavour one-form, under a twist-invariant unitary
    (a constant phase offset between the two angles is allowed)."""
    if form.kind != KIND_YUKAWA:
        raise ValueError("the doublet law applies to the flavour kind")
    before = extract_higgs(data, form)
    after = extract_higgs(data, gauge_transform(data, form, u))
    qv = u.q
    alpha_mat = _phase_diag(u.alpha)
    eye = const_jet(np.eye(2))
    out: dict[str, float] = {}
    for name, b_jet, a_jet in (("H_r", before.H2, after.H2),
                               ("H_l", before.H2p, after.H2p)):
        claim = qv @ (b_jet + eye) @ alpha_mat.dagger() - eye
        out[name] = jet_residual(a_jet, claim)
    # column form: (phi1 + 1, phi2) -> exp(-i alpha) q (phi1 + 1, phi2)
    phase = phase_jet(Jet(-u.alpha.value, tuple(-m for m in u.alpha.d)))
    claim = jet_scalar_mul(phase, qv @ (before.H2 + eye))
    got = after.H2 + eye
    worst = max(rel_residual(got.value[:, 0:1], claim.value[:, 0:1]),
                *[rel_residual(got.d[mu][:, 0:1], claim.d[mu][:, 0:1])
                  for mu in range(4)])
    out["doublet_column"] = worst
    return out


def _phase_diag(alpha: Jet) -> Jet:
    """2x2 jet ``diag(exp(i alpha), exp(-i alpha))``."""
    plus = phase_jet(alpha)
    minus = phase_jet(Jet(-alpha.value, tuple(-m for m in alpha.d)))
    value = np.diag([plus.value[0, 0], minus.value[0, 0]])
    derivs = tuple(np.diag([plus.d[mu][0, 0], minus.d[mu][0, 0]])
                   for mu in range(4))
    return Jet(value, derivs)


def sigma_invariance_residual(data: SpectralData, form: TwistedOneForm,
                              u: GaugeUnitary) -> float:
    """The singlet one-form is pointwise invariant under twist-invariant
    unitaries; returns the residual between the form and its transform."""
    if form.kind != KIND_MAJORANA:
        raise ValueError("applies to the singlet kind")
    transformed = gauge_transform(data, form, u)
    return jet_residual(transformed.raw, form.raw)


def group_action_residual(data: SpectralData, form: TwistedOneForm,
                          u: GaugeUnitary, v: GaugeUnitary) -> float:
    """Residual of ``(A^u)^v = A^(v u)`` (the transform composes as an action)."""
    one = gauge_transform(data, gauge_transform(data, form, u), v)
    two = gauge_transform(data, form, unitary_product(v, u))
    if form.kind == KIND_FREE:
        return max(rel_residual(x, y) for x, y in zip(one.A_mu, two.A_mu))
    return jet_residual(one.raw, two.raw)
