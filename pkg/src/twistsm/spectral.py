"""Spectral data at a point: gamma matrices, finite Dirac pieces, real
structure, grading, and residual checks for the defining conditions.

The Dirac operator splits into a derivative part (Euclidean gamma matrices
contracted with partial derivatives, optionally curved by a vierbein), a
flavour-coupling part built from Yukawa-type couplings, and a
singlet-coupling part built from one Majorana-type coupling.  The twist
exchanges the two chiralities, so twisted commutators ``[D, a]_rho`` with
``rho`` the primed/unprimed swap replace ordinary ones everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraElement, conj_by, opposite, represent,
                      represent_naive, twist_flip)
from .jets import Jet, const_twisted_commutator, jet_residual, zero_jet
from .layout import DIM, PAULI, blockdiag, dagger, embed, kron, rel_residual

_I2 = np.eye(2, dtype=np.complex128)
_I4 = np.eye(4, dtype=np.complex128)

XI = np.array([[0, 1], [1, 0]], dtype=np.complex128)
TAU = np.array([[0, -1], [1, 0]], dtype=np.complex128)
ETA2 = np.diag([1.0, -1.0]).astype(np.complex128)
ETA4 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(np.complex128)

#: Euclidean sigma four-vectors: (I, -i s_k) and (I, +i s_k).
SIGMA_MU: tuple[np.ndarray, ...] = (_I2, -1j * PAULI[0], -1j * PAULI[1], -1j * PAULI[2])
SIGMA_TILDE_MU: tuple[np.ndarray, ...] = (_I2, 1j * PAULI[0], 1j * PAULI[1], 1j * PAULI[2])


@dataclass(frozen=True)
class FiniteDiracParams:
    """Coupling constants of the finite Dirac pieces.

    ``k_nu, k_e, k_u, k_d`` couple the flavour pairs per lepto-colour sector
    (neutrino-type and electron-type for the lepton, up-type and down-type
    for each colour); ``k_R`` couples the single gauge-singlet entry.  All
    couplings are real, which the real-structure symmetry requires.
    """

    k_nu: float = 0.1
    k_e: float = 0.2
    k_u: float = 0.3
    k_d: float = 0.4
    k_R: float = 1.0

    def __post_init__(self):
        for name in ("k_nu", "k_e", "k_u", "k_d", "k_R"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, float(value))

    def up_couplings(self) -> np.ndarray:
        """Per-sector coupling of the first flavour of each pair."""
        return np.array([self.k_nu, self.k_u, self.k_u, self.k_u])

    def down_couplings(self) -> np.ndarray:
        """Per-sector coupling of the second flavour of each pair."""
        return np.array([self.k_e, self.k_d, self.k_d, self.k_d])


def build_gamma(vierbein: np.ndarray) -> tuple[tuple[np.ndarray, ...], np.ndarray, np.ndarray]:
    """Gamma matrices on the spinor factors from a vierbein.

    ``vierbein[mu, a]`` are real coefficients expanding the four curved gamma
    matrices on the Euclidean ones ``gamma^a = offdiag(sigma^a, sigma~^a)``
    over ``(s, sdot)``.  Returns ``(gammas, gamma5, metric)`` with
    ``metric = e e^T`` (so ``{gamma^mu, gamma^nu} = 2 g^{mu nu}``) and the
    chirality element ``gamma5 = gamma^1 gamma^2 gamma^3 gamma^0`` of the
    *Euclidean* matrices, which is ``diag(I, -I)`` on the chirality factor.
    """
    e = np.asarray(vierbein, dtype=np.float64)
    if e.shape != (4, 4):
        raise ValueError(f"vierbein must be 4x4, got {e.shape}")
    if not np.isfinite(e).all():
        raise ValueError("vierbein has non-finite entries")
    if abs(np.linalg.det(e)) < 1e-12:
        raise ValueError("vierbein must be invertible")
    zero = np.zeros((2, 2), dtype=np.complex128)
    gamma_e = tuple(
        np.block([[zero, SIGMA_MU[a]], [SIGMA_TILDE_MU[a], zero]])
        for a in range(4)
    )
    gammas = tuple(sum(e[mu, a] * gamma_e[a] for a in range(4)) for mu in range(4))
    gamma5 = gamma_e[1] @ gamma_e[2] @ gamma_e[3] @ gamma_e[0]
    metric = e @ e.T
    return gammas, gamma5, metric


def build_flavour_dirac(params: FiniteDiracParams) -> np.ndarray:
    """16x16 flavour-coupling block on ``(I, alpha)``: per sector, the first
    flavour pair couples to the second with couplings ``(k_up, k_down)``."""
    ku = params.up_couplings()
    kd = params.down_couplings()
    out = np.zeros((16, 16), dtype=np.complex128)
    for i in range(4):
        base = 4 * i
        out[base + 0, base + 2] = np.conj(ku[i])
        out[base + 1, base + 3] = np.conj(kd[i])
        out[base + 2, base + 0] = ku[i]
        out[base + 3, base + 1] = kd[i]
    return out


def build_singlet_dirac(params: FiniteDiracParams) -> np.ndarray:
    """16x16 singlet coupling on ``(I, alpha)``: one entry at (0, 0)."""
    out = np.zeros((16, 16), dtype=np.complex128)
    out[0, 0] = params.k_R
    return out


@dataclass(frozen=True)
class SpectralData:
    """All fixed operators of the geometry at a point."""

    params: FiniteDiracParams
    vierbein: np.ndarray
    metric: np.ndarray
    gammas: tuple[np.ndarray, ...]      # 4 curved gamma matrices, 4x4 on (s, sdot)
    gamma5: np.ndarray                  # 4x4 on (s, sdot)
    gamma_ops: tuple[np.ndarray, ...]   # the same, embedded in 128 dims
    gamma_pair_ops: np.ndarray          # (4, 4, 128, 128) products gamma_r gamma_n
    gamma5_op: np.ndarray
    D0: np.ndarray                      # 16x16 flavour coupling on (I, alpha)
    DR: np.ndarray                      # 16x16 singlet coupling on (I, alpha)
    DY: np.ndarray                      # 32x32 on (C, I, alpha): diag(D0, D0*)
    DM: np.ndarray                      # 32x32 on (C, I, alpha): offdiag(DR, DR*)
    DY_op: np.ndarray                   # gamma5 (x) DY, 128 dims
    DM_op: np.ndarray                   # gamma5 (x) DM, 128 dims
    DF_op: np.ndarray                   # DY_op + DM_op
    K: np.ndarray                       # unitary part of the real structure J = K cc
    grading: np.ndarray                 # Z2 grading of the full space
    internal_grading: np.ndarray        # grading of the internal 32-dim factor


def build_real_structure() -> np.ndarray:
    """Unitary ``K`` with ``J = K cc``: swap on ``C`` times ``-i eta (x) tau``
    on the spinor factors."""
    k_spin = -1j * kron(ETA2, TAU)
    return embed(XI, "C") @ embed(k_spin, ("s", "sdot"))


def build_grading() -> np.ndarray:
    """The Z2 grading: chirality sign times doubling sign times flavour-pair sign."""
    return embed(ETA2, "s") @ embed(ETA2, "C") @ embed(ETA4, "alpha")


def build_spectral_data(params: FiniteDiracParams | None = None,
                        vierbein: np.ndarray | None = None) -> SpectralData:
    """Assemble every fixed operator of the geometry."""
    params = params or FiniteDiracParams()
    if vierbein is None:
        vierbein = np.eye(4)
    gammas, gamma5, metric = build_gamma(vierbein)
    gamma_ops = tuple(embed(g, ("s", "sdot")) for g in gammas)
    gamma_pair_ops = np.stack([np.stack([gr @ gn for gn in gamma_ops])
                               for gr in gamma_ops])
    gamma5_op = embed(gamma5, ("s", "sdot"))
    d0 = build_flavour_dirac(params)
    dr = build_singlet_dirac(params)
    dy = blockdiag(d0, dagger(d0))
    zero16 = np.zeros((16, 16), dtype=np.complex128)
    dm = np.block([[zero16, dr], [dagger(dr), zero16]])
    dy_op = gamma5_op @ embed(dy, ("C", "I", "alpha"))
    dm_op = gamma5_op @ embed(dm, ("C", "I", "alpha"))
    return SpectralData(
        params=params,
        vierbein=np.asarray(vierbein, dtype=np.float64),
        metric=metric,
        gammas=gammas,
        gamma5=gamma5,
        gamma_ops=gamma_ops,
        gamma_pair_ops=gamma_pair_ops,
        gamma5_op=gamma5_op,
        D0=d0,
        DR=dr,
        DY=dy,
        DM=dm,
        DY_op=dy_op,
        DM_op=dm_op,
        DF_op=dy_op + dm_op,
        K=build_real_structure(),
        grading=build_grading(),
        internal_grading=kron(ETA2, _I4, ETA4),
    )


# ---------------------------------------------------------------------------
# residuals of the defining conditions
# ---------------------------------------------------------------------------

def _zero_residual(j: Jet) -> float:
    return jet_residual(j, zero_jet(j.n))


def order_zero_residual(data: SpectralData, a: AlgebraElement,
                        b: AlgebraElement, rep=represent) -> float:
    """Residual of ``[pi(a), J pi(b*) J^{-1}] = 0``."""
    pa = rep(a)
    bo = opposite(b, data.K, rep=rep)
    return _zero_residual(pa @ bo - bo @ pa)


def first_order_residual(data: SpectralData, d_op: np.ndarray,
                         a: AlgebraElement, b: AlgebraElement,
                         rep=represent, *, twist_outer: bool = True) -> float:
    """Residual of the first-order condition for a constant Dirac piece.

    The inner bracket is always the twisted commutator ``S = [D, b]_rho``.
    With ``twist_outer=True`` the conjugated right action is twisted in the
    outer bracket, ``S a_opp - (rho a)_opp S``; with ``twist_outer=False``
    the outer bracket is the plain commutator ``S a_opp - a_opp S``.

    The flavour piece (chirality times the particle/antiparticle-diagonal
    mass matrix) satisfies the twisted form, while the singlet piece
    (chirality times the particle/antiparticle-offdiagonal matrix) commutes
    with the conjugated right action without the outer twist: its only
    nonzero entries couple slots on which the left and right actions agree
    chirality-pairwise, so the twist swap would itself create the defect.
    """
    rb = rep(b)
    one_form = const_twisted_commutator(d_op, rb, twist_flip(rb))
    a_opp = opposite(a, data.K, rep=rep)
    left = twist_flip(a_opp) if twist_outer else a_opp
    return _zero_residual(one_form @ a_opp - left @ one_form)


def naive_first_order_violation(data: SpectralData, a: AlgebraElement,
                                b: AlgebraElement) -> float:
    """Frobenius norm (largest slot) of the first-order defect in the
    flavour-blind representation, against the flavour-coupling Dirac piece.

    Absolute (not capped) so that linearity in ``b`` is visible.
    """
    rb = represent_naive(b)
    one_form = const_twisted_commutator(data.DY_op, rb, twist_flip(rb))
    a_opp = opposite(a, data.K, rep=represent_naive)
    a_opp_tw = twist_flip(a_opp)
    defect = one_form @ a_opp - a_opp_tw @ one_form
    return max(float(np.linalg.norm(m)) for m in (defect.value, *defect.d))


def regularity_residual(data: SpectralData, a: AlgebraElement) -> float:
    """Residual of ``gamma^mu pi(a) = pi(rho(a)) gamma^mu`` for all directions."""
    pa = represent(a)
    pra = twist_flip(pa)
    worst = 0.0
    for g in data.gamma_ops:
        worst = max(worst, _zero_residual(
            Jet(g @ pa.value - pra.value @ g,
                tuple(g @ pa.d[mu] - pra.d[mu] @ g for mu in range(4)))))
    return worst


def spin_connection_residual(data: SpectralData, a: AlgebraElement,
                             coeffs: np.ndarray) -> float:
    """Residual of ``[omega, pi(a)] = 0`` for a spin-connection-type term.

    ``omega = sum coeffs[mu, rho, nu] gamma^rho gamma^nu`` is an even product
    of gamma matrices (per direction ``mu``), which commutes with the
    representation because the twist squares to the identity.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape != (4, 4, 4):
        raise ValueError("coefficients must have shape (4, 4, 4)")
    pa = represent(a)
    omegas = np.tensordot(coeffs, data.gamma_pair_ops, axes=([1, 2], [0, 1]))
    worst = 0.0
    for omega in omegas:
        worst = max(worst, _zero_residual(
            Jet._wrap(omega @ pa.value - pa.value @ omega,
                      omega @ pa.d - pa.d @ omega)))
    return worst


def antiparticle_block_residual(data: SpectralData, b: AlgebraElement) -> float:
    """Residual of the vanishing of the ``C = 1`` diagonal block of
    ``[gamma5 (x) diag(D0, D0*), b]_rho``.

    Only the particle block of the flavour one-form survives; this is what
    makes the adjoint-conjugated one-form live purely on the antiparticle
    side and the flavour sector produce a single scalar doublet pair.
    """
    from .layout import take_block
    rb = represent(b)
    one_form = const_twisted_commutator(data.DY_op, rb, twist_flip(rb))
    worst = 0.0
    for m in (one_form.value, *one_form.d):
        blk = take_block(m, {"C": (1, 1)})
        worst = max(worst, float(np.linalg.norm(blk) / max(1.0, np.linalg.norm(m))))
    return worst


def grading_residuals(data: SpectralData) -> dict[str, float]:
    """Residuals of the structural identities among the fixed operators."""
    ident = np.eye(DIM, dtype=np.complex128)
    g = data.grading
    k = data.K
    out: dict[str, float] = {}
    out["grading_squares_to_identity"] = rel_residual(g @ g, ident)
    out["grading_selfadjoint"] = rel_residual(g, dagger(g))
    out["gamma5_matches_grading_on_spinors"] = rel_residual(
        data.gamma5, kron(ETA2, _I2))
    worst = 0.0
    for gm in data.gamma_ops:
        worst = max(worst, rel_residual(g @ gm, -gm @ g))
    out["grading_anticommutes_gammas"] = worst
    out["grading_anticommutes_flavour_dirac"] = rel_residual(
        g @ data.DY_op, -data.DY_op @ g)
    out["grading_anticommutes_singlet_dirac"] = rel_residual(
        g @ data.DM_op, -data.DM_op @ g)
    # Clifford relation with the metric of the chosen vierbein
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            anti = data.gamma_ops[mu] @ data.gamma_ops[nu] \
                + data.gamma_ops[nu] @ data.gamma_ops[mu]
            worst = max(worst, rel_residual(anti, 2 * data.metric[mu, nu] * ident))
    out["clifford_relation"] = worst
    # real structure: K is unitary, J^2 = K conj(K) = -1
    out["real_structure_unitary"] = rel_residual(k @ dagger(k), ident)
    out["real_structure_squares_to_minus_one"] = rel_residual(k @ np.conj(k), -ident)
    out["real_structure_commutes_flavour_dirac"] = rel_residual(
        k @ np.conj(data.DY_op), data.DY_op @ k)
    out["real_structure_commutes_singlet_dirac"] = rel_residual(
        k @ np.conj(data.DM_op), data.DM_op @ k)
    out["real_structure_anticommutes_grading"] = rel_residual(
        k @ np.conj(g), -g @ k)
    worst = 0.0
    for gm in data.gamma_ops:
        worst = max(worst, rel_residual(k @ np.conj(gm), -gm @ k))
    out["real_structure_anticommutes_gammas"] = worst
    return out


def real_structure_factor_signs(data: SpectralData) -> dict[str, int]:
    """Signs of the squares of the two antiunitary factors of ``J``.

    The internal factor (swap on ``C``) squares to ``+1``; the spinor factor
    squares to ``-1``; together ``J^2 = -1``.  Recorded, not assumed.
    """
    k_int = XI  # acts on C, real
    k_spin = -1j * kron(ETA2, TAU)
    sq_int = k_int @ np.conj(k_int)
    sq_spin = k_spin @ np.conj(k_spin)
    out: dict[str, int] = {}
    for name, sq, n in (("internal", sq_int, 2), ("spinor", sq_spin, 4)):
        for sign in (1, -1):
            if rel_residual(sq, sign * np.eye(n)) < 1e-12:
                out[name] = sign
                break
        else:
            raise AssertionError(f"{name} factor does not square to +/-1")
    return out


def right_action_sign(data: SpectralData, a: AlgebraElement) -> tuple[int, float]:
    """Observed sign in ``J pi(a) J^{-1} = sign . diag(swapped conjugate blocks)``.

    Conjugating the representation by the real structure exchanges the two
    ``C`` blocks and conjugates the entries; the overall sign is ``+1`` here
    (the spinor factor of ``J`` commutes with chirality-diagonal operators
    that are trivial on the dotted index).  Returns the sign and the residual
    of the best match.
    """
    from .layout import take_block
    pa = represent(a).value
    conj_pa = conj_by(data.K, pa)
    q = take_block(pa, {"C": (0, 0)})
    m = take_block(pa, {"C": (1, 1)})
    swapped = blockdiag(np.conj(m), np.conj(q))
    for sign in (1, -1):
        res = rel_residual(conj_pa, sign * swapped)
        if res < 1e-10:
            return sign, res
    return 0, min(rel_residual(conj_pa, swapped), rel_residual(conj_pa, -swapped))
