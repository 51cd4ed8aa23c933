"""Twisted fluctuations of the Dirac operator and extraction of the fields.

A twisted one-form is a finite sum ``sum_i pi(a_i) [D, pi(b_i)]_rho`` for one
of the three pieces of the Dirac operator:

* ``kind = "yukawa"``: the flavour-coupling piece.  The one-form lives in
  the particle block, couples the two flavour pairs, and is parametrised by
  four quaternionic 2x2 jets ``H1, H2, H1p, H2p`` (one pair per chirality).
* ``kind = "majorana"``: the singlet-coupling piece.  The one-form is
  off-diagonal in the doubling factor and carries two scalar jets
  ``sigma, sigma_p``.
* ``kind = "free"``: the derivative piece.  The one-form is
  ``-i gamma^mu A_mu`` with four component matrices ``A_mu`` that inherit
  the block pattern of the representation; their entries are gauge fields.

Extraction routines invert these parametrisations and certify them by
rebuilding the one-form from the extracted fields.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraElement, assemble_blocks, conj_by, represent,
                      twist_flip, twist_rho)
from .jets import (Jet, const_jet, const_twisted_commutator, jet_residual,
                   quaternion_components, quaternion_jet_residual,
                   quaternion_residual, random_quaternion_jet,
                   random_scalar_jet, zero_jet)
from .layout import (DIM, GELLMANN, PAULI, BasisLayout, as_operator, blockdiag,
                     dagger, embed, kron, masked_residual, rel_residual,
                     split_identity, take_block)
from .spectral import SpectralData, XI

KIND_YUKAWA = "yukawa"
KIND_MAJORANA = "majorana"
KIND_FREE = "free"
KINDS = (KIND_YUKAWA, KIND_MAJORANA, KIND_FREE)

STRUCTURE_TOL = 1e-10

_I2 = np.eye(2, dtype=np.complex128)
_I3 = np.eye(3, dtype=np.complex128)
_I4 = np.eye(4, dtype=np.complex128)
_E_RIGHT = np.diag([1.0, 0.0]).astype(np.complex128)
_E_LEFT = np.diag([0.0, 1.0]).astype(np.complex128)
_P_FIRST_PAIR = np.diag([1.0, 1.0, 0.0, 0.0]).astype(np.complex128)
_P_SECOND_PAIR = np.diag([0.0, 0.0, 1.0, 1.0]).astype(np.complex128)


def rho_flip(matrix: np.ndarray) -> np.ndarray:
    """Apply the twist to a represented operator: swap the chirality blocks.

    Conjugation by the chirality-swap permutation is a pure relabelling, so
    it is done by reversing the two chirality axes instead of multiplying.
    """
    m = as_operator(matrix, DIM).reshape(2, 2, 2, 4, 4, 2, 2, 2, 4, 4)
    return np.flip(m, (1, 6)).reshape(DIM, DIM)


@dataclass(frozen=True)
class Couplings:
    """Gauge coupling constants used to normalise the extracted fields."""

    g1: float = 1.0
    g2: float = 1.0
    g3: float = 1.0

    def __post_init__(self):
        for name in ("g1", "g2", "g3"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive and finite")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class TwistedOneForm:
    """A twisted one-form of one of the three kinds.

    ``raw`` is the 128-dim operator jet.  For the free kind the operator is
    ``-i gamma^mu A_mu`` (a plain matrix, stored in the value slot) and the
    four component matrices are kept in ``A_mu``.  ``pairs`` records the
    generating element pairs when the form was built from the algebra; forms
    synthesised directly from field data carry ``pairs = None``.
    """

    kind: str
    raw: Jet
    A_mu: tuple[np.ndarray, ...] | None = None
    pairs: tuple | None = None


@functools.lru_cache(maxsize=None)
def structure_mask(kind: str) -> np.ndarray:
    """Boolean mask of the positions a one-form of this kind may occupy.

    For the free kind the mask applies to each component matrix ``A_mu``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    mask = np.zeros((DIM, DIM), dtype=bool)
    for i in range(DIM):
        ci, si, sdi, ii, ai = BasisLayout.unflat(i)
        for j in range(DIM):
            cj, sj, sdj, ij, aj = BasisLayout.unflat(j)
            if kind == KIND_YUKAWA:
                ok = (ci == 0 and cj == 0 and si == sj and sdi == sdj
                      and ii == ij and (ai < 2) != (aj < 2))
            elif kind == KIND_MAJORANA:
                ok = (ci != cj and si == sj and sdi == sdj
                      and ii == ij == 0 and ai == aj == 0)
            else:
                if ci != cj or si != sj or sdi != sdj:
                    ok = False
                elif ci == 0:
                    ok = ii == ij and ((ai == aj and ai < 2) or (ai >= 2 and aj >= 2))
                else:
                    ok = ai == aj
            mask[i, j] = ok
    mask.setflags(write=False)
    return mask


def structure_residual(form: TwistedOneForm) -> float:
    """Largest relative weight of a one-form outside its kind's block pattern."""
    mask = structure_mask(form.kind)
    if form.kind == KIND_FREE:
        worst = max(masked_residual(a, mask) for a in form.A_mu)
        # the derivative slots of a free one-form vanish: only the value is a field
        worst = max(worst, max(float(np.linalg.norm(m)) for m in form.raw.d))
        return worst
    return max(masked_residual(m, mask) for m in (form.raw.value, *form.raw.d))


def _wrap(kind: str, raw: Jet, a_mu=None, pairs=None) -> TwistedOneForm:
    form = TwistedOneForm(kind=kind, raw=raw,
                          A_mu=None if a_mu is None else tuple(a_mu),
                          pairs=pairs)
    res = structure_residual(form)
    if res > STRUCTURE_TOL:
        raise AssertionError(
            f"one-form of kind {kind!r} violates its block pattern (residual {res:.2e})")
    return form


def one_form(data: SpectralData, pairs, kind: str) -> TwistedOneForm:
    """Build ``sum_i pi(a_i) [D_kind, pi(b_i)]_rho`` from element pairs.

    For the free kind the commutator with the derivative piece reduces, via
    the twist relation between the gamma matrices and the representation, to
    ``-i gamma^mu A_mu`` with ``A_mu = sum_i pi(rho(a_i)) d_mu pi(b_i)``.
    """
    pairs = tuple((a, b) for a, b in pairs)
    if not pairs:
        raise ValueError("need at least one pair of elements")
    for a, b in pairs:
        if not isinstance(a, AlgebraElement) or not isinstance(b, AlgebraElement):
            raise TypeError("pairs must contain AlgebraElement instances")
    if kind == KIND_FREE:
        a_mu = [np.zeros((DIM, DIM), dtype=np.complex128) for _ in range(4)]
        for a, b in pairs:
            ra = rho_flip(represent(a).value)
            rb = represent(b)
            for mu in range(4):
                a_mu[mu] += ra @ rb.d[mu]
        raw_value = sum(-1j * g @ m for g, m in zip(data.gamma_ops, a_mu))
        return _wrap(kind, const_jet(raw_value), a_mu=a_mu, pairs=pairs)
    if kind == KIND_YUKAWA:
        d_op = data.DY_op
    elif kind == KIND_MAJORANA:
        d_op = data.DM_op
    else:
        raise ValueError(f"unknown kind {kind!r}")
    total = zero_jet(DIM)
    for a, b in pairs:
        rb = represent(b)
        comm = const_twisted_commutator(d_op, rb, twist_flip(rb))
        total = total + represent(a) @ comm
    return _wrap(kind, total, pairs=pairs)


def selfadjoint_residual(form: TwistedOneForm) -> float:
    """Deviation of a one-form from selfadjointness of the fluctuated operator.

    Finite kinds: slotwise Hermiticity of the operator jet.  Free kind: the
    contraction with the gamma matrices is Hermitian iff the twist of each
    component equals minus its adjoint.
    """
    if form.kind == KIND_FREE:
        return max(rel_residual(rho_flip(a), -dagger(a)) for a in form.A_mu)
    return jet_residual(form.raw, form.raw.dagger())


def symmetrize(data: SpectralData, form: TwistedOneForm) -> TwistedOneForm:
    """Project a one-form onto its selfadjoint part, preserving its pattern.

    Finite kinds average the operator with its adjoint.  The free kind
    averages each component with minus the twist of its adjoint, which is
    what Hermiticity of the gamma contraction requires.
    """
    if form.kind == KIND_FREE:
        a_mu = [(a - rho_flip(dagger(a))) / 2 for a in form.A_mu]
        return free_form(data, a_mu)
    raw = (form.raw + form.raw.dagger()) * 0.5
    return _wrap(form.kind, raw)


# ---------------------------------------------------------------------------
# flavour sector: Higgs-type fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HiggsSector:
    """Quaternionic 2x2 jets parametrising a flavour one-form.

    ``H_r = H2`` and ``H_l = H2p`` name the two doublets of a selfadjoint
    form (where ``H2 = H1^*`` and ``H2p = H1p^*``); the residual fields
    certify the extraction.
    """

    H1: Jet
    H2: Jet
    H1p: Jet
    H2p: Jet
    rebuild_residual: float
    quaternion_residual: float
    selfadjoint_residual: float

    @property
    def H_r(self) -> Jet:
        return self.H2

    @property
    def H_l(self) -> Jet:
        return self.H2p


def rebuild_yukawa(data: SpectralData, h1, h2, h1p, h2p) -> np.ndarray:
    """128-dim flavour one-form from the four 2x2 blocks (matrix level)."""
    h1 = as_operator(h1, 2)
    h2 = as_operator(h2, 2)
    h1p = as_operator(h1p, 2)
    h2p = as_operator(h2p, 2)
    ku = data.params.up_couplings()
    kd = data.params.down_couplings()
    z2 = np.zeros((2, 2), dtype=np.complex128)
    blocks_r = []
    blocks_l = []
    for i in range(4):
        k_i = np.diag([ku[i], kd[i]]).astype(np.complex128)
        blocks_r.append(np.block([[z2, np.conj(k_i) @ h1], [h2 @ k_i, z2]]))
        blocks_l.append(-np.block([[z2, np.conj(k_i) @ h1p], [h2p @ k_i, z2]]))
    a16_r = blockdiag(*blocks_r)
    a16_l = blockdiag(*blocks_l)
    a64 = kron(_E_RIGHT, _I2, a16_r) + kron(_E_LEFT, _I2, a16_l)
    out = np.zeros((DIM, DIM), dtype=np.complex128)
    out[:64, :64] = a64
    return out


def yukawa_form(data: SpectralData, h1: Jet, h2: Jet, h1p: Jet, h2p: Jet) -> TwistedOneForm:
    """Synthesise a flavour one-form from four 2x2 jets."""
    for h in (h1, h2, h1p, h2p):
        if h.n != 2:
            raise ValueError("flavour blocks must be 2x2 jets")
    value = rebuild_yukawa(data, h1.value, h2.value, h1p.value, h2p.value)
    derivs = tuple(rebuild_yukawa(data, h1.d[mu], h2.d[mu], h1p.d[mu], h2p.d[mu])
                   for mu in range(4))
    return _wrap(KIND_YUKAWA, Jet(value, derivs))


def extract_higgs(data: SpectralData, form: TwistedOneForm) -> HiggsSector:
    """Read the four 2x2 blocks out of a flavour one-form and certify them.

    Extraction divides by the two lepton-sector couplings, which the
    parameter validation guarantees are nonzero.
    """
    if form.kind != KIND_YUKAWA:
        raise ValueError(f"expected a {KIND_YUKAWA!r} form, got {form.kind!r}")
    if data.params.k_nu == 0.0 or data.params.k_e == 0.0:
        raise ValueError("flavour extraction divides by the first-sector "
                         "couplings; k_nu and k_e must be nonzero")
    inv = np.diag([1.0 / data.params.k_nu, 1.0 / data.params.k_e]).astype(np.complex128)
    slots: dict[str, list[np.ndarray]] = {"H1": [], "H2": [], "H1p": [], "H2p": []}
    for m in (form.raw.value, *form.raw.d):
        for s, sign, up_name, low_name in ((0, 1.0, "H1", "H2"), (1, -1.0, "H1p", "H2p")):
            a8 = take_block(m, {"C": (0, 0), "s": (s, s), "I": (0, 0)})
            a4, _ = split_identity(a8, "sdot", present=("sdot", "alpha"))
            slots[up_name].append(sign * inv @ a4[0:2, 2:4])
            slots[low_name].append(sign * a4[2:4, 0:2] @ inv)
    jets = {name: Jet(vals[0], tuple(vals[1:])) for name, vals in slots.items()}
    rebuild = yukawa_form(data, jets["H1"], jets["H2"], jets["H1p"], jets["H2p"])
    rebuild_res = jet_residual(rebuild.raw, form.raw)
    quat_res = max(quaternion_jet_residual(jets[k]) for k in jets)
    sa_res = max(jet_residual(jets["H2"], jets["H1"].dagger()),
                 jet_residual(jets["H2p"], jets["H1p"].dagger()))
    return HiggsSector(H1=jets["H1"], H2=jets["H2"], H1p=jets["H1p"], H2p=jets["H2p"],
                       rebuild_residual=rebuild_res, quaternion_residual=quat_res,
                       selfadjoint_residual=sa_res)


def higgs_claim(a: AlgebraElement, b: AlgebraElement) -> dict[str, Jet]:
    """Closed-form blocks of the flavour one-form of a single pair.

    With ``a = (c, cp, q, qp, m, mp)`` and ``b = (d, dp, p, pp, n, np)``:
    ``H1 = diag(c, conj c)(pp - diag(dp, conj dp))``,
    ``H2 = qp (diag(d, conj d) - p)``, and the primed blocks swap the roles.
    """
    def diag2(scalar: Jet) -> Jet:
        value = np.diag([scalar.value[0, 0], np.conj(scalar.value[0, 0])])
        derivs = tuple(np.diag([scalar.d[mu][0, 0], np.conj(scalar.d[mu][0, 0])])
                       for mu in range(4))
        return Jet(value, derivs)

    c2, cp2 = diag2(a.c), diag2(a.cp)
    d2, dp2 = diag2(b.c), diag2(b.cp)
    return {
        "H1": c2 @ (b.qp - dp2),
        "H2": a.qp @ (d2 - b.q),
        "H1p": cp2 @ (b.q - d2),
        "H2p": a.q @ (dp2 - b.qp),
    }


def random_selfadjoint_yukawa(data: SpectralData, rng: np.random.Generator,
                              scale: float = 1.0) -> TwistedOneForm:
    """Random selfadjoint flavour one-form: ``H2 = H1^*`` and ``H2p = H1p^*``."""
    h_r = random_quaternion_jet(rng, scale)
    h_l = random_quaternion_jet(rng, scale)
    return yukawa_form(data, h_r.dagger(), h_r, h_l.dagger(), h_l)


# ---------------------------------------------------------------------------
# singlet sector: Majorana-type field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SigmaSector:
    """Scalar jets parametrising a singlet one-form, with certification."""

    sigma: Jet
    sigma_p: Jet
    rebuild_residual: float
    selfadjoint_residual: float


def rebuild_majorana(data: SpectralData, sigma, sigma_p) -> np.ndarray:
    """128-dim singlet one-form from two scalars (matrix level)."""
    sigma = complex(np.asarray(sigma).reshape(()))
    sigma_p = complex(np.asarray(sigma_p).reshape(()))
    k_r = data.params.k_R
    xi16 = np.zeros((16, 16), dtype=np.complex128)
    xi16[0, 0] = 1.0
    upper = k_r * kron(np.diag([sigma, -sigma_p]), _I2, xi16)
    lower = np.conj(k_r) * kron(np.diag([sigma, -sigma_p]), _I2, xi16)
    out = np.zeros((DIM, DIM), dtype=np.complex128)
    out[:64, 64:] = upper
    out[64:, :64] = lower
    return out


def majorana_form(data: SpectralData, sigma: Jet, sigma_p: Jet) -> TwistedOneForm:
    """Synthesise a singlet one-form from two scalar jets."""
    if sigma.n != 1 or sigma_p.n != 1:
        raise ValueError("singlet fields must be 1x1 jets")
    value = rebuild_majorana(data, sigma.value, sigma_p.value)
    derivs = tuple(rebuild_majorana(data, sigma.d[mu], sigma_p.d[mu])
                   for mu in range(4))
    return _wrap(KIND_MAJORANA, Jet(value, derivs))


def extract_sigma(data: SpectralData, form: TwistedOneForm) -> SigmaSector:
    """Read the two scalars out of a singlet one-form and certify them."""
    if form.kind != KIND_MAJORANA:
        raise ValueError(f"expected a {KIND_MAJORANA!r} form, got {form.kind!r}")
    k_r = data.params.k_R
    if k_r == 0.0:
        raise ValueError("singlet extraction divides by the singlet coupling; "
                         "k_R must be nonzero")
    i_r = BasisLayout.flat(0, 0, 0, 0, 0)
    j_r = BasisLayout.flat(1, 0, 0, 0, 0)
    i_l = BasisLayout.flat(0, 1, 0, 0, 0)
    j_l = BasisLayout.flat(1, 1, 0, 0, 0)
    sig_slots = []
    sigp_slots = []
    for m in (form.raw.value, *form.raw.d):
        sig_slots.append(np.array([[m[i_r, j_r] / k_r]]))
        sigp_slots.append(np.array([[-m[i_l, j_l] / k_r]]))
    sigma = Jet(sig_slots[0], tuple(sig_slots[1:]))
    sigma_p = Jet(sigp_slots[0], tuple(sigp_slots[1:]))
    rebuild = majorana_form(data, sigma, sigma_p)
    rebuild_res = jet_residual(rebuild.raw, form.raw)
    # a singlet one-form is selfadjoint iff both scalars are real-valued jets
    sa_res = max(jet_residual(sigma, sigma.conj()),
                 jet_residual(sigma_p, sigma_p.conj()))
    return SigmaSector(sigma=sigma, sigma_p=sigma_p,
                       rebuild_residual=rebuild_res, selfadjoint_residual=sa_res)


def sigma_claim(a: AlgebraElement, b: AlgebraElement) -> dict[str, Jet]:
    """Closed-form scalars of the singlet one-form of a single pair:
    ``sigma = c (d - dp)`` and ``sigma_p = cp (dp - d)``."""
    return {
        "sigma": a.c @ (b.c - b.cp),
        "sigma_p": a.cp @ (b.cp - b.c),
    }


def random_selfadjoint_majorana(data: SpectralData, rng: np.random.Generator,
                                scale: float = 1.0) -> TwistedOneForm:
    """Random selfadjoint singlet one-form: both scalar jets real."""
    sigma = random_scalar_jet(rng, scale, real=True)
    sigma_p = random_scalar_jet(rng, scale, real=True)
    return majorana_form(data, sigma, sigma_p)


# ---------------------------------------------------------------------------
# free sector: gauge fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeComponents:
    """Raw per-direction components of a free one-form."""

    c_r: np.ndarray   # (4,) complex
    c_l: np.ndarray   # (4,) complex
    q_r: np.ndarray   # (4, 2, 2)
    q_l: np.ndarray   # (4, 2, 2)
    m_r: np.ndarray   # (4, 3, 3)
    m_l: np.ndarray   # (4, 3, 3)
    rebuild_residual: float


@dataclass(frozen=True)
class GaugeSector:
    """Physical gauge fields of a free one-form, with certification.

    ``a`` and ``w`` are the selfadjointness obstructions (they vanish for
    one-forms built from twist-related pairs after symmetrisation); ``B`` is
    the abelian field, ``W`` the weak isospin triplet, ``g`` the leftover
    Hermitian 3x3 obstruction, ``V0`` the abelian part of the colour sector
    (fixed to ``g1 B / 6`` by unimodularity) and ``V`` the colour octet.
    """

    components: FreeComponents
    a: np.ndarray        # (4,) real
    B: np.ndarray        # (4,) real
    w: np.ndarray        # (4,) real
    W: np.ndarray        # (4, 3) real
    W_mat: np.ndarray    # (4, 2, 2)
    g: np.ndarray        # (4, 3, 3) Hermitian
    V0: np.ndarray       # (4,) real
    V: np.ndarray        # (4, 8) real
    V_mat: np.ndarray    # (4, 3, 3)
    rebuild_residual: float
    selfadjoint_residual: float
    physical_residual: float
    quaternion_residual: float


def assemble_free_component(c_r, c_l, q_r, q_l, m_r, m_l) -> np.ndarray:
    """128-dim component matrix from the six per-direction blocks.

    Reuses the representation's block pattern: right-handed data sits in the
    slots the representation reserves for the unprimed/primed data
    respectively (the quaternion slots cross over, matching the twist).
    """
    return assemble_blocks(c_r, c_l, q_l, q_r, m_r, m_l)


def free_form(data: SpectralData, a_mu) -> TwistedOneForm:
    """Wrap four component matrices into a free one-form."""
    a_mu = [as_operator(m, DIM) for m in a_mu]
    if len(a_mu) != 4:
        raise ValueError("need exactly four component matrices")
    raw_value = sum(-1j * g @ m for g, m in zip(data.gamma_ops, a_mu))
    return _wrap(KIND_FREE, const_jet(raw_value), a_mu=a_mu)


def extract_free_components(form: TwistedOneForm) -> FreeComponents:
    """Read the six per-direction blocks out of the component matrices."""
    if form.kind != KIND_FREE:
        raise ValueError(f"expected a {KIND_FREE!r} form, got {form.kind!r}")
    i_r = BasisLayout.flat(0, 0, 0, 0, 0)
    i_l = BasisLayout.flat(0, 1, 0, 0, 0)
    c_r = np.zeros(4, dtype=np.complex128)
    c_l = np.zeros(4, dtype=np.complex128)
    q_r = np.zeros((4, 2, 2), dtype=np.complex128)
    q_l = np.zeros((4, 2, 2), dtype=np.complex128)
    m_r = np.zeros((4, 3, 3), dtype=np.complex128)
    m_l = np.zeros((4, 3, 3), dtype=np.complex128)
    worst = 0.0
    for mu, m in enumerate(form.A_mu):
        c_r[mu] = m[i_r, i_r]
        c_l[mu] = m[i_l, i_l]
        q_r[mu] = take_block(m, {"C": (0, 0), "s": (0, 0), "sdot": (0, 0), "I": (0, 0)})[2:4, 2:4]
        q_l[mu] = take_block(m, {"C": (0, 0), "s": (1, 1), "sdot": (0, 0), "I": (0, 0)})[2:4, 2:4]
        m_r[mu] = take_block(m, {"C": (1, 1), "s": (0, 0), "sdot": (0, 0), "alpha": (0, 0)})[1:4, 1:4]
        m_l[mu] = take_block(m, {"C": (1, 1), "s": (0, 0), "sdot": (0, 0), "alpha": (2, 2)})[1:4, 1:4]
        rebuild = assemble_free_component(c_r[mu], c_l[mu], q_r[mu], q_l[mu],
                                          m_r[mu], m_l[mu])
        worst = max(worst, rel_residual(rebuild, m))
    return FreeComponents(c_r=c_r, c_l=c_l, q_r=q_r, q_l=q_l, m_r=m_r, m_l=m_l,
                          rebuild_residual=worst)


def free_components_claim(a: AlgebraElement, b: AlgebraElement) -> dict[str, np.ndarray]:
    """Closed-form per-direction components of a single free pair:
    ``c^r = cp d'``, ``c^l = c dp'``, ``q^r = q pp'``, ``q^l = qp p'``,
    ``m^r = mp n'`` and ``m^l = m np'`` (primes denote derivatives)."""
    out = {
        "c_r": np.array([ (a.cp.value @ b.c.d[mu])[0, 0] for mu in range(4)]),
        "c_l": np.array([ (a.c.value @ b.cp.d[mu])[0, 0] for mu in range(4)]),
        "q_r": np.stack([a.q.value @ b.qp.d[mu] for mu in range(4)]),
        "q_l": np.stack([a.qp.value @ b.q.d[mu] for mu in range(4)]),
        "m_r": np.stack([a.mp.value @ b.m.d[mu] for mu in range(4)]),
        "m_l": np.stack([a.m.value @ b.mp.d[mu] for mu in range(4)]),
    }
    return out


def gauge_sector(data: SpectralData, form: TwistedOneForm,
                 couplings: Couplings = Couplings()) -> GaugeSector:
    """Extract and certify the physical gauge fields of a free one-form."""
    comps = extract_free_components(form)
    a = np.zeros(4)
    b_field = np.zeros(4)
    w = np.zeros(4)
    w_triplet = np.zeros((4, 3))
    w_mat = np.zeros((4, 2, 2), dtype=np.complex128)
    g_mat = np.zeros((4, 3, 3), dtype=np.complex128)
    v0 = np.zeros(4)
    v_octet = np.zeros((4, 8))
    v_mat = np.zeros((4, 3, 3), dtype=np.complex128)
    quat_res = 0.0
    phys_res = 0.0
    for mu in range(4):
        c = comps.c_r[mu]
        a[mu] = c.real
        b_field[mu] = -2.0 * c.imag / couplings.g1
        quat_res = max(quat_res, quaternion_residual(comps.q_r[mu]),
                       quaternion_residual(comps.q_l[mu]))
        qc = quaternion_components(comps.q_r[mu])
        w[mu] = qc[0].real
        w_triplet[mu] = -2.0 * qc[1:].real / couplings.g2
        w_mat[mu] = sum(w_triplet[mu, k] * PAULI[k] for k in range(3))
        m = comps.m_r[mu]
        g_mat[mu] = (m + dagger(m)) / 2
        h = (m - dagger(m)) / 2j
        v0[mu] = np.trace(h).real / 3.0
        v_octet[mu] = np.array([np.trace(lam @ h).real for lam in GELLMANN]) / couplings.g3
        v_mat[mu] = sum(v_octet[mu, k] * GELLMANN[k] for k in range(8))
        # how far the raw components are from the physical parametrisation
        c_claim = a[mu] - 0.5j * couplings.g1 * b_field[mu]
        q_claim = w[mu] * _I2 - 0.5j * couplings.g2 * w_mat[mu]
        m_claim = g_mat[mu] + 1j * v0[mu] * _I3 + 0.5j * couplings.g3 * v_mat[mu]
        phys_res = max(
            phys_res,
            abs(comps.c_r[mu] - c_claim) / max(1.0, abs(comps.c_r[mu])),
            abs(comps.c_l[mu] + np.conj(c_claim)) / max(1.0, abs(comps.c_l[mu])),
            rel_residual(comps.q_r[mu], q_claim),
            rel_residual(comps.q_l[mu], -dagger(q_claim)),
            rel_residual(comps.m_r[mu], m_claim),
            rel_residual(comps.m_l[mu], -dagger(m_claim)),
        )
    return GaugeSector(components=comps, a=a, B=b_field, w=w, W=w_triplet,
                       W_mat=w_mat, g=g_mat, V0=v0, V=v_octet, V_mat=v_mat,
                       rebuild_residual=comps.rebuild_residual,
                       selfadjoint_residual=selfadjoint_residual(form),
                       physical_residual=phys_res,
                       quaternion_residual=quat_res)


def free_form_from_fields(data: SpectralData, a, b_field, w, w_mat, g_mat, v0,
                          v_mat, couplings: Couplings = Couplings()) -> TwistedOneForm:
    """Synthesise a selfadjoint free one-form from physical field values.

    Arguments are per-direction arrays: ``a, b_field, w, v0`` of shape (4,),
    ``w_mat`` (4, 2, 2) Hermitian traceless, ``g_mat, v_mat`` (4, 3, 3)
    Hermitian (``v_mat`` traceless).
    """
    a_mu = []
    for mu in range(4):
        c_r = a[mu] - 0.5j * couplings.g1 * b_field[mu]
        q_r = w[mu] * _I2 - 0.5j * couplings.g2 * as_operator(w_mat[mu], 2)
        m_r = as_operator(g_mat[mu], 3) + 1j * v0[mu] * _I3 \
            + 0.5j * couplings.g3 * as_operator(v_mat[mu], 3)
        a_mu.append(assemble_free_component(
            c_r, -np.conj(c_r), q_r, -dagger(q_r), m_r, -dagger(m_r)))
    return free_form(data, a_mu)


def random_selfadjoint_free(data: SpectralData, rng: np.random.Generator,
                            couplings: Couplings = Couplings(),
                            unimodular: bool = False,
                            scale: float = 1.0) -> TwistedOneForm:
    """Random selfadjoint free one-form from random physical fields."""
    a = scale * rng.standard_normal(4)
    b_field = scale * rng.standard_normal(4)
    w = scale * rng.standard_normal(4)
    w_mat = np.stack([sum(float(x) * s for x, s in
                          zip(scale * rng.standard_normal(3), PAULI))
                      for _ in range(4)])
    g_mat = np.stack([_random_hermitian3(rng, scale) for _ in range(4)])
    v_mat = np.stack([sum(float(x) * lam for x, lam in
                          zip(scale * rng.standard_normal(8), GELLMANN))
                      for _ in range(4)])
    if unimodular:
        v0 = couplings.g1 * b_field / 6.0
    else:
        v0 = scale * rng.standard_normal(4)
    return free_form_from_fields(data, a, b_field, w, w_mat, g_mat, v0, v_mat,
                                 couplings=couplings)


def _random_hermitian3(rng: np.random.Generator, scale: float) -> np.ndarray:
    m = scale * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    return (m + dagger(m)) / 2


# ---------------------------------------------------------------------------
# unimodularity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnimodularityReport:
    """Per-direction trace data of a free one-form.

    ``trace`` is half the 128-dim trace of each component (the dotted spinor
    index doubles every block, so half the trace counts each field slot
    once); the identity states it equals ``4 (-i g1 B + 6 i V0)``.  The
    defect ``V0 - g1 B / 6`` vanishes iff the form is traceless.
    """

    trace: np.ndarray           # (4,) complex
    claim: np.ndarray           # (4,) complex
    identity_residual: float
    defect: np.ndarray          # (4,) real


def unimodularity(data: SpectralData, form: TwistedOneForm,
                  couplings: Couplings = Couplings()) -> UnimodularityReport:
    """Certify the trace identity and measure the unimodularity defect."""
    sector = gauge_sector(data, form, couplings)
    trace = np.array([np.trace(m) / 2.0 for m in form.A_mu])
    claim = 4.0 * (-1j * couplings.g1 * sector.B + 6j * sector.V0)
    res = max(abs(trace[mu] - claim[mu]) / max(1.0, abs(trace[mu]), abs(claim[mu]))
              for mu in range(4))
    defect = sector.V0 - couplings.g1 * sector.B / 6.0
    return UnimodularityReport(trace=trace, claim=claim, identity_residual=res,
                               defect=defect)


def unimodularize(data: SpectralData, form: TwistedOneForm,
                  couplings: Couplings = Couplings()) -> TwistedOneForm:
    """Shift the colour-sector trace so the unimodularity defect vanishes.

    Adds ``i delta I_3`` with ``delta = g1 B / 6 - V0`` to both 3x3 blocks,
    which preserves selfadjointness and every other field.
    """
    sector = gauge_sector(data, form, couplings)
    comps = sector.components
    a_mu = []
    for mu in range(4):
        delta = couplings.g1 * sector.B[mu] / 6.0 - sector.V0[mu]
        a_mu.append(assemble_free_component(
            comps.c_r[mu], comps.c_l[mu], comps.q_r[mu], comps.q_l[mu],
            comps.m_r[mu] + 1j * delta * _I3, comps.m_l[mu] + 1j * delta * _I3))
    return free_form(data, a_mu)


# ---------------------------------------------------------------------------
# covariant operator and its block decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CovariantDirac:
    """The fluctuated operator ``D + A + J A J^{-1}`` and its certification."""

    kind: str
    op: Jet
    selfadjoint_residual: float
    details: dict[str, float]
    sigma_r: Jet | None = None
    sigma_l: Jet | None = None
    Z_mu: tuple[np.ndarray, ...] | None = None


def covariant_dirac(data: SpectralData, form: TwistedOneForm) -> CovariantDirac:
    """Fluctuate the matching Dirac piece by the one-form and certify blocks."""
    conj_raw = conj_by(data.K, form.raw)
    details: dict[str, float] = {}
    if form.kind == KIND_YUKAWA:
        op = const_jet(data.DY_op) + form.raw + conj_raw
        # block content: particle block D0 + flavour blocks, antiparticle its conjugate
        d0_64 = kron(np.diag([1.0, -1.0]).astype(np.complex128), _I2, data.D0)
        worst_cross = 0.0
        worst_conj = 0.0
        worst_mirror = 0.0
        for m in (op.value, *op.d):
            norm = max(1.0, float(np.linalg.norm(m)))
            for blk in ({"C": (0, 1)}, {"C": (1, 0)}):
                worst_cross = max(worst_cross,
                                  float(np.linalg.norm(take_block(m, blk)) / norm))
        for m, base in zip((op.value, *op.d), (1.0, 0.0, 0.0, 0.0, 0.0)):
            c00 = take_block(m, {"C": (0, 0)}) - base * d0_64
            c11 = take_block(m, {"C": (1, 1)}) - base * kron(
                np.diag([1.0, -1.0]).astype(np.complex128), _I2, dagger(data.D0))
            worst_mirror = max(worst_mirror, rel_residual(c11, np.conj(c00)))
        details["doubling_off_diagonal"] = worst_cross
        details["antiparticle_is_conjugate"] = worst_mirror
        # the adjoint-conjugated one-form lives purely in the antiparticle block
        worst = 0.0
        for m in (conj_raw.value, *conj_raw.d):
            worst = max(worst, float(np.linalg.norm(take_block(m, {"C": (0, 0)}))
                                     / max(1.0, np.linalg.norm(m))))
        details["conjugated_form_avoids_particle_block"] = worst
        return CovariantDirac(kind=form.kind, op=op,
                              selfadjoint_residual=jet_residual(op, op.dagger()),
                              details=details)
    if form.kind == KIND_MAJORANA:
        op = const_jet(data.DM_op) + form.raw + conj_raw
        sector = extract_sigma(data, form)
        sigma_r = sector.sigma + sector.sigma.conj()
        sigma_l = -(sector.sigma_p + sector.sigma_p.conj())
        k_r = data.params.k_R
        xi16 = np.zeros((16, 16), dtype=np.complex128)
        xi16[0, 0] = 1.0
        eta_term = kron(np.diag([1.0, -1.0]).astype(np.complex128), _I2, k_r * xi16)
        worst = 0.0
        for m, s_r, s_l, base in zip(
                (op.value, *op.d),
                (sigma_r.value[0, 0], *[sigma_r.d[mu][0, 0] for mu in range(4)]),
                (sigma_l.value[0, 0], *[sigma_l.d[mu][0, 0] for mu in range(4)]),
                (1.0, 0.0, 0.0, 0.0, 0.0)):
            upper = take_block(m, {"C": (0, 1)})
            claim = base * eta_term + k_r * kron(np.diag([s_r, s_l]), _I2, xi16)
            worst = max(worst, rel_residual(upper, claim))
        details["singlet_block_structure"] = worst
        details["sigma_r_real"] = jet_residual(sigma_r, sigma_r.conj())
        details["sigma_l_real"] = jet_residual(sigma_l, sigma_l.conj())
        return CovariantDirac(kind=form.kind, op=op,
                              selfadjoint_residual=jet_residual(op, op.dagger()),
                              details=details,
                              sigma_r=sigma_r, sigma_l=sigma_l)
    if form.kind == KIND_FREE:
        z_mu = tuple(a + conj_by(data.K, a) for a in form.A_mu)
        op_value = form.raw.value + conj_by(data.K, form.raw.value)
        recontracted = sum(-1j * g @ z for g, z in zip(data.gamma_ops, z_mu))
        details["conjugation_commutes_with_contraction"] = rel_residual(
            op_value, recontracted)
        op = const_jet(op_value)
        return CovariantDirac(kind=form.kind, op=op,
                              selfadjoint_residual=rel_residual(op_value, dagger(op_value)),
                              details=details, Z_mu=z_mu)
    raise ValueError(f"unknown kind {form.kind!r}")


# ---------------------------------------------------------------------------
# block decomposition of the covariant free component
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZDecomposition:
    """Chirality decomposition of ``Z_mu = A_mu + J A_mu J^{-1}``.

    ``Z_r`` and ``Z_l`` are the 16-dim lepto-colour/flavour blocks of the
    two chiralities in the particle sector; ``X = (Z_r - Z_l) / 2`` and
    ``Y = (Z_r + Z_l) / 2i`` are both Hermitian iff the one-form is
    selfadjoint.
    """

    Z_mu: tuple[np.ndarray, ...]    # four 128-dim matrices
    Z_r: np.ndarray                 # (4, 16, 16)
    Z_l: np.ndarray                 # (4, 16, 16)
    X: np.ndarray                   # (4, 16, 16)
    Y: np.ndarray                   # (4, 16, 16)
    residuals: dict[str, float]


def decompose_Z(data: SpectralData, form: TwistedOneForm) -> ZDecomposition:
    """Decompose the covariant components into their chirality blocks."""
    if form.kind != KIND_FREE:
        raise ValueError(f"expected a {KIND_FREE!r} form, got {form.kind!r}")
    z_mu = tuple(a + conj_by(data.K, a) for a in form.A_mu)
    z_r = np.zeros((4, 16, 16), dtype=np.complex128)
    z_l = np.zeros((4, 16, 16), dtype=np.complex128)
    res: dict[str, float] = {}
    worst_cross = 0.0
    worst_mirror = 0.0
    worst_sdot = 0.0
    worst_chirality = 0.0
    for mu, z in enumerate(z_mu):
        norm = max(1.0, float(np.linalg.norm(z)))
        for blk in ({"C": (0, 1)}, {"C": (1, 0)}):
            worst_cross = max(worst_cross,
                              float(np.linalg.norm(take_block(z, blk)) / norm))
        c00 = take_block(z, {"C": (0, 0)})
        c11 = take_block(z, {"C": (1, 1)})
        worst_mirror = max(worst_mirror, rel_residual(c11, np.conj(c00)))
        z32, sdot_res = split_identity(c00, "sdot", present=("s", "sdot", "I", "alpha"))
        worst_sdot = max(worst_sdot, sdot_res)
        z_r[mu] = take_block(z32, {"s": (0, 0)}, present=("s", "I", "alpha"))
        z_l[mu] = take_block(z32, {"s": (1, 1)}, present=("s", "I", "alpha"))
        for blk in ({"s": (0, 1)}, {"s": (1, 0)}):
            worst_chirality = max(
                worst_chirality,
                float(np.linalg.norm(take_block(z32, blk, present=("s", "I", "alpha")))
                      / max(1.0, np.linalg.norm(z32))))
    x = (z_r - z_l) / 2.0
    y = (z_r + z_l) / 2j
    res["doubling_off_diagonal"] = worst_cross
    res["antiparticle_is_conjugate"] = worst_mirror
    res["dotted_index_trivial"] = worst_sdot
    res["chirality_off_diagonal"] = worst_chirality
    res["X_hermitian"] = max(rel_residual(x[mu], dagger(x[mu])) for mu in range(4))
    res["Y_hermitian"] = max(rel_residual(y[mu], dagger(y[mu])) for mu in range(4))
    return ZDecomposition(Z_mu=z_mu, Z_r=z_r, Z_l=z_l, X=x, Y=y, residuals=res)


def z_claims(sector: GaugeSector, couplings: Couplings) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Entrywise claims for ``Z_r``, ``X`` and ``Y`` from the physical fields.

    Assembled over ``(I, alpha)`` with the lepto-colour index outermost; the
    colour blocks carry the entrywise conjugates of ``g`` and ``V`` (the
    antiparticle block contributes conjugated colour data).
    """
    z_r = np.zeros((4, 16, 16), dtype=np.complex128)
    x = np.zeros((4, 16, 16), dtype=np.complex128)
    y = np.zeros((4, 16, 16), dtype=np.complex128)
    g1, g2, g3 = couplings.g1, couplings.g2, couplings.g3
    e00 = np.diag([1.0, 0, 0, 0]).astype(np.complex128)
    e11 = np.diag([0, 1.0, 0, 0]).astype(np.complex128)
    for mu in range(4):
        a = sector.a[mu]
        b = sector.B[mu]
        w = sector.w[mu]
        w_mat = sector.W_mat[mu]
        g_mat = sector.g[mu]
        v0 = sector.V0[mu]
        v_mat = sector.V_mat[mu]
        c_r = a - 0.5j * g1 * b
        q_r = w * _I2 - 0.5j * g2 * w_mat
        m_r = g_mat + 1j * v0 * _I3 + 0.5j * g3 * v_mat
        c_l = -np.conj(c_r)
        m_l = -dagger(m_r)
        q_r4 = blockdiag(np.diag([c_r, np.conj(c_r)]), q_r)
        m_r4 = blockdiag(np.array([[c_r]]), m_r)
        m_l4 = blockdiag(np.array([[c_l]]), m_l)
        z_r[mu] = kron(_I4, q_r4) + kron(np.conj(m_r4), _P_FIRST_PAIR) \
            + kron(np.conj(m_l4), _P_SECOND_PAIR)
        x[mu] = kron(blockdiag(2.0 * a, a * _I3 + np.conj(g_mat)), _P_FIRST_PAIR) \
            + kron(blockdiag(w - a, w * _I3 - np.conj(g_mat)), _P_SECOND_PAIR)
        w_low = np.zeros((4, 4), dtype=np.complex128)
        w_low[2:4, 2:4] = -0.5 * g2 * w_mat
        y[mu] = kron(blockdiag(0.0, -(0.5 * g1 * b + v0) * _I3
                               - 0.5 * g3 * np.conj(v_mat)), e00) \
            + kron(blockdiag(g1 * b, (0.5 * g1 * b - v0) * _I3
                             - 0.5 * g3 * np.conj(v_mat)), e11) \
            + kron(blockdiag(0.5 * g1 * b, -v0 * _I3 - 0.5 * g3 * np.conj(v_mat)),
                   _P_SECOND_PAIR) \
            + kron(_I4, w_low)
    return z_r, x, y


def z_entry_residuals(z: ZDecomposition, sector: GaugeSector,
                      couplings: Couplings) -> dict[str, float]:
    """Per-block residuals of the measured against the claimed decomposition."""
    z_r_claim, x_claim, y_claim = z_claims(sector, couplings)

    def block_res(got: np.ndarray, want: np.ndarray) -> float:
        side = int(np.sqrt(got.size))
        return rel_residual(got.reshape(side, side), want.reshape(side, side))

    names = ("lepton_singlet_up", "lepton_singlet_down", "lepton_doublet",
             "colour_singlet_up", "colour_singlet_down", "colour_doublet")
    out = {name: 0.0 for name in names}
    overall = 0.0
    for mu in range(4):
        measured = z.Z_r[mu].reshape(4, 4, 4, 4)
        claimed = z_r_claim[mu].reshape(4, 4, 4, 4)
        pieces = {
            "lepton_singlet_up": (measured[0, 0, 0, 0], claimed[0, 0, 0, 0]),
            "lepton_singlet_down": (measured[0, 1, 0, 1], claimed[0, 1, 0, 1]),
            "lepton_doublet": (measured[0, 2:, 0, 2:], claimed[0, 2:, 0, 2:]),
            "colour_singlet_up": (measured[1:, 0, 1:, 0], claimed[1:, 0, 1:, 0]),
            "colour_singlet_down": (measured[1:, 1, 1:, 1], claimed[1:, 1, 1:, 1]),
            "colour_doublet": (measured[1:, 2:, 1:, 2:], claimed[1:, 2:, 1:, 2:]),
        }
        for name, (got, want) in pieces.items():
            out[name] = max(out[name], block_res(np.atleast_1d(got), np.atleast_1d(want)))
        overall = max(overall, rel_residual(z.Z_r[mu], z_r_claim[mu]),
                      rel_residual(z.X[mu], x_claim[mu]),
                      rel_residual(z.Y[mu], y_claim[mu]))
    out["overall"] = overall
    return out


def standard_gauge_matrices(sector: GaugeSector, couplings: Couplings) -> np.ndarray:
    """The untwisted gauge-field matrices ``i Y`` with the abelian colour
    component locked to ``g1 B / 6``, per direction (shape (4, 16, 16))."""
    locked = GaugeSector(
        components=sector.components,
        a=np.zeros(4), B=sector.B, w=np.zeros(4), W=sector.W,
        W_mat=sector.W_mat, g=np.zeros((4, 3, 3), dtype=np.complex128),
        V0=couplings.g1 * sector.B / 6.0, V=sector.V, V_mat=sector.V_mat,
        rebuild_residual=0.0, selfadjoint_residual=0.0,
        physical_residual=0.0, quaternion_residual=0.0)
    _, _, y_claim = z_claims(locked, couplings)
    return 1j * y_claim


# ---------------------------------------------------------------------------
# aggregate field content
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldContent:
    """All fields extracted from up to three one-forms (one per kind)."""

    couplings: Couplings
    higgs: HiggsSector | None = None
    sigma: SigmaSector | None = None
    gauge: GaugeSector | None = None


def field_content(data: SpectralData,
                  yukawa: TwistedOneForm | None = None,
                  majorana: TwistedOneForm | None = None,
                  free: TwistedOneForm | None = None,
                  couplings: Couplings = Couplings()) -> FieldContent:
    """Extract every sector present."""
    return FieldContent(
        couplings=couplings,
        higgs=None if yukawa is None else extract_higgs(data, yukawa),
        sigma=None if majorana is None else extract_sigma(data, majorana),
        gauge=None if free is None else gauge_sector(data, free, couplings),
    )
