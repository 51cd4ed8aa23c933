"""The doubled pointwise coordinate algebra and its 128-dim representation.

An algebra element carries two copies of (complex scalar, quaternion, 3x3
matrix) data as first-order jets: ``(c, q, m)`` and a primed partner
``(cp, qp, mp)``.  The twist ``rho`` exchanges the two copies.  The
representation acts diagonally on the particle/antiparticle factor ``C``:

* the ``C = 0`` block couples the quaternionic data to the flavour factor,
  with the scalar embedded as ``diag(c, conj c)`` on the first flavour pair
  and the *primed* quaternion on the right-handed chirality;
* the ``C = 1`` block couples the scalar and the 3x3 data to the
  lepto-colour factor, flavour-diagonally, with unprimed data on the first
  flavour pair of the right-handed chirality.

The conjugate-linear real structure ``J = K . cc`` (with ``K`` unitary) turns
elements into right-action operators ``a -> J pi(a*) J^{-1}``; helpers for
that conjugation live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import Jet, quaternion_jet_residual, random_quaternion_jet, random_jet, random_scalar_jet
from .layout import DIM, as_operator, blockdiag, dagger, kron

_P_FIRST_PAIR = np.diag([1.0, 1.0, 0.0, 0.0]).astype(np.complex128)
_P_SECOND_PAIR = np.diag([0.0, 0.0, 1.0, 1.0]).astype(np.complex128)
_E_RIGHT = np.diag([1.0, 0.0]).astype(np.complex128)
_E_LEFT = np.diag([0.0, 1.0]).astype(np.complex128)
_I2 = np.eye(2, dtype=np.complex128)
_I4 = np.eye(4, dtype=np.complex128)

_SLOT_SIDES = {"c": 1, "cp": 1, "q": 2, "qp": 2, "m": 3, "mp": 3}
QUATERNION_TOL = 1e-9


@dataclass(frozen=True)
class AlgebraElement:
    """Jet-valued element ``(c, cp, q, qp, m, mp)`` of the doubled algebra."""

    c: Jet
    cp: Jet
    q: Jet
    qp: Jet
    m: Jet
    mp: Jet

    def __post_init__(self):
        for name, side in _SLOT_SIDES.items():
            jet = getattr(self, name)
            if not isinstance(jet, Jet):
                raise TypeError(f"slot {name} must be a Jet")
            if jet.n != side:
                raise ValueError(f"slot {name} must be {side}x{side}, got {jet.n}x{jet.n}")
        for name in ("q", "qp"):
            res = quaternion_jet_residual(getattr(self, name))
            if res > QUATERNION_TOL:
                raise ValueError(f"slot {name} is not quaternionic (residual {res:.2e})")


def identity_element() -> AlgebraElement:
    """The unit of the algebra."""
    from .jets import const_jet
    one = const_jet(np.eye(1))
    i2 = const_jet(np.eye(2))
    i3 = const_jet(np.eye(3))
    return AlgebraElement(c=one, cp=one, q=i2, qp=i2, m=i3, mp=i3)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Slotwise product (the algebra multiplies componentwise)."""
    return AlgebraElement(c=a.c @ b.c, cp=a.cp @ b.cp, q=a.q @ b.q,
                          qp=a.qp @ b.qp, m=a.m @ b.m, mp=a.mp @ b.mp)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    """Slotwise conjugate transpose."""
    return AlgebraElement(c=a.c.dagger(), cp=a.cp.dagger(), q=a.q.dagger(),
                          qp=a.qp.dagger(), m=a.m.dagger(), mp=a.mp.dagger())


def twist_rho(a: AlgebraElement) -> AlgebraElement:
    """The twist: exchange each slot with its primed partner."""
    return AlgebraElement(c=a.cp, cp=a.c, q=a.qp, qp=a.q, m=a.mp, mp=a.m)


def random_element(rng: np.random.Generator, scale: float = 1.0) -> AlgebraElement:
    """Generic random element (independent primed and unprimed data)."""
    return AlgebraElement(
        c=random_scalar_jet(rng, scale),
        cp=random_scalar_jet(rng, scale),
        q=random_quaternion_jet(rng, scale),
        qp=random_quaternion_jet(rng, scale),
        m=random_jet(rng, 3, scale),
        mp=random_jet(rng, 3, scale),
    )


def random_twist_invariant(rng: np.random.Generator, scale: float = 1.0) -> AlgebraElement:
    """Random element with primed slots equal to unprimed ones (fixed by rho)."""
    c = random_scalar_jet(rng, scale)
    q = random_quaternion_jet(rng, scale)
    m = random_jet(rng, 3, scale)
    return AlgebraElement(c=c, cp=c, q=q, qp=q, m=m, mp=m)


def twist_invariance_residual(a: AlgebraElement) -> float:
    """Largest slotwise residual between an element and its twist."""
    from .jets import jet_residual
    return max(jet_residual(a.c, a.cp), jet_residual(a.q, a.qp),
               jet_residual(a.m, a.mp))


# ---------------------------------------------------------------------------
# representation
# ---------------------------------------------------------------------------

def lepto_colour(c, m: np.ndarray) -> np.ndarray:
    """The 4x4 embedding ``diag(c, m)`` of a scalar and a 3x3 block."""
    c = complex(np.asarray(c).reshape(()))
    return blockdiag(np.array([[c]]), as_operator(m, 3))


def _assemble_explicit(cv, ccv, cpv, cpcv, qv, qpv, mv, mpv) -> np.ndarray:
    """One 128x128 slot with the two conjugated scalars passed explicitly.

    This is the definitional block pattern; the public assemblers evaluate
    it through a precomputed basis since it is linear in its 30 entries.
    """
    # the primed quaternion acts on the right-handed chirality, the unprimed on the left
    q_right = blockdiag(np.diag([cv, ccv]).astype(np.complex128), as_operator(qpv, 2))
    q_left = blockdiag(np.diag([cpv, cpcv]).astype(np.complex128), as_operator(qv, 2))
    lc = lepto_colour(cv, mv)
    lc_p = lepto_colour(cpv, mpv)
    m_right = kron(lc, _P_FIRST_PAIR) + kron(lc_p, _P_SECOND_PAIR)
    m_left = kron(lc_p, _P_FIRST_PAIR) + kron(lc, _P_SECOND_PAIR)
    q64 = kron(_E_RIGHT, _I2, _I4, q_right) + kron(_E_LEFT, _I2, _I4, q_left)
    m64 = kron(_E_RIGHT, _I2, m_right) + kron(_E_LEFT, _I2, m_left)
    return blockdiag(q64, m64)


def _assemble_explicit_naive(cv, ccv, cpv, cpcv, qv, qpv, mv, mpv) -> np.ndarray:
    """Flavour-blind variant: the ``C = 1`` block ignores the flavour pairing.

    The lepto-colour data acts as ``diag(c, m) (x) I_4`` on both chiralities
    (unprimed on the right, primed on the left) instead of being split across
    the two flavour pairs.  Kept as a foil: with this representation the
    twisted first-order condition fails for generic elements.
    """
    q_right = blockdiag(np.diag([cv, ccv]).astype(np.complex128), as_operator(qpv, 2))
    q_left = blockdiag(np.diag([cpv, cpcv]).astype(np.complex128), as_operator(qv, 2))
    m_right = kron(lepto_colour(cv, mv), _I4)
    m_left = kron(lepto_colour(cpv, mpv), _I4)
    q64 = kron(_E_RIGHT, _I2, _I4, q_right) + kron(_E_LEFT, _I2, _I4, q_left)
    m64 = kron(_E_RIGHT, _I2, m_right) + kron(_E_LEFT, _I2, m_left)
    return blockdiag(q64, m64)


def _build_basis(explicit) -> np.ndarray:
    """Stack the 30 unit-parameter slots of an explicit assembler."""
    basis = np.empty((30, 128 * 128), dtype=np.complex128)
    for k in range(30):
        p = np.zeros(30, dtype=np.complex128)
        p[k] = 1.0
        basis[k] = explicit(p[0], p[1], p[2], p[3],
                            p[4:8].reshape(2, 2), p[8:12].reshape(2, 2),
                            p[12:21].reshape(3, 3),
                            p[21:30].reshape(3, 3)).ravel()
    return basis


_BASIS = _build_basis(_assemble_explicit)
_BASIS_NAIVE = _build_basis(_assemble_explicit_naive)
# the block patterns are 0/1 placements, so the contraction runs over the reals
assert abs(_BASIS.imag).max() == 0.0 and abs(_BASIS_NAIVE.imag).max() == 0.0
_BASIS_R = np.ascontiguousarray(_BASIS.real)
_BASIS_NAIVE_R = np.ascontiguousarray(_BASIS_NAIVE.real)


def _slot_params(cv, cpv, qv, qpv, mv, mpv) -> np.ndarray:
    """Parameter vector of one slot: scalars, their conjugates, and blocks."""
    p = np.empty(30, dtype=np.complex128)
    p[0] = complex(np.asarray(cv).reshape(()))
    p[1] = np.conj(p[0])
    p[2] = complex(np.asarray(cpv).reshape(()))
    p[3] = np.conj(p[2])
    p[4:8] = as_operator(qv, 2).ravel()
    p[8:12] = as_operator(qpv, 2).ravel()
    p[12:21] = as_operator(mv, 3).ravel()
    p[21:30] = as_operator(mpv, 3).ravel()
    return p


def _contract(rows: np.ndarray, basis_r: np.ndarray, m: int) -> np.ndarray:
    """Contract complex parameter rows against a real basis in one dgemm."""
    stacked = np.empty((2 * m, 30), dtype=np.float64)
    stacked[:m] = rows.real
    stacked[m:] = rows.imag
    out = stacked @ basis_r
    return out[:m] + 1j * out[m:]


def assemble_blocks(cv, cpv, qv, qpv, mv, mpv) -> np.ndarray:
    """Assemble one 128x128 slot of the representation from slot values.

    ``cv, cpv`` are scalars (or 1x1 arrays); ``qv, qpv`` 2x2; ``mv, mpv``
    3x3.  The same block pattern also assembles gauge potentials, which reuse
    it with field components in place of algebra slots.
    """
    p = _slot_params(cv, cpv, qv, qpv, mv, mpv)
    return _contract(p[None, :], _BASIS_R, 1).reshape(128, 128)


def assemble_blocks_naive(cv, cpv, qv, qpv, mv, mpv) -> np.ndarray:
    """Flavour-blind slot assembly (see ``_assemble_explicit_naive``)."""
    p = _slot_params(cv, cpv, qv, qpv, mv, mpv)
    return _contract(p[None, :], _BASIS_NAIVE_R, 1).reshape(128, 128)


def _represent_with(basis_r: np.ndarray, a: AlgebraElement) -> Jet:
    """Evaluate all five slots of a representation in one contraction.

    Conjugation commutes with the point derivatives, so the parameter
    vector of a derivative slot is the derivative of the parameter vector.
    """
    rows = np.empty((5, 30), dtype=np.complex128)
    rows[0] = _slot_params(a.c.value, a.cp.value, a.q.value,
                           a.qp.value, a.m.value, a.mp.value)
    for mu in range(4):
        rows[mu + 1] = _slot_params(a.c.d[mu], a.cp.d[mu], a.q.d[mu],
                                    a.qp.d[mu], a.m.d[mu], a.mp.d[mu])
    slots = _contract(rows, basis_r, 5).reshape(5, 128, 128)
    return Jet._wrap(slots[0], slots[1:])


def represent(a: AlgebraElement) -> Jet:
    """The 128-dim representation, applied slot by slot of the jets."""
    return _represent_with(_BASIS_R, a)


def represent_naive(a: AlgebraElement) -> Jet:
    """Flavour-blind representation, slot by slot (see ``assemble_blocks_naive``)."""
    return _represent_with(_BASIS_NAIVE_R, a)


def twist_flip(j: Jet) -> Jet:
    """The represented twist ``pi(rho(a))`` of an already represented ``pi(a)``.

    Every representation here builds its two chirality blocks from swapped
    slot data, so applying the twist amounts to reversing the row and column
    chirality axes; no new contraction is needed.
    """
    v = np.flip(j.value.reshape(2, 2, 2, 4, 4, 2, 2, 2, 4, 4),
                (1, 6)).reshape(DIM, DIM)
    d = np.flip(j.d.reshape(4, 2, 2, 2, 4, 4, 2, 2, 2, 4, 4),
                (2, 7)).reshape(4, DIM, DIM)
    return Jet._wrap(v, d)


# ---------------------------------------------------------------------------
# conjugation by the real structure
# ---------------------------------------------------------------------------

def _perm_phase(k: np.ndarray):
    """Decompose a generalized permutation matrix as ``k[i, perm[i]] = phase[i]``.

    Returns ``None`` when ``k`` has any row or column without exactly one
    nonzero entry, in which case the caller must multiply densely.
    """
    nz_rows, nz_cols = np.nonzero(k)
    if len(nz_rows) != k.shape[0] or len(set(nz_rows)) != k.shape[0] \
            or len(set(nz_cols)) != k.shape[0]:
        return None
    perm = np.empty(k.shape[0], dtype=np.intp)
    perm[nz_rows] = nz_cols
    return perm, k[np.arange(k.shape[0]), perm]


def conj_by(k: np.ndarray, x):
    """Conjugate a matrix or jet by the antilinear map ``K . cc``.

    For the antiunitary ``J = K cc`` and a linear operator ``X``, the
    conjugate ``J X J^{-1}`` is the linear operator ``K conj(X) K*``.  The
    maps used here are generalized permutations, for which the two matrix
    products reduce to an index gather and a phase scaling.
    """
    k = as_operator(k, DIM)
    decomposed = _perm_phase(k)
    if decomposed is not None:
        perm, phase = decomposed
        weight = phase[:, None] * np.conj(phase)[None, :]

        def act(m: np.ndarray) -> np.ndarray:
            return weight * np.conj(m)[np.ix_(perm, perm)]
    else:
        kd = dagger(k)

        def act(m: np.ndarray) -> np.ndarray:
            return k @ np.conj(m) @ kd
    if isinstance(x, Jet):
        if decomposed is not None:
            d = weight * np.conj(x.d)[:, perm[:, None], perm[None, :]]
        else:
            d = np.stack([act(x.d[mu]) for mu in range(4)])
        return Jet._wrap(act(x.value), d)
    return act(as_operator(x, DIM))


def opposite(a: AlgebraElement, k: np.ndarray, rep=represent) -> Jet:
    """Right-action operator ``J pi(a*) J^{-1}`` of an algebra element."""
    return conj_by(k, rep(adjoint(a)))


def rho_opposite(a: AlgebraElement, k: np.ndarray, rep=represent) -> Jet:
    """The twisted right action: the opposite of ``rho(a)``."""
    return opposite(twist_rho(a), k, rep=rep)
