"""First-order jets of matrix-valued fields at a point.

A jet records the value of a matrix-valued field together with its four
partial derivatives at the chosen point.  Products follow the Leibniz rule,
so differential identities can be certified with plain linear algebra and no
symbolic machinery.  Scalar fields are carried as 1x1 jets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .layout import PAULI, as_operator, dagger, rel_residual

NDIR = 4

QUATERNION_BASIS: tuple[np.ndarray, ...] = (
    np.eye(2, dtype=np.complex128),
    1j * PAULI[0],
    1j * PAULI[1],
    1j * PAULI[2],
)


@dataclass(frozen=True)
class Jet:
    """Value of a matrix field and its four partial derivatives at a point.

    The derivatives are stored stacked as one ``(4, n, n)`` array so that
    products and commutators run as batched matrix multiplications; the
    constructor accepts any sequence of four ``n x n`` matrices.
    """

    value: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        value = as_operator(self.value)
        n = value.shape[0]
        if isinstance(self.d, np.ndarray):
            derivs = np.asarray(self.d, dtype=np.complex128)
        else:
            derivs = np.asarray(tuple(self.d), dtype=np.complex128)
        if derivs.shape != (NDIR, n, n):
            raise ValueError(
                f"expected {NDIR} derivative slots of shape {n}x{n}, "
                f"got {derivs.shape}")
        if not np.isfinite(derivs).all():
            raise ValueError("derivative slot has non-finite entries")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "d", derivs)

    @classmethod
    def _wrap(cls, value: np.ndarray, d: np.ndarray) -> "Jet":
        """Wrap arrays produced by validated jet arithmetic without re-checking."""
        self = object.__new__(cls)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "d", d)
        return self

    @property
    def n(self) -> int:
        """Matrix side length."""
        return self.value.shape[0]

    def __add__(self, other: "Jet") -> "Jet":
        return Jet._wrap(self.value + other.value, self.d + other.d)

    def __sub__(self, other: "Jet") -> "Jet":
        return Jet._wrap(self.value - other.value, self.d - other.d)

    def __neg__(self) -> "Jet":
        return Jet._wrap(-self.value, -self.d)

    def __mul__(self, scalar) -> "Jet":
        scalar = complex(scalar)
        return Jet._wrap(scalar * self.value, scalar * self.d)

    __rmul__ = __mul__

    def __matmul__(self, other: "Jet") -> "Jet":
        """Pointwise product with the Leibniz rule on the derivative slots."""
        return Jet._wrap(self.value @ other.value,
                         self.d @ other.value + self.value @ other.d)

    def dagger(self) -> "Jet":
        """Slotwise conjugate transpose (conjugation commutes with derivatives)."""
        return Jet._wrap(dagger(self.value), np.conj(np.swapaxes(self.d, -1, -2)))

    def conj(self) -> "Jet":
        """Slotwise complex conjugate."""
        return Jet._wrap(np.conj(self.value), np.conj(self.d))

    def scalar(self) -> complex:
        """The value of a 1x1 jet as a plain complex number."""
        if self.n != 1:
            raise ValueError(f"not a scalar jet (n={self.n})")
        return complex(self.value[0, 0])


def const_jet(value) -> Jet:
    """Jet of a constant matrix: all derivative slots vanish."""
    value = as_operator(value)
    n = value.shape[0]
    return Jet(value, np.zeros((NDIR, n, n), dtype=np.complex128))


def zero_jet(n: int) -> Jet:
    """Zero jet of side length ``n``."""
    return Jet(np.zeros((n, n), dtype=np.complex128),
               np.zeros((NDIR, n, n), dtype=np.complex128))


def jet_residual(a: Jet, b: Jet) -> float:
    """Largest slotwise relative residual between two jets."""
    worst = rel_residual(a.value, b.value)
    for mu in range(NDIR):
        worst = max(worst, rel_residual(a.d[mu], b.d[mu]))
    return worst


def jet_norm(a: Jet) -> float:
    """Largest slotwise Frobenius norm."""
    return max(float(np.linalg.norm(m)) for m in (a.value, *a.d))


def const_twisted_commutator(d_op: np.ndarray, a: Jet, rho_a: Jet) -> Jet:
    """Twisted commutator ``D a - rho(a) D`` of a constant operator with a jet."""
    d_op = as_operator(d_op, a.n)
    return Jet._wrap(d_op @ a.value - rho_a.value @ d_op,
                     d_op @ a.d - rho_a.d @ d_op)


# ---------------------------------------------------------------------------
# random draws
# ---------------------------------------------------------------------------

def random_matrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """Complex Gaussian matrix."""
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    m = random_matrix(rng, n, scale)
    return (m + dagger(m)) / 2


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary via QR with phase-normalised R diagonal."""
    q, r = np.linalg.qr(random_matrix(rng, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_jet(rng: np.random.Generator, n: int, scale: float = 1.0,
               real: bool = False) -> Jet:
    """Generic matrix jet; ``real=True`` restricts every slot to real entries."""
    def draw() -> np.ndarray:
        m = random_matrix(rng, n, scale)
        return m.real.astype(np.complex128) if real else m
    return Jet(draw(), tuple(draw() for _ in range(NDIR)))


def random_scalar_jet(rng: np.random.Generator, scale: float = 1.0,
                      real: bool = False) -> Jet:
    """Random 1x1 jet."""
    return random_jet(rng, 1, scale=scale, real=real)


def random_unitary_jet(rng: np.random.Generator, n: int, scale: float = 1.0) -> Jet:
    """Jet of a unitary-valued field: value unitary, tangent ``i h u``.

    The derivative of ``u u* = I`` forces ``(d u) u*`` to be antihermitian,
    so the slots are ``i h_mu u`` with Hermitian ``h_mu``.
    """
    u = random_unitary(rng, n)
    return Jet(u, tuple(1j * random_hermitian(rng, n, scale) @ u for _ in range(NDIR)))


def unitary_jet_residual(j: Jet) -> float:
    """How far a jet is from the unitary constraint (value and tangents)."""
    eye = np.eye(j.n)
    worst = rel_residual(j.value @ dagger(j.value), eye)
    for mu in range(NDIR):
        k = j.d[mu] @ dagger(j.value)
        worst = max(worst, rel_residual(k, -dagger(k)))
    return worst


# ---------------------------------------------------------------------------
# quaternions: the real span of {I, i s1, i s2, i s3} inside 2x2 matrices
# ---------------------------------------------------------------------------

def quaternion_components(m: np.ndarray) -> np.ndarray:
    """Coefficients ``(w, x1, x2, x3)`` of ``m`` on the quaternion basis.

    Uses ``tr(B_k^* B_l) = 2 d_kl``; the coefficients are complex in general
    and real exactly when ``m`` is quaternionic.
    """
    m = as_operator(m, 2)
    return np.array([np.trace(dagger(b) @ m) / 2 for b in QUATERNION_BASIS])


def quaternion_assemble(coeffs) -> np.ndarray:
    """2x2 matrix ``w I + x1 i s1 + x2 i s2 + x3 i s3`` from 4 coefficients."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.shape != (4,):
        raise ValueError(f"expected 4 coefficients, got shape {coeffs.shape}")
    out = np.zeros((2, 2), dtype=np.complex128)
    for c, b in zip(coeffs, QUATERNION_BASIS):
        out += c * b
    return out


def quaternion_residual(m: np.ndarray) -> float:
    """Distance of ``m`` from the quaternion algebra, relative Frobenius."""
    comps = quaternion_components(m)
    return rel_residual(m, quaternion_assemble(comps.real))


def quaternion_jet_residual(j: Jet) -> float:
    """Largest slotwise distance of a 2x2 jet from the quaternion algebra."""
    return max(quaternion_residual(m) for m in (j.value, *j.d))


def random_quaternion(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random quaternionic 2x2 matrix with Gaussian real coefficients."""
    return quaternion_assemble(scale * rng.standard_normal(4))


def random_quaternion_jet(rng: np.random.Generator, scale: float = 1.0) -> Jet:
    """Jet with every slot in the quaternion algebra (closed under products)."""
    return Jet(random_quaternion(rng, scale),
               tuple(random_quaternion(rng, scale) for _ in range(NDIR)))


def random_su2_jet(rng: np.random.Generator, scale: float = 1.0) -> Jet:
    """Jet of an SU(2)-valued field: unit quaternion value, tangents ``i h u``
    with ``h`` in the real span of the Pauli matrices (traceless)."""
    coeffs = rng.standard_normal(4)
    coeffs /= np.linalg.norm(coeffs)
    u = quaternion_assemble(coeffs)
    derivs = []
    for _ in range(NDIR):
        h = sum(float(c) * s for c, s in zip(scale * rng.standard_normal(3), PAULI))
        derivs.append(1j * h @ u)
    return Jet(u, tuple(derivs))


# ---------------------------------------------------------------------------
# unitary 3x3 jets and the U(3) -> U(1) x SU(3) phase split
# ---------------------------------------------------------------------------

def random_u3_jet(rng: np.random.Generator, scale: float = 1.0) -> Jet:
    """Jet of a U(3)-valued field."""
    return random_unitary_jet(rng, 3, scale)


def random_su3_jet(rng: np.random.Generator, scale: float = 1.0) -> Jet:
    """Jet of an SU(3)-valued field: unit determinant, traceless tangents."""
    u = random_unitary(rng, 3)
    u = u / np.linalg.det(u) ** (1.0 / 3.0)
    derivs = []
    for _ in range(NDIR):
        h = random_hermitian(rng, 3, scale)
        h -= np.trace(h) / 3 * np.eye(3)
        derivs.append(1j * h @ u)
    return Jet(u, tuple(derivs))


def phase_jet(alpha: Jet) -> Jet:
    """Jet of ``exp(i alpha)`` for a real scalar jet ``alpha``."""
    if alpha.n != 1:
        raise ValueError("phase_jet needs a 1x1 jet")
    worst = max(float(np.abs(m.imag).max()) for m in (alpha.value, *alpha.d))
    if worst > 1e-12:
        raise ValueError("phase_jet needs a real scalar jet")
    value = np.exp(1j * alpha.value)
    return Jet(value, tuple(1j * alpha.d[mu] * value for mu in range(NDIR)))


def real_scalar_jet(rng: np.random.Generator, scale: float = 1.0) -> Jet:
    """Random real 1x1 jet (e.g. a local rotation angle)."""
    return random_scalar_jet(rng, scale=scale, real=True)


def su3_reduce(m: Jet) -> tuple[Jet, Jet]:
    """Split a U(3) jet as ``m = exp(i theta) n`` with ``det n = 1``.

    ``theta`` is ``arg(det m)/3`` with derivative ``Im tr(m* dm)/3``; the cube
    root is one fixed branch, but any transformation law built from ``n`` and
    ``theta`` jointly is insensitive to the residual cube-root-of-unity
    ambiguity.  Returns the real scalar jet ``theta`` and the SU(3) jet ``n``.
    """
    if m.n != 3:
        raise ValueError("su3_reduce needs a 3x3 jet")
    det = np.linalg.det(m.value)
    if abs(abs(det) - 1.0) > 1e-9:
        raise ValueError("su3_reduce needs a unitary-valued jet")
    theta_value = np.angle(det) / 3.0
    theta_d = [np.trace(dagger(m.value) @ m.d[mu]).imag / 3.0 for mu in range(NDIR)]
    theta = Jet(np.array([[theta_value]]),
                tuple(np.array([[t]]) for t in theta_d))
    minus = Jet(-theta.value, tuple(-t for t in theta.d))
    n = jet_scalar_mul(phase_jet(minus), m)
    return theta, n


def jet_scalar_mul(scalar: Jet, m: Jet) -> Jet:
    """Product of a 1x1 jet with a matrix jet, Leibniz on the slots."""
    if scalar.n != 1:
        raise ValueError("first argument must be a 1x1 jet")
    s = scalar.value[0, 0]
    return Jet(s * m.value,
               tuple(scalar.d[mu][0, 0] * m.value + s * m.d[mu] for mu in range(NDIR)))
