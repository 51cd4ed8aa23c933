"""Fixed 128-dimensional tensor basis and dense linear-algebra helpers.

Every pointwise operator in this package acts on the tensor product of five
labelled factors, ordered with ``C`` outermost:

========  ===  =========================================
name      dim  meaning
========  ===  =========================================
``C``      2   particle / antiparticle doubling
``s``      2   Weyl chirality (right, left)
``sdot``   2   conjugate (dotted) spinor index
``I``      4   lepto-colour index (lepton, 3 colours)
``alpha``  4   flavour index (2 singlets, 1 doublet)
========  ===  =========================================

The flat index of a basis vector is
``alpha + 4*I + 16*sdot + 32*s + 64*C``, i.e. row-major over the factor
tuple ``(C, s, sdot, I, alpha)``.  All operators are dense complex numpy
arrays; helpers here validate them, embed small blocks into the full space,
extract sub-blocks, and measure relative residuals.
"""

from __future__ import annotations

import functools

import numpy as np

FACTORS: tuple[tuple[str, int], ...] = (
    ("C", 2),
    ("s", 2),
    ("sdot", 2),
    ("I", 4),
    ("alpha", 4),
)

NAMES: tuple[str, ...] = tuple(name for name, _ in FACTORS)
DIMS: tuple[int, ...] = tuple(dim for _, dim in FACTORS)
DIM: int = 128

_FACTOR_DIM = dict(FACTORS)

# Pauli matrices, used throughout for spinor and weak-isospin structure.
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI: tuple[np.ndarray, ...] = (SIGMA1, SIGMA2, SIGMA3)

_SQ3 = np.sqrt(3.0)
# Standard Hermitian traceless 3x3 basis, normalised to tr(L_m L_n) = 2 d_mn.
GELLMANN: tuple[np.ndarray, ...] = (
    np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=np.complex128),
    np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=np.complex128),
    np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=np.complex128),
    np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=np.complex128),
    np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=np.complex128),
    np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=np.complex128),
    np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=np.complex128),
    np.array([[1, 0, 0], [0, 1, 0], [0, 0, -2]], dtype=np.complex128) / _SQ3,
)


class BasisLayout:
    """Index bookkeeping for the fixed factor ordering ``(C, s, sdot, I, alpha)``."""

    names = NAMES
    dims = DIMS
    dim = DIM
    strides = {"C": 64, "s": 32, "sdot": 16, "I": 4, "alpha": 1}

    @staticmethod
    def flat(C: int, s: int, sdot: int, I: int, alpha: int) -> int:
        """Flat index of the basis vector with the given factor indices."""
        for name, value in (("C", C), ("s", s), ("sdot", sdot), ("I", I), ("alpha", alpha)):
            top = _FACTOR_DIM[name]
            if not 0 <= value < top:
                raise ValueError(f"index {name}={value} out of range 0..{top - 1}")
        return alpha + 4 * I + 16 * sdot + 32 * s + 64 * C

    @staticmethod
    def unflat(i: int) -> tuple[int, int, int, int, int]:
        """Factor indices ``(C, s, sdot, I, alpha)`` of the flat index ``i``."""
        if not 0 <= i < DIM:
            raise ValueError(f"flat index {i} out of range 0..{DIM - 1}")
        C, r = divmod(i, 64)
        s, r = divmod(r, 32)
        sdot, r = divmod(r, 16)
        I, alpha = divmod(r, 4)
        return (C, s, sdot, I, alpha)


def as_operator(matrix, dim: int | None = None) -> np.ndarray:
    """Validate ``matrix`` as a square, finite, complex operator and return it.

    :param matrix: anything convertible to a 2-d complex array.
    :param dim: if given, the required side length.
    :raises ValueError: on non-square, wrongly sized, or non-finite input.
    """
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} matrix, got {arr.shape[0]}x{arr.shape[0]}")
    if not np.isfinite(arr).all():
        raise ValueError("matrix has non-finite entries")
    return arr


def dagger(matrix: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(matrix)).T


def _kron2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2-d arrays via broadcasting."""
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def kron(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor outermost."""
    if not factors:
        raise ValueError("kron needs at least one factor")
    return functools.reduce(_kron2, [np.asarray(f, dtype=np.complex128) for f in factors])


def blockdiag(*blocks) -> np.ndarray:
    """Block-diagonal matrix from square blocks (scalars become 1x1 blocks)."""
    mats = []
    for b in blocks:
        arr = np.asarray(b, dtype=np.complex128)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        mats.append(as_operator(arr))
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.complex128)
    at = 0
    for m in mats:
        k = m.shape[0]
        out[at:at + k, at:at + k] = m
        at += k
    return out


def rel_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Relative Frobenius residual ``|A - B|_F / max(1, |A|_F, |B|_F)``.

    The ``1`` in the denominator keeps the residual absolute for small
    operators, so a zero matrix compared against noise is not reported as
    perfectly matching.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / max(1.0, na, nb))


def twisted_commutator(d: np.ndarray, a: np.ndarray, rho_a: np.ndarray) -> np.ndarray:
    """Twisted commutator ``D a - rho(a) D`` of square matrices of equal size."""
    d = as_operator(d)
    a = as_operator(a, d.shape[0])
    rho_a = as_operator(rho_a, d.shape[0])
    return d @ a - rho_a @ d


def embed(block, factors) -> np.ndarray:
    """Embed ``block`` acting on the named factors into the full 128-dim space.

    ``factors`` is a factor name or a tuple of distinct factor names given in
    layout order; ``block`` must be square with side equal to the product of
    the named dimensions, with its own row-major index running over the named
    factors in the same order.  The remaining factors carry the identity.
    Factors need not be adjacent: ``embed(m, ("C", "I", "alpha"))`` is valid.
    """
    if isinstance(factors, str):
        factors = (factors,)
    positions = []
    for name in factors:
        if name not in NAMES:
            raise ValueError(f"unknown factor {name!r}; expected one of {NAMES}")
        positions.append(NAMES.index(name))
    if len(set(positions)) != len(positions) or positions != sorted(positions):
        raise ValueError("factors must be distinct and given in layout order")
    sub_dims = [DIMS[p] for p in positions]
    sub_total = int(np.prod(sub_dims))
    block = as_operator(block, sub_total)
    rest = [p for p in range(len(NAMES)) if p not in positions]
    if not rest:
        return block.copy()
    rest_dims = [DIMS[p] for p in rest]
    tens = block.reshape(*sub_dims, *sub_dims)
    eye = np.eye(int(np.prod(rest_dims)), dtype=np.complex128).reshape(*rest_dims, *rest_dims)
    full = np.multiply.outer(tens, eye)
    # full axes: sub rows, sub cols, rest rows, rest cols -> layout rows, layout cols
    k, r = len(positions), len(rest)
    row_axis: dict[int, int] = {}
    col_axis: dict[int, int] = {}
    for j, p in enumerate(positions):
        row_axis[p] = j
        col_axis[p] = k + j
    for j, p in enumerate(rest):
        row_axis[p] = 2 * k + j
        col_axis[p] = 2 * k + r + j
    perm = [row_axis[p] for p in range(len(NAMES))] + [col_axis[p] for p in range(len(NAMES))]
    return np.ascontiguousarray(full.transpose(perm).reshape(DIM, DIM))


def take_block(matrix, where: dict[str, tuple[int, int]], present=NAMES) -> np.ndarray:
    """Extract the sub-block with fixed row/column indices on named factors.

    :param matrix: operator over the factors listed in ``present`` (layout
        order), by default the full space.
    :param where: map ``factor -> (row_index, col_index)``.
    :returns: the block over the remaining factors, in layout order.
    """
    present = tuple(present)
    dims = [_FACTOR_DIM[name] for name in present]
    total = int(np.prod(dims))
    arr = as_operator(matrix, total).reshape(*dims, *dims)
    n = len(present)
    row_idx: list = [slice(None)] * n
    col_idx: list = [slice(None)] * n
    for name, (i, j) in where.items():
        if name not in present:
            raise ValueError(f"factor {name!r} not among {present}")
        pos = present.index(name)
        if not (0 <= i < dims[pos] and 0 <= j < dims[pos]):
            raise ValueError(f"indices {(i, j)} out of range for factor {name!r}")
        row_idx[pos] = i
        col_idx[pos] = j
    sub = arr[tuple(row_idx + col_idx)]
    keep = [p for p, name in enumerate(present) if name not in where]
    side = int(np.prod([dims[p] for p in keep])) if keep else 1
    return np.ascontiguousarray(sub.reshape(side, side))


def split_identity(matrix, name: str, present=NAMES) -> tuple[np.ndarray, float]:
    """Collapse a factor that acts trivially: ``M = I_name (x) N``.

    Returns the collapsed operator ``N`` (mean of the diagonal blocks) and the
    relative residual of ``M`` against ``I (x) N``; a large residual means the
    factor does not act trivially.
    """
    present = tuple(present)
    d = _FACTOR_DIM[name]
    diag = [take_block(matrix, {name: (i, i)}, present) for i in range(d)]
    collapsed = sum(diag) / d
    norm = max(1.0, float(np.linalg.norm(np.asarray(matrix))))
    worst = 0.0
    for i in range(d):
        for j in range(d):
            blk = diag[i] if i == j else take_block(matrix, {name: (i, j)}, present)
            target = collapsed if i == j else np.zeros_like(collapsed)
            worst = max(worst, float(np.linalg.norm(blk - target) / norm))
    return collapsed, worst


def masked_residual(matrix, mask: np.ndarray) -> float:
    """Relative Frobenius norm of the entries of ``matrix`` outside ``mask``.

    ``mask`` is boolean with True marking allowed positions; the norm of the
    disallowed entries is divided by ``max(1, |matrix|_F)``.
    """
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.shape != mask.shape:
        raise ValueError(f"shape mismatch {arr.shape} vs mask {mask.shape}")
    outside = np.where(mask, 0.0, arr)
    return float(np.linalg.norm(outside) / max(1.0, np.linalg.norm(arr)))
