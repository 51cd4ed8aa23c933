"""The doubled algebra, its two representations, and the real structure."""

import numpy as np
import pytest

from twistsm.algebra import (AlgebraElement, adjoint, assemble_blocks,
                             assemble_blocks_naive, conj_by, identity_element,
                             mul, opposite, random_element,
                             random_twist_invariant, represent,
                             represent_naive, rho_opposite,
                             twist_invariance_residual, twist_flip, twist_rho)
from twistsm.jets import Jet, const_jet, jet_residual, random_jet, zero_jet
from twistsm.layout import DIM, BasisLayout, dagger
from twistsm.spectral import build_real_structure


def _slot_values(a: AlgebraElement):
    return (a.c.value[0, 0], a.cp.value[0, 0], a.q.value, a.qp.value,
            a.m.value, a.mp.value)


def _placement_oracle(cv, cpv, qv, qpv, mv, mpv, flavour_blind=False) -> np.ndarray:
    """Entrywise reimplementation of one represented slot from the layout:

    * doubling block C=0: flavour factor carries diag(c, conj c) on the first
      pair and the *primed* quaternion on the second pair for the right
      chirality; primed scalar and unprimed quaternion for the left.
    * doubling block C=1: lepto-colour factor carries diag(c, m), with the
      unprimed copy on the first flavour pair of the right chirality and the
      primed copy on its second pair, roles swapped on the left.  The
      flavour-blind variant ignores the pairing and uses unprimed data on the
      whole right chirality, primed on the left.
    """
    out = np.zeros((DIM, DIM), dtype=np.complex128)
    for r in range(DIM):
        C, s, sd, i, al = BasisLayout.unflat(r)
        for c in range(DIM):
            C2, s2, sd2, i2, al2 = BasisLayout.unflat(c)
            if C != C2 or s != s2 or sd != sd2:
                continue
            if C == 0:
                if i != i2:
                    continue
                scal = cv if s == 0 else cpv
                quat = qpv if s == 0 else qv
                if al == al2 == 0:
                    out[r, c] = scal
                elif al == al2 == 1:
                    out[r, c] = np.conj(scal)
                elif al >= 2 and al2 >= 2:
                    out[r, c] = quat[al - 2, al2 - 2]
            else:
                if al != al2:
                    continue
                if flavour_blind:
                    use_unprimed = (s == 0)
                else:
                    use_unprimed = (s == 0) == (al < 2)
                cc = cv if use_unprimed else cpv
                mm = mv if use_unprimed else mpv
                if i == 0 and i2 == 0:
                    out[r, c] = cc
                elif i >= 1 and i2 >= 1:
                    out[r, c] = mm[i - 1, i2 - 1]
    return out


# ---------------------------------------------------------------------------
# element construction
# ---------------------------------------------------------------------------

def test_element_validation(rng):
    good = random_element(rng)
    bad_q = random_jet(rng, 2)  # generic 2x2, not quaternionic
    with pytest.raises(ValueError):
        AlgebraElement(c=good.c, cp=good.cp, q=bad_q, qp=good.qp,
                       m=good.m, mp=good.mp)
    with pytest.raises(ValueError):
        AlgebraElement(c=good.q, cp=good.cp, q=good.q, qp=good.qp,
                       m=good.m, mp=good.mp)  # 2x2 in a scalar slot
    with pytest.raises(TypeError):
        AlgebraElement(c=1.0, cp=good.cp, q=good.q, qp=good.qp,
                       m=good.m, mp=good.mp)


def test_twist_is_involutive_slot_swap(rng):
    a = random_element(rng)
    ra = twist_rho(a)
    assert ra.c is a.cp and ra.cp is a.c
    assert ra.q is a.qp and ra.m is a.mp
    back = twist_rho(ra)
    assert back.c is a.c and back.m is a.m


def test_twist_invariance_residual(rng):
    assert twist_invariance_residual(random_twist_invariant(rng)) == 0.0
    assert twist_invariance_residual(random_element(rng)) > 1e-2


# ---------------------------------------------------------------------------
# representations against the entrywise placement oracle
# ---------------------------------------------------------------------------

def test_represent_matches_placement_oracle(rng):
    a = random_element(rng)
    got = represent(a).value
    want = _placement_oracle(*_slot_values(a))
    assert np.allclose(got, want, atol=1e-13)


def test_represent_naive_matches_placement_oracle(rng):
    a = random_element(rng)
    got = represent_naive(a).value
    want = _placement_oracle(*_slot_values(a), flavour_blind=True)
    assert np.allclose(got, want, atol=1e-13)


def test_representations_differ_only_in_colour_block(rng):
    a = random_element(rng)
    diff = represent(a).value - represent_naive(a).value
    # the doubling block C=0 is shared; C=1 differs for generic elements
    assert np.allclose(diff[:64, :64], 0.0, atol=1e-14)
    assert np.linalg.norm(diff[64:, 64:]) > 1e-2


def test_assemble_blocks_matches_represent(rng):
    a = random_element(rng)
    cv, cpv, qv, qpv, mv, mpv = _slot_values(a)
    assert np.allclose(assemble_blocks(cv, cpv, qv, qpv, mv, mpv),
                       represent(a).value, atol=1e-13)
    assert np.allclose(assemble_blocks_naive(cv, cpv, qv, qpv, mv, mpv),
                       represent_naive(a).value, atol=1e-13)


def test_representation_is_homomorphism(rng):
    for rep in (represent, represent_naive):
        a = random_element(rng)
        b = random_element(rng)
        assert jet_residual(rep(mul(a, b)), rep(a) @ rep(b)) < 1e-13
        assert jet_residual(rep(adjoint(a)), rep(a).dagger()) < 1e-13


def test_identity_represents_to_identity():
    one = represent(identity_element())
    assert np.array_equal(one.value, np.eye(DIM, dtype=np.complex128))
    assert not one.d.any()


def test_derivative_slots_are_represented_slotwise(rng):
    # the representation is linear, so each derivative slot is the
    # representation of the element whose slots are the derivatives
    a = random_element(rng)
    pa = represent(a)
    d0 = _placement_oracle(a.c.d[0][0, 0], a.cp.d[0][0, 0], a.q.d[0],
                           a.qp.d[0], a.m.d[0], a.mp.d[0])
    assert np.allclose(pa.d[0], d0, atol=1e-13)


# ---------------------------------------------------------------------------
# the represented twist
# ---------------------------------------------------------------------------

def test_twist_flip_equals_representing_the_twist(rng):
    a = random_element(rng)
    for rep in (represent, represent_naive):
        assert jet_residual(twist_flip(rep(a)), rep(twist_rho(a))) < 1e-14
    # involution at the operator level
    pa = represent(a)
    assert jet_residual(twist_flip(twist_flip(pa)), pa) == 0.0


# ---------------------------------------------------------------------------
# conjugation by the real structure
# ---------------------------------------------------------------------------

def test_conj_by_matches_dense_formula(rng):
    k = build_real_structure()
    m = rng.standard_normal((DIM, DIM)) + 1j * rng.standard_normal((DIM, DIM))
    got = conj_by(k, m)
    want = k @ np.conj(m) @ dagger(k)
    assert np.allclose(got, want, atol=1e-12)


def test_conj_by_jet_applies_slotwise(rng):
    k = build_real_structure()
    j = random_jet(rng, DIM)
    got = conj_by(k, j)
    assert np.allclose(got.value, conj_by(k, j.value), atol=0)
    for mu in range(4):
        assert np.allclose(got.d[mu], conj_by(k, j.d[mu]), atol=0)


def test_conj_by_dense_fallback(rng):
    # a non-monomial unitary forces the dense path; both paths must agree
    from twistsm.jets import random_unitary
    k = random_unitary(rng, DIM)
    m = rng.standard_normal((DIM, DIM)) + 1j * rng.standard_normal((DIM, DIM))
    assert np.allclose(conj_by(k, m), k @ np.conj(m) @ dagger(k), atol=1e-11)


def test_conj_by_is_involutive(rng):
    # J^2 = -1 here, so conjugating twice is conjugation by K conj(K) = -1,
    # i.e. the identity map on operators
    k = build_real_structure()
    m = rng.standard_normal((DIM, DIM)) + 1j * rng.standard_normal((DIM, DIM))
    assert np.allclose(conj_by(k, conj_by(k, m)), m, atol=1e-12)


def test_order_zero_at_matrix_level(rng):
    k = build_real_structure()
    for rep in (represent, represent_naive):
        a = random_element(rng)
        b = random_element(rng)
        pa = rep(a)
        bo = opposite(b, k, rep=rep)
        comm = pa @ bo - bo @ pa
        assert jet_residual(comm, zero_jet(DIM)) < 1e-13


def test_twisted_right_action_is_flip_of_right_action(rng):
    # the conjugated right action of rho(a) equals the chirality flip of the
    # conjugated right action of a (the real structure commutes with the flip)
    k = build_real_structure()
    a = random_element(rng)
    for rep in (represent, represent_naive):
        assert jet_residual(rho_opposite(a, k, rep=rep),
                            twist_flip(opposite(a, k, rep=rep))) == 0.0


def test_right_action_of_identity_is_identity():
    k = build_real_structure()
    one = opposite(identity_element(), k)
    assert np.allclose(one.value, np.eye(DIM), atol=1e-13)
