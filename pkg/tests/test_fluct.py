"""One-form construction, field extraction round-trips, and block tables."""

import numpy as np
import pytest

from twistsm.algebra import AlgebraElement, random_element
from twistsm.fluct import (KIND_FREE, KIND_MAJORANA, KIND_YUKAWA, KINDS,
                           Couplings, assemble_free_component, covariant_dirac,
                           decompose_Z, extract_free_components, extract_higgs,
                           extract_sigma, field_content, free_components_claim,
                           free_form, free_form_from_fields, gauge_sector,
                           higgs_claim, majorana_form, one_form,
                           random_selfadjoint_free, random_selfadjoint_majorana,
                           random_selfadjoint_yukawa, selfadjoint_residual,
                           sigma_claim, standard_gauge_matrices,
                           structure_mask, structure_residual, symmetrize,
                           unimodularity, unimodularize, yukawa_form,
                           z_entry_residuals)
from twistsm.jets import (Jet, const_jet, jet_residual, random_quaternion_jet,
                          random_scalar_jet)
from twistsm.layout import DIM, dagger, rel_residual
from twistsm.spectral import FiniteDiracParams, build_spectral_data

TOL = 1e-10


def _const_scalar(x) -> Jet:
    return const_jet(np.array([[x]], dtype=np.complex128))


def _scalars_only(c, cp) -> AlgebraElement:
    eye2 = const_jet(np.eye(2))
    eye3 = const_jet(np.eye(3))
    return AlgebraElement(c=_const_scalar(c), cp=_const_scalar(cp),
                          q=eye2, qp=eye2, m=eye3, mp=eye3)


def _pairs(rng, count):
    return [(random_element(rng), random_element(rng)) for _ in range(count)]


# ---------------------------------------------------------------------------
# block patterns
# ---------------------------------------------------------------------------

def test_structure_mask_sizes():
    # counted by hand from the index conditions:
    # flavour: C=0 (1) x s (2) x sdot (2) x I (4) x cross-pair alpha (8) = 128
    # singlet: C off-diagonal (2) x s (2) x sdot (2) x one (I, alpha) slot = 8
    # free: C=0 gives 2*2*4*(2 + 4) = 96, C=1 gives 2*2*16*4 = 256
    assert int(structure_mask(KIND_YUKAWA).sum()) == 128
    assert int(structure_mask(KIND_MAJORANA).sum()) == 8
    assert int(structure_mask(KIND_FREE).sum()) == 352
    with pytest.raises(ValueError):
        structure_mask("bogus")


def test_one_forms_respect_their_patterns(data, rng):
    pairs = _pairs(rng, 2)
    for kind in KINDS:
        form = one_form(data, pairs, kind)
        assert form.kind == kind
        assert structure_residual(form) <= 1e-10


def test_one_form_validates_input(data, rng):
    with pytest.raises(ValueError):
        one_form(data, [], KIND_YUKAWA)
    with pytest.raises(TypeError):
        one_form(data, [(1, 2)], KIND_YUKAWA)
    with pytest.raises(ValueError):
        one_form(data, _pairs(rng, 1), "bogus")


# ---------------------------------------------------------------------------
# flavour sector
# ---------------------------------------------------------------------------

def test_higgs_closed_form(data, rng):
    for _ in range(5):
        a, b = random_element(rng), random_element(rng)
        sector = extract_higgs(data, one_form(data, [(a, b)], KIND_YUKAWA))
        claim = higgs_claim(a, b)
        assert jet_residual(sector.H1, claim["H1"]) < TOL
        assert jet_residual(sector.H2, claim["H2"]) < TOL
        assert jet_residual(sector.H1p, claim["H1p"]) < TOL
        assert jet_residual(sector.H2p, claim["H2p"]) < TOL


def test_higgs_frozen_instance(data):
    # a has q' = i sigma2 (a unit quaternion), b has scalar d = 3 and q = I:
    # H2 = q' (diag(d, conj d) - q) = i sigma2 (3I - I) = [[0, 2], [-2, 0]];
    # with b.q' = I and b.c' = 1, H1 = diag(c, conj c)(I - I) = 0
    eye2 = const_jet(np.eye(2))
    eye3 = const_jet(np.eye(3))
    isigma2 = const_jet(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    a = AlgebraElement(c=_const_scalar(2.0), cp=_const_scalar(0.5),
                       q=eye2, qp=isigma2, m=eye3, mp=eye3)
    b = AlgebraElement(c=_const_scalar(3.0), cp=_const_scalar(1.0),
                       q=eye2, qp=eye2, m=eye3, mp=eye3)
    sector = extract_higgs(data, one_form(data, [(a, b)], KIND_YUKAWA))
    assert np.allclose(sector.H2.value, [[0.0, 2.0], [-2.0, 0.0]], atol=1e-12)
    assert np.allclose(sector.H1.value, np.zeros((2, 2)), atol=1e-12)


def test_higgs_rebuild_roundtrip(data, rng):
    sector = extract_higgs(data, one_form(data, _pairs(rng, 3), KIND_YUKAWA))
    assert sector.rebuild_residual < TOL
    assert sector.quaternion_residual < TOL


def test_higgs_selfadjoint_biconditional(data, rng):
    form = random_selfadjoint_yukawa(data, rng)
    sector = extract_higgs(data, form)
    assert selfadjoint_residual(form) < TOL
    assert sector.selfadjoint_residual < TOL
    bump = 1e-2 * random_quaternion_jet(rng, 1.0)
    broken = yukawa_form(data, sector.H1, sector.H2 + bump,
                         sector.H1p, sector.H2p)
    assert selfadjoint_residual(broken) > 1e-4


def test_higgs_extraction_validates(data, rng):
    with pytest.raises(ValueError):
        extract_higgs(data, one_form(data, _pairs(rng, 1), KIND_MAJORANA))
    degenerate = build_spectral_data(FiniteDiracParams(k_nu=0.0))
    form = one_form(degenerate, _pairs(rng, 1), KIND_YUKAWA)
    with pytest.raises(ValueError):
        extract_higgs(degenerate, form)
    with pytest.raises(ValueError):
        yukawa_form(data, random_scalar_jet(rng), random_quaternion_jet(rng),
                    random_quaternion_jet(rng), random_quaternion_jet(rng))


# ---------------------------------------------------------------------------
# singlet sector
# ---------------------------------------------------------------------------

def test_sigma_closed_form(data, rng):
    for _ in range(5):
        a, b = random_element(rng), random_element(rng)
        sector = extract_sigma(data, one_form(data, [(a, b)], KIND_MAJORANA))
        claim = sigma_claim(a, b)
        assert jet_residual(sector.sigma, claim["sigma"]) < TOL
        assert jet_residual(sector.sigma_p, claim["sigma_p"]) < TOL


def test_sigma_frozen_instance(data):
    # sigma = c (d - d') = 2 (3 - 1) = 4; sigma' = c' (d' - d) = 5 (1 - 3) = -10
    a = _scalars_only(2.0, 5.0)
    b = _scalars_only(3.0, 1.0)
    sector = extract_sigma(data, one_form(data, [(a, b)], KIND_MAJORANA))
    assert sector.sigma.scalar() == pytest.approx(4.0, abs=1e-12)
    assert sector.sigma_p.scalar() == pytest.approx(-10.0, abs=1e-12)


def test_sigma_rebuild_roundtrip(data, rng):
    sector = extract_sigma(data, one_form(data, _pairs(rng, 3), KIND_MAJORANA))
    assert sector.rebuild_residual < TOL


def test_sigma_selfadjoint_biconditional(data, rng):
    form = random_selfadjoint_majorana(data, rng)
    assert selfadjoint_residual(form) < TOL
    sector = extract_sigma(data, form)
    broken = majorana_form(data, sector.sigma + _const_scalar(1e-2j),
                           sector.sigma_p)
    assert selfadjoint_residual(broken) > 1e-4


def test_sigma_extraction_validates(data, rng):
    degenerate = build_spectral_data(FiniteDiracParams(k_R=0.0))
    with pytest.raises(ValueError):
        extract_sigma(degenerate,
                      one_form(degenerate, _pairs(rng, 1), KIND_MAJORANA))
    with pytest.raises(ValueError):
        majorana_form(data, random_quaternion_jet(rng), random_scalar_jet(rng))


# ---------------------------------------------------------------------------
# free sector
# ---------------------------------------------------------------------------

def test_free_closed_form(data, rng):
    for _ in range(5):
        a, b = random_element(rng), random_element(rng)
        comps = extract_free_components(one_form(data, [(a, b)], KIND_FREE))
        claim = free_components_claim(a, b)
        assert comps.rebuild_residual < TOL
        for mu in range(4):
            assert abs(comps.c_r[mu] - claim["c_r"][mu]) < TOL
            assert abs(comps.c_l[mu] - claim["c_l"][mu]) < TOL
            assert rel_residual(comps.q_r[mu], claim["q_r"][mu]) < TOL
            assert rel_residual(comps.q_l[mu], claim["q_l"][mu]) < TOL
            assert rel_residual(comps.m_r[mu], claim["m_r"][mu]) < TOL
            assert rel_residual(comps.m_l[mu], claim["m_l"][mu]) < TOL


def test_free_form_validates(data):
    with pytest.raises(ValueError):
        free_form(data, [np.zeros((DIM, DIM))] * 3)


def test_free_field_roundtrip(data, rng):
    couplings = Couplings(g1=0.7, g2=1.3, g3=1.1)
    form = random_selfadjoint_free(data, rng, couplings=couplings)
    sector = gauge_sector(data, form, couplings)
    assert sector.rebuild_residual < TOL
    assert sector.selfadjoint_residual < TOL
    assert sector.physical_residual < TOL
    assert sector.quaternion_residual < TOL
    rebuilt = free_form_from_fields(data, sector.a, sector.B, sector.w,
                                    sector.W_mat, sector.g, sector.V0,
                                    sector.V_mat, couplings=couplings)
    assert max(rel_residual(x, y)
               for x, y in zip(rebuilt.A_mu, form.A_mu)) < TOL


def test_free_selfadjoint_biconditional(data, rng):
    form = random_selfadjoint_free(data, rng)
    assert selfadjoint_residual(form) < TOL
    assert rel_residual(form.raw.value, dagger(form.raw.value)) < TOL
    sector = gauge_sector(data, form)
    # any physical field values give a selfadjoint form ...
    shifted = free_form_from_fields(
        data, sector.a + 1e-2, sector.B, sector.w, sector.W_mat, sector.g,
        sector.V0, sector.V_mat)
    hybrid = free_form(data, [shifted.A_mu[0]] + list(form.A_mu[1:]))
    assert selfadjoint_residual(hybrid) < TOL
    # ... while breaking the c_l = -conj(c_r) relation directly does not
    comps = sector.components
    bad0 = assemble_free_component(comps.c_r[0], comps.c_l[0] + 1e-2,
                                   comps.q_r[0], comps.q_l[0],
                                   comps.m_r[0], comps.m_l[0])
    bad = free_form(data, [bad0] + list(form.A_mu[1:]))
    assert selfadjoint_residual(bad) > 1e-4


# ---------------------------------------------------------------------------
# symmetrisation
# ---------------------------------------------------------------------------

def test_symmetrize_all_kinds(data, rng):
    pairs = _pairs(rng, 1)
    for kind in KINDS:
        form = one_form(data, pairs, kind)
        sym = symmetrize(data, form)
        assert selfadjoint_residual(sym) < TOL
        again = symmetrize(data, sym)
        if kind == KIND_FREE:
            assert max(rel_residual(x, y)
                       for x, y in zip(again.A_mu, sym.A_mu)) < 1e-13
        else:
            assert jet_residual(again.raw, sym.raw) < 1e-13


def test_symmetrize_fixes_selfadjoint(data, rng):
    form = random_selfadjoint_yukawa(data, rng)
    assert jet_residual(symmetrize(data, form).raw, form.raw) < 1e-13


# ---------------------------------------------------------------------------
# unimodularity
# ---------------------------------------------------------------------------

def test_trace_is_proportional_to_defect(data, rng):
    couplings = Couplings(g1=0.9)
    form = random_selfadjoint_free(data, rng, couplings=couplings)
    rep = unimodularity(data, form, couplings)
    assert rep.identity_residual < TOL
    # trace = 4(-i g1 B + 6 i V0) = 24 i (V0 - g1 B / 6) = 24 i defect
    assert np.allclose(rep.trace, 24j * rep.defect, atol=1e-10)


def test_unimodularize_removes_defect(data, rng):
    form = random_selfadjoint_free(data, rng)
    fixed = unimodularize(data, form)
    rep = unimodularity(data, fixed)
    assert float(np.abs(rep.defect).max()) < 1e-12
    assert float(np.abs(rep.trace).max()) < 1e-10
    # only V0 moved: every other field is untouched
    before = gauge_sector(data, form)
    after = gauge_sector(data, fixed)
    assert np.allclose(after.a, before.a, atol=1e-12)
    assert np.allclose(after.B, before.B, atol=1e-12)
    assert np.allclose(after.w, before.w, atol=1e-12)
    assert np.allclose(after.W_mat, before.W_mat, atol=1e-12)
    assert np.allclose(after.g, before.g, atol=1e-12)
    assert np.allclose(after.V_mat, before.V_mat, atol=1e-12)
    assert selfadjoint_residual(fixed) < TOL


def test_unimodular_draw_is_traceless(data, rng):
    form = random_selfadjoint_free(data, rng, unimodular=True)
    rep = unimodularity(data, form)
    assert float(np.abs(rep.trace).max()) < 1e-12


# ---------------------------------------------------------------------------
# covariant operators
# ---------------------------------------------------------------------------

def test_covariant_flavour_blocks(data, rng):
    cd = covariant_dirac(data, random_selfadjoint_yukawa(data, rng))
    assert cd.selfadjoint_residual < TOL
    assert max(cd.details.values()) < TOL


def test_covariant_singlet_blocks(data, rng):
    cd = covariant_dirac(data, random_selfadjoint_majorana(data, rng))
    assert cd.selfadjoint_residual < TOL
    assert max(cd.details.values()) < TOL
    assert cd.sigma_r is not None and cd.sigma_l is not None


def test_covariant_singlet_hermitian_for_any_input(data, rng):
    # the singlet fluctuation is Hermitian even when the one-form is not
    form = majorana_form(data, random_scalar_jet(rng), random_scalar_jet(rng))
    assert selfadjoint_residual(form) > 1e-2  # genuinely non-selfadjoint input
    cd = covariant_dirac(data, form)
    assert cd.selfadjoint_residual < TOL
    assert cd.details["sigma_r_real"] < TOL
    assert cd.details["sigma_l_real"] < TOL


def test_covariant_free_contraction_commutes(data, rng):
    form = one_form(data, _pairs(rng, 1), KIND_FREE)
    cd = covariant_dirac(data, form)
    assert cd.details["conjugation_commutes_with_contraction"] < TOL
    sa = covariant_dirac(data, random_selfadjoint_free(data, rng))
    assert sa.selfadjoint_residual < TOL


# ---------------------------------------------------------------------------
# chirality decomposition of the covariant components
# ---------------------------------------------------------------------------

def test_z_decomposition_residuals(data, rng):
    form = random_selfadjoint_free(data, rng, unimodular=True)
    z = decompose_Z(data, form)
    assert max(z.residuals.values()) < TOL
    sector = gauge_sector(data, form)
    res = z_entry_residuals(z, sector, Couplings())
    assert max(res.values()) < TOL


def test_z_frozen_entry_pure_a_field(data):
    # with only the scalar field a = (1, 0, 0, 0) switched on, the doubled
    # component has right-chirality singlet entry 2a, even part X = 2a on
    # that slot, and vanishing odd part Y
    zeros3 = np.zeros((4, 3, 3))
    zeros2 = np.zeros((4, 2, 2))
    form = free_form_from_fields(data, np.array([1.0, 0, 0, 0]), np.zeros(4),
                                 np.zeros(4), zeros2, zeros3, np.zeros(4),
                                 zeros3)
    z = decompose_Z(data, form)
    assert z.Z_r[0][0, 0] == pytest.approx(2.0, abs=1e-12)
    assert z.X[0][0, 0] == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(z.Y[0], np.zeros((16, 16)), atol=1e-12)


def test_z_frozen_entry_pure_b_field(data):
    # with only B = (1, 0, 0, 0) and the colour trace locked (V0 = g1 B / 6),
    # the sterile slot (0, 0) is uncharged, the charged-lepton slot (1, 1)
    # carries i g1 B, and the even part X vanishes
    g1 = 1.0
    zeros3 = np.zeros((4, 3, 3))
    zeros2 = np.zeros((4, 2, 2))
    b_field = np.array([1.0, 0, 0, 0])
    form = free_form_from_fields(data, np.zeros(4), b_field, np.zeros(4),
                                 zeros2, zeros3, g1 * b_field / 6.0, zeros3)
    z = decompose_Z(data, form)
    assert z.Z_r[0][0, 0] == pytest.approx(0.0, abs=1e-12)
    assert z.Z_r[0][1, 1] == pytest.approx(1j * g1, abs=1e-12)
    assert np.allclose(z.X[0], np.zeros((16, 16)), atol=1e-12)


def test_standard_matrices_antihermitian_and_traceless(data, rng):
    form = random_selfadjoint_free(data, rng, unimodular=True)
    sector = gauge_sector(data, form)
    std = standard_gauge_matrices(sector, Couplings())
    for mu in range(4):
        assert rel_residual(std[mu], -dagger(std[mu])) < TOL
        assert abs(np.trace(std[mu])) < 1e-10


def test_decompose_validates_kind(data, rng):
    with pytest.raises(ValueError):
        decompose_Z(data, one_form(data, _pairs(rng, 1), KIND_YUKAWA))


# ---------------------------------------------------------------------------
# aggregate
# ---------------------------------------------------------------------------

def test_field_content_aggregates(data, rng):
    content = field_content(
        data,
        yukawa=random_selfadjoint_yukawa(data, rng),
        majorana=random_selfadjoint_majorana(data, rng),
        free=random_selfadjoint_free(data, rng),
    )
    assert content.higgs is not None and content.higgs.rebuild_residual < TOL
    assert content.sigma is not None and content.sigma.rebuild_residual < TOL
    assert content.gauge is not None and content.gauge.rebuild_residual < TOL
    empty = field_content(data)
    assert empty.higgs is None and empty.sigma is None and empty.gauge is None
