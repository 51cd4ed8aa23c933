"""Twisted spectral geometry of the Standard Model fiber at a point.

The package builds the doubled 128-dimensional fiber Hilbert space, the
twisted representation of the algebra C + H + H' + M3(C) + M3(C)', the
grading, the real structure, and the Dirac pieces; computes twisted
fluctuations through first-order jets; extracts the physical fields they
carry (two scalar doublets per chirality, two real singlet scalars, the
abelian, weak and colour gauge fields); applies gauge transformations;
and certifies every structural identity numerically through a seeded,
deterministic verification suite.
"""

from .algebra import (AlgebraElement, adjoint, identity_element, mul,
                      random_element, random_twist_invariant, represent,
                      represent_naive, twist_invariance_residual, twist_rho)
from .fluct import (KIND_FREE, KIND_MAJORANA, KIND_YUKAWA, KINDS, Couplings,
                    CovariantDirac, FieldContent, FreeComponents, GaugeSector,
                    HiggsSector, SigmaSector, TwistedOneForm,
                    UnimodularityReport, ZDecomposition, covariant_dirac,
                    decompose_Z, extract_free_components, extract_higgs,
                    extract_sigma, field_content, free_components_claim,
                    free_form, free_form_from_fields, gauge_sector,
                    higgs_claim, majorana_form, one_form,
                    random_selfadjoint_free, random_selfadjoint_majorana,
                    random_selfadjoint_yukawa, selfadjoint_residual,
                    sigma_claim, standard_gauge_matrices, structure_residual,
                    symmetrize, unimodularity, unimodularize, yukawa_form,
                    z_entry_residuals)
from .gauge import (GaugeUnitary, adjoint_action, colour_phase_locked_unitary,
                    covariance_residual, field_law_residuals, gauge_transform,
                    group_action_residual, higgs_law_residuals,
                    identity_gauge_unitary, random_gauge_unitary,
                    sigma_invariance_residual, unitary_product)
from .jets import (Jet, const_jet, jet_norm, jet_residual, random_jet,
                   random_quaternion_jet, random_scalar_jet,
                   random_unitary_jet, zero_jet)
from .layout import (DIM, FACTORS, BasisLayout, blockdiag, dagger, embed,
                     kron, rel_residual, twisted_commutator)
from .report import (SCHEMA_VERSION, VERSION, ConfigError, ScenarioConfig,
                     check_ids, field_dump, naive_violation_demo, run_suite,
                     scenario_from_dict, scenario_to_dict, to_json, to_text)
from .spectral import (FiniteDiracParams, SpectralData, build_spectral_data,
                       first_order_residual, grading_residuals,
                       naive_first_order_violation, order_zero_residual,
                       regularity_residual)

__version__ = VERSION
