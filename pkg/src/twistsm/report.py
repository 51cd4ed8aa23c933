"""Scenario configuration, the seeded verification suite, and reports.

The suite certifies every structural identity of the construction as a
numerical residual: the defining conditions of the twisted geometry, the
closed-form parametrisations of the one-form sectors, the extraction
round-trips, the trace condition, the chirality decomposition of the
covariant components, and the full set of gauge transformation laws.  Each
check draws seeded random instances, reports the worst residual observed,
and passes when that residual meets its tolerance (or, for checks whose
content is that a violation *must* appear, when the violation clears a
floor).  Reports serialize to JSON deterministically: identical scenario
and seed produce byte-identical output.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraElement, random_element, random_twist_invariant,
                      represent, twist_flip)
from .fluct import (KIND_FREE, KIND_MAJORANA, KIND_YUKAWA, KINDS, Couplings,
                    assemble_free_component, covariant_dirac, decompose_Z,
                    extract_free_components, extract_higgs, extract_sigma,
                    free_components_claim, free_form, free_form_from_fields,
                    gauge_sector, higgs_claim, majorana_form, one_form,
                    random_selfadjoint_free, random_selfadjoint_majorana,
                    random_selfadjoint_yukawa, selfadjoint_residual,
                    sigma_claim, standard_gauge_matrices, structure_residual,
                    symmetrize, unimodularity, unimodularize, yukawa_form,
                    z_entry_residuals)
from .gauge import (GaugeUnitary, colour_phase_locked_unitary,
                    covariance_residual, field_law_residuals, gauge_transform,
                    group_action_residual, higgs_law_residuals,
                    identity_gauge_unitary, random_gauge_unitary,
                    sigma_invariance_residual)
from .jets import (Jet, const_jet, const_twisted_commutator, jet_residual,
                   random_quaternion_jet, random_scalar_jet, real_scalar_jet,
                   zero_jet)
from .layout import DIM, dagger, rel_residual
from .spectral import (FiniteDiracParams, SpectralData,
                       antiparticle_block_residual, build_spectral_data,
                       first_order_residual, grading_residuals,
                       naive_first_order_violation, order_zero_residual,
                       real_structure_factor_signs, regularity_residual,
                       right_action_sign, spin_connection_residual)

VERSION = "0.1.0"
SCHEMA_VERSION = 1

#: residual floor that a deliberately broken instance must exceed
VIOLATION_FLOOR = 1e-4
#: floor for the first-order defect of the flavour-blind representation
NAIVE_FLOOR = 1e-3
#: tolerance for quantities that vanish identically by construction
EXACT_TOL = 1e-12


class ConfigError(ValueError):
    """Scenario configuration error, with a field-level message."""


# ---------------------------------------------------------------------------
# JSON encoding (complex as [re, im]; matrices row-major; jets {value, d})
# ---------------------------------------------------------------------------

def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_matrix(m: np.ndarray) -> list[list[list[float]]]:
    m = np.asarray(m)
    return [[encode_complex(m[i, j]) for j in range(m.shape[1])]
            for i in range(m.shape[0])]


def encode_real(m) -> object:
    """Real scalars/vectors/matrices as plain floats, row-major."""
    m = np.asarray(m)
    if m.ndim == 0:
        return float(m.real)
    return [encode_real(row) for row in m]


def encode_jet(j: Jet) -> dict:
    return {"value": encode_matrix(j.value),
            "d": [encode_matrix(m) for m in j.d]}


def _fail(path: str, message: str):
    raise ConfigError(f"{path}: {message}")


def decode_complex(obj, path: str) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if (not isinstance(obj, (list, tuple)) or len(obj) != 2
            or not all(isinstance(x, (int, float)) for x in obj)):
        _fail(path, "expected a complex number encoded as [re, im]")
    return complex(obj[0], obj[1])


def decode_matrix(obj, path: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        _fail(path, "expected a non-empty list of rows")
    n = len(obj)
    out = np.zeros((n, n), dtype=np.complex128)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            _fail(f"{path}[{i}]", f"expected a row of {n} entries (square matrix)")
        for j, entry in enumerate(row):
            out[i, j] = decode_complex(entry, f"{path}[{i}][{j}]")
    return out


def decode_jet(obj, path: str) -> Jet:
    if not isinstance(obj, dict) or set(obj) != {"value", "d"}:
        _fail(path, 'expected a jet encoded as {"value": matrix, "d": [4 matrices]}')
    value = decode_matrix(obj["value"], f"{path}.value")
    d = obj["d"]
    if not isinstance(d, list) or len(d) != 4:
        _fail(f"{path}.d", "expected exactly 4 derivative matrices")
    derivs = tuple(decode_matrix(m, f"{path}.d[{mu}]") for mu, m in enumerate(d))
    try:
        return Jet(value, derivs)
    except ValueError as exc:
        _fail(path, str(exc))


_ELEMENT_KEYS = ("c", "cp", "q", "qp", "m", "mp")
_UNITARY_KEYS = ("alpha", "alpha_p", "q", "q_p", "m", "m_p")


def decode_element(obj, path: str) -> AlgebraElement:
    if not isinstance(obj, dict) or set(obj) != set(_ELEMENT_KEYS):
        _fail(path, f"expected an algebra element with keys {list(_ELEMENT_KEYS)}")
    jets = {k: decode_jet(obj[k], f"{path}.{k}") for k in _ELEMENT_KEYS}
    try:
        return AlgebraElement(**jets)
    except ValueError as exc:
        _fail(path, str(exc))


def encode_element(a: AlgebraElement) -> dict:
    return {k: encode_jet(getattr(a, k)) for k in _ELEMENT_KEYS}


def decode_unitary(obj, path: str) -> GaugeUnitary:
    if not isinstance(obj, dict) or set(obj) != set(_UNITARY_KEYS):
        _fail(path, f"expected a gauge unitary with keys {list(_UNITARY_KEYS)}")
    jets = {k: decode_jet(obj[k], f"{path}.{k}") for k in _UNITARY_KEYS}
    try:
        return GaugeUnitary(**jets)
    except ValueError as exc:
        _fail(path, str(exc))


def encode_unitary(u: GaugeUnitary) -> dict:
    return {k: encode_jet(getattr(u, k)) for k in _UNITARY_KEYS}


# ---------------------------------------------------------------------------
# scenario configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Everything a suite run depends on.

    ``vierbein = None`` means the flat frame.  ``elements`` (consecutive
    pairs) and ``unitaries`` are optional explicit instances; checks whose
    statements hold for arbitrary inputs run them ahead of the random draws.
    """

    seed: int = 0
    trials: int = 100
    tol: float = 1e-10
    couplings: Couplings = Couplings()
    params: FiniteDiracParams = FiniteDiracParams()
    vierbein: np.ndarray | None = None
    elements: tuple[AlgebraElement, ...] = ()
    unitaries: tuple[GaugeUnitary, ...] = ()

    def __post_init__(self):
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ConfigError("seed: must be a non-negative integer")
        if not isinstance(self.trials, int) or isinstance(self.trials, bool) or self.trials < 1:
            raise ConfigError("trials: must be an integer >= 1")
        tol = float(self.tol)
        if not np.isfinite(tol) or tol <= 0:
            raise ConfigError("tol: must be positive and finite")
        object.__setattr__(self, "tol", tol)
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "unitaries", tuple(self.unitaries))
        if self.vierbein is not None:
            v = np.asarray(self.vierbein, dtype=np.float64)
            if v.shape != (4, 4):
                raise ConfigError("vierbein: must be a real 4x4 matrix")
            object.__setattr__(self, "vierbein", v)


def scenario_from_dict(obj: dict) -> ScenarioConfig:
    """Validate and decode a scenario dictionary (field-level errors)."""
    if not isinstance(obj, dict):
        raise ConfigError("scenario: expected a JSON object")
    known = {"schema_version", "seed", "trials", "tol", "couplings", "yukawa",
             "vierbein", "elements", "unitaries"}
    unknown = sorted(set(obj) - known)
    if unknown:
        _fail("scenario", f"unknown keys {unknown}; known keys are {sorted(known)}")
    version = obj.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        _fail("scenario.schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")

    kwargs: dict = {}
    if "seed" in obj:
        if not isinstance(obj["seed"], int) or isinstance(obj["seed"], bool):
            _fail("scenario.seed", "must be an integer")
        kwargs["seed"] = obj["seed"]
    if "trials" in obj:
        if not isinstance(obj["trials"], int) or isinstance(obj["trials"], bool):
            _fail("scenario.trials", "must be an integer")
        kwargs["trials"] = obj["trials"]
    if "tol" in obj:
        if not isinstance(obj["tol"], (int, float)) or isinstance(obj["tol"], bool):
            _fail("scenario.tol", "must be a number")
        kwargs["tol"] = float(obj["tol"])
    if "couplings" in obj:
        c = obj["couplings"]
        if not isinstance(c, dict) or not set(c) <= {"g1", "g2", "g3"}:
            _fail("scenario.couplings", "expected an object with keys among g1, g2, g3")
        try:
            kwargs["couplings"] = Couplings(**{k: float(v) for k, v in c.items()})
        except (TypeError, ValueError) as exc:
            _fail("scenario.couplings", str(exc))
    if "yukawa" in obj:
        y = obj["yukawa"]
        names = {"k_nu", "k_e", "k_u", "k_d", "k_R"}
        if not isinstance(y, dict) or not set(y) <= names:
            _fail("scenario.yukawa", f"expected an object with keys among {sorted(names)}")
        try:
            kwargs["params"] = FiniteDiracParams(**{k: float(v) for k, v in y.items()})
        except (TypeError, ValueError) as exc:
            _fail("scenario.yukawa", str(exc))
    if "vierbein" in obj and obj["vierbein"] != "flat":
        v = obj["vierbein"]
        if (not isinstance(v, list) or len(v) != 4
                or not all(isinstance(r, list) and len(r) == 4 for r in v)
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                           for r in v for x in r)):
            _fail("scenario.vierbein", 'expected "flat" or a real 4x4 matrix as nested lists')
        kwargs["vierbein"] = np.asarray(v, dtype=np.float64)
    if "elements" in obj:
        if not isinstance(obj["elements"], list):
            _fail("scenario.elements", "expected a list")
        kwargs["elements"] = tuple(
            decode_element(e, f"scenario.elements[{i}]")
            for i, e in enumerate(obj["elements"]))
    if "unitaries" in obj:
        if not isinstance(obj["unitaries"], list):
            _fail("scenario.unitaries", "expected a list")
        kwargs["unitaries"] = tuple(
            decode_unitary(u, f"scenario.unitaries[{i}]")
            for i, u in enumerate(obj["unitaries"]))
    return ScenarioConfig(**kwargs)


def scenario_to_dict(config: ScenarioConfig) -> dict:
    """Round-trippable dictionary form of a scenario."""
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": config.seed,
        "trials": config.trials,
        "tol": config.tol,
        "couplings": {"g1": config.couplings.g1, "g2": config.couplings.g2,
                      "g3": config.couplings.g3},
        "yukawa": {"k_nu": config.params.k_nu, "k_e": config.params.k_e,
                   "k_u": config.params.k_u, "k_d": config.params.k_d,
                   "k_R": config.params.k_R},
        "vierbein": ("flat" if config.vierbein is None
                     else encode_real(config.vierbein)),
        "elements": [encode_element(a) for a in config.elements],
        "unitaries": [encode_unitary(u) for u in config.unitaries],
    }


# ---------------------------------------------------------------------------
# suite plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RunContext:
    """Shared state of a suite run."""

    config: ScenarioConfig
    data: SpectralData

    def rng(self, check_id: str) -> np.random.Generator:
        """Independent deterministic stream per check (order-insensitive)."""
        return np.random.default_rng(
            [self.config.seed, zlib.crc32(check_id.encode("ascii"))])

    def element_pairs(self, rng: np.random.Generator, count: int) -> list:
        """Explicit element pairs first, random generic pairs after."""
        pairs = []
        explicit = self.config.elements
        for i in range(0, len(explicit) - 1, 2):
            pairs.append((explicit[i], explicit[i + 1]))
        while len(pairs) < count:
            pairs.append((random_element(rng), random_element(rng)))
        return pairs

    def gauge_unitaries(self, rng: np.random.Generator, count: int) -> list:
        """Explicit unitaries first, random generic unitaries after."""
        out = list(self.config.unitaries)
        while len(out) < count:
            out.append(random_gauge_unitary(rng))
        return out


_REGISTRY: list[tuple[str, str]] = []
_CHECK_FNS: dict[str, object] = {}


def _aux_trials(ctx: RunContext) -> int:
    """Trial count for corroborating operator-level checks.

    These are the most expensive checks and are not tied to a stated
    acceptance tolerance-and-count; a quarter of the configured trials keeps
    them meaningful while holding the default full-suite runtime in budget.
    """
    return max(8, ctx.config.trials // 4)


def _check(check_id: str, law: str):
    def deco(fn):
        _REGISTRY.append((check_id, law))
        _CHECK_FNS[check_id] = fn
        return fn
    return deco


def _scaled_element(a: AlgebraElement, s: float) -> AlgebraElement:
    return AlgebraElement(c=a.c * s, cp=a.cp * s, q=a.q * s, qp=a.qp * s,
                          m=a.m * s, mp=a.mp * s)


def _const_scalar(x) -> Jet:
    return const_jet(np.array([[x]], dtype=np.complex128))


# ---------------------------------------------------------------------------
# checks: fixed operators and defining conditions
# ---------------------------------------------------------------------------

@_check("structure.fixed_operators",
        "The grading squares to one, is selfadjoint, restricts to the "
        "chirality sign on spinors, and anticommutes with the gamma matrices "
        "and with both finite Dirac pieces; the gamma matrices close the "
        "Clifford relation of the chosen metric; the real structure is "
        "unitary, squares to minus one, commutes with both finite Dirac "
        "pieces and anticommutes with the grading and the gamma matrices.")
def _fixed_operators(ctx: RunContext, rng) -> dict:
    residuals = grading_residuals(ctx.data)
    return {"trials": 1, "tol": ctx.config.tol,
            "max_residual": max(residuals.values()),
            "details": {k: float(v) for k, v in residuals.items()}}


@_check("structure.real_structure_signs",
        "The two antiunitary factors of the real structure square to plus "
        "one (internal swap) and minus one (spinor part); conjugating the "
        "representation by the real structure exchanges the two doubling "
        "blocks and conjugates their entries with an overall plus sign.")
def _real_structure_signs(ctx: RunContext, rng) -> dict:
    signs = real_structure_factor_signs(ctx.data)
    worst = 0.0
    observed = set()
    for _ in range(ctx.config.trials):
        sign, res = right_action_sign(ctx.data, random_element(rng))
        observed.add(sign)
        worst = max(worst, res)
    consistent = observed == {1}
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst,
            "pass": consistent and worst <= ctx.config.tol,
            "details": {"internal_square_sign": signs["internal"],
                        "spinor_square_sign": signs["spinor"],
                        "right_action_signs": sorted(observed)}}


@_check("axioms.order_zero",
        "The represented algebra commutes with the conjugated right action "
        "of the algebra on itself: [pi(a), J pi(b)* J^-1] = 0 for all "
        "elements a, b, in every jet slot.")
def _order_zero(ctx: RunContext, rng) -> dict:
    pairs = ctx.element_pairs(rng, ctx.config.trials)
    worst = max(order_zero_residual(ctx.data, a, b) for a, b in pairs)
    return {"trials": len(pairs), "tol": ctx.config.tol, "max_residual": worst}


@_check("axioms.first_order_flavour",
        "Twisted first-order condition for the flavour-coupling Dirac "
        "piece: the twisted commutator [D, pi(b)]_rho commutes, in the "
        "conjugate-twisted sense, with the right action of every element.")
def _first_order_flavour(ctx: RunContext, rng) -> dict:
    pairs = ctx.element_pairs(rng, ctx.config.trials)
    worst = max(first_order_residual(ctx.data, ctx.data.DY_op, a, b)
                for a, b in pairs)
    return {"trials": len(pairs), "tol": ctx.config.tol, "max_residual": worst}


@_check("axioms.first_order_singlet",
        "First-order condition for the singlet-coupling Dirac piece: its "
        "twisted commutator [D, pi(b)]_rho commutes plainly with the "
        "conjugated right action of every element (this piece couples only "
        "slots whose left and right actions agree chirality-pairwise, so "
        "the outer bracket carries no twist).")
def _first_order_singlet(ctx: RunContext, rng) -> dict:
    pairs = ctx.element_pairs(rng, ctx.config.trials)
    worst = max(first_order_residual(ctx.data, ctx.data.DM_op, a, b,
                                     twist_outer=False)
                for a, b in pairs)
    return {"trials": len(pairs), "tol": ctx.config.tol, "max_residual": worst}


@_check("axioms.antiparticle_block",
        "A flavour one-form vanishes identically on the antiparticle "
        "diagonal block, so conjugating it by the real structure produces "
        "an operator supported purely on the antiparticle side.")
def _antiparticle_block(ctx: RunContext, rng) -> dict:
    worst = max(antiparticle_block_residual(ctx.data, random_element(rng))
                for _ in range(_aux_trials(ctx)))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("axioms.regularity",
        "Moving a gamma matrix past the representation applies the twist: "
        "gamma^mu pi(a) = pi(rho(a)) gamma^mu for every direction and "
        "element, in every jet slot.")
def _regularity(ctx: RunContext, rng) -> dict:
    worst = max(regularity_residual(ctx.data, random_element(rng))
                for _ in range(_aux_trials(ctx)))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("axioms.spin_connection",
        "Even products of gamma matrices commute with the representation, "
        "so a spin-connection term with arbitrary coefficients drops out of "
        "every twisted commutator with the algebra.")
def _spin_connection(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(_aux_trials(ctx)):
        coeffs = rng.standard_normal((4, 4, 4))
        worst = max(worst, spin_connection_residual(
            ctx.data, random_element(rng), coeffs))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("axioms.singlet_twist_invariant_commutant",
        "The singlet-coupling Dirac piece twist-commutes with every element "
        "whose primed and unprimed slots agree: [D, pi(a)]_rho = 0 whenever "
        "rho fixes a.")
def _singlet_commutant(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        a = random_twist_invariant(rng)
        ra = represent(a)
        comm = const_twisted_commutator(ctx.data.DM_op, ra, twist_flip(ra))
        worst = max(worst, jet_residual(comm, zero_jet(DIM)))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst}


# ---------------------------------------------------------------------------
# checks: the flavour-blind representation violates the first-order condition
# ---------------------------------------------------------------------------

@_check("counterexample.naive_generic",
        "In the flavour-blind alternative representation (colour blocks "
        "acting identically on all flavours) the twisted first-order "
        "condition fails: the defect norm is at least 1e-3 for at least 99 "
        "percent of generic random draws.")
def _naive_generic(ctx: RunContext, rng) -> dict:
    values = [naive_first_order_violation(ctx.data, random_element(rng),
                                          random_element(rng))
              for _ in range(ctx.config.trials)]
    values = np.asarray(values)
    fraction = float(np.mean(values >= NAIVE_FLOOR))
    return {"trials": ctx.config.trials, "floor": NAIVE_FLOOR,
            "max_residual": float(values.max()),
            "min_residual": float(values.min()),
            "pass": fraction >= 0.99,
            "details": {"fraction_at_floor": fraction,
                        "mean_violation": float(values.mean()),
                        "median_violation": float(np.median(values))}}


@_check("counterexample.naive_untwisted_zero",
        "The same first-order defect vanishes identically (construction "
        "precision) whenever every primed slot equals its unprimed partner, "
        "recovering the untwisted first-order condition of the flavour-blind "
        "representation.")
def _naive_untwisted(ctx: RunContext, rng) -> dict:
    worst = max(naive_first_order_violation(ctx.data, random_twist_invariant(rng),
                                            random_twist_invariant(rng))
                for _ in range(ctx.config.trials))
    return {"trials": ctx.config.trials, "tol": EXACT_TOL, "max_residual": worst}


@_check("counterexample.naive_linear_in_b",
        "The first-order defect of the flavour-blind representation is "
        "linear in the inner element: scaling b by two exactly doubles the "
        "defect norm.")
def _naive_linear(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(_aux_trials(ctx)):
        a = random_element(rng)
        b = random_element(rng)
        v1 = naive_first_order_violation(ctx.data, a, b)
        v2 = naive_first_order_violation(ctx.data, a, _scaled_element(b, 2.0))
        worst = max(worst, abs(v2 - 2.0 * v1) / max(1.0, v2))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


# ---------------------------------------------------------------------------
# checks: one-form block patterns and sector parametrisations
# ---------------------------------------------------------------------------

@_check("forms.block_patterns",
        "Each one-form kind occupies exactly its block pattern: flavour "
        "forms are particle-diagonal and flavour-pair-offdiagonal, singlet "
        "forms occupy only the two doubling-offdiagonal singlet slots, and "
        "free components inherit the representation's block pattern with "
        "vanishing derivative slots after contraction.")
def _block_patterns(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(_aux_trials(ctx)):
        pairs = [(random_element(rng), random_element(rng))]
        for kind in KINDS:
            worst = max(worst, structure_residual(one_form(ctx.data, pairs, kind)))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("higgs.analytic_formulas",
        "A single-pair flavour one-form is parametrised in closed form: "
        "H1 = c(p' - d'), H2 = q'(d - p), H1' = c'(p - d), H2' = q(d' - p'), "
        "where scalars act as diag(z, conj z) on each flavour pair.")
def _higgs_formulas(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        a, b = random_element(rng), random_element(rng)
        form = one_form(ctx.data, [(a, b)], KIND_YUKAWA)
        sector = extract_higgs(ctx.data, form)
        claim = higgs_claim(a, b)
        worst = max(worst,
                    jet_residual(sector.H1, claim["H1"]),
                    jet_residual(sector.H2, claim["H2"]),
                    jet_residual(sector.H1p, claim["H1p"]),
                    jet_residual(sector.H2p, claim["H2p"]))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst}


@_check("higgs.rebuild_roundtrip",
        "The four 2x2 blocks extracted from any flavour one-form rebuild it "
        "exactly across all lepto-colour sectors (the colour sectors carry "
        "the same blocks scaled by the quark couplings), and every block is "
        "quaternion-valued in all jet slots.")
def _higgs_rebuild(ctx: RunContext, rng) -> dict:
    worst_rebuild = 0.0
    worst_quat = 0.0
    for _ in range(ctx.config.trials):
        pairs = [(random_element(rng), random_element(rng)) for _ in range(2)]
        sector = extract_higgs(ctx.data, one_form(ctx.data, pairs, KIND_YUKAWA))
        worst_rebuild = max(worst_rebuild, sector.rebuild_residual)
        worst_quat = max(worst_quat, sector.quaternion_residual)
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": max(worst_rebuild, worst_quat),
            "details": {"rebuild": worst_rebuild, "quaternion": worst_quat}}


@_check("higgs.selfadjoint_biconditional",
        "A flavour one-form is selfadjoint exactly when H2 = H1* and "
        "H2' = H1'*; enforcing both relations yields a Hermitian operator "
        "jet, and perturbing either relation by 1e-3 lifts the Hermiticity "
        "residual above 1e-4.")
def _higgs_biconditional(ctx: RunContext, rng) -> dict:
    worst_forward = 0.0
    min_violation = np.inf
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_yukawa(ctx.data, rng)
        sector = extract_higgs(ctx.data, form)
        worst_forward = max(worst_forward, selfadjoint_residual(form),
                            sector.selfadjoint_residual)
        bump = 1e-3 * random_quaternion_jet(rng, 1.0)
        broken_r = yukawa_form(ctx.data, sector.H1, sector.H2 + bump,
                               sector.H1p, sector.H2p)
        broken_l = yukawa_form(ctx.data, sector.H1, sector.H2,
                               sector.H1p, sector.H2p + bump)
        min_violation = min(min_violation, selfadjoint_residual(broken_r),
                            selfadjoint_residual(broken_l))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "floor": VIOLATION_FLOOR,
            "max_residual": worst_forward, "min_residual": float(min_violation),
            "pass": worst_forward <= ctx.config.tol
            and min_violation >= VIOLATION_FLOOR}


@_check("sigma.analytic_formulas",
        "A single-pair singlet one-form carries the scalars "
        "sigma = c(d - d') and sigma' = c'(d' - d); the frozen instance "
        "c = 2, d = 3, d' = 1 gives sigma = 4, and sigma' = -2 c'.")
def _sigma_formulas(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        a, b = random_element(rng), random_element(rng)
        sector = extract_sigma(ctx.data, one_form(ctx.data, [(a, b)], KIND_MAJORANA))
        claim = sigma_claim(a, b)
        worst = max(worst, jet_residual(sector.sigma, claim["sigma"]),
                    jet_residual(sector.sigma_p, claim["sigma_p"]))
    eye_q = const_jet(np.eye(2))
    eye_m = const_jet(np.eye(3))
    a0 = AlgebraElement(c=_const_scalar(2.0), cp=_const_scalar(5.0),
                        q=eye_q, qp=eye_q, m=eye_m, mp=eye_m)
    b0 = AlgebraElement(c=_const_scalar(3.0), cp=_const_scalar(1.0),
                        q=eye_q, qp=eye_q, m=eye_m, mp=eye_m)
    frozen = extract_sigma(ctx.data, one_form(ctx.data, [(a0, b0)], KIND_MAJORANA))
    frozen_res = max(abs(frozen.sigma.scalar() - 4.0),
                     abs(frozen.sigma_p.scalar() - (-10.0)))
    worst = max(worst, frozen_res)
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst,
            "details": {"frozen_instance_residual": float(frozen_res)}}


@_check("sigma.rebuild_roundtrip",
        "The two scalars extracted from any singlet one-form rebuild it "
        "exactly: both doubling-offdiagonal blocks carry the same "
        "diag(sigma, -sigma') pattern scaled by the singlet coupling.")
def _sigma_rebuild(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        pairs = [(random_element(rng), random_element(rng)) for _ in range(2)]
        sector = extract_sigma(ctx.data, one_form(ctx.data, pairs, KIND_MAJORANA))
        worst = max(worst, sector.rebuild_residual)
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst}


@_check("sigma.selfadjoint_biconditional",
        "A singlet one-form is selfadjoint exactly when both scalars are "
        "real in every jet slot; a 1e-3 imaginary perturbation of either "
        "scalar lifts the Hermiticity residual above 1e-4.")
def _sigma_biconditional(ctx: RunContext, rng) -> dict:
    worst_forward = 0.0
    min_violation = np.inf
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_majorana(ctx.data, rng)
        sector = extract_sigma(ctx.data, form)
        worst_forward = max(worst_forward, selfadjoint_residual(form),
                            sector.selfadjoint_residual)
        bump = _const_scalar(1e-3j)
        broken = majorana_form(ctx.data, sector.sigma + bump, sector.sigma_p)
        broken_p = majorana_form(ctx.data, sector.sigma, sector.sigma_p + bump)
        min_violation = min(min_violation, selfadjoint_residual(broken),
                            selfadjoint_residual(broken_p))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "floor": VIOLATION_FLOOR,
            "max_residual": worst_forward, "min_residual": float(min_violation),
            "pass": worst_forward <= ctx.config.tol
            and min_violation >= VIOLATION_FLOOR}


@_check("free.component_formulas",
        "A single-pair free one-form has per-direction components "
        "c^r = c' dd, c^l = c dd', q^r = q dp', q^l = q' dp, m^r = m' dn, "
        "m^l = m dn' (d denotes the derivative of the paired element), and "
        "the six blocks rebuild each component matrix exactly.")
def _free_formulas(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        a, b = random_element(rng), random_element(rng)
        form = one_form(ctx.data, [(a, b)], KIND_FREE)
        comps = extract_free_components(form)
        claim = free_components_claim(a, b)
        worst = max(worst, comps.rebuild_residual)
        for mu in range(4):
            worst = max(
                worst,
                abs(comps.c_r[mu] - claim["c_r"][mu]) / max(1.0, abs(claim["c_r"][mu])),
                abs(comps.c_l[mu] - claim["c_l"][mu]) / max(1.0, abs(claim["c_l"][mu])),
                rel_residual(comps.q_r[mu], claim["q_r"][mu]),
                rel_residual(comps.q_l[mu], claim["q_l"][mu]),
                rel_residual(comps.m_r[mu], claim["m_r"][mu]),
                rel_residual(comps.m_l[mu], claim["m_l"][mu]))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst}


@_check("free.selfadjoint_biconditional",
        "The gamma-contracted free operator is Hermitian exactly when the "
        "twist of each component equals minus its adjoint, i.e. "
        "c^l = -conj(c^r), q^l = -(q^r)*, m^l = -(m^r)*; a 1e-3 violation "
        "of any one relation lifts the componentwise residual above 1e-4.")
def _free_biconditional(ctx: RunContext, rng) -> dict:
    worst_forward = 0.0
    min_violation = np.inf
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings, scale=0.5)
        worst_forward = max(worst_forward, selfadjoint_residual(form),
                            rel_residual(form.raw.value, dagger(form.raw.value)))
        comps = extract_free_components(form)
        bump_q = 1e-3 * np.asarray(random_quaternion_jet(rng, 1.0).value)
        bump_m = 1e-3 * np.eye(3)
        variants = (
            {"c_l": comps.c_l[0] + 1e-3},
            {"q_l": comps.q_l[0] + bump_q},
            {"m_l": comps.m_l[0] + bump_m},
        )
        for bump in variants:
            slot = dict(c_r=comps.c_r[0], c_l=comps.c_l[0], q_r=comps.q_r[0],
                        q_l=comps.q_l[0], m_r=comps.m_r[0], m_l=comps.m_l[0])
            slot.update(bump)
            broken_mu = [assemble_free_component(slot["c_r"], slot["c_l"],
                                                 slot["q_r"], slot["q_l"],
                                                 slot["m_r"], slot["m_l"])]
            broken_mu += [form.A_mu[mu] for mu in range(1, 4)]
            broken = free_form(ctx.data, broken_mu)
            min_violation = min(min_violation, selfadjoint_residual(broken))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "floor": VIOLATION_FLOOR,
            "max_residual": worst_forward, "min_residual": float(min_violation),
            "pass": worst_forward <= ctx.config.tol
            and min_violation >= VIOLATION_FLOOR}


@_check("forms.symmetrize_projection",
        "Symmetrisation projects every one-form of every kind onto a "
        "selfadjoint one of the same kind: the result passes the "
        "selfadjointness test, the projection is idempotent, and it fixes "
        "forms that are already selfadjoint.")
def _symmetrize_projection(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(_aux_trials(ctx)):
        pairs = [(random_element(rng), random_element(rng))]
        for kind in KINDS:
            form = one_form(ctx.data, pairs, kind)
            sym = symmetrize(ctx.data, form)
            sym2 = symmetrize(ctx.data, sym)
            worst = max(worst, selfadjoint_residual(sym),
                        jet_residual(sym2.raw, sym.raw))
        fixed = random_selfadjoint_free(ctx.data, rng,
                                        couplings=ctx.config.couplings)
        refixed = symmetrize(ctx.data, fixed)
        worst = max(worst, max(rel_residual(x, y) for x, y
                               in zip(refixed.A_mu, fixed.A_mu)))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


# ---------------------------------------------------------------------------
# checks: untwisted reduction, unimodularity, chirality decomposition
# ---------------------------------------------------------------------------

@_check("reduction.untwisted_fields_vanish",
        "When every generating element has primed slots equal to unprimed "
        "ones, the selfadjoint part of the free one-form carries no extra "
        "fields: the scalar a, the weak singlet w and the Hermitian colour "
        "obstruction g all vanish to construction precision.")
def _untwisted_vanish(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        pairs = [(random_twist_invariant(rng), random_twist_invariant(rng))
                 for _ in range(2)]
        form = symmetrize(ctx.data, one_form(ctx.data, pairs, KIND_FREE))
        sector = gauge_sector(ctx.data, form, ctx.config.couplings)
        worst = max(worst, float(np.abs(sector.a).max()),
                    float(np.abs(sector.w).max()),
                    float(np.abs(sector.g).max()))
    return {"trials": ctx.config.trials, "tol": EXACT_TOL, "max_residual": worst}


@_check("reduction.untwisted_standard_matrices",
        "For untwisted generating elements, after symmetrisation and trace "
        "removal, the chirality-even part of the covariant components "
        "vanishes, the remaining blocks are antihermitian, and i times the "
        "chirality-odd part equals the standard gauge-field matrices built "
        "from the abelian, weak and colour fields alone.")
def _untwisted_standard(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        pairs = [(random_twist_invariant(rng), random_twist_invariant(rng))
                 for _ in range(2)]
        form = symmetrize(ctx.data, one_form(ctx.data, pairs, KIND_FREE))
        form = unimodularize(ctx.data, form, ctx.config.couplings)
        sector = gauge_sector(ctx.data, form, ctx.config.couplings)
        z = decompose_Z(ctx.data, form)
        std = standard_gauge_matrices(sector, ctx.config.couplings)
        for mu in range(4):
            worst = max(
                worst,
                float(np.linalg.norm(z.X[mu]) / max(1.0, np.linalg.norm(z.Z_r[mu]))),
                rel_residual(z.Z_r[mu], -dagger(z.Z_r[mu])),
                rel_residual(1j * z.Y[mu], std[mu]))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst}


@_check("unimodularity.trace_identity",
        "For every selfadjoint free one-form the doubled-space trace of "
        "each component (with the dotted spinor multiplicity divided out) "
        "equals 4(-i g1 B + 6 i V0): only the two abelian pieces survive "
        "the trace.")
def _trace_identity(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings)
        rep = unimodularity(ctx.data, form, ctx.config.couplings)
        worst = max(worst, rep.identity_residual)
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst}


@_check("unimodularity.defect_biconditional",
        "A selfadjoint free one-form is traceless exactly when "
        "V0 = g1 B / 6 per direction (the trace equals 24i times the "
        "defect): locking V0 makes every trace vanish, and perturbing V0 by "
        "1e-3 forces a trace of magnitude at least 1e-4.")
def _defect_biconditional(ctx: RunContext, rng) -> dict:
    worst_forward = 0.0
    min_violation = np.inf
    g1 = ctx.config.couplings.g1
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings,
                                       unimodular=True)
        rep = unimodularity(ctx.data, form, ctx.config.couplings)
        worst_forward = max(worst_forward, float(np.abs(rep.defect).max()),
                            float(np.abs(rep.trace).max()),
                            rep.identity_residual)
        sector = gauge_sector(ctx.data, form, ctx.config.couplings)
        perturbed = free_form_from_fields(
            ctx.data, sector.a, sector.B, sector.w, sector.W_mat, sector.g,
            g1 * sector.B / 6.0 + 1e-3, sector.V_mat,
            couplings=ctx.config.couplings)
        rep_p = unimodularity(ctx.data, perturbed, ctx.config.couplings)
        min_violation = min(min_violation, float(np.abs(rep_p.trace).min()))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "floor": VIOLATION_FLOOR,
            "max_residual": worst_forward, "min_residual": float(min_violation),
            "pass": worst_forward <= ctx.config.tol
            and min_violation >= VIOLATION_FLOOR}


@_check("z_table.block_entries",
        "Every entry of the doubled covariant component of a selfadjoint "
        "traceless free one-form matches its closed form over the "
        "lepto-colour and flavour indices: lepton singlet entries 2a and "
        "2a + i g1 B, doublet blocks, and colour blocks carrying the "
        "conjugated colour fields.")
def _z_block_entries(ctx: RunContext, rng) -> dict:
    worst = 0.0
    details: dict[str, float] = {}
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings,
                                       unimodular=True)
        z = decompose_Z(ctx.data, form)
        sector = gauge_sector(ctx.data, form, ctx.config.couplings)
        res = z_entry_residuals(z, sector, ctx.config.couplings)
        for name, value in res.items():
            details[name] = max(details.get(name, 0.0), float(value))
        worst = max(worst, max(res.values()))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst, "details": details}


@_check("z_table.hermiticity",
        "The chirality-even and chirality-odd parts X and Y of the doubled "
        "covariant components of a selfadjoint free one-form are both "
        "Hermitian, the dotted spinor index acts trivially, and the "
        "antiparticle block is the entrywise conjugate of the particle "
        "block.")
def _z_hermiticity(ctx: RunContext, rng) -> dict:
    worst = 0.0
    details: dict[str, float] = {}
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings,
                                       unimodular=True)
        z = decompose_Z(ctx.data, form)
        for name, value in z.residuals.items():
            details[name] = max(details.get(name, 0.0), float(value))
        worst = max(worst, max(z.residuals.values()))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst, "details": details}


# ---------------------------------------------------------------------------
# checks: covariant operators
# ---------------------------------------------------------------------------

@_check("covariant.flavour_blocks",
        "Fluctuating the flavour Dirac piece by a selfadjoint flavour "
        "one-form keeps the operator Hermitian and block-structured: no "
        "doubling-offdiagonal leakage, the antiparticle block is the "
        "conjugate of the particle block, and the conjugated one-form "
        "avoids the particle block entirely.")
def _covariant_flavour(ctx: RunContext, rng) -> dict:
    worst = 0.0
    details: dict[str, float] = {}
    for _ in range(_aux_trials(ctx)):
        form = random_selfadjoint_yukawa(ctx.data, rng)
        cd = covariant_dirac(ctx.data, form)
        worst = max(worst, cd.selfadjoint_residual, max(cd.details.values()))
        for name, value in cd.details.items():
            details[name] = max(details.get(name, 0.0), float(value))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst, "details": details}


@_check("covariant.singlet_blocks",
        "Fluctuating the singlet Dirac piece by a selfadjoint singlet "
        "one-form produces the expected block: the original singlet entry "
        "plus diag(sigma_r, sigma_l) on the chirality factor, with "
        "sigma_r = sigma + conj(sigma) and sigma_l = -(sigma' + conj(sigma')) "
        "both real.")
def _covariant_singlet(ctx: RunContext, rng) -> dict:
    worst = 0.0
    details: dict[str, float] = {}
    for _ in range(_aux_trials(ctx)):
        form = random_selfadjoint_majorana(ctx.data, rng)
        cd = covariant_dirac(ctx.data, form)
        worst = max(worst, cd.selfadjoint_residual, max(cd.details.values()))
        for name, value in cd.details.items():
            details[name] = max(details.get(name, 0.0), float(value))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst, "details": details}


@_check("covariant.singlet_selfadjoint_always",
        "The fluctuated singlet operator is Hermitian no matter whether the "
        "singlet one-form itself is: the conjugated copy always restores "
        "the balance, and the two chiral scalars it carries stay real.")
def _covariant_singlet_always(ctx: RunContext, rng) -> dict:
    worst = 0.0
    min_input = np.inf
    for _ in range(ctx.config.trials):
        sigma = random_scalar_jet(rng)
        sigma_p = random_scalar_jet(rng)
        form = majorana_form(ctx.data, sigma, sigma_p)
        min_input = min(min_input, selfadjoint_residual(form))
        cd = covariant_dirac(ctx.data, form)
        worst = max(worst, cd.selfadjoint_residual,
                    cd.details["sigma_r_real"], cd.details["sigma_l_real"])
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst,
            "details": {"min_input_selfadjoint_residual": float(min_input)}}


@_check("covariant.free_blocks",
        "For the free one-form, conjugating before or after the gamma "
        "contraction agrees: the doubled operator is the contraction of the "
        "doubled components, and it is Hermitian for selfadjoint input.")
def _covariant_free(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(_aux_trials(ctx)):
        pair_form = one_form(
            ctx.data, [(random_element(rng), random_element(rng))], KIND_FREE)
        cd = covariant_dirac(ctx.data, pair_form)
        worst = max(worst, cd.details["conjugation_commutes_with_contraction"])
        sa_form = random_selfadjoint_free(ctx.data, rng,
                                          couplings=ctx.config.couplings)
        cd_sa = covariant_dirac(ctx.data, sa_form)
        worst = max(worst, cd_sa.selfadjoint_residual)
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


# ---------------------------------------------------------------------------
# checks: gauge transformations
# ---------------------------------------------------------------------------

@_check("gauge.identity_fixes_forms",
        "The identity gauge unitary fixes every one-form of every kind.")
def _identity_fixes(ctx: RunContext, rng) -> dict:
    u = identity_gauge_unitary()
    worst = 0.0
    for _ in range(_aux_trials(ctx)):
        pairs = [(random_element(rng), random_element(rng))]
        for kind in KINDS:
            form = one_form(ctx.data, pairs, kind)
            moved = gauge_transform(ctx.data, form, u)
            if kind == KIND_FREE:
                worst = max(worst, max(rel_residual(x, y) for x, y
                                       in zip(moved.A_mu, form.A_mu)))
            else:
                worst = max(worst, jet_residual(moved.raw, form.raw))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("gauge.group_action",
        "Gauge transformation is a group action on one-forms of every "
        "kind: transforming by u then v equals transforming by the product "
        "v u, for twist-invariant and for fully generic unitaries alike.")
def _group_action(ctx: RunContext, rng) -> dict:
    worst = 0.0
    unitaries = ctx.gauge_unitaries(rng, 0)
    for i in range(_aux_trials(ctx)):
        kind = KINDS[i % 3]
        form = one_form(ctx.data,
                        [(random_element(rng), random_element(rng))], kind)
        twist_invariant = (i % 2 == 0)
        if unitaries:
            u = unitaries[i % len(unitaries)] if i % 4 == 3 else \
                random_gauge_unitary(rng, twist_invariant=twist_invariant)
        else:
            u = random_gauge_unitary(rng, twist_invariant=twist_invariant)
        v = random_gauge_unitary(rng, twist_invariant=twist_invariant)
        worst = max(worst, group_action_residual(ctx.data, form, u, v))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("gauge.zero_singlet_transform",
        "The zero singlet one-form transforms to zero under twist-invariant "
        "unitaries: the inhomogeneous term vanishes because the singlet "
        "Dirac piece twist-commutes with twist-invariant elements.")
def _zero_singlet(ctx: RunContext, rng) -> dict:
    zero_scalar = _const_scalar(0.0)
    zero_form = majorana_form(ctx.data, zero_scalar, zero_scalar)
    worst = 0.0
    for _ in range(_aux_trials(ctx)):
        u = random_gauge_unitary(rng, twist_invariant=True)
        moved = gauge_transform(ctx.data, zero_form, u)
        worst = max(worst, jet_residual(moved.raw, zero_jet(DIM)))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("gauge.covariance_flavour",
        "Conjugating the fluctuated flavour operator by the doubled action "
        "of a unitary (twisted on the left) reproduces the fluctuation by "
        "the transformed one-form: Ad(rho(u)) D_A Ad(u*) = D_(A^u).")
def _covariance_flavour(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for i in range(_aux_trials(ctx)):
        form = one_form(ctx.data,
                        [(random_element(rng), random_element(rng))], KIND_YUKAWA)
        u = random_gauge_unitary(rng, twist_invariant=(i % 2 == 0))
        worst = max(worst, covariance_residual(ctx.data, form, u))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("gauge.covariance_singlet",
        "Operator covariance for the fluctuated singlet operator under "
        "twist-invariant unitaries: Ad(u) D_A Ad(u*) = D_(A^u).  (The "
        "singlet piece commutes plainly, not twisted, with conjugated "
        "right actions, so covariance under a unitary with independent "
        "primed components is not available; the invariance of the singlet "
        "one-form itself is certified separately.)")
def _covariance_singlet(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(_aux_trials(ctx)):
        form = one_form(ctx.data,
                        [(random_element(rng), random_element(rng))], KIND_MAJORANA)
        u = random_gauge_unitary(rng, twist_invariant=True)
        worst = max(worst, covariance_residual(ctx.data, form, u))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("gauge.selfadjoint_preservation",
        "A gauge transformation preserves selfadjointness of every "
        "selfadjoint traceless free one-form exactly when the unitary is "
        "twist-invariant up to a constant phase offset; for a generic "
        "unitary with independent primed data, at least one selfadjoint "
        "input acquires a selfadjointness residual above 1e-4.")
def _preservation(ctx: RunContext, rng) -> dict:
    worst_forward = 0.0
    witness = 0.0
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings,
                                       unimodular=True)
        u = random_gauge_unitary(rng, twist_invariant=True,
                                 phase_offset=float(rng.standard_normal()))
        moved = gauge_transform(ctx.data, form, u)
        worst_forward = max(worst_forward, selfadjoint_residual(moved))
        u_gen = random_gauge_unitary(rng)
        moved_gen = gauge_transform(ctx.data, form, u_gen)
        witness = max(witness, selfadjoint_residual(moved_gen))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "floor": VIOLATION_FLOOR,
            "max_residual": worst_forward,
            "pass": worst_forward <= ctx.config.tol and witness >= VIOLATION_FLOOR,
            "details": {"witness_violation": float(witness)}}


@_check("gauge.field_laws",
        "Under a twist-invariant unitary the extracted fields of a "
        "selfadjoint traceless free one-form transform as gauge fields: "
        "B shifts by (2/g1) d(alpha); the weak triplet conjugates by the "
        "quaternion with inhomogeneous term (2i/g2) q d(q*); the colour "
        "octet conjugates by the determinant-free part n of the colour "
        "unitary with term -(2i/g3) n d(n*); V0 shifts by minus the colour "
        "phase derivative; a, w and the colour obstruction g conjugate "
        "homogeneously (a and w are invariant).")
def _field_laws(ctx: RunContext, rng) -> dict:
    worst = 0.0
    details: dict[str, float] = {}
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings,
                                       unimodular=True)
        u = random_gauge_unitary(rng, twist_invariant=True)
        res = field_law_residuals(ctx.data, form, u, ctx.config.couplings)
        for name, value in res.items():
            details[name] = max(details.get(name, 0.0), float(value))
        worst = max(worst, max(res.values()))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst, "details": details}


@_check("gauge.pure_phase_shift",
        "A pure-phase unitary (unit quaternions and colour blocks) shifts "
        "the scalar component by minus i times the phase derivative, "
        "leaves a unchanged, and shifts B by (2/g1) d(alpha).")
def _pure_phase(ctx: RunContext, rng) -> dict:
    eye_q = const_jet(np.eye(2))
    eye_m = const_jet(np.eye(3))
    worst = 0.0
    g1 = ctx.config.couplings.g1
    for _ in range(_aux_trials(ctx)):
        alpha = real_scalar_jet(rng)
        u = GaugeUnitary(alpha=alpha, alpha_p=alpha, q=eye_q, q_p=eye_q,
                         m=eye_m, m_p=eye_m)
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings)
        before = gauge_sector(ctx.data, form, ctx.config.couplings)
        after = gauge_sector(ctx.data, gauge_transform(ctx.data, form, u),
                             ctx.config.couplings)
        for mu in range(4):
            da = float(alpha.d[mu][0, 0].real)
            c_claim = before.components.c_r[mu] - 1j * da
            worst = max(
                worst,
                abs(after.components.c_r[mu] - c_claim) / max(1.0, abs(c_claim)),
                abs(after.a[mu] - before.a[mu]) / max(1.0, abs(before.a[mu])),
                abs(after.B[mu] - before.B[mu] - 2.0 * da / g1)
                / max(1.0, abs(before.B[mu])))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "max_residual": worst}


@_check("gauge.su3_phase_lock",
        "The trace defect of a selfadjoint free one-form is invariant under "
        "a twist-invariant unitary exactly when the phase of the colour "
        "block is locked to minus a third of the abelian angle (the "
        "reduction of the colour group from U(3) to SU(3)); a free colour "
        "phase moves the defect by more than 1e-4 for generic draws.")
def _su3_lock(ctx: RunContext, rng) -> dict:
    worst_locked = 0.0
    witness = 0.0
    for _ in range(_aux_trials(ctx)):
        form = random_selfadjoint_free(ctx.data, rng,
                                       couplings=ctx.config.couplings)
        before = unimodularity(ctx.data, form, ctx.config.couplings).defect
        locked = colour_phase_locked_unitary(rng)
        after = unimodularity(ctx.data, gauge_transform(ctx.data, form, locked),
                              ctx.config.couplings).defect
        worst_locked = max(worst_locked, float(np.abs(after - before).max()))
        free_phase = random_gauge_unitary(rng, twist_invariant=True)
        after_free = unimodularity(
            ctx.data, gauge_transform(ctx.data, form, free_phase),
            ctx.config.couplings).defect
        witness = max(witness, float(np.abs(after_free - before).max()))
    return {"trials": _aux_trials(ctx), "tol": ctx.config.tol,
            "floor": VIOLATION_FLOOR,
            "max_residual": worst_locked,
            "pass": worst_locked <= ctx.config.tol and witness >= VIOLATION_FLOOR,
            "details": {"witness_violation": float(witness)}}


@_check("gauge.higgs_doublet_law",
        "Under a twist-invariant unitary the two scalar doublets of a "
        "selfadjoint flavour one-form transform identically and affinely: "
        "H + 1 conjugates to q (H + 1) diag(exp(-i alpha), exp(i alpha)), "
        "equivalently the first column of H + 1 is multiplied by "
        "exp(-i alpha) q.")
def _higgs_law(ctx: RunContext, rng) -> dict:
    worst = 0.0
    details: dict[str, float] = {}
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_yukawa(ctx.data, rng)
        u = random_gauge_unitary(rng, twist_invariant=True)
        res = higgs_law_residuals(ctx.data, form, u)
        for name, value in res.items():
            details[name] = max(details.get(name, 0.0), float(value))
        worst = max(worst, max(res.values()))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst, "details": details}


@_check("gauge.sigma_invariance",
        "Singlet one-forms are pointwise invariant under twist-invariant "
        "unitaries: the transformed form equals the original, and the two "
        "chiral scalars it carries are unchanged.")
def _sigma_invariance(ctx: RunContext, rng) -> dict:
    worst = 0.0
    for _ in range(ctx.config.trials):
        form = random_selfadjoint_majorana(ctx.data, rng)
        u = random_gauge_unitary(rng, twist_invariant=True)
        worst = max(worst, sigma_invariance_residual(ctx.data, form, u))
        before = extract_sigma(ctx.data, form)
        after = extract_sigma(ctx.data, gauge_transform(ctx.data, form, u))
        worst = max(worst, jet_residual(after.sigma, before.sigma),
                    jet_residual(after.sigma_p, before.sigma_p))
    return {"trials": ctx.config.trials, "tol": ctx.config.tol,
            "max_residual": worst}


# ---------------------------------------------------------------------------
# suite execution and reports
# ---------------------------------------------------------------------------

def run_suite(config: ScenarioConfig) -> dict:
    """Run every check and assemble the deterministic report dictionary."""
    data = build_spectral_data(config.params, config.vierbein)
    ctx = RunContext(config=config, data=data)
    entries = []
    for check_id, law in _REGISTRY:
        outcome = _CHECK_FNS[check_id](ctx, ctx.rng(check_id))
        entry = {
            "check_id": check_id,
            "law": law,
            "trials": int(outcome["trials"]),
            "max_residual": float(outcome["max_residual"]),
        }
        if "tol" in outcome:
            entry["tol"] = float(outcome["tol"])
        if "floor" in outcome:
            entry["floor"] = float(outcome["floor"])
        if "min_residual" in outcome:
            entry["min_residual"] = float(outcome["min_residual"])
        if "pass" in outcome:
            entry["pass"] = bool(outcome["pass"])
        else:
            entry["pass"] = entry["max_residual"] <= entry["tol"]
        if "details" in outcome:
            entry["details"] = outcome["details"]
        entries.append(entry)
    entries.sort(key=lambda e: e["check_id"])
    passed = sum(1 for e in entries if e["pass"])
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "tool": {"name": "twistsm", "version": VERSION},
        "scenario": scenario_to_dict(config),
        "checks": entries,
        "summary": {
            "checks_total": len(entries),
            "checks_passed": passed,
            "checks_failed": len(entries) - passed,
            "all_passed": passed == len(entries),
        },
    }


def check_ids() -> tuple[str, ...]:
    """All registered check identifiers, in report order."""
    return tuple(sorted(check_id for check_id, _ in _REGISTRY))


# ---------------------------------------------------------------------------
# field dumps
# ---------------------------------------------------------------------------

def field_dump(config: ScenarioConfig) -> dict:
    """Build one one-form per kind, project onto the selfadjoint part,
    extract every field, and serialize the result.

    Explicit scenario elements are consumed as consecutive generating
    pairs; otherwise a single random pair is drawn from the seed.
    """
    data = build_spectral_data(config.params, config.vierbein)
    if config.elements:
        if len(config.elements) % 2 != 0:
            raise ConfigError(
                "scenario.elements: need an even number of elements "
                "(consecutive generating pairs)")
        pairs = [(config.elements[i], config.elements[i + 1])
                 for i in range(0, len(config.elements), 2)]
    else:
        rng = np.random.default_rng([config.seed, zlib.crc32(b"fields")])
        pairs = [(random_element(rng), random_element(rng))]

    flavour = symmetrize(data, one_form(data, pairs, KIND_YUKAWA))
    singlet = symmetrize(data, one_form(data, pairs, KIND_MAJORANA))
    free = symmetrize(data, one_form(data, pairs, KIND_FREE))

    higgs = extract_higgs(data, flavour)
    sigma = extract_sigma(data, singlet)
    sector = gauge_sector(data, free, config.couplings)
    z = decompose_Z(data, free)
    uni = unimodularity(data, free, config.couplings)

    h_mean = (higgs.H_r + higgs.H_l) * 0.5
    sigma_r = sigma.sigma + sigma.sigma.conj()
    sigma_l = -(sigma.sigma_p + sigma.sigma_p.conj())

    return {
        "schema_version": SCHEMA_VERSION,
        "command": "fields",
        "tool": {"name": "twistsm", "version": VERSION},
        "scenario": scenario_to_dict(config),
        "note": ("fields are extracted from the selfadjoint part of each "
                 "one-form built from the generating pairs"),
        "fields": {
            "higgs": {
                "H1": encode_jet(higgs.H1),
                "H2": encode_jet(higgs.H2),
                "H1p": encode_jet(higgs.H1p),
                "H2p": encode_jet(higgs.H2p),
                "H_r": encode_jet(higgs.H_r),
                "H_l": encode_jet(higgs.H_l),
                "h_mean": encode_jet(h_mean),
                "rebuild_residual": float(higgs.rebuild_residual),
                "selfadjoint_residual": float(higgs.selfadjoint_residual),
            },
            "sigma": {
                "sigma": encode_jet(sigma.sigma),
                "sigma_p": encode_jet(sigma.sigma_p),
                "sigma_r": encode_jet(sigma_r),
                "sigma_l": encode_jet(sigma_l),
                "rebuild_residual": float(sigma.rebuild_residual),
                "selfadjoint_residual": float(sigma.selfadjoint_residual),
            },
            "gauge": {
                "a": encode_real(sector.a),
                "B": encode_real(sector.B),
                "w": encode_real(sector.w),
                "W": encode_real(sector.W),
                "g": [encode_matrix(sector.g[mu]) for mu in range(4)],
                "V0": encode_real(sector.V0),
                "V": encode_real(sector.V),
                "c_r": [encode_complex(z_) for z_ in sector.components.c_r],
                "c_l": [encode_complex(z_) for z_ in sector.components.c_l],
                "X": [encode_matrix(z.X[mu]) for mu in range(4)],
                "Y": [encode_matrix(z.Y[mu]) for mu in range(4)],
                "trace": [encode_complex(t) for t in uni.trace],
                "unimodularity_defect": encode_real(uni.defect),
                "rebuild_residual": float(sector.rebuild_residual),
                "selfadjoint_residual": float(sector.selfadjoint_residual),
                "physical_residual": float(sector.physical_residual),
            },
        },
    }


# ---------------------------------------------------------------------------
# violation demo
# ---------------------------------------------------------------------------

def naive_violation_demo(config: ScenarioConfig) -> dict:
    """Distribution of the first-order defect of the flavour-blind
    representation: generic draws versus untwisted (primed = unprimed)
    control draws."""
    data = build_spectral_data(config.params, config.vierbein)
    rng = np.random.default_rng([config.seed, zlib.crc32(b"demo")])
    generic = [naive_first_order_violation(data, random_element(rng),
                                           random_element(rng))
               for _ in range(config.trials)]
    control = [naive_first_order_violation(data, random_twist_invariant(rng),
                                           random_twist_invariant(rng))
               for _ in range(config.trials)]
    generic_arr = np.asarray(generic)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "demo",
        "topic": "naive-first-order",
        "tool": {"name": "twistsm", "version": VERSION},
        "scenario": scenario_to_dict(config),
        "law": ("the flavour-blind representation violates the twisted "
                "first-order condition for generic elements and satisfies "
                "it exactly when primed equals unprimed"),
        "generic": {
            "values": [float(v) for v in generic],
            "min": float(generic_arr.min()),
            "max": float(generic_arr.max()),
            "mean": float(generic_arr.mean()),
            "median": float(np.median(generic_arr)),
            "fraction_at_floor": float(np.mean(generic_arr >= NAIVE_FLOOR)),
            "floor": NAIVE_FLOOR,
        },
        "untwisted_control": {
            "max": float(max(control)),
        },
    }


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def to_json(report: dict) -> str:
    """Deterministic JSON rendering (sorted keys, no timestamps)."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def to_text(report: dict) -> str:
    """Human-readable rendering: one line per check, or a field summary."""
    lines: list[str] = []
    command = report.get("command")
    if command == "verify":
        for entry in report["checks"]:
            status = "PASS" if entry["pass"] else "FAIL"
            gates = []
            if "tol" in entry:
                gates.append(f"tol={entry['tol']:.1e}")
            if "floor" in entry:
                gates.append(f"floor={entry['floor']:.1e}")
            lines.append(f"{status}  {entry['check_id']:<42} "
                         f"max_residual={entry['max_residual']:.3e}  "
                         f"{'  '.join(gates)}  trials={entry['trials']}")
        summary = report["summary"]
        scenario = report["scenario"]
        verdict = "PASSED" if summary["all_passed"] else "FAILED"
        lines.append(f"{verdict}: {summary['checks_passed']}/"
                     f"{summary['checks_total']} checks "
                     f"(seed={scenario['seed']}, trials={scenario['trials']}, "
                     f"tol={scenario['tol']:.1e})")
    elif command == "fields":
        fields = report["fields"]
        lines.append("fields extracted from the selfadjoint one-form parts:")
        lines.append(f"  higgs: rebuild_residual="
                     f"{fields['higgs']['rebuild_residual']:.3e}")
        lines.append(f"  sigma: rebuild_residual="
                     f"{fields['sigma']['rebuild_residual']:.3e}")
        gauge = fields["gauge"]
        for name in ("a", "B", "w", "V0"):
            values = ", ".join(f"{v:.6g}" for v in gauge[name])
            lines.append(f"  {name} = [{values}]")
        defect = ", ".join(f"{v:.6g}" for v in gauge["unimodularity_defect"])
        lines.append(f"  unimodularity defect = [{defect}]")
        lines.append("  (full matrices in the JSON report)")
    elif command == "demo":
        generic = report["generic"]
        lines.append("first-order defect of the flavour-blind representation:")
        lines.append(f"  generic draws ({len(generic['values'])}): "
                     f"min={generic['min']:.3e} median={generic['median']:.3e} "
                     f"max={generic['max']:.3e}")
        lines.append(f"  fraction at least {generic['floor']:.0e}: "
                     f"{generic['fraction_at_floor']:.2%}")
        lines.append(f"  untwisted control max: "
                     f"{report['untwisted_control']['max']:.3e}")
    else:  # pragma: no cover - defensive
        lines.append(to_json(report).rstrip("\n"))
    return "\n".join(lines) + "\n"
