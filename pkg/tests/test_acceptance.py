"""Acceptance gate: the full verification suite at its default strength.

One test per certified property.  Each test prints a single visible
pass/fail line (bypassing capture) and asserts that every suite check
backing that property passed at the configured tolerance and trial count.
"""

import numpy as np
import pytest

from twistsm.report import ScenarioConfig, run_suite, to_json

SEED = 0
TRIALS = 100
TOL = 1e-10


@pytest.fixture(scope="module")
def suite():
    return run_suite(ScenarioConfig(seed=SEED, trials=TRIALS, tol=TOL))


def _certify(suite, capsys, label: str, ids: tuple[str, ...],
             full_trials: bool = True,
             residual_label: str = "worst residual") -> None:
    by_id = {entry["check_id"]: entry for entry in suite["checks"]}
    entries = []
    for check_id in ids:
        assert check_id in by_id, f"suite is missing check {check_id}"
        entries.append(by_id[check_id])
    ok = all(entry["pass"] for entry in entries)
    worst = max(entry["max_residual"] for entry in entries)
    line = (f"{'PASS' if ok else 'FAIL'}  {label}: "
            f"{len(entries)} checks, {residual_label} {worst:.3e}")
    with capsys.disabled():
        print(line)
    for entry in entries:
        assert entry["pass"], (entry["check_id"], entry)
        if full_trials:
            assert entry["trials"] >= TRIALS, entry["check_id"]


def test_operator_axioms(suite, capsys):
    _certify(suite, capsys, "order-zero and twisted first-order axioms", (
        "axioms.order_zero",
        "axioms.first_order_flavour",
        "axioms.first_order_singlet",
        "axioms.singlet_twist_invariant_commutant",
    ))


def test_flavour_blind_counterexample(suite, capsys):
    _certify(suite, capsys,
             "flavour-blind representation breaks the first-order "
             "condition (and only for twisted draws)", (
                 "counterexample.naive_generic",
                 "counterexample.naive_untwisted_zero",
             ), residual_label="largest violation")


def test_field_extraction_formulas(suite, capsys):
    _certify(suite, capsys,
             "closed-form field extraction and rebuild round-trips", (
                 "higgs.analytic_formulas",
                 "higgs.rebuild_roundtrip",
                 "higgs.selfadjoint_biconditional",
                 "sigma.analytic_formulas",
                 "sigma.rebuild_roundtrip",
                 "sigma.selfadjoint_biconditional",
                 "free.component_formulas",
                 "free.selfadjoint_biconditional",
             ))


def test_untwisted_reduction(suite, capsys):
    _certify(suite, capsys,
             "twist-invariant inputs reduce to the standard gauge content", (
                 "reduction.untwisted_fields_vanish",
                 "reduction.untwisted_standard_matrices",
             ))


def test_unimodularity(suite, capsys):
    _certify(suite, capsys,
             "trace identity and the unimodularity defect biconditional", (
                 "unimodularity.trace_identity",
                 "unimodularity.defect_biconditional",
             ))


def test_covariant_component_table(suite, capsys):
    _certify(suite, capsys,
             "entrywise covariant component table and Hermitian split", (
                 "z_table.block_entries",
                 "z_table.hermiticity",
             ))


def test_gauge_transformation_laws(suite, capsys):
    _certify(suite, capsys,
             "gauge field laws, doublet law, singlet invariance, and the "
             "selfadjointness biconditional", (
                 "gauge.field_laws",
                 "gauge.higgs_doublet_law",
                 "gauge.sigma_invariance",
                 "gauge.selfadjoint_preservation",
             ))


def test_singlet_fluctuation_always_hermitian(suite, capsys):
    _certify(suite, capsys,
             "singlet fluctuation is Hermitian for every one-form input", (
                 "covariant.singlet_selfadjoint_always",
             ))


def test_reports_are_deterministic(capsys):
    config = ScenarioConfig(seed=SEED, trials=2, tol=TOL)
    first = to_json(run_suite(config))
    second = to_json(run_suite(config))
    ok = first == second
    with capsys.disabled():
        print(f"{'PASS' if ok else 'FAIL'}  equal seeds give byte-identical "
              f"reports: {len(first)} bytes")
    assert ok


def test_every_suite_check_passed(suite, capsys):
    summary = suite["summary"]
    with capsys.disabled():
        print(f"{'PASS' if summary['all_passed'] else 'FAIL'}  full suite: "
              f"{summary['checks_passed']}/{summary['checks_total']} checks "
              f"(seed={SEED}, trials={TRIALS}, tol={TOL:g})")
    failed = [e["check_id"] for e in suite["checks"] if not e["pass"]]
    assert summary["all_passed"], failed
    assert summary["checks_total"] == len(suite["checks"])
    assert np.isfinite([e["max_residual"] for e in suite["checks"]]).all()
