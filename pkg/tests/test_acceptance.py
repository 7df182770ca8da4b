"""Acceptance gate: one test per verification check, at the stated tolerances.

Each test drives the corresponding check in ``qetsim.verify`` and prints a
single pass/fail line with the measured worst-case numbers, so a plain
pytest run doubles as the acceptance report.
"""

from __future__ import annotations

import pytest

from qetsim import verify


def _report(result) -> None:
    tag = "PASS" if result.passed else "FAIL"
    print(f"[{tag}] {result.name}: {result.detail} ({result.seconds:.2f} s)")
    assert result.passed, f"{result.name}: {result.detail}"


def test_oracle_matches_closed_forms_on_full_grid():
    _report(verify.check_oracle_agreement(n_max=10, oracle_cap=12))


def test_ground_state_energy_and_overlap():
    _report(verify.check_ground_state(n_max=12))


def test_measurement_leaves_energy_unchanged():
    _report(verify.check_neutrality())


def test_small_system_fixture_expressions():
    _report(verify.check_fixtures())


def test_efficiency_asymptotics_at_strong_coupling():
    _report(verify.check_asymptotics())


def test_optimal_qubit_count_formula_vs_scan():
    _report(verify.check_n_opt())


def test_bell_value_limits_and_monotonicity():
    _report(verify.check_bell())


def test_protocol_invariants():
    _report(verify.check_properties())


def test_emitters_are_deterministic():
    _report(verify.check_determinism())


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
