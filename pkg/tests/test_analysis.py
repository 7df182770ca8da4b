"""Bell values, optimal qubit counts, sweep grids, and the specialization fixtures."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qetsim import analysis as an
from qetsim import closedform as cf
from qetsim.errors import (
    AngleOutOfRange,
    BellUndefinedForN2,
    InvalidRange,
    NonPositiveRatio,
    UnknownFigure,
)
from qetsim.model import ModelParams, Partition


# ---------------------------------------------------------------------------
# Bell value
# ---------------------------------------------------------------------------

def test_bell_value_frozen_points():
    r = an.bell_value_ground_state(ModelParams(3, 1.0, 1.0))
    assert r.b_value == pytest.approx(math.sqrt(17.0 / 13.0), rel=1e-15)
    assert r.b_value == pytest.approx(1.1435437497937313, rel=1e-15)
    assert r.violates
    assert r.saturation_value == math.sqrt(2.0)

    r8 = an.bell_value_ground_state(ModelParams(8, 1.0, 0.5))
    assert r8.b_value == pytest.approx(1.403292830891247, rel=1e-14)
    assert r8.saturation_value == 8.0


def test_bell_value_product_state_boundary_is_exact():
    r = an.bell_value_ground_state(ModelParams(5, 1.0, 0.0))
    assert r.b_value == 1.0  # hypot puts c = Nh exactly, so b = sqrt(1) exactly
    assert not r.violates


def test_bell_value_saturates_at_strong_coupling():
    for n in (3, 8, 10):
        r = an.bell_value_ground_state(ModelParams(n, 1.0, 1e8))
        assert r.saturation_value - r.b_value <= 1e-6
        assert r.b_value <= r.saturation_value


def test_bell_value_needs_three_qubits():
    with pytest.raises(BellUndefinedForN2):
        an.bell_value_ground_state(ModelParams(2, 1.0, 1.0))
    with pytest.raises(BellUndefinedForN2):
        an.bell_value_ghz_angle(2, 0.2)


def test_bell_ghz_angle_endpoints_and_range():
    assert an.bell_value_ghz_angle(3, 0.0) == 1.0
    assert an.bell_value_ghz_angle(3, math.pi / 4.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert an.bell_value_ghz_angle(10, math.pi / 4.0) == pytest.approx(16.0, rel=1e-14)
    with pytest.raises(AngleOutOfRange):
        an.bell_value_ghz_angle(3, -0.1)
    with pytest.raises(AngleOutOfRange):
        an.bell_value_ghz_angle(3, 1.0)


def test_bell_ground_state_matches_ghz_angle_form():
    for n, k in [(3, 1.0), (4, 0.2), (7, 30.0)]:
        p = ModelParams(n, 1.0, k)
        alpha = 0.5 * math.asin(2.0 * k / p.c)
        assert an.bell_value_ground_state(p).b_value == pytest.approx(
            an.bell_value_ghz_angle(n, alpha), rel=1e-14
        )


def test_bell_value_grows_with_coupling():
    values = [an.bell_value_ground_state(ModelParams(6, 1.0, k)).b_value
              for k in np.logspace(-3, 3, 61)]
    assert all(b2 >= b1 for b1, b2 in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# Optimal qubit count
# ---------------------------------------------------------------------------

def test_n_opt_frozen_values():
    r = an.n_opt(10.0)
    assert r.n_opt_real == pytest.approx(9.84095901841949, rel=1e-13)
    assert r.n_opt_int == 10
    assert r.eta_at_opt == pytest.approx(0.4196918171640247, rel=1e-13)
    assert r.c_aux == pytest.approx(86.24914232851536, rel=1e-13)

    assert an.n_opt(100.0).n_opt_int == 44
    assert an.n_opt(100.0).n_opt_real == pytest.approx(43.60047804038743, rel=1e-13)
    assert an.n_opt(1000.0).n_opt_int == 201
    assert an.n_opt(1.0).n_opt_int == 3


def test_n_opt_rounding_stays_adjacent():
    for x in (0.3, 1.0, 2.5, 10.0, 47.0, 300.0):
        r = an.n_opt(x)
        assert r.n_opt_int >= 2
        assert abs(r.n_opt_int - r.n_opt_real) <= 1.0


def test_n_opt_agrees_with_exhaustive_scan():
    for x, n_max in [(10.0, 1000), (100.0, 1000), (1000.0, 5000)]:
        best_n, best_eta = an.n_opt_scan(x, n_max=n_max)
        r = an.n_opt(x)
        assert best_n == r.n_opt_int
        assert best_eta == pytest.approx(r.eta_at_opt, rel=1e-14)


def test_scan_efficiency_matches_scalar_closed_form():
    for x in (10.0, 100.0):
        for n in (2, 5, 10, 44, 1000):
            vec = an._eta_single_output(np.array([float(n)]), x)[0]
            scalar = cf.single_output_efficiency(ModelParams(n, 1.0, x))
            assert vec == pytest.approx(scalar, rel=1e-13)


def test_single_output_efficiency_is_unimodal_in_n():
    etas = an._eta_single_output(np.arange(2, 201, dtype=float), 10.0)
    d = np.diff(etas)
    peak = int(np.argmax(etas))
    assert np.all(d[:peak] > 0)
    assert np.all(d[peak:] < 0)


def test_n_opt_input_validation():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(NonPositiveRatio):
            an.n_opt(bad)
    with pytest.raises(NonPositiveRatio):
        an.n_opt_scan(-2.0)
    with pytest.raises(InvalidRange):
        an.n_opt_scan(10.0, n_max=1)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def test_sweep_grid_combinatorics():
    grid = an.sweep_grid([3, 4, 5], [1, 2, 3], [1.0])
    assert len(grid) == 8  # (3,3) is dropped: every qubit would be an output
    assert grid == sorted(grid)
    assert grid[0] == (3, 1, 1.0, False)
    assert (3, 3, 1.0, False) not in grid
    # Duplicates collapse, input order is irrelevant.
    assert an.sweep_grid([4, 3, 3], [1], [2.0, 0.5]) == an.sweep_grid([3, 4], [1], [0.5, 2.0])
    assert an.sweep_grid([], [1], [1.0]) == []
    assert an.sweep_grid([2], [5], [1.0]) == []  # no valid split, but 5 could fit larger N


def test_sweep_grid_validation():
    with pytest.raises(InvalidRange):
        an.sweep_grid([1], [1], [1.0])
    with pytest.raises(InvalidRange):
        an.sweep_grid([3], [0], [1.0])
    with pytest.raises(InvalidRange):
        an.sweep_grid([3], [1], [-1.0])
    with pytest.raises(InvalidRange):
        an.sweep_grid([3], [1], [0.0])
    with pytest.raises(InvalidRange):
        an.sweep_grid([3], [1], [math.inf])
    with pytest.raises(InvalidRange):
        an.efficiency_sweep([3], [1], [1.0], h=0.0)


def test_sweep_rows_carry_closed_form_values():
    rows = an.efficiency_sweep([3, 4], [1, 2], [0.5, 2.0], h=1.5)
    assert len(rows) == 8
    for row in rows:
        p = ModelParams(row.n, 1.5, row.ratio * 1.5)
        part = Partition.last(row.n, row.m)
        assert row.e_in == cf.input_energy(p, part)
        assert row.e_out == cf.max_output_energy(p, part)
        assert row.eta == cf.efficiency(p, part)
        assert row.eta == pytest.approx(row.e_out / row.e_in, rel=1e-14)
        assert row.bell is None


def test_sweep_bell_column():
    rows = an.efficiency_sweep([2, 3], [1], [1.0], with_bell=True)
    by_n = {row.n: row for row in rows}
    assert by_n[2].bell is None  # undefined below three qubits
    assert by_n[3].bell == pytest.approx(1.1435437497937313, rel=1e-14)


def test_efficiency_declines_with_m_at_fixed_ratio():
    rows = an.efficiency_sweep([10], range(1, 10), [10.0])
    etas = [r.eta for r in rows]
    assert etas == sorted(etas, reverse=True)


# ---------------------------------------------------------------------------
# Figure datasets
# ---------------------------------------------------------------------------

def test_figure_grid_shapes():
    assert len(an.figure_grid("fig2a")) == 45  # 9 output counts x 5 ratios
    assert len(an.figure_grid("fig2b")) == 495
    assert len(an.figure_grid("fig3a")) == 753  # 3 sizes x 251 ratio points
    assert len(an.figure_grid("fig4a")) == 906  # includes the ratio 0 boundary rows
    assert len(an.figure_grid("fig4b")) == 84
    assert len(an.figure_grid("fig7")) == 602
    with pytest.raises(UnknownFigure):
        an.figure_grid("fig1")


def test_ratio_log_grid_density():
    grid = an._ratio_log_grid(-1.0, 4.0)
    assert len(grid) == 251  # 50 points per decade, endpoints included
    assert grid[0] == pytest.approx(0.1, rel=1e-12)
    assert grid[-1] == pytest.approx(1e4, rel=1e-12)
    counts = an._int_log_grid(2, 4.0)
    assert counts[0] == 2 and counts[-1] == 10000
    assert counts == sorted(set(counts))


def test_figure_dataset_large_n_strong_coupling_endpoint():
    rows = an.figure_dataset("fig3a")
    last = [r for r in rows if r.n == 1000][-1]
    assert last.ratio == pytest.approx(1e4, rel=1e-12)
    assert last.eta == pytest.approx(0.4995, abs=1e-3)


def test_figure_dataset_three_qubit_asymptotes():
    rows = an.figure_dataset("fig7")
    tail = {r.m: r.eta for r in rows if r.ratio > 9999.0}
    assert tail[1] == pytest.approx(1.0 / 3.0, abs=1e-3)
    assert tail[2] == pytest.approx(1.0 / 6.0, abs=1e-3)


def test_figure_dataset_bell_boundary_and_monotonicity():
    rows = an.figure_dataset("fig4a")
    for n in (3, 8, 10):
        curve = [r for r in rows if r.n == n]
        assert curve[0].ratio == 0.0
        assert curve[0].bell == 1.0
        assert curve[0].eta == 0.0
        bells = [r.bell for r in curve]
        assert all(b2 >= b1 - 1e-12 for b1, b2 in zip(bells, bells[1:]))


def test_figure_dataset_row_count_matches_grid():
    rows = an.figure_dataset("fig2a")
    assert len(rows) == 45
    assert all(r.n == 10 for r in rows)
    assert {r.m for r in rows} == set(range(1, 10))


# ---------------------------------------------------------------------------
# Specialization fixtures
# ---------------------------------------------------------------------------

def test_fixture_inventory():
    results = an.specialization_fixture_check()
    assert len(results) == 15
    ids = [r.fixture_id for r in results]
    assert len(set(ids)) == 15
    variants = [r for r in results if r.expected_mismatch]
    assert {r.fixture_id for r in variants} == {
        "four_qubit_two_outputs_extracted_variant",
        "four_qubit_two_outputs_efficiency_variant",
    }
    assert all((r.n_qubits, r.m_outputs) == (4, 2) for r in variants)


def test_consistent_fixtures_match_closed_form():
    for r in an.specialization_fixture_check():
        if r.expected_mismatch:
            continue
        assert r.agrees, r.fixture_id
        assert r.max_deviation <= r.tolerance
        assert r.max_deviation <= 1e-13  # observed ~1e-16; keep headroom
        assert r.note == ""


def test_variant_fixtures_disagree_and_say_by_how_much():
    for r in an.specialization_fixture_check():
        if not r.expected_mismatch:
            continue
        assert not r.agrees
        assert r.max_deviation > 1e-2
        assert "follow neither" in r.note
        assert "brute force" in r.note
