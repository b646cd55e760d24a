"""Atlas sweeps: grids of verdicts, CSV output, thresholds, adaptive budget."""

import io
import math

import pytest

from beammodes import (
    CSV_HEADER,
    AtlasCell,
    DomainError,
    IntegratorConfig,
    ModeParams,
    SweepSpec,
    Verdict,
    VerdictSource,
    adaptive_amplitude_sweep,
    classify_stability,
    energy_from_initial_amplitude,
    find_thresholds,
    sweep,
    verdict_runs,
    write_cells_csv,
)

SMALL = SweepSpec(P=0.0, modes=[(2, 1), (1, 2)], theta0_grid=[0.3, 0.6, 0.9])


def synthetic(theta0, verdict, quality="ok", trace=0.0):
    return AtlasCell(gamma=4.0, m=1, n=2, P=0.0, theta0=theta0, E=theta0,
                     trace=trace, verdict=verdict, quality=quality)


class TestSweepSpec:
    def test_requires_exactly_one_grid(self):
        with pytest.raises(DomainError):
            SweepSpec(P=0.0, modes=[(1, 2)])
        with pytest.raises(DomainError):
            SweepSpec(P=0.0, modes=[(1, 2)], theta0_grid=[1.0],
                      energy_grid=[1.0])

    def test_grid_must_increase(self):
        with pytest.raises(DomainError):
            SweepSpec(P=0.0, modes=[(1, 2)], theta0_grid=[])
        with pytest.raises(DomainError):
            SweepSpec(P=0.0, modes=[(1, 2)], theta0_grid=[1.0, 1.0])
        with pytest.raises(DomainError):
            SweepSpec(P=0.0, modes=[(1, 2)], energy_grid=[2.0, 1.0])

    def test_modes_required(self):
        with pytest.raises(DomainError):
            SweepSpec(P=0.0, modes=[], theta0_grid=[1.0])

    def test_bare_gamma_needs_limit_source(self):
        with pytest.raises(DomainError):
            SweepSpec(P=0.0, modes=[2.25], theta0_grid=[1.0])
        SweepSpec(P=0.0, modes=[2.25], theta0_grid=[1.0],
                  verdict_source=VerdictSource.CAZENAVE_LIMIT)


class TestSweep:
    def test_cell_fields(self):
        cells = sweep(SMALL)
        assert len(cells) == 6
        first = cells[0]
        assert (first.m, first.n) == (2, 1)
        assert first.gamma == 0.25
        assert first.theta0 == 0.3
        assert first.E == energy_from_initial_amplitude(
            ModeParams(k=2, P=0.0), 0.3)
        assert first.ok
        assert first.verdict == Verdict.STABLE.value
        # pairs are the outer loop
        assert [c.m for c in cells] == [2, 2, 2, 1, 1, 1]

    def test_energy_grid_leaves_theta_unset(self):
        spec = SweepSpec(P=0.0, modes=[(2, 1)], energy_grid=[0.5, 1.0])
        cells = sweep(spec)
        assert all(math.isnan(c.theta0) for c in cells)
        assert [c.E for c in cells] == [0.5, 1.0]

    def test_worker_count_does_not_change_output(self):
        assert sweep(SMALL, jobs=1) == sweep(SMALL, jobs=2)

    def test_jobs_validated(self):
        with pytest.raises(DomainError):
            sweep(SMALL, jobs=0)

    def test_failed_cell_is_flagged_not_fatal(self):
        spec = SweepSpec(P=0.0, modes=[(2, 2), (2, 1)], energy_grid=[1.0])
        cells = sweep(spec)
        bad, good = cells
        assert not bad.ok
        assert bad.quality.startswith("error:DomainError")
        assert bad.verdict == "none"
        assert math.isnan(bad.trace)
        assert good.ok

    def test_limit_source_with_bare_gamma(self):
        spec = SweepSpec(P=0.0, modes=[2.25, 4.0], energy_grid=[1.0],
                         verdict_source=VerdictSource.CAZENAVE_LIMIT)
        cells = sweep(spec)
        assert [c.verdict for c in cells] == [Verdict.UNSTABLE.value,
                                              Verdict.STABLE.value]
        assert all(c.m == 0 and c.n == 0 for c in cells)
        assert [c.gamma for c in cells] == [2.25, 4.0]


class TestCsv:
    def test_header_and_line_count(self):
        cells = sweep(SMALL)
        buf = io.StringIO()
        write_cells_csv(buf, cells)
        lines = buf.getvalue().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == len(cells) + 1

    def test_floats_round_trip(self):
        cells = sweep(SMALL)
        buf = io.StringIO()
        write_cells_csv(buf, cells)
        for cell, line in zip(cells, buf.getvalue().splitlines()[1:]):
            fields = line.split(",")
            assert float(fields[0]) == cell.gamma
            assert float(fields[4]) == cell.theta0
            assert float(fields[5]) == cell.E
            assert float(fields[6]) == cell.trace
            assert fields[7] == cell.verdict

    def test_output_is_deterministic(self):
        a, b = io.StringIO(), io.StringIO()
        write_cells_csv(a, sweep(SMALL))
        write_cells_csv(b, sweep(SMALL, jobs=2))
        assert a.getvalue() == b.getvalue()


class TestVerdictRuns:
    def test_runs_found(self):
        cells = [synthetic(float(i), v) for i, v in enumerate(
            ["stable", "unstable", "unstable", "stable", "unstable"])]
        assert verdict_runs(cells, Verdict.UNSTABLE) == [(1, 2), (4, 4)]
        assert verdict_runs(cells, "stable") == [(0, 0), (3, 3)]

    def test_run_reaching_the_end(self):
        cells = [synthetic(0.0, "unstable"), synthetic(1.0, "unstable")]
        assert verdict_runs(cells, Verdict.UNSTABLE) == [(0, 1)]

    def test_empty_input(self):
        assert verdict_runs([], Verdict.UNSTABLE) == []


class TestFindThresholds:
    def test_transition_located(self):
        # (2, 1) at P = 3: unstable up through E ~ 6.5, stable after
        thresholds = find_thresholds(2, 1, 3.0, [4.0, 8.0])
        assert len(thresholds) == 1
        E = thresholds[0]
        assert 6.0 < E < 7.0
        below = classify_stability(2, 1, 3.0, E - 0.1).verdict
        above = classify_stability(2, 1, 3.0, E + 0.1).verdict
        assert below is Verdict.UNSTABLE
        assert above is Verdict.STABLE

    def test_no_transition_no_thresholds(self):
        assert find_thresholds(2, 1, 0.0, [0.5, 1.0]) == []

    def test_marginal_grid_point_is_the_threshold(self):
        bottom = ModeParams(k=1, P=7.0).floor_energy
        E0 = bottom * (1.0 - 1e-4)
        thresholds = find_thresholds(1, 2, 7.0, [E0, -5.0])
        assert thresholds == [E0]

    def test_validation(self):
        with pytest.raises(DomainError):
            find_thresholds(2, 1, 3.0, [4.0])
        with pytest.raises(DomainError):
            find_thresholds(2, 1, 3.0, [8.0, 4.0])
        with pytest.raises(DomainError):
            find_thresholds(2, 1, 3.0, [4.0, 8.0], refinement_tol=0.0)


class TestAdaptiveSweep:
    def test_validation(self):
        with pytest.raises(DomainError):
            adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 3)
        with pytest.raises(DomainError):
            adaptive_amplitude_sweep(1, 2, 0.0, 0.0, 40)
        with pytest.raises(DomainError):
            adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 40, backbone=1)
        with pytest.raises(DomainError):
            adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 40, backbone=41)
        with pytest.raises(DomainError):
            adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 40, theta0_min=5.0)

    def test_budget_spent_and_sorted(self):
        cells = adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 40)
        assert len(cells) == 40
        thetas = [c.theta0 for c in cells]
        assert thetas == sorted(thetas)
        assert len(set(thetas)) == len(thetas)
        assert thetas[0] == pytest.approx(5.0 / 20)   # default backbone floor
        assert thetas[-1] == 5.0
        assert all(c.ok for c in cells)

    def test_finds_instability_pocket(self):
        # (1, 2) at P = 0 has an instability window near theta0 ~ 3.1
        # that a 20-point uniform grid can miss; the refinement finds it
        cells = adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 40)
        runs = verdict_runs(cells, Verdict.UNSTABLE)
        assert len(runs) >= 1
        lo = cells[runs[0][0]].theta0
        hi = cells[runs[0][1]].theta0
        assert 2.5 < lo <= hi < 3.7

    def test_deterministic_and_jobs_independent(self):
        a = adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 30)
        b = adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 30)
        c = adaptive_amplitude_sweep(1, 2, 0.0, 5.0, 30, jobs=2)
        assert a == b == c

    def test_budget_equal_to_backbone_is_uniform(self):
        cells = adaptive_amplitude_sweep(2, 1, 0.0, 2.0, 6, backbone=6)
        assert len(cells) == 6
        gaps = [b.theta0 - a.theta0 for a, b in zip(cells, cells[1:])]
        assert gaps == pytest.approx([gaps[0]] * 5, rel=1e-12)

    def test_energy_consistent_with_amplitude(self):
        params = ModeParams(k=1, P=0.0)
        for cell in adaptive_amplitude_sweep(1, 2, 0.0, 4.0, 12):
            assert cell.E == pytest.approx(
                energy_from_initial_amplitude(params, cell.theta0), rel=1e-12)
