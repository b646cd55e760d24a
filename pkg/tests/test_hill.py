"""Linearized stability of one mode against another: monodromy and criteria."""

import math

import numpy as np
import pytest

from beammodes import (
    ConsistencyError,
    DomainError,
    IntegratorConfig,
    ModeParams,
    NumericalQualityError,
    Verdict,
    build_hill,
    classify_stability,
    li_zhang_criterion,
    monodromy,
    negative_coefficient_criterion,
    orbit_from_energy,
    sigma_constant,
    zhukovskii_criterion,
)
from beammodes.hill import classify_matrix, criteria_report, instability_threshold

TIGHT = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)


class TestProblemSetup:
    def test_coefficient_form(self):
        prob = build_hill(2, 1, 3.0, 1.0)
        # a(theta^2) = n^2 (n^2 - P) + m^2 n^2 theta^2
        assert prob.coefficient(0.0) == pytest.approx(1.0 * (1.0 - 3.0))
        assert prob.coefficient(1.0) == pytest.approx(-2.0 + 4.0)

    def test_coeff_range_spans_orbit(self):
        prob = build_hill(2, 1, 3.0, 1.0)
        amp_sq = prob.orbit.sq_hi
        assert prob.coeff_max == pytest.approx(prob.coefficient(amp_sq))
        assert prob.coeff_min == pytest.approx(prob.coefficient(prob.orbit.sq_min))

    def test_sign_changing_orbit_halves_coefficient_period(self):
        prob = build_hill(2, 1, 0.0, 1.0)
        assert prob.coeff_period == pytest.approx(prob.orbit.period / 2)

    def test_well_orbit_keeps_full_period(self):
        prob = build_hill(1, 2, 2.0, -0.2)
        assert prob.coeff_period == pytest.approx(prob.orbit.period)

    def test_same_mode_rejected(self):
        with pytest.raises(DomainError):
            build_hill(2, 2, 0.0, 1.0)

    def test_inadmissible_energy_rejected(self):
        with pytest.raises(DomainError):
            build_hill(1, 2, 0.0, -1.0)

    def test_exact_bottom_uses_constant_orbit(self):
        params = ModeParams(k=1, P=2.0)
        prob = build_hill(1, 2, 2.0, params.floor_energy)
        assert prob.orbit.sq_lo == prob.orbit.sq_hi
        assert prob.coeff_min == prob.coeff_max


class TestMonodromy:
    def test_constant_coefficient_trace(self):
        """At the well bottom the coefficient is a constant a0, so the
        period map is a rotation: trace = 2 cos(sqrt(a0) tau)."""
        params = ModeParams(k=1, P=2.0)
        prob = build_hill(1, 2, 2.0, params.floor_energy)
        a0 = prob.coeff_max
        result = monodromy(prob, config=TIGHT)
        assert result.trace == pytest.approx(
            2.0 * math.cos(math.sqrt(a0) * prob.coeff_period), abs=1e-9)

    @pytest.mark.parametrize("m,n,P,E", [
        (1, 2, 0.0, 40.0), (2, 1, 3.0, 1.0), (1, 2, 7.0, -6.0),
        (1, 3, 2.0, -0.2), (2, 3, 1.0, 10.0),
    ])
    def test_det_and_multiplier_product(self, m, n, P, E):
        result = monodromy(build_hill(m, n, P, E))
        assert abs(result.det - 1.0) < 1e-8
        assert abs(np.prod(result.multipliers) - 1.0) < 1e-8

    def test_symmetric_orbit_gives_equal_diagonal(self):
        # starting at a turning point makes the coefficient even in time
        for m, n, P, E in [(1, 2, 0.0, 40.0), (2, 1, 3.0, 1.0)]:
            M = monodromy(build_hill(m, n, P, E)).matrix
            assert abs(M[0, 0] - M[1, 1]) < 1e-7

    def test_unstable_multipliers_are_reciprocal_real(self):
        result = monodromy(build_hill(1, 2, 0.0, 40.0))
        assert result.verdict is Verdict.UNSTABLE
        mults = sorted(abs(mu) for mu in result.multipliers)
        assert mults[0] < 1.0 < mults[1]
        assert mults[0] * mults[1] == pytest.approx(1.0, abs=1e-8)

    def test_to_dict_is_json_ready(self):
        import json
        d = monodromy(build_hill(2, 1, 0.0, 1.0)).to_dict()
        json.dumps(d)
        assert d["verdict"] == "stable"


class TestClassifyMatrix:
    def test_rotation_is_stable(self):
        M = np.array([[0.0, 1.0], [-1.0, 0.0]])
        assert classify_matrix(M).verdict is Verdict.STABLE

    def test_hyperbolic_is_unstable(self):
        M = np.array([[2.5, 0.0], [0.0, 0.4]])
        assert classify_matrix(M).verdict is Verdict.UNSTABLE

    def test_parabolic_is_marginal(self):
        M = np.array([[1.0, 1.0], [0.0, 1.0]])
        assert classify_matrix(M).verdict is Verdict.MARGINAL
        M = np.array([[-1.0, 0.0], [0.0, -1.0]])
        assert classify_matrix(M).verdict is Verdict.MARGINAL

    def test_margin_width_is_respected(self):
        # lam + 1/lam = 2 + eps^2 + O(eps^3): pick eps so the excess is 2.5e-7
        M = np.array([[1.0 + 5e-4, 0.0], [0.0, 1.0 / (1.0 + 5e-4)]])
        assert classify_matrix(M, tol_margin=1e-6).verdict is Verdict.MARGINAL
        assert classify_matrix(M, tol_margin=1e-9).verdict is Verdict.UNSTABLE

    def test_bad_determinant_rejected(self):
        M = np.array([[1.1, 0.0], [0.0, 1.0]])
        with pytest.raises(NumericalQualityError):
            classify_matrix(M)


class TestCriteria:
    def test_zhukovskii_near_well_bottom(self):
        params = ModeParams(k=1, P=2.0)
        prob = build_hill(1, 2, 2.0, params.floor_energy * (1 - 1e-3))
        result = zhukovskii_criterion(prob)
        assert result.applies
        assert result.ell == 4

    def test_zhukovskii_needs_nonnegative_coefficient(self):
        prob = build_hill(2, 1, 3.0, 1.0)  # coeff_max < 0 here
        assert not zhukovskii_criterion(prob).applies

    def test_li_zhang_small_coupling(self):
        result = li_zhang_criterion(build_hill(2, 1, 0.0, 1e8))
        assert result.applies
        assert result.rhs == pytest.approx((64.0 / 3.0) * sigma_constant() ** 4,
                                           rel=1e-12)
        assert result.lhs < result.rhs

    def test_li_zhang_large_coupling_fails(self):
        result = li_zhang_criterion(build_hill(1, 2, 0.0, 1.0))
        assert not result.applies
        assert result.lhs > result.rhs

    def test_negative_coefficient_window(self):
        assert negative_coefficient_criterion(build_hill(2, 1, 3.0, 1.0)).applies
        assert not negative_coefficient_criterion(build_hill(2, 1, 3.0, 3.0)).applies

    def test_instability_threshold_closed_form(self):
        # (P - n^2)(2 m^2 - n^2 - P) / 4
        assert instability_threshold(2, 1, 3.0) == pytest.approx(2.0)
        # the coefficient max changes sign exactly there
        prob_below = build_hill(2, 1, 3.0, 2.0 * (1 - 1e-9))
        prob_above = build_hill(2, 1, 3.0, 2.0 * (1 + 1e-9))
        assert prob_below.coeff_max < 0.0 < prob_above.coeff_max

    def test_report_collects_all_three(self):
        report = criteria_report(build_hill(2, 1, 3.0, 1.0))
        d = report.to_dict()
        assert set(d) >= {"zhukovskii", "li_zhang", "negative_coefficient"}


class TestClassifyStability:
    def test_stable_case(self):
        report = classify_stability(2, 1, 0.0, 1.0)
        assert report.verdict is Verdict.STABLE

    def test_negative_coefficient_forces_instability(self):
        # a(t) <= 0 pumps the perturbation monotonically
        report = classify_stability(2, 1, 3.0, 1.0)
        assert report.verdict is Verdict.UNSTABLE
        assert report.criteria.negative_coefficient.applies

    def test_unstable_case(self):
        report = classify_stability(1, 2, 0.0, 40.0)
        assert report.verdict is Verdict.UNSTABLE
        assert report.monodromy.trace == pytest.approx(2.0061, abs=2e-3)

    def test_agreement_battery(self):
        """Applicable criteria never contradict the monodromy verdict."""
        cases = [(2, 1, 0.0, 0.5), (2, 1, 3.0, 0.3), (2, 1, 6.0, -0.9),
                 (1, 2, 0.0, 5.0), (1, 2, 3.0, -0.7), (1, 2, 6.0, -6.0),
                 (3, 2, 0.0, 12.0), (2, 3, 5.0, 2.0)]
        for m, n, P, E in cases:
            report = classify_stability(m, n, P, E)  # raises on contradiction
            crits = report.criteria
            if crits.zhukovskii.applies or crits.li_zhang.applies:
                assert report.verdict is not Verdict.UNSTABLE
            if crits.negative_coefficient.applies:
                assert report.verdict is not Verdict.STABLE

    def test_near_bottom_margin_interplay(self):
        """1e-4 away from the elliptic bottom the trace sits ~6e-9 inside
        |trace| = 2: the default margin calls it marginal, a 1e-9 margin
        with a tight integrator resolves it as stable."""
        params = ModeParams(k=1, P=7.0)
        E = params.floor_energy * (1 - 1e-4)
        default = classify_stability(1, 2, 7.0, E)
        assert default.verdict is Verdict.MARGINAL
        tight = classify_stability(1, 2, 7.0, E, config=TIGHT, tol_margin=1e-9)
        assert tight.verdict is Verdict.STABLE

    def test_robust_near_bottom_case(self):
        params = ModeParams(k=1, P=3.0)
        E = params.floor_energy * (1 - 1e-4)
        report = classify_stability(1, 2, 3.0, E)
        assert report.verdict is Verdict.STABLE
        assert report.monodromy.trace == pytest.approx(-0.2249, abs=2e-3)

    def test_report_to_dict(self):
        import json
        json.dumps(classify_stability(2, 1, 3.0, 1.0).to_dict())
