"""Linear stability of one beam mode against another.

Perturbing a periodic mode-m orbit theta(t) in the direction of mode n
(n != m) decouples, and the perturbation xi obeys the Hill equation

    xi'' + a(t) xi = 0,    a(t) = n^2 (n^2 - P) + m^2 n^2 theta(t)^2.

The coefficient period is half the orbit period for sign-changing orbits
(theta^2 there has half the period of theta) and the full period for
one-signed well orbits.  Stability is read off the monodromy matrix M of
the coefficient period: det M = 1, so |trace M| < 2 means bounded
solutions (multipliers on the unit circle) and |trace M| > 2 exponential
growth.  Two sufficient stability criteria and one sufficient instability
criterion are available as cheap analytic pre-checks; whenever one of
them applies, the monodromy verdict must agree.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .duffing import (
    DuffingOrbit,
    EnergyRegime,
    ModeParams,
    constant_orbit,
    duffing_rhs,
    orbit_from_energy,
)
from .errors import ConsistencyError, DomainError, NumericalQualityError
from .integrate import IntegratorConfig, integrate
from .special import sigma_constant

# |trace| within this margin of 2 is reported Marginal rather than forced
# into a side: Floquet boundaries are codimension one and grid sweeps must
# not flip verdicts on roundoff.
DEFAULT_TOL_MARGIN = 1e-6

# Monodromy determinant drift beyond this is a failed computation.
_DET_QUALITY_TOL = 1e-6


class Verdict(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class HillProblem:
    """Hill equation data for modes (m, n) at load P along a mode-m orbit."""

    m: int
    n: int
    P: float
    orbit: DuffingOrbit
    coeff_period: float

    @property
    def linear_term(self) -> float:
        return float(self.n**2) * (float(self.n**2) - self.P)

    @property
    def coupling(self) -> float:
        return float(self.m**2 * self.n**2)

    def coefficient(self, theta_sq: float) -> float:
        return self.linear_term + self.coupling * theta_sq

    @property
    def coeff_min(self) -> float:
        """Analytic minimum of a(t), from the orbit's theta^2 range."""
        return self.coefficient(self.orbit.sq_min)

    @property
    def coeff_max(self) -> float:
        """Analytic maximum of a(t)."""
        return self.coefficient(self.orbit.sq_hi)


def build_hill(m: int, n: int, P: float, E: float) -> HillProblem:
    """Hill problem for the mode pair (m, n) at energy E of mode m.

    E must be admissible for mode m; the exact well bottom yields the
    constant-coefficient problem around the constant solution, with the
    limiting period as coefficient period.
    """
    if m == n:
        raise DomainError("perturbation mode must differ from the orbit mode")
    for label, v in (("m", m), ("n", n)):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise DomainError(f"{label} must be a positive integer, got {v!r}")
    params = ModeParams(k=m, P=P)
    if params.has_well and abs(E - params.well_bottom) <= 1e-13 * (1.0 + abs(E)):
        orbit = constant_orbit(params)
    else:
        orbit = orbit_from_energy(params, E)
    return HillProblem(m=m, n=n, P=P, orbit=orbit,
                       coeff_period=orbit.coefficient_period)


@dataclass(frozen=True)
class MonodromyResult:
    """Monodromy matrix of the Hill equation over one coefficient period.

    multipliers are the two Floquet multipliers, the roots of
    lambda^2 - trace lambda + det; their product is det, which equals 1 up
    to integration error.
    """

    matrix: np.ndarray
    det: float
    trace: float
    multipliers: tuple[complex, complex]
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "matrix": [[self.matrix[0, 0], self.matrix[0, 1]],
                       [self.matrix[1, 0], self.matrix[1, 1]]],
            "det": self.det,
            "trace": self.trace,
            "multipliers": [[z.real, z.imag] for z in self.multipliers],
            "verdict": self.verdict.value,
        }


def classify_matrix(matrix: np.ndarray, tol_margin: float = DEFAULT_TOL_MARGIN) -> MonodromyResult:
    """Verdict and multipliers of a 2x2 unit-determinant map.

    |trace| < 2 - tol_margin: Stable; |trace| > 2 + tol_margin: Unstable;
    the band in between (including |trace| = 2 exactly) is Marginal.
    """
    matrix = np.asarray(matrix, dtype=float)
    det = float(matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0])
    trace = float(matrix[0, 0] + matrix[1, 1])
    if abs(det - 1.0) > _DET_QUALITY_TOL:
        raise NumericalQualityError(
            f"monodromy determinant drifted to {det}; result not trustworthy"
        )
    disc = trace * trace - 4.0 * det
    if disc >= 0.0:
        r = math.sqrt(disc)
        multipliers = ((trace + r) / 2.0 + 0.0j, (trace - r) / 2.0 + 0.0j)
    else:
        r = cmath.sqrt(complex(disc))
        multipliers = ((trace + r) / 2.0, (trace - r) / 2.0)
    if abs(trace) < 2.0 - tol_margin:
        verdict = Verdict.STABLE
    elif abs(trace) > 2.0 + tol_margin:
        verdict = Verdict.UNSTABLE
    else:
        verdict = Verdict.MARGINAL
    return MonodromyResult(matrix=matrix, det=det, trace=trace,
                           multipliers=multipliers, verdict=verdict)


def _coupled_rhs(problem: HillProblem) -> Callable[[float, np.ndarray], np.ndarray]:
    # One pass integrates the orbit and both fundamental Hill solutions:
    # y = (theta, theta', xi1, xi1', xi2, xi2').  Driving the Hill columns
    # with the integrated orbit keeps coefficient and solutions in phase to
    # the integrator tolerance.
    rhs = duffing_rhs(problem.orbit.params)
    linear = problem.linear_term
    coupling = problem.coupling

    def coupled(t: float, y: np.ndarray) -> np.ndarray:
        d_theta = rhs(t, y[:2])
        a = linear + coupling * y[0] * y[0]
        return np.array([d_theta[0], d_theta[1], y[3], -a * y[2], y[5], -a * y[4]])

    return coupled


def monodromy(
    problem: HillProblem,
    config: IntegratorConfig = IntegratorConfig(),
    tol_margin: float = DEFAULT_TOL_MARGIN,
) -> MonodromyResult:
    """Monodromy matrix over one coefficient period of the Hill problem."""
    theta0, dtheta0 = problem.orbit.initial_state
    y0 = np.array([theta0, dtheta0, 1.0, 0.0, 0.0, 1.0])
    run = integrate(_coupled_rhs(problem), y0, (0.0, problem.coeff_period),
                    config, dense=False)
    yT = run.final_state
    matrix = np.array([[yT[2], yT[4]], [yT[3], yT[5]]])
    return classify_matrix(matrix, tol_margin)


@dataclass(frozen=True)
class ZhukovskiiResult:
    """Sandwich test: a(t) >= 0 and [a_min, a_max] inside one Floquet gap.

    Applies when some integer ell satisfies
    ell^2 pi^2 / T^2 <= a(t) <= (ell+1)^2 pi^2 / T^2 for all t,
    with T the coefficient period; then the equation is stable.
    """

    applies: bool
    ell: int | None = None


@dataclass(frozen=True)
class LiZhangResult:
    """Mean-square test: positive mean and small positive part.

    Applies when int_0^T a > 0 and T^3 int_0^T (a^+)^2 < (64/3) sigma^4,
    with T the coefficient period; then the equation is stable.  lhs and
    rhs report the two sides of the strict inequality.
    """

    applies: bool
    lhs: float
    rhs: float


@dataclass(frozen=True)
class NegativeCoefficientResult:
    """a(t) <= 0 throughout forces instability of a nontrivial coefficient."""

    applies: bool


@dataclass(frozen=True)
class CriterionReport:
    zhukovskii: ZhukovskiiResult
    li_zhang: LiZhangResult
    negative_coefficient: NegativeCoefficientResult

    def to_dict(self) -> dict:
        return {
            "zhukovskii": {"applies": self.zhukovskii.applies,
                           "ell": self.zhukovskii.ell},
            "li_zhang": {"applies": self.li_zhang.applies,
                         "lhs": self.li_zhang.lhs, "rhs": self.li_zhang.rhs},
            "negative_coefficient": {"applies": self.negative_coefficient.applies},
        }


def zhukovskii_criterion(problem: HillProblem) -> ZhukovskiiResult:
    """Stability when [a_min, a_max] fits between consecutive squared
    half-harmonics of the coefficient period."""
    a_min = problem.coeff_min
    a_max = problem.coeff_max
    if a_min < 0.0:
        return ZhukovskiiResult(applies=False)
    T = problem.coeff_period
    base = (math.pi / T) ** 2
    ell = int(math.floor(math.sqrt(a_min / base)))
    if a_max <= (ell + 1) ** 2 * base:
        return ZhukovskiiResult(applies=True, ell=ell)
    return ZhukovskiiResult(applies=False)


def li_zhang_criterion(
    problem: HillProblem,
    config: IntegratorConfig = IntegratorConfig(),
) -> LiZhangResult:
    """Stability from a positive coefficient mean and a small mean square."""
    T = problem.coeff_period
    rhs_bound = (64.0 / 3.0) * sigma_constant() ** 4
    orbit = problem.orbit
    if orbit.energy.regime is EnergyRegime.BOTTOM_OF_WELL:
        a = problem.coefficient(orbit.sq_hi)
        mean = a * T
        lhs = T**3 * (max(a, 0.0) ** 2 * T)
        return LiZhangResult(applies=mean > 0.0 and lhs < rhs_bound,
                             lhs=lhs, rhs=rhs_bound)

    rhs = duffing_rhs(orbit.params)
    linear = problem.linear_term
    coupling = problem.coupling

    def augmented(t: float, y: np.ndarray) -> np.ndarray:
        d = rhs(t, y[:2])
        a = linear + coupling * y[0] * y[0]
        return np.array([d[0], d[1], a, max(a, 0.0) ** 2])

    y0 = np.array([*orbit.initial_state, 0.0, 0.0])
    run = integrate(augmented, y0, (0.0, T), config, dense=False)
    mean = float(run.final_state[2])
    lhs = T**3 * float(run.final_state[3])
    return LiZhangResult(applies=mean > 0.0 and lhs < rhs_bound,
                         lhs=lhs, rhs=rhs_bound)


def negative_coefficient_criterion(problem: HillProblem) -> NegativeCoefficientResult:
    """Instability when the coefficient never becomes positive.

    Equivalent to the amplitude bound max theta^2 <= (P - n^2) / m^2; for a
    well orbit of mode m this happens up to the threshold energy
    E1 = (P - n^2)(2 m^2 - n^2 - P) / 4.
    """
    return NegativeCoefficientResult(applies=problem.coeff_max <= 0.0)


@dataclass(frozen=True)
class StabilityReport:
    verdict: Verdict
    criteria: CriterionReport
    monodromy: MonodromyResult

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "criteria": self.criteria.to_dict(),
            "monodromy": self.monodromy.to_dict(),
        }


def criteria_report(
    problem: HillProblem,
    config: IntegratorConfig = IntegratorConfig(),
) -> CriterionReport:
    return CriterionReport(
        zhukovskii=zhukovskii_criterion(problem),
        li_zhang=li_zhang_criterion(problem, config),
        negative_coefficient=negative_coefficient_criterion(problem),
    )


def classify_stability(
    m: int,
    n: int,
    P: float,
    E: float,
    config: IntegratorConfig = IntegratorConfig(),
    tol_margin: float = DEFAULT_TOL_MARGIN,
) -> StabilityReport:
    """Full stability classification of the (m, n) pair at energy E.

    Runs the cheap analytic criteria first, then the monodromy
    computation, and cross-checks them: a stability criterion that applies
    alongside an Unstable monodromy verdict (or the instability criterion
    alongside Stable) raises ConsistencyError.  Marginal monodromy agrees
    with either side.
    """
    problem = build_hill(m, n, P, E)
    criteria = criteria_report(problem, config)
    result = monodromy(problem, config, tol_margin)
    stable_claim = criteria.zhukovskii.applies or criteria.li_zhang.applies
    unstable_claim = criteria.negative_coefficient.applies
    if stable_claim and result.verdict is Verdict.UNSTABLE:
        raise ConsistencyError(
            f"stability criterion applies but monodromy is unstable "
            f"(m={m}, n={n}, P={P}, E={E}, trace={result.trace})"
        )
    if unstable_claim and result.verdict is Verdict.STABLE:
        raise ConsistencyError(
            f"instability criterion applies but monodromy is stable "
            f"(m={m}, n={n}, P={P}, E={E}, trace={result.trace})"
        )
    return StabilityReport(verdict=result.verdict, criteria=criteria,
                           monodromy=result)


def instability_threshold(m: int, n: int, P: float) -> float:
    """Energy E1 = (P - n^2)(2 m^2 - n^2 - P)/4 up to which the negative-
    coefficient criterion applies (meaningful when n^2 < P)."""
    return 0.25 * (P - n * n) * (2.0 * m * m - n * n - P)
