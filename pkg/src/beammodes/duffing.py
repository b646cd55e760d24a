"""Single-mode dynamics of the compressed beam.

Projecting the beam equation onto the k-th spatial Fourier mode gives the
cubic oscillator

    theta'' + k^2 (k^2 - P) theta + k^4 theta^3 = 0

for the time coefficient theta(t), where P is the axial load.  Its energy

    E = theta'^2 / 2 + k^2 (k^2 - P) theta^2 / 2 + k^4 theta^4 / 4

is conserved and organizes the phase portrait:

* k^2 >= P: single-well potential; every nontrivial orbit has E > 0 and
  oscillates through zero with amplitude sqrt(Lambda_hi).
* k^2 < P: double well with bottom energy -(P - k^2)^2 / 4 at the constant
  solutions +-sqrt(P - k^2)/k.  Orbits with negative energy stay on one
  side of the well; E = 0 carries the homoclinic orbit
  theta(t) = sqrt(2) sqrt(P - k^2) / (k cosh(k sqrt(P - k^2) t)) and the
  unstable rest point theta == 0; E > 0 orbits cross the hump.

Periods come from a closed elliptic-K form for E > 0 and from a
Gauss-Legendre quadrature of the turning-point integral for well orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError
from .integrate import IntegratorConfig, Trajectory, integrate
from .special import elliptic_k

# Regime classification tolerance; scales with the energy magnitude.
_CLASSIFY_TOL = 1e-13

# Quadrature control for well periods: Gauss-Legendre node count doubles
# until the value settles to this relative tolerance.
_QUAD_REL_TOL = 1e-10
_QUAD_NODES = 128
_QUAD_MAX_NODES = 4096


class EnergyRegime(Enum):
    """Qualitative type of a constant-energy set of the mode oscillator."""

    POSITIVE = "positive"              # sign-changing periodic orbit
    NEGATIVE_WELL = "negative-well"    # one-signed periodic orbit inside a well
    BOTTOM_OF_WELL = "bottom-of-well"  # constant solution at a well minimum
    HOMOCLINIC = "homoclinic"          # non-periodic separatrix orbit
    TRIVIAL = "trivial"                # theta == 0 equilibrium


@dataclass(frozen=True)
class ModeParams:
    """Spatial frequency k (a positive integer) and axial load P."""

    k: int
    P: float

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise DomainError(f"mode number must be a positive integer, got {self.k!r}")
        if not math.isfinite(self.P):
            raise DomainError("load P must be finite")

    @property
    def stiffness(self) -> float:
        """Linearized stiffness k^2 (k^2 - P); negative inside a double well."""
        return self.k**2 * (self.k**2 - self.P)

    @property
    def has_well(self) -> bool:
        return self.k**2 < self.P

    @property
    def well_bottom(self) -> float:
        """Minimum energy -(P - k^2)^2 / 4; only meaningful when k^2 < P."""
        if not self.has_well:
            raise DomainError(f"mode k={self.k} has no well at P={self.P}")
        return -0.25 * (self.P - self.k**2) ** 2

    @property
    def floor_energy(self) -> float:
        """Lowest admissible energy: well bottom if present, else 0."""
        return self.well_bottom if self.has_well else 0.0


@dataclass(frozen=True)
class EnergyLevel:
    value: float
    regime: EnergyRegime


def _classification_tol(E: float) -> float:
    return _CLASSIFY_TOL * (1.0 + abs(E))


def energy_of(params: ModeParams, alpha: float, beta: float) -> EnergyLevel:
    """Energy and regime of the orbit through theta = alpha, theta' = beta."""
    k2 = params.k**2
    E = 0.5 * beta * beta + 0.5 * k2 * (k2 - params.P) * alpha * alpha \
        + 0.25 * k2 * k2 * alpha**4
    tol = _classification_tol(E)
    if alpha == 0.0 and beta == 0.0:
        return EnergyLevel(E, EnergyRegime.TRIVIAL)
    if not params.has_well:
        # Single well: any nontrivial data has positive energy.
        return EnergyLevel(E, EnergyRegime.POSITIVE)
    bottom = params.well_bottom
    if E - bottom <= tol:
        return EnergyLevel(E, EnergyRegime.BOTTOM_OF_WELL)
    if abs(E) <= tol:
        return EnergyLevel(E, EnergyRegime.HOMOCLINIC)
    regime = EnergyRegime.NEGATIVE_WELL if E < 0.0 else EnergyRegime.POSITIVE
    return EnergyLevel(E, regime)


def classify_energy(params: ModeParams, E: float) -> EnergyRegime:
    """Regime of the orbits at energy E (exact-value variant)."""
    tol = _classification_tol(E)
    if not params.has_well:
        if abs(E) <= tol:
            return EnergyRegime.TRIVIAL
        if E < 0.0:
            raise DomainError(
                f"mode k={params.k}, P={params.P} admits no orbit at E={E!r}"
            )
        return EnergyRegime.POSITIVE
    bottom = params.well_bottom
    if E - bottom < -tol:
        raise DomainError(f"energy {E!r} lies below the well bottom {bottom}")
    if E - bottom <= tol:
        return EnergyRegime.BOTTOM_OF_WELL
    if abs(E) <= tol:
        return EnergyRegime.HOMOCLINIC
    return EnergyRegime.NEGATIVE_WELL if E < 0.0 else EnergyRegime.POSITIVE


class TurningRoots(NamedTuple):
    """Roots of the turning-point quadratic in theta^2.

    theta'^2 = (k^4/2) (hi - theta^2)(theta^2 - lo); the orbit sweeps
    theta^2 over [max(lo, 0), hi].  lo < 0 exactly for sign-changing
    orbits, 0 < lo < hi for one-signed well orbits.
    """

    lo: float
    hi: float


def turning_roots(params: ModeParams, E: float) -> TurningRoots:
    classify_energy(params, E)               # rejects inadmissible energies
    k2 = params.k**2
    gap = params.P - k2                      # positive inside a double well
    s = math.sqrt(max(gap * gap + 4.0 * E, 0.0))
    return TurningRoots(lo=(gap - s) / k2, hi=(gap + s) / k2)


@dataclass(frozen=True)
class DuffingOrbit:
    """A periodic orbit of one beam mode, in canonical phase.

    The orbit starts at a turning point with theta' = 0: at +amplitude for
    sign-changing orbits, at the inner turning point +sqrt(sq_min) for well
    orbits, at the constant value for bottom-of-well solutions.  sign = -1
    selects the mirrored orbit -theta (only distinct for one-signed ones).
    """

    params: ModeParams
    energy: EnergyLevel
    sq_lo: float      # lower root of the turning quadratic (may be negative)
    sq_hi: float      # upper root = squared amplitude
    period: float
    sign: int = 1

    @property
    def amplitude(self) -> float:
        return math.sqrt(self.sq_hi)

    @property
    def sq_min(self) -> float:
        """Minimum of theta^2 along the orbit."""
        return max(self.sq_lo, 0.0)

    @property
    def sign_changing(self) -> bool:
        return self.energy.regime is EnergyRegime.POSITIVE

    @property
    def modulus(self) -> float | None:
        """sqrt(sq_min / sq_hi) for one-signed orbits, else None."""
        if self.sq_lo <= 0.0:
            return None
        return math.sqrt(self.sq_lo / self.sq_hi)

    @property
    def initial_state(self) -> tuple[float, float]:
        if self.energy.regime is EnergyRegime.POSITIVE:
            theta0 = self.amplitude
        else:
            theta0 = math.sqrt(self.sq_min)
        return (self.sign * theta0, 0.0)

    @property
    def coefficient_period(self) -> float:
        """Period of theta^2: half the orbit period iff the orbit changes sign."""
        return 0.5 * self.period if self.sign_changing else self.period


def duffing_rhs(params: ModeParams) -> Callable[[float, np.ndarray], np.ndarray]:
    """Vector field of the mode oscillator on (theta, theta')."""
    stiffness = params.stiffness
    quartic = float(params.k) ** 4

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        theta = y[0]
        return np.array([y[1], -(stiffness + quartic * theta * theta) * theta])

    return rhs


@lru_cache(maxsize=None)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _well_quarter_integral(delta_sq: float) -> float:
    """int_delta^1 dtheta / sqrt((1 - theta^2)(theta^2 - delta^2)).

    Written after the substitution theta^2 = delta^2 + (1 - delta^2) sin^2(phi),
    which removes both endpoint singularities:

        int_0^{pi/2} dphi / sqrt(delta^2 + (1 - delta^2) sin^2(phi)).

    Gauss-Legendre on the smooth integrand, doubling the node count until
    the value settles.
    """
    if not 0.0 < delta_sq < 1.0:
        raise DomainError(f"the well integral needs 0 < delta^2 < 1, got {delta_sq!r}")

    def value(nodes: int) -> float:
        x, w = _leggauss(nodes)
        phi = 0.25 * math.pi * (x + 1.0)
        s = np.sin(phi)
        f = 1.0 / np.sqrt(delta_sq + (1.0 - delta_sq) * s * s)
        return 0.25 * math.pi * float(w @ f)

    nodes = _QUAD_NODES
    prev = value(nodes)
    while nodes < _QUAD_MAX_NODES:
        nodes *= 2
        curr = value(nodes)
        if abs(curr - prev) <= _QUAD_REL_TOL * abs(curr):
            return curr
        prev = curr
    return prev


def period_of(params: ModeParams, E: float) -> float:
    """Period of the mode orbit at energy E.

    E > 0 uses the closed elliptic form

        T = 4 / (k X^(1/4)) K( sqrt(1/2 - (k^2 - P) / (2 sqrt(X))) ),
        X = 4 E + (k^2 - P)^2,

    whose modulus lies in [0, 1) for every E > 0.  Well orbits (E < 0) use
    the turning-point integral

        T = 2 sqrt(2) / (k sqrt(P - k^2 + s)) * Q(delta),
        s = sqrt((P - k^2)^2 + 4 E),  delta^2 = (P - k^2 - s)/(P - k^2 + s),

    with Q evaluated by Gauss-Legendre quadrature.  The limits are
    T -> 2 pi / (k sqrt(k^2 - P)) as E -> 0+ (infinite when k^2 = P),
    T -> pi sqrt(2) / (k sqrt(P - k^2)) at the well bottom, and T -> 0 as
    E -> infinity.
    """
    regime = classify_energy(params, E)
    k = float(params.k)
    if regime is EnergyRegime.POSITIVE:
        gap = k * k - params.P
        X = 4.0 * E + gap * gap
        modulus_sq = 0.5 - gap / (2.0 * math.sqrt(X))
        return 4.0 / (k * X**0.25) * elliptic_k(math.sqrt(modulus_sq))
    if regime is EnergyRegime.BOTTOM_OF_WELL:
        # Limiting period of the surrounding small oscillations.
        return math.pi * math.sqrt(2.0) / (k * math.sqrt(params.P - k * k))
    if regime is EnergyRegime.HOMOCLINIC:
        raise DomainError("the homoclinic orbit is not periodic")
    gap = params.P - k * k
    s = math.sqrt(gap * gap + 4.0 * E)
    delta_sq = (gap - s) / (gap + s)
    prefactor = 2.0 * math.sqrt(2.0) / (k * math.sqrt(gap + s))
    return prefactor * _well_quarter_integral(delta_sq)


def orbit_from_energy(params: ModeParams, E: float, sign: int = 1) -> DuffingOrbit:
    """Canonical periodic orbit at energy E.

    Raises for energies with no periodic orbit: E <= 0 without a well,
    E <= bottom or E = 0 with one.  The exact bottom is the constant
    solution; build it with constant_orbit.
    """
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    regime = classify_energy(params, E)
    if regime is EnergyRegime.BOTTOM_OF_WELL:
        raise DomainError(
            "the bottom of the well is a constant solution; use constant_orbit"
        )
    if regime is EnergyRegime.HOMOCLINIC:
        raise DomainError("E = 0 with a well carries no periodic orbit")
    roots = turning_roots(params, E)
    return DuffingOrbit(
        params=params,
        energy=EnergyLevel(E, regime),
        sq_lo=roots.lo,
        sq_hi=roots.hi,
        period=period_of(params, E),
        sign=sign,
    )


def constant_orbit(params: ModeParams, sign: int = 1) -> DuffingOrbit:
    """The constant solution +-sqrt(P - k^2)/k at the bottom of the well.

    Its period field carries the limiting period of the surrounding
    oscillations, which is the natural coefficient period for linearized
    problems built on top of it.
    """
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    if not params.has_well:
        raise DomainError(f"mode k={params.k} has no well at P={params.P}")
    c_sq = (params.P - params.k**2) / params.k**2
    bottom = params.well_bottom
    return DuffingOrbit(
        params=params,
        energy=EnergyLevel(bottom, EnergyRegime.BOTTOM_OF_WELL),
        sq_lo=c_sq,
        sq_hi=c_sq,
        period=period_of(params, bottom),
        sign=sign,
    )


def orbit_trajectory(
    orbit: DuffingOrbit,
    n_periods: float = 1.0,
    config: IntegratorConfig = IntegratorConfig(),
    *,
    dense: bool = True,
) -> Trajectory:
    """Integrate the orbit from its canonical initial state over n periods."""
    if n_periods <= 0.0:
        raise DomainError("n_periods must be positive")
    rhs = duffing_rhs(orbit.params)
    t_end = n_periods * orbit.period
    return integrate(rhs, orbit.initial_state, (0.0, t_end), config, dense=dense)


def homoclinic(params: ModeParams, t):
    """The separatrix orbit sqrt(2) sqrt(P - k^2) / (k cosh(k sqrt(P - k^2) t)).

    Defined only for k^2 < P; accepts scalar or array times.
    """
    if not params.has_well:
        raise DomainError(
            f"homoclinic orbit requires k^2 < P, got k={params.k}, P={params.P}"
        )
    rate = params.k * math.sqrt(params.P - params.k**2)
    peak = math.sqrt(2.0) * math.sqrt(params.P - params.k**2) / params.k
    return peak / np.cosh(rate * np.asarray(t, dtype=float)) if np.ndim(t) else \
        peak / math.cosh(rate * t)


def hill_integral(
    m: int,
    n: int,
    P: float,
    E: float,
    config: IntegratorConfig = IntegratorConfig(),
) -> float:
    """int_0^{T/2} (n^2 (n^2 - P) + m^2 n^2 theta_m(t)^2)^2 dt.

    theta_m is the canonical mode-m orbit at energy E and T its period.
    The large-energy law (T/2)^3 I(E) -> (64 n^4 / 3 m^4) sigma^4 and the
    small-energy limit (T/2) n^4 (n^2 - P)^2 both follow from this
    quantity.  Computed by augmenting the orbit integration with a
    quadrature state, so its accuracy tracks the integrator tolerance.
    """
    params = ModeParams(k=m, P=P)
    regime = classify_energy(params, E)
    coeff = float(n * n) * (float(n * n) - P)
    coupling = float(m * m * n * n)
    if regime is EnergyRegime.BOTTOM_OF_WELL:
        orbit = constant_orbit(params)
        value = coeff + coupling * orbit.sq_hi
        return value * value * 0.5 * orbit.period
    orbit = orbit_from_energy(params, E)
    rhs = duffing_rhs(params)

    def augmented(t: float, y: np.ndarray) -> np.ndarray:
        d = rhs(t, y[:2])
        a = coeff + coupling * y[0] * y[0]
        return np.array([d[0], d[1], a * a])

    y0 = np.array([*orbit.initial_state, 0.0])
    run = integrate(augmented, y0, (0.0, 0.5 * orbit.period), config, dense=False)
    return float(run.final_state[2])


class ScaledEnergy(NamedTuple):
    """Monotone reparametrizations of the energy used by the period laws.

    disc = 4 E + (k^2 - P)^2 is the turning-quadratic discriminant,
    disc_ratio = disc / (k^2 - P)^2, and
    modulus_term = 1/2 - 1 / (2 sqrt(disc_ratio)) in (0, 1/2).
    """

    disc: float
    disc_ratio: float
    modulus_term: float


def scaled_energy_functions(k: int, P: float, E: float) -> ScaledEnergy:
    """The triple (disc, disc_ratio, modulus_term) at energy E > 0.

    All three are strictly increasing in E.  Undefined at P = k^2, where
    the normalization collapses.
    """
    params = ModeParams(k=k, P=P)
    if E <= 0.0:
        raise DomainError(f"scaled energy functions require E > 0, got {E!r}")
    gap = float(params.k**2) - params.P
    if gap == 0.0:
        raise DomainError("scaled energy functions are undefined at P = k^2")
    disc = 4.0 * E + gap * gap
    ratio = disc / (gap * gap)
    return ScaledEnergy(disc, ratio, 0.5 - 0.5 / math.sqrt(ratio))


def energy_from_initial_amplitude(params: ModeParams, theta0: float) -> float:
    """Energy of the orbit through (theta0, 0)."""
    return energy_of(params, theta0, 0.0).value
