"""Adaptive integration of smooth low-dimensional ODE systems.

A thin driver around scipy's 8th-order Dormand-Prince stepper (DOP853):
trajectories are recorded at the accepted step points, dense output is
optional (it costs three extra stages per step), and zero crossings of a
state component are located on the dense interpolant by safeguarded
Newton iteration inside a bisection bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import DOP853, OdeSolution

from .errors import (
    DomainError,
    IntegrationError,
    NoCrossingError,
    StepLimitError,
)

RHS = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and budgets for one integration run.

    rel_tol/abs_tol are the per-step error controls of the embedded pair;
    max_step caps the step size; max_steps caps the number of accepted
    steps before the driver gives up.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise DomainError("integrator tolerances must be strictly positive")
        if self.max_step <= 0.0:
            raise DomainError("max_step must be strictly positive")
        if self.max_steps < 1:
            raise DomainError("max_steps must be at least 1")


@dataclass(frozen=True)
class Trajectory:
    """Solution of one integration run.

    times are the accepted step points (strictly increasing, first entry
    the initial time, last entry the end of the span); states[i] is the
    state at times[i].  sol is the dense interpolant over the whole span
    when the run was made with dense output, else None.
    """

    times: np.ndarray
    states: np.ndarray
    sol: OdeSolution | None = None

    @property
    def dense(self) -> bool:
        return self.sol is not None

    @property
    def initial_state(self) -> np.ndarray:
        return self.states[0]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def sample(self, ts: Sequence[float] | np.ndarray) -> np.ndarray:
        """States at arbitrary times inside the span, shape (len(ts), dim)."""
        if self.sol is None:
            raise DomainError("trajectory was recorded without dense output")
        ts = np.asarray(ts, dtype=float)
        return np.atleast_2d(self.sol(ts).T) if ts.ndim else self.sol(ts)


def integrate(
    system: RHS,
    initial_state: Sequence[float] | np.ndarray,
    t_span: tuple[float, float],
    config: IntegratorConfig = IntegratorConfig(),
    *,
    dense: bool = True,
) -> Trajectory:
    """Integrate y' = system(t, y) over t_span = (t0, t1), t0 < t1."""
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t0 < t1:
        raise DomainError(f"t_span must satisfy t0 < t1, got {t_span!r}")
    y0 = np.asarray(initial_state, dtype=float)
    if y0.ndim != 1 or y0.size == 0:
        raise DomainError("initial_state must be a non-empty 1-d vector")

    solver = DOP853(
        system, t0, y0, t1,
        rtol=config.rel_tol, atol=config.abs_tol, max_step=config.max_step,
    )
    times = [t0]
    states = [y0.copy()]
    interpolants = [] if dense else None
    steps = 0
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationError(
                f"step failure: {message or 'step size underflow'}", time=solver.t
            )
        steps += 1
        if steps > config.max_steps:
            raise StepLimitError(
                f"exceeded max_steps = {config.max_steps}", time=solver.t
            )
        times.append(solver.t)
        states.append(solver.y.copy())
        if dense:
            interpolants.append(solver.dense_output())

    sol = OdeSolution(np.asarray(times), interpolants) if dense else None
    return Trajectory(np.asarray(times), np.asarray(states), sol)


def _refine_crossing(
    system: RHS,
    segment,
    component: int,
    t_lo: float,
    t_hi: float,
    g_lo: float,
) -> float:
    # Safeguarded Newton on the dense-output polynomial: the derivative of
    # the tracked component is just the vector field evaluated on the
    # interpolated state, so Newton steps are cheap; any step that leaves
    # the bracket falls back to bisection.
    t = 0.5 * (t_lo + t_hi)
    for _ in range(200):
        y = segment(t)
        g = float(y[component])
        if g == 0.0:
            return t
        if (g < 0.0) == (g_lo < 0.0):
            t_lo = t
        else:
            t_hi = t
        dg = float(system(t, y)[component])
        t_next = t - g / dg if dg != 0.0 else 0.5 * (t_lo + t_hi)
        if not t_lo < t_next < t_hi:
            t_next = 0.5 * (t_lo + t_hi)
        if abs(t_next - t) <= 1e-13 * (1.0 + abs(t)):
            return t_next
        t = t_next
    return t


def find_zero_crossing(
    system: RHS,
    initial_state: Sequence[float] | np.ndarray,
    component: int,
    *,
    direction: str = "any",
    t_start: float = 0.0,
    t_max: float | None = None,
    config: IntegratorConfig = IntegratorConfig(),
) -> float:
    """First time t > t_start at which state[component] crosses zero.

    direction selects "rising" (- to +), "falling" (+ to -) or "any" strict
    sign change.  A component that starts exactly at zero does not count as
    its own crossing.  The crossing time is refined on the dense output to
    ~1e-13 relative, well inside the 1e-10 contract.
    """
    if direction not in ("rising", "falling", "any"):
        raise DomainError(f"unknown direction {direction!r}")
    y0 = np.asarray(initial_state, dtype=float)
    if not 0 <= component < y0.size:
        raise DomainError(f"component {component} out of range for state size {y0.size}")
    t_bound = math.inf if t_max is None else float(t_max)
    if t_bound <= t_start:
        raise DomainError("t_max must exceed t_start")

    solver = DOP853(
        system, float(t_start), y0, t_bound,
        rtol=config.rel_tol, atol=config.abs_tol, max_step=config.max_step,
    )
    g_prev = float(y0[component])
    t_prev = float(t_start)
    steps = 0
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationError(
                f"step failure while searching for crossing: {message}", time=solver.t
            )
        steps += 1
        g_new = float(solver.y[component])
        crossed = (
            (direction == "rising" and g_prev < 0.0 <= g_new)
            or (direction == "falling" and g_prev > 0.0 >= g_new)
            or (direction == "any" and g_prev != 0.0 and g_prev * g_new <= 0.0)
        )
        if crossed and g_new == 0.0:
            return solver.t
        if crossed and g_prev * g_new < 0.0:
            segment = solver.dense_output()
            return _refine_crossing(system, segment, component, t_prev, solver.t, g_prev)
        if steps > config.max_steps:
            raise NoCrossingError(
                f"no {direction} crossing of component {component} within "
                f"max_steps = {config.max_steps}",
                time=solver.t,
            )
        t_prev, g_prev = solver.t, g_new

    raise NoCrossingError(
        f"no {direction} crossing of component {component} in "
        f"({t_start}, {t_bound})",
        time=t_bound,
    )
