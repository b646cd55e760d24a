"""Stability atlases: grids of Floquet verdicts over amplitude or energy.

A sweep evaluates the (m, n) Hill classification over a grid of initial
amplitudes theta0 (or energies) at fixed load, one cell per grid point.
Cells are computed independently, in deterministic row-major order
(mode pairs outer, grid inner), optionally across worker processes; a
failing cell records the failure in its quality flag instead of aborting
the sweep.  Threshold finding bisects energy between cells whose verdicts
differ.
"""

from __future__ import annotations

import csv
import heapq
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import IO, Sequence

from .duffing import ModeParams, energy_from_initial_amplitude
from .errors import BeamModesError, DomainError
from .hill import DEFAULT_TOL_MARGIN, Verdict, classify_stability
from .integrate import IntegratorConfig
from .regime import cazenave_limit_classify

CSV_HEADER = "gamma,m,n,P,theta0,E,trace,verdict,quality"


class VerdictSource(Enum):
    MONODROMY = "monodromy"
    CAZENAVE_LIMIT = "cazenave-limit"


@dataclass(frozen=True)
class SweepSpec:
    """One atlas sweep: mode pairs x amplitude (or energy) grid at fixed P.

    modes entries are (m, n) integer pairs; for the large-energy limit
    source they may instead be bare gamma values (the grid then only
    echoes into the output).  Exactly one of theta0_grid / energy_grid
    must be given.
    """

    P: float
    modes: Sequence[tuple[int, int] | float]
    theta0_grid: Sequence[float] | None = None
    energy_grid: Sequence[float] | None = None
    verdict_source: VerdictSource = VerdictSource.MONODROMY
    integrator: IntegratorConfig = IntegratorConfig()
    tol_margin: float = DEFAULT_TOL_MARGIN

    def __post_init__(self):
        if (self.theta0_grid is None) == (self.energy_grid is None):
            raise DomainError("give exactly one of theta0_grid or energy_grid")
        grid = self.theta0_grid if self.theta0_grid is not None else self.energy_grid
        if len(grid) == 0:
            raise DomainError("sweep grid must be non-empty")
        values = [float(v) for v in grid]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise DomainError("sweep grid must be strictly increasing")
        if not self.modes:
            raise DomainError("sweep needs at least one mode entry")
        for entry in self.modes:
            if isinstance(entry, (tuple, list)):
                continue
            if self.verdict_source is not VerdictSource.CAZENAVE_LIMIT:
                raise DomainError(
                    "bare gamma entries need the large-energy limit source"
                )


@dataclass(frozen=True)
class AtlasCell:
    gamma: float
    m: int
    n: int
    P: float
    theta0: float
    E: float
    trace: float
    verdict: str
    quality: str

    @property
    def ok(self) -> bool:
        return self.quality == "ok"


def _compute_cell(task: tuple) -> AtlasCell:
    (entry, P, theta0, E, source, integrator, tol_margin) = task
    if isinstance(entry, tuple):
        m, n = entry
        gamma = (n * n) / (m * m)
    else:
        m = n = 0
        gamma = float(entry)
    try:
        if source is VerdictSource.CAZENAVE_LIMIT:
            result = cazenave_limit_classify(gamma, tol_margin=tol_margin)
            trace, verdict = result.trace, result.verdict
        else:
            report = classify_stability(m, n, P, E, config=integrator,
                                        tol_margin=tol_margin)
            trace, verdict = report.monodromy.trace, report.verdict
        return AtlasCell(gamma=gamma, m=m, n=n, P=P, theta0=theta0, E=E,
                         trace=trace, verdict=verdict.value, quality="ok")
    except BeamModesError as exc:
        return AtlasCell(gamma=gamma, m=m, n=n, P=P, theta0=theta0, E=E,
                         trace=math.nan, verdict="none",
                         quality=f"error:{type(exc).__name__}: {exc}")


def _tasks(spec: SweepSpec) -> list[tuple]:
    tasks = []
    by_theta = spec.theta0_grid is not None
    grid = spec.theta0_grid if by_theta else spec.energy_grid
    for entry in spec.modes:
        pair = tuple(entry) if isinstance(entry, (tuple, list)) else float(entry)
        for value in grid:
            value = float(value)
            if isinstance(pair, tuple):
                m = int(pair[0])
                if by_theta:
                    theta0 = value
                    E = energy_from_initial_amplitude(ModeParams(k=m, P=spec.P), value)
                else:
                    theta0 = math.nan
                    E = value
            else:
                theta0 = value if by_theta else math.nan
                E = value if not by_theta else math.nan
            tasks.append((pair, spec.P, theta0, E, spec.verdict_source,
                          spec.integrator, spec.tol_margin))
    return tasks


def sweep(spec: SweepSpec, jobs: int = 1) -> list[AtlasCell]:
    """Evaluate the sweep; the cell order (and every cell value) is
    independent of the worker count."""
    if jobs < 1:
        raise DomainError("jobs must be at least 1")
    tasks = _tasks(spec)
    if jobs == 1:
        return [_compute_cell(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_compute_cell, tasks, chunksize=chunk))


def _interval_score(left: AtlasCell, right: AtlasCell, margin_floor: float) -> float | None:
    """Refinement priority for the gap between two classified cells.

    None means the interval is not worth splitting (a failed cell, or
    both ends already inside the same unstable run).
    """
    if not (left.ok and right.ok):
        return None
    width = right.theta0 - left.theta0
    left_unstable = left.verdict == Verdict.UNSTABLE.value
    right_unstable = right.verdict == Verdict.UNSTABLE.value
    if left_unstable and right_unstable:
        return None
    if left_unstable or right_unstable:
        # boundary already bracketed; sharpen it, but after pocket hunting
        return 2.0 * width
    fmax = max(abs(left.trace), abs(right.trace))
    return width / max(2.0 - fmax, margin_floor)


def adaptive_amplitude_sweep(
    m: int,
    n: int,
    P: float,
    theta0_max: float,
    budget: int,
    *,
    theta0_min: float | None = None,
    backbone: int | None = None,
    integrator: IntegratorConfig = IntegratorConfig(),
    tol_margin: float = DEFAULT_TOL_MARGIN,
    jobs: int = 1,
) -> list[AtlasCell]:
    """Amplitude sweep with a fixed cell budget, concentrated near the
    stability boundary.

    Instability tongues can be orders of magnitude narrower than the
    sweep range, so a uniform grid with an affordable point count steps
    straight over them; |trace| approaches 2 on a much wider shoulder
    around each tongue, though, and that shoulder is what a cheap grid
    can see.  The budget is split: half on a uniform backbone, the rest
    spent one cell at a time bisecting whichever interval is most likely
    to hide a verdict change.  An interval between two stable cells is
    scored width / (2 - max |trace|) (floored at tol_margin), so nearly
    critical shoulders are resolved exponentially finer than quiet
    regions; an interval that already brackets a Stable/Unstable change
    gets a flat width-based score.  Cells come back sorted by theta0,
    and the result is deterministic and independent of jobs.
    """
    if budget < 4:
        raise DomainError("adaptive sweep needs a budget of at least 4 cells")
    if theta0_max <= 0.0:
        raise DomainError("theta0_max must be positive")
    if backbone is None:
        backbone = budget // 2
    if not 2 <= backbone <= budget:
        raise DomainError("backbone must be between 2 and budget")
    if theta0_min is None:
        theta0_min = theta0_max / backbone
    if not 0.0 < theta0_min < theta0_max:
        raise DomainError("need 0 < theta0_min < theta0_max")

    pair = (int(m), int(n))
    params = ModeParams(k=int(m), P=P)

    def task(theta0: float) -> tuple:
        E = energy_from_initial_amplitude(params, theta0)
        return (pair, P, theta0, E, VerdictSource.MONODROMY, integrator,
                tol_margin)

    grid = [theta0_min + i * (theta0_max - theta0_min) / (backbone - 1)
            for i in range(backbone)]
    grid[-1] = theta0_max
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_compute_cell, [task(t) for t in grid],
                                  chunksize=max(1, backbone // (4 * jobs))))
    else:
        cells = [_compute_cell(task(t)) for t in grid]

    heap: list[tuple[float, float, int, int]] = []

    def push(i: int, j: int) -> None:
        score = _interval_score(cells[i], cells[j], tol_margin)
        if score is not None:
            heapq.heappush(heap, (-score, cells[i].theta0, i, j))

    for i in range(backbone - 1):
        push(i, i + 1)

    remaining = budget - backbone
    while remaining > 0 and heap:
        _, _, i, j = heapq.heappop(heap)
        mid = 0.5 * (cells[i].theta0 + cells[j].theta0)
        if not cells[i].theta0 < mid < cells[j].theta0:
            continue  # interval exhausted at float resolution
        cells.append(_compute_cell(task(mid)))
        k = len(cells) - 1
        remaining -= 1
        push(i, k)
        push(k, j)
    return sorted(cells, key=lambda c: c.theta0)


def write_cells_csv(stream: IO[str], cells: Sequence[AtlasCell]) -> None:
    """Fixed schema gamma,m,n,P,theta0,E,trace,verdict,quality; floats are
    written in shortest round-trip form, so identical sweeps give
    byte-identical files."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for c in cells:
        writer.writerow([
            repr(float(c.gamma)), c.m, c.n, repr(float(c.P)),
            repr(float(c.theta0)), repr(float(c.E)), repr(float(c.trace)),
            c.verdict, c.quality,
        ])


def verdict_runs(cells: Sequence[AtlasCell], verdict: Verdict | str) -> list[tuple[int, int]]:
    """Maximal index ranges [start, end] of consecutive cells with the
    given verdict; useful for counting instability windows."""
    want = verdict.value if isinstance(verdict, Verdict) else str(verdict)
    runs = []
    start = None
    for i, cell in enumerate(cells):
        if cell.verdict == want:
            if start is None:
                start = i
        elif start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(cells) - 1))
    return runs


def _verdict_at(m: int, n: int, P: float, E: float,
                integrator: IntegratorConfig, tol_margin: float) -> Verdict:
    report = classify_stability(m, n, P, E, config=integrator,
                                tol_margin=tol_margin)
    return report.verdict


def find_thresholds(
    m: int,
    n: int,
    P: float,
    energies: Sequence[float],
    refinement_tol: float = 1e-4,
    integrator: IntegratorConfig = IntegratorConfig(),
    tol_margin: float = DEFAULT_TOL_MARGIN,
) -> list[float]:
    """Transition energies between Stable and Unstable runs on the grid.

    Each adjacent Stable/Unstable pair is bisected until the bracket
    shrinks below refinement_tol relative to the energy scale.  A Marginal
    verdict, on the grid or during bisection, is already the transition
    locus and is returned as such.
    """
    energies = [float(E) for E in energies]
    if len(energies) < 2:
        raise DomainError("threshold search needs at least two grid energies")
    if any(b <= a for a, b in zip(energies, energies[1:])):
        raise DomainError("energy grid must be strictly increasing")
    if refinement_tol <= 0.0:
        raise DomainError("refinement_tol must be positive")
    verdicts = [_verdict_at(m, n, P, E, integrator, tol_margin) for E in energies]
    thresholds = []
    for i in range(len(energies) - 1):
        lo_v, hi_v = verdicts[i], verdicts[i + 1]
        if lo_v is Verdict.MARGINAL:
            thresholds.append(energies[i])
            continue
        if hi_v is Verdict.MARGINAL or lo_v is hi_v:
            continue
        lo, hi = energies[i], energies[i + 1]
        while hi - lo > refinement_tol * max(abs(lo), abs(hi), refinement_tol):
            mid = 0.5 * (lo + hi)
            v = _verdict_at(m, n, P, mid, integrator, tol_margin)
            if v is Verdict.MARGINAL:
                lo = hi = mid
                break
            if v is lo_v:
                lo = mid
            else:
                hi = mid
        thresholds.append(0.5 * (lo + hi))
    if verdicts[-1] is Verdict.MARGINAL:
        thresholds.append(energies[-1])
    return thresholds
