import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from overrides import override
from scipy.optimize import linear_sum_assignment
from typing_extensions import TypedDict

from a2nchain.bethe import BetheSolution, RootConfiguration, SolveFailure
from a2nchain.bethe.eigenvalue import energy, probe_eigenvalue
from a2nchain.bethe.equations import (
    at_fixed_point,
    canonicalize,
    configurations_match,
    equation_residuals,
    has_collision,
    root_distance,
)
from a2nchain.bethe.labels import dynkin_label, expected_multiplicity
from a2nchain.bethe.seeds import SeedStrategy
from a2nchain.bethe.tables import SolutionTable, load_tables, table_seeds
from a2nchain.config import Component, Settings, System
from a2nchain.errors import PoleError
from a2nchain.reps import IrrepLabel, weyl_dimension
from a2nchain.types import ModelParams

logger = logging.getLogger(__name__)

Outcome = Union[BetheSolution, SolveFailure]
Vector = npt.NDArray[np.complex128]

MIN_DAMPING = 1.0 / 1024
# Largest distance a refined root may drift from a six-digit printed value.
PRINTED_PRECISION = 1e-5


def _max_abs(r: Vector) -> float:
    return float(np.max(np.abs(r))) if r.size else 0.0


def _residual_fn(
    m: Tuple[int, ...], p: ModelParams
) -> Callable[[Vector], Optional[Vector]]:
    def F(x: Vector) -> Optional[Vector]:
        try:
            r = equation_residuals(RootConfiguration.from_flat(x, m).levels, p)
        except (PoleError, OverflowError, ZeroDivisionError):
            return None
        return r if np.all(np.isfinite(r)) else None

    return F


def _jacobian(
    F: Callable[[Vector], Optional[Vector]], x: Vector, step: float
) -> Optional[Vector]:
    """Central differences along each complex coordinate.

    The residuals are holomorphic in the roots, so a real step gives the
    complex derivative.
    """
    cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = step
        fp, fm = F(x + e), F(x - e)
        if fp is None or fm is None:
            return None
        cols.append((fp - fm) / (2 * step))
    return np.column_stack(cols)


def newton_solve(
    seed: RootConfiguration,
    p: ModelParams,
    settings: Optional[Settings] = None,
) -> Outcome:
    """Damped Newton refinement of a seed; returns a canonical solution or the
    reason it failed."""
    s = settings if settings is not None else Settings()
    m = seed.m
    label = dynkin_label(m, p, p.algebra)
    F = _residual_fn(m, p)

    x = seed.flat()
    r = F(x)
    if r is None:
        return SolveFailure("pole", float("inf"), 0)
    norm = _max_abs(r)
    iterations = 0

    while norm >= s.newton_tol:
        if iterations >= s.newton_max_iter:
            return SolveFailure("diverged", norm, iterations)
        J = _jacobian(F, x, s.newton_step)
        if J is None:
            return SolveFailure("pole", norm, iterations)
        cond = float(np.linalg.cond(J))
        if not np.isfinite(cond) or cond > s.newton_max_condition:
            return SolveFailure("singular", norm, iterations)
        step = np.linalg.solve(J, -r)

        t = 1.0
        while t >= MIN_DAMPING:
            trial = x + t * step
            rt = F(trial)
            if rt is not None and _max_abs(rt) < (1 - 1e-4 * t) * norm:
                x, r, norm = trial, rt, _max_abs(rt)
                break
            t /= 2
        else:
            return SolveFailure("stalled", norm, iterations)
        iterations += 1
        logger.debug(f"Newton m={m} iteration {iterations}: residual {norm:.3e}")

    roots = RootConfiguration.from_flat(x, m)
    if has_collision(roots, s.collision_tol):
        return SolveFailure("collision", norm, iterations)
    if at_fixed_point(roots, s.dedup_tol):
        return SolveFailure("fixed_point", norm, iterations)

    canonical = canonicalize(roots)
    try:
        probes = tuple(
            probe_eigenvalue(canonical, u, p, s.probe_redraws) for u in s.probes()
        )
        e = energy(canonical, p)
    except PoleError:
        return SolveFailure("probe_pole", norm, iterations)
    return BetheSolution(
        roots=canonical,
        residual=norm,
        dynkin=label,
        dimension=weyl_dimension(label),
        energy=e,
        probes=probes,
        iterations=iterations,
    )


@dataclass
class SearchResult:
    m: Tuple[int, ...]
    dynkin: IrrepLabel
    dimension: int
    expected: int
    solutions: List[BetheSolution]
    seeds_tried: int
    failures: Dict[str, int] = field(default_factory=dict)
    rejected: int = 0

    @property
    def found(self) -> int:
        return len(self.solutions)

    @property
    def complete(self) -> bool:
        return self.found >= self.expected


class TableRowCheck(TypedDict):
    table: int
    m: List[int]
    printed: int
    refined: int
    label_matches: bool
    degeneracy_matches: bool
    max_drift: float
    max_residual: float
    passed: bool


class BetheSolver(Component):
    """Runs Newton refinements on a worker pool and searches each cardinality
    sector for distinct solutions."""

    _settings: Settings
    _seeds: SeedStrategy
    _executor: Optional[ThreadPoolExecutor]

    def __init__(self, system: System):
        super().__init__(system)
        self._settings = system.settings
        self._seeds = self.require(SeedStrategy)
        self._executor = None

    @override
    def start(self) -> None:
        super().start()
        if self._executor is None:
            self._executor = ThreadPoolExecutor(
                max_workers=self._settings.worker_threads,
                thread_name_prefix="newton",
            )

    @override
    def stop(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
        super().stop()

    def solve(self, seed: RootConfiguration, p: ModelParams) -> Outcome:
        return newton_solve(seed, p, self._settings)

    def solve_batch(
        self, seeds: Sequence[RootConfiguration], p: ModelParams
    ) -> List[Outcome]:
        """Outcomes in seed order, whatever order the workers finish in."""
        if self._executor is None:
            return [self.solve(seed, p) for seed in seeds]
        return list(self._executor.map(lambda seed: self.solve(seed, p), seeds))

    def completeness_search(
        self,
        m: Sequence[int],
        p: ModelParams,
        budget: int,
        seed: int = 0,
        expected: Optional[int] = None,
        validator: Optional[Callable[[BetheSolution], bool]] = None,
        use_tables: bool = True,
    ) -> SearchResult:
        m = tuple(int(x) for x in m)
        algebra = p.algebra
        label = dynkin_label(m, p, algebra)
        if expected is None:
            expected = expected_multiplicity(
                m, p, algebra, cap=self._settings.max_irrep_dim
            )

        if sum(m) == 0:
            seeds = [RootConfiguration.empty(p.n)]
        else:
            printed = table_seeds(p, m) if use_tables else []
            seeds = printed + self._seeds.generate(
                m, p, max(0, budget - len(printed)), seed
            )

        # With nothing predicted, one batch is enough to notice a surprise.
        batch = self._settings.seed_batch_size
        limit = len(seeds) if expected > 0 else min(len(seeds), batch)
        solutions: List[BetheSolution] = []
        tol = self._settings.dedup_tol
        failures: Counter = Counter()
        rejected = 0
        tried = 0

        while tried < limit and (expected == 0 or len(solutions) < expected):
            chunk = seeds[tried : min(tried + batch, limit)]
            for outcome in self.solve_batch(chunk, p):
                if isinstance(outcome, SolveFailure):
                    failures[outcome.reason] += 1
                    continue
                if any(
                    configurations_match(outcome.roots, known.roots, tol)
                    for known in solutions
                ):
                    continue
                if validator is not None and not validator(outcome):
                    rejected += 1
                    continue
                solutions.append(outcome)
            tried += len(chunk)

        solutions.sort(
            key=lambda sol: (
                round(abs(sol.energy), 9),
                [(round(u.real, 9), round(u.imag, 9)) for u in sol.roots.flat()],
            )
        )
        result = SearchResult(
            m=m,
            dynkin=label,
            dimension=weyl_dimension(label),
            expected=expected,
            solutions=solutions,
            seeds_tried=tried,
            failures=dict(failures),
            rejected=rejected,
        )
        if result.found < expected:
            logger.warning(
                f"m={m}: found {result.found} of {expected} expected solutions "
                f"after {tried} seeds"
            )
        elif result.found > expected:
            logger.warning(
                f"m={m}: found {result.found} solutions but only {expected} predicted"
            )
        else:
            logger.info(f"m={m}: found all {expected} solutions after {tried} seeds")
        return result

    def check_table(self, table: SolutionTable) -> List[TableRowCheck]:
        """Refine every printed solution and compare with the printed digits."""
        p = table.params()
        dedup = self._settings.dedup_tol
        checks: List[TableRowCheck] = []
        for row in table.rows:
            printed = row.known()
            outcomes = self.solve_batch(printed, p)
            refined: List[BetheSolution] = []
            drift = 0.0
            worst = 0.0
            ok = True
            for start, outcome in zip(printed, outcomes):
                if isinstance(outcome, SolveFailure):
                    logger.warning(
                        f"table {table.number} m={row.m}: seed failed ({outcome.reason})"
                    )
                    ok = False
                    continue
                worst = max(worst, outcome.residual)
                if not configurations_match(
                    outcome.roots, canonicalize(start), PRINTED_PRECISION
                ):
                    ok = False
                drift = max(drift, _drift(outcome.roots, canonicalize(start)))
                if not any(
                    configurations_match(outcome.roots, r.roots, dedup)
                    for r in refined
                ):
                    refined.append(outcome)

            label = dynkin_label(row.m, p, table.algebra)
            label_ok = label.labels == row.label
            deg_ok = weyl_dimension(label) == row.deg
            passed = ok and label_ok and deg_ok and len(refined) == len(printed)
            checks.append(
                {
                    "table": table.number,
                    "m": list(row.m),
                    "printed": len(printed),
                    "refined": len(refined),
                    "label_matches": label_ok,
                    "degeneracy_matches": deg_ok,
                    "max_drift": drift,
                    "max_residual": worst,
                    "passed": passed,
                }
            )
        return checks


def _drift(a: RootConfiguration, b: RootConfiguration) -> float:
    worst = 0.0
    for la, lb in zip(a.levels, b.levels):
        if not la:
            continue
        cost = np.array([[root_distance(x, y) for y in lb] for x in la])
        rows, cols = linear_sum_assignment(cost)
        worst = max(worst, float(cost[rows, cols].max()))
    return worst


def check_tables(
    solver: BetheSolver, tables: Optional[Sequence[SolutionTable]] = None
) -> List[TableRowCheck]:
    checks: List[TableRowCheck] = []
    for table in tables if tables is not None else load_tables():
        checks.extend(solver.check_table(table))
    return checks
