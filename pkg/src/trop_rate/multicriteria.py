"""End-to-end rating pipelines over several pairwise-comparison matrices.

Given m positive comparison matrices C_l and a nonnegative bound matrix B
(b_ij > 0 requires alternative i to be rated at least b_ij times above j),
each pipeline minimizes the per-criterion ratio objectives x~ C_l x over
positive x with Bx <= x under a different optimality principle:

* max_ordering       minimizes the worst criterion (aggregate by entrywise max);
* lex_ordering       minimizes criteria one at a time in rank order, each step
                     constrained to the previous step's optimal set;
* lex_max_ordering   repeats max-ordering while pruning criteria that cannot
                     improve below the level already reached.

Every step shrinks the feasible set by merging the scaled objective into the
constraint matrix, so a step record carries the merged matrix, the attained
level, the generator of the step's solution set, and the best / worst
differentiating vectors used both for reporting and for the stop test.

Matrices inside records stay in the log domain; rating vectors and levels are
exposed on the plain ratio scale, max-normalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadratic
from .core import (
    LOG_TOL,
    _check,
    _require_square,
    kleene_star,
    spectral_radius,
    to_ratios,
    trop_zeros,
)
from .differentiate import best_solution, is_unique, worst_solution
from .solvers import GeneratorSet

METHOD_MAX = "max-ordering"
METHOD_LEX = "lexicographic"
METHOD_LEXMAX = "lexicographic-max-ordering"


@dataclass(frozen=True)
class ComparisonProblem:
    """m comparison matrices, a bound matrix, and solve options.

    criteria and constraints are log-domain square arrays of one size n.
    Criteria must be positive; reciprocity (c_ij * c_ji = 1) is reported by
    ``reciprocity_report`` but deliberately not enforced, since the whole
    point of approximation is tolerating inconsistent comparisons.  order
    ranks criteria for the lexicographic modes (0-based; None keeps input
    order).  Bound feasibility is validated at solve time, not here.
    """

    criteria: tuple[np.ndarray, ...]
    constraints: np.ndarray | None = None
    names: tuple[str, ...] = ()
    order: tuple[int, ...] | None = None
    alternatives: tuple[str, ...] = ()
    engine: str | None = None
    tol: float = LOG_TOL
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.criteria:
            raise ValueError("at least one comparison matrix required")
        mats = tuple(_require_square(c) for c in self.criteria)
        n = mats[0].shape[0]
        for idx, c in enumerate(mats):
            if c.shape[0] != n:
                raise ValueError("comparison matrices must share one size")
            if not np.all(np.isfinite(c)):
                raise ValueError(f"criterion {idx + 1} has a nonpositive entry")
            if not np.isfinite(spectral_radius(c)):
                raise ValueError(f"criterion {idx + 1} has zero spectral radius")
        object.__setattr__(self, "criteria", mats)
        cons = self.constraints
        cons = trop_zeros((n, n)) if cons is None else _require_square(cons)
        if cons.shape[0] != n:
            raise ValueError("constraint matrix size mismatch")
        object.__setattr__(self, "constraints", cons)
        if self.order is not None:
            if sorted(self.order) != list(range(len(mats))):
                raise ValueError("order must be a permutation of the criteria")
            object.__setattr__(self, "order", tuple(self.order))
        if self.names and len(self.names) != len(mats):
            raise ValueError("one name per criterion expected")
        if self.alternatives and len(self.alternatives) != n:
            raise ValueError("one label per alternative expected")

    @property
    def n(self) -> int:
        return self.criteria[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.criteria)


def reciprocity_report(problem: ComparisonProblem, tol: float = 1e-6):
    """Pairs (criterion, i, j) where c_ij * c_ji strays from 1 beyond tol.

    Deviations are returned, not raised: approximation tolerates them.
    """
    out = []
    for l, c in enumerate(problem.criteria):
        dev = np.abs(c + c.T)
        for i in range(problem.n):
            for j in range(i + 1, problem.n):
                if dev[i, j] > tol:
                    out.append((l, i, j, float(dev[i, j])))
    return out


@dataclass(frozen=True)
class StepRecord:
    """One minimization step: its objective, level, and solution family."""

    index: int
    criteria_used: tuple[int, ...]
    objective_log: np.ndarray
    level: float
    merged_log: np.ndarray
    generator: GeneratorSet
    best: np.ndarray | None
    best_candidates: tuple[np.ndarray, ...]
    best_minimal_unique: bool
    worst: np.ndarray
    unique: bool
    per_criterion_levels: dict[int, float] | None = None
    active_after: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Ranking:
    """Descending ordered partition of alternatives, ties grouped.

    robust means the orders induced by every reported rating vector agree;
    otherwise by_best and by_worst both matter.
    """

    by_best: tuple[tuple[int, ...], ...]
    by_worst: tuple[tuple[int, ...], ...]
    robust: bool

    @property
    def groups(self) -> tuple[tuple[int, ...], ...]:
        return self.by_best


@dataclass(frozen=True)
class SolutionBundle:
    """Final result of a pipeline plus the full step history."""

    method: str
    steps: tuple[StepRecord, ...]
    generator: GeneratorSet
    best: np.ndarray | None
    best_candidates: tuple[np.ndarray, ...]
    best_minimal_unique: bool
    worst: np.ndarray
    unique: bool
    ranking: Ranking


def _order_groups(values_log: np.ndarray, tol: float) -> tuple[tuple[int, ...], ...]:
    idx = sorted(range(len(values_log)), key=lambda i: -values_log[i])
    groups: list[list[int]] = [[idx[0]]]
    for i in idx[1:]:
        if values_log[groups[-1][0]] - values_log[i] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return tuple(tuple(sorted(g)) for g in groups)


def rank_alternatives(bundle: SolutionBundle, tol: float = LOG_TOL) -> Ranking:
    """Rank alternatives by descending rating, from best and worst vectors.

    When the minimal best vector is undetermined, every best candidate must
    induce the same order for the ranking to count as robust.
    """
    if bundle.best is not None:
        best_vectors = [bundle.best]
    else:
        best_vectors = list(bundle.best_candidates)
    orders = [_order_groups(np.log(v), tol) for v in best_vectors]
    worst_order = _order_groups(np.log(bundle.worst), tol)
    robust = all(o == worst_order for o in orders)
    return Ranking(by_best=orders[0], by_worst=worst_order, robust=robust)


def _run_step(
    index: int,
    criteria_used: tuple[int, ...],
    objective_log: np.ndarray,
    prev_constraints: np.ndarray,
    engine: str | None,
    tol: float,
) -> StepRecord:
    res = quadratic.solve(objective_log, prev_constraints, engine=engine, tol=tol)
    best = best_solution(res.generator, tol=tol)
    worst_log = worst_solution(res.generator)
    # cheap pre-check first; collinearity of the generator decides.
    coincide = best.minimal is not None and bool(
        np.all(np.abs(best.minimal - worst_log) <= tol)
    )
    unique = coincide and is_unique(res.generator, tol=tol)
    return StepRecord(
        index=index,
        criteria_used=criteria_used,
        objective_log=objective_log,
        level=math.exp(res.value),
        merged_log=res.merged,
        generator=res.generator,
        best=to_ratios(best.minimal) if best.minimal is not None else None,
        best_candidates=tuple(to_ratios(c) for c in best.candidates),
        best_minimal_unique=best.minimal_unique,
        worst=to_ratios(worst_log),
        unique=unique,
    )


def _bundle(method: str, steps: list[StepRecord], tol: float) -> SolutionBundle:
    last = steps[-1]
    bundle = SolutionBundle(
        method=method,
        steps=tuple(steps),
        generator=last.generator,
        best=last.best,
        best_candidates=last.best_candidates,
        best_minimal_unique=last.best_minimal_unique,
        worst=last.worst,
        unique=last.unique,
        ranking=Ranking((), (), False),
    )
    ranking = rank_alternatives(bundle, tol=tol)
    return SolutionBundle(
        method=bundle.method,
        steps=bundle.steps,
        generator=bundle.generator,
        best=bundle.best,
        best_candidates=bundle.best_candidates,
        best_minimal_unique=bundle.best_minimal_unique,
        worst=bundle.worst,
        unique=bundle.unique,
        ranking=ranking,
    )


def max_ordering(problem: ComparisonProblem) -> SolutionBundle:
    """Minimize the worst criterion: one step over the entrywise maximum."""
    aggregate = np.maximum.reduce(problem.criteria)
    step = _run_step(
        1,
        tuple(range(problem.m)),
        aggregate,
        problem.constraints,
        problem.engine,
        problem.tol,
    )
    return _bundle(METHOD_MAX, [step], problem.tol)


def lex_ordering(problem: ComparisonProblem) -> SolutionBundle:
    """Minimize criteria sequentially in rank order over shrinking sets.

    Stops early once a step's family is a single ray: later steps could not
    change it.
    """
    order = problem.order if problem.order is not None else tuple(range(problem.m))
    steps: list[StepRecord] = []
    constraints = problem.constraints
    for s, l in enumerate(order, start=1):
        step = _run_step(
            s, (l,), problem.criteria[l], constraints, problem.engine, problem.tol
        )
        steps.append(step)
        constraints = step.merged_log
        if step.unique:
            break
    return _bundle(METHOD_LEX, steps, problem.tol)


def lex_max_ordering(problem: ComparisonProblem) -> SolutionBundle:
    """Iterated max-ordering with pruning of already-settled criteria.

    After each step, a criterion stays active only if its minimum over the
    new solution set is strictly below the level just attained; the run
    stops when no criterion is active or the family is a single ray.
    """
    active = tuple(range(problem.m))
    constraints = problem.constraints
    steps: list[StepRecord] = []
    for s in range(1, problem.m + 1):
        aggregate = np.maximum.reduce([problem.criteria[l] for l in active])
        step = _run_step(s, active, aggregate, constraints, problem.engine, problem.tol)
        level_log = math.log(step.level)
        per_criterion: dict[int, float] = {}
        for l in active:
            value = quadratic.min_objective(
                problem.criteria[l], step.merged_log,
                engine=problem.engine, tol=problem.tol,
            )
            per_criterion[l] = math.exp(value)
        next_active = tuple(
            l for l in active
            if level_log > math.log(per_criterion[l]) + problem.tol
        )
        step = StepRecord(
            index=step.index,
            criteria_used=step.criteria_used,
            objective_log=step.objective_log,
            level=step.level,
            merged_log=step.merged_log,
            generator=step.generator,
            best=step.best,
            best_candidates=step.best_candidates,
            best_minimal_unique=step.best_minimal_unique,
            worst=step.worst,
            unique=step.unique,
            per_criterion_levels=per_criterion,
            active_after=next_active,
        )
        steps.append(step)
        constraints = step.merged_log
        active = next_active
        if step.unique or not active:
            break
    return _bundle(METHOD_LEXMAX, steps, problem.tol)
