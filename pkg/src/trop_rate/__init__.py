"""Constrained ratings from multicriteria pairwise comparisons.

Rating vectors are computed by approximating comparison matrices with a
consistent (rank-one) matrix under the worst-case log-ratio error, which in
max-algebra becomes minimizing x~ A x over positive x subject to ratio
bounds Bx <= x.  The package provides the max-algebra core, closed-form
inequality solvers, the constrained minimizer, best / worst differentiating
vectors, three multicriteria pipelines, a grid oracle for independent
verification, and a CLI.
"""

from . import differentiate, kernels, multicriteria, oracle, problem_io, quadratic, solvers
from .core import (
    LOG_TOL,
    NEG_INF,
    InfeasibleError,
    conj_transpose,
    from_ratios,
    kleene_star,
    max_cycle_weight,
    spectral_radius,
    to_ratios,
    trop_identity,
    trop_matmul,
    trop_matvec,
    trop_norm,
    trop_zeros,
)
from .differentiate import best_solution, is_unique, worst_solution
from .multicriteria import (
    ComparisonProblem,
    Ranking,
    SolutionBundle,
    StepRecord,
    lex_max_ordering,
    lex_ordering,
    max_ordering,
    rank_alternatives,
)
from .oracle import GridSpec, grid_extremize_seminorm, grid_min_objective, verify_membership
from .problem_io import emit_report, geometric_mean_ratings, parse_problem
from .solvers import GeneratorSet, solve_closure, solve_upper_bound

__version__ = "0.1.0"
