"""Perceptron learners driven by classical or Grover-style search black boxes."""
from .base import (
    BudgetExceededError,
    QsearchBox,
    SolveReport,
    UniformClassicalBox,
    get_black_box,
)
from .cutting_plane import (
    Cut,
    CutPolytope,
    InfeasibleStartError,
    WalkersExhaustedError,
    affine_transform_from_points,
    chord_through,
    cutting_plane_rounds,
    cutting_plane_solve,
    hit_and_run_chain,
    hit_and_run_step,
    membership,
)
from .ellipsoid import EllipsoidBreakdownError, EllipsoidState, ellipsoid_rounds, ellipsoid_solve
from .perceptron import online_perceptron, version_space_mc_perceptron
