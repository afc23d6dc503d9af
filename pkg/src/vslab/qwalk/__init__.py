"""Quantum-walk simulation on lattice discretizations of the version space."""
from .algorithm3 import RoundTrace, algorithm3_run
from .amplify import (
    estimate_mean_nondestructive,
    overlap_lower_bound_check,
    pi3_amplify,
    reflection_count,
)
from .grid import (
    DisconnectedGridError,
    EmptyGridError,
    EpsilonGrid,
    GridTooLargeError,
    WalkKernel,
    build_kernel,
    discretize,
    lattice_in_ball,
)
from .szegedy import (
    OMEGA,
    ApproxReflection,
    ReducedApproxReflection,
    ResourceGuardError,
    SpectralWalk,
    StateReflection,
    SzegedyWalk,
    build_szegedy,
    choose_register_split,
    reduced_to_full,
)
