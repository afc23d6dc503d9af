"""Cutting-plane learner whose walker population is a simulated quantum sample.

The walk register ranges over the lattice points of the unit ball. Each accepted cut
transports the current state towards the uniform state on the new body by pi/3
amplification, with the exact reflection about the new uniform state and the
phase-estimation reflection about the old one. The next query point is the mean of
the transported state.
"""
from dataclasses import dataclass, field

import numpy as np

from ..geometry import in_version_space
from ..ledger import QueryLedger
from ..rng import make_rng
from ..solvers.base import charge_check, finish, get_black_box, inner_retries
from ..solvers.cutting_plane import Cut, CutPolytope, cutting_plane_rounds
from .amplify import estimate_mean_nondestructive, pi3_amplify, reflection_count
from .grid import EmptyGridError, build_kernel, discretize
from .szegedy import OMEGA, ReducedApproxReflection, SpectralWalk, StateReflection


@dataclass
class RoundTrace:
    round: int
    grid_points: int
    overlap: float
    target_fidelity: float
    leakage: float
    vs_mass: float
    eps2: float
    register: tuple
    mean: np.ndarray = field(repr=False)


def extended_transition(base, mask, laziness):
    """Walk on the masked sub-grid, extended by 'stay put' on the remaining base points."""
    sub = base.subset(mask)
    kernel = build_kernel(sub, laziness, require_connected=False)
    n = len(base)
    p = np.eye(n)
    idx = np.flatnonzero(mask)
    p[np.ix_(idx, idx)] = kernel.transition
    return p, kernel.components


def uniform_on(mask):
    v = mask.astype(complex)
    return v / np.linalg.norm(v)


def transport_walk_uses(depth, walk_uses_per_reflection):
    """Controlled-walk uses of one transport: (3^depth - 1)/2 source reflections."""
    return reflection_count(depth) // 2 * walk_uses_per_reflection


def algorithm3_run(dataset, gamma_lb, epsilon=0.01, spacing=0.1, ancilla_bits=8, depth=2,
                   seed=None, laziness=0.5, black_box="qsearch", literal_z0=False):
    """Run the quantum-sample cutting-plane learner on a low-dimensional dataset.

    Returns ``(final_state, report)``; ``final_state`` holds amplitudes over the ball grid.
    Per accepted cut the ledger is charged transport * (1 + D + D^2) walk applications:
    one transport, D for the mean estimate and D copies of D uses for the affine
    transform (costed only; the walk already runs on an isotropic lattice).
    """
    box = get_black_box(black_box)
    rng = make_rng(seed)
    dim = dataset.dim
    ball = CutPolytope(dim)
    base = discretize(ball, spacing)
    n = len(base)
    in_vs = np.all(base.points @ dataset.signed.T > 0.0, axis=1)
    mask = np.ones(n, dtype=bool)
    alpha = uniform_on(mask)
    polytope = ball
    transition, _ = extended_transition(base, mask, laziness)
    walk = SpectralWalk.from_transition(transition)
    rounds = cutting_plane_rounds(dim, gamma_lb)
    retries = inner_retries(epsilon, rounds)
    ledger = QueryLedger()
    z = np.zeros(dim)
    z_query = np.zeros(dim)
    traces, walk_total = [], 0
    updates = done = 0
    for done in range(1, rounds + 1):
        charge_check(dataset, ledger)
        if updates and in_version_space(z, dataset):
            done -= 1
            break
        idx = None
        for _ in range(retries):
            idx = box.attempt(dataset, z_query, ledger, rng)
            if idx is not None and float(z @ dataset.signed[idx]) <= 0.0:
                break
            idx = None
        if idx is None:
            continue
        polytope = polytope.add(Cut(dataset.signed[idx], z.copy()))
        new_mask = mask & polytope.contains_many(base.points)
        if not new_mask.any():
            raise EmptyGridError(f"round {done}: the cut leaves no grid point")
        overlap = new_mask.sum() / mask.sum()
        target = uniform_on(new_mask)
        source = ReducedApproxReflection(walk, ancilla_bits)
        target_reflection = StateReflection(np.concatenate([target, np.zeros(n)]), OMEGA)
        state = pi3_amplify(source.embed(alpha), source, target_reflection, depth)
        kept = state[:n, 0]
        leak = 1.0 - float(np.vdot(kept, kept).real)
        alpha = kept / np.linalg.norm(kept)
        transport = transport_walk_uses(depth, source.walk_uses)
        # each target reflection marks with the cut predicate and unmarks again
        ledger.charge(walk_applications=transport, membership_queries=reflection_count(depth))
        z = estimate_mean_nondestructive(alpha, base, ledger, transport_cost=transport)
        ledger.charge(walk_applications=dim * dim * transport)
        walk_total += transport * (1 + dim + dim * dim)
        mask = new_mask
        transition, _ = extended_transition(base, mask, laziness)
        walk = SpectralWalk.from_transition(transition)
        updates += 1
        if not literal_z0:
            z_query = z
        probs = np.abs(alpha) ** 2
        traces.append(RoundTrace(done, int(mask.sum()), float(overlap),
                                 float(abs(np.vdot(target, alpha)) ** 2), leak,
                                 float(probs[in_vs].sum()), source.eps2, (source.a, source.c),
                                 z.copy()))
    report = finish(dataset, z, done, updates, ledger, [t.mean for t in traces],
                    traces=traces, vs_mass=float((np.abs(alpha) ** 2)[in_vs].sum()),
                    expected_walk_applications=walk_total, grid=base, round_limit=rounds)
    return alpha, report
