"""Fixed-point pi/3 amplification, grid overlaps and the mean read-off."""
import numpy as np

from .grid import EmptyGridError, discretize


class _Dense:
    def __init__(self, m):
        self.m = np.asarray(m, dtype=complex)

    def apply(self, v):
        return self.m @ v

    def apply_adjoint(self, v):
        return self.m.conj().T @ v


def as_operator(op):
    return op if hasattr(op, "apply") else _Dense(op)


def reflection_count(depth):
    """Reflections used by depth-m recursion: 3^m - 1, half of them of each kind."""
    return 3**depth - 1


def pi3_amplify(start, source_reflection, target_reflection, depth):
    """Apply U_depth to `start`, with U_0 = I and U_{m+1} = U_m R_s U_m^H R_t U_m.

    When both reflections carry the phase e^{i pi/3}, the overlap with the target is at
    least 1 - (1 - p)^(3^depth), with p the initial squared overlap.
    """
    if not (0 <= depth <= 4):
        raise ValueError("depth must lie in 0..4")
    rs = as_operator(source_reflection)
    rt = as_operator(target_reflection)

    def forward(m, v):
        if m == 0:
            return v
        v = forward(m - 1, v)
        v = rt.apply(v)
        v = backward(m - 1, v)
        v = rs.apply(v)
        return forward(m - 1, v)

    def backward(m, v):
        if m == 0:
            return v
        v = backward(m - 1, v)
        v = rs.apply_adjoint(v)
        v = forward(m - 1, v)
        v = rt.apply_adjoint(v)
        return backward(m - 1, v)

    return forward(depth, np.asarray(start, dtype=complex))


def overlap_lower_bound_check(prev_polytope, next_polytope, spacing):
    """|<pi_prev|pi_next>|^2 for uniform states on the two grids, i.e. the count ratio."""
    prev = discretize(prev_polytope, spacing)
    try:
        nxt = discretize(next_polytope, spacing)
    except EmptyGridError:
        raise EmptyGridError("the successor body has no grid point") from None
    prev_set = set(map(tuple, prev.coords.tolist()))
    shared = sum(tuple(c) in prev_set for c in nxt.coords.tolist())
    return shared**2 / (len(prev) * len(nxt))


def estimate_mean_nondestructive(amplitudes, grid, ledger=None, transport_cost=0):
    """Mean point of the measurement distribution sum_x |a_x|^2 x.

    The state is not modified. The estimation circuit is modelled by charging D uses of
    the round's transport unitary, `transport_cost` walk applications each.
    """
    a = np.asarray(amplitudes)
    if a.ndim == 1:
        probs = np.abs(a) ** 2
    else:
        probs = np.sum(np.abs(a) ** 2, axis=1)
    if probs.shape[0] != len(grid):
        raise ValueError("state and grid sizes differ")
    if ledger is not None and transport_cost:
        ledger.charge(walk_applications=grid.dim * transport_cost)
    return probs @ grid.points
