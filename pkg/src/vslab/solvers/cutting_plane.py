"""Cutting-plane learner: centroid cuts estimated by hit-and-run walkers.

The feasible body is the unit ball intersected with half-spaces
``(w - anchor) . direction > 0``, one per accepted cut. Walkers only ever touch the body
through a membership oracle; chord endpoints are located by bisection on it.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .. import _kernels
from ..geometry import DimensionError, as_vector, in_version_space
from ..ledger import QueryLedger
from ..rng import make_rng, split
from .base import charge_check, finish, get_black_box, inner_retries

DEFAULT_RIDGE = 1e-8
DEFAULT_TOL = 1e-8


class InfeasibleStartError(ValueError):
    pass


class WalkersExhaustedError(RuntimeError):
    """A cut removed all walkers and no replacement could be found."""


@dataclass(frozen=True, eq=False)
class Cut:
    direction: np.ndarray
    anchor: np.ndarray

    def __post_init__(self):
        d = as_vector(self.direction, "direction")
        a = as_vector(self.anchor, "anchor")
        if d.shape != a.shape:
            raise DimensionError("cut direction and anchor differ in dimension")
        if abs(np.linalg.norm(d) - 1.0) > 1e-9:
            raise ValueError("cut direction must have unit norm")
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "anchor", a)

    @property
    def offset(self):
        return float(self.anchor @ self.direction)


@dataclass(frozen=True, eq=False)
class CutPolytope:
    """Unit ball intersected with the open half-spaces of `cuts`. Adding a cut returns a new body."""

    dim: int
    cuts: tuple = field(default=())

    def __post_init__(self):
        for c in self.cuts:
            if c.direction.shape[0] != self.dim:
                raise DimensionError("cut dimension does not match the body")
        normals = np.array([c.direction for c in self.cuts]).reshape(-1, self.dim)
        offsets = np.array([c.offset for c in self.cuts], dtype=np.float64)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    def add(self, cut):
        return CutPolytope(self.dim, self.cuts + (cut,))

    def __len__(self):
        return len(self.cuts)

    def contains(self, w):
        """Membership without query accounting."""
        return _kernels.member(w, self.normals, self.offsets)

    def contains_many(self, points):
        points = np.asarray(points, dtype=np.float64).reshape(-1, self.dim)
        ok = np.einsum("ij,ij->i", points, points) <= 1.0 + 1e-12
        if len(self.cuts):
            ok &= np.all(points @ self.normals.T > self.offsets, axis=1)
        return ok


def _charge_membership(ledger, polytope, count, quantum_cost_model):
    if ledger is None or count == 0:
        return
    terms = len(polytope.cuts) + 1
    if quantum_cost_model:
        ledger.charge(membership_queries=count, quantum_queries=count * (math.isqrt(terms - 1) + 1))
    else:
        ledger.charge(membership_queries=count, arithmetic_ops=count * terms)


def membership(w, polytope, ledger=None, quantum_cost_model=False):
    """Membership oracle of the body; one call costs t+1 Boolean terms, or ceil(sqrt(t+1))
    quantum queries under the quantum cost model."""
    w = as_vector(w, "w")
    if w.shape[0] != polytope.dim:
        raise DimensionError("point and body differ in dimension")
    _charge_membership(ledger, polytope, 1, quantum_cost_model)
    return polytope.contains(w)


def chord_through(w, direction, polytope, tol=DEFAULT_TOL, ledger=None, quantum_cost_model=False):
    """Feasible parameter range (t_minus, t_plus) of the line w + t*direction, to within tol."""
    w = as_vector(w, "w")
    v = as_vector(direction, "direction")
    if not polytope.contains(w):
        raise InfeasibleStartError("chord start point is outside the body")
    tm, tp, q = _kernels.chord(w, v, polytope.normals, polytope.offsets, tol)
    _charge_membership(ledger, polytope, q, quantum_cost_model)
    return tm, tp


def hit_and_run_step(w, polytope, tol=DEFAULT_TOL, seed=None, ledger=None, direction=None,
                     quantum_cost_model=False):
    """One hit-and-run move: uniform point on the chord through w along a random direction."""
    rng = make_rng(seed)
    w = as_vector(w, "w")
    if direction is None:
        direction = rng.standard_normal(polytope.dim)
    direction = as_vector(direction, "direction")
    tm, tp = chord_through(w, direction, polytope, tol, ledger, quantum_cost_model)
    return w + (tm + rng.random() * (tp - tm)) * direction


def hit_and_run_chain(w, polytope, steps, tol=DEFAULT_TOL, seed=None, ledger=None,
                      transform_inverse=None, quantum_cost_model=False):
    """Run `steps` hit-and-run moves.

    With `transform_inverse` (the inverse of an isotropizing map S), directions are isotropic
    in the S-transformed coordinates, i.e. S^-1 g with g standard normal, which is the same
    walk run in transformed space with membership pulled back through S.
    """
    rng = make_rng(seed)
    w = as_vector(w, "w")
    if not polytope.contains(w):
        raise InfeasibleStartError("chain start point is outside the body")
    g = rng.standard_normal((steps, polytope.dim))
    if transform_inverse is not None:
        g = g @ np.asarray(transform_inverse).T
    u = rng.random(steps)
    x, q = _kernels.hit_and_run_chain(w, g, u, polytope.normals, polytope.offsets, tol)
    _charge_membership(ledger, polytope, q, quantum_cost_model)
    return x


def affine_transform_from_points(points, z, ridge=0.0):
    """Inverse square root of the second moment of (points - z), plus ridge * I."""
    pts = np.asarray(points, dtype=np.float64)
    z = as_vector(z, "z")
    if pts.ndim != 2 or pts.shape[1] != z.shape[0]:
        raise DimensionError("points and z differ in dimension")
    dim = z.shape[0]
    if pts.shape[0] < dim + 1:
        raise ValueError(f"need at least D+1 = {dim + 1} points, got {pts.shape[0]}")
    dev = pts - z
    cov = dev.T @ dev / pts.shape[0] + ridge * np.eye(dim)
    vals, vecs = np.linalg.eigh(0.5 * (cov + cov.T))
    if vals[0] <= 0.0:
        raise np.linalg.LinAlgError("second-moment matrix is singular; use a positive ridge")
    return (vecs / np.sqrt(vals)) @ vecs.T


def _inverse_spd(s):
    vals, vecs = np.linalg.eigh(s)
    return (vecs / vals) @ vecs.T


def uniform_ball(rng, count, dim, batch=None):
    """Uniform points in the unit ball by rejection from the enclosing cube."""
    out, have = [], 0
    batch = batch or max(64, 4 * count)
    while have < count:
        x = rng.uniform(-1.0, 1.0, size=(batch, dim))
        x = x[np.einsum("ij,ij->i", x, x) <= 1.0]
        out.append(x)
        have += x.shape[0]
    return np.concatenate(out)[:count]


def cutting_plane_rounds(dim, gamma_lb):
    return math.ceil(dim * math.log(dim / gamma_lb) / math.log(1.5))


def _refill(rng, survivors, polytope, need, z, walk_steps, tol, ridge, ledger, qcm):
    dim = polytope.dim
    if survivors.shape[0] >= dim + 1:
        s = affine_transform_from_points(survivors, z, ridge)
        s_inv = _inverse_spd(s)
    elif survivors.shape[0] >= 1:
        s_inv = None
    else:
        # no walker left: rejection-sample the body from the ball
        fresh = uniform_ball(rng, 20_000 * dim, dim)
        fresh = fresh[polytope.contains_many(fresh)]
        _charge_membership(ledger, polytope, 20_000 * dim, qcm)
        if fresh.shape[0] == 0:
            raise WalkersExhaustedError("cut removed all walkers and rejection sampling found none")
        survivors = fresh[:need]
        need -= survivors.shape[0]
        s_inv = None
    starts = rng.integers(0, survivors.shape[0], size=need)
    chains = split(rng, need)
    new = [
        hit_and_run_chain(survivors[i], polytope, walk_steps, tol, c, ledger, s_inv, qcm)
        for i, c in zip(starts, chains)
    ]
    if new:
        return np.vstack([survivors, np.array(new)])
    return survivors


def cutting_plane_solve(dataset, gamma_lb, epsilon=0.01, m_points=None, walk_steps=None,
                        black_box="uniform-classical", seed=None, tol=DEFAULT_TOL,
                        ridge=DEFAULT_RIDGE, quantum_cost_model=False, record=False):
    """Cut through approximate centroids until the centroid classifies every example.

    Keeps 2M walkers; after each cut the survivors seed hit-and-run chains of `walk_steps`
    moves in isotropized coordinates to refill the set, M walkers are consumed to estimate
    the next centroid, and the rest carry over.
    """
    box = get_black_box(black_box)
    rng = make_rng(seed)
    dim = dataset.dim
    m = int(m_points or 4 * dim)
    if m < dim + 1:
        raise ValueError("m_points must be at least D+1")
    steps = int(walk_steps or 50 * dim)
    rounds = cutting_plane_rounds(dim, gamma_lb)
    retries = inner_retries(epsilon, rounds)
    ledger = QueryLedger()
    polytope = CutPolytope(dim)
    walkers = uniform_ball(rng, 2 * m, dim)
    z = np.zeros(dim)
    trajectory = [z.copy()] if record else None
    deleted, updates, done = [], 0, 0
    cuts_made = []
    for done in range(1, rounds + 1):
        charge_check(dataset, ledger)
        if updates and in_version_space(z, dataset):
            done -= 1
            break
        idx = None
        for _ in range(retries):
            idx = box.attempt(dataset, z, ledger, rng)
            if idx is not None:
                break
        if idx is None:
            continue
        cut = Cut(dataset.signed[idx], z.copy())
        polytope = polytope.add(cut)
        cuts_made.append(cut)
        keep = polytope.contains_many(walkers)
        _charge_membership(ledger, polytope, walkers.shape[0], quantum_cost_model)
        deleted.append(1.0 - keep.mean())
        walkers = _refill(rng, walkers[keep], polytope, 2 * m - int(keep.sum()), z, steps, tol,
                          ridge, ledger, quantum_cost_model)
        pick = rng.permutation(walkers.shape[0])
        z = walkers[pick[:m]].mean(axis=0)
        walkers = walkers[pick[m:]]
        updates += 1
        if record:
            trajectory.append(z.copy())
    return finish(dataset, z, done, updates, ledger, trajectory, black_box=box.name,
                  round_limit=rounds, retries=retries, deleted_fraction=deleted,
                  polytope=polytope, m_points=m, walk_steps=steps)
