"""Online ellipsoid method with a search black box as separation oracle."""
import math
from dataclasses import dataclass

import numpy as np

from ..geometry import in_version_space
from ..ledger import QueryLedger
from ..rng import make_rng
from .base import charge_check, finish, get_black_box, inner_retries

PD_FLOOR = 1e-12


class EllipsoidBreakdownError(ArithmeticError):
    """The shape matrix lost positive definiteness."""


@dataclass
class EllipsoidState:
    """Ellipsoid {v : (v - center)^T shape^-1 (v - center) <= 1}."""

    center: np.ndarray
    shape: np.ndarray

    @classmethod
    def unit_ball(cls, dim):
        return cls(np.zeros(dim), np.eye(dim))

    def contains(self, v):
        d = np.asarray(v, dtype=np.float64) - self.center
        return float(d @ np.linalg.solve(self.shape, d)) <= 1.0

    def update(self, direction):
        """Central cut keeping {v : (v - center) . direction >= 0}; returns the volume ratio."""
        dim = self.center.shape[0]
        if dim < 2:
            raise ValueError("the ellipsoid update needs D >= 2")
        a = self.shape
        ad = a @ direction
        quad = float(direction @ ad)
        if not quad > 0.0:
            raise EllipsoidBreakdownError("cut direction has non-positive A-norm")
        b = ad / math.sqrt(quad)
        new = dim * dim / (dim * dim - 1.0) * (a - 2.0 / (dim + 1.0) * np.outer(b, b))
        new = 0.5 * (new + new.T)
        eig = np.linalg.eigvalsh(new)
        if eig[0] <= PD_FLOOR:
            raise EllipsoidBreakdownError(f"smallest eigenvalue {eig[0]:.3g} <= {PD_FLOOR}")
        ratio = math.sqrt(math.exp(np.linalg.slogdet(new)[1] - np.linalg.slogdet(a)[1]))
        self.center = self.center + b / (dim + 1.0)
        self.shape = new
        return ratio


def ellipsoid_rounds(dim, gamma_lb):
    return math.ceil(2 * dim * dim * math.log(dim / gamma_lb))


def volume_ratio_bound(dim):
    """Per-update volume ratio of the central-cut ellipsoid step."""
    return dim / (dim + 1.0) * (dim * dim / (dim * dim - 1.0)) ** ((dim - 1) / 2.0)


def ellipsoid_solve(dataset, gamma_lb, epsilon=0.01, black_box="uniform-classical", seed=None,
                    record=False):
    """Shrink an ellipsoid around the version space, starting from the unit ball.

    Runs ceil(2 D^2 ln(D / gamma_lb)) rounds; each round makes up to ceil(log_{3/4}(eps/r))
    black-box attempts and stops at the first verified mistake.
    """
    box = get_black_box(black_box)
    rng = make_rng(seed)
    dim = dataset.dim
    if dim < 2:
        raise ValueError("the ellipsoid update needs D >= 2")
    rounds = ellipsoid_rounds(dim, gamma_lb)
    retries = inner_retries(epsilon, rounds)
    ledger = QueryLedger()
    state = EllipsoidState.unit_ball(dim)
    trajectory = [state.center.copy()] if record else None
    ratios = []
    updates = 0
    done = 0
    for done in range(1, rounds + 1):
        charge_check(dataset, ledger)
        if updates and in_version_space(state.center, dataset):
            done -= 1
            break
        for _ in range(retries):
            idx = box.attempt(dataset, state.center, ledger, rng)
            if idx is not None:
                ratios.append(state.update(dataset.signed[idx]))
                updates += 1
                if record:
                    trajectory.append(state.center.copy())
                break
    return finish(dataset, state.center, done, updates, ledger, trajectory,
                  black_box=box.name, round_limit=rounds, retries=retries,
                  volume_ratios=ratios, shape=state.shape.copy())
