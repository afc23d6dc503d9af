"""Shared pieces of the solvers: search black boxes and the solve report."""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..geometry import in_version_space, misclassified_mask
from ..ledger import QueryLedger
from ..qsearch import MarkedOracle, qsearch


class BudgetExceededError(RuntimeError):
    """The requested run needs more samples or queries than its budget allows."""


@dataclass
class SolveReport:
    solution: np.ndarray
    rounds: int
    updates: int
    ledger: QueryLedger
    converged: bool
    trajectory: Optional[list] = None
    info: dict = field(default_factory=dict)

    def as_row(self):
        row = {
            "converged": self.converged,
            "rounds": self.rounds,
            "updates": self.updates,
        }
        row.update(self.ledger.as_dict())
        return row


def finish(dataset, w, rounds, updates, ledger, trajectory=None, **info):
    """Build a report whose `converged` flag is decided by an explicit version-space check."""
    w = np.asarray(w, dtype=np.float64)
    ok = bool(np.any(w != 0.0)) and in_version_space(w, dataset)
    return SolveReport(w.copy(), rounds, updates, ledger, ok, trajectory, dict(info))


def charge_check(dataset, ledger):
    """Full classical pass used as a stop test; logged apart from the search cost."""
    ledger.charge(check_queries=dataset.size)


class UniformClassicalBox:
    """Finds a misclassified example by drawing examples uniformly at random.

    One attempt is N draws; each draw is one classical query.
    """

    name = "uniform-classical"
    batch = 4096

    def _draw(self, dataset, w, ledger, rng, limit):
        bad = misclassified_mask(w, dataset)
        n = dataset.size
        done = 0
        while done < limit:
            size = min(self.batch, limit - done)
            idx = rng.integers(0, n, size=size)
            hits = np.flatnonzero(bad[idx])
            if hits.size:
                ledger.charge(classical_queries=int(hits[0]) + 1)
                return int(idx[hits[0]])
            ledger.charge(classical_queries=size)
            done += size
        return None

    def attempt(self, dataset, w, ledger, rng):
        return self._draw(dataset, w, ledger, rng, dataset.size)

    def search(self, dataset, w, delta, ledger, rng):
        """Up to ceil(N ln(1/delta)) draws, enough to fail with probability <= delta."""
        limit = max(1, math.ceil(dataset.size * math.log(1.0 / delta)))
        return self._draw(dataset, w, ledger, rng, limit)


class QsearchBox:
    """Finds a misclassified example with the unknown-count Grover search.

    One attempt is one qsearch call (success probability >= 1/4 when a mistake exists).
    """

    name = "qsearch"

    def oracle(self, dataset, w, ledger):
        margins = dataset.signed @ np.asarray(w, dtype=np.float64)
        bad = margins <= 0.0
        return MarkedOracle(dataset.size, lambda i: bool(bad[i]), ledger, mask=lambda: bad)

    def attempt(self, dataset, w, ledger, rng):
        return qsearch(self.oracle(dataset, w, ledger), rng)

    def search(self, dataset, w, delta, ledger, rng):
        """Up to ceil(log_{4/3}(1/delta)) qsearch attempts."""
        oracle = self.oracle(dataset, w, ledger)
        for _ in range(max(1, math.ceil(math.log(1.0 / delta) / math.log(4.0 / 3.0)))):
            idx = qsearch(oracle, rng)
            if idx is not None:
                return idx
        return None


BLACK_BOXES = {"uniform-classical": UniformClassicalBox, "classical": UniformClassicalBox,
               "qsearch": QsearchBox, "quantum": QsearchBox}


def get_black_box(box):
    if isinstance(box, str):
        try:
            return BLACK_BOXES[box]()
        except KeyError:
            raise ValueError(f"unknown black box {box!r}") from None
    return box


def inner_retries(epsilon, rounds):
    """Attempts per round so that all rounds fail with total probability <= epsilon."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    return max(1, math.ceil(math.log(epsilon / rounds) / math.log(0.75)))
