"""Online perceptron with a search black box, and the sample-and-check perceptron."""
import math

import numpy as np

from ..bounds import mc_version_space_probability, required_sample_count
from ..geometry import in_version_space
from ..ledger import QueryLedger
from ..qsearch import MarkedOracle, qsearch
from ..rng import make_rng
from .base import BudgetExceededError, charge_check, finish, get_black_box


def novikoff_rounds(gamma_lb):
    if not (0.0 < gamma_lb <= 1.0):
        raise ValueError("gamma_lb must lie in (0, 1]")
    return math.ceil(1.0 / gamma_lb**2 - 1e-9)


def online_perceptron(dataset, black_box="uniform-classical", gamma_lb=None, epsilon=0.01,
                      seed=None, record=False):
    """Perceptron updates on mistakes supplied by `black_box`.

    Runs at most ceil(1/gamma_lb^2) rounds (the mistake bound); each round asks the box for
    a misclassified example with failure probability epsilon / rounds.
    """
    box = get_black_box(black_box)
    rng = make_rng(seed)
    if gamma_lb is None:
        raise ValueError("gamma_lb is required")
    rounds = novikoff_rounds(gamma_lb)
    delta = epsilon / rounds
    ledger = QueryLedger()
    w = np.zeros(dataset.dim)
    trajectory = [w.copy()] if record else None
    updates = 0
    done = 0
    for done in range(1, rounds + 1):
        charge_check(dataset, ledger)
        if updates and in_version_space(w, dataset):
            done -= 1
            break
        idx = box.search(dataset, w, delta, ledger, rng)
        if idx is None:
            continue
        w = w + dataset.signed[idx]
        updates += 1
        if record:
            trajectory.append(w.copy())
    else:
        charge_check(dataset, ledger)
    return finish(dataset, w, done, updates, ledger, trajectory, black_box=box.name,
                  round_limit=rounds)


def version_space_mc_perceptron(dataset, delta=0.01, mode="classical", seed=None, p=None,
                                pilot_trials=100_000, max_samples=1_000_000,
                                counting_cost=False):
    """Draw K Gaussian hyperplanes and return one that classifies every example correctly.

    K = ceil(ln(1/delta) / p). When `p` is not given it is estimated with a pilot Monte-Carlo
    run. In grover mode, one evaluation of the all-correct predicate on a sample costs N
    quantum queries, or ceil(sqrt(N)) with `counting_cost` (a quantum-counting realisation).
    """
    if mode not in ("classical", "grover"):
        raise ValueError("mode must be 'classical' or 'grover'")
    rng = make_rng(seed)
    n = dataset.size
    ledger = QueryLedger()
    if p is None:
        est = mc_version_space_probability(dataset, pilot_trials, rng)
        if est.hits == 0:
            raise BudgetExceededError(
                f"no perfect hyperplane in {pilot_trials} pilot samples; p < {1.0 / pilot_trials:g}"
                f" so the required sample count exceeds the budget of {max_samples}"
            )
        p = est.estimate
    k = required_sample_count(p, delta)
    if k > max_samples:
        raise BudgetExceededError(
            f"required sample count {k} (p={p:.3g}, delta={delta}) exceeds budget {max_samples}"
        )
    samples = rng.standard_normal((k, dataset.dim))
    good = np.all(samples @ dataset.signed.T > 0.0, axis=1)
    info = dict(mode=mode, samples=k, p=float(p), perfect_samples=int(good.sum()))

    if mode == "classical":
        hit = np.flatnonzero(good)
        scanned = int(hit[0]) + 1 if hit.size else k
        ledger.charge(classical_queries=scanned * n)
        w = samples[hit[0]] if hit.size else np.zeros(dataset.dim)
        return finish(dataset, w, scanned, int(hit.size > 0), ledger, **info)

    per_eval = math.isqrt(n - 1) + 1 if counting_cost else n
    inner = QueryLedger()
    oracle = MarkedOracle(k, lambda i: bool(good[i]), inner, mask=lambda: good)
    attempts = max(1, math.ceil(math.log(1.0 / delta) / math.log(4.0 / 3.0)))
    idx = None
    used = 0
    for used in range(1, attempts + 1):
        idx = qsearch(oracle, rng)
        if idx is not None:
            break
    # each coherent predicate call and each classical verification evaluates all N examples
    ledger.charge(quantum_queries=inner.quantum_queries * per_eval,
                  classical_queries=inner.classical_queries * n)
    info.update(predicate_evaluations=inner.quantum_queries, attempts=used)
    w = samples[idx] if idx is not None else np.zeros(dataset.dim)
    return finish(dataset, w, used, int(idx is not None), ledger, **info)
