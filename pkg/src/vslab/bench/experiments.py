"""Experiment drivers behind the ``vslab`` command line."""
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..bounds import asymptotic_lower_bound, mc_version_space_probability, sector_probability
from ..datasets import (
    cone_dataset,
    load_dataset,
    mohri_hard_dataset,
    mohri_margin_bound,
    padded_separable_dataset,
    random_separable_dataset,
)
from ..geometry import Dataset, in_version_space, max_margin
from ..ledger import QueryLedger
from ..qwalk.algorithm3 import algorithm3_run
from ..rng import child_seeds, make_rng
from ..solvers import (
    QsearchBox,
    UniformClassicalBox,
    cutting_plane_solve,
    ellipsoid_solve,
    online_perceptron,
    version_space_mc_perceptron,
)
from . import plots
from .io import write_config, write_csv

CENSOR_BELOW = 1e-6
FIG1_COLUMNS = ["family", "d", "gamma", "margin_bound", "mc", "mc_stderr", "hits", "trials",
                "censored", "lemma2", "eq4", "eq5"]
SCALING_COLUMNS = ["n", "variant", "trials", "mean_classical_queries", "mean_quantum_queries",
                   "stderr"]
SOLVE_COLUMNS = ["algo", "dataset", "d", "n", "gamma_lb", "converged", "in_version_space",
                 "rounds", "updates", "classical_queries", "quantum_queries",
                 "membership_queries", "walk_applications", "arithmetic_ops", "check_queries"]
WALK_COLUMNS = ["round", "grid_points", "overlap", "target_fidelity", "leakage", "vs_mass",
                "eps2", "a", "c", "mean_x", "mean_y"]
ALGOS = ("perceptron", "perceptron-q", "vs-mc", "vs-mc-grover", "ellipsoid", "cutting-plane",
         "qwalk")


class InputError(ValueError):
    """Bad flags, configuration or dataset input (exit code 4)."""


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 0
    trials: Optional[int] = None
    out: Optional[str] = None
    svg: bool = False
    workers: int = 1
    d_range: str = "2-6"
    n_range: str = "16-16384"
    family: str = "mohri"
    gammas: str = "0.1,0.15,0.2,0.3"
    min_hits: int = 0
    max_trials: int = 0
    workload: str = "perceptron"
    dataset: str = "mohri"
    d: int = 2
    n: int = 64
    margin: float = 0.1
    algo: str = "ellipsoid"
    black_box: str = "qsearch"
    gamma_lb: str = "auto"
    epsilon: float = 0.01
    delta: float = 0.01
    walk_steps: Optional[int] = None
    m_points: Optional[int] = None
    spacing: float = 0.1
    ancilla_bits: int = 8
    depth: int = 2
    literal_z0: bool = False

    def __post_init__(self):
        if self.trials is not None and self.trials < 1:
            raise InputError("trials must be >= 1")
        if self.workers < 1:
            raise InputError("workers must be >= 1")


def parse_range(text, powers_of_two=False):
    """'a-b' is an inclusive range (doubling when `powers_of_two`); 'a,b,c' is a list."""
    text = str(text).strip()
    try:
        if "," in text:
            values = [int(v) for v in text.split(",") if v.strip()]
        elif "-" in text:
            lo, hi = (int(v) for v in text.split("-", 1))
            if powers_of_two:
                values = []
                v = lo
                while v <= hi:
                    values.append(v)
                    v *= 2
            else:
                values = list(range(lo, hi + 1))
        else:
            values = [int(text)]
    except ValueError:
        raise InputError(f"cannot parse range {text!r}") from None
    if not values:
        raise InputError(f"range {text!r} is empty")
    return values


def _prepare_out(cfg):
    if not cfg.out:
        raise InputError("--out is required for this experiment")
    try:
        os.makedirs(cfg.out, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {cfg.out}: {exc}") from None
    if not os.access(cfg.out, os.W_OK):
        raise InputError(f"output directory {cfg.out} is not writable")
    values = asdict(cfg)
    keys = getattr(cfg, "echo_keys", None) or values
    write_config(os.path.join(cfg.out, f"{cfg.experiment}.config"),
                 {k: values[k] for k in keys if k != "experiment"})


def _mc_adaptive(dataset, trials, seed, min_hits, max_trials, workers):
    """MC estimate, doubling the sample size until `min_hits` hits or `max_trials`."""
    n = trials
    while True:
        est = mc_version_space_probability(dataset, n, seed, workers=workers)
        if est.hits >= min_hits or n >= max_trials:
            return est
        n = min(2 * n, max_trials)


def fig1_rows(cfg):
    dims = parse_range(cfg.d_range)
    if min(dims) < 2 or max(dims) > 12:
        raise InputError("fig1 dimensions must lie in 2..12")
    trials = cfg.trials or 1_000_000
    max_trials = max(trials, cfg.max_trials or trials)
    if cfg.family == "mohri":
        jobs = [(d, None) for d in dims]
    elif cfg.family == "cone":
        gammas = [float(g) for g in cfg.gammas.split(",")]
        jobs = [(d, g) for d in dims for g in gammas]
    else:
        raise InputError(f"unknown family {cfg.family!r}")
    seeds = child_seeds(cfg.seed, len(jobs))
    rows = []
    for (d, g), s in zip(jobs, seeds):
        if cfg.family == "mohri":
            data = mohri_hard_dataset(d)
            gamma = max_margin(data).margin
            bound = mohri_margin_bound(d)
        else:
            data = cone_dataset(d, g)
            gamma, bound = g, None
        est = _mc_adaptive(data, trials, s, cfg.min_hits, max_trials, cfg.workers)
        censored = est.estimate < CENSOR_BELOW
        rows.append(dict(
            family=cfg.family, d=d, gamma=gamma, margin_bound=bound,
            mc=None if censored else est.estimate,
            mc_stderr=None if censored else est.stderr,
            hits=est.hits, trials=est.trials, censored=censored,
            lemma2=sector_probability(gamma, d),
            eq4=asymptotic_lower_bound(gamma, d, "fixed-D"),
            eq5=asymptotic_lower_bound(gamma, d, "large-D"),
        ))
    return rows


def loglog_slope(xs, ys, weights=None):
    """Weighted least-squares slope of log y against log x."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    w = np.ones_like(lx) if weights is None else np.asarray(weights, float)
    return float(np.polyfit(lx, ly, 1, w=np.sqrt(w))[0])


def fig1_slopes(rows):
    """Per-dimension slope of log MC probability against log margin (cone family rows)."""
    out = []
    for d in sorted({r["d"] for r in rows}):
        pts = [r for r in rows if r["d"] == d and r["mc"] is not None]
        if len(pts) < 2:
            continue
        # inverse relative variance weights: hits / (1 - p) per point
        w = [r["hits"] / max(1e-12, 1.0 - r["mc"]) for r in pts]
        out.append(dict(d=d, slope=loglog_slope([r["gamma"] for r in pts],
                                                [r["mc"] for r in pts], w),
                        points=len(pts), expected=d - 1))
    return out


def fig1_experiment(cfg):
    _prepare_out(cfg)
    rows = fig1_rows(cfg)
    path = write_csv(os.path.join(cfg.out, "fig1.csv"), FIG1_COLUMNS, rows)
    outputs = [path]
    slopes = fig1_slopes(rows) if cfg.family == "cone" else []
    if slopes:
        outputs.append(write_csv(os.path.join(cfg.out, "fig1_slopes.csv"),
                                 ["d", "slope", "points", "expected"], slopes))
    if cfg.svg:
        outputs.append(plots.fig1_svg(path, os.path.join(cfg.out, "fig1.svg")))
    return 0, outputs


def _scaling_trial(task):
    workload, n, d, margin, seed = task
    if workload == "search":
        return _search_trial(n, seed)
    data = padded_separable_dataset(d, n, margin, seed=seed)
    out = {}
    for variant, box in (("classical", "uniform-classical"), ("quantum", "qsearch")):
        rep = online_perceptron(data, box, gamma_lb=margin, epsilon=0.01, seed=seed + 1)
        out[variant] = (rep.ledger.classical_queries, rep.ledger.quantum_queries)
    return n, out


def one_mistake_dataset(n, dim=2):
    """N copies of e_1, one of them labelled -1: w = e_1 then has exactly one mistake."""
    X = np.zeros((n, dim))
    X[:, 0] = 1.0
    y = np.ones(n, dtype=np.int64)
    y[0] = -1
    return Dataset(X, y)


def _search_trial(n, seed):
    """Queries for each black box to find the single mistake, retrying attempts until found."""
    rng = make_rng(seed)
    data = one_mistake_dataset(n)
    data = Dataset(data.features[rng.permutation(n)], data.labels)
    w = np.eye(data.dim)[0]
    out = {}
    for variant, box in (("classical", UniformClassicalBox()), ("quantum", QsearchBox())):
        ledger = QueryLedger()
        while box.attempt(data, w, ledger, rng) is None:
            pass
        out[variant] = (ledger.classical_queries, ledger.quantum_queries)
    return n, out


def scaling_rows(cfg):
    ns = parse_range(cfg.n_range, powers_of_two=True)
    trials = cfg.trials or 100
    if cfg.workload not in ("perceptron", "search"):
        raise InputError(f"unknown workload {cfg.workload!r}")
    tasks = []
    for n in ns:
        for t, s in enumerate(child_seeds([cfg.seed, n], trials)):
            tasks.append((cfg.workload, n, cfg.d, cfg.margin, s % (2**62)))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_scaling_trial, tasks, chunksize=8))
    else:
        results = [_scaling_trial(t) for t in tasks]
    rows = []
    for n in ns:
        for variant in ("classical", "quantum"):
            vals = np.array([r[variant] for m, r in results if m == n], dtype=float)
            primary = vals[:, 1] if variant == "quantum" else vals[:, 0]
            err = float(primary.std(ddof=1) / math.sqrt(len(primary))) if len(primary) > 1 else 0.0
            rows.append(dict(n=n, variant=variant, trials=len(vals),
                             mean_classical_queries=float(vals[:, 0].mean()),
                             mean_quantum_queries=float(vals[:, 1].mean()), stderr=err))
    return rows


def scaling_slopes(rows):
    out = []
    for variant in ("classical", "quantum"):
        col = "mean_quantum_queries" if variant == "quantum" else "mean_classical_queries"
        pts = [r for r in rows if r["variant"] == variant]
        out.append(dict(variant=variant,
                        slope=loglog_slope([r["n"] for r in pts], [r[col] for r in pts]),
                        n_min=min(r["n"] for r in pts), n_max=max(r["n"] for r in pts)))
    return out


def scaling_experiment(cfg):
    _prepare_out(cfg)
    rows = scaling_rows(cfg)
    path = write_csv(os.path.join(cfg.out, "scaling.csv"), SCALING_COLUMNS, rows)
    slopes = write_csv(os.path.join(cfg.out, "scaling_slopes.csv"),
                       ["variant", "slope", "n_min", "n_max"], scaling_slopes(rows))
    outputs = [path, slopes]
    if cfg.svg:
        outputs.append(plots.scaling_svg(path, os.path.join(cfg.out, "scaling.svg")))
    return 0, outputs


def build_dataset(cfg):
    kind = cfg.dataset
    try:
        if kind == "mohri":
            return mohri_hard_dataset(cfg.d)
        if kind == "random":
            return random_separable_dataset(cfg.d, cfg.n, cfg.margin, seed=cfg.seed)
        return load_dataset(kind)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from None


def resolve_gamma_lb(cfg, dataset):
    if str(cfg.gamma_lb) == "auto":
        return max_margin(dataset).margin
    try:
        g = float(cfg.gamma_lb)
    except ValueError:
        raise InputError(f"--gamma-lb must be 'auto' or a number, got {cfg.gamma_lb!r}") from None
    if not (0.0 < g <= 1.0):
        raise InputError("--gamma-lb must lie in (0, 1]")
    return g


def run_solver(cfg, dataset, gamma_lb):
    algo = cfg.algo
    if algo == "perceptron":
        return online_perceptron(dataset, "uniform-classical", gamma_lb, cfg.epsilon, cfg.seed)
    if algo == "perceptron-q":
        return online_perceptron(dataset, "qsearch", gamma_lb, cfg.epsilon, cfg.seed)
    if algo in ("vs-mc", "vs-mc-grover"):
        mode = "grover" if algo == "vs-mc-grover" else "classical"
        return version_space_mc_perceptron(dataset, cfg.delta, mode, cfg.seed)
    if algo == "ellipsoid":
        return ellipsoid_solve(dataset, gamma_lb, cfg.epsilon, cfg.black_box, cfg.seed)
    if algo == "cutting-plane":
        return cutting_plane_solve(dataset, gamma_lb, cfg.epsilon, cfg.m_points, cfg.walk_steps,
                                   cfg.black_box, cfg.seed)
    if algo == "qwalk":
        return algorithm3_run(dataset, gamma_lb, cfg.epsilon, cfg.spacing, cfg.ancilla_bits,
                              cfg.depth, cfg.seed, black_box=cfg.black_box,
                              literal_z0=cfg.literal_z0)[1]
    raise InputError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGOS)}")


def solve_command(cfg):
    if cfg.out:
        _prepare_out(cfg)
    dataset = build_dataset(cfg)
    gamma_lb = resolve_gamma_lb(cfg, dataset)
    start = time.perf_counter()
    report = run_solver(cfg, dataset, gamma_lb)
    wall = time.perf_counter() - start
    row = dict(algo=cfg.algo, dataset=cfg.dataset, d=dataset.dim, n=dataset.size,
               gamma_lb=gamma_lb, in_version_space=in_version_space(report.solution, dataset)
               if np.any(report.solution) else False)
    row.update(report.as_row())
    outputs = []
    if cfg.out:
        outputs.append(write_csv(os.path.join(cfg.out, "solve.csv"), SOLVE_COLUMNS, [row]))
    row["wall_time_s"] = round(wall, 6)
    return (0 if report.converged else 2), outputs, row


def walkdemo_command(cfg):
    _prepare_out(cfg)
    dataset = build_dataset(cfg)
    if dataset.dim != 2:
        raise InputError("walkdemo needs a two-dimensional dataset")
    gamma_lb = resolve_gamma_lb(cfg, dataset)
    _, report = algorithm3_run(dataset, gamma_lb, cfg.epsilon, cfg.spacing, cfg.ancilla_bits,
                               cfg.depth, cfg.seed, black_box=cfg.black_box,
                               literal_z0=cfg.literal_z0)
    rows = [dict(round=t.round, grid_points=t.grid_points, overlap=t.overlap,
                 target_fidelity=t.target_fidelity, leakage=t.leakage, vs_mass=t.vs_mass,
                 eps2=t.eps2, a=t.register[0], c=t.register[1], mean_x=float(t.mean[0]),
                 mean_y=float(t.mean[1])) for t in report.info["traces"]]
    path = write_csv(os.path.join(cfg.out, "walkdemo.csv"), WALK_COLUMNS, rows)
    summary = dict(converged=report.converged, rounds=report.rounds, updates=report.updates,
                   final_vs_mass=report.info["vs_mass"], **report.ledger.as_dict())
    spath = write_csv(os.path.join(cfg.out, "walkdemo_summary.csv"), list(summary), [summary])
    outputs = [path, spath]
    if cfg.svg:
        outputs.append(plots.walkdemo_svg(path, os.path.join(cfg.out, "walkdemo.svg")))
    return (0 if report.converged else 2), outputs, summary
