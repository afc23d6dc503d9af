"""``vslab`` command line: fig1, scaling, solve and walkdemo.

Exit codes: 0 converged or finished, 2 finished without converging, 3 a query or sample
budget was exceeded, 4 invalid input.
"""
import argparse
import json
import sys
from dataclasses import fields

from ..datasets import DatasetFormatError, RejectionBudgetError
from ..geometry import DimensionError, InseparableError
from ..qwalk.grid import GridTooLargeError
from ..qwalk.szegedy import ResourceGuardError
from ..solvers import BudgetExceededError
from . import experiments
from .experiments import ALGOS, ExperimentConfig, InputError
from .io import read_config

EXIT_OK, EXIT_NOT_CONVERGED, EXIT_BUDGET, EXIT_INPUT = 0, 2, 3, 4
BOOL_FIELDS = {"svg", "literal_z0"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--svg", action="store_true", help="also render an SVG chart")
    p.add_argument("--config", help="key = value file; command-line flags take precedence")
    p.add_argument("--workers", type=int, default=1)


def _dataset_flags(p, default_d=2):
    p.add_argument("--dataset", default="mohri", help="mohri, random or a CSV path")
    p.add_argument("--d", type=int, default=default_d)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--margin", type=float, default=0.1)
    p.add_argument("--gamma-lb", default="auto", help="'auto' (true margin) or a number")
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--black-box", default="qsearch",
                   choices=["uniform-classical", "classical", "qsearch", "quantum"])


def _walk_flags(p):
    p.add_argument("--spacing", type=float, default=0.1)
    p.add_argument("--ancilla-bits", type=int, default=8)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--literal-z0", action="store_true",
                   help="query the search box at the origin instead of the current mean")


def build_parser():
    parser = _Parser(prog="vslab", description="Version-space learning experiments.")
    sub = parser.add_subparsers(dest="experiment", required=True, parser_class=_Parser)

    p = sub.add_parser("fig1", help="version-space probability versus margin")
    _common(p)
    p.add_argument("--d-range", default="2-6")
    p.add_argument("--family", choices=["mohri", "cone"], default="mohri")
    p.add_argument("--gammas", default="0.1,0.15,0.2,0.3")
    p.add_argument("--min-hits", type=int, default=0,
                   help="double the sample size until this many hits")
    p.add_argument("--max-trials", type=int, default=0)

    p = sub.add_parser("scaling", help="classical versus quantum query counts over N")
    _common(p)
    p.add_argument("--n-range", default="16-16384", help="'lo-hi' doubles from lo; or a list")
    p.add_argument("--workload", choices=["perceptron", "search"], default="perceptron")
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--margin", type=float, default=0.2)

    p = sub.add_parser("solve", help="run one learner on one dataset")
    _common(p)
    _dataset_flags(p)
    p.add_argument("--algo", choices=ALGOS, default="ellipsoid")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--walk-steps", type=int)
    p.add_argument("--m-points", type=int)
    _walk_flags(p)

    p = sub.add_parser("walkdemo", help="per-round trace of the walk-based learner in D=2")
    _common(p)
    _dataset_flags(p)
    _walk_flags(p)
    return parser


def _to_bool(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise InputError(f"expected a boolean, got {value!r}")


def parse_config(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            file_values = read_config(args.config)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read config: {exc}") from None
        sub = parser._subparsers._group_actions[0].choices[args.experiment]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(file_values) - known)
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**file_values)
        args = parser.parse_args(argv)
    values = {k: v for k, v in vars(args).items() if k != "config"}
    for key in BOOL_FIELDS & set(values):
        values[key] = _to_bool(values[key])
    allowed = {f.name for f in fields(ExperimentConfig)}
    cfg = ExperimentConfig(**{k: v for k, v in values.items() if k in allowed})
    # only the flags of this verb are echoed, so the echo can be fed back via --config
    cfg.echo_keys = sorted(k for k in values if k in allowed)
    return cfg


def run(cfg):
    if cfg.experiment == "fig1":
        code, outputs = experiments.fig1_experiment(cfg)
        summary = None
    elif cfg.experiment == "scaling":
        code, outputs = experiments.scaling_experiment(cfg)
        summary = None
    elif cfg.experiment == "solve":
        code, outputs, summary = experiments.solve_command(cfg)
    else:
        code, outputs, summary = experiments.walkdemo_command(cfg)
    if summary is not None:
        print(json.dumps(summary, sort_keys=True, default=str))
    for path in outputs:
        print(f"wrote {path}", file=sys.stderr)
    return code


def main(argv=None):
    try:
        cfg = parse_config(argv)
        return run(cfg)
    except BudgetExceededError as exc:
        print(f"vslab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, DatasetFormatError, DimensionError, InseparableError,
            RejectionBudgetError, GridTooLargeError, ResourceGuardError, ValueError) as exc:
        print(f"vslab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
