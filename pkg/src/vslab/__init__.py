"""Version-space sampling, perceptron solvers and small exact quantum-search simulators."""
from . import geometry
from .geometry import (
    Dataset,
    DimensionError,
    InseparableError,
    LabeledExample,
    MarginCertificate,
    angular_distance,
    classify,
    in_version_space,
    is_misclassified,
    max_margin,
)
from .ledger import QueryLedger

__version__ = "0.1.0"
