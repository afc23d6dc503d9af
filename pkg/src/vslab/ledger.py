"""Query and cost accounting shared by the simulators and solvers."""
import threading
from dataclasses import dataclass, field, fields

COUNTERS = (
    "classical_queries",
    "quantum_queries",
    "membership_queries",
    "walk_applications",
    "arithmetic_ops",
    "check_queries",
)


@dataclass
class QueryLedger:
    """Nondecreasing cost counters.

    ``classical_queries`` are Boolean evaluations of f_w on single examples,
    ``quantum_queries`` are coherent oracle calls (one per Grover iterate or
    phase-estimation power), ``membership_queries`` are calls to a convex-body
    membership oracle, ``walk_applications`` count controlled quantum-walk steps and
    ``arithmetic_ops`` count scalar work charged by cost models. ``check_queries``
    collects the full-pass version-space checks solvers use as a stop test; they
    are kept apart so complexity fits can exclude them.
    """

    classical_queries: int = 0
    quantum_queries: int = 0
    membership_queries: int = 0
    walk_applications: int = 0
    arithmetic_ops: int = 0
    check_queries: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def charge(self, **amounts):
        with self._lock:
            for name, value in amounts.items():
                if name not in COUNTERS:
                    raise KeyError(f"unknown counter {name!r}")
                value = int(value)
                if value < 0:
                    raise ValueError("ledger counters never decrease")
                setattr(self, name, getattr(self, name) + value)

    def merge(self, other):
        self.charge(**other.as_dict())
        return self

    def __add__(self, other):
        out = QueryLedger(**self.as_dict())
        return out.merge(other)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name in COUNTERS}

    def copy(self):
        return QueryLedger(**self.as_dict())
