"""Structured verification records shared by the operators and the harness."""
from dataclasses import dataclass, field
import json
import math

from . import __version__
from .tolerance import DEFAULT


def _clean(x):
    """JSON-safe copy: numpy scalars/arrays become Python values, inf becomes a string."""
    try:
        import numpy as np
    except ImportError:  # pragma: no cover
        np = None
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if np is not None and isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if np is not None and isinstance(x, np.generic):
        return _clean(x.item())
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


@dataclass
class CaseRecord:
    case: str
    lhs: float
    rhs: float
    margin: float
    stderr: float
    passed: bool
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def inequality(cls, case, lhs, rhs, stderr=0.0, tol=DEFAULT, rel=None, seed=None, **extra):
        """Record for ``lhs <= rhs``; margin = lhs - rhs."""
        margin = float(lhs) - float(rhs)
        ok = tol.allows(margin, stderr, scale=max(abs(lhs), abs(rhs)), rel=rel)
        return cls(case, float(lhs), float(rhs), margin, float(stderr), ok, seed, extra)

    @classmethod
    def equality(cls, case, lhs, rhs, stderr=0.0, tol=DEFAULT, rel=None, seed=None, **extra):
        """Record for ``lhs == rhs``; margin = |lhs - rhs|."""
        margin = abs(float(lhs) - float(rhs))
        ok = tol.allows(margin, stderr, scale=max(abs(lhs), abs(rhs)), rel=rel)
        return cls(case, float(lhs), float(rhs), margin, float(stderr), ok, seed, extra)

    def to_json(self):
        return _clean({"case": self.case, "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin,
                       "stderr": self.stderr, "pass": self.passed, "seed": self.seed,
                       "extra": self.extra})

    @classmethod
    def from_json(cls, doc):
        f = float  # also parses the "inf"/"nan" strings written by _clean
        return cls(doc["case"], f(doc["lhs"]), f(doc["rhs"]), f(doc["margin"]), f(doc["stderr"]),
                   bool(doc["pass"]), doc.get("seed"), doc.get("extra", {}))


@dataclass
class SuiteReport:
    suite: str
    statement: str
    config: dict
    cases: list
    master_seed: int = 0
    version: str = __version__
    wall_clock: float = 0.0

    @property
    def verdict(self):
        return all(c.passed for c in self.cases)

    @property
    def failures(self):
        return [c for c in self.cases if not c.passed]

    def payload(self):
        """Everything except timings; this is what must be bit-reproducible."""
        return _clean({"suite": self.suite, "statement": self.statement, "version": self.version,
                       "master_seed": self.master_seed, "config": self.config,
                       "verdict": self.verdict, "cases": [c.to_json() for c in self.cases]})

    def to_json(self):
        doc = self.payload()
        doc["wall_clock"] = self.wall_clock
        return doc

    def dumps(self):
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, doc):
        return cls(doc["suite"], doc["statement"], doc["config"],
                   [CaseRecord.from_json(c) for c in doc["cases"]],
                   doc.get("master_seed", 0), doc.get("version", __version__), doc.get("wall_clock", 0.0))
