"""Central tolerance policy.

Every numerical comparison in the library and in the verification suites
reads its thresholds from a :class:`Tolerances` record, so one override
propagates everywhere.
"""
from dataclasses import dataclass, fields, replace
import math


@dataclass(frozen=True)
class Tolerances:
    closed_form: float = 1e-9      # closed-form and exact-polytope paths
    identity: float = 1e-12        # definitional identities (sums, images)
    quadrature: float = 1e-6       # relative slack for deterministic product rules
    sigma: float = 3.0             # multiplier of the standard error
    lp: float = 1e-10              # simplex pivoting / feasibility
    bisection: float = 1e-12       # root and radial bisection
    certificate: float = 1e-6      # rank-one projection certificate
    probe: float = 1e-6            # inclusion probes
    coplanar: float = 1e-10        # facet merging, relative to diameter
    discretization: float = 1e-4   # relative floor when a support function is polygonized

    def with_overrides(self, **kw):
        known = {f.name for f in fields(self)}
        bad = set(kw) - known
        if bad:
            raise KeyError(f"unknown tolerance keys: {sorted(bad)}")
        return replace(self, **kw)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def allows(self, margin, stderr=0.0, scale=1.0, rel=None):
        """Decide ``margin <= 0`` up to ``sigma*stderr`` plus a deterministic floor.

        ``rel`` is the relative floor applied to ``scale`` (defaults to the
        quadrature tolerance).
        """
        if math.isnan(margin) or margin == math.inf:
            return False  # an infinite scale would otherwise make the floor infinite too
        rel = self.quadrature if rel is None else rel
        slack = self.sigma * stderr + rel * abs(scale)
        return bool(margin <= slack)


DEFAULT = Tolerances()
