"""Suite configuration: JSON schema, per-suite defaults, parsing.

Defaults (anything not given in the config file):

============== === === ========= ================= ======= ===================
suite           n   m  p         Q                 count   other
============== === === ========= ================= ======= ===================
petty           2   1  [1]       unit_segment      50      pairs 10, cases 5
busemann_petty  2   2  [1, 2]    simplex           20      cases 5
duality         2   1  [1]       sym_segment       20      samples 200000
fixed_point     2   1  [1]       sym_segment       --      directions 100
steiner         2   1  [1]       unit_segment      20      polygons 50, probes 100000, cases 5
projfind        --  --  --       --                50      cases 20 (R^3 bodies)
opnorm          2   2  --       --                20      samples 1000000, probes 1000, directions 100
santalo         2   1  [1, 2]    sym_segment       50      cases 20
sobolev         3   1  [2]       sym_segment,      --      radial 128
                               simplex
============== === === ========= ================= ======= ===================

All suites share seed 0, quadrature {size 4096, replicates 8} and the
central tolerance policy.
"""
from dataclasses import dataclass, field
import copy
import json

import jsonschema

from ..errors import ConfigError
from ..tolerance import DEFAULT, Tolerances

SUITES = ("petty", "busemann_petty", "duality", "fixed_point", "steiner", "projfind", "opnorm",
          "santalo", "sobolev")

_TOL_KEYS = {k: {"type": "number", "exclusiveMinimum": 0} for k in DEFAULT.as_dict()}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["suite"],
    "properties": {
        "suite": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "n": {"type": "integer", "minimum": 1, "maximum": 3},
        "m": {"type": "integer", "minimum": 1, "maximum": 3},
        "p": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 1}},
        "Q": {"type": "array", "minItems": 1, "items": {"type": ["string", "object"]}},
        "count": {"type": "integer", "minimum": 0},
        "vertices": {"type": "integer", "minimum": 3},
        "cases": {"type": "integer", "minimum": 0},
        "pairs": {"type": "integer", "minimum": 0},
        "polygons": {"type": "integer", "minimum": 0},
        "samples": {"type": "integer", "minimum": 1},
        "probes": {"type": "integer", "minimum": 1},
        "directions": {"type": "integer", "minimum": 1},
        "radial": {"type": "integer", "minimum": 8},
        "quadrature": {
            "type": "object", "additionalProperties": False,
            "properties": {"size": {"type": "integer", "minimum": 16},
                           "replicates": {"type": "integer", "minimum": 1, "maximum": 64},
                           "ball_size": {"type": "integer", "minimum": 16}},
        },
        "tolerances": {"type": "object", "additionalProperties": False, "properties": _TOL_KEYS},
        "functions": {"type": "array", "items": {"type": "object"}},
        "out": {"type": "string"},
    },
}

_COMMON = {"seed": 0, "quadrature": {"size": 4096, "replicates": 8}, "tolerances": {}, "out": "reports"}

DEFAULTS = {
    "petty": {"n": 2, "m": 1, "p": [1], "Q": ["unit_segment"], "count": 50, "vertices": 8, "pairs": 10,
              "cases": 5},
    "busemann_petty": {"n": 2, "m": 2, "p": [1, 2], "Q": ["simplex"], "count": 20, "cases": 5},
    "duality": {"n": 2, "m": 1, "p": [1], "Q": ["sym_segment"], "count": 20, "vertices": 7,
                "samples": 200_000},
    "fixed_point": {"n": 2, "m": 1, "p": [1], "Q": ["sym_segment"], "directions": 100},
    "steiner": {"n": 2, "m": 1, "p": [1], "Q": ["unit_segment"], "count": 20, "polygons": 50, "vertices": 8,
                "probes": 100_000, "cases": 5},
    "projfind": {"count": 50, "cases": 20},
    "opnorm": {"n": 2, "m": 2, "count": 20, "vertices": 8, "samples": 1_000_000, "probes": 1000,
               "directions": 100},
    "santalo": {"n": 2, "m": 1, "p": [1, 2], "Q": ["sym_segment"], "count": 50, "vertices": 8, "cases": 20},
    "sobolev": {"n": 3, "m": 1, "p": [2], "Q": ["sym_segment", "simplex"], "radial": 128},
}


@dataclass
class SuiteConfig:
    suite: str
    raw: dict
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __getitem__(self, key):
        return self.raw[key]

    def get(self, key, default=None):
        return self.raw.get(key, default)

    @property
    def seed(self):
        return self.raw["seed"]

    def to_json(self):
        return copy.deepcopy(self.raw)


def _fill(doc):
    out = copy.deepcopy(_COMMON)
    out.update(copy.deepcopy(DEFAULTS[doc["suite"]]))
    for k, v in doc.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = {**out[k], **v}
        else:
            out[k] = v
    return out


def make_config(doc, seed=None, out=None):
    """Validate a config document and fill in defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("a configuration must be a JSON object")
    suite = doc.get("suite")
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; available suites: {', '.join(SUITES)}")
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(x) for x in e.absolute_path) or "(top level)"
        hint = ""
        if e.absolute_path and e.absolute_path[0] == "p":
            hint = " (the Lp operators are defined for p >= 1 only)"
        raise ConfigError(f"invalid configuration at {where}: {e.message}{hint}") from None
    full = _fill(doc)
    if seed is not None:
        full["seed"] = int(seed)
    if out is not None:
        full["out"] = str(out)
    tol = DEFAULT.with_overrides(**full["tolerances"])
    full["tolerances"] = tol.as_dict()
    return SuiteConfig(suite, full, tol)


def config_parse(path, seed=None, out=None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from None
    return make_config(doc, seed, out)
