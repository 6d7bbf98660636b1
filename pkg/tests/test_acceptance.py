"""Acceptance criteria, one test each, at the stated sizes and tolerances.

The terminal summary prints one PASS/FAIL line per criterion.  Suite reports
are cached per module so a suite run is shared by the criteria that read it.
"""
import json
import math

import pytest

from pettylab import bodies as bd, operators as op
from pettylab.harness.config import SUITES
from pettylab.harness.runner import run_suite
from pettylab.sobolev import aubin_talenti

pytestmark = pytest.mark.slow

S = bd.MatShape

CONFIGS = {
    "petty": {"suite": "petty", "n": 2, "p": [1, 2, 3], "Q": ["simplex", "square", "box"],
              "count": 200, "pairs": 6, "cases": 5},  # 6 pairs x 9 (p, Q) combinations = 54
    "duality": {"suite": "duality"},
    "fixed_point": {"suite": "fixed_point"},
    "busemann_petty": {"suite": "busemann_petty", "p": [1, 2], "count": 50},
    "steiner": {"suite": "steiner"},
    "projfind": {"suite": "projfind"},
    "opnorm": {"suite": "opnorm"},
    "santalo": {"suite": "santalo"},
    "sobolev": {"suite": "sobolev"},
}

# reduced sizes for the rerun check; the code paths are the same as above
SMALL = {
    "petty": {"count": 3, "pairs": 2, "cases": 1, "Q": ["unit_segment", "simplex"], "p": [1, 2]},
    "busemann_petty": {"count": 2, "cases": 1, "p": [2]},
    "duality": {"count": 3, "samples": 20_000},
    "fixed_point": {},
    "steiner": {"count": 2, "polygons": 3, "cases": 2, "probes": 5_000},
    "projfind": {"count": 3, "cases": 2},
    "opnorm": {"count": 2, "samples": 20_000, "probes": 50},
    "santalo": {"count": 3, "cases": 2, "p": [2]},
    "sobolev": {"p": [2], "Q": ["sym_segment"], "radial": 48},
}

_cache = {}


def report(suite):
    if suite not in _cache:
        _cache[suite] = run_suite(CONFIGS[suite])
    return _cache[suite]


def cases(rep, *needles):
    return [c for c in rep.cases if all(n in c.case for n in needles)]


def summarize(rep, groups):
    """'name k/N' for each group of case-id fragments, plus the failing ids."""
    parts, bad = [], []
    for label, needles in groups:
        cs = cases(rep, *needles)
        ok = sum(c.passed for c in cs)
        parts.append(f"{label} {ok}/{len(cs)}")
        bad += [c.case for c in cs if not c.passed]
        assert cs, f"no cases matched {needles}"
    return ", ".join(parts), bad


def test_criterion_01_classical_petty(record_property):
    half = bd.Segment(S(1, 1), [-0.5], [0.5])
    disk = op.petty_product(bd.Ball(S(2, 1)), half, 1).value
    square = op.petty_product(bd.make_standard("cube", S(2, 1)), half, 1).value
    d_rel = abs(disk / (math.pi ** 2 / 4) - 1)
    ok = d_rel <= 5e-3 and abs(square - 2) <= 1e-9
    record_property("detail", f"disk {disk:.6f} (rel err {d_rel:.1e}), square {square:.12f}")
    assert ok


def test_criterion_02_lp_petty_fuzz(record_property):
    rep = report("petty")
    text, bad = summarize(rep, [("polygons <= ball", ["polygon-"]), ("ellipsoids = ball", ["ellipsoid-"]),
                                ("affine pairs", ["affine-"]), ("references", ["/ball"])])
    record_property("detail", text + (f"; failing {bad[:5]}" if bad else ""))
    assert len(cases(rep, "polygon-")) == 200 * 9 and len(cases(rep, "affine-")) >= 50
    assert not bad


def test_criterion_03_duality(record_property):
    rep = report("duality")
    a = cases(rep, "analytic")[0]
    gap = max(abs(a.lhs - 4 * math.pi), abs(a.rhs - 4 * math.pi)) / (4 * math.pi)
    text, bad = summarize(rep, [("randomized", ["random-"])])
    record_property("detail", f"analytic lhs {a.lhs:.9f} rhs {a.rhs:.9f} (rel {gap:.1e}); {text}")
    assert gap <= 1e-6 and len(cases(rep, "random-")) == 20 and not bad


def test_criterion_04_ellipsoid_fixed_point(record_property):
    rep = report("fixed_point")
    c1 = cases(rep, "n=2/m=1/p=1")[0]
    c2 = cases(rep, "n=2/m=2/p=2")[0]
    e1 = abs(c1.lhs / (1 / (3 * math.pi)) - 1)
    e2 = abs(c2.lhs / math.sqrt(1 / (3 * math.pi)) - 1)
    record_property("detail", f"m=1: {c1.lhs:.6f} (rel {e1:.1e}), m=2: {c2.lhs:.6f} (rel {e2:.1e})")
    assert e1 <= 1e-2 and e2 <= 2e-2 and c1.passed and c2.passed


def test_criterion_05_busemann_petty_fuzz(record_property):
    rep = report("busemann_petty")
    text, bad = summarize(rep, [("ellipsoid stars", ["ellipsoid-"]), ("box stars", ["box-"]),
                                ("equality", ["equality-"])])
    record_property("detail", text + (f"; failing {bad[:5]}" if bad else ""))
    assert len(cases(rep, "ellipsoid-")) + len(cases(rep, "box-")) >= 50 and not bad


def test_criterion_06_steiner(record_property):
    rep = report("steiner")
    text, bad = summarize(rep, [("area/idempotence", ["area-"]), ("volume gain", ["volume-gain-"]),
                                ("inclusion", ["inclusion-"]), ("chain", ["chain-"])])
    record_property("detail", text)
    assert len(cases(rep, "volume-gain-")) == 20 and len(cases(rep, "inclusion-", "/inclusion")) == 5
    assert not bad


def test_criterion_07_projfind(record_property):
    rep = report("projfind")
    text, bad = summarize(rep, [("R^2", ["r2-"]), ("R^3", ["r3-"]), ("symmetric", ["symmetric-"])])
    worst = max(c.lhs for c in rep.cases if c.case.startswith(("r2-", "r3-")))
    record_property("detail", f"{text}; worst certificate {worst:.1e}")
    assert len(cases(rep, "r2-")) == 50 and len(cases(rep, "r3-")) == 20 and not bad


def test_criterion_08_operator_norm_and_p_infinity(record_property):
    rep = report("opnorm")
    text, bad = summarize(rep, [("gauge vs brute force", ["spectral-probes"]), ("inequality", ["theorem-"]),
                                ("p=64 within 2%", ["p64-limit"])])
    p64 = cases(rep, "p64-limit")[0]
    record_property("detail", f"{text}; p=64 max relative gap {p64.extra['max_relative_gap']:.4f} "
                    "(structural, see the decisions ledger)")
    assert not bad


def test_criterion_09_santalo(record_property):
    rep = report("santalo")
    text, bad = summarize(rep, [("classical", ["classical-0"]), ("disk", ["classical-disk"]),
                                ("Lp random", ["random-"]), ("Lp equality", ["equality"])])
    record_property("detail", text)
    assert len(cases(rep, "classical-0")) == 50 and len(cases(rep, "random-")) >= 20 and not bad


def test_criterion_10_sobolev(record_property):
    rep = report("sobolev")
    ext = cases(rep, "/extremal")
    gau = cases(rep, "/gaussian")
    orc = cases(rep, "a-vs-radial-oracle")[0]
    ratios = ", ".join(f"{c.case.split('/')[0]}/{c.case.split('/')[-1]} {c.extra.get('ratio', c.rhs):.4f}"
                       for c in ext + gau)
    record_property("detail", f"{ratios}; a_2,3 {orc.lhs:.5f} vs oracle {orc.rhs:.5f}")
    assert {c.case.split("/")[0] for c in ext} == {"Q=sym_segment", "Q=simplex"}
    assert orc.lhs == pytest.approx(aubin_talenti(2, 3))
    assert all(c.passed for c in ext + gau + [orc])


def test_criterion_11_reproducibility(record_property):
    same = []
    for suite in SUITES:
        doc = {"suite": suite, "seed": 123, **SMALL[suite]}
        a = run_suite(doc).payload()
        b = run_suite(doc).payload()
        ids = [c["case"] for c in a["cases"]]
        assert len(ids) == len(set(ids)), f"{suite}: duplicate case ids"
        same.append(json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True))
    record_property("detail", f"{sum(same)}/{len(same)} suites bit-identical on rerun")
    assert all(same)
