"""Suite orchestration and report persistence."""
from concurrent.futures import ThreadPoolExecutor
import csv
import json
import os
from pathlib import Path
import time

from ..report import CaseRecord, SuiteReport
from .config import SuiteConfig, make_config
from .suites import SUITE_BUILDERS

CSV_COLUMNS = ["suite", "case", "lhs", "rhs", "margin", "stderr", "pass"]


def _threads():
    try:
        return max(1, int(os.environ.get("PETTYLAB_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(config):
    """Run every case of a suite; records come out ordered by case id."""
    if not isinstance(config, SuiteConfig):
        config = make_config(config)
    t0 = time.perf_counter()
    statement, cases = SUITE_BUILDERS[config.suite](config)
    cases = sorted(cases, key=lambda c: c[0])
    k = _threads()
    if k > 1:
        with ThreadPoolExecutor(k) as ex:
            results = list(ex.map(lambda c: c[1](), cases))
    else:
        results = [fn() for _, fn in cases]
    records = []
    for r in results:
        records.extend(r if isinstance(r, list) else [r])
    rep = SuiteReport(config.suite, statement, config.to_json(), records, config.seed)
    rep.wall_clock = time.perf_counter() - t0
    return rep


def report_write(report, out_dir, formats=("json", "csv")):
    """Write ``<suite>.json`` (full record) and ``<suite>.csv`` (one row per case)."""
    out = Path(out_dir)
    paths = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        if "json" in formats:
            p = out / f"{report.suite}.json"
            p.write_text(report.dumps())
            paths.append(p)
        if "csv" in formats:
            p = out / f"{report.suite}.csv"
            with open(p, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(CSV_COLUMNS)
                for c in report.cases:
                    w.writerow([report.suite, c.case, repr(c.lhs), repr(c.rhs), repr(c.margin), repr(c.stderr),
                                str(c.passed).lower()])
            paths.append(p)
    except OSError as e:
        raise OSError(e.errno, f"cannot write report to {e.filename or out}: {e.strerror}") from None
    return paths


def report_read(path):
    with open(path) as fh:
        return SuiteReport.from_json(json.load(fh))


def failure_lines(report):
    out = []
    for c in report.failures:
        out.append(f"FAIL {report.suite}/{c.case}: lhs={c.lhs:.10g} rhs={c.rhs:.10g} margin={c.margin:.3g} "
                   f"stderr={c.stderr:.3g} replay seed={c.seed}")
    return out


__all__ = ["run_suite", "report_write", "report_read", "failure_lines", "CaseRecord"]
