"""Command line: ``petty-lab <suite> --config <path> [--seed S] [--out DIR]``.

Exit codes: 0 all cases pass, 1 some case fails, 2 configuration or runtime error.
"""
import argparse
import json
import logging
import sys

from ..errors import ConfigError, PettyLabError
from .config import SUITES, config_parse, make_config
from .runner import failure_lines, report_write, run_suite

log = logging.getLogger("pettylab")


def main(argv=None):
    ap = argparse.ArgumentParser(prog="petty-lab", description="Run a verification suite.")
    ap.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    ap.add_argument("--config", help="JSON config; defaults are used for missing keys")
    ap.add_argument("--seed", type=int, help="master seed (overrides the config)")
    ap.add_argument("--out", help="report directory (overrides the config)")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.config:
            cfg = config_parse(args.config, args.seed, args.out)
            if cfg.suite != args.suite:
                raise ConfigError(f"config is for suite {cfg.suite!r}, not {args.suite!r}")
        else:
            cfg = make_config({"suite": args.suite}, args.seed, args.out)
        rep = run_suite(cfg)
        paths = report_write(rep, cfg["out"])
    except (ConfigError, json.JSONDecodeError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except (PettyLabError, OSError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # a bug, but still a runtime error for the exit-code contract
        log.exception("unexpected failure")
        print(f"runtime error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    n_fail = len(rep.failures)
    print(f"{rep.suite}: {len(rep.cases) - n_fail}/{len(rep.cases)} cases pass "
          f"({rep.wall_clock:.1f} s); report in {', '.join(str(p) for p in paths)}")
    for line in failure_lines(rep):
        print(line)
    return 0 if n_fail == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
