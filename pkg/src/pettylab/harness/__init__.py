"""Configuration, suite orchestration, reports and the command line."""
from .config import DEFAULTS, SUITES, SuiteConfig, config_parse, make_config
from .runner import report_read, report_write, run_suite

__all__ = ["DEFAULTS", "SUITES", "SuiteConfig", "config_parse", "make_config", "report_read",
           "report_write", "run_suite"]
