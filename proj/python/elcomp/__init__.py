"""Python access to the elcomp certifier."""

import json

from ._core import (
    ElcompError,
    canonical_dump,
    evaluate,
    grid_id,
    principal_eigenvalue,
    version,
)
from ._core import run_command as _run_command

__all__ = [
    "ElcompError",
    "Result",
    "canonical_dump",
    "certify",
    "evaluate",
    "grid_id",
    "principal_eigenvalue",
    "run",
    "version",
]


class Result:
    def __init__(self, exit_code, report_json, text):
        self.exit_code = exit_code
        self.report_json = report_json
        self.report = json.loads(report_json)
        self.text = text

    @property
    def verdict(self):
        return self.report.get("verdict")

    def __repr__(self):
        return f"Result(exit_code={self.exit_code}, verdict={self.verdict!r})"


def run(command, problem, **options):
    """Run a CLI command in-process. Options use the CLI names with underscores."""
    return Result(*_run_command(command, str(problem), options))


def certify(problem, **options):
    return run("certify", problem, **options)
