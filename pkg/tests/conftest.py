import json
from functools import lru_cache
from pathlib import Path

import pytest

from ksendo.cli import analyze, parse_job
from ksendo.exactfield import BaseField
from ksendo.spinweights import TOTALLY_REAL, FormInput

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def cubic_field():
    return BaseField([1, -3, 0, 1], [[0, 1, 0], [2, -1, -1], [-2, 0, 1]])


def load(name):
    with open(JOBS / f"{name}.json", encoding="utf-8") as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def analysis(name):
    """Pipeline output for a bundled job, computed once per session."""
    job = parse_job(load(name))
    return (job.form,) + analyze(job.form)


def cubic_form(entries):
    """Totally real form over the cubic field; entries are coordinate lists."""
    L = cubic_field()
    return FormInput(TOTALLY_REAL, L, [L.element(e) for e in entries])


@pytest.fixture(scope="session")
def L():
    return cubic_field()


ACCEPTANCE = {}


def record(number, passed, detail=""):
    ACCEPTANCE[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
