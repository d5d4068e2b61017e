"""The twelve acceptance criteria, each at its stated tolerance.

Every criterion prints one PASS/FAIL line in the terminal summary. Running
this file directly (``python3 tests/test_acceptance.py``) prints the same
lines without pytest.
"""

import sys
import time

import pytest

from pcapmono.cli import run_verify
from pcapmono.verification import ACCEPTANCE, acceptance_check

TITLES = {
    1: "Schwarzschild capacity coupling",
    2: "p = 2 closed form",
    3: "Beta identity",
    4: "ODE exactness",
    5: "alpha >= 0 criterion",
    6: "Rigidity on matched Schwarzschild",
    7: "Monotonicity on the perturbed family",
    8: "k = 0 degenerations",
    9: "Inequality equality cases",
    10: "k-solve",
    11: "Asymptotics",
    12: "Determinism across thread counts",
}

BUDGET_S = {1: 5, 2: 1, 3: 1, 4: 5, 5: 5, 6: 10, 7: 30, 8: 2, 9: 20, 10: 1, 11: 5, 12: 60}

LINES: dict = {}


def _line(n, res, extra=""):
    verdict = "PASS" if res.passed else "FAIL"
    return (f"[{verdict}] A{n:<2d} {TITLES[n]:<38s} measured={res.measured:.3e} "
            f"tol={res.tolerance:.3e} time={res.seconds:.2f}s (budget {BUDGET_S[n]}s) "
            f"{res.detail}{extra}")


@pytest.mark.parametrize("n", sorted(TITLES))
def test_criterion(n):
    res = acceptance_check(n)
    extra = ""
    if n == 12:
        # two verify runs at different thread counts must write identical bytes
        subset = {"rigidity", "monotonicity", "determinism"}
        blobs = []
        for threads in (1, 4):
            import tempfile
            from pathlib import Path
            with tempfile.TemporaryDirectory() as d:
                code = run_verify(out=Path(d), seed=20240611, tol_scale=1.0, threads=threads,
                                  only=subset, stream=open("/dev/null", "w"))
                blobs.append((code, (Path(d) / "verify.csv").read_bytes()))
        same = blobs[0] == blobs[1]
        extra = f"; verify.csv identical at 1 and 4 threads: {same}"
        res = type(res)(res.name, res.passed and same, res.measured, res.tolerance,
                        res.detail, res.seconds)
    LINES[n] = _line(n, res, extra)
    assert res.passed, LINES[n]


def test_all_criteria_registered():
    assert sorted(ACCEPTANCE) == sorted(TITLES)


if __name__ == "__main__":
    failed = 0
    for n in sorted(TITLES):
        res = acceptance_check(n)
        print(_line(n, res))
        failed += not res.passed
    sys.exit(1 if failed else 0)
