"""Per-criterion pass/fail reporting for the acceptance suite.

Each acceptance test records its verdict before asserting, so the terminal
summary always carries one line per criterion even when a criterion fails.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "multiplication identities, 500 random pairs, exact, < 30 s",
    2: "structural lemmas: product collapse, five-way equivalence, mixed-sum criterion",
    3: "product-in-class verdict vs operator recovery, 1000 pairs + cases A-E",
    4: "commutation classifier vs direct check, all cases + perturbations + 1000 pairs",
    5: "singular-integral suite vs direct operator equations, 500 pairs each",
    6: "compression composition cases, inner powers in {1,2,3}, sigma exact",
    7: "scalar 2x2 zero-product classification vs multiplication, 10000 matrices",
    8: "numeric oracle concordance at n=32 and section columns through n=64",
    9: "FFT matvec accuracy at n in {64,512,4096} and speed at 4096",
    10: "CLI determinism on golden runs and exit-code contract",
}

_RESULTS: dict = {}
_STARTED: set = set()


def start(num: int) -> None:
    _STARTED.add(num)


def record(num: int, passed: bool, detail: str) -> None:
    _RESULTS[num] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _STARTED:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        if num in _RESULTS:
            passed, detail = _RESULTS[num]
            tag = "PASS" if passed else "FAIL"
            terminalreporter.write_line(f"[{tag}] criterion {num}: {detail}")
        elif num in _STARTED:
            terminalreporter.write_line(f"[FAIL] criterion {num}: errored before verdict")
        else:
            terminalreporter.write_line(f"[----] criterion {num}: not run ({CRITERIA[num]})")
