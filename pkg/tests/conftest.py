import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def perm_parity(seq) -> int:
    """Sign of the permutation sorting ``seq`` (inversion count, independent oracle)."""
    seq = list(seq)
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


# acceptance criteria: sub-checks recorded by tests/test_acceptance.py, one line per criterion
ACCEPTANCE: dict = {}


def record_criterion(number: int, check: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.setdefault(number, []).append((check, bool(ok), detail))
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        subs = ACCEPTANCE[k]
        ok = all(s[1] for s in subs)
        failed = [f"{name} ({detail})" for name, good, detail in subs if not good]
        info = "; ".join(failed) if failed else "; ".join(f"{n}: {d}" for n, _, d in subs if d)
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {info}")
