import numpy as np
import pytest

from geofid import ensembles as ens

# acceptance criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")


@pytest.fixture
def rng():
    return ens.make_rng(20240611)


@pytest.fixture
def ket0():
    return np.array([1.0, 0.0], dtype=complex)


@pytest.fixture
def ketp():
    return np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)


def proj(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


@pytest.fixture(scope="session")
def default_suite():
    """Full default suite run (seed 0, 200 trials, dims 2-6) and its wall time."""
    import time

    from geofid.suite import run_suite

    t0 = time.perf_counter()
    report = run_suite(seed=0, trials=200, dims=(2, 3, 4, 5, 6))
    return report, time.perf_counter() - t0
