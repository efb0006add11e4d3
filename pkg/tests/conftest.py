import numpy as np
import pytest

from rankclust import _backend
from rankclust.core import build_dataset


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    return request.param


def random_rows(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    return np.argsort(rng.random((n, m)), axis=1) + 1


def random_dataset(rng: np.random.Generator, n: int, m: int, pool: int | None = None):
    """Rows drawn from a pool of ``pool`` distinct rankings so counts exceed 1."""
    if pool is None:
        return build_dataset(random_rows(rng, n, m))
    base = random_rows(rng, pool, m)
    return build_dataset(base[rng.integers(0, pool, n)])


# five rows over four distinct rankings, one repeated, and two centroids
TWO_GROUP_ROWS = [[1, 2, 3, 4], [1, 2, 3, 4], [1, 2, 4, 3], [3, 4, 1, 2], [3, 4, 2, 1]]
TWO_GROUP_CENTROIDS = [[1, 2, 3, 4], [3, 4, 1, 2]]


_RAN: dict[int, str] = {}


def _criterion(nodeid: str) -> int | None:
    name = nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in nodeid and name.startswith("test_c") and name[6:8].isdigit():
        return int(name[6:8])
    return None


def pytest_runtest_logreport(report):
    n = _criterion(report.nodeid)
    if n is not None and (report.when == "call" or report.outcome != "passed"):
        _RAN[n] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _RAN:
        return
    results = getattr(__import__("sys").modules.get("test_acceptance"), "RESULTS", {})
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RAN):
        if n in results:
            ok, detail = results[n]
            terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"criterion {n:2d}: FAIL  ({_RAN[n]} before recording a result)")
