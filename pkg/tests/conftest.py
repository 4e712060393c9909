import time

import pytest

from aqcfactor import ProblemSpec
from aqcfactor.evolve import default_steps, evolve

REFERENCE_TIMES = (10.0, 30.0, 100.0)

_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


class RunCache:
    """Memoised N=6 reference-setting runs shared across test modules."""

    def __init__(self):
        self._runs = {}
        self.wall = {}

    def get(self, T: float, n_max: int = 22, factor: int = 1):
        key = (T, n_max, factor)
        if key not in self._runs:
            spec = ProblemSpec.default(6, n_max=n_max, total_time=T)
            t0 = time.perf_counter()
            self._runs[key] = evolve(spec, factor * default_steps(T))
            self.wall[key] = time.perf_counter() - t0
        return self._runs[key]


@pytest.fixture(scope="session")
def n6_runs():
    return RunCache()
