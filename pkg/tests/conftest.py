import numpy as np
import pytest

from brlkit.testing import random_dims, random_minimal, random_stable

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def acceptance_log():
    def log(number, name, passed, detail=''):
        ACCEPTANCE_LINES.append(
            f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {name}  {detail}")
    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def stable_pool(rng, count, **kw):
    return [random_stable(rng, *random_dims(rng), **kw) for _ in range(count)]


def minimal_pool(rng, count, **kw):
    return [random_minimal(rng, *random_dims(rng), **kw) for _ in range(count)]


def disk_points(rng, count, radius=0.999):
    r = radius * np.sqrt(rng.uniform(0, 1, count))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, count))


def opnorm(X):
    return float(np.linalg.norm(X, 2)) if np.size(X) else 0.0
