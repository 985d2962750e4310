import numpy as np
import pytest

from ifcluster.generator import GeneratorConfig, generate


def random_weights(rng, b, u, density=0.5, ensure_served=True):
    """Sparse nonnegative matrix; optionally every user gets at least one edge."""
    w = rng.uniform(0.01, 1.0, size=(b, u)) * (rng.random((b, u)) < density)
    if ensure_served:
        for j in np.flatnonzero(~(w > 0).any(axis=0)):
            w[rng.integers(b), j] = rng.uniform(0.01, 1.0)
    return w


def naive_tinf(bs_classes, user_classes, w):
    """Straight-from-definition evaluation with explicit set membership."""
    b, u = len(w), len(w[0])
    total = 0.0
    for I, J in zip(bs_classes, user_classes):
        if not J:
            continue
        I, J = set(I), set(J)
        inside = sum(w[i][j] for i in I for j in J)
        cut = sum(w[i][j] for i in I for j in range(u) if j not in J)
        cut += sum(w[i][j] for i in range(b) if i not in I for j in J)
        total += cut / inside
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def reference_instance():
    return generate(GeneratorConfig(50, 200, seed=7))


_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record and print one PASS/FAIL line; returns the boolean so tests can assert on it."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.stash[_VERDICTS].append((number, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
