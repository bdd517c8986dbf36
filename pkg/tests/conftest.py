import numpy as np
import pytest

from uvar.model import moment_set_from_arrays
from uvar.qp import QpInstance

_ACCEPTANCE = []


def probabilistic_instance(rng, k):
    """Means U[-10, 10], variances U(0, 10]."""
    mu = rng.uniform(-10.0, 10.0, k)
    var = 10.0 * (1.0 - rng.random(k))
    return moment_set_from_arrays(mu.tolist(), (var + mu * mu).tolist())


def qp_instance(rng, k):
    """Means U[-3, 3], per-entry kappa - mu^2 in U[-5, 5] with at least one negative."""
    mu = rng.uniform(-3.0, 3.0, k)
    d = rng.uniform(-5.0, 5.0, k)
    if d.min() >= 0:
        d[np.argmin(d)] *= -1.0
    return QpInstance(tuple(mu.tolist()), tuple((d + mu * mu).tolist()))


def simplex_samples(rng, k, n=1000, per_edge=40):
    """Random simplex points: stratified points on every edge, the rest uniform.

    Each of the K(K-1)/2 edges gets ``per_edge`` points, one per stratum of
    width 1/per_edge, so every point of every edge is within 1/per_edge of
    a sample. The remainder is Dirichlet(1).
    """
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    rows = []
    for i, j in edges:
        t = (np.arange(per_edge) + rng.random(per_edge)) / per_edge
        e = np.zeros((per_edge, k))
        e[:, i] = t
        e[:, j] = 1.0 - t
        rows.append(e)
    n_edge = sum(len(r) for r in rows)
    if n - n_edge > 0:
        rows.append(rng.dirichlet(np.ones(k), n - n_edge))
    if not rows:
        return np.ones((n, 1))
    return np.vstack(rows)[:n]


def lipschitz(mu, kappa):
    return 2.0 * (np.max(np.abs(kappa)) + np.max(np.asarray(mu) ** 2))


@pytest.fixture
def rng():
    return np.random.default_rng(20231015)


@pytest.fixture
def bull_bear():
    """Bull N(0.1, 0.4) and bear N(-0.1, 0.4), bull given first."""
    from uvar.model import MomentEntry, build_moment_set

    return build_moment_set(
        [MomentEntry.from_variance("bull", 0.1, 0.4), MomentEntry.from_variance("bear", -0.1, 0.4)]
    )


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(number, ok, detail):
        _ACCEPTANCE.append((number, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
