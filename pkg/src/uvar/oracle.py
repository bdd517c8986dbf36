"""Brute-force cross-checks for the closed form.

Neither routine looks at pairwise parabola crossings:

* :func:`minimax_oracle` minimises g(m) = max_i E_i[(X - m)^2] over the mean
  interval by ternary search (g is convex, with kinks).
* :func:`simplex_grid` maximises lambda.kappa - (lambda.mu)^2 over every
  lambda with components in {0, 1/n, ..., 1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import KTooLargeForGrid, NegativeVariance, ValidationError
from .model import MixtureWeights, MomentSet
from .qp import QpInstance


@dataclass(frozen=True)
class OracleConfig:
    tol_mu: float = 1e-12
    grid_n: int = 200
    max_k_grid: int = 5

    def __post_init__(self):
        if not (self.tol_mu > 0 and math.isfinite(self.tol_mu)):
            raise ValidationError(f"tol_mu must be positive, got {self.tol_mu!r}")
        if self.grid_n < 1:
            raise ValidationError(f"grid_n must be >= 1, got {self.grid_n!r}")
        if self.max_k_grid < 1:
            raise ValidationError(f"max_k_grid must be >= 1, got {self.max_k_grid!r}")


class MinimaxResult(NamedTuple):
    value: float
    mu_star: float


class GridResult(NamedTuple):
    value: float
    weights: MixtureWeights
    # objective can exceed ``value`` by at most lipschitz / n anywhere on the simplex
    lipschitz: float


def ternary_iteration_bound(width: float, tol: float) -> int:
    if width <= tol:
        return 1
    return math.ceil(math.log(width / tol, 1.5)) + 1


def ternary_search(
    g: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, int]:
    """Minimise a convex function on [lo, hi]; returns (midpoint, iterations).

    Each step discards a third of the bracket, so the loop runs at most
    ``ternary_iteration_bound(hi - lo, tol)`` times.
    """
    cap = ternary_iteration_bound(hi - lo, tol)
    it = 0
    while hi - lo > tol and it < cap:
        third = (hi - lo) / 3.0
        m1, m2 = lo + third, hi - third
        if g(m1) < g(m2):
            hi = m2
        else:
            lo = m1
        it += 1
    return 0.5 * (lo + hi), it


def minimax_oracle(ms: MomentSet, cfg: OracleConfig = OracleConfig()) -> MinimaxResult:
    means = [e.mean for e in ms.entries]
    kappas = [e.second_moment for e in ms.entries]
    for e in ms.entries:
        v = e.second_moment - e.mean * e.mean
        if v < -1e-12 * max(1.0, abs(e.second_moment)):
            raise NegativeVariance(e.label, v)

    terms = list(zip(means, kappas))

    def g(m: float) -> float:
        return max(m * m - 2.0 * mu * m + k for mu, k in terms)

    x, _ = ternary_search(g, min(means), max(means), cfg.tol_mu)
    return MinimaxResult(g(x), x)


def _bounded_compositions(m: int, n: int) -> np.ndarray:
    """All non-negative integer m-vectors with sum <= n, in lexicographic order."""
    rows = np.zeros((1, 0), dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for _ in range(m):
        counts = n - sums + 1
        total = int(counts.sum())
        starts = np.cumsum(counts) - counts
        vals = np.arange(total, dtype=np.int64) - np.repeat(starts, counts)
        rows = np.column_stack([np.repeat(rows, counts, axis=0), vals])
        sums = np.repeat(sums, counts) + vals
    return rows


def _best_on_prefixes(prefix, mu, kappa, n):
    """Best grid point among compositions that start with the given prefixes.

    With the first K-2 counts fixed, the last two counts are (a, r - a) and
    the objective is a concave quadratic in the integer a, so its maximum over
    0..r sits at the floor or ceiling of the real maximiser (or at an end).
    Returns (value, composition) of the lexicographically first maximiser.
    """
    p = prefix.shape[1]
    pf = prefix.astype(float)
    r = n - pf.sum(axis=1)
    pk = pf @ kappa[:p] if p else np.zeros(len(prefix))
    pm = pf @ mu[:p] if p else np.zeros(len(prefix))
    k1, k2, m1, m2 = kappa[-2], kappa[-1], mu[-2], mu[-1]

    base_k = pk + r * k2
    base_m = pm + r * m2
    dk, dm = k1 - k2, m1 - m2

    if dm != 0.0:
        # d/da [ (base_k + a dk)/n - ((base_m + a dm)/n)^2 ] = 0
        a_star = (n * dk - 2.0 * dm * base_m) / (2.0 * dm * dm)
        a_lo = np.floor(np.clip(a_star, 0.0, r))
    else:
        a_lo = np.zeros(len(prefix))
    # columns ascend in a (0 <= a_lo <= a_lo + 1 <= r after clipping), so
    # argmax picks the smallest a among ties
    cands = np.stack([np.zeros_like(r), a_lo, np.minimum(a_lo + 1.0, r), r], axis=1)
    lk = (base_k[:, None] + cands * dk) / n
    lm = (base_m[:, None] + cands * dm) / n
    vals = lk - lm * lm
    col = np.argmax(vals, axis=1)
    rows = np.arange(len(prefix))
    best_vals = vals[rows, col]
    best_a = cands[rows, col]
    i = int(np.argmax(best_vals))
    a = int(best_a[i])
    comp = [int(c) for c in prefix[i]] + [a, int(r[i]) - a]
    return float(best_vals[i]), comp


def simplex_grid(inst: QpInstance, cfg: OracleConfig = OracleConfig()) -> GridResult:
    """Best objective over the simplex grid with denominator ``cfg.grid_n``.

    Ties keep the lexicographically first composition vector.
    """
    k, n = len(inst), cfg.grid_n
    if k > cfg.max_k_grid:
        raise KTooLargeForGrid(k, cfg.max_k_grid)
    mu = np.asarray(inst.mu, dtype=float)
    kappa = np.asarray(inst.kappa, dtype=float)
    lip = inst.lipschitz_bound()
    if k == 1:
        return GridResult(float(kappa[0] - mu[0] ** 2), MixtureWeights((1.0,)), lip)

    m = k - 2
    if m <= 2:
        chunks = [_bounded_compositions(m, n)]
    else:
        # split on the first coordinate to bound memory
        chunks = (
            np.column_stack([np.full(len(rest), c0, dtype=np.int64), rest])
            for c0 in range(n + 1)
            for rest in [_bounded_compositions(m - 1, n - c0)]
        )
    best_val, best_comp = -math.inf, None
    for prefix in chunks:
        val, comp = _best_on_prefixes(prefix, mu, kappa, n)
        if val > best_val:
            best_val, best_comp = val, comp
    weights = MixtureWeights(tuple(float(c) / n for c in best_comp))
    return GridResult(best_val, weights, lip)


def simplex_grid_naive(inst: QpInstance, n: int) -> tuple[float, tuple[int, ...]]:
    """Full enumeration, one point at a time. Only for tiny K and n."""
    k = len(inst)
    comps = _bounded_compositions(k - 1, n)
    best, arg = -math.inf, None
    for row in comps:
        c = tuple(int(x) for x in row) + (n - int(row.sum()),)
        val = inst.objective([x / n for x in c])
        if val > best:
            best, arg = val, c
    return best, arg
