"""Exact maximiser of lambda.kappa - (lambda.mu)^2 over the unit simplex.

Any real kappa is accepted. When some kappa_i - mu_i^2 is not positive the
instance has no probabilistic reading, so kappa is first shifted by the
constant 1 - C (C = min_i kappa_i - mu_i^2). This moves every simplex point's
objective by the same amount, so the maximiser is unchanged; the shifted
problem is an upper-variance problem and is solved in closed form.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from . import exact
from .errors import EmptyInput, NonFiniteValue, ValidationError
from .exact import Pair, Single, Witness
from .model import MixtureWeights, MomentEntry, build_moment_set

# C at or below this triggers the shift, which keeps the closed-form
# solver's non-negative variance precondition well clear of round-off.
SHIFT_THRESHOLD = 1e-12


@dataclass(frozen=True)
class QpInstance:
    """``mu[i]`` and ``kappa[i]`` belong together; no ordering assumed."""

    mu: tuple[float, ...]
    kappa: tuple[float, ...]

    def __post_init__(self):
        mu = tuple(float(x) for x in self.mu)
        kappa = tuple(float(x) for x in self.kappa)
        if not mu:
            raise EmptyInput("qp instance")
        if len(mu) != len(kappa):
            raise ValidationError(f"length mismatch: {len(mu)} mu vs {len(kappa)} kappa")
        for i, (m, k) in enumerate(zip(mu, kappa)):
            if not (math.isfinite(m) and math.isfinite(k)):
                raise NonFiniteValue(str(i), f"mu={m!r}, kappa={k!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "kappa", kappa)

    def __len__(self) -> int:
        return len(self.mu)

    def objective(self, weights: Sequence[float]) -> float:
        return exact.mixture_objective(weights, self.mu, self.kappa)

    def lipschitz_bound(self) -> float:
        """Crude bound on how much the objective moves per unit of l1 distance
        along the simplex: 2 * (max|kappa| + max mu^2)."""
        return 2.0 * (max(abs(k) for k in self.kappa) + max(m * m for m in self.mu))


@dataclass(frozen=True)
class QpSolution:
    """Optimal value and maximiser, in the instance's own index order.

    ``mu_star`` is the mean of the optimal mixture (the optimal center of
    the equivalent minimax problem); the shift does not move it.
    """

    value: float
    lambda_star: MixtureWeights
    witness: Witness
    shift_applied: float
    mu_star: float


def solve(inst: QpInstance) -> QpSolution:
    c = min(kp - m * m for m, kp in zip(inst.mu, inst.kappa))
    shift = 1.0 - c if c <= SHIFT_THRESHOLD else 0.0
    ms = build_moment_set(
        MomentEntry(str(i), m, kp + shift) for i, (m, kp) in enumerate(zip(inst.mu, inst.kappa))
    )
    report = exact.upper_variance(ms)
    value = report.upper_variance if shift == 0.0 else _witness_value(inst, ms, report)

    lam = MixtureWeights(ms.to_input_order(report.lambda_star.weights))
    w = report.witness
    if isinstance(w, Single):
        witness: Witness = Single(ms.order[w.index])
    else:
        a, b = ms.order[w.i], ms.order[w.j]
        witness = Pair(min(a, b), max(a, b))
    return QpSolution(value, lam, witness, shift, report.mu_star)


def _witness_value(inst: QpInstance, ms, report: exact.VarianceReport) -> float:
    """Optimal value on the unshifted data, read off the witness.

    Equal to the shifted optimum minus the shift, without inheriting the
    shift's rounding (which swamps values much smaller than 1 - C).
    """
    w = report.witness
    if isinstance(w, Single):
        i = ms.order[w.index]
        return inst.kappa[i] - inst.mu[i] * inst.mu[i]
    i = ms.order[w.i]
    d = report.mu_star - inst.mu[i]
    return d * d + (inst.kappa[i] - inst.mu[i] * inst.mu[i])


def solve_arrays(mu: Sequence[float], kappa: Sequence[float]) -> QpSolution:
    return solve(QpInstance(tuple(mu), tuple(kappa)))
