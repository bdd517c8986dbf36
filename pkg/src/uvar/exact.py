"""Closed-form upper and lower variance over a finite family of measures.

For sorted means mu_1 <= ... <= mu_K and second moments kappa_i, write
f_i(m) = m^2 - 2 mu_i m + kappa_i. The upper variance

    min over m of max_i f_i(m)

is attained either at the vertex of a single parabola (value kappa_i - mu_i^2)
or where two parabolas cross inside [mu_i, mu_j]. Scanning all K singles and
K(K-1)/2 clamped pairwise crossings and taking the largest value gives the
exact answer. The same witness yields the worst-case mixture weights: a unit
vector for a single, or a two-point mixture whose mean is the crossing point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import IndexOutOfRange, InvariantViolation, NegativeVariance
from .model import MixtureWeights, MomentSet, mean_interval, means_equal

# Tolerances fixed by the solver contract.
NEG_VARIANCE_TOL = 1e-12
TIE_TOL = 1e-12
WEIGHT_CLAMP_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class Parabola:
    """f(m) = m^2 - 2*mean*m + second_moment, i.e. E[(X - m)^2] under one measure."""

    index: int
    mean: float
    second_moment: float

    def __call__(self, m: float) -> float:
        return m * m - 2.0 * self.mean * m + self.second_moment

    @property
    def vertex_value(self) -> float:
        return self.second_moment - self.mean * self.mean


@dataclass(frozen=True, slots=True)
class Single:
    index: int

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.index,)


@dataclass(frozen=True, slots=True)
class Pair:
    i: int
    j: int

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.i, self.j)


Witness = Union[Single, Pair]


@dataclass(frozen=True, slots=True)
class PairCandidate:
    i: int
    j: int
    mu_ij: float
    value: float
    # raw crossing strictly inside (mu_i, mu_j) and means distinct
    interior: bool


@dataclass(frozen=True)
class VarianceReport:
    """Result of :func:`upper_variance`.

    Indices in ``witness`` and the order of ``lambda_star`` follow the
    mean-sorted order of ``moment_set``; use the ``*_input_order`` helpers
    for the caller's original order.
    """

    upper_variance: float
    lower_variance: float
    mu_star: float
    lambda_star: MixtureWeights
    witness: Witness
    moment_set: MomentSet
    notes: tuple[str, ...] = ()

    def lambda_input_order(self) -> tuple[float, ...]:
        return self.moment_set.to_input_order(self.lambda_star.weights)

    def witness_input_indices(self) -> tuple[int, ...]:
        return tuple(self.moment_set.order[k] for k in self.witness.indices)

    def witness_labels(self) -> tuple[str, ...]:
        return tuple(self.moment_set[k].label for k in self.witness.indices)


def parabolas(ms: MomentSet) -> list[Parabola]:
    return [Parabola(k, e.mean, e.second_moment) for k, e in enumerate(ms.entries)]


def pair_candidate(ms: MomentSet, i: int, j: int) -> PairCandidate:
    """Clamped crossing of f_i and f_j (sorted indices, i < j).

    The crossing (kappa_j - kappa_i) / (2 (mu_j - mu_i)) is clamped into
    [mu_i, mu_j]; equal means (within 1e-12 relative) short-circuit to mu_i.
    The value is always evaluated on the smaller-mean parabola f_i.

    >>> from uvar.model import moment_set_from_arrays
    >>> ms = moment_set_from_arrays([0.0, 1.0], [0.1, 3.0])
    >>> c = pair_candidate(ms, 0, 1)
    >>> c.mu_ij, round(c.value, 12), c.interior
    (1.0, 1.1, False)
    """
    k = len(ms)
    if not (0 <= i < j < k):
        raise IndexOutOfRange(f"need 0 <= i < j < {k}, got i={i}, j={j}")
    a, b = ms.entries[i], ms.entries[j]
    if means_equal(a.mean, b.mean):
        mu_ij = a.mean
        interior = False
    else:
        cross = (b.second_moment - a.second_moment) / (2.0 * (b.mean - a.mean))
        mu_ij = min(max(a.mean, cross), b.mean)
        interior = a.mean < cross < b.mean
    # h_ij(x) = x^2 - 2 mu_i x + kappa_i in vertex form; at x = mu_i this is
    # exactly the single's value, which keeps boundary ties exact
    d = mu_ij - a.mean
    value = d * d + a.variance
    return PairCandidate(i, j, mu_ij, value, interior)


def lower_variance(ms: MomentSet) -> float:
    return min(e.variance for e in ms.entries)


def check_variances(ms: MomentSet) -> list[str]:
    """Reject clearly negative variances; return notes on degenerate entries."""
    notes = []
    for e in ms.entries:
        v = e.variance
        if v < -NEG_VARIANCE_TOL * max(1.0, abs(e.second_moment)):
            raise NegativeVariance(e.label, v)
        if v <= 0.0:
            notes.append(f"entry {e.label!r} has zero variance (point mass at its mean)")
    return notes


def _pair_weights(ms: MomentSet, cand: PairCandidate) -> MixtureWeights:
    """Two-point mixture whose mean equals the crossing point.

    Algebraically lambda_i = mu_j/(mu_j - mu_i) + (kappa_i - kappa_j)/(2 (mu_i - mu_j)^2);
    the equivalent (mu_j - mu_ij)/(mu_j - mu_i) avoids the cancellation between
    the two large terms when the means are close.
    """
    mu_i, mu_j = ms.entries[cand.i].mean, ms.entries[cand.j].mean
    lam_i = (mu_j - cand.mu_ij) / (mu_j - mu_i)
    if lam_i < -WEIGHT_CLAMP_TOL or lam_i > 1.0 + WEIGHT_CLAMP_TOL:
        raise InvariantViolation(f"pair weight {lam_i!r} outside [0, 1] for {cand}")
    lam_i = min(max(lam_i, 0.0), 1.0)
    w = [0.0] * len(ms)
    w[cand.i] = lam_i
    w[cand.j] = 1.0 - lam_i
    return MixtureWeights(tuple(w))


def upper_variance(ms: MomentSet) -> VarianceReport:
    """Exact upper variance, its optimal center, and worst-case mixture.

    Every entry must have a non-negative variance (tolerance 1e-12 relative to
    kappa); arbitrary kappa goes through :func:`uvar.qp.solve` instead.

    Witness selection: among candidates within 1e-12*max(1, V) of the
    maximum, a single beats a pair, lower index beats higher, and pairs are
    taken in lexicographic (i, j) order.
    """
    notes = check_variances(ms)
    k = len(ms)
    singles = [e.variance for e in ms.entries]
    pairs = [pair_candidate(ms, i, j) for i in range(k) for j in range(i + 1, k)]

    best = max(singles)
    if pairs:
        best = max(best, max(p.value for p in pairs))
    tol = TIE_TOL * max(1.0, abs(best))

    witness: Witness | None = None
    for idx, v in enumerate(singles):
        if v >= best - tol:
            witness = Single(idx)
            mu_star = ms.entries[idx].mean
            lam = MixtureWeights.unit(k, idx)
            break
    else:
        for cand in pairs:
            if cand.value >= best - tol:
                # a clamped crossing equals a single's vertex value (or is
                # below it), so it can never get here ahead of that single
                if not cand.interior:
                    raise InvariantViolation(f"boundary pair {cand} beat every single")
                witness = Pair(cand.i, cand.j)
                mu_star = cand.mu_ij
                lam = _pair_weights(ms, cand)
                break
    if witness is None:
        raise InvariantViolation("no candidate attains the maximum")

    interval = mean_interval(ms)
    if mu_star not in interval:
        raise InvariantViolation(f"mu* {mu_star!r} outside {interval}")
    return VarianceReport(
        upper_variance=best,
        lower_variance=min(singles),
        mu_star=mu_star,
        lambda_star=lam,
        witness=witness,
        moment_set=ms,
        notes=tuple(notes),
    )


def two_measure_upper_variance(ms: MomentSet, i: int, j: int) -> float:
    """Upper variance of the family restricted to sorted entries i < j."""
    cand = pair_candidate(ms, i, j)
    return max(ms.entries[i].variance, ms.entries[j].variance, cand.value)


def minimax_objective(ms: MomentSet, m: float) -> float:
    """max_i E_i[(X - m)^2] at center m."""
    return max(m * m - 2.0 * e.mean * m + e.second_moment for e in ms.entries)


def mixture_objective(weights, means, second_moments) -> float:
    """Variance of the mixture: lambda.kappa - (lambda.mu)^2."""
    lk = math.fsum(w * k for w, k in zip(weights, second_moments))
    lm = math.fsum(w * m for w, m in zip(weights, means))
    return lk - lm * lm
