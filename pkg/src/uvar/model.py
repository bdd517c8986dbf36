"""Moment-level description of a random variable under K probability measures.

Each measure P_i is represented only by the pair (mu_i, kappa_i) =
(E_i[X], E_i[X^2]); the variance under P_i is ``kappa_i - mu_i**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DuplicateLabel, EmptyInput, NonFiniteValue, ValidationError

# Absolute slack on the simplex sum constraint.
SIMPLEX_SUM_TOL = 1e-12


def means_equal(a: float, b: float) -> bool:
    """Mean equality used by the pair formula: |a - b| <= 1e-12 * max(1, |a|, |b|)."""
    return abs(b - a) <= 1e-12 * max(1.0, abs(a), abs(b))


@dataclass(frozen=True, slots=True)
class MomentEntry:
    label: str
    mean: float
    second_moment: float

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise ValidationError(f"label must be a non-empty string, got {self.label!r}")
        for name in ("mean", "second_moment"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonFiniteValue(self.label, f"{name}={value!r}")
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "second_moment", float(self.second_moment))

    @classmethod
    def from_variance(cls, label: str, mean: float, variance: float) -> MomentEntry:
        """Build from (mean, variance), with kappa = variance + mean**2."""
        if not (math.isfinite(mean) and math.isfinite(variance)):
            raise NonFiniteValue(label, f"mean={mean!r}, variance={variance!r}")
        return cls(label, mean, variance + mean * mean)

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean * self.mean


@dataclass(frozen=True, slots=True)
class MeanInterval:
    lower: float
    upper: float

    def __contains__(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True, slots=True)
class MomentSet:
    """Entries sorted ascending by mean (stable).

    ``order[k]`` is the input position of sorted entry ``k``. Build through
    :func:`build_moment_set`; direct construction only checks the sort.
    """

    entries: tuple[MomentEntry, ...]
    order: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.entries:
            raise EmptyInput("moment set")
        if not self.order:
            object.__setattr__(self, "order", tuple(range(len(self.entries))))
        if sorted(self.order) != list(range(len(self.entries))):
            raise ValidationError("order must be a permutation of range(K)")
        for a, b in zip(self.entries, self.entries[1:]):
            if a.mean > b.mean:
                raise ValidationError("entries must be sorted ascending by mean")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> MomentEntry:
        return self.entries[i]

    @property
    def means(self) -> tuple[float, ...]:
        return tuple(e.mean for e in self.entries)

    @property
    def second_moments(self) -> tuple[float, ...]:
        return tuple(e.second_moment for e in self.entries)

    @property
    def variances(self) -> tuple[float, ...]:
        return tuple(e.variance for e in self.entries)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)

    def input_position(self, sorted_index: int) -> int:
        return self.order[sorted_index]

    def to_input_order(self, values: Sequence[float]) -> tuple[float, ...]:
        """Permute a sorted-order vector back to input order."""
        out = [0.0] * len(self.entries)
        for k, pos in enumerate(self.order):
            out[pos] = values[k]
        return tuple(out)

    def input_entries(self) -> tuple[MomentEntry, ...]:
        out: list[MomentEntry | None] = [None] * len(self.entries)
        for k, pos in enumerate(self.order):
            out[pos] = self.entries[k]
        return tuple(out)  # type: ignore[arg-type]

    def mean_interval(self) -> MeanInterval:
        return mean_interval(self)


@dataclass(frozen=True, slots=True)
class MixtureWeights:
    """A point of the unit simplex, aligned to some fixed index order."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise EmptyInput("weights")
        if any(not (0.0 <= x <= 1.0) for x in w):
            raise ValidationError(f"weights must lie in [0, 1]: {w}")
        if abs(math.fsum(w) - 1.0) > SIMPLEX_SUM_TOL:
            raise ValidationError(f"weights must sum to 1, got {math.fsum(w)!r}")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int) -> float:
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)

    @classmethod
    def unit(cls, k: int, i: int) -> MixtureWeights:
        w = [0.0] * k
        w[i] = 1.0
        return cls(tuple(w))

    def nonzeros(self) -> int:
        return sum(1 for x in self.weights if x != 0.0)


def build_moment_set(entries: Iterable[MomentEntry]) -> MomentSet:
    """Validate entries and sort them by mean, remembering the input order.

    Raises EmptyInput, DuplicateLabel. Non-finite values are already
    rejected when each MomentEntry is constructed.
    """
    entries = list(entries)
    if not entries:
        raise EmptyInput("moment entries")
    seen: set[str] = set()
    for e in entries:
        if not isinstance(e, MomentEntry):
            raise ValidationError(f"expected MomentEntry, got {type(e).__name__}")
        if e.label in seen:
            raise DuplicateLabel(e.label)
        seen.add(e.label)
    # sorted() is stable, so ties keep input order
    order = sorted(range(len(entries)), key=lambda i: entries[i].mean)
    return MomentSet(tuple(entries[i] for i in order), tuple(order))


def moment_set_from_arrays(
    means: Sequence[float],
    second_moments: Sequence[float],
    labels: Sequence[str] | None = None,
) -> MomentSet:
    if len(means) != len(second_moments):
        raise ValidationError(
            f"length mismatch: {len(means)} means vs {len(second_moments)} second moments"
        )
    if labels is None:
        labels = [str(i) for i in range(len(means))]
    return build_moment_set(
        MomentEntry(lab, float(m), float(k)) for lab, m, k in zip(labels, means, second_moments)
    )


def mean_interval(ms: MomentSet) -> MeanInterval:
    return MeanInterval(ms.entries[0].mean, ms.entries[-1].mean)


def affine_transform(ms: MomentSet, a: float, b: float) -> MomentSet:
    """Moments of ``a*X + b``: mu -> a*mu + b, kappa -> a^2 kappa + 2ab mu + b^2.

    The result is re-sorted (a < 0 reverses the mean order); its ``order``
    still refers to the positions of the original input.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise NonFiniteValue("affine_transform", f"a={a!r}, b={b!r}")
    mapped = [
        MomentEntry(
            e.label,
            a * e.mean + b,
            a * a * e.second_moment + 2.0 * a * b * e.mean + b * b,
        )
        for e in ms.input_entries()
    ]
    return build_moment_set(mapped)
