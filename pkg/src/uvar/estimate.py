"""Per-regime moment estimates from labelled raw observations."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .errors import EmptyInput, GroupTooSmall, NonFiniteValue
from .model import MomentEntry, MomentSet, build_moment_set


@dataclass(frozen=True)
class SampleTable:
    """Observations grouped by regime label; insertion order is kept."""

    groups: Mapping[str, Sequence[float]]

    def __post_init__(self):
        frozen = {str(k): tuple(float(x) for x in v) for k, v in self.groups.items()}
        for label, xs in frozen.items():
            if any(not math.isfinite(x) for x in xs):
                raise NonFiniteValue(label, "observation is NaN or infinite")
        object.__setattr__(self, "groups", frozen)

    @classmethod
    def from_pairs(cls, rows) -> SampleTable:
        """Build from an iterable of (label, value) rows in long format."""
        groups: dict[str, list[float]] = {}
        for label, value in rows:
            groups.setdefault(label, []).append(float(value))
        return cls(groups)


def sample_mean_variance(xs: Sequence[float]) -> tuple[float, float]:
    """Two-pass sample mean and unbiased variance.

    The second pass sums squared deviations from the first-pass mean; the
    one-pass ``sum(x^2) - n*mean^2`` form loses everything at large offsets.
    """
    n = len(xs)
    mean = math.fsum(xs) / n
    ss = math.fsum((x - mean) ** 2 for x in xs)
    return mean, ss / (n - 1)


class GroupEstimate(NamedTuple):
    label: str
    n: int
    mean: float
    variance: float


def estimate_groups(table: SampleTable) -> list[GroupEstimate]:
    """Per-group (n, mean, unbiased variance), in table order.

    The variance is kept as computed here: recovering it later as
    ``kappa - mean**2`` cancels badly when |mean| >> sd.
    """
    if not table.groups:
        raise EmptyInput("sample table")
    out = []
    for label, xs in table.groups.items():
        if len(xs) < 2:
            raise GroupTooSmall(label, len(xs))
        mean, var = sample_mean_variance(xs)
        out.append(GroupEstimate(label, len(xs), mean, var))
    return out


def estimate_moments(table: SampleTable) -> MomentSet:
    """Estimate (mean, second moment) per group; kappa = s^2 + mean^2."""
    return build_moment_set(
        MomentEntry(g.label, g.mean, g.variance + g.mean * g.mean) for g in estimate_groups(table)
    )
