"""Discretization and missing-value resolution for datasets.

Both operations return new datasets; inputs are never mutated.  Bin rules
(:class:`EqualWidthRule`, :class:`EqualFrequencyRule`) are exposed separately
so the sklearn-style transformers can share them.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from typing import Any, Sequence

from .data import (
    MISSING,
    MISSING_LABEL,
    AttributeSchema,
    Dataset,
)
from .errors import ValidationError

MISSING_POLICIES = ("own-category", "mode-impute")
DISCRETIZE_METHODS = ("equal-width", "equal-frequency")


def _bin_label(index: int) -> str:
    return f"bin-{index + 1}"


@dataclass(frozen=True)
class EqualWidthRule:
    """Splits [lo, hi] into ``bins`` equal intervals, last interval right-closed."""

    lo: float
    hi: float
    bins: int

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(_bin_label(i) for i in range(self.bins))

    @property
    def cut_points(self) -> tuple[float, ...]:
        width = (self.hi - self.lo) / self.bins
        return tuple(self.lo + width * i for i in range(1, self.bins))

    def assign(self, value: float) -> str:
        if self.hi == self.lo:
            return _bin_label(0)
        idx = int((value - self.lo) * self.bins / (self.hi - self.lo))
        return _bin_label(min(max(idx, 0), self.bins - 1))


@dataclass(frozen=True)
class EqualFrequencyRule:
    """Cut points at empirical quantiles; values tied with a cut go to the lower bin."""

    cuts: tuple[float, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(_bin_label(i) for i in range(len(self.cuts) + 1))

    def assign(self, value: float) -> str:
        return _bin_label(bisect_left(self.cuts, value))


BinRule = EqualWidthRule | EqualFrequencyRule


def fit_bin_rule(values: Sequence[float], method: str, bins: int) -> BinRule:
    """Compute a bin rule from observed (non-missing) numeric values.

    Equal-frequency cut points sit at the lower empirical quantiles
    ``sorted[ceil(n*i/bins) - 1]``; duplicate cuts collapse, and when the
    distinct value count is below ``bins`` every distinct value gets its
    own bin.
    """
    if method not in DISCRETIZE_METHODS:
        raise ValidationError(f"unknown discretization method {method!r}")
    if bins < 2:
        raise ValidationError("bin count must be at least 2")
    if not values:
        raise ValidationError("cannot fit bins with no observed values")

    if method == "equal-width":
        return EqualWidthRule(lo=min(values), hi=max(values), bins=bins)

    ordered = sorted(values)
    distinct = sorted(set(ordered))
    if bins >= len(distinct):
        return EqualFrequencyRule(cuts=tuple(distinct[:-1]))
    n = len(ordered)
    cuts: list[float] = []
    for i in range(1, bins):
        q = ordered[-(-n * i // bins) - 1]  # ceil(n*i/bins) - 1
        if not cuts or q > cuts[-1]:
            cuts.append(q)
    return EqualFrequencyRule(cuts=tuple(cuts))


def discretize(dataset: Dataset, attribute: str, method: str, bins: int) -> Dataset:
    """Turn one numeric attribute into categories ``bin-1 .. bin-k``.

    Missing cells stay missing, the reserved missing label passes through,
    and every other column is untouched.
    """
    attr = dataset.attribute(attribute)
    if attr.kind != "numeric":
        raise ValidationError(f"{attribute!r} is not numeric")
    column = dataset.column(attribute)
    observed = [v for v in column if v is not MISSING and v != MISSING_LABEL]
    rule = fit_bin_rule(observed, method, bins)

    labels = rule.labels
    domain = labels + (MISSING_LABEL,) if MISSING_LABEL in column else labels
    new_attr = AttributeSchema(
        name=attr.name, role=attr.role, kind="categorical", domain=domain
    )
    values = [
        v if v is MISSING or v == MISSING_LABEL else rule.assign(v) for v in column
    ]
    return dataset.replace_column(attribute, new_attr, values)


def apply_schema_discretization(dataset: Dataset) -> Dataset:
    """Apply every attribute's discretization directive, in schema order."""
    out = dataset
    for attr in dataset.schema:
        if attr.discretize is not None:
            out = discretize(out, attr.name, attr.discretize.method, attr.discretize.bins)
    return out


def _mode(values: list[Any], order: Sequence[Any]) -> Any:
    """Most frequent value; ties break by position in ``order``."""
    counts = Counter(values)
    rank = {v: i for i, v in enumerate(order)}
    best = None
    best_key = None
    for value, count in counts.items():
        key = (-count, rank.get(value, len(rank)))
        if best_key is None or key < best_key:
            best, best_key = value, key
    return best


def resolve_missing(dataset: Dataset, policy: str = "own-category") -> Dataset:
    """Remove missing feature cells by policy.

    ``own-category`` replaces them with the reserved label; ``mode-impute``
    replaces them with the attribute's most frequent observed value (ties
    broken by declared-domain order, or ascending value order for numeric
    attributes).  The result has no missing feature cells, and applying the
    policy again is a no-op.
    """
    if policy not in MISSING_POLICIES:
        raise ValidationError(f"unknown missing-value policy {policy!r}")

    out = dataset
    for attr in dataset.schema:
        if attr.role != "feature":
            continue
        column = out.column(attr.name)
        if not any(v is MISSING for v in column):
            continue
        if policy == "own-category":
            new_attr = attr
            if attr.kind == "categorical" and attr.domain is not None:
                if MISSING_LABEL not in attr.domain:
                    new_attr = AttributeSchema(
                        name=attr.name,
                        role=attr.role,
                        kind=attr.kind,
                        domain=attr.domain + (MISSING_LABEL,),
                        discretize=attr.discretize,
                    )
            values = [MISSING_LABEL if v is MISSING else v for v in column]
        else:
            present = [v for v in column if v is not MISSING]
            if not present:
                raise ValidationError(
                    f"attribute {attr.name!r} has no observed values to impute from"
                )
            if attr.kind == "numeric":
                order = sorted(set(present))
            else:
                order = attr.domain if attr.domain is not None else out.observed_domain(attr.name)
            fill = _mode(present, order)
            new_attr = attr
            values = [fill if v is MISSING else v for v in column]
        out = out.replace_column(attr.name, new_attr, values)
    return out
