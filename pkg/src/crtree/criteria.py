"""Attribute-scoring criteria: correlation ratios, entropy, information gain.

Two correlation-ratio variants live here.  The numeric one is the classic
ANOVA-style ratio of between-class dispersion to total dispersion of a
quantitative column.  The categorical one replaces each class's mean with
its modal cell frequency divided by the class total and measures dispersion
of the raw cell frequencies around the ratio-valued grand mean; it is the
score the tree builder uses on discretized data.

The two ratio variants accumulate in exact rational arithmetic (cell counts
and float inputs are both exact rationals), which keeps the numeric variant
inside [0, 1], makes scores independent of summation order, and makes the
zero-dispersion check exact.  Results are returned as floats.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .data import MISSING, Dataset, GroupedColumn, group_by_class
from .errors import ValidationError


@dataclass(frozen=True)
class CrScore:
    """A correlation-ratio score and the dispersions behind it.

    ``degenerate`` is set when the population dispersion is zero, in which
    case the ratio is reported as 0: an attribute with no dispersion at all
    cannot discriminate between classes.
    """

    cr_squared: float
    cr: float
    d_in: float
    d_ov: float
    degenerate: bool = False


def _as_fraction(value: Any, context: str) -> Fraction:
    if isinstance(value, bool):
        raise TypeError(f"{context}: expected a number, got {value!r}")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Real):
        as_float = float(value)
        if not math.isfinite(as_float):
            raise TypeError(f"{context}: non-finite value {value!r}")
        return Fraction(as_float)
    raise TypeError(f"{context}: expected a number, got {value!r}")


def _ratio_score(d_in: Fraction, d_ov: Fraction) -> CrScore:
    if d_ov == 0:
        return CrScore(0.0, 0.0, 0.0, 0.0, degenerate=True)
    cr_squared = d_in / d_ov
    return CrScore(
        cr_squared=float(cr_squared),
        cr=math.sqrt(cr_squared),
        d_in=float(d_in),
        d_ov=float(d_ov),
        degenerate=False,
    )


def class_means(groups: GroupedColumn) -> tuple[dict[Any, float], float]:
    """Per-class means of a numeric column plus its overall mean.

    ``groups`` maps each class label to that class's values (the shape
    produced by :func:`crtree.data.group_by_class`).  Every group must be
    non-empty and numeric.
    """
    if not groups:
        raise ValidationError("no class groups given")
    means: dict[Any, float] = {}
    total = Fraction(0)
    count = 0
    for label, values in groups.items():
        if not values:
            raise ValidationError(f"class {label!r} has no values")
        s = sum(_as_fraction(v, f"class {label!r}") for v in values)
        means[label] = float(s / len(values))
        total += s
        count += len(values)
    return means, float(total / count)


def correlation_ratio_numeric(groups: GroupedColumn) -> CrScore:
    """Correlation ratio of a numeric column against the class labels.

    Between-class dispersion is the size-weighted squared deviation of the
    class means from the grand mean; population dispersion is the squared
    deviation of every value from the grand mean.  The squared ratio lies
    in [0, 1].
    """
    if not groups or all(not v for v in groups.values()):
        raise ValidationError("no values given")
    columns: dict[Any, list[Fraction]] = {
        label: [_as_fraction(v, f"class {label!r}") for v in values]
        for label, values in groups.items()
    }
    if any(not v for v in columns.values()):
        raise ValidationError("every class group must be non-empty")
    n = sum(len(v) for v in columns.values())
    if n < 2:
        raise ValidationError("need at least two values")

    grand = sum(sum(v) for v in columns.values()) / n
    d_in = Fraction(0)
    d_ov = Fraction(0)
    for values in columns.values():
        mean = sum(values) / len(values)
        d_in += len(values) * (mean - grand) ** 2
        for v in values:
            d_ov += (v - grand) ** 2
    return _ratio_score(d_in, d_ov)


class CrossTab:
    """Frequency table of (attribute value x class label).

    ``counts[j][a]`` is how often the ``a``-th distinct attribute value
    co-occurs with the ``j``-th class label; values missing from a class
    carry an explicit zero cell.
    """

    __slots__ = ("labels", "values", "counts")

    def __init__(
        self,
        labels: Sequence[Any],
        values: Sequence[Any],
        counts: Sequence[Sequence[int]],
    ):
        self.labels = tuple(labels)
        self.values = tuple(values)
        for row in counts:
            for c in row:
                if isinstance(c, bool) or not isinstance(c, numbers.Integral):
                    raise ValidationError(f"cell frequency {c!r} is not an integer")
        self.counts = tuple(tuple(int(c) for c in row) for row in counts)
        if not self.labels:
            raise ValidationError("crosstab needs at least one class label")
        if not self.values:
            raise ValidationError("crosstab needs at least one attribute value")
        if len(self.counts) != len(self.labels):
            raise ValidationError("one count row per class label required")
        for row in self.counts:
            if len(row) != len(self.values):
                raise ValidationError("one count per attribute value required")
            if any(c < 0 for c in row):
                raise ValidationError("cell frequencies must be non-negative")

    def class_total(self, j: int) -> int:
        return sum(self.counts[j])

    def class_max(self, j: int) -> int:
        return max(self.counts[j])

    def class_mean(self, label: Any) -> float:
        """Modal frequency of the class divided by the class total."""
        j = self.labels.index(label)
        total = self.class_total(j)
        if total == 0:
            raise ValidationError(f"class {label!r} has no rows")
        return self.class_max(j) / total

    def overall_mean(self) -> float:
        """Sum of the per-class modal frequencies over the total row count."""
        return sum(self.class_max(j) for j in range(len(self.labels))) / self.total()

    def value_total(self, a: int) -> int:
        return sum(row[a] for row in self.counts)

    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def __repr__(self) -> str:
        return f"<CrossTab {len(self.values)} values x {len(self.labels)} classes>"


def build_crosstab(dataset: Dataset, attribute: str) -> CrossTab:
    """Cross-tabulate one categorical attribute against the class column.

    The value axis covers every distinct value observed anywhere in the
    dataset (union across classes), so absent combinations appear as zero
    cells.  Missing cells must be resolved first.
    """
    attr = dataset.attribute(attribute)
    if attr.kind != "categorical":
        raise ValidationError(f"{attribute!r} is not categorical")
    col = dataset.index_of(attribute)

    values: dict[Any, int] = {}
    labels: dict[Any, int] = {}
    for label in dataset.class_domain:
        labels[label] = len(labels)
    cells: dict[tuple[int, int], int] = {}
    for r, row in enumerate(dataset.rows):
        v = row[col]
        if v is MISSING:
            raise ValidationError(
                f"row {r + 1}: attribute {attribute!r} has a missing cell; "
                "apply resolve_missing first"
            )
        if v not in values:
            values[v] = len(values)
        j = labels[row[dataset.class_index]]
        key = (j, values[v])
        cells[key] = cells.get(key, 0) + 1

    observed = [label for label in labels if any(
        cells.get((labels[label], a), 0) for a in range(len(values))
    )]
    if not observed:
        raise ValidationError("dataset has no rows")
    counts = [
        [cells.get((labels[label], a), 0) for a in range(len(values))]
        for label in observed
    ]
    return CrossTab(observed, list(values), counts)


def correlation_ratio_categorical(crosstab: CrossTab) -> CrScore:
    """Correlation ratio of a categorical attribute from its crosstab.

    Each class's mean is its modal cell frequency over the class total; the
    grand mean is the summed modal frequencies over all rows.  Between-class
    dispersion weights squared mean deviations by class totals, while the
    population dispersion sums squared deviations of the raw cell
    frequencies (zero cells included) from the ratio-valued grand mean.
    The squared ratio is reported as computed and is not clamped to [0, 1].
    """
    totals = [crosstab.class_total(j) for j in range(len(crosstab.labels))]
    for label, t in zip(crosstab.labels, totals):
        if t == 0:
            raise ValidationError(f"class {label!r} has no rows in this partition")
    maxima = [crosstab.class_max(j) for j in range(len(crosstab.labels))]
    class_means = [Fraction(m, t) for m, t in zip(maxima, totals)]
    grand = Fraction(sum(maxima), sum(totals))

    d_in = Fraction(0)
    for t, mean in zip(totals, class_means):
        d_in += t * (mean - grand) ** 2
    d_ov = Fraction(0)
    for row in crosstab.counts:
        for c in row:
            d_ov += (c - grand) ** 2
    return _ratio_score(d_in, d_ov)


def entropy(class_counts: Mapping[Any, int]) -> float:
    """Shannon entropy in bits of a class-count distribution."""
    total = 0
    for label, count in class_counts.items():
        if isinstance(count, bool) or not isinstance(count, numbers.Integral):
            raise ValidationError(f"count for {label!r} must be an integer")
        if count < 0:
            raise ValidationError(f"count for {label!r} is negative")
        total += int(count)
    if total < 1:
        raise ValidationError("total count must be at least 1")
    return -math.fsum(
        (c / total) * math.log2(c / total) for c in class_counts.values() if c
    )


def information_gain(crosstab: CrossTab) -> float:
    """Entropy of the class totals minus the size-weighted entropy per value."""
    n = crosstab.total()
    if n == 0:
        raise ValidationError("crosstab has no rows")
    base = entropy({label: crosstab.class_total(j) for j, label in enumerate(crosstab.labels)})
    conditional = math.fsum(
        (crosstab.value_total(a) / n)
        * entropy({j: row[a] for j, row in enumerate(crosstab.counts)})
        for a in range(len(crosstab.values))
        if crosstab.value_total(a) > 0
    )
    return base - conditional


def numeric_correlation_ratio(dataset: Dataset, attribute: str) -> CrScore:
    """Numeric correlation ratio of a raw numeric column, grouped by class."""
    return correlation_ratio_numeric(group_by_class(dataset, attribute))


def categorical_correlation_ratio(dataset: Dataset, attribute: str) -> CrScore:
    """Categorical correlation ratio of a column via its crosstab."""
    return correlation_ratio_categorical(build_crosstab(dataset, attribute))
