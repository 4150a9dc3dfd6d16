"""Seeded train/test splitting: k-fold assignments and holdout splits.

All randomness flows from the explicit seed, so any assignment can be
reproduced exactly.  Stratified assignments keep both the overall fold
sizes and each class's per-fold counts within a spread of one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .data import Dataset
from .errors import ValidationError


@dataclass(frozen=True)
class FoldAssignment:
    """Per-row fold indices for a k-fold split."""

    k: int
    assignment: tuple[int, ...]
    seed: int
    stratified: bool

    def fold_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f == fold]

    def complement_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f != fold]

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for f in self.assignment:
            sizes[f] += 1
        return sizes


def _grouped_by_class(dataset: Dataset) -> dict[object, list[int]]:
    groups: dict[object, list[int]] = {}
    for i, row in enumerate(dataset.rows):
        groups.setdefault(row[dataset.class_index], []).append(i)
    ordered = {}
    for label in dataset.class_domain:
        if label in groups:
            ordered[label] = groups.pop(label)
    ordered.update(groups)
    return ordered


def assign_folds(dataset: Dataset, k: int, seed: int, stratified: bool = True) -> FoldAssignment:
    """Assign every row to one of ``k`` folds, shuffled by ``seed``."""
    n = len(dataset)
    if k < 2:
        raise ValidationError("fold count must be at least 2")
    if k > n:
        raise ValidationError(f"fold count {k} exceeds row count {n}")

    rng = random.Random(seed)
    assignment = [0] * n

    if not stratified:
        order = list(range(n))
        rng.shuffle(order)
        base, extra = divmod(n, k)
        pos = 0
        for fold in range(k):
            size = base + (1 if fold < extra else 0)
            for i in order[pos : pos + size]:
                assignment[i] = fold
            pos += size
        return FoldAssignment(k, tuple(assignment), seed, False)

    totals = [0] * k
    for indices in _grouped_by_class(dataset).values():
        members = list(indices)
        rng.shuffle(members)
        base, extra = divmod(len(members), k)
        # classes' leftover rows go to the currently smallest folds, which
        # keeps the overall fold-size spread at most one
        by_load = sorted(range(k), key=lambda f: (totals[f], f))
        bonus = set(by_load[:extra])
        pos = 0
        for fold in range(k):
            size = base + (1 if fold in bonus else 0)
            for i in members[pos : pos + size]:
                assignment[i] = fold
            totals[fold] += size
            pos += size
    return FoldAssignment(k, tuple(assignment), seed, True)


def split_holdout(
    dataset: Dataset, train_fraction: float, seed: int, stratified: bool = True
) -> tuple[Dataset, Dataset]:
    """Split into disjoint train/test datasets with ``round(fraction * n)`` training rows."""
    n = len(dataset)
    if n < 2:
        raise ValidationError("holdout split needs at least two rows")
    if not 0.0 < train_fraction < 1.0:
        raise ValidationError("train fraction must be strictly between 0 and 1")
    target = round(train_fraction * n)
    if target == 0 or target == n:
        raise ValidationError(
            f"fraction {train_fraction} leaves an empty side for {n} rows"
        )

    rng = random.Random(seed)
    if not stratified:
        order = list(range(n))
        rng.shuffle(order)
        train_idx = sorted(order[:target])
        test_idx = sorted(order[target:])
        return dataset.subset(train_idx), dataset.subset(test_idx)

    groups = _grouped_by_class(dataset)
    shuffled: dict[object, list[int]] = {}
    takes: dict[object, int] = {}
    remainders: list[tuple[float, int, object]] = []
    for pos, (label, indices) in enumerate(groups.items()):
        members = list(indices)
        rng.shuffle(members)
        shuffled[label] = members
        ideal = train_fraction * len(members)
        takes[label] = int(ideal)
        remainders.append((-(ideal - int(ideal)), pos, label))
    short = target - sum(takes.values())
    # hand the shortfall to the classes with the largest fractional share first
    remainders.sort()
    cursor = 0
    while short > 0:
        label = remainders[cursor % len(remainders)][2]
        if takes[label] < len(shuffled[label]):
            takes[label] += 1
            short -= 1
        cursor += 1

    train_idx: list[int] = []
    test_idx: list[int] = []
    for label, members in shuffled.items():
        take = takes[label]
        train_idx.extend(members[:take])
        test_idx.extend(members[take:])
    return dataset.subset(sorted(train_idx)), dataset.subset(sorted(test_idx))
