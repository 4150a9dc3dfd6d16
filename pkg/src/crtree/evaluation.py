"""Accuracy measurement, cross-validation, and criterion comparison.

Reports are pure functions of (dataset, criterion, protocol, seed): running
the same configuration twice produces byte-identical renderings.  The
delimited format has the columns dataset, criterion, protocol, seed, fold,
accuracy, row_kind, where the final column flags aggregate rows.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Any, Sequence

from .data import Dataset
from .errors import ValidationError
from .folds import FoldAssignment, assign_folds, split_holdout
from .tree import DecisionTree, build_tree, predict_dataset

REPORT_FORMAT_VERSION = 1

DELIMITED_COLUMNS = ("dataset", "criterion", "protocol", "seed", "fold", "accuracy", "row_kind")


@dataclass(frozen=True)
class KFoldProtocol:
    k: int
    stratified: bool = True

    def describe(self) -> str:
        return f"kfold:{self.k}"


@dataclass(frozen=True)
class HoldoutProtocol:
    train_fraction: float
    stratified: bool = True

    def describe(self) -> str:
        return f"holdout:{self.train_fraction:g}"


@dataclass(frozen=True)
class FixedProtocol:
    """A preassigned train/test split; the evaluated dataset is the train side."""

    test: Dataset
    label: str = ""

    def describe(self) -> str:
        return f"fixed:{self.label}" if self.label else "fixed"


Protocol = KFoldProtocol | HoldoutProtocol | FixedProtocol


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts of (actual, predicted) pairs over a fixed label order."""

    labels: tuple[Any, ...]
    counts: tuple[tuple[int, ...], ...]

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def accuracy(self) -> float:
        total = self.total
        if total == 0:
            raise ValidationError("confusion matrix is empty")
        correct = sum(self.counts[i][i] for i in range(len(self.labels)))
        return correct / total

    def add(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if self.labels != other.labels:
            merged = list(self.labels) + [l for l in other.labels if l not in self.labels]
            return self._expand(merged).add(other._expand(merged))
        counts = tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.counts, other.counts)
        )
        return ConfusionMatrix(self.labels, counts)

    def _expand(self, labels: Sequence[Any]) -> "ConfusionMatrix":
        index = {l: i for i, l in enumerate(self.labels)}
        size = len(labels)
        counts = [[0] * size for _ in range(size)]
        for i, actual in enumerate(labels):
            for j, predicted in enumerate(labels):
                if actual in index and predicted in index:
                    counts[i][j] = self.counts[index[actual]][index[predicted]]
        return ConfusionMatrix(tuple(labels), tuple(tuple(r) for r in counts))

    def render(self) -> str:
        names = [str(l) for l in self.labels]
        width = max([len(n) for n in names] + [5])
        cells = [[str(c) for c in row] for row in self.counts]
        col_w = max([width] + [len(c) for row in cells for c in row])
        header = " " * (width + 2) + " ".join(n.rjust(col_w) for n in names)
        lines = [header]
        for name, row in zip(names, cells):
            lines.append(name.rjust(width) + "  " + " ".join(c.rjust(col_w) for c in row))
        return "\n".join(lines)


def confusion_from_pairs(
    actual: Sequence[Any], predicted: Sequence[Any], label_order: Sequence[Any]
) -> ConfusionMatrix:
    labels = list(label_order)
    for l in list(actual) + list(predicted):
        if l not in labels:
            labels.append(l)
    index = {l: i for i, l in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for a, p in zip(actual, predicted):
        counts[index[a]][index[p]] += 1
    return ConfusionMatrix(tuple(labels), tuple(tuple(r) for r in counts))


def score_accuracy(tree: DecisionTree, test: Dataset) -> tuple[float, ConfusionMatrix]:
    """Instance accuracy of a tree on a test dataset, plus the confusion matrix."""
    if not test.rows:
        raise ValidationError("test dataset is empty")
    predictions = predict_dataset(tree, test)
    actual = test.class_column()
    cm = confusion_from_pairs(actual, predictions, test.class_domain)
    correct = sum(1 for a, p in zip(actual, predictions) if a == p)
    return correct / len(actual), cm


@dataclass(frozen=True)
class EvaluationReport:
    """Per-fold accuracies, their mean, and the aggregate confusion matrix."""

    dataset_name: str
    criterion: str
    protocol: str
    seed: int | None
    fold_accuracies: tuple[float, ...]
    confusion: ConfusionMatrix
    fold_sizes: tuple[tuple[int, int], ...]  # (train, test) per fold
    warnings: tuple[str, ...] = ()
    missing_policy: str | None = None

    @property
    def mean_accuracy(self) -> float:
        return sum(self.fold_accuracies) / len(self.fold_accuracies)

    def config_lines(self) -> list[str]:
        lines = [
            f"# crtree report v{REPORT_FORMAT_VERSION}",
            f"# dataset: {self.dataset_name or '-'}",
            f"# criterion: {self.criterion}",
            f"# protocol: {self.protocol}",
        ]
        if self.seed is not None:
            lines.append(f"# seed: {self.seed}")
        if self.missing_policy:
            lines.append(f"# missing-policy: {self.missing_policy}")
        return lines

    def render(self, extra_config: Sequence[str] = ()) -> str:
        lines = self.config_lines()
        lines[1:1] = list(extra_config)
        if len(self.fold_sizes) == 1:
            train, test = self.fold_sizes[0]
            lines.append(f"# split: {train} train / {test} test")
        for i, acc in enumerate(self.fold_accuracies):
            train, test = self.fold_sizes[i]
            lines.append(f"fold {i}: accuracy {acc:.4f} ({round(acc * test)}/{test})")
        lines.append(f"mean accuracy: {self.mean_accuracy:.4f}")
        lines.append("confusion matrix (rows=actual, cols=predicted):")
        lines.append(self.confusion.render())
        if self.warnings:
            lines.append("warnings:")
            lines.extend(f"  {w}" for w in self.warnings)
        return "\n".join(lines) + "\n"

    def delimited_rows(self) -> list[tuple[str, ...]]:
        seed = "-" if self.seed is None else str(self.seed)
        rows = [
            (self.dataset_name, self.criterion, self.protocol, seed, str(i), f"{acc:.6f}", "fold")
            for i, acc in enumerate(self.fold_accuracies)
        ]
        rows.append(
            (self.dataset_name, self.criterion, self.protocol, seed, "mean",
             f"{self.mean_accuracy:.6f}", "aggregate")
        )
        return rows


def _train_and_score(
    train: Dataset,
    test: Dataset,
    criterion: str,
    fold_tag: str,
    warnings: list[str],
    full_domain: Sequence[Any],
) -> tuple[float, ConfusionMatrix]:
    observed = set(train.class_column())
    for label in full_domain:
        if label not in observed:
            warnings.append(f"{fold_tag}: training split lacks class {label!r}")
    tree = build_tree(train, criterion=criterion)
    return score_accuracy(tree, test)


def cross_validate(
    dataset: Dataset, criterion: str, folds: FoldAssignment, *, missing_policy: str | None = None
) -> EvaluationReport:
    """Train on k-1 folds and test on the held-out fold, rotating k times."""
    if len(folds.assignment) != len(dataset):
        raise ValidationError("fold assignment does not cover the dataset")
    accuracies: list[float] = []
    sizes: list[tuple[int, int]] = []
    warnings: list[str] = []
    total_cm: ConfusionMatrix | None = None
    for fold in range(folds.k):
        test_idx = folds.fold_indices(fold)
        train_idx = folds.complement_indices(fold)
        train, test = dataset.subset(train_idx), dataset.subset(test_idx)
        acc, cm = _train_and_score(
            train, test, criterion, f"fold {fold}", warnings, dataset.class_domain
        )
        accuracies.append(acc)
        sizes.append((len(train_idx), len(test_idx)))
        total_cm = cm if total_cm is None else total_cm.add(cm)
    return EvaluationReport(
        dataset_name=dataset.name,
        criterion=criterion,
        protocol=f"kfold:{folds.k}",
        seed=folds.seed,
        fold_accuracies=tuple(accuracies),
        confusion=total_cm,
        fold_sizes=tuple(sizes),
        warnings=tuple(warnings),
        missing_policy=missing_policy,
    )


def evaluate_protocol(
    dataset: Dataset,
    criterion: str,
    protocol: Protocol,
    seed: int | None = None,
    *,
    missing_policy: str | None = None,
) -> EvaluationReport:
    """Run one evaluation protocol end to end and build its report."""
    if isinstance(protocol, KFoldProtocol):
        if seed is None:
            raise ValidationError("k-fold evaluation requires a seed")
        folds = assign_folds(dataset, protocol.k, seed, protocol.stratified)
        return cross_validate(dataset, criterion, folds, missing_policy=missing_policy)

    warnings: list[str] = []
    if isinstance(protocol, HoldoutProtocol):
        if seed is None:
            raise ValidationError("holdout evaluation requires a seed")
        train, test = split_holdout(dataset, protocol.train_fraction, seed, protocol.stratified)
    else:
        train, test = dataset, protocol.test
        seed = None
    acc, cm = _train_and_score(
        train, test, criterion, "split", warnings, dataset.class_domain
    )
    return EvaluationReport(
        dataset_name=dataset.name,
        criterion=criterion,
        protocol=protocol.describe(),
        seed=seed,
        fold_accuracies=(acc,),
        confusion=cm,
        fold_sizes=((len(train), len(test)),),
        warnings=tuple(warnings),
        missing_policy=missing_policy,
    )


@dataclass(frozen=True)
class ComparisonTable:
    """Accuracies of both criteria over a seed sweep, plus per-criterion summaries."""

    dataset_name: str
    protocol: str
    rows: tuple[tuple[str, int | None, float], ...]  # (criterion, seed, accuracy)
    aggregates: tuple[tuple[str, float, float], ...]  # (criterion, mean, stdev)
    missing_policy: str | None = None

    def config_lines(self) -> list[str]:
        seeds = sorted({s for _, s, _ in self.rows if s is not None})
        lines = [
            f"# crtree report v{REPORT_FORMAT_VERSION}",
            f"# dataset: {self.dataset_name or '-'}",
            f"# protocol: {self.protocol}",
        ]
        if seeds:
            lines.append(f"# seeds: {','.join(str(s) for s in seeds)}")
        if self.missing_policy:
            lines.append(f"# missing-policy: {self.missing_policy}")
        return lines

    def render(self, extra_config: Sequence[str] = ()) -> str:
        lines = self.config_lines()
        lines[1:1] = list(extra_config)
        lines.append(f"{'criterion':<10}{'seed':>6}  accuracy")
        for criterion, seed, acc in self.rows:
            seed_text = "-" if seed is None else str(seed)
            lines.append(f"{criterion:<10}{seed_text:>6}  {acc:.4f}")
        for criterion, mean, stdev in self.aggregates:
            lines.append(f"{criterion:<10}{'mean':>6}  {mean:.4f}  (stdev {stdev:.4f})")
        return "\n".join(lines) + "\n"

    def delimited_rows(self) -> list[tuple[str, ...]]:
        out = [
            (self.dataset_name, criterion, self.protocol,
             "-" if seed is None else str(seed), "mean", f"{acc:.6f}", "seed")
            for criterion, seed, acc in self.rows
        ]
        for criterion, mean, stdev in self.aggregates:
            out.append((self.dataset_name, criterion, self.protocol, "-", "mean",
                        f"{mean:.6f}", "aggregate"))
            out.append((self.dataset_name, criterion, self.protocol, "-", "std",
                        f"{stdev:.6f}", "aggregate"))
        return out


def compare_criteria(
    dataset: Dataset,
    protocol: Protocol,
    seeds: Sequence[int],
    *,
    missing_policy: str | None = None,
) -> ComparisonTable:
    """Evaluate both criteria under one protocol across a seed sweep.

    Fixed protocols need no seeds and produce one row per criterion; the
    other protocols run once per seed.  Per-seed accuracies are fold means.
    """
    if isinstance(protocol, FixedProtocol):
        run_seeds: list[int | None] = [None]
    else:
        if not seeds:
            raise ValidationError("at least one seed is required")
        run_seeds = list(seeds)

    rows: list[tuple[str, int | None, float]] = []
    aggregates: list[tuple[str, float, float]] = []
    for criterion in ("cr", "ig"):
        accs: list[float] = []
        for seed in run_seeds:
            report = evaluate_protocol(
                dataset, criterion, protocol, seed, missing_policy=missing_policy
            )
            rows.append((criterion, seed, report.mean_accuracy))
            accs.append(report.mean_accuracy)
        if not isinstance(protocol, FixedProtocol):
            aggregates.append((criterion, sum(accs) / len(accs), statistics.pstdev(accs)))
    return ComparisonTable(
        dataset_name=dataset.name,
        protocol=protocol.describe(),
        rows=tuple(rows),
        aggregates=tuple(aggregates),
        missing_policy=missing_policy,
    )


def render_delimited(rows: Sequence[Sequence[str]], config_lines: Sequence[str] = ()) -> str:
    """Comma-delimited report text with leading '#' config lines and a header row."""
    lines = list(config_lines)
    lines.append(",".join(DELIMITED_COLUMNS))
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"
