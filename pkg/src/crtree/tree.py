"""Decision-tree induction with a pluggable splitting criterion.

Trees split on categorical attributes, one branch per value observed in
the current partition.  At every node the highest-scoring attribute is
chosen; score ties go to the attribute with the most distinct values in
the partition, then to schema order.  Attributes are consumed along each
path, and exhaustion produces a majority-class leaf.  Split nodes remember
the majority class of the partition that created them so prediction can
fall back when it meets a value unseen during training.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .criteria import (
    CrossTab,
    correlation_ratio_categorical,
    information_gain,
)
from .data import MISSING, AttributeSchema, Dataset
from .errors import ValidationError

CRITERIA = ("cr", "ig")


@dataclass(frozen=True)
class Leaf:
    label: Any
    support: int


@dataclass(frozen=True)
class Split:
    attribute: str
    branches: dict[Any, "TreeNode"]
    fallback: Any


TreeNode = Leaf | Split


@dataclass(frozen=True)
class DecisionTree:
    """A trained tree plus the feature schema it expects at prediction time."""

    root: TreeNode
    trained_schema: tuple[AttributeSchema, ...]
    class_domain: tuple[Any, ...]
    criterion_used: str
    _index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {a.name: i for i, a in enumerate(self.trained_schema)}
        )

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.trained_schema)

    def depth(self) -> int:
        return _depth(self.root)

    def node_count(self) -> int:
        return _node_count(self.root)


def _depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(_depth(child) for child in node.branches.values())


def _node_count(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 1
    return 1 + sum(_node_count(child) for child in node.branches.values())


def _majority(labels: Iterable[Any], domain_order: Sequence[Any]) -> Any:
    counts = Counter(labels)
    if not counts:
        raise ValidationError("cannot take the majority of an empty partition")
    rank = {label: i for i, label in enumerate(domain_order)}
    best = None
    best_key = None
    for label, count in counts.items():
        key = (-count, rank.get(label, len(rank)))
        if best_key is None or key < best_key:
            best, best_key = label, key
    return best


def majority_class(dataset: Dataset) -> Any:
    """Most frequent class label; ties break by class-domain order."""
    if not dataset.rows:
        raise ValidationError("dataset is empty")
    return _majority(dataset.class_column(), dataset.class_domain)


def _partition_crosstab(
    column: Sequence[Any], classes: Sequence[Any], indices: Sequence[int],
    class_domain: Sequence[Any],
) -> CrossTab:
    values: dict[Any, int] = {}
    labels: dict[Any, int] = {}
    cells: dict[tuple[int, int], int] = {}
    for i in indices:
        v = column[i]
        if v not in values:
            values[v] = len(values)
        y = classes[i]
        if y not in labels:
            labels[y] = len(labels)
        key = (labels[y], values[v])
        cells[key] = cells.get(key, 0) + 1
    ordered_labels = [y for y in class_domain if y in labels]
    ordered_labels += [y for y in labels if y not in class_domain]
    counts = [
        [cells.get((labels[y], a), 0) for a in range(len(values))]
        for y in ordered_labels
    ]
    return CrossTab(ordered_labels, list(values), counts)


def build_tree(
    dataset: Dataset,
    criterion: str = "cr",
    available: Iterable[str] | None = None,
) -> DecisionTree:
    """Grow a decision tree over categorical features.

    ``available`` limits the attributes the tree may split on; it defaults
    to every feature-role attribute (identifier columns stay out unless
    named explicitly).  All named attributes must be categorical with no
    missing cells.
    """
    if criterion not in CRITERIA:
        raise ValidationError(f"unknown criterion {criterion!r}")
    if not dataset.rows:
        raise ValidationError("cannot build a tree from an empty dataset")

    if available is None:
        names = dataset.feature_names()
    else:
        available_set = set(available)
        names = [a.name for a in dataset.schema if a.name in available_set]
        missing_names = available_set - set(names)
        if missing_names:
            raise ValidationError(f"unknown attributes: {sorted(missing_names)}")
        for name in names:
            attr = dataset.attribute(name)
            if attr.role not in ("feature", "identifier"):
                raise ValidationError(f"{name!r} has role {attr.role!r}, cannot split on it")

    columns: dict[str, list[Any]] = {}
    for name in names:
        attr = dataset.attribute(name)
        if attr.kind != "categorical":
            raise ValidationError(
                f"attribute {name!r} is numeric; discretize it before training"
            )
        col = dataset.column(name)
        if any(v is MISSING for v in col):
            raise ValidationError(
                f"attribute {name!r} has missing cells; apply resolve_missing first"
            )
        columns[name] = col

    classes = dataset.class_column()
    domain = dataset.class_domain

    def score(name: str, indices: list[int]) -> float:
        ct = _partition_crosstab(columns[name], classes, indices, domain)
        if criterion == "cr":
            return correlation_ratio_categorical(ct).cr
        return information_gain(ct)

    def grow(indices: list[int], open_names: list[str]) -> TreeNode:
        seen = {classes[i] for i in indices}
        if len(seen) == 1:
            return Leaf(label=next(iter(seen)), support=len(indices))

        candidates: list[tuple[str, int]] = []
        for name in open_names:
            col = columns[name]
            distinct = {col[i] for i in indices}
            if len(distinct) >= 2:
                candidates.append((name, len(distinct)))
        majority = _majority((classes[i] for i in indices), domain)
        if not candidates:
            return Leaf(label=majority, support=len(indices))

        best_name = None
        best_score = None
        best_distinct = -1
        for name, distinct in candidates:
            s = score(name, indices)
            # strict comparisons keep the earliest schema position on full ties
            if best_score is None or s > best_score or (
                s == best_score and distinct > best_distinct
            ):
                best_name, best_score, best_distinct = name, s, distinct

        groups: dict[Any, list[int]] = {}
        col = columns[best_name]
        for i in indices:
            groups.setdefault(col[i], []).append(i)
        remaining = [n for n in open_names if n != best_name]
        branches = {value: grow(sub, remaining) for value, sub in groups.items()}
        return Split(attribute=best_name, branches=branches, fallback=majority)

    root = grow(list(range(len(dataset))), names)
    trained = tuple(dataset.attribute(n) for n in names)
    return DecisionTree(
        root=root, trained_schema=trained, class_domain=domain, criterion_used=criterion
    )


def predict(tree: DecisionTree, row: Sequence[Any]) -> Any:
    """Classify one feature vector ordered like the trained schema.

    A split with no branch for the row's value answers with the majority
    class of the partition that created the split.
    """
    if len(row) != len(tree.trained_schema):
        raise ValidationError(
            f"expected {len(tree.trained_schema)} feature values, got {len(row)}"
        )
    node = tree.root
    while isinstance(node, Split):
        value = row[tree._index[node.attribute]]
        child = node.branches.get(value)
        if child is None:
            return node.fallback
        node = child
    return node.label


def predict_dataset(tree: DecisionTree, dataset: Dataset) -> list[Any]:
    """Classify every row of a dataset whose schema matches the trained one."""
    positions = []
    for attr in tree.trained_schema:
        i = dataset.index_of(attr.name)  # raises if absent
        if dataset.schema[i].kind != attr.kind:
            raise ValidationError(
                f"attribute {attr.name!r} has kind {dataset.schema[i].kind!r}, "
                f"trained on {attr.kind!r}"
            )
        positions.append(i)
    return [predict(tree, [row[i] for i in positions]) for row in dataset.rows]


def render_tree(tree: DecisionTree, format: str = "text") -> str:
    """Render a tree as an indented listing or a DOT digraph."""
    if format == "text":
        return _render_text(tree.root)
    if format == "dot":
        return _render_dot(tree.root)
    raise ValidationError(f"unknown tree format {format!r}")


def _render_text(root: TreeNode) -> str:
    lines: list[str] = []

    def walk(node: TreeNode, depth: int) -> None:
        pad = "  " * depth
        if isinstance(node, Leaf):
            lines.append(f"{pad}→ {node.label} ({node.support})")
            return
        for value, child in node.branches.items():
            lines.append(f"{pad}{node.attribute} = {value}")
            walk(child, depth + 1)

    walk(root, 0)
    return "\n".join(lines) + "\n"


def _dot_escape(text: Any) -> str:
    return str(text).replace("\\", "\\\\").replace('"', '\\"')


def _render_dot(root: TreeNode) -> str:
    lines = ["digraph decision_tree {", "  node [shape=box];"]
    counter = 0

    def walk(node: TreeNode) -> int:
        nonlocal counter
        my_id = counter
        counter += 1
        if isinstance(node, Leaf):
            lines.append(
                f'  n{my_id} [shape=ellipse, label="{_dot_escape(node.label)} ({node.support})"];'
            )
            return my_id
        lines.append(f'  n{my_id} [label="{_dot_escape(node.attribute)}"];')
        for value, child in node.branches.items():
            child_id = walk(child)
            lines.append(f'  n{my_id} -> n{child_id} [label="{_dot_escape(value)}"];')
        return my_id

    walk(root)
    lines.append("}")
    return "\n".join(lines) + "\n"
