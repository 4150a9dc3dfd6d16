"""Shared builders and hypothesis strategies for the test suite."""

from __future__ import annotations

from typing import Any, Sequence

from hypothesis import strategies as st

from crtree import AttributeSchema, Dataset


def table(
    features: dict[str, list[Any]],
    labels: Sequence[Any],
    domain: Sequence[Any] | None = None,
    name: str = "test",
) -> Dataset:
    """Dataset with all-categorical feature columns and an explicit class column."""
    schema = [AttributeSchema(n) for n in features]
    schema.append(
        AttributeSchema(
            "label", role="class",
            domain=tuple(domain) if domain is not None else None,
        )
    )
    columns = list(features.values())
    rows = [tuple(col[i] for col in columns) + (labels[i],) for i in range(len(labels))]
    return Dataset(schema, rows, name)


def bp_example_dataset() -> Dataset:
    """The 15-patient blood-pressure/blood-sugar example table."""
    rows = [
        (60, 100, "teenager"), (75, 120, "teenager"), (70, 90, "teenager"),
        (80, 125, "teenager"), (65, 90, "teenager"),
        (80, 110, "middle-aged"), (75, 105, "middle-aged"), (85, 123, "middle-aged"),
        (72, 92, "middle-aged"),
        (90, 130, "old"), (80, 109, "old"), (120, 130, "old"),
        (100, 132, "old"), (95, 127, "old"), (85, 119, "old"),
    ]
    schema = [
        AttributeSchema("BP", kind="numeric"),
        AttributeSchema("BS", kind="numeric"),
        AttributeSchema("age-group", role="class"),
    ]
    return Dataset(schema, [(float(a), float(b), c) for a, b, c in rows], "bp-example")


def temperature_dataset(domain: tuple[str, str] = ("Yes", "No")) -> Dataset:
    """Seven rows realizing the temperature crosstab Hot(2No,1Yes) Mild(1,1) Cool(0,2)."""
    rows = [
        ("Hot", "No"), ("Hot", "No"), ("Hot", "Yes"),
        ("Mild", "No"), ("Mild", "Yes"),
        ("Cool", "Yes"), ("Cool", "Yes"),
    ]
    schema = [
        AttributeSchema("Temperature"),
        AttributeSchema("play", role="class", domain=domain),
    ]
    return Dataset(schema, rows, "temperature")


# -- hypothesis strategies -------------------------------------------------

LABELS = ("alpha", "beta", "gamma")
TOKENS = ("a", "b", "c", "d")


@st.composite
def categorical_datasets(
    draw,
    min_rows: int = 2,
    max_rows: int = 14,
    max_features: int = 3,
    max_classes: int = 3,
    require_impure: bool = False,
    consistent: bool = False,
):
    """Random small all-categorical datasets.

    ``consistent`` derives the class label from the feature tuple so no two
    identical rows disagree; ``require_impure`` forces at least two distinct
    class labels.
    """
    n_rows = draw(st.integers(min_rows, max_rows))
    n_features = draw(st.integers(1, max_features))
    alphabets = [draw(st.integers(1, len(TOKENS))) for _ in range(n_features)]
    n_classes = draw(st.integers(2 if require_impure else 1, max_classes))

    feature_rows = [
        tuple(draw(st.sampled_from(TOKENS[: alphabets[j]])) for j in range(n_features))
        for _ in range(n_rows)
    ]
    if consistent:
        mapping: dict[tuple, str] = {}
        for row in feature_rows:
            if row not in mapping:
                mapping[row] = LABELS[len(mapping) % n_classes]
        labels = [mapping[row] for row in feature_rows]
    else:
        labels = [draw(st.sampled_from(LABELS[:n_classes])) for _ in range(n_rows)]
    if require_impure and len(set(labels)) < 2:
        flip = draw(st.integers(0, n_rows - 1))
        current = labels[flip]
        labels[flip] = next(l for l in LABELS[:n_classes] if l != current)

    schema = [AttributeSchema(f"f{j}") for j in range(n_features)]
    schema.append(AttributeSchema("label", role="class", domain=LABELS[:n_classes]))
    rows = [feature_rows[i] + (labels[i],) for i in range(n_rows)]
    return Dataset(schema, rows, "hypothesis")
