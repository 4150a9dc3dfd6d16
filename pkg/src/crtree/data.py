"""Tabular datasets: attribute schemas, immutable row tables, and loaders.

A :class:`Dataset` is a validated, immutable table of rows plus an ordered
attribute schema with exactly one class attribute.  Cells hold category
labels (strings), finite floats, or the :data:`MISSING` sentinel.  Schemas
can be written by hand or read from a YAML document (see :func:`read_schema`).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, BinaryIO, Iterable, Sequence

import yaml

from .errors import ParseError, ValidationError

ROLES = ("feature", "class", "identifier", "ignore")
KINDS = ("categorical", "numeric")

#: Reserved category produced by the "own-category" missing-value policy.
MISSING_LABEL = "⟨missing⟩"


class _MissingType:
    """Singleton sentinel for an absent cell value."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MISSING"

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self


MISSING = _MissingType()

#: A feature column's values keyed by class label, in class-domain order.
GroupedColumn = dict[Any, list[Any]]


@dataclass(frozen=True)
class BinDirective:
    """How a numeric attribute should be turned into categories."""

    method: str = "equal-width"
    bins: int = 5

    def __post_init__(self):
        if self.method not in ("equal-width", "equal-frequency"):
            raise ValidationError(f"unknown discretization method {self.method!r}")
        if self.bins < 2:
            raise ValidationError("bin count must be at least 2")


@dataclass(frozen=True)
class AttributeSchema:
    """Name, role, kind, and optional domain/discretization of one column."""

    name: str
    role: str = "feature"
    kind: str = "categorical"
    domain: tuple[str, ...] | None = None
    discretize: BinDirective | None = None

    def __post_init__(self):
        if not self.name:
            raise ValidationError("attribute name must be non-empty")
        if self.role not in ROLES:
            raise ValidationError(f"{self.name}: unknown role {self.role!r}")
        if self.kind not in KINDS:
            raise ValidationError(f"{self.name}: unknown kind {self.kind!r}")
        if self.domain is not None:
            if not self.domain:
                raise ValidationError(f"{self.name}: declared domain is empty")
            if len(set(self.domain)) != len(self.domain):
                raise ValidationError(f"{self.name}: declared domain has duplicates")
        if self.discretize is not None and self.kind != "numeric":
            raise ValidationError(
                f"{self.name}: discretize may only be set on numeric attributes"
            )


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


class Dataset:
    """Immutable table of rows bound to an attribute schema.

    Rows and schema are stored as tuples; instances are safe to share
    between threads and every operation on them returns a new object.
    """

    __slots__ = ("schema", "rows", "name", "class_index", "_class_domain")

    def __init__(
        self,
        schema: Sequence[AttributeSchema],
        rows: Iterable[Sequence[Any]],
        name: str = "",
        *,
        validate: bool = True,
    ):
        self.schema: tuple[AttributeSchema, ...] = tuple(schema)
        self.rows: tuple[tuple[Any, ...], ...] = tuple(tuple(r) for r in rows)
        self.name = name

        class_positions = [i for i, a in enumerate(self.schema) if a.role == "class"]
        if len(class_positions) != 1:
            raise ValidationError(
                f"dataset must have exactly one class attribute, found {len(class_positions)}"
            )
        self.class_index: int = class_positions[0]

        names = [a.name for a in self.schema]
        if len(set(names)) != len(names):
            raise ValidationError("attribute names must be unique")

        if validate:
            self._validate_rows()
        self._class_domain: tuple[Any, ...] = self._compute_class_domain()

    def _validate_rows(self) -> None:
        width = len(self.schema)
        for r, row in enumerate(self.rows):
            if len(row) != width:
                raise ValidationError(
                    f"row {r + 1}: expected {width} cells, got {len(row)}"
                )
            for attr, cell in zip(self.schema, row):
                if attr.role == "class":
                    if cell is MISSING:
                        raise ValidationError(f"row {r + 1}: class value is missing")
                    if attr.domain is not None and cell not in attr.domain:
                        raise ValidationError(
                            f"row {r + 1}: class label {cell!r} not in declared domain"
                        )
                    continue
                if cell is MISSING:
                    continue
                if attr.kind == "numeric":
                    # the reserved label may appear in numeric columns after
                    # resolve_missing(own-category) and before discretization
                    if cell == MISSING_LABEL:
                        continue
                    if not _is_number(cell) or not math.isfinite(cell):
                        raise ValidationError(
                            f"row {r + 1}: attribute {attr.name!r} expects a finite number, "
                            f"got {cell!r}"
                        )
                elif attr.domain is not None and cell not in attr.domain:
                    raise ValidationError(
                        f"row {r + 1}: value {cell!r} not in declared domain of "
                        f"{attr.name!r}"
                    )

    def _compute_class_domain(self) -> tuple[Any, ...]:
        declared = self.schema[self.class_index].domain
        if declared is not None:
            return tuple(declared)
        seen: dict[Any, None] = {}
        for row in self.rows:
            seen.setdefault(row[self.class_index], None)
        return tuple(seen)

    # -- basic accessors -------------------------------------------------

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def class_attribute(self) -> AttributeSchema:
        return self.schema[self.class_index]

    @property
    def class_domain(self) -> tuple[Any, ...]:
        """Class labels in declaration order (declared domain, else first appearance)."""
        return self._class_domain

    def index_of(self, attribute: str) -> int:
        for i, a in enumerate(self.schema):
            if a.name == attribute:
                return i
        raise ValidationError(f"no attribute named {attribute!r}")

    def attribute(self, attribute: str) -> AttributeSchema:
        return self.schema[self.index_of(attribute)]

    def column(self, attribute: str) -> list[Any]:
        i = self.index_of(attribute)
        return [row[i] for row in self.rows]

    def class_column(self) -> list[Any]:
        return [row[self.class_index] for row in self.rows]

    def feature_names(self, include_identifiers: bool = False) -> list[str]:
        """Names of candidate split attributes, in schema order.

        Identifier-role attributes are excluded unless explicitly requested.
        """
        wanted = ("feature", "identifier") if include_identifiers else ("feature",)
        return [a.name for a in self.schema if a.role in wanted]

    def subset(self, indices: Iterable[int]) -> "Dataset":
        rows = [self.rows[i] for i in indices]
        return Dataset(self.schema, rows, self.name, validate=False)

    def replace_column(
        self, attribute: str, new_schema: AttributeSchema, values: Sequence[Any]
    ) -> "Dataset":
        """New dataset with one column's schema and cells swapped out."""
        if len(values) != len(self.rows):
            raise ValidationError("replacement column has wrong length")
        i = self.index_of(attribute)
        schema = list(self.schema)
        schema[i] = new_schema
        rows = [row[:i] + (values[r],) + row[i + 1 :] for r, row in enumerate(self.rows)]
        return Dataset(schema, rows, self.name, validate=False)

    def observed_domain(self, attribute: str) -> list[Any]:
        """Distinct non-missing values of a column, in first-appearance order."""
        seen: dict[Any, None] = {}
        for v in self.column(attribute):
            if v is not MISSING:
                seen.setdefault(v, None)
        return list(seen)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Dataset{label}: {len(self.rows)} rows x {len(self.schema)} attributes>"


def load_table(
    source: str | Path | BinaryIO,
    schema: Sequence[AttributeSchema],
    *,
    delimiter: str = ",",
    header: bool = False,
    missing_token: str = "?",
    name: str = "",
) -> Dataset:
    """Read a delimited text file (UCI ``.data`` conventions) into a Dataset.

    Cells equal to ``missing_token`` (after stripping surrounding whitespace)
    become :data:`MISSING`; numeric cells must parse as finite numbers.
    Blank lines are skipped.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return load_table(
                fh, schema, delimiter=delimiter, header=header,
                missing_token=missing_token, name=name or Path(source).stem,
            )

    text = io.TextIOWrapper(source, encoding="utf-8", newline="")
    reader = csv.reader(text, delimiter=delimiter)
    schema = tuple(schema)
    rows: list[tuple[Any, ...]] = []
    data_row = 0
    for lineno, raw in enumerate(reader, start=1):
        if header and lineno == 1:
            continue
        if not raw or all(not c.strip() for c in raw):
            continue
        data_row += 1
        cells = [c.strip() for c in raw]
        if len(cells) != len(schema):
            raise ParseError(
                f"row {data_row}: expected {len(schema)} cells, got {len(cells)}"
            )
        parsed: list[Any] = []
        for attr, cell in zip(schema, cells):
            if cell == missing_token:
                parsed.append(MISSING)
                continue
            if attr.kind == "numeric":
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(
                        f"row {data_row}: attribute {attr.name!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
                if not math.isfinite(value):
                    raise ParseError(
                        f"row {data_row}: attribute {attr.name!r}: non-finite value {cell!r}"
                    )
                parsed.append(value)
            else:
                if attr.domain is not None and cell not in attr.domain:
                    raise ValidationError(
                        f"row {data_row}: value {cell!r} not in declared domain of "
                        f"{attr.name!r}"
                    )
                parsed.append(cell)
        rows.append(tuple(parsed))
    return Dataset(schema, rows, name)


def group_by_class(dataset: Dataset, attribute: str) -> GroupedColumn:
    """Partition one feature column by class label.

    Returns a mapping from each observed class label (in class-domain order)
    to the attribute's values for rows with that label.  Group sizes sum to
    the dataset row count.
    """
    attr = dataset.attribute(attribute)
    if attr.role not in ("feature", "identifier"):
        raise ValidationError(f"{attribute!r} is not a feature attribute")
    col = dataset.index_of(attribute)
    groups: GroupedColumn = {}
    for row in dataset.rows:
        groups.setdefault(row[dataset.class_index], []).append(row[col])
    ordered: GroupedColumn = {}
    for label in dataset.class_domain:
        if label in groups:
            ordered[label] = groups.pop(label)
    ordered.update(groups)  # labels outside the declared domain, if any
    return ordered


@dataclass(frozen=True)
class SchemaSpec:
    """Parsed schema document: attribute list plus loader options."""

    attributes: tuple[AttributeSchema, ...]
    name: str = ""
    delimiter: str = ","
    header: bool = False
    missing_token: str = "?"


def read_schema(source: str | Path | BinaryIO) -> SchemaSpec:
    """Parse a YAML schema document.

    Expected layout::

        name: post-operative
        options: {delimiter: ",", header: false, missing_token: "?"}
        attributes:
          - {name: L-CORE, kind: categorical}
          - {name: COMFORT, kind: numeric, discretize: {method: equal-width, bins: 5}}
          - {name: decision, role: class, kind: categorical, domain: [A, S, I]}

    ``role`` defaults to ``feature`` and ``kind`` to ``categorical``;
    ``domain`` entries are read as strings.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return read_schema(fh)
    try:
        doc = yaml.safe_load(source)
    except yaml.YAMLError as exc:
        raise ParseError(f"schema document is not valid YAML: {exc}") from None
    if not isinstance(doc, dict) or "attributes" not in doc:
        raise ParseError("schema document must be a mapping with an 'attributes' list")

    options = doc.get("options") or {}
    if not isinstance(options, dict):
        raise ParseError("'options' must be a mapping")

    attributes = []
    for pos, entry in enumerate(doc["attributes"]):
        if not isinstance(entry, dict) or "name" not in entry:
            raise ParseError(f"attribute #{pos + 1}: each entry needs at least a name")
        directive = None
        if entry.get("discretize") is not None:
            spec = entry["discretize"]
            if not isinstance(spec, dict):
                raise ParseError(f"attribute {entry['name']!r}: discretize must be a mapping")
            directive = BinDirective(
                method=spec.get("method", "equal-width"),
                bins=int(spec.get("bins", 5)),
            )
        domain = entry.get("domain")
        attributes.append(
            AttributeSchema(
                name=str(entry["name"]),
                role=entry.get("role", "feature"),
                kind=entry.get("kind", "categorical"),
                domain=tuple(str(v) for v in domain) if domain is not None else None,
                discretize=directive,
            )
        )
    return SchemaSpec(
        attributes=tuple(attributes),
        name=str(doc.get("name", "")),
        delimiter=str(options.get("delimiter", ",")),
        header=bool(options.get("header", False)),
        missing_token=str(options.get("missing_token", "?")),
    )
