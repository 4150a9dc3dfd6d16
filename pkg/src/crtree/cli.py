"""Command-line interface: score, train, evaluate, and compare.

Every command is deterministic given its full flag set; all randomness
flows from explicit ``--seed`` values, and output files are written once,
atomically, when the command finishes.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

from .criteria import (
    build_crosstab,
    correlation_ratio_categorical,
    correlation_ratio_numeric,
    information_gain,
)
from .data import MISSING, Dataset, SchemaSpec, load_table, read_schema
from .errors import CrtreeError
from .evaluation import (
    FixedProtocol,
    HoldoutProtocol,
    KFoldProtocol,
    Protocol,
    compare_criteria,
    evaluate_protocol,
    render_delimited,
    score_accuracy,
)
from .preprocessing import apply_schema_discretization, resolve_missing
from .tree import build_tree, render_tree


class CliError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


def _stage(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CrtreeError as exc:
        raise CliError(stage, str(exc)) from exc
    except OSError as exc:
        raise CliError(stage, f"{exc.filename or ''}: {exc.strerror or exc}") from exc


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(args) -> tuple[Dataset, SchemaSpec]:
    if not args.schema:
        raise CliError("config", "--schema is required")
    if not args.data:
        raise CliError("config", "--data is required")
    spec = _stage("schema", read_schema, args.schema)
    dataset = _stage(
        "load",
        load_table,
        args.data,
        spec.attributes,
        delimiter=spec.delimiter,
        header=spec.header,
        missing_token=spec.missing_token,
        name=spec.name or Path(args.data).stem,
    )
    return dataset, spec


def _preprocess(dataset: Dataset, policy: str) -> Dataset:
    resolved = _stage("missing", resolve_missing, dataset, policy)
    return _stage("discretize", apply_schema_discretization, resolved)


def _parse_protocol(text: str | None) -> tuple[str, str]:
    if not text:
        raise CliError("config", "--protocol is required (kfold:K, holdout:F, or fixed:PATH)")
    kind, _, value = text.partition(":")
    if kind not in ("kfold", "holdout", "fixed") or not value:
        raise CliError("config", f"cannot parse protocol {text!r}")
    return kind, value


def _build_protocol(args, dataset: Dataset, spec) -> tuple[Protocol, Dataset]:
    """Build the protocol object; for fixed splits, re-bin train and test together."""
    kind, value = _parse_protocol(args.protocol)
    if kind == "kfold":
        try:
            k = int(value)
        except ValueError:
            raise CliError("config", f"bad fold count {value!r}") from None
        return KFoldProtocol(k), _preprocess(dataset, args.missing)
    if kind == "holdout":
        try:
            fraction = float(value)
        except ValueError:
            raise CliError("config", f"bad train fraction {value!r}") from None
        return HoldoutProtocol(fraction), _preprocess(dataset, args.missing)

    test_raw = _stage(
        "load",
        load_table,
        value,
        spec.attributes,
        delimiter=spec.delimiter,
        header=spec.header,
        missing_token=spec.missing_token,
        name=Path(value).stem,
    )
    # discretization cut points and imputation modes must be shared by both
    # sides, so preprocess the concatenated table and split it back apart
    combined = Dataset(
        dataset.schema, dataset.rows + test_raw.rows, dataset.name, validate=False
    )
    prepared = _preprocess(combined, args.missing)
    train = prepared.subset(range(len(dataset)))
    test = prepared.subset(range(len(dataset), len(prepared)))
    return FixedProtocol(test=test, label=Path(value).name), train


def _seeds(args, *, required: bool) -> list[int]:
    seeds = args.seed or []
    if required and not seeds:
        raise CliError("config", "this protocol requires at least one --seed")
    return seeds


def _out_paths(out: str) -> tuple[Path, Path]:
    path = Path(out)
    if path.suffix == ".csv":
        return path.with_suffix(".txt"), path
    return path, path.with_suffix(".csv") if path.suffix else Path(str(path) + ".csv")


def _emit(args, human: str, delimited: str | None) -> None:
    if args.out:
        human_path, csv_path = _out_paths(args.out)
        _stage("write", _write_atomic, human_path, human)
        if delimited is not None:
            _stage("write", _write_atomic, csv_path, delimited)
    else:
        sys.stdout.write(human)


def _config_lines(args) -> list[str]:
    return [f"# data: {args.data}", f"# schema: {args.schema}"]


# -- commands ------------------------------------------------------------


def cmd_score(args) -> int:
    dataset, _ = _load(args)
    prepared = _preprocess(dataset, args.missing)
    names = prepared.feature_names(include_identifiers=args.allow_id_attributes)
    if args.attribute:
        if args.attribute not in names:
            raise CliError("config", f"no feature attribute named {args.attribute!r}")
        names = [args.attribute]

    rows = []
    for name in names:
        attr = prepared.attribute(name)
        cr = ig = None
        if attr.kind == "categorical":
            ct = build_crosstab(prepared, name)
            cr = correlation_ratio_categorical(ct).cr
            ig = information_gain(ct)
        numeric_cr = None
        if args.numeric_cr and dataset.attribute(name).kind == "numeric":
            keep = [i for i, v in enumerate(dataset.column(name)) if v is not MISSING]
            if len(keep) >= 2:
                groups = {}
                for i in keep:
                    row = dataset.rows[i]
                    groups.setdefault(row[dataset.class_index], []).append(
                        row[dataset.index_of(name)]
                    )
                numeric_cr = correlation_ratio_numeric(groups).cr
        rows.append((name, cr, ig, numeric_cr))

    sort_key = 1 if args.criterion == "cr" else 2
    rows.sort(key=lambda r: (r[sort_key] is None, -(r[sort_key] or 0.0)))

    def fmt(v):
        return "-" if v is None else f"{v:.3f}"

    width = max([len(r[0]) for r in rows] + [9])
    lines = [f"# crtree scores", f"# data: {args.data}", f"# schema: {args.schema}"]
    for name, cr, ig, ncr in rows:
        line = f"{name:<{width}}  cr={fmt(cr)}  ig={fmt(ig)}"
        if args.numeric_cr:
            line += f"  numeric_cr={fmt(ncr)}"
        lines.append(line)
    _emit(args, "\n".join(lines) + "\n", None)
    return 0


def cmd_train(args) -> int:
    dataset, _ = _load(args)
    prepared = _preprocess(dataset, args.missing)
    available = prepared.feature_names(include_identifiers=args.allow_id_attributes)
    tree = _stage("train", build_tree, prepared, args.criterion, available)
    rendered = render_tree(tree, format=args.tree_format)
    if args.out:
        _stage("write", _write_atomic, Path(args.out), rendered)
    else:
        sys.stdout.write(rendered)
    accuracy, _ = score_accuracy(tree, prepared)
    sys.stdout.write(
        f"tree: {tree.node_count()} nodes, depth {tree.depth()}, "
        f"training accuracy {accuracy:.4f}\n"
    )
    return 0


def cmd_evaluate(args) -> int:
    dataset, spec = _load(args)
    protocol, prepared = _build_protocol(args, dataset, spec)
    fixed = isinstance(protocol, FixedProtocol)
    seeds = _seeds(args, required=not fixed)
    seed = None if fixed else seeds[0]
    report = _stage(
        "evaluate", evaluate_protocol, prepared, args.criterion, protocol, seed,
        missing_policy=args.missing,
    )
    extra = _config_lines(args)
    human = report.render(extra_config=extra)
    delimited = render_delimited(report.delimited_rows(), report.config_lines()[:1])
    _emit(args, human, delimited)
    return 0


def cmd_compare(args) -> int:
    dataset, spec = _load(args)
    protocol, prepared = _build_protocol(args, dataset, spec)
    fixed = isinstance(protocol, FixedProtocol)
    seeds = _seeds(args, required=not fixed)
    table = _stage(
        "compare", compare_criteria, prepared, protocol, seeds,
        missing_policy=args.missing,
    )
    extra = _config_lines(args)
    human = table.render(extra_config=extra)
    delimited = render_delimited(table.delimited_rows(), table.config_lines()[:1])
    _emit(args, human, delimited)
    return 0


# -- argument parsing ------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crtree",
        description="Decision trees for categorical data with correlation-ratio "
        "and information-gain splitting.",
    )
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--data", metavar="PATH", help="delimited data file")
    shared.add_argument("--schema", metavar="PATH", help="YAML schema document")
    shared.add_argument(
        "--criterion", choices=("cr", "ig"), default="cr",
        help="splitting criterion (default: cr)",
    )
    shared.add_argument(
        "--protocol", metavar="SPEC",
        help="evaluation protocol: kfold:K, holdout:F, or fixed:TEST-PATH",
    )
    shared.add_argument(
        "--seed", type=int, action="append", metavar="N",
        help="RNG seed; repeat the flag for seed sweeps",
    )
    shared.add_argument(
        "--missing", choices=("own-category", "mode-impute"), default="own-category",
        help="missing-value policy (default: own-category)",
    )
    shared.add_argument("--out", metavar="PATH", help="output path (default: stdout)")
    shared.add_argument(
        "--tree-format", choices=("text", "dot"), default="text",
        help="tree rendering format (default: text)",
    )
    shared.add_argument(
        "--numeric-cr", action="store_true",
        help="also report the numeric correlation ratio of raw numeric columns",
    )
    shared.add_argument(
        "--allow-id-attributes", action="store_true",
        help="let identifier-role attributes act as split candidates",
    )
    shared.add_argument(
        "--attribute", metavar="NAME", help="restrict score output to one attribute"
    )

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("score", parents=[shared], help="per-attribute criterion scores")
    commands.add_parser("train", parents=[shared], help="train a tree and render it")
    commands.add_parser("evaluate", parents=[shared], help="run one evaluation protocol")
    commands.add_parser("compare", parents=[shared], help="compare both criteria")
    return parser


_COMMANDS = {
    "score": cmd_score,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
