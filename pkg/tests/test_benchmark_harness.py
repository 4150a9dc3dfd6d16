"""Drives the benchmark band-check machinery on synthetic stand-in files.

The real accuracy bands need the actual UCI files; this suite only proves
that every preset round-trips through the loader, the preprocessing
pipeline, and the criterion comparison on files with the right shape
(delimiters, missing tokens, column counts, class domains).
"""

import random

import pytest

from crtree import FixedProtocol, read_schema

import test_acceptance
from test_acceptance import BENCHMARKS, PRESETS, SWEEP_SEEDS, load_benchmark
from crtree import compare_criteria


def synthesize_rows(spec, n, rng, missing_rate=0.05):
    rows = []
    for _ in range(n):
        cells = []
        for attr in spec.attributes:
            if attr.role == "class":
                cells.append(rng.choice(list(attr.domain)))
                continue
            if rng.random() < missing_rate:
                cells.append(spec.missing_token)
                continue
            if attr.kind == "numeric":
                cells.append(f"{rng.uniform(0, 100):.1f}")
            else:
                cells.append(rng.choice(["1", "2", "3"]))
        rows.append(spec.delimiter.join(cells))
    return "\n".join(rows) + "\n"


@pytest.fixture
def synthetic_data_dir(tmp_path, monkeypatch):
    rng = random.Random(20240917)
    for name, (files, _, _, _) in BENCHMARKS.items():
        spec = read_schema(PRESETS / f"{name}.yaml")
        for i, f in enumerate((files,) if isinstance(files, str) else files):
            n = 24 if i == 0 and isinstance(files, tuple) else 60
            (tmp_path / f).write_text(synthesize_rows(spec, n, rng))
    monkeypatch.setattr(test_acceptance, "DATA", tmp_path)
    return tmp_path


@pytest.mark.parametrize("name", sorted(BENCHMARKS))
def test_benchmark_pipeline_runs_per_preset(name, synthetic_data_dir):
    dataset, protocol, _, _ = load_benchmark(name)
    assert len(dataset) > 0
    # post-pipeline, every candidate column must be categorical and complete
    for attr in dataset.schema:
        if attr.role == "feature":
            assert attr.kind == "categorical"
    seeds = () if isinstance(protocol, FixedProtocol) else SWEEP_SEEDS[:2]
    result = compare_criteria(dataset, protocol, seeds)
    assert {r[0] for r in result.rows} == {"cr", "ig"}
    assert all(0.0 <= acc <= 1.0 for _, _, acc in result.rows)


def test_missing_file_report(tmp_path, monkeypatch):
    monkeypatch.setattr(test_acceptance, "DATA", tmp_path)
    missing = test_acceptance.missing_benchmark_files()
    assert "pima-indians-diabetes.data" in missing
    assert "SPECT.test" in missing
