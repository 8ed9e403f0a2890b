import json

import numpy as np
import pytest

from frechet_jl import frechet_distance
from frechet_jl.datasets import FAMILIES, Dataset, generate, load_dataset
from frechet_jl.errors import DimensionMismatch, ParamOutOfRange, ParseError


def test_jsonl_two_segments(tmp_path):
    p = tmp_path / "d.jsonl"
    p.write_text('{"id": "a", "vertices": [[0, 0], [1, 0]]}\n{"id": "b", "vertices": [[0, 1], [1, 1]]}\n')
    ds = load_dataset(p)
    assert len(ds) == 2 and ds.dimension == 2 and [c.id for c in ds.curves] == ["a", "b"]


def test_csv_reassembles_order(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("id,vertex_index,x0,x1\na,2,2,0\na,0,0,0\nb,1,1,1\na,1,1,0\nb,0,0,1\n")
    ds = load_dataset(p, "csv")
    assert ds.curves[0].vertices.tolist() == [[0, 0], [1, 0], [2, 0]]
    assert ds.curves[1].vertices.tolist() == [[0, 1], [1, 1]]


@pytest.mark.parametrize(
    "text, line",
    [
        ('{"id": "a", "vertices": [[0, 0], [1, 0, 3]]}\n', 1),
        ('{"id": "a", "vertices": [[0, 0], [1, 0]]}\nnot json\n', 2),
        ('{"id": "a", "vertices": [[0, 0]]}\n', 1),
        ('{"id": "a"}\n', 1),
        ('{"id": "a", "vertices": [[0, "x"], [1, 0]]}\n', 1),
    ],
)
def test_jsonl_parse_errors(tmp_path, text, line):
    p = tmp_path / "bad.jsonl"
    p.write_text(text)
    with pytest.raises(ParseError) as info:
        load_dataset(p)
    assert info.value.line == line and str(info.value).startswith(f"line {line}:")


def test_csv_parse_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("id,vertex_index,x0\na,0,1\na,1,oops\n")
    with pytest.raises(ParseError) as info:
        load_dataset(p)
    assert info.value.line == 3
    p.write_text("name,x\n")
    with pytest.raises(ParseError):
        load_dataset(p)


def test_mixed_dimensions_rejected(tmp_path):
    p = tmp_path / "mix.jsonl"
    p.write_text('{"id": "a", "vertices": [[0, 0], [1, 0]]}\n{"id": "b", "vertices": [[0, 0, 0], [1, 1, 1]]}\n')
    with pytest.raises(DimensionMismatch):
        load_dataset(p)


def test_unique_ids(tmp_path):
    p = tmp_path / "dup.jsonl"
    p.write_text('{"id": "a", "vertices": [[0, 0], [1, 0]]}\n{"id": "a", "vertices": [[0, 1], [1, 1]]}\n')
    with pytest.raises(ParseError):
        load_dataset(p)


@pytest.mark.parametrize("family", FAMILIES)
def test_generate_deterministic(family):
    a = generate(family, 4, 9, m=5, d=3)
    b = generate(family, 4, 9, m=5, d=3)
    assert a.to_jsonl() == b.to_jsonl()
    assert a.to_jsonl() != generate(family, 4, 10, m=5, d=3).to_jsonl()


def test_generate_errors():
    with pytest.raises(ParamOutOfRange):
        generate("random_walk", 0, 1)
    with pytest.raises(ParamOutOfRange):
        generate("nope", 3, 1)
    with pytest.raises(ParamOutOfRange):
        generate("perturbed_copies", 2, 1, k=3)


def test_perturbed_copies_structure():
    ds = generate("perturbed_copies", 6, 0, m=4, d=2, amplitude=0.2, k=2, separation=10)
    c = ds.curves
    assert frechet_distance(c[0], c[1]) <= 0.2 and frechet_distance(c[3], c[5]) <= 0.2
    assert frechet_distance(c[0], c[5]) > 5


def test_roundtrip(tmp_path):
    ds = generate("random_walk", 3, 1, m=4, d=2)
    ds.save(tmp_path / "x.jsonl")
    back = load_dataset(tmp_path / "x.jsonl")
    assert [np.array_equal(a.vertices, b.vertices) for a, b in zip(ds.curves, back.curves)] == [True] * 3
