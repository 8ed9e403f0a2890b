"""Reading, writing and generating curve collections."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .curves import Curve, make_curve
from .errors import DegenerateCurve, DimensionMismatch, ParamOutOfRange, ParseError

FORMATS = ("jsonl", "csv")
FAMILIES = ("zigzag", "random_walk", "spike", "perturbed_copies")


@dataclass
class Dataset:
    curves: List[Curve]
    source_path: str = ""

    def __post_init__(self):
        dims = {c.dim for c in self.curves}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed dimensions: {sorted(dims)}")
        ids = [c.id for c in self.curves]
        if len(set(ids)) != len(ids):
            raise ParseError("curve ids are not unique")

    @property
    def dimension(self) -> int:
        return self.curves[0].dim if self.curves else 0

    @property
    def max_complexity(self) -> int:
        return max((len(c) for c in self.curves), default=0)

    def __len__(self):
        return len(self.curves)

    def by_id(self) -> "Dataset":
        """Copy with curves sorted by id."""
        return Dataset(sorted(self.curves, key=lambda c: c.id), self.source_path)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"id": c.id, "vertices": c.vertices.tolist()}) + "\n" for c in self.curves
        )

    def save(self, path) -> None:
        Path(path).write_text(self.to_jsonl())


def _curve(pid: str, pts, line: int) -> Curve:
    try:
        return make_curve(pts, normalize=False, id=pid)
    except (DegenerateCurve, DimensionMismatch, ValueError) as exc:
        raise ParseError(f"curve {pid!r}: {exc}", line) from exc


def _load_jsonl(text: str, path: str) -> Dataset:
    curves = []
    for n, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", n) from exc
        if not isinstance(rec, dict) or "vertices" not in rec:
            raise ParseError("record needs a 'vertices' field", n)
        verts = rec["vertices"]
        if not isinstance(verts, list) or not all(isinstance(v, list) for v in verts):
            raise ParseError("'vertices' must be a list of coordinate lists", n)
        if len({len(v) for v in verts}) > 1:
            raise ParseError("ragged coordinate arrays", n)
        try:
            pts = np.array(verts, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"non-numeric coordinates ({exc})", n) from exc
        curves.append(_curve(str(rec.get("id", f"c{len(curves)}")), pts, n))
    return Dataset(curves, path)


def _load_csv(text: str, path: str) -> Dataset:
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        return Dataset([], path)
    header = [h.strip() for h in rows[0]]
    if header[:2] != ["id", "vertex_index"] or len(header) < 3:
        raise ParseError("header must be id, vertex_index, x0, ..., x{d-1}", 1)
    d = len(header) - 2
    groups: Dict[str, list] = {}
    first_line: Dict[str, int] = {}
    for n, row in enumerate(rows[1:], start=2):
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != d + 2:
            raise ParseError(f"expected {d + 2} fields, got {len(row)}", n)
        try:
            idx = int(row[1])
            coords = [float(x) for x in row[2:]]
        except ValueError as exc:
            raise ParseError(str(exc), n) from exc
        groups.setdefault(row[0], []).append((idx, coords, n))
        first_line.setdefault(row[0], n)
    curves = []
    for pid, items in groups.items():
        items.sort(key=lambda t: t[0])
        idx = [t[0] for t in items]
        if len(set(idx)) != len(idx):
            dup = next(t[2] for k, t in enumerate(items) if k and items[k - 1][0] == t[0])
            raise ParseError(f"duplicate vertex_index in curve {pid!r}", dup)
        curves.append(_curve(pid, [t[1] for t in items], first_line[pid]))
    return Dataset(curves, path)


def load_dataset(path, format: Optional[str] = None) -> Dataset:
    """Load ``jsonl`` (``{"id", "vertices"}`` per line) or ``csv`` (``id, vertex_index, x0..``)."""
    path = str(path)
    if format is None:
        format = "csv" if path.endswith(".csv") else "jsonl"
    if format not in FORMATS:
        raise ParamOutOfRange(f"unknown format {format!r}")
    text = Path(path).read_text()
    return _load_jsonl(text, path) if format == "jsonl" else _load_csv(text, path)


def _ids(n: int) -> List[str]:
    width = max(3, len(str(n - 1)))
    return [f"c{i:0{width}d}" for i in range(n)]


def _random_walk(rng, m: int, d: int, step: float) -> np.ndarray:
    steps = rng.standard_normal((m - 1, d)) * (step / math.sqrt(d))
    return np.vstack([np.zeros(d), np.cumsum(steps, axis=0)])


def generate(family: str, n: int, seed: int, m: int = 8, d: int = 2, amplitude: float = 1.0,
             k: int = 2, separation: float = 10.0) -> Dataset:
    """Synthetic curve sets, deterministic in ``seed``.

    * ``zigzag``: ``m`` vertices advancing along the first axis, alternating
      by about ``amplitude`` along the second, with random jitter.
    * ``random_walk``: Gaussian steps of expected length about ``amplitude``.
    * ``spike``: a flat line with one triangular spike of height up to
      ``amplitude * 4`` (``m`` is ignored; 5 vertices).
    * ``perturbed_copies``: ``k`` random-walk prototypes, ``separation`` apart,
      and ``n`` copies split into ``k`` contiguous groups, each displaced
      vertex-wise by at most ``amplitude / 2``; copies of one prototype are
      within Fréchet distance ``amplitude`` of each other.
    """
    if family not in FAMILIES:
        raise ParamOutOfRange(f"unknown family {family!r}")
    if n < 1:
        raise ParamOutOfRange("n must be at least 1")
    if m < 2 or d < 1:
        raise ParamOutOfRange("need m >= 2 and d >= 1")
    if amplitude <= 0:
        raise ParamOutOfRange("amplitude must be positive")
    rng = np.random.default_rng(seed)
    ids = _ids(n)
    curves = []
    if family == "zigzag":
        if d < 2:
            raise ParamOutOfRange("zigzag needs d >= 2")
        for cid in ids:
            v = np.zeros((m, d))
            v[:, 0] = np.arange(m)
            v[:, 1] = amplitude * np.where(np.arange(m) % 2 == 0, 0.0, 1.0)
            v += rng.uniform(-0.1, 0.1, size=(m, d)) * amplitude
            curves.append(Curve(v, id=cid))
    elif family == "random_walk":
        for cid in ids:
            curves.append(Curve(_random_walk(rng, m, d, amplitude), id=cid))
    elif family == "spike":
        if d < 2:
            raise ParamOutOfRange("spike needs d >= 2")
        for cid in ids:
            length = 6.0
            a = rng.uniform(0.5, 2.5)
            w = rng.uniform(0.5, 2.0)
            h = rng.uniform(0.5, 4.0) * amplitude
            v = np.zeros((5, d))
            v[:, 0] = [0.0, a, a + w / 2, a + w, length]
            v[2, 1] = h
            curves.append(Curve(v, id=cid))
    else:
        if not 1 <= k <= n:
            raise ParamOutOfRange("need 1 <= k <= n")
        protos = []
        for g in range(k):
            base = _random_walk(rng, m, d, 1.0)
            base[:, 0] += g * separation
            protos.append(base)
        for i, cid in enumerate(ids):
            g = i * k // n
            dirs = rng.standard_normal((m, d))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            radii = rng.uniform(0, amplitude / 2, size=(m, 1))
            curves.append(Curve(protos[g] + dirs * radii, id=cid))
    return Dataset(curves, f"generated:{family}")
