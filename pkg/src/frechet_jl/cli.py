"""Command-line front end.

Every command prints (or writes to ``--out``) a single JSON report whose
content depends only on the input files and flags.  Exit status: 0 when all
checks pass, 1 when a check fails, 2 on usage, input or parameter errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from . import __version__
from .cluster import kl_center, kl_median
from .curves import Curve
from .datasets import FAMILIES, FORMATS, Dataset, generate, load_dataset
from .embed import embed_curve_set
from .errors import CapExceeded, FrechetJLError, RetriesExhausted
from .frechet import discrete_frechet, frechet_distance, weak_frechet_distance
from .kernels import BACKEND
from .oracle import brute_discrete_frechet, resampled_frechet_band
from .simplify import simplify

METRICS: Dict[str, Callable] = {
    "continuous": frechet_distance,
    "weak": weak_frechet_distance,
    "discrete": discrete_frechet,
}

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# pairwise distances, optionally in worker processes


def _pair_chunk(args) -> List[float]:
    metric, verts_a, verts_b = args
    fn = METRICS[metric]
    return [fn(a, b) for a, b in zip(verts_a, verts_b)]


def _map_pairs(metric: str, pairs: Sequence[Tuple[np.ndarray, np.ndarray]], workers: int) -> List[float]:
    if workers <= 1 or len(pairs) < 2:
        return _pair_chunk((metric, [p[0] for p in pairs], [p[1] for p in pairs]))
    size = max(1, -(-len(pairs) // (4 * workers)))
    chunks = [pairs[i : i + size] for i in range(0, len(pairs), size)]
    jobs = [(metric, [p[0] for p in c], [p[1] for p in c]) for c in chunks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return [x for part in ex.map(_pair_chunk, jobs) for x in part]


def distance_matrix(curves: Sequence[Curve], metric: str = "continuous", workers: int = 1) -> np.ndarray:
    n = len(curves)
    idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    vals = _map_pairs(metric, [(curves[i].vertices, curves[j].vertices) for i, j in idx], workers)
    out = np.zeros((n, n))
    for (i, j), v in zip(idx, vals):
        out[i, j] = out[j, i] = v
    return out


# --------------------------------------------------------------------------
# commands


def _load(args) -> Dataset:
    if not args.input:
        raise UsageError("--input is required")
    return load_dataset(args.input, args.format).by_id()


def _ids(ds: Dataset) -> List[str]:
    return [c.id for c in ds.curves]


def _params(args, ds: Dataset = None, **extra) -> dict:
    p = {k: v for k, v in vars(args).items() if k not in ("func", "out", "workers", "timings", "command")}
    if ds is not None:
        p.update(n=len(ds), d=ds.dimension, m=ds.max_complexity)
    p.update(extra)
    return p


def _embed(ds: Dataset, args):
    return embed_curve_set(ds.curves, args.eps, args.seed, certify=args.certify, beta=args.beta,
                           max_retries=args.max_retries, all_pairs=args.all_pairs, target_dim=args.target_dim)


def _map_summary(res) -> dict:
    f = res.linear_map
    return {
        "scheme": f.scheme,
        "seed": f.seed,
        "d": f.d,
        "d_prime": f.d_prime,
        "no_reduction": res.job.no_reduction,
        "attempts": res.attempts,
        "augmented_points": int(len(res.job.augmented_points)),
        "epsilon_point": res.job.epsilon_point,
    }


def cmd_embed(args) -> dict:
    ds = _load(args)
    res = _embed(ds, args)
    if args.emit:
        Dataset(res.curves, "").save(args.emit)
    if args.map_out:
        Path(args.map_out).write_text(res.linear_map.to_json())
    cert = res.report.to_dict() if res.report is not None else None
    return {
        "params": _params(args, ds),
        "results": {"map": _map_summary(res), "certificate": cert},
        "passed": res.report is None or res.report.passed,
    }


def cmd_dist(args) -> dict:
    ds = _load(args)
    mat = distance_matrix(ds.curves, args.metric, args.workers)
    results = {"ids": _ids(ds), "metric": args.metric, "matrix": mat.tolist()}
    passed = True
    if args.oracle == "on":
        checks = []
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds.curves[i], ds.curves[j]
                rec = {"pair": [a.id, b.id]}
                try:
                    if args.metric == "discrete":
                        ref = brute_discrete_frechet(a, b)
                        rec.update(reference=ref, ok=bool(abs(ref - mat[i, j]) <= 1e-12))
                    elif args.metric == "continuous":
                        band = resampled_frechet_band(a, b, args.oracle_delta)
                        rec.update(lower=band.lower, upper=band.upper, ok=bool(band.contains(mat[i, j], 1e-9)))
                    else:
                        rec.update(skipped="no oracle for this metric")
                except CapExceeded as exc:
                    rec.update(skipped=str(exc))
                passed = passed and rec.get("ok", True)
                checks.append(rec)
        results["oracle"] = checks
    return {"params": _params(args, ds), "results": results, "passed": passed}


def cmd_verify(args) -> dict:
    ds = _load(args)
    res = _embed(ds, args)
    before = distance_matrix(ds.curves, args.metric, args.workers)
    after = distance_matrix(res.curves, args.metric, args.workers)
    n = len(ds)
    worst, worst_pair = 0.0, None
    zero_mismatch = 0
    for i in range(n):
        for j in range(i + 1, n):
            if before[i, j] > 0:
                rel = abs(after[i, j] - before[i, j]) / before[i, j]
                if rel > worst:
                    worst, worst_pair = rel, [ds.curves[i].id, ds.curves[j].id]
            elif after[i, j] > 0:
                zero_mismatch += 1
    cert_ok = res.report is None or res.report.passed
    within = worst <= args.eps and zero_mismatch == 0
    return {
        "params": _params(args, ds),
        "results": {
            "map": _map_summary(res),
            "certificate": res.report.to_dict() if res.report is not None else None,
            "ids": _ids(ds),
            "metric": args.metric,
            "before": before.tolist(),
            "after": after.tolist(),
            "max_relative_distortion": worst,
            "worst_pair": worst_pair,
            "distortion_within_eps": within,
        },
        "passed": cert_ok and within,
    }


def cmd_simplify(args) -> dict:
    ds = _load(args)
    out, rows = [], []
    for c in ds.curves:
        s = simplify(c, args.ell)
        out.append(s.curve)
        rows.append({"id": c.id, "indices": list(s.indices), "bottleneck": s.bottleneck, "error": s.error})
    if args.emit:
        Dataset(out, "").save(args.emit)
    return {"params": _params(args, ds), "results": {"curves": rows}, "passed": True}


def cmd_cluster(args) -> dict:
    ds = _load(args)
    if args.objective == "center":
        res = kl_center(ds.curves, args.k, args.ell)
    else:
        res = kl_median(ds.curves, args.k, args.ell, args.mode)
    return {"params": _params(args, ds), "results": res.to_dict(), "passed": True}


def cmd_generate(args) -> dict:
    ds = generate(args.family, args.n, args.seed, m=args.m, d=args.d, amplitude=args.amplitude,
                  k=args.k, separation=args.separation)
    if args.emit:
        ds.save(args.emit)
    return {
        "params": _params(args, ds),
        "results": {"ids": _ids(ds), "curves": None if args.emit else [c.vertices.tolist() for c in ds.curves]},
        "passed": True,
    }


# --------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, data=True):
    if data:
        p.add_argument("--input", help="dataset file")
        p.add_argument("--format", choices=FORMATS, default=None, help="default: by file extension")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--workers", type=int, default=1, help="worker processes for pairwise distances")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")


def _embedding_flags(p: argparse.ArgumentParser):
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--certify", choices=("off", "lower", "full"), default="lower")
    p.add_argument("--max-retries", dest="max_retries", type=int, default=16)
    p.add_argument("--target-dim", dest="target_dim", type=int, default=None,
                   help="override the computed target dimension")
    p.add_argument("--all-pairs", dest="all_pairs", action="store_true",
                   help="certify lines through every vertex pair, not only edges")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="frechet-jl", description="Fréchet-preserving random projections of curves.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("embed", help="embed a curve set and certify the map")
    _common(p)
    _embedding_flags(p)
    p.add_argument("--emit", help="write the embedded curves (jsonl)")
    p.add_argument("--map-out", dest="map_out", help="write the linear map (json)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("dist", help="pairwise distance matrix")
    _common(p)
    p.add_argument("--metric", choices=sorted(METRICS), default="continuous")
    p.add_argument("--oracle", choices=("off", "on"), default="off")
    p.add_argument("--oracle-delta", dest="oracle_delta", type=float, default=0.01)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("verify", help="distances before and after embedding")
    _common(p)
    _embedding_flags(p)
    p.add_argument("--metric", choices=sorted(METRICS), default="continuous")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simplify", help="vertex-restricted simplification")
    _common(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--emit", help="write the simplified curves (jsonl)")
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("cluster", help="(k, ell)-center or (k, ell)-median")
    _common(p)
    p.add_argument("--objective", choices=("center", "median"), default="center")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "local_search"), default="exhaustive")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("generate", help="synthetic curve sets")
    _common(p, data=False)
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--separation", type=float, default=10.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--emit", help="write the dataset (jsonl)")
    p.set_defaults(func=cmd_generate)
    return ap


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def run(argv=None) -> Tuple[int, dict, str]:
    """Execute a command; returns the exit status, the report and the ``--out`` path."""
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if args.workers < 1:
            raise UsageError("--workers must be at least 1")
        start = time.perf_counter()
        body = args.func(args)
        report = {"command": args.command, "backend": BACKEND, **body}
        if args.timings:
            report["timings"] = {"total_seconds": time.perf_counter() - start}
        status = EXIT_OK if report["passed"] else EXIT_CHECK
    except RetriesExhausted as exc:
        report = {"command": args.command, "passed": False, "error": str(exc),
                  "certificate": exc.report.to_dict() if exc.report is not None else None}
        return EXIT_CHECK, report, args.out
    except (UsageError, FrechetJLError, OSError, ValueError) as exc:
        return EXIT_USAGE, {"passed": False, "error": f"{type(exc).__name__}: {exc}"}, None
    return status, report, args.out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    status, report, out = run(argv)
    text = render(report)
    if out:
        Path(out).write_text(text)
    else:
        stream = sys.stderr if status == EXIT_USAGE else sys.stdout
        stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
