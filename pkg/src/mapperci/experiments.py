"""Convergence probe: tuned Mapper diagrams against an analytic ground truth."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .bottleneck import bottleneck
from .errors import InputError
from .filters import filter_from_spec
from .geometry import pairwise_distances
from .persistence import ExtendedDiagram
from .pipeline import compute_mapper
from .shapes import synth_shape
from .tuning import DEFAULT_BETA, DEFAULT_GAIN, DEFAULT_SUBSAMPLES, tune

__all__ = ["ground_truth", "convergence_study", "log_log_slope"]

# height function on the unit circle: one trunk over [-1, 1] and one hole
TRUTH = {
    ("circle", "coord:0"): ExtendedDiagram.from_tuples([("Ext0", -1.0, 1.0), ("Ext1", 1.0, -1.0)]),
    ("circle", "coord:1"): ExtendedDiagram.from_tuples([("Ext0", -1.0, 1.0), ("Ext1", 1.0, -1.0)]),
}


def ground_truth(shape: str, filter_spec: str) -> ExtendedDiagram:
    try:
        return TRUTH[(shape, filter_spec)]
    except KeyError:
        raise InputError(f"no analytic ground truth for shape {shape!r} with filter {filter_spec!r}") from None


def convergence_study(shape: str, n_list: Sequence[int], reps: int, filter_spec: str = "coord:0",
                      seed: int = 0, gain: float = DEFAULT_GAIN, beta: float = DEFAULT_BETA,
                      subsamples: int = DEFAULT_SUBSAMPLES, variant: str = "nerve",
                      noise_sd: float = 0.0, out: str | Path | None = None) -> list[dict]:
    """Mean and standard deviation of the bottleneck error for each ``n``.

    Cell ``(k, rep)`` draws both its cloud and its tuning subsamples from a
    generator seeded by ``(seed, k, rep)``.
    """
    truth = ground_truth(shape, filter_spec)
    if reps < 1:
        raise InputError("reps must be positive")
    rows = []
    for k, n in enumerate(n_list):
        errs = []
        for rep in range(reps):
            rng = np.random.default_rng([seed, k, rep])
            pc = synth_shape(shape, n, noise_sd, rng)
            dm = pairwise_distances(pc)
            fv = filter_from_spec(filter_spec, pc, dm)
            params = tune(dm, fv, gain, beta, subsamples, variant, rng)
            errs.append(bottleneck(compute_mapper(dm, fv, params).diagram, truth))
        errs = np.array(errs)
        sd = float(errs.std(ddof=1)) if reps > 1 else 0.0
        rows.append({"n": int(n), "mean": float(errs.mean()), "sd": sd})
    if out is not None:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "mean", "sd"])
            for r in rows:
                w.writerow([r["n"], repr(r["mean"]), repr(r["sd"])])
    return rows


def log_log_slope(rows: Sequence[dict]) -> float:
    """Least-squares slope of log(mean error) against log(n)."""
    x = np.log([r["n"] for r in rows])
    means = np.array([r["mean"] for r in rows], dtype=float)
    if np.any(means <= 0):
        return -math.inf
    y = np.log(means)
    return float(np.polyfit(x, y, 1)[0])
