"""Full pipeline run: load, denoise, tune, build Mapper, diagram, confidence, write artifacts."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .confidence import (
    DEFAULT_MC,
    SubsampleTails,
    bootstrap_distances,
    conf_eta_for_alpha,
    known_model_eta,
    quantile_at_level,
    significant_features,
    subsampling_remainder_scale,
)
from .denoise import dtm_filter, parse_denoise_spec
from .errors import InputError
from .fileio import confidence_to_csv, diagram_to_csv, diagram_to_svg, fmt, load_points, mapper_to_dot
from .filters import filter_from_spec
from .geometry import PointCloud, pairwise_distances
from .mapper import normalize_variant
from .pipeline import compute_mapper
from .tuning import DEFAULT_BETA, DEFAULT_GAIN, DEFAULT_SUBSAMPLES, MapperParams, check_hypotheses, tune

log = logging.getLogger(__name__)

__all__ = ["RunConfig", "RunResult", "run_pipeline", "prepare"]

METHODS = ("bootstrap", "subsampling", "known")


@dataclass
class RunConfig:
    input: str | None = None
    filter: str = "coord:0"
    gain: float = DEFAULT_GAIN
    beta: float = DEFAULT_BETA
    subsamples: int = DEFAULT_SUBSAMPLES
    variant: str = "nerve"
    bootstrap: int = 100
    alpha: float = 0.15
    seed: int = 0
    denoise: str | None = None
    paper_literal: bool = False
    confidence_method: str = "bootstrap"
    mc: int = DEFAULT_MC
    a: float | None = None
    b: float | None = None
    output: str = "out"

    def validate(self) -> None:
        if not 0 < self.gain < 0.5:
            raise InputError(f"--gain must lie in (0, 1/2), got {self.gain}")
        if not self.beta > 0:
            raise InputError(f"--beta must be positive, got {self.beta}")
        if self.subsamples < 1 or self.bootstrap < 1 or self.mc < 1:
            raise InputError("--subsamples, --bootstrap and --mc must be positive")
        if not 0 < self.alpha < 1:
            raise InputError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if self.confidence_method not in METHODS:
            raise InputError(f"--confidence-method must be one of {METHODS}")
        if self.confidence_method == "known" and (self.a is None or self.b is None):
            raise InputError("--confidence-method known needs --a and --b")
        if (self.a is None) != (self.b is None):
            raise InputError("supply both --a and --b, or neither")
        self.variant = normalize_variant(self.variant)


@dataclass
class RunResult:
    points: PointCloud
    kept: np.ndarray
    params: MapperParams
    result: object
    region: object
    report: object
    files: dict = field(default_factory=dict)


def prepare(pc: PointCloud, cfg: RunConfig):
    """Denoise (optionally) and compute distances and the filter."""
    dm = pairwise_distances(pc)
    n0 = pc.n
    kept = np.arange(n0)
    if cfg.denoise:
        k, tau = parse_denoise_spec(cfg.denoise)
        mode = "keep_high" if cfg.paper_literal else "keep_low"
        kept = dtm_filter(dm, k, tau, mode)
        pc, dm = pc.take(kept), dm.take(kept)
        log.info("denoise kept %d of %d points", kept.size, n0)
    fv = filter_from_spec(cfg.filter, pc, dm)
    return pc, dm, fv, kept


def run_pipeline(cfg: RunConfig, points: PointCloud | None = None, write: bool = True) -> RunResult:
    cfg.validate()
    if points is None:
        if cfg.input is None:
            raise InputError("no input file given")
        points = load_points(cfg.input)
    pc, dm, fv, kept = prepare(points, cfg)
    rng = np.random.default_rng(cfg.seed)
    tune_rng, boot_rng, check_rng = (np.random.default_rng(s) for s in rng.bit_generator.seed_seq.spawn(3))

    params = tune(dm, fv, cfg.gain, cfg.beta, cfg.subsamples, cfg.variant, tune_rng, cfg.a, cfg.b)
    res = compute_mapper(dm, fv, params)
    report = check_hypotheses(dm, fv, params, res.cover, check_rng, cfg.subsamples, cfg.beta)
    frange = float(fv.values.max() - fv.values.min())

    extra = []
    if cfg.confidence_method == "bootstrap":
        dists = bootstrap_distances(dm, fv, params, cfg.bootstrap, boot_rng, reference=res.diagram)
        eta = quantile_at_level(dists, cfg.alpha)
    elif cfg.confidence_method == "subsampling":
        tails = SubsampleTails.for_beta(dm, cfg.beta, cfg.mc, boot_rng)
        eta = conf_eta_for_alpha(tails, cfg.alpha, cfg.gain, fv.lipschitz_bound, upper=frange)
        extra.append(f"remainder_scale = {fmt(subsampling_remainder_scale(dm.n, cfg.beta))} (not included)")
    else:
        if fv.lipschitz_bound is None:
            raise InputError(f"filter {cfg.filter} has no declared Lipschitz constant")
        eta = known_model_eta(dm.n, cfg.a, cfg.b, params.delta, cfg.gain, cfg.alpha, fv.lipschitz_bound)
    region = significant_features(res.diagram, eta, cfg.alpha, cfg.confidence_method)

    out = RunResult(pc, kept, params, res, region, report)
    if write:
        out.files = write_artifacts(Path(cfg.output), cfg, out, extra)
    return out


def params_text(cfg: RunConfig, out: RunResult, extra=()) -> str:
    p = out.params
    lines = [
        f"n = {out.points.n}",
        f"filter = {cfg.filter}",
        f"delta = {fmt(p.delta)}",
        f"r = {fmt(p.r)}",
        f"g = {fmt(p.g)}",
        f"S = {out.result.cover.S}",
        f"variant = {p.variant}",
        f"provenance = {p.provenance}",
        f"nodes = {len(out.result.mapper.nodes)}",
        f"edges = {len(out.result.mapper.edges)}",
        f"components = {out.result.mapper.n_components()}",
        f"betti1 = {out.result.mapper.betti1()}",
        f"confidence_method = {cfg.confidence_method}",
        f"alpha = {fmt(cfg.alpha)}",
        f"eta = {fmt(out.region.eta)}",
        "[hypotheses]",
        *out.report.lines(),
        *extra,
    ]
    return "\n".join(lines) + "\n"


def write_artifacts(outdir: Path, cfg: RunConfig, out: RunResult, extra=()) -> dict:
    outdir.mkdir(parents=True, exist_ok=True)
    contents = {
        "mapper.dot": mapper_to_dot(out.result.mapper),
        "diagram.csv": diagram_to_csv(out.result.diagram),
        "confidence.csv": confidence_to_csv(out.region),
        "diagram.svg": diagram_to_svg(out.result.diagram, out.region.eta),
        "params.txt": params_text(cfg, out, extra),
    }
    files = {}
    for name, text in contents.items():
        path = outdir / name
        path.write_text(text, encoding="utf-8")
        files[name] = path
    return files
