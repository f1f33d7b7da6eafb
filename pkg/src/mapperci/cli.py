"""Command line entry point: ``mapperci <subcommand> ...``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .confidence import bootstrap_distances, quantile_at_level, significant_features
from .denoise import dtm_filter, parse_denoise_spec
from .errors import InputError, InternalError, MapperError
from .experiments import convergence_study, log_log_slope
from .fileio import confidence_to_csv, fmt, load_points, save_points
from .geometry import pairwise_distances
from .pipeline import compute_mapper
from .runner import RunConfig, prepare, run_pipeline
from .shapes import SHAPES, synth_shape
from .tuning import check_hypotheses, tune

SEED_ENV = "MAPPERCI_SEED"
log = logging.getLogger("mapperci")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _add_tuning(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="CSV of points, one row per point")
    p.add_argument("--filter", default="coord:0", help="coord:<axis>, ecc, pca:<k> or dtm:<k>")
    p.add_argument("--gain", type=float, default=0.4)
    p.add_argument("--beta", type=float, default=0.001)
    p.add_argument("--subsamples", type=int, default=100, help="subsamples averaged for delta")
    p.add_argument("--variant", choices=["nerve", "multinerve"], default="nerve")
    p.add_argument("--seed", type=int, default=_default_seed(), help=f"default from ${SEED_ENV}, else 0")
    p.add_argument("--a", type=float, default=None, help="known-model mass constant")
    p.add_argument("--b", type=float, default=None, help="known-model dimension")
    p.add_argument("--denoise", default=None, help="dtm:<k>:<tau_frac>")
    p.add_argument("--paper-literal", action="store_true",
                   help="with --denoise, keep points whose DTM is at or above the threshold")


def _config(args, **extra) -> RunConfig:
    return RunConfig(input=args.input, filter=args.filter, gain=args.gain, beta=args.beta,
                     subsamples=args.subsamples, variant=args.variant, seed=args.seed,
                     denoise=args.denoise, paper_literal=args.paper_literal, a=args.a, b=args.b, **extra)


def cmd_run(args) -> None:
    cfg = _config(args, bootstrap=args.bootstrap, alpha=args.alpha, confidence_method=args.confidence_method,
                  mc=args.mc, output=args.out)
    out = run_pipeline(cfg)
    for name, path in out.files.items():
        print(f"wrote {path}")


def _tuned(args):
    cfg = _config(args)
    cfg.validate()
    pc, dm, fv, _ = prepare(load_points(args.input), cfg)
    rng = np.random.default_rng(cfg.seed)
    tune_rng, boot_rng, check_rng = (np.random.default_rng(s) for s in rng.bit_generator.seed_seq.spawn(3))
    params = tune(dm, fv, cfg.gain, cfg.beta, cfg.subsamples, cfg.variant, tune_rng, cfg.a, cfg.b)
    return cfg, dm, fv, params, boot_rng, check_rng


def cmd_tune(args) -> None:
    cfg, dm, fv, params, _, check_rng = _tuned(args)
    res = compute_mapper(dm, fv, params)
    report = check_hypotheses(dm, fv, params, res.cover, check_rng, cfg.subsamples, cfg.beta)
    print(f"delta = {fmt(params.delta)}")
    print(f"r = {fmt(params.r)}")
    print(f"g = {fmt(params.g)}")
    print(f"S = {res.cover.S}")
    print(f"provenance = {params.provenance}")
    for line in report.lines():
        print(line)


def cmd_bootstrap(args) -> None:
    cfg, dm, fv, params, boot_rng, _ = _tuned(args)
    res = compute_mapper(dm, fv, params)
    dists = bootstrap_distances(dm, fv, params, args.bootstrap, boot_rng, reference=res.diagram)
    eta = quantile_at_level(dists, args.alpha)
    region = significant_features(res.diagram, eta, args.alpha, "bootstrap")
    text = confidence_to_csv(region)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_denoise(args) -> None:
    pc = load_points(args.input)
    k, tau = parse_denoise_spec(args.spec)
    keep = dtm_filter(pairwise_distances(pc), k, tau, "keep_high" if args.paper_literal else "keep_low")
    save_points(pc.take(keep), args.out)
    print(f"kept {keep.size} of {pc.n} points -> {args.out}")


def cmd_synth(args) -> None:
    pc = synth_shape(args.shape, args.n, args.noise, args.seed, stratified=args.stratified)
    save_points(pc, args.out)
    print(f"wrote {pc.n} points -> {args.out}")


def cmd_convergence(args) -> None:
    n_list = [int(x) for x in args.n_list.split(",")]
    rows = convergence_study(args.shape, n_list, args.reps, args.filter, args.seed, args.gain, args.beta,
                             args.subsamples, args.variant, out=args.out)
    for r in rows:
        print(f"n={r['n']} mean={r['mean']:.6g} sd={r['sd']:.6g}")
    if len(rows) > 1:
        print(f"log-log slope = {log_log_slope(rows):.4f}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mapperci", description="Auto-tuned Mapper with confidence regions")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="full pipeline, writes all artifacts")
    _add_tuning(p)
    p.add_argument("--bootstrap", type=int, default=100, metavar="B")
    p.add_argument("--alpha", type=float, default=0.15)
    p.add_argument("--confidence-method", choices=["bootstrap", "subsampling", "known"], default="bootstrap")
    p.add_argument("--mc", type=int, default=1000, help="Monte Carlo draws for the subsampling bound")
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("tune", help="print tuned parameters and the hypothesis report")
    _add_tuning(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("bootstrap", help="bootstrap confidence CSV")
    _add_tuning(p)
    p.add_argument("--bootstrap", type=int, default=100, metavar="B")
    p.add_argument("--alpha", type=float, default=0.15)
    p.add_argument("--out", default=None, help="file for confidence CSV (default stdout)")
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("denoise", help="DTM outlier removal")
    p.add_argument("input")
    p.add_argument("--spec", default="dtm:10:0.4", help="dtm:<k>:<tau_frac>")
    p.add_argument("--paper-literal", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("synth", help="sample a synthetic shape")
    p.add_argument("shape", choices=sorted(SHAPES))
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--stratified", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("convergence", help="error of tuned Mappers against the analytic diagram")
    p.add_argument("--shape", default="circle")
    p.add_argument("--filter", default="coord:0")
    p.add_argument("--n-list", default="200,400,800,1600,3200")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--gain", type=float, default=0.4)
    p.add_argument("--beta", type=float, default=0.001)
    p.add_argument("--subsamples", type=int, default=100)
    p.add_argument("--variant", choices=["nerve", "multinerve"], default="nerve")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_convergence)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except MapperError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except MapperError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (AssertionError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return InternalError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
