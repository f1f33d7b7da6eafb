"""Acceptance criteria 1-10, each printed as one PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from mapperci.bottleneck import bottleneck, bottleneck_oracle
from mapperci.confidence import subsampling_radius
from mapperci.filters import coordinate_filter, filter_from_spec, modulus_V
from mapperci.geometry import pairwise_distances, rips_graph
from mapperci.mapper import intersection_crossing_edges
from mapperci.persistence import WeightedGraph, diagram_oracle, extended_diagram, mapper_diagram
from mapperci.pipeline import compute_mapper
from mapperci.runner import RunConfig, run_pipeline
from mapperci.shapes import synth_shape
from mapperci.experiments import convergence_study, log_log_slope
from mapperci.tuning import cover_for, tune, tune_delta_known

from _acceptance_log import report
from _gen import graph_components, random_diagram, random_graph

SEED = 20240601


def test_c01_persistence_oracle():
    rng = np.random.default_rng([SEED, 1])
    graphs = [random_graph(rng, 8, 12) for _ in range(200)]
    disconnected = sum(graph_components(g) > 1 for g in graphs)
    multiloop = sum(len(g.edges) - g.n + graph_components(g) >= 2 for g in graphs)
    t0 = time.perf_counter()
    mismatches = sum(extended_diagram(g) != diagram_oracle(g) for g in graphs)
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 10 and disconnected > 0 and multiloop > 0
    report(1, ok, f"{200 - mismatches}/200 equal to oracle ({disconnected} disconnected, "
                  f"{multiloop} multi-loop), {elapsed:.2f}s")
    assert ok


def test_c02_bottleneck_oracle():
    rng = np.random.default_rng([SEED, 2])
    pairs = [(random_diagram(rng, 5), random_diagram(rng, 5)) for _ in range(200)]
    t0 = time.perf_counter()
    worst = max(abs(bottleneck(a, b) - bottleneck_oracle(a, b)) for a, b in pairs)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 10
    report(2, ok, f"max |fast - oracle| = {worst:.3g} over 200 pairs, {elapsed:.2f}s")
    assert ok


SHAPES = ["circle", "figure_eight", "torus", "klein4", "crater"]
FILTERS = ["coord:0", "coord:1", "ecc", "pca:1", "dtm:5"]


def _random_config(rng):
    shape = SHAPES[rng.integers(len(SHAPES))]
    spec = FILTERS[rng.integers(len(FILTERS))]
    pc = synth_shape(shape, int(rng.integers(60, 260)), float(rng.uniform(0, 0.08)), rng)
    dm = pairwise_distances(pc)
    return shape, spec, dm, filter_from_spec(spec, pc, dm)


def test_c03_topology_counts():
    rng = np.random.default_rng([SEED, 3])
    bad = []
    for k in range(100):
        shape, spec, dm, fv = _random_config(rng)
        variant = "nerve" if k % 2 == 0 else "edge_multinerve"
        m = compute_mapper(dm, fv, tune(dm, fv, N=20, variant=variant, rng=rng)).mapper
        d = mapper_diagram(m)
        if d.count("Ext0") != m.n_components() or d.count("Ext1") != m.betti1():
            bad.append((shape, spec, variant))
    ok = not bad
    report(3, ok, f"{100 - len(bad)}/100 Mappers with #Ext0 = components and #Ext1 = |E|-|V|+components")
    assert ok, bad


def test_c04_tuning_guarantee():
    rng = np.random.default_rng([SEED, 4])
    good = 0
    for _ in range(100):
        _, _, dm, fv = _random_config(rng)
        p = tune(dm, fv, N=20, rng=rng)
        V = modulus_V(dm, fv, p.delta)
        crossing = intersection_crossing_edges(rips_graph(dm, p.delta), fv, cover_for(fv, p))
        good += V < p.g * p.r and not crossing
    ok = good == 100
    report(4, ok, f"{good}/100 configurations with V(delta) < g r and no crossing edges")
    assert ok


def test_c05_circle_recovery():
    t0 = time.perf_counter()
    pc = synth_shape("circle", 1000, rng=np.random.default_rng([SEED, 5]))
    dm = pairwise_distances(pc)
    fv = coordinate_filter(pc, 0)
    res = compute_mapper(dm, fv, tune(dm, fv, rng=np.random.default_rng([SEED, 5, 1])))
    elapsed = time.perf_counter() - t0
    d = res.diagram
    ext0, ext1 = d.of_type("Ext0"), d.of_type("Ext1")
    ok = (res.mapper.n_components() == 1 and res.mapper.betti1() == 1
          and len(ext0) == 1 and len(ext1) == 1
          and ext0[0].persistence >= 1.0 and ext1[0].persistence >= 1.0 and elapsed < 30)
    report(5, ok, f"components={res.mapper.n_components()} betti1={res.mapper.betti1()} "
                  f"Ext0={[round(p.persistence, 3) for p in ext0]} Ext1={[round(p.persistence, 3) for p in ext1]} "
                  f"{elapsed:.1f}s")
    assert ok


@pytest.mark.slow
def test_c06_convergence():
    n_list = [200, 400, 800, 1600, 3200]
    t0 = time.perf_counter()
    rows = convergence_study("circle", n_list, 10, "coord:0", seed=SEED)
    elapsed = time.perf_counter() - t0
    means = [r["mean"] for r in rows]
    sds = [r["sd"] for r in rows]
    monotone = all(means[k + 1] <= means[k] + math.sqrt((sds[k] ** 2 + sds[k + 1] ** 2) / 2)
                   for k in range(len(rows) - 1))
    slope = log_log_slope(rows)
    ok = monotone and means[-1] <= 0.15 and slope <= -0.4 and elapsed < 300
    report(6, ok, "means " + ", ".join(f"{m:.4f}" for m in means)
           + f"; slope {slope:.3f}; {elapsed:.0f}s")
    assert ok


def _bootstrap_region(pc, filter_spec, seed, denoise=None):
    cfg = RunConfig(filter=filter_spec, denoise=denoise, bootstrap=100, alpha=0.15, seed=seed)
    return run_pipeline(cfg, points=pc, write=False)


@pytest.mark.slow
def test_c07_bootstrap():
    t0 = time.perf_counter()
    loop_hits = 0
    for seed in range(20):
        pc = synth_shape("circle", 800, rng=np.random.default_rng([SEED, 7, seed]))
        out = _bootstrap_region(pc, "coord:0", seed)
        loop_hits += any(fp.significant for fp in out.region.per_point if fp.point.ptype == "Ext1")
    crater_ok = spurious = 0
    for seed in range(20):
        pc = synth_shape("crater", 1000, rng=np.random.default_rng([SEED, 71, seed]))
        out = _bootstrap_region(pc, "coord:1", seed, denoise="dtm:10:0.4")
        r = out.params.r
        flagged = [fp for fp in out.region.per_point
                   if fp.point.ptype != "Ext0" and fp.point.persistence < r]
        spurious += len(flagged)
        crater_ok += all(not fp.significant for fp in flagged)
    elapsed = time.perf_counter() - t0
    ok = loop_hits >= 18 and crater_ok >= 18 and elapsed < 300
    report(7, ok, f"circle loop significant {loop_hits}/20; crater spurious all non-significant "
                  f"{crater_ok}/20 ({spurious} spurious points); {elapsed:.0f}s")
    assert ok


def test_c08_stability():
    rng = np.random.default_rng([SEED, 8])
    worst_slack = -math.inf
    for _ in range(100):
        g = random_graph(rng, 10, 16)
        eps = float(rng.uniform(0, 0.01))
        f2 = np.asarray(g.f) + rng.uniform(-eps, eps, g.n)
        g2 = WeightedGraph(g.n, tuple(f2), g.edges)
        dist = bottleneck(extended_diagram(g), extended_diagram(g2))
        worst_slack = max(worst_slack, dist - eps)
    ok = worst_slack <= 1e-12
    report(8, ok, f"100 perturbed graphs, max (d - eps) = {worst_slack:.3g}")
    assert ok


def test_c09_determinism(tmp_path):
    pc = synth_shape("circle", 400, 0.02, rng=np.random.default_rng([SEED, 9]))
    outputs = []
    for k in range(2):
        cfg = RunConfig(output=str(tmp_path / f"run{k}"), seed=SEED)
        run_pipeline(cfg, points=pc)
        outputs.append({name: (tmp_path / f"run{k}" / name).read_bytes()
                        for name in ("diagram.csv", "confidence.csv", "diagram.svg", "mapper.dot")})
    ok = outputs[0] == outputs[1]
    report(9, ok, "diagram.csv, confidence.csv, diagram.svg and mapper.dot byte-identical across two runs"
           if ok else "outputs differ between runs")
    assert ok


def test_c10_arithmetic_anchors():
    independent = 8 * math.sqrt(2 * math.log(10_000) / 10_000)
    d1 = abs(tune_delta_known(10_000, 1, 2) - independent)
    q = subsampling_radius(1.8, 0.4, 1.0)
    d2 = abs(q - 0.1)
    ok = d1 <= 1e-6 and d2 <= 1e-12
    report(10, ok, f"|delta_known - ref| = {d1:.3g}, q = {q!r}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
