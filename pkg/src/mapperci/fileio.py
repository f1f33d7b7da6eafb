"""File formats: point CSV in, DOT / CSV / SVG / text reports out."""
from __future__ import annotations

import csv
import io as _io
import math
import re
from pathlib import Path
from typing import Iterable

import numpy as np

from .confidence import ConfidenceRegion
from .errors import InputError
from .geometry import PointCloud
from .mapper import MapperGraph
from .persistence import ExtendedDiagram

__all__ = [
    "load_points",
    "parse_points",
    "save_points",
    "mapper_to_dot",
    "parse_dot",
    "diagram_to_csv",
    "confidence_to_csv",
    "diagram_to_svg",
]


def fmt(x: float) -> str:
    """Shortest round-trip representation, stable across runs."""
    return repr(float(x))


def parse_points(text: str, source: str = "<string>") -> PointCloud:
    rows: list[list[float]] = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        try:
            values = [float(c) for c in cells]
        except ValueError:
            if not rows and lineno == 1:
                continue  # header
            raise InputError(f"{source}:{lineno}: non-numeric cell in {line!r}") from None
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise InputError(f"{source}:{lineno}: expected {width} columns, got {len(values)}")
        if not all(math.isfinite(v) for v in values):
            raise InputError(f"{source}:{lineno}: non-finite value")
        rows.append(values)
    if not rows:
        raise InputError(f"{source}: no data rows")
    return PointCloud(np.array(rows))


def load_points(path) -> PointCloud:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_points(text, str(path))


def save_points(pc: PointCloud, path) -> None:
    header = ",".join(f"x{k}" for k in range(pc.dim))
    lines = [header] + [",".join(fmt(v) for v in row) for row in pc.points]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# --- DOT ------------------------------------------------------------------

def mapper_to_dot(m: MapperGraph) -> str:
    out = ["graph mapper {"]
    for v in m.nodes:
        out.append(f'  {v.id} [label="c{v.id}|{v.size}", fvalue={fmt(v.fvalue)}, interval={v.interval}];')
    for u, v in m.edges:
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


_NODE = re.compile(r'^\s*(\d+)\s*\[label="c(\d+)\|(\d+)",\s*fvalue=([^,\]]+)')
_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*;")


def parse_dot(text: str) -> tuple[dict[int, tuple[int, float]], list[tuple[int, int]]]:
    """Read back ``mapper_to_dot`` output: ``{id: (size, fvalue)}`` and the edge list."""
    nodes, edges = {}, []
    for line in text.splitlines():
        if (m := _EDGE.match(line)):
            edges.append((int(m.group(1)), int(m.group(2))))
        elif (m := _NODE.match(line)):
            nodes[int(m.group(1))] = (int(m.group(3)), float(m.group(4)))
    return nodes, edges


# --- CSV ------------------------------------------------------------------

def _csv(rows: Iterable[Iterable[str]]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def diagram_to_csv(d: ExtendedDiagram) -> str:
    return _csv([("type", "birth", "death")] + [(p.ptype, fmt(p.birth), fmt(p.death)) for p in d.points])


def confidence_to_csv(region: ConfidenceRegion) -> str:
    eta = fmt(region.eta)
    rows = [("type", "birth", "death", "eta", "significant")]
    rows += [(fp.point.ptype, fmt(fp.point.birth), fmt(fp.point.death), eta, str(fp.significant).lower())
             for fp in region.per_point]
    return _csv(rows)


def read_diagram_csv(text: str) -> ExtendedDiagram:
    reader = csv.DictReader(_io.StringIO(text))
    return ExtendedDiagram.from_tuples((r["type"], r["birth"], r["death"]) for r in reader)


# --- SVG ------------------------------------------------------------------

_COLORS = {"Ord0": "#1f77b4", "Rel1": "#d62728", "Ext0": "#2ca02c", "Ext1": "#9467bd"}


def diagram_to_svg(d: ExtendedDiagram, eta: float = 0.0, size: int = 400) -> str:
    """Static scatter of the diagram with the diagonal and squares of half-width ``eta``.

    Squares crossing the diagonal are filled pink; significant ones are outlined only.
    """
    vals = [v for p in d.points for v in (p.birth, p.death)] or [0.0, 1.0]
    finite_eta = eta if math.isfinite(eta) else 0.0
    lo, hi = min(vals) - finite_eta, max(vals) + finite_eta
    if hi - lo <= 0:
        lo, hi = lo - 1, hi + 1
    margin = 0.05 * (hi - lo)
    lo, hi = lo - margin, hi + margin
    scale = (size - 40) / (hi - lo)

    def sx(x):
        return 20 + (x - lo) * scale

    def sy(y):
        return size - 20 - (y - lo) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
           f'<line x1="{sx(lo):.3f}" y1="{sy(lo):.3f}" x2="{sx(hi):.3f}" y2="{sy(hi):.3f}" stroke="black" stroke-width="1"/>']
    for p in d.points:
        cx, cy = sx(p.birth), sy(p.death)
        color = _COLORS[p.ptype]
        if finite_eta > 0:
            w = 2 * finite_eta * scale
            crosses = abs(p.birth - p.death) <= 2 * finite_eta
            fill = "#ffc0cb" if crosses else "none"
            out.append(f'<rect x="{cx - w / 2:.3f}" y="{cy - w / 2:.3f}" width="{w:.3f}" height="{w:.3f}" '
                       f'fill="{fill}" fill-opacity="0.5" stroke="{color}"/>')
        out.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="3" fill="{color}"><title>{p.ptype} '
                   f'({fmt(p.birth)}, {fmt(p.death)})</title></circle>')
    y = 16
    for t, color in _COLORS.items():
        out.append(f'<text x="{size - 60}" y="{y}" font-size="11" fill="{color}">{t}</text>')
        y += 13
    out.append("</svg>")
    return "\n".join(out) + "\n"
