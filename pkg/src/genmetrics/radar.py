"""Radar-chart normalization and standalone SVG output."""

import math
from xml.sax.saxutils import escape

from .errors import InputError
from .protocol import METRICS, load_report

REAL = "real"
CANVAS = 800
_CENTER = CANVAS / 2
_RADIUS = 300.0
_MAX_VALUE = 2.0
_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2")
_REAL_COLOR = "#000000"


def _transform(metric, gen, real):
    if metric == "fid":
        # a lower FID than the real reference is drawn outside the real polygon
        return 1 - (gen - real) if gen > real else 1 + (real - gen)
    return 1 - (real - gen) if gen > real else 1 + (gen - real)


def radar_normalize(values, real_key=REAL):
    """Min-max scale each metric across all polygons, then express it relative to the real one.

    ``values`` maps polygon name to ``{metric: value}`` and must hold
    ``real_key``. The real polygon lands on exactly 1 for every metric;
    a metric with one value across all polygons maps everything to 1.
    """
    if real_key not in values:
        raise InputError(f"radar values need a {real_key!r} entry")
    if len(values) < 2:
        raise InputError("radar needs at least one model besides the real reference")
    metrics = list(values[real_key])
    for name, row in values.items():
        if set(row) != set(metrics):
            raise InputError(f"polygon {name!r} does not have the metrics {metrics}")
    out = {name: {} for name in values}
    for metric in metrics:
        column = {name: float(row[metric]) for name, row in values.items()}
        lo, hi = min(column.values()), max(column.values())
        if hi == lo:
            for name in values:
                out[name][metric] = 1.0
            continue
        scaled = {name: (v - lo) / (hi - lo) for name, v in column.items()}
        real = scaled[real_key]
        for name, v in scaled.items():
            out[name][metric] = _transform(metric, v, real)
    return out


def reports_table(reports, names=None):
    """Radar input from reports: each report's generated values plus the
    first report's real-reference values."""
    if not reports:
        raise InputError("radar needs at least one report")
    names = names or [r.model for r in reports]
    if len(set(names)) != len(names):
        names = [f"{n}#{i + 1}" for i, n in enumerate(names)]
    metrics = [m for m in METRICS if m in reports[0].metrics]
    table = {REAL: {m: reports[0].metrics[m].real for m in metrics}}
    for name, report in zip(names, reports):
        if name == REAL:
            raise InputError(f"model name {REAL!r} is reserved")
        missing = [m for m in metrics if m not in report.metrics]
        if missing:
            raise InputError(f"report {name!r} lacks metrics {missing}")
        table[name] = {m: report.metrics[m].gen for m in metrics}
    return table


def _vertex(axis, n_axes, value):
    angle = math.pi / 2 - 2 * math.pi * axis / n_axes
    r = _RADIUS * max(0.0, min(value, _MAX_VALUE)) / _MAX_VALUE
    return _CENTER + r * math.cos(angle), _CENTER - r * math.sin(angle)


def _points(coords):
    return " ".join(f"{x:.3f},{y:.3f}" for x, y in coords)


def radar_svg(normalized, real_key=REAL):
    """SVG text: one axis per metric, one polygon per model, real polygon last."""
    metrics = list(normalized[real_key])
    n = len(metrics)
    if n < 1:
        raise InputError("radar needs at least one metric")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f'<rect width="{CANVAS}" height="{CANVAS}" fill="#ffffff"/>',
    ]
    for level in (0.5, 1.0, 1.5, 2.0):
        ring = [_vertex(a, n, level) for a in range(n)]
        parts.append(f'<polygon class="grid" points="{_points(ring)}" fill="none" '
                     f'stroke="#cccccc" stroke-width="1"/>')
    for a, metric in enumerate(metrics):
        x, y = _vertex(a, n, _MAX_VALUE)
        lx, ly = _vertex(a, n, _MAX_VALUE * 1.12)
        parts.append(f'<line class="axis" x1="{_CENTER:.3f}" y1="{_CENTER:.3f}" '
                     f'x2="{x:.3f}" y2="{y:.3f}" stroke="#999999" stroke-width="1"/>')
        parts.append(f'<text class="axis-label" x="{lx:.3f}" y="{ly:.3f}" '
                     f'text-anchor="middle" font-family="sans-serif" font-size="16">'
                     f'{escape(metric)}</text>')
    models = [name for name in normalized if name != real_key] + [real_key]
    for i, name in enumerate(models):
        color = _REAL_COLOR if name == real_key else _PALETTE[i % len(_PALETTE)]
        coords = [_vertex(a, n, normalized[name][m]) for a, m in enumerate(metrics)]
        kind = "real" if name == real_key else "model"
        parts.append(f'<polygon class="{kind}" data-name="{escape(name)}" '
                     f'points="{_points(coords)}" fill="{color}" fill-opacity="0.15" '
                     f'stroke="{color}" stroke-width="2"/>')
    for i, name in enumerate(models):
        color = _REAL_COLOR if name == real_key else _PALETTE[i % len(_PALETTE)]
        y = 24 + 22 * i
        parts.append(f'<rect class="legend" x="16" y="{y - 12}" width="14" height="14" fill="{color}"/>')
        parts.append(f'<text x="38" y="{y}" font-family="sans-serif" font-size="14">'
                     f'{escape(name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_radar(reports, path, names=None):
    """Write a radar SVG for one or more reports (paths or MetricReport objects).

    Returns the normalized table that was drawn.
    """
    reports = [load_report(r) if not hasattr(r, "metrics") else r for r in reports]
    normalized = radar_normalize(reports_table(reports, names))
    with open(path, "w", newline="\n") as fh:
        fh.write(radar_svg(normalized))
    return normalized


def write_radar_csv(normalized, path, real_key=REAL):
    metrics = list(normalized[real_key])
    lines = ["model," + ",".join(metrics)]
    for name, row in normalized.items():
        lines.append(name + "," + ",".join(f"{row[m]:.12g}" for m in metrics))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
