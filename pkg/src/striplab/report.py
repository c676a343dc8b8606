"""Report emission: RFC-4180 CSV, deterministic JSON, and native SVG line plots."""

from __future__ import annotations

import json
from pathlib import Path


def write_csv(path, header, rows) -> None:
    """RFC-4180: comma-separated, CRLF line ends, quotes doubled when needed."""

    def field(x):
        s = f"{x}"
        if any(c in s for c in (",", '"', "\n", "\r")):
            s = '"' + s.replace('"', '""') + '"'
        return s

    lines = [",".join(field(h) for h in header)]
    for row in rows:
        lines.append(",".join(field(x) for x in row))
    Path(path).write_text("\r\n".join(lines) + "\r\n", encoding="utf-8")


def write_json(path, payload: dict) -> None:
    """Deterministic JSON (sorted keys, fixed separators) so reruns of an
    embedded config reproduce the report byte-for-byte."""
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, indent=2, default=float) + "\n", encoding="utf-8"
    )


def svg_line_plot(path, series, title: str = "", xlabel: str = "", ylabel: str = "", size=(640, 420)) -> None:
    """Minimal multi-series line plot: series is a list of
    (label, [(x, y), ...]) pairs."""
    w, h = size
    mx, my = 70, 50
    pts = [p for _, data in series for p in data]
    if not pts:
        raise ValueError("nothing to plot")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x):
        return mx + (x - x0) / (x1 - x0) * (w - 2 * mx)

    def sy(y):
        return h - my - (y - y0) / (y1 - y0) * (h - 2 * my)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<text x="{w / 2}" y="24" text-anchor="middle" font-size="15">{title}</text>',
        f'<text x="{w / 2}" y="{h - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{h / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {h / 2})">{ylabel}</text>',
        f'<line x1="{mx}" y1="{h - my}" x2="{w - mx}" y2="{h - my}" stroke="black"/>',
        f'<line x1="{mx}" y1="{my}" x2="{mx}" y2="{h - my}" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        parts.append(
            f'<text x="{sx(xv):.1f}" y="{h - my + 16}" text-anchor="middle" font-size="10">{xv:.3g}</text>'
        )
        parts.append(
            f'<text x="{mx - 6}" y="{sy(yv):.1f}" text-anchor="end" font-size="10">{yv:.3g}</text>'
        )
    for i, (label, data) in enumerate(series):
        col = colors[i % len(colors)]
        path_d = " ".join(f"{'M' if k == 0 else 'L'}{sx(x):.2f},{sy(y):.2f}" for k, (x, y) in enumerate(data))
        parts.append(f'<path d="{path_d}" fill="none" stroke="{col}" stroke-width="1.6"/>')
        for x, y in data:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.6" fill="{col}"/>')
        parts.append(
            f'<text x="{w - mx + 4}" y="{my + 14 * i + 10}" font-size="11" fill="{col}">{label}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
