"""CSV rows with a ``#`` config header, and a small SVG line chart."""

from __future__ import annotations

import csv
import io
from xml.sax.saxutils import escape

LATTICE_FIELDS = ("tag", "d", "lattice", "p", "radius", "samples", "seed",
                  "successes", "mean", "ci_half_width")
DUST_FIELDS = ("lambda", "t", "radius", "samples", "seed",
               "successes", "mean", "ci_half_width")


def config_header(config: dict) -> str:
    return "".join(f"# {k}={v}\n" for k, v in config.items())


def write_csv(fields, rows, config: dict | None = None) -> str:
    buf = io.StringIO()
    if config:
        buf.write(config_header(config))
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: _fmt(row[k]) for k in fields})
    return buf.getvalue()


def read_csv(text: str) -> tuple[dict, list[dict]]:
    config, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            config[k] = v
        else:
            body.append(line)
    return config, list(csv.DictReader(body))


def _fmt(x):
    return repr(x) if isinstance(x, float) else x


def estimate_row(est) -> dict:
    return {"successes": est.successes, "samples": est.samples,
            "mean": est.mean, "ci_half_width": est.ci_half_width}


def line_chart_svg(xs, ys, lows=None, highs=None, *, title="", xlabel="t", ylabel="P",
                   width=640, height=400, reference=None) -> str:
    """Polyline through (xs, ys) with an optional shaded band and a dashed
    horizontal reference line."""
    margin = 56
    pw, ph = width - 2 * margin, height - 2 * margin
    lows = list(lows) if lows is not None else list(ys)
    highs = list(highs) if highs is not None else list(ys)
    x0, x1 = min(xs), max(xs)
    y_all = lows + highs + ([reference] if reference is not None else [])
    y0, y1 = min(y_all), max(y_all)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(x):
        return margin + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return margin + (y1 - y) / (y1 - y0) * ph

    def pts(seq):
        return " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in seq)

    band = pts(list(zip(xs, highs)) + list(zip(reversed(xs), reversed(lows))))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{margin + ph}" x2="{margin + pw}" y2="{margin + ph}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{margin + ph}" stroke="black"/>',
        f'<polygon points="{band}" fill="#9ecae1" fill-opacity="0.5" stroke="none"/>',
        f'<polyline points="{pts(zip(xs, ys))}" fill="none" stroke="#08519c" stroke-width="2"/>',
    ]
    for x, y in zip(xs, ys):
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="#08519c"/>')
    if reference is not None:
        out.append(f'<line x1="{margin}" y1="{sy(reference):.2f}" x2="{margin + pw}" '
                   f'y2="{sy(reference):.2f}" stroke="gray" stroke-dasharray="4 4"/>')
    for k in range(5):
        yv = y0 + (y1 - y0) * k / 4
        xv = x0 + (x1 - x0) * k / 4
        out.append(f'<text x="{margin - 6}" y="{sy(yv) + 4:.2f}" font-size="10" '
                   f'text-anchor="end">{yv:.6g}</text>')
        out.append(f'<text x="{sx(xv):.2f}" y="{margin + ph + 16}" font-size="10" '
                   f'text-anchor="middle">{xv:.3g}</text>')
    out.append(f'<text x="{width / 2}" y="{margin / 2}" font-size="14" '
               f'text-anchor="middle">{escape(title)}</text>')
    out.append(f'<text x="{width / 2}" y="{height - 12}" font-size="12" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{height / 2}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 14 {height / 2})">{escape(ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
