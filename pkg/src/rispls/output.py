"""CSV result tables and standalone SVG line plots.

CSV column order (fixed)::

    series, theta_deg, n_elements, alpha, d_te_m, quantization_bits,
    include_ris, include_direct, r_th_bps_hz,
    rate_mean, rate_ci_low, rate_ci_high,
    outage_mean, outage_ci_low, outage_ci_high, trials, seed

followed by ``rate_at_mean_snr`` when that report is requested. Floats carry
9 significant digits; unquantized phases are written as ``inf``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from html import escape
from pathlib import Path
from typing import Sequence

from . import __version__

COLUMNS = (
    "series",
    "theta_deg",
    "n_elements",
    "alpha",
    "d_te_m",
    "quantization_bits",
    "include_ris",
    "include_direct",
    "r_th_bps_hz",
    "rate_mean",
    "rate_ci_low",
    "rate_ci_high",
    "outage_mean",
    "outage_ci_low",
    "outage_ci_high",
    "trials",
    "seed",
)
EXTRA_MEAN_SNR = "rate_at_mean_snr"


class InsufficientPoints(ValueError):
    pass


@dataclass(frozen=True)
class ResultRow:
    series: str
    theta_deg: float
    n_elements: int
    alpha: float
    d_te_m: float
    quantization_bits: int | None
    include_ris: bool
    include_direct: bool
    r_th_bps_hz: float
    rate_mean: float
    rate_ci_low: float
    rate_ci_high: float
    outage_mean: float
    outage_ci_low: float
    outage_ci_high: float
    trials: int
    seed: int
    rate_at_mean_snr: float | None = None


def fmt(v) -> str:
    if v is None:
        return "inf"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def emit_csv(rows: Sequence[ResultRow], path, comment: str = "") -> None:
    if not rows:
        raise ValueError("no rows to write")
    columns = list(COLUMNS)
    if any(r.rate_at_mean_snr is not None for r in rows):
        columns.append(EXTRA_MEAN_SNR)
    buf = io.StringIO()
    first = rows[0]
    buf.write(f"# rispls {__version__} seed={first.seed} trials={first.trials}{' ' + comment if comment else ''}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(getattr(r, c)) for c in columns])
    Path(path).write_text(buf.getvalue(), newline="")


def read_csv(path) -> list[dict[str, str]]:
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


@dataclass(frozen=True)
class Series:
    label: str
    x: Sequence[float]
    y: Sequence[float]


# plot geometry in SVG user units
_W, _H = 640, 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 170, 40, 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f")


def _nice_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def render_svg(series: Sequence[Series], x_label: str, y_label: str, title: str = "") -> str:
    if not series:
        raise InsufficientPoints("no series to plot")
    for s in series:
        if len(s.x) < 2 or len(s.x) != len(s.y):
            raise InsufficientPoints(f"series {s.label!r} needs at least 2 (x, y) points, got {len(s.x)}")
    xs = [float(v) for s in series for v in s.x]
    ys = [float(v) for s in series for v in s.y]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(0.0, min(ys)), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def px(x: float) -> float:
        return _LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y: float) -> float:
        return _TOP + ph - (y - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}" '
        'font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_LEFT + pw / 2:.2f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in _nice_ticks(x_lo, x_hi):
        if x_lo <= t <= x_hi:
            x = px(t)
            out.append(f'<line x1="{x:.2f}" y1="{_TOP + ph}" x2="{x:.2f}" y2="{_TOP + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{x:.2f}" y="{_TOP + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        if y_lo <= t <= y_hi:
            y = py(t)
            out.append(f'<line x1="{_LEFT - 5}" y1="{y:.2f}" x2="{_LEFT}" y2="{y:.2f}" stroke="black"/>')
            out.append(f'<line x1="{_LEFT}" y1="{y:.2f}" x2="{_LEFT + pw}" y2="{y:.2f}" stroke="#dddddd"/>')
            out.append(f'<text x="{_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{_LEFT + pw / 2:.2f}" y="{_H - 15}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(
        f'<text x="18" y="{_TOP + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_TOP + ph / 2:.2f})">{escape(y_label)}</text>'
    )
    for i, s in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(float(x)):.2f},{py(float(y)):.2f}" for x, y in zip(s.x, s.y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = _TOP + 10 + 18 * i
        lx = _W - _RIGHT + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(series: Sequence[Series], path, x_label: str, y_label: str, title: str = "") -> None:
    Path(path).write_text(render_svg(series, x_label, y_label, title), newline="")
