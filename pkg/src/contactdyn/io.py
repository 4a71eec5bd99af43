"""Trajectory CSV (17 significant digits, round-trip exact) and minimal SVG line plots."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .integrator import Trajectory

__all__ = ["csv_header", "format_float", "write_trajectory_csv", "read_trajectory_csv", "svg_lines"]


def format_float(x: float) -> str:
    return "%.17g" % x


def csv_header(n: int) -> list[str]:
    return (
        ["t"]
        + [f"q{i + 1}" for i in range(n)]
        + [f"p{i + 1}" for i in range(n)]
        + ["z", "lambda", "K", "H"]
    )


def _rows(traj: Trajectory) -> Iterable[list[str]]:
    H = traj.H
    for k in range(len(traj)):
        vals = [traj.t[k], *traj.q[k], *traj.p[k], traj.z[k], traj.lam[k], traj.K[k], H[k]]
        yield [format_float(v) for v in vals]


def write_trajectory_csv(traj: Trajectory, dest: "str | Path | IO[str]") -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            write_trajectory_csv(traj, fh)
        return
    w = csv.writer(dest, lineterminator="\n")
    w.writerow(csv_header(traj.n))
    w.writerows(_rows(traj))
    dest.flush()


def read_trajectory_csv(src: "str | Path | IO[str]") -> Trajectory:
    if isinstance(src, (str, Path)):
        with open(src, newline="") as fh:
            return read_trajectory_csv(fh)
    reader = csv.reader(src)
    header = next(reader)
    n = sum(1 for h in header if h.startswith("q"))
    if header != csv_header(n):
        raise ValueError(f"unexpected trajectory header {header}")
    data = np.array([[float(v) for v in row] for row in reader], dtype=float).reshape(-1, len(header))
    return Trajectory(
        t=data[:, 0],
        q=data[:, 1 : 1 + n],
        p=data[:, 1 + n : 1 + 2 * n],
        z=data[:, 1 + 2 * n],
        lam=data[:, 2 + 2 * n],
        K=data[:, 3 + 2 * n],
    )


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _ticks(lo: float, hi: float, count: int = 5) -> np.ndarray:
    return np.linspace(lo, hi, count)


def svg_lines(
    x: np.ndarray,
    ys: Sequence[np.ndarray],
    labels: Sequence[str],
    title: str = "",
    xlabel: str = "t",
    width: int = 800,
    height: int = 500,
) -> str:
    """Polyline plot on a fixed ``0 0 800 500`` viewBox with axes and per-curve labels."""
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom
    x = np.asarray(x, dtype=float)
    x0, x1 = (float(x.min()), float(x.max())) if x.size else (0.0, 1.0)
    if x1 == x0:
        x1 = x0 + 1.0
    allv = np.concatenate([np.asarray(y, dtype=float).ravel() for y in ys]) if ys else np.zeros(1)
    y0, y1 = float(allv.min()), float(allv.max())
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" '
        f'width="{width}" height="{height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15">{title}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for v in _ticks(x0, x1):
        out.append(f'<text x="{sx(v):.1f}" y="{top + ph + 16}" text-anchor="middle">{v:.3g}</text>')
    for v in _ticks(y0, y1):
        out.append(f'<text x="{left - 6}" y="{sy(v) + 4:.1f}" text-anchor="end">{v:.3g}</text>')
    if y0 < 0 < y1:
        out.append(
            f'<line x1="{left}" y1="{sy(0):.1f}" x2="{left + pw}" y2="{sy(0):.1f}" '
            'stroke="#bbb" stroke-dasharray="4 3"/>'
        )
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">{xlabel}</text>')
    # thin long series so files stay small
    stride = max(1, x.size // 4000)
    for i, (y, label) in enumerate(zip(ys, labels)):
        color = _PALETTE[i % len(_PALETTE)]
        y = np.asarray(y, dtype=float)
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x[::stride], y[::stride]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        out.append(
            f'<text x="{left + pw - 8}" y="{top + 16 + 16 * i}" text-anchor="end" fill="{color}">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
