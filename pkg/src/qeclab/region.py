"""Sampling the (s, t) plane for PSD-ness of A_n(s, t), finite n and n = inf."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrices import det_values, infinite_psd
from .polynomials import t_threshold

__all__ = ["RegionGrid", "region_sample", "DEFAULT_S_RANGE", "DEFAULT_T_RANGE", "DEFAULT_STEPS"]

DEFAULT_S_RANGE = (-2.0, 2.0)
DEFAULT_T_RANGE = (-0.6, 1.0)
DEFAULT_STEPS = (401, 321)
DEFAULT_N_LIST = (1, 2, 3, 5, 10)

_COLOURS = ("#d62728", "#ff7f0e", "#2ca02c", "#1f77b4", "#9467bd", "#8c564b", "#e377c2", "#17becf")


@dataclass
class RegionGrid:
    s_values: np.ndarray
    t_values: np.ndarray
    n_list: tuple[int, ...]
    finite: dict[int, np.ndarray] = field(default_factory=dict)  # bool, shape (len(t), len(s))
    infinite: np.ndarray | None = None

    @property
    def cell_count(self) -> int:
        return len(self.s_values) * len(self.t_values)

    def index(self, s: float, t: float) -> tuple[int, int]:
        """(row, col) of the grid cell nearest to (s, t)."""
        return int(np.argmin(np.abs(self.t_values - t))), int(np.argmin(np.abs(self.s_values - s)))

    def cell(self, s: float, t: float) -> dict:
        i, j = self.index(s, t)
        out = {n: bool(self.finite[n][i, j]) for n in self.n_list}
        out["inf"] = bool(self.infinite[i, j])
        return out

    def monotonicity_violations(self) -> int:
        """Cells where PSD for some n fails for a smaller n (or for finite n while inf holds)."""
        ns = sorted(self.n_list)
        bad = np.zeros(self.infinite.shape, dtype=bool)
        for small, big in zip(ns, ns[1:]):
            bad |= self.finite[big] & ~self.finite[small]
        if ns:
            bad |= self.infinite & ~self.finite[ns[-1]]
        return int(bad.sum())

    def to_csv(self) -> str:
        header = ["s", "t"] + [f"psd_n{n}" for n in self.n_list] + ["psd_inf"]
        lines = [",".join(header)]
        for i, t in enumerate(self.t_values):
            for j, s in enumerate(self.s_values):
                flags = [str(int(self.finite[n][i, j])) for n in self.n_list]
                flags.append(str(int(self.infinite[i, j])))
                lines.append(f"{s:.9g},{t:.9g}," + ",".join(flags))
        return "\n".join(lines) + "\n"

    def to_svg(self, width: int = 640, height: int = 480, margin: int = 48) -> str:
        """Shaded infinite-n region with the finite-n boundaries drawn as polylines."""
        s, t = self.s_values, self.t_values
        s0, s1 = float(s[0]), float(s[-1])
        t0, t1 = float(t[0]), float(t[-1])
        ds = (s1 - s0) / max(len(s) - 1, 1) or 1.0
        dt = (t1 - t0) / max(len(t) - 1, 1) or 1.0
        span_s = (s1 - s0) + ds
        span_t = (t1 - t0) + dt
        pw, ph = width - 2 * margin, height - 2 * margin

        def x(v):
            return margin + (v - s0 + ds / 2) / span_s * pw

        def y(v):
            return margin + ph - (v - t0 + dt / 2) / span_t * ph

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
            '<g fill="#c6dbef" stroke="none" shape-rendering="crispEdges">',
        ]
        cell_w = pw / len(s)
        cell_h = ph / len(t)
        for i, tv in enumerate(t):
            row = self.infinite[i]
            j = 0
            while j < len(s):
                if not row[j]:
                    j += 1
                    continue
                k = j
                while k < len(s) and row[k]:
                    k += 1
                out.append(
                    f'<rect x="{x(s[j]) - cell_w / 2:.3f}" y="{y(tv) - cell_h / 2:.3f}" '
                    f'width="{(k - j) * cell_w:.3f}" height="{cell_h:.3f}"/>'
                )
                j = k
        out.append("</g>")
        for idx, n in enumerate(self.n_list):
            colour = _COLOURS[idx % len(_COLOURS)]
            pts = []
            for i, tv in enumerate(t):
                hits = np.flatnonzero(self.finite[n][i])
                if hits.size:
                    pts.append(f"{x(s[hits[0]]):.3f},{y(tv):.3f}")
            if pts:
                out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" '
                           f'points="{" ".join(pts)}"/>')
            out.append(f'<text x="{width - margin + 4}" y="{margin + 14 * (idx + 1)}" '
                       f'font-size="11" fill="{colour}">n={n}</text>')
        out.append(f'<text x="{width - margin + 4}" y="{margin}" font-size="11" fill="#6b8fb5">n=inf</text>')
        out.append(f'<rect x="{margin}" y="{margin}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
        if s0 <= 0 <= s1:
            out.append(f'<line x1="{x(0):.3f}" y1="{margin}" x2="{x(0):.3f}" y2="{margin + ph}" '
                       'stroke="grey" stroke-dasharray="4 3"/>')
        if t0 <= 0 <= t1:
            out.append(f'<line x1="{margin}" y1="{y(0):.3f}" x2="{margin + pw}" y2="{y(0):.3f}" '
                       'stroke="grey" stroke-dasharray="4 3"/>')
        out.append(f'<text x="{margin}" y="{height - margin / 3:.1f}" font-size="11">s = {s0:g}</text>')
        out.append(f'<text x="{margin + pw}" y="{height - margin / 3:.1f}" font-size="11" '
                   f'text-anchor="end">s = {s1:g}</text>')
        out.append(f'<text x="4" y="{margin + ph}" font-size="11">t = {t0:g}</text>')
        out.append(f'<text x="4" y="{margin + 10}" font-size="11">t = {t1:g}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _axis(lo: float, hi: float, count: int) -> np.ndarray:
    if hi < lo:
        raise ValueError(f"range ({lo}, {hi}) is not ordered")
    if count < 2 and not (count == 1 and lo == hi):
        raise ValueError("each axis needs at least 2 steps (or a single point with lo == hi)")
    return np.linspace(lo, hi, count)


def region_sample(s_range=DEFAULT_S_RANGE, t_range=DEFAULT_T_RANGE, steps=DEFAULT_STEPS,
                  n_list=DEFAULT_N_LIST) -> RegionGrid:
    """PSD flags on a rectangular grid.

    Finite n uses the determinant criterion (vectorised recurrence, with the
    same 1e-12 relative boundary shift as ``is_psd_a``); n = inf uses the exact
    closed-form test.
    """
    s_values = _axis(float(s_range[0]), float(s_range[1]), int(steps[0]))
    t_values = _axis(float(t_range[0]), float(t_range[1]), int(steps[1]))
    S, T = np.meshgrid(s_values, t_values)
    shifted = T + 1e-12 * np.maximum(1.0, np.maximum(np.abs(S), np.abs(T)))
    grid = RegionGrid(s_values, t_values, tuple(int(n) for n in n_list))
    for n in grid.n_list:
        ok = det_values(n, S, shifted) >= 0
        if n > 1:
            ok &= shifted > t_threshold(n)
        grid.finite[n] = ok
    grid.infinite = np.array(
        [[infinite_psd(float(sv), float(tv)) for sv in s_values] for tv in t_values], dtype=bool
    ).reshape(S.shape)
    return grid
