"""Spreading-exponent fits and scaling collapse of sampled densities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .evolve import PdfSnapshot


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares fit of log2(msd) against log2(t)."""

    slope: float
    stderr: float
    window: tuple[int, int]
    points: int
    dw_estimate: float


@dataclass(frozen=True)
class CollapseSeries:
    """One sampled time rescaled onto the similarity variable.

    u = x / t^(1/dw), g = t^(1/dw) * rho, which preserves mass: the rescaled
    spacing is du = t^(-1/dw) per site, so sum(g) * du = sum(rho).
    """

    t: int
    u: NDArray[np.float64]
    g: NDArray[np.float64]
    dw: float

    @property
    def du(self) -> float:
        return float(self.t) ** (-1.0 / self.dw)


def fit_msd_exponent(
    snapshots: Sequence[PdfSnapshot],
    window: tuple[int, int],
) -> ExponentFit:
    """Fit msd ~ t^slope over the snapshots at dyadic times in the window.

    Only powers of two are used so fit points are evenly spaced in log2(t),
    averaging over the log-periodic wobble the hierarchy imprints on the
    msd curve.
    """
    lo, hi = int(window[0]), int(window[1])
    if not 1 <= lo < hi:
        raise ValueError("window must satisfy 1 <= lo < hi")
    ts, ys = [], []
    for snap in snapshots:
        t = int(snap.t)
        if t < lo or t > hi or snap.msd <= 0.0:
            continue
        if t & (t - 1):
            continue
        ts.append(t)
        ys.append(snap.msd)
    if len(ts) < 4:
        raise ValueError("need at least 4 dyadic times with positive msd in the window")
    x = np.log2(np.asarray(ts, dtype=np.float64))
    y = np.log2(np.asarray(ys, dtype=np.float64))
    n = x.size
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ y) / sxx
    resid = y - (y.mean() + slope * xc)
    stderr = float(np.sqrt((resid @ resid) / (n - 2) / sxx))
    return ExponentFit(
        slope=slope, stderr=stderr, window=(lo, hi), points=int(n),
        dw_estimate=2.0 / slope,
    )


def rescale_collapse(snapshot: PdfSnapshot, dw: float, x0: int = 0) -> CollapseSeries:
    """Map one snapshot onto the similarity variable for the given dw."""
    dw = float(dw)
    if not dw > 0.0:
        raise ValueError("dw must be positive")
    if snapshot.t < 1:
        raise ValueError("collapse needs t >= 1")
    scale = float(snapshot.t) ** (1.0 / dw)
    u = (snapshot.xs.astype(np.float64) - float(x0)) / scale
    g = snapshot.rho * scale
    u.flags.writeable = False
    g.flags.writeable = False
    return CollapseSeries(t=int(snapshot.t), u=u, g=g, dw=dw)


# Fraction of mass clipped from each tail when estimating a series' support.
# The raw g > 0 extent is a float-underflow artifact (the state is nonzero on
# the whole light cone), so support means the central-mass window here.
_SUPPORT_TAIL = 0.01


def _support_span(s: CollapseSeries) -> tuple[float, float]:
    mass = s.g * s.du
    total = mass.sum()
    if total <= 0.0:
        raise ValueError("a series has empty support")
    c = np.cumsum(mass) / total
    ilo = int(np.searchsorted(c, _SUPPORT_TAIL))
    ihi = min(int(np.searchsorted(c, 1.0 - _SUPPORT_TAIL)), len(c) - 1)
    return float(s.u[ilo]), float(s.u[ihi])


def collapse_distance(series: Sequence[CollapseSeries], bins: int = 32) -> float:
    """Largest pairwise L1 distance between coarse-grained rescaled series.

    Each series is coarse-grained over a common grid of equal-width bins
    spanning the overlap of the supports: the bin value is the integral of
    g over the bin (its mass, sum of g * du), so a perfect collapse gives
    identical curves regardless of lattice resolution. Smaller is better.
    """
    if len(series) < 2:
        raise ValueError("need at least two series to compare")
    if bins < 2:
        raise ValueError("need at least two bins")
    spans = [_support_span(s) for s in series]
    lo = max(a for a, _ in spans)
    hi = min(b for _, b in spans)
    if not hi > lo:
        raise ValueError("series have no common support")
    edges = np.linspace(lo, hi, bins + 1)
    curves = []
    for s in series:
        inside = (s.u >= lo) & (s.u <= hi)
        u, g = s.u[inside], s.g[inside]
        idx = np.clip(np.searchsorted(edges, u, side="right") - 1, 0, bins - 1)
        curves.append(np.bincount(idx, weights=g, minlength=bins) * s.du)
    worst = 0.0
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            worst = max(worst, float(np.abs(curves[i] - curves[j]).sum()))
    return worst
