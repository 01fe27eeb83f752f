"""Deterministic time evolution of the two-component master equation.

The state carries an up-moving and a down-moving amplitude on every lattice
site; one step applies the departure site's coin and shifts the upper row
right, the lower row left. Both coin flavors run through the same kernel
(stochastic amplitudes are probabilities, unitary ones complex), with open or
absorbing boundaries. Evolution only touches the occupied slice of the
lattice plus its one-site-per-step light cone, so subdiffusive runs stay
cheap on huge time horizons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .hierarchy import STOCHASTIC, UNITARY, CoinHierarchy, coin_field

OPEN = "open"
ABSORBING = "absorbing"

_NORM_TOL = 1e-12
_ACTIVE_TOL = 1e-30
_TIGHTEN_EVERY = 64
# absorbing lattices up to this many sites step through a dense one-step
# matrix (fast for the long tails of absorption runs)
_DENSE_MAX_SITES = 2049


class LatticeOverflowError(RuntimeError):
    """Open-boundary support reached the lattice edge."""


@dataclass
class WalkState:
    """Two-component amplitudes over sites x_min..x_max plus absorbed weight."""

    psi_plus: NDArray
    psi_minus: NDArray
    x_min: int
    x_max: int
    x0: int
    flavor: str
    boundary: str
    t: int = 0
    absorbed_left: float = 0.0
    absorbed_right: float = 0.0
    # active-window indices (inclusive), maintained by the stepping kernel
    lo: int = 0
    hi: int = 0

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(self.x_min, self.x_max + 1, dtype=np.int64)

    def density(self) -> NDArray[np.float64]:
        if self.flavor == STOCHASTIC:
            return (self.psi_plus + self.psi_minus).real
        return (np.abs(self.psi_plus) ** 2 + np.abs(self.psi_minus) ** 2)

    def interior_weight(self) -> float:
        return float(self.density().sum())

    def norm(self) -> float:
        return self.interior_weight() + self.absorbed_left + self.absorbed_right


@dataclass(frozen=True)
class PdfSnapshot:
    """Site densities and amplitudes at one time, with moments about the
    start site."""

    t: int
    xs: NDArray[np.int64]
    rho: NDArray[np.float64]
    psi_plus: NDArray[np.complex128]
    psi_minus: NDArray[np.complex128]
    mean: float
    msd: float


@dataclass(frozen=True)
class AbsorptionRecord:
    """Cumulative wall absorption over time for a two-wall run."""

    times: NDArray[np.int64]
    cumulative_left: NDArray[np.float64]
    cumulative_right: NDArray[np.float64]
    interior: NDArray[np.float64]
    converged: bool
    l: int


def init_point(
    x0: int,
    psi_ic,
    flavor: str,
    lattice: tuple[int, int],
    boundary: str = OPEN,
) -> WalkState:
    """State with a normalized two-component amplitude at a single site."""
    x_min, x_max = int(lattice[0]), int(lattice[1])
    if x_max <= x_min:
        raise ValueError("lattice bounds must satisfy x_min < x_max")
    if boundary not in (OPEN, ABSORBING):
        raise ValueError(f"unknown boundary mode: {boundary!r}")
    if not x_min <= x0 <= x_max:
        raise ValueError("start site outside the lattice")
    if boundary == ABSORBING and x0 in (x_min, x_max):
        raise ValueError("start site sits on an absorbing wall")
    ic = np.asarray(psi_ic)
    if ic.shape != (2,):
        raise ValueError("psi_ic must have two components")
    n = x_max - x_min + 1
    if flavor == STOCHASTIC:
        if np.iscomplexobj(ic) and np.abs(ic.imag).max() > 0:
            raise ValueError("stochastic amplitudes must be real")
        ic = ic.real.astype(np.float64)
        if ic.min() < 0 or abs(ic.sum() - 1.0) > _NORM_TOL:
            raise ValueError("stochastic psi_ic must be non-negative and sum to 1")
        psi_p = np.zeros(n, dtype=np.float64)
        psi_m = np.zeros(n, dtype=np.float64)
    elif flavor == UNITARY:
        ic = ic.astype(np.complex128)
        if abs((np.abs(ic) ** 2).sum() - 1.0) > _NORM_TOL:
            raise ValueError("unitary psi_ic must have unit norm")
        psi_p = np.zeros(n, dtype=np.complex128)
        psi_m = np.zeros(n, dtype=np.complex128)
    else:
        raise ValueError(f"unknown flavor: {flavor!r}")
    idx = x0 - x_min
    psi_p[idx] = ic[0]
    psi_m[idx] = ic[1]
    return WalkState(
        psi_plus=psi_p, psi_minus=psi_m,
        x_min=x_min, x_max=x_max, x0=int(x0),
        flavor=flavor, boundary=boundary, lo=idx, hi=idx,
    )


def _coin_rows(s: WalkState, h: CoinHierarchy, L: int, origin_level: int | None):
    if h.flavor != s.flavor:
        raise ValueError("state and hierarchy flavors differ")
    rows = coin_field(h, s.sites, L, origin_level)
    if s.flavor == STOCHASTIC:
        rows = rows.real
    return rows[:, 0, 0], rows[:, 0, 1], rows[:, 1, 0], rows[:, 1, 1]


def _cell_density(flavor: str, p, m) -> float:
    if flavor == STOCHASTIC:
        return float((p + m).real)
    return float(abs(p) ** 2 + abs(m) ** 2)


def _step_kernel(s: WalkState, coins, active_tol: float = _ACTIVE_TOL) -> None:
    """Advance the state by one step in place."""
    c00, c01, c10, c11 = coins
    n = s.psi_plus.shape[0]
    lo, hi = s.lo, s.hi
    if s.boundary == OPEN and (
        (lo == 0 and _cell_density(s.flavor, s.psi_plus[0], s.psi_minus[0]) != 0.0)
        or (hi == n - 1 and _cell_density(s.flavor, s.psi_plus[n - 1], s.psi_minus[n - 1]) != 0.0)
    ):
        raise LatticeOverflowError("lattice too small for the requested horizon")

    src = slice(lo, hi + 1)
    out_p = c00[src] * s.psi_plus[src] + c01[src] * s.psi_minus[src]
    out_m = c10[src] * s.psi_plus[src] + c11[src] * s.psi_minus[src]

    new_lo, new_hi = max(lo - 1, 0), min(hi + 1, n - 1)
    s.psi_plus[new_lo:new_hi + 1] = 0.0
    s.psi_minus[new_lo:new_hi + 1] = 0.0
    # departures from [lo, hi]: upper row lands one site right, lower one left
    p_dst_lo = lo + 1
    p_cut = max(0, p_dst_lo + out_p.shape[0] - n)  # clip at the right edge
    s.psi_plus[p_dst_lo:p_dst_lo + out_p.shape[0] - p_cut] = out_p[:out_p.shape[0] - p_cut]
    m_dst_lo = lo - 1
    m_skip = -min(0, m_dst_lo)  # clip at the left edge
    s.psi_minus[m_dst_lo + m_skip:m_dst_lo + out_m.shape[0]] = out_m[m_skip:]
    s.t += 1
    s.lo, s.hi = new_lo, new_hi

    if s.boundary == ABSORBING:
        s.absorbed_left += _cell_density(s.flavor, s.psi_plus[0], s.psi_minus[0])
        s.absorbed_right += _cell_density(s.flavor, s.psi_plus[n - 1], s.psi_minus[n - 1])
        s.psi_plus[0] = s.psi_minus[0] = 0.0
        s.psi_plus[n - 1] = s.psi_minus[n - 1] = 0.0

    if s.t % _TIGHTEN_EVERY == 0:
        occ = np.flatnonzero(
            (np.abs(s.psi_plus[s.lo:s.hi + 1]) > active_tol)
            | (np.abs(s.psi_minus[s.lo:s.hi + 1]) > active_tol)
        )
        if occ.size:
            s.lo, s.hi = s.lo + int(occ[0]), s.lo + int(occ[-1])


def step(s: WalkState, h: CoinHierarchy, L: int, origin_level: int | None = None) -> WalkState:
    """One step of the master equation; returns a new state."""
    out = WalkState(
        psi_plus=s.psi_plus.copy(), psi_minus=s.psi_minus.copy(),
        x_min=s.x_min, x_max=s.x_max, x0=s.x0, flavor=s.flavor,
        boundary=s.boundary, t=s.t, absorbed_left=s.absorbed_left,
        absorbed_right=s.absorbed_right, lo=s.lo, hi=s.hi,
    )
    _step_kernel(out, _coin_rows(s, h, L, origin_level))
    return out


def _snapshot(s: WalkState) -> PdfSnapshot:
    rho = s.density()
    xs = s.sites
    total = rho.sum()
    if total > 0:
        mean = float((rho * xs).sum() / total)
        msd = float((rho * (xs - s.x0) ** 2).sum() / total)
    else:
        mean, msd = float(s.x0), 0.0
    rho = rho.copy()
    rho.setflags(write=False)
    pp = s.psi_plus.copy()
    pm = s.psi_minus.copy()
    pp.setflags(write=False)
    pm.setflags(write=False)
    return PdfSnapshot(
        t=s.t, xs=xs, rho=rho, psi_plus=pp, psi_minus=pm, mean=mean, msd=msd,
    )


def evolve(
    s: WalkState,
    h: CoinHierarchy,
    L: int,
    t_max: int,
    sample_times=None,
    origin_level: int | None = None,
    record_moments: bool = False,
):
    """Run t_max steps, returning PdfSnapshots at the sampled times.

    With record_moments=True also returns an array of (t, mean, msd, norm)
    rows for every integer time in [0, t_max].
    """
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    if sample_times is None:
        sample_times = [t_max]
    wanted = set(int(t) for t in sample_times)
    if wanted and (min(wanted) < 0 or max(wanted) > t_max):
        raise ValueError("sample times must lie in [0, t_max]")
    s = WalkState(
        psi_plus=s.psi_plus.copy(), psi_minus=s.psi_minus.copy(),
        x_min=s.x_min, x_max=s.x_max, x0=s.x0, flavor=s.flavor,
        boundary=s.boundary, t=s.t, absorbed_left=s.absorbed_left,
        absorbed_right=s.absorbed_right, lo=s.lo, hi=s.hi,
    )
    coins = _coin_rows(s, h, L, origin_level)
    snapshots: list[PdfSnapshot] = []
    moments = np.empty((t_max + 1, 4), dtype=np.float64) if record_moments else None

    def record(st: WalkState) -> None:
        if st.t in wanted or moments is not None:
            snap = _snapshot(st)
            if st.t in wanted:
                snapshots.append(snap)
            if moments is not None:
                moments[st.t] = (st.t, snap.mean, snap.msd, st.norm())

    record(s)
    for _ in range(t_max):
        _step_kernel(s, coins)
        record(s)
    if record_moments:
        return snapshots, moments
    return snapshots


def dyadic_times(t_max: int) -> list[int]:
    """Powers of two in [2, t_max] (12 values at t_max = 4096)."""
    return [1 << k for k in range(1, max(int(t_max), 1).bit_length()) if (1 << k) <= t_max]


def linear_times(t_max: int, n: int) -> list[int]:
    """n approximately evenly spaced integer times ending at t_max."""
    if n < 1:
        raise ValueError("linear schedule needs n >= 1")
    return sorted({max(1, round(i * t_max / n)) for i in range(1, n + 1)})


def _dense_step_matrix(s: WalkState, coins):
    """One-step transfer matrix over the stacked vector (psi_plus, psi_minus)."""
    c00, c01, c10, c11 = coins
    n = s.psi_plus.shape[0]
    dtype = s.psi_plus.dtype
    U = np.zeros((2 * n, 2 * n), dtype=dtype)
    for x in range(1, n):
        U[x, x - 1] = c00[x - 1]
        U[x, n + x - 1] = c01[x - 1]
    for x in range(n - 1):
        U[n + x, x + 1] = c10[x + 1]
        U[n + x, n + x + 1] = c11[x + 1]
    return U


def run_absorbing(
    l: int,
    h: CoinHierarchy,
    psi_ic,
    t_max: int,
    tail_tol: float = 1e-9,
    record_stride: int = 1,
) -> AbsorptionRecord:
    """Two absorbing walls at 0 and 2^l, walk started at the central site.

    Evolves until the interior weight drops below tail_tol or t_max steps,
    recording cumulative wall totals every record_stride steps (the final
    step is always recorded).
    """
    if l < 2:
        raise ValueError("wall geometry needs l >= 2")
    if record_stride < 1:
        raise ValueError("record_stride must be >= 1")
    n_sites = (1 << l) + 1
    s = init_point(1 << (l - 1), psi_ic, h.flavor, (0, 1 << l), ABSORBING)
    coins = _coin_rows(s, h, L=l, origin_level=None)

    times = [0]
    cum_left = [0.0]
    cum_right = [0.0]
    interior = [s.interior_weight()]

    def record(t: int) -> None:
        times.append(t)
        cum_left.append(s.absorbed_left)
        cum_right.append(s.absorbed_right)
        interior.append(s.interior_weight())

    if n_sites <= _DENSE_MAX_SITES:
        U = _dense_step_matrix(s, coins)
        v = np.concatenate([s.psi_plus, s.psi_minus])
        wall_idx = (0, n_sites - 1, n_sites, 2 * n_sites - 1)

        def interior_of(vec) -> float:
            # same quantity the record uses, so the stop test and the
            # converged flag cannot disagree
            if s.flavor == STOCHASTIC:
                return float(vec.real.sum())
            return float((np.abs(vec) ** 2).sum())

        w = interior_of(v)
        t = 0
        while t < t_max and w >= tail_tol:
            v = U @ v
            t += 1
            if s.flavor == STOCHASTIC:
                dl = float((v[wall_idx[0]] + v[wall_idx[2]]).real)
                dr = float((v[wall_idx[1]] + v[wall_idx[3]]).real)
            else:
                dl = float(abs(v[wall_idx[0]]) ** 2 + abs(v[wall_idx[2]]) ** 2)
                dr = float(abs(v[wall_idx[1]]) ** 2 + abs(v[wall_idx[3]]) ** 2)
            v[list(wall_idx)] = 0.0
            s.absorbed_left += dl
            s.absorbed_right += dr
            w = interior_of(v)
            if t % record_stride == 0:
                s.psi_plus = v[:n_sites]
                s.psi_minus = v[n_sites:]
                record(t)
        s.psi_plus = v[:n_sites]
        s.psi_minus = v[n_sites:]
        s.t = t
        if t % record_stride != 0:
            record(t)
    else:
        while s.t < t_max and s.interior_weight() >= tail_tol:
            _step_kernel(s, coins)
            if s.t % record_stride == 0:
                record(s.t)
        if s.t % record_stride != 0:
            record(s.t)

    return AbsorptionRecord(
        times=np.array(times, dtype=np.int64),
        cumulative_left=np.array(cum_left, dtype=np.float64),
        cumulative_right=np.array(cum_right, dtype=np.float64),
        interior=np.array(interior, dtype=np.float64),
        converged=bool(interior[-1] < tail_tol),
        l=int(l),
    )
