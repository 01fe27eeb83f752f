"""Ultrametric hierarchy of coins on the one-dimensional lattice.

Every nonzero site factors uniquely as x = 2^i (2j + 1); the exponent i is
the site's hierarchy level (the 2-adic valuation of x). All sites sharing a
level carry an identical 2x2 coin whose mixing parameter decays geometrically
with the level, eta_i = eta0 * epsilon^i, so reversals pile up into barriers
that nest on all length scales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

STOCHASTIC = "stochastic"
UNITARY = "unitary"
ANTI_PERSISTENT = "anti-persistent"
PERSISTENT = "persistent"

_ROW_SUM_TOL = 1e-14
_UNITARY_TOL = 1e-14
_DET_TOL = 1e-14


def decompose(x: int) -> tuple[int, int]:
    """Split a nonzero integer into its hierarchy index (i, j), x = 2^i (2j+1).

    i is the 2-adic valuation of x and j the running index of the level;
    the map is a bijection from the nonzero integers onto {(i, j): i >= 0}.
    """
    x = int(x)
    if x == 0:
        raise ValueError("origin has no hierarchy index")
    i = (x & -x).bit_length() - 1
    odd = x >> i
    return i, (odd - 1) // 2


def recompose(i: int, j: int) -> int:
    """Inverse of decompose: the site 2^i (2j + 1)."""
    if i < 0:
        raise ValueError("hierarchy level must be non-negative")
    return (1 << int(i)) * (2 * int(j) + 1)


def levels_of_sites(xs: NDArray[np.int64], origin_level: int) -> NDArray[np.int64]:
    """Vectorized 2-adic valuation over a site array; x = 0 maps to origin_level."""
    xs = np.asarray(xs, dtype=np.int64)
    ax = np.abs(xs)
    lsb = np.where(ax > 0, ax & -ax, 1)
    # exact for powers of two well beyond any lattice size used here
    lev = np.log2(lsb.astype(np.float64)).round().astype(np.int64)
    return np.where(xs == 0, np.int64(origin_level), lev)


@dataclass(frozen=True)
class Coin2:
    """A 2x2 local mixing operator, stochastic or unitary."""

    entries: NDArray[np.complex128]
    flavor: str

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=np.complex128, copy=True)
        if m.shape != (2, 2):
            raise ValueError("coin must be a 2x2 matrix")
        if self.flavor == STOCHASTIC:
            if np.abs(m.imag).max() > 0:
                raise ValueError("stochastic coin must be real")
            r = m.real
            if r.min() < 0 or r.max() > 1:
                raise ValueError("stochastic coin entries must lie in [0, 1]")
            if np.abs(r.sum(axis=1) - 1.0).max() > _ROW_SUM_TOL:
                raise ValueError("stochastic coin rows must sum to 1")
        elif self.flavor == UNITARY:
            g = m.conj().T @ m
            if np.abs(g - np.eye(2)).max() > _UNITARY_TOL:
                raise ValueError("unitary coin must satisfy C^dag C = I")
        else:
            raise ValueError(f"unknown coin flavor: {self.flavor!r}")
        if abs(np.linalg.det(m)) <= _DET_TOL:
            raise ValueError("singular coin")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def inv(self) -> NDArray[np.complex128]:
        return np.linalg.inv(self.entries)


def make_coin(flavor: str, eta: float) -> Coin2:
    """Build the level coin: [[eta, 1-eta], [1-eta, eta]] stochastic, or
    [[sin eta, cos eta], [cos eta, -sin eta]] unitary (angles in radians)."""
    if flavor == STOCHASTIC:
        if not 0.0 < eta < 1.0:
            raise ValueError("stochastic coin requires 0 < eta < 1")
        if eta == 0.5:
            raise ValueError("singular coin")
        return Coin2(np.array([[eta, 1.0 - eta], [1.0 - eta, eta]]), STOCHASTIC)
    if flavor == UNITARY:
        s, c = math.sin(eta), math.cos(eta)
        return Coin2(np.array([[s, c], [c, -s]]), UNITARY)
    raise ValueError(f"unknown coin flavor: {flavor!r}")


@dataclass(frozen=True)
class CoinHierarchy:
    """Parameters of the ultrametric coin field eta_i = eta0 * epsilon^i."""

    eta0: float
    epsilon: float
    flavor: str = STOCHASTIC
    persistence: str = ANTI_PERSISTENT

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.flavor == STOCHASTIC:
            if not 0.0 < self.eta0 < 0.5:
                raise ValueError("stochastic hierarchy requires 0 < eta0 < 1/2")
        elif self.flavor == UNITARY:
            if not 0.0 < self.eta0 <= math.pi / 2:
                raise ValueError("unitary hierarchy requires 0 < eta0 <= pi/2")
            if self.persistence != ANTI_PERSISTENT:
                raise ValueError("persistence variants apply to the classical walk only")
        else:
            raise ValueError(f"unknown coin flavor: {self.flavor!r}")
        if self.persistence not in (ANTI_PERSISTENT, PERSISTENT):
            raise ValueError(f"unknown persistence variant: {self.persistence!r}")


def eta_of_level(h: CoinHierarchy, i: int) -> float:
    """Mixing parameter at hierarchy level i (persistent variant flips to 1 - eta)."""
    if i < 0:
        raise ValueError("hierarchy level must be non-negative")
    eta = h.eta0 * h.epsilon**i
    if h.persistence == PERSISTENT:
        return 1.0 - eta
    return eta


def coin_at_site(h: CoinHierarchy, x: int, L: int) -> Coin2:
    """Coin at site x on a lattice truncated at half-width 2^L.

    The origin carries no hierarchy index; it is assigned level L, the most
    reflective interior value (override via origin_level in coin_field).
    """
    if L < 1:
        raise ValueError("truncation level L must be >= 1")
    if abs(x) >= (1 << L):
        raise ValueError("site outside the truncated lattice")
    i = L if x == 0 else decompose(x)[0]
    return make_coin(h.flavor, eta_of_level(h, i))


def coin_field(
    h: CoinHierarchy,
    xs: NDArray[np.int64],
    L: int,
    origin_level: int | None = None,
) -> NDArray[np.complex128]:
    """Coin entries for every site in xs, shape (len(xs), 2, 2).

    Vectorized companion of coin_at_site for the evolution engine; the wall
    sites of absorbing runs receive the same level rule but their coins are
    never exercised (wall amplitudes are cleared before stepping).
    """
    if origin_level is None:
        origin_level = L
    levels = levels_of_sites(np.asarray(xs, dtype=np.int64), origin_level)
    etas = h.eta0 * np.power(float(h.epsilon), levels.astype(np.float64))
    if h.persistence == PERSISTENT:
        etas = 1.0 - etas
    out = np.empty((len(levels), 2, 2), dtype=np.complex128)
    if h.flavor == STOCHASTIC:
        out[:, 0, 0] = etas
        out[:, 0, 1] = 1.0 - etas
        out[:, 1, 0] = 1.0 - etas
        out[:, 1, 1] = etas
    else:
        out[:, 0, 0] = np.sin(etas)
        out[:, 0, 1] = np.cos(etas)
        out[:, 1, 0] = np.cos(etas)
        out[:, 1, 1] = -np.sin(etas)
    return out
