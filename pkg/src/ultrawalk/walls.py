"""Wall amplitudes for the two-absorbing-wall geometry via decimation.

Repeated decimation of the lattice 0..2^l reduces it to the three-site chain
(left wall, start site, right wall); the perturbation series the shift-flow
resums is exact at every finite l, so these amplitudes match direct
simulation to machine precision. The upper shift operator S^A feeds the
right wall, the lower S^B the left wall (pinned against simulation; see the
walls tests).

Iteration runs in extended precision: at z = 1 the flow's repelling
eigendirection amplifies roundoff by 2/epsilon per level, which by l = 12
would push double-precision conservation errors to ~1e-7.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np
from numpy.typing import NDArray

from .hierarchy import PERSISTENT, STOCHASTIC, CoinHierarchy
from .rg import RGSingularError

_DET_TOL = 1e-25


@dataclass(frozen=True)
class WallAmplitudes:
    """Generating-function amplitudes and weights at the two walls.

    F values are component sums for the stochastic flavor (probabilities at
    z = 1) and squared-modulus sums for the unitary flavor, where they are a
    diagnostic only (probabilistic=False): unitary absorption probabilities
    come from the time-domain cumulative sum, not from the z = 1 amplitude.
    """

    psi_left: NDArray[np.complex128]
    psi_right: NDArray[np.complex128]
    F_left: float
    F_right: float
    l: int | None
    probabilistic: bool


def _mp_coin_and_inverse(h: CoinHierarchy, k: int):
    eta = mp.mpf(h.eta0) * mp.mpf(h.epsilon) ** k
    if h.persistence == PERSISTENT:
        eta = 1 - eta
    if h.flavor == STOCHASTIC:
        C = mp.matrix([[eta, 1 - eta], [1 - eta, eta]])
    else:
        s, c = mp.sin(eta), mp.cos(eta)
        C = mp.matrix([[s, c], [c, -s]])
    det = C[0, 0] * C[1, 1] - C[0, 1] * C[1, 0]
    if abs(det) <= _DET_TOL:
        raise RGSingularError(f"singular coin at level {k}")
    Cinv = mp.matrix([[C[1, 1], -C[0, 1]], [-C[1, 0], C[0, 0]]]) / det
    return Cinv


def _mp_resolvent(Cinv, SM):
    res = Cinv - SM
    det = res[0, 0] * res[1, 1] - res[0, 1] * res[1, 0]
    if abs(det) <= _DET_TOL:
        raise RGSingularError("RG wall step singular")
    return mp.matrix([[res[1, 1], -res[0, 1]], [-res[1, 0], res[0, 0]]]) / det


def _weight(flavor: str, w) -> float:
    if flavor == STOCHASTIC:
        return float(mp.re(w[0] + w[1]))
    return float(abs(w[0]) ** 2 + abs(w[1]) ** 2)


def rg_wall_amplitudes(
    l: int,
    h: CoinHierarchy,
    psi_ic,
    z: complex = 1.0,
    dps: int = 60,
) -> WallAmplitudes:
    """Decimate the 0..2^l geometry down to its two walls.

    Runs l-1 shift-flow steps over the level coins C_0..C_{l-2}, then applies
    psi_wall = S_{l-1}^{A,B} (C_{l-1}^{-1} - S_{l-1}^M)^{-1} psi_ic with the
    start site's coin C_{l-1}.
    """
    if l < 2:
        raise ValueError("wall geometry needs l >= 2")
    ic = np.asarray(psi_ic, dtype=np.complex128)
    if ic.shape != (2,):
        raise ValueError("psi_ic must have two components")
    with mp.workdps(int(dps)):
        zc = mp.mpmathify(z)
        SA = mp.matrix([[zc, 0], [0, 0]])
        SB = mp.matrix([[0, 0], [0, zc]])
        SM = mp.zeros(2, 2)
        for k in range(l - 1):
            R = _mp_resolvent(_mp_coin_and_inverse(h, k), SM)
            SA, SB, SM = SA * R * SA, SB * R * SB, SM + SA * R * SB + SB * R * SA
        R = _mp_resolvent(_mp_coin_and_inverse(h, l - 1), SM)
        v = R * mp.matrix([mp.mpmathify(complex(ic[0])), mp.mpmathify(complex(ic[1]))])
        w_right = SA * v  # upper shift feeds the wall at 2^l
        w_left = SB * v
        F_left = _weight(h.flavor, w_left)
        F_right = _weight(h.flavor, w_right)
        psi_left = np.array([complex(w_left[0]), complex(w_left[1])])
        psi_right = np.array([complex(w_right[0]), complex(w_right[1])])
    return WallAmplitudes(
        psi_left=psi_left, psi_right=psi_right,
        F_left=F_left, F_right=F_right, l=int(l),
        probabilistic=(h.flavor == STOCHASTIC and complex(z) == 1.0),
    )


def classical_wall_closed_form(epsilon: float, psi_ic) -> WallAmplitudes:
    """Limit of the decimated wall amplitudes for the stochastic flavor:
    psi_walls = S^{A,B} [[e, 1-e], [1-e, e]] psi_ic with the bare projectors.

    The limit is reached by the flow only for epsilon <= 1/2 (the barrier
    fixed point governs there); the formula itself is defined for all
    epsilon in (0, 1].
    """
    epsilon = float(epsilon)
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    ic = np.asarray(psi_ic, dtype=np.float64)
    if ic.shape != (2,):
        raise ValueError("psi_ic must have two components")
    M = np.array([[epsilon, 1.0 - epsilon], [1.0 - epsilon, epsilon]])
    v = M @ ic
    psi_right = np.array([v[0], 0.0], dtype=np.complex128)
    psi_left = np.array([0.0, v[1]], dtype=np.complex128)
    return WallAmplitudes(
        psi_left=psi_left, psi_right=psi_right,
        F_left=float(v[1]), F_right=float(v[0]),
        l=None, probabilistic=True,
    )
