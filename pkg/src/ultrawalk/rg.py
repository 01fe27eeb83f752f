"""Renormalization flows for walks on the hierarchical lattice.

The decimation of all currently-odd sites maps the three shift operators
(S^A, S^B, S^M) to renormalized ones through the inverse of the coin at the
eliminated level; the hierarchy makes the flow non-autonomous only through
that per-level coin. For both coin flavors the matrix flow closes on a
two-scalar ansatz (a_k, m_k), and coordinate transforms turn the scalar flows
autonomous, exposing fixed points whose Jacobian spectra set the walk
dimension.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from numpy.typing import NDArray

from .hierarchy import (
    STOCHASTIC,
    UNITARY,
    Coin2,
    CoinHierarchy,
    eta_of_level,
    make_coin,
)

CLASSICAL = "classical"
CLASSICAL_UNPHYSICAL = "classical-unphysical"
QUANTUM = "quantum"
QUANTUM_INTERMEDIATE = "quantum-intermediate"
DIFFUSIVE = "diffusive"
BERNOULLI = "bernoulli"

BRANCHES = (
    CLASSICAL,
    CLASSICAL_UNPHYSICAL,
    QUANTUM,
    QUANTUM_INTERMEDIATE,
    DIFFUSIVE,
    BERNOULLI,
)

# branches whose autonomous map does not involve epsilon
_EPSILON_FREE = (DIFFUSIVE, BERNOULLI)


class RGSingularError(ArithmeticError):
    """A flow step hit a singular denominator or resolvent."""


class RGConvergenceError(RuntimeError):
    """Fixed-point iteration failed to converge."""


def _sincos(eta):
    if isinstance(eta, (mp.mpf, mp.mpc)):
        return mp.sin(eta), mp.cos(eta)
    return math.sin(eta), math.cos(eta)


# ---------------------------------------------------------------------------
# matrix shift-flow
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftTriple:
    """Renormalized shift matrices (S^A, S^B, S^M) at RG step k."""

    SA: NDArray[np.complex128]
    SB: NDArray[np.complex128]
    SM: NDArray[np.complex128]
    k: int = 0


def initial_triple(z: complex = 1.0) -> ShiftTriple:
    """Step-0 triple: z times the up/down shift projectors, no backscatter."""
    SA = np.array([[z, 0.0], [0.0, 0.0]], dtype=np.complex128)
    SB = np.array([[0.0, 0.0], [0.0, z]], dtype=np.complex128)
    SM = np.zeros((2, 2), dtype=np.complex128)
    return ShiftTriple(SA, SB, SM, k=0)


def sflow_step(S: ShiftTriple, coin: Coin2) -> ShiftTriple:
    """One decimation: S'^{A,B} = S^{A,B} R S^{A,B}, S'^M = S^M + S^A R S^B
    + S^B R S^A with resolvent R = (C_k^{-1} - S^M)^{-1}."""
    res = coin.inv - S.SM
    # deep flows drive the resolvent denominator to zero geometrically while
    # it stays well conditioned, so only an exact zero counts as singular
    det = res[0, 0] * res[1, 1] - res[0, 1] * res[1, 0]
    if det == 0:
        raise RGSingularError(f"RG step singular at k={S.k}")
    R = np.array([[res[1, 1], -res[0, 1]], [-res[1, 0], res[0, 0]]]) / det
    SA = S.SA @ R @ S.SA
    SB = S.SB @ R @ S.SB
    SM = S.SM + S.SA @ R @ S.SB + S.SB @ R @ S.SA
    return ShiftTriple(SA, SB, SM, k=S.k + 1)


def sflow_trajectory(h: CoinHierarchy, steps: int, z: complex = 1.0) -> list[ShiftTriple]:
    """Triples S_0 .. S_steps, consuming the level coins C_0 .. C_{steps-1}."""
    out = [initial_triple(z)]
    for k in range(steps):
        coin = make_coin(h.flavor, eta_of_level(h, k))
        out.append(sflow_step(out[-1], coin))
    return out


def ansatz_scalars(S: ShiftTriple, flavor: str) -> tuple[complex, complex]:
    """Extract (a, m) from a triple assuming the two-scalar closure."""
    return complex(S.SA[0, 0]), complex(S.SM[0, 1])


def off_ansatz_error(S: ShiftTriple, flavor: str) -> float:
    """Largest matrix-entry deviation from the two-scalar closure pattern:
    S^A = diag(a, 0), S^B = diag(0, a) (stochastic) or diag(0, -a) (unitary),
    S^M = antidiag(m, m)."""
    a, m = ansatz_scalars(S, flavor)
    sign = 1.0 if flavor == STOCHASTIC else -1.0
    devs = [
        abs(S.SA[0, 1]), abs(S.SA[1, 0]), abs(S.SA[1, 1]),
        abs(S.SB[0, 0]), abs(S.SB[0, 1]), abs(S.SB[1, 0]),
        abs(S.SB[1, 1] - sign * a),
        abs(S.SM[0, 0]), abs(S.SM[1, 1]),
        abs(S.SM[1, 0] - m),
    ]
    return float(max(devs))


# ---------------------------------------------------------------------------
# scalar flows and transforms
# ---------------------------------------------------------------------------

def scalar_bernoulli_step(A, B, M):
    """Homogeneous decimation of the scalar hopping amplitudes."""
    den = 1 - M
    if den == 0:
        raise RGSingularError("bernoulli step singular: M = 1")
    return A * A / den, B * B / den, M + 2 * A * B / den


def scalar_classical_step(a, m, eta_k):
    """Exact stochastic-coin flow for the ansatz scalars at level coin eta_k."""
    den = (1 - m) * (1 - (1 - 2 * eta_k) * m)
    if den == 0:
        raise RGSingularError("classical step singular denominator")
    a2 = a * a
    return eta_k * a2 / den, m + a2 * (1 - eta_k - (1 - 2 * eta_k) * m) / den


def scalar_quantum_step(a, m, eta_k):
    """Exact unitary-coin flow for the ansatz scalars at level coin eta_k."""
    s, c = _sincos(eta_k)
    den = 1 - 2 * m * c + m * m
    if den == 0:
        raise RGSingularError("quantum step singular denominator")
    a2 = a * a
    return a2 * s / den, m + (m - c) * a2 / den


def transform_classical(a, m, eta_k):
    """(a, m) -> (alpha, mu): the coordinates in which the flow is autonomous."""
    if eta_k == 0 or eta_k == 0.5:
        raise RGSingularError("classical transform singular at eta in {0, 1/2}")
    w = 1 - 2 * eta_k
    return a * w / eta_k, ((1 - eta_k) - m * w) / eta_k


def inverse_transform_classical(alpha, mu, eta_k):
    if eta_k == 0 or eta_k == 0.5:
        raise RGSingularError("classical transform singular at eta in {0, 1/2}")
    w = 1 - 2 * eta_k
    return alpha * eta_k / w, ((1 - eta_k) - mu * eta_k) / w


def transform_quantum(a, m, eta_k):
    s, c = _sincos(eta_k)
    if s == 0:
        raise RGSingularError("quantum transform singular at eta = 0")
    return a / s, (c - m) / s


def inverse_transform_quantum(alpha, mu, eta_k):
    s, c = _sincos(eta_k)
    if s == 0:
        raise RGSingularError("quantum transform singular at eta = 0")
    return alpha * s, c - mu * s


def flow_classical_autonomous(alpha, mu, epsilon):
    D = mu * mu - 1
    if D == 0:
        raise RGSingularError("classical autonomous flow singular at mu^2 = 1")
    return alpha * alpha / (epsilon * D), (1 - 1 / epsilon) + mu * (1 - alpha * alpha / D) / epsilon


def flow_diffusive(x, y):
    if y == 0:
        raise RGSingularError("diffusive flow singular at y = 0")
    r = x * x / y
    return r, 2 * y - r


def flow_bernoulli_correlated(x, y):
    """Correlated decay ansatz A = B ~ x/2^k, 1 - M ~ y/2^k on the Bernoulli
    flow; closes with fixed-point ratio x/y = 1/2."""
    if y == 0:
        raise RGSingularError("bernoulli correlated flow singular at y = 0")
    r = x * x / y
    return 2 * r, 2 * y - 4 * r


def flow_quantum_autonomous(alpha, nu, epsilon):
    a2 = alpha * alpha
    e2 = epsilon * epsilon
    return a2 / epsilon, nu * (1 + a2) / e2 - (1 - e2) / (2 * e2)


def flow_quantum_intermediate(alpha, mu, eta_k, epsilon):
    """Small-mu flow before the nu = mu/eta rescaling; eta_k = 0 gives the
    autonomous map whose complex fixed point carries the lambda_pm spectrum."""
    E = mu * mu + 1
    if E == 0:
        raise RGSingularError("intermediate flow singular at mu^2 = -1")
    a2 = alpha * alpha
    alpha_p = a2 / (epsilon * E)
    mu_p = mu * (1 + a2 / E) / epsilon + eta_k * (epsilon - 1 / epsilon) / 2
    return alpha_p, mu_p


# ---------------------------------------------------------------------------
# walk dimensions
# ---------------------------------------------------------------------------

def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    return epsilon


def dw_classical(epsilon: float) -> float:
    """Classical walk dimension: barrier value 1 - log2(epsilon) below the
    crossover at epsilon = 1/2, ordinary diffusion (2) above it."""
    epsilon = _check_epsilon(epsilon)
    return max(2.0, 1.0 - math.log2(epsilon))


def dw_quantum(epsilon: float) -> float:
    """Quantum walk dimension from the geometric mean of the two Jacobian
    eigenvalues: 1/2 + log2(1 + epsilon^-2)/2."""
    epsilon = _check_epsilon(epsilon)
    return 0.5 + 0.5 * math.log2(1.0 + epsilon**-2)


def lambda_plus(epsilon: float) -> float:
    """Largest eigenvalue of the intermediate quantum branch (unphysical;
    kept for the curve it traces): b + sqrt(b^2 - 2), b = 1/e + 1/2 + e."""
    epsilon = _check_epsilon(epsilon)
    b = 1.0 / epsilon + 0.5 + epsilon
    return b + math.sqrt(b * b - 2.0)


def dw_lambda_plus(epsilon: float) -> float:
    """Walk dimension the unphysical branch would imply: log2(lambda_plus)."""
    return math.log2(lambda_plus(epsilon))


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointReport:
    branch: str
    epsilon: float | None
    fp: tuple[complex, ...]
    jacobian: NDArray[np.complex128]
    eigenvalues: tuple[complex, complex]
    dw: float
    physical: bool
    method: str
    residual: float


def fixed_point_closed_form(branch: str, epsilon: float | None = None):
    """Known fixed-point coordinates per branch (line branches return a
    representative point on the fixed line)."""
    if branch in _EPSILON_FREE:
        return {DIFFUSIVE: (1.0, 1.0), BERNOULLI: (1.0, 2.0)}[branch]
    e = _check_epsilon(epsilon)
    if branch == CLASSICAL:
        return (1.0 / e - 2.0, 1.0 / e - 1.0)
    if branch == CLASSICAL_UNPHYSICAL:
        return (1.0 / e - e, -1.0 / e)
    if branch == QUANTUM:
        return (e, (1.0 - e * e) / 2.0)
    if branch == QUANTUM_INTERMEDIATE:
        return (1.0 - 1.0 / e, 1j * math.sqrt(1.0 - 1.0 / e + 1.0 / e**2))
    raise ValueError(f"unknown branch: {branch!r}")


def _branch_map(branch: str, epsilon: float | None):
    if branch == CLASSICAL or branch == CLASSICAL_UNPHYSICAL:
        return lambda v: np.array(flow_classical_autonomous(v[0], v[1], epsilon))
    if branch == QUANTUM:
        return lambda v: np.array(flow_quantum_autonomous(v[0], v[1], epsilon))
    if branch == QUANTUM_INTERMEDIATE:
        return lambda v: np.array(flow_quantum_intermediate(v[0], v[1], 0.0, epsilon))
    if branch == DIFFUSIVE:
        return lambda v: np.array(flow_diffusive(v[0], v[1]))
    if branch == BERNOULLI:
        return lambda v: np.array(flow_bernoulli_correlated(v[0], v[1]))
    raise ValueError(f"unknown branch: {branch!r}")


def _branch_jacobian(branch: str, v, epsilon: float | None) -> NDArray[np.complex128]:
    """Closed-form Jacobian of the branch map at point v."""
    a, b = complex(v[0]), complex(v[1])
    if branch == CLASSICAL or branch == CLASSICAL_UNPHYSICAL:
        e = epsilon
        D = b * b - 1
        return np.array([
            [2 * a / (e * D), -2 * a * a * b / (e * D * D)],
            [-2 * a * b / (e * D), 1 / e - a * a / (e * D) + 2 * a * a * b * b / (e * D * D)],
        ])
    if branch == QUANTUM:
        e = epsilon
        return np.array([
            [2 * a / e, 0.0],
            [2 * a * b / e**2, (1 + a * a) / e**2],
        ])
    if branch == QUANTUM_INTERMEDIATE:
        e = epsilon
        E = b * b + 1
        return np.array([
            [2 * a / (e * E), -2 * a * a * b / (e * E * E)],
            [2 * a * b / (e * E), 1 / e + a * a / (e * E) - 2 * a * a * b * b / (e * E * E)],
        ])
    if branch == DIFFUSIVE:
        x, y = a, b
        return np.array([
            [2 * x / y, -x * x / (y * y)],
            [-2 * x / y, 2 + x * x / (y * y)],
        ])
    if branch == BERNOULLI:
        x, y = a, b
        return np.array([
            [4 * x / y, -2 * x * x / (y * y)],
            [-8 * x / y, 2 + 4 * x * x / (y * y)],
        ])
    raise ValueError(f"unknown branch: {branch!r}")


def _fd_jacobian(F, v, h: float = 1e-6) -> NDArray[np.complex128]:
    """Central finite-difference Jacobian (real step; exact enough for the
    rational maps here, holomorphic in the complex branches)."""
    J = np.zeros((2, 2), dtype=np.complex128)
    for i in range(2):
        dv = np.zeros(2, dtype=np.complex128)
        dv[i] = h
        J[:, i] = (F(v + dv) - F(v - dv)) / (2 * h)
    return J


def _eigenvalues_2x2(J: NDArray[np.complex128]) -> tuple[complex, complex]:
    """Closed-form eigenvalues via trace and determinant, sorted by modulus
    (descending; ties broken by real then imaginary part)."""
    tr = J[0, 0] + J[1, 1]
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    disc = cmath.sqrt(tr * tr - 4 * det)
    lams = [(tr + disc) / 2, (tr - disc) / 2]
    lams.sort(key=lambda z: (-abs(z), -z.real, -z.imag))
    return complex(lams[0]), complex(lams[1])


_BRANCH_PHYSICAL = {
    CLASSICAL: lambda fp: fp[1].real >= 0,
    CLASSICAL_UNPHYSICAL: lambda fp: fp[1].real >= 0,
    QUANTUM: lambda fp: True,
    QUANTUM_INTERMEDIATE: lambda fp: False,
    DIFFUSIVE: lambda fp: True,
    BERNOULLI: lambda fp: True,
}


def _branch_dw(branch: str, eigenvalues: tuple[complex, complex]) -> float:
    lam1, lam2 = eigenvalues
    if branch == QUANTUM:
        return 0.5 * math.log2((lam1 * lam2).real)
    return math.log2(abs(lam1))


def find_fixed_point(
    branch: str,
    epsilon: float | None = None,
    guess=None,
    method: str = "newton",
    max_iter: int = 200,
    tol: float = 1e-12,
) -> FixedPointReport:
    """Locate a fixed point of the branch's autonomous map and report its
    Jacobian spectrum and implied walk dimension.

    Newton iterates v -> v - (J - I)^+ (F(v) - v) from the closed-form point
    perturbed by 5% (or a caller guess); least squares handles the line-shaped
    fixed-point sets of the diffusive and Bernoulli branches. The analytic
    Jacobian is always cross-checked against central finite differences.
    """
    if branch not in BRANCHES:
        raise ValueError(f"unknown branch: {branch!r}")
    if branch not in _EPSILON_FREE:
        epsilon = _check_epsilon(epsilon)
    F = _branch_map(branch, epsilon)
    cf = np.array(fixed_point_closed_form(branch, epsilon), dtype=np.complex128)

    if method == "closed-form":
        v = cf
    elif method == "newton":
        v = cf * 1.05 if guess is None else np.array(guess, dtype=np.complex128)
        eye = np.eye(2, dtype=np.complex128)
        for _ in range(max_iter):
            r = F(v) - v
            if np.abs(r).max() < tol:
                break
            J = _branch_jacobian(branch, v, epsilon)
            step, *_ = np.linalg.lstsq(J - eye, r, rcond=None)
            v = v - step
        else:
            raise RGConvergenceError(
                f"fixed-point iteration did not converge for {branch}; "
                f"last residual {np.abs(F(v) - v).max():.3e}")
    else:
        raise ValueError(f"unknown method: {method!r}")

    residual = float(np.abs(F(v) - v).max())
    if residual >= tol:
        raise RGConvergenceError(
            f"fixed-point residual {residual:.3e} exceeds {tol:.1e} for {branch}")
    J = _branch_jacobian(branch, v, epsilon)
    J_fd = _fd_jacobian(F, v)
    if np.abs(J - J_fd).max() > 1e-6:
        raise RGConvergenceError(
            f"analytic and finite-difference Jacobians disagree for {branch}")
    eigenvalues = _eigenvalues_2x2(J)
    fp = tuple(complex(c) for c in v)
    return FixedPointReport(
        branch=branch,
        epsilon=None if branch in _EPSILON_FREE else float(epsilon),
        fp=fp,
        jacobian=J,
        eigenvalues=eigenvalues,
        dw=_branch_dw(branch, eigenvalues),
        physical=_BRANCH_PHYSICAL[branch](fp),
        method=method,
        residual=residual,
    )


# ---------------------------------------------------------------------------
# exact transformed trajectories
# ---------------------------------------------------------------------------

def classical_trajectory_transformed(
    eta0: float,
    epsilon: float,
    steps: int,
    z: float = 1.0,
    dps: int | None = None,
) -> NDArray[np.float64]:
    """Exact non-autonomous trajectory from (a, m) = (z, 0), reported in the
    autonomous coordinates: rows (k, alpha_k, mu_k) for k = 0..steps.

    The transformed coordinates sit on the repelling side of the fixed point's
    spectrum, so double precision bottoms out near 1e-4; pass dps (mpmath
    decimal digits, e.g. 120) to follow the contraction below that.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")

    def run():
        if dps is None:
            a, m = float(z), 0.0
            eta0_v, eps_v = float(eta0), float(epsilon)
        else:
            a, m = mp.mpf(z), mp.mpf(0)
            eta0_v, eps_v = mp.mpf(eta0), mp.mpf(epsilon)
        rows = np.empty((steps + 1, 3), dtype=np.float64)
        for k in range(steps + 1):
            eta_k = eta0_v * eps_v**k
            alpha, mu = transform_classical(a, m, eta_k)
            rows[k] = (k, float(alpha), float(mu))
            if k < steps:
                a, m = scalar_classical_step(a, m, eta_k)
        return rows

    if dps is None:
        return run()
    with mp.workdps(int(dps)):
        return run()


def quantum_trajectory_transformed(
    eta0: float,
    epsilon: float,
    steps: int,
    z: float = 1.0,
    dps: int | None = None,
) -> NDArray[np.float64]:
    """Exact non-autonomous trajectory from the step-1 seed (z^2 sin eta0,
    z^2 cos eta0): rows (k, alpha_k, mu_k, nu_k) for k = 1..steps, with
    nu_k = mu_k / eta_k."""
    if steps < 1:
        raise ValueError("steps must be at least 1")

    def run():
        if dps is None:
            z2 = float(z) ** 2
            a, m = z2 * math.sin(eta0), z2 * math.cos(eta0)
            eta0_v, eps_v = float(eta0), float(epsilon)
        else:
            z2 = mp.mpf(z) ** 2
            a, m = z2 * mp.sin(mp.mpf(eta0)), z2 * mp.cos(mp.mpf(eta0))
            eta0_v, eps_v = mp.mpf(eta0), mp.mpf(epsilon)
        rows = np.empty((steps, 4), dtype=np.float64)
        for k in range(1, steps + 1):
            eta_k = eta0_v * eps_v**k
            alpha, mu = transform_quantum(a, m, eta_k)
            rows[k - 1] = (k, float(alpha), float(mu), float(mu / eta_k))
            if k < steps:
                a, m = scalar_quantum_step(a, m, eta_k)
        return rows

    if dps is None:
        return run()
    with mp.workdps(int(dps)):
        return run()
