"""First-passage weights between two absorbing walls, three ways.

For the classical walk the wall totals come out of (1) the closed-form
epsilon limit, (2) exact decimation of the finite geometry, and (3) direct
simulation; all three agree. For the quantum walk only the simulation is
probabilistic, and the demo shows the absorbed weight approaching one.
"""

import math

from ultrawalk.evolve import run_absorbing
from ultrawalk.hierarchy import STOCHASTIC, UNITARY, CoinHierarchy
from ultrawalk.walls import classical_wall_closed_form, rg_wall_amplitudes

SQ = 1.0 / math.sqrt(2.0)


def classical_three_ways(epsilon: float, l: int) -> None:
    h = CoinHierarchy(eta0=0.45, epsilon=epsilon, flavor=STOCHASTIC)
    ic = (1.0, 0.0)
    closed = classical_wall_closed_form(epsilon, ic)
    decimated = rg_wall_amplitudes(l, h, ic)
    rec = run_absorbing(l, h, ic, t_max=50_000, tail_tol=1e-10)
    print(f"classical, epsilon = {epsilon}, walls at 0 and 2^{l}, start right-mover")
    print(f"  {'method':<22} {'F_left':>10} {'F_right':>10}")
    print(f"  {'closed form (l->inf)':<22} {closed.F_left:>10.6f} {closed.F_right:>10.6f}")
    print(f"  {'decimation':<22} {decimated.F_left:>10.6f} {decimated.F_right:>10.6f}")
    print(
        f"  {'simulation':<22} {rec.cumulative_left[-1]:>10.6f} "
        f"{rec.cumulative_right[-1]:>10.6f}   (t = {rec.times[-1]}, "
        f"converged = {rec.converged})"
    )
    print()


def quantum_absorption(epsilon: float, l: int) -> None:
    h = CoinHierarchy(eta0=math.pi / 4, epsilon=epsilon, flavor=UNITARY)
    rec = run_absorbing(l, h, (SQ, 1j * SQ), t_max=1 << 14, tail_tol=1e-9,
                        record_stride=64)
    print(f"quantum, epsilon = {epsilon}, walls at 0 and 2^{l}")
    print(f"  {'t':>7} {'absorbed':>10} {'interior':>10}")
    marks = [8, 32, 128, 512, 2048, rec.times[-1]]
    for t, cl, cr, w in zip(
        rec.times, rec.cumulative_left, rec.cumulative_right, rec.interior
    ):
        if t in marks:
            print(f"  {t:>7d} {cl + cr:>10.6f} {w:>10.2e}")
    total = rec.cumulative_left[-1] + rec.cumulative_right[-1]
    print(f"  absorbed weight {total:.6f} after {rec.times[-1]} steps")
    print()


def main() -> None:
    classical_three_ways(0.3, 4)
    classical_three_ways(0.5, 4)
    quantum_absorption(0.5, 3)


if __name__ == "__main__":
    main()
