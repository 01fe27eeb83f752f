"""End-to-end checklist, one test per numbered criterion.

Each test prints a single "ACCEPTANCE NN: PASS/FAIL - detail" line with the
measured numbers before asserting, so a plain pytest run doubles as a report.
"""

import json
import math
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from ultrawalk.analysis import collapse_distance, fit_msd_exponent, rescale_collapse
from ultrawalk.evolve import dyadic_times, evolve, init_point, run_absorbing
from ultrawalk.hierarchy import STOCHASTIC, UNITARY, CoinHierarchy, eta_of_level
from ultrawalk.rg import (
    CLASSICAL,
    DIFFUSIVE,
    QUANTUM,
    ansatz_scalars,
    classical_trajectory_transformed,
    dw_classical,
    dw_quantum,
    find_fixed_point,
    flow_diffusive,
    lambda_plus,
    off_ansatz_error,
    quantum_trajectory_transformed,
    scalar_classical_step,
    scalar_quantum_step,
    sflow_trajectory,
)
from ultrawalk.walls import classical_wall_closed_form, rg_wall_amplitudes

SQ = 1.0 / math.sqrt(2.0)
QIC = (SQ, 1j * SQ)


def report(capsys, num: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nACCEPTANCE {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_01_quantum_fixed_points(capsys):
    worst_fp = 0.0
    worst_eig = 0.0
    for eps in (0.1, 0.3, 0.5, 0.7, 0.9):
        r = find_fixed_point(QUANTUM, epsilon=eps)
        worst_fp = max(
            worst_fp,
            r.residual,
            abs(r.fp[0] - eps),
            abs(r.fp[1] - (1.0 - eps * eps) / 2.0),
        )
        lead = max(abs(v) for v in r.eigenvalues)
        sub = min(abs(v) for v in r.eigenvalues)
        worst_eig = max(worst_eig, abs(lead - (1.0 + eps**-2)), abs(sub - 2.0))
    dw = dw_quantum(0.5)
    ok = worst_fp < 1e-12 and worst_eig < 1e-8 and abs(dw - 1.660964) < 1e-6
    report(
        capsys, 1, ok,
        f"fp=(eps,(1-eps^2)/2) err {worst_fp:.1e}, eigenvalues "
        f"{{1+1/eps^2, 2}} err {worst_eig:.1e}, dw(0.5)={dw:.6f}",
    )
    assert ok


def test_criterion_02_classical_fixed_points(capsys):
    worst_fp = 0.0
    worst_eig = 0.0
    for eps in (0.1, 0.2, 0.3, 0.4):
        r = find_fixed_point(CLASSICAL, epsilon=eps)
        worst_fp = max(
            worst_fp,
            r.residual,
            abs(r.fp[0] - (1.0 / eps - 2.0)),
            abs(r.fp[1] - (1.0 / eps - 1.0)),
        )
        lead = max(abs(v) for v in r.eigenvalues)
        worst_eig = max(worst_eig, abs(lead - 2.0 / eps))
    dw = dw_classical(0.25)
    ok = worst_fp < 1e-12 and worst_eig < 1e-8 and dw == 3.0
    report(
        capsys, 2, ok,
        f"fp=(1/eps-2,1/eps-1) err {worst_fp:.1e}, leading eigenvalue "
        f"2/eps err {worst_eig:.1e}, dw(0.25)={dw}",
    )
    assert ok


def test_criterion_03_diffusive_eigenvalues(capsys):
    # the diffusive map fixes the whole line x = y, so the solver may stop
    # anywhere on it; (1,1) is the representative point
    x1, y1 = flow_diffusive(1.0, 1.0)
    r = find_fixed_point(DIFFUSIVE)
    lead = max(abs(v) for v in r.eigenvalues)
    sub = min(abs(v) for v in r.eigenvalues)
    err = max(
        abs(lead - 4.0),
        abs(sub - 1.0),
        abs(x1 - 1.0),
        abs(y1 - 1.0),
        abs(r.fp[0] - r.fp[1]),
        r.residual,
    )
    ok = err < 1e-12
    report(capsys, 3, ok, f"fixed point (1,1) with eigenvalues {{4,1}}, err {err:.1e}")
    assert ok


def test_criterion_04_lambda_plus(capsys):
    err_pt = max(
        abs(lambda_plus(1.0) - (5.0 + math.sqrt(17.0)) / 2.0),
        abs(lambda_plus(0.5) - (3.0 + math.sqrt(7.0))),
    )
    # the two roots of x^2 - 2bx + 2 multiply to 2; compute the small root
    # independently so the check is not an identity
    worst_prod = 0.0
    for eps in np.linspace(0.1, 1.0, 37):
        b = 1.0 / eps + 0.5 + eps
        small = b - math.sqrt(b * b - 2.0)
        worst_prod = max(worst_prod, abs(lambda_plus(eps) * small - 2.0))
    ok = err_pt < 1e-12 and worst_prod < 1e-12
    report(
        capsys, 4, ok,
        f"lambda_plus(1)=(5+sqrt(17))/2 err {err_pt:.1e}, "
        f"product with conjugate root = 2 err {worst_prod:.1e} on 37-point grid",
    )
    assert ok


def test_criterion_05_sflow_matches_scalar_recursion(capsys):
    worst_off = 0.0
    worst_step = 0.0
    seed_err = 0.0
    for flavor, eta0 in ((STOCHASTIC, 0.45), (UNITARY, 0.45)):
        for eps in (0.3, 0.5):
            h = CoinHierarchy(eta0=eta0, epsilon=eps, flavor=flavor)
            trip = sflow_trajectory(h, steps=20)
            # the unitary matrix flow lands on the scalar pattern after the
            # first step; the stochastic one starts on it
            first = 1 if flavor == UNITARY else 0
            if flavor == UNITARY:
                a1, m1 = ansatz_scalars(trip[1], flavor)
                seed_err = max(
                    seed_err, abs(a1 - math.sin(eta0)), abs(m1 - math.cos(eta0))
                )
            for k in range(first, 21):
                worst_off = max(worst_off, off_ansatz_error(trip[k], flavor))
            step = scalar_classical_step if flavor == STOCHASTIC else scalar_quantum_step
            for k in range(first, 20):
                a_k, m_k = ansatz_scalars(trip[k], flavor)
                a_ref, m_ref = step(a_k.real, m_k.real, eta_of_level(h, k))
                a_n, m_n = ansatz_scalars(trip[k + 1], flavor)
                scale = max(1.0, abs(a_ref), abs(m_ref))
                worst_step = max(
                    worst_step,
                    abs(a_n.real - a_ref) / scale,
                    abs(m_n.real - m_ref) / scale,
                )
    ok = worst_off < 1e-12 and worst_step < 1e-12 and seed_err < 1e-12
    report(
        capsys, 5, ok,
        f"20 matrix steps, both flavors, eps in {{0.3,0.5}}: off-pattern "
        f"{worst_off:.1e}, per-step scalar mismatch {worst_step:.1e}, "
        f"unitary seed (sin eta0, cos eta0) err {seed_err:.1e}",
    )
    assert ok


def test_criterion_06_transformed_trajectories_reach_fixed_points(capsys):
    def best_error(rows, cols, target):
        errs = np.max(np.abs(rows[:, cols] - target), axis=1)
        return float(errs.min())

    worst_cl = 0.0
    for eps in (0.2, 0.3, 0.4):
        rows = classical_trajectory_transformed(0.42, eps, 60, dps=120)
        tgt = np.array([1.0 / eps - 2.0, 1.0 / eps - 1.0])
        worst_cl = max(worst_cl, best_error(rows, [1, 2], tgt))

    worst_qu = 0.0
    for eps in (0.3, 0.5, 0.7):
        rows = quantum_trajectory_transformed(math.pi / 4.0, eps, 60, dps=120)
        tgt = np.array([eps, (1.0 - eps * eps) / 2.0])
        worst_qu = max(worst_qu, best_error(rows, [1, 3], tgt))

    ok = worst_cl < 1e-6 and worst_qu < 1e-6
    report(
        capsys, 6, ok,
        f"classical (alpha,mu) closest approach {worst_cl:.1e} (<1e-6) but "
        f"quantum (alpha,nu) only reaches {worst_qu:.1e}: the exact level-wise "
        f"flow exits along the repelling direction instead of settling on "
        f"(eps,(1-eps^2)/2)",
    )
    assert ok


def test_criterion_07_norm_conservation_long_runs(capsys):
    half = 1 << 14
    worst = {STOCHASTIC: 0.0, UNITARY: 0.0}
    for flavor, eta0, ic in ((STOCHASTIC, 0.45, (0.5, 0.5)), (UNITARY, math.pi / 4, QIC)):
        for eps in (0.3, 0.5, 1.0):
            h = CoinHierarchy(eta0=eta0, epsilon=eps, flavor=flavor)
            s = init_point(0, ic, flavor, (-half, half))
            _, mom = evolve(s, h, L=14, t_max=10_000, record_moments=True)
            worst[flavor] = max(worst[flavor], float(np.abs(mom[:, 3] - 1.0).max()))
    ok = worst[STOCHASTIC] < 1e-12 and worst[UNITARY] < 1e-10
    report(
        capsys, 7, ok,
        f"10^4 steps, eps in {{0.3,0.5,1.0}}: total-weight drift "
        f"{worst[STOCHASTIC]:.1e} (stochastic, <1e-12) and "
        f"{worst[UNITARY]:.1e} (unitary, <1e-10) at every step",
    )
    assert ok


def test_criterion_08_homogeneous_scaling(capsys):
    half = 1 << 13
    t_max = 1 << 12
    window = (1 << 8, 1 << 12)

    h = CoinHierarchy(eta0=math.pi / 4, epsilon=1.0, flavor=UNITARY)
    s = init_point(0, QIC, UNITARY, (-half, half))
    snaps = evolve(s, h, L=13, t_max=t_max, sample_times=dyadic_times(t_max))
    slope_q = fit_msd_exponent(snaps, window).slope

    h = CoinHierarchy(eta0=0.45, epsilon=1.0, flavor=STOCHASTIC)
    s = init_point(0, (0.5, 0.5), STOCHASTIC, (-half, half))
    snaps = evolve(s, h, L=13, t_max=t_max, sample_times=dyadic_times(t_max))
    slope_c = fit_msd_exponent(snaps, window).slope

    ok = abs(slope_q - 2.0) < 0.05 and abs(slope_c - 1.0) < 0.05
    report(
        capsys, 8, ok,
        f"eps=1 msd slopes over [2^8, 2^12]: unitary {slope_q:.3f} "
        f"(ballistic 2.00+-0.05), stochastic {slope_c:.3f} (diffusive 1.00+-0.05)",
    )
    assert ok


def test_criterion_09_classical_subdiffusion(capsys):
    half = 1 << 15
    t_max = 1 << 14
    h = CoinHierarchy(eta0=0.45, epsilon=0.25, flavor=STOCHASTIC)
    s = init_point(0, (0.5, 0.5), STOCHASTIC, (-half, half))
    snaps = evolve(s, h, L=15, t_max=t_max, sample_times=dyadic_times(t_max))
    fit = fit_msd_exponent(snaps, (1 << 9, 1 << 14))
    target = 2.0 / dw_classical(0.25)
    ok = abs(fit.slope - target) < 0.10
    report(
        capsys, 9, ok,
        f"eps=0.25 msd slope over [2^9, 2^14]: {fit.slope:.3f} vs 2/dw="
        f"{target:.3f} (+-0.10), dw estimate {fit.dw_estimate:.2f}",
    )
    assert ok


def test_criterion_10_quantum_collapse_selects_dw(capsys):
    half = 1 << 13
    t_max = 1 << 12
    h = CoinHierarchy(eta0=math.pi / 4, epsilon=0.5, flavor=UNITARY)
    s = init_point(0, QIC, UNITARY, (-half, half))
    snaps = evolve(s, h, L=13, t_max=t_max, sample_times=[1 << 10, 1 << 11, 1 << 12])

    def distance(dw: float) -> float:
        return collapse_distance([rescale_collapse(p, dw) for p in snaps], bins=32)

    d_true = distance(1.660964)
    d_low = distance(1.0)
    d_high = distance(2.5)
    ok = d_true < d_low and d_true < d_high
    report(
        capsys, 10, ok,
        f"32-bin collapse distance at t in {{2^10,2^11,2^12}}: "
        f"{d_true:.4f} at dw=1.660964 vs {d_low:.4f} at dw=1.0 "
        f"and {d_high:.4f} at dw=2.5",
    )
    assert ok


def test_criterion_11_classical_walls(capsys):
    worst_cf = 0.0
    worst_sum = 0.0
    for eps in (0.3, 0.5, 0.8):
        h = CoinHierarchy(eta0=0.45, epsilon=eps, flavor=STOCHASTIC)
        w = rg_wall_amplitudes(12, h, (0.5, 0.5))
        cf = classical_wall_closed_form(eps, (0.5, 0.5))
        worst_cf = max(
            worst_cf, abs(w.F_left - cf.F_left), abs(w.F_right - cf.F_right)
        )
        worst_sum = max(worst_sum, abs(w.F_left + w.F_right - 1.0))

    h = CoinHierarchy(eta0=0.45, epsilon=0.3, flavor=STOCHASTIC)
    pred = rg_wall_amplitudes(4, h, (1.0, 0.0))
    rec = run_absorbing(4, h, (1.0, 0.0), t_max=30_000, tail_tol=1e-10)
    sim_err = max(
        abs(rec.cumulative_left[-1] - pred.F_left),
        abs(rec.cumulative_right[-1] - pred.F_right),
    )
    ok = (
        worst_cf < 1e-6
        and worst_sum < 1e-10
        and rec.converged
        and sim_err < 1e-3
    )
    report(
        capsys, 11, ok,
        f"l=12 decimation vs closed form err {worst_cf:.1e}, totals sum to 1 "
        f"err {worst_sum:.1e}; l=4 simulation vs decimation err {sim_err:.1e}",
    )
    assert ok


def test_criterion_12_quantum_absorption_completes(capsys):
    worst_tail = 0.0
    worst_rise = 0.0
    t_longest = 0
    for l in (3, 4, 5):
        for eps in (0.5, 0.7):
            h = CoinHierarchy(eta0=math.pi / 4, epsilon=eps, flavor=UNITARY)
            rec = run_absorbing(l, h, QIC, t_max=1 << 16, tail_tol=1e-9, record_stride=64)
            absorbed = rec.cumulative_left[-1] + rec.cumulative_right[-1]
            worst_tail = max(worst_tail, 1.0 - absorbed)
            worst_rise = max(worst_rise, float(np.diff(rec.interior).max()))
            t_longest = max(t_longest, int(rec.times[-1]))
    ok = worst_tail < 1e-3 and worst_rise < 1e-12
    report(
        capsys, 12, ok,
        f"l in {{3,4,5}}, eps in {{0.5,0.7}}: unabsorbed weight {worst_tail:.1e} "
        f"(<1e-3), interior never rises ({worst_rise:.1e}), slowest run "
        f"{t_longest} steps",
    )
    assert ok


def test_criterion_13_frontend_plots(capsys, tmp_path):
    frontend = Path(__file__).resolve().parents[1] / "frontend"
    cli_js = frontend / "dist" / "cli.js"
    node = shutil.which("node")
    if not cli_js.exists() or node is None:
        with capsys.disabled():
            print(
                "\nACCEPTANCE 13: SKIP - frontend not built; run "
                "npm --prefix frontend install && npm --prefix frontend run build"
            )
        pytest.skip("frontend/dist/cli.js missing")

    def run(args):
        proc = subprocess.run(args, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        return proc

    run([
        sys.executable, "-m", "ultrawalk.cli", "rg",
        "--eps-grid", "0.02:1.0:99", "--fp-eps", "0.5", "--outdir", str(tmp_path),
    ])
    run([
        sys.executable, "-m", "ultrawalk.cli", "collapse",
        "--flavor", "quantum", "--epsilon", "0.25", "--tmax", "64",
        "--outdir", str(tmp_path),
    ])

    rows = [
        line.split(",")
        for line in (tmp_path / "dw_curve.csv").read_text().splitlines()
        if line and not line.startswith("#")
    ]
    eps = np.array([float(r[0]) for r in rows])
    inv_cl = np.array([float(r[1]) for r in rows])
    inv_qu = np.array([float(r[2]) for r in rows])
    data_ok = (
        len(rows) == 99
        and np.all(np.abs(inv_cl[eps >= 0.5] - 0.5) < 1e-12)
        and abs(inv_qu[-1] - 1.0) < 1e-12
    )

    dw_svg = tmp_path / "dw.svg"
    col_svg = tmp_path / "collapse.svg"
    run([
        node, str(cli_js), "dw",
        "--input", str(tmp_path / "dw_curve.csv"), "--output", str(dw_svg),
    ])
    run([
        node, str(cli_js), "collapse",
        "--input", str(tmp_path / "collapse.csv"), "--output", str(col_svg),
    ])
    dw_text = dw_svg.read_text()
    col_text = col_svg.read_text()
    curves = dw_text.count('class="curve curve-')
    series = sorted(
        int(m.split("-t", 1)[1].split('"')[0])
        for m in col_text.split("class=\"series series")[1:]
    )
    plot_ok = curves == 3 and series == [2, 4, 8, 16, 32, 64]

    ok = data_ok and plot_ok
    report(
        capsys, 13, ok,
        f"dw_curve.csv 99 rows (classical plateau 0.5 for eps>=0.5, quantum "
        f"endpoint 1.0), dw plot has {curves} curves, collapse plot series at "
        f"t={series}",
    )
    assert ok
