"""Command-line artifact generator.

Runs simulations, RG analyses, absorption experiments, and sweeps, writing
deterministic CSV/JSON files. Every artifact starts with `#` header lines
recording the tool version and the full run config (JSON consumers strip
leading `#` lines before parsing). Floats are printed with 17 significant
digits so doubles round-trip exactly; identical configs produce
byte-identical files.

Exit codes: 0 success, 1 config error, 2 numeric or lattice failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .analysis import rescale_collapse
from .evolve import (
    LatticeOverflowError,
    dyadic_times,
    evolve,
    init_point,
    linear_times,
    run_absorbing,
)
from .hierarchy import STOCHASTIC, UNITARY, CoinHierarchy
from .rg import (
    BERNOULLI,
    BRANCHES,
    DIFFUSIVE,
    RGConvergenceError,
    RGSingularError,
    dw_classical,
    dw_lambda_plus,
    dw_quantum,
    find_fixed_point,
)
from .walls import classical_wall_closed_form, rg_wall_amplitudes

_FLAVORS = {"classical": STOCHASTIC, "quantum": UNITARY}
_DEFAULT_ETA0 = {STOCHASTIC: 0.45, UNITARY: math.pi / 4}
_DEFAULT_EPS_GRID = "0.01:0.99:99"
_DEFAULT_FP_EPS = "0.1,0.25,0.5,0.75,0.9"


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; our contract maps all
    config errors to 1 and keeps 2 for numeric failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _g(x) -> str:
    return format(float(x), ".17g")


def _config_string(cfg: dict) -> str:
    parts = []
    for key in sorted(cfg):
        val = cfg[key]
        if isinstance(val, bool):
            text = "true" if val else "false"
        elif isinstance(val, float):
            text = _g(val)
        else:
            text = str(val)
        parts.append(f"{key}={text}")
    return " ".join(parts)


def _header_lines(cfg: dict, columns: list[str] | None) -> list[str]:
    lines = [
        f"# ultrawalk v{__version__}",
        f"# config: {_config_string(cfg)}",
    ]
    if columns is not None:
        lines.append("# columns: " + ",".join(columns))
    return lines


def _write_csv(path: str, cfg: dict, columns: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in _header_lines(cfg, columns):
            fh.write(line + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _write_json(path: str, cfg: dict, payload: dict) -> None:
    body = dict(payload)
    body["artifact_version"] = __version__
    with open(path, "w", newline="\n") as fh:
        for line in _header_lines(cfg, None):
            fh.write(line + "\n")
        fh.write(json.dumps(body, indent=2, sort_keys=True))
        fh.write("\n")


def _parse_ic(text: str | None, flavor: str) -> np.ndarray:
    if text is None:
        if flavor == STOCHASTIC:
            return np.array([0.5, 0.5], dtype=np.complex128)
        r = 1.0 / math.sqrt(2.0)
        return np.array([r, 1j * r], dtype=np.complex128)
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValueError(f"ic must be comma-separated numbers, got {text!r}")
    if len(values) == 2:
        return np.array(values, dtype=np.complex128)
    if len(values) == 4:
        return np.array(
            [values[0] + 1j * values[1], values[2] + 1j * values[3]],
            dtype=np.complex128,
        )
    raise ValueError("ic needs 2 numbers (real pair) or 4 (re,im,re,im)")


def _ic_config(ic: np.ndarray) -> str:
    return ",".join(_g(v) for v in (ic[0].real, ic[0].imag, ic[1].real, ic[1].imag))


def _parse_schedule(text: str, t_max: int) -> list[int]:
    if text == "dyadic":
        return dyadic_times(t_max)
    if text.startswith("linear:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad linear schedule {text!r}")
        return linear_times(t_max, n)
    raise ValueError(f"unknown sample schedule {text!r} (use dyadic or linear:<n>)")


def _thread_count() -> int:
    raw = os.environ.get("ULTRAWALK_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"ULTRAWALK_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise ValueError("ULTRAWALK_THREADS must be >= 1")
    return n


def _resolve_run(ns) -> tuple[CoinHierarchy, np.ndarray, dict]:
    flavor = _FLAVORS[ns.flavor]
    eta0 = ns.eta0 if ns.eta0 is not None else _DEFAULT_ETA0[flavor]
    h = CoinHierarchy(eta0=eta0, epsilon=ns.epsilon, flavor=flavor)
    ic = _parse_ic(ns.ic, flavor)
    cfg = {
        "subcommand": ns.subcommand,
        "flavor": ns.flavor,
        "eta0": float(eta0),
        "epsilon": float(ns.epsilon),
        "ic": _ic_config(ic),
    }
    return h, ic, cfg


def _default_lattice_exponent(t_max: int) -> int:
    return max(1, math.ceil(math.log2(max(2, t_max)))) + 1


def cmd_simulate(ns) -> None:
    h, ic, cfg = _resolve_run(ns)
    if ns.tmax < 1:
        raise ValueError("tmax must be >= 1")
    L = ns.L if ns.L is not None else _default_lattice_exponent(ns.tmax)
    samples = _parse_schedule(ns.sample, ns.tmax)
    cfg.update(tmax=ns.tmax, sample=ns.sample, x0=ns.x0, lattice_exponent=L)
    state = init_point(ns.x0, ic, h.flavor, (-(1 << L), 1 << L))
    snapshots, moments = evolve(
        state, h, L, ns.tmax, sample_times=samples, record_moments=True
    )
    os.makedirs(ns.outdir, exist_ok=True)
    pdf_cols = ["x", "rho", "re_psi_plus", "im_psi_plus", "re_psi_minus", "im_psi_minus"]
    for snap in snapshots:
        rows = (
            [
                str(int(x)),
                _g(r),
                _g(pp.real),
                _g(pp.imag),
                _g(pm.real),
                _g(pm.imag),
            ]
            for x, r, pp, pm in zip(snap.xs, snap.rho, snap.psi_plus, snap.psi_minus)
        )
        _write_csv(os.path.join(ns.outdir, f"pdf_{snap.t}.csv"), cfg, pdf_cols, rows)
    _write_csv(
        os.path.join(ns.outdir, "moments.csv"),
        cfg,
        ["t", "mean", "msd", "norm"],
        ([str(int(t)), _g(mean), _g(msd), _g(norm)] for t, mean, msd, norm in moments),
    )


def _parse_grid(text: str) -> np.ndarray:
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise ValueError(f"eps-grid must be start:stop:count, got {text!r}")
    if count < 1:
        raise ValueError("eps-grid count must be >= 1")
    if not (0.0 < start <= stop <= 1.0):
        raise ValueError("eps-grid must satisfy 0 < start <= stop <= 1")
    return np.linspace(start, stop, count)


def _fp_entry(branch: str, epsilon: float | None) -> dict:
    base = {"branch": branch, "epsilon": epsilon}
    try:
        rep = find_fixed_point(branch, epsilon)
    except (RGSingularError, RGConvergenceError, ValueError) as exc:
        base["error"] = str(exc)
        return base
    base.update(
        fp=[[float(np.real(v)), float(np.imag(v))] for v in rep.fp],
        eigenvalues=[[float(np.real(v)), float(np.imag(v))] for v in rep.eigenvalues],
        dw=float(rep.dw),
        physical=bool(rep.physical),
        method=rep.method,
        residual=float(rep.residual),
    )
    return base


def cmd_rg(ns) -> None:
    grid = _parse_grid(ns.eps_grid)
    try:
        fp_eps = [float(v) for v in ns.fp_eps.split(",") if v]
    except ValueError:
        raise ValueError(f"fp-eps must be comma-separated numbers, got {ns.fp_eps!r}")
    cfg = {"subcommand": "rg", "eps_grid": ns.eps_grid, "fp_eps": ns.fp_eps}
    os.makedirs(ns.outdir, exist_ok=True)

    rows = (
        [_g(e), _g(1.0 / dw_classical(e)), _g(1.0 / dw_quantum(e)), _g(1.0 / dw_lambda_plus(e))]
        for e in grid
    )
    _write_csv(
        os.path.join(ns.outdir, "dw_curve.csv"),
        cfg,
        ["epsilon", "inv_dw_classical", "inv_dw_quantum", "inv_dw_lambda_plus"],
        rows,
    )

    eps_branches = [b for b in BRANCHES if b not in (DIFFUSIVE, BERNOULLI)]

    def solve_one(eps: float) -> list[dict]:
        return [_fp_entry(branch, eps) for branch in eps_branches]

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        per_eps = list(pool.map(solve_one, fp_eps))
    entries = [entry for group in per_eps for entry in group]
    entries.extend(_fp_entry(branch, None) for branch in (DIFFUSIVE, BERNOULLI))
    _write_json(
        os.path.join(ns.outdir, "fixed_points.json"),
        cfg,
        {"artifact": "fixed_points", "config": _config_string(cfg), "entries": entries},
    )


def cmd_absorb(ns) -> None:
    h, ic, cfg = _resolve_run(ns)
    if ns.l < 2:
        raise ValueError("l must be >= 2")
    if ns.tmax < 1:
        raise ValueError("tmax must be >= 1")
    stride = ns.stride if ns.stride is not None else max(1, ns.tmax // 4096)
    cfg.update(l=ns.l, tmax=ns.tmax, tail_tol=float(ns.tail_tol), stride=stride)
    record = run_absorbing(ns.l, h, ic, ns.tmax, tail_tol=ns.tail_tol, record_stride=stride)
    prediction = rg_wall_amplitudes(ns.l, h, ic)
    os.makedirs(ns.outdir, exist_ok=True)
    _write_csv(
        os.path.join(ns.outdir, "absorption.csv"),
        cfg,
        ["t", "cum_left", "cum_right", "interior"],
        (
            [str(int(t)), _g(cl), _g(cr), _g(w)]
            for t, cl, cr, w in zip(
                record.times,
                record.cumulative_left,
                record.cumulative_right,
                record.interior,
            )
        ),
    )
    summary = {
        "artifact": "wall_summary",
        "config": _config_string(cfg),
        "rg_prediction": {
            "F_left": prediction.F_left,
            "F_right": prediction.F_right,
            "l": prediction.l,
            "probabilistic": prediction.probabilistic,
        },
        "simulated": {
            "cum_left": float(record.cumulative_left[-1]),
            "cum_right": float(record.cumulative_right[-1]),
            "interior": float(record.interior[-1]),
            "t_final": int(record.times[-1]),
            "converged": record.converged,
        },
    }
    if h.flavor == STOCHASTIC:
        closed = classical_wall_closed_form(ns.epsilon, ic.real)
        summary["closed_form"] = {
            "F_left": closed.F_left,
            "F_right": closed.F_right,
        }
    _write_json(os.path.join(ns.outdir, "wall_summary.json"), cfg, summary)


def cmd_collapse(ns) -> None:
    h, ic, cfg = _resolve_run(ns)
    if ns.tmax < 1:
        raise ValueError("tmax must be >= 1")
    if ns.dw is not None:
        dw = float(ns.dw)
        if dw <= 0:
            raise ValueError("dw must be positive")
    elif h.flavor == STOCHASTIC:
        dw = dw_classical(ns.epsilon)
    else:
        dw = dw_quantum(ns.epsilon)
    L = ns.L if ns.L is not None else _default_lattice_exponent(ns.tmax)
    samples = _parse_schedule(ns.sample, ns.tmax)
    cfg.update(
        tmax=ns.tmax, sample=ns.sample, x0=ns.x0, lattice_exponent=L,
        dw=dw, half=bool(ns.half),
    )
    state = init_point(ns.x0, ic, h.flavor, (-(1 << L), 1 << L))
    snapshots = evolve(state, h, L, ns.tmax, sample_times=samples)
    os.makedirs(ns.outdir, exist_ok=True)

    def rows():
        for snap in snapshots:
            series = rescale_collapse(snap, dw, x0=ns.x0)
            for u, g in zip(series.u, series.g):
                if ns.half and u < 0.0:
                    continue
                yield [str(series.t), _g(u), _g(g)]

    _write_csv(os.path.join(ns.outdir, "collapse.csv"), cfg, ["t", "u", "g"], rows())


def _add_run_arguments(sub, epsilon_required: bool = True) -> None:
    sub.add_argument("--flavor", choices=sorted(_FLAVORS), default="classical")
    sub.add_argument("--epsilon", type=float, required=epsilon_required,
                     help="barrier hierarchy ratio in (0, 1]")
    sub.add_argument("--eta0", type=float, default=None,
                     help="base coin parameter (default 0.45 classical, pi/4 quantum)")
    sub.add_argument("--ic", default=None,
                     help="start amplitudes: re,re or re,im,re,im "
                          "(default 0.5,0.5 classical; (1,i)/sqrt(2) quantum)")
    sub.add_argument("--outdir", default=".")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ultrawalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ultrawalk {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sim = subs.add_parser("simulate", help="evolve a walk and write pdf/moment files")
    _add_run_arguments(sim)
    sim.add_argument("--tmax", type=int, required=True)
    sim.add_argument("--sample", default="dyadic", help="dyadic or linear:<n>")
    sim.add_argument("--x0", type=int, default=0)
    sim.add_argument("--L", type=int, default=None, help=argparse.SUPPRESS)
    sim.set_defaults(func=cmd_simulate)

    rg = subs.add_parser("rg", help="write fixed-point and walk-dimension artifacts")
    rg.add_argument("--eps-grid", default=_DEFAULT_EPS_GRID, help="start:stop:count")
    rg.add_argument("--fp-eps", default=_DEFAULT_FP_EPS,
                    help="comma list of epsilon values for fixed-point reports")
    rg.add_argument("--outdir", default=".")
    rg.set_defaults(func=cmd_rg)

    absorb = subs.add_parser("absorb", help="two-wall absorption run plus RG prediction")
    _add_run_arguments(absorb)
    absorb.add_argument("--l", type=int, required=True,
                        help="walls at 0 and 2^l, start at 2^(l-1)")
    absorb.add_argument("--tmax", type=int, default=1 << 17)
    absorb.add_argument("--tail-tol", type=float, default=1e-9)
    absorb.add_argument("--stride", type=int, default=None,
                        help="record every stride-th step (default tmax/4096)")
    absorb.set_defaults(func=cmd_absorb)

    col = subs.add_parser("collapse", help="write rescaled densities at sampled times")
    _add_run_arguments(col)
    col.add_argument("--tmax", type=int, required=True)
    col.add_argument("--sample", default="dyadic", help="dyadic or linear:<n>")
    col.add_argument("--x0", type=int, default=0)
    col.add_argument("--dw", type=float, default=None,
                     help="override the walk dimension used for rescaling")
    col.add_argument("--half", action="store_true", help="keep only u >= 0 rows")
    col.add_argument("--L", type=int, default=None, help=argparse.SUPPRESS)
    col.set_defaults(func=cmd_collapse)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        ns.func(ns)
    except (LatticeOverflowError, RGSingularError, RGConvergenceError) as exc:
        print(f"ultrawalk: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"ultrawalk: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
