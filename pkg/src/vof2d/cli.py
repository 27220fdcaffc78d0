"""Command-line front end: single runs, mesh/CFL sweeps and method tests.

Subcommands: run, sweep, cfl-study, translate-test, vortex-test.  Every
run directory is self-contained: resolved config, time-series CSV, audit
log, final field and PLIC dumps, and rendered figures next to each CSV.

Exit codes: 0 success, 1 config error, 2 numerical failure, 3 acceptance
regression (with --check).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import advection, diagnostics, report
from .config import DOMAIN, CaseConfig, load_config, save_config
from .errors import (ConfigError, DegenerateGradientError, DiagnosticsError,
                     InvalidArgumentError, TimeStepError)
from .grid import apply_ghost_bc, build_grid, init_volume_fractions
from .reconstruction import reconstruct
from .reference import (exact_contactline_linear, exact_theta_linear,
                        exact_time_dependent, ode_reference)

NUMERICAL_ERRORS = (TimeStepError, DegenerateGradientError, DiagnosticsError,
                    InvalidArgumentError, FloatingPointError)


# ---------------------------------------------------------------------------
# Case orchestration
# ---------------------------------------------------------------------------


def compute_dt(config: CaseConfig, dx: float, vfield) -> tuple[float, int]:
    """Time step from the fixed Courant number, landing exactly on t_end.

    The sup of |v| is evaluated analytically per variant; the step count
    is rounded up so an integer number of steps reaches t_end, which only
    lowers the effective Courant number.
    """
    if config.t_end <= 0.0:
        return 0.0, 0
    vmax = vfield.sup_norm(*DOMAIN)
    if vmax <= 0.0:
        return config.t_end, 1
    dt0 = config.cfl * dx / vmax
    nsteps = max(1, int(math.ceil(config.t_end / dt0 - 1e-12)))
    return config.t_end / nsteps, nsteps


def initial_contact(config: CaseConfig) -> tuple[float, float]:
    """(abscissa, angle) where the initial cap meets the wall, for one side."""
    cx, cy = config.cap_center
    if abs(cy) >= config.r0:
        raise ConfigError("cap does not intersect the wall: |center_y| >= r0")
    half = math.sqrt(config.r0**2 - cy**2)
    x0 = cx - half if config.side == "left" else cx + half
    theta0 = math.acos(-cy / config.r0)
    return x0, theta0


def make_reference(config: CaseConfig, dt_sim: float):
    """Callable t -> (x_ref, theta_ref) for the configured velocity field."""
    x0, theta0 = initial_contact(config)
    if config.t_end <= 0.0 or config.variant == "linear":
        if config.variant == "linear" and config.t_end > 0.0:
            def ref(t):
                return (exact_contactline_linear(t, x0, config.v0, config.c1),
                        exact_theta_linear(t, theta0, config.c1, config.c2, config.side))
            return ref
        return lambda t: (np.full_like(np.asarray(t, dtype=float), x0),
                          np.full_like(np.asarray(t, dtype=float), theta0))
    if config.variant == "time_linear":
        def ref(t):
            return exact_time_dependent(t, x0, theta0, config.v0, config.c1,
                                        config.c2, config.tau, config.side)
        return ref
    dt_ode = min(1e-3, dt_sim / 4.0) if dt_sim > 0.0 else 1e-3
    traj = ode_reference(config.make_field(), x0, theta0, config.side,
                         config.t_end, dt_ode)
    return traj.interp


@dataclass
class CaseResult:
    config: CaseConfig
    samples: list
    ref: object
    e_theta_deg: float
    e_cl: float
    e1: float | None
    volume_drift: float
    dt: float
    nsteps: int
    irregular_count: int
    out_dir: str | None = None
    audits: list = field(default_factory=list)


def run_case(config: CaseConfig, out_dir: str | None = None,
             write_outputs: bool = True) -> CaseResult:
    """Run one advection case and assemble its artifacts."""
    config.validate()
    grid = build_grid(config)
    vfield = config.make_field()
    alpha0 = init_volume_fractions(grid, config.cap_center, config.r0)
    dt, nsteps = compute_dt(config, grid.dx1, vfield)
    ref = make_reference(config, dt)

    state = advection.SimulationState(alpha=alpha0.copy(), grid=grid,
                                      method=config.method, beta=config.beta)
    samples = []
    for step in range(nsteps):
        t = step * dt
        plic = advection.advance_timestep(state, vfield, t, dt, step)
        if step % config.sample_stride == 0:
            samples.append(diagnostics.extract_contact_state(plic, grid, config.side, t=t))
    apply_ghost_bc(state.alpha, grid)
    plic_final = reconstruct(state.alpha, grid, method=config.method, prev=state.prev_plic)
    samples.append(diagnostics.extract_contact_state(plic_final, grid, config.side,
                                                     t=nsteps * dt))

    e_theta, e_cl = diagnostics.error_norms(samples, ref, config.r0,
                                            window=(0.0, config.t_end + 1e-12))
    area0 = alpha0.total_fluid_area()
    drift = abs(state.alpha.total_fluid_area() - area0) / area0 if area0 > 0 else 0.0
    e1 = diagnostics.l1_error(state.alpha, alpha0, grid) if config.variant == "vortex" else None
    irregular = sum(1 for s in samples if not s.regular)

    result = CaseResult(config=config, samples=samples, ref=ref,
                        e_theta_deg=e_theta, e_cl=e_cl, e1=e1,
                        volume_drift=drift, dt=dt, nsteps=nsteps,
                        irregular_count=irregular, out_dir=out_dir,
                        audits=state.audits)
    if write_outputs and out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        save_config(config, os.path.join(out_dir, "case.resolved.ini"))
        diagnostics.write_timeseries_csv(os.path.join(out_dir, "timeseries.csv"),
                                         samples, ref)
        _write_reference_csv(os.path.join(out_dir, "reference.csv"), samples, ref)
        advection.write_audit_log(state.audits, os.path.join(out_dir, "audit.log"))
        state.alpha.dump_text(os.path.join(out_dir, "field_final.txt"))
        plic_final.dump_text(os.path.join(out_dir, "plic_final.txt"))
        report.render_timeseries(os.path.join(out_dir, "timeseries.png"), samples, ref,
                                 f"{config.variant}, N={config.n}, {config.method}")
    return result


def _write_reference_csv(path, samples, ref) -> None:
    ts = np.array([s.t for s in samples])
    x_ref, th_ref = ref(ts)
    x_ref = np.broadcast_to(np.asarray(x_ref, dtype=float), ts.shape)
    th_ref = np.broadcast_to(np.asarray(th_ref, dtype=float), ts.shape)
    with open(path, "w") as f:
        f.write("t,x_cl,theta_deg\n")
        for t, x, th in zip(ts, x_ref, th_ref):
            f.write(f"{t:.17g},{x:.17g},{math.degrees(th):.17g}\n")


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def run_sweep(config: CaseConfig, n_list, out_dir: str | None = None,
              write_outputs: bool = True) -> diagnostics.ErrorReport:
    """Mesh refinement sweep; failures are recorded per row, not raised."""
    if len(n_list) < 2:
        raise ConfigError("a sweep needs at least two mesh sizes")
    e_theta, e_cl, e1, dxr = [], [], [], []
    for n in n_list:
        case_cfg = config.with_updates(n=int(n))
        sub = os.path.join(out_dir, f"n{int(n):04d}") if out_dir else None
        try:
            res = run_case(case_cfg, out_dir=sub, write_outputs=write_outputs)
            e_theta.append(res.e_theta_deg)
            e_cl.append(res.e_cl)
            e1.append(res.e1 if res.e1 is not None else math.nan)
        except NUMERICAL_ERRORS as exc:
            sys.stderr.write(f"sweep case N={n} failed: {exc}\n")
            e_theta.append(math.nan)
            e_cl.append(math.nan)
            e1.append(math.nan)
        dxr.append((1.0 / int(n)) / config.r0)

    def fit(errors):
        pairs = [(d, e) for d, e in zip(dxr, errors) if np.isfinite(e) and e > 0]
        try:
            return diagnostics.convergence_order(pairs)
        except DiagnosticsError:
            return math.nan

    rep = diagnostics.ErrorReport(n_values=list(n_list), dx_over_r0=dxr,
                                  e_theta_deg=e_theta, e_cl=e_cl, e1=e1,
                                  order_theta=fit(e_theta), order_cl=fit(e_cl))
    if write_outputs and out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        diagnostics.write_summary_csv(os.path.join(out_dir, "summary.csv"), rep)
        series = {"E_theta [deg]": e_theta, "E_cl": e_cl}
        if any(np.isfinite(v) for v in e1):
            series["E1"] = e1
        report.render_convergence(os.path.join(out_dir, "convergence.png"),
                                  dxr, series,
                                  f"{config.variant}, {config.method}")
    return rep


def run_cfl_study(config: CaseConfig, cfl_list, n_list, out_dir: str | None = None):
    """Repeat the mesh sweep for each Courant number."""
    rows = []
    for cfl in cfl_list:
        sub = os.path.join(out_dir, f"cfl{cfl:.2f}") if out_dir else None
        rep = run_sweep(config.with_updates(cfl=float(cfl)), n_list, out_dir=sub,
                        write_outputs=out_dir is not None)
        rows.append((cfl, rep))
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, "cfl_summary.csv")
        with open(path, "w") as f:
            f.write("cfl,order_theta,order_cl\n")
            for cfl, rep in rows:
                f.write(f"{cfl},{rep.order_theta:.17g},{rep.order_cl:.17g}\n")
        fig_path = os.path.join(out_dir, "cfl_orders.png")
        report.render_convergence(
            fig_path, [c for c, _ in rows],
            {"order_theta": [r.order_theta for _, r in rows],
             "order_cl": [r.order_cl for _, r in rows]},
            f"orders vs CFL, {config.method}", guide_orders=())
    return rows


def run_translation_test(angle_deg: float, method: str, out_dir: str | None = None,
                         n_offsets: int = 200):
    """Thin wrapper over the diagnostics translation test, with CSV/figure."""
    offsets, angles = diagnostics.translation_test(angle_deg, method, n_offsets)
    errors = np.abs(angles - angle_deg)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        tag = f"translation_{method}_{angle_deg:g}"
        csv_path = os.path.join(out_dir, tag + ".csv")
        with open(csv_path, "w") as f:
            f.write("offset,angle_deg,error_deg\n")
            for o, a, e in zip(offsets, angles, errors):
                f.write(f"{o:.17g},{a:.17g},{e:.17g}\n")
        report.render_translation(os.path.join(out_dir, tag + ".png"),
                                  offsets, angles, angle_deg,
                                  f"{method}, {angle_deg:g} deg")
    return offsets, angles


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


def _int_list(text: str):
    return [int(p) for p in text.split(",") if p.strip()]


def _float_list(text: str):
    return [float(p) for p in text.split(",") if p.strip()]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vof2d",
                                description="2D VOF contact-line advection cases")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_method=True):
        sp.add_argument("--config", help="case config file (key = value sections)")
        sp.add_argument("--out", default=None, help="output directory")
        if with_method:
            sp.add_argument("--method", choices=("youngs", "elvira"))
        sp.add_argument("--n", type=int, help="cells along x1 (multiple of 4)")
        sp.add_argument("--cfl", type=float)
        sp.add_argument("--t-end", type=float, dest="t_end")
        sp.add_argument("--seed", type=int, default=None,
                        help="seed for property-test generators only")

    sp_run = sub.add_parser("run", help="run a single case")
    common(sp_run)

    sp_sweep = sub.add_parser("sweep", help="mesh refinement sweep")
    common(sp_sweep)
    sp_sweep.add_argument("--n-list", type=_int_list, default=[128, 256, 512])
    sp_sweep.add_argument("--check", action="store_true",
                          help="fail (exit 3) if convergence orders regress")

    sp_cfl = sub.add_parser("cfl-study", help="mesh sweep per Courant number")
    common(sp_cfl)
    sp_cfl.add_argument("--n-list", type=_int_list, default=[128, 256, 512])
    sp_cfl.add_argument("--cfl-list", type=_float_list,
                        default=[0.1, 0.3, 0.5, 0.7, 0.9])
    sp_cfl.add_argument("--check", action="store_true")

    sp_tr = sub.add_parser("translate-test", help="fixed-inclination line test")
    sp_tr.add_argument("--angle", type=float, default=60.0)
    sp_tr.add_argument("--method", default="boundary-elvira",
                       choices=("youngs", "elvira", "boundary-youngs", "boundary-elvira"))
    sp_tr.add_argument("--out", default=None)
    sp_tr.add_argument("--offsets", type=int, default=200)
    sp_tr.add_argument("--check", action="store_true")

    sp_vx = sub.add_parser("vortex-test", help="vortex-in-a-box benchmark")
    common(sp_vx)
    sp_vx.add_argument("--n-list", type=_int_list, default=[128, 256, 512])
    sp_vx.add_argument("--check", action="store_true")
    return p


def _config_from_args(args, base: CaseConfig | None = None) -> CaseConfig:
    cfg = base if base is not None else (
        load_config(args.config) if args.config else CaseConfig())
    updates = {}
    for attr, key in (("method", "method"), ("n", "n"), ("cfl", "cfl"),
                      ("t_end", "t_end")):
        val = getattr(args, attr, None)
        if val is not None:
            updates[key] = val
    if args.out is not None:
        updates["out_dir"] = args.out
    if updates:
        cfg = cfg.with_updates(**updates)
    return cfg.validate()


TRANSLATION_CHECK_LIMITS = {
    "youngs": 2.5,
    "elvira": 1e-7,
    "boundary-youngs": 25.0,
    "boundary-elvira": 1e-7,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None:
        np.random.seed(args.seed)
    try:
        if args.command == "run":
            cfg = _config_from_args(args)
            res = run_case(cfg, out_dir=cfg.out_dir)
            print(f"N={cfg.n} steps={res.nsteps} E_theta={res.e_theta_deg:.6g} deg "
                  f"E_cl={res.e_cl:.6g} volume_drift={res.volume_drift:.3g}")
            return 0

        if args.command == "sweep":
            cfg = _config_from_args(args)
            rep = run_sweep(cfg, args.n_list, out_dir=cfg.out_dir)
            print(f"order_theta={rep.order_theta:.3f} order_cl={rep.order_cl:.3f}")
            if args.check:
                ok = rep.order_cl >= 0.8 and (cfg.method != "elvira"
                                              or rep.order_theta >= 0.8)
                if not ok:
                    print("check FAILED: convergence order below 0.8")
                    return 3
            return 0

        if args.command == "cfl-study":
            cfg = _config_from_args(args)
            rows = run_cfl_study(cfg, args.cfl_list, args.n_list, out_dir=cfg.out_dir)
            for cfl, rep in rows:
                print(f"cfl={cfl:g} order_theta={rep.order_theta:.3f} "
                      f"order_cl={rep.order_cl:.3f}")
            if args.check and cfg.method == "elvira":
                if any(not (rep.order_theta >= 0.8) for _, rep in rows):
                    print("check FAILED: an order fell below 0.8")
                    return 3
            return 0

        if args.command == "translate-test":
            out = args.out
            offsets, angles = run_translation_test(args.angle, args.method,
                                                   out_dir=out, n_offsets=args.offsets)
            err = float(np.max(np.abs(angles - args.angle))) if len(angles) else math.nan
            print(f"{args.method} at {args.angle:g} deg: max error {err:.3g} deg "
                  f"over {len(angles)} offsets")
            if args.check and not (err <= TRANSLATION_CHECK_LIMITS[args.method]):
                print("check FAILED: translation error above limit")
                return 3
            return 0

        if args.command == "vortex-test":
            base = _config_from_args(args)
            cfg = base.with_updates(variant="vortex", v0=0.1, tau=0.2,
                                    t_end=base.tau if base.variant == "vortex" else 0.2)
            rep = run_sweep(cfg, args.n_list, out_dir=cfg.out_dir)
            pairs = [(d, e) for d, e in zip(rep.dx_over_r0, rep.e1)
                     if np.isfinite(e) and e > 0]
            order_e1 = diagnostics.convergence_order(pairs)
            print(f"E1 order={order_e1:.3f} order_theta={rep.order_theta:.3f} "
                  f"order_cl={rep.order_cl:.3f}")
            if args.check:
                limit = 1.5 if cfg.method == "elvira" else 0.8
                if not order_e1 >= limit:
                    print(f"check FAILED: E1 order {order_e1:.3f} < {limit}")
                    return 3
            return 0
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    except NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
