"""Command-line front end.

    zeno simulate --config PATH --out DIR    trajectory CSV + manifest
    zeno entropy  --config PATH --out DIR    entropy CSV + summary JSON
    zeno sweep    --config PATH --out DIR    per-value CSVs + aggregate JSON
    zeno target   --config PATH --out DIR    interaction-design report JSON
    zeno verify   --config PATH --out DIR    flow-vs-channel deviation table

Conventions: configs quote Rabi frequencies (rabi = 2*omega, 1/ns), times
are ns, entropy is in nats (ceiling ln 2).  ZENO_WORKERS bounds sweep
parallelism.  Exit codes: 0 success, 2 config error, 3 diverged run,
4 infeasible/degenerate design, 5 failed verification.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import (RUN_KEYS, _as_bool, _as_float, _as_int, _float_list,
                     build_run_config, read_flat_config, resolved_run_dict)
from .dynamics import integrate
from .engineering import (InteractionOperator, Jump, LindbladSystem,
                          build_target_interaction_hamiltonian,
                          build_two_qubit_jumps, design_target_theta,
                          find_stationary, integrate_bloch, lindblad_rhs,
                          single_qubit_bloch_rhs, theta_rhs,
                          two_qubit_hamiltonian, verify_stationary)
from .errors import (ConfigError, DegenerateInteraction, Infeasible,
                     PlaneLeavingInteraction, StepDiverged, ValidationError)
from .kraus import compare_with_kraus
from .observables import entropy_series, measure_period, measure_saturation
from .output import (write_entropy_csv, write_json, write_manifest,
                     write_trajectory_csv)
from .pauli import basis_ket, ket_density
from .states import LN2
from .sweep import SweepPlan, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_DESIGN = 4
EXIT_VERIFY = 5


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(config_path, out_dir) -> int:
    raw = read_flat_config(config_path)
    cfg, stride, with_entropy = build_run_config(raw)
    out = _out_dir(out_dir)
    resolved = resolved_run_dict(cfg, stride, with_entropy)
    integrator = {"method": "rk4", "dt": cfg.dt, "stride": stride}
    try:
        traj = integrate(cfg, stride=stride)
    except StepDiverged as exc:
        # keep whatever was recorded; the manifest carries the failure time
        csv_path = out / "trajectory.csv"
        if exc.partial is not None:
            if with_entropy:
                exc.partial.entropy = entropy_series(exc.partial)
            write_trajectory_csv(csv_path, exc.partial, with_entropy=with_entropy)
        write_manifest(out, "simulate", resolved, [csv_path],
                       integrator=integrator,
                       note=f"diverged at t = {exc.time:.9g} ns")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    if with_entropy:
        traj.entropy = entropy_series(traj)
    csv_path = write_trajectory_csv(out / "trajectory.csv", traj,
                                    with_entropy=with_entropy)
    write_manifest(out, "simulate", resolved, [csv_path], integrator=integrator)
    print(f"wrote {csv_path} ({len(traj)} rows)")
    return EXIT_OK


def _entropy_summary(times, series) -> dict:
    period = measure_period(series, times)
    saturation = measure_saturation(series, times)
    return {
        "final_value": float(series[-1]),
        "ln2": LN2,
        "max_value": float(np.max(series)),
        "period_max_to_max": None if period is None else period.max_to_max,
        "period_min_to_min": None if period is None else period.min_to_min,
        "saturation": saturation,
        "t_final": float(times[-1]),
    }


def cmd_entropy(config_path, out_dir) -> int:
    raw = read_flat_config(config_path)
    cfg, stride, _ = build_run_config(raw)
    out = _out_dir(out_dir)
    resolved = resolved_run_dict(cfg, stride, True)
    integrator = {"method": "rk4", "dt": cfg.dt, "stride": stride}
    try:
        traj = integrate(cfg, stride=stride)
    except StepDiverged as exc:
        outputs = []
        if exc.partial is not None and len(exc.partial) > 0:
            series = entropy_series(exc.partial)
            outputs.append(write_entropy_csv(out / "entropy.csv",
                                             exc.partial.times, series))
        write_manifest(out, "entropy", resolved, outputs, integrator=integrator,
                       note=f"diverged at t = {exc.time:.9g} ns")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    series = entropy_series(traj)
    csv_path = write_entropy_csv(out / "entropy.csv", traj.times, series)
    summary = _entropy_summary(traj.times, series)
    json_path = write_json(out / "summary.json", summary)
    write_manifest(out, "entropy", resolved, [csv_path, json_path],
                   integrator=integrator)
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def _value_token(value: float) -> str:
    return format(value, "g").replace("-", "m").replace(".", "p")


def cmd_sweep(config_path, out_dir, max_workers=None) -> int:
    raw = read_flat_config(config_path)
    axis = raw.get("axis")
    if not axis:
        raise ConfigError("sweep config needs an 'axis' key")
    values = _float_list(raw, "values")
    observables = tuple(tok for tok in raw.get("observables", "trajectory")
                        .replace(",", " ").split())
    base, stride, _ = build_run_config(raw)
    try:
        plan = SweepPlan(base=base, axis=axis, values=values,
                         observables=observables, stride=stride)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc

    out = _out_dir(out_dir)
    result = run_sweep(plan, max_workers=max_workers)

    entropy_mode = "entropy" in plan.observables
    outputs = []
    aggregate = []
    for rec in result.records:
        row = {
            "value": rec.value,
            "status": rec.status,
            "error": rec.error,
            "saturation": rec.saturation,
            "period_min_to_min": None if rec.period is None else rec.period.min_to_min,
            "period_max_to_max": None if rec.period is None else rec.period.max_to_max,
            "dominant_frequency": rec.dominant_frequency,
            "csv": None,
        }
        if rec.trajectory is not None and len(rec.trajectory) > 0:
            token = _value_token(rec.value)
            if entropy_mode and rec.entropy is not None:
                path = write_entropy_csv(out / f"{plan.axis}_{token}_entropy.csv",
                                         rec.trajectory.times, rec.entropy)
            else:
                path = write_trajectory_csv(out / f"{plan.axis}_{token}.csv",
                                            rec.trajectory)
            row["csv"] = path.name
            outputs.append(path)
        aggregate.append(row)

    json_path = write_json(out / "aggregate.json", aggregate)
    outputs.append(json_path)
    resolved = resolved_run_dict(base, stride, entropy_mode)
    resolved.update({"axis": plan.axis,
                     "values": " ".join(format(v, "g") for v in plan.values),
                     "observables": " ".join(plan.observables)})
    write_manifest(out, "sweep", resolved, outputs,
                   integrator={"method": "rk4", "dt": base.dt, "stride": stride})
    n_ok = len(result.succeeded)
    print(f"sweep over {plan.axis}: {n_ok}/{len(plan.values)} values succeeded")
    return EXIT_OK if n_ok >= 1 else EXIT_DIVERGED


def _real_matrix(mat) -> list:
    mat = np.asarray(mat)
    if np.max(np.abs(mat.imag)) > 1e-14:
        raise ValidationError("matrix is not real; cannot serialize plainly")
    return [[float(v) for v in row] for row in mat.real]


def _single_qubit_report(raw: dict) -> dict:
    s = InteractionOperator(a=_as_float(raw, "a"), b=_as_float(raw, "b", 0.0),
                            c=_as_float(raw, "c"), d=_as_float(raw, "d", 0.0))
    lam = _as_float(raw, "lambda")
    design = design_target_theta(s, lam)
    omega = _as_float(raw, "omega", 0.5)
    alpha = 2.0 * lam * omega
    roots = find_stationary(s, omega, alpha)
    angles = []
    for theta in (design.theta, design.theta_alt):
        v = np.array([0.0, np.sin(theta), np.cos(theta)])
        angles.append({
            "theta": float(theta),
            "bloch": [float(x) for x in v],
            "theta_rhs_residual": abs(theta_rhs(theta, s, omega, alpha)),
            "bloch_rhs_residual": float(np.max(np.abs(
                single_qubit_bloch_rhs(v, s, omega, alpha)))),
        })
    return {
        "mode": "single_qubit",
        "interaction": {"a": s.a, "b": s.b, "c": s.c, "d": s.d},
        "lambda": lam,
        "omega": omega,
        "alpha": alpha,
        "xi": design.xi,
        "feasible": True,
        "frozen_angles": angles,
        "fixed_points": [
            {"bloch": [float(x) for x in v],
             "residual": float(np.max(np.abs(single_qubit_bloch_rhs(v, s, omega, alpha))))}
            for v in roots
        ],
    }


def _two_qubit_report(raw: dict) -> dict:
    alpha = _as_float(raw, "alpha", 1.0)
    coupling = _as_float(raw, "coupling", 1.0)
    hs_scale = _as_float(raw, "hs_scale", 1.0)
    jumps = build_two_qubit_jumps()
    sys_ = LindbladSystem(h_sys=two_qubit_hamiltonian(hs_scale),
                          jumps=tuple(Jump(op, alpha) for op in jumps))
    h_int = build_target_interaction_hamiltonian(coupling)
    residuals = {}
    for label in ("00", "01", "10", "11"):
        ok, resid = verify_stationary(ket_density(basis_ket(label)), sys_)
        residuals[label] = {"stationary": ok, "residual": resid}
    return {
        "mode": "two_qubit",
        "alpha": alpha,
        "coupling": coupling,
        "hs_scale": hs_scale,
        "jump_operators": [_real_matrix(op) for op in jumps],
        "interaction_hamiltonian": _real_matrix(h_int),
        "stationarity": residuals,
    }


def cmd_target(config_path, out_dir) -> int:
    raw = read_flat_config(config_path)
    mode = raw.get("mode", "")
    if mode not in ("single_qubit", "two_qubit"):
        raise ConfigError(f"target mode must be single_qubit or two_qubit, got {mode!r}")
    out = _out_dir(out_dir)
    try:
        report = (_single_qubit_report(raw) if mode == "single_qubit"
                  else _two_qubit_report(raw))
    except (Infeasible, DegenerateInteraction, PlaneLeavingInteraction) as exc:
        payload = {"error": {"type": type(exc).__name__, "message": str(exc)},
                   "mode": mode, "feasible": False}
        write_json(out / "design.json", payload)
        write_manifest(out, "target", dict(raw), [out / "design.json"])
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DESIGN
    json_path = write_json(out / "design.json", report)
    write_manifest(out, "target", dict(raw), [json_path])
    print(f"wrote {json_path}")
    return EXIT_OK


def cmd_verify(config_path, out_dir) -> int:
    raw = read_flat_config(config_path)
    cfg, _, _ = build_run_config(raw)
    dts = sorted(_float_list(raw, "dts"), reverse=True)
    tolerance = _as_float(raw, "tolerance", 5e-3)
    rhs_offset = _as_float(raw, "rhs_offset", 0.0)
    out = _out_dir(out_dir)

    rows = compare_with_kraus(cfg, dts, rhs_offset=rhs_offset)
    failures = []
    print(f"{'dt (ns)':>12}  {'steps':>8}  {'max deviation':>14}")
    for row in rows:
        print(f"{row.dt:>12g}  {row.n_steps:>8d}  {row.max_deviation:>14.6e}")
        if row.max_deviation > tolerance:
            failures.append(f"dt={row.dt:g}: deviation {row.max_deviation:.3e} "
                            f"exceeds tolerance {tolerance:g}")
    for prev, nxt in zip(rows, rows[1:]):
        allowed = prev.max_deviation * (nxt.dt / prev.dt)
        if nxt.max_deviation > allowed:
            failures.append(
                f"dt={nxt.dt:g}: deviation {nxt.max_deviation:.3e} did not shrink "
                f"in proportion to dt (allowed {allowed:.3e})")

    report = {
        "tolerance": tolerance,
        "rhs_offset": rhs_offset,
        "rows": [{"dt": r.dt, "n_steps": r.n_steps,
                  "max_deviation": r.max_deviation} for r in rows],
        "failures": failures,
        "passed": not failures,
    }
    json_path = write_json(out / "verify.json", report)
    resolved = resolved_run_dict(cfg, 1, False)
    resolved.update({"dts": " ".join(format(d, "g") for d in dts),
                     "tolerance": tolerance, "rhs_offset": rhs_offset})
    write_manifest(out, "verify", resolved, [json_path])
    for line in failures:
        print(f"FAIL: {line}", file=sys.stderr)
    if failures:
        return EXIT_VERIFY
    print(f"verification passed; wrote {json_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zeno",
        description=("Monitored two-qubit dynamics: post-selected weak "
                     "measurement, entanglement entropy (nats), and "
                     "Zeno target-state design.  Configs quote Rabi "
                     "frequencies (rabi = 2*omega)."))
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("simulate", "integrate one trajectory and write CSV"),
            ("entropy", "entropy series with period/saturation summary"),
            ("sweep", "run a parameter sweep from a plan file"),
            ("target", "design an interaction that freezes a target state"),
            ("verify", "cross-check the flow against the discrete channel")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="config file path")
        cmd.add_argument("--out", required=True, help="output directory")
        if name == "sweep":
            cmd.add_argument("--workers", type=int, default=None,
                             help="worker bound (default: ZENO_WORKERS or CPU count)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config, args.out)
        if args.command == "entropy":
            return cmd_entropy(args.config, args.out)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.out, max_workers=args.workers)
        if args.command == "target":
            return cmd_target(args.config, args.out)
        if args.command == "verify":
            return cmd_verify(args.config, args.out)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StepDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
