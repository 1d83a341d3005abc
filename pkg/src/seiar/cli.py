"""Command-line front end.

Subcommands: ``simulate``, ``stability``, ``fit``, ``sweep``, ``predict``.
Each takes ``--config`` plus, where observations are fitted, ``--data``, and
writes CSV/JSON results under ``--out``.  Exit codes: 0 success, 2 config
error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import stability as stability_mod
from .calibrate import FreeValue, fit
from .config import RunConfig, load_config
from .errors import ConfigError, DataError, FitError, IntegrationError
from .io import read_case_series, write_csv, write_json
from .model import (
    COMPARTMENTS,
    PARAMETER_NAMES,
    control_reproduction_number,
    disease_free_equilibrium,
    endemic_equilibrium,
)
from .scenarios import decline_percentages, forecast, rho_sweep
from .simulate import IntegratorConfig, daily_incidence, integrate

TRAJECTORY_HEADER = ("t", "S", "E1", "E2", "I1", "I2", "A", "R",
                     "cum_I1", "cum_I2", "cum_A")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _simulation_window(config: RunConfig) -> IntegratorConfig:
    cfg = config.integrator
    if cfg.t_end - cfg.t0 < 1.0:
        raise ConfigError("integrator window must span at least one day")
    return cfg


def cmd_simulate(config: RunConfig, args) -> None:
    params, initial = config.fixed_parameters()
    window = _simulation_window(config)
    traj = integrate(params, initial, window)
    incidence = daily_incidence(traj)
    out = _out_dir(args)
    write_csv(out / "trajectory.csv", TRAJECTORY_HEADER,
              ((traj.times[i], *traj.states[i], *traj.cumulative_inflows[i])
               for i in range(len(traj.times))))
    write_csv(out / "incidence.csv", ("day", "new_confirmed"),
              zip(incidence.days, incidence.values))


def _eigen_rows(prefix: str, eigenvalues: np.ndarray):
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    for i, ev in enumerate(eigenvalues[order], start=1):
        yield (f"{prefix}_eig{i}_re", ev.real)
        yield (f"{prefix}_eig{i}_im", ev.imag)


def cmd_stability(config: RunConfig, args) -> None:
    params, _ = config.fixed_parameters()
    r_c = control_reproduction_number(params)
    dfe = disease_free_equilibrium(params)
    dfe_report = stability_mod.classify_equilibrium(params, dfe)
    quartic = dfe_report.quartic
    certificate = stability_mod.positive_root_certificate(quartic)
    endemic = endemic_equilibrium(params)

    rows: list[tuple[str, object]] = [("R_c", r_c), ("S0", params.S0)]
    rows.append(("dfe_verdict", dfe_report.verdict))
    rows.append(("dfe_max_real_part", dfe_report.max_real_part))
    rows.extend(_eigen_rows("dfe", dfe_report.eigenvalues))
    for name in ("a1", "a2", "a3", "a4"):
        rows.append((name, getattr(quartic, name)))
    rows.append(("positive_root_exists", int(certificate.exists)))
    if certificate.exists:
        rows.append(("positive_root", certificate.root))
        rows.append(("positive_root_bracket_hi", certificate.bracket[1]))
    rows.append(("endemic_present", int(endemic is not None)))
    if endemic is not None:
        state = endemic.state
        for comp in COMPARTMENTS:
            rows.append((f"endemic_{comp}", getattr(state, comp)))
        endemic_report = stability_mod.classify_equilibrium(params, endemic)
        rows.append(("endemic_verdict", endemic_report.verdict))
        rows.append(("endemic_max_real_part", endemic_report.max_real_part))
        rows.extend(_eigen_rows("endemic", endemic_report.eigenvalues))
    if r_c < 1.0:
        audit_cfg = config.stability
        audits = stability_mod.global_stability_certificate(
            params, n_seeds=audit_cfg.audit_seeds,
            horizon=audit_cfg.audit_horizon, seed=audit_cfg.seed,
            seed_scale=audit_cfg.seed_scale)
        rows.append(("lyapunov_audit", "pass" if all(a.passed for a in audits) else "fail"))
        rows.append(("lyapunov_max_violation", max(a.max_violation for a in audits)))
        rows.append(("lyapunov_worst_final_distance", max(a.final_distance for a in audits)))
    else:
        rows.append(("lyapunov_audit", "skipped (R_c >= 1)"))
    write_csv(_out_dir(args) / "stability.csv", ("name", "value"), rows)


def _fit_from_args(config: RunConfig, args):
    data = read_case_series(args.data)
    base = config.integrator
    window = IntegratorConfig(
        t0=0.0, t_end=float(len(data)), method=base.method, step=base.step,
        rtol=base.rtol, atol=base.atol, sample_per_day=base.sample_per_day,
        max_steps=base.max_steps)
    fit_config = replace(config.fit, integrator=window)
    return data, fit(config.spec, data, fit_config)


def cmd_fit(config: RunConfig, args) -> None:
    data, result = _fit_from_args(config, args)
    out = _out_dir(args)
    rows = []
    for name in PARAMETER_NAMES:
        status = "fitted" if isinstance(config.spec.params[name], FreeValue) else "fixed"
        rows.append((name, status, getattr(result.params, name)))
    for comp in COMPARTMENTS:
        entry = config.spec.initial.get(comp)
        if entry is None:
            status = "derived" if comp == "S" else "fixed"
        else:
            status = "fitted" if isinstance(entry, FreeValue) else "fixed"
        rows.append((f"{comp}(0)", status, getattr(result.initial, comp)))
    write_csv(out / "fit.csv", ("parameter", "status", "value"), rows)
    write_csv(out / "residuals.csv", ("day", "observed", "modeled", "residual"),
              ((d, data.counts[d], result.modeled[d], result.residuals[d])
               for d in range(len(data))))
    write_json(out / "summary.json", {
        "objective": result.objective,
        "r_c": result.r_c,
        "converged": result.converged,
        "iterations": result.iterations,
        "n_evals": result.n_evals,
        "n_days": result.n_days,
    })


def cmd_sweep(config: RunConfig, args) -> None:
    params, initial = config.fixed_parameters()
    scenario = config.scenario
    if len(scenario.rho_values) < 2:
        raise ConfigError("sweep needs at least two rho values")
    sweep = rho_sweep((params, initial), scenario.rho_values, scenario.horizon)
    decline = decline_percentages(sweep)
    out = _out_dir(args)
    write_csv(out / "sweep.csv",
              ("rho", "cum_total", "cum_I1", "cum_I2", "cum_A",
               "prop_A_cumulative", "prop_A_prevalence"),
              ((s.rho, s.cum_total, s.cum_I1, s.cum_I2, s.cum_A,
                s.cum_proportions[2], s.prevalence_proportions[2])
               for s in sweep.scenarios))
    write_csv(out / "decline.csv", ("metric", "percent"),
              [("total", decline.total_pct),
               ("asymptomatic", decline.asymptomatic_pct)])


def cmd_predict(config: RunConfig, args) -> None:
    _, result = _fit_from_args(config, args)
    prediction = forecast(result, config.forecast_horizon)
    out = _out_dir(args)
    write_csv(out / "forecast.csv", ("day", "predicted_new_confirmed"),
              zip(prediction.incidence.days, prediction.incidence.values))
    write_json(out / "forecast_summary.json", {
        "peak_day": prediction.peak_day,
        "peak_value": prediction.peak_value,
        "horizon": prediction.horizon,
        "objective": result.objective,
        "r_c": result.r_c,
    })


_HANDLERS = {
    "simulate": cmd_simulate,
    "stability": cmd_stability,
    "fit": cmd_fit,
    "sweep": cmd_sweep,
    "predict": cmd_predict,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seiar",
        description="Seven-compartment epidemic model: simulation, stability "
                    "analysis, calibration and detection-ratio scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "simulate": "integrate a fixed configuration and write the trajectory",
        "stability": "reproduction number, equilibria and stability certificates",
        "fit": "calibrate free parameters against observed daily cases",
        "sweep": "re-run the model across a grid of detection ratios",
        "predict": "fit, then extend the run past the data window",
    }
    for name, help_text in descriptions.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="YAML run configuration")
        if name in ("fit", "predict"):
            p.add_argument("--data", required=True,
                           help="CSV of observed daily new confirmed cases")
        p.add_argument("--out", default=".", help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        _HANDLERS[args.command](config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (IntegrationError, FitError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
