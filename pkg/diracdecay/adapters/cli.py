"""argparse command-line surface.

Mental model refresher:
- Each subcommand resolves its parameters (defaults < --config < flags),
  calls domain/application code, and writes one or more CSV artifacts.
- Output is bracket-tagged `key=value` lines; errors end in a single
  `[ERROR] code=... exit_code=... message=...` line.
- Exit codes: 0 success, 2 tolerance breach, 3 configuration error,
  4 numerical failure.
"""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any, Callable, NoReturn, Sequence

import numpy as np

from .. import __version__
from ..application.scenarios import SCENARIOS, run_scenario
from ..application.survival import METHOD_REGIMES, compare_oracles, resolve_options, survival_amplitude
from ..domain.kernel import KernelForm, KernelSpec, default_kernel_spec, kernel_double_integral, kernel_grid
from ..domain.markovianity import (
    amplitude_damping_liouvillian,
    gksl_modes,
    gksl_reference_survival,
    gksl_survival_expm,
    semigroup_deviation,
    window_slopes,
    zeno_protocol,
)
from ..domain.model import ModelParams, Picture, Regime, TimeGrid, classify_regime
from ..domain.poles import (
    crossover_map,
    cutoff_positions,
    find_poles,
    is_rabi,
    rlambert_crosscheck,
)
from ..domain.ssh import fit_power_law, gap_sweep, survival_vs_depth
from ..domain.wavefunction import psi_numeric
from ..errors import ConfigError, SimulationError
from ..types import HeaderDict
from .config import (
    chain_from_config,
    fail_on_flag_from_env,
    load_config_file,
    out_dir_from_env,
    params_from_config,
    run_settings,
)
from .csv_output import write_csv

TOLERANCE_EXIT_CODE = 2


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except ConfigError as exc:
        print(f"[ERROR] code={exc.code} exit_code={exc.exit_code} message={exc}")
        print(f"[RESULT] status=error exit_code={exc.exit_code}")
        return exc.exit_code
    out_dir = Path(args.out) if args.out else out_dir_from_env()
    print(f"[RUN START] command={args.command} out={out_dir} version={__version__}")
    try:
        exit_code = _HANDLERS[args.command](args, out_dir)
    except SimulationError as exc:
        print(f"[ERROR] code={exc.code} exit_code={exc.exit_code} message={exc}")
        print(f"[RESULT] status=error exit_code={exc.exit_code}")
        return exc.exit_code
    status = "ok" if exit_code == 0 else "failed"
    print(f"[RESULT] status={status} exit_code={exit_code}")
    return exit_code


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ConfigError (exit code 3)."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(f"{self.prog}: {message}", code="INVALID_ARGUMENT")


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    io_flags = argparse.ArgumentParser(add_help=False)
    io_flags.add_argument("--config", help="key=value parameter file")
    io_flags.add_argument("--out", help="artifact directory (default: $DIRACDECAY_OUT_DIR or .)")

    model_flags = argparse.ArgumentParser(add_help=False)
    model_flags.add_argument("--omega0", type=float)
    model_flags.add_argument("--g", type=float)
    model_flags.add_argument("--m", type=float)
    model_flags.add_argument("--lambda", dest="lam", help="momentum cutoff or 'inf'")
    model_flags.add_argument("--hbar", type=float)

    time_flags = argparse.ArgumentParser(add_help=False)
    time_flags.add_argument("--t-max", dest="t_max", type=float)
    time_flags.add_argument("--points", type=int, default=201)

    chain_flags = argparse.ArgumentParser(add_help=False)
    chain_flags.add_argument("--t1", type=float)
    chain_flags.add_argument("--t2", type=float)
    chain_flags.add_argument("--g", type=float)
    chain_flags.add_argument("--omega0", type=float)
    chain_flags.add_argument("--cells", type=int)
    chain_flags.add_argument("--lmax", dest="l_max", type=float)
    chain_flags.add_argument("--l-points", dest="l_points", type=int, default=481)

    parser = _ArgumentParser(description="Two-level decay into a Dirac-dispersion bath.")
    commands = parser.add_subparsers(dest="command", required=True)

    kernel = commands.add_parser("kernel", parents=[io_flags, model_flags, time_flags], help="memory kernel")
    kernel.add_argument("--form", choices=[form.value.lower() for form in KernelForm])

    survival = commands.add_parser("survival", parents=[io_flags, model_flags, time_flags], help="survival amplitude")
    survival.add_argument("--method", choices=sorted(METHOD_REGIMES), default="volterra")
    _add_method_options(survival)

    commands.add_parser("poles", parents=[io_flags, model_flags], help="resolvent poles")

    crossover = commands.add_parser("crossover", parents=[io_flags], help="cutoff pole crossover map")
    crossover.add_argument("--a-min", dest="a_min", type=float, default=0.25)
    crossover.add_argument("--a-max", dest="a_max", type=float, default=10.0)
    crossover.add_argument("--a-points", dest="a_points", type=int, default=40)
    crossover.add_argument("--lambda-min", dest="lam_min", type=float, default=1.0)
    crossover.add_argument("--lambda-max", dest="lam_max", type=float, default=20.0)
    crossover.add_argument("--lambda-points", dest="lam_points", type=int, default=39)

    wave = commands.add_parser("wavefunction", parents=[io_flags, model_flags], help="environment wave function")
    wave.add_argument("--t", type=float, required=True)
    wave.add_argument("--points", type=int, default=2048)

    commands.add_parser("ssh", parents=[io_flags, chain_flags], help="SSH waveguide survival")
    sweep = commands.add_parser("ssh-sweep", parents=[io_flags, chain_flags], help="SSH gap sweep")
    sweep.add_argument("--gaps", default="0,0.001,0.0025", help="comma-separated |t1 - t2| values")

    markov = commands.add_parser("markov", parents=[io_flags, model_flags, time_flags], help="Markovianity checks")
    markov.add_argument("--check", choices=["semigroup", "zeno", "gksl"], required=True)
    markov.add_argument("--t", type=float, default=1.0, help="semigroup time or Zeno total time")
    markov.add_argument("--max-power", dest="max_power", type=int, default=10, help="Zeno n up to 2**max_power")
    markov.add_argument("--gamma", type=float, default=1.0, help="GKSL damping rate")

    run = commands.add_parser("run", parents=[io_flags], help="reproduce one scenario")
    run.add_argument("scenario", choices=sorted(SCENARIOS))

    compare = commands.add_parser("compare", parents=[io_flags, model_flags, time_flags], help="cross-oracle comparison")
    compare.add_argument("--methods", required=True, help="comma-separated method names")
    compare.add_argument("--tolerance", type=float, default=1e-3)
    _add_method_options(compare)

    return parser.parse_args(argv)


def _add_method_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dt", type=float)
    parser.add_argument("--scheme", choices=["trapezoid", "simpson"])
    parser.add_argument("--order", type=int)
    parser.add_argument("--n-modes", dest="n_modes", type=int)
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--tail-tolerance", dest="tail_tolerance", type=float)


def _config_values(args: argparse.Namespace) -> dict[str, str]:
    return load_config_file(args.config) if args.config else {}


def _resolve_params(args: argparse.Namespace) -> ModelParams:
    overrides = {
        "omega0": args.omega0,
        "g": args.g,
        "m": args.m,
        "lambda": args.lam,
        "hbar": args.hbar,
    }
    return params_from_config(_config_values(args), overrides)


def _resolve_settings(args: argparse.Namespace) -> dict[str, Any]:
    overrides = {key: getattr(args, key, None) for key in ("dt", "t_max", "scheme", "sigma", "n_modes", "t1", "t2", "cells", "l_max")}
    return run_settings(_config_values(args), overrides)


def _time_grid(args: argparse.Namespace, params: ModelParams, settings: dict[str, Any]) -> np.ndarray:
    t_max = settings["t_max"] or 5.0 * params.hbar / params.g2
    return np.linspace(0.0, t_max, max(args.points, 2))


def _write(out_dir: Path, name: str, header: HeaderDict, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    path = write_csv(out_dir / f"{name}.csv", header | {"code_version": __version__}, columns, rows)
    print(f"[WROTE] path={path} rows={len(rows)}")
    return path


def _series_rows(t: np.ndarray, values: np.ndarray) -> list[list[float]]:
    return [[float(ti), float(v.real), float(v.imag), float(abs(v) ** 2)] for ti, v in zip(t, values)]


def _handle_kernel(args: argparse.Namespace, out_dir: Path) -> int:
    params = _resolve_params(args)
    settings = _resolve_settings(args)
    spec = KernelSpec(params, KernelForm(args.form.upper())) if args.form else default_kernel_spec(params)
    u = _time_grid(args, params, settings)
    values = kernel_grid(spec, u)
    doubles = [kernel_double_integral(spec, float(ui)) for ui in u]
    rows = [
        [float(ui), float(k.real), float(k.imag), float(d.real), float(d.imag)]
        for ui, k, d in zip(u, values, doubles)
    ]
    header = params.as_header() | {"form": spec.form.value}
    _write(out_dir, "kernel", header, ("u", "re_kernel", "im_kernel", "re_double_integral", "im_double_integral"), rows)
    return 0


def _method_options(args: argparse.Namespace, settings: dict[str, Any]) -> dict[str, Any]:
    return {
        "dt": settings["dt"],
        "scheme": settings["scheme"],
        "sigma": settings["sigma"],
        "n_modes": settings["n_modes"],
        "order": args.order,
        "tail_tolerance": args.tail_tolerance,
    }


def _grid_header(t: np.ndarray) -> HeaderDict:
    return {"t_max": float(t[-1]), "points": len(t)}


def _handle_survival(args: argparse.Namespace, out_dir: Path) -> int:
    params = _resolve_params(args)
    settings = _resolve_settings(args)
    t = _time_grid(args, params, settings)
    grid = TimeGrid(t)
    options = resolve_options(params, grid, args.method, **_method_options(args, settings))
    series = survival_amplitude(params, grid, args.method, **options)
    header = params.as_header() | {
        "regime": classify_regime(params).value,
        "method": series.method,
        "picture": series.picture.value,
        "error_estimate": series.error,
    }
    header |= _grid_header(t) | options
    columns = ["t", "re_phi", "im_phi", "p"]
    rows = _series_rows(t, series.values)
    for name, values in series.components.items():
        columns += [f"re_{name}", f"im_{name}"]
        for row, value in zip(rows, values):
            row += [float(value.real), float(value.imag)]
    _write(out_dir, f"survival_{args.method}", header, columns, rows)
    return 0


def _handle_poles(args: argparse.Namespace, out_dir: Path) -> int:
    params = _resolve_params(args)
    poles = find_poles(params)
    rows = [
        [pole.label.value, pole.sheet.branch, pole.z.real, pole.z.imag, pole.residue.real, pole.residue.imag]
        for pole in poles.poles
    ]
    header = params.as_header() | {"regime": poles.regime.value}
    if poles.discriminant is not None:
        header["discriminant"] = poles.discriminant
    if poles.regime is Regime.MASSLESS_CUT:
        x1, x2 = cutoff_positions(poles)
        header |= {"x1": x1, "x2": x2, "rabi": is_rabi(poles)}
        for label, report in rlambert_crosscheck(params, poles).items():
            header[f"rlambert_residual_{label.lower()}"] = report["residual"]
    _write(out_dir, "poles", header, ("label", "sheet", "re_z", "im_z", "re_residue", "im_residue"), rows)
    return 0


def _handle_crossover(args: argparse.Namespace, out_dir: Path) -> int:
    a_grid = np.linspace(args.a_min, args.a_max, args.a_points)
    lam_grid = np.linspace(args.lam_min, args.lam_max, args.lam_points)
    values = crossover_map(a_grid, lam_grid)
    rows = [
        [float(a), float(lam), float(values[i, j])]
        for i, a in enumerate(a_grid)
        for j, lam in enumerate(lam_grid)
    ]
    missing = int(np.count_nonzero(np.isnan(values)))
    _write(out_dir, "crossover", {"missing_cells": missing}, ("omega0_over_g2", "lambda_over_g2", "map_value"), rows)
    return 0


def _handle_wavefunction(args: argparse.Namespace, out_dir: Path) -> int:
    params = _resolve_params(args)
    x = np.linspace(-2.0 * args.t, 2.0 * args.t, args.points)
    field = psi_numeric(params, args.t, x)
    rows = [[float(xi), float(v.real), float(v.imag), float(d)] for xi, v, d in zip(x, field.values, field.density)]
    header = params.as_header() | {"t": args.t, "integrated_prob": field.integrated_prob}
    _write(out_dir, "wavefunction", header, ("x", "re_psi", "im_psi", "abs2_psi"), rows)
    return 0


def _chain_and_grid(args: argparse.Namespace):
    values = _config_values(args)
    chain = chain_from_config(
        values,
        {"t1": args.t1, "t2": args.t2, "g": args.g, "omega0": args.omega0, "cells": args.cells},
    )
    settings = run_settings(values, {"l_max": args.l_max})
    l_max = settings["l_max"] or 120.0
    return chain, np.linspace(0.0, l_max, max(args.l_points, 2))


def _handle_ssh(args: argparse.Namespace, out_dir: Path) -> int:
    chain, l_grid = _chain_and_grid(args)
    series = survival_vs_depth(chain, l_grid)
    rows = [[float(l), float(p)] for l, p in zip(l_grid, series.probability)]
    _write(out_dir, "ssh", chain.as_header() | {"gap": chain.gap}, ("l", "p"), rows)
    return 0


def _handle_ssh_sweep(args: argparse.Namespace, out_dir: Path) -> int:
    chain, l_grid = _chain_and_grid(args)
    gaps = [float(item) for item in args.gaps.split(",") if item.strip()]
    sweep = gap_sweep(chain, gaps, l_grid)
    header: HeaderDict = chain.as_header() | {"gaps": ",".join(repr(g) for g in gaps)}
    for gap, series in sweep.items():
        if gap > 0 and l_grid[-1] > 80.0:
            try:
                exponent, _ = fit_power_law(series, 30.0, 80.0)
            except SimulationError as exc:
                print(f"[SKIP] fit gap={gap!r} reason={exc}")
            else:
                header[f"exponent_gap{gap!r}"] = exponent
    columns = ("l",) + tuple(f"p_gap{gap!r}" for gap in gaps)
    rows = [[float(l)] + [float(sweep[gap].probability[i]) for gap in gaps] for i, l in enumerate(l_grid)]
    _write(out_dir, "ssh_sweep", header, columns, rows)
    return 0


def _handle_markov(args: argparse.Namespace, out_dir: Path) -> int:
    params = _resolve_params(args)
    header: HeaderDict = params.as_header() | {"check": args.check}
    if args.check == "semigroup":
        t_span = np.linspace(0.0, args.t, max(args.points, 4))
        amplitude = survival_amplitude(params, TimeGrid(t_span), "volterra").to_picture(Picture.SCHRODINGER, params)
        report = semigroup_deviation(amplitude, args.t)
        rows = [[report.t, report.max_deviation, report.worst_s, report.n_points]]
        _write(out_dir, "markov_semigroup", header, ("t", "max_deviation", "worst_s", "n_points"), rows)
        return 0
    if args.check == "zeno":
        counts = [2**k for k in range(args.max_power + 1)]
        rows = [[n, zeno_protocol(params, args.t, n)] for n in counts]
        _write(out_dir, "markov_zeno", header | {"t_total": args.t}, ("n_measurements", "survival"), rows)
        return 0

    liouvillian = amplitude_damping_liouvillian(args.gamma, params.omega0)
    t = np.linspace(0.0, args.t_max or 10.0 / max(args.gamma, 1e-12), max(args.points, 4))
    modes = gksl_reference_survival(gksl_modes(liouvillian), t)
    direct = gksl_survival_expm(liouvillian, t)
    span = t[-1]
    windows = [(0.1 * span, 0.3 * span), (0.3 * span, 0.6 * span), (0.6 * span, span)]
    slopes = window_slopes(t, modes, windows)
    header |= {"gamma": args.gamma} | {f"loglog_slope_w{i}": s for i, s in enumerate(slopes)}
    rows = [[float(ti), float(a), float(b)] for ti, a, b in zip(t, modes, direct)]
    _write(out_dir, "markov_gksl", header, ("t", "p_modes", "p_expm"), rows)
    return 0


def _handle_run(args: argparse.Namespace, out_dir: Path) -> int:
    def write_table(path: Path, header: HeaderDict, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
        written = write_csv(path, header, columns, rows)
        print(f"[WROTE] path={written} rows={len(rows)}")
        return written

    result = run_scenario(args.scenario, out_dir, write_table)
    if result["status"] != "ok":
        print(f"[ERROR] code={result['code']} exit_code={result['exit_code']} message={result['error']}")
    return result["exit_code"]


def _handle_compare(args: argparse.Namespace, out_dir: Path) -> int:
    params = _resolve_params(args)
    settings = _resolve_settings(args)
    t = _time_grid(args, params, settings)
    methods = [item.strip() for item in args.methods.split(",") if item.strip()]
    result = compare_oracles(params, TimeGrid(t), methods, args.tolerance, **_method_options(args, settings))

    for item in result["method_results"]:
        if item["status"] != "ok":
            print(f"[SKIP] method={item['method']} status={item['status']} reason={item['error']}")
    for pair in result["pairs"]:
        if pair["flagged"]:
            print(
                f"[FLAG] method_a={pair['method_a']} method_b={pair['method_b']} "
                f"max_rel_dev={pair['max_rel_dev']:.3e}"
            )

    header: HeaderDict = params.as_header() | {
        "regime": result["regime"],
        "methods": ",".join(methods),
        "tolerance": args.tolerance,
    } | _grid_header(t)
    for item in result["method_results"]:
        header[f"status_{item['method']}"] = item["status"]
        for key, value in item.get("options", {}).items():
            header[f"{item['method']}_{key}"] = value
    series = result["series"]
    columns = ["t"]
    for name in series:
        columns += [f"re_{name}", f"im_{name}", f"p_{name}"]
    rows = []
    for i, ti in enumerate(t):
        row: list[Any] = [float(ti)]
        for item in series.values():
            value = item.values[i]
            row += [float(value.real), float(value.imag), float(abs(value) ** 2)]
        rows.append(row)
    _write(out_dir, "compare", header, columns, rows)

    pair_rows = [[p["method_a"], p["method_b"], p["max_rel_dev"], p["flagged"]] for p in result["pairs"]]
    _write(out_dir, "compare_pairs", header, ("method_a", "method_b", "max_rel_dev", "flagged"), pair_rows)

    if not result["all_within_tolerance"] and fail_on_flag_from_env():
        return TOLERANCE_EXIT_CODE
    return 0


_HANDLERS: dict[str, Callable[[argparse.Namespace, Path], int]] = {
    "kernel": _handle_kernel,
    "survival": _handle_survival,
    "poles": _handle_poles,
    "crossover": _handle_crossover,
    "wavefunction": _handle_wavefunction,
    "ssh": _handle_ssh,
    "ssh-sweep": _handle_ssh_sweep,
    "markov": _handle_markov,
    "run": _handle_run,
    "compare": _handle_compare,
}
