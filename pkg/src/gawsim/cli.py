"""Command-line front end.

Subcommands
-----------
coeffs      coefficient tables over a phase-shift range (CSV)
evolve      single trajectory at fixed theta (CSV)
sweep       concurrence on a theta x time grid (CSV)
dfi-scan    locate decoherence-free-interaction points (JSON)
verify-slh  cross-check network-composed coefficients against the formulas

All angles are radians unless ``--theta-over-pi`` is given; rates and times
are in units of the reference rate gamma.  Exit codes: 0 success, 1 invalid
specification, 2 numerical failure (including a verify-slh mismatch).

Output files start with '#' comment lines recording the package version,
the resolved run specification, and the tolerances in force, so a table
can always be traced back to the exact invocation.  Identical
specifications produce byte-identical files; sweep cells are computed in
parallel but merged in grid order.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, analytic, dfi, dynamics, slh
from .coefficients import canonical_coefficients, general_coefficients
from .errors import LayoutError, NumericalFailure
from .model import (
    CanonicalConfig,
    Configuration,
    WaveguideLayout,
    build_canonical,
    layout_from_json,
)

TWO_PI = 2.0 * math.pi


class SpecError(ValueError):
    """The run specification is inconsistent or incomplete."""


@dataclass
class RunSpec:
    """Resolved parameters of one CLI invocation (worker count excluded:
    it never affects output bytes)."""

    command: str
    configuration: str | None = None
    layout_path: str | None = None
    gamma: float = 1.0
    theta: float | None = None
    theta_min: float | None = None
    theta_max: float | None = None
    theta_steps: int | None = None
    t_max: float | None = None
    dt: float | None = None
    t_steps: int | None = None
    method: str | None = None
    grid: int | None = None
    tol_decay: float | None = None
    tol_exchange: float | None = None
    tol: float | None = None
    c_eg: str | None = None
    c_ge: str | None = None
    out: str | None = None

    def meta_json(self) -> str:
        # the destination path is not part of the computation: identical
        # specifications must produce byte-identical files wherever written
        fields = {k: v for k, v in asdict(self).items() if v is not None and k != "out"}
        return json.dumps(fields, sort_keys=True)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _header_lines(spec: RunSpec) -> list[str]:
    tolerances = {
        "coeff_zero_tol": 1e-9,
        "trace_tol": dynamics.TRACE_TOL,
        "herm_tol": dynamics.HERM_TOL,
        "eig_floor": dynamics.EIG_FLOOR,
        "slh_composition_tol": slh.COMPOSITION_TOL,
    }
    return [
        f"# gawsim {__version__}",
        f"# spec: {spec.meta_json()}",
        f"# tolerances: {json.dumps(tolerances, sort_keys=True)}",
    ]


def _write_csv(path: str, spec: RunSpec, columns: list[str], rows, extra_header=()) -> None:
    lines = _header_lines(spec) + [f"# {line}" for line in extra_header]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path: str, spec: RunSpec, payload: dict) -> None:
    tolerances = {
        "coeff_zero_tol": 1e-9,
        "tol_decay": spec.tol_decay,
        "tol_exchange": spec.tol_exchange,
    }
    doc = {"meta": {"gawsim": __version__, "spec": json.loads(spec.meta_json()),
                    "tolerances": tolerances}}
    doc.update(payload)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")


def _load_layout(spec: RunSpec) -> WaveguideLayout:
    if spec.layout_path is None:
        raise SpecError("this command requires --layout or --config")
    try:
        with open(spec.layout_path) as fh:
            return layout_from_json(fh.read())
    except OSError as exc:
        raise SpecError(f"cannot read layout file: {exc}") from exc


def _resolve_source(spec: RunSpec):
    """Return ('config', Configuration) or ('layout', WaveguideLayout)."""
    if spec.configuration is not None and spec.layout_path is not None:
        raise SpecError("give either --config or --layout, not both")
    if spec.configuration is not None:
        return "config", Configuration(spec.configuration)
    return "layout", _load_layout(spec)


def _theta_grid(spec: RunSpec) -> np.ndarray:
    lo = 0.0 if spec.theta_min is None else spec.theta_min
    hi = TWO_PI if spec.theta_max is None else spec.theta_max
    steps = 400 if spec.theta_steps is None else spec.theta_steps
    if steps < 2:
        raise SpecError("theta range needs at least 2 steps")
    if hi <= lo:
        raise SpecError("theta-max must exceed theta-min")
    return np.linspace(lo, hi, steps)


def _time_grid(spec: RunSpec) -> np.ndarray:
    t_max = 4.0 if spec.t_max is None else spec.t_max
    if t_max <= 0:
        raise SpecError("t-max must be positive")
    if spec.dt is not None:
        if spec.dt <= 0:
            raise SpecError("dt must be positive")
        n = int(math.floor(t_max / spec.dt + 1e-9))
        return np.array([k * spec.dt for k in range(n + 1)])
    steps = 400 if spec.t_steps is None else spec.t_steps
    if steps < 2:
        raise SpecError("time grid needs at least 2 steps")
    return np.linspace(0.0, t_max, steps)


def _initial_amplitudes(spec: RunSpec) -> dynamics.AmplitudeState:
    try:
        c_eg = complex(spec.c_eg) if spec.c_eg is not None else 1.0 + 0.0j
        c_ge = complex(spec.c_ge) if spec.c_ge is not None else 0.0j
    except ValueError as exc:
        raise SpecError(f"cannot parse initial amplitude: {exc}") from exc
    return dynamics.AmplitudeState(c_eg, c_ge)


def _coeff_row(theta: float, coeffs) -> tuple:
    return (
        theta,
        coeffs.lamb_shifts[0],
        coeffs.lamb_shifts[1],
        coeffs.exchange[0, 1],
        coeffs.individual_decay[0],
        coeffs.individual_decay[1],
        coeffs.collective_decay[0, 1],
    )


_COEFF_COLUMNS = ["theta", "domega_a", "domega_b", "g_ab", "Gamma_a", "Gamma_b", "Gamma_coll"]


def run_coeffs(spec: RunSpec) -> int:
    """Write the coefficient table (one row per theta, or one row per layout)."""
    kind, source = _resolve_source(spec)
    if spec.out is None:
        raise SpecError("coeffs requires --out")
    if kind == "config":
        rows = [
            _coeff_row(theta, canonical_coefficients(source, spec.gamma, theta))
            for theta in _theta_grid(spec)
        ]
    else:
        if source.n_atoms != 2:
            raise SpecError("the coefficient table schema covers exactly two atoms")
        rows = [_coeff_row(float("nan"), general_coefficients(source))]
    _write_csv(spec.out, spec, _COEFF_COLUMNS, rows)
    return 0


def _coeffs_at(spec: RunSpec):
    kind, source = _resolve_source(spec)
    if kind == "config":
        if spec.theta is None:
            raise SpecError("this command requires --theta with --config")
        return canonical_coefficients(source, spec.gamma, spec.theta), source
    if source.n_atoms != 2:
        raise SpecError("trajectories are defined for two-atom systems")
    return general_coefficients(source), None


def run_evolve(spec: RunSpec) -> int:
    """Write one trajectory: amplitudes, populations, or closed-form values."""
    if spec.out is None:
        raise SpecError("evolve requires --out")
    method = spec.method or "effective"
    coeffs, kind = _coeffs_at(spec)
    if method == "analytic" and kind != Configuration.BRAIDED:
        raise SpecError("--method analytic is only defined for --config braided")
    initial = _initial_amplitudes(spec)

    if method == "effective":
        times = _time_grid(spec)
        record = dynamics.amplitude_trajectory(initial, coeffs, times)
        rows = [
            (t, s[0].real, s[0].imag, s[1].real, s[1].imag, c)
            for t, s, c in zip(record.times, record.states, record.concurrence)
        ]
        _write_csv(spec.out, spec, ["t", "re_ceg", "im_ceg", "re_cge", "im_cge", "concurrence"], rows)
    elif method == "analytic":
        times = _time_grid(spec)
        values = analytic.closed_form_concurrence_braided(spec.theta, spec.gamma, times)
        fallback = analytic.uses_ode_fallback(spec.theta)
        _write_csv(
            spec.out,
            spec,
            ["t", "concurrence"],
            list(zip(times, values)),
            extra_header=[f"ode_fallback: {str(fallback).lower()}"],
        )
    elif method == "lindblad":
        t_max = 4.0 if spec.t_max is None else spec.t_max
        dt = spec.dt if spec.dt is not None else dynamics.recommended_timestep(coeffs, spec.gamma)
        rho0 = dynamics.density_from_amplitudes(initial)
        record = dynamics.evolve_lindblad(rho0, coeffs, t_max, dt)
        rows = [
            (t, rho[0, 0].real, rho[1, 1].real, rho[2, 2].real, rho[3, 3].real, c)
            for t, rho, c in zip(record.times, record.states, record.concurrence)
        ]
        _write_csv(spec.out, spec, ["t", "p_ee", "p_eg", "p_ge", "p_gg", "concurrence"], rows)
    else:
        raise SpecError(f"unknown method {method!r}")
    return 0


def _sweep_column(kind_value: str, gamma: float, theta: float, times, method: str) -> list[float]:
    coeffs = canonical_coefficients(Configuration(kind_value), gamma, theta)
    times = np.asarray(times)
    if method == "analytic":
        return list(analytic.closed_form_concurrence_braided(theta, gamma, times))
    if method == "lindblad":
        spacing = times[1] - times[0]
        ratio = max(1, int(math.ceil(spacing / dynamics.recommended_timestep(coeffs, gamma))))
        record = dynamics.evolve_lindblad(
            dynamics.density_from_amplitudes(dynamics.AmplitudeState(1.0, 0.0)),
            coeffs,
            t_max=float(times[-1]),
            dt=spacing / ratio,
            store_every=ratio,
        )
        return list(record.concurrence)
    record = dynamics.amplitude_trajectory(dynamics.AmplitudeState(1.0, 0.0), coeffs, times)
    return list(record.concurrence)


def _sweep_chunk(payload) -> list[list[float]]:
    kind_value, gamma, thetas, times, method = payload
    return [_sweep_column(kind_value, gamma, theta, times, method) for theta in thetas]


def run_sweep(spec: RunSpec, workers: int = 1) -> int:
    """Write concurrence over a theta x time grid, one row per cell."""
    if spec.out is None:
        raise SpecError("sweep requires --out")
    kind, source = _resolve_source(spec)
    if kind != "config":
        raise SpecError("sweep ranges over theta and needs a canonical --config")
    method = spec.method or "effective"
    if method == "analytic" and source != Configuration.BRAIDED:
        raise SpecError("--method analytic is only defined for --config braided")
    if method not in ("effective", "analytic", "lindblad"):
        raise SpecError(f"unknown method {method!r}")
    thetas = _theta_grid(spec)
    times = _time_grid(spec)

    if workers > 1:
        n_chunks = min(len(thetas), workers * 4)
        bounds = np.array_split(np.arange(len(thetas)), n_chunks)
        payloads = [
            (source.value, spec.gamma, [float(thetas[i]) for i in idx], list(map(float, times)), method)
            for idx in bounds
            if len(idx)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_chunk, payloads))
        columns = [col for chunk in chunks for col in chunk]
    else:
        columns = [
            _sweep_column(source.value, spec.gamma, float(theta), times, method)
            for theta in thetas
        ]

    rows = []
    for theta, col in zip(thetas, columns):
        rows.extend((float(theta), float(t), float(c)) for t, c in zip(times, col))
    _write_csv(spec.out, spec, ["theta", "t", "concurrence"], rows)
    return 0


def run_dfi_scan(spec: RunSpec) -> int:
    """Scan a canonical configuration for DFI points and write a JSON report."""
    kind, source = _resolve_source(spec)
    if kind != "config":
        raise SpecError("dfi-scan supports the canonical configurations only")
    report = dfi.scan_dfi(
        source,
        gamma=spec.gamma,
        theta_min=0.0 if spec.theta_min is None else spec.theta_min,
        theta_max=TWO_PI if spec.theta_max is None else spec.theta_max,
        grid=10_000 if spec.grid is None else spec.grid,
        tol_decay=spec.tol_decay,
        tol_exchange=spec.tol_exchange,
    )
    payload = {
        "config": source.value,
        "points": [
            {"theta": t, "residual": r, "g": g}
            for t, r, g in zip(report.theta_points, report.residual_decay, report.exchange_at_point)
        ],
    }
    if spec.out is None:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _write_json(spec.out, spec, payload)
    return 0


_COEFF_NAMES = ["domega_a", "domega_b", "g_ab", "Gamma_a", "Gamma_b", "Gamma_coll"]


def _as_vector(coeffs) -> np.ndarray:
    return np.array(_coeff_row(0.0, coeffs)[1:])


def run_verify_slh(spec: RunSpec) -> int:
    """Compare network-composed coefficients against the direct formulas."""
    kind, source = _resolve_source(spec)
    if kind == "config":
        if spec.theta is None:
            raise SpecError("verify-slh requires --theta with --config")
        layout = build_canonical(CanonicalConfig(source, spec.gamma, spec.theta))
        reference = {
            "closed_form": canonical_coefficients(source, spec.gamma, spec.theta),
            "general": general_coefficients(layout),
        }
    else:
        layout = source
        reference = {"general": general_coefficients(layout)}
    extracted = slh.extract_coefficients(slh.build_network(layout), layout)

    tol = 1e-10 if spec.tol is None else spec.tol
    two_atom = layout.n_atoms == 2
    max_diff = 0.0
    for name, ref in reference.items():
        for attr in ("lamb_shifts", "exchange", "individual_decay", "collective_decay"):
            diff = float(np.abs(getattr(ref, attr) - getattr(extracted, attr)).max())
            max_diff = max(max_diff, diff)
        if two_atom:
            print(f"{name}: " + "  ".join(
                f"{n}={_fmt(v)}" for n, v in zip(_COEFF_NAMES, _as_vector(ref))
            ))
    if two_atom:
        print("slh:         " + "  ".join(
            f"{n}={_fmt(v)}" for n, v in zip(_COEFF_NAMES, _as_vector(extracted))
        ))
    print(f"max_abs_diff={_fmt(max_diff)} tol={_fmt(tol)}")
    if spec.out is not None:
        _write_json(spec.out, spec, {"max_abs_diff": max_diff, "tol": tol,
                                     "within_tol": bool(max_diff <= tol)})
    return 0 if max_diff <= tol else 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the exit-code contract reserves
    # 2 for numerical failures, so route usage errors through SpecError
    def error(self, message):
        raise SpecError(message)


def _add_common(p: argparse.ArgumentParser, theta_single=False, theta_range=False,
                times=False, method=False) -> None:
    p.add_argument("--config", choices=[c.value for c in Configuration],
                   help="canonical two-atom configuration")
    p.add_argument("--layout", dest="layout_path", metavar="JSON",
                   help="path to a custom layout file")
    p.add_argument("--gamma", type=float, default=1.0, help="reference decay rate (default 1)")
    p.add_argument("--theta-over-pi", action="store_true",
                   help="interpret all theta values as multiples of pi")
    if theta_single:
        p.add_argument("--theta", type=float, help="phase shift between adjacent points")
    if theta_range:
        p.add_argument("--theta-min", type=float, help="range start (default 0)")
        p.add_argument("--theta-max", type=float, help="range end (default 2*pi)")
        p.add_argument("--theta-steps", type=int, help="grid points (default 400)")
    if times:
        p.add_argument("--t-max", type=float, help="time horizon in 1/gamma (default 4)")
        p.add_argument("--dt", type=float, help="time step (default: method-dependent)")
        p.add_argument("--t-steps", type=int, help="time grid points when --dt absent (default 400)")
    if method:
        p.add_argument("--method", choices=["lindblad", "effective", "analytic"],
                       default="effective", help="evolution method (default effective)")
    p.add_argument("--out", help="output file path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gawsim", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"gawsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="coefficient table over theta (CSV)")
    _add_common(p, theta_range=True)

    p = sub.add_parser("evolve", help="single trajectory at fixed theta (CSV)")
    _add_common(p, theta_single=True, times=True, method=True)
    p.add_argument("--c-eg", help="initial c_eg amplitude (complex, default 1)")
    p.add_argument("--c-ge", help="initial c_ge amplitude (complex, default 0)")

    p = sub.add_parser("sweep", help="concurrence over a theta x time grid (CSV)")
    _add_common(p, theta_range=True, times=True, method=True)
    p.add_argument("--workers", type=int,
                   help="worker processes (default: CPU count; env GAW_SEED_WORKERS overrides)")

    p = sub.add_parser("dfi-scan", help="locate DFI phase shifts (JSON)")
    _add_common(p, theta_range=True)
    p.add_argument("--grid", type=int, help="scan grid points (default 10000)")
    p.add_argument("--tol-decay", type=float, help="decay tolerance (default 1e-9 * gamma)")
    p.add_argument("--tol-exchange", type=float, help="exchange tolerance (default 1e-3 * gamma)")

    p = sub.add_parser("verify-slh", help="cross-check the network composition")
    _add_common(p, theta_single=True)
    p.add_argument("--tol", type=float, help="max allowed coefficient difference (default 1e-10)")

    return parser


def _resolve_workers(flag_value: int | None) -> int:
    env = os.environ.get("GAW_SEED_WORKERS")
    if env is not None:
        try:
            value = int(env)
        except ValueError as exc:
            raise SpecError(f"GAW_SEED_WORKERS must be an integer, got {env!r}") from exc
    elif flag_value is not None:
        value = flag_value
    else:
        value = os.cpu_count() or 1
    if value < 1:
        raise SpecError("worker count must be >= 1")
    return value


def _spec_from_args(args: argparse.Namespace) -> RunSpec:
    scale = math.pi if getattr(args, "theta_over_pi", False) else 1.0
    spec = RunSpec(command=args.command, configuration=getattr(args, "config", None),
                   layout_path=getattr(args, "layout_path", None), gamma=args.gamma)
    for name in ("theta", "theta_min", "theta_max"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(spec, name, value * scale)
    for name in ("theta_steps", "t_max", "dt", "t_steps", "method", "grid",
                 "tol_decay", "tol_exchange", "tol", "c_eg", "c_ge", "out"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(spec, name, value)
    return spec


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.gamma <= 0:
            raise SpecError("gamma must be > 0")
        spec = _spec_from_args(args)
        if spec.command == "coeffs":
            return run_coeffs(spec)
        if spec.command == "evolve":
            return run_evolve(spec)
        if spec.command == "sweep":
            return run_sweep(spec, workers=_resolve_workers(getattr(args, "workers", None)))
        if spec.command == "dfi-scan":
            return run_dfi_scan(spec)
        if spec.command == "verify-slh":
            return run_verify_slh(spec)
        raise SpecError(f"unknown command {spec.command!r}")
    except (SpecError, LayoutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
