"""Command-line front end.

    fluxcat table1            reproduce the published experiment table
    fluxcat estimate FILE     cat-size reports for devices in a catalog file
    fluxcat verify-integral   q-space quadrature vs the closed-form local relation
    fluxcat lattice           brute-force lattice convergence study
    fluxcat sweep             delta_N_tot along a loop-length or current sweep

Exit codes: 0 success, 1 verification failed, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import replace

import numpy as np

from . import reporting
from .bcs import Material
from .device import CatalogError, catalog_reports, delta_mu, delta_N_tot, load_catalog
from .lattice import LatticeError, LatticeSpec, convergence_study
from .mode_shift import validity
from .qspace import (
    QuadratureSpec,
    delta_j_from_delta_v,
    delta_n_density_analytic,
    delta_n_density_numeric,
)
from .units import UnitError, parse_quantity

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _catalog(path):
    try:
        return load_catalog(path)
    except FileNotFoundError:
        raise InputError(f"catalog file not found: {path}") from None
    except CatalogError as exc:
        raise InputError(str(exc)) from None


def _format_reports(args, reports) -> str:
    if args.format == "json":
        return reporting.to_json([r.to_dict() for r in reports])
    if args.format == "csv":
        return reporting.reports_csv(reports)
    return reporting.reports_table(reports)


def cmd_table1(args) -> int:
    catalog = _catalog(args.catalog)
    _emit(args, _format_reports(args, catalog_reports(catalog)))
    return EXIT_OK


def cmd_estimate(args) -> int:
    catalog = _catalog(args.device_file)
    try:
        reports = catalog_reports(catalog, args.device or None)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    _emit(args, _format_reports(args, reports))
    return EXIT_OK


def _material(args) -> Material:
    catalog = _catalog(args.catalog)
    if args.material not in catalog.materials:
        raise InputError(f"unknown material {args.material!r}; available: {sorted(catalog.materials)}")
    mat = catalog.materials[args.material]
    if args.gap_over_fermi is not None:
        mat = Material.from_gap_ratio(mat.name, mat.fermi_velocity, args.gap_over_fermi,
                                      provenance=f"gap set to {args.gap_over_fermi} E_F")
    return mat


def verify_integral(material: Material, delta_v_ratio: float, spec: QuadratureSpec, threshold: float) -> dict:
    """Library form of ``verify-integral``."""
    dv = np.array([0.0, 0.0, delta_v_ratio * material.critical_velocity])
    numeric = delta_n_density_numeric(material, dv, spec, strict=False)
    analytic = delta_n_density_analytic(material, delta_j_from_delta_v(material, dv))
    err = abs(numeric - analytic) / analytic if analytic else 0.0
    return {
        "command": "verify-integral",
        "material": material.name,
        "fermi_velocity_m_per_s": material.fermi_velocity,
        "gap_J": material.gap,
        "gap_over_fermi": material.gap_ratio,
        "delta_v_ratio": delta_v_ratio,
        "delta_v_m_per_s": float(dv[2]),
        "validity": validity(material, dv).to_dict(),
        "quadrature": {
            "xi_cutoff": spec.xi_cutoff,
            "radial_points": spec.radial_points,
            "angular_points": spec.angular_points,
            "tail_correction": spec.tail_correction,
            "jacobian": spec.jacobian,
        },
        "numeric_per_m3": numeric,
        "analytic_per_m3": analytic,
        "relative_error": err,
        "threshold": threshold,
        "pass": err < threshold,
    }


def cmd_verify_integral(args) -> int:
    mat = _material(args)
    try:
        spec = QuadratureSpec(args.xi_cutoff, args.radial_points, args.angular_points,
                              not args.no_tail, args.jacobian)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = verify_integral(mat, args.delta_v_ratio, spec, args.threshold)
    if args.format == "json":
        text = reporting.to_json(result)
    elif args.format == "csv":
        text = reporting.records_csv([result], ["material", "gap_over_fermi", "delta_v_ratio",
                                                "numeric_per_m3", "analytic_per_m3", "relative_error", "pass"])
    else:
        text = (
            f"material          {mat.name} (gap/E_F = {reporting.sig(mat.gap_ratio)})\n"
            f"|dv|/v_crit       {reporting.sig(args.delta_v_ratio)}\n"
            f"numeric  dn       {result['numeric_per_m3']:.9e} 1/m^3\n"
            f"analytic dn       {result['analytic_per_m3']:.9e} 1/m^3\n"
            f"relative error    {result['relative_error']:.3e} (threshold {args.threshold:g})\n"
            f"result            {'PASS' if result['pass'] else 'FAIL'}\n"
        )
    _emit(args, text)
    return EXIT_OK if result["pass"] else EXIT_FAIL


def lattice_study(spec: LatticeSpec, levels: int, threshold: float = 0.05) -> dict:
    """Library form of ``lattice``."""
    results = convergence_study(spec, levels)
    exact_zero = results[0].delta_N_continuum_prediction == 0.0
    final = results[-1].relative_deviation
    devs = [r.relative_deviation for r in results]
    monotone = all(b <= a * 1.1 for a, b in zip(devs, devs[1:]))
    return {
        "command": "lattice",
        "gap_over_fermi": spec.material.gap_ratio,
        "delta_v_ratio": float(np.linalg.norm(spec.branch_pair.delta_v)) / spec.material.critical_velocity,
        "levels": [r.to_dict() for r in results],
        "exact_zero": exact_zero,
        "monotone_within_10pct": monotone,
        "threshold": threshold,
        "pass": bool(exact_zero or final < threshold),
    }


def cmd_lattice(args) -> int:
    try:
        spec = LatticeSpec.default(
            gap_over_fermi=args.gap_over_fermi,
            delta_v_ratio=args.delta_v_ratio,
            spacing_fraction=args.spacing_fraction,
            face_margin=args.face_margin,
            memory_limit=args.memory_limit,
        )
        if args.max_mode_index is not None:
            spec = replace(spec, max_mode_index=args.max_mode_index)
        result = lattice_study(spec, args.levels, args.threshold)
    except (LatticeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if args.format == "json":
        text = reporting.to_json(result)
    else:
        fields = ["max_mode_index", "box_length", "mode_count", "delta_N_lattice",
                  "delta_N_continuum_prediction", "relative_deviation"]
        if args.format == "csv":
            text = reporting.records_csv(result["levels"], fields)
        else:
            rows = [[i + 1, r["max_mode_index"], reporting.sig(r["mode_count"]),
                     f"{r['delta_N_lattice']:.6g}", f"{r['delta_N_continuum_prediction']:.6g}",
                     f"{r['relative_deviation']:.3e}"] for i, r in enumerate(result["levels"])]
            text = reporting.format_table(
                ["level", "M", "modes", "ΔN_lattice", "ΔN_continuum", "rel. deviation"], rows)
            if result["exact_zero"]:
                text += "zero branch velocity difference: exact-zero case\n"
            text += f"result: {'PASS' if result['pass'] else 'FAIL'} (final deviation < {args.threshold:g})\n"
    _emit(args, text)
    return EXIT_OK if result["pass"] else EXIT_FAIL


_SWEEP_KIND = {"loop_length": "length", "persistent_current_difference": "current"}


def sweep(catalog, device_name: str, param: str, start: float, stop: float, steps: int) -> dict:
    """Library form of ``sweep``: linear series of delta_N_tot (and delta_mu)."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not stop > start:
        raise ValueError("sweep range must satisfy to > from")
    if start < 0 or (param == "loop_length" and start <= 0):
        raise ValueError(f"{param} must be {'positive' if param == 'loop_length' else 'non-negative'}")
    if device_name not in catalog.devices:
        raise ValueError(f"no device named {device_name!r}")
    base = catalog.devices[device_name]
    mat = catalog.material_for(base)
    rows = []
    for value in np.linspace(start, stop, steps):
        dev = replace(base, **{param: float(value)})
        n = delta_N_tot(mat, dev)
        mu = delta_mu(dev)
        rows.append({
            "param_value": float(value),
            "delta_N_tot": list(n) if isinstance(n, tuple) else n,
            "delta_mu_over_muB": list(mu) if isinstance(mu, tuple) else mu,
        })
    return {"command": "sweep", "device": device_name, "material": mat.name, "param": param,
            "unit": "m" if param == "loop_length" else "A", "rows": rows}


def cmd_sweep(args) -> int:
    catalog = _catalog(args.catalog)
    try:
        kind = _SWEEP_KIND[args.param]
        start = parse_quantity(args.start, kind)
        stop = parse_quantity(args.stop, kind)
        result = sweep(catalog, args.device, args.param, start, stop, args.steps)
    except (UnitError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if args.format == "json":
        text = reporting.to_json(result)
    else:
        flat = []
        for r in result["rows"]:
            n, mu = r["delta_N_tot"], r["delta_mu_over_muB"]
            ends = n if isinstance(n, list) else [n]
            mus = mu if isinstance(mu, list) else [mu] * len(ends)
            for j, e in enumerate(ends):
                flat.append({"param_value": r["param_value"], "endpoint": ["value", "low", "high"][
                    0 if len(ends) == 1 else j + 1], "delta_N_tot": e, "delta_mu_over_muB": mus[j]})
        if args.format == "csv":
            text = reporting.records_csv(flat, ["param_value", "endpoint", "delta_N_tot", "delta_mu_over_muB"])
        else:
            unit = result["unit"]
            rows = [[reporting.si(f["param_value"], unit), f["endpoint"], reporting.display_count(f["delta_N_tot"]),
                     f"{f['delta_N_tot']:.6g}",
                     "n/a" if f["delta_mu_over_muB"] is None else reporting.sig(f["delta_mu_over_muB"])]
                    for f in flat]
            text = reporting.format_table([args.param, "endpoint", "ΔN_tot", "ΔN_tot (raw)", "Δμ/μ_B"], rows)
    _emit(args, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fluxcat", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["table", "csv", "json"], default="table")
        p.add_argument("--output", help="write to PATH instead of standard output")

    p = sub.add_parser("table1", help="reproduce the experiment table from the bundled presets")
    p.add_argument("--catalog", help="catalog file (default: bundled presets)")
    common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("estimate", help="cat-size reports for devices in a catalog file")
    p.add_argument("device_file")
    p.add_argument("--device", action="append", help="device name (repeatable; default: all)")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify-integral", help="quadrature of |delta n_q| vs 3|dj|/(4 e v_F)")
    p.add_argument("--catalog")
    p.add_argument("--material", default="Al")
    p.add_argument("--gap-over-fermi", type=float, help="override the gap as a fraction of E_F")
    p.add_argument("--delta-v-ratio", type=float, default=1e-3, help="|dv|/v_crit (default 1e-3)")
    p.add_argument("--xi-cutoff", type=float, default=50.0)
    p.add_argument("--radial-points", type=int, default=2048)
    p.add_argument("--angular-points", type=int, default=64)
    p.add_argument("--no-tail", action="store_true", help="disable the analytic tail correction")
    p.add_argument("--jacobian", choices=["leading", "exact"], default="leading")
    p.add_argument("--threshold", type=float, default=5e-3)
    common(p)
    p.set_defaults(func=cmd_verify_integral)

    p = sub.add_parser("lattice", help="brute-force lattice convergence study")
    p.add_argument("--gap-over-fermi", type=float, default=0.02)
    p.add_argument("--delta-v-ratio", type=float, default=0.01)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--spacing-fraction", type=float, default=0.25,
                   help="mode spacing in xi at the Fermi surface, in units of the gap")
    p.add_argument("--face-margin", type=float, default=10.0)
    p.add_argument("--max-mode-index", type=int)
    p.add_argument("--memory-limit", type=float, default=1.6e9, help="bytes")
    p.add_argument("--threshold", type=float, default=0.05)
    common(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("sweep", help="delta_N_tot along a parameter sweep")
    p.add_argument("--catalog")
    p.add_argument("--device", required=True, help="base device name")
    p.add_argument("--param", choices=sorted(_SWEEP_KIND), required=True)
    p.add_argument("--from", dest="start", required=True, help="quantity, e.g. '20 μm' or 20um")
    p.add_argument("--to", dest="stop", required=True)
    p.add_argument("--steps", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"fluxcat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
