"""Human-readable tables and CSV/JSON serialisation of results.

Tables round to 3 significant figures (cat sizes below 1000 to the nearest
integer, as published) and show the raw value alongside; CSV and JSON carry
shortest round-trip float reprs.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .device import CatSizeReport, _endpoints

_PREFIXES = [(1e-9, "n"), (1e-6, "μ"), (1e-3, "m"), (1.0, "")]


def sig(x: float, digits: int = 3) -> str:
    """Round to significant figures, plain notation inside [1e-3, 1e6)."""
    if x == 0 or not math.isfinite(x):
        return "0" if x == 0 else str(x)
    if 1e-3 <= abs(x) < 1e6:
        decimals = digits - 1 - math.floor(math.log10(abs(x)))
        value = round(x, decimals)
        if decimals <= 0:
            return str(int(value))
        # rounding can carry into the next decade
        decimals = max(digits - 1 - math.floor(math.log10(abs(value))), 0)
        return _trim(f"{value:.{decimals}f}")
    mant, exp = f"{x:.{digits - 1}e}".split("e")
    return f"{_trim(mant)}e{int(exp)}"


def _trim(text: str) -> str:
    return text.rstrip("0").rstrip(".") if "." in text else text


def si(x: float, unit: str, digits: int = 3) -> str:
    """Value with an SI prefix, e.g. 9e-7 A -> '900 nA'."""
    if x == 0:
        return f"0 {unit}"
    scale, prefix = _PREFIXES[0]
    for s, p in _PREFIXES:
        if abs(x) >= s:
            scale, prefix = s, p
    return f"{sig(x / scale, digits)} {prefix}{unit}"


def si_range(x, unit: str) -> str:
    ends = _endpoints(x)
    if len(ends) == 1:
        return si(ends[0], unit)
    # common prefix for both ends, as in "2–3 μA"
    lo, hi = (si(v, unit).split(" ") for v in ends)
    if lo[1] == hi[1]:
        return f"{lo[0]}–{hi[0]} {hi[1]}"
    return f"{si(ends[0], unit)}–{si(ends[1], unit)}"


def display_count(x: float) -> str:
    if not math.isfinite(x):
        return "unbounded"
    if abs(x) < 1000:
        return str(int(round(x)))
    return sig(x, 3)


def _join(x, fmt) -> str:
    if x is None:
        return "n/a"
    return "–".join(fmt(v) for v in _endpoints(x))


def format_table(headers, rows) -> str:
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) for i, h in enumerate(headers)]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def reports_table(reports: list[CatSizeReport]) -> str:
    headers = ["Exp.", "Mat.", "v_F [m/s]", "L [μm]", "δI_p", "Δμ/μ_B", "ΔN_tot", "ΔN_tot (raw)", "N/ΔN_tot"]
    rows = []
    for r in reports:
        inp = r.inputs
        rows.append([
            r.device,
            r.material,
            sig(inp["fermi_velocity_m_per_s"]),
            sig(inp["loop_length_m"] * 1e6),
            si_range(inp["persistent_current_difference_A"], "A"),
            _join(r.delta_mu_over_muB, sig),
            _join(r.delta_N_tot, display_count),
            _join(r.delta_N_tot, lambda v: f"{v:.6g}"),
            _join(r.measurement_bound, lambda v: "unbounded" if math.isinf(v) else sig(v)),
        ])
    out = format_table(headers, rows)
    notes = sorted({a for r in reports for a in r.assumptions if "inferred" in a})
    for n in notes:
        out += f"note: {n}\n"
    return out


CSV_FIELDS = [
    "device", "material", "endpoint", "fermi_velocity_m_per_s", "loop_length_m",
    "persistent_current_difference_A", "enclosed_area_m2", "wire_cross_section_m2",
    "delta_N_tot", "delta_mu_over_muB", "measurement_bound", "validity_status",
]


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def reports_csv(reports: list[CatSizeReport]) -> str:
    """One row per device per current endpoint."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        currents = _endpoints(r.inputs["persistent_current_difference_A"])
        labels = ["value"] if len(currents) == 1 else ["low", "high"]

        def pick(x, i):
            if x is None:
                return None
            ends = _endpoints(x)
            return ends[i] if len(ends) > 1 else ends[0]

        for i, label in enumerate(labels):
            n_tot = pick(r.delta_N_tot, i)
            bound = None
            if r.measurement_bound is not None and r.total_electrons is not None:
                bound = math.inf if n_tot == 0 else r.total_electrons / n_tot
            w.writerow({k: _csv_value(v) for k, v in {
                "device": r.device,
                "material": r.material,
                "endpoint": label,
                "fermi_velocity_m_per_s": r.inputs["fermi_velocity_m_per_s"],
                "loop_length_m": r.inputs["loop_length_m"],
                "persistent_current_difference_A": currents[i],
                "enclosed_area_m2": r.inputs["enclosed_area_m2"],
                "wire_cross_section_m2": r.inputs["wire_cross_section_m2"],
                "delta_N_tot": n_tot,
                "delta_mu_over_muB": pick(r.delta_mu_over_muB, i),
                "measurement_bound": bound,
                "validity_status": None if r.validity is None else r.validity.status,
            }.items()})
    return buf.getvalue()


def records_csv(records: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for rec in records:
        w.writerow({k: _csv_value(rec.get(k)) for k in fields})
    return buf.getvalue()


def to_json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
