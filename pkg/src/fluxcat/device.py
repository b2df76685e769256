"""Devices, the material/device catalog, and cat-size reports.

The headline number is

    delta_N_tot = 3 L dI_p / (4 e v_F)

for a loop of length L whose branches differ in persistent current by dI_p.
It depends on neither the gap, the electron density nor the wire
cross-section.  Current ranges such as "2-3 uA" are carried as
``(low, high)`` tuples and every linear output maps endpoint-wise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Union

import jsonschema

from . import units
from .bcs import Material
from .constants import CODATA_VERSION, E_CHARGE, MU_B
from .mode_shift import RATIO_INVALID, RATIO_WARN, ValidityDiagnostics, validity

Value = Union[float, tuple]

AREA_PROVENANCE = "inferred from the published Δμ/δI_p ratio"


class CatalogError(ValueError):
    """Schema or semantic error in a catalog file, with its position."""

    def __init__(self, message, path=(), line=None, column=None, source=None):
        self.path = tuple(path)
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:{column}:"
        field_path = _format_path(self.path)
        prefix = " ".join(p for p in (where, field_path + ":" if field_path else "") if p)
        super().__init__(f"{prefix} {message}".strip())
        self.message = message


def _format_path(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


@dataclass(frozen=True)
class Device:
    name: str
    material_ref: str
    loop_length: float  # m
    persistent_current_difference: Value  # A, or (low, high)
    enclosed_area: float | None = None  # m^2
    wire_cross_section: float | None = None  # m^2
    provenance: str = ""

    def __post_init__(self):
        if not self.loop_length > 0:
            raise ValueError(f"{self.name}: loop_length must be positive")
        dI = self.persistent_current_difference
        if isinstance(dI, (tuple, list)):
            if len(dI) != 2:
                raise ValueError(f"{self.name}: current range needs two endpoints")
            dI = (float(dI[0]), float(dI[1]))
            if dI[0] > dI[1]:
                raise ValueError(f"{self.name}: current range low > high")
            object.__setattr__(self, "persistent_current_difference", dI)
        if min(_endpoints(dI)) < 0:
            raise ValueError(f"{self.name}: persistent_current_difference must be >= 0")
        for attr in ("enclosed_area", "wire_cross_section"):
            v = getattr(self, attr)
            if v is not None and not v > 0:
                raise ValueError(f"{self.name}: {attr} must be positive")


def _endpoints(x: Value) -> tuple:
    return tuple(x) if isinstance(x, tuple) else (x,)


def _map(f, x: Value) -> Value:
    if isinstance(x, tuple):
        return tuple(f(v) for v in x)
    return f(x)


def _cat_size(loop_length: float, current: float, fermi_velocity: float) -> float:
    return 3.0 * loop_length * current / (4.0 * E_CHARGE * fermi_velocity)


def delta_N_tot(material: Material, device: Device) -> Value:
    """Total occupation-number difference between the branches."""
    if material is None:
        raise ValueError(f"{device.name}: missing material")
    return _map(lambda i: _cat_size(device.loop_length, i, material.fermi_velocity),
                device.persistent_current_difference)


def delta_mu(device: Device) -> Value | None:
    """Magnetic-moment difference A dI_p in Bohr magnetons; None without an area."""
    if device.enclosed_area is None:
        return None
    return _map(lambda i: device.enclosed_area * i / MU_B, device.persistent_current_difference)


def total_electrons(material: Material, device: Device) -> float | None:
    if device.wire_cross_section is None:
        return None
    return material.electron_density * device.loop_length * device.wire_cross_section


def measurement_bound(material: Material, device: Device) -> Value | None:
    """N / delta_N_tot; None without a cross-section, inf when delta_N_tot = 0."""
    n_total = total_electrons(material, device)
    if n_total is None:
        return None
    bound = _map(lambda dn: math.inf if dn == 0 else n_total / dn, delta_N_tot(material, device))
    if isinstance(bound, tuple):
        bound = tuple(sorted(bound))
    return bound


def inferred_delta_v(material: Material, device: Device) -> Value | None:
    """Superfluid-velocity difference dI_p / (e rho_e sigma) for a uniform wire."""
    if device.wire_cross_section is None:
        return None
    return _map(lambda i: i / (E_CHARGE * material.electron_density * device.wire_cross_section),
                device.persistent_current_difference)


# ---------------------------------------------------------------------------
# Catalog


@dataclass(frozen=True)
class Catalog:
    materials: dict
    devices: dict
    description: str = ""

    def material_for(self, device: Device) -> Material:
        return self.materials[device.material_ref]


class _LocatingDecoder(json.JSONDecoder):
    """JSON decoder that records the source offset of every object and array."""

    def __init__(self):
        super().__init__()
        self.offsets = {}
        self._keep = []

        def parse_object(s_and_end, *args):
            obj, end = json.decoder.JSONObject(s_and_end, *args)
            self._remember(obj, s_and_end[1] - 1)
            return obj, end

        def parse_array(s_and_end, scan_once):
            arr, end = json.decoder.JSONArray(s_and_end, scan_once)
            self._remember(arr, s_and_end[1] - 1)
            return arr, end

        self.parse_object = parse_object
        self.parse_array = parse_array
        self.scan_once = json.scanner.py_make_scanner(self)

    def _remember(self, obj, offset):
        self._keep.append(obj)
        self.offsets[id(obj)] = offset


def _line_col(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _locate(text, doc, offsets, path):
    """Best source position for a JSON path: the key itself, else the nearest container."""
    node = doc
    pos = offsets.get(id(doc), 0)
    for p in path:
        if isinstance(node, dict) and p in node:
            start = offsets.get(id(node), pos)
            found = text.find(json.dumps(p, ensure_ascii=False), start)
            pos = found if found >= 0 else start
            node = node[p]
        elif isinstance(node, list) and isinstance(p, int) and 0 <= p < len(node):
            node = node[p]
            pos = offsets.get(id(node), pos)
        else:
            break
        if isinstance(node, (dict, list)) and id(node) in offsets and isinstance(p, int):
            pos = offsets[id(node)]
    return _line_col(text, pos)


@lru_cache(maxsize=None)
def _schema(name: str) -> dict:
    return json.loads(resources.files("fluxcat").joinpath("data").joinpath(name).read_text(encoding="utf-8"))


_MATERIAL_KINDS = {"fermi_velocity": "velocity", "gap": "energy"}
_DEVICE_KINDS = {
    "loop_length": "length",
    "persistent_current_difference": "current",
    "enclosed_area": "area",
    "wire_cross_section": "area",
}


def parse_catalog(text: str, source: str | None = None) -> Catalog:
    """Validate and convert a catalog document (JSON text) to SI objects."""
    decoder = _LocatingDecoder()
    try:
        doc = decoder.decode(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"invalid JSON: {exc.msg}", (), exc.lineno, exc.colno, source) from None

    def fail(message, path):
        line, col = _locate(text, doc, decoder.offsets, path)
        raise CatalogError(message, path, line, col, source)

    validator = jsonschema.Draft202012Validator(_schema("catalog.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        fail(err.message, list(err.absolute_path))

    def quantity(entry, key, kind, path):
        q = entry[key]
        try:
            f = units.factor(kind, q["unit"])
        except units.UnitError as exc:
            fail(str(exc), path + [key, "unit"])
        value = q["value"]
        if isinstance(value, list):
            return tuple(v * f for v in value)
        return value * f

    materials = {}
    for i, entry in enumerate(doc["materials"]):
        path = ["materials", i]
        if entry["name"] in materials:
            fail(f"duplicate material {entry['name']!r}", path + ["name"])
        vals = {k: quantity(entry, k, kind, path) for k, kind in _MATERIAL_KINDS.items()}
        for k, v in vals.items():
            if not v > 0:
                fail(f"{k} must be positive", path + [k, "value"])
        try:
            materials[entry["name"]] = Material(entry["name"], vals["fermi_velocity"], vals["gap"],
                                                provenance=entry.get("provenance", ""))
        except ValueError as exc:
            fail(str(exc), path)

    devices = {}
    for i, entry in enumerate(doc["devices"]):
        path = ["devices", i]
        if entry["name"] in devices:
            fail(f"duplicate device {entry['name']!r}", path + ["name"])
        if entry["material"] not in materials:
            fail(f"unknown material {entry['material']!r}", path + ["material"])
        vals = {k: quantity(entry, k, kind, path) for k, kind in _DEVICE_KINDS.items() if k in entry}
        for k, v in vals.items():
            ends = v if isinstance(v, tuple) else (v,)
            bad = min(ends) < 0 if k == "persistent_current_difference" else not min(ends) > 0
            if bad:
                fail(f"{k} must be {'non-negative' if k == 'persistent_current_difference' else 'positive'}",
                     path + [k, "value"])
        try:
            devices[entry["name"]] = Device(entry["name"], entry["material"], provenance=entry.get("provenance", ""),
                                            **vals)
        except ValueError as exc:
            fail(str(exc), path)

    return Catalog(materials, devices, doc.get("description", ""))


def load_catalog(path=None) -> Catalog:
    """Load a catalog file; with no path, the bundled experiment presets."""
    if path is None:
        text = resources.files("fluxcat").joinpath("data").joinpath("presets.json").read_text(encoding="utf-8")
        return parse_catalog(text, "presets.json")
    path = Path(path)
    return parse_catalog(path.read_text(encoding="utf-8"), str(path))


def catalog_to_dict(catalog: Catalog) -> dict:
    """SI-unit document that :func:`parse_catalog` reads back losslessly."""
    def q(value, kind):
        v = list(value) if isinstance(value, tuple) else value
        return {"value": v, "unit": units.SI_UNIT[kind]}

    materials = []
    for m in catalog.materials.values():
        entry = {"name": m.name, "fermi_velocity": q(m.fermi_velocity, "velocity"), "gap": q(m.gap, "energy")}
        if m.provenance:
            entry["provenance"] = m.provenance
        materials.append(entry)
    devices = []
    for d in catalog.devices.values():
        entry = {
            "name": d.name,
            "material": d.material_ref,
            "loop_length": q(d.loop_length, "length"),
            "persistent_current_difference": q(d.persistent_current_difference, "current"),
        }
        for k in ("enclosed_area", "wire_cross_section"):
            if getattr(d, k) is not None:
                entry[k] = q(getattr(d, k), "area")
        if d.provenance:
            entry["provenance"] = d.provenance
        devices.append(entry)
    doc = {"schema_version": 1}
    if catalog.description:
        doc["description"] = catalog.description
    doc["materials"] = materials
    doc["devices"] = devices
    return doc


def dump_catalog(catalog: Catalog, path=None) -> str:
    text = json.dumps(catalog_to_dict(catalog), indent=2, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class CatSizeReport:
    device: str
    material: str
    delta_N_tot: Value
    delta_mu_over_muB: Value | None
    measurement_bound: Value | None
    total_electrons: float | None
    validity: ValidityDiagnostics | None
    inferred_delta_v: Value | None
    inputs: dict
    not_computable: dict = field(default_factory=dict)
    assumptions: tuple = ()

    def to_dict(self) -> dict:
        return {
            "device": self.device,
            "material": self.material,
            "delta_N_tot": _encode(self.delta_N_tot),
            "delta_mu_over_muB": _encode(self.delta_mu_over_muB),
            "measurement_bound": _encode(self.measurement_bound),
            "total_electrons": _encode(self.total_electrons),
            "validity": None if self.validity is None else self.validity.to_dict(),
            "inferred_delta_v": _encode(self.inferred_delta_v),
            "inputs": {k: _encode(v) for k, v in self.inputs.items()},
            "not_computable": dict(self.not_computable),
            "assumptions": list(self.assumptions),
            "metadata": {
                "constants": CODATA_VERSION,
                "validity_thresholds": {"warn": RATIO_WARN, "invalid": RATIO_INVALID},
                "formula": "delta_N_tot = 3 L dI_p / (4 e v_F)",
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CatSizeReport":
        v = d["validity"]
        return cls(
            device=d["device"],
            material=d["material"],
            delta_N_tot=_decode(d["delta_N_tot"]),
            delta_mu_over_muB=_decode(d["delta_mu_over_muB"]),
            measurement_bound=_decode(d["measurement_bound"]),
            total_electrons=_decode(d["total_electrons"]),
            validity=None if v is None else ValidityDiagnostics(v["expansion_ratio"], v["status"]),
            inferred_delta_v=_decode(d["inferred_delta_v"]),
            inputs={k: _decode(x) for k, x in d["inputs"].items()},
            not_computable=dict(d["not_computable"]),
            assumptions=tuple(d["assumptions"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "CatSizeReport":
        return cls.from_dict(json.loads(text))

    def recomputed_delta_N_tot(self) -> Value:
        """delta_N_tot evaluated again from the echoed inputs."""
        inp = self.inputs
        return _map(lambda i: _cat_size(inp["loop_length_m"], i, inp["fermi_velocity_m_per_s"]),
                    inp["persistent_current_difference_A"])


def _encode(x):
    if isinstance(x, tuple):
        return [_encode(v) for v in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _decode(x):
    if isinstance(x, list):
        return tuple(_decode(v) for v in x)
    if x == "inf":
        return math.inf
    return x


def full_report(material: Material, device: Device) -> CatSizeReport:
    """Every computable quantity for one device, with missing inputs named."""
    missing = {}
    assumptions = [
        "T = 0",
        "first order in |v_s|/v_crit",
        "free-electron k_F = m v_F / hbar with bare electron mass",
    ]
    dmu = delta_mu(device)
    if dmu is None:
        missing["delta_mu_over_muB"] = "enclosed_area"
    elif "inferred" in device.provenance:
        assumptions.append(f"enclosed area {AREA_PROVENANCE}")
    bound = measurement_bound(material, device)
    n_total = total_electrons(material, device)
    dv = inferred_delta_v(material, device)
    diag = None
    if device.wire_cross_section is None:
        missing["measurement_bound"] = "wire_cross_section"
        missing["total_electrons"] = "wire_cross_section"
        missing["validity"] = "wire_cross_section"
        missing["inferred_delta_v"] = "wire_cross_section"
    else:
        assumptions.append("uniform current over the wire cross-section; N = rho_e L sigma")
        worst = max(_endpoints(dv))
        diag = validity(material, worst)
    inputs = {
        "loop_length_m": device.loop_length,
        "persistent_current_difference_A": device.persistent_current_difference,
        "fermi_velocity_m_per_s": material.fermi_velocity,
        "gap_J": material.gap,
        "electron_density_per_m3": material.electron_density,
        "enclosed_area_m2": device.enclosed_area,
        "wire_cross_section_m2": device.wire_cross_section,
    }
    return CatSizeReport(
        device=device.name,
        material=material.name,
        delta_N_tot=delta_N_tot(material, device),
        delta_mu_over_muB=dmu,
        measurement_bound=bound,
        total_electrons=n_total,
        validity=diag,
        inferred_delta_v=dv,
        inputs=inputs,
        not_computable=missing,
        assumptions=tuple(assumptions),
    )


def catalog_reports(catalog: Catalog, names=None) -> list:
    names = list(catalog.devices) if names is None else names
    out = []
    for name in names:
        if name not in catalog.devices:
            raise KeyError(f"no device named {name!r}")
        dev = catalog.devices[name]
        out.append(full_report(catalog.material_for(dev), dev))
    return out
