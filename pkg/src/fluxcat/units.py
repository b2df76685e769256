"""Unit whitelist for catalog quantities.  Everything is converted to SI on parse."""

from __future__ import annotations

import re

from .constants import EV, MEV

# kind -> {unit: factor to SI}
UNITS = {
    "length": {"m": 1.0, "μm": 1e-6, "um": 1e-6, "nm": 1e-9},
    "current": {"A": 1.0, "μA": 1e-6, "uA": 1e-6, "nA": 1e-9},
    "area": {"m²": 1.0, "m^2": 1.0, "μm²": 1e-12, "um^2": 1e-12},
    "velocity": {"m/s": 1.0},
    "energy": {"J": 1.0, "eV": EV, "meV": MEV},
}

SI_UNIT = {"length": "m", "current": "A", "area": "m²", "velocity": "m/s", "energy": "J"}


class UnitError(ValueError):
    pass


def _normalise(unit: str) -> str:
    # micro sign (U+00B5) and Greek mu (U+03BC) are both accepted
    return unit.replace("µ", "μ")


def factor(kind: str, unit: str) -> float:
    table = UNITS[kind]
    u = _normalise(unit)
    if u not in table:
        raise UnitError(f"unit {unit!r} not allowed for {kind}; expected one of {sorted(table)}")
    return table[u]


def to_si(value: float, unit: str, kind: str) -> float:
    return value * factor(kind, unit)


_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S+)\s*$")


def parse_quantity(text: str, kind: str) -> float:
    """Parse '900 nA' or '20um' into an SI float."""
    m = _QUANTITY.match(text)
    if not m:
        raise UnitError(f"cannot parse quantity {text!r}")
    return to_si(float(m.group(1)), m.group(2), kind)
