"""Text format for scenario configs.

A config is a sectioned key-value file::

    [scenario]
    name = fig7-r1-left
    tags = in-range monotone-to-N
    note = ...

    [bank1]
    omega = 1.0
    lambda = 0.5
    Omega = 0.1
    N = 0.0

    [bank2]
    ...

    [coupling]
    mu_acm = 0.0
    mu_cm = 0.0

    [initial]
    a00 = 0.0+0.0i
    a10 = 0.0+0.0i
    a01 = 0.0+0.0i
    a11 = 1.0+0.0i

    [grid]
    t_max = 5.0
    points = 1001

Complex numbers are written ``re+imi``. Floats are written with ``repr`` so a
dump parses back to the identical value. ``[scenario]``, ``[coupling]`` and
``[grid]`` are optional.
"""
from __future__ import annotations

import configparser
import math
from pathlib import Path

from .bankmodel import BankParams, ConfigurationError, Coupling, InitialState, ModelSpec, TimeGrid
from .scenarios import TAGS, ScenarioSpec

__all__ = ["ConfigError", "DEFAULT_GRID", "dumps", "loads", "load", "format_complex", "parse_complex"]

DEFAULT_GRID = TimeGrid(10.0, 1001)

_SECTIONS = {
    "scenario": ("name", "tags", "note"),
    "bank1": ("omega", "lambda", "Omega", "N"),
    "bank2": ("omega", "lambda", "Omega", "N"),
    "coupling": ("mu_acm", "mu_cm"),
    "initial": ("a00", "a10", "a01", "a11"),
    "grid": ("t_max", "points"),
}


class ConfigError(ValueError):
    """Malformed or invalid config text."""


def _float(x: float) -> str:
    return repr(float(x))


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{_float(z.real)}{sign}{_float(abs(z.imag))}i"


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    elif "j" in s:
        raise ConfigError(f"complex literals use 'i', got {text!r}")
    try:
        z = complex(s)
    except ValueError:
        raise ConfigError(f"bad complex literal {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigError(f"non-finite complex literal {text!r}")
    return z


def _parse_float(section: str, key: str, text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {text!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"[{section}] {key}: must be finite")
    return x


def dumps(spec: ScenarioSpec) -> str:
    m = spec.model
    lines = [
        "[scenario]",
        f"name = {spec.name}",
        f"tags = {' '.join(spec.tags)}",
        f"note = {spec.note}",
        "",
    ]
    for label, bank in (("bank1", m.bank1), ("bank2", m.bank2)):
        lines += [
            f"[{label}]",
            f"omega = {_float(bank.omega)}",
            f"lambda = {_float(bank.lam)}",
            f"Omega = {_float(bank.Omega)}",
            f"N = {_float(bank.N)}",
            "",
        ]
    lines += [
        "[coupling]",
        f"mu_acm = {_float(m.coupling.mu_acm)}",
        f"mu_cm = {_float(m.coupling.mu_cm)}",
        "",
        "[initial]",
    ]
    for key in _SECTIONS["initial"]:
        lines.append(f"{key} = {format_complex(getattr(m.initial, key))}")
    lines += [
        "",
        "[grid]",
        f"t_max = {_float(spec.grid.t_max)}",
        f"points = {int(spec.grid.points)}",
        "",
    ]
    return "\n".join(lines)


def loads(text: str, default_name: str = "custom") -> ScenarioSpec:
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep 'omega' and 'Omega' apart
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}".splitlines()[0]) from None

    for section in cp.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        extra = set(cp[section]) - set(_SECTIONS[section])
        if extra:
            raise ConfigError(f"[{section}] unknown keys: {', '.join(sorted(extra))}")
    for section in ("bank1", "bank2", "initial"):
        if section not in cp:
            raise ConfigError(f"missing section [{section}]")

    def need(section, key):
        try:
            return cp[section][key]
        except KeyError:
            raise ConfigError(f"[{section}] missing key {key!r}") from None

    try:
        banks = []
        for label in ("bank1", "bank2"):
            vals = {k: _parse_float(label, k, need(label, k)) for k in _SECTIONS[label]}
            banks.append(BankParams(vals["omega"], vals["lambda"], vals["Omega"], vals["N"]))
        if "coupling" in cp:
            sec = cp["coupling"]
            coupling = Coupling(
                _parse_float("coupling", "mu_acm", sec.get("mu_acm", "0")),
                _parse_float("coupling", "mu_cm", sec.get("mu_cm", "0")),
            )
        else:
            coupling = Coupling()
        amps = {k: parse_complex(cp["initial"].get(k, "0")) for k in _SECTIONS["initial"]}
        initial = InitialState(**amps)
        if "grid" in cp:
            sec = cp["grid"]
            t_max = _parse_float("grid", "t_max", sec.get("t_max", repr(DEFAULT_GRID.t_max)))
            points_text = sec.get("points", str(DEFAULT_GRID.points))
            try:
                points = int(points_text)
            except ValueError:
                raise ConfigError(f"[grid] points: not an integer: {points_text!r}") from None
            grid = TimeGrid(t_max, points)
        else:
            grid = DEFAULT_GRID
    except ConfigurationError as exc:
        raise ConfigError(str(exc)) from None

    meta = cp["scenario"] if "scenario" in cp else {}
    name = meta.get("name", default_name).strip() or default_name
    tags = tuple(meta.get("tags", "").split())
    note = meta.get("note", "")
    unknown = [t for t in tags if t not in TAGS]
    if unknown:
        raise ConfigError(f"[scenario] unknown tags: {', '.join(unknown)}")
    return ScenarioSpec(name, ModelSpec(banks[0], banks[1], coupling, initial), grid, tags, note)


def load(path) -> ScenarioSpec:
    path = Path(path)
    return loads(path.read_text(), default_name=path.stem)
