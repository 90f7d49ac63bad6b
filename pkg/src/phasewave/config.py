"""Line-oriented run configuration.

::

    # comment
    [lattice]
    n = 4
    P = 0.4
    eps = 0.1

Values are integers, decimals or strings (quoted or bare). Unknown sections
or keys are errors, reported with their line number. Decimal text is kept
next to the parsed float so sweep grids can be built without binary
rounding drift.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

from .errors import PhasewaveError


class ConfigError(PhasewaveError, ValueError):
    pass


class ParseError(ConfigError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MissingSectionError(ConfigError):
    pass


class RangeError(ConfigError):
    pass


_INT, _FLOAT, _STR = "int", "float", "str"

SCHEMA: dict[str, dict[str, str]] = {
    "stress": {"kind": _STR, "c2": _FLOAT, "c1": _FLOAT},
    "lattice": {"n": _INT, "P": _FLOAT, "eps": _FLOAT},
    "discrete": {"h2": _FLOAT, "m": _INT},
    "simulate": {"dt": _FLOAT, "t_end": _FLOAT, "perturb_mode": _INT, "perturb_amp": _FLOAT},
    "sweep": {"param": _STR, "from": _FLOAT, "to": _FLOAT, "steps": _INT, "scheme": _STR},
}

SWEEP_PARAMS = ("eps", "P", "tau-scale", "h2")

_SECTION = re.compile(r"^\[\s*([A-Za-z_][\w-]*)\s*\]$")
_PAIR = re.compile(r"^([A-Za-z_][\w-]*)\s*=\s*(.*)$")


@dataclass
class Section:
    values: dict = field(default_factory=dict)
    text: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.values.get(key, default)

    def __contains__(self, key) -> bool:
        return key in self.values

    def __getitem__(self, key):
        return self.values[key]

    def decimal(self, key) -> Decimal:
        return Decimal(self.text[key])


@dataclass
class RunConfig:
    sections: dict[str, Section] = field(default_factory=dict)

    def has(self, name: str) -> bool:
        return name in self.sections

    def require(self, name: str) -> Section:
        if name not in self.sections:
            raise MissingSectionError(f"config has no [{name}] section")
        return self.sections[name]

    def section(self, name: str) -> Section:
        return self.sections.get(name, Section())

    # typed views

    def stress(self):
        from .stress import make_stress
        s = self.section("stress")
        params = {k: v for k, v in s.values.items() if k != "kind"}
        return make_stress(s.get("kind", "cubic"), **params)

    def lattice(self):
        from .lattice import LatticeConfig
        lat = self.require("lattice")
        for key in ("n", "P"):
            if key not in lat:
                raise MissingSectionError(f"[lattice] needs '{key}'")
        return LatticeConfig(lat["n"], lat["P"], lat.get("eps", 0.0), self.stress())

    def grid(self):
        from .discrete import SchemeGrid
        d = self.require("discrete")
        lat = self.lattice()
        if "h2" in d:
            h2 = d["h2"]
        elif "m" in d:
            h2 = 1.0 / d["m"]
        else:
            raise MissingSectionError("[discrete] needs 'h2' or 'm'")
        return SchemeGrid(lat.n, h2, lat.P, lat.eps, lat.stress, d.get("m"))


def _value(raw: str, kind: str, line: int, key: str):
    if kind == _STR:
        if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
            return raw[1:-1]
        if not raw:
            raise ParseError(line, f"empty value for '{key}'")
        return raw
    try:
        if kind == _INT:
            if not re.fullmatch(r"[+-]?\d+", raw):
                raise ValueError
            return int(raw)
        Decimal(raw)
        x = float(raw)
    except (ValueError, InvalidOperation):
        raise ParseError(line, f"'{key}' expects {kind}, got {raw!r}") from None
    if not math.isfinite(x):
        raise ParseError(line, f"'{key}' must be finite")
    return x


def _strip_comment(line: str) -> str:
    quote = None
    for i, ch in enumerate(line):
        if ch in "\"'":
            quote = None if quote == ch else (ch if quote is None else quote)
        elif ch == "#" and quote is None:
            return line[:i]
    return line


def _check_ranges(cfg: RunConfig) -> None:
    lat = cfg.section("lattice")
    if "n" in lat and lat["n"] < 2:
        raise RangeError(f"n must be >= 2, got {lat['n']}")
    sim = cfg.section("simulate")
    for key in ("dt", "t_end"):
        if key in sim and not sim[key] > 0:
            raise RangeError(f"{key} must be > 0, got {sim[key]}")
    if "perturb_mode" in sim and sim["perturb_mode"] < 1:
        raise RangeError("perturb_mode must be >= 1")
    if "perturb_mode" in sim and "n" in lat and sim["perturb_mode"] > lat["n"] - 1:
        raise RangeError(f"perturb_mode must be <= n - 1 = {lat['n'] - 1}")
    d = cfg.section("discrete")
    if "h2" in d and not 0 < d["h2"] < 1:
        raise RangeError(f"h2 must lie in (0, 1), got {d['h2']}")
    if "m" in d and d["m"] < 2:
        raise RangeError(f"m must be >= 2, got {d['m']}")
    sw = cfg.section("sweep")
    if "steps" in sw and sw["steps"] < 1:
        raise RangeError(f"steps must be >= 1, got {sw['steps']}")
    if "param" in sw and sw["param"] not in SWEEP_PARAMS:
        raise RangeError(f"sweep param must be one of {', '.join(SWEEP_PARAMS)}")
    if "scheme" in sw and sw["scheme"] not in ("continuous", "discrete"):
        raise RangeError("sweep scheme must be 'continuous' or 'discrete'")
    if "from" in sw and "to" in sw and sw["from"] > sw["to"]:
        raise RangeError("sweep 'from' exceeds 'to'")


def parse_config(text: str) -> RunConfig:
    cfg = RunConfig()
    current: Section | None = None
    name = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            name = m.group(1)
            if name not in SCHEMA:
                raise ParseError(lineno, f"unknown section [{name}]")
            if name in cfg.sections:
                raise ParseError(lineno, f"duplicate section [{name}]")
            current = cfg.sections[name] = Section()
            continue
        m = _PAIR.match(line)
        if not m:
            raise ParseError(lineno, f"cannot parse {raw.strip()!r}")
        if current is None:
            raise ParseError(lineno, "key before any [section] header")
        key, val = m.group(1), m.group(2).strip()
        if key not in SCHEMA[name]:
            raise ParseError(lineno, f"unknown key '{key}' in [{name}]")
        if key in current.values:
            raise ParseError(lineno, f"duplicate key '{key}'")
        current.values[key] = _value(val, SCHEMA[name][key], lineno, key)
        current.text[key] = val
    _check_ranges(cfg)
    return cfg


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read())
