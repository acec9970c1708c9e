"""Scenario configuration files.

Format: one ``key = value`` per line, ``#`` starts a comment. Numeric values
may be arithmetic expressions in ``pi`` (``theta1 = pi/2``). Lines of the
form ``series.NAME = key=value key=value`` declare named variants of the
base scenario; figure presets use them to put several curves in one file.

Rates (g, omega, kappa, delta, delta_l) and times are rescaled on load so
that kappa = 1 internally. With ``units = g`` the file quotes everything in
units of g (g defaults to 1) and kappa must be given.
"""

import ast
import math
import operator
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .amplitudes import PulseShape
from .errors import ConfigError
from .model import InitialAtomState, PhysicalParams

RATE_KEYS = ("g", "omega", "kappa", "delta", "delta_l")
TIME_KEYS = ("t_start", "t_end", "t")
FLOAT_KEYS = RATE_KEYS + TIME_KEYS + ("theta1", "phi1", "theta2", "phi2", "pulse_halfwidth")
INT_KEYS = ("n_points", "quad_order", "quad_order_phi", "threads")
STR_KEYS = ("pulse", "units", "time_scale", "observable", "axis1", "axis2", "command",
            "average", "description")
KNOWN_KEYS = set(FLOAT_KEYS) | set(INT_KEYS) | set(STR_KEYS)

OBSERVABLES = ("linear_entropy", "avg_linear_entropy", "negativity", "avg_negativity",
               "populations")
SWEEP_PARAMS = ("g", "omega", "delta", "delta_l", "theta1", "phi1", "theta2", "phi2", "t")

DEFAULTS = {
    "g": 10.0, "omega": 10.0, "kappa": 1.0, "delta": 0.0, "delta_l": 0.0,
    "theta1": 0.0, "phi1": 0.0, "theta2": 0.0, "phi2": 0.0,
    "pulse": "lorentzian", "pulse_halfwidth": 50.0,
    "t_start": 0.0, "t_end": 5.0, "n_points": 101, "t": 15.0,
    "quad_order": 32, "quad_order_phi": 16,
    "units": "kappa", "time_scale": "kappa", "average": "1",
    "observable": "linear_entropy",
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def eval_number(text):
    """Evaluate a numeric literal or an arithmetic expression in ``pi``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ConfigError(f"unsupported expression {text!r}")

    try:
        value = ev(tree)
    except ZeroDivisionError as exc:
        raise ConfigError(f"division by zero in {text!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"non-finite value {text!r}")
    return value


def parse_text(text, source="<config>"):
    """Split config text into (base key/value dict, ordered list of series)."""
    base = {}
    series = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key.startswith("series."):
            name = key[len("series."):]
            if not name or any(name == s[0] for s in series):
                raise ConfigError(f"{source}:{lineno}: bad or duplicate series name {name!r}")
            series.append((name, _parse_overrides(value, f"{source}:{lineno}")))
            continue
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        base[key] = value
    return base, series


def _parse_overrides(text, where):
    out = {}
    for item in text.split():
        if "=" not in item:
            raise ConfigError(f"{where}: series entries must be key=value, got {item!r}")
        k, v = item.split("=", 1)
        if k not in KNOWN_KEYS:
            raise ConfigError(f"{where}: unknown key {k!r}")
        out[k] = v
    return out


def load_file(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_text(text, str(path))


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully resolved scenario in internal units (kappa = 1)."""

    params: PhysicalParams
    init1: InitialAtomState
    init2: InitialAtomState
    pulse: str = "lorentzian"
    pulse_halfwidth: float = 50.0
    t_start: float = 0.0
    t_end: float = 5.0
    n_points: int = 101
    t: float = 15.0
    quad_order: int = 32
    quad_order_phi: int = 16
    time_scale: str = "kappa"
    average: bool = True
    observable: str = "linear_entropy"
    axis1: Optional[tuple] = None
    axis2: Optional[tuple] = None
    name: str = ""

    def times(self):
        """Time grid in internal units; n_points evenly spaced values."""
        return np.linspace(self.t_start, self.t_end, self.n_points)

    def output_time(self, t):
        """Time column as emitted: kappa t, or g t with ``time_scale = g``."""
        return t * self.params.g if self.time_scale == "g" else t

    def pulse_shape(self):
        if self.pulse == "flat":
            return PulseShape.flat_band(self.pulse_halfwidth)
        return PulseShape.lorentzian_matched(self.params.kappa)


def _parse_axis(text, scale):
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(f"axis must be name:min:max:count, got {text!r}")
    name = parts[0].strip()
    if name not in SWEEP_PARAMS:
        raise ConfigError(f"cannot sweep {name!r}; choose from {', '.join(SWEEP_PARAMS)}")
    lo, hi = eval_number(parts[1]), eval_number(parts[2])
    try:
        count = int(parts[3])
    except ValueError as exc:
        raise ConfigError(f"axis count must be an integer, got {parts[3]!r}") from exc
    if count < 2:
        raise ConfigError("axis count must be at least 2")
    if name in RATE_KEYS:
        lo, hi = lo / scale, hi / scale
    elif name == "t":
        lo, hi = lo * scale, hi * scale
    return (name, lo, hi, count)


def resolve(values, name=""):
    """Build a :class:`ScenarioConfig` from raw string values over the defaults."""
    raw = dict(DEFAULTS)
    units = values.get("units", raw["units"]).strip()
    if units not in ("kappa", "g"):
        raise ConfigError(f"units must be kappa or g, got {units!r}")
    if units == "g":
        if "kappa" not in values:
            raise ConfigError("units = g requires kappa (in units of g)")
        raw["g"] = 1.0
    raw.update(values)
    num = {}
    for key in FLOAT_KEYS:
        v = raw.get(key)
        num[key] = v if isinstance(v, float) else eval_number(str(v))
    ints = {}
    for key in INT_KEYS:
        v = raw.get(key)
        if v is None:
            continue
        try:
            ints[key] = int(str(v).strip())
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {v!r}") from exc

    scale = num["kappa"]
    if not scale > 0:
        raise ConfigError("kappa must be positive")
    try:
        params = PhysicalParams(num["g"] / scale, num["omega"] / scale, 1.0,
                                num["delta"] / scale, num["delta_l"] / scale)
        init1 = InitialAtomState(num["theta1"], num["phi1"])
        init2 = InitialAtomState(num["theta2"], num["phi2"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    pulse = str(raw["pulse"]).strip()
    if pulse not in ("lorentzian", "flat"):
        raise ConfigError(f"pulse must be lorentzian or flat, got {pulse!r}")
    time_scale = str(raw["time_scale"]).strip()
    if time_scale not in ("kappa", "g"):
        raise ConfigError(f"time_scale must be kappa or g, got {time_scale!r}")
    observable = str(raw["observable"]).strip()
    if observable not in OBSERVABLES:
        raise ConfigError(f"observable must be one of {', '.join(OBSERVABLES)}")
    average = str(raw["average"]).strip().lower()
    if average not in ("0", "1", "true", "false", "yes", "no"):
        raise ConfigError(f"average must be a boolean, got {average!r}")

    t_start, t_end = num["t_start"] * scale, num["t_end"] * scale
    n_points = ints["n_points"]
    if n_points < 2:
        raise ConfigError("n_points must be at least 2")
    if not (0.0 <= t_start < t_end):
        raise ConfigError("need 0 <= t_start < t_end")
    if ints["quad_order"] < 8:
        raise ConfigError("quad_order must be at least 8")
    if ints["quad_order_phi"] < 1:
        raise ConfigError("quad_order_phi must be positive")
    if not num["pulse_halfwidth"] > 0:
        raise ConfigError("pulse_halfwidth must be positive")

    axis1 = _parse_axis(raw["axis1"], scale) if raw.get("axis1") else None
    axis2 = _parse_axis(raw["axis2"], scale) if raw.get("axis2") else None
    if axis2 is not None and axis1 is None:
        raise ConfigError("axis2 given without axis1")
    if axis1 and axis2 and axis1[0] == axis2[0]:
        raise ConfigError("sweep axes must reference distinct parameters")

    return ScenarioConfig(
        params=params, init1=init1, init2=init2, pulse=pulse,
        pulse_halfwidth=num["pulse_halfwidth"] / scale,
        t_start=t_start, t_end=t_end, n_points=n_points, t=num["t"] * scale,
        quad_order=ints["quad_order"], quad_order_phi=ints["quad_order_phi"],
        time_scale=time_scale, average=average in ("1", "true", "yes"),
        observable=observable, axis1=axis1, axis2=axis2, name=name,
    )


def scenarios(base, series, overrides=None):
    """Resolve the base scenario, or one scenario per series, applying ``overrides`` last."""
    overrides = overrides or {}
    if not series:
        return [resolve({**base, **overrides})]
    return [resolve({**base, **extra, **overrides}, name=name) for name, extra in series]


def with_axis_value(cfg, name, value):
    """Copy of ``cfg`` with one sweepable quantity set (internal units)."""
    p = cfg.params
    if name == "g":
        return replace(cfg, params=p.replace(g=value))
    if name == "omega":
        return replace(cfg, params=p.replace(omega_drive=value))
    if name in ("delta", "delta_l"):
        return replace(cfg, params=p.replace(**{name: value}))
    if name in ("theta1", "phi1"):
        i = cfg.init1
        kw = dict(theta=i.theta, phi=i.phi)
        kw[name[:-1]] = value
        return replace(cfg, init1=InitialAtomState(**kw))
    if name in ("theta2", "phi2"):
        i = cfg.init2
        kw = dict(theta=i.theta, phi=i.phi)
        kw[name[:-1]] = value
        return replace(cfg, init2=InitialAtomState(**kw))
    if name == "t":
        return replace(cfg, t=value)
    raise ConfigError(f"cannot sweep {name!r}")
