"""INI run configurations for the command-line front end.

Every config is validated completely before any computation starts; all
failures surface as :class:`ConfigError` naming the offending field.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import dynamics
from .errors import ConfigError, TunnelingError
from .qsys import Amplitudes, SystemParams, initial_state
from .wells import KINDS, PotentialSpec, read_potential_table

SYSTEM_KEYS = ("omega1", "omega2", "delta1", "delta2", "gamma")
SWEEPABLE = SYSTEM_KEYS + ("ratio",)
MAX_SWEEP_POINTS = 10**6
_REQUIRED = object()


def parse_complex(text: str) -> complex:
    return complex(text.strip().replace(" ", "").replace("i", "j"))


class Section:
    """Typed access to one config section with 'section.key' error messages."""

    def __init__(self, parser: configparser.ConfigParser, name: str):
        self.name = name
        self._data = parser[name] if parser.has_section(name) else {}

    def __contains__(self, key):
        return key in self._data

    def get(self, key, conv=str, default=_REQUIRED):
        if key not in self._data or str(self._data[key]).strip() == "":
            if default is _REQUIRED:
                raise ConfigError(f"missing field {self.name}.{key}")
            return default
        raw = self._data[key]
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {self.name}.{key}: {raw!r} ({exc})") from None


def _bool(text: str) -> bool:
    key = text.strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError("must be >= 1")
    return value


def scenario_names() -> list[str]:
    root = resources.files("lambdatunnel") / "scenarios"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ini"))


def load_parser(path=None, scenario=None, overrides=()) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    if scenario is not None:
        if scenario not in scenario_names():
            raise ConfigError(f"unknown scenario {scenario!r}; see 'lambdatunnel scenarios'")
        text = (resources.files("lambdatunnel") / "scenarios" / f"{scenario}.ini").read_text()
        parser.read_string(text, source=scenario)
    elif path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            parser.read_string(text, source=str(path))
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc.message.splitlines()[0]}") from None
    else:
        raise ConfigError("no config given; use --config or --scenario")
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, option = key.strip().partition(".")
        if not sep or not dot or not option:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, option, value.strip())
    return parser


def description(parser: configparser.ConfigParser) -> str:
    return Section(parser, "run").get("description", default="")


def command_of(parser: configparser.ConfigParser) -> str:
    return Section(parser, "run").get("command", default="simulate")


def _system(parser) -> dict:
    sec = Section(parser, "system")
    return {key: sec.get(key, float) for key in SYSTEM_KEYS}


def make_params(values: dict) -> SystemParams:
    try:
        return SystemParams(values["omega1"], values["omega2"], values["delta1"],
                            values["delta2"], values["gamma"])
    except TunnelingError as exc:
        raise ConfigError(str(exc)) from None


def _initial(parser, params: SystemParams):
    sec = Section(parser, "initial")
    kind = sec.get("state").strip().lower()
    if kind == "bare":
        coeffs = (sec.get("c1", parse_complex), sec.get("c2", parse_complex),
                  sec.get("c3", parse_complex, 0j))
    elif kind in ("left", "right", "dark", "bright"):
        coeffs = kind
    else:
        raise ConfigError(f"bad value for initial.state: {kind!r}")
    try:
        return kind, initial_state(coeffs, params)
    except TunnelingError as exc:
        raise ConfigError(f"initial.state: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    params: SystemParams
    init_kind: str
    init: Amplitudes
    mode: str
    t_end: float | None
    dt: float | None
    sample_every: int | None
    eps: float
    t_max: float | None
    output: str | None


def _integration(parser, params: SystemParams):
    sec = Section(parser, "integration")
    mode = sec.get("mode", default="fixed").strip().lower()
    if mode not in ("fixed", "settle"):
        raise ConfigError(f"bad value for integration.mode: {mode!r}")
    t_end = sec.get("t_end", float) if mode == "fixed" else None
    dt = sec.get("dt", float, None)
    sample_every = sec.get("sample_every", _positive_int, 1 if mode == "fixed" else None)
    eps = sec.get("eps", float, dynamics.DEFAULT_EPS)
    t_max = sec.get("t_max", float, None)
    try:
        if mode == "fixed":
            dynamics._resolve_grid(params, t_end, dt)
        else:
            if params.gamma == 0.0:
                raise ConfigError("integration.mode = settle needs system.gamma > 0")
            if not 0.0 < eps < 1.0:
                raise ConfigError(f"integration.eps must lie in (0, 1), got {eps!r}")
            params.mixing()
            horizon = t_max if t_max is not None else dynamics.default_t_max(params, eps)
            dynamics._resolve_grid(params, horizon, dt)
    except ConfigError:
        raise
    except TunnelingError as exc:
        raise ConfigError(f"integration: {exc}") from None
    return mode, t_end, dt, sample_every, eps, t_max


def load_run_config(parser: configparser.ConfigParser) -> RunConfig:
    params = make_params(_system(parser))
    init_kind, init = _initial(parser, params)
    mode, t_end, dt, sample_every, eps, t_max = _integration(parser, params)
    output = Section(parser, "output").get("path", default=None)
    name = Section(parser, "run").get("scenario", default="custom")
    return RunConfig(name, params, init_kind, init, mode, t_end, dt, sample_every, eps, t_max, output)


@dataclass(frozen=True)
class SweepConfig:
    base: RunConfig
    names: tuple
    axes: tuple  # one 1-D array per swept parameter

    @property
    def n_points(self) -> int:
        return int(np.prod([len(a) for a in self.axes]))

    def point_values(self, values) -> dict:
        """System values for one grid point (``ratio`` sets omega2 = ratio * omega1)."""
        p = self.base.params
        out = dict(omega1=p.omega1_rabi, omega2=p.omega2_rabi, delta1=p.delta1,
                   delta2=p.delta2, gamma=p.gamma)
        ratio = None
        for name, v in zip(self.names, values):
            if name == "ratio":
                ratio = float(v)
            else:
                out[name] = float(v)
        if ratio is not None:
            out["omega2"] = ratio * out["omega1"]
        return out

    def grid(self):
        """Grid points in lexicographic order (first parameter outermost)."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return [tuple(float(m.flat[k]) for m in mesh) for k in range(self.n_points)]


def _axis(sec: Section, name: str) -> np.ndarray:
    def conv(text):
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 3:
            raise ValueError("expected start, stop, count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("count must be >= 1")
        return np.linspace(start, stop, count)
    return sec.get(name, conv)


def load_sweep_config(parser: configparser.ConfigParser) -> SweepConfig:
    sec = Section(parser, "sweep")
    names = tuple(s.strip() for s in sec.get("parameters").split(",") if s.strip())
    if not 1 <= len(names) <= 2:
        raise ConfigError("sweep.parameters must list one or two parameters")
    for name in names:
        if name not in SWEEPABLE:
            raise ConfigError(f"cannot sweep {name!r}; choose from {SWEEPABLE}")
    if len(set(names)) != len(names):
        raise ConfigError("sweep.parameters lists a parameter twice")
    if not parser.has_option("integration", "mode"):
        if not parser.has_section("integration"):
            parser.add_section("integration")
        parser.set("integration", "mode", "settle")
    base = load_run_config(parser)
    if base.mode != "settle":
        raise ConfigError("sweeps run in integration.mode = settle")
    axes = tuple(_axis(sec, name) for name in names)
    sweep = SweepConfig(base, names, axes)
    if sweep.n_points > MAX_SWEEP_POINTS:
        raise ConfigError(f"sweep has {sweep.n_points} points; the limit is {MAX_SWEEP_POINTS}")
    # validate every point before computing anything
    for values in sweep.grid():
        params = make_params(sweep.point_values(values))
        label = ", ".join(f"{n}={v:g}" for n, v in zip(names, values))
        try:
            if params.gamma == 0.0:
                raise ConfigError("gamma must be > 0")
            params.mixing()
            if base.init_kind in ("dark", "bright"):
                initial_state(base.init_kind, params)
            horizon = base.t_max if base.t_max is not None else dynamics.default_t_max(params, base.eps)
            dynamics._resolve_grid(params, horizon, base.dt)
        except TunnelingError as exc:
            raise ConfigError(f"sweep point ({label}): {exc}") from None
    return sweep


@dataclass(frozen=True)
class WellsConfig:
    ground: PotentialSpec
    excited: PotentialSpec | None
    excited_index: int
    mu_e: float
    n_points: int
    n_states: int
    eigenfunctions: bool
    output: str | None


def _potential(parser, name: str, base_dir: Path | None) -> PotentialSpec:
    sec = Section(parser, name)
    kind = sec.get("kind").strip()
    if kind not in KINDS:
        raise ConfigError(f"bad value for {name}.kind: {kind!r}; expected one of {KINDS}")
    needed = {
        "quartic_double_well": ("a", "b"),
        "biased_quartic": ("a", "b", "tilt"),
        "square_double_well": ("depth", "width", "barrier_width", "barrier_height"),
        "harmonic": (),
        "box": (),
        "custom": (),
    }[kind]
    values = {key: sec.get(key, float) for key in needed}
    if kind == "square_double_well":
        values["bias"] = sec.get("bias", float, 0.0)
    if kind == "harmonic":
        values["omega"] = sec.get("omega", float, 1.0)
    table = None
    if kind == "custom":
        table_path = Path(sec.get("table"))
        if not table_path.is_absolute() and base_dir is not None:
            table_path = base_dir / table_path
        try:
            table = read_potential_table(table_path)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"{name}.table: {exc}") from None
    try:
        return PotentialSpec(kind, values, sec.get("x_min", float), sec.get("x_max", float),
                             sec.get("mass", float, 1.0), table)
    except TunnelingError as exc:
        raise ConfigError(f"{name}: {exc}") from None


def load_wells_config(parser: configparser.ConfigParser, base_dir: Path | None = None) -> WellsConfig:
    ground = _potential(parser, "ground", base_dir)
    excited = _potential(parser, "excited", base_dir) if parser.has_section("excited") else None
    sec = Section(parser, "wells")
    n_points = sec.get("n_points", int, 2000)
    n_states = sec.get("n_states", int, 2)
    if n_points < 200:
        raise ConfigError(f"wells.n_points must be >= 200, got {n_points}")
    if not 2 <= n_states <= n_points:
        raise ConfigError(f"wells.n_states must be in [2, n_points], got {n_states}")
    excited_index = sec.get("excited_index", int, 0)
    if excited is not None and not 0 <= excited_index < n_states:
        raise ConfigError(f"wells.excited_index must be in [0, {n_states}), got {excited_index}")
    mu_e = sec.get("mu_e", float, 1.0)
    if not math.isfinite(mu_e):
        raise ConfigError("wells.mu_e must be finite")
    if excited is not None and (excited.x_min, excited.x_max) != (ground.x_min, ground.x_max):
        raise ConfigError("ground and excited domains must match (the overlaps need one grid)")
    return WellsConfig(
        ground, excited, excited_index, mu_e, n_points, n_states,
        sec.get("eigenfunctions", _bool, False),
        Section(parser, "output").get("path", default=None),
    )
