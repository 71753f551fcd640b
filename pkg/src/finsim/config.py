"""Run configuration files.

Configs are INI-style text: ``[section]`` headers followed by ``key = value``
lines, ``#`` or ``;`` comments. A value is addressed as ``section.key`` in
error messages, and list entries as ``section.key[i]``. Lists are
comma-separated.

Sections and keys::

    [body]        head_length, element_length, n_active, n_passive,
                  joint_units (per_deg | per_rad), joint_stiffness,
                  joint_damping | damping_start + damping_end + damping_grading,
                  mass_per_length, head_mass, caudal_fin_area_small,
                  caudal_fin_area_large, selected_fin
    [drive]       waveform, frequency, amplitude, phase, cable_gain
    [simulation]  dt, duration, transient
    [hydro]       rho, drag_coeff
    [output]      directory, emit_svg

Every key is optional; missing keys take the built-in defaults.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from finsim.actuation import DriveProfile
from finsim.dynamics import (
    DEFAULT_DT,
    DEFAULT_DURATION,
    DEFAULT_TRANSIENT,
    DEG,
    BodyPlan,
    graded_damping,
)
from finsim.errors import InvalidInputError
from finsim.hydro import WATER_DENSITY

OUT_DIR_ENV = "FINSIM_OUT_DIR"

_KEYS = {
    "body": {
        "head_length", "element_length", "n_active", "n_passive", "joint_units",
        "joint_stiffness", "joint_damping", "damping_start", "damping_end",
        "damping_grading", "mass_per_length", "head_mass", "caudal_fin_area_small",
        "caudal_fin_area_large", "selected_fin",
    },
    "drive": {"waveform", "frequency", "amplitude", "phase", "cable_gain"},
    "simulation": {"dt", "duration", "transient"},
    "hydro": {"rho", "drag_coeff"},
    "output": {"directory", "emit_svg"},
}


class ConfigError(InvalidInputError):
    """Invalid configuration; ``path`` is the dotted location of the problem."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}", field=path)
        self.path = path


@dataclass(frozen=True)
class RunConfig:
    plan: BodyPlan = field(default_factory=BodyPlan)
    profile: DriveProfile = field(default_factory=DriveProfile)
    dt: float = DEFAULT_DT
    duration: float = DEFAULT_DURATION
    transient: float = DEFAULT_TRANSIENT
    rho: float = WATER_DENSITY
    drag_coeff: float | None = None
    out_dir: Path = Path("out")
    emit_svg: bool = True
    source: Path | None = None


class _Section:
    def __init__(self, parser, name):
        self.name = name
        self.data = dict(parser[name]) if parser.has_section(name) else {}

    def has(self, key):
        return key in self.data

    def raw(self, key):
        return self.data[key].strip()

    def number(self, key, default=None):
        if key not in self.data:
            return default
        try:
            v = float(self.raw(key))
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"not a number: {self.raw(key)!r}") from None
        if not math.isfinite(v):
            raise ConfigError(f"{self.name}.{key}", "must be finite")
        return v

    def integer(self, key, default):
        if key not in self.data:
            return default
        try:
            return int(self.raw(key))
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"not an integer: {self.raw(key)!r}") from None

    def numbers(self, key):
        out = []
        for i, item in enumerate(self.raw(key).split(",")):
            try:
                out.append(float(item))
            except ValueError:
                raise ConfigError(f"{self.name}.{key}[{i}]", f"not a number: {item.strip()!r}") from None
        return out

    def flag(self, key, default):
        if key not in self.data:
            return default
        v = self.raw(key).lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{self.name}.{key}", f"not a boolean: {v!r}")


def _check_keys(parser):
    for section in parser.sections():
        if section not in _KEYS:
            raise ConfigError(section, "unknown section")
        for key in parser[section]:
            if key not in _KEYS[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")


def _body(sec: _Section) -> BodyPlan:
    defaults = BodyPlan()
    n_passive = sec.integer("n_passive", defaults.n_passive)
    units = sec.raw("joint_units") if sec.has("joint_units") else "per_deg"
    if units not in ("per_deg", "per_rad"):
        raise ConfigError("body.joint_units", "expected per_deg or per_rad")
    to_si = 1.0 / DEG if units == "per_deg" else 1.0

    if sec.has("joint_stiffness"):
        stiffness = sec.numbers("joint_stiffness")
        if len(stiffness) == 1:
            stiffness = stiffness * n_passive
        stiffness = [v * to_si for v in stiffness]
    else:
        stiffness = list(defaults.joint_stiffness[:1]) * n_passive

    if sec.has("joint_damping"):
        damping = [v * to_si for v in sec.numbers("joint_damping")]
    else:
        start = sec.number("damping_start", None)
        end = sec.number("damping_end", None)
        start = defaults.joint_damping[0] if start is None else start * to_si
        end = defaults.joint_damping[-1] if end is None else end * to_si
        law = sec.raw("damping_grading") if sec.has("damping_grading") else "linear"
        try:
            damping = graded_damping(start, end, n_passive, law)
        except InvalidInputError as exc:
            raise ConfigError("body.damping_grading", str(exc)) from None

    kwargs = dict(
        head_length=sec.number("head_length", defaults.head_length),
        element_length=sec.number("element_length", defaults.element_length),
        n_active=sec.integer("n_active", defaults.n_active),
        n_passive=n_passive,
        joint_stiffness=tuple(stiffness),
        joint_damping=tuple(damping),
        mass_per_length=sec.number("mass_per_length", defaults.mass_per_length),
        caudal_fin_area_small=sec.number("caudal_fin_area_small", defaults.caudal_fin_area_small),
        caudal_fin_area_large=sec.number("caudal_fin_area_large", defaults.caudal_fin_area_large),
        selected_fin=sec.raw("selected_fin") if sec.has("selected_fin") else defaults.selected_fin,
        head_mass=sec.number("head_mass", None),
    )
    try:
        return BodyPlan(**kwargs)
    except InvalidInputError as exc:
        raise ConfigError(f"body.{exc.field}" if exc.field else "body", str(exc)) from None


def _drive(sec: _Section) -> DriveProfile:
    d = DriveProfile()
    kwargs = dict(
        waveform=sec.raw("waveform") if sec.has("waveform") else d.waveform,
        frequency=sec.number("frequency", d.frequency),
        amplitude=sec.number("amplitude", d.amplitude),
        phase=sec.number("phase", d.phase),
        cable_gain=sec.number("cable_gain", d.cable_gain),
    )
    try:
        return DriveProfile(**kwargs)
    except InvalidInputError as exc:
        raise ConfigError(f"drive.{exc.field}" if exc.field else "drive", str(exc)) from None


def parse_config(text: str, source: Path | None = None) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=str(source) if source else "<config>")
    except configparser.Error as exc:
        raise ConfigError("config", str(exc).splitlines()[0]) from None
    _check_keys(parser)

    plan = _body(_Section(parser, "body"))
    profile = _drive(_Section(parser, "drive"))

    sim = _Section(parser, "simulation")
    dt = sim.number("dt", DEFAULT_DT)
    if not 0 < dt <= 1e-3:
        raise ConfigError("simulation.dt", "must lie in (0, 1e-3]")
    duration = sim.number("duration", DEFAULT_DURATION)
    if duration < 5.0 * profile.period:
        raise ConfigError("simulation.duration", "must cover at least 5 drive periods")
    transient = sim.number("transient", DEFAULT_TRANSIENT)
    if transient < 0:
        raise ConfigError("simulation.transient", "must be >= 0")
    if (duration - transient) * profile.frequency < 3.0:
        raise ConfigError("simulation.transient", "leaves fewer than 3 steady drive periods")

    hydro = _Section(parser, "hydro")
    rho = hydro.number("rho", WATER_DENSITY)
    if rho <= 0:
        raise ConfigError("hydro.rho", "must be > 0")
    drag_coeff = hydro.number("drag_coeff", None)
    if drag_coeff is not None and drag_coeff <= 0:
        raise ConfigError("hydro.drag_coeff", "must be > 0")

    out = _Section(parser, "output")
    out_dir = Path(out.raw("directory")) if out.has("directory") else Path("out")
    return RunConfig(
        plan=plan, profile=profile, dt=dt, duration=duration, transient=transient,
        rho=rho, drag_coeff=drag_coeff, out_dir=out_dir,
        emit_svg=out.flag("emit_svg", True), source=source,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, source=path)


def resolve_out_dir(config: RunConfig, override=None) -> Path:
    """Output directory: explicit override, then $FINSIM_OUT_DIR, then config."""
    if override:
        return Path(override)
    env = os.environ.get(OUT_DIR_ENV)
    if env:
        return Path(env)
    return config.out_dir


def default_config_path() -> Path:
    return Path(__file__).with_name("data") / "paper_default.cfg"
