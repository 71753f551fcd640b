"""Drive signals for the active tail segment.

A gearbox pulling the two cables half a cycle apart gives a sine-like cable
stroke; a servo sweeping back and forth gives a triangle. Square and sawtooth
strokes are kept as comparison baselines.

All waveforms are expressed through the phase in cycles,
``u = f*t + phase/(2*pi)``, and have unit peak before scaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from finsim.errors import InvalidInputError

WAVEFORMS = ("gearbox_sine", "servo_triangle", "square", "sawtooth")

TWO_PI = 2.0 * math.pi

# samples per period used for the Fourier projection in waveform_sine_deviation
_FOURIER_SAMPLES = 1 << 16


@dataclass(frozen=True)
class DriveProfile:
    """Actuation waveform for the active elements.

    ``amplitude`` is the peak rotation of each active element in rad.
    ``cable_gain`` maps cable stroke to element rotation (rad per m), so the
    peak cable displacement is ``amplitude / cable_gain``.
    """

    waveform: str = "gearbox_sine"
    frequency: float = 1.59
    amplitude: float = 0.1
    phase: float = 0.0
    cable_gain: float = 1.0

    def __post_init__(self):
        if self.waveform not in WAVEFORMS:
            raise InvalidInputError(
                f"unknown waveform {self.waveform!r}; expected one of {', '.join(WAVEFORMS)}",
                field="waveform",
            )
        for name in ("frequency", "amplitude", "phase", "cable_gain"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite", field=name)
        if self.frequency <= 0:
            raise InvalidInputError("frequency must be > 0", field="frequency")
        if self.amplitude < 0:
            raise InvalidInputError("amplitude must be >= 0", field="amplitude")
        if not 0.0 <= self.phase < TWO_PI:
            raise InvalidInputError("phase must lie in [0, 2*pi)", field="phase")
        if self.cable_gain <= 0:
            raise InvalidInputError("cable_gain must be > 0", field="cable_gain")

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    def shifted(self, dphase: float) -> "DriveProfile":
        """Copy with the phase advanced by ``dphase`` (wrapped into [0, 2*pi))."""
        return replace(self, phase=math.fmod(self.phase + dphase, TWO_PI) % TWO_PI)

    def scaled(self, factor: float) -> "DriveProfile":
        return replace(self, amplitude=self.amplitude * factor)


def unit_waveform(kind: str, cycles):
    """Unit-peak waveform value at phase ``cycles`` (measured in periods).

    Works on scalars and numpy arrays.
    """
    u = np.mod(cycles, 1.0)
    if kind == "gearbox_sine":
        out = np.sin(TWO_PI * u)
    elif kind == "servo_triangle":
        out = np.where(u < 0.25, 4.0 * u, np.where(u < 0.75, 2.0 - 4.0 * u, 4.0 * u - 4.0))
    elif kind == "square":
        out = np.where(u < 0.5, 1.0, -1.0)
    elif kind == "sawtooth":
        out = np.where(u < 0.5, 2.0 * u, 2.0 * u - 2.0)
    else:
        raise InvalidInputError(f"unknown waveform {kind!r}")
    if np.ndim(out) == 0:
        return float(out)
    return out


def _check_time(t):
    if not np.all(np.isfinite(t)):
        raise InvalidInputError("t must be finite")
    if np.any(np.asarray(t) < 0):
        raise InvalidInputError("t must be >= 0")


def _cycles(profile: DriveProfile, t):
    return profile.frequency * np.asarray(t, dtype=float) + profile.phase / TWO_PI


def cable_displacement(profile: DriveProfile, t):
    """Net cable stroke in m at time ``t`` (peak ``amplitude / cable_gain``)."""
    _check_time(t)
    w = unit_waveform(profile.waveform, _cycles(profile, t))
    return profile.amplitude / profile.cable_gain * w


def drive_angle(profile: DriveProfile, t):
    """Prescribed rotation of a single active element (rad)."""
    return profile.amplitude * unit_waveform(profile.waveform, _cycles(profile, t))


def drive_rate(profile: DriveProfile, t, dt: float):
    """First time derivative of :func:`drive_angle`.

    The sine is differentiated analytically; the other waveforms use a
    symmetric difference with step ``dt``.
    """
    if profile.waveform == "gearbox_sine":
        w = TWO_PI * profile.frequency
        return profile.amplitude * w * np.cos(TWO_PI * np.mod(_cycles(profile, t), 1.0))
    return (drive_angle(profile, t + dt) - drive_angle(profile, t - dt)) / (2.0 * dt)


def drive_accel(profile: DriveProfile, t, dt: float):
    """Second time derivative of :func:`drive_angle` (rad/s^2)."""
    if profile.waveform == "gearbox_sine":
        w = TWO_PI * profile.frequency
        return -profile.amplitude * w * w * np.sin(TWO_PI * np.mod(_cycles(profile, t), 1.0))
    return (
        drive_angle(profile, t + dt) - 2.0 * drive_angle(profile, t) + drive_angle(profile, t - dt)
    ) / (dt * dt)


def active_element_angles(profile: DriveProfile, t: float, n_active: int) -> list[float]:
    """Rotation of every active element at time ``t``.

    The cable drive is split equally, so all entries are the same.
    """
    if n_active < 1:
        raise InvalidInputError("n_active must be >= 1")
    _check_time(t)
    return [float(drive_angle(profile, t))] * n_active


def fundamental_coefficients(kind: str, n: int = _FOURIER_SAMPLES) -> tuple[float, float]:
    """Fourier coefficients (cos, sin) of the first harmonic of a unit waveform."""
    u = (np.arange(n) + 0.5) / n
    w = unit_waveform(kind, u)
    a1 = 2.0 * np.mean(w * np.cos(TWO_PI * u))
    b1 = 2.0 * np.mean(w * np.sin(TWO_PI * u))
    return float(a1), float(b1)


def fundamental_amplitude(kind: str, n: int = _FOURIER_SAMPLES) -> float:
    a1, b1 = fundamental_coefficients(kind, n)
    return math.hypot(a1, b1)


def waveform_sine_deviation(profile: DriveProfile, n: int = _FOURIER_SAMPLES) -> float:
    """RMS residual of the unit waveform after removing its best-fit fundamental."""
    u = (np.arange(n) + 0.5) / n
    w = unit_waveform(profile.waveform, u)
    a1, b1 = fundamental_coefficients(profile.waveform, n)
    resid = w - a1 * np.cos(TWO_PI * u) - b1 * np.sin(TWO_PI * u)
    return float(min(1.0, math.sqrt(np.mean(resid * resid))))
