"""Closed-form hydrodynamic relations used to read swimming experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass

from finsim.errors import InvalidInputError

WATER_DENSITY = 998.0

EFFICIENT_ST_BAND = (0.2, 0.4)
IDEAL_ATTACK_BAND_DEG = (15.0, 25.0)

FIN_PREDICTION_WARNING = (
    "fin-area scaling assumes an unchanged angle of attack; a different fin "
    "size or shape usually changes it, so treat the prediction as approximate"
)


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise InvalidInputError(f"{name} must be > 0, got {value}", field=name)


def _non_negative(name, value):
    if not (math.isfinite(value) and value >= 0):
        raise InvalidInputError(f"{name} must be >= 0, got {value}", field=name)


@dataclass(frozen=True)
class HydroParams:
    """Fluid density (kg/m^3), drag coefficient and reference area (m^2).

    The drag coefficient has no sensible default and must be supplied.
    """

    drag_coeff: float
    ref_area: float
    rho: float = WATER_DENSITY

    def __post_init__(self):
        _positive("rho", self.rho)
        _positive("drag_coeff", self.drag_coeff)
        _positive("ref_area", self.ref_area)


@dataclass(frozen=True)
class StrouhalPoint:
    f: float
    A: float
    U: float

    def __post_init__(self):
        _non_negative("f", self.f)
        _non_negative("A", self.A)
        _positive("U", self.U)

    @property
    def St(self) -> float:
        return strouhal(self.f, self.A, self.U)


def drag_force(p: HydroParams, v: float) -> float:
    """Quadratic drag 1/2 rho S v^2 C_D in N."""
    _non_negative("v", v)
    return 0.5 * p.rho * p.ref_area * v * v * p.drag_coeff


def equilibrium_speed(p: HydroParams, thrust: float) -> float:
    """Speed at which drag balances ``thrust``."""
    _non_negative("thrust", thrust)
    return math.sqrt(2.0 * thrust / (p.rho * p.ref_area * p.drag_coeff))


def predict_fin_speed(v_small: float, area_small: float, area_large: float) -> float:
    """Expected speed with the large fin given the speed with the small one.

    Thrust is taken proportional to fin area and drag quadratic in speed,
    so speed scales with the square root of the area ratio.
    """
    _positive("v_small", v_small)
    _positive("area_small", area_small)
    _positive("area_large", area_large)
    return math.sqrt(area_large * v_small**2 / area_small)


def strouhal(f: float, A: float, U: float) -> float:
    """Strouhal number f*A/U; ``A`` is the peak-to-peak tail sweep."""
    _positive("U", U)
    _non_negative("f", f)
    _non_negative("A", A)
    return f * A / U


def sweep_for_strouhal(St: float, f: float, U: float) -> float:
    """Tail sweep that yields ``St`` at frequency ``f`` and speed ``U``."""
    _non_negative("St", St)
    _positive("f", f)
    _positive("U", U)
    return St * U / f


def efficiency_class(St: float) -> str:
    _non_negative("St", St)
    lo, hi = EFFICIENT_ST_BAND
    return "efficient" if lo <= St <= hi else "inefficient"


def attack_angle(tip_velocity, forward_dir) -> tuple[float, bool]:
    """Unsigned angle (deg) between the fin velocity and the travel direction.

    Returns the angle and whether it falls in the 15-25 degree band.
    """
    vx, vy = (float(x) for x in tip_velocity)
    fx, fy = (float(x) for x in forward_dir)
    if not all(math.isfinite(x) for x in (vx, vy, fx, fy)):
        raise InvalidInputError("velocity and direction must be finite")
    if math.hypot(vx, vy) == 0.0:
        raise InvalidInputError("tip velocity is zero", field="tip_velocity")
    if math.hypot(fx, fy) == 0.0:
        raise InvalidInputError("forward direction is zero", field="forward_dir")
    angle = math.degrees(math.atan2(abs(vx * fy - vy * fx), vx * fx + vy * fy))
    lo, hi = IDEAL_ATTACK_BAND_DEG
    return angle, lo <= angle <= hi
