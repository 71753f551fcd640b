"""Planar simulation and analysis tools for a thunniform robotic fish."""

from finsim.actuation import (
    DriveProfile,
    active_element_angles,
    cable_displacement,
    waveform_sine_deviation,
)
from finsim.dynamics import (
    BodyPlan,
    SimState,
    SimTrace,
    SwayMetrics,
    center_of_rotation,
    head_sway,
    simulate,
    step,
    sweep_head,
    tail_sweep_length,
)
from finsim.errors import (
    FinsimError,
    InsufficientOscillationError,
    InvalidInputError,
    NoUniqueMinimumError,
    NumericalDivergenceError,
)

__version__ = "0.1.0"
