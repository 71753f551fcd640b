import math
from dataclasses import replace

import numpy as np
import pytest

from finsim.actuation import DriveProfile
from finsim.dynamics import (
    BodyPlan,
    SimTrace,
    SweepRowError,
    center_of_rotation,
    head_sway,
    lateral_rms,
    neutral_heading,
    simulate,
    sweep_head,
    tail_sweep_length,
)
from finsim.errors import InvalidInputError, NoUniqueMinimumError, NumericalDivergenceError

from conftest import DEFAULT_HEAD_LENGTHS


def plan_for_ratio(ratio):
    tail = BodyPlan().tail_length
    return BodyPlan(head_length=ratio / (1 - ratio) * tail)


def rigid_rotation(plan, pivot, amp=0.2, f=1.0, duration=5.0, fps=500):
    t = np.arange(0, duration + 1e-12, 1 / fps)
    psi = amp * np.sin(2 * math.pi * f * t)
    s = plan.node_arclengths()
    axis = np.stack([np.cos(psi), np.sin(psi)], axis=1)
    nodes = (pivot - s)[None, :, None] * axis[:, None, :]
    return SimTrace.from_nodes(t, nodes, psi, np.zeros((len(t), 2)), frequency=f)


# --- head sway -------------------------------------------------------------


def test_golden_default_sway(default_trace, default_plan):
    assert head_sway(default_trace, default_plan) == pytest.approx(8.69134034932461, rel=1e-6)


def test_golden_default_sweep(default_trace):
    assert tail_sweep_length(default_trace) == pytest.approx(0.0594988325624448, rel=1e-6)


def test_neutral_line_is_mean_heading(default_trace):
    steady = default_trace.t >= 2.0
    assert neutral_heading(default_trace) == pytest.approx(default_trace.heading[steady].mean())


def test_clamped_head_barely_sways(default_drive):
    base = BodyPlan()
    clamped = replace(base, head_mass=1e6 * base.element_mass * base.n_elements)
    trace = simulate(clamped, default_drive, duration=5.0)
    assert head_sway(trace, clamped) < 0.1


def test_sway_and_cor_follow_mass_ratio(default_drive):
    light, heavy = plan_for_ratio(0.3), plan_for_ratio(0.8)
    assert light.mass_ratio == pytest.approx(0.3)
    assert heavy.mass_ratio == pytest.approx(0.8)
    m_light = center_of_rotation(simulate(light, default_drive), light)
    m_heavy = center_of_rotation(simulate(heavy, default_drive), heavy)
    assert m_light.head_sway_deg > m_heavy.head_sway_deg
    assert m_heavy.fin_to_cor > m_light.fin_to_cor


def test_too_short_trace_rejected(default_plan, default_drive):
    # 3.5 s leaves 1.5 s (2.4 periods) after the transient
    trace = simulate(default_plan, default_drive, duration=3.5)
    with pytest.raises(InvalidInputError):
        head_sway(trace, default_plan)
    with pytest.raises(InvalidInputError):
        tail_sweep_length(trace)


def test_zero_drive_has_zero_sweep(default_plan):
    trace = simulate(default_plan, DriveProfile(amplitude=0.0), duration=5.0)
    assert tail_sweep_length(trace) == 0.0


def test_sweep_scales_linearly_for_small_drive(default_plan):
    a = tail_sweep_length(simulate(default_plan, DriveProfile(amplitude=0.01), duration=5.0))
    b = tail_sweep_length(simulate(default_plan, DriveProfile(amplitude=0.02), duration=5.0))
    assert b / a == pytest.approx(2.0, rel=0.02)


# --- centre of rotation ----------------------------------------------------


@pytest.mark.parametrize("pivot", [0.05, 0.2371, 0.41])
def test_rigid_rotation_recovers_pivot(pivot, default_plan):
    trace = rigid_rotation(default_plan, pivot)
    m = center_of_rotation(trace, default_plan, transient=0.0)
    assert m.cor_arclength == pytest.approx(pivot, abs=1e-3)
    assert m.fin_to_cor == pytest.approx(default_plan.total_length - m.cor_arclength)
    assert m.head_sway_deg == pytest.approx(math.degrees(0.2), rel=1e-3)


def test_pure_translation_has_no_unique_minimum(default_plan):
    t = np.arange(0, 5.0, 0.002)
    s = default_plan.node_arclengths()
    y = 0.01 * np.sin(2 * math.pi * t)
    nodes = np.zeros((len(t), len(s), 2))
    nodes[:, :, 0] = -s[None, :] + 0.3 * t[:, None]
    nodes[:, :, 1] = y[:, None]
    com = np.stack([0.3 * t - 0.2, y], axis=1)
    trace = SimTrace.from_nodes(t, nodes, np.zeros(len(t)), com, frequency=1.0)
    with pytest.raises(NoUniqueMinimumError):
        center_of_rotation(trace, default_plan, transient=0.0)


def test_default_cor_is_the_rms_minimum(default_trace, default_plan):
    m = center_of_rotation(default_trace, default_plan)
    arc = default_plan.node_arclengths()
    grid = np.linspace(0, default_plan.total_length, 2001)
    rms = lateral_rms(default_trace, arc, grid)
    at_cor = lateral_rms(default_trace, arc, [m.cor_arclength])[0]
    assert at_cor <= rms.min() + 1e-9
    assert m.mass_ratio == pytest.approx(0.5)


# --- head sweep ------------------------------------------------------------


def test_sweep_rejects_bad_lengths(default_plan, default_drive):
    with pytest.raises(InvalidInputError):
        sweep_head(default_plan, [], default_drive)
    with pytest.raises(InvalidInputError):
        sweep_head(default_plan, [0.1, 0.0], default_drive)
    with pytest.raises(InvalidInputError):
        sweep_head(default_plan, [-0.1], default_drive)


def test_sweep_row_errors_carry_head_length(default_drive):
    wild = BodyPlan(joint_stiffness=(1e300,) * 5)
    with pytest.raises(SweepRowError) as err:
        sweep_head(wild, [0.1], default_drive, duration=5.0, dt=1e-3)
    assert err.value.head_length == 0.1
    assert isinstance(err.value.cause, NumericalDivergenceError)


def test_single_row_matches_direct_call(default_plan, default_drive, default_trace):
    (row,) = sweep_head(default_plan, [default_plan.head_length], default_drive)
    assert row == center_of_rotation(default_trace, default_plan)


def test_duplicate_rows_identical_and_ordered_in_parallel(default_plan, default_drive):
    lengths = [0.2, 0.1, 0.2]
    serial = sweep_head(default_plan, lengths, default_drive, duration=5.0)
    parallel = sweep_head(default_plan, lengths, default_drive, duration=5.0, jobs=2)
    assert serial == parallel
    assert serial[0] == serial[2]
    assert [r.head_length for r in parallel] == lengths


def test_default_sweep_mass_ratios(default_sweep):
    ratios = np.array([r.mass_ratio for r in default_sweep])
    assert ratios == pytest.approx(DEFAULT_HEAD_LENGTHS / (DEFAULT_HEAD_LENGTHS + 0.27))
    assert ratios[0] == pytest.approx(0.2136, abs=1e-4)
    assert ratios[-1] == pytest.approx(0.7652, abs=1e-4)


def test_default_sweep_trends(default_sweep):
    sway = np.array([r.head_sway_deg for r in default_sweep])
    fin = np.array([r.fin_to_cor for r in default_sweep])
    assert np.all(np.diff(sway) < 0)
    assert np.all(np.diff(fin) > 0)
