import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finsim.errors import InvalidInputError
from finsim.hydro import (
    HydroParams,
    StrouhalPoint,
    attack_angle,
    drag_force,
    efficiency_class,
    equilibrium_speed,
    predict_fin_speed,
    strouhal,
    sweep_for_strouhal,
)

FIN = HydroParams(drag_coeff=0.5, ref_area=4065e-6, rho=998.0)

pos = st.floats(1e-3, 1e3)


def test_drag_examples():
    assert drag_force(HydroParams(1.0, 1.0, rho=1000.0), 0.0) == 0.0
    assert drag_force(HydroParams(1.0, 1.0, rho=2.0), 1.0) == 1.0
    assert drag_force(FIN, 0.85) == pytest.approx(0.7327, abs=1e-4)
    assert drag_force(FIN, 0.85) == pytest.approx(0.5 * 998 * 0.004065 * 0.85**2 * 0.5, rel=1e-15)


def test_equilibrium_examples():
    assert equilibrium_speed(FIN, 0.0) == 0.0
    assert equilibrium_speed(FIN, 0.7327) == pytest.approx(0.85, abs=1e-3)


def test_default_density():
    assert HydroParams(drag_coeff=1.0, ref_area=1.0).rho == 998.0


@pytest.mark.parametrize(
    "kwargs", [dict(drag_coeff=0, ref_area=1), dict(drag_coeff=1, ref_area=-1), dict(drag_coeff=1, ref_area=1, rho=0)]
)
def test_params_validated(kwargs):
    with pytest.raises(InvalidInputError):
        HydroParams(**kwargs)


def test_negative_inputs_rejected():
    with pytest.raises(InvalidInputError):
        drag_force(FIN, -0.1)
    with pytest.raises(InvalidInputError):
        equilibrium_speed(FIN, -1.0)


def _speed_by_equilibrium(v_small, a_small, a_large):
    # thrust proportional to fin area, then solve the drag balance directly
    small = HydroParams(drag_coeff=0.7, ref_area=0.01)
    thrust = drag_force(small, v_small) * a_large / a_small
    return equilibrium_speed(small, thrust)


def test_fin_prediction_examples():
    assert predict_fin_speed(0.5, 2431, 2431) == 0.5
    assert predict_fin_speed(0.5, 1.0, 4.0) == pytest.approx(1.0, rel=1e-15)
    v = predict_fin_speed(0.5, 2431e-6, 4065e-6)
    assert v == pytest.approx(0.64655, abs=1e-5)
    assert v == pytest.approx(_speed_by_equilibrium(0.5, 2431, 4065), rel=1e-12)


@pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (1, 1, -1), (math.nan, 1, 1)])
def test_fin_prediction_rejects_non_positive(args):
    with pytest.raises(InvalidInputError):
        predict_fin_speed(*args)


def test_strouhal_examples():
    assert strouhal(1, 1, 1) == 1
    assert strouhal(0, 0.3, 0.5) == 0
    assert strouhal(5.46, 0.05, 0.85) == pytest.approx(0.32118, abs=1e-5)
    assert StrouhalPoint(5.46, 0.05, 0.85).St == pytest.approx(5.46 * 0.05 / 0.85, rel=1e-12)
    with pytest.raises(InvalidInputError):
        strouhal(1, 1, 0)
    with pytest.raises(InvalidInputError):
        StrouhalPoint(-1, 1, 1)


def test_sweep_for_strouhal_inverts():
    assert sweep_for_strouhal(0.31, 5.46, 0.85) == pytest.approx(0.048260, abs=1e-6)
    assert sweep_for_strouhal(0.40, 5.46, 0.85) == pytest.approx(0.062271, abs=1e-6)


@pytest.mark.parametrize(
    "St, label", [(0.3, "efficient"), (0.6, "inefficient"), (0.2, "efficient"), (0.4, "efficient"),
                  (0.1999, "inefficient"), (0.4001, "inefficient"), (0.0, "inefficient")]
)
def test_efficiency_class(St, label):
    assert efficiency_class(St) == label


def test_efficiency_class_rejects_negative():
    with pytest.raises(InvalidInputError):
        efficiency_class(-0.1)


def test_attack_angle_examples():
    assert attack_angle((2.0, 0.0), (1.0, 0.0)) == (0.0, False)
    angle, flag = attack_angle((0.0, 3.0), (1.0, 0.0))
    assert angle == pytest.approx(90.0) and not flag
    r = math.radians(20.2)
    angle, flag = attack_angle((math.cos(r), -math.sin(r)), (1.0, 0.0))
    assert angle == pytest.approx(20.2, abs=1e-12) and flag
    angle, _ = attack_angle((-1.0, 0.0), (1.0, 0.0))
    assert angle == pytest.approx(180.0)
    with pytest.raises(InvalidInputError):
        attack_angle((0.0, 0.0), (1.0, 0.0))


@given(p_rho=pos, p_cd=st.floats(0.01, 2), p_s=st.floats(1e-4, 1), v=st.just(0.0) | st.floats(1e-100, 50))
def test_drag_is_quadratic_and_invertible(p_rho, p_cd, p_s, v):
    p = HydroParams(drag_coeff=p_cd, ref_area=p_s, rho=p_rho)
    assert drag_force(p, 2 * v) == pytest.approx(4 * drag_force(p, v), rel=1e-12)
    assert equilibrium_speed(p, drag_force(p, v)) == pytest.approx(v, rel=1e-12)


@given(v=st.floats(0.01, 10), v2=st.floats(0.01, 10))
def test_drag_strictly_increasing(v, v2):
    if v < v2:
        assert drag_force(FIN, v) < drag_force(FIN, v2)


@given(v=pos, a=pos, b=pos, s=st.floats(0.1, 10))
def test_fin_prediction_homogeneity(v, a, b, s):
    base = predict_fin_speed(v, a, b)
    assert predict_fin_speed(s * v, a, b) == pytest.approx(s * base, rel=1e-12)
    assert predict_fin_speed(v, a, s * b) == pytest.approx(math.sqrt(s) * base, rel=1e-12)
    assert predict_fin_speed(v, s * a, s * b) == pytest.approx(base, rel=1e-12)


@given(f=st.floats(0, 20), A=st.floats(0, 1), U=pos, s=st.floats(1e-3, 1e3))
def test_strouhal_scale_invariance(f, A, U, s):
    assert strouhal(f, s * A, s * U) == pytest.approx(strouhal(f, A, U), rel=1e-12, abs=1e-300)
