import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from revplane import curvature as cv
from revplane.errors import OutOfWindow


def test_constant_eval():
    k = cv.constant(-1.0)
    r = np.linspace(0, 50, 1000)
    assert np.all(k.evaluate(r) == -1.0)
    assert k.evaluate(3.0) == -1.0


@given(st.floats(min_value=0.0, max_value=0.25), st.floats(min_value=0.0, max_value=100.0))
def test_isq_closed_form(u, r):
    spec = cv.isq(u)
    assert spec.evaluate(r) == pytest.approx(0.25 / (r + 1.0) ** 2 - u, abs=1e-15)


def test_isq_zero_matches_root():
    for u in (0.25, 0.1, 1e-3, 1e-6):
        z = cv.isq_zero(u)
        assert cv.isq(u).evaluate(z) == pytest.approx(0.0, abs=1e-12)


def test_isq_param_range():
    with pytest.raises(ValueError):
        cv.isq(0.3)
    with pytest.raises(ValueError):
        cv.isq(-0.01)


def test_isq_capped_regions():
    u = 4e-4  # z = 24
    z = cv.isq_zero(u)
    eps = 0.5
    spec = cv.isq_capped(u, eps)
    # below the blend: agrees with isq
    r = np.linspace(0, z - eps, 200)
    assert np.allclose(spec.evaluate(r), cv.isq(u).evaluate(r), atol=0)
    # beyond: identically zero
    r = np.linspace(z + eps, z + 100, 200)
    assert np.all(spec.evaluate(r) == 0.0)
    # inside: nonnegative and monotone
    assert spec.blend_is_monotone()


def test_isq_capped_is_c2_at_joins():
    u, eps = 4e-4, 0.5
    spec = cv.isq_capped(u, eps)
    z = cv.isq_zero(u)
    for a in (z - eps, z + eps):
        h = 1e-5
        # second difference across the joint stays consistent
        vals = spec.evaluate(np.array([a - 2 * h, a - h, a, a + h, a + 2 * h]))
        d2_left = (vals[0] - 2 * vals[1] + vals[2]) / h**2
        d2_right = (vals[2] - 2 * vals[3] + vals[4]) / h**2
        assert d2_left == pytest.approx(d2_right, abs=1e-4)


def test_spliced_drop_profile():
    base = cv.constant(0.0)
    spec = cv.spliced(base, r0=2.0, drop=cv.DropParams(mu=3.0, w=1.0))
    assert spec.evaluate(1.9) == 0.0
    assert spec.evaluate(3.0) == -3.0
    assert spec.evaluate(10.0) == -3.0
    mid = spec.evaluate(2.5)
    assert -3.0 < mid < 0.0
    assert mid == pytest.approx(-1.5, abs=1e-12)  # smoothstep is odd about midpoint


@given(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=0.1, max_value=5.0))
def test_spliced_drop_monotone(mu, w):
    spec = cv.spliced(cv.constant(1.0), r0=1.0, drop=cv.DropParams(mu, w))
    rep = cv.check_von_mangoldt(spec, r_max=10.0, grid_step=0.01)
    assert rep.is_vm


def test_vm_check_flags_increase():
    tab = cv.table([0.0, 1.0, 2.0], [0.0, -1.0, 0.5])
    rep = cv.check_von_mangoldt(tab, r_max=2.0)
    assert not rep.is_vm
    assert 1.0 <= rep.first_violation <= 2.0


def test_vm_check_ok_kinds():
    for spec in (cv.constant(1.0), cv.isq(0.0), cv.isq(0.1), cv.isq_capped(1e-3, 0.5)):
        assert cv.check_von_mangoldt(spec, r_max=50.0).is_vm


def test_table_interpolates_and_bounds():
    tab = cv.table([0.0, 1.0, 2.0], [1.0, 0.0, -1.0])
    assert tab.evaluate(0.0) == 1.0
    assert tab.evaluate(2.0) == -1.0
    with pytest.raises(OutOfWindow):
        tab.evaluate(2.5)
    clamped = cv.table([0.0, 1.0, 2.0], [1.0, 0.0, -1.0], extrapolate="constant")
    assert clamped.evaluate(5.0) == -1.0


def test_table_validation():
    with pytest.raises(ValueError):
        cv.table([0.0, 0.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        cv.table([0.0, 1.0], [1.0, math.nan])


def test_json_round_trip_bit_exact():
    specs = [
        cv.constant(-1.2345678901234567),
        cv.isq(0.1234567890123456),
        cv.isq_capped(3.3e-4, 0.0625),
        cv.spliced(cv.isq(0.0), 4.5, cv.DropParams(8.0, 0.25)),
        cv.table([0.0, 0.1, 2.7], [0.3, 0.1, -0.9]),
    ]
    for spec in specs:
        j = spec.to_json()
        back = cv.CurvatureSpec.from_json(j)
        assert back.to_json() == j
        r = np.linspace(0, min(2.7, spec.domain_hi), 57)
        assert np.all(back.evaluate(r) == spec.evaluate(r))


def test_expression_not_serializable():
    spec = cv.expression(lambda r: -r)
    assert spec.evaluate(2.0) == -2.0
    with pytest.raises(ValueError):
        spec.to_dict()


def test_tail_certificates():
    assert cv.constant(0.0).tail_certificate() == ("zero", 0.0)
    assert cv.constant(-1.0).tail_certificate() == ("nonpositive", 0.0)
    assert cv.constant(1.0).tail_certificate() is None
    assert cv.isq(0.0).tail_certificate() == ("positive_decreasing", 0.0)
    kind, r0 = cv.isq(0.01).tail_certificate()
    assert kind == "nonpositive" and r0 == pytest.approx(cv.isq_zero(0.01))
    kind, r0 = cv.isq_capped(0.01, 0.3).tail_certificate()
    assert kind == "zero" and r0 == pytest.approx(cv.isq_zero(0.01) + 0.3)
    # splice of a drop onto a flat plane: eventually constant negative
    spec = cv.spliced(cv.constant(0.0), 2.0, cv.DropParams(1.0, 1.0))
    assert spec.tail_certificate() == ("nonpositive", 3.0)
    assert cv.table([0.0, 1.0], [0.0, -1.0]).tail_certificate() is None
