import math

import numpy as np
import pytest

from mdbench.potential import LJParams, lj_eval, make_shifted

R_MIN = 2.0 ** (1.0 / 6.0)


def test_shift_zeroes_energy_at_cutoff():
    p = make_shifted(1.0, 1.0, 2.5)
    e, f = lj_eval((2.5 - 1e-12) ** 2, p)
    assert abs(e) < 1e-11
    e_out, f_out = lj_eval(2.5 ** 2, p)
    assert e_out == 0.0 and f_out == 0.0


def test_shift_value_for_standard_cutoff():
    # 4 (2.5^-12 - 2.5^-6) is exact in decimal: both powers of 2.5 are
    # finite decimals, so the shift must hit +0.016316891136
    p = make_shifted(1.0, 1.0, 2.5)
    assert p.energy_shift == pytest.approx(0.016316891136, rel=1e-15)


def test_shift_scales_linearly_with_epsilon():
    assert make_shifted(2.0, 1.0, 2.5).energy_shift == \
        2.0 * make_shifted(1.0, 1.0, 2.5).energy_shift


def test_untruncated_has_zero_shift():
    p = make_shifted(1.0, 1.0, math.inf)
    assert p.energy_shift == 0.0
    assert not p.truncated
    e, f = lj_eval(100.0 ** 2, p)
    assert e != 0.0  # no cutoff, tail still contributes


def test_energy_at_sigma_is_exactly_the_shift():
    p = make_shifted(1.0, 1.0, 2.5)
    e, _ = lj_eval(1.0, p)
    assert e == p.energy_shift  # 4 eps (1 - 1) == 0 exactly


def test_force_vanishes_at_the_minimum():
    p = make_shifted(1.0, 1.0, math.inf)
    _, f = lj_eval(R_MIN * R_MIN, p)
    assert abs(f) < 1e-13


def test_force_sign_repulsive_inside_attractive_outside():
    p = make_shifted(1.0, 1.0, 2.5)
    _, f_in = lj_eval(0.9 ** 2, p)
    _, f_out = lj_eval(1.5 ** 2, p)
    assert f_in > 0.0
    assert f_out < 0.0


def test_force_matches_finite_difference_of_energy():
    # f_over_r * r must equal -dU/dr; central differences at rel step 1e-6
    p = make_shifted(1.3, 0.9, math.inf)
    for r in np.linspace(0.75, 2.4, 12):
        h = 1e-6 * r
        e_plus, _ = lj_eval((r + h) ** 2, p)
        e_minus, _ = lj_eval((r - h) ** 2, p)
        deriv = (e_plus - e_minus) / (2 * h)
        _, f_over_r = lj_eval(r * r, p)
        assert -deriv == pytest.approx(f_over_r * r, rel=1e-6)


def test_vectorized_eval_matches_scalar():
    p = make_shifted(1.0, 1.0, 2.5)
    r2 = np.array([0.81, 1.0, 2.25, 6.25, 9.0])
    e_vec, f_vec = lj_eval(r2, p)
    for k, r2k in enumerate(r2):
        e, f = lj_eval(float(r2k), p)
        assert e == e_vec[k] and f == f_vec[k]


def test_eval_rejects_nonpositive_r2():
    p = make_shifted(1.0, 1.0, 2.5)
    with pytest.raises(ValueError):
        lj_eval(0.0, p)
    with pytest.raises(ValueError):
        lj_eval(np.array([1.0, -0.5]), p)


@pytest.mark.parametrize("eps,sigma,r_cut", [
    (0.0, 1.0, 2.5), (-1.0, 1.0, 2.5), (1.0, 0.0, 2.5),
    (1.0, 1.0, 0.9), (1.0, 1.0, 1.0), (math.nan, 1.0, 2.5),
])
def test_params_validation(eps, sigma, r_cut):
    with pytest.raises(ValueError):
        LJParams(eps, sigma, r_cut, 0.0)


def test_sigma_scales_the_length_scale():
    # doubling sigma doubles the distance at which features sit
    p1 = make_shifted(1.0, 1.0, math.inf)
    p2 = make_shifted(1.0, 2.0, math.inf)
    e1, _ = lj_eval(1.1 ** 2, p1)
    e2, _ = lj_eval(2.2 ** 2, p2)
    assert e1 == pytest.approx(e2, rel=1e-12)
