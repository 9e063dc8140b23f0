import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from heunseries import DomainError, PoleAtC, contiguous_lower_c, contiguous_raise_c, hyp2f1, hyp2f1_derivative
from heunseries.gauss2f1 import hyp2f1_jet


def series_oracle(a, b, c, z, terms=500, dps=40):
    """Direct partial sum of the defining series in extended precision."""
    with mp.workdps(dps):
        a, b, c, z = (mp.mpf(x) for x in (a, b, c, z))
        term, total = mp.mpf(1), mp.mpf(1)
        for n in range(terms):
            term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
            total += term
            if term == 0:
                break
        return float(total)


def converged_oracle(a, b, c, z, dps=40):
    """Same series, summed until ten consecutive terms are below 1e-30 of the sum."""
    with mp.workdps(dps):
        a, b, c, z = (mp.mpf(x) for x in (a, b, c, z))
        term, total, quiet = mp.mpf(1), mp.mpf(1), 0
        for n in range(200_000):
            term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
            total += term
            quiet = quiet + 1 if abs(term) < mp.mpf("1e-30") * abs(total) else 0
            if quiet >= 10 or term == 0:
                break
        return float(total)


def rel(x, y):
    return abs(x - y) / max(abs(y), 1e-300)


def test_value_at_zero():
    for args in [(0.3, 1.7, 2.2), (-2.5, 4.0, -0.5), (1.0, 1.0, 3.0)]:
        assert hyp2f1(*args, 0.0) == 1.0


def test_log_identity():
    assert hyp2f1(1, 1, 2, 0.5) == pytest.approx(1.3862943611198906, rel=1e-15)


def test_power_identity():
    assert hyp2f1(0.5, 3, 3, 0.25) == pytest.approx(1.1547005383792515, rel=1e-15)


def test_against_500_term_oracle():
    assert rel(hyp2f1(0.3, 1.7, 2.2, 0.6), series_oracle(0.3, 1.7, 2.2, 0.6)) <= 1e-13


@pytest.mark.parametrize("z", [-0.9, -0.7, -0.51, -0.3, 0.1, 0.45, 0.55, 0.8, 0.95])
def test_both_branches_against_oracle(z):
    for a, b, c in [(0.3, 1.7, 2.2), (-1.7, 2.4, 0.6), (2.5, -3.3, -1.5), (4.1, 3.2, 4.9)]:
        ref = float(mp.hyp2f1(a, b, c, z))
        assert rel(hyp2f1(a, b, c, z), ref) <= 1e-12


def test_random_against_oracle(rng):
    worst = 0.0
    for _ in range(150):
        a, b = rng.uniform(-5, 5, 2)
        c = rng.uniform(-5, 5)
        if abs(c - round(c)) < 0.1 and round(c) <= 0:
            continue
        z = rng.uniform(-0.95, 0.95)
        ref = converged_oracle(a, b, c, z)
        if abs(ref) < 1e-3:
            continue  # cancellation-dominated values are checked absolutely below
        worst = max(worst, rel(hyp2f1(a, b, c, z), ref))
    assert worst <= 1e-12


def test_derivative_at_zero():
    assert hyp2f1_derivative(0.3, 1.7, 2.2, 0.0) == pytest.approx(0.3 * 1.7 / 2.2, rel=1e-15)


def test_derivative_closed_form():
    z = 0.5
    expected = 1 / (z * (1 - z)) + math.log(1 - z) / z**2
    assert expected == pytest.approx(1.2274112777602189, rel=1e-15)
    assert hyp2f1_derivative(1, 1, 2, z) == pytest.approx(expected, rel=1e-13)


def test_derivative_finite_difference():
    h = 1e-6
    fd = (hyp2f1(0.3, 1.7, 2.2, 0.6 + h) - hyp2f1(0.3, 1.7, 2.2, 0.6 - h)) / (2 * h)
    assert rel(hyp2f1_derivative(0.3, 1.7, 2.2, 0.6), fd) <= 1e-6


def test_derivative_against_extended_precision(rng):
    for _ in range(40):
        a, b = rng.uniform(-4, 4, 2)
        c = rng.uniform(0.2, 5)
        z = rng.uniform(-0.9, 0.9)
        ref = float(mp.diff(lambda t: mp.hyp2f1(a, b, c, t), z))
        assert abs(hyp2f1_derivative(a, b, c, z) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_second_derivative_branches():
    # the ODE branch and the double-derivative branch agree with extended precision
    for z in (0.005, 0.3, 0.995):
        ref = float(mp.diff(lambda t: mp.hyp2f1(0.7, -1.3, 1.9, t), z, 2))
        assert abs(hyp2f1_jet(0.7, -1.3, 1.9, z)[2] - ref) <= 1e-9 * max(1.0, abs(ref))


def test_pole_at_c():
    with pytest.raises(PoleAtC):
        hyp2f1(0.5, 1.5, -2.0, 0.3)
    with pytest.raises(PoleAtC):
        hyp2f1(0.5, 1.5, -2.0 + 5e-10, 0.3)


def test_terminating_numerator_shields_pole():
    # a = -1 ends the series before the c = -3 pole matters
    assert hyp2f1(-1, 2.0, -3.0, 0.4) == pytest.approx(1 + (-1) * 2.0 / (-3.0) * 0.4, rel=1e-15)


def test_pole_not_shielded_by_longer_polynomial():
    with pytest.raises(PoleAtC):
        hyp2f1(-4, 2.0, -2.0, 0.4)


def test_near_integer_numerator_snaps():
    assert hyp2f1(-2 + 1e-13, 1.5, 0.7, 0.4) == hyp2f1(-2, 1.5, 0.7, 0.4)


def test_domain_error():
    with pytest.raises(DomainError):
        hyp2f1(0.5, 1.5, 2.5, 1.0)
    with pytest.raises(DomainError):
        hyp2f1(0.5, 1.5, 2.5, -1.2)


def test_polynomial_valid_outside_unit_interval():
    # 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
    b, c, z = 1.5, 0.7, 3.0
    assert hyp2f1(-2, b, c, z) == pytest.approx(1 - 2 * b * z / c + b * (b + 1) * z**2 / (c * (c + 1)), rel=1e-14)


def test_contiguous_lower_c_vanishes_at_zero():
    assert contiguous_lower_c(0.5, 1.5, 2.5, 0.0) == 0.0


def test_contiguous_examples():
    assert abs(contiguous_lower_c(0.5, 1.5, 2.5, 0.3)) <= 1e-11
    assert abs(contiguous_raise_c(0.5, 1.5, 2.5, 0.3)) <= 1e-11


def test_contiguous_raise_c_with_balanced_parameters():
    # a + b = c
    assert abs(contiguous_raise_c(0.8, 1.4, 2.2, 0.45)) <= 1e-11


def test_contiguous_relations_hold_in_extended_precision():
    # the identities themselves, independently of hyp2f1
    with mp.workdps(30):
        a, b, c, z = mp.mpf("0.5"), mp.mpf("1.5"), mp.mpf("2.5"), mp.mpf("0.3")
        F = lambda cc: mp.hyp2f1(a, b, cc, z)
        dF = mp.diff(lambda t: mp.hyp2f1(a, b, c, t), z)
        s = a + b - c
        assert abs(z * dF - (c - 1) * (F(c - 1) - F(c))) < mp.mpf("1e-25")
        assert abs((z - 1) * dF - (-s * F(c) + (s - a * b / c) * F(c + 1))) < mp.mpf("1e-25")


def contiguous_scale(a, b, c, z):
    """max(1, largest |F| entering either relation): absolute below 1, relative above."""
    return max(1.0, *(abs(hyp2f1(a, b, cc, z)) for cc in (c - 1, c, c + 1)))


def test_contiguous_grid(rng):
    worst = 0.0
    count = 0
    while count < 100:
        a, b, c = rng.uniform(-5, 5, 3)
        if min(abs(c - 1 - k) for k in range(-6, 1)) < 0.1 or abs(c) < 0.1:
            continue
        count += 1
        for z in np.arange(1, 10) / 10:
            r = max(abs(contiguous_lower_c(a, b, c, z)), abs(contiguous_raise_c(a, b, c, z)))
            worst = max(worst, r / contiguous_scale(a, b, c, z))
    assert worst <= 1e-10


params = st.floats(-5, 5, allow_nan=False)
argument = st.floats(-0.95, 0.95, allow_nan=False)


@settings(max_examples=300, deadline=None)
@given(params, params, params, argument)
def test_symmetry_bitwise(a, b, c, z):
    try:
        left = hyp2f1(a, b, c, z)
    except PoleAtC:
        assume(False)
    assert left == hyp2f1(b, a, c, z)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 8), params, params, st.floats(-3, 3, allow_nan=False))
def test_terminating_matches_polynomial(m, b, c, z):
    assume(min(abs(c + k) for k in range(m + 1)) > 0.05)
    # numerators within 1e-12 of a nonpositive integer are snapped on purpose
    assume(b > 1e-9 or abs(b - round(b)) > 1e-9)
    with mp.workdps(40):
        ref = mp.fsum(mp.rf(-m, k) * mp.rf(b, k) / (mp.rf(c, k) * mp.factorial(k)) * mp.mpf(z) ** k for k in range(m + 1))
        scale = mp.fsum(abs(mp.rf(-m, k) * mp.rf(b, k) / (mp.rf(c, k) * mp.factorial(k)) * mp.mpf(z) ** k) for k in range(m + 1))
    # relative to the size of the terms; exact cancellation has no relative meaning
    assert abs(hyp2f1(-m, b, c, z) - float(ref)) <= 1e-13 * float(scale)


@settings(max_examples=200, deadline=None)
@given(params, params, st.floats(0.2, 5), st.floats(0.05, 0.9))
def test_contiguous_property(a, b, c, z):
    assume(abs(c - 1) > 0.1)
    scale = contiguous_scale(a, b, c, z)
    assert abs(contiguous_lower_c(a, b, c, z)) <= 1e-10 * scale
    assert abs(contiguous_raise_c(a, b, c, z)) <= 1e-10 * scale
