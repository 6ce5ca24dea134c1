import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from nrinv.errors import InadmissibleColor, NonIntegralDifference
from nrinv.qarith import QParams, lobachevsky, removable_limit, vol_oct

levels = st.integers(min_value=2, max_value=12)
colors = st.complex_numbers(min_magnitude=0, max_magnitude=4, allow_nan=False, allow_infinity=False)


def generic(p, a):
    # keep samples away from the singular integers
    return p.admissible(a) and min(abs(a - n) for n in range(-8, 9)) > 1e-3


def test_qpow_special_values():
    p = QParams(7)
    assert p.qpow(0) == 1
    assert abs(p.qpow(7) + 1) < 1e-15
    assert abs(p.qpow(14) - 1) < 1e-14


def test_qnum_examples():
    p = QParams(3)
    assert abs(p.qnum(1) - 1j * math.sqrt(3)) < 1e-15
    assert p.qnum(0) == 0
    assert abs(p.qnum(3)) < 1e-15


def test_qfact():
    p = QParams(3)
    assert p.qfact(0) == 1
    assert abs(p.qfact(2) + 3) < 1e-14
    p5 = QParams(5)
    assert abs(p5.qfact(2) * p5.qfact(2) - 5) < 1e-13


def test_qbin_basics():
    p = QParams(5)
    assert p.qbin(0.3 + 0.2j, 0.3 + 0.2j) == 1
    assert abs(p.qbin(4, 0) - 1) < 1e-13
    with pytest.raises(NonIntegralDifference):
        p.qbin(1.5, 0)
    with pytest.raises(NonIntegralDifference):
        p.qbin(7, 0)


def test_mdim_r2_half():
    assert abs(QParams(2).mdim(0.5) + math.sqrt(2)) < 1e-14


def test_mdim_inadmissible():
    with pytest.raises(InadmissibleColor):
        QParams(5).mdim(3)
    # multiples of r are fine
    assert abs(QParams(5).mdim(0) - 1) < 1e-12


def test_mdim_closed_form():
    # d(a) = (-1)^(r-1) r {a} / {r a}
    for r in (2, 3, 4, 7):
        p = QParams(r)
        a = 0.37 + 0.11j
        assert abs(p.mdim(a) - p.sign * r * p.qnum(a) / p.qnum(r * a)) < 1e-12


def test_admissible_and_hr():
    p = QParams(4)
    assert p.hr == (-3, -1, 1, 3)
    assert p.admissible(0.5) and p.admissible(8) and not p.admissible(2)
    assert p.in_hr(3) and not p.in_hr(2) and not p.in_hr(5)


@given(levels, colors)
@settings(max_examples=200, deadline=None)
def test_qpow_multiplicative(r, x):
    p = QParams(r)
    assert abs(p.qpow(x) * p.qpow(-x) - 1) < 1e-9 * max(1, abs(p.qpow(x)) ** 2)


@given(levels, colors)
@settings(max_examples=200, deadline=None)
def test_qnum_odd_and_periodic(r, x):
    p = QParams(r)
    scale = max(1.0, abs(p.qnum(x)))
    assert abs(p.qnum(-x) + p.qnum(x)) < 1e-12 * scale
    assert abs(p.qnum(x + 2 * r) - p.qnum(x)) < 1e-9 * scale


@given(levels, colors)
@settings(max_examples=200, deadline=None)
def test_mdim_times_charsum_is_one(r, b):
    p = QParams(r)
    if not generic(p, b):
        return
    assert abs(p.mdim(b) * p.inv_mdim_charsum(b) - 1) < 1e-8


@given(levels, colors)
@settings(max_examples=100, deadline=None)
def test_mdim_period(r, a):
    p = QParams(r)
    if not generic(p, a):
        return
    d = p.mdim(a)
    assert abs(p.mdim(a + 2 * r) - d) < 1e-8 * max(1, abs(d))


def test_charsum_at_zero():
    for r in (3, 5, 7):
        assert abs(QParams(r).inv_mdim_charsum(0) - 1) < 1e-14


def test_charsum_total_over_hr_odd_r():
    for r in (3, 5, 7, 9):
        p = QParams(r)
        a = 0.123 + 0.05j
        assert abs(sum(p.inv_mdim_charsum(a + k) for k in p.hr) - 1) < 1e-10


def test_twist():
    p = QParams(5)
    assert abs(p.twist(4) - 1) < 1e-15


def test_delta_examples():
    p3 = QParams(3)
    assert abs(p3.delta(-1) + 3 * math.sqrt(3) * 1j) < 1e-12
    assert abs(p3.gauss_delta(-1) + 3 * math.sqrt(3) * 1j) < 1e-12
    assert QParams(4).delta(-1) == 0
    assert abs(QParams(4).gauss_delta(-1)) < 1e-12
    p5 = QParams(5)
    want = 1j * 5 ** 1.5 * cmath.exp(3j * math.pi / 10)
    assert abs(p5.delta(-1) - want) < 1e-12
    assert abs(p5.gauss_delta(-1) - want) < 1e-12


@pytest.mark.parametrize("r", range(2, 17))
def test_delta_closed_form_matches_sum(r):
    p = QParams(r)
    for s in (1, -1):
        assert abs(p.delta(s) - p.gauss_delta(s)) < 1e-9
    assert abs(p.delta(1) - p.delta(-1).conjugate()) < 1e-12


def test_delta_bad_sign():
    with pytest.raises(ValueError):
        QParams(3).delta(0)


def test_lobachevsky_values():
    assert lobachevsky(0) == 0
    assert abs(lobachevsky(math.pi / 2)) < 1e-12
    assert abs(vol_oct() - 3.66386237670887606) < 1e-9


def test_lobachevsky_against_quadrature():
    from scipy.integrate import quad
    for x in (0.2, 0.7, 1.3, 2.9, 3.1405):
        ref = -quad(lambda t: math.log(abs(2 * math.sin(t))), 0, x, limit=200)[0]
        assert abs(lobachevsky(x) - ref) < 1e-7


def test_lobachevsky_odd_periodic():
    for x in (0.3, 1.1):
        assert abs(lobachevsky(-x) + lobachevsky(x)) < 1e-9
        assert abs(lobachevsky(x + math.pi) - lobachevsky(x)) < 1e-9


def test_removable_limit():
    f = lambda z: cmath.sin(z) / z
    assert abs(removable_limit(f, 0) - 1) < 1e-14
    # a simple pole contributes nothing to the symmetric mean
    g = lambda z: 1 / z + 3
    assert abs(removable_limit(g, 0) - 3) < 1e-14


def test_bad_level():
    with pytest.raises(ValueError):
        QParams(1)
