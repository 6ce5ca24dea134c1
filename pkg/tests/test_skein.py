import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from nrinv.errors import ColorMismatch, EvenLevel, InadmissibleColor, IntegralDegree
from nrinv.qarith import QParams
from nrinv.skein import (Disjoint, EdgeSum, Hopf, ReverseEdge, Tet, Theta, TwistEdge,
                         TwistVertex, Unknot, VertexSum, edges, encircle_coefficient,
                         evaluate, evaluate_status, fuse, hopf_value, log_sixj_zero, sixj,
                         sixj_zero, tet_admissible, twist_coeff, vertex_admissible,
                         vertex_twist_coeff)


def test_vertex_admissible():
    assert vertex_admissible(QParams(5), 0, 0, 0)
    assert not vertex_admissible(QParams(4), 0, 0, 0)
    p = QParams(6)
    a, b = 0.31 + 0.2j, 1.7 - 0.2j
    assert vertex_admissible(p, a, b, 5 - a - b)


@pytest.mark.parametrize("r,want", [(3, 2.0), (5, 8.854101966249685), (7, 52.98313260265797)])
def test_sixj_zero_values(r, want):
    p = QParams(r)
    assert abs(sixj_zero(p) - want) < 1e-9 * want
    assert abs(sixj(p, 0, 0, 0, 0, 0, 0) - sixj_zero(p)) < 1e-9 * want


def test_sixj_zero_even_level():
    with pytest.raises(EvenLevel):
        sixj_zero(QParams(4))


def test_sixj_zero_positive_large_r():
    for r in (51, 101, 201):
        v = log_sixj_zero(QParams(r))
        assert v > 0


def test_sixj_vertex_failure_is_zero():
    p = QParams(5)
    js = (0.3, 0.45, 0.8, 0.2, -1.05, -1.35)
    assert not tet_admissible(p, *js)
    assert sixj(p, *js) == 0
    val, structural = evaluate_status(p, Tet(*js))
    assert val == 0 and structural


def test_sixj_inadmissible_color():
    with pytest.raises(InadmissibleColor):
        sixj(QParams(5), 1, 0, 0, 0, 0, 0)


def _orthogonality_error(p, j1, j2, j4, h):
    worst = 0.0
    j3s = [j1 + j2 + x for x in p.hr]
    for j3, j3p in itertools.product(j3s, j3s):
        j5 = j3 + j4 + h
        total = 0j
        for k in p.hr:
            j6 = j5 - j1 + k
            if not p.admissible(j6):
                continue
            total += p.mdim(j6) * sixj(p, j1, j2, j3, j4, j5, j6) * sixj(p, j1, j6, j5, -j4, j3p, j2)
        want = 1 / p.mdim(j3) if j3 == j3p else 0
        worst = max(worst, abs(total - want) / max(1.0, abs(1 / p.mdim(j3))))
    return worst


@pytest.mark.parametrize("r", [3, 4, 5, 6, 7])
def test_sixj_orthogonality(r):
    p = QParams(r)
    rng = random.Random(r)
    for _ in range(3):
        j1 = complex(rng.uniform(-1, 1), rng.uniform(-0.2, 0.2))
        j2 = complex(rng.uniform(-1, 1), rng.uniform(-0.2, 0.2))
        j4 = complex(rng.uniform(-1, 1), rng.uniform(-0.2, 0.2))
        h = rng.choice(p.hr)
        assert _orthogonality_error(p, j1, j2, j4, h) < 1e-8


def test_twist_coeffs():
    p = QParams(5)
    a = 0.4 + 0.1j
    assert twist_coeff(p, a, 0) == 1
    assert abs(twist_coeff(p, 4, 3) - 1) < 1e-14
    assert abs(twist_coeff(p, a, 1) * twist_coeff(p, a, -1) - 1) < 1e-14
    assert vertex_twist_coeff(p, a, 0.3, 0.1, 0) == 1
    assert abs(vertex_twist_coeff(p, 0, 0, 4) - p.qpow(32 / 4)) < 1e-14
    b, c = 0.2, a + 0.2 + 2
    assert abs(vertex_twist_coeff(p, a, b, c) ** 2 - vertex_twist_coeff(p, a, b, c, 2)) < 1e-12


def test_fuse_terms():
    p = QParams(5)
    terms = fuse(p, 0.3, 0.45)
    assert len(terms) == 5 and all(t.admissible for t in terms)
    for t in terms:
        assert abs(t.weight - p.mdim(t.gamma)) < 1e-14
    flagged = fuse(p, 0.5, 0.5)
    assert len(flagged) == 5
    assert sum(not t.admissible for t in flagged) == 4    # only the channel 5 is a multiple of r


def test_fusion_two_routes():
    # two strands alpha, beta through a meridian c: as a chain, and by
    # fusing the strands into channels gamma first
    for r in (3, 4, 5, 6):
        p = QParams(r)
        a, b, c = 0.31 + 0.1j, 0.77, -0.43 + 0.05j
        chain = hopf_value(p, a, c) * hopf_value(p, c, b) / p.mdim(c)
        fused = sum(t.weight * hopf_value(p, c, t.gamma) / p.mdim(t.gamma) for t in fuse(p, a, b))
        assert abs(chain - fused) < 1e-9 * abs(chain)


def test_eval_leaves():
    p = QParams(5)
    a = 0.3 + 0.1j
    assert evaluate(p, Unknot(a)) == p.mdim(a)
    assert evaluate(p, Theta(a, 0.2, 4 - a - 0.2)) == 1
    assert evaluate(p, Theta(a, 0.2, 0.5)) == 0
    assert abs(evaluate(p, Hopf(a, 0.7)) - 5 * p.qpow(0.7 * a)) < 1e-12


def test_eval_disjoint_is_zero():
    p = QParams(3)
    v, z = evaluate_status(p, Disjoint(Unknot(0.5), Hopf(0.2, 0.3)))
    assert v == 0 and z


def test_edge_sum():
    p = QParams(5)
    a = 0.37
    assert abs(evaluate(p, EdgeSum(Unknot(a), Unknot(a))) - p.mdim(a)) < 1e-12
    with pytest.raises(ColorMismatch):
        evaluate(p, EdgeSum(Unknot(a), Unknot(0.2)))


def test_vertex_sum_of_thetas():
    p = QParams(5)
    a, b = 0.3, 0.45
    c = -a - b
    ex = VertexSum(Theta(a, b, c), Theta(a, b, c), (0, 1, 2), (0, 1, 2))
    assert evaluate(p, ex) == 1
    assert edges(ex) == (a, b, c)
    with pytest.raises(ColorMismatch):
        evaluate(p, VertexSum(Theta(a, b, c), Theta(b, a, c), (0, 1, 2), (0, 1, 2)))


def test_twist_nodes():
    p = QParams(5)
    a = 0.3 + 0.1j
    v = evaluate(p, TwistEdge(Unknot(a), 0, 2))
    assert abs(v - p.mdim(a) * twist_coeff(p, a, 2)) < 1e-12
    th = Theta(a, 0.2, 4 - a - 0.2)
    v = evaluate(p, TwistVertex(th, (0, 1, 2), 1))
    assert abs(v - vertex_twist_coeff(p, a, 0.2, 4 - a - 0.2)) < 1e-12


def test_reverse_edge():
    p = QParams(3)
    ex = ReverseEdge(Hopf(0.3, -0.4), 1)
    assert edges(ex) == (0.3, 0.4)
    assert abs(evaluate(p, ex) - evaluate(p, Hopf(0.3, -0.4))) < 1e-15


@pytest.mark.parametrize("r,a", [(3, 0.37), (5, 1 / 3), (7, 0.61 + 0.2j)])
def test_encircle(r, a):
    assert abs(encircle_coefficient(QParams(r), a) - r ** 3) < 1e-8 * r ** 3


def test_encircle_with_strands():
    p = QParams(5)
    v = encircle_coefficient(p, 0.37, (0.2, 0.5, -0.7))
    assert abs(v - 125) < 1e-8


def test_encircle_errors():
    with pytest.raises(EvenLevel):
        encircle_coefficient(QParams(4), 0.3)
    with pytest.raises(IntegralDegree):
        encircle_coefficient(QParams(5), 2)


@given(st.integers(2, 8), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-0.3, 0.3))
@settings(max_examples=80, deadline=None)
def test_fusion_two_routes_random(r, a, b, c, im):
    p = QParams(r)
    a, b, c = complex(a, im), complex(b, -im / 2), complex(c, im / 3)
    cols = [a, b, c] + [a + b + k for k in p.hr]
    if any(abs(x - round(x.real)) < 1e-3 for x in cols):
        return
    chain = hopf_value(p, a, c) * hopf_value(p, c, b) / p.mdim(c)
    fused = sum(t.weight * hopf_value(p, c, t.gamma) / p.mdim(t.gamma) for t in fuse(p, a, b))
    assert abs(chain - fused) < 1e-8 * max(1, abs(chain))
