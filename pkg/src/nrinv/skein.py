"""Colored-graph calculus: 6j-symbols, twists, fusion and a small
expression-tree evaluator.

The evaluator does not recognise isotopic graphs. A closed graph is
written as a tree of primitives (unknot, theta, tetrahedron, Hopf link)
glued together by the moves that have closed-form effects, and two trees
for the same graph can only be compared by evaluating both.

Orientation convention for vertices: a vertex whose three edges are all
incoming with colors (a, b, c) is admissible iff a + b + c is in H_r.
For the tetrahedron ``Tet(j1, ..., j6)`` the four vertex sums are
j1+j2-j3, j3+j4-j5, j2+j4-j6 and j1+j6-j5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import (ColorMismatch, EvenLevel, InadmissibleColor, IntegralDegree,
                     NonIntegralDifference, RangeError)
from .qarith import QParams


# ---------------------------------------------------------------------------
# elementary coefficients

def vertex_admissible(p: QParams, a: complex, b: complex, c: complex) -> bool:
    return p.in_hr(a + b + c)


def tetrahedron_vertex_sums(j: tuple[complex, ...]) -> tuple[complex, ...]:
    j1, j2, j3, j4, j5, j6 = j
    return (j1 + j2 - j3, j3 + j4 - j5, j2 + j4 - j6, j1 + j6 - j5)


def tet_admissible(p: QParams, *j: complex) -> bool:
    if len(j) != 6:
        raise TypeError("a tetrahedron has six edges")
    return all(p.in_hr(s) for s in tetrahedron_vertex_sums(j))


def twist_coeff(p: QParams, alpha: complex, n: int = 1) -> complex:
    """Factor picked up by an alpha-colored edge under n full twists."""
    return p.qpow(n * (alpha * alpha - (p.r - 1) ** 2) / 2)


def vertex_twist_coeff(p: QParams, alpha: complex, beta: complex, gamma: complex,
                       n: int = 1) -> complex:
    """Factor for n half-twists of the (alpha, beta) pair above a gamma edge."""
    return p.qpow(n * (gamma * gamma - alpha * alpha - beta * beta + (p.r - 1) ** 2) / 4)


def hopf_value(p: QParams, a: complex, b: complex) -> complex:
    return p.sign * p.r * p.qpow(a * b)


# ---------------------------------------------------------------------------
# 6j-symbols

def sixj(p: QParams, j1: complex, j2: complex, j3: complex,
         j4: complex, j5: complex, j6: complex) -> complex:
    """Value of the tetrahedron colored j1..j6.

    Returns 0 when a vertex condition fails (use :func:`tet_admissible`
    to tell a structural zero from a computed one).
    """
    j = (None, j1, j2, j3, j4, j5, j6)
    for c in j[1:]:
        if not p.admissible(c):
            raise InadmissibleColor(f"6j color {c} lies in X_{p.r}")
    if not tet_admissible(p, *j[1:]):
        return 0j
    r = p.r

    def A(x, y, z):
        return (j[x] + j[y] + j[z] + 3 * (r - 1)) / 2

    def B(x, y, z):
        return (j[x] + j[y] - j[z] + r - 1) / 2

    def fact_arg(x, y, z):
        # vertex admissibility makes these integers; rounding removes drift
        n = p.as_int(B(x, y, z), f"B_{x}{y}{z}")
        if not 0 <= n <= r - 1:
            raise RangeError(f"B_{x}{y}{z} = {n} outside 0..{r - 1}")
        return n

    b345, b123, b246, b165 = (fact_arg(3, 4, 5), fact_arg(1, 2, 3),
                              fact_arg(2, 4, 6), fact_arg(1, 6, 5))
    try:
        pre = (-1) ** ((r - 1 + b165) % 2) * (p.qfact(b345) * p.qfact(b123)) \
            / (p.qfact(b246) * p.qfact(b165))
        pre *= p.qbin(j3 + r - 1, A(1, 2, 3) + 1 - r) / p.qbin(j3 + r - 1, B(3, 5, 4))
        m = max(0, p.as_int((j3 + j6 - j2 - j5) / 2, "m"))
        top = min(b345, b165)
        total = 0j
        for z in range(m, top + 1):
            total += (-1) ** z \
                * p.qbin(A(1, 6, 5) + 1, j5 + z + r) \
                * p.qbin(B(1, 5, 6) + z, B(1, 5, 6)) \
                * p.qbin(B(2, 6, 4) + b345 - z, B(2, 6, 4)) \
                * p.qbin(B(4, 5, 3) + z, B(4, 6, 2))
    except NonIntegralDifference as exc:
        raise RangeError(str(exc)) from exc
    return pre * total


def log_sixj_zero(p: QParams) -> float:
    """log of the all-zero 6j-symbol, from its positive-term expansion
    r^2 sum_z ({z}! {(r-1)/2 - z}!)^-4 (odd r only)."""
    if p.r % 2 == 0:
        raise EvenLevel(f"the zero-colored 6j-symbol needs odd r, got {p.r}")
    r = p.r
    half = (r - 1) // 2
    # log |{j}!| ; each {j} = 2i sin(pi j / r)
    logfact = [0.0]
    for k in range(1, half + 1):
        logfact.append(logfact[-1] + math.log(2 * math.sin(math.pi * k / r)))
    logs = [-4 * (logfact[z] + logfact[half - z]) for z in range(half + 1)]
    top = max(logs)
    return 2 * math.log(r) + top + math.log(sum(math.exp(t - top) for t in logs))


def sixj_zero(p: QParams) -> float:
    return math.exp(log_sixj_zero(p))


# ---------------------------------------------------------------------------
# fusion

@dataclass(frozen=True)
class FusionTerm:
    gamma: complex
    weight: complex | None
    admissible: bool = True


def fuse(p: QParams, alpha: complex, beta: complex) -> list[FusionTerm]:
    """Channels gamma in alpha+beta+H_r with weights d(gamma).

    A channel landing in X_r is kept with ``admissible=False`` and no weight.
    """
    for c in (alpha, beta):
        if not p.admissible(c):
            raise InadmissibleColor(f"color {c} lies in X_{p.r}")
    terms = []
    for k in p.hr:
        g = alpha + beta + k
        if p.admissible(g):
            terms.append(FusionTerm(g, p.mdim(g)))
        else:
            terms.append(FusionTerm(g, None, admissible=False))
    return terms


# ---------------------------------------------------------------------------
# expression trees

@dataclass(frozen=True)
class Unknot:
    alpha: complex


@dataclass(frozen=True)
class Theta:
    a: complex
    b: complex
    c: complex


@dataclass(frozen=True)
class Tet:
    j1: complex
    j2: complex
    j3: complex
    j4: complex
    j5: complex
    j6: complex


@dataclass(frozen=True)
class Hopf:
    a: complex
    b: complex


@dataclass(frozen=True)
class EdgeSum:
    """Connected sum along edge ``left_edge`` of ``left`` and ``right_edge`` of ``right``."""
    left: "SkeinExpr"
    right: "SkeinExpr"
    left_edge: int = 0
    right_edge: int = 0


@dataclass(frozen=True)
class VertexSum:
    """Connected sum along a vertex; the three listed edges of each side are glued pairwise."""
    left: "SkeinExpr"
    right: "SkeinExpr"
    left_edges: tuple[int, int, int]
    right_edges: tuple[int, int, int]


@dataclass(frozen=True)
class Disjoint:
    left: "SkeinExpr"
    right: "SkeinExpr"


@dataclass(frozen=True)
class TwistEdge:
    child: "SkeinExpr"
    edge: int
    n: int = 1


@dataclass(frozen=True)
class TwistVertex:
    """n half-twists of edges ``edges[0]``, ``edges[1]`` above ``edges[2]``."""
    child: "SkeinExpr"
    edges: tuple[int, int, int]
    n: int = 1


@dataclass(frozen=True)
class ReverseEdge:
    """Same graph with edge ``edge`` reversed and its color negated."""
    child: "SkeinExpr"
    edge: int


SkeinExpr = Union[Unknot, Theta, Tet, Hopf, EdgeSum, VertexSum, Disjoint,
                  TwistEdge, TwistVertex, ReverseEdge]


def edges(expr: SkeinExpr) -> tuple[complex, ...]:
    """Edge colors of the graph an expression denotes, in a fixed order."""
    if isinstance(expr, Unknot):
        return (expr.alpha,)
    if isinstance(expr, Theta):
        return (expr.a, expr.b, expr.c)
    if isinstance(expr, Tet):
        return (expr.j1, expr.j2, expr.j3, expr.j4, expr.j5, expr.j6)
    if isinstance(expr, Hopf):
        return (expr.a, expr.b)
    if isinstance(expr, (EdgeSum, Disjoint)):
        return edges(expr.left) + edges(expr.right)
    if isinstance(expr, VertexSum):
        right = edges(expr.right)
        kept = tuple(c for i, c in enumerate(right) if i not in expr.right_edges)
        return edges(expr.left) + kept
    if isinstance(expr, (TwistEdge, TwistVertex)):
        return edges(expr.child)
    if isinstance(expr, ReverseEdge):
        cs = list(edges(expr.child))
        cs[expr.edge] = -cs[expr.edge]
        return tuple(cs)
    raise TypeError(f"not a skein expression: {expr!r}")


def _same(p: QParams, a: complex, b: complex) -> bool:
    return abs(complex(a) - complex(b)) < p.tol


def _check_leaf_colors(p: QParams, colors) -> None:
    for c in colors:
        if not p.admissible(c):
            raise InadmissibleColor(f"leaf color {c} lies in X_{p.r}")


def evaluate_status(p: QParams, expr: SkeinExpr) -> tuple[complex, bool]:
    """Evaluate ``expr``; the flag is True when the value is a structural zero
    (split graph or inadmissible vertex) rather than a computed number."""
    if isinstance(expr, Unknot):
        return p.mdim(expr.alpha), False
    if isinstance(expr, Theta):
        _check_leaf_colors(p, edges(expr))
        if vertex_admissible(p, expr.a, expr.b, expr.c):
            return 1 + 0j, False
        return 0j, True
    if isinstance(expr, Tet):
        cs = edges(expr)
        _check_leaf_colors(p, cs)
        if not tet_admissible(p, *cs):
            return 0j, True
        return sixj(p, *cs), False
    if isinstance(expr, Hopf):
        _check_leaf_colors(p, edges(expr))
        return hopf_value(p, expr.a, expr.b), False
    if isinstance(expr, EdgeSum):
        a = edges(expr.left)[expr.left_edge]
        b = edges(expr.right)[expr.right_edge]
        if not _same(p, a, b):
            raise ColorMismatch(f"edge sum joins colors {a} and {b}")
        lv, lz = evaluate_status(p, expr.left)
        rv, rz = evaluate_status(p, expr.right)
        return lv * rv / p.mdim(a), lz or rz
    if isinstance(expr, VertexSum):
        le, re_ = edges(expr.left), edges(expr.right)
        for i, j in zip(expr.left_edges, expr.right_edges):
            if not _same(p, le[i], re_[j]):
                raise ColorMismatch(f"vertex sum joins colors {le[i]} and {re_[j]}")
        lv, lz = evaluate_status(p, expr.left)
        rv, rz = evaluate_status(p, expr.right)
        return lv * rv, lz or rz
    if isinstance(expr, Disjoint):
        # still validates both sides
        evaluate_status(p, expr.left)
        evaluate_status(p, expr.right)
        return 0j, True
    if isinstance(expr, TwistEdge):
        v, z = evaluate_status(p, expr.child)
        alpha = edges(expr.child)[expr.edge]
        return twist_coeff(p, alpha, expr.n) * v, z
    if isinstance(expr, TwistVertex):
        v, z = evaluate_status(p, expr.child)
        cs = edges(expr.child)
        a, b, c = (cs[i] for i in expr.edges)
        return vertex_twist_coeff(p, a, b, c, expr.n) * v, z
    if isinstance(expr, ReverseEdge):
        return evaluate_status(p, expr.child)
    raise TypeError(f"not a skein expression: {expr!r}")


def evaluate(p: QParams, expr: SkeinExpr) -> complex:
    return evaluate_status(p, expr)[0]


def reverse_all(expr: SkeinExpr) -> SkeinExpr:
    """Wrap ``expr`` so every edge is reversed (colors negated)."""
    out = expr
    for i in range(len(edges(expr))):
        out = ReverseEdge(out, i)
    return out


# ---------------------------------------------------------------------------
# Kirby-colored meridian around three strands

def encircle_coefficient(p: QParams, a: complex,
                         strands: tuple[complex, complex, complex] = (0, 0, 0)) -> complex:
    """Scalar by which a degree-a Kirby-colored meridian around three strands
    (colors summing to 0) can be erased.

    Each channel a+k is the connected sum of three Hopf links along the
    meridian; the weighted sum is r^3 for odd r.
    """
    if p.r % 2 == 0:
        raise EvenLevel(f"encircling lemma needs odd r, got {p.r}")
    if p.is_integral(a):
        raise IntegralDegree(f"Kirby degree {a} is integral")
    if abs(sum(complex(s) for s in strands)) > p.tol:
        raise ValueError(f"strand colors {strands} do not sum to 0")
    total = 0j
    for k in p.hr:
        c = a + k
        expr = EdgeSum(EdgeSum(Hopf(c, strands[0]), Hopf(c, strands[1])),
                       Hopf(c, strands[2]))
        total += p.mdim(c) * evaluate(p, expr)
    return total
