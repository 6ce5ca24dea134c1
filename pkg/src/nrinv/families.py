"""Closed-form evaluators for explicit link families.

Chain links, (2, 2n+1) torus knots with extra twists, the long Hopf
bracket, the norm of the fundamental hyperbolic links, and the
one-variable functions P(alpha) and K~(X) attached to a framed knot.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import EvenLevel, InadmissibleColor, SingularNormalization
from .qarith import QParams, removable_limit
from .skein import (EdgeSum, Hopf, ReverseEdge, SkeinExpr, TwistEdge, Unknot,
                    hopf_value, log_sixj_zero, twist_coeff)


# ---------------------------------------------------------------------------
# chain links

@dataclass(frozen=True)
class ChainSpec:
    """Unknots L_1, ..., L_n, each L_j linking L_{j+1} once.

    ``clasps[j]`` is the sign of the crossing pair between L_{j+1} and
    L_{j+2} (0-based), i.e. the off-diagonal entry of the linking matrix.
    """

    framings: tuple[int, ...]
    colors: tuple[complex, ...]
    clasps: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "framings", tuple(int(a) for a in self.framings))
        object.__setattr__(self, "colors", tuple(complex(c) for c in self.colors))
        n = len(self.framings)
        if n < 1:
            raise ValueError("a chain needs at least one component")
        if len(self.colors) != n:
            raise ValueError(f"{n} framings but {len(self.colors)} colors")
        clasps = (1,) * (n - 1) if self.clasps is None else tuple(int(s) for s in self.clasps)
        if len(clasps) != n - 1 or any(s not in (1, -1) for s in clasps):
            raise ValueError(f"need {n - 1} clasp signs in {{+1, -1}}, got {clasps}")
        object.__setattr__(self, "clasps", clasps)

    def __len__(self):
        return len(self.framings)

    def mirror(self) -> "ChainSpec":
        """Mirror image: framings and clasps negated, colors conjugated."""
        return ChainSpec(tuple(-a for a in self.framings),
                         tuple(c.conjugate() for c in self.colors),
                         tuple(-s for s in self.clasps))

    def with_colors(self, colors: Sequence[complex]) -> "ChainSpec":
        return ChainSpec(self.framings, tuple(colors), self.clasps)


def chain_linking_matrix(framings: Sequence[int], clasps: Sequence[int] | None = None) -> list[list[int]]:
    n = len(framings)
    clasps = [1] * (n - 1) if clasps is None else list(clasps)
    lk = [[0] * n for _ in range(n)]
    for i, a in enumerate(framings):
        lk[i][i] = int(a)
    for i, s in enumerate(clasps):
        lk[i][i + 1] = lk[i + 1][i] = int(s)
    return lk


def chain_eval(p: QParams, spec: ChainSpec) -> complex:
    """Value of the colored framed chain link."""
    betas = spec.colors
    for b in betas:
        if not p.admissible(b):
            raise InadmissibleColor(f"chain color {b} lies in X_{p.r}")
    n = len(betas)
    if n == 1:
        return p.mdim(betas[0]) * twist_coeff(p, betas[0], spec.framings[0])
    out = 1 + 0j
    for b in betas[1:-1]:
        out /= p.mdim(b)
    for a, b in zip(spec.framings, betas):
        out *= twist_coeff(p, b, a)
    for j, s in enumerate(spec.clasps):
        out *= p.sign * p.r * p.qpow(s * betas[j] * betas[j + 1])
    return out


def chain_expr(spec: ChainSpec) -> SkeinExpr:
    """The same chain as a skein expression: Hopf links glued along edges.

    A negative clasp is a Hopf link with one component reversed.
    """
    b = spec.colors
    if len(b) == 1:
        expr: SkeinExpr = Unknot(b[0])
        return TwistEdge(expr, 0, spec.framings[0]) if spec.framings[0] else expr

    def link(j):
        if spec.clasps[j] > 0:
            return Hopf(b[j], b[j + 1])
        return ReverseEdge(Hopf(b[j], -b[j + 1]), 1)

    expr = link(0)
    where = [0, 1]          # edge index of each component in expr
    for j in range(1, len(b) - 1):
        width = 2 * j
        expr = EdgeSum(expr, link(j), where[j], 0)
        where.append(width + 1)
    for j, a in enumerate(spec.framings):
        if a:
            expr = TwistEdge(expr, where[j], a)
    return expr


# ---------------------------------------------------------------------------
# torus knots

@dataclass(frozen=True)
class TorusCableSpec:
    """Closure of the 2-braid sigma^(2n+1) with f extra full twists."""

    f: int
    n: int
    alpha: complex

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"braid exponent index n must be >= 0, got {self.n}")


def _t(p: QParams, a: complex) -> complex:
    return (a * a - (p.r - 1) ** 2) / 2


def _torus_sum(p: QParams, f: int, n: int, alpha: complex) -> complex:
    ta = _t(p, alpha)
    out = 0j
    for k in p.hr:
        g = 2 * alpha + k
        out += p.qpow(f * ta + (2 * n + 1) / 2 * (-2 * ta + _t(p, g))) * p.mdim(g)
    return out


# channels closer than this to X_r lose ~eps/distance to cancellation
_NEAR_SINGULAR = 1e-3


def _channel_distance(p: QParams, g: complex) -> float:
    n = round(g.real)
    if n % p.r == 0:
        return math.inf
    return abs(g - n)


def torus_cable_eval(p: QParams, spec: TorusCableSpec) -> complex:
    """Fusion-channel sum for the twisted (2, 2n+1) torus knot.

    When some channel 2 alpha + k is inadmissible the value is taken as
    the limit in alpha, which exists. Channels merely close to X_r go the
    same way, since the direct sum cancels badly there.
    """
    alpha = complex(spec.alpha)
    if not p.admissible(alpha):
        raise InadmissibleColor(f"color {alpha} lies in X_{p.r}")
    if all(_channel_distance(p, 2 * alpha + k) > _NEAR_SINGULAR for k in p.hr):
        return _torus_sum(p, spec.f, spec.n, alpha)
    # singular channels sit at half-integers, genuine poles at integers 1/2 away
    return removable_limit(lambda a: _torus_sum(p, spec.f, spec.n, a), alpha, radius=0.1)


def trefoil5_closed_form(p: QParams, alpha: complex) -> complex:
    """Closed form of the +1-framed trefoil (f=-2, n=1) at r = 5."""
    if p.r != 5:
        raise ValueError("closed form is specific to r = 5")
    q = p.qpow
    return 5 * q(alpha * alpha / 2) * (q(3) * p.qnum(3 * alpha) + q(1) * p.qnum(5 * alpha)
                                       - q(-1) * p.qnum(9 * alpha)) / p.qnum(5 * alpha)


# ---------------------------------------------------------------------------
# knot evaluators

class KnotEvaluator(Protocol):
    p: QParams
    framing: int

    def __call__(self, alpha: complex) -> complex: ...


@dataclass(frozen=True)
class TorusKnot:
    """Evaluator alpha -> N(K(alpha)) for the twisted (2, 2n+1) torus knot."""

    p: QParams
    f: int
    n: int

    @property
    def framing(self) -> int:
        return self.f + 2 * self.n + 1

    def __call__(self, alpha: complex) -> complex:
        return torus_cable_eval(self.p, TorusCableSpec(self.f, self.n, alpha))


@dataclass(frozen=True)
class FramedUnknot:
    p: QParams
    framing: int

    def __call__(self, alpha: complex) -> complex:
        return chain_eval(self.p, ChainSpec((self.framing,), (alpha,)))


def _safe_eval(K: KnotEvaluator, alpha: complex) -> complex:
    if K.p.admissible(alpha):
        try:
            return K(alpha)
        except InadmissibleColor:
            pass
    return removable_limit(K, alpha)


def knot_P(K: KnotEvaluator, alpha: complex) -> complex:
    """P(alpha) = sum over k in H_r of N(K(alpha + k)).

    At integral alpha some terms are limits; the whole sum is then taken
    as a limit in alpha.
    """
    p = K.p
    alpha = complex(alpha)
    if p.is_integral(alpha):
        return removable_limit(lambda a: sum(K(a + k) for k in p.hr), alpha)
    return sum(_safe_eval(K, alpha + k) for k in p.hr)


def _ktilde_alpha(K: KnotEvaluator, alpha: complex) -> complex:
    p = K.p
    d = p.mdim(alpha)
    if abs(d) < 1e-300:
        raise SingularNormalization(f"d({alpha}) underflows")
    return K(alpha) / (twist_coeff(p, alpha, K.framing) * d)


def ktilde_at(K: KnotEvaluator, alpha: complex) -> complex:
    """K~(q^alpha), with integral alpha handled as a limit."""
    alpha = complex(alpha)
    if K.p.is_integral(alpha):
        return removable_limit(lambda a: _ktilde_alpha(K, a), alpha)
    return _ktilde_alpha(K, alpha)


def ktilde_eval(K: KnotEvaluator, X: complex) -> complex:
    """K~(X) = N(K(alpha)) / (theta_alpha^f d(alpha)) for X = q^alpha.

    alpha is recovered on the strip -r < Re(alpha) <= r.
    """
    X = complex(X)
    if X == 0:
        raise SingularNormalization("X = 0 is not of the form q^alpha")
    alpha = cmath.log(X) * K.p.r / (1j * math.pi)
    return ktilde_at(K, alpha)


# ---------------------------------------------------------------------------
# Hopf bracket and the fundamental hyperbolic links

def long_hopf_bracket(p: QParams, alpha: complex, beta: complex) -> complex:
    """Scalar by which an alpha-colored meridian multiplies a beta-colored strand."""
    for c in (alpha, beta):
        if not p.admissible(c):
            raise InadmissibleColor(f"color {c} lies in X_{p.r}")
    return hopf_value(p, alpha, beta) / p.mdim(beta)


def log_fundamental_link_norm(p: QParams, k: int) -> float:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if p.r % 2 == 0:
        raise EvenLevel(f"fundamental link norm needs odd r, got {p.r}")
    return 3 * k * math.log(p.r) + (k - 1) * log_sixj_zero(p)


def fundamental_link_norm(p: QParams, k: int) -> float:
    """|N| = r^(3k) * (zero-colored 6j)^(k-1)."""
    return math.exp(log_fundamental_link_norm(p, k))


def volume_estimate(p: QParams, k: int) -> float:
    """(2 pi / r) log of the fundamental link norm."""
    return 2 * math.pi / p.r * math.log(fundamental_link_norm(p, k))


# ---------------------------------------------------------------------------
# Laurent-polynomial certificate for P

def laurent_certificate_error(K: KnotEvaluator, test_points: Sequence[float],
                              offset: float = 0.1234) -> float:
    """Max relative error of the trigonometric interpolant of
    g(alpha) = q^(-f alpha^2 / 2) P(alpha) at ``test_points``.

    g is sampled at 4r+1 equispaced points on one period 2r, which pins
    down every frequency q^(m alpha) with |m| <= 2r. If g is a Laurent
    polynomial in q^alpha of that width the interpolant reproduces it
    everywhere. ``offset`` keeps the samples off the integers.
    """
    import numpy as np

    p = K.p
    f = K.framing
    period = 2 * p.r
    n = 4 * p.r + 1

    def g(a):
        return p.qpow(-f * a * a / 2) * knot_P(K, a)

    xs = offset + period * np.arange(n) / n
    ys = np.array([g(x) for x in xs])
    coef = np.fft.fft(ys) / n
    freqs = np.fft.fftfreq(n, d=1.0 / n)      # integers -2r..2r

    def interp(x):
        return np.sum(coef * np.exp(2j * np.pi * freqs * (x - offset) / period))

    worst = 0.0
    for x in test_points:
        exact = g(x)
        worst = max(worst, abs(interp(x) - exact) / max(1.0, abs(exact)))
    return float(worst)
