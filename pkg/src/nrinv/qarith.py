"""Scalar arithmetic at the root of unity ``q = exp(i*pi/r)``.

Everything here is double-precision complex. A :class:`QParams` instance
fixes the level ``r`` and the comparison tolerance used by every
integrality test downstream.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np
from scipy.special import bernoulli

from .errors import DivergentBinomial, InadmissibleColor, NonIntegralDifference

DEFAULT_TOL = 1e-9


def nearest_int(x: complex) -> int:
    return int(round(complex(x).real))


@dataclass(frozen=True)
class QParams:
    """Level ``r`` and comparison tolerance.

    Colors and classes are compared with ``tol``: a complex number counts
    as the integer ``n`` when ``|Im| < tol`` and ``|Re - n| < tol``.
    """

    r: int
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 2:
            raise ValueError(f"level r must be an integer >= 2, got {self.r!r}")
        if not self.tol >= 0:
            raise ValueError(f"tolerance must be nonnegative, got {self.tol!r}")
        object.__setattr__(self, "r", int(self.r))

    # -- the index sets -------------------------------------------------

    @cached_property
    def hr(self) -> tuple[int, ...]:
        """The r integers 1-r, 3-r, ..., r-1."""
        return tuple(range(1 - self.r, self.r, 2))

    @property
    def q(self) -> complex:
        return self.qpow(1)

    @property
    def sign(self) -> int:
        """(-1)^(r-1)."""
        return -1 if self.r % 2 == 0 else 1

    # -- integrality ----------------------------------------------------

    def is_integral(self, x: complex) -> bool:
        x = complex(x)
        return abs(x.imag) < self.tol and abs(x.real - round(x.real)) < self.tol

    def as_int(self, x: complex, what: str = "value") -> int:
        if not self.is_integral(x):
            raise NonIntegralDifference(f"{what} = {x!r} is not an integer")
        return nearest_int(x)

    def admissible(self, alpha: complex) -> bool:
        """True unless alpha lies in X_r = Z \\ rZ."""
        if not self.is_integral(alpha):
            return True
        return nearest_int(alpha) % self.r == 0

    def in_hr(self, x: complex) -> bool:
        if not self.is_integral(x):
            return False
        n = nearest_int(x)
        return abs(n) <= self.r - 1 and (n - self.r + 1) % 2 == 0

    # -- q-numbers ------------------------------------------------------

    def qpow(self, x: complex) -> complex:
        """q^x = exp(i*pi*x/r)."""
        return cmath.exp(1j * math.pi * x / self.r)

    def qnum(self, x: complex) -> complex:
        """{x} = q^x - q^-x."""
        return self.qpow(x) - self.qpow(-x)

    def qfact(self, k: int) -> complex:
        if k < 0:
            raise ValueError("qfact needs a nonnegative integer")
        out = 1 + 0j
        for j in range(1, k + 1):
            out *= self.qnum(j)
        return out

    def qbin(self, x: complex, y: complex) -> complex:
        """Quantum binomial prod_{j=1}^{x-y} {x+1-j}/{j}; x-y must lie in 0..r-1."""
        diff = complex(x) - complex(y)
        if not self.is_integral(diff):
            raise NonIntegralDifference(f"qbin({x}, {y}): difference {diff} is not an integer")
        n = nearest_int(diff)
        if not 0 <= n <= self.r - 1:
            raise NonIntegralDifference(f"qbin({x}, {y}): difference {n} outside 0..{self.r - 1}")
        out = 1 + 0j
        for j in range(1, n + 1):
            den = self.qnum(j)
            if abs(den) < 1e-300:
                raise DivergentBinomial(f"{{{j}}} vanishes at r={self.r}")
            out *= self.qnum(x + 1 - j) / den
        return out

    # -- modified dimension and friends --------------------------------

    def mdim(self, alpha: complex) -> complex:
        """Modified dimension d(alpha) = (-1)^(r-1) / qbin(alpha+r-1, alpha)."""
        if not self.admissible(alpha):
            raise InadmissibleColor(f"color {alpha} lies in X_{self.r}")
        out = complex(self.sign)
        for j in range(1, self.r):
            out *= self.qnum(j) / self.qnum(alpha + self.r - j)
        return out

    def inv_mdim_charsum(self, b: complex) -> complex:
        """1/d(b) as a character sum over H_r.

        For odd r this is r^-1 * sum_l q^(l b). For even r the sum carries
        the extra sign (-1)^(r-1), so ``mdim(b) * inv_mdim_charsum(b) == 1``
        at every level.
        """
        return self.sign * sum(self.qpow(l * b) for l in self.hr) / self.r

    def twist(self, alpha: complex) -> complex:
        """theta_alpha = q^((alpha^2 - (r-1)^2)/2)."""
        return self.qpow((alpha * alpha - (self.r - 1) ** 2) / 2)

    # -- Gauss sums -----------------------------------------------------

    def gauss_delta(self, sign: int) -> complex:
        """Delta_sign from the explicit quadratic sum over H_r."""
        _check_sign(sign)
        r = self.r
        eps = 1 if r % 2 == 0 else 0
        s_minus = sum(self.qpow(eps * k - 0.5 * k * k - k) for k in self.hr)
        d_minus = self.sign * r * self.qpow((r - 1) ** 2 - eps * eps / 2 + eps) * s_minus
        return d_minus if sign < 0 else d_minus.conjugate()

    def delta(self, sign: int) -> complex:
        """Delta_sign in closed form by r mod 4.

        ``(rq)^(3/2)`` is read as ``r^(3/2) * q^(3/2)`` with q^(3/2) = qpow(3/2).
        """
        _check_sign(sign)
        rq32 = self.r ** 1.5 * self.qpow(1.5)
        d_minus = {0: 0j, 1: 1j * rq32, 2: (1j - 1) * rq32, 3: -rq32}[self.r % 4]
        return d_minus if sign < 0 else d_minus.conjugate()


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def lobachevsky(x: float, tol: float = DEFAULT_TOL) -> float:
    """Lobachevsky function Lambda(x) = -int_0^x log|2 sin t| dt.

    Uses the Fourier series 1/2 sum sin(2nx)/n^2. Partial sums of sin(2nx)
    are bounded by 1/|sin x|, so by summation by parts the tail after N
    terms is at most 1/((N+1)^2 |sin x|); N is chosen from that bound.
    Within 1e-3 of a multiple of pi the series converges too slowly and
    the Clausen expansion around 0 is used instead.
    """
    x = float(x)
    # odd and pi-periodic
    y = math.remainder(x, math.pi)
    s = abs(math.sin(y))
    if s == 0.0:
        return 0.0
    if s < 1e-3:
        return _clausen_small(2 * y, tol) / 2
    n_terms = int(math.ceil(math.sqrt(1.0 / (tol * s))))
    n = np.arange(1, n_terms + 1, dtype=float)
    return float(0.5 * np.sum(np.sin(2 * n * y) / n**2))


def _clausen_small(theta: float, tol: float) -> float:
    # Cl2(t) = t - t log|t| + sum_k |B_2k| t^(2k+1) / (2k (2k+1) (2k)!), |t| < 2 pi
    out = theta - theta * math.log(abs(theta))
    b = bernoulli(40)
    for k in range(1, 20):
        term = abs(b[2 * k]) * theta ** (2 * k + 1) / (2 * k * (2 * k + 1) * math.factorial(2 * k))
        out += term
        if abs(term) < tol * 1e-3:
            break
    return out


@lru_cache(maxsize=None)
def vol_oct() -> float:
    """Volume of the regular ideal octahedron, 8 Lambda(pi/4)."""
    return 8 * lobachevsky(math.pi / 4, 1e-12)


def removable_limit(fn: Callable[[complex], complex], x: complex,
                    radius: float = 0.25, points: int = 32) -> complex:
    """Value at ``x`` of a function that is analytic near ``x`` apart from a
    possible isolated singularity there.

    Averages ``fn`` over a circle of the given radius: for a removable
    singularity this is the limit value, for a pole it is the constant term
    of the Laurent expansion (the symmetric finite part). Sample points
    are rotated by half a step so none lands on the real axis.
    """
    angles = 2 * math.pi * (np.arange(points) + 0.5) / points
    return complex(sum(fn(x + radius * cmath.exp(1j * a)) for a in angles) / points)
