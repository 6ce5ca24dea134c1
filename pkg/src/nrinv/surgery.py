"""3-manifold invariants from surgery presentations.

Integer linear algebra for the linking matrix (exact signature, Smith
normal form, the finite group of C/2Z-valued classes), Kirby-color
expansion, and the normalized sums for N_r and N_r^0.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (AsymmetricKnot, DegenerateFraming, EvenLevel, EvenLevelMod4,
                     InfiniteFamily, IntegralDegree, InvalidClass, NotComputable,
                     ZeroFraming)
from .families import (ChainSpec, KnotEvaluator, TorusKnot, chain_eval,
                       chain_linking_matrix, knot_P, ktilde_at)
from .qarith import QParams

THREADS_ENV = "NRINV_THREADS"


# ---------------------------------------------------------------------------
# linking matrices

@dataclass(frozen=True)
class LinkingMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("linking matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"linking matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def det(self) -> int:
        if self.n == 0:
            return 1
        return int(_fraction_det([[Fraction(x) for x in row] for row in self.entries]))

    def negated(self) -> "LinkingMatrix":
        return LinkingMatrix([[-x for x in row] for row in self.entries])

    @classmethod
    def chain(cls, framings: Sequence[int], clasps: Sequence[int] | None = None) -> "LinkingMatrix":
        return cls(chain_linking_matrix(framings, clasps))


def _as_lk(lk) -> LinkingMatrix:
    return lk if isinstance(lk, LinkingMatrix) else LinkingMatrix(lk)


def _fraction_det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return det


def signature(lk) -> tuple[int, int]:
    """(positive, negative) inertia indices, by exact congruence diagonalization."""
    lk = _as_lk(lk)
    a = [[Fraction(x) for x in row] for row in lk.entries]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row_i += row_j (and column) makes the diagonal 2 a_ij != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / d
            if f:
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
                for k in range(n):
                    a[k][i] -= f * a[k][piv]
    return pos, neg


def smith_normal_form(lk) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Return (d, P, Q) with P * A * Q = diag(d), P and Q unimodular.

    The invariant factors satisfy d_1 | d_2 | ... and are nonnegative.
    """
    A = [list(row) for row in (lk.entries if isinstance(lk, LinkingMatrix) else lk)]
    n = len(A)
    m = len(A[0]) if n else 0
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Q = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for M in (A, Q):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):   # row_dst += f * row_src
        for M in (A, P):
            M[dst] = [x + f * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, f):
        for M in (A, Q):
            for row in M:
                row[dst] += f * row[src]

    for t in range(min(n, m)):
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, m) if A[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, n):
                f = A[i][t] // A[t][t]
                if f:
                    add_row(i, t, -f)
                if A[i][t]:
                    done = False
            for j in range(t + 1, m):
                f = A[t][j] // A[t][t]
                if f:
                    add_col(j, t, -f)
                if A[t][j]:
                    done = False
            if not done:
                continue
            # divisibility: fold in any entry the pivot does not divide
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            for M in (A, P):
                M[t] = [-x for x in M[t]]
    d = [A[i][i] for i in range(min(n, m))]
    return d, P, Q


# ---------------------------------------------------------------------------
# classes

@dataclass(frozen=True)
class ColorClass:
    """A point of C/2Z, stored with real part in [0, 2)."""

    value: complex
    tol: float = 1e-9

    def __post_init__(self):
        v = complex(self.value)
        re = math.fmod(v.real, 2.0)
        if re < 0:
            re += 2.0
        if re > 2.0 - self.tol:
            re = 0.0
        object.__setattr__(self, "value", complex(re, v.imag))

    @property
    def integral(self) -> bool:
        v = self.value
        return abs(v.imag) < self.tol and min(abs(v.real), abs(v.real - 1)) < self.tol

    def close(self, other: "ColorClass | complex", tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        o = other.value if isinstance(other, ColorClass) else ColorClass(other).value
        dre = abs(self.value.real - o.real)
        return min(dre, 2 - dre) < tol and abs(self.value.imag - o.imag) < tol

    def conjugate(self) -> "ColorClass":
        return ColorClass(self.value.conjugate(), self.tol)

    def __neg__(self) -> "ColorClass":
        return ColorClass(-self.value, self.tol)

    def key(self, digits: int = 7) -> tuple[float, float]:
        return (round(self.value.real, digits), round(self.value.imag, digits))


@dataclass(frozen=True)
class CohomologyClass:
    """Meridian values of a class, one per surgery component.

    ``exact`` keeps the rational representatives when the class came from
    the integer enumeration.
    """

    meridian_values: tuple[ColorClass, ...]
    exact: tuple[Fraction, ...] | None = field(default=None, compare=False)

    @classmethod
    def of(cls, values: Sequence[complex | Fraction], tol: float = 1e-9) -> "CohomologyClass":
        exact = None
        if all(isinstance(v, (Fraction, int)) for v in values):
            exact = tuple(Fraction(v) % 2 for v in values)
        return cls(tuple(ColorClass(complex(v), tol) for v in values), exact)

    @property
    def values(self) -> tuple[complex, ...]:
        return tuple(c.value for c in self.meridian_values)

    def is_zero(self) -> bool:
        return all(c.close(0) for c in self.meridian_values)

    def mirror(self) -> "CohomologyClass":
        """The class -conj(omega) used on the mirror manifold."""
        ex = None if self.exact is None else tuple((-x) % 2 for x in self.exact)
        return CohomologyClass(tuple(-c.conjugate() for c in self.meridian_values), ex)


def cohomology_classes(lk) -> list[CohomologyClass]:
    """All x in (C/2Z)^n with lk x = 0 mod 2; there are |det lk| of them."""
    lk = _as_lk(lk)
    if lk.n == 0:
        return [CohomologyClass(())]
    if lk.det() == 0:
        raise InfiniteFamily("singular linking matrix: the classes form a continuous family")
    d, _, Q = smith_normal_form(lk)
    out = []
    for ms in itertools.product(*(range(di) for di in d)):
        y = [Fraction(2 * mi, di) for mi, di in zip(ms, d)]
        x = [sum((Q[i][j] * y[j] for j in range(lk.n)), Fraction(0)) % 2 for i in range(lk.n)]
        out.append(CohomologyClass.of(x))
    return out


def classes_by_first_meridian(lk) -> dict[int, CohomologyClass]:
    """Classes keyed by k where the first meridian value is 2k/|det|.

    Only meaningful when the first meridian generates the group; raises
    ValueError otherwise.
    """
    lk = _as_lk(lk)
    det = abs(lk.det())
    out: dict[int, CohomologyClass] = {}
    for c in cohomology_classes(lk):
        x1 = c.exact[0] if c.exact is not None else Fraction(c.values[0].real).limit_denominator(det)
        k = x1 * det / 2
        if k.denominator != 1 or int(k) in out:
            raise ValueError("the first meridian does not generate the class group")
        out[int(k)] = c
    return out


def check_class(lk, omega: CohomologyClass, offsets: Sequence[complex] = (), tol: float = 1e-7) -> None:
    """Raise InvalidClass unless lk x + offsets = 0 in (C/2Z)^n."""
    lk = _as_lk(lk)
    x = omega.values
    if len(x) != lk.n:
        raise InvalidClass(f"class has {len(x)} values for {lk.n} components")
    offsets = list(offsets) or [0] * lk.n
    for i, row in enumerate(lk.entries):
        s = sum(a * xi for a, xi in zip(row, x)) + offsets[i]
        if not ColorClass(s).close(0, tol):
            raise InvalidClass(f"row {i} of lk x evaluates to {s} mod 2")


def is_computable(omega: CohomologyClass, companion: "Companion | None" = None) -> bool:
    if not omega.meridian_values:
        return companion is not None and len(companion.colors) > 0
    return not any(c.integral for c in omega.meridian_values)


# ---------------------------------------------------------------------------
# Kirby colors

@dataclass(frozen=True)
class KirbyColor:
    degree: ColorClass
    lift: complex
    terms: tuple[tuple[complex, complex], ...]


def kirby_expand(p: QParams, degree: ColorClass | complex, lift_offset: int = 0) -> KirbyColor:
    """Terms (alpha + k, d(alpha + k)), k in H_r, for the lift
    alpha = canonical representative + ``lift_offset``."""
    if not isinstance(degree, ColorClass):
        degree = ColorClass(degree, p.tol)
    if int(lift_offset) != lift_offset or lift_offset % 2:
        raise ValueError(f"lift offset must be an even integer, got {lift_offset}")
    if degree.integral:
        raise IntegralDegree(f"Kirby degree {degree.value} is integral")
    alpha = degree.value + lift_offset
    return KirbyColor(degree, alpha, tuple((alpha + k, p.mdim(alpha + k)) for k in p.hr))


# ---------------------------------------------------------------------------
# presentations and N_r

@dataclass(frozen=True)
class Companion:
    """Fixed colors of a companion link T, with its linking numbers against
    the surgery components (one row per surgery component)."""

    colors: tuple[complex, ...]
    linking: tuple[tuple[int, ...], ...] = ()

    def offsets(self, n: int, r: int) -> list[complex]:
        """Row contributions sum_t lk(L_i, T_t) g(T_t); an edge colored c
        has meridian value g = c + r - 1."""
        if not self.linking:
            return [0j] * n
        return [sum(l * (c + r - 1) for l, c in zip(row, self.colors)) for row in self.linking]


@dataclass(frozen=True)
class SurgeryPresentation:
    """Surgery link L (through its linking matrix) plus an evaluator giving
    N_r of L, colored component-wise, together with the companion T."""

    lk: LinkingMatrix
    evaluator: Callable[[tuple[complex, ...]], complex]
    companion: Companion | None = None

    def __post_init__(self):
        object.__setattr__(self, "lk", _as_lk(self.lk))


def chain_presentation(p: QParams, framings: Sequence[int],
                       clasps: Sequence[int] | None = None) -> SurgeryPresentation:
    spec = ChainSpec(tuple(framings), (0.5,) * len(framings), clasps)
    return SurgeryPresentation(LinkingMatrix.chain(framings, spec.clasps),
                               lambda cols: chain_eval(p, spec.with_colors(cols)))


def compatible_classes(p: QParams, pres: SurgeryPresentation) -> list[CohomologyClass]:
    """Classes on L compatible with the companion colors: lk x = -B g mod 2."""
    base = cohomology_classes(pres.lk)
    if pres.companion is None or not pres.companion.linking:
        return base
    n = pres.lk.n
    rhs = [-o for o in pres.companion.offsets(n, p.r)]
    x0 = _solve_complex(pres.lk, rhs)
    return [CohomologyClass.of([x0[i] + c.values[i] for i in range(n)]) for c in base]


def _solve_complex(lk: LinkingMatrix, rhs: list[complex]) -> list[complex]:
    import numpy as np
    a = np.array(lk.entries, dtype=float)
    return list(np.linalg.solve(a, np.array(rhs, dtype=complex)))


def _normalization(p: QParams, lk: LinkingMatrix) -> complex:
    pos, neg = signature(lk)
    return p.delta(1) ** pos * p.delta(-1) ** neg


def _expanded_sum(p: QParams, pres: SurgeryPresentation, omega: CohomologyClass,
                  lifts: Sequence[int] | None) -> complex:
    n = pres.lk.n
    lifts = list(lifts) if lifts is not None else [0] * n
    if len(lifts) != n:
        raise ValueError(f"{len(lifts)} lift offsets for {n} components")
    kirby = [kirby_expand(p, c, off) for c, off in zip(omega.meridian_values, lifts)]
    total = 0j
    for combo in itertools.product(*(kc.terms for kc in kirby)):
        w = 1 + 0j
        for _, d in combo:
            w *= d
        total += w * pres.evaluator(tuple(c for c, _ in combo))
    return total


def _check_nr(p: QParams, pres: SurgeryPresentation, omega: CohomologyClass) -> None:
    if p.r % 4 == 0:
        raise EvenLevelMod4(f"Delta_- vanishes at r = {p.r}")
    offsets = pres.companion.offsets(pres.lk.n, p.r) if pres.companion else ()
    check_class(pres.lk, omega, offsets)
    if not is_computable(omega, pres.companion):
        raise NotComputable(f"class {omega.values} has an integral meridian value")


def nr(p: QParams, pres: SurgeryPresentation, omega: CohomologyClass,
       lifts: Sequence[int] | None = None) -> complex:
    """N_r(M, T, omega): Kirby-colored sum over L divided by Delta_+^p Delta_-^s."""
    _check_nr(p, pres, omega)
    return _expanded_sum(p, pres, omega, lifts) / _normalization(p, pres.lk)


def nr_h_stabilized(p: QParams, pres: SurgeryPresentation, omega: CohomologyClass,
                    alpha: complex, beta: complex, lifts: Sequence[int] | None = None) -> complex:
    """N_r from a presentation whose companion carries an alpha-colored
    meridian around a beta-colored edge; ``pres.evaluator`` includes it."""
    _check_nr(p, pres, omega)
    norm = p.sign * p.r * p.qpow(alpha * beta) * _normalization(p, pres.lk)
    return p.mdim(beta) * _expanded_sum(p, pres, omega, lifts) / norm


# ---------------------------------------------------------------------------
# N_r^0 for surgery on a knot

def nr0_knot_surgery(K: KnotEvaluator, weighting: int = 1) -> complex:
    """N_r^0 of surgery on a framed knot: Delta_sign(f)^-1 sum_k q^(+-k) P(k).

    Valid for odd r only. At even r the reduction of d(h - alpha)/d(alpha)
    to {alpha - h}/{alpha} picks up a sign and the resulting sum vanishes
    identically (already for the +-1-framed unknot, which presents S^3).
    """
    p = K.p
    f = K.framing
    if f == 0:
        raise ZeroFraming("N_r^0 through a knot needs nonzero framing")
    if p.r % 4 == 0:
        raise EvenLevelMod4(f"Delta_- vanishes at r = {p.r}")
    if p.r % 2 == 0:
        raise EvenLevel(f"knot-surgery formula for N_r^0 needs odd r, got {p.r}")
    if weighting not in (1, -1):
        raise ValueError("weighting must be +1 or -1")
    s = 1 if f > 0 else -1
    total = sum(p.qpow(weighting * k) * knot_P(K, k) for k in p.hr)
    return total / p.delta(s)


SYMMETRY_SAMPLES = (0.3141 + 0.0271j, 0.7183 - 0.1j, 1.4142 + 0.05j)


def ktilde_symmetric(K: KnotEvaluator, tol: float = 1e-8) -> bool:
    """Numerical test of K~(X^-1) = K~(X) at a few fixed points."""
    for a in SYMMETRY_SAMPLES:
        u, v = ktilde_at(K, a), ktilde_at(K, -a)
        if abs(u - v) > tol * max(1.0, abs(u)):
            return False
    return True


def nr0_symmetric_knot(K: KnotEvaluator) -> complex:
    """N_r^0 through K~ for knots with K~(X^-1) = K~(X), odd r."""
    p = K.p
    f = K.framing
    if f == 0:
        raise ZeroFraming("N_r^0 through a knot needs nonzero framing")
    if p.r % 2 == 0:
        raise EvenLevel(f"symmetric-knot formula needs odd r, got {p.r}")
    if not ktilde_symmetric(K):
        raise AsymmetricKnot("K~(1/X) differs from K~(X)")
    s = 1 if f > 0 else -1
    theta0 = p.qpow(-((p.r - 1) ** 2) / 2)
    total = 0j
    for n in p.hr:
        w = p.qnum(2 * n)
        if abs(w) < 1e-14:
            continue
        total += p.qpow(2 * f * n * n) * w * w * ktilde_at(K, 2 * n)
    return p.r * f * theta0 ** f / (2 * p.qnum(1) * p.delta(s)) * total


# ---------------------------------------------------------------------------
# lens spaces and torus-knot surgeries

@dataclass
class LensSum:
    framings: tuple[int, ...]
    det: int
    rows: list[tuple[int | None, CohomologyClass, complex]]

    @property
    def total(self) -> complex:
        return sum(v for _, _, v in self.rows)

    def multiset(self, digits: int = 7) -> list[tuple[float, float]]:
        return sorted((round(v.real, digits), round(v.imag, digits)) for _, _, v in self.rows)

    def by_index(self) -> dict[int, complex]:
        return {k: v for k, _, v in self.rows if k is not None}


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def lens_sum(p: QParams, framings: Sequence[int], clasps: Sequence[int] | None = None,
             exclude_zero: bool = True, lifts: Sequence[int] | None = None,
             conjugate_classes: bool = False) -> LensSum:
    """Per-class values of N_r on the chain surgery C(framings) and their sum.

    Classes are indexed by k with x_1 = 2k/|det| when x_1 generates.
    ``conjugate_classes`` evaluates on -conj(omega) instead of omega, which
    pairs the classes of a mirrored chain with those of the original.
    """
    pres = chain_presentation(p, framings, clasps)
    det = abs(pres.lk.det())
    try:
        indexed = sorted(classes_by_first_meridian(pres.lk).items())
        items: list[tuple[int | None, CohomologyClass]] = list(indexed)
    except ValueError:
        items = [(None, c) for c in cohomology_classes(pres.lk)]
    if exclude_zero:
        items = [(k, c) for k, c in items if not c.is_zero()]
    if conjugate_classes:
        items = [(k, c.mirror()) for k, c in items]
    for k, c in items:
        if not is_computable(c):
            raise NotComputable(f"class k={k} with meridian values {c.values} is integral")

    def one(item):
        return nr(p, pres, item[1], lifts)

    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            vals = list(ex.map(one, items))
    else:
        vals = [one(it) for it in items]
    return LensSum(tuple(framings), det, [(k, c, v) for (k, c), v in zip(items, vals)])


def torus_surgery_nr(p: QParams, f: int, n: int, class_index: int,
                     lift_offset: int = 0) -> complex:
    """N_r of surgery on the (f + 2n + 1)-framed twisted torus knot, in the
    class whose meridian value is 2c / (f + 2n + 1)."""
    framing = f + 2 * n + 1
    if framing == 0:
        raise DegenerateFraming("f + 2n + 1 = 0 gives a manifold with infinite H_1")
    K = TorusKnot(p, f, n)
    pres = SurgeryPresentation(LinkingMatrix([[framing]]), lambda cols: K(cols[0]))
    omega = CohomologyClass.of([Fraction(2 * class_index, framing)], p.tol)
    return nr(p, pres, omega, [lift_offset])
