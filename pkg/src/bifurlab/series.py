"""Exact-coefficient polynomial and truncated fractional power-series arithmetic.

This is the algebraic kernel shared by the analytic constructions.  Three
value types live here:

* ``Poly1`` -- univariate polynomial with sparse integer-degree support,
  used for the potential factor ``w(x)`` and for derivatives of the
  normal-form potential gradient ``(x^2 - lam) w(x)``.
* ``Poly2`` -- bivariate polynomial with sparse support, used for the
  perturbation ladder entries ``F_k(x, y)``, ``G_k(x, y)``.
* ``FracSeries`` -- a truncated series ``sum_k c_k t^(-k/base_den)`` on a
  fixed fractional exponent grid.  ``base_den`` is the grid denominator
  (``q`` or ``2q`` in practice), ``k_min``/``k_max`` delimit the stored
  dense coefficient window.

Coefficients are double-precision floats.  Truncation is pessimistic: a
binary operation keeps only the order both operands can vouch for, and the
result records that order in ``k_max`` -- a coefficient outside the window
is *unknown*, not zero.  All values are immutable; every operation is a
pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping


class GridMismatchError(ValueError):
    """Two series on different exponent grids were combined."""


class TruncationError(ValueError):
    """An operation would truncate a series below its own leading order."""


# ---------------------------------------------------------------------------
# polynomials


def _clean(items: Iterable[tuple]) -> dict:
    return {k: float(v) for k, v in items if v != 0.0}


@dataclass(frozen=True)
class Poly1:
    """Sparse univariate polynomial; canonical form stores no zero terms."""

    coeffs: Mapping[int, float]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(dict(self.coeffs).items()))
        for d in self.coeffs:
            if not isinstance(d, int) or d < 0:
                raise ValueError(f"bad degree {d!r}")

    @staticmethod
    def from_coeffs(seq) -> "Poly1":
        """Build from a dense low-to-high coefficient sequence."""
        return Poly1({d: c for d, c in enumerate(seq)})

    @staticmethod
    def zero() -> "Poly1":
        return Poly1({})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int | None:
        """Max stored degree, or None for the zero polynomial."""
        return max(self.coeffs) if self.coeffs else None

    def __call__(self, x: float) -> float:
        if not self.coeffs:
            return 0.0
        n = max(self.coeffs)
        acc = 0.0
        for d in range(n, -1, -1):
            acc = acc * x + self.coeffs.get(d, 0.0)
        return acc

    def derivative(self, order: int = 1) -> "Poly1":
        p = dict(self.coeffs)
        for _ in range(order):
            p = {d - 1: d * c for d, c in p.items() if d >= 1}
        return Poly1(p)

    def antiderivative(self) -> "Poly1":
        """Antiderivative with zero constant term."""
        return Poly1({d + 1: c / (d + 1) for d, c in self.coeffs.items()})

    def __add__(self, other: "Poly1") -> "Poly1":
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, 0.0) + c
        return Poly1(out)

    def __sub__(self, other: "Poly1") -> "Poly1":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Poly1({d: c * other for d, c in self.coeffs.items()})
        out: dict[int, float] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                out[d1 + d2] = out.get(d1 + d2, 0.0) + c1 * c2
        return Poly1(out)

    __rmul__ = __mul__

    def dense(self) -> list[float]:
        n = self.degree()
        if n is None:
            return [0.0]
        return [self.coeffs.get(d, 0.0) for d in range(n + 1)]


@dataclass(frozen=True)
class Poly2:
    """Sparse bivariate polynomial over keys ``(degree_x, degree_y)``."""

    coeffs: Mapping[tuple[int, int], float]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(dict(self.coeffs).items()))
        for (i, j) in self.coeffs:
            if i < 0 or j < 0:
                raise ValueError(f"bad exponent pair ({i}, {j})")

    @staticmethod
    def zero() -> "Poly2":
        return Poly2({})

    @staticmethod
    def constant(c: float) -> "Poly2":
        return Poly2({(0, 0): c})

    @staticmethod
    def from_poly1_x(p: Poly1) -> "Poly2":
        """Embed a polynomial in x as a bivariate polynomial."""
        return Poly2({(d, 0): c for d, c in p.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: float, y: float) -> float:
        return sum(c * x**i * y**j for (i, j), c in self.coeffs.items())

    def partial(self, ax: int, ay: int) -> "Poly2":
        """Raw mixed partial d^ax/dx^ax d^ay/dy^ay (no factorial scaling)."""
        out: dict[tuple[int, int], float] = {}
        for (i, j), c in self.coeffs.items():
            if i < ax or j < ay:
                continue
            f = c
            for r in range(ax):
                f *= i - r
            for r in range(ay):
                f *= j - r
            out[(i - ax, j - ay)] = f
        return Poly2(out)

    def antiderivative_x(self) -> "Poly2":
        return Poly2({(i + 1, j): c / (i + 1) for (i, j), c in self.coeffs.items()})

    def antiderivative_y(self) -> "Poly2":
        return Poly2({(i, j + 1): c / (j + 1) for (i, j), c in self.coeffs.items()})

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0.0) + c
        return Poly2(out)

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + other.scale(-1.0)

    def scale(self, s: float) -> "Poly2":
        return Poly2({k: c * s for k, c in self.coeffs.items()})

    def shifted(self, x0: float, y0: float) -> "Poly2":
        """Recentre: return q(u, v) = p(x0 + u, y0 + v), exactly."""
        out: dict[tuple[int, int], float] = {}
        for (a, b), c in self.coeffs.items():
            for i in range(a + 1):
                cx = c * math.comb(a, i) * x0 ** (a - i)
                for j in range(b + 1):
                    k = (i, j)
                    out[k] = out.get(k, 0.0) + cx * math.comb(b, j) * y0 ** (b - j)
        return Poly2(out)

    def max_deg_x(self) -> int:
        return max((i for i, _ in self.coeffs), default=0)

    def max_deg_y(self) -> int:
        return max((j for _, j in self.coeffs), default=0)


def poly2_partial(p: Poly2, ax: int, ay: int) -> Poly2:
    """Exact raw mixed partial derivative of a bivariate polynomial."""
    return p.partial(ax, ay)


# ---------------------------------------------------------------------------
# truncated fractional power series


@dataclass(frozen=True)
class FracSeries:
    """Truncated series ``sum_{k=k_min}^{k_max} coeffs[k-k_min] t^(-k/base_den)``.

    ``k_max = k_min + len(coeffs) - 1`` is the highest trustworthy grid
    index; the tail beyond it is unknown.
    """

    base_den: int
    k_min: int
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if self.base_den < 1:
            raise ValueError("base_den must be >= 1")
        if self.k_min < 0:
            raise ValueError("k_min must be >= 0")
        if not self.coeffs:
            raise ValueError("empty coefficient window")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.coeffs) - 1

    @staticmethod
    def constant(value: float, base_den: int, k_max: int) -> "FracSeries":
        """Constant series with the window [0, k_max] certified."""
        return FracSeries(base_den, 0, (float(value),) + (0.0,) * k_max)

    @staticmethod
    def zero(base_den: int, k_max: int) -> "FracSeries":
        return FracSeries.constant(0.0, base_den, k_max)

    def coeff(self, k: int) -> float:
        """Coefficient at grid index k (0.0 below the window, error above)."""
        if k > self.k_max:
            raise TruncationError(f"index {k} beyond certified order {self.k_max}")
        if k < self.k_min:
            return 0.0
        return self.coeffs[k - self.k_min]

    def padded_to(self, k_max: int) -> "FracSeries":
        """Extend the certified window with explicit zeros (caller asserts
        the true coefficients there are zero)."""
        if k_max <= self.k_max:
            return self
        return FracSeries(self.base_den, self.k_min,
                          self.coeffs + (0.0,) * (k_max - self.k_max))

    def with_coeff(self, k: int, value: float) -> "FracSeries":
        s = self.padded_to(k)
        lo = min(self.k_min, k)
        n = s.k_max - lo + 1
        buf = [0.0] * n
        for i, c in enumerate(s.coeffs):
            buf[s.k_min - lo + i] = c
        buf[k - lo] = float(value)
        return FracSeries(self.base_den, lo, tuple(buf))

    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.coeffs)

    def eval(self, t: float) -> float:
        """Numeric value of the stored finite sum at time t > 0."""
        if t <= 0.0:
            raise ValueError("series grid requires t > 0")
        s = t ** (-1.0 / self.base_den)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc * s**self.k_min


def _require_same_grid(a: FracSeries, b: FracSeries) -> None:
    if a.base_den != b.base_den:
        raise GridMismatchError(
            f"grid denominators differ: {a.base_den} vs {b.base_den}")


def series_add(a: FracSeries, b: FracSeries) -> FracSeries:
    _require_same_grid(a, b)
    k_min = min(a.k_min, b.k_min)
    k_max = min(a.k_max, b.k_max)
    if k_max < k_min:
        raise TruncationError("sum truncates below its leading order")
    out = [0.0] * (k_max - k_min + 1)
    for s in (a, b):
        for i, c in enumerate(s.coeffs):
            k = s.k_min + i
            if k <= k_max:
                out[k - k_min] += c
    return FracSeries(a.base_den, k_min, tuple(out))


def series_sub(a: FracSeries, b: FracSeries) -> FracSeries:
    return series_add(a, series_scale(b, -1.0))


def series_scale(a: FracSeries, s: float) -> FracSeries:
    return FracSeries(a.base_den, a.k_min, tuple(c * s for c in a.coeffs))


def series_shift(a: FracSeries, delta: int) -> FracSeries:
    """Multiply by the exact monomial t^(-delta/base_den)."""
    if a.k_min + delta < 0:
        raise ValueError("shift would create positive powers of t")
    return FracSeries(a.base_den, a.k_min + delta, a.coeffs)


def series_mul(a: FracSeries, b: FracSeries) -> FracSeries:
    """Cauchy product, truncated pessimistically.

    The certified order of the product is
    ``min(a.k_max, b.k_max) + min(a.k_min, b.k_min)``: beyond it some
    convolution terms would need coefficients outside an operand's window.
    """
    _require_same_grid(a, b)
    k_min = a.k_min + b.k_min
    k_max = min(a.k_max, b.k_max) + min(a.k_min, b.k_min)
    if k_max < k_min:
        raise TruncationError("product truncates below its leading order")
    out = [0.0] * (k_max - k_min + 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0.0:
            continue
        ka = a.k_min + i
        if ka + b.k_min > k_max:
            break
        for j, cb in enumerate(b.coeffs):
            k = ka + b.k_min + j
            if k > k_max:
                break
            out[k - k_min] += ca * cb
    return FracSeries(a.base_den, k_min, tuple(out))


def series_ddt(a: FracSeries) -> FracSeries:
    """Exact d/dt: each t^(-k/den) maps to -(k/den) t^(-(k+den)/den)."""
    den = a.base_den
    coeffs = tuple(-(a.k_min + i) / den * c for i, c in enumerate(a.coeffs))
    return FracSeries(den, a.k_min + den, coeffs)


def series_compose_poly2(p: Poly2, xs: FracSeries, ys: FracSeries,
                         around: tuple[float, float] = (0.0, 0.0)) -> FracSeries:
    """Series of ``p(xs(t), ys(t))`` where ``xs = x0 + o(1)``, ``ys = y0 + o(1)``.

    Equivalent to composing the exact Taylor expansion of p about
    ``around`` with the fluctuation series.  The fluctuations must carry no
    constant term: composing a polynomial with an O(1) series has no
    finite-order truncation.
    """
    _require_same_grid(xs, ys)
    x0, y0 = around
    work = min(xs.k_max, ys.k_max)
    xi = _fluctuation(xs, x0)
    eta = _fluctuation(ys, y0)
    q = p.shifted(x0, y0)
    if q.is_zero():
        return FracSeries.zero(xs.base_den, work)

    xpow = _powers(xi, q.max_deg_x())
    ypow = _powers(eta, q.max_deg_y())
    acc = FracSeries.zero(xs.base_den, work)
    for (i, j), c in sorted(q.coeffs.items()):
        term = xpow[i] if i else None
        if j:
            term = ypow[j] if term is None else series_mul(term, ypow[j])
        if term is None:
            term = FracSeries.constant(c, xs.base_den, work)
        else:
            term = series_scale(term, c)
        acc = series_add(acc, term)
    return acc


def _fluctuation(s: FracSeries, c0: float) -> FracSeries:
    """Subtract the constant c0 and check no constant term survives."""
    if s.k_min > 0:
        if c0 != 0.0:
            raise ValueError("series lacks the required constant term")
        return s
    head = s.coeffs[0] - c0
    if head != 0.0:
        raise ValueError(
            f"series constant term {s.coeffs[0]!r} does not match the "
            f"expansion point {c0!r}")
    return FracSeries(s.base_den, 0, (0.0,) + s.coeffs[1:])


def _powers(s: FracSeries, max_pow: int) -> list[FracSeries | None]:
    out: list[FracSeries | None] = [None] * (max_pow + 1)
    if max_pow >= 1:
        out[1] = s
        for i in range(2, max_pow + 1):
            out[i] = series_mul(out[i - 1], s)
    return out
