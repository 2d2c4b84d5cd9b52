"""Truncated particular solutions tending to the limiting fixed points.

Three branch families are constructed, each as a pair of truncated series
on a fractional grid in t:

* sigma branches (lam > 0): x = sigma + sum_{k>=1} x_k t^(-k/q),
  y = sum_{k>=1} y_k t^(-k/q), with sigma = +/- sqrt(lam).
* mu branches (lam = 0, offset assumption): grid t^(-k/2q); x starts at
  index n+m with coefficient +/- mu, y at index 2n with -F_n(0,0).
* nu branches (lam = 0, degenerate-offset assumption): grid t^(-k/q);
  x and y both start at index n, with x_n one of the two quadratic roots
  nu_+/- and y_n = -F_n(0,0).

Coefficients are found by machine recursion: substitute the
partially-known series into the system, extract the lowest unresolved
grid order of the defect, and solve the (at most 2x2) linear system the
new coefficient pair satisfies.  The linear map is recovered by probing
the defect with unit trial coefficients, so no closed-form recursion
formula is ever transcribed.

Where a branch family does not exist (negative forcing offset or negative
discriminant) the constructors return an :class:`EscapeReport` carrying
the rescaling constants under which the dynamics reduce to the limiting
system da/dtau = b, db/dtau = -(a^2 + 1), whose every trajectory leaves
the origin's neighbourhood.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import AssumptionProfile, DomainError, PerturbedSystem, detect_profile, rhs
from .series import (FracSeries, Poly2, series_add, series_compose_poly2,
                     series_ddt, series_scale, series_shift, series_sub)


class BranchError(ValueError):
    """Branch construction requested outside its hypotheses."""


class AssumptionError(BranchError):
    """A structural assumption needed by the construction fails."""


class DegenerateCoefficientError(BranchError):
    """A leading coefficient sits exactly on a degenerate threshold."""


class ConditioningError(RuntimeError):
    """A recursion step produced a numerically singular linear system."""


class Branch(enum.Enum):
    SIGMA_PLUS = "SigmaPlus"
    SIGMA_MINUS = "SigmaMinus"
    MU_PLUS = "MuPlus"
    MU_MINUS = "MuMinus"
    NU_PLUS = "NuPlus"
    NU_MINUS = "NuMinus"

    @property
    def sign(self) -> int:
        return 1 if self.value.endswith("Plus") else -1

    @property
    def family(self) -> str:
        return self.value[:-4] if self.value.endswith("Plus") else self.value[:-5]


@dataclass(frozen=True)
class LeadingData:
    """Leading coefficients of a branch: the symbol value and y-level."""

    symbol: str          # 'sigma' | 'mu' | 'nu'
    sign: int
    x_value: float
    y_value: float
    x_index: int         # grid index of the leading x coefficient
    y_index: int


@dataclass(frozen=True)
class AsymptoticSolution:
    branch: Branch
    grid_den: int
    x: FracSeries
    y: FracSeries
    order: int           # highest grid index whose defining equations are solved
    leading: LeadingData

    @property
    def x_coeffs(self) -> list[float]:
        return list(self.x.coeffs)

    @property
    def y_coeffs(self) -> list[float]:
        return list(self.y.coeffs)

    def same_coefficients(self, other: "AsymptoticSolution") -> bool:
        """True when the stored truncations describe the same finite sum."""
        n = min(self.x.k_max, other.x.k_max)
        m = min(self.y.k_max, other.y.k_max)
        return (self.grid_den == other.grid_den
                and all(self.x.coeff(k) == other.x.coeff(k) for k in range(n + 1))
                and all(self.y.coeff(k) == other.y.coeff(k) for k in range(m + 1)))


@dataclass(frozen=True)
class EscapeReport:
    """No branch exists; after the displayed rescaling the dynamics follow
    the limiting system da/dtau = b, db/dtau = -(a^2 + 1)."""

    regime: str          # 'MuMissing' | 'NuMissing'
    theta1: float
    theta2: float
    rescaled_limit: str = "da/dtau = b, db/dtau = -(a^2 + 1)"


def default_order(sys: PerturbedSystem, n: int) -> int:
    """Grid steps beyond leading kept by default: 2q + n."""
    return 2 * sys.q + n


# ---------------------------------------------------------------------------
# defect machinery


def _defect_series(sys: PerturbedSystem, xs: FracSeries, ys: FracSeries,
                   x0: float) -> tuple[FracSeries, FracSeries]:
    """Series defect (d/dt x - y - F, d/dt y + V' - G) of a trial pair.

    Exact on every grid index both inputs certify; the ladder entry
    t^(-k/q) enters at stride d = grid_den/q on the common grid.
    """
    den = xs.base_den
    stride = den // sys.q
    around = (x0, 0.0)
    rx = series_sub(series_ddt(xs), ys)
    vp = Poly2.from_poly1_x(sys.vprime())
    ry = series_add(series_ddt(ys), series_compose_poly2(vp, xs, ys, around))
    for k in range(1, sys.k_pert + 1):
        fk = sys.f_entry(k)
        gk = sys.g_entry(k)
        if not fk.is_zero():
            term = series_compose_poly2(fk, xs, ys, around)
            rx = series_sub(rx, series_shift(term, stride * k))
        if not gk.is_zero():
            term = series_compose_poly2(gk, xs, ys, around)
            ry = series_sub(ry, series_shift(term, stride * k))
    return rx, ry


def _solve2(m: list[list[float]], b: list[float]) -> tuple[float, float]:
    """2x2 elimination with partial pivoting and a conditioning guard."""
    r0 = abs(m[0][0]) + abs(m[0][1])
    r1 = abs(m[1][0]) + abs(m[1][1])
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if abs(det) < 1e-12 * max(r0 * r1, 1e-300):
        raise ConditioningError(
            f"recursion step is near-singular (det={det:.3e}, rows {r0:.3e}, {r1:.3e})")
    if abs(m[1][0]) > abs(m[0][0]):
        m = [m[1], m[0]]
        b = [b[1], b[0]]
    f = m[1][0] / m[0][0]
    a22 = m[1][1] - f * m[0][1]
    b2 = b[1] - f * b[0]
    u2 = b2 / a22
    u1 = (b[0] - m[0][1] * u2) / m[0][0]
    return u1, u2


def _recurse(sys: PerturbedSystem, xs: FracSeries, ys: FracSeries, x0: float,
             steps: int, idx_x, idx_y, eq_x, eq_y) -> tuple[FracSeries, FracSeries]:
    """Solve the coefficient chain stage by stage.

    At stage k the unknowns are the x coefficient at grid index idx_x(k)
    and the y coefficient at idx_y(k); they are pinned by the defect
    coefficients at eq_y(k) (second equation) and eq_x(k) (first).  The
    defect is linear in the pair, so three probes recover the system.
    """
    for k in range(1, steps + 1):
        ix, iy = idx_x(k), idx_y(k)
        ex, ey = eq_x(k), eq_y(k)
        work = max(ex, ey)
        base_x = xs.padded_to(work)
        base_y = ys.padded_to(work)

        def defect_at(cx: float, cy: float) -> tuple[float, float]:
            rx, ry = _defect_series(sys, base_x.with_coeff(ix, cx),
                                    base_y.with_coeff(iy, cy), x0)
            return ry.coeff(ey), rx.coeff(ex)

        b1, b2 = defect_at(0.0, 0.0)
        p1, p2 = defect_at(1.0, 0.0)
        q1, q2 = defect_at(0.0, 1.0)
        m = [[p1 - b1, q1 - b1], [p2 - b2, q2 - b2]]
        cx, cy = _solve2(m, [-b1, -b2])
        xs = base_x.with_coeff(ix, cx)
        ys = base_y.with_coeff(iy, cy)
    return xs, ys


def _profile_for(sys: PerturbedSystem, profile: AssumptionProfile | None) -> AssumptionProfile:
    return profile if profile is not None else detect_profile(sys)


# ---------------------------------------------------------------------------
# branch constructors


def build_sigma(sys: PerturbedSystem, sign: int, order: int | None = None,
                profile: AssumptionProfile | None = None) -> AsymptoticSolution:
    """Branch tending to the fixed point (sign*sqrt(lam), 0), lam > 0."""
    if sys.lam <= 0.0:
        raise BranchError("sigma branches require lam > 0")
    profile = _profile_for(sys, profile)
    if not profile.as0_holds:
        raise AssumptionError(
            f"ladder starts at n={profile.n} > q={sys.q}; construction not covered")
    sigma = sign * math.sqrt(sys.lam)
    if sys.w(sigma) <= 0.0:
        raise DomainError(f"w({sigma}) must be positive")
    steps = default_order(sys, profile.n) if order is None else int(order)
    den = sys.q

    xs = FracSeries.constant(sigma, den, steps)
    ys = FracSeries.zero(den, steps)
    xs, ys = _recurse(sys, xs, ys, sigma, steps,
                      idx_x=lambda k: k, idx_y=lambda k: k,
                      eq_x=lambda k: k, eq_y=lambda k: k)
    branch = Branch.SIGMA_PLUS if sign > 0 else Branch.SIGMA_MINUS
    lead = LeadingData("sigma", sign, sigma, 0.0, 0, 0)
    return AsymptoticSolution(branch, den, xs, ys, steps, lead)


def build_mu(sys: PerturbedSystem, sign: int, order: int | None = None,
             profile: AssumptionProfile | None = None):
    """Branch with x ~ +/- mu t^(-(n+m)/2q) at lam = 0, or its escape report."""
    if sys.lam != 0.0:
        raise BranchError("mu branches require lam = 0")
    profile = _profile_for(sys, profile)
    if not profile.as0_holds:
        raise AssumptionError(f"ladder starts at n={profile.n} > q={sys.q}")
    if not profile.as1_holds:
        raise AssumptionError(
            "offset assumption fails: no l < n with G_{n+l}(0,0) != 0")
    n, m, q = profile.n, profile.m, sys.q
    g_lead = sys.g_entry(n + m)(0.0, 0.0)
    w0 = sys.w(0.0)
    if g_lead == 0.0:
        raise DegenerateCoefficientError("G_{n+m}(0,0) = 0 is outside the hypotheses")
    if g_lead < 0.0:
        theta1 = math.sqrt(abs(g_lead) / w0)
        theta2 = 4.0 * q / (4.0 * q - n - m)
        return EscapeReport("MuMissing", theta1, theta2)

    mu = math.sqrt(g_lead / w0)
    y_lead = -sys.f_entry(n)(0.0, 0.0)
    steps = default_order(sys, n) if order is None else int(order)
    den = 2 * sys.q

    xs = FracSeries.zero(den, n + m + steps).with_coeff(n + m, sign * mu)
    ys = FracSeries.zero(den, 2 * n + steps).with_coeff(2 * n, y_lead)
    xs, ys = _recurse(sys, xs, ys, 0.0, steps,
                      idx_x=lambda k: n + m + k, idx_y=lambda k: 2 * n + k,
                      eq_x=lambda k: 2 * n + k, eq_y=lambda k: 2 * (n + m) + k)
    branch = Branch.MU_PLUS if sign > 0 else Branch.MU_MINUS
    lead = LeadingData("mu", sign, sign * mu, y_lead, n + m, 2 * n)
    return AsymptoticSolution(branch, den, xs, ys, 2 * n + steps, lead)


def delta_discriminant(sys: PerturbedSystem, profile: AssumptionProfile | None = None) -> float:
    """The quadratic discriminant controlling the nu branches at lam = 0."""
    profile = _profile_for(sys, profile)
    n = profile.n
    w0 = sys.w(0.0)
    g_n = sys.g_entry(n)
    dx_g = g_n.partial(1, 0)(0.0, 0.0)
    dy_g = g_n.partial(0, 1)(0.0, 0.0)
    delta_nq = 1.0 if n == sys.q else 0.0
    f_lead = sys.f_entry(n)(0.0, 0.0)
    g2n = sys.g_entry(2 * n)(0.0, 0.0)
    return dx_g * dx_g - 4.0 * w0 * ((dy_g + delta_nq) * f_lead - g2n)


def build_nu(sys: PerturbedSystem, sign: int, order: int | None = None,
             profile: AssumptionProfile | None = None):
    """Branch with x ~ nu_± t^(-n/q) at lam = 0, or its escape report."""
    if sys.lam != 0.0:
        raise BranchError("nu branches require lam = 0")
    profile = _profile_for(sys, profile)
    if not profile.as0_holds:
        raise AssumptionError(f"ladder starts at n={profile.n} > q={sys.q}")
    if not profile.as2_holds:
        raise AssumptionError("degenerate-offset assumption fails")
    n, q = profile.n, sys.q
    w0 = sys.w(0.0)
    delta = delta_discriminant(sys, profile)
    if delta == 0.0:
        raise DegenerateCoefficientError("discriminant vanishes exactly")
    if delta < 0.0:
        theta1 = math.sqrt(abs(delta)) / (2.0 * w0)
        theta2 = 2.0 * q / (2.0 * q - n)
        return EscapeReport("NuMissing", theta1, theta2)

    dx_g = sys.g_entry(n).partial(1, 0)(0.0, 0.0)
    nu = (dx_g + sign * math.sqrt(delta)) / (2.0 * w0)
    y_lead = -sys.f_entry(n)(0.0, 0.0)
    steps = default_order(sys, n) if order is None else int(order)
    den = sys.q

    xs = FracSeries.zero(den, n + steps).with_coeff(n, nu)
    ys = FracSeries.zero(den, n + steps).with_coeff(n, y_lead)
    xs, ys = _recurse(sys, xs, ys, 0.0, steps,
                      idx_x=lambda k: n + k, idx_y=lambda k: n + k,
                      eq_x=lambda k: n + k, eq_y=lambda k: 2 * n + k)
    branch = Branch.NU_PLUS if sign > 0 else Branch.NU_MINUS
    lead = LeadingData("nu", sign, nu, y_lead, n, n)
    return AsymptoticSolution(branch, den, xs, ys, n + steps, lead)


def build_branch(sys: PerturbedSystem, branch: Branch, order: int | None = None,
                 profile: AssumptionProfile | None = None):
    """Dispatch on the branch tag."""
    fam = branch.family
    if fam == "Sigma":
        return build_sigma(sys, branch.sign, order, profile)
    if fam == "Mu":
        return build_mu(sys, branch.sign, order, profile)
    return build_nu(sys, branch.sign, order, profile)


# ---------------------------------------------------------------------------
# evaluation and defect diagnostics


def eval_asym(sol: AsymptoticSolution, t: float) -> tuple[float, float]:
    """Numeric value of the truncated branch at time t > 0."""
    if t <= 0.0:
        raise DomainError("asymptotic branches are defined for t > 0")
    return sol.x.eval(t), sol.y.eval(t)


def eval_asym_ddt(sol: AsymptoticSolution, t: float) -> tuple[float, float]:
    """Exact time derivative of the stored finite sums at t."""
    return series_ddt(sol.x).eval(t), series_ddt(sol.y).eval(t)


def residual(sol: AsymptoticSolution, sys: PerturbedSystem, t: float) -> tuple[float, float]:
    """Componentwise defect d/dt(series) - rhs at time t."""
    state = eval_asym(sol, t)
    dx, dy = eval_asym_ddt(sol, t)
    fx, fy = rhs(sys, state, t)
    return dx - fx, dy - fy
