"""Normal-form model of the damped-perturbation system.

The system under study is

    dx/dt = y + F(x, y, t)
    dy/dt = -(x^2 - lam) w(x) + G(x, y, t)

with perturbations carried by finite power-law ladders

    F(x, y, t) = sum_{k=1}^{K} t^(-k/q) F_k(x, y),   likewise G.

The ladders are finite and polynomial by construction, and the supplied
finite sum is treated as the *exact* right-hand side: that makes the
numerical system well defined and the series constructions checkable
against it.  This module owns the system value type, the structural-index
detection (n, m, h and the assumption flags) that decides which branch
constructions and stability criteria apply, and exact derivative data of
the potential gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .series import Poly1, Poly2


class UnperturbedSystemError(ValueError):
    """Every ladder entry is identically zero."""


class DomainError(ValueError):
    """Evaluation outside the model's domain (t <= 0, w <= 0, ...)."""


@dataclass(frozen=True)
class PerturbedSystem:
    """Immutable description of the perturbed normal-form system.

    lam       bifurcation parameter
    q         exponent denominator of the ladder grid t^(-k/q)
    w         potential factor in d/dx V = (x^2 - lam) w(x)
    f_ladder  F_k for k = 1..K_pert (index k-1)
    g_ladder  G_k, same shape
    """

    lam: float
    q: int
    w: Poly1
    f_ladder: tuple[Poly2, ...]
    g_ladder: tuple[Poly2, ...]

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 1:
            raise ValueError("q must be a positive integer")
        object.__setattr__(self, "f_ladder", tuple(self.f_ladder))
        object.__setattr__(self, "g_ladder", tuple(self.g_ladder))
        if len(self.f_ladder) != len(self.g_ladder):
            raise ValueError("F and G ladders must have equal length")
        if not self.f_ladder:
            raise ValueError("ladders must carry at least one entry (K_pert >= 1)")
        # w must be positive at the fixed points the theory attaches to.
        if self.lam > 0.0:
            s = math.sqrt(self.lam)
            for x0 in (s, -s):
                if self.w(x0) <= 0.0:
                    raise DomainError(f"w({x0}) = {self.w(x0)} is not positive")
        elif self.lam == 0.0:
            if self.w(0.0) <= 0.0:
                raise DomainError(f"w(0) = {self.w(0.0)} is not positive")

    @property
    def k_pert(self) -> int:
        return len(self.f_ladder)

    def f_entry(self, k: int) -> Poly2:
        """F_k, with entries beyond the supplied ladder identically zero."""
        return self.f_ladder[k - 1] if 1 <= k <= self.k_pert else Poly2.zero()

    def g_entry(self, k: int) -> Poly2:
        return self.g_ladder[k - 1] if 1 <= k <= self.k_pert else Poly2.zero()

    def vprime(self) -> Poly1:
        """The potential gradient (x^2 - lam) w(x) as an exact polynomial."""
        return Poly1({0: -self.lam, 2: 1.0}) * self.w

    def potential(self) -> Poly1:
        """V(x; lam) with V(0) = 0."""
        return self.vprime().antiderivative()

    def hamiltonian(self, x: float, y: float) -> float:
        """Limiting-system energy H(x, y; lam) = y^2/2 + V(x; lam)."""
        return 0.5 * y * y + self.potential()(x)

    def perturbation(self, x: float, y: float, t: float) -> tuple[float, float]:
        """(F, G) at (x, y, t), the finite ladder sum evaluated exactly."""
        if t <= 0.0:
            raise DomainError("perturbation ladder requires t > 0")
        tq = t ** (-1.0 / self.q)
        fval = 0.0
        gval = 0.0
        tpow = 1.0
        for k in range(1, self.k_pert + 1):
            tpow *= tq
            fk = self.f_ladder[k - 1]
            gk = self.g_ladder[k - 1]
            if fk.coeffs:
                fval += tpow * fk(x, y)
            if gk.coeffs:
                gval += tpow * gk(x, y)
        return fval, gval


@dataclass(frozen=True)
class AssumptionProfile:
    """Structural indices of the ladder and which assumptions they satisfy.

    n     first ladder index with F_n or G_n not identically zero
    m     first l with G_{n+l}(0,0) != 0, when that happens below n
    h     first offset k-n >= 0 at which d/dx F_k + d/dy G_k is not
          identically zero; None when the identity holds through the ladder
    """

    n: int
    as0_holds: bool
    m: int | None
    as1_holds: bool
    as2_holds: bool
    h: int | None
    hamiltonian_pert: bool


def detect_profile(sys: PerturbedSystem) -> AssumptionProfile:
    """Scan the ladders once and classify which assumptions hold."""
    n = None
    for k in range(1, sys.k_pert + 1):
        if not (sys.f_entry(k).is_zero() and sys.g_entry(k).is_zero()):
            n = k
            break
    if n is None:
        raise UnperturbedSystemError("all perturbation ladder entries vanish")

    as0 = n <= sys.q

    # first l >= 0 with G_{n+l}(0, 0) != 0
    m_candidate = None
    for l in range(0, sys.k_pert - n + 1):
        if sys.g_entry(n + l)(0.0, 0.0) != 0.0:
            m_candidate = l
            break
    as1 = m_candidate is not None and m_candidate < n
    m = m_candidate if as1 else None

    # degenerate-offset alternative: G_{n+l}(0,0) = 0 below n and the
    # discriminant combination does not vanish
    zero_below_n = m_candidate is None or m_candidate >= n
    delta_nq = 1.0 if n == sys.q else 0.0
    g_n = sys.g_entry(n)
    combo = (sys.g_entry(2 * n)(0.0, 0.0)
             - sys.f_entry(n)(0.0, 0.0)
             * (g_n.partial(0, 1)(0.0, 0.0) + delta_nq))
    as2 = zero_below_n and combo != 0.0

    h = None
    for k in range(n, sys.k_pert + 1):
        if not (sys.f_entry(k).partial(1, 0) + sys.g_entry(k).partial(0, 1)).is_zero():
            h = k - n
            break

    return AssumptionProfile(
        n=n, as0_holds=as0, m=m, as1_holds=as1, as2_holds=as2,
        h=h, hamiltonian_pert=h is None)


def rhs(sys: PerturbedSystem, state: tuple[float, float], t: float) -> tuple[float, float]:
    """Right-hand side of the full system at (state, t), t > 0."""
    if t <= 0.0:
        raise DomainError("the system is defined for t > 0")
    x, y = state
    fval, gval = sys.perturbation(x, y, t)
    return (y + fval, -sys.vprime()(x) + gval)


def v_derivatives(sys: PerturbedSystem, x0: float, up_to: int) -> list[float]:
    """[d^j/dx^j of (x^2-lam)w(x) at x0 for j = 0..up_to-1], exactly."""
    if up_to < 1:
        raise ValueError("up_to must be >= 1")
    p = sys.vprime()
    out = []
    for _ in range(up_to):
        out.append(p(x0))
        p = p.derivative()
    return out
