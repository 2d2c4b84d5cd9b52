"""The two built-in benchmark systems.

Both presets are damped perturbations of the cubic normal form and cover,
between them, every branch family and every stability verdict the
classifier can produce:

* ``example1``: second-order oscillator x'' + (x^2 - lam) = t^(-kappa) (B x' + C)
  written in first-order form; w = 1, a single ladder entry G_n = B y + C at
  the grid index n determined by kappa = n/q.
* ``example2``: w(x) = 1 + x with q = 1,
  G_1 = A x + B y + (x^2 + y^2 + x y), G_2 = C.
"""

from __future__ import annotations

from fractions import Fraction

from .model import PerturbedSystem
from .series import Poly1, Poly2

PRESET_NAMES = ("example1", "example2")


def kappa_to_nq(kappa) -> tuple[int, int]:
    """Resolve a decay exponent kappa into an exact ratio n/q.

    Accepts ints, floats with a short exact decimal form, or strings like
    "1/2".  The ladder grid needs kappa = n/q with small integers; inputs
    that do not reduce to denominator <= 1000 are rejected.
    """
    if isinstance(kappa, str):
        frac = Fraction(kappa)
    else:
        frac = Fraction(str(float(kappa)))
    if frac <= 0:
        raise ValueError("kappa must be positive")
    if frac.denominator > 1000:
        raise ValueError(f"kappa={kappa!r} is not a simple rational n/q")
    return frac.numerator, frac.denominator


def example1(B: float, C: float, kappa=0.5, lam: float = 1.0) -> PerturbedSystem:
    """Oscillator with a single damped forcing term t^(-kappa) (B y + C)."""
    n, q = kappa_to_nq(kappa)
    zero = Poly2.zero()
    g_n = Poly2({(0, 1): B, (0, 0): C})
    g = tuple(g_n if k == n else zero for k in range(1, n + 1))
    f = (zero,) * n
    return PerturbedSystem(lam=float(lam), q=q, w=Poly1({0: 1.0}),
                           f_ladder=f, g_ladder=g)


def example2(A: float, B: float, C: float, lam: float = 0.0) -> PerturbedSystem:
    """Two-entry ladder over w(x) = 1 + x; the q = 1 benchmark."""
    g1 = Poly2({(1, 0): A, (0, 1): B, (2, 0): 1.0, (0, 2): 1.0, (1, 1): 1.0})
    g2 = Poly2.constant(C)
    zero = Poly2.zero()
    return PerturbedSystem(lam=float(lam), q=1, w=Poly1({0: 1.0, 1: 1.0}),
                           f_ladder=(zero, zero), g_ladder=(g1, g2))


def preset(name: str, **params) -> PerturbedSystem:
    """Build a preset by name with keyword parameter overrides."""
    if name == "example1":
        defaults = dict(B=0.0, C=1.5, kappa=0.5, lam=1.0)
        defaults.update(_rename_lambda(params))
        return example1(**defaults)
    if name == "example2":
        defaults = dict(A=1.0, B=0.0, C=1.0, lam=0.0)
        defaults.update(_rename_lambda(params))
        return example2(**defaults)
    raise ValueError(f"unknown preset {name!r} (expected one of {PRESET_NAMES})")


def _rename_lambda(params: dict) -> dict:
    out = dict(params)
    if "lambda" in out:
        out["lam"] = out.pop("lambda")
    return out
