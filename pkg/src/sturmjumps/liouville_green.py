"""Liouville-Green change of variable and the two-sided count bracket.

With xi = integral of sqrt(V) from a and g(xi) = V(x)**(1/4) * u(x), the
equation u'' = -lambda^2 V u becomes g'' = (-lambda^2 - U(xi)) g on
(0, D), where D = integral of sqrt(V) over the whole interval and

    U = V**(-3/4) * (V**(-1/4))''
      = -V''/(4 V^2) + 5 V'^2 / (16 V^3)       (expanded to avoid
                                                 cancellation in tiny
                                                 fourth-root differences)

For theorem-class potentials U is bounded, |U| <= C, and comparing
against the constant-coefficient problems at -lambda^2 -/+ C brackets
the eigenvalue count:

    ceil(D*sqrt(lambda^2 - C)/pi - 1) <= N(lambda)
                                      <= ceil(D*sqrt(lambda^2 + C)/pi - 1)

for every lambda > sqrt(C).  C is estimated here as the sampled maximum
of |U| on a Chebyshev grid times a 5% safety factor; that is a heuristic,
not a certified sup, which is why the factor exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .expr import eval_jet2
from .potential import Potential, Regularity, chebyshev_grid
from .quadrature import integrate_sqrt_v

__all__ = ["LGData", "transformed_potential", "lg_data", "count_bracket"]

_PI = math.pi


@dataclass(frozen=True)
class LGData:
    d: float
    c: float
    u_samples: tuple[tuple[float, float], ...]  # (xi, U)
    grid: tuple[tuple[float, float], ...]  # (x, xi)


def transformed_potential(p: Potential, x: float) -> float:
    """U at x, from exact first and second derivatives of the formula."""
    if p.regularity is not Regularity.THEOREM:
        raise ValueError("the transformed potential is bounded only for theorem-class potentials")
    if not (p.a <= x <= p.b):
        raise ValueError(f"x={x} outside [{p.a}, {p.b}]")
    j = eval_jet2(p.ast, x)
    v = j.v
    return -0.25 * j.d2 / (v * v) + 0.3125 * j.d1 * j.d1 / (v * v * v)


def lg_data(p: Potential, grid_points: int = 512, quad_tol: float = 1e-12) -> LGData:
    """Sample U on a Chebyshev grid, map x to xi, and bound |U| by C.

    The grid includes the endpoints (where suprema often sit); xi is
    accumulated segment by segment so it is increasing by construction,
    while D itself is integrated once over the full interval.
    """
    if grid_points < 200:
        raise ValueError("need at least 200 grid points")
    if p.regularity is not Regularity.THEOREM:
        raise ValueError("the count bracket applies to theorem-class potentials only")
    xs = [float(x) for x in chebyshev_grid(p.a, p.b, grid_points, include_endpoints=True)]
    u_vals = [transformed_potential(p, x) for x in xs]
    xis = [0.0]
    for x_prev, x_next in zip(xs, xs[1:]):
        xis.append(xis[-1] + integrate_sqrt_v(p, x_prev, x_next, quad_tol).value)
    d = integrate_sqrt_v(p, p.a, p.b, quad_tol).value
    c = 1.05 * max(abs(u) for u in u_vals)
    return LGData(
        d=d,
        c=c,
        u_samples=tuple(zip(xis, u_vals)),
        grid=tuple(zip(xs, xis)),
    )


def count_bracket(lg: LGData, lam: float) -> tuple[int, int]:
    """Two-sided bracket for N(lambda); requires lambda > sqrt(C)."""
    if not lam > math.sqrt(lg.c):
        raise ValueError(f"bracket needs lambda > sqrt(C) = {math.sqrt(lg.c)!r}, got {lam!r}")
    lower = math.ceil(lg.d * math.sqrt(lam * lam - lg.c) / _PI - 1.0)
    upper = math.ceil(lg.d * math.sqrt(lam * lam + lg.c) / _PI - 1.0)
    return lower, upper
