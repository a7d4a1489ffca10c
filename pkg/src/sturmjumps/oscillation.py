"""Prüfer-phase counting of negative Dirichlet eigenvalues.

For u'' = -lambda^2 V u with u(a) = 0, write u = r sin(theta) and
u' = s r cos(theta) with a constant scale s > 0.  The phase then obeys

    theta' = s cos(theta)^2 + (lambda^2 V / s) sin(theta)^2,   theta(a) = 0,

which is strictly positive for V > 0, so theta climbs monotonically
through multiples of pi exactly at the zeros of u.  By Sturm oscillation
the number of zeros of u on (a, b) equals the number of strictly
negative eigenvalues N(lambda), hence

    N(lambda) = ceil(theta(b)/pi) - 1

away from the jump couplings where theta(b) is a multiple of pi.  The
scale s = lambda * sqrt(max(c_lower, 1)) (theorem class; plain lambda
otherwise) keeps the two terms balanced for large lambda; any s > 0
yields the same crossing count.

Conjecture-class potentials are never evaluated at a singular endpoint:
integration starts at a + delta with the phase seeded from the leading
solution behaviour u ~ (x - a), and symmetrically stops at b - delta
with the matching phase correction added (exact at the jumps, where the
solution vanishes at b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .potential import Potential, Regularity

__all__ = [
    "PhaseResult",
    "PhaseError",
    "AtJumpAmbiguity",
    "phase",
    "count_negative",
    "start_point",
]

_PI = math.pi

# at-jump guard: theta(b)/pi closer than this to an integer is ambiguous
JUMP_GUARD = 1e-7


class PhaseError(RuntimeError):
    pass


class AtJumpAmbiguity(RuntimeError):
    """theta(b)/pi sits inside the guard band around an integer; the caller decides."""

    def __init__(self, lam: float, theta_b: float):
        super().__init__(
            f"lambda={lam!r} is numerically at a jump (theta_b/pi = {theta_b / _PI!r})"
        )
        self.lam = lam
        self.theta_b = theta_b


@dataclass(frozen=True)
class PhaseResult:
    lam: float
    theta_b: float
    count: int
    steps: int
    rejected_steps: int


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) scalar integrator with PI step control and FSAL
# ---------------------------------------------------------------------------

_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0


def _rk45(f, x, y, x_end, rtol, atol, max_steps):
    """Integrate dy/dx = f(x, y) from x to x_end; returns (y, steps, rejected)."""
    span = x_end - x
    k1 = f(x, y)

    # automatic initial step: Euler probe of the derivative's variation;
    # a too-large guess is simply rejected and halved on the first step
    sc = atol + rtol * abs(y)
    d1 = abs(k1) / sc
    h0 = 1e-6 * span if d1 < 1e-5 else min(0.01 / d1, span)
    f1 = f(x + h0, y + h0 * k1)
    d2 = abs(f1 - k1) / (h0 * sc)
    dm = max(d1, d2)
    h = min((0.01 / dm) ** 0.2 if dm > 1e-15 else span, span)

    steps = 0
    rejected = 0
    err_prev = 1.0
    while x < x_end:
        if steps >= max_steps:
            raise PhaseError(f"phase integration exceeded {max_steps} steps at x={x}")
        if x + h == x:
            raise PhaseError(f"step size underflow at x={x}")
        if x + h > x_end:
            h = x_end - x
        k2 = f(x + _C2 * h, y + h * (_A21 * k1))
        k3 = f(x + _C3 * h, y + h * (_A31 * k1 + _A32 * k2))
        k4 = f(x + _C4 * h, y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = f(x + _C5 * h, y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        k6 = f(x + h, y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
        y_new = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = f(x + h, y_new)
        err_abs = abs(h) * abs(
            _E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7
        )
        sc = atol + rtol * max(abs(y), abs(y_new))
        err = err_abs / sc
        if err <= 1.0:
            if y_new < y - sc:
                raise PhaseError(f"phase decreased across a step at x={x}")
            x += h
            y = y_new
            k1 = k7
            steps += 1
            fac = 0.9 * err ** -0.14 * err_prev ** 0.08 if err > 1e-10 else 10.0
            h *= min(10.0, max(0.2, fac))
            err_prev = max(err, 1e-10)
        else:
            rejected += 1
            h *= max(0.2, 0.9 * err ** -0.2)
    return y, steps, rejected


# ---------------------------------------------------------------------------
# singular-endpoint offsets
# ---------------------------------------------------------------------------


def _offset_delta(p: Potential, lam: float, delta_tol: float, end: str) -> float:
    """Offset delta with lam^2 * V(endpoint +/- delta) * delta^2 <= delta_tol.

    The bound is the relative error of the leading solution behaviour
    u ~ (x - a) over the skipped sliver, found by bisection in log(delta).
    """
    fv = p.value_fn
    width = p.b - p.a

    def excess(delta):
        x = p.a + delta if end == "a" else p.b - delta
        try:
            v = fv(x)
        except (ValueError, ZeroDivisionError, OverflowError):
            return math.inf
        if not math.isfinite(v):
            return math.inf
        return lam * lam * v * delta * delta - delta_tol

    hi = width / 8.0
    if excess(hi) <= 0.0:
        return hi
    lo = 1e-30 * width
    attempts = 0
    while excess(lo) > 0.0:
        lo *= 1e-30
        attempts += 1
        if attempts > 9:
            raise PhaseError(f"endpoint offset underflows machine precision near {end}")
    log_lo, log_hi = math.log(lo), math.log(hi)
    for _ in range(120):
        log_mid = 0.5 * (log_lo + log_hi)
        if excess(math.exp(log_mid)) > 0.0:
            log_hi = log_mid
        else:
            log_lo = log_mid
    delta = math.exp(log_lo)
    anchor = p.a if end == "a" else p.b
    if anchor + delta == anchor or anchor - delta == anchor:
        raise PhaseError(f"endpoint offset underflows machine precision near {end}")
    return delta


def start_point(p: Potential, lam: float, delta_tol: float = 1e-10, end: str = "a") -> float:
    """First (or, for end='b', last) point at which integration touches V.

    Regular endpoints (declared exponent 0) need no offset.  Singular ones
    are approached to within the delta chosen by `_offset_delta`.
    """
    if p.regularity is not Regularity.CONJECTURE:
        raise ValueError("offsets apply to conjecture-class potentials only")
    if end not in ("a", "b"):
        raise ValueError("end must be 'a' or 'b'")
    gamma = p.gamma_a if end == "a" else p.gamma_b
    if gamma == 0.0:
        return p.a if end == "a" else p.b
    delta = _offset_delta(p, lam, delta_tol, end)
    return p.a + delta if end == "a" else p.b - delta


# ---------------------------------------------------------------------------
# phase and counting
# ---------------------------------------------------------------------------


def phase(
    p: Potential,
    lam: float,
    rtol: float = 1e-10,
    delta_tol: float = 1e-10,
    max_steps: int = 10_000_000,
) -> PhaseResult:
    """Endpoint phase theta(b; lambda) and the derived count N(lambda)."""
    if lam <= 0.0:
        raise ValueError("lambda must be positive")
    if rtol <= 0.0:
        raise ValueError("rtol must be positive")

    theorem = p.regularity is Regularity.THEOREM
    if theorem:
        s = lam * math.sqrt(max(p.c_lower, 1.0))
        v_floor = max(0.5 * p.c_lower, 0.0)
    else:
        s = lam
        v_floor = 0.0

    x0, theta0 = p.a, 0.0
    x1, tail = p.b, 0.0
    if not theorem:
        if p.gamma_a != 0.0:
            delta = _offset_delta(p, lam, delta_tol, "a")
            x0 = p.a + delta
            theta0 = math.atan2(s * delta, 1.0)
        if p.gamma_b != 0.0:
            delta = _offset_delta(p, lam, delta_tol, "b")
            x1 = p.b - delta
            tail = math.atan2(s * delta, 1.0)
        if not x0 < x1:
            raise PhaseError("endpoint offsets overlap; interval too small for this lambda")

    fv = p.value_fn
    lam2_over_s = lam * lam / s
    half_s = 0.5 * s

    def rhs(x, th):
        v = fv(x)
        if not v > v_floor:
            raise PhaseError(f"potential fell to V({x}) = {v} (floor {v_floor})")
        q = lam2_over_s * v
        return half_s + 0.5 * q + (half_s - 0.5 * q) * math.cos(2.0 * th)

    try:
        theta_end, steps, rejected = _rk45(rhs, x0, theta0, x1, rtol, rtol * _PI, max_steps)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise PhaseError(f"potential evaluation failed during phase integration: {exc}") from None
    theta_b = theta_end + tail

    t = theta_b / _PI
    nearest = round(t)
    if abs(t - nearest) < JUMP_GUARD:
        # exactly at a jump the new zero sits at x = b and the zero
        # eigenvalue is excluded from the count
        count = int(nearest) - 1
    else:
        count = math.ceil(t) - 1
    count = max(count, 0)
    return PhaseResult(lam, theta_b, count, steps, rejected)


def count_negative(
    p: Potential,
    lam: float,
    rtol: float = 1e-10,
    delta_tol: float = 1e-10,
    jump_guard: float = JUMP_GUARD,
) -> int:
    """N(lambda), guarding against lambda landing numerically on a jump.

    Inside the guard band the count is genuinely ambiguous at the working
    tolerance and AtJumpAmbiguity (carrying theta_b) is raised so the
    caller can decide; tighten ``jump_guard`` together with ``rtol`` when
    probing deliberately close to a jump.
    """
    result = phase(p, lam, rtol=rtol, delta_tol=delta_tol)
    t = result.theta_b / _PI
    if abs(t - round(t)) < jump_guard:
        raise AtJumpAmbiguity(lam, result.theta_b)
    return max(math.ceil(t) - 1, 0)
