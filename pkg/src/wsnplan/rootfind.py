"""Derivative-free scalar root finding on a sign-changing bracket."""

from __future__ import annotations

from typing import Callable

from .errors import SolverError


def bisect_then_secant(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    bisect_iters: int = 30,
    max_iters: int = 200,
) -> float:
    """Find x in [lo, hi] with f(x) = 0, given f(lo) and f(hi) of opposite sign.

    Bisection narrows the bracket first, then secant steps polish the root;
    any secant step leaving the bracket falls back to its midpoint, so the
    method is globally convergent and deterministic.
    """
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise SolverError(f"root not bracketed on [{lo}, {hi}]")
    a, b, f_a, f_b = lo, hi, f_lo, f_hi

    for _ in range(bisect_iters):
        mid = 0.5 * (a + b)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_a < 0.0):
            a, f_a = mid, f_mid
        else:
            b, f_b = mid, f_mid
        if b - a <= rel_tol * max(1.0, abs(mid)):
            return mid

    x_prev, f_prev, x_cur, f_cur = a, f_a, b, f_b
    for _ in range(max_iters):
        if f_cur == f_prev:
            break
        x_next = x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev)
        if not a < x_next < b:
            x_next = 0.5 * (a + b)
        f_next = f(x_next)
        if f_next == 0.0:
            return x_next
        if (f_next < 0.0) == (f_a < 0.0):
            a, f_a = x_next, f_next
        else:
            b, f_b = x_next, f_next
        step = abs(x_next - x_cur)
        x_prev, f_prev, x_cur, f_cur = x_cur, f_cur, x_next, f_next
        if step <= rel_tol * max(1.0, abs(x_next)) or b - a <= rel_tol * max(1.0, abs(x_next)):
            return x_next
    return 0.5 * (a + b)
