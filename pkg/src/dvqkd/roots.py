"""Bracketed bisection helpers.

Bisection is used everywhere a root or a predicate boundary is needed:
it is slower than derivative-based methods but its convergence on a
sign-changing bracket is unconditional, which matters for the entropy
equations whose derivatives blow up at the bracket edges.
"""

from __future__ import annotations

from typing import Callable

from .errors import InfeasibleError


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = 1e-9,
    max_iter: int = 200,
) -> float:
    """Root of f on [lo, hi] by bisection to absolute tolerance ``xtol``.

    Raises InfeasibleError if f(lo) and f(hi) have the same sign.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise InfeasibleError(f"no sign change on [{lo:g}, {hi:g}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= xtol:
            break
    return 0.5 * (lo + hi)


def bisect_predicate(
    pred: Callable[[float], bool],
    true_at: float,
    false_at: float,
    *,
    rel_tol: float = 1e-6,
    max_iter: int = 200,
) -> float:
    """Largest x with pred(x) True, given pred(true_at) and not pred(false_at).

    The bracket endpoints may be in either order; the returned value is the
    midpoint of the final bracket, converged to relative width ``rel_tol``.
    """
    lo, hi = true_at, false_at
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
        if abs(hi - lo) <= rel_tol * max(abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)
