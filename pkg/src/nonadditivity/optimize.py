"""Scalar search routines shared by the optimizers and region sweeps."""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class ScalarMax(NamedTuple):
    x: float
    value: float
    evaluations: int


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-9, max_iter: int = 200) -> ScalarMax:
    """Maximize a unimodal ``f`` on ``[lo, hi]`` until the bracket is shorter than ``tol``.

    The endpoints are evaluated as well, so a monotone ``f`` returns its
    boundary maximum exactly.
    """
    a, b = float(lo), float(hi)
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    n = 2
    while b - a > tol and n < max_iter:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        n += 1
    best = (x1, f1) if f1 >= f2 else (x2, f2)
    for x in (float(lo), float(hi)):
        fx = f(x)
        n += 1
        if fx > best[1]:
            best = (x, fx)
    return ScalarMax(best[0], best[1], n)


def grid_then_golden(f: Callable[[float], float], points, tol: float = 1e-9) -> ScalarMax:
    """Pick the best of an increasing grid, then golden-refine on its neighbours.

    Useful when ``f`` is smooth but not known to be unimodal on the full range.
    """
    pts = sorted(float(p) for p in points)
    vals = [f(p) for p in pts]
    k = max(range(len(pts)), key=vals.__getitem__)
    lo = pts[max(k - 1, 0)]
    hi = pts[min(k + 1, len(pts) - 1)]
    refined = golden_section_max(f, lo, hi, tol=tol)
    n = len(pts) + refined.evaluations
    if refined.value >= vals[k]:
        return ScalarMax(refined.x, refined.value, n)
    return ScalarMax(pts[k], vals[k], n)


def bisect_sign(g: Callable[[float], bool], lo: float, hi: float, tol: float = 1e-4) -> float:
    """Locate the switch point of a predicate with ``g(lo) != g(hi)``.

    Returns the midpoint of the final bracket of width at most ``tol``.
    """
    glo = g(lo)
    if glo == g(hi):
        raise ValueError("predicate does not change between the bracket endpoints")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) == glo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
