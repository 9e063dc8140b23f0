"""Gauss hypergeometric function 2F1(a, b; c; z) on the real interval (-1, 1).

Evaluation is by the defining power series, summed in vectorised chunks.
For ``z < -0.5`` the Pfaff transformation

    2F1(a, b; c; z) = (1 - z)**(-a) * 2F1(a, c - b; c; z / (z - 1))

moves the argument into (1/3, 1/2). On ``0.5 < z < 1`` the series is summed
directly; it still converges geometrically there and the term budget covers
``z`` up to about 0.995. Terminating series (a or b a nonpositive integer)
are finite polynomials and are valid for any real ``z``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NoConvergence, PoleAtC

TERM_BUDGET = 10_000
REL_TOL = 1e-16
POLE_TOL = 1e-9
INT_TOL = 1e-12
_STREAK = 3


def _nonpositive_integer(x: float, tol: float) -> int | None:
    """Return m if x is within tol of -m (m >= 0), else None."""
    if x > tol:
        return None
    m = round(-x)
    if abs(x + m) <= tol:
        return int(m)
    return None


def _sum_series(a: float, b: float, c: float, z: float, n_terms: int | None) -> float:
    """Sum the series; ``n_terms`` fixes an exact length for terminating cases."""
    if n_terms is not None:
        n = np.arange(n_terms - 1, dtype=float)
        ratios = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        return math.fsum(np.concatenate(([1.0], np.cumprod(ratios))))

    # no stopping while a Pochhammer factor can still change sign
    settle = max(-a, -b, -c, 0.0)
    pieces = [np.array([1.0])]
    last = 1.0
    partial = 1.0
    streak = 0
    start = 0
    chunk = 32
    while start < TERM_BUDGET:
        stop = min(start + chunk, TERM_BUDGET)
        n = np.arange(start, stop, dtype=float)
        ratios = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        terms = last * np.cumprod(ratios)
        sums = partial + np.cumsum(terms)
        # remaining tail bounded by a geometric series once the ratio is below 1
        r = np.abs(ratios)
        with np.errstate(over="ignore", divide="ignore"):
            tail = np.where(r < 1.0, np.abs(terms) / np.maximum(1.0 - r, 1e-300), np.inf)
        small = (tail <= REL_TOL * np.abs(sums)) & (n > settle)
        small |= terms == 0.0
        for k, ok in enumerate(small):
            streak = streak + 1 if ok else 0
            if streak >= _STREAK:
                pieces.append(terms[: k + 1])
                return math.fsum(np.concatenate(pieces))
        pieces.append(terms)
        last = float(terms[-1])
        partial = float(sums[-1])
        if not math.isfinite(partial):
            break
        start = stop
        chunk = min(chunk * 2, 2048)
    raise NoConvergence(f"2F1({a}, {b}; {c}; {z}) did not converge within {TERM_BUDGET} terms")


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function for real arguments.

    Raises PoleAtC when ``c`` is (within 1e-9 of) a nonpositive integer and the
    series is not cut off earlier by a numerator parameter, and DomainError for
    ``|z| >= 1`` with a non-terminating series.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if a > b:
        a, b = b, a
    ma = _nonpositive_integer(a, INT_TOL)
    mb = _nonpositive_integer(b, INT_TOL)
    cutoffs = [m for m in (ma, mb) if m is not None]
    degree = min(cutoffs) if cutoffs else None
    mc = _nonpositive_integer(c, POLE_TOL)
    if mc is not None and (degree is None or degree > mc):
        raise PoleAtC(f"2F1 lower parameter c={c} is a nonpositive integer")
    if z == 0.0:
        return 1.0
    if degree is not None:
        if degree == ma:
            a = -float(degree)
        else:
            b = -float(degree)
        return _sum_series(a, b, c, z, degree + 1)
    if not -1.0 < z < 1.0:
        raise DomainError(f"2F1 argument z={z} outside (-1, 1)")
    if z < -0.5:
        w = z / (z - 1.0)
        return (1.0 - z) ** (-a) * hyp2f1(a, c - b, c, w)
    return _sum_series(a, b, c, z, None)


def hyp2f1_derivative(a: float, b: float, c: float, z: float) -> float:
    """d/dz 2F1(a, b; c; z) = (a b / c) 2F1(a + 1, b + 1; c + 1; z)."""
    ab = float(a) * float(b)
    if ab == 0.0 or _nonpositive_integer(a, INT_TOL) == 0 or _nonpositive_integer(b, INT_TOL) == 0:
        return 0.0
    if abs(c) <= POLE_TOL:
        raise PoleAtC(f"derivative of 2F1 with c={c}")
    return ab / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z)


def hyp2f1_jet(a: float, b: float, c: float, z: float) -> tuple[float, float, float]:
    """Value, first and second z-derivatives of 2F1(a, b; c; z).

    The second derivative comes from the hypergeometric equation
    ``z(1-z) F'' + (c - (a+b+1) z) F' - a b F = 0``; close to ``z = 0`` or
    ``z = 1`` the equation is ill-conditioned and the derivative formula is
    applied twice instead.
    """
    f = hyp2f1(a, b, c, z)
    fp = hyp2f1_derivative(a, b, c, z)
    w = z * (1.0 - z)
    if abs(w) >= 1e-2:
        fpp = (a * b * f - (c - (a + b + 1.0) * z) * fp) / w
    else:
        if a * b == 0.0:
            fpp = 0.0
        else:
            fpp = a * b / c * hyp2f1_derivative(a + 1.0, b + 1.0, c + 1.0, z)
    return f, fp, fpp


def contiguous_lower_c(a: float, b: float, c: float, z: float) -> float:
    """Residual of ``z F'(c) = (c - 1) [F(c - 1) - F(c)]``."""
    lhs = z * hyp2f1_derivative(a, b, c, z)
    rhs = (c - 1.0) * (hyp2f1(a, b, c - 1.0, z) - hyp2f1(a, b, c, z))
    return lhs - rhs


def contiguous_raise_c(a: float, b: float, c: float, z: float) -> float:
    """Residual of ``(z - 1) F'(c) = -(a+b-c) F(c) + (a+b-c - ab/c) F(c + 1)``."""
    s = a + b - c
    lhs = (z - 1.0) * hyp2f1_derivative(a, b, c, z)
    rhs = -s * hyp2f1(a, b, c, z) + (s - a * b / c) * hyp2f1(a, b, c + 1.0, z)
    return lhs - rhs
