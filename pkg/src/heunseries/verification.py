"""Independent checks of candidate solutions against the Heun equation itself."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ComputationError, DomainError, HeunError, StepFailure
from .params import HeunParameters
from .solutions import SolutionForm, evaluate

SINGULAR_MARGIN = 1e-2
RESIDUAL_TOL = 1e-8
ORACLE_TOL = 1e-6
DEFAULT_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))
ORACLE_INTERVAL = (0.1, 0.45)


class Verdict(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class VerificationReport:
    residual_sup: float
    oracle_max_deviation: float | None
    grid: tuple[float, ...]
    verdict: Verdict
    thresholds: dict = field(default_factory=dict)
    wronskian_at_half: float | None = None
    oracle_interval: tuple[float, float] | None = None
    reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "residual_sup": self.residual_sup,
            "oracle_max_deviation": self.oracle_max_deviation,
            "wronskian_at_half": self.wronskian_at_half,
            "grid": list(self.grid),
            "oracle_interval": list(self.oracle_interval) if self.oracle_interval else None,
            "verdict": self.verdict.value,
            "thresholds": dict(self.thresholds),
            "reason": self.reason,
        }


def _check_regular(z: float, p: HeunParameters, margin: float = SINGULAR_MARGIN):
    for s in (0.0, 1.0, p.a):
        if abs(z - s) < margin:
            raise DomainError(f"z={z} lies within {margin} of the singular point {s}")


def heun_residual(u: float, u_prime: float, u_double_prime: float, p: HeunParameters, z: float) -> float:
    _check_regular(z, p)
    a = p.a
    return (
        u_double_prime
        + (p.gamma / z + p.delta / (z - 1.0) + p.epsilon / (z - a)) * u_prime
        + (p.alphabeta * z - p.q) / (z * (z - 1.0) * (z - a)) * u
    )


@dataclass(frozen=True)
class Trajectory:
    z: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray


def integrate_heun(
    p: HeunParameters,
    z0: float,
    z1: float,
    u0: float,
    u0_prime: float,
    samples=None,
    rtol: float = 1e-11,
    atol: float = 1e-13,
) -> Trajectory:
    """Integrate the equation as a first-order system with an adaptive RK pair.

    Returns (u, u') at ``samples`` (default: 50 evenly spaced points on
    [z0, z1]). The interval must stay clear of the singular points.
    """
    lo, hi = min(z0, z1), max(z0, z1)
    for s in (0.0, 1.0, p.a):
        if lo - SINGULAR_MARGIN < s < hi + SINGULAR_MARGIN:
            raise DomainError(f"integration interval [{lo}, {hi}] meets the singular point {s}")
    if samples is None:
        samples = np.linspace(z0, z1, 50)
    samples = np.asarray(samples, dtype=float)
    g, d, e, ab, q, a = p.gamma, p.delta, p.epsilon, p.alphabeta, p.q, p.a

    def rhs(z, y):
        u, up = y
        upp = -(g / z + d / (z - 1.0) + e / (z - a)) * up - (ab * z - q) / (z * (z - 1.0) * (z - a)) * u
        return [up, upp]

    sol = solve_ivp(
        rhs, (z0, z1), [u0, u0_prime], method="DOP853", t_eval=samples, rtol=rtol, atol=atol
    )
    if not sol.success:
        raise StepFailure(sol.message)
    return Trajectory(sol.t, sol.y[0], sol.y[1])


def default_grid(p: HeunParameters) -> tuple[float, ...]:
    return tuple(z for z in DEFAULT_GRID if abs(z - p.a) >= SINGULAR_MARGIN)


def oracle_interval(p: HeunParameters, margin: float = 0.05) -> tuple[float, float] | None:
    """Interval for the integration cross-check.

    [0.1, 0.45] unless ``a`` is nearby; then the longest piece of (0.05, 0.95)
    that keeps ``margin`` away from ``a`` (capped at length 0.35, at least 0.2).
    """
    lo, hi = ORACLE_INTERVAL
    if not (lo - margin < p.a < hi + margin):
        return ORACLE_INTERVAL
    pieces = [(0.05, p.a - margin), (p.a + margin, 0.95)]
    start, stop = max(pieces, key=lambda t: t[1] - t[0])
    if stop - start < 0.2:
        return None
    return (start, min(stop, start + 0.35))


def wronskian(f1: SolutionForm, f2: SolutionForm, z: float) -> float:
    u1, d1, _ = evaluate(f1, z)
    u2, d2, _ = evaluate(f2, z)
    return u1 * d2 - d1 * u2


def verify_solution(
    form: SolutionForm,
    p: HeunParameters | None = None,
    grid=None,
    residual_tol: float = RESIDUAL_TOL,
    oracle_tol: float = ORACLE_TOL,
    with_oracle: bool = True,
) -> VerificationReport:
    """Check ``form`` against the equation with parameters ``p`` (default ``form.params``).

    The residual at each grid point is normalised by |u| + |u'| + |u''|. The
    integration oracle starts from the series values at the left end of the
    oracle interval and records the largest absolute deviation from the
    series over that interval.
    """
    p = form.params if p is None else p
    grid = default_grid(p) if grid is None else tuple(float(z) for z in grid)
    thresholds = {"residual": residual_tol, "oracle": oracle_tol}
    try:
        worst = 0.0
        for z in grid:
            u, u1, u2 = evaluate(form, z)
            scale = abs(u) + abs(u1) + abs(u2)
            r = abs(heun_residual(u, u1, u2, p, z))
            worst = max(worst, r / scale if scale > 0 else r)
    except HeunError as exc:
        return VerificationReport(np.nan, None, grid, Verdict.INCONCLUSIVE, thresholds, reason=str(exc))

    deviation = None
    interval = None
    reason = None
    if with_oracle:
        interval = oracle_interval(p)
        if interval is None:
            reason = "no singular-free oracle interval of length >= 0.2"
        else:
            z0, z1 = interval
            try:
                u0, d0, _ = evaluate(form, z0)
                samples = np.linspace(z0, z1, 8)
                traj = integrate_heun(p, z0, z1, u0, d0, samples=samples)
                series = np.array([evaluate(form, z)[0] for z in samples])
                deviation = float(np.max(np.abs(series - traj.u)))
            except (ComputationError, DomainError) as exc:
                reason = str(exc)

    if not np.isfinite(worst):
        verdict = Verdict.INCONCLUSIVE
        reason = reason or "non-finite residual"
    elif worst > residual_tol or (deviation is not None and deviation > oracle_tol):
        verdict = Verdict.FAIL
    elif with_oracle and deviation is None:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PASS
    return VerificationReport(
        residual_sup=float(worst),
        oracle_max_deviation=deviation,
        grid=grid,
        verdict=verdict,
        thresholds=thresholds,
        oracle_interval=interval,
        reason=reason,
    )
