"""Three-term recurrence for the expansion coefficients.

The expansion ``u = sum_n c_n 2F1(alpha, beta; gamma0 - n; z)`` solves the
Heun equation when

    R_n c_n + Q_n c_{n-1} + P_n c_{n-2} = 0,    c_{-1} = c_{-2} = 0,

and ``R_0 = 0`` forces ``gamma0`` to be one of gamma, alpha, beta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZero, RecurrenceBreakdown, ValidationError
from .params import ExpansionSpec, HeunParameters, frame_params, resolve_gamma0

TERMINATION_TOL = 1e-10
_GAMMA0_TOL = 1e-12


@dataclass(frozen=True)
class RecurrenceContext:
    params: HeunParameters
    gamma0: float

    def __post_init__(self):
        p = self.params
        if min(abs(self.gamma0 - v) for v in (p.gamma, p.alpha, p.beta)) > _GAMMA0_TOL:
            raise ValidationError(
                f"gamma0={self.gamma0} must equal gamma, alpha or beta (R_0 = 0 otherwise)"
            )

    @classmethod
    def from_spec(cls, p: HeunParameters, spec: ExpansionSpec) -> RecurrenceContext:
        fp = frame_params(p, spec.frame)
        return cls(fp, resolve_gamma0(fp, spec.gamma0_choice))


@dataclass(frozen=True)
class CoefficientSequence:
    coefficients: tuple[float, ...]
    gamma0: float
    terminated_at: int | None = None
    # raw values computed for c_{N+1}, c_{N+2} before they were zeroed
    termination_residual: tuple[float, float] | None = None

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, n):
        return self.coefficients[n]

    @property
    def K(self) -> int:
        return len(self.coefficients) - 1


def coeff_R(n: int, ctx: RecurrenceContext) -> float:
    p, g0 = ctx.params, ctx.gamma0
    if abs(g0 - n) < 1e-12:
        raise DivisionByZero(f"gamma0 - n = 0 at n={n}")
    s = p.gamma - g0 + n
    return -p.a * s * (p.delta + p.epsilon + s - 1.0 - p.alphabeta / (g0 - n))


def coeff_Q(n: int, ctx: RecurrenceContext, q: float | None = None) -> float:
    """Q_n; linear in the accessory parameter (pass ``q`` to override ``params.q``)."""
    p, g0 = ctx.params, ctx.gamma0
    q = p.q if q is None else q
    s = p.gamma - g0 + n
    return (
        -(p.a - 1.0) * (p.epsilon + s - 1.0) * (g0 - n)
        + p.a * (s - 1.0) * (p.delta + p.epsilon + s - 2.0)
        + (p.alphabeta * p.a - q)
    )


def coeff_P(n: int, ctx: RecurrenceContext) -> float:
    p, g0 = ctx.params, ctx.gamma0
    return (p.a - 1.0) * (p.epsilon + p.gamma - g0 + n - 2.0) * (g0 - n + 1.0)


def coeff_RP(n: int, ctx: RecurrenceContext) -> float:
    """The product R_{n-1} P_n, written without the 1/(gamma0 - n + 1) pole.

    This is the combination that enters the continued fraction and the
    denominator-free form of the recurrence.
    """
    p, g0 = ctx.params, ctx.gamma0
    s = p.gamma - g0 + n - 1.0
    return (
        -p.a
        * (p.a - 1.0)
        * s
        * (p.epsilon + s - 1.0)
        * ((p.delta + p.epsilon + s - 1.0) * (g0 - n + 1.0) - p.alphabeta)
    )


def breakdown_threshold(n: int, a: float) -> float:
    # R_n grows like n**2, so the zero test scales with it
    return 1e-12 * (1.0 + abs(a)) * (1.0 + n) ** 2


def generate_coefficients(ctx: RecurrenceContext, K: int, a0: float = 1.0) -> CoefficientSequence:
    """Run the recurrence forward from ``c_0 = a0`` up to ``c_K``.

    Termination is declared when two consecutive coefficients drop below
    1e-10 of the largest coefficient seen so far; the sequence is then
    zero-filled to length K + 1. The recurrence is linear, so it runs from
    ``c_0 = 1`` and the result is scaled by ``a0`` afterwards.
    """
    if int(K) != K or K < 1:
        raise ValidationError(f"K must be a positive integer, got {K!r}")
    seq = _forward(ctx, int(K))
    if a0 == 1.0:
        return seq
    a0 = float(a0)
    res = seq.termination_residual
    return CoefficientSequence(
        tuple(a0 * c for c in seq.coefficients),
        seq.gamma0,
        seq.terminated_at,
        None if res is None else (a0 * res[0], a0 * res[1]),
    )


def _forward(ctx: RecurrenceContext, K: int) -> CoefficientSequence:
    a = ctx.params.a
    coeffs = [1.0]
    prev2, prev1 = 0.0, 1.0
    peak = abs(prev1)
    for n in range(1, K + 1):
        pn = coeff_P(n, ctx)
        try:
            r = coeff_R(n, ctx)
        except DivisionByZero:
            # 2F1(.; 0; z) is a pole: only a series already ending at n-1 survives
            if _closes(ctx, n, prev1, prev2, peak):
                return _terminated(coeffs, n - 1, K, ctx.gamma0, (0.0, 0.0))
            raise RecurrenceBreakdown(n, f"gamma0 - n vanishes at n={n}") from None
        if abs(r) <= breakdown_threshold(n, a):
            # c_{n-1} ~ 0 with P_n ~ 0 already ends the series; R_n is then irrelevant
            if n >= 2 and abs(prev1) <= TERMINATION_TOL * peak and _negligible_P(n, a, pn):
                return _terminated(coeffs, n - 2, K, ctx.gamma0, (prev1, 0.0))
            # R_n = 0 leaves c_n free; c_n = 0 ends the series if the rest of row n vanishes
            if _closes(ctx, n, prev1, prev2, peak):
                return _terminated(coeffs, n - 1, K, ctx.gamma0, (0.0, 0.0))
            raise RecurrenceBreakdown(n)
        cur = -(coeff_Q(n, ctx) * prev1 + pn * prev2) / r
        if n >= 2 and abs(prev1) <= TERMINATION_TOL * peak and abs(cur) <= TERMINATION_TOL * peak:
            return _terminated(coeffs, n - 2, K, ctx.gamma0, (prev1, cur))
        coeffs.append(cur)
        peak = max(peak, abs(cur))
        prev2, prev1 = prev1, cur
    return CoefficientSequence(tuple(coeffs), ctx.gamma0)


def _negligible_P(n: int, a: float, pn: float) -> bool:
    return abs(pn) <= 1e-9 * (1 + abs(a)) * (1 + n) ** 2


def _closes(ctx: RecurrenceContext, n: int, prev1: float, prev2: float, peak: float) -> bool:
    """Whether c_n = c_{n+1} = 0 satisfies rows n and n+1 of the recurrence."""
    qa, pa = coeff_Q(n, ctx) * prev1, coeff_P(n, ctx) * prev2
    if abs(qa + pa) > TERMINATION_TOL * max(peak, abs(qa), abs(pa)):
        return False
    return _negligible_P(n + 1, ctx.params.a, coeff_P(n + 1, ctx))


def _terminated(coeffs, N, K, gamma0, residual):
    kept = coeffs[: N + 1]
    kept += [0.0] * (K + 1 - len(kept))
    return CoefficientSequence(tuple(kept), gamma0, terminated_at=N, termination_residual=residual)


def recurrence_residuals(seq: CoefficientSequence, ctx: RecurrenceContext) -> np.ndarray:
    """Relative residual of the recurrence at each n = 1..K.

    For a terminated sequence only n <= N is meaningful: beyond that the
    stored coefficients are exact zeros rather than recurrence output.
    """
    c = [0.0, 0.0, *seq.coefficients]
    last = seq.terminated_at if seq.terminated_at is not None else seq.K
    out = []
    for n in range(1, last + 1):
        t = (coeff_R(n, ctx) * c[n + 2], coeff_Q(n, ctx) * c[n + 1], coeff_P(n, ctx) * c[n])
        scale = sum(abs(x) for x in t)
        out.append(abs(sum(t)) / scale if scale > 0 else 0.0)
    return np.asarray(out)


def perron_ratios(a: float) -> tuple[float, float]:
    """Limits of c_{n+1}/c_n allowed by the recurrence for large n: 1 and (a-1)/a."""
    return 1.0, (a - 1.0) / a


def tail_ratio(seq: CoefficientSequence, window: int = 10) -> float | None:
    """Mean of |c_{n+1}/c_n| over the last ``window`` steps (None if undefined)."""
    c = np.asarray(seq.coefficients)
    if seq.terminated_at is not None or len(c) < 2:
        return None
    tail = c[-(window + 1):]
    if np.any(tail[:-1] == 0.0):
        return None
    return float(np.mean(np.abs(tail[1:] / tail[:-1])))
