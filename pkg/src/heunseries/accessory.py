"""Accessory-parameter polynomials: the values of q that make an expansion terminate.

With the termination class in force (``P_{N+2} = 0``), the expansion stops
after N + 1 terms exactly when ``c_{N+1}(q) = 0``. Each ``Q_n`` is linear in
q, so running the recurrence with polynomial coefficients gives
``c_{N+1}`` as a degree-(N+1) polynomial in q.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import RecurrenceBreakdown, ValidationError, ZeroDenominator
from .params import ExpansionSpec, Frame, Gamma0, HeunParameters, frame_params
from .recurrence import RecurrenceContext, breakdown_threshold, coeff_P, coeff_Q, coeff_R, coeff_RP

CLASS_TOL = 1e-9


class TerminationClass(str, enum.Enum):
    EPSILON_EQ_MINUS_N = "EpsilonEqMinusN"
    EPS_GAMMA_MINUS_ALPHA_EQ_MINUS_N = "EpsGammaMinusAlphaEqMinusN"
    EPS_GAMMA_MINUS_BETA_EQ_MINUS_N = "EpsGammaMinusBetaEqMinusN"

    @classmethod
    def for_gamma0(cls, choice: Gamma0) -> TerminationClass:
        return {
            Gamma0.GAMMA: cls.EPSILON_EQ_MINUS_N,
            Gamma0.ALPHA: cls.EPS_GAMMA_MINUS_ALPHA_EQ_MINUS_N,
            Gamma0.BETA: cls.EPS_GAMMA_MINUS_BETA_EQ_MINUS_N,
        }[Gamma0(choice)]


def _as_spec(spec) -> ExpansionSpec:
    if isinstance(spec, ExpansionSpec):
        return spec
    return ExpansionSpec(gamma0_choice=Gamma0(spec))


def class_value(p: HeunParameters, choice: Gamma0) -> float:
    """epsilon, epsilon+gamma-alpha or epsilon+gamma-beta, whichever the choice selects."""
    choice = Gamma0(choice)
    if choice is Gamma0.GAMMA:
        return p.epsilon
    if choice is Gamma0.ALPHA:
        return p.epsilon + p.gamma - p.alpha
    return p.epsilon + p.gamma - p.beta


def validate_termination_class(p: HeunParameters, spec, N: int) -> bool:
    spec = _as_spec(spec)
    fp = frame_params(p, spec.frame)
    return abs(class_value(fp, spec.gamma0_choice) + N) <= CLASS_TOL


def termination_order(p: HeunParameters, spec) -> int | None:
    """The N for which the class condition holds, if any."""
    spec = _as_spec(spec)
    v = -class_value(frame_params(p, spec.frame), spec.gamma0_choice)
    n = round(v)
    if n >= 0 and abs(v - n) <= CLASS_TOL:
        return int(n)
    return None


@dataclass(frozen=True)
class AccessoryPolynomial:
    """Monic polynomial in ``(q - center)``, coefficients lowest degree first."""

    coefficients: tuple[float, ...]
    N: int
    termination_class: TerminationClass
    center: float = 0.0
    # leading coefficient of c_{N+1}(q) itself: prod 1/R_n (0 at a pole of R_n, inf at R_{N+1} = 0)
    raw_leading: float = 1.0

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, q):
        return P.polyval(np.asarray(q) - self.center, self.coefficients)

    def deriv_at(self, q):
        return P.polyval(np.asarray(q) - self.center, P.polyder(self.coefficients))

    def scale_at(self, q) -> float:
        """Sum of |term| magnitudes, the natural yardstick for |p(q)|."""
        x = abs(complex(q) - self.center)
        return float(sum(abs(c) * x**k for k, c in enumerate(self.coefficients)))


def q_polynomial(p: HeunParameters, spec, N: int, center: float = 0.0) -> AccessoryPolynomial:
    """Terminating-q polynomial for the given expansion and order N.

    ``p.q`` is ignored. In the 1-z frame the recurrence runs on the mapped
    parameters (where q' = alpha*beta - q) and the result is expressed back in
    the original q.
    """
    spec = _as_spec(spec)
    if not validate_termination_class(p, spec, N):
        raise ValidationError(
            f"termination class {TerminationClass.for_gamma0(spec.gamma0_choice).value} "
            f"does not hold with N={N}"
        )
    ctx = RecurrenceContext.from_spec(p, spec)
    fp = ctx.params
    flip = spec.frame is Frame.ONE_MINUS_Z
    # polynomial variable y = q_frame - center_frame
    center_frame = fp.alphabeta - center if flip else center
    # denominator-free recurrence b_n = -(Q_n b_{n-1} + R_{n-1} P_n b_{n-2}),
    # with b_n = c_n * R_1 ... R_n; every step contributes a factor y, so b is monic
    prev2 = np.zeros(1)
    prev1 = np.ones(1)
    leading = 1.0
    for n in range(1, N + 2):
        try:
            r = coeff_R(n, ctx)
        except ZeroDivisionError:
            if n <= N:
                raise RecurrenceBreakdown(n) from None
            r = np.inf
        if abs(r) <= breakdown_threshold(n, fp.a):
            if n <= N:
                raise RecurrenceBreakdown(n)
            # R_{N+1} = 0 does not enter b_{N+1}; only the raw scale is lost
            r = 0.0
        qn = np.array([coeff_Q(n, ctx, q=center_frame), -1.0])
        rp = coeff_RP(n, ctx) if n >= 2 else 0.0
        cur = -P.polyadd(P.polymul(qn, prev1), rp * prev2)
        leading = leading / r if r != 0.0 else np.inf
        prev2, prev1 = prev1, cur
    coeffs = np.zeros(N + 2)
    coeffs[: len(prev1)] = prev1
    if flip:
        # y = -(q - center)
        coeffs = coeffs * (-1.0) ** np.arange(N + 2)
        leading *= (-1.0) ** (N + 1)
    monic = coeffs / coeffs[-1]
    return AccessoryPolynomial(
        coefficients=tuple(float(c) for c in monic),
        N=N,
        termination_class=TerminationClass.for_gamma0(spec.gamma0_choice),
        center=float(center),
        raw_leading=float(leading),
    )


@dataclass(frozen=True)
class Root:
    value: complex
    is_real: bool
    multiplicity: int = 1
    residual: float = 0.0

    @property
    def real(self) -> float:
        return float(self.value.real)


def _companion(coeffs: np.ndarray) -> np.ndarray:
    d = len(coeffs) - 1
    m = np.zeros((d, d))
    if d > 1:
        m[np.arange(1, d), np.arange(d - 1)] = 1.0
    m[:, -1] = -coeffs[:-1]
    return m


def _polish(coeffs, deriv, x, iters=50):
    fx = P.polyval(x, coeffs)
    for _ in range(iters):
        d = P.polyval(x, deriv)
        if d == 0:
            break
        x_new = x - fx / d
        f_new = P.polyval(x_new, coeffs)
        if abs(f_new) >= abs(fx):
            break
        x, fx = x_new, f_new
    return x, fx


def solve_q(poly: AccessoryPolynomial) -> list[Root]:
    """All N + 1 roots, from companion-matrix eigenvalues polished by Newton steps.

    Roots whose imaginary part polishes away are reported as real; the rest
    are returned as complex values with ``is_real=False``. Repeated roots
    appear once per multiplicity.
    """
    c = np.asarray(poly.coefficients, dtype=float)
    deriv = P.polyder(c)
    eig = np.linalg.eigvals(_companion(c)).astype(complex)
    found = []
    for x0 in eig:
        x, fx = _polish(c, deriv, complex(x0))
        scale = sum(abs(ck) * abs(x) ** k for k, ck in enumerate(c))
        if abs(x.imag) <= 1e-8 * (1.0 + abs(x)):
            xr, fr = _polish(c, deriv, float(x.real))
            if abs(fr) <= max(abs(fx), 1e-12 * scale) * 10:
                found.append((complex(xr, 0.0), True, abs(fr)))
                continue
        found.append((x, False, abs(fx)))
    found.sort(key=lambda t: (not t[1], t[0].real, t[0].imag))
    roots = []
    for x, is_real, res in found:
        mult = sum(1 for y, _, _ in found if abs(y - x) <= 1e-6 * (1.0 + abs(x)))
        roots.append(Root(value=x + poly.center, is_real=is_real, multiplicity=mult, residual=res))
    return roots


def terminal_coefficient(p: HeunParameters, spec, N: int, q: float) -> tuple[float, float]:
    """R_{N+1} c_{N+1}(q) and its q-derivative, from the recurrence run in floating point.

    The last division by R_{N+1} is skipped so the value stays finite when
    gamma0 - (N + 1) = 0; the zero set is the same.
    """
    spec = _as_spec(spec)
    ctx = RecurrenceContext.from_spec(p, spec)
    fp = ctx.params
    qf = fp.alphabeta - q if spec.frame is Frame.ONE_MINUS_Z else q
    dqf = -1.0 if spec.frame is Frame.ONE_MINUS_Z else 1.0
    c2, c1, d2, d1 = 0.0, 1.0, 0.0, 0.0
    for n in range(1, N + 2):
        r = coeff_R(n, ctx) if n <= N else 1.0
        qn, pn = coeff_Q(n, ctx, q=qf), coeff_P(n, ctx)
        c = -(qn * c1 + pn * c2) / r
        d = -(qn * d1 - dqf * c1 + pn * d2) / r
        c2, c1, d2, d1 = c1, c, d1, d
    return c1, d1


def refine_root(p: HeunParameters, spec, N: int, q: float, iters: int = 8) -> float:
    """Newton-polish a real terminating q against the recurrence itself.

    Roots of the monic polynomial inherit the rounding of its coefficients;
    this pushes c_{N+1}(q) down to the floor of the floating-point recurrence.
    """
    f, df = terminal_coefficient(p, spec, N, q)
    for _ in range(iters):
        if df == 0 or f == 0:
            break
        q_new = q - f / df
        f_new, df_new = terminal_coefficient(p, spec, N, q_new)
        if abs(f_new) >= abs(f):
            break
        q, f, df = q_new, f_new, df_new
    return q


def continued_fraction_residual(p: HeunParameters, spec, N: int, q=None):
    """Evaluate the terminating continued fraction Q_1 - R_1 P_2 / (Q_2 - ...).

    The fraction closes at depth N + 1 because ``P_{N+2} = 0``. ``q`` (scalar
    or array, in the original frame) overrides ``p.q``. Scalar evaluation
    raises ZeroDenominator when an intermediate denominator vanishes; array
    evaluation returns nan there instead.
    """
    spec = _as_spec(spec)
    ctx = RecurrenceContext.from_spec(p, spec)
    fp = ctx.params
    q = p.q if q is None else q
    scalar = np.ndim(q) == 0
    q = np.asarray(q, dtype=float)
    qf = fp.alphabeta - q if spec.frame is Frame.ONE_MINUS_Z else q
    value = coeff_Q(N + 1, ctx, q=qf)
    for n in range(N, 0, -1):
        if scalar and value == 0:
            raise ZeroDenominator(n + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = coeff_Q(n, ctx, q=qf) - coeff_RP(n + 1, ctx) / value
        if not scalar:
            value = np.where(np.isfinite(value), value, np.nan)
    return float(value) if scalar else value
