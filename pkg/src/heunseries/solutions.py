"""Assembly and evaluation of closed-form Heun solutions.

A :class:`SolutionForm` is a product of power prefactors and a finite sum of
Gauss hypergeometric terms ``c_n 2F1(alpha, beta; lower_n; x)`` where ``x``
is ``z`` or ``1 - z`` depending on the frame.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .errors import DomainError, NotTerminated, ValidationError, WrongGamma0
from .gauss2f1 import hyp2f1_jet
from .params import (
    ExpansionSpec,
    Frame,
    Gamma0,
    HeunParameters,
    Terminating,
    map_positive_epsilon,
)
from .accessory import refine_root
from .recurrence import RecurrenceContext, generate_coefficients


class Base(str, enum.Enum):
    ONE_MINUS_Z = "OneMinusZ"
    Z_MINUS_A = "ZMinusA"


@dataclass(frozen=True)
class Prefactor:
    base: Base
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "base", Base(self.base))
        object.__setattr__(self, "exponent", float(self.exponent))


@dataclass(frozen=True)
class Term:
    """``coefficient * (1 - x)**one_minus_x_power * 2F1(upper; lower_parameter; x)``.

    ``upper`` defaults to the form's numerator pair.
    """

    coefficient: float
    lower_parameter: float
    upper: tuple[float, float] | None = None
    one_minus_x_power: float = 0.0


@dataclass(frozen=True)
class SolutionForm:
    frame: Frame
    prefactors: tuple[Prefactor, ...]
    terms: tuple[Term, ...]
    params: HeunParameters
    upper: tuple[float, float] = None
    gamma0: Gamma0 | None = None
    N: int | None = None
    alternate: SolutionForm | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.terms:
            raise ValidationError("a solution form needs at least one term")
        object.__setattr__(self, "frame", Frame(self.frame))
        if self.upper is None:
            object.__setattr__(self, "upper", (self.params.alpha, self.params.beta))
        object.__setattr__(self, "prefactors", tuple(self.prefactors))
        object.__setattr__(self, "terms", tuple(self.terms))

    def to_dict(self) -> dict:
        terms = []
        for t in self.terms:
            d = {"coefficient": t.coefficient, "lower_parameter": t.lower_parameter}
            if t.upper is not None:
                d["upper"] = list(t.upper)
            if t.one_minus_x_power:
                d["one_minus_x_power"] = t.one_minus_x_power
            terms.append(d)
        out = {
            "frame": self.frame.value,
            "prefactors": [{"base": f.base.value, "exponent": f.exponent} for f in self.prefactors],
            "terms": terms,
            "upper": list(self.upper),
            "params": self.params.as_dict(),
            "gamma0": self.gamma0.value if self.gamma0 is not None else None,
            "N": self.N,
        }
        if self.alternate is not None:
            out["alternate"] = self.alternate.to_dict()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> SolutionForm:
        try:
            terms = tuple(
                Term(
                    coefficient=float(t["coefficient"]),
                    lower_parameter=float(t["lower_parameter"]),
                    upper=tuple(t["upper"]) if "upper" in t else None,
                    one_minus_x_power=float(t.get("one_minus_x_power", 0.0)),
                )
                for t in d["terms"]
            )
            return cls(
                frame=Frame(d["frame"]),
                prefactors=tuple(Prefactor(f["base"], f["exponent"]) for f in d.get("prefactors", [])),
                terms=terms,
                params=HeunParameters.from_dict(d["params"]),
                upper=tuple(d["upper"]) if d.get("upper") is not None else None,
                gamma0=Gamma0(d["gamma0"]) if d.get("gamma0") else None,
                N=d.get("N"),
                alternate=cls.from_dict(d["alternate"]) if d.get("alternate") else None,
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed solution document: {exc}") from None


def _power(base: float, exponent: float) -> float:
    if base > 0:
        return base**exponent
    if exponent == round(exponent):
        if base == 0 and exponent < 0:
            raise DomainError("prefactor base vanishes with a negative exponent")
        return base ** int(round(exponent))
    raise DomainError(f"prefactor base {base} is not positive for non-integer exponent {exponent}")


def _prefactor_jet(prefactors, z: float, a: float) -> tuple[float, float, float]:
    """Value and z-derivatives of prod base**exponent."""
    g, l1, l2 = 1.0, 0.0, 0.0
    for f in prefactors:
        if f.base is Base.ONE_MINUS_Z:
            b, db = 1.0 - z, -1.0
        else:
            b, db = z - a, 1.0
        g *= _power(b, f.exponent)
        if f.exponent != 0.0:
            l1 += f.exponent * db / b
            l2 -= f.exponent * (db / b) ** 2
    # g'/g = l1, g''/g = l1**2 + l2
    return g, g * l1, g * (l1 * l1 + l2)


def evaluate(form: SolutionForm, z: float) -> tuple[float, float, float]:
    """u, u' and u'' of the solution at ``z`` (derivatives with respect to z)."""
    z = float(z)
    if form.frame is Frame.DIRECT_Z:
        x, sign = z, 1.0
    else:
        x, sign = 1.0 - z, -1.0
    s = s1 = s2 = 0.0
    for t in form.terms:
        ua, ub = t.upper if t.upper is not None else form.upper
        f, f1, f2 = hyp2f1_jet(ua, ub, t.lower_parameter, x)
        m = t.one_minus_x_power
        if m:
            w = _power(1.0 - x, m)
            # (1-x)**m as a function of x
            w1 = -m * _power(1.0 - x, m - 1) if m != 0 else 0.0
            w2 = m * (m - 1) * _power(1.0 - x, m - 2) if m not in (0, 1) else 0.0
            f, f1, f2 = w * f, w1 * f + w * f1, w2 * f + 2 * w1 * f1 + w * f2
        s += t.coefficient * f
        s1 += t.coefficient * f1
        s2 += t.coefficient * f2
    s1 *= sign
    g, g1, g2 = _prefactor_jet(form.prefactors, z, form.params.a)
    return g * s, g1 * s + g * s1, g2 * s + 2.0 * g1 * s1 + g * s2


def _order(spec: ExpansionSpec) -> int:
    if not isinstance(spec.mode, Terminating):
        raise ValidationError("a finite solution needs a Terminating(N) expansion mode")
    return spec.mode.N


def build_finite_solution(p: HeunParameters, spec: ExpansionSpec, q_root: float) -> SolutionForm:
    """Finite-sum solution at a terminating accessory parameter.

    For gamma0 = alpha or beta the reduced ``(1-z)**(1-delta)`` polynomial form
    is attached as ``alternate``.
    """
    N = _order(spec)
    if isinstance(q_root, complex):
        if q_root.imag != 0.0:
            raise ValidationError("complex accessory parameters cannot be assembled into a real solution")
        q_root = q_root.real
    pq = p.with_q(float(q_root))
    ctx = RecurrenceContext.from_spec(pq, spec)
    seq = generate_coefficients(ctx, N + 2)
    if seq.terminated_at != N:
        # root accurate for the polynomial but not yet for the recurrence
        q_fine = refine_root(p, spec, N, float(q_root))
        if abs(q_fine - q_root) <= 1e-8 * (1.0 + abs(q_root)):
            pq = p.with_q(q_fine)
            ctx = RecurrenceContext.from_spec(pq, spec)
            seq = generate_coefficients(ctx, N + 2)
    if seq.terminated_at != N:
        raise NotTerminated(
            f"expansion did not terminate at N={N} for q={q_root} (terminated_at={seq.terminated_at})"
        )
    terms = tuple(Term(seq[n], ctx.gamma0 - n) for n in range(N + 1))
    form = SolutionForm(
        frame=spec.frame,
        prefactors=(),
        terms=terms,
        params=pq,
        gamma0=spec.gamma0_choice,
        N=N,
    )
    if spec.gamma0_choice is not Gamma0.GAMMA and spec.frame is Frame.DIRECT_Z:
        form = replace(form, alternate=reduce_to_polynomial_form(form))
    return form


def build_second_solution(p: HeunParameters, q_root: float) -> SolutionForm:
    """Companion solution as a sum of 2F1(alpha, beta; delta - n; 1 - z)."""
    N = round(-p.epsilon)
    if N < 0 or abs(p.epsilon + N) > 1e-9:
        raise ValidationError(f"the 1-z expansion terminates only for epsilon = -N, got {p.epsilon}")
    spec = ExpansionSpec(Gamma0.GAMMA, Frame.ONE_MINUS_Z, Terminating(int(N)))
    return build_finite_solution(p, spec, q_root)


def reduce_to_polynomial_form(form: SolutionForm) -> SolutionForm:
    """Rewrite a gamma0 = alpha (or beta) sum as (1-z)**(1-delta) times polynomials.

    Uses 2F1(a, b; a - n; z) = (1-z)**(-b-n) 2F1(-n, a - b - n; a - n; z)
    and pulls the common power (1-z)**(1-delta) out front.
    """
    if form.gamma0 not in (Gamma0.ALPHA, Gamma0.BETA):
        raise WrongGamma0("only gamma0 = alpha or beta expansions reduce to polynomial form")
    if form.frame is not Frame.DIRECT_Z:
        raise ValidationError("polynomial reduction is implemented for the direct-z frame only")
    ua, ub = form.upper
    lead, other = (ua, ub) if form.gamma0 is Gamma0.ALPHA else (ub, ua)
    head = 1.0 - form.params.delta
    terms = []
    for n, t in enumerate(form.terms):
        terms.append(
            Term(
                coefficient=t.coefficient,
                lower_parameter=t.lower_parameter,
                upper=(-float(n), lead - other - n),
                one_minus_x_power=-other - n - head,
            )
        )
    return replace(
        form,
        prefactors=form.prefactors + (Prefactor(Base.ONE_MINUS_Z, head),),
        terms=tuple(terms),
        alternate=None,
    )


def build_positive_epsilon_solution(p: HeunParameters, spec: ExpansionSpec, q_root_of_transformed: float) -> SolutionForm:
    """Solution for integer epsilon >= 2 via u = (z - a)**(1 - epsilon) v.

    ``spec`` describes the terminating expansion of the transformed equation
    (for gamma0 = gamma that is N = epsilon - 2). The returned form carries
    the original parameters with ``q = q1 + gamma (epsilon - 1)``.
    """
    k = round(p.epsilon)
    if k < 2 or abs(p.epsilon - k) > 1e-9:
        raise ValidationError(f"positive-epsilon lift needs integer epsilon >= 2, got {p.epsilon}")
    q1 = float(q_root_of_transformed.real if isinstance(q_root_of_transformed, complex) else q_root_of_transformed)
    p1 = map_positive_epsilon(p).with_q(q1)
    inner = build_finite_solution(p1, spec, q1)
    original = p.with_q(q1 + p.gamma * (p.epsilon - 1.0))
    lift = Prefactor(Base.Z_MINUS_A, 1.0 - p.epsilon)

    def lifted(f: SolutionForm | None):
        if f is None:
            return None
        return replace(f, prefactors=f.prefactors + (lift,), params=original, alternate=lifted(f.alternate))

    return lifted(inner)


__all__ = [
    "Base",
    "Prefactor",
    "Term",
    "SolutionForm",
    "evaluate",
    "build_finite_solution",
    "build_second_solution",
    "reduce_to_polynomial_form",
    "build_positive_epsilon_solution",
]
