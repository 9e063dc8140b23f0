"""Heun equation parameters and the parameter maps between equivalent equations.

The general Heun equation

    u'' + (gamma/z + delta/(z-1) + epsilon/(z-a)) u'
        + (alpha*beta*z - q) / (z(z-1)(z-a)) u = 0

is described by seven real numbers tied together by the Fuchsian condition
``1 + alpha + beta = gamma + delta + epsilon``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import ComplexExponents, FuchsianViolation, SingularA, ValidationError

TOL = 1e-12


@dataclass(frozen=True)
class HeunParameters:
    gamma: float
    delta: float
    epsilon: float
    alpha: float
    beta: float
    q: float
    a: float

    def __post_init__(self):
        for name in ("gamma", "delta", "epsilon", "alpha", "beta", "q", "a"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if abs(self.a) <= TOL or abs(self.a - 1.0) <= TOL:
            raise SingularA(f"a={self.a} coincides with the singular point 0 or 1")
        res = self.fuchsian_residual
        if abs(res) > TOL:
            raise FuchsianViolation(
                f"1 + alpha + beta - (gamma + delta + epsilon) = {res:.3e} exceeds {TOL:g}"
            )

    @property
    def fuchsian_residual(self) -> float:
        return 1.0 + self.alpha + self.beta - (self.gamma + self.delta + self.epsilon)

    @property
    def alphabeta(self) -> float:
        return self.alpha * self.beta

    def with_q(self, q: float) -> HeunParameters:
        return replace(self, q=q)

    def as_dict(self) -> dict[str, float]:
        return {
            "gamma": self.gamma,
            "delta": self.delta,
            "epsilon": self.epsilon,
            "alpha": self.alpha,
            "beta": self.beta,
            "q": self.q,
            "a": self.a,
        }

    @classmethod
    def from_dict(cls, d) -> HeunParameters:
        missing = [k for k in ("gamma", "delta", "epsilon", "alpha", "beta", "q", "a") if k not in d]
        if missing:
            raise ValidationError(f"parameter document lacks field(s): {', '.join(missing)}")
        return cls(**{k: d[k] for k in ("gamma", "delta", "epsilon", "alpha", "beta", "q", "a")})


def make_params(gamma, delta, epsilon, alpha, beta, q, a) -> HeunParameters:
    """Build a validated parameter record; raises FuchsianViolation or SingularA."""
    return HeunParameters(gamma, delta, epsilon, alpha, beta, q, a)


def derive_delta(gamma: float, epsilon: float, alpha: float, beta: float) -> float:
    """The delta that satisfies the Fuchsian condition for the other exponents."""
    return 1.0 + alpha + beta - gamma - epsilon


def derive_epsilon(gamma: float, delta: float, alpha: float, beta: float) -> float:
    return 1.0 + alpha + beta - gamma - delta


def exponent_pair(total: float, product: float, hint: tuple[float, float] | None = None):
    """Roots of ``x**2 - total*x + product`` as a real pair.

    Raises ComplexExponents when the discriminant is negative. When ``hint``
    already satisfies both constraints to tolerance it is returned as is; this
    keeps the pair exact where the quadratic formula would lose digits near a
    double root.
    """
    disc = total * total - 4.0 * product
    scale = max(1.0, total * total, abs(product))
    if disc < -TOL * scale:
        raise ComplexExponents(
            f"exponents with sum {total} and product {product} are complex (discriminant {disc:.3e})"
        )
    if hint is not None:
        x, y = hint
        if abs(x + y - total) <= TOL * max(1.0, abs(total)) and abs(x * y - product) <= 1e-10 * scale:
            return float(x), float(y)
    root = math.sqrt(max(disc, 0.0))
    big = 0.5 * (total + math.copysign(root, total))
    if big == 0.0:
        return 0.0, 0.0
    return big, product / big


def map_to_one_minus_z(p: HeunParameters) -> HeunParameters:
    """Parameters of the equation obeyed by ``u(1 - x)`` as a function of ``x``."""
    return HeunParameters(
        gamma=p.delta,
        delta=p.gamma,
        epsilon=p.epsilon,
        alpha=p.alpha,
        beta=p.beta,
        q=-p.q + p.alphabeta,
        a=1.0 - p.a,
    )


def map_positive_epsilon(p: HeunParameters) -> HeunParameters:
    """Parameters of the equation for ``v`` where ``u = (z - a)**(1 - epsilon) * v``.

    The new exponent at ``z = a`` is ``2 - epsilon``; only the product of the new
    alpha and beta is fixed by the transformation, the pair is resolved through
    the Fuchsian sum.
    """
    shift = p.epsilon - 1.0
    product = p.alphabeta - shift * (p.gamma + p.delta)
    total = p.alpha + p.beta - 2.0 * shift
    alpha1, beta1 = exponent_pair(total, product, hint=(p.alpha - shift, p.beta - shift))
    return HeunParameters(
        gamma=p.gamma,
        delta=p.delta,
        epsilon=2.0 - p.epsilon,
        alpha=alpha1,
        beta=beta1,
        q=p.q - p.gamma * shift,
        a=p.a,
    )


def map_one_minus_delta_transform(p: HeunParameters) -> HeunParameters:
    """Parameters of the equation for ``v`` where ``u = (1 - z)**(1 - delta) * v``."""
    shift = p.delta - 1.0
    product = p.alphabeta - shift * (p.gamma + p.epsilon)
    total = p.alpha + p.beta - 2.0 * shift
    alpha1, beta1 = exponent_pair(total, product, hint=(p.alpha - shift, p.beta - shift))
    return HeunParameters(
        gamma=p.gamma,
        delta=2.0 - p.delta,
        epsilon=p.epsilon,
        alpha=alpha1,
        beta=beta1,
        q=p.q - p.a * p.gamma * shift,
        a=p.a,
    )


class Gamma0(str, enum.Enum):
    """Which parameter seeds the lower hypergeometric parameter ``gamma0 - n``."""

    GAMMA = "gamma"
    ALPHA = "alpha"
    BETA = "beta"


class Frame(str, enum.Enum):
    DIRECT_Z = "DirectZ"
    ONE_MINUS_Z = "OneMinusZ"


@dataclass(frozen=True)
class Truncated:
    K: int

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise ValidationError(f"truncation order K must be a positive integer, got {self.K!r}")


@dataclass(frozen=True)
class Terminating:
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 0:
            raise ValidationError(f"termination order N must be a nonnegative integer, got {self.N!r}")


@dataclass(frozen=True)
class ExpansionSpec:
    gamma0_choice: Gamma0 = Gamma0.GAMMA
    frame: Frame = Frame.DIRECT_Z
    mode: Truncated | Terminating = Terminating(0)

    def __post_init__(self):
        object.__setattr__(self, "gamma0_choice", Gamma0(self.gamma0_choice))
        object.__setattr__(self, "frame", Frame(self.frame))


def frame_params(p: HeunParameters, frame: Frame) -> HeunParameters:
    """The parameters seen by the expansion in the given frame."""
    return p if Frame(frame) is Frame.DIRECT_Z else map_to_one_minus_z(p)


def resolve_gamma0(p: HeunParameters, choice: Gamma0) -> float:
    choice = Gamma0(choice)
    if choice is Gamma0.GAMMA:
        return p.gamma
    if choice is Gamma0.ALPHA:
        return p.alpha
    return p.beta
