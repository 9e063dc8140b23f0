"""Random parameter sets for each termination class and the catalog sweep."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .accessory import q_polynomial, solve_q
from .errors import HeunError
from .params import (
    ExpansionSpec,
    Frame,
    Gamma0,
    HeunParameters,
    Terminating,
    derive_delta,
    map_positive_epsilon,
)
from .recurrence import RecurrenceContext, breakdown_threshold, coeff_R
from .solutions import build_finite_solution
from .verification import Verdict, verify_solution

BOUND = 5.0
A_RANGES = ((1.5, 4.0), (-3.0, -0.5))
# keep lower parameters and exponent differences this far from integers
RESONANCE_GAP = 0.1

CSV_HEADER = "class,N,seed,gamma,delta,epsilon,alpha,beta,a,root_index,q,residual_sup,verdict"
_CLASS_INDEX = {Gamma0.GAMMA: 0, Gamma0.ALPHA: 1, Gamma0.BETA: 2}


def _gap(x: float) -> float:
    return abs(x - round(x))


def sample_a(rng: np.random.Generator) -> float:
    lo, hi = A_RANGES[int(rng.integers(2))]
    return float(rng.uniform(lo, hi))


def _well_posed(p: HeunParameters, gamma0: Gamma0, N: int) -> bool:
    ctx = RecurrenceContext(p, {Gamma0.GAMMA: p.gamma, Gamma0.ALPHA: p.alpha, Gamma0.BETA: p.beta}[gamma0])
    for n in range(1, N + 3):
        try:
            if abs(coeff_R(n, ctx)) <= 1e3 * breakdown_threshold(n, p.a):
                return False
        except ZeroDivisionError:
            return False
    return True


def sample_parameters(rng: np.random.Generator, gamma0: Gamma0, N: int, bound: float = BOUND) -> HeunParameters:
    """Parameters (q = 0) satisfying the termination class of ``gamma0`` at order N.

    All exponents stay within ``bound``; the lower parameters of the 2F1 terms
    in both frames keep a gap from the integers so that no term hits a pole.
    """
    gamma0 = Gamma0(gamma0)
    for _ in range(10_000):
        a = sample_a(rng)
        if gamma0 is Gamma0.GAMMA:
            eps = -float(N)
            g, al, be = rng.uniform(-bound, bound, 3)
            d = derive_delta(g, eps, al, be)
            lowers = (g, d)
        else:
            g, d, eps = rng.uniform(-bound, bound, 3)
            lead = eps + g + N
            other = d - 1.0 - N
            al, be = (lead, other) if gamma0 is Gamma0.ALPHA else (other, lead)
            lowers = (g, lead, lead - other, g + eps)
        values = (g, d, eps, al, be)
        if max(abs(v) for v in values) > bound:
            continue
        if min(_gap(x) for x in lowers) < RESONANCE_GAP:
            continue
        p = HeunParameters(float(g), float(d), float(eps), float(al), float(be), 0.0, a)
        if _well_posed(p, gamma0, N):
            return p
    raise RuntimeError("could not sample a well-posed parameter set")


def sample_positive_epsilon(rng: np.random.Generator, eps: int, bound: float = BOUND) -> HeunParameters:
    """Parameters with integer epsilon >= 2 (q = 0); beta follows from the Fuchsian condition."""
    for _ in range(10_000):
        a = sample_a(rng)
        g, d, al = rng.uniform(-bound, bound, 3)
        be = g + d + eps - 1.0 - al
        if abs(be) > bound or min(_gap(g), _gap(d)) < RESONANCE_GAP:
            continue
        p = HeunParameters(float(g), float(d), float(eps), float(al), float(be), 0.0, a)
        if _well_posed(map_positive_epsilon(p), Gamma0.GAMMA, eps - 2):
            return p
    raise RuntimeError("could not sample a well-posed parameter set")


@dataclass(frozen=True)
class CatalogRow:
    cls: Gamma0
    N: int
    seed: int
    params: HeunParameters
    root_index: int
    q: complex | None
    residual_sup: float | None
    verdict: Verdict

    def to_csv(self) -> str:
        p = self.params
        if self.q is None:
            q = ""
        elif self.q.imag == 0.0:
            q = _fmt(self.q.real)
        else:
            q = f"{_fmt(self.q.real)}{'+' if self.q.imag >= 0 else '-'}{_fmt(abs(self.q.imag))}j"
        res = "" if self.residual_sup is None or not math.isfinite(self.residual_sup) else _fmt(self.residual_sup)
        fields = [
            self.cls.value,
            str(self.N),
            str(self.seed),
            *(_fmt(v) for v in (p.gamma, p.delta, p.epsilon, p.alpha, p.beta, p.a)),
            str(self.root_index),
            q,
            res,
            self.verdict.value,
        ]
        return ",".join(fields)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def case_rng(seed: int, gamma0: Gamma0, N: int) -> np.random.Generator:
    return np.random.default_rng([seed, _CLASS_INDEX[Gamma0(gamma0)], N])


def run_case(job: tuple[Gamma0, int, int]) -> list[CatalogRow]:
    """Sample one parameter set and verify the solution at every terminating q."""
    gamma0, N, seed = job
    gamma0 = Gamma0(gamma0)
    p = sample_parameters(case_rng(seed, gamma0, N), gamma0, N)
    spec = ExpansionSpec(gamma0, Frame.DIRECT_Z, Terminating(N))
    try:
        roots = solve_q(q_polynomial(p, spec, N))
    except HeunError:
        return [CatalogRow(gamma0, N, seed, p, i, None, None, Verdict.INCONCLUSIVE) for i in range(N + 1)]
    rows = []
    for i, root in enumerate(roots):
        if not root.is_real:
            rows.append(CatalogRow(gamma0, N, seed, p, i, root.value, None, Verdict.INCONCLUSIVE))
            continue
        try:
            form = build_finite_solution(p, spec, root.real)
            report = verify_solution(form)
            rows.append(CatalogRow(gamma0, N, seed, form.params, i, root.value, report.residual_sup, report.verdict))
        except HeunError:
            rows.append(CatalogRow(gamma0, N, seed, p.with_q(root.real), i, root.value, None, Verdict.INCONCLUSIVE))
    return rows


def catalog_rows(classes, n_range, seeds, workers: int = 1) -> list[CatalogRow]:
    """Rows ordered by (class, N, seed, root) regardless of worker completion order."""
    jobs = [(Gamma0(c), N, s) for c in classes for N in n_range for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run_case, jobs))
    else:
        chunks = [run_case(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]


def catalog_csv(rows) -> str:
    return "\n".join([CSV_HEADER, *(r.to_csv() for r in rows)]) + "\n"
