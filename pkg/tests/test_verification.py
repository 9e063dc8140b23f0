import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heunseries import (
    DomainError,
    Verdict,
    build_finite_solution,
    build_second_solution,
    evaluate,
    heun_residual,
    hyp2f1,
    hyp2f1_derivative,
    integrate_heun,
    make_params,
    q_polynomial,
    solve_q,
    verify_solution,
    wronskian,
)
from heunseries.params import ExpansionSpec, Frame, Gamma0, Terminating
from heunseries.solutions import Base, Prefactor, SolutionForm, Term
from heunseries.verification import oracle_interval
from tests.conftest import params_for


def spec(choice, N):
    return ExpansionSpec(Gamma0(choice), Frame.DIRECT_Z, Terminating(N))


def real_roots(p, s, N):
    return [r.real for r in solve_q(q_polynomial(p, s, N)) if r.is_real]


def single_term(p):
    """The eps = 0 solution 2F1(alpha, beta; gamma; z) with q = a alpha beta."""
    q = p.a * p.alphabeta
    return build_finite_solution(p, spec("gamma", 0), q)


@pytest.mark.parametrize("z", [0.2, 0.5, 0.8, 1.7, -1.3])
def test_constant_solves_reduced_equation(z):
    # alpha = 0 kills the alpha*beta z term; Fuchsian: 1 + 0 + 1.2 = 0.6 + 0.9 + 0.7
    p = make_params(0.6, 0.9, 0.7, 0.0, 1.2, 0.0, 3.0)
    assert heun_residual(1.0, 0.0, 0.0, p, z) == 0.0


@pytest.mark.parametrize("z", [0.3, 0.5, 0.7])
def test_power_of_one_minus_z(z):
    g, d, e, a = 0.7, 2.3, -0.4, 2.5
    p = make_params(g, d, e, g + e, d - 1.0, a * g * (d - 1.0), a)
    m = 1.0 - d
    u = (1.0 - z) ** m
    u1 = -m * (1.0 - z) ** (m - 1.0)
    u2 = m * (m - 1.0) * (1.0 - z) ** (m - 2.0)
    assert abs(heun_residual(u, u1, u2, p, z)) <= 1e-10


def test_non_solution_leaves_residual(rng):
    for _ in range(20):
        g, al, be, e = rng.uniform(-3, 3, 4)
        d = 1.0 + al + be - g - e
        p = make_params(g, d, e, al, be, rng.uniform(-3, 3), rng.uniform(1.5, 4))
        z = 0.4
        r = heun_residual(z * z, 2 * z, 2.0, p, z)
        assert abs(r) / (z * z + 2 * z + 2) > 1e-3


@pytest.mark.parametrize("z", [0.0, 0.005, 1.0, 0.995, 2.5, 2.509])
def test_residual_rejects_singular_points(z):
    p = make_params(0.7, 2.3, -0.4, 0.3, 1.3, 1.0, 2.5)
    with pytest.raises(DomainError):
        heun_residual(1.0, 0.0, 0.0, p, z)


def test_integrator_reproduces_gauss_function():
    for seed in range(10):
        p = params_for(Gamma0.GAMMA, 0, seed).with_q(0.0)
        p = p.with_q(p.a * p.alphabeta)
        al, be, g = p.alpha, p.beta, p.gamma
        traj = integrate_heun(p, 0.1, 0.4, hyp2f1(al, be, g, 0.1), hyp2f1_derivative(al, be, g, 0.1), samples=[0.1, 0.4])
        assert abs(traj.u[-1] - hyp2f1(al, be, g, 0.4)) <= 1e-8


def test_zero_initial_data():
    p = params_for(Gamma0.GAMMA, 1, 2)
    traj = integrate_heun(p, 0.1, 0.45, 0.0, 0.0)
    assert np.all(traj.u == 0.0) and np.all(traj.u_prime == 0.0)


def test_linearity():
    p = params_for(Gamma0.GAMMA, 1, 2).with_q(0.37)
    one = integrate_heun(p, 0.1, 0.45, 0.8, -0.3)
    two = integrate_heun(p, 0.1, 0.45, 1.6, -0.6)
    np.testing.assert_allclose(two.u, 2 * one.u, rtol=1e-12, atol=0)


def test_integration_interval_must_avoid_singular_points():
    p = make_params(0.7, 2.3, -0.4, 0.3, 1.3, 1.0, 0.3)
    with pytest.raises(DomainError):
        integrate_heun(p, 0.1, 0.45, 1.0, 0.0)


def test_integrator_convergence_trend():
    # Global error of an adaptive pair is not a monotone function of rtol
    # step by step; check the trend over a halving sweep instead.
    tols = 1e-4 / 2.0 ** np.arange(20)
    for seed in range(10):
        p = params_for(Gamma0.GAMMA, 0, seed)
        p = p.with_q(p.a * p.alphabeta)
        u0 = hyp2f1(p.alpha, p.beta, p.gamma, 0.1)
        d0 = hyp2f1_derivative(p.alpha, p.beta, p.gamma, 0.1)
        samples = np.linspace(0.1, 0.45, 8)
        ref = integrate_heun(p, 0.1, 0.45, u0, d0, samples=samples, rtol=1e-13, atol=1e-15).u
        dev = []
        for rt in tols:
            u = integrate_heun(p, 0.1, 0.45, u0, d0, samples=samples, rtol=rt, atol=rt * 1e-2).u
            dev.append(np.max(np.abs(u - ref) / np.maximum(1.0, np.abs(ref))))
        dev = np.asarray(dev)
        slope = np.polyfit(np.log(tols), np.log(dev), 1)[0]
        assert slope >= 0.25
        assert np.all(dev <= 50 * tols)
        assert np.max(dev[:10]) >= 4 * np.max(dev[10:])


@pytest.mark.parametrize("seed", range(5))
def test_single_term_passes(seed):
    form = single_term(params_for(Gamma0.GAMMA, 0, seed))
    report = verify_solution(form)
    assert report.verdict is Verdict.PASS
    assert report.residual_sup <= 1e-9
    assert report.oracle_max_deviation <= 1e-6


@pytest.mark.parametrize("seed", range(5))
def test_two_term_passes(seed):
    p = params_for(Gamma0.GAMMA, 1, seed)
    for q in real_roots(p, spec("gamma", 1), 1):
        report = verify_solution(build_finite_solution(p, spec("gamma", 1), q))
        assert report.verdict is Verdict.PASS


@pytest.mark.parametrize("N", [0, 1, 2])
def test_perturbed_q_fails(N):
    for seed in range(5):
        p = params_for(Gamma0.GAMMA, N, seed)
        for q in real_roots(p, spec("gamma", N), N):
            form = build_finite_solution(p, spec("gamma", N), q)
            report = verify_solution(form, form.params.with_q(form.params.q + 1e-3))
            assert report.verdict is Verdict.FAIL
            assert report.residual_sup > 1e-5


def test_pass_requires_both_thresholds():
    for seed in range(10):
        for N in (0, 1, 2):
            p = params_for(Gamma0.GAMMA, N, seed)
            for q in real_roots(p, spec("gamma", N), N):
                r = verify_solution(build_finite_solution(p, spec("gamma", N), q))
                if r.verdict is Verdict.PASS:
                    assert r.residual_sup <= 1e-8 and r.oracle_max_deviation <= 1e-6
                assert r.thresholds == {"residual": 1e-8, "oracle": 1e-6}


def test_unevaluable_form_is_inconclusive():
    p = make_params(0.7, 2.3, -0.4, 0.3, 1.3, 1.0, 2.5)
    form = SolutionForm(
        frame=Frame.DIRECT_Z,
        prefactors=(Prefactor(Base.Z_MINUS_A, 0.5),),
        terms=(Term(1.0, 0.7),),
        params=p,
        upper=(p.alpha, p.beta),
    )
    report = verify_solution(form)
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.reason


@pytest.mark.parametrize("a", [0.2, 0.3, 0.45])
def test_oracle_interval_avoids_a(a):
    p = make_params(0.7, 2.3, -0.4, 0.3, 1.3, 1.0, a)
    lo, hi = oracle_interval(p)
    assert hi - lo >= 0.2 and 0.0 < lo < hi < 1.0
    assert not (lo - 0.05 < a < hi + 0.05)


def test_oracle_interval_default():
    assert oracle_interval(make_params(0.7, 2.3, -0.4, 0.3, 1.3, 1.0, 2.5)) == (0.1, 0.45)
    assert oracle_interval(make_params(0.7, 2.3, -0.4, 0.3, 1.3, 1.0, -1.0)) == (0.1, 0.45)


def test_wronskian_of_itself_is_zero():
    form = single_term(params_for(Gamma0.GAMMA, 0, 1))
    for z in (0.2, 0.5, 0.8):
        assert wronskian(form, form, z) == 0.0


@pytest.mark.parametrize("c", [-2.5, 0.1, 7.0])
def test_wronskian_of_proportional_forms(c):
    p = params_for(Gamma0.GAMMA, 1, 2)
    form = build_finite_solution(p, spec("gamma", 1), real_roots(p, spec("gamma", 1), 1)[0])
    scaled = SolutionForm(
        frame=form.frame,
        prefactors=form.prefactors,
        terms=tuple(Term(c * t.coefficient, t.lower_parameter) for t in form.terms),
        params=form.params,
        upper=form.upper,
    )
    z = 0.5
    u, d, _ = evaluate(form, z)
    assert abs(wronskian(form, scaled, z)) <= 1e-13 * abs(c) * (u * u + d * d)


def test_wronskian_direct_vs_one_minus_z_nonzero():
    p = params_for(Gamma0.GAMMA, 1, 5)
    for q in real_roots(p, spec("gamma", 1), 1):
        first = build_finite_solution(p, spec("gamma", 1), q)
        second = build_second_solution(p, first.params.q)
        assert abs(wronskian(first, second, 0.5)) > 1e-8


@pytest.mark.parametrize("seed", range(4))
def test_abel_identity(seed):
    p = params_for(Gamma0.GAMMA, 1, seed)
    q = real_roots(p, spec("gamma", 1), 1)[0]
    first = build_finite_solution(p, spec("gamma", 1), q)
    second = build_second_solution(p, first.params.q)
    pq = first.params
    h = 1e-4
    for z in (0.15, 0.3, 0.5, 0.7, 0.85):
        if abs(z - pq.a) < 0.05:
            continue
        lnw = lambda x: math.log(abs(wronskian(first, second, x)))  # noqa: E731
        fd = (lnw(z + h) - lnw(z - h)) / (2 * h)
        expected = -(pq.gamma / z + pq.delta / (z - 1.0) + pq.epsilon / (z - pq.a))
        assert abs(fd - expected) <= 1e-5 * max(1.0, abs(expected))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2))
def test_pass_invariant_property(seed, N):
    p = params_for(Gamma0.GAMMA, N, seed)
    for q in real_roots(p, spec("gamma", N), N):
        r = verify_solution(build_finite_solution(p, spec("gamma", N), q))
        assert (r.verdict is Verdict.PASS) == (
            r.residual_sup <= 1e-8 and r.oracle_max_deviation is not None and r.oracle_max_deviation <= 1e-6
        )
