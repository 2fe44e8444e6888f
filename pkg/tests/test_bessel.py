import math

import numpy as np
import pytest
import scipy.special as sp

from hankel_lp import bessel as B


# ---------------------------------------------------------------------------
# independent oracles

def series_oracle(nu, x, terms=120):
    """Plain truncated power series, independent of the module's evaluator."""
    w = -(x / 2.0) ** 2
    term, acc = 1.0, 1.0
    for m in range(terms):
        term *= w / ((m + 1.0) * (nu + 1.0 + m))
        acc += term
    return acc


def bisect_oracle(nu, lo, hi, iters=200):
    flo = series_oracle(nu, lo)
    assert flo * series_oracle(nu, hi) < 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if flo * series_oracle(nu, mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# evaluation

def test_jbar_at_zero_is_one():
    for nu in (-0.9, -0.5, 0.0, 0.5, 2.7, 11.0):
        assert B.jbar_eval(nu, 0.0) == 1.0


def test_jbar_half_is_sinc():
    for z in (0.3, 1.0, math.pi, 7.7, 25.0, 200.0):
        assert B.jbar_eval(0.5, z).real == pytest.approx(math.sin(z) / z, abs=1e-14, rel=1e-13)
    assert abs(B.jbar_eval(0.5, math.pi)) < 1e-15


def test_jbar_minus_half_is_cos():
    for z in (0.4, 2.0, 10.0, 60.0):
        assert B.jbar_eval(-0.5, z).real == pytest.approx(math.cos(z), rel=1e-13, abs=1e-14)


def test_first_zero_of_j0_bisection_oracle():
    root = bisect_oracle(0.0, 2.0, 3.0)
    assert root == pytest.approx(2.404825557695773, abs=1e-12)
    assert abs(B.jbar_eval(0.0, 2.404825557695773)) < 1e-10


def test_jbar_evenness_random_complex():
    rng = np.random.default_rng(20240817)
    for _ in range(100):
        x = rng.uniform(-30, 30)
        y = rng.uniform(-20, 20)
        nu = rng.uniform(-0.95, 6.0)
        z = complex(x, y)
        assert B.jbar_eval(nu, z) == B.jbar_eval(nu, -z)


def test_jbar_against_scipy_grid():
    for nu in (-0.9, -0.3, 0.0, 0.5, 1.0, 3.0, 6.2, 9.0):
        xs = np.linspace(0.05, 200.0, 411)
        ours = B._jbar_real(nu, xs)
        ref = sp.jv(nu, xs) * math.gamma(nu + 1) * (xs / 2.0) ** (-nu)
        envelope = np.maximum.accumulate(np.abs(ref)[::-1])[::-1]
        assert np.max(np.abs(ours - ref) / envelope) < 5e-12


def test_branch_continuity_at_cutoff():
    # both evaluation branches must agree at the crossover radius
    for nu in (-0.9, 0.0, 0.5, 1.0, 3.0, 6.0, 9.0):
        cut = B.series_cutoff(nu)
        s = float(B._series_eval(nu, np.array([cut]), np.longdouble)[0][0])
        a = float(B._asym_eval(nu, np.array([cut]))[0])
        assert abs(s - a) <= 1e-9 * max(1.0, abs(s))


def test_invalid_orders_rejected():
    with pytest.raises(B.EvaluationDomainError):
        B.jbar_eval(-1.0, 1.0)
    with pytest.raises(B.EvaluationDomainError):
        B.jbar_eval(-3.0, 1.0)
    # non-integer orders below -1 are fine for plain evaluation
    assert np.isfinite(B.jbar_eval(-1.5, 2.0).real)
    with pytest.raises(B.EvaluationDomainError):
        B.zero_table(-1.2, 3)
    with pytest.raises(B.EvaluationDomainError):
        B.jbar_deriv(-1.2, 1.0)


def test_imaginary_overflow_reported():
    with pytest.raises(B.EvaluationDomainError):
        B.jbar_eval(0.7, 80 + 60j)


def test_j_eval_closed_forms():
    # J_{1/2}(pi/2) = 2/pi
    assert B.j_eval(0.5, math.pi / 2) == pytest.approx(2.0 / math.pi, rel=1e-13)
    for x in (0.7, 3.3, 19.0):
        assert B.j_eval(0.0, x) == pytest.approx(B.jbar_eval(0.0, x).real, rel=1e-13)


def test_j_eval_first_zero_of_j1():
    root = bisect_oracle(1.0, 3.0, 4.5)
    assert root == pytest.approx(3.8317059702, abs=1e-9)
    assert abs(B.j_eval(1.0, 3.8317059702)) < 1e-9


# ---------------------------------------------------------------------------
# derivatives

def test_deriv_at_zero():
    for nu in (-0.5, 0.0, 1.3):
        assert B.jbar_deriv(nu, 0.0) == 0.0


def test_deriv_half_order_closed_form():
    z = math.pi / 2
    jbar32 = 3.0 / z**2 * (math.sin(z) / z - math.cos(z))
    expected = -(z / 3.0) * jbar32
    assert B.jbar_deriv(0.5, z).real == pytest.approx(expected, rel=1e-13)


def test_deriv_matches_finite_difference():
    h = 1e-6
    fd = (B.jbar_eval(0.0, 1 + h) - B.jbar_eval(0.0, 1 - h)) / (2 * h)
    assert B.jbar_deriv(0.0, 1.0).real == pytest.approx(fd.real, rel=1e-8)


def test_bessel_ode_residual():
    # jbar'' + (2 nu + 1)/z jbar' + jbar = 0, derivatives via the
    # order-raising identity applied twice
    rng = np.random.default_rng(7)
    for _ in range(50):
        z = rng.uniform(0.05, 20.0)
        nu = rng.uniform(-0.9, 4.0)
        j0 = B.jbar_eval(nu, z)
        j1 = B.jbar_eval(nu + 1, z)
        j2 = B.jbar_eval(nu + 2, z)
        d1 = -z / (2 * (nu + 1)) * j1
        d2 = -(j1 - z**2 / (2 * (nu + 2)) * j2) / (2 * (nu + 1))
        res = d2 + (2 * nu + 1) / z * d1 + j0
        assert abs(res) < 1e-8 * max(1.0, abs(j0))


# ---------------------------------------------------------------------------
# zeros

def test_half_order_zeros_exact():
    for m in range(1, 51):
        assert abs(B.bessel_zero(0.5, m) - m * math.pi) <= 1e-11
        assert abs(B.bessel_zero(-0.5, m) - (m - 0.5) * math.pi) <= 1e-11


def test_first_zero_oracle():
    assert B.bessel_zero(0.0, 1) == pytest.approx(2.404825557695773, abs=1e-10)


def test_zero_table_half_order():
    t = B.zero_table(0.5, 5)
    assert np.allclose(t.zeros, np.arange(1, 6) * math.pi, atol=1e-11, rtol=0)


def test_zero_table_brackets_straddle():
    for mu in (-0.9, 0.0, 1.7, 9.0):
        t = B.zero_table(mu, 30)
        lo = B._jbar_real(mu, t.brackets[:, 0])
        hi = B._jbar_real(mu, t.brackets[:, 1])
        assert np.all(np.sign(lo) * np.sign(hi) < 0)
        assert np.all(t.brackets[:, 0] < t.zeros) and np.all(t.zeros < t.brackets[:, 1])
        assert np.all(np.diff(t.zeros) > 0)


def test_cross_order_interlacing():
    for mu in (-0.9, 0.0, 0.5, 2.0):
        t0 = B.zero_table(mu, 25)
        t1 = B.zero_table(mu + 1.0, 25)
        assert B.check_interlacing(t0, t1)


def test_zero_asymptotic_deviation_bound():
    # |j(mu, m) - (m + mu/2 - 1/4) pi| * m stays bounded
    for mu in (-0.9, 0.0, 2.0):
        t = B.zero_table(mu, 200)
        m = np.arange(1, 201)
        dev = np.abs(t.zeros - (m + mu / 2 - 0.25) * np.pi) * m
        fit = np.max(dev[9:20])
        assert np.max(dev[9:]) <= max(3.0 * fit, 1e-6)


def test_zero_sign_pattern_of_raised_order():
    # sgn jbar(mu+1, j(mu, m)) = (-1)^(m+1)
    for mu in (-0.9, -0.3, 0.0, 0.5, 1.0, 3.0):
        t = B.zero_table(mu, 50)
        vals = B._jbar_real(mu + 1.0, t.zeros)
        assert np.all(np.sign(vals) == (-1.0) ** np.arange(2, 52))


def test_amplitude_of_raised_order_at_zeros():
    # sqrt(pi j / 2) |J_{mu+1}(j(mu, m))| stays within [0.9, 1.1]
    for mu in (-0.9, 0.0, 0.5, 1.0, 3.0):
        t = B.zero_table(mu, 100)
        for m in range(10, 101):
            j = t.zeros[m - 1]
            val = math.sqrt(math.pi * j / 2.0) * abs(B.j_eval(mu + 1.0, j))
            assert 0.9 <= val <= 1.1


def test_large_order_first_zeros():
    # seeds are poor for small ranks at large order; the repair path must
    # still deliver rank-correct zeros
    t = B.zero_table(9.0, 3)
    ref = sp.jn_zeros(9, 3)
    assert np.allclose(t.zeros, ref, rtol=1e-10)


def test_zero_accuracy_against_scipy():
    for order in (0, 1, 2):
        ref = sp.jn_zeros(order, 60)
        t = B.zero_table(float(order), 60)
        assert np.max(np.abs(t.zeros - ref) / ref) < 1e-12
