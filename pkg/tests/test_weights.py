import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from hankel_lp import weights as W


def soft_weight(nu):
    """f(t) = 2 (nu+1) t^(nu+1/2); its k-th moment is (nu+1)/(k+nu+1)."""
    return W.BetaPower(amplitude=2 * (nu + 1), p=0.0, q=nu + 0.5)


def onef2_weight(a, b, c):
    """Weight whose transform of order c-1 has the 1F2(a; b, c) coefficients."""
    amp = 2.0 / math.exp(math.lgamma(a) + math.lgamma(b - a) - math.lgamma(b))
    return W.BetaPower(amplitude=amp, p=b - a - 1.0, q=2 * a - c - 0.5)


# ---------------------------------------------------------------------------
# integrability

def test_integrability_soft_weight():
    assert W.validate_integrability(soft_weight(0.0), 0.0).ok


def test_integrability_divergent_edge():
    f = W.BetaPower(amplitude=1.0, p=-1.5, q=0.0)
    for nu in (-0.7, 0.0, 2.0):
        assert not W.validate_integrability(f, nu).ok


def test_integrability_onef2_example():
    a, b, c = 1.0, 2.0, 1.5
    f = onef2_weight(a, b, c)
    assert W.validate_integrability(f, c - 1.0).ok
    # q + nu + 1/2 = 2a - 1 > -1 exactly when a > 0
    assert f.q + (c - 1.0) + 0.5 == pytest.approx(2 * a - 1.0)


def test_moment_requires_integrability():
    f = W.BetaPower(amplitude=1.0, p=0.0, q=-2.0)
    with pytest.raises(W.IntegrabilityError):
        W.moment(f, 0.0, 0)


# ---------------------------------------------------------------------------
# moments

def test_soft_weight_moments_closed_form():
    for nu in (-0.5, 0.0, 0.5, 2.0):
        f = soft_weight(nu)
        for k in range(6):
            assert W.moment(f, nu, k) == pytest.approx((nu + 1) / (k + nu + 1), rel=1e-13)


def test_onef2_weight_moments_are_pochhammer_ratios():
    a, b, c = 1.0, 2.0, 1.5
    f = onef2_weight(a, b, c)
    nu = c - 1.0
    ratio = 1.0
    for k in range(31):
        if k:
            ratio *= (a + k - 1) / (b + k - 1)
        assert W.moment(f, nu, k) == pytest.approx(ratio, rel=1e-10, abs=1e-12)


def test_unit_step_moments():
    f = W.Step(breakpoints=(), values=(1.0,))
    for k in range(5):
        assert W.moment(f, -0.5, k) == pytest.approx(1.0 / (2 * k + 1), rel=1e-14)


def test_step_moments_exact_vs_quadrature():
    f = W.Step(breakpoints=(Fraction(1, 3), Fraction(2, 3)), values=(1.0, 3.0, 2.0))
    for nu in (-0.5, 0.8):
        for k in (0, 2):
            e = 2 * k + nu + 0.5
            ref, _ = quad(lambda t: t**e * float(f(t)), 0, 1,
                          points=[1 / 3, 2 / 3], limit=100)
            assert W.moment(f, nu, k) == pytest.approx(ref, rel=1e-11)


def test_betapower_moments_match_quadrature():
    rng = np.random.default_rng(11)
    for _ in range(20):
        p, q = rng.uniform(-0.9, 3.0, size=2)
        f = W.BetaPower(amplitude=1.7, p=p, q=q)
        nu = rng.uniform(-0.4, 2.0)
        k = rng.integers(0, 4)
        e = 2 * k + nu + 0.5
        ref, _ = quad(lambda t: t**e * 1.7 * (1 - t * t) ** p * t**q, 0, 1,
                      limit=300, epsabs=1e-13, epsrel=1e-13)
        assert W.moment(f, nu, int(k)) == pytest.approx(ref, rel=1e-9)


def test_moment_sequence_strictly_decreasing():
    for f, nu in ((soft_weight(0.3), 0.3),
                  (W.Step(breakpoints=(Fraction(1, 2),), values=(1.0, 100.0)), 0.5),
                  (W.Tabulated(nodes=(0.0, 0.4, 1.0), values=(1.0, 2.0, 1.5)), 0.0)):
        seq = W.moment_sequence(f, nu, 12)
        assert np.all(seq.beta > 0)
        assert np.all(np.diff(seq.beta) < 0)


# ---------------------------------------------------------------------------
# exceptional-case detection

def test_betapower_never_exceptional():
    assert not W.is_exceptional(soft_weight(0.0))


def test_rational_step_is_exceptional():
    f = W.Step(breakpoints=(Fraction(1, 3), Fraction(2, 3)), values=(1, 2, 3))
    assert W.is_exceptional(f)


def test_irrational_breakpoint_not_exceptional():
    f = W.Step(breakpoints=(1 / math.sqrt(2),), values=(1.0, 2.0))
    assert not W.is_exceptional(f)


# ---------------------------------------------------------------------------
# monotonicity

def test_soft_weight_monotone():
    for nu in (-0.5, 0.0, 1.0):
        assert W.monotonicity_check(soft_weight(nu), 0.0)


def test_onef2_weight_monotone_condition():
    # increasing for b <= a+1 and a - 2c + 2 >= 0 at exponent 3/2 - 3|nu|
    a, b, c = 2.0, 2.5, 1.8
    assert b <= a + 1 and a - 2 * c + 2 >= 0
    nu = c - 1.0
    assert W.monotonicity_check(onef2_weight(a, b, c), 1.5 - 3 * abs(nu))


def test_positive_p_is_decreasing_near_one():
    f = W.BetaPower(amplitude=1.0, p=2.0, q=0.0)
    assert not W.monotonicity_check(f, 0.0)


def test_step_monotonicity_sampling():
    up = W.Step(breakpoints=(Fraction(1, 2),), values=(1.0, 2.0))
    down = W.Step(breakpoints=(Fraction(1, 2),), values=(2.0, 1.0))
    assert W.monotonicity_check(up, 0.0)
    assert not W.monotonicity_check(down, 0.0)
    assert not W.monotonicity_check(up, -1.0)  # negative power decays inside pieces


# ---------------------------------------------------------------------------
# grammar

def test_parse_beta():
    f = W.parse_weight("beta:2,0,0.5")
    assert isinstance(f, W.BetaPower) and f.amplitude == 2.0 and f.q == 0.5


def test_parse_step_rational_and_final_segment():
    f = W.parse_weight("step:1/3,1;2/3,5;1,2")
    assert isinstance(f, W.Step)
    assert f.breakpoints == (Fraction(1, 3), Fraction(2, 3))
    assert f.values == (1.0, 5.0, 2.0)
    assert W.is_exceptional(f)


def test_parse_table(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("t,f\n0.0,1.0\n0.5,2.0\n1.0,1.5\n")
    f = W.parse_weight(f"table:{path}")
    assert isinstance(f, W.Tabulated)
    assert f(np.array([0.5]))[0] == pytest.approx(2.0)


def test_parse_rejects_bad_grammar():
    with pytest.raises(ValueError):
        W.parse_weight("beta:1,2")
    with pytest.raises(ValueError):
        W.parse_weight("step:0.5,1")  # does not end at t = 1
    with pytest.raises(ValueError):
        W.parse_weight("box:1")
