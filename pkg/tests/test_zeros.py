import math
from fractions import Fraction

import numpy as np
import pytest

from hankel_lp import bessel as B, hankel as H, weights as W, zeros as Z


def ex1_spec(nu, lam):
    amp = 2.0 / math.exp(
        math.lgamma(lam - nu) + math.lgamma(nu + 1) - math.lgamma(lam + 1)
    )
    return H.TransformSpec(nu, W.BetaPower(amp, lam - nu - 1.0, nu + 0.5))


def onef2_spec(a, b, c):
    """Transform of order c-1 whose coefficients are (a)_k / ((b)_k (c)_k k!)."""
    amp = 2.0 / math.exp(math.lgamma(a) + math.lgamma(b - a) - math.lgamma(b))
    return H.TransformSpec(c - 1.0, W.BetaPower(amp, b - a - 1.0, 2 * a - c - 0.5))


# ---------------------------------------------------------------------------
# sufficiency

def test_sufficiency_increasing_weight_small_order():
    spec = H.TransformSpec(0.0, W.BetaPower(1.0, 0.0, 1.0))
    assert Z.sturm_sufficiency(spec).guaranteed


def test_sufficiency_rational_step_excluded_at_half():
    spec = H.TransformSpec(0.5, W.Step((Fraction(1, 2),), (1.0, 2.0)))
    verdict = Z.sturm_sufficiency(spec)
    assert not verdict.guaranteed
    assert "exceptional" in verdict.reason


def test_sufficiency_large_order_soft_weight_fails():
    # t^(3/2 - 6) * t^(5/2) = t^-2 decreases, so no guarantee at order 2
    verdict = Z.sturm_sufficiency(H.soft_spec(2.0))
    assert not verdict.guaranteed


def test_sufficiency_large_order_positive_case():
    # order 0.8: exponent 3/2 - 2.4 = -0.9; q = 1.3 keeps t^(e+q) increasing
    spec = H.TransformSpec(0.8, W.BetaPower(1.0, 0.0, 1.3))
    assert Z.sturm_sufficiency(spec).guaranteed


# ---------------------------------------------------------------------------
# sign sequences

def test_sign_sequence_soft_weight_all_positive():
    for nu in (0.5, 3.0):
        seq = Z.sign_sequence(H.soft_spec(nu), nu, 50)
        assert seq.verdict == "all_positive"
        assert seq.first_violation is None


def test_sign_sequence_guaranteed_implies_all_positive():
    spec = H.TransformSpec(0.3, W.BetaPower(1.0, -0.25, 0.7))
    assert Z.sturm_sufficiency(spec).guaranteed
    assert Z.sign_sequence(spec, 0.3, 50).verdict == "all_positive"


def test_sign_sequence_adversarial_step_mixed():
    # rational single-step weight with a 100:1 jump: the exceptional class;
    # the transform vanishes at every fourth node, breaking the pattern
    spec = H.TransformSpec(0.5, W.Step((Fraction(1, 2),), (1.0, 100.0)))
    seq = Z.sign_sequence(spec, 0.5, 50)
    assert seq.verdict == "mixed"
    assert seq.first_violation is not None and seq.first_violation <= 50


# ---------------------------------------------------------------------------
# localization

def test_locate_zeros_ex1_reduction():
    # transform is jbar(1, .): zeros j(1, m), bracketed by the order-0 zeros
    zl = Z.locate_zeros(ex1_spec(0.0, 1.0), 30)
    ref = B.zero_table(1.0, 30).zeros
    assert np.max(np.abs(zl.zeta - ref) / ref) < 1e-11
    j0 = B.zero_table(0.0, 31).zeros
    assert np.all((j0[:30] < zl.zeta) & (zl.zeta < j0[1:31]))


def test_locate_zeros_cosine_like_case():
    # unit weight at order -1/2: zeros at m pi inside ((m-1/2) pi, (m+1/2) pi)
    zl = Z.locate_zeros(H.TransformSpec(-0.5, W.BetaPower(1.0, 0.0, 0.0)), 12)
    m = np.arange(1, 13)
    assert np.max(np.abs(zl.zeta - m * math.pi)) < 1e-10
    assert np.allclose(zl.brackets[:, 1], (m + 0.5) * math.pi, rtol=1e-12)


def test_locate_zeros_simplicity_and_alternation():
    zl = Z.locate_zeros(onef2_spec(1.0, 1.8, 1.4), 40)
    assert np.all(zl.derivative_signs[1:] != zl.derivative_signs[:-1])


def test_locate_zeros_interlacing_valid_triple():
    # reality-region triple: zeros interlace with the order (c-1) kernel zeros
    zl = Z.locate_zeros(onef2_spec(1.0, 1.8, 1.4), 50)
    t = B.zero_table(0.4, 51).zeros
    assert np.all((t[:50] < zl.zeta) & (zl.zeta < t[1:51]))


def test_locate_zeros_count_exactness():
    # with M = count+1 kernel zeros on the table, the transform has exactly
    # M-1 zeros in (0, j_M) in the all-positive case and none elsewhere
    spec = ex1_spec(0.0, 1.0)
    count = 25
    zl = Z.locate_zeros(spec, count)
    j = B.zero_table(0.0, count + 1).zeros
    assert np.sum((zl.zeta > 0) & (zl.zeta < j[count])) == count
    grid = np.linspace(1e-3, j[count] * 0.999, 4000)
    vals = H._ht_eval_real_batch(spec, grid)
    crossings = np.sum(np.sign(vals[1:]) != np.sign(vals[:-1]))
    assert crossings == count  # no extra zeros hiding between brackets


def test_locate_zeros_refuses_mixed_pattern():
    spec = onef2_spec(1.0, 2.0, 1.5)  # Bessel-square point: double zeros
    with pytest.raises(Z.SignPatternError):
        Z.locate_zeros(spec, 10)


# ---------------------------------------------------------------------------
# power sums

def test_bessel_zero_square_sum():
    for mu in (0.0, 0.5, 2.0):
        s = Z.bessel_zero_square_sum(mu, 500)
        assert s == pytest.approx(1.0 / (4.0 * (mu + 1.0)), abs=1e-8)


def test_rayleigh_soft_weight_closed_forms():
    # zeros are j(nu+1, m): delta_0 = 1/(4 (nu+2))
    for nu in (0.0, 0.5):
        sums = Z.rayleigh_sums(H.soft_spec(nu), 4, zero_count=200)
        assert sums.delta[0] == pytest.approx(1.0 / (4.0 * (nu + 2.0)), abs=1e-9)
        assert np.max(np.abs(sums.delta - sums.delta_newton)) <= 1e-7


def test_rayleigh_delta1_closed_form():
    # second power sum for the order-0 soft weight via the moment formula
    nu = 0.0
    beta = [1.0 / (k + 1.0) for k in range(3)]
    expected = ((nu + 2) * beta[1] ** 2 - (nu + 1) * beta[0] * beta[2]) / (
        16 * (nu + 1) ** 2 * (nu + 2) * beta[0] ** 2
    )
    assert expected == pytest.approx(1.0 / 192.0, rel=1e-15)
    sums = Z.rayleigh_sums(H.soft_spec(nu), 1, zero_count=300)
    assert sums.delta[1] == pytest.approx(expected, abs=1e-9)
    assert sums.delta_newton[1] == pytest.approx(expected, rel=1e-10)


def test_rayleigh_newton_route_on_bessel_case():
    # recurrence validated against the exact inverse-square zero sums
    for mu in (0.3, 1.0):
        sums = Z.rayleigh_sums(H.soft_spec(mu - 1.0), 0)
        assert sums.delta_newton[0] == pytest.approx(1.0 / (4.0 * (mu + 1.0)), rel=1e-12)


def test_rayleigh_decreasing_and_positive():
    sums = Z.rayleigh_sums(H.soft_spec(0.5), 4, zero_count=150)
    assert np.all(sums.delta > 0)
    assert np.all(np.diff(sums.delta) < 0)


def test_rayleigh_degenerate_point_coefficient_route():
    # Bessel-square triple: localization refuses, the coefficient route
    # still delivers a/(4 b c) (double zeros counted with multiplicity)
    spec = onef2_spec(1.0, 2.0, 1.5)
    sums = Z.rayleigh_sums(spec, 2)
    assert sums.delta_direct is None
    assert sums.delta[0] == pytest.approx(1.0 / 12.0, rel=1e-12)
    with pytest.raises(Z.SignPatternError):
        Z.rayleigh_sums(spec, 2, zero_count=50)


def test_product_form_reconstruction():
    # ht(z) = beta0 * prod (1 - z^2/zeta_m^2) with a fitted tail factor
    spec = onef2_spec(1.0, 1.8, 1.4)
    zl = Z.locate_zeros(spec, 400)
    d0_tail = Z.tail_corrected_power_sum(zl.zeta, 2.0) - float(np.sum(zl.zeta**-2.0))
    d1_tail = Z.tail_corrected_power_sum(zl.zeta, 4.0) - float(np.sum(zl.zeta**-4.0))
    for z in (1.0, 2.5, 5.0):
        prod = spec.beta0 * np.prod(1.0 - z * z / zl.zeta**2)
        tail_factor = math.exp(-z * z * d0_tail - 0.5 * z**4 * d1_tail)
        ref = H.ht_eval(spec, z).real
        assert prod * tail_factor == pytest.approx(ref, abs=1e-4 * abs(spec.beta0))


# ---------------------------------------------------------------------------
# serialization

def test_zerolist_csv_roundtrip():
    zl = Z.locate_zeros(ex1_spec(0.0, 1.0), 12)
    text = Z.zerolist_to_csv(zl)
    assert text.splitlines()[0] == "m,lo,hi,zeta"
    back = Z.zerolist_from_csv(text)
    assert np.array_equal(back.zeta, zl.zeta)
    assert np.array_equal(back.brackets, zl.brackets)


def test_rayleigh_json():
    import json

    sums = Z.rayleigh_sums(H.soft_spec(0.0), 2, zero_count=100)
    payload = json.loads(Z.rayleigh_to_json(sums))
    assert payload["delta"][0] == pytest.approx(0.125, abs=1e-8)
    assert payload["delta_direct"] is not None
