"""Extremizer ratios, operator norms, scaling fits, and the q < p probe."""

import math

import numpy as np
import pytest

from paravg.cutoff import OperatorParams, average
from paravg.experiments import (
    ExponentPair,
    ScalingFit,
    box_average_counts,
    box_core_is_one,
    box_extremizer_ratio,
    delta_extremizer_ratio,
    norm_l1_linf,
    norm_l2_l2,
    random_ascent_lower_bound,
    rayleigh_quotient,
    scaling_fit,
    sharp_threshold,
    two_bump_separation_probe,
)
from paravg.lattice import box_indicator, delta, lp_norm, shift


def test_exponent_pair():
    assert ExponentPair(2.0).p_prime == 2.0
    assert abs(ExponentPair(1.5).p_prime - 3.0) < 1e-15
    assert sharp_threshold(2) == 5 / 3
    assert sharp_threshold(3) == 1.5
    with pytest.raises(ValueError):
        ExponentPair(1.0)


def test_box_counts_match_direct_average():
    for n, N in ((2, 3), (2, 5), (3, 2), (3, 3)):
        f = box_indicator((1,) * n, (2 * N,) * (n - 1) + (n * N * N,))
        af = average(f, OperatorParams.sharp(n, N))
        counts, lo = box_average_counts(n, N)
        scale = N ** (n - 1)
        it = np.nditer(counts, flags=["multi_index"])
        for v in it:
            x = tuple(i + l for i, l in zip(it.multi_index, lo))
            assert af(x) * scale == int(v)


def test_box_core_exactness():
    for n in (2, 3):
        for N in (1, 2, 3, 5, 8, 13, 16):
            assert box_core_is_one(n, N)


def test_box_ratio_lower_bound():
    # the core block alone gives ratio >= N^{(n+1)/p'} / |f|_p
    for n, N, p in ((2, 8, 1.8), (2, 16, 2.0), (3, 6, 1.7)):
        params = OperatorParams.sharp(n, N)
        ratio = box_extremizer_ratio(params, p)
        pp = p / (p - 1)
        lower = N ** ((n + 1) / pp) / (2 ** (n - 1) * n * N ** (n + 1)) ** (1 / p)
        assert ratio >= lower * (1 - 1e-12)


def test_delta_ratio_values():
    assert delta_extremizer_ratio(OperatorParams.sharp(2, 16), 2.0) == 0.25
    assert delta_extremizer_ratio(OperatorParams.sharp(2, 8), 1.0) == norm_l1_linf(
        OperatorParams.sharp(2, 8)
    )
    r = delta_extremizer_ratio(OperatorParams.sharp(3, 4), 2.0)
    assert abs(r - 4 ** (-1.0)) < 1e-15


def test_crossover_inequality():
    # -(n-1)/p <= -(n+1)(2/p - 1) exactly when p >= (n+3)/(n+1)
    for n in (2, 3):
        thr = sharp_threshold(n)
        for p in (1.2, 1.4, thr, 1.8, 2.0):
            delta_exp = -(n - 1) / p
            box_exp = -(n + 1) * (2 / p - 1)
            if p > thr + 1e-12:
                assert delta_exp < box_exp
            elif p < thr - 1e-12:
                assert delta_exp > box_exp
            else:
                assert abs(delta_exp - box_exp) < 1e-12


def test_crossover_measured_slopes():
    for n, Ns in ((2, [8, 16, 32, 64]), (3, [6, 8, 12, 16])):
        thr = sharp_threshold(n)
        above = scaling_fit(Ns, n, min(2.0, thr + 0.25), "box")
        below_delta = scaling_fit(Ns, n, thr - 0.25, "delta")
        below_box = scaling_fit(Ns, n, thr - 0.25, "box")
        # below the threshold the delta family decays slower (dominates)
        assert below_delta.slope > below_box.slope + 0.1
        assert above.residual <= 0.15


def test_norm_l1_linf():
    assert norm_l1_linf(OperatorParams.sharp(2, 8)) == 1 / 8
    assert norm_l1_linf(OperatorParams.sharp(3, 4)) == 1 / 16
    smooth = norm_l1_linf(OperatorParams.smooth(2, 8))
    assert smooth == 1 / 8  # max weight is 1 at k = 0


def test_norm_l2_l2_sharp_exact():
    rep = norm_l2_l2(OperatorParams.sharp(2, 16))
    assert rep.constant == 1.0
    assert rep.values["rayleigh_certificate"] >= 0.8


def test_norm_l2_l2_n3():
    rep = norm_l2_l2(OperatorParams.sharp(3, 6))
    assert rep.constant == 1.0
    assert rep.values["rayleigh_certificate"] >= 0.8


def test_norm_l2_l2_smooth_matches_mass():
    params = OperatorParams.smooth(2, 16)
    rep = norm_l2_l2(params)
    assert abs(rep.constant - params.cutoff.mass() / 16) < 1e-9
    assert rep.values["rayleigh_certificate"] >= 0.8 * rep.constant


def test_rayleigh_never_exceeds_norm():
    params = OperatorParams.sharp(2, 16)
    value = norm_l2_l2(params).constant
    rng = np.random.default_rng(5)
    for _ in range(25):
        pts = rng.integers(-32, 32, size=(6, 2))
        f = delta(tuple(map(int, pts[0])))
        for row in pts[1:]:
            f = f + float(rng.random()) * delta(tuple(map(int, row)))
        assert rayleigh_quotient(f, params) <= value + 1e-9


def test_ascent_properties():
    params = OperatorParams.sharp(2, 8)
    p = 1.8
    rep = random_ascent_lower_bound(params, p, seed=3, iters=80)
    box_r = box_extremizer_ratio(params, p)
    delta_r = delta_extremizer_ratio(params, p)
    assert rep.constant >= max(box_r, delta_r) - 1e-12
    assert rep.values["monotone"] == 1.0
    rep2 = random_ascent_lower_bound(params, p, seed=3, iters=80)
    assert rep2.constant == rep.constant
    rep3 = random_ascent_lower_bound(params, p, seed=4, iters=80)
    assert rep3.constant >= max(box_r, delta_r) - 1e-12


def test_scaling_fit_requires_four_scales():
    with pytest.raises(ValueError):
        ScalingFit.fit([8, 16, 32], [1, 2, 3], 0.0)


def test_scaling_fit_box_and_delta():
    Ns = [8, 16, 32, 64, 128]
    fit = scaling_fit(Ns, 2, 1.8, "box")
    assert abs(fit.slope + 1 / 3) <= 0.15
    fit = scaling_fit(Ns, 2, 2.0, "box")
    assert abs(fit.slope) <= 0.15
    fit = scaling_fit(Ns, 2, 5 / 3, "delta")
    assert abs(fit.slope + 3 / 5) <= 0.05
    fit = scaling_fit(Ns, 3, 2.0, "delta")
    assert abs(fit.slope + 1.0) <= 0.05


def test_interpolation_consistency():
    # measured box ratios obey the two-endpoint interpolation bound
    for N in (8, 16):
        params = OperatorParams.sharp(2, N)
        l1 = norm_l1_linf(params)
        l2 = norm_l2_l2(params).constant
        for p in (1.25, 1.5, 1.8):
            theta = 2 / p - 1
            bound = l1**theta * l2 ** (1 - theta)
            assert box_extremizer_ratio(params, p) <= bound * (1 + 1e-9)


def test_separation_probe_exact_gains():
    params = OperatorParams.sharp(2, 8)
    f = delta((0, 0))
    shifts = [(10 * 64, 0), (20 * 64, 0), (40 * 64, 0)]
    rep = two_bump_separation_probe(f, shifts, 2.0, 1.0, params)
    expected = 2 ** (1.0 - 0.5)
    for key, gain in rep.values.items():
        assert abs(gain - expected) <= 1e-12, key
    # q = p: no gain
    rep_eq = two_bump_separation_probe(f, shifts[:1], 2.0, 2.0, params)
    assert abs(list(rep_eq.values.values())[0] - 1.0) <= 1e-12


def test_separation_probe_power_sum_exactness():
    params = OperatorParams.sharp(2, 8)
    f = delta((0, 0))
    af = average(f, params)
    h = (640, 0)
    fh = f + shift(f, h)
    afh = af + shift(af, h)
    assert len(fh) == 2 * len(f) and len(afh) == 2 * len(af)
    assert lp_norm(fh, 2.0) == math.sqrt(2.0)
    # doubling at the power-sum level is exact: A(delta) has 8 equal values
    assert abs(lp_norm(afh, 1.0) - 2 * lp_norm(af, 1.0)) <= 4e-16


def test_separation_probe_overlap_flagged():
    # h = (1, 3) maps the averaged-delta point at k = 2 onto the one at k = 1
    params = OperatorParams.sharp(2, 4)
    f = delta((0, 0))
    rep = two_bump_separation_probe(f, [(1, 3)], 2.0, 1.0, params)
    assert math.isnan(list(rep.values.values())[0])
    assert "overlap" in rep.notes


def test_iterated_doubling_multiplies_gain():
    params = OperatorParams.sharp(2, 6)
    p, q = 2.0, 1.0
    f = delta((0, 0))
    af = average(f, params)
    base = lp_norm(af, q) / lp_norm(f, p)
    g = f
    ag = af
    for k in (1, 2):
        h = (10**k * 1000, 0)
        g = g + shift(g, h)
        ag = ag + shift(ag, h)
        ratio = lp_norm(ag, q) / lp_norm(g, p)
        assert abs(ratio / base - 2 ** (k * (1 / q - 1 / p))) <= 1e-12
