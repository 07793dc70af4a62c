"""Shared test utilities: seeded random cases and tolerance assertions."""

from __future__ import annotations

import numpy as np

from vawar.synth import (
    ConstantVolume,
    CyclePrice,
    GenConfig,
    HeavyTailVolume,
    WalkPrice,
    WhaleVolume,
    generate,
)
from vawar.tape import LagSpec, WindowSpec


def assert_close(a, b, rel, abs_floor=0.0, msg=""):
    """|a - b| <= max(rel * max(|a|, |b|), abs_floor)."""
    tol = max(rel * max(abs(a), abs(b)), abs_floor)
    assert abs(a - b) <= tol, (
        f"{msg}: {a!r} vs {b!r} (diff {a - b:.3e}, tol {tol:.3e})"
    )


def random_config(seed, ticks):
    """Deterministic, structurally varied generator config for one seed."""
    rng = np.random.default_rng(seed)
    kind = int(rng.integers(0, 4))
    if kind == 3:
        price = CyclePrice(
            base=float(rng.uniform(0.5, 150.0)),
            log_amplitude=float(rng.uniform(0.05, 0.4)),
            period=int(rng.integers(3, 17)),
        )
    else:
        price = WalkPrice(
            start=float(rng.uniform(0.5, 150.0)),
            log_vol=float(rng.uniform(0.01, 0.12)),
        )
    vkind = int(rng.integers(0, 4))
    if vkind == 0:
        volume = ConstantVolume(level=float(rng.uniform(0.5, 500.0)))
    elif vkind == 1:
        volume = WhaleVolume(
            base=float(rng.uniform(0.5, 50.0)),
            whale_volume=float(rng.uniform(1e3, 1e6)),
            position=int(rng.integers(0, ticks)),
        )
    else:
        volume = HeavyTailVolume(
            base=float(rng.uniform(0.5, 50.0)),
            shape=float(rng.uniform(1.5, 4.0)),
        )
    coupling = float(rng.uniform(-0.6, 0.6)) if int(rng.integers(0, 2)) else 0.0
    return GenConfig(ticks=ticks, seed=seed, price=price, volume=volume,
                     coupling=coupling)


def random_case(seed):
    """Seeded (tape, window, lags, lag2, n, m) with N in [2, 64]."""
    rng = np.random.default_rng(10_000_019 + seed)
    count = int(rng.integers(2, 65))
    lag1 = int(rng.integers(1, 5))
    lag2 = int(rng.integers(1, 5))
    shift = int(rng.integers(0, 5))
    start = max(lag1, lag2 + shift) + int(rng.integers(0, 3))
    ticks = start + count + int(rng.integers(0, 4))
    tape = generate(random_config(seed, ticks))
    n = int(rng.integers(1, 5))
    m = int(rng.integers(1, 5))
    return {
        "tape": tape,
        "window": WindowSpec(start=start, count=count),
        "lags": LagSpec(lag_l=lag1, window_shift_j=shift),
        "lag2": lag2,
        "n": n,
        "m": m,
    }


# ---------------------------------------------------------------------------
# Roundoff anchors for correlation-route comparisons.
#
# Every correlation is a difference of product expectations, and the closed
# forms route it through intermediates (corr_C, corr_CaU, ...) that can be
# orders of magnitude larger than the result (heavy-tailed volumes raised
# to degree 4 routinely amplify 1e6-1e8x).  Two float evaluations of
# algebraically identical formulas then agree only to roundoff of those
# intermediates.  The anchors below sum the positive magnitudes each route
# manipulates; tests use abs_floor = 1e-12 * anchor, which stays two orders
# below the stated 1e-10 relative tolerance whenever no amplification is
# present and degrades gracefully (and honestly) when it is.
# ---------------------------------------------------------------------------


def corr_r_anchor(pair):
    from vawar.correlations import paired_expectation
    from vawar.moments import adjusted_moments, freq_moment, price_moment

    w1, w2 = pair.window1, pair.window2
    cross_c = paired_expectation("value_value", pair)
    cross_ca = paired_expectation("adjvalue_adjvalue", pair)
    cross_p = paired_expectation("price_price", pair)
    cross_pa = paired_expectation("adjprice_adjprice", pair)
    c1, c2 = freq_moment(w1.values, 1), freq_moment(w2.values, 1)
    ca1, pa1 = adjusted_moments(w1, w1.lag_l, 1)
    ca2, pa2 = adjusted_moments(w2, w2.lag_l, 1)
    p1, p2 = price_moment(w1, 1), price_moment(w2, 1)
    r1r2 = (c1 / ca1) * (c2 / ca2)
    value_terms = (cross_c + c1 * c2) / cross_ca + r1r2 * (
        1.0 + ca1 * ca2 / cross_ca
    )
    price_terms = (cross_p + p1 * p2) / cross_pa + r1r2 * (
        1.0 + pa1 * pa2 / cross_pa
    )
    return value_terms + price_terms


def corr_ru_anchor(pair):
    from vawar.correlations import paired_expectation
    from vawar.moments import adjusted_moments, freq_moment

    w1, w2 = pair.window1, pair.window2
    cu = paired_expectation("value_volume", pair)
    c1 = freq_moment(w1.values, 1)
    u2 = freq_moment(w2.volumes, 1)
    ca1, _ = adjusted_moments(w1, w1.lag_l, 1)
    return (cu + c1 * u2) / ca1


def corr_rp_anchor(pair, n, m):
    from vawar.correlations import paired_expectation
    from vawar.moments import adjusted_moments, freq_moment

    w1, w2 = pair.window1, pair.window2
    cnm = paired_expectation("value_value", pair, degrees=(n, m))
    cau = paired_expectation("adjvalue_volume", pair, degrees=(n, m))
    c_n = freq_moment(w1.values, n)
    c2m = freq_moment(w2.values, m)
    u2m = freq_moment(w2.volumes, m)
    ca_n, _ = adjusted_moments(w1, w1.lag_l, n)
    w = (c_n / ca_n) * (c2m / u2m)
    return (cnm + c_n * c2m) / cau + w * (1.0 + ca_n * u2m / cau)


def corr_pau2_anchor(window):
    from vawar.correlations import paired_expectation, self_pair
    from vawar.moments import adjusted_moments, freq_moment

    cau = paired_expectation("adjvalue_volume", self_pair(window))
    _, pa1 = adjusted_moments(window, window.lag_l, 1)
    u2 = freq_moment(window.volumes, 2)
    return cau + pa1 * u2


def two_lag_anchor(window, lag1, lag2):
    from vawar.correlations import paired_expectation, self_pair
    from vawar.moments import adjusted_moments, freq_moment
    from vawar.tape import ResolvedWindow

    w1 = ResolvedWindow(window.tape, window.start, window.count, int(lag1))
    pair = self_pair(w1, lag2=int(lag2))
    cross_ca = paired_expectation("adjvalue_adjvalue", pair)
    c1 = freq_moment(w1.values, 1)
    c2 = freq_moment(w1.values, 2)
    ca1, _ = adjusted_moments(w1, lag1, 1)
    ca2, _ = adjusted_moments(pair.window2, lag2, 1)
    r1r2 = (c1 / ca1) * (c1 / ca2)
    return (c2 + c1 * c1) / cross_ca + r1r2 * (1.0 + ca1 * ca2 / cross_ca) + (
        c2 + c1 * c1
    ) / (ca1 * ca2)
