"""Single-window statistics of a trade tape.

Two families of estimators live here.  Frequency-based moments are plain
arithmetic means of n-th powers over the window,

    C(t;n) = (1/N) sum C_i^n,      U(t;n) = (1/N) sum U_i^n.

Market-based price moments weight prices by the n-th power of volume,
generalizing VWAP,

    p(t;n) = sum p_i^n U_i^n / sum U_i^n = C(t;n) / U(t;n),

and return moments weight n-th powers of the price ratio r_i = p_i /
p_{i-l} by n-th powers of the adjusted value C_a(t_i) = p_{i-l} U_i,

    r(t,tau;n) = sum r_i^n C_a_i^n / sum C_a_i^n
               = C(t;n) / C_a(t,tau;n) = p(t;n) / p_a(t,tau;n).

The n = 1 return moment is the value weighted average return (VaWAR),
matching portfolio-style weighting of per-trade returns by trade value.

Numerical conditioning: prices are divided by the window VWAP and
volumes by the mean volume before powers are taken, and the scales are
restored afterwards.  The rescaling is exact in real arithmetic (see the
scale-invariance properties in the tests) and prevents overflow at high
orders or for extreme trade sizes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EmptySeries, NonFinite, OrderExceedsWindow, OrderTooLarge
from .tape import ResolvedWindow, require_history

#: Default cap on moment orders; higher orders warn but still compute.
DEFAULT_ORDER_CAP = 8

RATIO = "ratio"
CONVENTIONAL = "conventional"
LOG = "log"


def check_order(n, count=None, order_cap=DEFAULT_ORDER_CAP):
    """Validate a moment order: n >= 1, warn above the cap or window size."""
    n = int(n)
    if n < 1:
        raise ValueError(f"moment order must be >= 1, got {n}")
    if n > order_cap:
        warnings.warn(
            f"moment order {n} exceeds cap {order_cap}; result is computed anyway",
            OrderTooLarge,
            stacklevel=3,
        )
    if count is not None and n > count:
        warnings.warn(
            f"moment order {n} exceeds window size {count}; "
            "the estimate is statistically meaningless",
            OrderExceedsWindow,
            stacklevel=3,
        )
    return n


def freq_moment(xs, n, order_cap=DEFAULT_ORDER_CAP):
    """Frequency-based n-th moment (1/N) sum x_i^n of a series."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0:
        raise EmptySeries("cannot take a moment of an empty series")
    if not np.isfinite(xs).all():
        raise NonFinite("series contains non-finite entries")
    n = check_order(n, count=xs.size, order_cap=order_cap)
    scale = float(np.mean(np.abs(xs)))
    if scale == 0.0:
        return 0.0
    return scale**n * float(np.mean((xs / scale) ** n))


def _window_scales(window: ResolvedWindow):
    # VWAP and mean volume of the current window; conditioning scales only.
    p, u = window.prices, window.volumes
    vwap = float(np.sum(p * u) / np.sum(u))
    return vwap, float(np.mean(u))


def price_moment(window: ResolvedWindow, n, order_cap=DEFAULT_ORDER_CAP):
    """Market-based n-th price moment sum p^n U^n / sum U^n (VWAP at n=1)."""
    n = check_order(n, count=window.count, order_cap=order_cap)
    v, u = _window_scales(window)
    pn = (window.prices / v) ** n
    un = (window.volumes / u) ** n
    return v**n * float(np.sum(pn * un) / np.sum(un))


def adjusted_value_series(window: ResolvedWindow, lag_l):
    """Adjusted values C_a(t_i, tau) = p(t_i - tau) U(t_i) over the window."""
    require_history(window, lag_l)
    return window.lagged_prices(lag_l) * window.volumes


def adjusted_moments(window: ResolvedWindow, lag_l, n, order_cap=DEFAULT_ORDER_CAP):
    """Adjusted-value and adjusted-price n-th moments.

    Returns (C_a(t,tau;n), p_a(t,tau;n)) where

        C_a(t,tau;n) = (1/N) sum (p_{i-l} U_i)^n
        p_a(t,tau;n) = sum p_{i-l}^n U_i^n / sum U_i^n

    and C_a(t,tau;n) = p_a(t,tau;n) U(t;n) holds identically.
    """
    n = check_order(n, count=window.count, order_cap=order_cap)
    require_history(window, lag_l)
    v, u = _window_scales(window)
    pl = (window.lagged_prices(lag_l) / v) ** n
    un = (window.volumes / u) ** n
    ca = (v * u) ** n * float(np.mean(pl * un))
    pa = v**n * float(np.sum(pl * un) / np.sum(un))
    return ca, pa


def return_series(window: ResolvedWindow, lag_l, form=RATIO):
    """Per-tick returns over the window for lag tau = epsilon * lag_l.

    ``ratio`` gives p_i / p_{i-l}, ``conventional`` subtracts 1, and
    ``log`` gives ln p_i - ln p_{i-l}.
    """
    require_history(window, lag_l)
    ratio = window.prices / window.lagged_prices(lag_l)
    if form == RATIO:
        return ratio
    if form == CONVENTIONAL:
        return ratio - 1.0
    if form == LOG:
        return np.log(window.prices) - np.log(window.lagged_prices(lag_l))
    raise ValueError(f"unknown return form {form!r}")


def return_moment(window: ResolvedWindow, lag_l, n, order_cap=DEFAULT_ORDER_CAP):
    """Market-based n-th return moment, weighted by adjusted values.

    r(t,tau;n) = sum r_i^n C_a_i^n / sum C_a_i^n; n = 1 is VaWAR.
    """
    n = check_order(n, count=window.count, order_cap=order_cap)
    r = return_series(window, lag_l)
    ca = adjusted_value_series(window, lag_l)
    w = (ca / np.mean(ca)) ** n
    return float(np.sum(r**n * w) / np.sum(w))


@dataclass(frozen=True)
class Dispersions:
    """Second-minus-squared-first central dispersions of one window.

    The price dispersions use the market-based moments, whose volume
    weights differ between orders 1 and 2; they are reported raw and may
    legitimately be negative.
    """

    sigma_C2: float
    sigma_Ca2: float
    sigma_U2: float
    sigma_p2: float
    sigma_pa2: float

    def astuple(self):
        return (
            self.sigma_C2,
            self.sigma_Ca2,
            self.sigma_U2,
            self.sigma_p2,
            self.sigma_pa2,
        )


def dispersions(window: ResolvedWindow, lag_l) -> Dispersions:
    """Dispersions of values, adjusted values, volumes, and (market-based)
    prices and adjusted prices over the window."""
    c1 = freq_moment(window.values, 1)
    c2 = freq_moment(window.values, 2)
    u1 = freq_moment(window.volumes, 1)
    u2 = freq_moment(window.volumes, 2)
    p1 = price_moment(window, 1)
    p2 = price_moment(window, 2)
    ca1, pa1 = adjusted_moments(window, lag_l, 1)
    ca2, pa2 = adjusted_moments(window, lag_l, 2)
    return Dispersions(
        sigma_C2=c2 - c1 * c1,
        sigma_Ca2=ca2 - ca1 * ca1,
        sigma_U2=u2 - u1 * u1,
        sigma_p2=p2 - p1 * p1,
        sigma_pa2=pa2 - pa1 * pa1,
    )


@dataclass(frozen=True)
class ReturnVolatility:
    """Return volatility computed by three algebraically equal routes:
    from return moments, from value dispersions, and from price
    dispersions."""

    via_moments: float
    via_values: float
    via_prices: float

    @property
    def value(self):
        return self.via_moments


def return_volatility(window: ResolvedWindow, lag_l) -> ReturnVolatility:
    """sigma_r^2(t, tau) three ways.

    via_moments:  r(t,tau;2) - r(t,tau;1)^2
    via_values:   [sigma_C^2 Ca1^2 - sigma_Ca^2 C1^2] / [Ca1^2 Ca2]
    via_prices:   [sigma_p^2 pa1^2 - sigma_pa^2 p1^2] / [pa1^2 pa2]
    """
    r1 = return_moment(window, lag_l, 1)
    r2 = return_moment(window, lag_l, 2)
    d = dispersions(window, lag_l)
    c1 = freq_moment(window.values, 1)
    ca1, pa1 = adjusted_moments(window, lag_l, 1)
    ca2, pa2 = adjusted_moments(window, lag_l, 2)
    p1 = price_moment(window, 1)
    via_values = (d.sigma_C2 * ca1 * ca1 - d.sigma_Ca2 * c1 * c1) / (ca1 * ca1 * ca2)
    via_prices = (d.sigma_p2 * pa1 * pa1 - d.sigma_pa2 * p1 * p1) / (pa1 * pa1 * pa2)
    return ReturnVolatility(
        via_moments=r2 - r1 * r1,
        via_values=via_values,
        via_prices=via_prices,
    )


@dataclass(frozen=True)
class MomentReport:
    """All order-1..m statistics of one window plus its dispersions.

    Moment tuples are indexed by order - 1.  Serializes to a flat JSON
    object (``to_dict``) and to one CSV row per window (``csv_row``).
    """

    window_start: int
    window_count: int
    lag_l: int
    order_max: int
    value_moments: tuple
    volume_moments: tuple
    price_moments: tuple
    adj_value_moments: tuple
    adj_price_moments: tuple
    return_moments: tuple
    sigma_C2: float
    sigma_Ca2: float
    sigma_U2: float
    sigma_p2: float
    sigma_pa2: float
    sigma_r2: float

    def to_dict(self):
        return {
            "window_start": self.window_start,
            "window_count": self.window_count,
            "lag": self.lag_l,
            "order_max": self.order_max,
            "C_n": list(self.value_moments),
            "U_n": list(self.volume_moments),
            "p_n": list(self.price_moments),
            "Ca_n": list(self.adj_value_moments),
            "pa_n": list(self.adj_price_moments),
            "r_n": list(self.return_moments),
            "sigma_C2": self.sigma_C2,
            "sigma_Ca2": self.sigma_Ca2,
            "sigma_U2": self.sigma_U2,
            "sigma_p2": self.sigma_p2,
            "sigma_pa2": self.sigma_pa2,
            "sigma_r2": self.sigma_r2,
        }

    @staticmethod
    def csv_header(order_max):
        cols = ["window_start", "window_count", "lag", "order_max"]
        for key in ("C", "U", "p", "Ca", "pa", "r"):
            cols += [f"{key}_{n}" for n in range(1, order_max + 1)]
        cols += ["sigma_C2", "sigma_Ca2", "sigma_U2", "sigma_p2", "sigma_pa2",
                 "sigma_r2"]
        return cols

    def csv_row(self):
        row = [self.window_start, self.window_count, self.lag_l, self.order_max]
        for arr in (
            self.value_moments,
            self.volume_moments,
            self.price_moments,
            self.adj_value_moments,
            self.adj_price_moments,
            self.return_moments,
        ):
            row += list(arr)
        row += [
            self.sigma_C2,
            self.sigma_Ca2,
            self.sigma_U2,
            self.sigma_p2,
            self.sigma_pa2,
            self.sigma_r2,
        ]
        return row


def moment_report(
    window: ResolvedWindow, lag_l, order_max=2, order_cap=DEFAULT_ORDER_CAP
) -> MomentReport:
    """Compute every order-1..order_max statistic of the window."""
    order_max = check_order(order_max, order_cap=order_cap)
    require_history(window, lag_l)
    orders = range(1, order_max + 1)
    c_n = tuple(freq_moment(window.values, n, order_cap) for n in orders)
    u_n = tuple(freq_moment(window.volumes, n, order_cap) for n in orders)
    p_n = tuple(price_moment(window, n, order_cap) for n in orders)
    adj = [adjusted_moments(window, lag_l, n, order_cap) for n in orders]
    r_n = tuple(return_moment(window, lag_l, n, order_cap) for n in orders)
    d = dispersions(window, lag_l)
    vol = return_volatility(window, lag_l)
    return MomentReport(
        window_start=window.start,
        window_count=window.count,
        lag_l=int(lag_l),
        order_max=order_max,
        value_moments=c_n,
        volume_moments=u_n,
        price_moments=p_n,
        adj_value_moments=tuple(a[0] for a in adj),
        adj_price_moments=tuple(a[1] for a in adj),
        return_moments=r_n,
        sigma_C2=d.sigma_C2,
        sigma_Ca2=d.sigma_Ca2,
        sigma_U2=d.sigma_U2,
        sigma_p2=d.sigma_p2,
        sigma_pa2=d.sigma_pa2,
        sigma_r2=vol.via_moments,
    )
