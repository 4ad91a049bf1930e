"""Black-Scholes call kernel on log-price coordinates, plus the two
derivative operators the variance-correction terms need.

Conventions: x = ln(spot), y = volatility, tau = time left to expiry.
The call value is

    BS = e^x N(d+) - K e^(-r tau) N(d-),
    d+- = (x - ln K + (r +- y^2/2) tau) / (y sqrt(tau)).

With D := d/dx, the operators are L = D and G = D^2 - D. Closed forms:

    G BS   = e^x exp(-d+^2/2) / (y sqrt(2 pi tau))
    L G BS = G BS * (1 - d+ / (y sqrt(tau)))
    G^2 BS = G BS * (d+^2 - y sqrt(tau) d+ - 1) / (y^2 tau)
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr

from .errors import DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)
# below this y*sqrt(tau) the lognormal degenerates to a point mass
DEGENERATE_EPS = 1e-12


class BsInputs(NamedTuple):
    """Grouped arguments for the kernel functions."""
    t: float
    x: float
    y: float
    strike: float
    r: float
    big_t: float

    @property
    def tau(self) -> float:
        return self.big_t - self.t

    def as_args(self):
        """(x, y, strike, r, tau) tuple for unpacking into the kernel."""
        return (self.x, self.y, self.strike, self.r, self.tau)


def norm_cdf(z: float) -> float:
    """Standard normal CDF via erfc; keeps full relative accuracy in the tails."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def norm_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) / SQRT_2PI


def _check(y: float, strike: float, tau: float) -> None:
    if not (strike > 0.0 and math.isfinite(strike)):
        raise DomainError(f"strike must be positive and finite, got {strike}")
    if tau < 0.0 or not math.isfinite(tau):
        raise DomainError(f"time to expiry must be >= 0, got {tau}")
    if y < 0.0 or not math.isfinite(y):
        raise DomainError(f"volatility must be >= 0, got {y}")


def d_plus_minus(x: float, y: float, strike: float, r: float, tau: float):
    """Return (d+, d-). Requires a non-degenerate y*sqrt(tau)."""
    _check(y, strike, tau)
    ysq = y * math.sqrt(tau)
    if ysq < DEGENERATE_EPS:
        raise DomainError(f"y*sqrt(tau) = {ysq:.3e} is degenerate")
    m = x - math.log(strike) + r * tau
    return m / ysq + 0.5 * ysq, m / ysq - 0.5 * ysq


def bs_price(x: float, y: float, strike: float, r: float, tau: float) -> float:
    """European call value; degenerates to discounted intrinsic value."""
    _check(y, strike, tau)
    if y * math.sqrt(tau) < DEGENERATE_EPS:
        return max(math.exp(x) - strike * math.exp(-r * tau), 0.0)
    dp, dm = d_plus_minus(x, y, strike, r, tau)
    return math.exp(x) * norm_cdf(dp) - strike * math.exp(-r * tau) * norm_cdf(dm)


def gamma_bs(x: float, y: float, strike: float, r: float, tau: float) -> float:
    """(D^2 - D) BS. Strictly positive on the non-degenerate domain."""
    dp, _ = d_plus_minus(x, y, strike, r, tau)
    return math.exp(x - 0.5 * dp * dp) / (y * math.sqrt(2.0 * math.pi * tau))


def lambda_gamma_bs(x: float, y: float, strike: float, r: float, tau: float) -> float:
    """D (D^2 - D) BS."""
    dp, _ = d_plus_minus(x, y, strike, r, tau)
    g = math.exp(x - 0.5 * dp * dp) / (y * math.sqrt(2.0 * math.pi * tau))
    return g * (1.0 - dp / (y * math.sqrt(tau)))


def gamma2_bs(x: float, y: float, strike: float, r: float, tau: float) -> float:
    """(D^2 - D)^2 BS."""
    dp, _ = d_plus_minus(x, y, strike, r, tau)
    g = math.exp(x - 0.5 * dp * dp) / (y * math.sqrt(2.0 * math.pi * tau))
    ysq = y * math.sqrt(tau)
    return g * (dp * dp - ysq * dp - 1.0) / (ysq * ysq)


def bs_vega(x: float, y: float, strike: float, r: float, tau: float) -> float:
    """dBS/dy = e^x phi(d+) sqrt(tau)."""
    dp, _ = d_plus_minus(x, y, strike, r, tau)
    return math.exp(x) * norm_pdf(dp) * math.sqrt(tau)


# array variants over the log-price axis, used by the jump-mixture
# quadratures; same formulas, numpy semantics, no degenerate branch
# (the scalar guards run once in the caller).

def _dp_arr(x, y, strike, r, tau):
    ysq = y * math.sqrt(tau)
    return (x - math.log(strike) + r * tau) / ysq + 0.5 * ysq


def bs_price_arr(x, y: float, strike: float, r: float, tau: float):
    ysq = y * math.sqrt(tau)
    dp = _dp_arr(x, y, strike, r, tau)
    return np.exp(x) * ndtr(dp) - strike * math.exp(-r * tau) * ndtr(dp - ysq)


def gamma_bs_arr(x, y: float, strike: float, r: float, tau: float):
    dp = _dp_arr(x, y, strike, r, tau)
    return np.exp(x - 0.5 * dp * dp) / (y * math.sqrt(2.0 * math.pi * tau))


def lambda_gamma_bs_arr(x, y: float, strike: float, r: float, tau: float):
    dp = _dp_arr(x, y, strike, r, tau)
    g = np.exp(x - 0.5 * dp * dp) / (y * math.sqrt(2.0 * math.pi * tau))
    return g * (1.0 - dp / (y * math.sqrt(tau)))


def gamma2_bs_arr(x, y: float, strike: float, r: float, tau: float):
    dp = _dp_arr(x, y, strike, r, tau)
    g = np.exp(x - 0.5 * dp * dp) / (y * math.sqrt(2.0 * math.pi * tau))
    ysq = y * math.sqrt(tau)
    return g * (dp * dp - ysq * dp - 1.0) / (ysq * ysq)
