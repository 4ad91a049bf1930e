"""Fourier reference pricing for the SVJ model and numerical IV inversion.

Characteristic function of X_T = ln S_T in the branch-cut-safe
formulation (the d-sign convention whose exp(-dT) decays, so the
complex log never crosses a cut as T grows), times the compound-Poisson
factor exp(lambda T (Psi(u) - 1) - iu lambda k T).

The ratio (xi - d)/nu^2 is evaluated as -(iu + u^2)/(xi + d), which is
algebraically identical and keeps full precision as nu -> 0; nu = 0
exactly falls back to the deterministic-variance Gaussian exponent.

Two pricing routes:

    one-integral   C = S0 - sqrt(S0 K) e^(-rT/2)/pi *
                       int_0^inf Re[e^(iu kbar) phihat(u - i/2)] / (u^2 + 1/4) du
    two-integral   C = S0 P1 - K e^(-rT) P2 with the classical
                       in-the-money probabilities P1, P2

both over u in [0, inf) mapped to (0,1] via u = (1-s)/s with the shared
adaptive Gauss-Kronrod engine.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from . import bs_kernel
from .approx_pricer import Contract, ModelParams
from .errors import BracketError, ParamError
from .jump_laws import compensator_k, jump_char_fn
from .quadrature import QuadratureConfig, integrate_semi_infinite

DEFAULT_REF_QUAD = QuadratureConfig(abs_tol=1e-12, rel_tol=1e-11,
                                    max_subdivisions=512)

_NU_FLOOR = 0.0  # nu == 0 exactly takes the Gaussian branch


def _log1p_c(z: np.ndarray) -> np.ndarray:
    """log(1 + z) for complex z, series for |z| small (numpy log1p is real-only)."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-4
    zs = np.where(small, 0.0, z)
    series = z * (1.0 - z * (0.5 - z * (1.0 / 3.0 - 0.25 * z)))
    return np.where(small, series, np.log(1.0 + zs))


def bates_char_fn(u, params: ModelParams, big_t: float, x0: float = 0.0):
    """E(e^{iu X_T}) with X_0 = x0; u may be complex (analytic strip).

    Includes the full drift r - lambda k and the jump factor, so
    char_fn(-i) = e^{x0 + r T} (martingale identity).
    """
    if big_t <= 0.0:
        raise ParamError(f"need T > 0, got {big_t}")
    h = params.heston
    u = np.asarray(u, dtype=complex)
    lam = params.jumps.intensity
    k = compensator_k(params.jumps)
    iu = 1j * u
    drift = iu * (x0 + params.r * big_t)

    if h.nu <= _NU_FLOOR:
        # deterministic variance: Gaussian with integrated variance v0^2 T
        iv = (h.theta * big_t
              + (h.sigma0_sq - h.theta) * (1.0 - math.exp(-h.kappa * big_t)) / h.kappa)
        heston_part = -0.5 * (iu + u * u) * iv
    else:
        nu2 = h.nu * h.nu
        xi = h.kappa - 1j * h.rho * h.nu * u
        d = np.sqrt(xi * xi + nu2 * (iu + u * u))
        ratio = -(iu + u * u) / (xi + d)          # (xi - d)/nu^2
        g = nu2 * ratio / (xi + d)                # (xi - d)/(xi + d)
        edt = np.exp(-d * big_t)
        log_term = _log1p_c(-g * edt) - _log1p_c(-g)
        heston_part = (h.theta * h.kappa * (ratio * big_t - 2.0 * log_term / nu2)
                       + h.sigma0_sq * ratio * (1.0 - edt) / (1.0 - g * edt))

    if lam > 0.0:
        jump_part = lam * big_t * (jump_char_fn(params.jumps, u) - 1.0) - iu * lam * k * big_t
    else:
        jump_part = 0.0
    out = np.exp(drift + heston_part + jump_part)
    return out if out.shape else complex(out)


def _price_one_integral(params, contract, cfg):
    s0, strike, big_t = contract.s0, contract.strike, contract.maturity
    kbar = math.log(s0 / strike) + params.r * big_t

    def integrand(u):
        z = u - 0.5j
        # phihat = CF of X_T - x0 - rT; set x0 = 0 and strip the rT drift
        phi = bates_char_fn(z, params, big_t) * np.exp(-1j * z * params.r * big_t)
        return (np.exp(1j * u * kbar) * phi).real / (u * u + 0.25)

    res = integrate_semi_infinite(integrand, cfg)
    # prefactor e^{-rT} sqrt(F K) = sqrt(S0 K) e^{-rT/2}
    return s0 - math.sqrt(s0 * strike) * math.exp(-0.5 * params.r * big_t) / math.pi * res.value


def _in_money_probs(params, contract, cfg):
    s0, strike, big_t = contract.s0, contract.strike, contract.maturity
    x0 = math.log(s0)
    lnk = math.log(strike)
    norm = bates_char_fn(np.array([-1j]), params, big_t, x0)[0]  # = e^{x0 + rT}

    def integrand_p2(u):
        phi = bates_char_fn(u, params, big_t, x0)
        return (np.exp(-1j * u * lnk) * phi / (1j * u)).real

    def integrand_p1(u):
        phi = bates_char_fn(u - 1j, params, big_t, x0)
        return (np.exp(-1j * u * lnk) * phi / (1j * u * norm)).real

    p2 = 0.5 + integrate_semi_infinite(integrand_p2, cfg).value / math.pi
    p1 = 0.5 + integrate_semi_infinite(integrand_p1, cfg).value / math.pi
    return p1, p2


def price_reference(params: ModelParams, contract: Contract,
                    cfg: QuadratureConfig = DEFAULT_REF_QUAD,
                    method: str = "one-integral", payoff: str = "call") -> float:
    """Semi-closed Fourier price; method is one-integral or two-integral."""
    if payoff not in ("call", "put"):
        raise ParamError(f"payoff must be call or put, got {payoff}")
    disc_k = contract.strike * math.exp(-params.r * contract.maturity)
    if method == "one-integral":
        call = _price_one_integral(params, contract, cfg)
        if payoff == "call":
            return call
        return call - contract.s0 + disc_k
    if method == "two-integral":
        p1, p2 = _in_money_probs(params, contract, cfg)
        if payoff == "call":
            return contract.s0 * p1 - disc_k * p2
        return disc_k * (1.0 - p2) - contract.s0 * (1.0 - p1)
    raise ParamError(f"unknown method {method!r}")


IV_BRACKET = (1e-6, 10.0)


def implied_vol_invert(price: float, contract: Contract, r: float) -> float:
    """Black-Scholes IV of a call price by bracketed root-finding.

    Raises BracketError when the price sits outside the open
    no-arbitrage interval (intrinsic, spot) or outside the vol bracket.
    """
    s0, strike, tau = contract.s0, contract.strike, contract.maturity
    x = math.log(s0)
    intrinsic = max(s0 - strike * math.exp(-r * tau), 0.0)
    if not intrinsic < price < s0:
        raise BracketError(
            f"price {price} outside the open no-arbitrage interval "
            f"({intrinsic}, {s0})")
    lo, hi = IV_BRACKET

    def f(y):
        return bs_kernel.bs_price(x, y, strike, r, tau) - price

    f_lo, f_hi = f(lo), f(hi)
    if f_lo > 0.0 or f_hi < 0.0:
        raise BracketError(
            f"no implied vol in [{lo}, {hi}] for price {price}")
    return brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16, maxiter=200)
