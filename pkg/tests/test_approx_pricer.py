"""Three-term decomposition pricer: reductions, identities, regressions."""
import math

import pytest

import _frozen as fz
from conftest import make_params
from svj import bs_kernel, heston_moments, jump_laws
from svj.approx_pricer import Contract, ModelParams, price_approx, price_smile
from svj.errors import ParamError
from svj.heston_moments import HestonParams
from svj.jump_laws import JumpLaw, Kou, LogNormal, LogUniform
from svj.reference_pricer import price_reference

ATM = Contract(s0=100.0, strike=100.0, maturity=0.3)


def test_terms_compose():
    res = price_approx(make_params(nu=0.05, rho=-0.2), ATM)
    assert res.price == pytest.approx(
        res.base_term + res.r0_term + res.u0_term, abs=1e-15)
    assert res.truncation.tail_mass <= res.truncation.tolerance


def test_footnote_atm_regression():
    # regression pin of this implementation (not an external oracle)
    res = price_approx(make_params(nu=0.05, rho=-0.2), ATM)
    assert res.price == pytest.approx(10.871517802292965, abs=1e-12)


def test_base_term_uses_frozen_gn_values():
    """n=1 and n=2 mixture terms agree with the 50-digit oracle."""
    from svj.approx_pricer import gn_term
    params = make_params(nu=0.05, rho=-0.2)
    g1, _, _ = gn_term(1, params, ATM)
    g2, _, _ = gn_term(2, params, ATM)
    assert g1 == pytest.approx(fz.GN1_FIG1_K100, rel=1e-12)
    assert g2 == pytest.approx(fz.GN2_FIG1_K100, rel=1e-12)


def test_no_jumps_reduces_to_heston_decomposition():
    params = make_params(nu=0.2, rho=-0.6, lam=0.0)
    res = price_approx(params, ATM)
    x = math.log(100.0)
    v0 = heston_moments.avg_expected_variance_v0(params.heston, 0.3)
    want = (bs_kernel.bs_price(x, v0, 100.0, 0.001, 0.3)
            + heston_moments.r0(params.heston, 0.3)
            * bs_kernel.gamma2_bs(x, v0, 100.0, 0.001, 0.3)
            + heston_moments.u0(params.heston, 0.3)
            * bs_kernel.lambda_gamma_bs(x, v0, 100.0, 0.001, 0.3))
    assert res.price == pytest.approx(want, abs=1e-14)
    assert res.truncation.n_max == 0


def test_no_jumps_no_volofvol_is_bs():
    params = make_params(nu=0.0, rho=0.0, lam=0.0)
    v0 = heston_moments.avg_expected_variance_v0(params.heston, 0.3)
    want = bs_kernel.bs_price(math.log(100.0), v0, 100.0, 0.001, 0.3)
    assert price_approx(params, ATM).price == pytest.approx(want, abs=1e-12)


def test_lognormal_closed_route_matches_generic_quadrature():
    """Force the generic path with a Kou law tuned to mimic nothing in
    particular; instead check the lognormal closed route against
    gn_generic directly."""
    params = make_params(nu=0.05, rho=-0.2)
    x = math.log(100.0)
    v0 = heston_moments.avg_expected_variance_v0(params.heston, 0.3)
    k = jump_laws.compensator_k(params.jumps)
    r_hat = params.r - params.jumps.intensity * k
    from svj.approx_pricer import gn_term
    for n in (0, 1, 2, 5):
        g, _, _ = gn_term(n, params, ATM)
        want = math.exp(-params.jumps.intensity * k * 0.3) * jump_laws.gn_generic(
            x, n, params.jumps, v0, r_hat, 100.0, 0.3)
        assert g == pytest.approx(want, rel=1e-10)


def test_kou_and_loguniform_against_reference():
    for variant in (Kou(p=0.4, eta1=10.0, eta2=5.0),
                    LogUniform(a=-0.3, b=0.2)):
        params = ModelParams(
            heston=HestonParams(kappa=1.5, theta=0.2, nu=0.05, rho=-0.2,
                                sigma0_sq=0.25),
            jumps=JumpLaw(intensity=0.1, variant=variant), r=0.001)
        for strike in (90.0, 100.0, 115.0):
            c = Contract(s0=100.0, strike=strike, maturity=0.3)
            approx = price_approx(params, c).price
            ref = price_reference(params, c)
            assert abs(approx - ref) < 5e-5


def test_price_smile_sorted_and_exception_capture():
    params = make_params(nu=0.05, rho=-0.2)
    out = price_smile(params, 100.0, [110.0, 90.0, 100.0], 0.3)
    assert [k for k, _ in out] == [90.0, 100.0, 110.0]
    assert all(res.price > 0.0 for _, res in out)


def test_deep_strikes_stay_sane():
    params = make_params(nu=0.05, rho=-0.2)
    deep_itm = price_approx(params, Contract(s0=100.0, strike=5.0,
                                             maturity=0.3)).price
    intrinsic = 100.0 - 5.0 * math.exp(-0.001 * 0.3)
    assert deep_itm == pytest.approx(intrinsic, rel=5e-3)
    deep_otm = price_approx(params, Contract(s0=100.0, strike=400.0,
                                             maturity=0.3)).price
    assert 0.0 <= deep_otm < 0.2


def test_validation():
    with pytest.raises(ParamError):
        Contract(s0=-1.0, strike=100.0, maturity=0.3)
    with pytest.raises(ParamError):
        Contract(s0=100.0, strike=100.0, maturity=-0.3)
    params = make_params(nu=0.05, rho=-0.2)
    with pytest.raises(ParamError):
        ModelParams(heston=params.heston, jumps=params.jumps, r=-0.01)
