//! Locally risk-minimizing hedge: the risky-asset position against a VIX
//! call and the riskless leg that completes the discounted value identity.
//!
//! The hedge ratio is a single contour integral. Relative to the pricing
//! integrand, each frequency picks up the jump-leverage weight
//!
//!   X(v) = kappa(zeta' + rho) - kappa(zeta') - kappa(rho),
//!   zeta' = (alpha - i v) e^{-lambda (T - t)},
//!
//! the closed form of int (e^{zeta' x} - 1)(e^{rho x} - 1) nu(dx). zeta' is
//! i zeta e^{-lambda (T - t)} for the contour frequency zeta = -v - i alpha,
//! matching the e^{i zeta sigma^2} convention of the characteristic
//! function: the commonly printed variant without the factor i has
//! unbounded real part in v and no convergent integral. X(-v) is the
//! conjugate of X(v), so the hedge integral is real up to quadrature
//! residual, and X tends to -kappa(rho) at large |v|.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{MarketState, ModelParams, VixCoefficients};
use crate::pricing::{
    integrate_contour, phi_on_contour, validate_query, QuadratureSettings,
};
use crate::transform;

/// Hedge ratio, riskless leg, and the price they refer to.
#[derive(Debug, Clone, Copy)]
pub struct HedgeResult {
    /// Units of the risky asset.
    pub xi: f64,
    /// Discounted units of the riskless asset.
    pub eta: f64,
    pub price: f64,
    pub alpha_used: f64,
    pub eps_used: f64,
}

fn check_hedging_conditions(params: &ModelParams, maturity: f64) -> Result<()> {
    let report = params.check_conditions(maturity);
    if !report.hedging_integrable {
        return Err(Error::Condition(format!(
            "hedging requires u_hat > 2 B(maturity): got u_hat = {}, \
             2 B({maturity}) = {}",
            report.u_hat, report.two_b_maturity
        )));
    }
    Ok(())
}

fn xi_contour(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    eps: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let coeffs: VixCoefficients = validate_query(params, state, maturity, None, alpha)?;
    if !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "strike must be finite, got {k}"
        )));
    }
    // Below the VIX floor the payoff has no kink and the strike only adds
    // a constant, which cancels in the hedge integrand: the ratio equals
    // the floor-strike ratio.
    let k = k.max(coeffs.vix_floor());
    let delta = maturity - state.t;
    let decay = (-params.lambda * delta).exp();
    let x_star = coeffs.c_v / coeffs.b_v;
    let damp_scale = (alpha * x_star).exp();
    let phi = phi_on_contour(params, state, maturity, alpha, eps);
    let integrand = |v: f64| -> Result<Complex64> {
        let h = transform::g_hat_unshifted(v, alpha, k, &coeffs);
        let shift = damp_scale * Complex64::from_polar(1.0, -v * x_star);
        let zeta_prime = Complex64::new(alpha * decay, -v * decay);
        let weight = params.cross_integral(zeta_prime)?;
        Ok(h * shift * phi(v)? * weight)
    };
    let (quad, _) = integrate_contour(integrand, settings, settings.abs_tol)?;
    let prefactor = (-params.r * delta).exp()
        / (state.spot * (state.sigma_sq + params.c_rho()))
        / std::f64::consts::TAU;
    let xi = quad.value.re * prefactor;
    let residual = (quad.value.im * prefactor).abs();
    if residual > 100.0 * settings.abs_tol {
        return Err(Error::QuadratureFailure {
            requested: settings.abs_tol,
            achieved: residual,
            nodes: quad.nodes,
        });
    }
    Ok(xi)
}

/// Hedge ratio through the plain contour integral.
///
/// Requires an absolutely integrable characteristic function (IG-OU) and
/// the moment condition u_hat > 2 B(T). Strikes at or below the VIX floor
/// sqrt(c_v) share the floor strike's ratio.
pub fn lrm_xi(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    if !params.kernel().transform_integrable() {
        return Err(Error::Condition(format!(
            "the {} characteristic function is not absolutely integrable on \
             the hedging contour; use lrm_xi_eps with eps > 0",
            params.variant
        )));
    }
    check_hedging_conditions(params, maturity)?;
    xi_contour(params, state, maturity, k, alpha, 0.0, settings)
}

/// Hedge ratio through the Gaussian-regularized contour integral;
/// requires `settings.eps > 0`.
///
/// The regularized value stabilizes as eps shrinks; comparing against the
/// value at twice eps (`lrm_xi_eps_pair`) is the convergence diagnostic,
/// and `lrm_xi_richardson` extrapolates the pair for callers who want the
/// eps -> 0 limit instead of the fixed-eps value.
pub fn lrm_xi_eps(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    if !(settings.eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "the regularized hedge ratio requires eps > 0, got {}",
            settings.eps
        )));
    }
    check_hedging_conditions(params, maturity)?;
    xi_contour(params, state, maturity, k, alpha, settings.eps, settings)
}

/// (xi at eps, xi at 2 eps): the difference is the convergence diagnostic.
pub fn lrm_xi_eps_pair(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<(f64, f64)> {
    let at_eps = lrm_xi_eps(params, state, maturity, k, alpha, settings)?;
    let doubled = QuadratureSettings {
        eps: 2.0 * settings.eps,
        ..*settings
    };
    let at_two = lrm_xi_eps(params, state, maturity, k, alpha, &doubled)?;
    Ok((at_eps, at_two))
}

/// Richardson extrapolation of the eps and 2 eps values to eps -> 0,
/// assuming the leading error is quadratic in eps.
pub fn lrm_xi_richardson(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let (at_eps, at_two) = lrm_xi_eps_pair(params, state, maturity, k, alpha, settings)?;
    Ok((4.0 * at_eps - at_two) / 3.0)
}

/// Riskless leg from the discounted value identity: e^{-r t}(P - xi S).
pub fn eta_units(price_t: f64, xi: f64, state: &MarketState, params: &ModelParams) -> f64 {
    (-params.r * state.t).exp() * (price_t - xi * state.spot)
}

/// Price, hedge ratio, and riskless leg in one call, dispatching on
/// `settings.eps` the same way pricing does. Sub-floor strikes price
/// through the parity reduction and hedge at the floor ratio.
pub fn hedge(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<HedgeResult> {
    let priced = crate::pricing::price_any_strike(params, state, maturity, k, alpha, settings)?;
    let xi = if settings.eps > 0.0 {
        lrm_xi_eps(params, state, maturity, k, alpha, settings)?
    } else {
        lrm_xi(params, state, maturity, k, alpha, settings)?
    };
    Ok(HedgeResult {
        xi,
        eta: eta_units(priced.price, xi, state, params),
        price: priced.price,
        alpha_used: alpha,
        eps_used: settings.eps,
    })
}
