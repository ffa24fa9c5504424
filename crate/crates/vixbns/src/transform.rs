//! Fourier transform of the damped VIX call payoff.
//!
//! For K at or above the VIX floor sqrt(c_v), the damped payoff
//! x -> (sqrt(b_v x + c_v) - K)+ e^{-alpha x} has the closed-form
//! transform evaluated here through erfc at complex argument. Below the
//! floor the payoff loses its kink and the closed form stops representing
//! the integral, so that regime is excluded and handled upstream by the
//! exact forward-parity reduction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::faddeeva;
use crate::model::VixCoefficients;

pub use crate::faddeeva::erfc as erfc_complex;

const SQRT_PI: f64 = 1.772_453_850_905_516_027_298_167_483_341_15;

/// One evaluation point of the payoff transform.
#[derive(Debug, Clone, Copy)]
pub struct PayoffTransformQuery {
    pub v: f64,
    pub alpha: f64,
    pub k: f64,
    pub coeffs: VixCoefficients,
}

impl PayoffTransformQuery {
    pub fn new(v: f64, alpha: f64, k: f64, coeffs: VixCoefficients) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        let floor = coeffs.vix_floor();
        if !(k >= floor) || !k.is_finite() {
            return Err(Error::Domain(format!(
                "payoff transform requires K >= sqrt(c_v) = {floor}, got {k}"
            )));
        }
        Ok(PayoffTransformQuery { v, alpha, k, coeffs })
    }
}

/// Transform factor without the e^{(alpha - iv) C_V / B_V} translation.
///
/// This is what the FFT path tabulates on its frequency grid; the
/// translation is applied there through the evaluation abscissa instead.
/// Callers guarantee alpha > 0 and k >= sqrt(c_v).
pub fn g_hat_unshifted(v: f64, alpha: f64, k: f64, coeffs: &VixCoefficients) -> Complex64 {
    let w = Complex64::new(alpha, -v); // -iv + alpha, Re > 0
    let pow = w * w.sqrt(); // principal w^{3/2}
    let erfc_arg = (w / coeffs.b_v).sqrt() * k;
    (coeffs.b_v).sqrt() * SQRT_PI / (2.0 * pow) * faddeeva::erfc(erfc_arg)
}

/// Closed form of the damped-payoff transform.
pub fn g_hat(query: &PayoffTransformQuery) -> Complex64 {
    let x_star = query.coeffs.c_v / query.coeffs.b_v;
    let shift = Complex64::new(query.alpha * x_star, -query.v * x_star).exp();
    shift * g_hat_unshifted(query.v, query.alpha, query.k, &query.coeffs)
}
