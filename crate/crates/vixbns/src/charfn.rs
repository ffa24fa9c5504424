//! Conditional characteristic function of the terminal squared volatility.
//!
//! Given the state sigma^2_t, the OU solution splits sigma^2_T into the
//! deterministic decay e^{-lambda(T-t)} sigma^2_t plus an independent
//! jump accumulation whose log-characteristic function is the time
//! integral of the cumulant along the decay curve. The integral is
//! evaluated per kernel (closed form for gamma, quadrature for IG).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Point query for the conditional characteristic function.
#[derive(Debug, Clone, Copy)]
pub struct CharFnQuery {
    pub t: f64,
    pub maturity: f64,
    pub sigma_sq_t: f64,
    pub zeta: Complex64,
}

impl CharFnQuery {
    pub fn new(t: f64, maturity: f64, sigma_sq_t: f64, zeta: Complex64) -> Result<Self> {
        if !(0.0 <= t && t <= maturity) || !maturity.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= t <= maturity, got t={t}, maturity={maturity}"
            )));
        }
        if !(sigma_sq_t > 0.0) || !sigma_sq_t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma_sq_t must be positive, got {sigma_sq_t}"
            )));
        }
        Ok(CharFnQuery {
            t,
            maturity,
            sigma_sq_t,
            zeta,
        })
    }
}

fn check_zeta_domain(params: &ModelParams, zeta: Complex64) -> Result<()> {
    let u_hat = params.u_hat();
    if zeta.im <= -u_hat {
        return Err(Error::Domain(format!(
            "characteristic function requires Im(zeta) > -{u_hat}, got {}",
            zeta.im
        )));
    }
    Ok(())
}

/// int_t^T kappa(i zeta e^{-lambda(T-s)}) ds.
pub fn kappa_integral(params: &ModelParams, t: f64, maturity: f64, zeta: Complex64) -> Result<Complex64> {
    if !(t <= maturity) {
        return Err(Error::InvalidParameter(format!(
            "need t <= maturity, got t={t}, maturity={maturity}"
        )));
    }
    check_zeta_domain(params, zeta)?;
    params.kernel().kappa_time_integral(params, zeta, maturity - t)
}

/// phi_{T|t}(zeta) = E[exp(i zeta sigma^2_T) | sigma^2_t].
pub fn phi(params: &ModelParams, query: &CharFnQuery) -> Result<Complex64> {
    check_zeta_domain(params, query.zeta)?;
    let delta = query.maturity - query.t;
    let decay = (-params.lambda * delta).exp();
    let drift = Complex64::i() * query.zeta * (decay * query.sigma_sq_t);
    let jumps = params
        .kernel()
        .kappa_time_integral(params, query.zeta, delta)?;
    Ok((drift + jumps).exp())
}

/// phi damped by an independent Gaussian of variance eps^2 (T - t):
/// phi(zeta) exp(-zeta^2 eps^2 (T - t) / 2).
pub fn phi_eps(params: &ModelParams, query: &CharFnQuery, eps: f64) -> Result<Complex64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let base = phi(params, query)?;
    let delta = query.maturity - query.t;
    let damp = -query.zeta * query.zeta * (eps * eps * delta / 2.0);
    Ok(base * damp.exp())
}

/// |exp(kappa integral)| for the gamma kernel at zeta = v - i alpha,
/// in closed form. Stays bounded away from zero as |v| grows, which is
/// why plain gamma pricing integrals fail to converge absolutely.
pub fn phi_tail_magnitude_gamma(
    params: &ModelParams,
    t: f64,
    maturity: f64,
    v: f64,
    alpha: f64,
) -> Result<f64> {
    if params.variant != crate::model::Variant::GammaOu {
        return Err(Error::Unsupported {
            variant: params.variant.name(),
            operation: "phi_tail_magnitude_gamma",
        });
    }
    let u_hat = params.u_hat();
    if !(alpha > 0.0 && alpha < u_hat) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, {u_hat}), got {alpha}"
        )));
    }
    if !(t < maturity) {
        return Err(Error::InvalidParameter(format!(
            "need t < maturity, got t={t}, maturity={maturity}"
        )));
    }
    let m = (-params.lambda * (maturity - t)).exp();
    let b = params.b;
    let num = v * v + (alpha - b) * (alpha - b);
    let den = v * v * m * m + (alpha * m - b) * (alpha * m - b);
    Ok((num / den).powf(-params.a / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelParams, Variant};

    fn gamma_demo() -> ModelParams {
        ModelParams::new(Variant::GammaOu, 0.5783, 1.4338, 11.6641, -1.2606, 0.007, 0.0833)
            .unwrap()
    }

    fn ig_demo() -> ModelParams {
        ModelParams::new(Variant::IgOu, 0.5783, 1.4338, 11.6641, -1.2606, 0.007, 0.0833)
            .unwrap()
    }

    #[test]
    fn phi_at_zero_is_one() {
        for p in [gamma_demo(), ig_demo()] {
            let q = CharFnQuery::new(0.5, 1.0, 0.0145, Complex64::ZERO).unwrap();
            let v = phi(&p, &q).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn kappa_integral_vanishes_at_equal_times() {
        for p in [gamma_demo(), ig_demo()] {
            let v = kappa_integral(&p, 1.0, 1.0, Complex64::new(3.0, -1.0)).unwrap();
            assert_eq!(v, Complex64::ZERO);
        }
    }

    #[test]
    fn zeta_domain_is_enforced() {
        let p = gamma_demo();
        // u_hat = b = 11.6641; Im(zeta) must exceed -b
        assert!(kappa_integral(&p, 0.0, 1.0, Complex64::new(0.0, -11.6641)).is_err());
        assert!(kappa_integral(&p, 0.0, 1.0, Complex64::new(0.0, -11.0)).is_ok());
        let q = CharFnQuery::new(0.0, 1.0, 0.0145, Complex64::new(0.0, -12.0)).unwrap();
        assert!(phi(&p, &q).is_err());
    }

    #[test]
    fn phi_modulus_bounded_by_one_on_real_line() {
        for p in [gamma_demo(), ig_demo()] {
            for v in [-200.0, -30.0, -2.0, -0.1, 0.0, 0.4, 3.0, 17.0, 64.0, 900.0] {
                let q = CharFnQuery::new(0.25, 1.0, 0.0145, Complex64::new(v, 0.0)).unwrap();
                let m = phi(&p, &q).unwrap().norm();
                assert!(m <= 1.0 + 1e-12, "{} |phi({v})| = {m}", p.variant);
            }
        }
    }

    #[test]
    fn phi_conjugate_symmetry() {
        for p in [gamma_demo(), ig_demo()] {
            for v in [0.3, 2.0, 11.0, 140.0] {
                let plus = CharFnQuery::new(0.5, 1.0, 0.0145, Complex64::new(v, 0.0)).unwrap();
                let minus = CharFnQuery::new(0.5, 1.0, 0.0145, Complex64::new(-v, 0.0)).unwrap();
                let a = phi(&p, &plus).unwrap();
                let b = phi(&p, &minus).unwrap();
                assert!((a.conj() - b).norm() < 1e-14 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn eps_damping_factorizes() {
        let p = gamma_demo();
        let zeta = Complex64::new(-10.0, -1.75);
        let q = CharFnQuery::new(0.5, 1.0, 0.0145, zeta).unwrap();
        let eps = 1e-4;
        let damped = phi_eps(&p, &q, eps).unwrap();
        let plain = phi(&p, &q).unwrap();
        let factor = (-zeta * zeta * (eps * eps * 0.5 / 2.0)).exp();
        assert!((damped - plain * factor).norm() <= 1e-15 * plain.norm());
        assert!(phi_eps(&p, &q, 0.0).is_err());
    }

    #[test]
    fn tail_magnitude_matches_exponential_of_integral() {
        let p = gamma_demo();
        for alpha in [0.5, 1.75, 5.0] {
            for v in [-100.0, -31.4, -2.0, 0.0, 0.7, 12.0, 100.0] {
                let zeta = Complex64::new(v, -alpha);
                let ki = kappa_integral(&p, 0.0, 1.0, zeta).unwrap();
                let direct = ki.exp().norm();
                let closed = phi_tail_magnitude_gamma(&p, 0.0, 1.0, v, alpha).unwrap();
                let rel = ((direct - closed) / closed).abs();
                assert!(rel < 1e-10, "v={v} alpha={alpha}: {rel:e}");
            }
        }
        assert!(phi_tail_magnitude_gamma(&ig_demo(), 0.0, 1.0, 1.0, 1.75).is_err());
        assert!(phi_tail_magnitude_gamma(&p, 0.0, 1.0, 1.0, 12.0).is_err());
    }

    #[test]
    fn gamma_tail_magnitude_is_bounded_not_decaying() {
        // the closing observation behind the eps-regularized pricing path:
        // the gamma magnitude approaches a positive constant
        let p = gamma_demo();
        let at = |v: f64| phi_tail_magnitude_gamma(&p, 0.0, 1.0, v, 1.75).unwrap();
        let near = at(1e6);
        let far = at(1e7);
        assert!((near - far).abs() < 1e-6);
        assert!(far > 1e-3);
    }
}
