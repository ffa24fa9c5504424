//! Model parameters, the two OU variance kernels, and the VIX reduction.
//!
//! The squared volatility is a stationary OU process driven by a
//! subordinator, so that the VIX collapses to V = sqrt(B_V sigma^2 + C_V)
//! with constants built from the Lévy measure. The two stationary laws
//! (gamma and inverse Gaussian) share one `VarianceKernel` interface and
//! are registered by name; everything downstream dispatches through the
//! kernel rather than matching on the variant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;

/// Stationary law of the variance process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    GammaOu,
    IgOu,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::GammaOu => "gamma",
            Variant::IgOu => "ig",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gamma" | "gamma-ou" | "gammaou" => Ok(Variant::GammaOu),
            "ig" | "ig-ou" | "igou" => Ok(Variant::IgOu),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Lévy/OU parameters plus rate and observation window.
#[derive(Debug, Clone, Copy)]
pub struct ModelParams {
    pub variant: Variant,
    /// mean-reversion rate of the variance OU process (1/years)
    pub lambda: f64,
    /// shape of the stationary law
    pub a: f64,
    /// scale of the stationary law
    pub b: f64,
    /// leverage loading on the driving subordinator, nonpositive
    pub rho: f64,
    /// risk-free rate (1/years)
    pub r: f64,
    /// VIX observation period (years)
    pub tau: f64,
}

impl ModelParams {
    pub fn new(
        variant: Variant,
        lambda: f64,
        a: f64,
        b: f64,
        rho: f64,
        r: f64,
        tau: f64,
    ) -> Result<Self> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
            Ok(())
        }
        positive("lambda", lambda)?;
        positive("a", a)?;
        positive("b", b)?;
        positive("tau", tau)?;
        if !(rho <= 0.0) || !rho.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rho must be nonpositive and finite, got {rho}"
            )));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "r must be nonnegative and finite, got {r}"
            )));
        }
        Ok(ModelParams {
            variant,
            lambda,
            a,
            b,
            rho,
            r,
            tau,
        })
    }

    pub fn kernel(&self) -> &'static dyn VarianceKernel {
        kernel_for(self.variant)
    }

    /// Largest real part at which the cumulant stays finite.
    pub fn u_hat(&self) -> f64 {
        self.kernel().u_hat(self)
    }

    /// Cumulant kappa(u) of the driving subordinator's Lévy measure.
    pub fn kappa(&self, u: Complex64) -> Result<Complex64> {
        let u_hat = self.u_hat();
        if u.re >= u_hat {
            return Err(Error::Domain(format!(
                "kappa requires Re(u) < {u_hat}, got {}",
                u.re
            )));
        }
        Ok(self.kernel().kappa(self, u))
    }

    /// kappa restricted to real argument, used for the leverage terms.
    pub fn kappa_real(&self, u: f64) -> Result<f64> {
        let u_hat = self.u_hat();
        if u >= u_hat {
            return Err(Error::Domain(format!(
                "kappa requires u < {u_hat}, got {u}"
            )));
        }
        Ok(self.kernel().kappa_real(self, u))
    }

    /// First moment of the Lévy measure, lambda a / b for both kernels.
    pub fn levy_mean(&self) -> f64 {
        self.kernel().levy_mean(self)
    }

    /// B_V and C_V of the VIX reduction.
    pub fn vix_coefficients(&self) -> VixCoefficients {
        let m1 = self.levy_mean();
        let b_v = b_function(self.lambda, self.tau) / self.tau;
        // J0 = int (1 + rho x - e^{rho x}) nu(dx) = rho m1 - kappa(rho),
        // nonpositive since 1 + y <= e^y
        let j0 = self.rho * m1 - self.kernel().kappa_real(self, self.rho);
        let c_v = (1.0 - b_v) * m1 / self.lambda - 2.0 * j0;
        VixCoefficients { b_v, c_v }
    }

    /// Leverage variance C_rho = int (e^{rho x} - 1)^2 nu(dx).
    pub fn c_rho(&self) -> f64 {
        let k = self.kernel();
        k.kappa_real(self, 2.0 * self.rho) - 2.0 * k.kappa_real(self, self.rho)
    }

    /// int (e^{zeta x} - 1)(e^{rho x} - 1) nu(dx) via the cumulant identity
    /// kappa(zeta + rho) - kappa(zeta) - kappa(rho).
    ///
    /// Valid for Re(zeta) < u_hat: rho <= 0 keeps the shifted argument in
    /// the domain as well.
    pub fn cross_integral(&self, zeta: Complex64) -> Result<Complex64> {
        let u_hat = self.u_hat();
        if zeta.re >= u_hat {
            return Err(Error::Domain(format!(
                "cross integral requires Re(zeta) < {u_hat}, got {}",
                zeta.re
            )));
        }
        let k = self.kernel();
        let rho = Complex64::new(self.rho, 0.0);
        Ok(k.kappa(self, zeta + rho) - k.kappa(self, zeta) - Complex64::from(k.kappa_real(self, self.rho)))
    }

    /// Integrability checks behind the pricing and hedging representations.
    pub fn check_conditions(&self, maturity: f64) -> ConditionReport {
        let u_hat = self.u_hat();
        let two_b = 2.0 * b_function(self.lambda, maturity);
        ConditionReport {
            u_hat,
            two_b_maturity: two_b,
            u_hat_positive: u_hat > 0.0,
            hedging_integrable: two_b < u_hat,
            needs_eps_pricing: !self.kernel().transform_integrable(),
        }
    }
}

/// Observed state the pricing conditions on.
#[derive(Debug, Clone, Copy)]
pub struct MarketState {
    pub t: f64,
    pub spot: f64,
    pub sigma_sq: f64,
}

impl MarketState {
    pub fn new(t: f64, spot: f64, sigma_sq: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "t must be nonnegative and finite, got {t}"
            )));
        }
        if !(spot > 0.0) || !spot.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "spot must be positive and finite, got {spot}"
            )));
        }
        if !(sigma_sq > 0.0) || !sigma_sq.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma_sq must be positive and finite, got {sigma_sq}"
            )));
        }
        Ok(MarketState { t, spot, sigma_sq })
    }
}

/// Coefficients of V = sqrt(b_v sigma^2 + c_v).
#[derive(Debug, Clone, Copy)]
pub struct VixCoefficients {
    pub b_v: f64,
    pub c_v: f64,
}

impl VixCoefficients {
    /// Spot VIX implied by the current squared volatility.
    pub fn vix_value(&self, sigma_sq: f64) -> f64 {
        (self.b_v * sigma_sq + self.c_v).sqrt()
    }

    /// Hard floor sqrt(c_v) of the VIX, reached only at zero variance.
    pub fn vix_floor(&self) -> f64 {
        self.c_v.sqrt()
    }
}

/// Outcome of the representation-validity checks.
#[derive(Debug, Clone, Copy)]
pub struct ConditionReport {
    pub u_hat: f64,
    pub two_b_maturity: f64,
    pub u_hat_positive: bool,
    /// 2B(T) < u_hat, required by the hedge representation
    pub hedging_integrable: bool,
    /// the characteristic function is not absolutely integrable, so
    /// pricing must regularize with eps > 0
    pub needs_eps_pricing: bool,
}

/// B(t) = (1 - e^{-lambda t}) / lambda.
pub fn b_function(lambda: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0, "b_function needs t >= 0");
    (-(-lambda * t).exp_m1()) / lambda
}

/// One stationary law of the variance process: cumulant, domain edge, and
/// the time-integrated cumulant entering the characteristic function.
pub trait VarianceKernel: Send + Sync {
    fn name(&self) -> &'static str;

    fn u_hat(&self, p: &ModelParams) -> f64;

    /// kappa(u); callers guarantee Re(u) < u_hat.
    fn kappa(&self, p: &ModelParams, u: Complex64) -> Complex64;

    /// kappa on the real line; callers guarantee u < u_hat.
    fn kappa_real(&self, p: &ModelParams, u: f64) -> f64;

    fn levy_mean(&self, p: &ModelParams) -> f64 {
        p.lambda * p.a / p.b
    }

    /// int_t^T kappa(i zeta e^{-lambda (T-s)}) ds with delta = T - t.
    /// Callers guarantee Im(zeta) > -u_hat and delta >= 0.
    fn kappa_time_integral(&self, p: &ModelParams, zeta: Complex64, delta: f64)
        -> Result<Complex64>;

    /// Whether |phi(v - i alpha)| is integrable in v without the eps
    /// regularization, i.e. whether the plain pricing integral converges.
    fn transform_integrable(&self) -> bool;
}

/// Gamma stationary law: nu(dx) = lambda a b e^{-b x} dx.
pub struct GammaOuKernel;

impl VarianceKernel for GammaOuKernel {
    fn name(&self) -> &'static str {
        "gamma"
    }

    fn u_hat(&self, p: &ModelParams) -> f64 {
        p.b
    }

    fn kappa(&self, p: &ModelParams, u: Complex64) -> Complex64 {
        p.lambda * p.a * u / (Complex64::new(p.b, 0.0) - u)
    }

    fn kappa_real(&self, p: &ModelParams, u: f64) -> f64 {
        p.lambda * p.a * u / (p.b - u)
    }

    fn kappa_time_integral(
        &self,
        p: &ModelParams,
        zeta: Complex64,
        delta: f64,
    ) -> Result<Complex64> {
        // Substituting x = e^{-lambda(T-s)} gives a int_m^1 i zeta /
        // (b - i zeta x) dx, which integrates to a log of the quadratic
        // R(x) = |b - i zeta x|^2 plus an arctan sweep of its phase,
        // signed by Re(zeta). At Re(zeta) = 0 the arctan pair collapses
        // and only the log term survives.
        let m = (-p.lambda * delta).exp();
        let (zr, zi) = (zeta.re, zeta.im);
        let b = p.b;
        let a_sq = zr * zr + zi * zi;
        let r_at = |x: f64| a_sq * x * x + 2.0 * b * zi * x + b * b;
        let log_term = -(p.a / 2.0) * (r_at(1.0) / r_at(m)).ln();
        if zr == 0.0 {
            return Ok(Complex64::new(log_term, 0.0));
        }
        let t_at = |x: f64| (a_sq * x + b * zi) / (b * zr.abs());
        let arctan_term = p.a * zr.signum() * (t_at(1.0).atan() - t_at(m).atan());
        Ok(Complex64::new(log_term, arctan_term))
    }

    fn transform_integrable(&self) -> bool {
        // |exp int kappa| tends to a positive constant as |v| grows, so
        // the payoff transform's v^{-3/2} tail alone is not integrable
        // against it without damping
        false
    }
}

/// Inverse-Gaussian stationary law:
/// nu(dx) = (lambda a / (2 sqrt(2 pi))) x^{-3/2} (1 + b^2 x) e^{-b^2 x / 2} dx.
pub struct IgOuKernel;

impl VarianceKernel for IgOuKernel {
    fn name(&self) -> &'static str {
        "ig"
    }

    fn u_hat(&self, p: &ModelParams) -> f64 {
        p.b * p.b / 2.0
    }

    fn kappa(&self, p: &ModelParams, u: Complex64) -> Complex64 {
        p.lambda * p.a * u / (Complex64::new(p.b * p.b, 0.0) - 2.0 * u).sqrt()
    }

    fn kappa_real(&self, p: &ModelParams, u: f64) -> f64 {
        p.lambda * p.a * u / (p.b * p.b - 2.0 * u).sqrt()
    }

    fn kappa_time_integral(
        &self,
        p: &ModelParams,
        zeta: Complex64,
        delta: f64,
    ) -> Result<Complex64> {
        // Same substitution as the gamma kernel leaves
        // a int_m^1 i zeta (b^2 - 2 i zeta x)^{-1/2} dx; the integrand is
        // smooth and non-oscillatory on [m, 1], so adaptive quadrature at
        // tight absolute tolerance is exact to working precision.
        let m = (-p.lambda * delta).exp();
        if delta == 0.0 {
            return Ok(Complex64::ZERO);
        }
        let b_sq = p.b * p.b;
        let i_zeta = Complex64::new(-zeta.im, zeta.re);
        let f = |x: f64| i_zeta / (Complex64::new(b_sq, 0.0) - 2.0 * i_zeta * x).sqrt();
        let r = quad::integrate_adaptive(f, &[m, 1.0], 1e-12, 100_000)?;
        Ok(p.a * r.value)
    }

    fn transform_integrable(&self) -> bool {
        // |phi| decays like exp(-c sqrt|v|), fast enough for the plain
        // pricing integral
        true
    }
}

static GAMMA_OU: GammaOuKernel = GammaOuKernel;
static IG_OU: IgOuKernel = IgOuKernel;

/// All registered kernels.
pub fn kernels() -> &'static [&'static dyn VarianceKernel] {
    static ALL: [&dyn VarianceKernel; 2] = [&GAMMA_OU, &IG_OU];
    &ALL
}

pub fn kernel_for(variant: Variant) -> &'static dyn VarianceKernel {
    match variant {
        Variant::GammaOu => &GAMMA_OU,
        Variant::IgOu => &IG_OU,
    }
}

/// Looks a kernel up by its registered name.
pub fn kernel_by_name(name: &str) -> Result<&'static dyn VarianceKernel> {
    kernels()
        .iter()
        .copied()
        .find(|k| k.name() == name.trim().to_ascii_lowercase())
        .ok_or_else(|| Error::UnknownVariant(name.to_string()))
}
