//! VIX call prices by contour integration of the damped-payoff transform
//! against the conditional characteristic function, plus an FFT evaluation
//! path that prices many strikes from one characteristic-function grid.

use std::cell::RefCell;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::charfn::{self, CharFnQuery};
use crate::error::{Error, Result};
use crate::model::{MarketState, ModelParams, Variant, VixCoefficients};
use crate::quad::{dyadic_shells, integrate_adaptive, QuadResult};
use crate::transform;

/// Numerical controls shared by the quadrature and FFT paths.
///
/// `abs_tol` bounds the adaptive-quadrature error of the contour integral
/// itself; the price inherits an error below abs_tol / 2pi. `eps` is the
/// standard deviation of the Gaussian regularizer per unit time; zero means
/// the unregularized integrand, which the gamma-OU variant rejects.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSettings {
    pub v_max: f64,
    pub abs_tol: f64,
    pub max_nodes: usize,
    pub fft_size: usize,
    pub eps: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            v_max: 65536.0,
            abs_tol: 1e-9,
            max_nodes: 4_000_000,
            fft_size: 1 << 19,
            eps: 0.0,
        }
    }
}

impl QuadratureSettings {
    /// Defaults with the regularizer the variant needs: eps = 1e-4 for
    /// gamma-OU (whose characteristic function does not vanish at infinity
    /// along the contour), eps = 0 for IG-OU.
    pub fn for_variant(variant: Variant) -> Self {
        QuadratureSettings {
            eps: match variant {
                Variant::GammaOu => 1e-4,
                Variant::IgOu => 0.0,
            },
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_max > 1.0) || !self.v_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "v_max must exceed 1, got {}",
                self.v_max
            )));
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_nodes < 100 {
            return Err(Error::InvalidParameter(format!(
                "max_nodes must be at least 100, got {}",
                self.max_nodes
            )));
        }
        if self.fft_size < 16 || !self.fft_size.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "fft_size must be a power of two >= 16, got {}",
                self.fft_size
            )));
        }
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eps must be nonnegative, got {}",
                self.eps
            )));
        }
        Ok(())
    }
}

/// How a price was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    Fft,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Quadrature => "quadrature",
            Method::Fft => "fft",
        })
    }
}

/// A price together with the diagnostics of the contour evaluation.
///
/// `im_residual` is the imaginary part the real-valued integral picked up
/// (price units); `truncation_estimate` bounds the discarded |v| > v_max
/// tail by 2 v_max |F(v_max)| in the same units. `im_warning` flags an
/// imaginary residual above 100 abs_tol.
#[derive(Debug, Clone, Copy)]
pub struct PriceResult {
    pub price: f64,
    pub alpha_used: f64,
    pub eps_used: f64,
    pub method: Method,
    pub im_residual: f64,
    pub im_warning: bool,
    pub truncation_estimate: f64,
}

/// Shared query validation: horizon ordering, damping parameter inside
/// (0, u_hat), and the strike at or above the VIX floor when given.
pub(crate) fn validate_query(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: Option<f64>,
    alpha: f64,
) -> Result<VixCoefficients> {
    if !(state.t < maturity) || !maturity.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need t < maturity, got t={}, maturity={maturity}",
            state.t
        )));
    }
    let u_hat = params.u_hat();
    if !(alpha > 0.0 && alpha < u_hat) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, u_hat) = (0, {u_hat}), got {alpha}"
        )));
    }
    let coeffs = params.vix_coefficients();
    if let Some(k) = k {
        let floor = coeffs.vix_floor();
        if !(k >= floor) || !k.is_finite() {
            return Err(Error::Domain(format!(
                "the payoff transform requires K >= sqrt(c_v) = {floor}, got K={k}; \
                 strikes below the floor reduce to the floor price plus the \
                 discounted forward parity term"
            )));
        }
    }
    Ok(coeffs)
}

/// phi evaluated along the damped contour zeta = -v - i alpha, with the
/// Gaussian regularizer applied when eps > 0.
pub(crate) fn phi_on_contour<'a>(
    params: &'a ModelParams,
    state: &'a MarketState,
    maturity: f64,
    alpha: f64,
    eps: f64,
) -> impl Fn(f64) -> Result<Complex64> + 'a {
    move |v: f64| {
        let zeta = Complex64::new(-v, -alpha);
        let query = CharFnQuery::new(state.t, maturity, state.sigma_sq, zeta)?;
        if eps > 0.0 {
            charfn::phi_eps(params, &query, eps)
        } else {
            charfn::phi(params, &query)
        }
    }
}

/// Adaptive integration of a fallible integrand over [-v_max, v_max] on
/// dyadic shells. Returns the quadrature result and |F(v_max)| for the
/// truncation estimate. The first integrand error wins over any quadrature
/// failure it may have caused.
pub(crate) fn integrate_contour<F>(
    mut f: F,
    settings: &QuadratureSettings,
    abs_tol: f64,
) -> Result<(QuadResult, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let mut eval = |v: f64| match f(v) {
        Ok(c) => c,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::ZERO
        }
    };
    let tail = eval(settings.v_max).norm();
    let breakpoints = dyadic_shells(settings.v_max);
    let quad = integrate_adaptive(&mut eval, &breakpoints, abs_tol, settings.max_nodes);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((quad?, tail))
}

#[allow(clippy::too_many_arguments)]
fn assemble_result(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    alpha: f64,
    eps: f64,
    abs_tol: f64,
    method: Method,
    raw: Complex64,
    tail: f64,
    v_max: f64,
) -> PriceResult {
    let delta = maturity - state.t;
    let scale = (-params.r * delta).exp() / TAU;
    let im_residual = (raw.im * scale).abs();
    PriceResult {
        price: raw.re * scale,
        alpha_used: alpha,
        eps_used: eps,
        method,
        im_residual,
        im_warning: im_residual > 100.0 * abs_tol,
        truncation_estimate: 2.0 * v_max * tail * scale,
    }
}

/// Truncated contour integral with no integrability gate.
///
/// This is the raw engine behind `price` and `price_eps`, exposed so the
/// unregularized gamma-OU integral can be examined directly: its value
/// keeps drifting as v_max grows, which is the observable reason that
/// variant demands eps > 0.
pub fn truncated_price_integral(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<PriceResult> {
    settings.validate()?;
    let coeffs = validate_query(params, state, maturity, Some(k), alpha)?;
    let x_star = coeffs.c_v / coeffs.b_v;
    let damp_scale = (alpha * x_star).exp();
    let phi = phi_on_contour(params, state, maturity, alpha, settings.eps);
    let integrand = |v: f64| -> Result<Complex64> {
        let h = transform::g_hat_unshifted(v, alpha, k, &coeffs);
        let shift = damp_scale * Complex64::from_polar(1.0, -v * x_star);
        Ok(h * shift * phi(v)?)
    };
    let (quad, tail) = integrate_contour(integrand, settings, settings.abs_tol)?;
    Ok(assemble_result(
        params,
        state,
        maturity,
        alpha,
        settings.eps,
        settings.abs_tol,
        Method::Quadrature,
        quad.value,
        tail,
        settings.v_max,
    ))
}

fn require_plain_path(params: &ModelParams) -> Result<()> {
    if !params.kernel().transform_integrable() {
        return Err(Error::Condition(format!(
            "the {} characteristic function is not absolutely integrable on \
             the pricing contour; set eps > 0 or use the ig variant",
            params.variant
        )));
    }
    Ok(())
}

/// Price of a VIX call with strike at or above the VIX floor sqrt(c_v).
///
/// Dispatches on `settings.eps`: zero uses the plain contour integral
/// (rejected for gamma-OU, whose contour integrand does not die off), a
/// positive value uses the Gaussian-regularized characteristic function.
pub fn price(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<PriceResult> {
    settings.validate()?;
    if settings.eps > 0.0 {
        return price_eps(params, state, maturity, k, alpha, settings);
    }
    require_plain_path(params)?;
    truncated_price_integral(params, state, maturity, k, alpha, settings)
}

/// Regularized price; requires `settings.eps > 0`.
pub fn price_eps(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<PriceResult> {
    settings.validate()?;
    if !(settings.eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "the regularized price requires eps > 0, got {}",
            settings.eps
        )));
    }
    truncated_price_integral(params, state, maturity, k, alpha, settings)
}

/// Price for an arbitrary finite strike.
///
/// The VIX never falls below sqrt(c_v), so for K below the floor the payoff
/// is the floor payoff plus the sure amount sqrt(c_v) - K and the price is
/// the floor price plus that amount discounted. Diagnostics are those of
/// the floor query.
pub fn price_any_strike(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<PriceResult> {
    if !k.is_finite() {
        return Err(Error::InvalidParameter(format!("strike must be finite, got {k}")));
    }
    let floor = params.vix_coefficients().vix_floor();
    if k >= floor {
        return price(params, state, maturity, k, alpha, settings);
    }
    let base = price(params, state, maturity, floor, alpha, settings)?;
    let discount = (-params.r * (maturity - state.t)).exp();
    Ok(PriceResult {
        price: base.price + discount * (floor - k),
        ..base
    })
}

/// VIX futures value E[V_T | state].
///
/// Since V_T >= sqrt(c_v) almost surely, E V_T = sqrt(c_v) + E(V_T -
/// sqrt(c_v))+, i.e. the floor plus the undiscounted floor-strike call.
pub fn futures(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let floor = params.vix_coefficients().vix_floor();
    let base = price(params, state, maturity, floor, alpha, settings)?;
    let grow = (params.r * (maturity - state.t)).exp();
    Ok(floor + grow * base.price)
}

/// Four-point Lagrange interpolation on unit-spaced nodes 0..3 at s.
fn cubic_interp(g: &[Complex64; 4], s: f64) -> Complex64 {
    let l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    g[0] * l0 + g[1] * l1 + g[2] * l2 + g[3] * l3
}

struct FftStrike {
    /// Index into `h_grids` for max(K, floor).
    grid: usize,
    /// Discounted-parity addend for sub-floor strikes, in undiscounted form
    /// (floor - K); zero at or above the floor.
    parity: f64,
}

/// Zero-padding factor for the transform length. Interpolation happens on
/// the output grid, whose spacing would otherwise be locked to pi / v_max;
/// near expiry the integrand's Gaussian damping is weak and the transform
/// retains structure on the scale of the regularized payoff kink, narrower
/// than pi / v_max. Padding the buffer refines the output spacing to
/// pi / (PAD v_max) without touching the sampled window, keeping the cubic
/// interpolation error below abs_tol on the whole time sweep.
const FFT_PAD: usize = 4;

/// Multi-strike FFT pricer.
///
/// The transform factor h(v; K) is tabulated once per strike at
/// construction; each `price_at` call then evaluates the characteristic
/// function grid for that state and recovers every strike's price from one
/// FFT, interpolating the output at the fixed abscissa C_V / B_V. Grid
/// geometry: fft_size samples spaced dv = 2 v_max / fft_size fill a
/// zero-padded buffer of M = FFT_PAD * fft_size slots, giving output
/// spacing dx = 2 pi / (M dv) and aliasing images 2 pi / dv apart, far
/// outside the payoff's support for dv <= 1/2.
pub struct FftPricer {
    params: ModelParams,
    coeffs: VixCoefficients,
    alpha: f64,
    eps: f64,
    v_max: f64,
    abs_tol: f64,
    /// Padded transform length.
    m: usize,
    /// Sample count above zero frequency: half * dv = v_max.
    half: usize,
    dv: f64,
    dx: f64,
    strikes: Vec<FftStrike>,
    h_grids: Vec<Vec<Complex64>>,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
    phi_grid: Vec<Complex64>,
}

impl FftPricer {
    pub fn new(
        params: &ModelParams,
        strikes: &[f64],
        alpha: f64,
        settings: &QuadratureSettings,
    ) -> Result<Self> {
        settings.validate()?;
        if settings.eps == 0.0 {
            require_plain_path(params)?;
        }
        let u_hat = params.u_hat();
        if !(alpha > 0.0 && alpha < u_hat) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, u_hat) = (0, {u_hat}), got {alpha}"
            )));
        }
        let half = settings.fft_size / 2;
        let dv = settings.v_max / half as f64;
        if dv > 0.5 {
            return Err(Error::FftGrid(format!(
                "fft_size {} puts samples dv = {dv} apart at v_max = {}; need \
                 dv <= 1/2 so aliasing images clear the payoff support \
                 (fft_size >= 4 v_max)",
                settings.fft_size, settings.v_max
            )));
        }
        let m = settings.fft_size * FFT_PAD;
        let dx = TAU / (m as f64 * dv);
        let coeffs = params.vix_coefficients();
        let floor = coeffs.vix_floor();
        let x_star = coeffs.c_v / coeffs.b_v;
        let k_star = x_star / dx;
        if !(k_star + 3.0 < m as f64) {
            return Err(Error::FftGrid(format!(
                "evaluation abscissa {x_star} falls outside the FFT output \
                 range of {} samples spaced {dx}",
                m
            )));
        }

        let mut grids: Vec<f64> = Vec::new();
        let mut mapped = Vec::with_capacity(strikes.len());
        for &k in strikes {
            if !k.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "strike must be finite, got {k}"
                )));
            }
            let k_eff = k.max(floor);
            let grid = match grids.iter().position(|&g| g == k_eff) {
                Some(i) => i,
                None => {
                    grids.push(k_eff);
                    grids.len() - 1
                }
            };
            mapped.push(FftStrike {
                grid,
                parity: floor - k.min(floor),
            });
        }

        let h_grids = grids
            .iter()
            .map(|&k_eff| {
                (0..=half)
                    .map(|i| transform::g_hat_unshifted(i as f64 * dv, alpha, k_eff, &coeffs))
                    .collect()
            })
            .collect();

        let fft = FftPlanner::new().plan_fft_forward(m);
        let scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
        Ok(FftPricer {
            params: *params,
            coeffs,
            alpha,
            eps: settings.eps,
            v_max: settings.v_max,
            abs_tol: settings.abs_tol,
            m,
            half,
            dv,
            dx,
            strikes: mapped,
            h_grids,
            fft,
            buf: vec![Complex64::ZERO; m],
            scratch,
            phi_grid: Vec::new(),
        })
    }

    /// Prices for every construction strike at the given state, in the
    /// order the strikes were supplied.
    pub fn price_at(&mut self, state: &MarketState, maturity: f64) -> Result<Vec<PriceResult>> {
        validate_query(&self.params, state, maturity, None, self.alpha)?;
        let half = self.half;
        let phi = phi_on_contour(&self.params, state, maturity, self.alpha, self.eps);
        self.phi_grid.clear();
        self.phi_grid.reserve(half + 1);
        for i in 0..=half {
            self.phi_grid.push(phi(i as f64 * self.dv)?);
        }

        let x_star = self.coeffs.c_v / self.coeffs.b_v;
        let k_star = x_star / self.dx;
        let base = (k_star.floor() as usize).saturating_sub(1).min(self.m - 4);
        let s = k_star - base as f64;
        let damp_scale = (self.alpha * x_star).exp();

        let mut per_grid: Vec<(Complex64, f64)> = Vec::with_capacity(self.h_grids.len());
        for h in &self.h_grids {
            // Natural (DC-at-zero) layout with the padding slots zeroed: the
            // transform is in place, so the previous pass's output must be
            // cleared before the hermitian fill.
            self.buf[half..self.m - half].fill(Complex64::ZERO);
            for ((slot, hv), ph) in self.buf[..half]
                .iter_mut()
                .zip(&h[..half])
                .zip(&self.phi_grid[..half])
            {
                *slot = hv * ph;
            }
            self.buf[self.m - half] = (h[half] * self.phi_grid[half]).conj();
            for i in 1..half {
                self.buf[self.m - i] = self.buf[i].conj();
            }
            self.fft
                .process_with_scratch(&mut self.buf, &mut self.scratch);
            let mut window = [Complex64::ZERO; 4];
            for (o, w) in window.iter_mut().enumerate() {
                *w = self.dv * self.buf[base + o];
            }
            let g_star = cubic_interp(&window, s) * damp_scale;
            let tail = (h[half] * self.phi_grid[half]).norm();
            per_grid.push((g_star, tail));
        }

        let discount = (-self.params.r * (maturity - state.t)).exp();
        Ok(self
            .strikes
            .iter()
            .map(|sk| {
                let (raw, tail) = per_grid[sk.grid];
                let mut out = assemble_result(
                    &self.params,
                    state,
                    maturity,
                    self.alpha,
                    self.eps,
                    self.abs_tol,
                    Method::Fft,
                    raw,
                    tail,
                    self.v_max,
                );
                out.price += discount * sk.parity;
                out
            })
            .collect())
    }
}

/// One-shot FFT pricing of several strikes at a single state.
pub fn price_via_fft(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    strikes: &[f64],
    alpha: f64,
    settings: &QuadratureSettings,
) -> Result<Vec<PriceResult>> {
    if strikes.is_empty() {
        return Ok(Vec::new());
    }
    FftPricer::new(params, strikes, alpha, settings)?.price_at(state, maturity)
}
