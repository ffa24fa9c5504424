//! Independent validation paths: exact Monte Carlo simulation of the
//! gamma-OU squared volatility with pricing and hedge-ratio estimators
//! built on it, and a density-inversion pricer for the IG-OU variant.
//!
//! Nothing here touches the transform closed form or the contour
//! quadrature: the estimators work from the payoff and the simulated or
//! inverted law directly, which is what makes them usable as oracles.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rustfft::FftPlanner;

use crate::charfn::{self, CharFnQuery};
use crate::error::{Error, Result};
use crate::model::{MarketState, ModelParams, Variant, VixCoefficients};
use crate::quad::gk15_nodes;

/// Simulation controls. `n_paths` counts samples; with `antithetic` they
/// come in mirrored pairs sharing one RNG stream, and standard errors are
/// computed over the independent units (pairs).
#[derive(Debug, Clone, Copy)]
pub struct McSettings {
    pub n_paths: usize,
    pub seed: u64,
    pub antithetic: bool,
}

impl McSettings {
    pub fn new(n_paths: usize, seed: u64, antithetic: bool) -> Result<Self> {
        if n_paths == 0 {
            return Err(Error::InvalidParameter(
                "n_paths must be at least 1".to_string(),
            ));
        }
        Ok(McSettings {
            n_paths,
            seed,
            antithetic,
        })
    }
}

/// A Monte Carlo estimate and its provenance.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub seed: u64,
}

/// Terminal squared-volatility samples with the settings that produced
/// them, so every downstream estimate can record the seed.
#[derive(Debug, Clone)]
pub struct McSamples {
    pub sigma_sq_terminal: Vec<f64>,
    pub settings: McSettings,
}

/// Uniform in (0, 1) from 52 high bits, offset half a step so that u and
/// 1 - u are both exactly representable: the antithetic mirror is exact.
fn unit_uniform(rng: &mut ChaCha12Rng) -> f64 {
    ((rng.next_u64() >> 12) as f64 + 0.5) * (1.0 / 4503599627370496.0)
}

/// Poisson sample by CDF inversion from a single uniform, so one value
/// drives the jump count and the antithetic mirror stays coupled.
fn poisson_inverse(mu: f64, u: f64) -> usize {
    let mut k = 0usize;
    let mut p = (-mu).exp();
    let mut cum = p;
    while u > cum {
        k += 1;
        p *= mu / k as f64;
        cum += p;
        if p == 0.0 {
            break;
        }
    }
    k
}

/// Exact samples of sigma^2 at `maturity` given the state at `t`.
///
/// The gamma-OU driving subordinator over [t, maturity] is compound
/// Poisson: jump count Poisson(lambda a delta), arrival times uniform,
/// sizes exponential(b), each decayed by e^{-lambda (maturity - s)}. Every
/// sample therefore lies at or above the deterministic decay floor
/// e^{-lambda delta} sigma_sq_t. Each path uses its own ChaCha12 stream
/// derived from (seed, path index); results do not depend on evaluation
/// order or batching.
pub fn simulate_gamma_ou_terminal(
    params: &ModelParams,
    t: f64,
    maturity: f64,
    sigma_sq_t: f64,
    settings: &McSettings,
) -> Result<McSamples> {
    if params.variant != Variant::GammaOu {
        return Err(Error::Unsupported {
            variant: params.variant.name(),
            operation: "exact path simulation",
        });
    }
    if !(t < maturity) || !maturity.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need t < maturity, got t={t}, maturity={maturity}"
        )));
    }
    if !(sigma_sq_t > 0.0) || !sigma_sq_t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma_sq_t must be positive, got {sigma_sq_t}"
        )));
    }
    if settings.n_paths == 0 {
        return Err(Error::InvalidParameter(
            "n_paths must be at least 1".to_string(),
        ));
    }

    let delta = maturity - t;
    let mu = params.lambda * params.a * delta;
    let floor = (-params.lambda * delta).exp() * sigma_sq_t;
    let mut out = Vec::with_capacity(settings.n_paths);
    for j in 0..settings.n_paths {
        let (stream, mirror) = if settings.antithetic {
            ((j / 2) as u64, j % 2 == 1)
        } else {
            (j as u64, false)
        };
        let mut rng = ChaCha12Rng::seed_from_u64(settings.seed);
        rng.set_stream(stream);
        let draw = |rng: &mut ChaCha12Rng| {
            let u = unit_uniform(rng);
            if mirror {
                1.0 - u
            } else {
                u
            }
        };
        let n = poisson_inverse(mu, draw(&mut rng));
        let mut sum = floor;
        for _ in 0..n {
            let frac = draw(&mut rng); // arrival as a fraction of delta
            let size = -draw(&mut rng).ln() / params.b;
            sum += (-params.lambda * delta * (1.0 - frac)).exp() * size;
        }
        out.push(sum);
    }
    Ok(McSamples {
        sigma_sq_terminal: out,
        settings: *settings,
    })
}

/// Mean and standard error over independent units: single samples, or pair
/// averages when the samples are antithetic.
fn estimate(values: &[f64], settings: &McSettings) -> McEstimate {
    let units: Vec<f64> = if settings.antithetic {
        values
            .chunks(2)
            .map(|c| c.iter().sum::<f64>() / c.len() as f64)
            .collect()
    } else {
        values.to_vec()
    };
    let n = units.len() as f64;
    let mean = units.iter().sum::<f64>() / n;
    let var = if units.len() > 1 {
        units.iter().map(|u| (u - mean) * (u - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        n_paths: values.len(),
        seed: settings.seed,
    }
}

/// Discounted call payoff averaged over terminal-variance samples.
pub fn mc_price(
    samples: &McSamples,
    coeffs: &VixCoefficients,
    k: f64,
    r: f64,
    delta: f64,
) -> McEstimate {
    let discount = (-r * delta).exp();
    let payoffs: Vec<f64> = samples
        .sigma_sq_terminal
        .iter()
        .map(|&y| discount * (coeffs.vix_value(y) - k).max(0.0))
        .collect();
    estimate(&payoffs, &samples.settings)
}

/// Hedge-ratio estimator from the conditional-expectation form: the jump
/// integral of E[(g(sigma^2_T + x e^{-lambda delta}) - g(sigma^2_T))]
/// (e^{rho x} - 1) nu(dx), estimated with common random numbers (one
/// sample set reused at every jump size x) and integrated in the variable
/// u = e^{-b x}, which maps the exponential tail to (0, 1].
///
/// The u-rule is fixed by adaptive bisection on the sample-mean integrand,
/// then one streaming pass evaluates the rule per path so the standard
/// error reflects the actual pathwise estimator.
pub fn mc_xi(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
    settings: &McSettings,
) -> Result<McEstimate> {
    let samples = simulate_gamma_ou_terminal(params, state.t, maturity, state.sigma_sq, settings)?;
    let coeffs = params.vix_coefficients();
    let floor = coeffs.vix_floor();
    if !(k >= floor) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "the hedge estimator requires K >= sqrt(c_v) = {floor}, got K={k}"
        )));
    }
    let delta = maturity - state.t;
    let decay = (-params.lambda * delta).exp();
    let rate = params.lambda * params.a;
    let exponent = -params.rho / params.b; // e^{rho x} = u^exponent, in [0, ..)
    let g = |y: f64| (coeffs.vix_value(y) - k).max(0.0);
    let sigma = &samples.sigma_sq_terminal;
    let n = sigma.len() as f64;

    // Sample-mean integrand of the u-integral.
    let mean_integrand = |u: f64| -> f64 {
        let x = -u.ln() / params.b;
        let shift = x * decay;
        let weight = rate * (u.powf(exponent) - 1.0);
        if weight == 0.0 {
            return 0.0;
        }
        let d: f64 = sigma.iter().map(|&s| g(s + shift) - g(s)).sum::<f64>() / n;
        weight * d
    };

    // Adaptive bisection freezes a panel set; panels graded toward u = 0
    // where the jump size grows logarithmically.
    let mut panels: Vec<(f64, f64, f64, f64)> = Vec::new(); // (a, b, value, err)
    let edges = crate::quad::graded_toward(0.0, 1.0, 8, 0.3);
    for w in edges.windows(2) {
        let (v, e, _) = crate::quad::gk15(&mut |x| Complex64::new(mean_integrand(x), 0.0), w[0], w[1]);
        panels.push((w[0], w[1], v.re, e));
    }
    let tol = 1e-6;
    for _ in 0..24 {
        let total_err: f64 = panels.iter().map(|p| p.3).sum();
        if total_err <= tol {
            break;
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let (a, b, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (v, e, _) = crate::quad::gk15(&mut |x| Complex64::new(mean_integrand(x), 0.0), lo, hi);
            panels.push((lo, hi, v.re, e));
        }
    }

    // Frozen rule: Kronrod nodes and weights of every final panel.
    let mut rule: Vec<(f64, f64)> = Vec::new(); // (shift, weighted coefficient)
    for &(a, b, _, _) in &panels {
        for (x, w) in gk15_nodes(a, b) {
            let jump = -x.ln() / params.b;
            let weight = rate * (x.powf(exponent) - 1.0);
            rule.push((jump * decay, w * weight));
        }
    }
    let coeff_sum: f64 = rule.iter().map(|r| r.1).sum();

    let prefactor = (-params.r * delta).exp() / (state.spot * (state.sigma_sq + params.c_rho()));
    let per_path: Vec<f64> = sigma
        .iter()
        .map(|&s| {
            let base = g(s);
            let total: f64 = rule.iter().map(|&(shift, c)| c * g(s + shift)).sum();
            prefactor * (total - base * coeff_sum)
        })
        .collect();
    Ok(estimate(&per_path, &samples.settings))
}

/// Density-inversion diagnostics and price for the IG-OU variant.
#[derive(Debug, Clone, Copy)]
pub struct InversionReport {
    pub price: f64,
    /// Integral of the recovered density over the grid; 1 up to inversion
    /// error.
    pub density_mass: f64,
    /// First moment of the recovered density.
    pub first_moment: f64,
    pub grid_points: usize,
}

/// Price by direct Fourier inversion of the conditional density.
///
/// IG-OU only: its characteristic function decays like e^{-c sqrt(v)} on
/// the real axis and the law has a smooth density (the gamma-OU law has an
/// atom at the decay floor, which truncated inversion cannot represent).
/// The density is recovered on a y-grid by an FFT-evaluated cosine sum,
/// then mass, first moment, and the discounted payoff are integrated by
/// trapezoid. Fails with an inversion error if the recovered mass differs
/// from 1 by more than 1e-6.
pub fn invert_density_price(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
) -> Result<InversionReport> {
    if params.variant != Variant::IgOu {
        return Err(Error::Unsupported {
            variant: params.variant.name(),
            operation: "density inversion",
        });
    }
    let coeffs = validate_inversion_query(params, state, maturity, k)?;

    const DV: f64 = 2.0;
    const N_SAMPLES: usize = 1 << 15; // v up to 65536
    const M_PAD: usize = 1 << 17; // y spacing 2 pi / (M_PAD DV)

    let mut buf = vec![Complex64::ZERO; M_PAD];
    for (i, slot) in buf.iter_mut().enumerate().take(N_SAMPLES) {
        let zeta = Complex64::new(i as f64 * DV, 0.0);
        let query = CharFnQuery::new(state.t, maturity, state.sigma_sq, zeta)?;
        *slot = charfn::phi(params, &query)?;
    }
    let fft = FftPlanner::new().plan_fft_forward(M_PAD);
    fft.process(&mut buf);

    let dy = std::f64::consts::TAU / (M_PAD as f64 * DV);
    let scale = DV / std::f64::consts::PI;
    let density = |m: usize| scale * (buf[m].re - 0.5);

    // Trapezoid weights: half at the first point; the far end sits deep in
    // the tail where the density has decayed to nothing.
    let mut mass = 0.0;
    let mut moment = 0.0;
    let mut payoff = 0.0;
    for m in 0..M_PAD {
        let w = if m == 0 { 0.5 } else { 1.0 };
        let y = m as f64 * dy;
        let p = density(m);
        mass += w * p;
        moment += w * y * p;
        payoff += w * (coeffs.vix_value(y) - k).max(0.0) * p;
    }
    mass *= dy;
    moment *= dy;
    payoff *= dy;

    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::Inversion(format!(
            "recovered density mass {mass} differs from 1 by more than 1e-6"
        )));
    }
    let discount = (-params.r * (maturity - state.t)).exp();
    Ok(InversionReport {
        price: discount * payoff,
        density_mass: mass,
        first_moment: moment,
        grid_points: M_PAD,
    })
}

fn validate_inversion_query(
    params: &ModelParams,
    state: &MarketState,
    maturity: f64,
    k: f64,
) -> Result<VixCoefficients> {
    if !(state.t < maturity) || !maturity.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need t < maturity, got t={}, maturity={maturity}",
            state.t
        )));
    }
    let coeffs = params.vix_coefficients();
    let floor = coeffs.vix_floor();
    if !(k >= floor) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "density inversion prices K >= sqrt(c_v) = {floor}, got K={k}"
        )));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_params() -> ModelParams {
        ModelParams::new(
            Variant::GammaOu,
            0.5783,
            1.4338,
            11.6641,
            -1.2606,
            0.007,
            0.0833,
        )
        .unwrap()
    }

    #[test]
    fn poisson_inversion_matches_cdf() {
        // mu = 0.8: P(0) = e^{-0.8} = 0.4493, P(<=1) = 0.8088
        assert_eq!(poisson_inverse(0.8, 0.44), 0);
        assert_eq!(poisson_inverse(0.8, 0.45), 1);
        assert_eq!(poisson_inverse(0.8, 0.80), 1);
        assert_eq!(poisson_inverse(0.8, 0.81), 2);
        assert_eq!(poisson_inverse(0.8, 0.99999), 7);
    }

    #[test]
    fn uniform_mirror_is_exact() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let u = unit_uniform(&mut rng);
            assert!(u > 0.0 && u < 1.0);
            assert_eq!(1.0 - (1.0 - u), u);
        }
    }

    #[test]
    fn simulation_respects_decay_floor_and_mean() {
        let params = gamma_params();
        let settings = McSettings::new(200_000, 42, false).unwrap();
        let samples = simulate_gamma_ou_terminal(&params, 0.5, 1.0, 0.0145, &settings).unwrap();
        let floor = (-params.lambda * 0.5).exp() * 0.0145;
        assert!(samples.sigma_sq_terminal.iter().all(|&s| s >= floor));
        let est = estimate(&samples.sigma_sq_terminal, &settings);
        let m1 = floor + params.a / params.b * (1.0 - (-params.lambda * 0.5).exp());
        assert!(
            (est.mean - m1).abs() < 4.0 * est.std_error,
            "mean {} vs {m1} (se {})",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn identical_seeds_reproduce_bitwise() {
        let params = gamma_params();
        let settings = McSettings::new(1000, 9, true).unwrap();
        let a = simulate_gamma_ou_terminal(&params, 0.0, 1.0, 0.0145, &settings).unwrap();
        let b = simulate_gamma_ou_terminal(&params, 0.0, 1.0, 0.0145, &settings).unwrap();
        assert_eq!(a.sigma_sq_terminal, b.sigma_sq_terminal);
    }

    #[test]
    fn ig_simulation_unsupported() {
        let params = ModelParams::new(
            Variant::IgOu,
            0.5783,
            1.4338,
            11.6641,
            -1.2606,
            0.007,
            0.0833,
        )
        .unwrap();
        let settings = McSettings::new(10, 1, false).unwrap();
        assert!(matches!(
            simulate_gamma_ou_terminal(&params, 0.0, 1.0, 0.0145, &settings),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn zero_leverage_hedge_estimate_is_exactly_zero() {
        let params = ModelParams::new(
            Variant::GammaOu,
            0.5783,
            1.4338,
            11.6641,
            0.0,
            0.007,
            0.0833,
        )
        .unwrap();
        let state = MarketState::new(0.5, 1124.47, 0.0145).unwrap();
        let settings = McSettings::new(500, 3, false).unwrap();
        let k = params.vix_coefficients().vix_floor() + 0.04;
        let est = mc_xi(&params, &state, 1.0, k, &settings).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn antithetic_pairs_share_units() {
        let params = gamma_params();
        let plain = McSettings::new(4000, 11, false).unwrap();
        let anti = McSettings::new(4000, 11, true).unwrap();
        let sp = simulate_gamma_ou_terminal(&params, 0.5, 1.0, 0.0145, &plain).unwrap();
        let sa = simulate_gamma_ou_terminal(&params, 0.5, 1.0, 0.0145, &anti).unwrap();
        // mirrored pairs straddle the conditional mean more often than
        // independent draws: pair means should have smaller spread
        let coeffs = params.vix_coefficients();
        let ep = mc_price(&sp, &coeffs, 0.18588, 0.007, 0.5);
        let ea = mc_price(&sa, &coeffs, 0.18588, 0.007, 0.5);
        assert!(ea.std_error < ep.std_error);
        assert_eq!(ea.n_paths, 4000);
    }
}
