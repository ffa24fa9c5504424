//! The `validate` cross-check suite and the `check` condition report.
//!
//! Each validate check pits a library value against an independent route:
//! closed-form cumulants against direct integrals of the Lévy measure,
//! the payoff transform against oscillatory quadrature, prices and hedge
//! ratios against Monte Carlo, the IG price against density inversion,
//! and contour results against their damping-parameter invariance. Monte
//! Carlo checks are three-sigma tests; when the sample is too small to
//! resolve the reference they are reported as inconclusive instead of
//! passed.

use std::f64::consts::{PI, TAU};

use vixbns::charfn::{phi, CharFnQuery};
use vixbns::hedging::lrm_xi_eps;
use vixbns::model::b_function;
use vixbns::oracle::{invert_density_price, mc_price, mc_xi, simulate_gamma_ou_terminal};
use vixbns::pricing::{price, price_any_strike};
use vixbns::quad::integrate_adaptive;
use vixbns::transform::{g_hat, PayoffTransformQuery};
use vixbns::{McSettings, ModelParams, QuadratureSettings, Variant};

use crate::config::RunConfig;
use crate::output::fmt_sig;
use crate::CliError;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Inconclusive,
    Fail,
}

impl Outcome {
    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Inconclusive => "WARN",
            Outcome::Fail => "FAIL",
        }
    }
}

struct CheckRow {
    name: &'static str,
    outcome: Outcome,
    detail: String,
}

/// Minimum sample size for a three-sigma verdict; below it the normal
/// approximation and the stderr estimate are both unreliable.
const MIN_CONCLUSIVE_PATHS: usize = 1000;

/// A Monte Carlo check can only reject when three stderr is well inside
/// the reference scale.
fn verdict(diff: f64, se: f64, scale: f64, n_paths: usize, detail: String) -> CheckRow {
    let inconclusive = n_paths < MIN_CONCLUSIVE_PATHS || 3.0 * se > 0.5 * scale;
    let outcome = if inconclusive {
        Outcome::Inconclusive
    } else if diff <= 3.0 * se {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    let detail = if inconclusive {
        format!("inconclusive: 3 stderr = {} on scale {} ({n_paths} paths); {detail}",
            fmt_sig(3.0 * se), fmt_sig(scale))
    } else {
        detail
    };
    CheckRow { name: "", outcome, detail }
}

/// kappa(u) by direct integration of the Lévy measure, on geometrically
/// graded panels so the IG density's x^{-3/2} edge is resolved.
fn kappa_by_levy_integral(params: &ModelParams, u: f64) -> Result<f64, CliError> {
    let (lambda, a, b) = (params.lambda, params.a, params.b);
    let decay = match params.variant {
        Variant::GammaOu => b,
        Variant::IgOu => b * b / 2.0,
    };
    if u >= decay {
        return Err(CliError::Config(format!(
            "levy integral needs u < {decay}, got {u}"
        )));
    }
    let x_max = 120.0 / (decay - u.max(0.0));
    let mut breakpoints = vec![0.0];
    for k in (0..=48).rev() {
        breakpoints.push(x_max * 0.5f64.powi(k));
    }
    let variant = params.variant;
    let mut f = move |x: f64| {
        if x <= 0.0 {
            return Complex64::ZERO;
        }
        let weight = match variant {
            Variant::GammaOu => lambda * a * b * (-b * x).exp(),
            Variant::IgOu => {
                lambda * a / (2.0 * TAU.sqrt())
                    * x.powf(-1.5)
                    * (1.0 + b * b * x)
                    * (-0.5 * b * b * x).exp()
            }
        };
        Complex64::new((u * x).exp_m1() * weight, 0.0)
    };
    let quad = integrate_adaptive(&mut f, &breakpoints, 1e-10, 2_000_000)
        .map_err(CliError::Lib)?;
    Ok(quad.value.re)
}

fn check_kappa(cfg: &RunConfig) -> Result<CheckRow, CliError> {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for (variant, grid) in [
        (Variant::GammaOu, [-20.0, -2.0, 0.5, 5.0]),
        (Variant::IgOu, [-20.0, -2.0, 0.5, 20.0]),
    ] {
        let p = model_for(cfg, variant)?;
        for u in grid {
            let closed = p.kappa(Complex64::new(u, 0.0)).map_err(CliError::Lib)?.re;
            let integral = kappa_by_levy_integral(&p, u)?;
            let rel = (closed - integral).abs() / integral.abs().max(1e-300);
            worst = worst.max(rel);
            count += 1;
        }
    }
    Ok(CheckRow {
        name: "cumulant-vs-levy-integral",
        outcome: if worst <= 1e-8 { Outcome::Pass } else { Outcome::Fail },
        detail: format!("{count} points, worst rel {} (gate 1e-8)", fmt_sig(worst)),
    })
}

/// The payoff transform against oscillatory quadrature on half-period
/// panels, truncated where the damping reaches e^{-42}.
fn check_transform(cfg: &RunConfig) -> Result<CheckRow, CliError> {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    let alpha = cfg.alpha;
    for variant in [Variant::GammaOu, Variant::IgOu] {
        let coeffs = model_for(cfg, variant)?.vix_coefficients();
        let k = cfg.k.max(coeffs.vix_floor());
        let kink = ((k * k - coeffs.c_v) / coeffs.b_v).max(0.0);
        let x_max = kink + 42.0 / alpha;
        for v in [0.5f64, 2.0, 10.0] {
            let query = PayoffTransformQuery::new(v, alpha, k, coeffs).map_err(CliError::Lib)?;
            let closed = g_hat(&query);
            let (b_v, c_v) = (coeffs.b_v, coeffs.c_v);
            let mut f = move |x: f64| {
                Complex64::new(-alpha * x, v * x).exp() * ((b_v * x + c_v).sqrt() - k)
            };
            let mut breakpoints = vec![kink];
            let h = PI / v;
            let mut edge = kink;
            while edge < x_max {
                edge = (edge + h).min(x_max);
                breakpoints.push(edge);
            }
            let quad = integrate_adaptive(&mut f, &breakpoints, 1e-13, 2_000_000)
                .map_err(CliError::Lib)?;
            let rel = (closed - quad.value).norm() / quad.value.norm();
            worst = worst.max(rel);
            count += 1;
        }
    }
    Ok(CheckRow {
        name: "payoff-transform-quadrature",
        outcome: if worst <= 1e-8 { Outcome::Pass } else { Outcome::Fail },
        detail: format!("{count} points, worst rel {} (gate 1e-8)", fmt_sig(worst)),
    })
}

fn check_charfn_mc(cfg: &RunConfig) -> Result<CheckRow, CliError> {
    let p = model_for(cfg, Variant::GammaOu)?;
    let settings = McSettings::new(cfg.n_paths, cfg.seed, false).map_err(CliError::Lib)?;
    let samples = simulate_gamma_ou_terminal(&p, 0.0, cfg.maturity, cfg.sigma_sq, &settings)
        .map_err(CliError::Lib)?;
    let n = samples.sigma_sq_terminal.len() as f64;
    let v = 2.0;
    let (mut re_sum, mut im_sum, mut re_sq, mut im_sq) = (0.0, 0.0, 0.0, 0.0);
    for &s in &samples.sigma_sq_terminal {
        let (sin, cos) = (v * s).sin_cos();
        re_sum += cos;
        im_sum += sin;
        re_sq += cos * cos;
        im_sq += sin * sin;
    }
    let (re_mean, im_mean) = (re_sum / n, im_sum / n);
    let re_se = ((re_sq / n - re_mean * re_mean).max(0.0) / (n - 1.0)).sqrt();
    let im_se = ((im_sq / n - im_mean * im_mean).max(0.0) / (n - 1.0)).sqrt();
    let query = CharFnQuery::new(0.0, cfg.maturity, cfg.sigma_sq, Complex64::new(v, 0.0))
        .map_err(CliError::Lib)?;
    let exact = phi(&p, &query).map_err(CliError::Lib)?;
    let diff = (re_mean - exact.re).abs().max((im_mean - exact.im).abs());
    let se = re_se.max(im_se);
    let z = (re_mean - exact.re).abs() / re_se.max(1e-300);
    let z_im = (im_mean - exact.im).abs() / im_se.max(1e-300);
    let mut row = verdict(
        diff,
        se,
        exact.norm(),
        cfg.n_paths,
        format!("empirical charfn at v={v}, |z| = {}", fmt_sig(z.max(z_im))),
    );
    row.name = "charfn-vs-mc";
    Ok(row)
}

fn check_price_mc(cfg: &RunConfig) -> Result<CheckRow, CliError> {
    let p = model_for(cfg, Variant::GammaOu)?;
    let settings = gamma_settings(cfg);
    let st = cfg.state_at(cfg.t)?;
    let exact = price_any_strike(&p, &st, cfg.maturity, cfg.k, cfg.alpha, &settings)
        .map_err(CliError::Lib)?
        .price;
    let mc = McSettings::new(cfg.n_paths, cfg.seed.wrapping_add(1), true).map_err(CliError::Lib)?;
    let samples = simulate_gamma_ou_terminal(&p, cfg.t, cfg.maturity, cfg.sigma_sq, &mc)
        .map_err(CliError::Lib)?;
    let est = mc_price(&samples, &p.vix_coefficients(), cfg.k, p.r, cfg.maturity - cfg.t);
    let z = (est.mean - exact).abs() / est.std_error.max(1e-300);
    let mut row = verdict(
        (est.mean - exact).abs(),
        est.std_error,
        exact.abs(),
        cfg.n_paths,
        format!(
            "price {} vs MC {} (|z| = {})",
            fmt_sig(exact),
            fmt_sig(est.mean),
            fmt_sig(z)
        ),
    );
    row.name = "price-vs-mc";
    Ok(row)
}

fn check_hedge_mc(cfg: &RunConfig) -> Result<CheckRow, CliError> {
    let p = model_for(cfg, Variant::GammaOu)?;
    let settings = gamma_settings(cfg);
    let st = cfg.state_at(cfg.t)?;
    let k = cfg.k.max(p.vix_coefficients().vix_floor());
    let exact =
        lrm_xi_eps(&p, &st, cfg.maturity, k, cfg.alpha, &settings).map_err(CliError::Lib)?;
    let mc = McSettings::new(cfg.n_paths, cfg.seed.wrapping_add(2), true).map_err(CliError::Lib)?;
    let est = mc_xi(&p, &st, cfg.maturity, k, &mc).map_err(CliError::Lib)?;
    let z = (est.mean - exact).abs() / est.std_error.max(1e-300);
    let mut row = verdict(
        (est.mean - exact).abs(),
        est.std_error,
        exact.abs(),
        cfg.n_paths,
        format!(
            "xi {} vs MC {} (|z| = {})",
            fmt_sig(exact),
            fmt_sig(est.mean),
            fmt_sig(z)
        ),
    );
    row.name = "hedge-vs-mc";
    Ok(row)
}

fn check_inversion(cfg: &RunConfig) -> Result<CheckRow, CliError> {
    let p = model_for(cfg, Variant::IgOu)?;
    let settings = QuadratureSettings {
        eps: 0.0,
        ..cfg.settings()
    };
    let st = cfg.state_at(cfg.t)?;
    let k = cfg.k.max(p.vix_coefficients().vix_floor());
    let report = invert_density_price(&p, &st, cfg.maturity, k).map_err(CliError::Lib)?;
    let exact = price(&p, &st, cfg.maturity, k, cfg.alpha, &settings)
        .map_err(CliError::Lib)?
        .price;
    let diff = (report.price - exact).abs();
    let mass = (report.density_mass - 1.0).abs();
    Ok(CheckRow {
        name: "price-vs-density-inversion",
        outcome: if diff <= 1e-5 && mass <= 1e-6 {
            Outcome::Pass
        } else {
            Outcome::Fail
        },
        detail: format!(
            "|diff| {} (gate 1e-5), mass defect {} (gate 1e-6)",
            fmt_sig(diff),
            fmt_sig(mass)
        ),
    })
}

fn check_alpha_independence(cfg: &RunConfig) -> Result<CheckRow, CliError> {
    let alphas = [0.75, 1.75, 3.0];
    let mut worst = 0.0f64;
    for (variant, gate) in [(Variant::GammaOu, 1e-5), (Variant::IgOu, 1e-6)] {
        let p = model_for(cfg, variant)?;
        let settings = match variant {
            Variant::GammaOu => gamma_settings(cfg),
            Variant::IgOu => QuadratureSettings {
                eps: 0.0,
                ..cfg.settings()
            },
        };
        let st = cfg.state_at(cfg.t)?;
        let k = cfg.k.max(p.vix_coefficients().vix_floor());
        let values: Result<Vec<f64>, CliError> = alphas
            .iter()
            .map(|&a| {
                price(&p, &st, cfg.maturity, k, a, &settings)
                    .map(|r| r.price)
                    .map_err(CliError::Lib)
            })
            .collect();
        let values = values?;
        let spread = values.iter().cloned().fold(f64::MIN, f64::max)
            - values.iter().cloned().fold(f64::MAX, f64::min);
        if spread > gate {
            return Ok(CheckRow {
                name: "alpha-independence",
                outcome: Outcome::Fail,
                detail: format!("{variant} price spread {} over gate {gate}", fmt_sig(spread)),
            });
        }
        worst = worst.max(spread);
    }
    Ok(CheckRow {
        name: "alpha-independence",
        outcome: Outcome::Pass,
        detail: format!(
            "prices at alpha {{0.75, 1.75, 3}}, worst spread {}",
            fmt_sig(worst)
        ),
    })
}

fn model_for(cfg: &RunConfig, variant: Variant) -> Result<ModelParams, CliError> {
    ModelParams::new(variant, cfg.lambda, cfg.a, cfg.b, cfg.rho, cfg.r, cfg.tau)
        .map_err(CliError::Lib)
}

/// Gamma-OU legs need a positive regularizer; fall back to the shipped
/// default when the config says zero.
fn gamma_settings(cfg: &RunConfig) -> QuadratureSettings {
    let mut s = cfg.settings();
    if !(s.eps > 0.0) {
        s.eps = 1e-4;
    }
    s
}

/// Run the cross-check suite; returns the report text and whether every
/// check passed (inconclusive counts as non-failing).
pub fn run_validate(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let rows = vec![
        check_kappa(cfg)?,
        check_transform(cfg)?,
        check_charfn_mc(cfg)?,
        check_price_mc(cfg)?,
        check_hedge_mc(cfg)?,
        check_inversion(cfg)?,
        check_alpha_independence(cfg)?,
    ];
    let mut text = format!("{:<28} {:<5} detail\n", "check", "state");
    let (mut pass, mut warn, mut fail) = (0, 0, 0);
    for row in &rows {
        match row.outcome {
            Outcome::Pass => pass += 1,
            Outcome::Inconclusive => warn += 1,
            Outcome::Fail => fail += 1,
        }
        text.push_str(&format!(
            "{:<28} {:<5} {}\n",
            row.name,
            row.outcome.label(),
            row.detail
        ));
    }
    text.push_str(&format!("summary pass={pass} warn={warn} fail={fail}\n"));
    Ok((text, fail == 0))
}

/// Condition report: which representations the configured model admits.
pub fn run_check(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let p = cfg.model()?;
    let report = p.check_conditions(cfg.maturity);
    let two_b = 2.0 * b_function(cfg.lambda, cfg.maturity);
    debug_assert_eq!(two_b, report.two_b_maturity);
    let pricing = if report.needs_eps_pricing {
        "regularized contour required (eps > 0)"
    } else {
        "plain contour admissible"
    };
    let hedging = if report.hedging_integrable {
        format!(
            "allowed: 2 B(T) = {} < u_hat = {}",
            fmt_sig(report.two_b_maturity),
            fmt_sig(report.u_hat)
        )
    } else {
        format!(
            "disallowed: 2 B(T) = {} >= u_hat = {}",
            fmt_sig(report.two_b_maturity),
            fmt_sig(report.u_hat)
        )
    };
    let text = format!(
        "variant    {}\nu_hat      {}\n2 B(T)     {}\nu_hat > 0  {}\npricing    {}\nhedging    {}\n",
        p.variant,
        fmt_sig(report.u_hat),
        fmt_sig(report.two_b_maturity),
        if report.u_hat_positive { "yes" } else { "no" },
        pricing,
        hedging,
    );
    Ok((text, report.u_hat_positive && report.hedging_integrable))
}
