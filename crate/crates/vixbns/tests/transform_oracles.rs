//! Damped payoff transform against direct quadrature of its defining
//! integral, summed over half-periods of the oscillation.

mod common;

use common::g_hat_by_quadrature;
use vixbns::transform::{g_hat, PayoffTransformQuery};
use vixbns::{ModelParams, Variant, VixCoefficients};

fn section5_coeffs(variant: Variant) -> VixCoefficients {
    ModelParams::new(variant, 0.5783, 1.4338, 11.6641, -1.2606, 0.007, 0.0833)
        .unwrap()
        .vix_coefficients()
}

#[test]
fn closed_form_matches_oscillatory_quadrature() {
    for variant in [Variant::GammaOu, Variant::IgOu] {
        let coeffs = section5_coeffs(variant);
        for k in [coeffs.vix_floor(), 0.18588, 0.3] {
            for alpha in [0.75, 1.75, 3.0] {
                for v in [0.0, 0.5, -0.5, 2.0, -2.0, 10.0, -10.0, 50.0, -50.0] {
                    let query = PayoffTransformQuery::new(v, alpha, k, coeffs).unwrap();
                    let closed = g_hat(&query);
                    let quad = g_hat_by_quadrature(v, alpha, k, &coeffs);
                    let rel = (closed - quad).norm() / quad.norm();
                    assert!(
                        rel <= 1e-8,
                        "{variant} v={v} K={k} alpha={alpha}: rel {rel:.2e} ({closed} vs {quad})"
                    );
                }
            }
        }
    }
}

#[test]
fn pure_damping_case_is_real_and_positive() {
    // v = 0 with K at the floor: no oscillation, strictly positive payoff
    // mass, so the transform is a positive real number
    let coeffs = section5_coeffs(Variant::GammaOu);
    let k = coeffs.vix_floor();
    for alpha in [0.75, 1.75, 3.0] {
        let query = PayoffTransformQuery::new(0.0, alpha, k, coeffs).unwrap();
        let val = g_hat(&query);
        assert!(val.re > 0.0 && val.im.abs() <= 1e-15 * val.re, "{val}");
    }
}

#[test]
fn transform_decays_when_strike_grows() {
    let coeffs = section5_coeffs(Variant::GammaOu);
    let q_near = PayoffTransformQuery::new(2.0, 1.75, 0.15, coeffs).unwrap();
    let q_far = PayoffTransformQuery::new(2.0, 1.75, 0.45, coeffs).unwrap();
    assert!(g_hat(&q_far).norm() < g_hat(&q_near).norm());
}
