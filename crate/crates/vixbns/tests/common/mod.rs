//! Test-side reference integrators, kept independent of the library's
//! Gauss-Kronrod driver: plain adaptive Simpson plus Lévy-measure
//! integrals for both kernels.

#![allow(dead_code)]

use num_complex::Complex64;

const SQRT_TAU: f64 = 2.506_628_274_631_000_502_415_765_284_811_05;

/// exp(z) - 1 without cancellation for small |z|.
pub fn cexpm1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // z (1 + z/2 (1 + z/3 (1 + z/4))): relative error ~ |z|^4 / 120
        z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)))
    } else {
        z.exp() - 1.0
    }
}

fn simpson_rule(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + 4.0 * fm + fb) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(fa, flm, fm, m - a);
    let right = simpson_rule(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson over one interval to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_rule(fa, fm, fb, b - a);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Adaptive Simpson across consecutive breakpoints, splitting the
/// tolerance evenly.
pub fn simpson_panels<F: Fn(f64) -> Complex64>(f: &F, breakpoints: &[f64], tol: f64) -> Complex64 {
    assert!(breakpoints.len() >= 2);
    let per = tol / (breakpoints.len() - 1) as f64;
    breakpoints
        .windows(2)
        .map(|w| simpson(f, w[0], w[1], per))
        .sum()
}

pub fn simpson_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    simpson(&|x| Complex64::new(f(x), 0.0), a, b, tol).re
}

/// Geometric breakpoints from `a` toward `b`, finest near `a`.
pub fn geometric_panels(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut pts = vec![a];
    let mut w = b - a;
    let mut inner = Vec::new();
    for _ in 0..n {
        w *= 0.5;
        inner.push(a + w);
    }
    inner.reverse();
    pts.extend(inner);
    pts.push(b);
    pts
}

/// int_0^{x_max} f(x) lambda a b e^{-b x} dx: the gamma kernel's Lévy
/// integral by direct quadrature.
pub fn levy_integral_gamma<F: Fn(f64) -> Complex64>(
    lambda: f64,
    a: f64,
    b: f64,
    f: F,
    x_max: f64,
    tol: f64,
) -> Complex64 {
    let density = move |x: f64| {
        let weight = (-b * x).exp();
        if weight == 0.0 {
            // f may overflow out here while the true integrand is ~e^{-(b-u)x};
            // skip the multiplication so inf * 0 cannot poison the sum
            return Complex64::new(0.0, 0.0);
        }
        lambda * a * b * weight * f(x)
    };
    let panels = geometric_panels(0.0, x_max, 24);
    simpson_panels(&density, &panels, tol)
}

/// IG kernel's Lévy integral after the substitution x = y^2:
///
///   int f(x) nu(dx) = (lambda a / sqrt(2 pi))
///                     int_0^{y_max} g(y) (1 + b^2 y^2) e^{-b^2 y^2 / 2} dy,
///
/// where g(y) = f(y^2) / y^2 must be supplied with its finite y -> 0
/// limit built in (the measure's x^{-3/2} head cancels against it, and
/// the Jacobian 2y dy absorbs the density's leading 1/2).
pub fn levy_integral_ig<G: Fn(f64) -> Complex64>(
    lambda: f64,
    a: f64,
    b: f64,
    g: G,
    y_max: f64,
    tol: f64,
) -> Complex64 {
    let density = move |y: f64| {
        let by = b * y;
        let weight = (-0.5 * by * by).exp();
        if weight == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        g(y) * ((1.0 + by * by) * weight)
    };
    let panels = geometric_panels(0.0, y_max, 16);
    simpson_panels(&density, &panels, tol) * (lambda * a / SQRT_TAU)
}

/// Reference kappa(u) = int (e^{ux} - 1) nu(dx) by quadrature, dispatched
/// on the variant. `u` must satisfy Re(u) < u_hat with enough margin that
/// the integrand's tail fits inside the truncation range.
pub fn kappa_by_quadrature(params: &vixbns::ModelParams, u: Complex64, tol: f64) -> Complex64 {
    match params.variant {
        vixbns::Variant::GammaOu => {
            // tail e^{-(b - Re u) x}: reach 50 decades past the slowest decay
            let x_max = 120.0 / (params.b - u.re.max(0.0));
            levy_integral_gamma(
                params.lambda,
                params.a,
                params.b,
                |x| cexpm1(u * x),
                x_max,
                tol,
            )
        }
        vixbns::Variant::IgOu => {
            let u_hat = 0.5 * params.b * params.b;
            let y_max = (120.0 / (u_hat - u.re.max(0.0))).sqrt();
            levy_integral_ig(
                params.lambda,
                params.a,
                params.b,
                |y| {
                    if y == 0.0 {
                        u
                    } else {
                        cexpm1(u * (y * y)) / (y * y)
                    }
                },
                y_max,
                tol,
            )
        }
    }
}

/// int_0^inf (sqrt(b_v x + c_v) - K)^+ e^{(iv - alpha) x} dx, truncated
/// once the damping reaches e^{-42}. The integrand vanishes below the
/// kink x_K = (K^2 - c_v)/b_v and is analytic above it, so each
/// half-period panel is smooth.
pub fn g_hat_by_quadrature(
    v: f64,
    alpha: f64,
    k: f64,
    coeffs: &vixbns::VixCoefficients,
) -> Complex64 {
    let (b_v, c_v) = (coeffs.b_v, coeffs.c_v);
    let x_kink = ((k * k - c_v) / b_v).max(0.0);
    let integrand =
        move |x: f64| Complex64::new(-alpha * x, v * x).exp() * ((b_v * x + c_v).sqrt() - k);
    let x_max = x_kink + 42.0 / alpha;
    if v == 0.0 {
        return simpson(&integrand, x_kink, x_max, 1e-14);
    }
    let h = (std::f64::consts::PI / v.abs()).min(x_max - x_kink);
    let mut total = Complex64::new(0.0, 0.0);
    let mut lo = x_kink;
    while lo < x_max {
        let hi = (lo + h).min(x_max);
        total += simpson(&integrand, lo, hi, 3e-16);
        lo = hi;
    }
    total
}
