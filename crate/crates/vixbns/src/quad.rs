//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands on real
//! intervals.
//!
//! The kernel is the classical QUADPACK 15-point Kronrod rule with the
//! 7-point Gauss rule embedded; the driver refines the worst panel first
//! until the summed error estimate drops below the requested absolute
//! tolerance or the node budget runs out.

// Node and weight tables keep their published precision.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronrod abscissae for the 15-point rule on [-1, 1] (positive half).
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 7-point Gauss rule.
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule.
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// QUADPACK error rescaling: damps the raw |K15 - G7| difference using the
/// integral of |f - mean| so that near-converged panels are not overrated.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One 15-point Kronrod evaluation on [a, b].
///
/// Returns (integral estimate, error estimate, integral of |f|).
pub fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv = [Complex64::new(0.0, 0.0); 15];
    let f_center = f(center);
    fv[14] = f_center;

    let mut res_gauss = f_center * WG7[3];
    let mut res_kronrod = f_center * WGK15[7];
    let mut res_abs = f_center.norm() * WGK15[7];

    for j in 0..7 {
        let abscissa = half * XGK15[j];
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        let fsum = f1 + f2;
        res_kronrod += fsum * WGK15[j];
        res_abs += (f1.norm() + f2.norm()) * WGK15[j];
        if j % 2 == 1 {
            // odd Kronrod indices carry the embedded Gauss nodes
            res_gauss += fsum * WG7[j / 2];
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK15[7] * (f_center - mean).norm();
    for j in 0..7 {
        res_asc += WGK15[j] * ((fv[2 * j] - mean).norm() + (fv[2 * j + 1] - mean).norm());
    }

    let raw_err = (res_kronrod - res_gauss).norm() * half.abs();
    let value = res_kronrod * half;
    let err = rescale_error(raw_err, res_abs * half.abs(), res_asc * half.abs());
    (value, err, res_abs * half.abs())
}

/// The 15 Kronrod nodes and weights mapped to [a, b], for callers that need
/// a frozen rule they can re-apply to many integrands.
pub fn gk15_nodes(a: f64, b: f64) -> [(f64, f64); 15] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut out = [(0.0f64, 0.0f64); 15];
    for j in 0..7 {
        out[2 * j] = (center - half * XGK15[j], WGK15[j] * half);
        out[2 * j + 1] = (center + half * XGK15[j], WGK15[j] * half);
    }
    out[14] = (center, WGK15[7] * half);
    out
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    /// Summed panel error estimates.
    pub error: f64,
    /// Number of integrand evaluations used.
    pub nodes: usize,
}

/// Integrate `f` over the panels defined by consecutive `breakpoints`,
/// refining the worst panel until the total error estimate is below
/// `abs_tol` or `max_nodes` evaluations have been spent.
///
/// `breakpoints` must be strictly increasing with at least two entries; a
/// well-chosen initial subdivision (e.g. dyadic shells for integrands
/// concentrated near the origin) matters more than the panel count.
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    max_nodes: usize,
) -> Result<QuadResult> {
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::new();
    let mut nodes = 0usize;
    let mut total_err = 0.0f64;

    for w in breakpoints.windows(2) {
        let (value, err, _) = gk15(&mut f, w[0], w[1]);
        nodes += 15;
        total_err += err;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }

    while total_err > abs_tol && nodes < max_nodes {
        let worst = heap.pop().expect("heap never empties");
        // A panel too narrow to split signals a point-like difficulty the
        // rule cannot resolve further; treat its estimate as final.
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            heap.push(worst);
            break;
        }
        let (v1, e1, _) = gk15(&mut f, worst.a, mid);
        let (v2, e2, _) = gk15(&mut f, mid, worst.b);
        nodes += 30;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
    }

    // Re-sum panels in position order with compensation: deterministic and
    // immune to the error drift of the incremental running total.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut err = 0.0f64;
    for p in &panels {
        let y = p.value - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        err += p.err;
    }

    if err > abs_tol {
        return Err(Error::QuadratureFailure {
            requested: abs_tol,
            achieved: err,
            nodes,
        });
    }
    Ok(QuadResult {
        value: sum,
        error: err,
        nodes,
    })
}

/// Convenience wrapper for real-valued integrands.
pub fn integrate_adaptive_real<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    max_nodes: usize,
) -> Result<(f64, f64)> {
    let r = integrate_adaptive(
        |x| Complex64::new(f(x), 0.0),
        breakpoints,
        abs_tol,
        max_nodes,
    )?;
    Ok((r.value.re, r.error))
}

/// Breakpoints [a, b] split into `n` geometrically graded panels toward `a`.
///
/// Useful for integrable endpoint singularities: the first panel has width
/// (b - a) * ratio^(n-1).
pub fn graded_toward(a: f64, b: f64, n: usize, ratio: f64) -> Vec<f64> {
    assert!(n >= 1 && ratio > 0.0 && ratio < 1.0);
    let mut pts = Vec::with_capacity(n + 1);
    pts.push(a);
    let mut width = b - a;
    let mut edges = Vec::with_capacity(n);
    for _ in 0..n - 1 {
        width *= ratio;
        edges.push(a + width);
    }
    edges.reverse();
    pts.extend(edges);
    pts.push(b);
    pts
}

/// Symmetric dyadic shell breakpoints (-v_max, ..., -2, -1, 0, 1, 2, ..., v_max)
/// for Fourier-type integrands concentrated near the origin.
pub fn dyadic_shells(v_max: f64) -> Vec<f64> {
    assert!(v_max > 1.0);
    let mut pos = vec![1.0f64];
    let mut v = 1.0f64;
    while v * 2.0 < v_max {
        v *= 2.0;
        pos.push(v);
    }
    pos.push(v_max);
    let mut pts: Vec<f64> = pos.iter().map(|x| -x).rev().collect();
    pts.push(0.0);
    pts.extend(pos.iter());
    pts
}
