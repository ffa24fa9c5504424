//! Pricing and local risk minimization for VIX options under
//! non-Gaussian Ornstein-Uhlenbeck stochastic volatility.
//!
//! The squared volatility follows a Lévy-driven OU process (gamma or
//! inverse-Gaussian stationary law). VIX call prices and futures come
//! from a Fourier representation of the payoff against the conditional
//! characteristic function of the terminal variance; hedge ratios in the
//! underlying futures come from the same integrals with a jump-covariance
//! weight. Monte Carlo simulation and direct density inversion provide
//! independent cross-checks.

// Guards are written `!(x > 0.0)` on purpose: unlike `x <= 0.0`, the
// negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charfn;
pub mod error;
pub mod faddeeva;
pub mod hedging;
pub mod model;
pub mod oracle;
pub mod pricing;
pub mod quad;
pub mod transform;

pub use error::{Error, Result};
pub use hedging::HedgeResult;
pub use model::{MarketState, ModelParams, Variant, VixCoefficients};
pub use oracle::{McEstimate, McSettings};
pub use pricing::{Method, PriceResult, QuadratureSettings};
