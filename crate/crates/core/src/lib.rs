//! Exact prime counting, logarithmic integrals, and the error functional of
//! Legendre's approximation `π(x) ≈ x / (log x − B)`.
//!
//! The floating-point routines are generic over [`Real`] (`f32` or `f64`);
//! the aliases below fix the scalar to `f64`, which is what the command-line
//! front end and all reference values use. Weighted prime-power counts are
//! exact rationals ([`Rational`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bias;
pub mod bisect;
pub mod error;
pub mod legendre;
pub mod logint;
pub mod primes;
pub mod riemann;
pub mod scalar;

pub use bias::{bias_scan, crossover_report, error_tracks, LiMethod};
pub use bisect::bisect;
pub use error::{Error, Result};
pub use legendre::{
    average_error, chebyshev_difference, fit_li_target, legendre_value, pointwise_error, solve_b0, table1,
    ErrorConvention, Reduction, SummationOrder, Target, LEGENDRE_CONSTANT, TABLE1_CONSTANTS,
};
pub use logint::{ei, li, li_asymptotic, li_pv, li_quadrature};
pub use primes::{build_prime_table, mobius, PiCache, PrimePowerWeight, PrimeTable, Rational, SieveOptions};
pub use riemann::{f_from_pi, pi_from_f_inversion, zero_pair_term};
pub use scalar::{CompensatedSum, Real};

pub type LegendreModel = legendre::LegendreModel<f64>;
pub type FitResult = legendre::FitResult<f64>;
pub type ErrorSamples = legendre::ErrorSamples<f64>;
pub type EvalAccuracy = logint::EvalAccuracy<f64>;
pub type ComplexPoint = logint::ComplexPoint<f64>;
pub type BiasReport = bias::BiasReport<f64>;
pub type TrackSeries = bias::TrackSeries<f64>;
pub type CrossoverReport = bias::CrossoverReport<f64>;
pub type ZetaZero = riemann::ZetaZero<f64>;
pub type ZeroTable = riemann::ZeroTable<f64>;
pub type BiasComparison = riemann::BiasComparison<f64>;
