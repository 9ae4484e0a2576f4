//! The Legendre approximation `x / (A log x − B)` and its error functional.
//!
//! For a prime `p` the pointwise error is
//! `E(p, B) = p / (log p − B) − π(p) − 1`, the `−1` because Legendre counted
//! 1 as a prime. Averaging `E` over the primes in a range gives a function of
//! `B` that is strictly increasing for `B` below `log` of the smallest sample,
//! so its unique root is found by bisection.

use rayon::prelude::*;

use crate::bisect::{bisect, Bisection};
use crate::error::{Error, Result};
use crate::logint::{li, li_pv, EvalAccuracy};
use crate::primes::PrimeTable;
use crate::scalar::{CompensatedSum, Real};

/// Legendre's published constant.
pub const LEGENDRE_CONSTANT: f64 = 1.08366;

/// The ten constants of the classic average-error table.
pub const TABLE1_CONSTANTS: [f64; 10] = [
    1.0700, 1.0725, 1.0750, 1.0775, 1.0800, 1.0825, 1.0850, 1.0875, 1.0900, 1.0925,
];

/// Primes per chunk in the parallel reduction. Fixed so results do not
/// depend on the thread count.
pub const REDUCTION_CHUNK: usize = 4096;

pub const DEFAULT_TOL: f64 = 1e-6;
const MAX_BISECTIONS: usize = 200;

/// `x / (slope · log x − constant)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreModel<T> {
    pub slope: T,
    pub constant: T,
}

impl<T: Real> LegendreModel<T> {
    pub fn new(slope: T, constant: T) -> Result<Self> {
        if !(slope > T::zero()) {
            return Err(Error::Domain(format!("slope must be positive, got {slope}")));
        }
        Ok(Self { slope, constant })
    }

    /// Unit slope.
    pub fn with_constant(constant: T) -> Self {
        Self {
            slope: T::one(),
            constant,
        }
    }

    pub fn legendre() -> Self {
        Self::with_constant(T::lit(LEGENDRE_CONSTANT))
    }

    pub fn label(&self) -> String {
        if self.slope == T::one() {
            format!("B={}", self.constant)
        } else {
            format!("A={},B={}", self.slope, self.constant)
        }
    }

    pub fn value(&self, x: T) -> Result<T> {
        let denom = self.slope * x.ln() - self.constant;
        if !(denom > T::zero()) {
            return Err(Error::Domain(format!(
                "nonpositive denominator {denom} at x = {x}: B must stay below A log x"
            )));
        }
        Ok(x / denom)
    }
}

pub fn legendre_value<T: Real>(x: T, model: &LegendreModel<T>) -> Result<T> {
    model.value(x)
}

/// What the Legendre value is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// The exact prime count.
    ExactPi,
    /// `li(x) = ∫_2^x dt/log t`.
    Li,
    /// `Li(x) = li(x) + Li(2)`.
    LiPv,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::ExactPi => "pi",
            Target::Li => "li",
            Target::LiPv => "Li",
        }
    }
}

/// Averaging conventions left implicit by a bare "average over the primes".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorConvention {
    /// Subtract 1 from every sample (1 counted as a prime).
    pub unity_offset: bool,
    /// Smallest sample point; only primes are sampled.
    pub range_start: u64,
    pub range_end: u64,
    pub target: Target,
    /// Count `p` itself in `π(p)`; when off, `π(p) − 1` is used.
    pub include_endpoint_primes: bool,
}

impl Default for ErrorConvention {
    fn default() -> Self {
        Self {
            unity_offset: true,
            range_start: 3,
            range_end: 1_000_000,
            target: Target::ExactPi,
            include_endpoint_primes: true,
        }
    }
}

impl ErrorConvention {
    /// `li` as the truth for `π`, primes from 5, no unity offset.
    pub fn li_target() -> Self {
        Self {
            unity_offset: false,
            range_start: 5,
            target: Target::Li,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.range_start < 2 || self.range_start > self.range_end {
            return Err(Error::Domain(format!(
                "need 2 <= range_start <= range_end, got [{}, {}]",
                self.range_start, self.range_end
            )));
        }
        Ok(())
    }
}

/// Result of locating the root of the averaged error.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub b0: T,
    /// Average error at `b0`.
    pub residual: T,
    pub bracket_history: Vec<(T, T)>,
    pub iterations: usize,
    pub convention: ErrorConvention,
}

impl<T: Real> FitResult<T> {
    fn from_bisection(run: Bisection<T>, convention: ErrorConvention) -> Self {
        Self {
            b0: run.root,
            residual: run.residual,
            bracket_history: run.brackets,
            iterations: run.iterations,
            convention,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummationOrder {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Serial,
    /// Chunked by [`REDUCTION_CHUNK`], chunks merged in order.
    Parallel,
}

/// Sample points and target values for one convention, reusable across `B`.
#[derive(Debug, Clone)]
pub struct ErrorSamples<T> {
    xs: Vec<T>,
    targets: Vec<T>,
    offset: T,
    convention: ErrorConvention,
}

impl<T: Real> ErrorSamples<T> {
    pub fn new(conv: &ErrorConvention, table: &PrimeTable) -> Result<Self> {
        Self::with_accuracy(conv, table, &EvalAccuracy::default())
    }

    pub fn with_accuracy(conv: &ErrorConvention, table: &PrimeTable, acc: &EvalAccuracy<T>) -> Result<Self> {
        conv.validate()?;
        let primes = table.primes_between(conv.range_start, conv.range_end)?;
        if primes.is_empty() {
            return Err(Error::Domain(format!(
                "no primes in [{}, {}]",
                conv.range_start, conv.range_end
            )));
        }
        let xs: Vec<T> = primes.iter().map(|&p| T::from_u64_lossy(p as u64)).collect();
        let targets = match conv.target {
            Target::ExactPi => {
                // primes[i] is the (first_index + i + 1)-th prime.
                let first_index = table.pi_int(conv.range_start - 1)?;
                let endpoint = if conv.include_endpoint_primes { 1 } else { 0 };
                (0..xs.len())
                    .map(|i| T::from_u64_lossy(first_index + i as u64 + endpoint))
                    .collect()
            }
            Target::Li => xs.par_iter().map(|&x| li(x, acc)).collect::<Result<Vec<_>>>()?,
            Target::LiPv => xs.par_iter().map(|&x| li_pv(x, acc)).collect::<Result<Vec<_>>>()?,
        };
        let offset = if conv.unity_offset { T::one() } else { T::zero() };
        Ok(Self {
            xs,
            targets,
            offset,
            convention: *conv,
        })
    }

    /// Samples with caller-supplied targets.
    pub fn with_targets(xs: Vec<T>, targets: Vec<T>, offset: T, convention: ErrorConvention) -> Result<Self> {
        if xs.len() != targets.len() || xs.is_empty() {
            return Err(Error::Domain(
                "sample and target lengths must match and be nonzero".into(),
            ));
        }
        Ok(Self {
            xs,
            targets,
            offset,
            convention,
        })
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn convention(&self) -> &ErrorConvention {
        &self.convention
    }

    fn check_constant(&self, b: T) -> Result<()> {
        let first = self.xs[0];
        if !(b < first.ln()) {
            return Err(Error::Domain(format!(
                "B = {b} must be below log({first}) = {}",
                first.ln()
            )));
        }
        Ok(())
    }

    fn error_at(&self, i: usize, model: &LegendreModel<T>) -> Result<T> {
        Ok(model.value(self.xs[i])? - self.targets[i] - self.offset)
    }

    /// Error at every sample, ascending.
    pub fn pointwise(&self, b: T) -> Result<Vec<T>> {
        let model = LegendreModel::with_constant(b);
        (0..self.len()).map(|i| self.error_at(i, &model)).collect()
    }

    /// Mean error over the samples, parallel reduction, ascending order.
    pub fn average(&self, b: T) -> Result<T> {
        self.average_with(b, SummationOrder::Ascending, Reduction::Parallel)
    }

    pub fn average_with(&self, b: T, order: SummationOrder, reduction: Reduction) -> Result<T> {
        self.check_constant(b)?;
        let model = LegendreModel::with_constant(b);
        let n = self.len();
        let index = |k: usize| match order {
            SummationOrder::Ascending => k,
            SummationOrder::Descending => n - 1 - k,
        };
        let total = match reduction {
            Reduction::Serial => {
                let mut acc = CompensatedSum::new();
                for k in 0..n {
                    acc.add(self.error_at(index(k), &model)?);
                }
                acc
            }
            Reduction::Parallel => {
                let chunks = n.div_ceil(REDUCTION_CHUNK);
                let partials = (0..chunks)
                    .into_par_iter()
                    .map(|c| {
                        let mut acc = CompensatedSum::new();
                        for k in c * REDUCTION_CHUNK..((c + 1) * REDUCTION_CHUNK).min(n) {
                            acc.add(self.error_at(index(k), &model)?);
                        }
                        Ok(acc)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut acc = CompensatedSum::new();
                for p in &partials {
                    acc.merge(p);
                }
                acc
            }
        };
        Ok(total.value() / T::from_usize(n).unwrap())
    }

    /// Bisection for the root of [`Self::average`] on `[lo, hi]`.
    pub fn solve(&self, lo: T, hi: T, tol: T) -> Result<FitResult<T>> {
        self.check_constant(hi)?;
        let run = bisect(lo, hi, tol, MAX_BISECTIONS, |b| self.average(b))?;
        Ok(FitResult::from_bisection(run, self.convention))
    }
}

/// `E(x, B)` at a single sample point.
pub fn pointwise_error<T: Real>(x: u64, b: T, conv: &ErrorConvention, table: &PrimeTable) -> Result<T> {
    let xt = T::from_u64_lossy(x);
    let model = LegendreModel::with_constant(b);
    let approx = model.value(xt)?;
    let target = match conv.target {
        Target::ExactPi => {
            let pi = table.pi_int(x)?;
            let pi = if !conv.include_endpoint_primes && table.is_prime(x)? {
                pi - 1
            } else {
                pi
            };
            T::from_u64_lossy(pi)
        }
        Target::Li => li(xt, &EvalAccuracy::default())?,
        Target::LiPv => li_pv(xt, &EvalAccuracy::default())?,
    };
    let offset = if conv.unity_offset { T::one() } else { T::zero() };
    Ok(approx - target - offset)
}

/// `⟨E(x, B)⟩` over the primes of the convention's range.
pub fn average_error<T: Real>(b: T, conv: &ErrorConvention, table: &PrimeTable) -> Result<T> {
    ErrorSamples::new(conv, table)?.average(b)
}

/// Average error for each constant, in input order.
pub fn table1<T: Real>(bs: &[T], conv: &ErrorConvention, table: &PrimeTable) -> Result<Vec<(T, T)>> {
    if bs.is_empty() {
        return Ok(Vec::new());
    }
    let samples = ErrorSamples::new(conv, table)?;
    bs.iter().map(|&b| Ok((b, samples.average(b)?))).collect()
}

/// Root of the averaged error on `[lo, hi]`.
pub fn solve_b0<T: Real>(lo: T, hi: T, tol: T, conv: &ErrorConvention, table: &PrimeTable) -> Result<FitResult<T>> {
    ErrorSamples::new(conv, table)?.solve(lo, hi, tol)
}

/// Root of the averaged error against an `li`-type target on the default bracket `[1, 1.5]`.
pub fn fit_li_target<T: Real>(conv: &ErrorConvention, table: &PrimeTable) -> Result<FitResult<T>> {
    fit_li_target_in(T::one(), T::lit(1.5), T::lit(DEFAULT_TOL), conv, table)
}

pub fn fit_li_target_in<T: Real>(
    lo: T,
    hi: T,
    tol: T,
    conv: &ErrorConvention,
    table: &PrimeTable,
) -> Result<FitResult<T>> {
    if conv.target == Target::ExactPi {
        return Err(Error::Domain("li-target fit needs an li or Li target".into()));
    }
    solve_b0(lo, hi, tol, conv, table)
}

/// `x / π(x) − log x`.
pub fn chebyshev_difference<T: Real>(x: T, table: &PrimeTable) -> Result<T> {
    if !(x >= T::lit(2.0)) {
        return Err(Error::Domain(format!("need x >= 2, got {x}")));
    }
    let pi = table.pi(x)?;
    if pi == 0 {
        return Err(Error::Domain(format!("pi({x}) = 0")));
    }
    Ok(x / T::from_u64_lossy(pi) - x.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::build_prime_table;
    use approx::assert_relative_eq;
    use std::sync::OnceLock;

    fn table() -> &'static PrimeTable {
        static T: OnceLock<PrimeTable> = OnceLock::new();
        T.get_or_init(|| build_prime_table(1_000_000).unwrap())
    }

    fn small() -> ErrorConvention {
        ErrorConvention {
            range_end: 10_000,
            ..Default::default()
        }
    }

    #[test]
    fn model_values() {
        let x = 1e6f64;
        assert_eq!(
            legendre_value(x, &LegendreModel::with_constant(0.0)).unwrap(),
            x / x.ln()
        );
        let v = legendre_value(x, &LegendreModel::legendre()).unwrap();
        assert!((v - 78_543.177_635_277_9).abs() < 1e-6);
        assert!(legendre_value(3.0, &LegendreModel::with_constant(3f64.ln())).is_err());
        assert!(LegendreModel::new(0.0, 1.0).is_err());
        assert_eq!(LegendreModel::with_constant(1.0825).label(), "B=1.0825");
    }

    #[test]
    fn pointwise_examples() {
        let t = table();
        let conv = ErrorConvention::default();
        let e = pointwise_error(3, 1.0825, &conv, t).unwrap();
        assert_relative_eq!(e, 3.0 / (3f64.ln() - 1.0825) - 3.0, max_relative = 1e-14);
        assert!(e > 150.0 && e < 200.0);
        let e = pointwise_error(999_983, 1.08366, &conv, t).unwrap();
        assert!((e - (999_983.0 / (999_983f64.ln() - 1.08366) - 78_499.0)).abs() < 1e-9);
        // Zero exactly when the model hits π(x) + 1.
        let model = LegendreModel::with_constant(0.5);
        let conv_unit = ErrorConvention {
            unity_offset: false,
            ..conv
        };
        let direct = model.value(7.0).unwrap() - 4.0;
        assert_relative_eq!(pointwise_error(7, 0.5, &conv_unit, t).unwrap(), direct);
    }

    #[test]
    fn exclusive_endpoint_matches_pointwise() {
        let conv = ErrorConvention {
            include_endpoint_primes: false,
            ..small()
        };
        let samples = ErrorSamples::<f64>::new(&conv, table()).unwrap();
        let errs = samples.pointwise(1.08).unwrap();
        for (i, &x) in samples.xs().iter().enumerate().step_by(97) {
            let e = pointwise_error(x as u64, 1.08, &conv, table()).unwrap();
            assert_relative_eq!(e, errs[i], max_relative = 1e-12);
        }
    }

    #[test]
    fn samples_match_pointwise_for_every_target() {
        for target in [Target::ExactPi, Target::Li, Target::LiPv] {
            let conv = ErrorConvention { target, ..small() };
            let samples = ErrorSamples::<f64>::new(&conv, table()).unwrap();
            let errs = samples.pointwise(1.0).unwrap();
            let mut naive = 0.0;
            for (i, &x) in samples.xs().iter().enumerate() {
                let e = pointwise_error(x as u64, 1.0, &conv, table()).unwrap();
                assert!((e - errs[i]).abs() < 1e-9);
                naive += e;
            }
            let avg = samples.average(1.0).unwrap();
            assert!((avg - naive / samples.len() as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn unity_offset_shifts_average_by_one() {
        let on = ErrorSamples::<f64>::new(&small(), table()).unwrap();
        let off = ErrorSamples::new(
            &ErrorConvention {
                unity_offset: false,
                ..small()
            },
            table(),
        )
        .unwrap();
        for b in [1.0, 1.05, 1.08, 1.09] {
            assert!((off.average(b).unwrap() - on.average(b).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn average_domain_errors() {
        let conv = ErrorConvention::default();
        assert!(matches!(average_error(1.1, &conv, table()), Err(Error::Domain(_))));
        let empty = ErrorConvention {
            range_start: 24,
            range_end: 28,
            ..conv
        };
        assert!(matches!(average_error(1.0, &empty, table()), Err(Error::Domain(_))));
        let backwards = ErrorConvention {
            range_start: 100,
            range_end: 10,
            ..conv
        };
        assert!(average_error(1.0, &backwards, table()).is_err());
        let too_far = ErrorConvention {
            range_end: 2_000_000,
            ..conv
        };
        assert!(matches!(
            average_error(1.0, &too_far, table()),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn table1_shape() {
        let conv = ErrorConvention::default();
        assert!(table1::<f64>(&[], &conv, table()).unwrap().is_empty());
        let rows = table1(&[1.0825f64, 1.0825], &conv, table()).unwrap();
        assert_eq!(rows[0], rows[1]);
        assert!((rows[0].1 - -0.95052).abs() < 0.01);
    }

    #[test]
    fn solve_small_range() {
        let samples = ErrorSamples::<f64>::new(&small(), table()).unwrap();
        let fit = samples.solve(0.9, 1.09, 1e-8).unwrap();
        assert!(fit.residual.abs() < 1e-3);
        assert!(samples.average(fit.b0 - 1e-6).unwrap() < 0.0);
        assert!(samples.average(fit.b0 + 1e-6).unwrap() > 0.0);
        for w in fit.bracket_history.windows(2) {
            let (w0, w1) = (w[0].1 - w[0].0, w[1].1 - w[1].0);
            assert!(w1 < w0);
            assert_relative_eq!(w1, w0 / 2.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn bracket_errors() {
        let conv = ErrorConvention::default();
        let err = solve_b0(1.08, 1.0825, 1e-6, &conv, table()).unwrap_err();
        assert!(matches!(err, Error::Bracketing { .. }));
        assert!(matches!(
            solve_b0(1.0, 1.2, 1e-6, &conv, table()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(fit_li_target::<f64>(&conv, table()), Err(Error::Domain(_))));
    }

    #[test]
    fn self_consistent_targets_recover_constant() {
        let xs: Vec<f64> = table()
            .primes_between(5, 100_000)
            .unwrap()
            .iter()
            .map(|&p| p as f64)
            .collect();
        let truth = LegendreModel::with_constant(1.0421);
        let targets = xs.iter().map(|&x| truth.value(x).unwrap()).collect();
        let samples = ErrorSamples::with_targets(xs, targets, 0.0, ErrorConvention::li_target()).unwrap();
        let fit = samples.solve(1.0, 1.5, 1e-9).unwrap();
        assert!((fit.b0 - 1.0421).abs() < 1e-9);
    }

    #[test]
    fn chebyshev_examples() {
        let t = table();
        assert!((chebyshev_difference(10.0, t).unwrap() - (2.5 - 10f64.ln())).abs() < 1e-15);
        assert!((chebyshev_difference(10.0f64, t).unwrap() - 0.1974).abs() < 1e-4);
        assert!((chebyshev_difference(2.0, t).unwrap() - (2.0 - 2f64.ln())).abs() < 1e-15);
        let big = chebyshev_difference(1e6, t).unwrap();
        assert!((big - (1e6 / 78_498.0 - 1e6f64.ln())).abs() < 1e-12);
        assert!((big - -1.076).abs() < 1e-3);
        assert!(chebyshev_difference(1.5, t).is_err());
    }
}
