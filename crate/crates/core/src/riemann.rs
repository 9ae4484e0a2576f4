//! Explicit-formula machinery: Riemann's weighted prime-power count `f`, the
//! Möbius inversion `π(x) = Σ μ(n)/n f(x^{1/n})`, and the zero terms
//! `Li(x^ρ) + Li(x^{1−ρ})`.
//!
//! Zeros are data, loaded from a text file; the real part `1/2` is fixed.
//! Since `1 − ρ = conj(ρ)` on the critical line, a zero's pair term is
//! `2 Re Ei(ρ log x)`.

use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::logint::{ei, li_pv, EvalAccuracy};
use crate::primes::{iroot, mobius, rational_to_real, split_real, PrimeTable, Rational};
use crate::scalar::Real;

/// Ordinate of the first zero, as commonly quoted.
pub const FIRST_ZERO_ORDINATE: f64 = 14.134725;

const BUNDLED_ZEROS: &str = include_str!("../data/zeta_zeros.txt");

/// A nontrivial zero `1/2 + i·ordinate`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ZetaZero<T> {
    ordinate: T,
}

impl<T: Real> ZetaZero<T> {
    pub fn new(ordinate: T) -> Result<Self> {
        if !(ordinate > T::zero()) || !ordinate.is_finite() {
            return Err(Error::Domain(format!("zero ordinate must be positive, got {ordinate}")));
        }
        Ok(Self { ordinate })
    }

    pub fn ordinate(&self) -> T {
        self.ordinate
    }

    pub fn rho(&self) -> Complex<T> {
        Complex::new(T::lit(0.5), self.ordinate)
    }

    pub fn modulus(&self) -> T {
        self.rho().norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable<T> {
    zeros: Vec<ZetaZero<T>>,
    source: String,
}

impl<T: Real> ZeroTable<T> {
    /// Parses the zeros file format: `#` comment lines (the first one is the
    /// provenance), then one ascending positive ordinate per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut source = None;
        let mut zeros: Vec<ZetaZero<T>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                source.get_or_insert_with(|| comment.trim().to_string());
                continue;
            }
            let value: f64 = line
                .parse()
                .map_err(|e| Error::Format(format!("line {}: `{line}`: {e}", i + 1)))?;
            let zero = ZetaZero::new(T::lit(value))
                .map_err(|_| Error::Format(format!("line {}: ordinate must be positive, got {line}", i + 1)))?;
            if let Some(prev) = zeros.last() {
                if zero.ordinate <= prev.ordinate {
                    return Err(Error::Format(format!(
                        "line {}: ordinates must be strictly ascending",
                        i + 1
                    )));
                }
            }
            zeros.push(zero);
        }
        let first = zeros
            .first()
            .ok_or_else(|| Error::Format("zeros file has no ordinates".into()))?;
        if (first.ordinate - T::lit(FIRST_ZERO_ORDINATE)).abs() > T::lit(1e-4) {
            return Err(Error::Format(format!(
                "first ordinate {} is not the first zero {FIRST_ZERO_ORDINATE}",
                first.ordinate
            )));
        }
        Ok(Self {
            zeros,
            source: source.unwrap_or_default(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The first 100 zeros shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_ZEROS).expect("bundled zeros file is valid")
    }

    pub fn zeros(&self) -> &[ZetaZero<T>] {
        &self.zeros
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// Largest `n` with `2^n ≤ m`, i.e. the last `n` for which `f(x^{1/n})` can be nonzero.
fn inversion_length(m: u64) -> u32 {
    if m < 2 {
        0
    } else {
        63 - m.leading_zeros()
    }
}

/// `Σ_{n ≤ log₂ x} μ(n)/n · f(x^{1/n})` in exact arithmetic.
pub fn pi_from_f_inversion_exact<T: Real>(x: T, table: &PrimeTable) -> Result<Rational> {
    let (m, exact) = split_real(x)?;
    let mut total = Rational::from_integer(0);
    for n in 1..=inversion_length(m) {
        let mu = mobius(n as u64)?;
        if mu == 0 {
            continue;
        }
        total += table.f_of_root(m, exact, n)? * Rational::new(mu as i128, n as i128);
    }
    Ok(total)
}

/// `π(x)` recovered from `f` by Möbius inversion. Equals `π(x)` away from prime
/// powers and `π(x) − 1/2` at a prime.
pub fn pi_from_f_inversion<T: Real>(x: T, table: &PrimeTable) -> Result<T> {
    pi_from_f_inversion_exact(x, table).map(|r| rational_to_real(&r))
}

/// `Σ_k π'(x^{1/k}) / k` with `π'` counting an exact prime with weight 1/2.
pub fn f_from_pi_exact<T: Real>(x: T, table: &PrimeTable) -> Result<Rational> {
    let (m, exact) = split_real(x)?;
    let mut total = Rational::from_integer(0);
    for k in 1..=inversion_length(m) {
        let root = iroot(m, k);
        let mut count = Rational::from_integer(table.pi_int(root)? as i128);
        if exact && root.checked_pow(k) == Some(m) && table.is_prime(root)? {
            count -= Rational::new(1, 2);
        }
        total += count / Rational::from_integer(k as i128);
    }
    Ok(total)
}

pub fn f_from_pi<T: Real>(x: T, table: &PrimeTable) -> Result<T> {
    f_from_pi_exact(x, table).map(|r| rational_to_real(&r))
}

/// `Li(x^ρ) + Li(x^{1−ρ})` as a complex number, with `Li(x^s) = Ei(s log x)`.
pub fn zero_pair_complex<T: Real>(x: T, zero: &ZetaZero<T>, acc: &EvalAccuracy<T>) -> Result<Complex<T>> {
    if !(x > T::one()) {
        return Err(Error::Domain(format!("zero terms need x > 1, got {x}")));
    }
    let log_x = x.ln();
    let rho = zero.rho();
    let one = Complex::new(T::one(), T::zero());
    Ok(ei(rho * log_x, acc)? + ei((one - rho) * log_x, acc)?)
}

/// Real contribution of one zero and its conjugate.
pub fn zero_pair_term<T: Real>(x: T, zero: &ZetaZero<T>, acc: &EvalAccuracy<T>) -> Result<T> {
    zero_pair_complex(x, zero, acc).map(|c| c.re)
}

/// Size of the oscillation carried by a zero: `2 |Ei(ρ log x) − iπ|`.
///
/// The `iπ` is the branch constant of `Ei` in the upper half plane; it cancels
/// in the pair, leaving `2 Re[e^{iγ log x} · (size)]`.
pub fn zero_pair_amplitude<T: Real>(x: T, zero: &ZetaZero<T>, acc: &EvalAccuracy<T>) -> Result<T> {
    if !(x > T::one()) {
        return Err(Error::Domain(format!("zero terms need x > 1, got {x}")));
    }
    let v = ei(zero.rho() * x.ln(), acc)? - Complex::new(T::zero(), T::PI());
    Ok(T::lit(2.0) * v.norm())
}

/// Leading-order size `2√x / (|ρ| log x)` of a zero's contribution.
pub fn zero_pair_bound<T: Real>(x: T, zero: &ZetaZero<T>) -> T {
    T::lit(2.0) * x.sqrt() / (zero.modulus() * x.ln())
}

/// Squares of primes against the first zero at one `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasComparison<T> {
    pub x: T,
    /// The `n = 2` inversion term `−f(√x)/2`.
    pub squares_term: T,
    /// Its approximation `−√x / log x`.
    pub squares_approx: T,
    /// `μ(1)/1 · (Li(x^ρ₁) + Li(x^{1−ρ₁}))`.
    pub first_zero_term: T,
    pub first_zero_bound: T,
    /// `|squares_term| > |first_zero_term|`.
    pub squares_dominate: bool,
}

/// Needs `table` to reach `√x`; `x ≥ 10^4`.
pub fn bias_magnitude_comparison<T: Real>(
    x: T,
    zeros: &ZeroTable<T>,
    table: &PrimeTable,
    acc: &EvalAccuracy<T>,
) -> Result<BiasComparison<T>> {
    if !(x >= T::lit(1e4)) {
        return Err(Error::Domain(format!("comparison is made for x >= 10^4, got {x}")));
    }
    let first = zeros
        .zeros()
        .first()
        .ok_or_else(|| Error::Domain("empty zero table".into()))?;
    let (m, exact) = split_real(x)?;
    let f_sqrt: T = rational_to_real(&table.f_of_root(m, exact, 2)?);
    let squares_term = -f_sqrt / T::lit(2.0);
    let first_zero_term = zero_pair_term(x, first, acc)?;
    Ok(BiasComparison {
        x,
        squares_term,
        squares_approx: -x.sqrt() / x.ln(),
        first_zero_term,
        first_zero_bound: zero_pair_bound(x, first),
        squares_dominate: squares_term.abs() > first_zero_term.abs(),
    })
}

/// `Σ_n μ(n)/n [Li(x^{1/n}) − Σ_{ρ in zeros} (Li(x^{ρ/n}) + Li(x^{(1−ρ)/n})) − log 2]`,
/// truncated where `x^{1/n} < 2`. The integral term of the full formula is dropped.
pub fn explicit_pi_estimate<T: Real>(x: T, zeros: &[ZetaZero<T>], acc: &EvalAccuracy<T>) -> Result<T> {
    let (m, _) = split_real(x)?;
    if m < 2 {
        return Err(Error::Domain(format!("estimate needs x >= 2, got {x}")));
    }
    let mut total = T::zero();
    for n in 1..=inversion_length(m) {
        let mu = mobius(n as u64)?;
        if mu == 0 {
            continue;
        }
        let y = x.powf(T::one() / T::from_u32(n).unwrap());
        let mut term = li_pv(y, acc)? - T::LN_2();
        for zero in zeros {
            term = term - zero_pair_term(y, zero, acc)?;
        }
        total = total + T::from_i8(mu).unwrap() * term / T::from_u32(n).unwrap();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::build_prime_table;

    fn acc() -> EvalAccuracy<f64> {
        EvalAccuracy::default()
    }

    #[test]
    fn inversion_examples() {
        let t = build_prime_table(1000).unwrap();
        assert_eq!(
            pi_from_f_inversion_exact(100.0, &t).unwrap(),
            Rational::from_integer(25)
        );
        assert_eq!(pi_from_f_inversion_exact(10.0, &t).unwrap(), Rational::from_integer(4));
        assert_eq!(pi_from_f_inversion(1.99, &t).unwrap(), 0.0);
        assert_eq!(pi_from_f_inversion_exact(97.0, &t).unwrap(), Rational::new(49, 2));
        assert_eq!(pi_from_f_inversion(100.5, &t).unwrap(), 25.0);
    }

    #[test]
    fn f_from_pi_examples() {
        let t = build_prime_table(100).unwrap();
        assert_eq!(f_from_pi_exact(10.0, &t).unwrap(), Rational::new(16, 3));
        assert_eq!(f_from_pi(3.0, &t).unwrap(), 1.5);
        assert_eq!(f_from_pi(1.5, &t).unwrap(), 0.0);
    }

    #[test]
    fn f_routes_agree_below_ten_thousand() {
        let t = build_prime_table(10_000).unwrap();
        for x in 1..=10_000u64 {
            let a = f_from_pi_exact(x as f64, &t).unwrap();
            let b = t.f_weighted_count_exact(x as f64).unwrap();
            assert_eq!(a, b, "x = {x}");
        }
    }

    #[test]
    fn zero_table_parsing() {
        let z = ZeroTable::<f64>::bundled();
        assert_eq!(z.len(), 100);
        assert!((z.zeros()[0].ordinate() - 14.134725).abs() < 1e-6);
        assert!(z.source().starts_with("source:"));

        assert!(ZeroTable::<f64>::parse("# x\n14.134725\n14.0\n").is_err());
        assert!(ZeroTable::<f64>::parse("# x\n14.134725\n-21\n").is_err());
        assert!(ZeroTable::<f64>::parse("# x\n21.02\n").is_err());
        assert!(ZeroTable::<f64>::parse("# x\n").is_err());
        assert!(ZeroTable::<f64>::parse("# x\n14.134725\nabc\n").is_err());
        let ok = ZeroTable::<f64>::parse("# from somewhere\n\n14.134725142\n21.022039639\n").unwrap();
        assert_eq!(ok.source(), "from somewhere");
        assert_eq!(ok.len(), 2);
    }

    #[test]
    fn zero_pair_is_real_and_bounded() {
        let zeros = ZeroTable::<f64>::bundled();
        let rho1 = &zeros.zeros()[0];
        for x in [10.0, 1e3, 1e6, 1e7] {
            let c = zero_pair_complex(x, rho1, &acc()).unwrap();
            assert!(c.im.abs() < 1e-9, "x = {x}: {c}");
        }
        let v = zero_pair_term(1e6, rho1, &acc()).unwrap();
        // 30-digit reference: 2 Re Ei(ρ₁ log 10^6) with the tabulated ordinate 14.134725142.
        assert!((v - 5.174_551_845_217_248).abs() < 1e-9);
        assert!(v.abs() <= zero_pair_bound(1e6, rho1) * 1.05);
        assert!(zero_pair_term(1.0, rho1, &acc()).is_err());
    }

    #[test]
    fn amplitude_tracks_leading_order_bound() {
        let zeros = ZeroTable::<f64>::bundled();
        for z in zeros.zeros().iter().take(20) {
            let a = zero_pair_amplitude(1e6, z, &acc()).unwrap();
            let b = zero_pair_bound(1e6, z);
            assert!((a / b - 1.0).abs() < 0.01);
            assert!(zero_pair_term(1e6, z, &acc()).unwrap().abs() <= a * (1.0 + 1e-12));
        }
    }

    #[test]
    fn comparison_at_ten_thousand() {
        let t = build_prime_table(1000).unwrap();
        let zeros = ZeroTable::bundled();
        let c = bias_magnitude_comparison(1e4, &zeros, &t, &acc()).unwrap();
        // f(100) by enumeration: 25 primes, squares 4,9,25,49 (4 × 1/2),
        // cubes 8,27 (2 × 1/3), 16 and 81 (2 × 1/4), 32 (1/5), 64 (1/6).
        let f100 = 25.0 + 2.0 + 2.0 / 3.0 + 0.5 + 0.2 + 1.0 / 6.0;
        assert!((c.squares_term + f100 / 2.0).abs() < 1e-12);
        assert!(c.squares_dominate);
        assert!(bias_magnitude_comparison(9999.0, &zeros, &t, &acc()).is_err());
    }

    #[test]
    fn explicit_estimate_without_zeros_is_riemann_r() {
        // R(10^6) − Σ μ(n)/n log 2 over n ≤ 19, 30-digit reference.
        let v = explicit_pi_estimate(1e6, &[], &acc()).unwrap();
        assert!((v - 78_527.381_774_074_2).abs() < 1e-6);
    }
}
