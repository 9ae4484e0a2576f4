//! Logarithmic and exponential integrals.
//!
//! `li(x) = ∫_2^x dt / log t` and `Li(x) = Ei(log x)` (principal value from 0)
//! differ by the constant `Li(2) = Ei(log 2) ≈ 1.04516`. Everything is routed
//! through the complex exponential integral [`ei`]:
//!
//! * `|z| < 24`: Ramanujan's series
//!   `Ei(z) = γ + log z + e^{z/2} Σ (-1)^{n-1} z^n / (n! 2^{n-1}) Σ_{k<n/2} 1/(2k+1)`,
//!   whose terms peak near `e^{|z|/2}` rather than `e^{|z|}`.
//! * `|z| ≥ 24`, within `π/8` of the positive real axis: the same series up to
//!   `|z| = 40`, then the asymptotic expansion `e^z/z Σ k!/z^k`.
//! * `|z| ≥ 24` elsewhere: the continued fraction for `E1(-z)`, using
//!   `Ei(z) = -E1(-z) ± iπ` on the upper/lower half plane.
//!
//! [`li_quadrature`] integrates `e^u / u` over `[log 2, log x]` with adaptive
//! Gauss–Kronrod as an independent route to `li`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

/// Complex argument of the exponential integral.
pub type ComplexPoint<T> = Complex<T>;

/// Radius below which [`ei`] always sums its power series.
pub const SWITCH_RADIUS: f64 = 24.0;
/// Half-angle of the wedge around the positive real axis kept off the continued fraction.
pub const REAL_WEDGE: f64 = std::f64::consts::FRAC_PI_8;
/// Inside the wedge the series is trusted up to this radius.
pub const WEDGE_SERIES_RADIUS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalAccuracy<T> {
    pub abs_tol: T,
    pub max_terms: usize,
}

impl<T: Real> Default for EvalAccuracy<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-9),
            max_terms: 10_000,
        }
    }
}

impl<T: Real> EvalAccuracy<T> {
    pub fn new(abs_tol: T, max_terms: usize) -> Result<Self> {
        if !(abs_tol > T::zero()) || max_terms < 1 {
            return Err(Error::Domain(
                "abs_tol must be positive and max_terms at least 1".into(),
            ));
        }
        Ok(Self { abs_tol, max_terms })
    }

    fn converged(&self, delta: T, scale: T) -> bool {
        delta <= T::epsilon() * scale || delta <= self.abs_tol * T::lit(1e-6)
    }
}

fn accuracy_error<T: Real>(terms: usize, partial: Complex<T>) -> Error {
    Error::Accuracy {
        terms,
        partial: format!("{partial}"),
    }
}

/// Exponential integral `Ei(z)` on the principal branch.
pub fn ei<T: Real>(z: ComplexPoint<T>, acc: &EvalAccuracy<T>) -> Result<ComplexPoint<T>> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.re == T::zero() && z.im == T::zero() {
        return Err(Error::Domain("Ei has a logarithmic singularity at 0".into()));
    }
    let r = z.norm();
    if r < T::lit(SWITCH_RADIUS) {
        return ei_series(z, acc);
    }
    if z.re > T::zero() && z.im.abs() < z.re * T::lit(REAL_WEDGE).tan() {
        if r <= T::lit(WEDGE_SERIES_RADIUS) {
            ei_series(z, acc)
        } else {
            ei_asymptotic(z, acc)
        }
    } else {
        ei_continued_fraction(z, acc)
    }
}

/// `Ei(x)` for real `x ≠ 0`; for `x < 0` this is `-E1(-x)`.
pub fn ei_real<T: Real>(x: T, acc: &EvalAccuracy<T>) -> Result<T> {
    ei(Complex::new(x, T::zero()), acc).map(|v| v.re)
}

/// Ramanujan's rapidly converging series.
pub fn ei_series<T: Real>(z: ComplexPoint<T>, acc: &EvalAccuracy<T>) -> Result<ComplexPoint<T>> {
    let two = T::lit(2.0);
    let mut term = z;
    let mut inner = T::one();
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    re.add(term.re);
    im.add(term.im);
    let r = z.norm();
    let mut n = 1usize;
    loop {
        n += 1;
        if n > acc.max_terms {
            let partial = Complex::new(re.value(), im.value());
            return Err(accuracy_error(acc.max_terms, partial));
        }
        term = term * (-z) / (two * T::from_usize(n).unwrap());
        if n % 2 == 1 {
            inner = inner + T::one() / T::from_usize(n).unwrap();
        }
        let d = term * inner;
        re.add(d.re);
        im.add(d.im);
        let sum = Complex::new(re.value(), im.value());
        if T::from_usize(n).unwrap() > r && acc.converged(d.norm(), sum.norm()) {
            return Ok(Complex::new(T::EULER_GAMMA, T::zero()) + z.ln() + (z / two).exp() * sum);
        }
    }
}

/// `-E1(-z) ± iπ` with `E1` from its continued fraction (modified Lentz).
///
/// Converges everywhere off the positive real axis, slowly near it.
pub fn ei_continued_fraction<T: Real>(z: ComplexPoint<T>, acc: &EvalAccuracy<T>) -> Result<ComplexPoint<T>> {
    if z.im == T::zero() && z.re > T::zero() {
        return Err(Error::Domain(
            "continued fraction does not cover the positive real axis".into(),
        ));
    }
    let tiny = T::min_positive_value().sqrt();
    let w = -z;
    let one = Complex::new(T::one(), T::zero());
    let mut b = w + one;
    let mut c = Complex::new(T::one() / tiny, T::zero());
    let mut d = one / b;
    let mut h = d;
    for i in 1..=acc.max_terms {
        let a = -T::from_usize(i * i).unwrap();
        b = b + T::lit(2.0);
        d = one / (d * a + b);
        c = b + one * a / c;
        let delta = c * d;
        h = h * delta;
        if acc.converged((delta - one).norm(), T::one()) {
            let e1 = h * (-w).exp();
            return Ok(-e1 + branch_jump(z));
        }
    }
    Err(accuracy_error(acc.max_terms, -h * (-w).exp() + branch_jump(z)))
}

/// Asymptotic expansion `e^z/z Σ k!/z^k` truncated at its smallest term.
///
/// Fails with an accuracy error when the smallest term exceeds `abs_tol`
/// relative to the sum, which happens for small `|z|`.
pub fn ei_asymptotic<T: Real>(z: ComplexPoint<T>, acc: &EvalAccuracy<T>) -> Result<ComplexPoint<T>> {
    let one = Complex::new(T::one(), T::zero());
    let mut sum = one;
    let mut term = one;
    for k in 1..=acc.max_terms {
        let next = term * T::from_usize(k).unwrap() / z;
        if next.norm() >= term.norm() {
            let value = (z.exp() / z) * sum + branch_jump(z);
            if term.norm() > acc.abs_tol * sum.norm() {
                return Err(accuracy_error(k, value));
            }
            return Ok(value);
        }
        term = next;
        sum = sum + term;
        if acc.converged(term.norm(), sum.norm()) {
            return Ok((z.exp() / z) * sum + branch_jump(z));
        }
    }
    Err(accuracy_error(acc.max_terms, (z.exp() / z) * sum + branch_jump(z)))
}

fn branch_jump<T: Real>(z: Complex<T>) -> Complex<T> {
    let pi = T::PI();
    if z.im > T::zero() || (z.im == T::zero() && z.re < T::zero() && z.im.is_sign_positive()) {
        Complex::new(T::zero(), pi)
    } else if z.im < T::zero() || (z.im == T::zero() && z.re < T::zero()) {
        Complex::new(T::zero(), -pi)
    } else {
        Complex::new(T::zero(), T::zero())
    }
}

/// `Li(2) = Ei(log 2)`.
pub fn li_offset<T: Real>(acc: &EvalAccuracy<T>) -> Result<T> {
    ei_real(T::LN_2(), acc)
}

/// `li(x) = ∫_2^x dt / log t`, evaluated as `Ei(log x) − Ei(log 2)`.
///
/// Arguments in `(1, 2)` are accepted and give negative values.
pub fn li<T: Real>(x: T, acc: &EvalAccuracy<T>) -> Result<T> {
    if !(x > T::one()) || !x.is_finite() {
        return Err(Error::Domain(format!("li is evaluated for x > 1, got {x}")));
    }
    if x == T::lit(2.0) {
        return Ok(T::zero());
    }
    Ok(ei_real(x.ln(), acc)? - li_offset(acc)?)
}

/// `Li(x) = Ei(log x)`, the principal-value integral from 0.
pub fn li_pv<T: Real>(x: T, acc: &EvalAccuracy<T>) -> Result<T> {
    if !(x > T::one()) || !x.is_finite() {
        return Err(Error::Domain(format!("Li is evaluated for x > 1, got {x}")));
    }
    ei_real(x.ln(), acc)
}

/// Truncated asymptotic expansion `Σ_{l<terms} l! x / (log x)^{l+1}`.
pub fn li_asymptotic<T: Real>(x: T, terms: usize) -> Result<T> {
    if !(x > T::one()) || !x.is_finite() {
        return Err(Error::Domain(format!("expansion needs x > 1, got {x}")));
    }
    if !(1..=20).contains(&terms) {
        return Err(Error::Domain(format!("terms must lie in 1..=20, got {terms}")));
    }
    let log_x = x.ln();
    let mut term = x / log_x;
    let mut sum = term;
    for l in 1..terms {
        term = term * T::from_usize(l).unwrap() / log_x;
        sum = sum + term;
    }
    Ok(sum)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = (a + b) * half;
    let radius = (b - a) * half;
    let fc = f(center);
    let mut kronrod = fc * T::lit(GK_WEIGHTS[7]);
    let mut gauss = fc * T::lit(GAUSS_WEIGHTS[3]);
    for j in 0..7 {
        let dx = radius * T::lit(GK_NODES[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * T::lit(GK_WEIGHTS[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(GAUSS_WEIGHTS[j / 2]);
        }
    }
    (kronrod * radius, ((kronrod - gauss) * radius).abs())
}

/// Adaptive 7/15-point Gauss–Kronrod quadrature with a global error budget.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, abs_tol: T, max_intervals: usize) -> Result<T> {
    let mut intervals = vec![{
        let (v, e) = gauss_kronrod(&f, a, b);
        (a, b, v, e)
    }];
    loop {
        let total: CompensatedSum<T> = intervals.iter().map(|iv| iv.2).collect();
        let err: T = intervals.iter().map(|iv| iv.3).fold(T::zero(), |s, e| s + e);
        let budget = abs_tol.max(T::epsilon() * T::lit(4.0) * total.value().abs());
        if err <= budget {
            return Ok(total.value());
        }
        if intervals.len() >= max_intervals {
            return Err(Error::Accuracy {
                terms: intervals.len(),
                partial: format!("{}", total.value()),
            });
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let mid = (lo + hi) * T::lit(0.5);
        let (v1, e1) = gauss_kronrod(&f, lo, mid);
        let (v2, e2) = gauss_kronrod(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// `li(x)` by direct quadrature of `e^u/u` on `[log 2, log x]`.
pub fn li_quadrature<T: Real>(x: T, acc: &EvalAccuracy<T>) -> Result<T> {
    if !(x > T::one()) || !x.is_finite() {
        return Err(Error::Domain(format!("li is evaluated for x > 1, got {x}")));
    }
    integrate(
        |u: T| u.exp() / u,
        T::LN_2(),
        x.ln(),
        acc.abs_tol * T::lit(1e-2),
        acc.max_terms,
    )
}
