//! Sieve-backed exact prime counting and the arithmetic functions built on it.
//!
//! A [`PrimeTable`] holds every prime up to an inclusive limit together with
//! exact counts `π(x)` at a fixed checkpoint stride. Queries at a real
//! argument `x` are answered for `⌊x⌋`; a query above the limit is an error,
//! never an extrapolation.

use std::io::{BufRead, Write};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exact rational used for prime-power weights.
pub type Rational = Ratio<i128>;

/// Default hard cap on the sieve limit.
pub const DEFAULT_MAX_LIMIT: u64 = 1_000_000_000;
pub const DEFAULT_STRIDE: u64 = 10_000;
pub const DEFAULT_SEGMENT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveOptions {
    pub segment_size: usize,
    pub stride: u64,
    pub max_limit: u64,
    pub parallel: bool,
}

impl Default for SieveOptions {
    fn default() -> Self {
        Self {
            segment_size: DEFAULT_SEGMENT,
            stride: DEFAULT_STRIDE,
            max_limit: DEFAULT_MAX_LIMIT,
            parallel: true,
        }
    }
}

/// Immutable table of primes up to `limit` with checkpointed counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    stride: u64,
    primes: Vec<u32>,
    /// `checkpoints[i] = π(i * stride)`.
    checkpoints: Vec<u64>,
}

/// A prime power `base^exponent` carrying the weight `Λ(n)/log n = 1/exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePowerWeight {
    pub base: u64,
    pub exponent: u32,
}

impl PrimePowerWeight {
    pub fn value(&self) -> u64 {
        self.base.pow(self.exponent)
    }

    pub fn weight(&self) -> Rational {
        Rational::new(1, self.exponent as i128)
    }
}

/// Builds a prime table with default options.
pub fn build_prime_table(limit: u64) -> Result<PrimeTable> {
    PrimeTable::build(limit, &SieveOptions::default())
}

impl PrimeTable {
    pub fn build(limit: u64, opts: &SieveOptions) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit must be at least 2, got {limit}")));
        }
        if limit > opts.max_limit {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds the cap {}",
                opts.max_limit
            )));
        }
        if opts.stride == 0 || opts.segment_size == 0 {
            return Err(Error::Domain("stride and segment size must be positive".into()));
        }
        let primes = segmented_sieve(limit, opts.segment_size, opts.parallel);
        let checkpoints = checkpoints_from(&primes, limit, opts.stride);
        Ok(Self {
            limit,
            stride: opts.stride,
            primes,
            checkpoints,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `(x, π(x))` for every checkpoint `x = i * stride ≤ limit`.
    pub fn checkpoints(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.checkpoints
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as u64 * self.stride, c))
    }

    fn check_range(&self, what: &'static str, value: f64) -> Result<()> {
        if value > self.limit as f64 {
            return Err(Error::OutOfRange {
                what,
                value,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Exact `π(n)` for an integer argument.
    pub fn pi_int(&self, n: u64) -> Result<u64> {
        self.check_range("x", n as f64)?;
        let slot = (n / self.stride) as usize;
        let start = self.checkpoints[slot] as usize;
        let scanned = self.primes[start..].iter().take_while(|&&p| p as u64 <= n).count();
        Ok(start as u64 + scanned as u64)
    }

    /// Exact `π(x) = π(⌊x⌋)`.
    pub fn pi<T: Real>(&self, x: T) -> Result<u64> {
        let (floor, _) = split_real(x)?;
        self.check_range("x", x.to_f64().unwrap_or(f64::INFINITY))?;
        self.pi_int(floor)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check_range("n", n as f64)?;
        Ok(n <= u32::MAX as u64 && self.primes.binary_search(&(n as u32)).is_ok())
    }

    /// All primes `p` with `lo ≤ p ≤ hi`, ascending.
    pub fn primes_between(&self, lo: u64, hi: u64) -> Result<&[u32]> {
        if lo < 2 {
            return Err(Error::Domain(format!("lower bound must be at least 2, got {lo}")));
        }
        if lo > hi {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        self.check_range("hi", hi as f64)?;
        let a = self.primes.partition_point(|&p| (p as u64) < lo);
        let b = self.primes.partition_point(|&p| (p as u64) <= hi);
        Ok(&self.primes[a..b])
    }

    /// Prime powers `p^k` with `k ≥ min_exponent` and `p^k ≤ n`, ordered by base then exponent.
    pub fn prime_powers(&self, n: u64, min_exponent: u32) -> Result<Vec<PrimePowerWeight>> {
        self.check_range("n", n as f64)?;
        let mut out = Vec::new();
        for &p in &self.primes {
            let p = p as u64;
            let Some(first) = p.checked_pow(min_exponent.max(1)) else {
                break;
            };
            if first > n {
                break;
            }
            let mut power = first;
            let mut k = min_exponent.max(1);
            loop {
                out.push(PrimePowerWeight { base: p, exponent: k });
                match power.checked_mul(p) {
                    Some(next) if next <= n => {
                        power = next;
                        k += 1;
                    }
                    _ => break,
                }
            }
        }
        Ok(out)
    }

    /// Riemann's weighted prime-power count `f(x)` in exact arithmetic.
    pub fn f_weighted_count_exact<T: Real>(&self, x: T) -> Result<Rational> {
        let (floor, exact) = split_real(x)?;
        self.f_of_root(floor, exact, 1)
    }

    /// `f(x) = Σ' Λ(n)/log n`, with half weight on a prime power equal to `x`.
    pub fn f_weighted_count<T: Real>(&self, x: T) -> Result<T> {
        self.f_weighted_count_exact(x).map(|r| rational_to_real(&r))
    }

    /// `f(x^{1/n})` for the real number `x` given as `(⌊x⌋, x is an integer)`.
    ///
    /// A prime power `q` lies below `x^{1/n}` iff `q^n ≤ ⌊x⌋`, and equals it iff
    /// `x` is an integer with `q^n = x`, so no floating-point root is taken.
    pub(crate) fn f_of_root(&self, floor: u64, exact: bool, n: u32) -> Result<Rational> {
        if floor < 2 {
            return Ok(Rational::from_integer(0));
        }
        let root = iroot(floor, n);
        if root < 2 {
            return Ok(Rational::from_integer(0));
        }
        self.check_range("x^(1/n)", root as f64)?;
        let half = Rational::new(1, 2);

        let mut total = Rational::from_integer(self.pi_int(root)? as i128);
        if exact && ipow(root, n) == Some(floor) && self.is_prime(root)? {
            total -= half;
        }

        // Exponents k ≥ 2: walk the powers of each prime up to ⌊x^{1/n}⌋.
        let mut counts: Vec<i128> = Vec::new();
        let mut boundary: Option<u32> = None;
        for &p in &self.primes {
            let p = p as u64;
            match p.checked_mul(p) {
                Some(sq) if sq <= root => {}
                _ => break,
            }
            let mut power = p * p;
            let mut k = 2u32;
            loop {
                if counts.len() < k as usize + 1 {
                    counts.resize(k as usize + 1, 0);
                }
                counts[k as usize] += 1;
                if exact && ipow(power, n) == Some(floor) {
                    boundary = Some(k);
                }
                match power.checked_mul(p) {
                    Some(next) if next <= root => {
                        power = next;
                        k += 1;
                    }
                    _ => break,
                }
            }
        }
        for (k, &c) in counts.iter().enumerate().skip(2) {
            total += Rational::new(c, k as i128);
        }
        if let Some(k) = boundary {
            total -= Rational::new(1, 2 * k as i128);
        }
        Ok(total)
    }

    /// Writes the π-checkpoint cache in its text format.
    pub fn write_cache<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# pi-table v1 limit={} stride={}", self.limit, self.stride)?;
        for (x, c) in self.checkpoints() {
            writeln!(out, "{x},{c}")?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Contents of a π-checkpoint cache file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiCache {
    pub limit: u64,
    pub stride: u64,
    pub entries: Vec<(u64, u64)>,
}

impl PiCache {
    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| Error::Format("empty cache file".into()))??;
        let (limit, stride) = parse_header(&header)?;
        let mut entries = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (x, c) = line
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("line {}: expected `x,pi`", lineno + 2)))?;
            let x: u64 = x
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 2)))?;
            let c: u64 = c
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 2)))?;
            if let Some(&(px, pc)) = entries.last() {
                if x <= px || c < pc {
                    return Err(Error::Format(format!("line {}: entries not ascending", lineno + 2)));
                }
            }
            if x > limit || !x.is_multiple_of(stride) {
                return Err(Error::Format(format!(
                    "line {}: checkpoint {x} off the stride grid",
                    lineno + 2
                )));
            }
            entries.push((x, c));
        }
        if entries.len() as u64 != limit / stride + 1 {
            return Err(Error::Format(format!(
                "expected {} checkpoints, found {}",
                limit / stride + 1,
                entries.len()
            )));
        }
        Ok(Self { limit, stride, entries })
    }

    /// Spot-checks three pseudo-randomly chosen checkpoints against a sieve.
    pub fn validate_against(&self, table: &PrimeTable) -> Result<()> {
        if self.limit > table.limit() {
            return Err(Error::OutOfRange {
                what: "cache limit",
                value: self.limit as f64,
                limit: table.limit(),
            });
        }
        let n = self.entries.len() as u64;
        let mut state = self.limit ^ 0x9E37_79B9_7F4A_7C15;
        for _ in 0..3 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let (x, c) = self.entries[((state >> 33) % n) as usize];
            let actual = table.pi_int(x)?;
            if actual != c {
                return Err(Error::Format(format!("cache says pi({x}) = {c}, sieve gives {actual}")));
            }
        }
        Ok(())
    }
}

fn parse_header(header: &str) -> Result<(u64, u64)> {
    let rest = header
        .strip_prefix("# pi-table v1 ")
        .ok_or_else(|| Error::Format(format!("bad cache header `{header}`")))?;
    let mut limit = None;
    let mut stride = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("limit", v)) => limit = v.parse().ok(),
            Some(("stride", v)) => stride = v.parse().ok(),
            _ => return Err(Error::Format(format!("unknown header field `{field}`"))),
        }
    }
    match (limit, stride) {
        (Some(l), Some(s)) if l >= 2 && s > 0 => Ok((l, s)),
        _ => Err(Error::Format(format!("bad cache header `{header}`"))),
    }
}

/// μ(n) by trial factorization.
pub fn mobius(n: u64) -> Result<i8> {
    if n < 1 {
        return Err(Error::Domain("mobius is defined for n >= 1".into()));
    }
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return Ok(0);
            }
            sign = -sign;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Splits a nonnegative real into `(⌊x⌋, x is an integer)`.
pub(crate) fn split_real<T: Real>(x: T) -> Result<(u64, bool)> {
    if !x.is_finite() || x < T::zero() {
        return Err(Error::Domain(format!(
            "argument must be finite and nonnegative, got {x}"
        )));
    }
    let floor = x.floor();
    let n = floor
        .to_u64()
        .ok_or_else(|| Error::Domain(format!("argument {x} too large")))?;
    Ok((n, floor == x))
}

pub(crate) fn rational_to_real<T: Real>(r: &Rational) -> T {
    let whole = r.numer().div_euclid(*r.denom());
    let frac = r.numer().rem_euclid(*r.denom());
    T::from_i128(whole).expect("integer part representable")
        + T::from_i128(frac).expect("numerator representable")
            / T::from_i128(*r.denom()).expect("denominator representable")
}

pub(crate) fn ipow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Largest `r` with `r^k ≤ n`.
pub fn iroot(n: u64, k: u32) -> u64 {
    assert!(k >= 1, "root index must be positive");
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && ipow(r, k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while ipow(r + 1, k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

fn simple_sieve(limit: usize) -> Vec<u32> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn sieve_segment(lo: u64, hi: u64, base: &[u32]) -> Vec<u32> {
    // Marks composites in [lo, hi] (inclusive), one byte per number.
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        let p = p as u64;
        if p * p > hi {
            break;
        }
        let mut m = (p * p).max(lo.div_ceil(p) * p);
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|&(i, &c)| !c && lo + i as u64 >= 2)
        .map(|(i, _)| (lo + i as u64) as u32)
        .collect()
}

fn segmented_sieve(limit: u64, segment: usize, parallel: bool) -> Vec<u32> {
    let base = simple_sieve(iroot(limit, 2) as usize);
    let seg = segment as u64;
    let count = limit / seg + 1;
    let run = |i: u64| {
        let lo = i * seg;
        let hi = (lo + seg - 1).min(limit);
        sieve_segment(lo, hi, &base)
    };
    let chunks: Vec<Vec<u32>> = if parallel {
        (0..count).into_par_iter().map(run).collect()
    } else {
        (0..count).map(run).collect()
    };
    chunks.concat()
}

fn checkpoints_from(primes: &[u32], limit: u64, stride: u64) -> Vec<u64> {
    (0..=limit / stride)
        .map(|i| primes.partition_point(|&p| p as u64 <= i * stride) as u64)
        .collect()
}
