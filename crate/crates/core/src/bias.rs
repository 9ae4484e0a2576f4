//! The bias `li(x) > π(x)`, per-sample error tracks, and the point where the
//! Legendre approximation starts losing to `li`.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::legendre::{ErrorConvention, LegendreModel};
use crate::logint::{li, li_quadrature, EvalAccuracy};
use crate::primes::PrimeTable;
use crate::scalar::Real;

/// Integers up to this bound are scanned densely by [`bias_scan`].
pub const DENSE_SCAN_BOUND: u64 = 1000;
pub const DEFAULT_GRID_STRIDE: u64 = 10_000;
/// Points at which [`crossover_report`] records both error magnitudes.
pub const CROSSOVER_PROBES: [u64; 4] = [1_000_000, 3_000_000, 6_000_000, 10_000_000];
/// `li` counts as noticeably better once its error is at most this fraction of Legendre's.
pub const NOTICEABLY_WORSE_RATIO: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct BiasReport<T> {
    pub lo: u64,
    pub hi: u64,
    pub samples: usize,
    /// Minimum of `li(x) − π(x)` over the samples.
    pub min_gap: T,
    pub min_at: u64,
    /// Samples where `li(x) − π(x) ≤ 0`.
    pub violations: Vec<u64>,
}

/// Evaluates `li(x) − π(x)` at every prime in `[lo, hi]` and at every integer
/// in `[lo, min(hi, 1000)]`.
pub fn bias_scan<T: Real>(lo: u64, hi: u64, table: &PrimeTable) -> Result<BiasReport<T>> {
    if lo < 2 || lo >= hi {
        return Err(Error::Domain(format!("need 2 <= lo < hi, got [{lo}, {hi}]")));
    }
    let mut points: Vec<u64> = table.primes_between(lo, hi)?.iter().map(|&p| p as u64).collect();
    points.extend(lo..=hi.min(DENSE_SCAN_BOUND));
    points.sort_unstable();
    points.dedup();

    let acc = EvalAccuracy::default();
    let gaps = points
        .par_iter()
        .map(|&x| Ok(li(T::from_u64_lossy(x), &acc)? - T::from_u64_lossy(table.pi_int(x)?)))
        .collect::<Result<Vec<T>>>()?;

    let (min_idx, &min_gap) = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite gaps"))
        .expect("nonempty scan");
    let violations = points
        .iter()
        .zip(&gaps)
        .filter(|(_, &g)| g <= T::zero())
        .map(|(&x, _)| x)
        .collect();
    Ok(BiasReport {
        lo,
        hi,
        samples: points.len(),
        min_gap,
        min_at: points[min_idx],
        violations,
    })
}

/// Route used for `li` in the tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiMethod {
    #[default]
    ExponentialIntegral,
    Quadrature,
}

/// Per-sample error tracks keyed by model label, in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackSeries<T> {
    xs: Vec<T>,
    tracks: Vec<(String, Vec<T>)>,
}

impl<T: Real> TrackSeries<T> {
    pub fn new(xs: Vec<T>) -> Self {
        Self { xs, tracks: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, values: Vec<T>) -> Result<()> {
        let label = label.into();
        if values.len() != self.xs.len() {
            return Err(Error::Domain(format!(
                "track `{label}` has {} values for {} samples",
                values.len(),
                self.xs.len()
            )));
        }
        if self.get(&label).is_some() {
            return Err(Error::Domain(format!("duplicate track label `{label}`")));
        }
        self.tracks.push((label, values));
        Ok(())
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.tracks.iter().map(|(l, _)| l.as_str())
    }

    pub fn get(&self, label: &str) -> Option<&[T]> {
        self.tracks.iter().find(|(l, _)| l == label).map(|(_, v)| v.as_slice())
    }

    /// CSV with header `x,<label>,...` and one row per sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "x")?;
        for (label, _) in &self.tracks {
            write!(out, ",{label}")?;
        }
        writeln!(out)?;
        for (i, x) in self.xs.iter().enumerate() {
            write!(out, "{x}")?;
            for (_, values) in &self.tracks {
                write!(out, ",{}", values[i])?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Error tracks `model(x) − π(x) − offset` for each model, plus
/// `li(x) − π(x) − offset` under the label `li` when requested.
pub fn error_tracks<T: Real>(
    xs: &[T],
    models: &[LegendreModel<T>],
    include_li: bool,
    conv: &ErrorConvention,
    table: &PrimeTable,
) -> Result<TrackSeries<T>> {
    error_tracks_with(xs, models, include_li, LiMethod::default(), conv, table)
}

pub fn error_tracks_with<T: Real>(
    xs: &[T],
    models: &[LegendreModel<T>],
    include_li: bool,
    method: LiMethod,
    conv: &ErrorConvention,
    table: &PrimeTable,
) -> Result<TrackSeries<T>> {
    let offset = if conv.unity_offset { T::one() } else { T::zero() };
    let counts = xs
        .iter()
        .map(|&x| table.pi(x).map(T::from_u64_lossy))
        .collect::<Result<Vec<T>>>()?;
    let mut series = TrackSeries::new(xs.to_vec());
    for model in models {
        let values = xs
            .par_iter()
            .zip(&counts)
            .map(|(&x, &pi)| Ok(model.value(x)? - pi - offset))
            .collect::<Result<Vec<T>>>()?;
        series.push(model.label(), values)?;
    }
    if include_li {
        let acc = EvalAccuracy::default();
        let values = xs
            .par_iter()
            .zip(&counts)
            .map(|(&x, &pi)| {
                let l = match method {
                    LiMethod::ExponentialIntegral => li(x, &acc)?,
                    LiMethod::Quadrature => li_quadrature(x, &acc)?,
                };
                Ok(l - pi - offset)
            })
            .collect::<Result<Vec<T>>>()?;
        series.push("li", values)?;
    }
    Ok(series)
}

/// Both absolute errors at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverProbe<T> {
    pub x: u64,
    /// `|li(x) − π(x)|`.
    pub li_error: T,
    /// `|legendre(x) − π(x) − 1|`.
    pub legendre_error: T,
}

impl<T: Real> CrossoverProbe<T> {
    pub fn li_wins(&self) -> bool {
        self.li_error < self.legendre_error
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverReport<T> {
    pub limit: u64,
    pub stride: u64,
    pub window: usize,
    /// First grid point from which `li` wins on `window` consecutive samples.
    pub crossover: Option<u64>,
    pub probes: Vec<CrossoverProbe<T>>,
    /// Grid errors, in ascending `x`.
    pub grid: Vec<CrossoverProbe<T>>,
}

impl<T: Real> CrossoverReport<T> {
    pub fn probe(&self, x: u64) -> Option<&CrossoverProbe<T>> {
        self.probes.iter().find(|p| p.x == x)
    }

    /// `li` error at most half the Legendre error at `x`.
    pub fn noticeably_worse_at(&self, x: u64) -> Option<bool> {
        self.probe(x)
            .map(|p| p.li_error <= T::lit(NOTICEABLY_WORSE_RATIO) * p.legendre_error)
    }
}

fn probe_at<T: Real>(
    x: u64,
    model: &LegendreModel<T>,
    table: &PrimeTable,
    acc: &EvalAccuracy<T>,
) -> Result<CrossoverProbe<T>> {
    let xt = T::from_u64_lossy(x);
    let pi = T::from_u64_lossy(table.pi_int(x)?);
    Ok(CrossoverProbe {
        x,
        li_error: (li(xt, acc)? - pi).abs(),
        legendre_error: (model.value(xt)? - pi - T::one()).abs(),
    })
}

/// Compares `li` against Legendre's formula on the grid `stride, 2·stride, … ≤ limit`.
pub fn crossover_report<T: Real>(limit: u64, window: usize, table: &PrimeTable) -> Result<CrossoverReport<T>> {
    crossover_report_with(limit, window, DEFAULT_GRID_STRIDE, table)
}

pub fn crossover_report_with<T: Real>(
    limit: u64,
    window: usize,
    stride: u64,
    table: &PrimeTable,
) -> Result<CrossoverReport<T>> {
    if window < 1 || stride < 1 {
        return Err(Error::Domain("window and stride must be at least 1".into()));
    }
    if limit > table.limit() {
        return Err(Error::OutOfRange {
            what: "crossover limit",
            value: limit as f64,
            limit: table.limit(),
        });
    }
    let model = LegendreModel::legendre();
    let acc = EvalAccuracy::default();
    let grid = (1..=limit / stride)
        .into_par_iter()
        .map(|i| probe_at(i * stride, &model, table, &acc))
        .collect::<Result<Vec<_>>>()?;

    let mut run = 0;
    let mut crossover = None;
    for (i, p) in grid.iter().enumerate() {
        run = if p.li_wins() { run + 1 } else { 0 };
        if run == window {
            crossover = Some(grid[i + 1 - window].x);
            break;
        }
    }
    let probes = CROSSOVER_PROBES
        .iter()
        .filter(|&&x| x <= limit)
        .map(|&x| probe_at(x, &model, table, &acc))
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossoverReport {
        limit,
        stride,
        window,
        crossover,
        probes,
        grid,
    })
}
