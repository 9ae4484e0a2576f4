use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use legendre_core::bias::{crossover_report_with, error_tracks, CROSSOVER_PROBES};
use legendre_core::legendre::{ErrorSamples, LegendreModel};
use legendre_core::primes::iroot;
use legendre_core::riemann::{bias_magnitude_comparison, explicit_pi_estimate, pi_from_f_inversion_exact, ZeroTable};
use legendre_core::{
    bias_scan, build_prime_table, table1, Error, ErrorConvention, EvalAccuracy, PiCache, PrimeTable, Target,
    LEGENDRE_CONSTANT, TABLE1_CONSTANTS,
};

use crate::{Cli, Command, Shared, TargetArg};

pub const CACHE_FILE: &str = "pi-table.txt";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e {
                Error::OutOfRange { .. } | Error::Resource(_) => 1,
                Error::Io(_) | Error::Format(_) => 2,
                Error::Domain(_) | Error::Accuracy { .. } | Error::Bracketing { .. } => 3,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<()> {
    let s = &cli.shared;
    if s.tol.is_nan() || s.tol <= 0.0 {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", s.tol)));
    }
    let mut out = open_output(&s.out)?;
    match &cli.command {
        Command::Sieve => cmd_sieve(s, &mut out),
        Command::Table1 => cmd_table1(s, &mut out),
        Command::Fit { bracket_lo, bracket_hi } => cmd_fit(s, *bracket_lo, *bracket_hi, &mut out),
        Command::Bias { lo, hi } => cmd_bias(s, *lo, *hi, &mut out),
        Command::Tracks { grid, no_li } => cmd_tracks(s, *grid, !*no_li, &mut out),
        Command::Crossover { window, stride } => cmd_crossover(s, *window, *stride, &mut out),
        Command::Riemann {
            check_inversion,
            partial_sums,
            x,
            k,
        } => cmd_riemann(s, *check_inversion, *partial_sums, x, k, &mut out),
    }?;
    out.flush()?;
    Ok(())
}

fn open_output(path: &str) -> CliResult<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn cache_path(s: &Shared) -> PathBuf {
    s.cache_dir.join(CACHE_FILE)
}

fn read_cache(s: &Shared) -> CliResult<Option<PiCache>> {
    let path = cache_path(s);
    if !path.exists() {
        return Ok(None);
    }
    Ok(Some(PiCache::read(BufReader::new(File::open(path)?))?))
}

fn check_limit(limit: u64) -> CliResult<u64> {
    if limit < 2 {
        return Err(CliError::Usage(format!("--limit must be at least 2, got {limit}")));
    }
    Ok(limit)
}

/// Sieves to `--limit`, else to the cached limit, else to `fallback`. Never
/// enlarges a cached limit; queries beyond it fail with a re-sieve hint.
fn prime_table(s: &Shared, fallback: u64) -> CliResult<PrimeTable> {
    let cache = read_cache(s)?;
    let limit = match (s.limit, &cache) {
        (Some(l), _) => check_limit(l)?,
        (None, Some(c)) => c.limit,
        (None, None) => fallback,
    };
    let table = build_prime_table(limit)?;
    if let Some(c) = cache.filter(|c| c.limit <= table.limit()) {
        c.validate_against(&table)?;
    }
    Ok(table)
}

fn convention(s: &Shared) -> ErrorConvention {
    let target = match s.target {
        TargetArg::Pi => Target::ExactPi,
        TargetArg::Li => Target::Li,
        TargetArg::LiPv => Target::LiPv,
    };
    let (default_start, default_offset) = match target {
        Target::ExactPi => (3, true),
        _ => (5, false),
    };
    ErrorConvention {
        unity_offset: default_offset && !s.no_unity_offset,
        range_start: s.start.unwrap_or(default_start),
        range_end: s.end,
        target,
        include_endpoint_primes: !s.exclude_endpoint,
    }
}

fn parse_b_list(s: &Shared) -> CliResult<Option<Vec<f64>>> {
    let Some(raw) = &s.b_list else { return Ok(None) };
    raw.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad --b-list entry `{v}`: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()
        .map(Some)
}

fn cmd_sieve(s: &Shared, out: &mut dyn Write) -> CliResult<()> {
    let limit = check_limit(s.limit.unwrap_or(1_000_000))?;
    let table = build_prime_table(limit)?;
    fs::create_dir_all(&s.cache_dir)?;
    let file = File::create(cache_path(s))?;
    table.write_cache(BufWriter::new(file))?;
    writeln!(out, "limit={} primes={}", table.limit(), table.len())?;
    Ok(())
}

fn cmd_table1(s: &Shared, out: &mut dyn Write) -> CliResult<()> {
    let bs = parse_b_list(s)?.unwrap_or_else(|| TABLE1_CONSTANTS.to_vec());
    let conv = convention(s);
    let rows = if bs.is_empty() {
        Vec::new()
    } else {
        let table = prime_table(s, conv.range_end)?;
        table1(&bs, &conv, &table)?
    };
    writeln!(out, "B,average_error")?;
    for (b, avg) in rows {
        writeln!(out, "{b},{avg}")?;
    }
    Ok(())
}

fn cmd_fit(s: &Shared, lo: Option<f64>, hi: Option<f64>, out: &mut dyn Write) -> CliResult<()> {
    let conv = convention(s);
    let (default_lo, default_hi) = match conv.target {
        Target::ExactPi => (1.0825, 1.0850),
        _ => (1.0, 1.5),
    };
    let table = prime_table(s, conv.range_end)?;
    let samples = ErrorSamples::new(&conv, &table)?;
    let fit = samples.solve(lo.unwrap_or(default_lo), hi.unwrap_or(default_hi), s.tol)?;
    let last = fit.bracket_history.last().copied().unwrap_or((fit.b0, fit.b0));
    writeln!(
        out,
        "target={} start={} end={} unity_offset={} samples={}",
        conv.target.name(),
        conv.range_start,
        conv.range_end,
        conv.unity_offset,
        samples.len()
    )?;
    writeln!(out, "B0={}", fit.b0)?;
    writeln!(out, "residual={}", fit.residual)?;
    writeln!(out, "iterations={}", fit.iterations)?;
    writeln!(out, "bracket={},{}", last.0, last.1)?;
    writeln!(out, "delta={}", LEGENDRE_CONSTANT - fit.b0)?;
    Ok(())
}

fn cmd_bias(s: &Shared, lo: u64, hi: Option<u64>, out: &mut dyn Write) -> CliResult<()> {
    let hi = hi.unwrap_or(s.end);
    let table = prime_table(s, hi)?;
    let report = bias_scan::<f64>(lo, hi, &table)?;
    writeln!(
        out,
        "lo={} hi={} samples={} min_gap={} min_at={} violations={}",
        report.lo,
        report.hi,
        report.samples,
        report.min_gap,
        report.min_at,
        report.violations.len()
    )?;
    if !report.violations.is_empty() {
        let shown: Vec<String> = report.violations.iter().take(50).map(u64::to_string).collect();
        writeln!(out, "violations_at={}", shown.join(","))?;
    }
    Ok(())
}

fn cmd_tracks(s: &Shared, grid: Option<u64>, include_li: bool, out: &mut dyn Write) -> CliResult<()> {
    let conv = ErrorConvention {
        target: Target::ExactPi,
        ..convention(s)
    };
    let bs = parse_b_list(s)?.unwrap_or_else(|| vec![1.0, 1.0825, 1.085, LEGENDRE_CONSTANT]);
    let models: Vec<LegendreModel<f64>> = bs.iter().map(|&b| LegendreModel::with_constant(b)).collect();
    let table = prime_table(s, conv.range_end)?;
    let xs: Vec<f64> = match grid {
        Some(0) => return Err(CliError::Usage("--grid must be positive".into())),
        Some(stride) => (1..=conv.range_end / stride)
            .map(|i| i * stride)
            .filter(|&x| x >= conv.range_start)
            .map(|x| x as f64)
            .collect(),
        None => table
            .primes_between(conv.range_start.max(2), conv.range_end)?
            .iter()
            .map(|&p| p as f64)
            .collect(),
    };
    let series = error_tracks(&xs, &models, include_li, &conv, &table)?;
    series.write_csv(out)?;
    Ok(())
}

fn cmd_crossover(s: &Shared, window: usize, stride: u64, out: &mut dyn Write) -> CliResult<()> {
    let table = prime_table(s, 10_000_000)?;
    let limit = table.limit();
    let report = crossover_report_with::<f64>(limit, window, stride, &table)?;
    let crossover = report.crossover.map_or("none".to_string(), |x| x.to_string());
    writeln!(
        out,
        "limit={limit} stride={stride} window={window} crossover={crossover}"
    )?;
    writeln!(out, "x,li_error,legendre_error,li_wins")?;
    for p in &report.probes {
        writeln!(out, "{},{},{},{}", p.x, p.li_error, p.legendre_error, p.li_wins())?;
    }
    if let Some(p) = report.probe(*CROSSOVER_PROBES.last().unwrap()) {
        writeln!(
            out,
            "noticeably_worse_at={} ratio={} flag={}",
            p.x,
            p.li_error / p.legendre_error,
            report.noticeably_worse_at(p.x).unwrap_or(false)
        )?;
    }
    Ok(())
}

fn cmd_riemann(
    s: &Shared,
    check_inversion: bool,
    partial_sums: bool,
    xs: &[f64],
    ks: &[usize],
    out: &mut dyn Write,
) -> CliResult<()> {
    for &x in xs {
        if !x.is_finite() || x < 0.0 {
            return Err(CliError::Usage(format!("--x must be finite and nonnegative, got {x}")));
        }
    }
    let zeros = match &s.zeros_file {
        Some(path) => ZeroTable::load(path)?,
        None => ZeroTable::bundled(),
    };
    let acc = EvalAccuracy::default();
    let max_x = xs.iter().copied().fold(0.0, f64::max);

    if check_inversion {
        if xs.is_empty() {
            return Err(CliError::Usage("--check-inversion needs --x".into()));
        }
        let table = prime_table(s, (max_x as u64).max(2))?;
        for &x in xs {
            let inverted = pi_from_f_inversion_exact(x, &table)?;
            let pi = table.pi(x)?;
            let verdict = if inverted == legendre_core::Rational::from_integer(pi as i128) {
                "exact"
            } else if inverted + legendre_core::Rational::new(1, 2) == legendre_core::Rational::from_integer(pi as i128)
            {
                "half-count"
            } else {
                "prime-power"
            };
            let value = *inverted.numer() as f64 / *inverted.denom() as f64;
            writeln!(out, "x={x} inversion={value} pi={pi} {verdict}")?;
        }
        return Ok(());
    }

    if partial_sums {
        let xs = if xs.is_empty() { vec![1e6] } else { xs.to_vec() };
        let table = prime_table(s, xs.iter().copied().fold(2.0, f64::max) as u64)?;
        writeln!(out, "x,k,estimate,pi,abs_error")?;
        for &x in &xs {
            let pi = table.pi(x)?;
            for &k in ks {
                if k > zeros.len() {
                    return Err(CliError::Usage(format!(
                        "k = {k} exceeds the {} zeros available",
                        zeros.len()
                    )));
                }
                let est = explicit_pi_estimate(x, &zeros.zeros()[..k], &acc)?;
                writeln!(out, "{x},{k},{est},{pi},{}", (est - pi as f64).abs())?;
            }
        }
        return Ok(());
    }

    let xs = if xs.is_empty() {
        vec![1e4, 1e5, 1e6, 1e7]
    } else {
        xs.to_vec()
    };
    let needed = iroot(xs.iter().copied().fold(0.0, f64::max) as u64, 2).max(2);
    let table = prime_table(s, needed)?;
    writeln!(
        out,
        "x,squares_term,squares_approx,first_zero_term,first_zero_bound,squares_dominate"
    )?;
    for &x in &xs {
        let c = bias_magnitude_comparison(x, &zeros, &table, &acc)?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            c.x, c.squares_term, c.squares_approx, c.first_zero_term, c.first_zero_bound, c.squares_dominate
        )?;
    }
    Ok(())
}
