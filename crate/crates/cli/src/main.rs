//! `logdp`: classify, verify and inspect anticanonically embedded
//! quasi-smooth log del Pezzo surfaces in weighted projective 3-space.
//!
//! Exit codes: 0 success; 1 golden or cross-check mismatch; 2 not
//! quasi-smooth (`verify`) or bad usage; 3 invalid weights.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use logdp::certificates::{ke_certificate, tiger_certificate, CertificateResult};
use logdp::quasismooth::{is_quasismooth_candidate, AxisWitness, ConditionReport};
use logdp::search::SearchOptions;
use logdp::table::{parse_golden, Format, TableError, BUNDLED_GOLDEN};
use logdp::{brute_force_oracle, classify_all, multiplicity_bound, series, validate_weights, Rational};

use config::Config;

#[derive(Debug, Parser)]
#[command(name = "logdp", version, about = "Log del Pezzo hypersurfaces in P(a0,a1,a2,a3)")]
struct Cli {
    /// TOML config file; defaults to $LOGDP_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full search and print the classification table.
    Classify {
        /// table, csv or json
        #[arg(long)]
        format: Option<String>,
        /// Compare with a golden table; `paper_table` selects the bundled one.
        #[arg(long)]
        golden: Option<String>,
        /// Exponent ranges, e.g. "m1:1..14,m2:1..6,m3:1..2".
        #[arg(long)]
        m_bounds: Option<String>,
        /// Write search diagnostics and route statistics as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check one weight vector and print its certificates.
    Verify {
        #[arg(allow_negative_numbers = true, num_args = 4, required = true)]
        weights: Vec<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive scan over all weight vectors with a3 <= N.
    Oracle {
        max: Option<u64>,
        #[arg(long = "max-a3", conflicts_with = "max")]
        max_a3: Option<u64>,
        /// Compare with the classification restricted to a3 <= N.
        #[arg(long)]
        cross_check: bool,
    },
    /// JSON-lines reports for the series X_{8k+4} in P(2,2k+1,2k+1,4k+1).
    Series {
        #[arg(long, default_value = "1..5")]
        k_range: String,
    },
    /// Multiplicity bound for a cycle in weighted projective space.
    Bound {
        /// Comma-separated weights, ascending.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        dim: usize,
        /// Degree of the cycle, as p/q.
        #[arg(long)]
        degree: Rational,
        #[arg(long)]
        strengthened: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Classify { format, golden, m_bounds, report } => classify(&cfg, format, golden, m_bounds, report),
        Command::Verify { weights, json } => verify(&weights, json),
        Command::Oracle { max, max_a3, cross_check } => oracle(&cfg, max.or(max_a3).unwrap_or(150), cross_check),
        Command::Series { k_range } => series_cmd(&k_range),
        Command::Bound { weights, dim, degree, strengthened } => {
            let b = multiplicity_bound(&weights, dim, &degree, strengthened)?;
            writeln!(std::io::stdout(), "{b}")?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn search_options(cfg: &Config, m_bounds: Option<&str>) -> Result<SearchOptions> {
    let mut opts = SearchOptions::default();
    if let Some(spec) = cfg.m_bounds.as_deref() {
        opts.bounds = opts.bounds.with_overrides(spec).context("m_bounds in config")?;
    }
    if let Some(spec) = m_bounds {
        opts.bounds = opts.bounds.with_overrides(spec)?;
    }
    let s = &cfg.sampling;
    opts.sampling.members = s.members.unwrap_or(opts.sampling.members);
    opts.sampling.max_period = s.max_period.unwrap_or(opts.sampling.max_period);
    opts.sampling.min_run = s.min_run.unwrap_or(opts.sampling.min_run);
    Ok(opts)
}

fn load_golden(arg: &str) -> Result<String> {
    if arg == "paper_table" {
        return Ok(BUNDLED_GOLDEN.to_string());
    }
    std::fs::read_to_string(arg).with_context(|| format!("reading golden table {arg}"))
}

#[derive(Serialize)]
struct Report<'a> {
    bounds: String,
    diagnostics: &'a logdp::search::SearchDiagnostics,
    route_stats: &'a logdp::table::RouteStats,
}

fn classify(
    cfg: &Config,
    format: Option<String>,
    golden: Option<String>,
    m_bounds: Option<String>,
    report: Option<PathBuf>,
) -> Result<ExitCode> {
    let format: Format = format.or_else(|| cfg.format.clone()).as_deref().unwrap_or("table").parse()?;
    let opts = search_options(cfg, m_bounds.as_deref())?;
    let table = classify_all(&opts)?;
    let d = &table.diagnostics;
    if d.finite_raw != d.reference_finite_raw || d.series_raw != d.reference_series_raw {
        log::info!(
            "raw counts {} / {} differ from the reference {} / {} (different counting convention)",
            d.finite_raw,
            d.series_raw,
            d.reference_finite_raw,
            d.reference_series_raw
        );
    }
    write!(std::io::stdout(), "{}", table.render(format)?)?;
    if let Some(path) = report.or_else(|| cfg.report.clone()) {
        let r = Report { bounds: opts.bounds.to_string(), diagnostics: d, route_stats: &table.route_stats };
        std::fs::write(&path, serde_json::to_string_pretty(&r)? + "\n")
            .with_context(|| format!("writing report {}", path.display()))?;
    }
    if let Some(g) = golden.or_else(|| cfg.golden.clone()) {
        let rows = parse_golden(&load_golden(&g)?)?;
        match table.compare_golden(&rows) {
            Ok(()) => eprintln!("golden: match ({} rows)", rows.len()),
            Err(TableError::GoldenMismatch(diff)) => {
                eprint!("golden: mismatch\n{diff}");
                return Ok(ExitCode::from(1));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport {
    conditions: ConditionReport,
    tiger: CertificateResult,
    ke: CertificateResult,
}

fn describe(report: &ConditionReport) -> String {
    let mut s = String::new();
    let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
    s += &format!("vertex condition: {}\n", mark(report.vertex_ok));
    for v in &report.vertices {
        match &v.witness {
            Some(w) => s += &format!("  P{}: {} (m={}, j={})\n", v.i, w.monomial, w.m, w.j),
            None => s += &format!("  P{}: no monomial x{}^m*x_j\n", v.i, v.i),
        }
    }
    s += &format!("singular lines: {}\n", mark(report.lines_ok));
    for l in report.lines.iter().filter(|l| l.required()) {
        let (i, j) = l.pair;
        match &l.witness {
            Some(m) => s += &format!("  x{i},x{j} (gcd {}): {m}\n", l.gcd),
            None => s += &format!("  x{i},x{j} (gcd {}): no monomial in x{i},x{j}\n", l.gcd),
        }
    }
    s += &format!("axes: {}\n", mark(report.axes_ok));
    for a in &report.axes {
        let (i, j) = a.pair;
        match &a.witness {
            Some(AxisWitness::PurePair { monomial }) => s += &format!("  x{i},x{j}: {monomial}\n"),
            Some(AxisWitness::Mixed { with_k, with_l }) => s += &format!("  x{i},x{j}: {with_k}, {with_l}\n"),
            None => s += &format!("  x{i},x{j}: none\n"),
        }
    }
    s
}

fn verify(raw: &[i64], json: bool) -> Result<ExitCode> {
    let raw: [i64; 4] = raw.try_into().context("expected four weights")?;
    let w = match validate_weights(raw) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("invalid weights: {e}");
            return Ok(ExitCode::from(3));
        }
    };
    let conditions = is_quasismooth_candidate(&w);
    let ok = conditions.overall;
    let report = VerifyReport { conditions, tiger: tiger_certificate(&w), ke: ke_certificate(&w) };
    let mut out = std::io::stdout().lock();
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(out, "weights {w}, degree {}", w.degree())?;
        write!(out, "{}", describe(&report.conditions))?;
        writeln!(out, "quasi-smooth: {}", if ok { "yes" } else { "no" })?;
        writeln!(out, "line x0=x1=0 off X: {}", report.tiger.line_not_contained)?;
        writeln!(out, "no tiger: {}", report.tiger)?;
        writeln!(out, "KE: {}", report.ke)?;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn oracle(cfg: &Config, max_a3: u64, cross_check: bool) -> Result<ExitCode> {
    let found = brute_force_oracle(max_a3);
    let mut out = std::io::stdout().lock();
    for w in &found {
        writeln!(out, "{w}")?;
    }
    writeln!(out, "# {} tuples with a3 <= {max_a3}", found.len())?;
    if !cross_check {
        return Ok(ExitCode::SUCCESS);
    }
    let opts = search_options(cfg, None)?;
    let restricted = logdp::run_search(&opts)?.restricted_to(max_a3);
    if restricted == found {
        eprintln!("cross-check: pass");
        Ok(ExitCode::SUCCESS)
    } else {
        for w in found.difference(&restricted) {
            eprintln!("- {w} (oracle only)");
        }
        for w in restricted.difference(&found) {
            eprintln!("+ {w} (search only)");
        }
        eprintln!("cross-check: FAIL");
        Ok(ExitCode::from(1))
    }
}

fn parse_k_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s.split_once("..").context("expected LO..HI")?;
    let lo: u64 = lo.trim().parse().context("bad lower bound")?;
    let hi: u64 = hi.trim().trim_start_matches('=').parse().context("bad upper bound")?;
    if lo < 1 || hi < lo {
        bail!("k range must satisfy 1 <= LO <= HI, got {s}");
    }
    Ok((lo, hi))
}

fn series_cmd(range: &str) -> Result<ExitCode> {
    let (lo, hi) = parse_k_range(range)?;
    let mut out = std::io::stdout().lock();
    let mut failing = Vec::new();
    for k in lo..=hi {
        let r = series::report(k);
        if !r.lc_inequality_holds {
            failing.push(k);
        }
        writeln!(out, "{}", serde_json::to_string(&r)?)?;
    }
    if failing.is_empty() {
        eprintln!("summary: k={lo}..{hi}, lc_total < 1 for every k");
    } else {
        let ks: Vec<String> = failing.iter().map(u64::to_string).collect();
        eprintln!("summary: k={lo}..{hi}, FLAGGED lc_total >= 1 at k={}", ks.join(","));
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use logdp::search::SearchBounds;

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("1..5").unwrap(), (1, 5));
        assert_eq!(parse_k_range("2..=2").unwrap(), (2, 2));
        assert!(parse_k_range("0..3").is_err());
        assert!(parse_k_range("4..3").is_err());
        assert!(parse_k_range("4").is_err());
    }

    #[test]
    fn flags_override_config() {
        let cfg = Config { m_bounds: Some("m1:1..10,m3:1..1".into()), ..Default::default() };
        let opts = search_options(&cfg, Some("m3:1..2")).unwrap();
        assert_eq!(opts.bounds, SearchBounds { m1: (1, 10), m2: (1, 6), m3: (1, 2) });
        assert_eq!(search_options(&Config::default(), None).unwrap(), SearchOptions::default());
    }
}
