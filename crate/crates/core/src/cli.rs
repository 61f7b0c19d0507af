//! Command-line front end: suite selection, sieve sizing, report output and
//! exit statuses (0 pass, 1 verification failure, 2 usage or resource error).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::certificates::constants::C_CUTOFF;
use crate::certificates::records::RECORD_SIEVE;
use crate::certificates::report::{sorted, to_machine, to_text, to_text_one};
use crate::certificates::table1::TABLE1_SIEVE;
use crate::certificates::{
    verify_constants, verify_range, verify_records, verify_table1, CertificateError, CertificateReport, Check,
    RangeSpec,
};
use crate::densities::{d_k, delta, threshold_sweep, DensityError};
use crate::numerics::{default_precision, int, parse_decimal, NumericsError, Rational};
use crate::oracle::{census, census_d_k, census_inclusion_exclusion, OracleError, MAX_CENSUS_INDEX};
use crate::primes::{load_or_sieve, PrimeTable, PrimesError, DEFAULT_SIEVE_CAP};
use crate::tail::{
    block_artifact, crt_reports, verify_dm_identity, verify_h_monotone, verify_tail_constants,
    verify_two_primes_symbolic, TailError, DEFAULT_CRT_CAP,
};

/// Environment variable naming the prime-table cache directory.
pub const CACHE_ENV: &str = "DENSVERIFY_CACHE_DIR";

/// The `q` values run by the `crt` suite.
pub const CRT_DEMO_QS: [u64; 4] = [13, 23, 53, 101];

/// The sweep covers every `r <= SWEEP_R` and every gap starting at most here.
pub const SWEEP_R: usize = 10;
pub const SWEEP_P: u64 = 10_000;
/// The prime after `SWEEP_P`.
const SWEEP_SIEVE: u64 = 10_007;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("sieve limit {given} is below the {needed} required by the selected suites")]
    SieveTooSmall { needed: u64, given: u64 },
    #[error("precision must be a positive number, got `{0}`")]
    BadPrecision(String),
    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Primes(#[from] PrimesError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Tail(#[from] TailError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Suite {
    Constants,
    Table1,
    Ranges,
    Records,
    Tail,
    Oracle,
    Crt,
}

impl Suite {
    /// Dependency order.
    pub const ALL: [Suite; 7] = [
        Suite::Constants,
        Suite::Table1,
        Suite::Ranges,
        Suite::Records,
        Suite::Tail,
        Suite::Oracle,
        Suite::Crt,
    ];

    /// Smallest sieve limit the suite can run on.
    pub fn min_sieve(self) -> u64 {
        match self {
            Suite::Constants => C_CUTOFF,
            Suite::Table1 => TABLE1_SIEVE,
            Suite::Ranges => RangeSpec::B.sieve_needed(),
            Suite::Records => RECORD_SIEVE,
            Suite::Tail => 2,
            Suite::Oracle => SWEEP_SIEVE,
            Suite::Crt => DEFAULT_CRT_CAP,
        }
    }

    /// Suite owning a claim id, from its prefix.
    pub fn of_claim(claim_id: &str) -> Option<Suite> {
        let prefix = claim_id.split('.').next()?;
        Some(match prefix {
            "constants" => Suite::Constants,
            "table1" => Suite::Table1,
            "ranges" => Suite::Ranges,
            "records" => Suite::Records,
            "tail" => Suite::Tail,
            "oracle" => Suite::Oracle,
            "crt" => Suite::Crt,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteChoice {
    All,
    Constants,
    Table1,
    Ranges,
    Records,
    Tail,
    Oracle,
    Crt,
}

impl SuiteChoice {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            SuiteChoice::All => Suite::ALL.to_vec(),
            SuiteChoice::Constants => vec![Suite::Constants],
            SuiteChoice::Table1 => vec![Suite::Table1],
            SuiteChoice::Ranges => vec![Suite::Ranges],
            SuiteChoice::Records => vec![Suite::Records],
            SuiteChoice::Tail => vec![Suite::Tail],
            SuiteChoice::Oracle => vec![Suite::Oracle],
            SuiteChoice::Crt => vec![Suite::Crt],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub sieve_limit: u64,
    pub precision: Rational,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub suites: Vec<Suite>,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for a suite selection: the smallest sufficient sieve.
    pub fn for_suites(suites: Vec<Suite>) -> Self {
        Self {
            sieve_limit: minimum_sieve(&suites),
            precision: default_precision(),
            format: Format::Text,
            out: None,
            suites,
            cache_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let needed = minimum_sieve(&self.suites);
        if self.sieve_limit < needed {
            return Err(CliError::SieveTooSmall {
                needed,
                given: self.sieve_limit,
            });
        }
        Ok(())
    }
}

pub fn minimum_sieve(suites: &[Suite]) -> u64 {
    suites.iter().map(|s| s.min_sieve()).max().unwrap_or(2).max(2)
}

/// Exact census against the recurrence for every `0 <= m <= i <= 8`, the
/// inclusion-exclusion count, and the threshold sweep.
pub fn oracle_reports(table: &PrimeTable) -> Result<Vec<CertificateReport>, CliError> {
    let mut reports = Vec::new();
    let mut agreement = CertificateReport::new(
        "oracle.census-agreement",
        "residue census against inclusion-exclusion counts",
    );
    let mut first_density = CertificateReport::new("oracle.d_k", "k-th smallest prime divisor densities against the census");
    for i in 0..=MAX_CENSUS_INDEX {
        let c = census(i, table)?;
        let mut rep = CertificateReport::new(
            format!("oracle.i{i}"),
            format!("densities over the first {i} primes against a census modulo {}", c.modulus),
        );
        for m in 0..=i {
            rep.check(Check::equal(format!("delta_{m}({i}) = census share"), delta(m, i, table)?, c.density(m)));
        }
        reports.push(rep);
        let ie = census_inclusion_exclusion(i, table)?;
        for (m, (&a, &b)) in c.counts.iter().zip(&ie.counts).enumerate() {
            agreement.check(Check::equal(format!("i = {i}, m = {m}: census = inclusion-exclusion"), a, b));
        }
        for k in 1..=i {
            first_density.check(Check::equal(format!("d_{k}(p_{i}) = census share"), d_k(k, i, table)?, census_d_k(k, i, table)?));
        }
    }
    reports.push(agreement);
    reports.push(first_density);

    let summary = threshold_sweep(table, SWEEP_R, SWEEP_P)?;
    let mut sweep = CertificateReport::new(
        "oracle.sweep",
        format!("threshold criterion against exact differences, r <= {SWEEP_R}, p_i <= {SWEEP_P}"),
    );
    sweep.check(Check::greater("gaps checked", summary.checked, 0u64));
    sweep.check(Check::equal("sign mismatches", summary.mismatches.len() as u64, 0u64));
    sweep.note(format!(
        "{} checks: {} descents, {} ascents, {} ties",
        summary.checked, summary.descents, summary.ascents, summary.ties
    ));
    if let Some(m) = summary.mismatches.first() {
        sweep.note(format!("first mismatch at r = {}, gap {} -> {}", m.r, m.p, m.next));
    }
    reports.push(sweep);
    Ok(reports)
}

pub fn tail_reports(precision: &Rational) -> Vec<CertificateReport> {
    let mut reports = verify_tail_constants(precision);
    reports.push(verify_dm_identity(precision));
    reports.push(verify_h_monotone(precision));
    reports.push(verify_two_primes_symbolic(precision));
    reports
}

pub fn crt_suite(table: &PrimeTable, precision: &Rational) -> Result<Vec<CertificateReport>, CliError> {
    let per_q: Vec<Result<Vec<CertificateReport>, TailError>> = CRT_DEMO_QS
        .par_iter()
        .map(|&q| crt_reports(q, table, DEFAULT_CRT_CAP, precision).map(|(_, r)| r))
        .collect();
    let mut out = Vec::new();
    for r in per_q {
        out.extend(r?);
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, table: &PrimeTable, precision: &Rational) -> Result<Vec<CertificateReport>, CliError> {
    Ok(match suite {
        Suite::Constants => verify_constants(table),
        Suite::Table1 => verify_table1(table)?,
        Suite::Ranges => vec![verify_range(&RangeSpec::A, table)?, verify_range(&RangeSpec::B, table)?],
        Suite::Records => verify_records(table, precision)?,
        Suite::Tail => tail_reports(precision),
        Suite::Oracle => oracle_reports(table)?,
        Suite::Crt => crt_suite(table, precision)?,
    })
}

pub fn load_table(limit: u64, cache_dir: Option<&Path>) -> Result<PrimeTable, CliError> {
    Ok(load_or_sieve(cache_dir, limit, DEFAULT_SIEVE_CAP.max(limit))?)
}

/// Runs the selected suites and returns every report sorted by claim id.
pub fn run(config: &RunConfig) -> Result<Vec<CertificateReport>, CliError> {
    config.validate()?;
    let table = load_table(config.sieve_limit, config.cache_dir.as_deref())?;
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let results: Vec<Result<Vec<CertificateReport>, CliError>> = suites
        .par_iter()
        .map(|&s| run_suite(s, &table, &config.precision))
        .collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    Ok(sorted(reports))
}

pub fn render_reports(reports: &[CertificateReport], format: Format) -> String {
    match format {
        Format::Text => to_text(reports),
        Format::Machine => to_machine(reports),
    }
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let wrap = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(wrap)
}

/// Re-runs the owning suite and prints the one claim in full.
pub fn explain(claim_id: &str, precision: &Rational, cache_dir: Option<&Path>) -> Result<CertificateReport, CliError> {
    let unknown = || CliError::UnknownClaim(claim_id.to_string());
    let suite = Suite::of_claim(claim_id).ok_or_else(unknown)?;
    let table = load_table(suite.min_sieve(), cache_dir)?;
    let reports = if suite == Suite::Crt {
        let q: u64 = claim_id
            .strip_prefix("crt.q")
            .and_then(|rest| rest.split('.').next())
            .and_then(|q| q.parse().ok())
            .ok_or_else(unknown)?;
        let table = load_table(q.max(2), cache_dir)?;
        crt_reports(q, &table, q.max(DEFAULT_CRT_CAP), precision)
            .map(|(_, r)| r)
            .map_err(|_| unknown())?
    } else {
        run_suite(suite, &table, precision)?
    };
    reports.into_iter().find(|r| r.claim_id == claim_id).ok_or_else(unknown)
}

#[derive(Debug, Parser)]
#[command(name = "densverify", version, about = "Verify the finite certificates behind the non-unimodality of d_k(p)")]
pub struct Cli {
    /// Sieve primes up to this bound (default: the least the command needs).
    #[arg(long, global = true)]
    pub sieve_limit: Option<u64>,
    /// Target width of every enclosure, as a decimal or fraction.
    #[arg(long, global = true, default_value = "1e-9")]
    pub precision: String,
    /// Human-readable text, or JSON for machines.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one suite, or all of them.
    Verify {
        #[arg(value_enum)]
        suite: SuiteChoice,
    },
    /// Build and check the composite block for one prime q.
    CrtDemo {
        /// A prime, at least 13.
        #[arg(long)]
        q: u64,
        /// Largest q accepted.
        #[arg(long, default_value_t = DEFAULT_CRT_CAP)]
        cap: u64,
        /// Also write the block with its witnesses to this file.
        #[arg(long)]
        block_out: Option<PathBuf>,
    },
    /// Show one claim with its values, enclosures and margins.
    Explain { claim_id: String },
}

fn parse_precision(text: &str) -> Result<Rational, CliError> {
    match parse_decimal(text) {
        Ok(p) if p > int(0) => Ok(p),
        _ => Err(CliError::BadPrecision(text.to_string())),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
    }
}

fn finish(reports: &[CertificateReport], format: Format, out: Option<&Path>) -> Result<ExitCode, CliError> {
    emit(&render_reports(reports, format), out)?;
    match reports.iter().find(|r| !r.passed()) {
        Some(failed) => {
            eprintln!("verification failed: {}", failed.claim_id);
            Ok(ExitCode::from(1))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    let precision = parse_precision(&cli.precision)?;
    let cache_dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    match cli.command {
        Command::Verify { suite } => {
            let mut config = RunConfig::for_suites(suite.suites());
            config.precision = precision;
            config.format = cli.format;
            config.out = cli.out.clone();
            config.cache_dir = cache_dir;
            if let Some(limit) = cli.sieve_limit {
                config.sieve_limit = limit;
            }
            let reports = run(&config)?;
            finish(&reports, cli.format, cli.out.as_deref())
        }
        Command::CrtDemo { q, cap, block_out } => {
            let needed = q.max(2);
            let limit = cli.sieve_limit.unwrap_or(needed);
            if limit < needed {
                return Err(CliError::SieveTooSmall { needed, given: limit });
            }
            let table = load_table(limit, cache_dir.as_deref())?;
            let (block, reports) = crt_reports(q, &table, cap, &precision)?;
            if let Some(path) = block_out {
                write_atomic(&path, &block_artifact(&block))?;
            }
            finish(&sorted(reports), cli.format, cli.out.as_deref())
        }
        Command::Explain { claim_id } => {
            let report = explain(&claim_id, &precision, cache_dir.as_deref())?;
            let text = match cli.format {
                Format::Text => to_text_one(&report),
                Format::Machine => to_machine(std::slice::from_ref(&report)),
            };
            emit(&text, cli.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimum_sieve_is_the_largest_need() {
        assert_eq!(minimum_sieve(&[Suite::Table1]), 1153);
        assert_eq!(minimum_sieve(&[Suite::Table1, Suite::Records]), 43_103);
        assert_eq!(minimum_sieve(&Suite::ALL), C_CUTOFF);
        assert_eq!(minimum_sieve(&[Suite::Tail]), 2);
    }

    #[test]
    fn short_sieve_is_a_usage_error() {
        let mut config = RunConfig::for_suites(vec![Suite::Ranges]);
        config.sieve_limit = 1000;
        assert!(matches!(run(&config), Err(CliError::SieveTooSmall { needed: 31_477, given: 1000 })));
    }

    #[test]
    fn claim_prefixes() {
        assert_eq!(Suite::of_claim("table1.r3.descent"), Some(Suite::Table1));
        assert_eq!(Suite::of_claim("crt.q13.block"), Some(Suite::Crt));
        assert_eq!(Suite::of_claim("nonexistent"), None);
    }

    #[test]
    fn oracle_suite_passes() {
        let table = PrimeTable::sieve(SWEEP_SIEVE).unwrap();
        let reports = oracle_reports(&table).unwrap();
        let equalities: usize = reports
            .iter()
            .filter(|r| r.claim_id.starts_with("oracle.i"))
            .map(|r| r.checks.len())
            .sum();
        assert_eq!(equalities, 45);
        assert!(reports.iter().all(|r| r.passed()));
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.txt");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn precision_parsing() {
        assert!(parse_precision("1e-9").is_ok());
        assert!(parse_precision("1/1000").is_ok());
        assert!(parse_precision("0").is_err());
        assert!(parse_precision("abc").is_err());
    }
}
