//! Argument definitions and one handler per subcommand.
//!
//! Handlers return the process exit code on success; errors carry their own
//! code through [`CliError::exit_code`].

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lehmer_core::families::{anomaly_report, Anomaly, AnomalyReport, RowRepair};
use lehmer_core::{
    cross_check, k_range, members_up_to, ClaimedK, Classifier, DiffSquaresParams, Factorization,
    FamilyId, KValue, Parity, SolutionRecord,
};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_FAILED, EXIT_OK};
use crate::record::{
    expand, int_value, json_int, read_jsonl, write_aligned, write_records, Format, OutputRecord,
    RecordError,
};
use crate::runner;

/// Member sizes grow doubly exponentially in the factor count; past this the
/// sweep stops being interactive.
pub const MAX_FAMILY_FACTORS: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "spoof-lehmer",
    version,
    about = "Enumerate, verify and classify spoof Lehmer factorizations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate every nontrivial positive solution with r bases
    Enumerate(EnumerateArgs),
    /// Check claimed k-Lehmer factorizations from a JSONL file
    Verify(VerifyArgs),
    /// List validated family members, or the anomaly report
    Families(FamiliesArgs),
    /// Label solutions as family instances or sporadic
    Classify(ClassifyArgs),
    /// Compare the search with brute force over small bases
    Crosscheck(CrosscheckArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Odd,
    Even,
    #[default]
    Both,
}

impl ParityArg {
    pub fn parities(self) -> Vec<Parity> {
        match self {
            ParityArg::Odd => vec![Parity::Odd],
            ParityArg::Even => vec![Parity::Even],
            ParityArg::Both => Parity::BOTH.to_vec(),
        }
    }
}

fn parse_r(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(r) if (2..=63).contains(&r) => Ok(r),
        _ => Err("expected an integer from 2 to 63".into()),
    }
}

fn parse_max_factors(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if (2..=MAX_FAMILY_FACTORS).contains(&n) => Ok(n),
        _ => Err(format!(
            "expected an integer from 2 to {MAX_FAMILY_FACTORS}"
        )),
    }
}

fn parse_family(s: &str) -> Result<FamilyId, String> {
    FamilyId::parse(s).ok_or_else(|| {
        let names: Vec<String> = FamilyId::all().iter().map(FamilyId::to_string).collect();
        format!("unknown family; expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Number of bases
    #[arg(long, value_parser = parse_r)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t)]
    pub parity: ParityArg,
    /// Only this k
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Write here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub threads: Option<NonZeroUsize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSONL, one {"bases": [...], "exponents": [...], "k": n} per line
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct FamiliesArgs {
    /// Largest member size, counting bases with multiplicity
    #[arg(long, value_parser = parse_max_factors)]
    pub max_factors: usize,
    #[arg(long, value_parser = parse_family)]
    pub family: Option<FamilyId>,
    /// Print published parameters that fail validation instead of members
    #[arg(long)]
    pub anomalies: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// JSONL of solutions
    #[arg(long, conflicts_with = "r", required_unless_present = "r")]
    pub input: Option<PathBuf>,
    /// Enumerate r = 2..=R first
    #[arg(long, value_parser = parse_r)]
    pub r: Option<usize>,
    /// Family sweep size (default: largest r present)
    #[arg(long, value_parser = parse_max_factors)]
    pub max_factors: Option<usize>,
    #[arg(long)]
    pub sporadic_only: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub threads: Option<NonZeroUsize>,
}

#[derive(Debug, Args)]
pub struct CrosscheckArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub base_cap: u64,
}

pub fn dispatch(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Enumerate(args) => enumerate(args),
        Command::Verify(args) => verify(args),
        Command::Families(args) => families(args),
        Command::Classify(args) => classify(args),
        Command::Crosscheck(args) => crosscheck(args),
    }
}

fn open_input(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| CliError::Open {
            path: path.to_owned(),
            source,
        })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(path) => File::create(path)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|source| CliError::Open {
                path: path.to_owned(),
                source,
            }),
    }
}

fn pool(threads: Option<NonZeroUsize>) -> Result<rayon::ThreadPool, CliError> {
    Ok(runner::pool(
        threads.unwrap_or_else(runner::default_threads),
    )?)
}

/// Re-verifies search output before it is written.
pub fn check_records(records: &[SolutionRecord]) -> Result<(), CliError> {
    if let Some(bad) = records.iter().find(|rec| !rec.verify()) {
        let f = bad.factorization();
        return Err(CliError::Invariant(format!(
            "{f} with k = {} fails the re-check",
            bad.k
        )));
    }
    if records.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Invariant(
            "records are not strictly sorted".into(),
        ));
    }
    Ok(())
}

fn enumerate(args: EnumerateArgs) -> Result<u8, CliError> {
    let parities = args.parity.parities();
    if let Some(k) = args.k {
        let mut ranges = Vec::new();
        for &p in &parities {
            let range = k_range(args.r, p)?;
            if range.contains(k) {
                ranges.clear();
                break;
            }
            ranges.push(format!("{p} {}..={}", range.min, range.max));
        }
        if !ranges.is_empty() {
            let msg = format!(
                "k = {k} has no solutions with r = {}; admissible: {}",
                args.r,
                ranges.join(", ")
            );
            return Err(CliError::Usage(msg));
        }
    }
    let mut records = runner::enumerate(&pool(args.threads)?, args.r, &parities, args.k)?;
    check_records(&records)?;
    Classifier::new(args.r).annotate(&mut records);
    let rows: Vec<OutputRecord> = records.iter().map(OutputRecord::from).collect();
    let mut out = open_output(args.output.as_deref())?;
    write_records(&mut out, args.format, &rows)?;
    out.flush()?;
    Ok(EXIT_OK)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Claim {
    #[serde(with = "json_int::list")]
    bases: Vec<BigInt>,
    #[serde(default)]
    exponents: Option<Vec<u32>>,
    #[serde(with = "json_int")]
    k: BigInt,
}

fn read_claims(path: &Path) -> Result<Vec<(Factorization, BigInt)>, CliError> {
    use std::io::BufRead;
    let mut claims = Vec::new();
    for line in open_input(path)?.lines() {
        let line = line.map_err(RecordError::from)?;
        if line.trim().is_empty() {
            continue;
        }
        let index = claims.len() + 1;
        let bad = |reason: String| RecordError::Invalid { index, reason };
        let claim: Claim = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        let exponents = claim
            .exponents
            .unwrap_or_else(|| vec![1; claim.bases.len()]);
        if exponents.len() != claim.bases.len() {
            let msg = format!(
                "{} bases but {} exponents",
                claim.bases.len(),
                exponents.len()
            );
            return Err(bad(msg).into());
        }
        let f = Factorization::new(claim.bases.into_iter().zip(exponents))
            .map_err(|e| bad(e.to_string()))?;
        claims.push((f, claim.k));
    }
    Ok(claims)
}

fn verify(args: VerifyArgs) -> Result<u8, CliError> {
    let claims = read_claims(&args.input)?;
    let mut out = io::stdout().lock();
    let mut passed = 0;
    for (i, (f, k)) in claims.iter().enumerate() {
        if f.is_lehmer(k) {
            passed += 1;
            writeln!(out, "pass  {}: {f}  k = {k}", i + 1)?;
        } else {
            let why = match f.k_of() {
                KValue::Exact(actual) if actual == *k => "not composite".to_owned(),
                actual => format!("equation gives k = {actual}"),
            };
            writeln!(out, "FAIL  {}: {f}  k = {k}  ({why})", i + 1)?;
        }
    }
    writeln!(out, "{passed} of {} claims hold", claims.len())?;
    Ok(if passed == claims.len() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn families(args: FamiliesArgs) -> Result<u8, CliError> {
    let mut out = open_output(None)?;
    if args.anomalies {
        let mut report = anomaly_report(args.max_factors);
        if let Some(id) = args.family {
            report.anomalies.retain(|a| a.descriptor.family() == id);
            report
                .repairs
                .retain(|r| FamilyId::DiffSquares(r.row) == id);
        }
        write_anomalies(&mut out, args.format, &report)?;
    } else {
        let rows: Vec<OutputRecord> = members_up_to(args.max_factors)
            .iter()
            .filter(|m| {
                args.family
                    .is_none_or(|id| m.descriptors.iter().any(|d| d.family() == id))
            })
            .map(OutputRecord::from_member)
            .collect();
        write_records(&mut out, args.format, &rows)?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn claimed_value(k: &ClaimedK) -> Value {
    match k {
        ClaimedK::Exactly(k) => int_value(k),
        ClaimedK::Any => Value::from("any"),
    }
}

fn k_value(k: &KValue) -> Value {
    match k {
        KValue::Exact(k) => int_value(k),
        KValue::NotIntegral => Value::Null,
        KValue::Indeterminate => Value::from("indeterminate"),
    }
}

fn anomaly_json(a: &Anomaly) -> Value {
    json!({
        "kind": "anomaly",
        "family": a.descriptor.family().to_string(),
        "s": a.descriptor.s(),
        "descriptor": a.descriptor.label(),
        "bases": expand(&a.member).iter().map(int_value).collect::<Vec<_>>(),
        "claimed_k": claimed_value(&a.claimed_k),
        "actual_k": k_value(&a.actual_k),
    })
}

fn params_json(p: &DiffSquaresParams) -> Value {
    json!({ "prefix": p.prefix, "x": p.x, "k": p.claimed_k })
}

fn repair_json(r: &RowRepair) -> Value {
    json!({
        "kind": "repair",
        "family": FamilyId::DiffSquares(r.row).to_string(),
        "published": params_json(&r.published),
        "repaired": params_json(&r.repaired),
    })
}

struct Params<'a>(&'a DiffSquaresParams);

impl fmt::Display for Params<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<String> = self.0.prefix.iter().map(u64::to_string).collect();
        write!(
            f,
            "prefix {}, x = {}, k = {}",
            prefix.join(" · "),
            self.0.x,
            self.0.claimed_k
        )
    }
}

fn write_anomalies<W: Write>(
    out: &mut W,
    format: Format,
    report: &AnomalyReport,
) -> Result<(), CliError> {
    match format {
        Format::Jsonl => {
            for value in report
                .anomalies
                .iter()
                .map(anomaly_json)
                .chain(report.repairs.iter().map(repair_json))
            {
                writeln!(out, "{value}")?;
            }
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = report
                .anomalies
                .iter()
                .map(|a| {
                    vec![
                        a.descriptor.label(),
                        a.claimed_k.to_string(),
                        a.actual_k.to_string(),
                        a.member.to_string(),
                    ]
                })
                .collect();
            write_aligned(
                out,
                &["descriptor", "claimed k", "actual k", "member"],
                &rows,
            )?;
            for r in &report.repairs {
                writeln!(out)?;
                writeln!(
                    out,
                    "diff_squares_{} published: {}",
                    r.row,
                    Params(&r.published)
                )?;
                writeln!(
                    out,
                    "diff_squares_{} repaired:  {}",
                    r.row,
                    Params(&r.repaired)
                )?;
            }
        }
        Format::Csv => {
            return Err(CliError::Usage(
                "the anomaly report is available as table or jsonl".into(),
            ))
        }
    }
    Ok(())
}

/// Family/sporadic counts per parity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub odd_family: usize,
    pub odd_sporadic: usize,
    pub even_family: usize,
    pub even_sporadic: usize,
}

impl Summary {
    pub fn of(records: &[SolutionRecord]) -> Self {
        let mut s = Self::default();
        for rec in records {
            let slot = match (rec.parity, rec.is_sporadic()) {
                (Parity::Odd, false) => &mut s.odd_family,
                (Parity::Odd, true) => &mut s.odd_sporadic,
                (Parity::Even, false) => &mut s.even_family,
                (Parity::Even, true) => &mut s.even_sporadic,
            };
            *slot += 1;
        }
        s
    }

    pub fn odd(&self) -> usize {
        self.odd_family + self.odd_sporadic
    }

    pub fn even(&self) -> usize {
        self.even_family + self.even_sporadic
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} total; odd {} ({} family, {} sporadic); even {} ({} family, {} sporadic)",
            self.odd() + self.even(),
            self.odd(),
            self.odd_family,
            self.odd_sporadic,
            self.even(),
            self.even_family,
            self.even_sporadic,
        )
    }
}

fn read_solutions(path: &Path) -> Result<Vec<SolutionRecord>, CliError> {
    let rows = read_jsonl(open_input(path)?)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let bad = |reason: String| RecordError::Invalid {
            index: i + 1,
            reason,
        };
        let rec = row.to_solution().map_err(bad)?;
        if !rec.verify() {
            return Err(bad(format!(
                "{} is not a solution with k = {}",
                rec.factorization(),
                rec.k
            ))
            .into());
        }
        out.push(rec);
    }
    Ok(out)
}

fn classify(args: ClassifyArgs) -> Result<u8, CliError> {
    let mut records = match (&args.input, args.r) {
        (Some(path), _) => read_solutions(path)?,
        (None, Some(r)) => {
            let records = runner::enumerate_range(&pool(args.threads)?, 2..=r)?;
            check_records(&records)?;
            records
        }
        (None, None) => return Err(CliError::Usage("one of --input or --r is required".into())),
    };
    let largest = records.iter().map(|rec| rec.r).max().unwrap_or(2);
    let r_max = args.max_factors.or(args.r).unwrap_or(largest).max(2);
    Classifier::with_seeds(r_max, &records).annotate(&mut records);
    let summary = Summary::of(&records);
    let rows: Vec<OutputRecord> = records
        .iter()
        .filter(|rec| !args.sporadic_only || rec.is_sporadic())
        .map(OutputRecord::from)
        .collect();
    let mut out = open_output(None)?;
    write_records(&mut out, args.format, &rows)?;
    if args.format == Format::Table {
        writeln!(out)?;
        writeln!(out, "{summary}")?;
    } else {
        eprintln!("{summary}");
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn crosscheck(args: CrosscheckArgs) -> Result<u8, CliError> {
    let report = cross_check(args.r, args.base_cap)?;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "r = {}, bases up to {}: {} solutions agree",
        report.r, report.cap, report.agreed
    )?;
    for (label, recs) in [
        ("only in brute force", &report.only_in_oracle),
        ("only in search", &report.only_in_search),
    ] {
        for rec in recs {
            writeln!(out, "{label}: {}  k = {}", rec.factorization(), rec.k)?;
        }
    }
    Ok(if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::EXIT_INVARIANT;
    use num_bigint::BigUint;

    fn rec(k: u64, bases: &[u32]) -> SolutionRecord {
        SolutionRecord::new(k, bases.iter().map(|&b| BigUint::from(b)).collect())
    }

    #[test]
    fn corrupted_records_are_invariant_failures() {
        assert!(check_records(&[rec(3, &[2, 2]), rec(2, &[3, 3])]).is_err());
        assert!(check_records(&[rec(2, &[3, 3]), rec(3, &[2, 2])]).is_ok());
        let err = check_records(&[rec(4, &[3, 3])]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INVARIANT);
        let err = check_records(&[rec(3, &[2, 2]), rec(3, &[2, 2])]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INVARIANT);
    }

    #[test]
    fn summary_line() {
        let s = Summary {
            odd_family: 6,
            odd_sporadic: 4,
            even_family: 27,
            even_sporadic: 18,
        };
        assert_eq!(
            s.to_string(),
            "55 total; odd 10 (6 family, 4 sporadic); even 45 (27 family, 18 sporadic)"
        );
    }

    #[test]
    fn flag_parsers() {
        assert!(parse_r("1").is_err());
        assert!(parse_r("64").is_err());
        assert_eq!(parse_r("6"), Ok(6));
        assert!(parse_max_factors("21").is_err());
        assert_eq!(
            parse_family("diff_squares_10"),
            Ok(FamilyId::DiffSquares(10))
        );
        assert!(parse_family("diff_squares_11").is_err());
        assert!(parse_family("primes").is_err());
    }

    #[test]
    fn parsing_is_declarative() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
