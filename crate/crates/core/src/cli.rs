//! The `cumulative` command line tool.
//!
//! Exit codes: 0 success or "exists", 1 "does not exist", 2 usage error,
//! 3 internal self-check mismatch.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::composition::{write_parts, BigCount, Partition};
use crate::count::{c_count, SharedWCountTable};
use crate::decide::{is_prime, remark_sufficient, theorem1_nonzero, witness, ExistenceVerdict};
use crate::enumerate::{brute_c, cumulative_rearrangements, partitions_of};
use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Largest accepted partition size.
pub const MAX_SIZE: u64 = 1 << 32;
/// Largest accepted modulus.
pub const MAX_MODULUS: u64 = 1 << 16;

// Partitions handed to the thread pool at a time; output order is restored
// per chunk.
const CHUNK: usize = 512;

#[derive(Debug, Parser)]
#[command(
    name = "cumulative",
    version,
    about = "Count, decide and construct rearrangements of a partition whose prefix sums avoid a modulus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountFormat {
    Plain,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
struct PartitionArg {
    /// Comma-separated parts, weakly decreasing (e.g. 3,1,1)
    #[arg(long, allow_hyphen_values = true)]
    partition: String,
    /// Accept the parts in any order
    #[arg(long)]
    sort: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the number of rearrangements with no prefix sum divisible by the modulus
    Count {
        #[command(flatten)]
        partition: PartitionArg,
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_enum, default_value = "plain")]
        format: CountFormat,
    },
    /// Decide existence for a prime modulus and show the condition breakdown
    Exists {
        #[command(flatten)]
        partition: PartitionArg,
        #[arg(long)]
        prime: u64,
    },
    /// Print one valid rearrangement, or "none"
    Witness {
        #[command(flatten)]
        partition: PartitionArg,
        #[arg(long)]
        modulus: u64,
    },
    /// Print every valid rearrangement in lexicographic order
    Enumerate {
        #[command(flatten)]
        partition: PartitionArg,
        #[arg(long)]
        modulus: u64,
    },
    /// One record per partition of N, in reverse-lexicographic order
    Sweep {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Cross-check counting and deciding against brute-force enumeration
    Check {
        #[arg(long, default_value_t = 10)]
        max_n: u64,
        #[arg(long, default_value = "2,3,4,5,6,7")]
        moduli: String,
        /// Skip composite moduli
        #[arg(long)]
        primes_only: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// One row of `sweep` output, and the JSON form of `count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub partition: Vec<u64>,
    pub modulus: u64,
    /// Decimal string; counts exceed fixed-width JSON numbers.
    pub c: String,
    pub nonzero: bool,
    pub witness: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ExistenceVerdict>,
}

impl OutputRecord {
    /// `c = 0`, `nonzero = false` and a missing witness must coincide.
    pub fn is_consistent(&self) -> bool {
        let zero = self.c == "0";
        zero == !self.nonzero && zero == self.witness.is_none()
    }
}

/// Builds the record for one partition. `table`, when given, must be for
/// `q`.
pub fn output_record(
    lambda: &Partition,
    q: u64,
    table: Option<&SharedWCountTable>,
) -> crate::Result<OutputRecord> {
    let c: BigCount = match table {
        Some(t) => t.c_count(lambda)?,
        None => c_count(lambda, q)?,
    };
    let witness = if q >= 2 {
        witness(lambda, q)?.witness.map(|w| w.into_parts())
    } else {
        None
    };
    let conditions = if is_prime(q) {
        Some(theorem1_nonzero(lambda, q)?)
    } else {
        None
    };
    Ok(OutputRecord {
        partition: lambda.parts().to_vec(),
        modulus: q,
        nonzero: !c.is_zero(),
        c: c.to_string(),
        witness,
        conditions,
    })
}

/// Parses a comma-separated list of positive parts. An empty string is the
/// empty partition.
pub fn parse_partition(text: &str, sort: bool) -> std::result::Result<Partition, String> {
    let text = text.trim();
    let parts = if text.is_empty() {
        Vec::new()
    } else {
        text.split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<u64>()
                    .map_err(|_| format!("invalid part {t:?}: expected a positive integer"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?
    };
    let lambda = if sort {
        Partition::from_unsorted(parts)
    } else {
        Partition::new(parts)
    }
    .map_err(|e| match e {
        Error::NotPartition(_) => format!("{e}; pass --sort to accept any order"),
        other => other.to_string(),
    })?;
    if lambda.size() > MAX_SIZE {
        return Err(format!("partition size {} exceeds {MAX_SIZE}", lambda.size()));
    }
    Ok(lambda)
}

fn parse_moduli(text: &str) -> std::result::Result<Vec<u64>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            let q = t
                .parse::<u64>()
                .map_err(|_| format!("invalid modulus {t:?}"))?;
            check_modulus_arg(q)?;
            Ok(q)
        })
        .collect()
}

fn check_modulus_arg(q: u64) -> std::result::Result<(), String> {
    if q < 1 {
        Err("modulus must be at least 1".to_string())
    } else if q > MAX_MODULUS {
        Err(format!("modulus {q} exceeds {MAX_MODULUS}"))
    } else {
        Ok(())
    }
}

fn partition_arg(arg: &PartitionArg) -> std::result::Result<Partition, CliError> {
    parse_partition(&arg.partition, arg.sort).map_err(CliError::Usage)
}

fn modulus_arg(q: u64) -> std::result::Result<u64, CliError> {
    check_modulus_arg(q).map_err(CliError::Usage)?;
    Ok(q)
}

fn join(parts: &[u64], sep: &str) -> String {
    let mut s = String::new();
    write_parts(&mut s, parts, sep).expect("writing to a String");
    s
}

/// Runs the tool on `argv` (including the program name), returning the exit
/// code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Count {
            partition,
            modulus,
            format,
        } => {
            let lambda = partition_arg(&partition)?;
            let q = modulus_arg(modulus)?;
            match format {
                CountFormat::Plain => writeln!(out, "{}", c_count(&lambda, q)?)?,
                CountFormat::Json => {
                    let record = output_record(&lambda, q, None)?;
                    serde_json::to_writer_pretty(&mut *out, &record)?;
                    writeln!(out)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Exists { partition, prime } => {
            let lambda = partition_arg(&partition)?;
            if !is_prime(prime) {
                return Err(CliError::Usage(Error::NotPrime(prime).to_string()));
            }
            let verdict = theorem1_nonzero(&lambda, prime)?;
            writeln!(out, "nonzero={}", verdict.nonzero)?;
            writeln!(out, "{}", verdict.summary())?;
            for m in &verdict.checked_maximizers {
                writeln!(
                    out,
                    "maximizer a={} b={} weight={} {}",
                    m.a,
                    m.b,
                    m.scaled_weight,
                    if m.passed { "pass" } else { "fail" }
                )?;
            }
            Ok(if verdict.nonzero { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Witness { partition, modulus } => {
            let lambda = partition_arg(&partition)?;
            let q = modulus_arg(modulus)?;
            let report = witness(&lambda, q)?;
            match report.witness {
                Some(w) => {
                    writeln!(out, "{w}")?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "none")?;
                    Ok(EXIT_FALSE)
                }
            }
        }
        Command::Enumerate { partition, modulus } => {
            let lambda = partition_arg(&partition)?;
            let q = modulus_arg(modulus)?;
            for d in cumulative_rearrangements(&lambda, q)? {
                writeln!(out, "{d}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Sweep { n, modulus, format } => {
            if n > MAX_SIZE {
                return Err(CliError::Usage(format!("n {n} exceeds {MAX_SIZE}")));
            }
            let q = modulus_arg(modulus)?;
            sweep(n, q, format, out, err)
        }
        Command::Check {
            max_n,
            moduli,
            primes_only,
        } => {
            let mut moduli = parse_moduli(&moduli).map_err(CliError::Usage)?;
            if primes_only {
                moduli.retain(|&q| is_prime(q));
            }
            check(max_n, &moduli, out, err)
        }
    }
}

enum Sink<'a> {
    Csv(csv::Writer<&'a mut dyn Write>),
    Json { out: &'a mut dyn Write, first: bool },
}

impl<'a> Sink<'a> {
    fn open(format: TableFormat, out: &'a mut dyn Write) -> Result<Self, CliError> {
        Ok(match format {
            TableFormat::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .delimiter(b';')
                    .has_headers(false)
                    .from_writer(out);
                w.write_record(["partition", "modulus", "c", "nonzero", "witness"])?;
                Sink::Csv(w)
            }
            TableFormat::Json => {
                writeln!(out, "[")?;
                Sink::Json { out, first: true }
            }
        })
    }

    fn push(&mut self, record: &OutputRecord) -> Result<(), CliError> {
        match self {
            Sink::Csv(w) => w.write_record([
                join(&record.partition, " "),
                record.modulus.to_string(),
                record.c.clone(),
                record.nonzero.to_string(),
                record
                    .witness
                    .as_deref()
                    .map(|p| join(p, " "))
                    .unwrap_or_default(),
            ])?,
            Sink::Json { out, first } => {
                if !*first {
                    writeln!(out, ",")?;
                }
                *first = false;
                serde_json::to_writer(&mut **out, record)?;
            }
        }
        Ok(())
    }

    fn close(self) -> Result<(), CliError> {
        match self {
            Sink::Csv(mut w) => w.flush()?,
            Sink::Json { out, first } => {
                if !first {
                    writeln!(out)?;
                }
                writeln!(out, "]")?;
            }
        }
        Ok(())
    }
}

fn sweep(
    n: u64,
    q: u64,
    format: TableFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let table = if q >= 2 {
        Some(SharedWCountTable::new(q)?)
    } else {
        None
    };
    let mut stream = partitions_of(n);
    let mut sink = Sink::open(format, out)?;
    let mut inconsistent = 0usize;

    loop {
        let chunk: Vec<Partition> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let records = chunk
            .par_iter()
            .map(|lambda| output_record(lambda, q, table.as_ref()))
            .collect::<crate::Result<Vec<_>>>()?;
        for record in &records {
            if !record.is_consistent() {
                inconsistent += 1;
                writeln!(err, "inconsistent record for {}", join(&record.partition, ","))?;
            }
            sink.push(record)?;
        }
    }
    sink.close()?;
    Ok(if inconsistent > 0 { EXIT_MISMATCH } else { EXIT_OK })
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    checked: usize,
    mismatches: usize,
    disagreements: usize,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            checked: self.checked + other.checked,
            mismatches: self.mismatches + other.mismatches,
            disagreements: self.disagreements + other.disagreements,
        }
    }
}

fn check_one(lambda: &Partition, moduli: &[u64]) -> crate::Result<(Tally, Vec<String>)> {
    let mut tally = Tally::default();
    let mut notes = Vec::new();
    let mut expect = |ok: bool, what: &str, q: u64| {
        tally.checked += 1;
        if !ok {
            tally.mismatches += 1;
            notes.push(format!("mismatch: {what} for partition ({lambda}) q={q}"));
        }
    };
    let mut disagreements = 0;
    for &q in moduli {
        let brute = brute_c(lambda, q)?;
        expect(c_count(lambda, q)? == brute, "count", q);
        if q >= 2 {
            let report = witness(lambda, q)?;
            let sound = match &report.witness {
                Some(w) => w.sorted() == *lambda && w.is_cumulative(q)?,
                None => true,
            };
            expect(sound && report.exists == !brute.is_zero(), "witness", q);
        }
        if is_prime(q) {
            let verdict = theorem1_nonzero(lambda, q)?;
            expect(verdict.nonzero == !brute.is_zero(), "existence verdict", q);
            if verdict.maximizers_disagree() {
                disagreements += 1;
            }
            let implied = !remark_sufficient(lambda, q)? || verdict.nonzero;
            expect(implied, "two-maximum shortcut", q);
        }
    }
    tally.disagreements = disagreements;
    Ok((tally, notes))
}

fn check(max_n: u64, moduli: &[u64], out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let mut total = Tally::default();
    for n in 0..=max_n {
        let mut stream = partitions_of(n);
        loop {
            let chunk: Vec<Partition> = stream.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            let results = chunk
                .par_iter()
                .map(|lambda| check_one(lambda, moduli))
                .collect::<crate::Result<Vec<_>>>()?;
            for (tally, notes) in results {
                for note in notes {
                    writeln!(err, "{note}")?;
                }
                total = total.merge(tally);
            }
        }
    }
    writeln!(out, "maximizer_disagreements={}", total.disagreements)?;
    writeln!(out, "checked={} mismatches={}", total.checked, total.mismatches)?;
    Ok(if total.mismatches == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("cumulative").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn parse_partition_rules() {
        assert_eq!(parse_partition("3,1,1", false).unwrap().parts(), &[3, 1, 1]);
        assert_eq!(parse_partition(" 3, 1 ,1 ", false).unwrap().parts(), &[3, 1, 1]);
        assert!(parse_partition("", false).unwrap().is_empty());
        assert!(parse_partition("1,3", false).unwrap_err().contains("--sort"));
        assert_eq!(parse_partition("1,3", true).unwrap().parts(), &[3, 1]);
        assert!(parse_partition("3,0", false).is_err());
        assert!(parse_partition("3,x", false).is_err());
        assert!(parse_partition("-1", false).is_err());
        assert!(parse_partition("4294967296,1", false).is_err());
    }

    #[test]
    fn count_plain_and_json() {
        assert_eq!(run_str(&["count", "--partition", "3,1,1", "--modulus", "3"]), (0, "2\n".into(), String::new()));
        let (code, out, _) =
            run_str(&["count", "--partition", "3,1,1", "--modulus", "3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["c"], "2");
        assert_eq!(v["nonzero"], true);
        assert_eq!(v["witness"], serde_json::json!([1, 1, 3]));
        assert_eq!(v["conditions"]["nonzero"], true);
    }

    #[test]
    fn usage_errors_exit_2() {
        for args in [
            &["count", "--partition", "1,2", "--modulus", "3"][..],
            &["count", "--partition", "a", "--modulus", "3"],
            &["count", "--partition", "2,0", "--modulus", "3"],
            &["count", "--partition", "2", "--modulus", "0"],
            &["exists", "--partition", "2", "--prime", "4"],
            &["witness", "--partition", "2", "--modulus", "1"],
            &["frobnicate"],
        ] {
            let (code, _, err) = run_str(args);
            assert_eq!(code, EXIT_USAGE, "{args:?}");
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn exists_reports_conditions() {
        let (code, out, _) = run_str(&["exists", "--partition", "1,1,1,1", "--prime", "3"]);
        assert_eq!(code, EXIT_FALSE);
        assert!(out.contains("(i) pass, (ii) fail: max 4 > 2"), "{out}");
        let (code, out, _) = run_str(&["exists", "--partition", "2,1,1", "--prime", "3"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("nonzero=true\n"));
    }

    #[test]
    fn witness_and_enumerate() {
        assert_eq!(
            run_str(&["witness", "--partition", "5,5,2", "--modulus", "5"]),
            (0, "2,5,5\n".into(), String::new())
        );
        assert_eq!(
            run_str(&["witness", "--partition", "1,1,1,1", "--modulus", "3"]),
            (1, "none\n".into(), String::new())
        );
        assert_eq!(
            run_str(&["enumerate", "--partition", "3,1,1", "--modulus", "3"]),
            (0, "1,1,3\n1,3,1\n".into(), String::new())
        );
        assert_eq!(
            run_str(&["enumerate", "--partition", "1,3,1", "--sort", "--modulus", "3"]).1,
            "1,1,3\n1,3,1\n"
        );
    }

    #[test]
    fn sweep_csv_and_json() {
        let (code, out, _) = run_str(&["sweep", "--n", "3", "--modulus", "2"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "partition;modulus;c;nonzero;witness\n3;2;1;true;3\n2 1;2;1;true;1 2\n1 1 1;2;0;false;\n"
        );
        let (code, out, _) = run_str(&["sweep", "--n", "4", "--modulus", "3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 5);
        let (_, out, _) = run_str(&["sweep", "--n", "0", "--modulus", "3", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["c"], "0");
    }

    #[test]
    fn check_small() {
        let (code, out, _) = run_str(&["check", "--max-n", "6"]);
        assert_eq!(code, 0);
        assert!(out.lines().last().unwrap().ends_with("mismatches=0"));
        let (code, _, _) = run_str(&["check", "--max-n", "3", "--moduli", "1,4,6", "--primes-only"]);
        assert_eq!(code, 0);
        let (code, _, _) = run_str(&["check", "--moduli", "0"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
