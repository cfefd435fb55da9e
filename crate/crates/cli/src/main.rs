//! `wilf`: find, check and use enumeration schemes from the command line.
//!
//! Exit codes: 0 on success, 1 for a negative result (no scheme, no
//! recurrence, disagreeing sequences), 2 for usage and input errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};
use wilf_core::counter::{self, Counter};
use wilf_core::guesser::{self, guess_recurrence};
use wilf_core::oracle::{self, ValueTuple};
use wilf_core::scheme::{self, SearchResult, SCHEMA_VERSION};
use wilf_core::{BigCount, PatternSet, Permutation, Scheme};

#[derive(Parser)]
#[command(
    name = "wilf",
    version,
    about = "Enumeration schemes for pattern-avoiding permutations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find or check a scheme document.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Number of avoiders of length n, computed from a scheme.
    Count {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Terms a(1)..a(L) computed from a scheme.
    Sequence {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(short = 'L', value_parser = clap::value_parser!(u64).range(1..))]
        len: u64,
        #[arg(long, value_enum, default_value_t = Format::Lines)]
        format: Format,
    },
    /// Guess a linear recurrence with polynomial coefficients.
    Guess(GuessArgs),
    /// Brute-force queries.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Compare the counting sequences of two pattern sets.
    Compare {
        #[arg(short = 'a', allow_hyphen_values = true)]
        first: String,
        #[arg(short = 'b', allow_hyphen_values = true)]
        second: String,
        #[arg(short = 'L', value_parser = clap::value_parser!(u64).range(1..))]
        len: u64,
        /// Depth bound for the scheme search; sets without a scheme fall
        /// back to brute force.
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Lines)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum SchemeCommand {
    /// Search for a scheme.
    Find(FindArgs),
    /// Validate a document and compare it with brute force.
    Verify {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long, default_value_t = 8)]
        check_n: usize,
    },
}

#[derive(Args)]
struct FindArgs {
    /// Patterns, e.g. "123,132" or "[1,2,3],[1,3,2]"; "" for none.
    #[arg(short = 'p', long = "patterns")]
    patterns: String,
    #[arg(long, default_value_t = 4)]
    max_depth: usize,
    /// Also try the symmetric images of the pattern set.
    #[arg(long)]
    symmetries: bool,
    #[arg(long, value_enum, default_value_t = Mode::Certified)]
    mode: Mode,
    /// Largest length checked in empirical mode.
    #[arg(long)]
    horizon: Option<usize>,
    /// Write the reasoner's proof log to stderr as JSON.
    #[arg(long)]
    explain: bool,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GuessArgs {
    #[arg(long, conflicts_with = "terms", requires = "len")]
    scheme: Option<PathBuf>,
    #[arg(short = 'L', value_parser = clap::value_parser!(u64).range(1..), requires = "scheme")]
    len: Option<u64>,
    /// Terms as whitespace-separated integers or a JSON array.
    #[arg(long, required_unless_present = "scheme")]
    terms: Option<PathBuf>,
    #[arg(long, default_value_t = guesser::DEFAULT_MAX_ORDER)]
    max_order: usize,
    #[arg(long, default_value_t = guesser::DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    #[arg(long, default_value_t = guesser::DEFAULT_GUARD)]
    guard: usize,
    #[arg(long, value_enum, default_value_t = Format::Lines)]
    format: Format,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Count avoiders of length n.
    Count {
        #[arg(short = 'p', long = "patterns")]
        patterns: String,
        #[arg(short = 'n')]
        n: usize,
    },
    /// List avoiders of length n, optionally restricted to a prefix class.
    Members {
        #[arg(short = 'p', long = "patterns")]
        patterns: String,
        #[arg(short = 'n')]
        n: usize,
        /// Prefix shape, e.g. 132.
        #[arg(long, requires = "values")]
        prefix: Option<String>,
        /// Sorted prefix values, e.g. 2,3,5.
        #[arg(long, requires = "prefix", value_delimiter = ',')]
        values: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Format::Lines)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Lines,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Certified,
    Empirical,
}

/// Why a command did not succeed.
enum Failure {
    /// An honest negative answer, already reported on stdout.
    Negative,
    Input(String),
}

impl From<wilf_core::Error> for Failure {
    fn from(e: wilf_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("WILF_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("WILF_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Scheme(SchemeCommand::Find(args)) => find(args),
        Command::Scheme(SchemeCommand::Verify { scheme, check_n }) => verify(&scheme, check_n),
        Command::Count { scheme, n } => {
            let s = load_scheme(&scheme)?;
            println!("{}", counter::count(&s, n)?);
            Ok(())
        }
        Command::Sequence { scheme, len, format } => {
            let s = load_scheme(&scheme)?;
            let terms = counter::sequence(&s, len as usize)?;
            print_terms(&terms, format)
        }
        Command::Guess(args) => guess(args),
        Command::Oracle(OracleCommand::Count { patterns, n }) => {
            let patterns = parse_patterns(&patterns)?;
            oracle_length(n)?;
            println!("{}", oracle::count_avoiders(n, &patterns));
            Ok(())
        }
        Command::Oracle(OracleCommand::Members {
            patterns,
            n,
            prefix,
            values,
            format,
        }) => members(&patterns, n, prefix, values, format),
        Command::Compare {
            first,
            second,
            len,
            max_depth,
            format,
        } => compare(&first, &second, len as usize, max_depth, format),
    }
}

fn oracle_length(n: usize) -> Outcome {
    if n > oracle::MAX_LENGTH {
        return Err(Failure::Input(format!(
            "brute force is limited to n <= {}",
            oracle::MAX_LENGTH
        )));
    }
    Ok(())
}

fn parse_patterns(text: &str) -> Result<PatternSet, Failure> {
    text.parse()
        .map_err(|e: wilf_core::Error| Failure::Input(e.to_string()))
}

fn load_scheme(path: &Path) -> Result<Scheme, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Scheme::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit_json(value: &Value) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn numbers(terms: &[BigCount]) -> Vec<Value> {
    terms
        .iter()
        .map(|t| Value::Number(t.to_string().parse().expect("integers are JSON numbers")))
        .collect()
}

fn print_terms(terms: &[BigCount], format: Format) -> Outcome {
    match format {
        Format::Lines => {
            let mut out = io::stdout().lock();
            for t in terms {
                writeln!(out, "{t}")?;
            }
            Ok(())
        }
        Format::Json => emit_json(&json!({ "schema_version": SCHEMA_VERSION, "terms": numbers(terms) })),
    }
}

fn find(args: FindArgs) -> Outcome {
    let patterns = parse_patterns(&args.patterns)?;
    let empirical = args.mode == Mode::Empirical;
    if !empirical && args.horizon.is_some() {
        return Err(Failure::Input(
            "--horizon only applies to --mode empirical".into(),
        ));
    }
    if empirical && args.symmetries {
        return Err(Failure::Input(
            "--symmetries is not available in empirical mode".into(),
        ));
    }
    if empirical && args.explain {
        return Err(Failure::Input("--explain needs the certified mode".into()));
    }

    let mut symmetry = None;
    let result = if empirical {
        let horizon = args.horizon.unwrap_or(oracle::DEFAULT_HORIZON);
        oracle_length(horizon)?;
        oracle::empirical_scheme_search(&patterns, args.max_depth, horizon)?
    } else if args.symmetries {
        match scheme::search_with_symmetries(&patterns, args.max_depth)? {
            Some(found) => {
                symmetry = Some(found.symmetry);
                SearchResult::Found(found.scheme)
            }
            None => scheme::search(&patterns, args.max_depth)?,
        }
    } else {
        scheme::search(&patterns, args.max_depth)?
    };

    if args.explain {
        let target = match &result {
            SearchResult::Found(s) => s.patterns.clone(),
            SearchResult::Exhausted(_) => patterns.clone(),
        };
        let (_, proofs) = scheme::search_explained(&target, args.max_depth)?;
        let log = json!({ "schema_version": SCHEMA_VERSION, "patterns": target, "classes": proofs });
        eprintln!("{log}");
    }

    match result {
        SearchResult::Found(s) => {
            if let Some(g) = symmetry.filter(|g| !g.is_identity()) {
                eprintln!("scheme found for the {g} image {}", s.patterns);
            }
            let doc = s.to_json();
            match &args.output {
                Some(path) => fs::write(path, doc)
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?,
                None => io::stdout().lock().write_all(doc.as_bytes())?,
            }
            Ok(())
        }
        SearchResult::Exhausted(failure) => {
            emit_json(&json!({
                "schema_version": SCHEMA_VERSION,
                "status": "no_scheme",
                "patterns": failure.patterns,
                "max_depth": failure.max_depth,
                "symmetries_tried": args.symmetries,
                "unresolved_class": failure.sigma,
            }))?;
            Err(Failure::Negative)
        }
    }
}

fn verify(path: &Path, check_n: usize) -> Outcome {
    let s = load_scheme(path)?;
    oracle_length(check_n)?;
    let terms = if check_n == 0 {
        Vec::new()
    } else {
        counter::sequence(&s, check_n)?
    };
    let mismatch = (1..=check_n).find(|&n| oracle::count_avoiders(n, &s.patterns) != terms[n - 1]);
    emit_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "valid": true,
        "checked_up_to": check_n,
        "agrees_with_oracle": mismatch.is_none(),
        "first_mismatch": mismatch,
    }))?;
    match mismatch {
        None => Ok(()),
        Some(_) => Err(Failure::Negative),
    }
}

fn read_terms(path: &Path) -> Result<Vec<BigUint>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let bad = |what: &str| Failure::Input(format!("{}: {what}", path.display()));
    let trimmed = text.trim_start();
    let words: Vec<String> = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let value: Value = serde_json::from_str(trimmed).map_err(|e| bad(&e.to_string()))?;
        let list = match &value {
            Value::Array(items) => items,
            Value::Object(map) => match map.get("terms") {
                Some(Value::Array(items)) => items,
                _ => return Err(bad("expected a \"terms\" array")),
            },
            _ => return Err(bad("expected an array of integers")),
        };
        list.iter()
            .map(|v| match v {
                Value::Number(n) => Ok(n.to_string()),
                Value::String(s) => Ok(s.clone()),
                _ => Err(bad("terms must be integers")),
            })
            .collect::<Result<_, _>>()?
    } else {
        text.split_whitespace().map(str::to_owned).collect()
    };
    words
        .iter()
        .map(|w| {
            w.parse::<BigUint>()
                .map_err(|_| bad(&format!("{w:?} is not a nonnegative integer")))
        })
        .collect()
}

fn guess(args: GuessArgs) -> Outcome {
    let terms = match (&args.scheme, args.len, &args.terms) {
        (Some(path), Some(len), None) => counter::sequence(&load_scheme(path)?, len as usize)?,
        (None, None, Some(path)) => read_terms(path)?,
        _ => return Err(Failure::Input("give either --scheme with -L, or --terms".into())),
    };
    let found = guess_recurrence(&terms, args.max_order, args.max_degree, args.guard)?;
    match (found, args.format) {
        (Some(rec), Format::Lines) => {
            println!("CONJECTURE: {rec}");
            Ok(())
        }
        (Some(rec), Format::Json) => emit_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "status": "conjecture",
            "terms_used": terms.len(),
            "recurrence": rec.to_json(),
        })),
        (None, _) => {
            emit_json(&json!({
                "schema_version": SCHEMA_VERSION,
                "status": "no_recurrence",
                "terms_used": terms.len(),
                "max_order": args.max_order,
                "max_degree": args.max_degree,
            }))?;
            Err(Failure::Negative)
        }
    }
}

fn members(
    patterns: &str,
    n: usize,
    prefix: Option<String>,
    values: Option<Vec<usize>>,
    format: Format,
) -> Outcome {
    let patterns = parse_patterns(patterns)?;
    oracle_length(n)?;
    let found = match (prefix, values) {
        (Some(prefix), Some(values)) => {
            let sigma: Permutation = prefix.parse()?;
            let tuple = ValueTuple::new(n, values)?;
            oracle::prefix_class_members(n, &patterns, &sigma, &tuple)?
        }
        _ => oracle::enumerate_avoiders(n, &patterns),
    };
    match format {
        Format::Lines => {
            let mut out = io::stdout().lock();
            for p in &found {
                writeln!(out, "{p}")?;
            }
            Ok(())
        }
        Format::Json => emit_json(&json!({ "schema_version": SCHEMA_VERSION, "members": found })),
    }
}

/// Terms from a scheme when one exists, otherwise by brute force.
fn terms_for(
    patterns: &PatternSet,
    len: usize,
    max_depth: usize,
) -> Result<(Vec<BigCount>, &'static str), Failure> {
    match scheme::search_with_symmetries(patterns, max_depth)? {
        Some(found) => Ok((Counter::new(&found.scheme)?.sequence(len), "scheme")),
        None => Ok((
            (1..=len).map(|n| oracle::count_avoiders(n, patterns)).collect(),
            "oracle",
        )),
    }
}

fn compare(first: &str, second: &str, len: usize, max_depth: usize, format: Format) -> Outcome {
    let a = parse_patterns(first)?;
    let b = parse_patterns(second)?;
    oracle_length(len)?;
    let (terms_a, source_a) = terms_for(&a, len, max_depth)?;
    let (terms_b, source_b) = terms_for(&b, len, max_depth)?;
    let differ = terms_a
        .iter()
        .zip(&terms_b)
        .position(|(x, y)| x != y)
        .map(|i| i + 1);
    match format {
        Format::Lines => {
            let join = |t: &[BigCount]| t.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            println!("a {a} ({source_a}): {}", join(&terms_a));
            println!("b {b} ({source_b}): {}", join(&terms_b));
            match differ {
                None => {
                    println!("sequences agree (n ≤ {len}); empirical Wilf-equivalence evidence, not a proof")
                }
                Some(n) => println!("sequences differ at n = {n}"),
            }
        }
        Format::Json => emit_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "a": { "patterns": a, "source": source_a, "terms": numbers(&terms_a) },
            "b": { "patterns": b, "source": source_b, "terms": numbers(&terms_b) },
            "agree": differ.is_none(),
            "first_difference": differ,
            "note": "empirical Wilf-equivalence evidence, not a proof",
        }))?,
    }
    match differ {
        None => Ok(()),
        Some(_) => Err(Failure::Negative),
    }
}
