use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use perfcode::bitcore::{write_code_text, Code, ENUMERATION_CAP};
use perfcode::construct::DescriptorExpr;
use perfcode::invariants::{invariant_report, ReportOptions, SampleOptions};
use perfcode::propelin::{decide, DecideOptions, Verdict};
use perfcode::suite::{checks, run_check, Status, SuiteOptions};
use perfcode::Error;

const EXIT_NONPROPELINEAR: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARTIAL: u8 = 3;
const EXIT_UNDECIDED: u8 = 4;

/// Binary perfect codes: construction, invariants, symmetry groups and propelinearity.
#[derive(Parser, Debug)]
#[command(name = "perfcode", version)]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every sampled computation.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Codes with at most this many words are enumerated; larger ones stay membership oracles.
    #[arg(long, global = true, default_value_t = ENUMERATION_CAP)]
    enum_cap: usize,
    /// Maximum number of sampled codewords when estimating a span.
    #[arg(long, global = true, default_value_t = SampleOptions::default().max_samples)]
    sample_budget: usize,
    /// Time limit in seconds for subgroup searches.
    #[arg(long, global = true)]
    time_limit: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code; writes the codeword list, or a manifest for codes kept as oracles.
    Construct {
        /// hamming:<r> | p1 | file:<path> | builtin:<id> | mollard(<desc>,<desc>)
        descriptor: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rank, kernel, dual zero set, triple system, mu and group orders.
    Invariants {
        descriptor: String,
        /// Skip the symmetry-group computations.
        #[arg(long)]
        no_groups: bool,
    },
    /// Decide propelinearity and print the witness or certificate.
    Propelinear { descriptor: String },
    /// Run the #4918 reproduction suite.
    Verify {
        /// Skip checks that enumerate permutation groups.
        #[arg(long)]
        budget_low: bool,
    },
    /// Write the reference data files (code4918.code, sts4918.sts, table4.json).
    ExportData { dir: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } => EXIT_PARTIAL,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

impl Cli {
    fn sample(&self) -> SampleOptions {
        SampleOptions { seed: self.seed, max_samples: self.sample_budget, ..SampleOptions::default() }
    }

    fn deadline(&self) -> Option<Instant> {
        self.time_limit.map(|s| Instant::now() + Duration::from_secs(s))
    }
}

fn warn_duplicates(expr: &DescriptorExpr) {
    match expr {
        DescriptorExpr::File(path) => {
            if let Ok(parsed) = perfcode::dataset::load_code(path) {
                if parsed.duplicates > 0 {
                    eprintln!("warning: {path}: dropped {} duplicate codewords", parsed.duplicates);
                }
            }
        }
        DescriptorExpr::Mollard(a, b) => {
            warn_duplicates(a);
            warn_duplicates(b);
        }
        _ => {}
    }
}

fn parse(descriptor: &str) -> Result<DescriptorExpr, Failure> {
    let expr = DescriptorExpr::parse(descriptor)?;
    warn_duplicates(&expr);
    Ok(expr)
}

fn emit(out: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    if !out.ends_with('\n') {
        let _ = stdout.write_all(b"\n");
    }
}

fn construct(cli: &Cli, descriptor: &str, output: Option<&PathBuf>) -> CmdResult {
    let expr = parse(descriptor)?;
    let code = expr.build_capped(cli.enum_cap)?;
    let text = match &code {
        Code::Explicit(c) => {
            if cli.json {
                let words: Vec<String> = c.words().iter().map(|w| w.to_bit_string()).collect();
                serde_json::to_string_pretty(&serde_json::json!({
                    "descriptor": expr.to_string(), "n": c.len(), "cardinality": c.cardinality(), "words": words,
                }))
                .unwrap()
            } else {
                write_code_text(c)
            }
        }
        Code::Oracle(o) => {
            let manifest = serde_json::json!({
                "descriptor": expr.to_string(),
                "n": o.len(),
                "cardinality": o.cardinality().to_string(),
                "representation": "oracle",
            });
            if cli.json {
                serde_json::to_string_pretty(&manifest).unwrap()
            } else {
                format!(
                    "# perfcode oracle manifest\ndescriptor: {}\nn: {}\ncardinality: {}\nrepresentation: oracle\n",
                    expr,
                    o.len(),
                    o.cardinality()
                )
            }
        }
    };
    match output {
        Some(path) => std::fs::write(path, if text.ends_with('\n') { text } else { text + "\n" })
            .map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) })?,
        None => emit(&text),
    }
    Ok(0)
}

fn invariants(cli: &Cli, descriptor: &str, no_groups: bool) -> CmdResult {
    let expr = parse(descriptor)?;
    let code = expr.build_capped(cli.enum_cap)?;
    let opts = ReportOptions { sample: cli.sample(), groups: !no_groups, ..ReportOptions::default() };
    let report = invariant_report(&expr.to_string(), &code, &opts)?;
    emit(&if cli.json { report.to_json() } else { report.to_text() });
    Ok(if report.partial { EXIT_PARTIAL } else { 0 })
}

fn propelinear(cli: &Cli, descriptor: &str) -> CmdResult {
    let expr = parse(descriptor)?;
    let opts = DecideOptions { deadline: cli.deadline(), seed: cli.seed };
    let d = decide(&expr, &opts)?;
    if cli.json {
        emit(&serde_json::to_string_pretty(&d.to_json()).unwrap());
    } else {
        let mut out = String::new();
        let verdict = match d.verdict {
            Verdict::Propelinear => "propelinear",
            Verdict::Nonpropelinear => "nonpropelinear",
            Verdict::Undecided if d.partial => "undecided (budget)",
            Verdict::Undecided => "undecided",
        };
        out += &format!("code: {expr}\nverdict: {verdict}\nmethod: {}\n", d.method);
        if let (Some(pa), Some(check)) = (&d.assignment, &d.assignment_check) {
            let perms: Vec<String> = pa.distinct_perms().iter().map(|p| p.to_string()).collect();
            out += &format!(
                "witness: {} distinct permutations [{}]\nconditions: valid={} exhaustive={}\n",
                perms.len(),
                perms.join(", "),
                check.valid,
                check.exhaustive
            );
        }
        if let Some(cert) = &d.certificate {
            out += &format!("certificate:\n{}\n", cert.to_json());
        }
        for n in &d.notes {
            out += &format!("note: {n}\n");
        }
        emit(&out);
    }
    Ok(match d.verdict {
        Verdict::Propelinear => 0,
        Verdict::Nonpropelinear => EXIT_NONPROPELINEAR,
        Verdict::Undecided if d.partial => EXIT_PARTIAL,
        Verdict::Undecided => EXIT_UNDECIDED,
    })
}

fn verify(cli: &Cli, budget_low: bool) -> CmdResult {
    let mut opts = SuiteOptions { budget_low, seed: cli.seed, ..SuiteOptions::default() };
    if let Some(s) = cli.time_limit {
        opts.search_time = Duration::from_secs(s);
    }
    let mut results = Vec::new();
    for check in checks() {
        eprintln!("running {} {}", check.id, check.name);
        let r = run_check(&check, &opts);
        if !cli.json {
            emit(&r.to_string());
        }
        results.push(r);
    }
    let failed: Vec<String> = results.iter().filter(|r| r.status == Status::Fail).map(|r| format!("{} {}", r.id, r.name)).collect();
    if cli.json {
        // timings vary run to run, so they go to stderr only
        let items: Vec<serde_json::Value> = results
            .iter()
            .map(|r| serde_json::json!({ "id": r.id, "name": r.name, "status": r.status, "detail": r.detail }))
            .collect();
        emit(&serde_json::to_string_pretty(&serde_json::json!({ "checks": items, "failed": failed })).unwrap());
    } else if !failed.is_empty() {
        emit(&format!("failed: {}", failed.join(", ")));
    }
    for r in &results {
        eprintln!("{} {} took {:.2} s", r.id, r.name, r.seconds);
    }
    Ok(if failed.is_empty() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let result = match &cli.command {
        Command::Construct { descriptor, output } => construct(&cli, descriptor, output.as_ref()),
        Command::Invariants { descriptor, no_groups } => invariants(&cli, descriptor, *no_groups),
        Command::Propelinear { descriptor } => propelinear(&cli, descriptor),
        Command::Verify { budget_low } => verify(&cli, *budget_low),
        Command::ExportData { dir } => perfcode::dataset::export_data(dir).map(|_| 0).map_err(Failure::from),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
