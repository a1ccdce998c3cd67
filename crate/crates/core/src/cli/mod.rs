//! Command-line frontend.
//!
//! Exit codes: 0 success or PASS, 1 FAIL or violation, 2 usage error,
//! 3 budget exhausted. Results go to standard output, diagnostics to
//! standard error.

pub mod cache;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::arith::{format_rational, parse_rational, prime_power, Rational};
use crate::engine::{
    run_uniqueness, search_nonidentity, verify_assignment, Budget, EngineConfig, EngineError,
    Outcome, WitnessSearch, DEFAULT_REPRESENTATION_CAP,
};
use crate::repr::{
    dubouis_reference_set, enumerate_representations, hurwitz_closed_form, ExpressibilitySieve,
};

pub const CACHE_ENV: &str = "KSQUARES_CACHE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "ksquares",
    version,
    about = "Multiplicative functions additive on sums of k positive squares"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Directory for cached sieve tables (overrides $KSQUARES_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the representations of n as a sum of k positive squares.
    Repr {
        n: u64,
        k: usize,
        /// Keep only the lexicographically first C representations.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Exceptional set up to N, checked against the closed form.
    Exceptions {
        k: usize,
        #[arg(value_name = "N")]
        bound: u64,
        /// Also check the square exceptions for three squares.
        #[arg(long)]
        hurwitz: bool,
    },
    /// Deduce f(n) for n <= N from k-additivity.
    Deduce {
        k: usize,
        #[arg(value_name = "N")]
        bound: u64,
        /// Write the result here and the trace to FILE.trace.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trace path when it should not sit beside --out.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Overwrite existing output and trace files.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Check an assignment table against every equation up to N.
    Verify {
        k: usize,
        #[arg(value_name = "N")]
        bound: u64,
        /// JSON object mapping prime powers to values.
        #[arg(long)]
        table: PathBuf,
    },
    /// Search for a non-identity 2-additive witness up to N.
    Search2 {
        #[arg(value_name = "N")]
        bound: u64,
        /// Free sites up to S are varied; the rest take the identity.
        #[arg(long, default_value_t = 20)]
        sites: u64,
        #[arg(long, default_value_t = Budget::default().max_witness_attempts)]
        max_attempts: usize,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = Budget::default().max_steps)]
    pub max_steps: usize,
    #[arg(long, default_value_t = Budget::default().max_branches)]
    pub max_branches: usize,
    /// Equations are generated up to this multiple of N.
    #[arg(long, default_value_t = 4)]
    pub horizon_factor: u64,
    /// Representations kept per n.
    #[arg(long, default_value_t = DEFAULT_REPRESENTATION_CAP)]
    pub cap: usize,
}

impl EngineArgs {
    fn config(&self, max_witness_attempts: usize) -> EngineConfig {
        EngineConfig {
            budget: Budget {
                max_steps: self.max_steps,
                max_branches: self.max_branches,
                max_witness_attempts,
            },
            horizon_factor: self.horizon_factor,
            representation_cap: self.cap,
            threads: self.threads,
            ..EngineConfig::default()
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// [`run`] with explicit output and diagnostic streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let mut ctx = Context {
        format: cli.format,
        cache_dir: cache_dir(cli.cache_dir),
        out,
        err,
    };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(ctx.err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Budget(m)) => {
            let _ = writeln!(ctx.err, "budget exhausted: {m}; raise N or the budget");
            EXIT_BUDGET
        }
        Err(Failure::Fail(m)) => {
            let _ = writeln!(ctx.err, "error: {m}");
            EXIT_FAIL
        }
    }
}

fn cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

enum Failure {
    Usage(String),
    Budget(String),
    Fail(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::InvalidArguments(m) => Failure::Usage(m),
            EngineError::BudgetExhausted(m) => Failure::Budget(m),
            other => Failure::Fail(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Fail(e.to_string())
    }
}

struct Context<'a> {
    format: Format,
    cache_dir: Option<PathBuf>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn table_strings(table: &BTreeMap<u64, Rational>) -> BTreeMap<u64, String> {
    table
        .iter()
        .map(|(&q, v)| (q, format_rational(v)))
        .collect()
}

fn site_name(q: u64) -> String {
    prime_power(q).map_or_else(|| q.to_string(), |s| s.to_string())
}

fn table_csv(table: &BTreeMap<u64, Rational>) -> String {
    let mut s = String::from("site,value\n");
    for (q, v) in table {
        s.push_str(&format!("{q},{}\n", format_rational(v)));
    }
    s
}

#[derive(Serialize)]
struct ReprOutput {
    n: u64,
    k: usize,
    count: usize,
    representations: Vec<Vec<u64>>,
}

#[derive(Serialize)]
struct HurwitzOutput {
    squares: Vec<u64>,
    closed_form: Vec<u64>,
    status: &'static str,
}

#[derive(Serialize)]
struct ExceptionsOutput {
    k: usize,
    bound: u64,
    exceptions: Vec<u64>,
    reference: Option<Vec<u64>>,
    status: &'static str,
    hurwitz: Option<HurwitzOutput>,
}

#[derive(Serialize)]
struct DeduceOutput {
    k: usize,
    bound: u64,
    horizon: u64,
    verdict: &'static str,
    table: BTreeMap<u64, String>,
    free_sites: Vec<String>,
    witness_count: usize,
    forced_prefix: u64,
    first_free: Option<u64>,
    notes: Vec<String>,
    trace_steps: usize,
    trace_file: Option<String>,
}

#[derive(Serialize)]
struct ViolationOutput {
    n: u64,
    parts: Vec<u64>,
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
struct VerifyOutput {
    k: usize,
    bound: u64,
    ok: bool,
    checked: usize,
    first_violation: Option<ViolationOutput>,
}

#[derive(Serialize)]
struct SearchOutput {
    bound: u64,
    site_bound: u64,
    found: bool,
    attempts: usize,
    branch: Option<Vec<usize>>,
    differs: Vec<u64>,
    verified: bool,
    table: BTreeMap<u64, String>,
}

impl Context<'_> {
    fn emit(&mut self, text: &str) -> Result<(), Failure> {
        self.out.write_all(text.as_bytes())?;
        Ok(())
    }

    fn warn(&mut self, text: &str) {
        let _ = writeln!(self.err, "{text}");
    }

    fn dispatch(&mut self, command: Command) -> Result<i32, Failure> {
        match command {
            Command::Repr { n, k, cap } => self.repr(n, k, cap),
            Command::Exceptions { k, bound, hurwitz } => self.exceptions(k, bound, hurwitz),
            Command::Deduce {
                k,
                bound,
                out,
                trace,
                force,
                engine,
            } => self.deduce(k, bound, out, trace, force, &engine),
            Command::Verify { k, bound, table } => self.verify(k, bound, &table),
            Command::Search2 {
                bound,
                sites,
                max_attempts,
                engine,
            } => self.search2(bound, sites, &engine.config(max_attempts)),
        }
    }

    fn repr(&mut self, n: u64, k: usize, cap: Option<usize>) -> Result<i32, Failure> {
        if n == 0 || k == 0 {
            return Err(Failure::Usage("repr needs n >= 1 and k >= 1".into()));
        }
        let reps = enumerate_representations(n, k, cap);
        let text = match self.format {
            Format::Json => json(&ReprOutput {
                n,
                k,
                count: reps.len(),
                representations: reps.iter().map(|r| r.parts.clone()).collect(),
            }),
            Format::Csv => {
                let mut s = String::from("n,k,parts\n");
                for r in &reps {
                    s.push_str(&format!("{n},{k},{}\n", join(&r.parts, " ")));
                }
                s
            }
            Format::Text => reps.iter().map(|r| format!("{r}\n")).collect(),
        };
        self.emit(&text)?;
        self.warn(&format!("count: {}", reps.len()));
        Ok(EXIT_OK)
    }

    fn sieve(&mut self, parts: usize, bound: u64) -> ExpressibilitySieve {
        let Some(dir) = self.cache_dir.clone() else {
            return ExpressibilitySieve::build(parts, bound);
        };
        match cache::load_or_build(&dir, parts, bound) {
            Ok((sieve, cache::CacheOutcome::Rebuilt { reason })) => {
                self.warn(&format!(
                    "warning: ignored cached sieve ({reason}); rebuilt"
                ));
                sieve
            }
            Ok((sieve, _)) => sieve,
            Err(e) => {
                self.warn(&format!(
                    "warning: cache directory unusable ({e}); sieve built in memory"
                ));
                ExpressibilitySieve::build(parts, bound)
            }
        }
    }

    fn exceptions(&mut self, k: usize, bound: u64, hurwitz: bool) -> Result<i32, Failure> {
        if k == 0 || bound == 0 {
            return Err(Failure::Usage("exceptions needs k >= 1 and N >= 1".into()));
        }
        let parts = if hurwitz { k.max(3) } else { k };
        let sieve = self.sieve(parts, bound);
        let layer = sieve.layer(k);
        let exceptions: Vec<u64> = (1..=bound).filter(|&n| !layer.get(n as usize)).collect();
        let reference = dubouis_reference_set(k, bound).ok();
        let mut pass = true;
        let status = match &reference {
            Some(r) if *r == exceptions => "pass",
            Some(_) => {
                pass = false;
                "fail"
            }
            None => "none",
        };
        let hurwitz = hurwitz.then(|| {
            let squares: Vec<u64> = (1..=bound.isqrt())
                .map(|a| a * a)
                .filter(|&m| !sieve.contains(m, 3))
                .collect();
            let closed_form = hurwitz_closed_form(bound);
            let ok = squares == closed_form;
            pass &= ok;
            HurwitzOutput {
                squares,
                closed_form,
                status: if ok { "pass" } else { "fail" },
            }
        });
        let text = match self.format {
            Format::Json => json(&ExceptionsOutput {
                k,
                bound,
                exceptions,
                reference,
                status,
                hurwitz,
            }),
            Format::Csv => {
                let mut s = String::from("n\n");
                for n in &exceptions {
                    s.push_str(&format!("{n}\n"));
                }
                s
            }
            Format::Text => {
                let mut s = format!("{}\n", join(&exceptions, ","));
                s.push_str(match status {
                    "pass" => "PASS\n",
                    "fail" => "FAIL\n",
                    _ => "no closed form for this k\n",
                });
                if let Some(h) = &hurwitz {
                    s.push_str(&format!("squares: {}\n", join(&h.squares, ",")));
                    s.push_str(if h.status == "pass" {
                        "HURWITZ PASS\n"
                    } else {
                        "HURWITZ FAIL\n"
                    });
                }
                s
            }
        };
        self.emit(&text)?;
        Ok(if pass { EXIT_OK } else { EXIT_FAIL })
    }

    fn deduce(
        &mut self,
        k: usize,
        bound: u64,
        out: Option<PathBuf>,
        trace: Option<PathBuf>,
        force: bool,
        engine: &EngineArgs,
    ) -> Result<i32, Failure> {
        let trace_path = trace.or_else(|| out.as_ref().map(|o| suffixed(o, ".trace")));
        for path in out.iter().chain(trace_path.iter()) {
            if path.exists() && !force {
                return Err(Failure::Usage(format!(
                    "{} exists; pass --force to overwrite",
                    path.display()
                )));
            }
        }
        let verdict = run_uniqueness(
            k,
            bound,
            &engine.config(Budget::default().max_witness_attempts),
        )?;
        if let Some(path) = &trace_path {
            fs::write(path, verdict.trace.to_jsonl())?;
        } else {
            self.warn("note: trace not written; pass --out or --trace");
        }
        let (table, free_sites, witness_count, forced_prefix, first_free, notes) = match &verdict
            .outcome
        {
            Outcome::Forced { table } => (table.clone(), Vec::new(), 1, bound, None, Vec::new()),
            Outcome::Underdetermined {
                free_sites,
                witness_count,
                forced_prefix,
                first_free,
                notes,
            } => {
                let table = match verdict.survivors.as_slice() {
                    [(_, t)] => t
                        .iter()
                        .filter(|(&q, _)| q <= bound)
                        .map(|(&q, v)| (q, v.clone()))
                        .collect(),
                    _ => BTreeMap::new(),
                };
                let free = free_sites.iter().map(|s| s.to_string()).collect();
                (
                    table,
                    free,
                    *witness_count,
                    *forced_prefix,
                    *first_free,
                    notes.clone(),
                )
            }
            Outcome::AllBranchesContradict => {
                (BTreeMap::new(), Vec::new(), 0, 0, Some(1), Vec::new())
            }
        };
        let text = match self.format {
            Format::Json => json(&DeduceOutput {
                k,
                bound,
                horizon: verdict.horizon,
                verdict: verdict.outcome.name(),
                table: table_strings(&table),
                free_sites,
                witness_count,
                forced_prefix,
                first_free,
                notes,
                trace_steps: verdict.trace.len(),
                trace_file: trace_path.as_ref().map(|p| p.display().to_string()),
            }),
            Format::Csv => table_csv(&table),
            Format::Text => {
                let mut s = format!(
                    "verdict: {} (k = {k}, N = {bound}, equations up to {})\n",
                    verdict.outcome.name(),
                    verdict.horizon
                );
                if !matches!(verdict.outcome, Outcome::Forced { .. }) {
                    s.push_str(&format!("surviving branches: {witness_count}\n"));
                    s.push_str(&format!("identity forced for n <= {forced_prefix}\n"));
                    if !free_sites.is_empty() {
                        s.push_str(&format!("free sites: {}\n", free_sites.join(" ")));
                    }
                    for n in &notes {
                        s.push_str(&format!("note: {n}\n"));
                    }
                }
                for (q, v) in &table {
                    s.push_str(&format!("f({}) = {}\n", site_name(*q), format_rational(v)));
                }
                s
            }
        };
        match &out {
            Some(path) => fs::write(path, text)?,
            None => self.emit(&text)?,
        }
        Ok(match verdict.outcome {
            Outcome::AllBranchesContradict => {
                self.warn("every branch was contradicted; the identity should always survive");
                EXIT_FAIL
            }
            _ => EXIT_OK,
        })
    }

    fn verify(&mut self, k: usize, bound: u64, path: &Path) -> Result<i32, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let table = parse_table(&text).map_err(Failure::Usage)?;
        let report = match verify_assignment(&table, k, bound) {
            Ok(r) => r,
            Err(EngineError::IncompleteTable { missing }) => {
                let names: Vec<String> = missing.iter().map(|&q| site_name(q)).collect();
                return Err(Failure::Fail(format!(
                    "table is missing sites {}",
                    names.join(" ")
                )));
            }
            Err(e) => return Err(e.into()),
        };
        let violation = report
            .first_violation
            .as_ref()
            .map(|v| match &v.provenance {
                crate::engine::Provenance::Additivity { n, parts } => ViolationOutput {
                    n: *n,
                    parts: parts.clone(),
                    lhs: format_rational(&v.lhs),
                    rhs: format_rational(&v.rhs),
                },
                other => {
                    unreachable!("verification only reports additivity equations, got {other}")
                }
            });
        let text = match self.format {
            Format::Json => json(&VerifyOutput {
                k,
                bound,
                ok: report.ok,
                checked: report.checked,
                first_violation: violation,
            }),
            Format::Csv => {
                let mut s = String::from("ok,checked,n,parts,lhs,rhs\n");
                match &violation {
                    Some(v) => s.push_str(&format!(
                        "false,{},{},{},{},{}\n",
                        report.checked,
                        v.n,
                        join(&v.parts, " "),
                        v.lhs,
                        v.rhs
                    )),
                    None => s.push_str(&format!("true,{},,,,\n", report.checked)),
                }
                s
            }
            Format::Text => match &violation {
                Some(v) => format!(
                    "violation at n = {} ({}): f(n) = {} but the squares sum to {}\n",
                    v.n,
                    join(&v.parts, ","),
                    v.lhs,
                    v.rhs
                ),
                None => format!(
                    "ok: {} equations hold for k = {k}, N = {bound}\n",
                    report.checked
                ),
            },
        };
        self.emit(&text)?;
        Ok(if report.ok { EXIT_OK } else { EXIT_FAIL })
    }

    fn search2(&mut self, bound: u64, sites: u64, config: &EngineConfig) -> Result<i32, Failure> {
        let result = search_nonidentity(2, bound, sites, config)?;
        let (found, attempts, branch, differs, table) = match result {
            WitnessSearch::Found {
                table,
                path,
                differs,
                attempts,
            } => (true, attempts, Some(path), differs, table),
            WitnessSearch::NoneFound { attempts } => {
                (false, attempts, None, Vec::new(), BTreeMap::new())
            }
        };
        let verified = found && verify_assignment(&table, 2, bound)?.ok;
        let text = match self.format {
            Format::Json => json(&SearchOutput {
                bound,
                site_bound: sites,
                found,
                attempts,
                branch,
                differs,
                verified,
                table: table_strings(&table),
            }),
            Format::Csv => table_csv(&table),
            Format::Text if found => {
                let mut s = format!(
                    "witness found after {attempts} attempts; differs from the identity at {} sites; verified up to {bound}: {}\n",
                    differs.len(),
                    if verified { "ok" } else { "FAILED" }
                );
                for (q, v) in &table {
                    s.push_str(&format!("f({}) = {}\n", site_name(*q), format_rational(v)));
                }
                s
            }
            Format::Text => format!("no witness found after {attempts} attempts\n"),
        };
        self.emit(&text)?;
        Ok(if found && verified {
            EXIT_OK
        } else {
            EXIT_FAIL
        })
    }
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Reads `{"2": "2", "4": "1/2", ...}`, either bare or under a `"table"`
/// key as written by `deduce` and `search2`. Values may be strings or
/// integers.
pub fn parse_table(text: &str) -> Result<BTreeMap<u64, Rational>, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("table is not JSON: {e}"))?;
    let object = match value.get("table") {
        Some(Value::Object(o)) => o,
        _ => value.as_object().ok_or("table must be a JSON object")?,
    };
    let mut table = BTreeMap::new();
    for (key, v) in object {
        let site: u64 = key
            .parse()
            .map_err(|_| format!("key {key:?} is not a decimal integer"))?;
        let parsed = match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(i.into())),
            _ => None,
        };
        let value = parsed.ok_or_else(|| format!("value for {key} is not a rational"))?;
        table.insert(site, value);
    }
    Ok(table)
}
