//! `fqcover`: coverage checks, non-covering certificates, and friable counts
//! over F_q[x].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqcover::covering::{parse_field_header, parse_system, search_distinct};
use fqcover::distortion::{certify, schedule_auto, theorem_threshold, Certificate, DeltaSchedule, Mode, PrimeTower};
use fqcover::friable::{mertens_sum, FriableTable};
use fqcover::rational::{self, Rational};
use fqcover::sample::{random_system, SampleConfig, SampleKind};
use fqcover::{CoveringSystem, ExhaustiveLimit, FieldSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "fqcover", version, about = "Covering systems of F_q[x]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide coverage exhaustively (exit 0 covers, 1 does not, 2 error).
    Verify {
        file: PathBuf,
        #[command(flatten)]
        limit: LimitArg,
        #[arg(long)]
        json: bool,
    },
    /// Run the distortion sieve (exit 0 certified, 1 inconclusive, 2 error).
    Certify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// `auto:<C>` or `file:<path>`.
        #[arg(long, default_value = "auto:0", conflicts_with = "delta")]
        schedule: String,
        /// The same δ at every level.
        #[arg(long)]
        delta: Option<String>,
        #[command(flatten)]
        limit: LimitArg,
        #[arg(long)]
        json: bool,
        /// Write the JSON certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count m-friable monic polynomials of degree n.
    Friable {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Print the whole table for degrees ≤ n and smoothness ≤ m.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Prime reciprocal sum over degrees ≤ max-degree.
    Mertens {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the minimum-modulus threshold for multiplicity s.
    Bound {
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        json: bool,
    },
    /// Search for a distinct covering system with moduli dividing a bound
    /// (exit 0 found, 1 none exists, 2 error).
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        min_degree: usize,
        /// Every modulus must divide this monic polynomial.
        #[arg(long)]
        lcm: String,
        #[command(flatten)]
        limit: LimitArg,
        #[arg(long)]
        json: bool,
    },
    /// Print a random system in the text format.
    Sample {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = KindArg::Random)]
        kind: KindArg,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long, default_value_t = 12)]
        max_progressions: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field order, as `4` or `2^2`.
    #[arg(long, default_value = "2")]
    q: String,
    /// Defining polynomial of an extension field, in the variable t.
    #[arg(long)]
    ext_modulus: Option<String>,
}

#[derive(Args)]
struct LimitArg {
    /// At most 2^limit residues are enumerated.
    #[arg(long, default_value_t = ExhaustiveLimit::default().bits, value_parser = clap::value_parser!(u32).range(1..=40))]
    limit: u32,
}

impl LimitArg {
    fn get(&self) -> ExhaustiveLimit {
        ExhaustiveLimit::new(self.limit)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Bounded,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Random,
    Refinement,
    Punctured,
    Sparse,
}

type CmdResult = Result<u8, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Verify { file, limit, json } => verify(&file, limit.get(), json),
        Command::Certify { file, mode, schedule, delta, limit, json, out } => {
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Bounded => Mode::Bounded,
            };
            run_certify(&file, mode, &schedule, delta.as_deref(), limit.get(), json, out.as_deref())
        }
        Command::Friable { field, n, m, csv, json } => friable(&field.build()?, n, m, csv, json),
        Command::Mertens { field, max_degree, json } => {
            let field = field.build()?;
            let sum = mertens_sum(&field, max_degree);
            if json {
                print_json(&json!({ "q": field.q(), "max_degree": max_degree, "sum": rational::to_text(&sum) }));
            } else {
                emit(&format!("{sum}\n"));
            }
            Ok(0)
        }
        Command::Bound { q, s, c, json } => {
            let (p, e) = prime_power(&q)?;
            if s == 0 || c.is_nan() || c <= 0.0 {
                return Err("bound needs s >= 1 and c > 0".into());
            }
            let q = p.pow(e) as u32;
            let value = theorem_threshold(q, s, c);
            if json {
                print_json(&json!({ "q": q, "s": s, "c": c, "log": "natural", "threshold": value }));
            } else {
                emit(&format!("{value}\n"));
            }
            Ok(0)
        }
        Command::Search { field, min_degree, lcm, limit, json } => {
            let field = field.build()?;
            let bound = field.parse_poly(&lcm).map_err(err)?;
            match search_distinct(&field, min_degree, &bound, limit.get()).map_err(err)? {
                Some(s) => {
                    if json {
                        print_json(&s.to_json());
                    } else {
                        emit(&s.to_text());
                    }
                    Ok(0)
                }
                None => {
                    if json {
                        print_json(&serde_json::Value::Null);
                    } else {
                        emit("no distinct covering system\n");
                    }
                    Ok(1)
                }
            }
        }
        Command::Sample { field, seed, kind, max_degree, max_progressions, json } => {
            let field = field.build()?;
            let kind = match kind {
                KindArg::Random => SampleKind::Random,
                KindArg::Refinement => SampleKind::Refinement,
                KindArg::Punctured => SampleKind::Punctured,
                KindArg::Sparse => SampleKind::Sparse,
            };
            let config = SampleConfig { max_lcm_degree: max_degree, max_progressions };
            let s = random_system(&field, kind, config, &mut ChaCha8Rng::seed_from_u64(seed));
            if json {
                print_json(&s.to_json());
            } else {
                emit(&s.to_text());
            }
            Ok(0)
        }
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn print_json(value: &impl serde::Serialize) {
    emit(&format!("{}\n", serde_json::to_string_pretty(value).expect("value serializes")));
}

fn read_system(path: &Path) -> Result<CoveringSystem, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_system(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Splits a prime power given as `4` or `2^2`.
fn prime_power(text: &str) -> Result<(u64, u32), String> {
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| format!("bad field order '{text}'"));
    let (base, exp) = match text.split_once('^') {
        Some((b, e)) => (num(b)?, num(e)? as u32),
        None => (num(text)?, 1),
    };
    if base < 2 || exp == 0 {
        return Err(format!("bad field order '{text}'"));
    }
    let p = (2..=base).find(|d| base % d == 0).expect("base >= 2");
    let (mut rest, mut e) = (base, 0u32);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(format!("field order '{text}' is not a prime power"));
    }
    Ok((p, e * exp))
}

impl FieldArgs {
    fn build(&self) -> Result<FieldSpec, String> {
        let (p, e) = prime_power(&self.q)?;
        match &self.ext_modulus {
            Some(m) => parse_field_header(&format!("q={p}^{e};modulus={m}")).map_err(err),
            None => FieldSpec::new(p, e, None).map_err(err),
        }
    }
}

fn verify(path: &Path, limit: ExhaustiveLimit, json: bool) -> CmdResult {
    let system = read_system(path)?;
    let rep = system.covers(limit).map_err(err)?;
    let witness = rep.witness.as_ref().map(|w| system.field().format_poly(w));
    if json {
        print_json(&json!({
            "covers": rep.covers,
            "witness": witness,
            "lcm_degree": rep.lcm_degree,
            "residues_checked": rep.residues_checked,
        }));
    } else if let Some(w) = &witness {
        emit(&format!("not covering; witness {w}\n"));
    } else {
        emit(&format!("covers ({} residues checked)\n", rep.residues_checked));
    }
    Ok(if rep.covers { 0 } else { 1 })
}

fn load_schedule(system: &CoveringSystem, spec: &str, delta: Option<&str>) -> Result<DeltaSchedule, String> {
    let tower = PrimeTower::build(system);
    if let Some(d) = delta {
        let d = rational::parse(d).map_err(err)?;
        return DeltaSchedule::uniform(tower.levels(), d).map_err(err);
    }
    if let Some(c) = spec.strip_prefix("auto:") {
        let c = rational::parse(c).map_err(err)?;
        return schedule_auto(system, &tower, &c).map_err(err);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        return DeltaSchedule::parse(&text).map_err(|e| format!("{path}: {e}"));
    }
    Err(format!("schedule must be 'auto:<C>' or 'file:<path>', got '{spec}'"))
}

fn run_certify(
    path: &Path,
    mode: Mode,
    schedule: &str,
    delta: Option<&str>,
    limit: ExhaustiveLimit,
    json: bool,
    out: Option<&Path>,
) -> CmdResult {
    let system = read_system(path)?;
    let schedule = load_schedule(&system, schedule, delta)?;
    let cert = certify(&system, &schedule, mode, limit).map_err(err)?;
    if let Some(out) = out {
        fs::write(out, cert.to_json() + "\n").map_err(|e| format!("{}: {e}", out.display()))?;
    }
    if json && out.is_none() {
        emit(&format!("{}\n", cert.to_json()));
    } else {
        emit(&summary(&cert));
    }
    Ok(if cert.is_certified() { 0 } else { 1 })
}

fn summary(cert: &Certificate) -> String {
    let text = |r: &Rational| r.to_string();
    let opt = |r: Option<&Rational>| r.map_or("-".to_string(), text);
    let verdict = serde_json::to_value(cert.verdict).expect("verdict serializes");
    let mode = serde_json::to_value(cert.mode).expect("mode serializes");
    let mut s = format!("field {}\nlcm modulus {}\n", cert.field, cert.lcm_modulus);
    s += &format!("mode {}, schedule {}\n", mode.as_str().unwrap_or(""), cert.schedule.source);
    for l in &cert.levels {
        s += &format!(
            "level {}: p = {} (e = {}), delta = {}, M1 {} {}, M2 {} {}, term = {}\n",
            l.level,
            l.prime,
            l.exponent,
            text(&l.delta),
            if l.exact_m1.is_some() { "=" } else { "<=" },
            opt(l.exact_m1.as_ref().or(l.bound_m1.as_ref())),
            if l.exact_m2.is_some() { "=" } else { "<=" },
            text(l.exact_m2.as_ref().unwrap_or(&l.bound_m2)),
            text(&l.term)
        );
    }
    s += &format!("eta = {}\nverdict {}\n", text(&cert.eta), verdict.as_str().unwrap_or(""));
    match &cert.oracle {
        Some(o) if o.covers => s += "oracle: covers\n",
        Some(o) => s += &format!("oracle: not covering, witness {}\n", o.witness.as_deref().unwrap_or("?")),
        None => s += "oracle: skipped, beyond the exhaustive limit\n",
    }
    s
}

fn friable(field: &FieldSpec, n: usize, m: usize, csv: bool, json: bool) -> CmdResult {
    if m == 0 {
        return Err("m must be at least 1".into());
    }
    let table = FriableTable::new(field, n, m);
    if csv {
        emit(&table.to_csv());
    } else if json {
        print_json(&json!({ "q": field.q(), "n": n, "m": m, "psi": table.psi(n, m).to_string() }));
    } else {
        emit(&format!("{}\n", table.psi(n, m)));
    }
    Ok(0)
}
