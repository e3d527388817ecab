//! `dp5`: exact morphism counts, leading constants and invariant checks.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input (including a
//! diverging method), 3 enumeration budget exceeded, 4 methods disagree or
//! a verification suite failed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use dp5::constants::{
    leading_constant_direct, leading_constant_zeta_to, to_decimal, CertifiedReal, ConstantsError, CurveZeta,
};
use dp5::count::{count_fast, count_naive, ratio_f64, CountError, CountOptions, CountResult, DEFAULT_BUDGET};
use dp5::gf::FieldCtx;
use dp5::motivic::motivic_constant;
use dp5::picard::CurveClass;
use dp5::sweep::{row_for, sweep, to_csv, SweepError};
use dp5::verify::{self, Suite};

#[derive(Parser)]
#[command(name = "dp5", version, about = "Morphisms from P^1 to the split quintic del Pezzo surface over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count morphisms of one class.
    Count {
        #[arg(long)]
        q: u32,
        /// `a,c1,c2,c3,c4` for aH + c1 E1 + ... + c4 E4.
        #[arg(long, conflicts_with = "pairings", required_unless_present = "pairings", allow_hyphen_values = true)]
        class: Option<String>,
        /// Ten line pairings `d1,d2,d3,d4,d12,d13,d14,d23,d24,d34`.
        #[arg(long)]
        pairings: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Fast)]
        method: MethodArg,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Count in the given coordinates instead of the chamber-normalized ones.
        #[arg(long)]
        no_normalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Certified leading constant.
    Constant {
        #[arg(long)]
        q: u64,
        /// `p1` or a JSON file `{"q": int, "g": int, "weil": [int, ...]}`.
        #[arg(long, default_value = "p1")]
        curve: String,
        #[arg(long, default_value_t = 1e-12)]
        prec: f64,
        #[arg(long, value_enum, default_value_t = ConstMethod::Direct)]
        method: ConstMethod,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Motivic constant of P^1 as a series in u = 1/L.
    Motivic {
        #[arg(long, default_value_t = 40)]
        trunc: usize,
        #[arg(long)]
        specialize: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chamber of a class and its normalized degree data.
    Chamber {
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence table for a list of classes.
    Sweep {
        #[arg(long)]
        q: u32,
        /// One class per line; `#` starts a comment.
        #[arg(long)]
        classes: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Naive,
    Fast,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum ConstMethod {
    Direct,
    Zeta,
    Both,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SuiteArg {
    Identities,
    Bundles,
    Counts,
    All,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure { code: 2, msg: msg.to_string() }
    }

    fn internal(msg: impl ToString) -> Self {
        Failure { code: 1, msg: msg.to_string() }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        let code = match e {
            CountError::BudgetExceeded { .. } => 3,
            CountError::NotInEffDual(_) => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<ConstantsError> for Failure {
    fn from(e: ConstantsError) -> Self {
        let code = match e {
            ConstantsError::TargetUnreachable { .. } => 3,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Count(c) => c.into(),
            SweepError::Constant(c) => c.into(),
            SweepError::Csv(c) => Failure::internal(c),
        }
    }
}

/// Self-describing output record. Everything except `timestamp` and
/// `wall_time_ms` is a function of `params`.
#[derive(Serialize)]
struct RunRecord {
    command: &'static str,
    params: Value,
    version: &'static str,
    timestamp: u64,
    payload: Value,
    wall_time_ms: u128,
}

fn record(command: &'static str, params: Value, payload: Value, started: Instant) -> RunRecord {
    RunRecord {
        command,
        params,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        payload,
        wall_time_ms: started.elapsed().as_millis(),
    }
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::internal(format!("writing {}: {e}", path.display())))
}

fn write_record(path: Option<&Path>, rec: &RunRecord) -> Result<(), Failure> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(rec).map_err(Failure::internal)?;
        write_out(p, &(text + "\n"))?;
    }
    Ok(())
}

fn budget() -> Result<u128, Failure> {
    match std::env::var("DP5_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|e| Failure::input(format!("DP5_BUDGET={v:?}: {e}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn field(q: u32) -> Result<FieldCtx, Failure> {
    FieldCtx::from_size(q).map_err(|e| Failure::input(format!("--q {q}: {e}")))
}

fn parse_class(s: &str) -> Result<CurveClass, Failure> {
    s.parse().map_err(Failure::input)
}

fn certified_json(c: &CertifiedReal) -> Value {
    json!({
        "mid": to_decimal(&c.mid(), 20),
        "rad": format!("{:.3e}", c.rad_f64()),
        "lo": to_decimal(c.lo(), 20),
        "hi": to_decimal(c.hi(), 20),
    })
}

#[derive(Deserialize)]
struct CurveFile {
    q: u64,
    g: usize,
    weil: Vec<i64>,
}

fn load_curve(arg: &str, q: u64) -> Result<CurveZeta, Failure> {
    if arg == "p1" {
        let small = u32::try_from(q).map_err(|_| Failure::input(format!("--q {q} is too large")))?;
        field(small)?;
        return Ok(CurveZeta::p1(q));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Failure::input(format!("{arg}: {e}")))?;
    let file: CurveFile = serde_json::from_str(&text).map_err(|e| Failure::input(format!("{arg}: {e}")))?;
    if file.q != q {
        return Err(Failure::input(format!("{arg} is over F_{} but --q is {q}", file.q)));
    }
    Ok(CurveZeta::from_weil(file.q, file.g, file.weil)?)
}

fn count_payload(r: &CountResult) -> Value {
    let mut v = serde_json::to_value(r).expect("serializable");
    v["ratio"] = json!(format!("{:.15}", ratio_f64(r)));
    v
}

#[allow(clippy::too_many_arguments)]
fn cmd_count(
    q: u32,
    class: Option<String>,
    pairings: Option<String>,
    method: MethodArg,
    workers: usize,
    no_normalize: bool,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), Failure> {
    let started = Instant::now();
    let f = field(q)?;
    let cls = match (&class, &pairings) {
        (Some(c), _) => parse_class(c)?,
        (None, Some(p)) => parse_class(&format!("pairings={p}"))?,
        (None, None) => return Err(Failure::input("one of --class or --pairings is required")),
    };
    let budget = budget()?;
    let result = match method {
        MethodArg::Naive => count_naive(&f, &cls, budget)?,
        MethodArg::Fast => count_fast(&f, &cls, &CountOptions { workers, normalize: !no_normalize, budget })?,
    };
    println!(
        "class {cls} (d = {}) over F_{q}: hom_count = {}, ratio to q^(d+2) = {:.15}",
        result.d,
        result.hom_count,
        ratio_f64(&result)
    );
    if let Some(path) = out.as_deref() {
        match format {
            Format::Json => {
                let params = json!({
                    "q": q, "class": cls.to_string(), "method": method,
                    "normalize": !no_normalize, "budget": budget.to_string(),
                });
                write_record(Some(path), &record("count", params, count_payload(&result), started))?;
            }
            Format::Csv => {
                let c = leading_constant_direct(&CurveZeta::p1(q as u64), 1e-12)?;
                write_out(path, &to_csv(&[row_for(&result, &c)])?)?;
            }
        }
    }
    Ok(())
}

fn cmd_constant(q: u64, curve: &str, prec: f64, method: ConstMethod, out: Option<PathBuf>) -> Result<(), Failure> {
    let started = Instant::now();
    if !(prec > 0.0 && prec.is_finite()) {
        return Err(Failure::input(format!("--prec {prec} must be positive")));
    }
    let c = load_curve(curve, q)?;
    let mut payload = json!({});
    let direct = if method != ConstMethod::Zeta {
        let d = leading_constant_direct(&c, prec)?;
        println!("direct: {d}");
        payload["direct"] = certified_json(&d);
        Some(d)
    } else {
        None
    };
    let zeta = if method != ConstMethod::Direct {
        let z = leading_constant_zeta_to(&c, prec)?;
        println!("zeta:   {z}");
        payload["zeta"] = certified_json(&z);
        Some(z)
    } else {
        None
    };
    let mut agree = true;
    if let (Some(d), Some(z)) = (&direct, &zeta) {
        agree = d.overlaps(z);
        println!("overlap: {}", if agree { "yes" } else { "NO" });
        payload["overlap"] = json!(agree);
    }
    let params = json!({ "q": q, "curve": curve, "g": c.g, "weil": c.weil, "prec": prec, "method": method });
    write_record(out.as_deref(), &record("constant", params, payload, started))?;
    if agree {
        Ok(())
    } else {
        Err(Failure { code: 4, msg: "direct and zeta intervals are disjoint".into() })
    }
}

fn cmd_motivic(trunc: usize, specialize: Option<u64>, out: Option<PathBuf>) -> Result<(), Failure> {
    let started = Instant::now();
    if trunc == 0 {
        return Err(Failure::input("--trunc must be at least 1"));
    }
    let s = motivic_constant(trunc);
    println!("{s}");
    let mut payload = json!({ "coeffs": s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>() });
    if let Some(q) = specialize {
        if q < 2 {
            return Err(Failure::input("--specialize needs q >= 2"));
        }
        let v: BigRational = s.specialize(&BigRational::from_integer(BigInt::from(q)));
        println!("at u = 1/{q}: {} (= {v})", to_decimal(&v, 15));
        payload["specialization"] = json!({ "q": q, "exact": v.to_string(), "decimal": to_decimal(&v, 15) });
    }
    write_record(out.as_deref(), &record("motivic", json!({ "trunc": trunc, "specialize": specialize }), payload, started))
}

fn cmd_chamber(class: &str) -> Result<(), Failure> {
    let cls = parse_class(class)?;
    let ch = cls.chamber_normalize().map_err(Failure::input)?;
    let labels = dp5::picard::LINE_LABELS;
    println!("class {cls}: chamber {} (relabeling {:?})", ch.id, ch.perm);
    let data: Vec<String> = labels.iter().zip(ch.data.lines).map(|(l, d)| format!("{l}={d}")).collect();
    println!("normalized data: {} d={}", data.join(" "), ch.data.d);
    Ok(())
}

fn cmd_verify(suite: SuiteArg, out: Option<PathBuf>) -> Result<(), Failure> {
    let started = Instant::now();
    let suites: Vec<Suite> = match suite {
        SuiteArg::Identities => vec![Suite::Identities],
        SuiteArg::Bundles => vec![Suite::Bundles],
        SuiteArg::Counts => vec![Suite::Counts],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let opts = CountOptions { budget: budget()?, ..CountOptions::default() };
    let mut reports = Vec::new();
    let mut ok = true;
    for s in suites {
        let rep = verify::run(s, &opts);
        for c in &rep.checks {
            println!("{} {:<10} {}", if c.passed { "PASS" } else { "FAIL" }, s.name(), c.name);
        }
        ok &= rep.passed();
        reports.push(rep);
    }
    let payload = serde_json::to_value(&reports).map_err(Failure::internal)?;
    write_record(out.as_deref(), &record("verify", json!({ "suite": suite }), payload, started))?;
    if ok {
        Ok(())
    } else {
        Err(Failure { code: 4, msg: "verification failed".into() })
    }
}

fn read_classes(path: &Path) -> Result<Vec<CurveClass>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_class)
        .collect()
}

fn cmd_sweep(q: u32, classes: &Path, workers: usize, out: Option<PathBuf>) -> Result<(), Failure> {
    let f = field(q)?;
    let list = read_classes(classes)?;
    let opts = CountOptions { workers, budget: budget()?, ..CountOptions::default() };
    let csv = to_csv(&sweep(&f, &list, &opts)?)?;
    match out {
        Some(p) => write_out(&p, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Count { q, class, pairings, method, workers, no_normalize, out, format } => {
            cmd_count(q, class, pairings, method, workers, no_normalize, out, format)
        }
        Command::Constant { q, curve, prec, method, out } => cmd_constant(q, &curve, prec, method, out),
        Command::Motivic { trunc, specialize, out } => cmd_motivic(trunc, specialize, out),
        Command::Chamber { class } => cmd_chamber(&class),
        Command::Verify { suite, out } => cmd_verify(suite, out),
        Command::Sweep { q, classes, workers, out } => cmd_sweep(q, &classes, workers, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
