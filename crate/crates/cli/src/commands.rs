//! Command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use vlab_core::center::counterexample_check;
use vlab_core::Verdict;

use crate::cache::{self, Cache};
use crate::catalog::{self, Entry};
use crate::report::{self, Options};

#[derive(Debug, Parser)]
#[command(name = "vlab", version, about = "Checks centers of enveloping algebras in characteristic p")]
pub struct Cli {
    /// Catalog file (defaults to the bundled catalog).
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Cache directory (overrides VLAB_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads for (algebra, prime) jobs.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Single {
    #[arg(long)]
    pub algebra: String,
    #[arg(long)]
    pub prime: u64,
    /// Window degree D (default max(p+1, 2·max deg f + 2)).
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check Jacobi, representation compatibility and restricted structures.
    Validate {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Index of the algebra.
    Index {
        #[arg(long)]
        algebra: String,
    },
    /// Invariant generators and semi-invariants of Sym(g).
    Invariants {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = report::DEFAULT_INVARIANT_DEGREE)]
        degree: u32,
    },
    /// Basis of the center of U(g_k) in degrees ≤ D.
    Center(Single),
    /// Freeness of the center over the p-center in a window.
    Veldkamp(Single),
    /// Poisson bracket checks and the Lie algebra m/m².
    Poisson(Single),
    /// Central element outside Z_p·Z_HC for [z,x] = nx, [z,y] = my.
    Counterexample {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All checks for every catalog algebra at every prime.
    Report {
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum UsageError {
    #[error(transparent)]
    Catalog(#[from] catalog::CatalogError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
}

fn check_prime(p: u64) -> Result<(), UsageError> {
    vlab_core::PrimeField::new(p).map(|_| ()).map_err(|e| UsageError::Invalid(e.to_string()))
}

fn write_json(path: &Path, v: &Value) -> Result<(), UsageError> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| UsageError::Io(format!("cannot write {}: {e}", path.display())))
}

fn with_timings(mut body: Value, timings: Value) -> Value {
    body.as_object_mut().expect("object").insert("timings".into(), timings);
    body
}

struct Env {
    entries: Vec<Entry>,
    cache: Option<Cache>,
}

impl Env {
    fn load(cli: &Cli) -> Result<Self, UsageError> {
        let entries = match &cli.catalog {
            Some(p) => catalog::load_catalog(p)?,
            None => catalog::bundled(),
        };
        let cache = (!cli.no_cache)
            .then(|| Cache::new(cache::resolve_dir(cli.cache_dir.as_deref()), cache::toolchain_version()));
        Ok(Self { entries, cache })
    }

    fn entry(&self, name: &str) -> Result<&Entry, UsageError> {
        Ok(catalog::find(&self.entries, name)?)
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit status: 0 all verdicts pass or are vacuous, 1 a verdict fails where
/// it should hold, 2 usage or I/O errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be positive");
            return 2;
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, UsageError> {
    let env = Env::load(cli)?;
    match &cli.command {
        Command::Validate { algebra, primes } => validate(&env, algebra.as_deref(), primes.as_deref()),
        Command::Index { algebra } => {
            let e = env.entry(algebra)?;
            println!("index({}) = {}", e.name(), e.algebra.index());
            Ok(0)
        }
        Command::Invariants { algebra, degree } => invariants(&env, algebra, *degree),
        Command::Center(s) => center(&env, s),
        Command::Veldkamp(s) => veldkamp(&env, s),
        Command::Poisson(s) => poisson(&env, s),
        Command::Counterexample { n, m, prime, out } => counterexample(*n, *m, *prime, out.as_deref()),
        Command::Report { primes, degree, out } => run_report(&env, primes.clone(), *degree, out.as_deref()),
    }
}

fn validate(env: &Env, algebra: Option<&str>, primes: Option<&[u64]>) -> Result<i32, UsageError> {
    let primes = primes.map(<[u64]>::to_vec).unwrap_or_else(|| report::DEFAULT_PRIMES.to_vec());
    for &p in &primes {
        check_prime(p)?;
    }
    let selected: Vec<&Entry> = match algebra {
        Some(name) => vec![env.entry(name)?],
        None => env.entries.iter().collect(),
    };
    for e in selected {
        println!("ok {e}");
        for &p in &primes {
            match e.pmap(p) {
                Ok(pm) => println!("  p = {p}: restricted structure from {}", source_label(pm.source())),
                Err(err) => println!("  p = {p}: no restricted structure ({err})"),
            }
        }
    }
    Ok(0)
}

fn source_label(s: &vlab_core::PMapSource) -> &'static str {
    match s {
        vlab_core::PMapSource::Representation(_) => "the representation",
        vlab_core::PMapSource::AdjointSolve => "the adjoint action",
        vlab_core::PMapSource::Override => "the catalog table",
    }
}

fn invariants(env: &Env, algebra: &str, degree: u32) -> Result<i32, UsageError> {
    let e = env.entry(algebra)?;
    let prep = report::prepare(e, degree);
    let info = &prep.info;
    println!("{}: index {}, invariants up to degree {degree}", info.name, info.index);
    for g in &info.invariant_generators {
        println!("  degree {}: {}", g.degree, g.poly);
    }
    for w in &info.semi_invariant_weights {
        println!("  semi-invariant weight ({})", w.join(", "));
    }
    for (d, n) in &info.unresolved_semi_invariant_dims {
        println!("  degree {d}: {n} dimensions with unresolved weights");
    }
    for n in &info.notes {
        println!("  note: {n}");
    }
    Ok(0)
}

fn single_setup<'a>(env: &'a Env, s: &Single) -> Result<(&'a Entry, report::Prepared), UsageError> {
    check_prime(s.prime)?;
    let e = env.entry(&s.algebra)?;
    Ok((e, report::prepare(e, report::DEFAULT_INVARIANT_DEGREE)))
}

fn center(env: &Env, s: &Single) -> Result<i32, UsageError> {
    let (e, prep) = single_setup(env, s)?;
    let body = match report::setup_prime(e, &prep.f_list, s.prime, s.degree) {
        Ok(setup) => {
            let (sec, _) = report::window_section(&setup);
            json!({ "algebra": e.name(), "prime": s.prime, "degree": setup.degree, "center_window": sec })
        }
        Err(reason) => json!({
            "algebra": e.name(), "prime": s.prime, "degree": s.degree,
            "center_window": report::Section::vacuous(reason),
        }),
    };
    let sec = &body["center_window"];
    println!("{} at p = {}: {}", e.name(), s.prime, sec["verdict"]["status"].as_str().unwrap_or("?"));
    if let Some(basis) = sec.pointer("/details/basis").and_then(Value::as_array) {
        println!("  dim Z ∩ U_{{≤{}}} = {}", body["degree"], basis.len());
        for b in basis {
            println!("  {}", b.as_str().unwrap_or(""));
        }
    }
    if let Some(out) = &s.out {
        write_json(out, &body)?;
    }
    Ok(if sec.pointer("/verdict/status").and_then(Value::as_str) == Some("fail") { 1 } else { 0 })
}

fn veldkamp(env: &Env, s: &Single) -> Result<i32, UsageError> {
    let (e, prep) = single_setup(env, s)?;
    let (body, t) = report::cached_record(env.cache.as_ref(), e, s.prime, s.degree, "veldkamp", || {
        match report::setup_prime(e, &prep.f_list, s.prime, s.degree) {
            Ok(setup) => {
                let (_, window) = report::window_section(&setup);
                let sec = report::veldkamp_section(&setup, window.as_ref());
                let mut body = json!({ "algebra": e.name(), "prime": s.prime, "degree": setup.degree });
                let obj = body.as_object_mut().expect("object");
                if let Value::Object(d) = sec.details {
                    obj.extend(d);
                }
                obj.insert("verdict".into(), serde_json::to_value(&sec.verdict).expect("ok"));
                body
            }
            Err(reason) => json!({
                "algebra": e.name(), "prime": s.prime, "degree": s.degree,
                "verdict": vlab_core::Verdict::vacuous(reason),
            }),
        }
    });
    let status = body.pointer("/verdict/status").and_then(Value::as_str).unwrap_or("?").to_string();
    println!("{} at p = {}, D = {}: {status}", e.name(), s.prime, body["degree"]);
    if let Some(d) = body.get("dims") {
        println!("  window dimension {}, candidate span {}", d[0], d[1]);
    }
    if let Some(defect) = body.get("spanning_defect").and_then(Value::as_array) {
        for w in defect {
            println!("  not spanned: {}", w.as_str().unwrap_or(""));
        }
    }
    if let Some(out) = &s.out {
        write_json(out, &with_timings(body.clone(), json!({ "veldkamp": t })))?;
    }
    let expected = !prep.info.hypotheses.hold;
    if status == "fail" && expected {
        println!("  failure expected: the algebra does not satisfy the hypotheses");
    }
    Ok(if status == "fail" && !expected { 1 } else { 0 })
}

fn poisson(env: &Env, s: &Single) -> Result<i32, UsageError> {
    let (e, prep) = single_setup(env, s)?;
    let opts = Options { primes: vec![s.prime], degree: s.degree, ..Options::default() };
    let (rec, t) = report::prime_record(e, &prep, s.prime, &opts, env.cache.as_ref());
    let keys = ["kac_radul", "lift_independence", "m_mod_m2", "central_extension"];
    let mut body = json!({ "algebra": e.name(), "prime": s.prime, "degree": rec["degree"] });
    for k in keys {
        body[k] = rec[k].clone();
        println!("{k}: {}", rec[k]["verdict"]["status"].as_str().unwrap_or("?"));
    }
    if let Some(table) = rec.pointer("/m_mod_m2/details/structure_constants").and_then(Value::as_array) {
        println!("m/m² basis: {}", rec.pointer("/m_mod_m2/details/basis").map(Value::to_string).unwrap_or_default());
        for line in table {
            println!("  {}", line.as_str().unwrap_or(""));
        }
    }
    if let Some(out) = &s.out {
        write_json(out, &with_timings(body.clone(), json!({ "poisson": t })))?;
    }
    let failed = keys.iter().any(|k| body[*k]["verdict"]["status"] == "fail");
    Ok(if failed && prep.info.hypotheses.hold { 1 } else { 0 })
}

/// Exit 0 when the counterexample is confirmed.
fn counterexample(n: u32, m: u32, p: u64, out: Option<&Path>) -> Result<i32, UsageError> {
    check_prime(p)?;
    let r = counterexample_check(n, m, p).map_err(|e| UsageError::Invalid(e.to_string()))?;
    println!("[z,x] = {n}x, [z,y] = {m}y at p = {p}: {}", r.verdict.label());
    if let Some(w) = &r.witness {
        println!(
            "  witness {w} (degree {}): central = {}, outside Z_p·Z_HC = {}",
            r.degree.unwrap_or(0),
            r.central,
            r.outside_span
        );
    }
    if let Verdict::Vacuous { reason } = &r.verdict {
        println!("  {reason}");
    }
    if let Some(out) = out {
        write_json(out, &serde_json::to_value(&r).expect("ok"))?;
    }
    Ok(if r.verdict.is_pass() { 0 } else { 1 })
}

fn run_report(env: &Env, primes: Option<Vec<u64>>, degree: Option<u32>, out: Option<&Path>) -> Result<i32, UsageError> {
    let primes = primes.unwrap_or_else(|| report::DEFAULT_PRIMES.to_vec());
    if primes.is_empty() {
        return Err(UsageError::Invalid("no primes given".into()));
    }
    for &p in &primes {
        check_prime(p)?;
    }
    let opts = Options { primes, degree, ..Options::default() };
    let rep = report::build_report(&env.entries, &opts, env.cache.as_ref(), &cache::toolchain_version());
    print!("{}", rep.markdown);
    if let Some(out) = out {
        std::fs::write(out, rep.to_json_string())
            .map_err(|e| UsageError::Io(format!("cannot write {}: {e}", out.display())))?;
        let md = out.with_extension("md");
        std::fs::write(&md, &rep.markdown).map_err(|e| UsageError::Io(format!("cannot write {}: {e}", md.display())))?;
    }
    Ok(rep.exit_code())
}
