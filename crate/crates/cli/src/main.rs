//! `holo`: regular subgroups of holomorphs of finite abelian p-groups.

use clap::{ArgAction, Parser, ValueEnum};
use holo::abelian::AbelianType;
use holo::construct::{verify_nonab_theorem, LONG_SCAN_BUDGET};
use holo::group::catalog::{family, REMARK_FAMILY};
use holo::group::FiniteGroup;
use holo::holomorph::ScanStrategy;
use holo::realize::{report_json, search_regular, SearchSpec, Target, DEFAULT_MAX_NODES};
use holo::spec::GroupSpec;
use holo::suite::{self, CensusOptions, MAX_CLASSIFY_AUT};
use holo::{Error, Result};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

/// Normalizer scans larger than this need `--long-running`.
const SHORT_SCAN_BUDGET: u64 = 500_000_000;
/// Random subgroups per ambient in `lemma-suite`.
const DEFAULT_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Verb {
    Info,
    Construct,
    VerifyNonab,
    Search,
    Enumerate,
    Census,
    LemmaSuite,
}

impl Verb {
    fn name(self) -> &'static str {
        match self {
            Verb::Info => "info",
            Verb::Construct => "construct",
            Verb::VerifyNonab => "verify-nonab",
            Verb::Search => "search",
            Verb::Enumerate => "enumerate",
            Verb::Census => "census",
            Verb::LemmaSuite => "lemma-suite",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "holo", version, about = "Regular subgroups of holomorphs of finite abelian p-groups")]
struct Cli {
    #[arg(value_enum)]
    verb: Verb,
    /// The prime p.
    #[arg(long)]
    p: Option<u32>,
    /// Family parameter n, or log_p of the order for `census`.
    #[arg(long)]
    n: Option<u32>,
    /// Exponents of an abelian group, e.g. 2,1,1.
    #[arg(long, value_delimiter = ',')]
    exponents: Option<Vec<u32>>,
    /// Catalog family id.
    #[arg(long)]
    family: Option<u32>,
    /// Group spec (inline JSON or file path) for the group to realize or inspect.
    #[arg(long)]
    target: Option<String>,
    /// Abelian group spec (inline JSON or file path) for N.
    #[arg(long)]
    ambient: Option<String>,
    /// Restrict gamma values to a Sylow p-subgroup of Aut(N).
    #[arg(long, default_value_t = true, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    restrict_sylow: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<String>,
    /// Allow jobs that may run for more than ten minutes.
    #[arg(long)]
    long_running: bool,
    /// Omit the `meta` block so reruns are byte-identical.
    #[arg(long)]
    no_meta: bool,
    /// Random subgroups per ambient for `lemma-suite`.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

/// A finished run: the report and its exit code.
struct Outcome {
    report: Value,
    code: u8,
}

impl Outcome {
    /// Exit 0 when every asserted property held, 1 otherwise.
    fn checked(report: Value, passed: bool) -> Self {
        Self { report, code: if passed { 0 } else { 1 } }
    }

    fn ok(report: Value) -> Self {
        Self { report, code: 0 }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn ambient(cli: &Cli) -> Result<AbelianType> {
    if let Some(text) = &cli.ambient {
        return GroupSpec::parse(text)?.abelian();
    }
    match (cli.p, &cli.exponents) {
        (Some(p), Some(e)) => AbelianType::new(p, e),
        _ => Err(invalid("an abelian group is required: --ambient, or --p with --exponents")),
    }
}

/// The group named by `--target`, `--family/--p/--n`, or an abelian type.
fn source_group(cli: &Cli) -> Result<(GroupSpec, FiniteGroup)> {
    let spec = if let Some(text) = &cli.target {
        GroupSpec::parse(text)?
    } else if let Some(id) = cli.family {
        let (p, n) = cli.p.zip(cli.n).ok_or_else(|| invalid("--family needs --p and --n"))?;
        let spec = GroupSpec::Family { family: id, p, n };
        spec.validate()?;
        spec
    } else {
        let t = ambient(cli)?;
        GroupSpec::Abelian { p: t.p(), exponents: t.exponents().to_vec() }
    };
    let group = spec.to_group()?;
    Ok((spec, group))
}

fn info(cli: &Cli) -> Result<Outcome> {
    let spec = if let Some(text) = cli.target.as_ref().or(cli.ambient.as_ref()) {
        GroupSpec::parse(text)?
    } else if let Some(id) = cli.family {
        let (p, n) = cli.p.zip(cli.n).ok_or_else(|| invalid("--family needs --p and --n"))?;
        GroupSpec::Family { family: id, p, n }
    } else {
        let t = ambient(cli)?;
        GroupSpec::Abelian { p: t.p(), exponents: t.exponents().to_vec() }
    };
    spec.validate()?;
    Ok(Outcome::ok(suite::info(&spec)?))
}

fn construct(cli: &Cli) -> Result<Outcome> {
    let (spec, n) = source_group(cli)?;
    let r = suite::construction_report(&n)?;
    let passed = r.isomorphic_to_n && r.witness.regular;
    let mut report = to_value(&r);
    report["source"] = to_value(&spec);
    Ok(Outcome::checked(report, passed))
}

fn verify_nonab(cli: &Cli) -> Result<Outcome> {
    let budget = if cli.long_running { LONG_SCAN_BUDGET } else { SHORT_SCAN_BUDGET };
    if cli.family == Some(REMARK_FAMILY) && cli.target.is_none() {
        let p = cli.p.ok_or_else(|| invalid("--family needs --p"))?;
        family(REMARK_FAMILY, p, cli.n.unwrap_or(4))?;
        if !cli.long_running {
            return Err(Error::Budget("the order-p^4 check is a long-running job; pass --long-running".into()));
        }
        eprintln!("holo: searching Hol(A) for a regular copy of the order-{p}^4 group");
        let r = suite::remark_check(p, cli.max_nodes, budget)?;
        return Ok(Outcome::checked(to_value(&r), r.passed));
    }
    let (spec, n) = source_group(cli)?;
    eprintln!("holo: scanning the normalizer of the constructed subgroup");
    let r = verify_nonab_theorem(&n, ScanStrategy::ScanParallel, budget)?;
    let mut report = json!({ "source": spec });
    if let (Value::Object(dst), Value::Object(src)) = (&mut report, to_value(&r)) {
        dst.extend(src);
    }
    Ok(Outcome::checked(report, r.theorem_holds))
}

fn search(cli: &Cli) -> Result<Outcome> {
    let t = ambient(cli)?;
    let text = cli.target.as_ref().ok_or_else(|| invalid("search needs --target"))?;
    let target_spec = GroupSpec::parse(text)?;
    let spec = SearchSpec {
        ambient: t.clone(),
        target: Target::new(target_spec.to_group()?)?,
        restrict: cli.restrict_sylow,
        max_nodes: cli.max_nodes,
    };
    eprintln!("holo: searching Hol({t}) for a regular subgroup");
    match search_regular(&spec) {
        Ok(result) => Ok(Outcome::ok(report_json(&spec, &result)?)),
        Err(Error::Budget(msg)) => {
            eprintln!("holo: budget exceeded: {msg}");
            let report = json!({
                "pair": {"G": spec.target.kind, "N": GroupSpec::Abelian { p: t.p(), exponents: t.exponents().to_vec() }},
                "realizable": "unknown",
                "witness": null,
                "certificate": {"restricted": spec.restrict, "max_nodes": spec.max_nodes, "budget": msg},
            });
            Ok(Outcome { report, code: 2 })
        }
        Err(e) => Err(e),
    }
}

fn census_options(cli: &Cli) -> CensusOptions {
    CensusOptions {
        restrict: cli.restrict_sylow,
        max_nodes: cli.max_nodes,
        classify_limit: if cli.long_running { u64::MAX } else { MAX_CLASSIFY_AUT },
    }
}

fn enumerate(cli: &Cli) -> Result<Outcome> {
    let t = ambient(cli)?;
    eprintln!("holo: enumerating regular subgroups of Hol({t})");
    let r = suite::census(&t, &census_options(cli))?;
    Ok(Outcome::checked(to_value(&r), r.passed))
}

fn census(cli: &Cli) -> Result<Outcome> {
    let (p, n) = cli.p.zip(cli.n).ok_or_else(|| invalid("census needs --p and --n"))?;
    eprintln!("holo: census of every abelian group of order {p}^{n}");
    let r = suite::mixing_census(p, n, &CensusOptions { classify_limit: 0, ..census_options(cli) })?;
    Ok(Outcome::checked(to_value(&r), r.passed))
}

fn lemma_suite(cli: &Cli) -> Result<Outcome> {
    let ambients = if cli.ambient.is_some() || cli.exponents.is_some() {
        vec![ambient(cli)?]
    } else {
        let p = cli.p.unwrap_or(3);
        vec![AbelianType::new(p, &[2])?, AbelianType::new(p, &[1, 1])?, AbelianType::new(p, &[3])?]
    };
    let r = suite::lemma_suite(&ambients, cli.samples, cli.seed)?;
    Ok(Outcome::checked(to_value(&r), r.passed))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match cli.verb {
        Verb::Info => info(cli),
        Verb::Construct => construct(cli),
        Verb::VerifyNonab => verify_nonab(cli),
        Verb::Search => search(cli),
        Verb::Enumerate => enumerate(cli),
        Verb::Census => census(cli),
        Verb::LemmaSuite => lemma_suite(cli),
    }
}

fn emit(cli: &Cli, mut report: Value, threads: usize, started: Instant) -> std::io::Result<()> {
    if !cli.no_meta {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        report["meta"] = json!({
            "command": cli.verb.name(),
            "version": env!("CARGO_PKG_VERSION"),
            "threads": threads,
            "seed": cli.seed,
            "timestamp": timestamp,
            "elapsed_ms": started.elapsed().as_millis() as u64,
        });
    }
    let text = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
    match &cli.json {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("holo: cannot start worker threads: {e}");
            return ExitCode::from(3);
        }
    };
    let Outcome { report, code } = pool.install(|| {
        run(&cli).unwrap_or_else(|e| {
            eprintln!("holo: {e}");
            Outcome { report: json!({ "error": e.to_string() }), code: e.exit_code() as u8 }
        })
    });
    if let Err(e) = emit(&cli, report, pool.current_num_threads(), started) {
        eprintln!("holo: cannot write the report: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(code)
}
