//! `igklo`: validate instances, certify relations and lemmas over mode
//! windows, and dump Θ-mode tables.
//!
//! Exit codes: 0 when everything checked passes, 1 on any identity failure,
//! 2 on usage or input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use igklo_core::gklo::{Flavor, Model, Tamper};
use igklo_core::verifier::{
    check_lemma, check_relation, lemma_targets, relation_pairs, CheckReport, Lemma, Relation, Status,
};
use igklo_core::{load_instance_with, validate, Instance};

#[derive(Parser)]
#[command(name = "igklo", version, about = "Exact verifier for GKLO operators of shifted quantum affine symmetric pairs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate an instance file.
    Validate(Common),
    /// Certify the defining relations over a window of modes.
    Check {
        #[command(flatten)]
        common: Common,
        /// Window R: exponents range over [-R, R] (default 4, Serre 3).
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        window: Option<i64>,
        /// Comma-separated relation ids (TT, TA, AA0, AA1, AATheta, Serre) or `all`.
        #[arg(long, default_value = "all")]
        relations: String,
    },
    /// Run the auxiliary lemma checkers.
    Lemmas {
        #[command(flatten)]
        common: Common,
        /// Mode window for frakx and vanishing.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        window: Option<i64>,
        /// Comma-separated lemma ids or `all`.
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Dump the Θ-mode table of one vertex.
    Theta {
        #[command(flatten)]
        common: Common,
        /// Vertex id (may be omitted for one-vertex instances).
        #[arg(long)]
        vertex: Option<String>,
        /// Lowest mode (default -μ-2).
        #[arg(long, allow_negative_numbers = true)]
        lo: Option<i64>,
        /// Highest mode (default -μ+4).
        #[arg(long, allow_negative_numbers = true)]
        hi: Option<i64>,
        #[arg(long, value_enum, default_value = "acute")]
        flavor: FlavorArg,
    },
}

#[derive(Args)]
struct Common {
    /// Instance JSON file.
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Downgrade the coweight identity to a warning.
    #[arg(long)]
    no_validate: bool,
    /// Worker threads (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Perturb a constant for negative controls: rhoPrime=<int>, gamma=0,
    /// sym=avg, xprimeSign=1. Needs --allow-tamper.
    #[arg(long, value_name = "NAME=VALUE")]
    tamper: Vec<String>,
    /// Acknowledge that tampered runs do not verify anything.
    #[arg(long)]
    allow_tamper: bool,
    /// Report elapsed_ms as 0 so output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Acute,
    Plain,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Acute => Flavor::Acute,
            FlavorArg::Plain => Flavor::Plain,
        }
    }
}

/// Input or usage problem: exit 2.
struct InputError(anyhow::Error);

fn input<E: Into<anyhow::Error>>(e: E) -> InputError {
    InputError(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    match cli.cmd {
        Cmd::Validate(common) => cmd_validate(&common),
        Cmd::Check { common, window, relations } => {
            let rels = parse_relations(&relations).map_err(input)?;
            let model = build_model(&common)?;
            with_pool(common.jobs, || {
                let mut reports = Vec::new();
                for rel in rels {
                    let w = window.unwrap_or(if rel == Relation::Serre { 3 } else { 4 });
                    for (i, j) in relation_pairs(&model, rel) {
                        reports.push(check_relation(&model, rel, i, j, w).map_err(input)?);
                    }
                }
                Ok(emit(&common, model.instance(), reports))
            })
        }
        Cmd::Lemmas { common, window, which } => {
            let lemmas = parse_lemmas(&which).map_err(input)?;
            let model = build_model(&common)?;
            with_pool(common.jobs, || {
                let mut reports = Vec::new();
                for lemma in lemmas {
                    for (i, j) in lemma_targets(&model, lemma) {
                        reports.push(check_lemma(&model, lemma, i, j, window).map_err(input)?);
                    }
                }
                Ok(emit(&common, model.instance(), reports))
            })
        }
        Cmd::Theta { common, vertex, lo, hi, flavor } => {
            let model = build_model(&common)?;
            cmd_theta(&common, &model, vertex.as_deref(), lo, hi, flavor.into())
        }
    }
}

fn with_pool<T: Send>(jobs: Option<u32>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(input)
}

fn build_model(common: &Common) -> Result<Model, InputError> {
    let mut tamper = Tamper::default();
    if !common.tamper.is_empty() && !common.allow_tamper {
        return Err(input(anyhow!("--tamper is a test hook and needs --allow-tamper")));
    }
    for t in &common.tamper {
        let (name, value) = t.split_once('=').ok_or_else(|| input(anyhow!("--tamper expects NAME=VALUE, got '{t}'")))?;
        tamper.set(name, value).map_err(input)?;
    }
    let inst = load_instance_with(&read(&common.instance)?, !common.no_validate).map_err(input)?;
    if tamper.is_active() {
        eprintln!("warning: tampered model ({tamper:?}); results are not a verification");
    }
    Ok(Model::with_tamper(inst, tamper))
}

fn parse_ids<T: Copy + PartialEq>(
    s: &str,
    all: &[T],
    parse: impl Fn(&str) -> Option<T>,
    kind: &str,
) -> Result<Vec<T>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v = parse(part).ok_or_else(|| anyhow!("unknown {kind} id '{part}'"))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        bail!("no {kind} ids given");
    }
    Ok(out)
}

fn parse_relations(s: &str) -> Result<Vec<Relation>> {
    parse_ids(s, &Relation::ALL, Relation::parse, "relation")
}

fn parse_lemmas(s: &str) -> Result<Vec<Lemma>> {
    parse_ids(s, &Lemma::ALL, Lemma::parse, "lemma")
}

fn cmd_validate(common: &Common) -> Result<ExitCode, InputError> {
    let inst = Instance::parse(&read(&common.instance)?).map_err(input)?;
    let rep = validate(&inst, !common.no_validate);
    let ok = rep.is_ok();
    match common.format {
        Format::Json => {
            let v = json!({
                "valid": ok,
                "digest": inst.digest(),
                "errors": rep.errors.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "warnings": rep.warnings.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Text => {
            for e in &rep.errors {
                println!("error: {e}");
            }
            for w in &rep.warnings {
                println!("warning: {w}");
            }
            if ok {
                println!(
                    "valid: {} vertices, {} edges, digest {}",
                    inst.len(),
                    inst.edges().len(),
                    inst.digest()
                );
            }
        }
    }
    Ok(ExitCode::from(if ok { 0 } else { 2 }))
}

fn emit(common: &Common, inst: &Instance, mut reports: Vec<CheckReport>) -> ExitCode {
    if common.no_timing {
        for r in &mut reports {
            r.elapsed_ms = 0;
        }
    }
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports).expect("json")),
        Format::Text => print!("{}", text_report(inst, &reports, !common.no_timing)),
    }
    ExitCode::from(if failed { 1 } else { 0 })
}

/// Failures listed per report in text mode.
const SHOWN_FAILURES: usize = 3;

/// Residuals are clipped in text mode; JSON keeps the full text.
fn clip(s: &str) -> String {
    const WIDTH: usize = 160;
    match s.char_indices().nth(WIDTH) {
        Some((cut, _)) => format!("{} ...", &s[..cut]),
        None => s.to_string(),
    }
}

fn text_report(inst: &Instance, reports: &[CheckReport], timing: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "instance {} ({} vertices, {} edges)", inst.digest(), inst.len(), inst.edges().len());
    let width = reports.iter().map(|r| r.identity.len()).max().unwrap_or(0);
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for r in reports {
        let tag = match r.status {
            Status::Pass => {
                pass += 1;
                "PASS"
            }
            Status::Fail => {
                fail += 1;
                "FAIL"
            }
            Status::Skipped => {
                skip += 1;
                "SKIP"
            }
        };
        let _ = write!(out, "{tag}  {:width$}", r.identity);
        if r.status != Status::Skipped {
            if r.window > 0 {
                let _ = write!(out, "  window {}", r.window);
            }
            let _ = write!(out, "  {} checked", r.examined);
            if timing {
                let _ = write!(out, "  {} ms", r.elapsed_ms);
            }
        }
        out.push('\n');
        for f in r.failures.iter().take(SHOWN_FAILURES) {
            let _ = writeln!(out, "      {:?}  {}", f.exponents, clip(&f.residual));
        }
        if r.failures.len() > SHOWN_FAILURES {
            let _ = writeln!(out, "      ... {} more failing tuples", r.failures.len() - SHOWN_FAILURES);
        }
    }
    let _ = writeln!(out, "summary: {pass} passed, {fail} failed, {skip} skipped");
    out
}

fn cmd_theta(
    common: &Common,
    model: &Model,
    vertex: Option<&str>,
    lo: Option<i64>,
    hi: Option<i64>,
    flavor: Flavor,
) -> Result<ExitCode, InputError> {
    let inst = model.instance();
    let i = match vertex {
        Some(v) => inst.index_of(v).map_err(input)?,
        None if inst.len() == 1 => 0,
        None => return Err(input(anyhow!("--vertex is required for instances with several vertices"))),
    };
    let mu = inst.mu(i);
    let (lo, hi) = (lo.unwrap_or(-mu - 2), hi.unwrap_or(-mu + 4));
    if lo > hi {
        return Err(input(anyhow!("empty mode range: lo {lo} > hi {hi}")));
    }
    let modes = model.theta_modes(i, lo, hi, flavor);
    let vt = model.vars();
    match common.format {
        Format::Json => {
            let mut m = Map::new();
            for (r, s) in &modes {
                m.insert(r.to_string(), Value::String(vt.render(s)));
            }
            let v = json!({ "vertex": inst.id(i), "flavor": flavor.name(), "modes": Value::Object(m) });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Text => {
            println!("theta modes of vertex '{}' ({})", inst.id(i), flavor.name());
            for (r, s) in &modes {
                println!("{r:>4}: {}", vt.render(s));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
