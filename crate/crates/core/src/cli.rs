//! Command-line front end: `permdeg parse|mu|c|verify|export`.

use crate::catalog::{self, Catalog, Mode, Status};
use crate::error::Error;
use crate::mu::{self, RepSet};
use crate::pcpres::{self, Refined};
use crate::primes;
use crate::quasiperm::{self, BoundCheck, QuasiCert};
use crate::structure;
use crate::{Budget, PcGroup};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "permdeg", version, about = "Minimal faithful permutation and quasi-permutation degrees of p-groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Odd prime substituted for `p`.
    #[arg(short = 'p', long = "prime", global = true, default_value_t = 5)]
    pub prime: u64,
    /// Parameter binding `k=v`, repeatable.
    #[arg(long = "param", global = true, value_parser = parse_binding)]
    pub params: Vec<(String, String)>,
    /// Search budget (subgroups visited and elements scanned), e.g. 1e8.
    #[arg(long, global = true, value_parser = parse_budget)]
    pub budget: Option<u64>,
    /// Compute exact values in addition to checking witnesses.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Write the certificate as JSON to this path.
    #[arg(long, global = true)]
    pub certificate: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Catalog directory.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and refine a presentation, then print the pc presentation.
    Parse { target: String },
    /// Minimal faithful permutation degree.
    Mu { target: String },
    /// Minimal faithful quasi-permutation degree.
    C {
        target: String,
        /// Also compute mu and require equality.
        #[arg(long)]
        cross_check: bool,
    },
    /// Verify catalog entries.
    Verify {
        /// Catalog id such as `G_(3,23)`.
        id: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Write a minimal degree permutation representation.
    Export {
        target: String,
        /// Output path (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_binding(s: &str) -> Result<(String, String), String> {
    s.split_once('=').map(|(k, v)| (k.trim().to_string(), v.trim().to_string())).ok_or_else(|| format!("expected k=v, got `{s}`"))
}

fn parse_budget(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return if v > 0 { Ok(v) } else { Err("budget must be positive".into()) };
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 1.0 && v.is_finite() => Ok(v.min(u64::MAX as f64) as u64),
        _ => Err(format!("bad budget `{s}`")),
    }
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INPUT, msg: e.to_string() }
    }
}

/// Parses arguments and runs; returns the exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    run(&cli, out, err)
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut buf: Vec<u8> = Vec::new();
    let result = match cli.workers {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli, &mut buf)),
            Err(e) => Err(Failure { code: EXIT_INPUT, msg: e.to_string() }),
        },
        _ => dispatch(cli, &mut buf),
    };
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn budget(cli: &Cli) -> Budget {
    cli.budget.map(Budget::uniform).unwrap_or_default()
}

fn catalog(cli: &Cli) -> Result<Catalog, Failure> {
    Ok(match &cli.catalog {
        Some(root) => Catalog::load(root)?,
        None => Catalog::load_default()?,
    })
}

/// Loads a presentation from a file path, or a catalog entry by id.
fn load_target(cli: &Cli, target: &str) -> Result<Refined, Failure> {
    let bindings: Vec<(&str, &str)> = cli.params.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    let path = Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let prime = primes::resolve_params(cli.prime)?;
        let pres = pcpres::parse_presentation(&text, prime, &bindings)?;
        return Ok(pcpres::refine(&pres)?);
    }
    let cat = catalog(cli)?;
    if cat.entry(target).is_err() {
        return Err(Failure { code: EXIT_INPUT, msg: format!("`{target}` is neither a file nor a catalog id") });
    }
    Ok(cat.load_entry(target, cli.prime, &bindings)?.0)
}

fn group_json(r: &Refined, b: &Budget) -> Value {
    let g = &r.group;
    let z = structure::center(g);
    let exp = structure::exponent(g, b).ok();
    json!({
        "name": r.presentation.name,
        "p": g.p(),
        "order": g.order().to_string(),
        "log_order": g.n(),
        "center_order": z.order(g).to_string(),
        "d_center": structure::rank_d(g, &z),
        "exponent": exp.map(|e| e.to_string()),
        "nilpotency_class": structure::nilpotency_class(g),
    })
}

fn group_text(r: &Refined, b: &Budget) -> String {
    let g = &r.group;
    let z = structure::center(g);
    let exp = structure::exponent(g, b).map(|e| e.to_string()).unwrap_or_else(|_| "?".into());
    format!(
        "group {} p={} order=p^{} |Z|=p^{} d(Z)={} exp={}",
        r.presentation.name,
        g.p(),
        g.n(),
        z.log_order(),
        structure::rank_d(g, &z),
        exp
    )
}

fn rep_json(g: &PcGroup, rs: &RepSet) -> Value {
    json!({
        "degree": rs.degree.to_string(),
        "parts": rs.parts.iter().map(|h| json!({"generators": h.format(g), "index": h.index(g).to_string()})).collect::<Vec<_>>(),
    })
}

fn quasi_json(g: &PcGroup, qc: &QuasiCert) -> Value {
    json!({
        "c": qc.c_value.to_string(),
        "classes": qc.classes.iter().map(|cc| json!({
            "H": cc.h.format(g),
            "K": cc.k.format(g),
            "induced_degree": cc.induced_degree(g).to_string(),
            "conductor": cc.conductor(g).to_string(),
            "weight": cc.weight(g).to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn bounds_text(bs: &[BoundCheck]) -> String {
    bs.iter().map(|b| format!("bound {}: {} ({})\n", b.name, if b.holds { "ok" } else { "VIOLATED" }, b.detail)).collect()
}

fn emit(cli: &Cli, out: &mut Vec<u8>, text: &str, value: Value) -> Result<(), Failure> {
    match cli.format {
        Format::Text => write!(out, "{text}")?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap_or_default())?,
    }
    Ok(())
}

fn write_certificate(cli: &Cli, value: &Value) -> Result<(), Failure> {
    if let Some(path) = &cli.certificate {
        std::fs::write(path, serde_json::to_string_pretty(value).unwrap_or_default() + "\n")?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> Result<i32, Failure> {
    let b = budget(cli);
    match &cli.command {
        Command::Parse { target } => {
            let r = load_target(cli, target)?;
            let g = &r.group;
            let violations = g.consistency_check();
            let mut text = format!("{}\n", group_text(&r, &b));
            for (n, x) in r.names.iter().zip(&r.images) {
                text += &format!("{n} = {}\n", g.format(x));
            }
            text += &format!(
                "consistency: {}\n",
                if violations.is_empty() { "ok".to_string() } else { format!("{} violations", violations.len()) }
            );
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "parse",
                "group": group_json(&r, &b),
                "presentation": r.presentation.to_string(),
                "images": r.names.iter().zip(&r.images).map(|(n, x)| json!({"name": n, "word": g.format(x)})).collect::<Vec<_>>(),
                "consistent": violations.is_empty(),
            });
            emit(cli, out, &text, value)?;
            Ok(if violations.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Mu { target } => {
            let r = load_target(cli, target)?;
            let g = &r.group;
            let (m, cert) = mu::minimal_degree(g, &b)?;
            let bounds = quasiperm::bound_oracles(g, m, None, &b)?;
            let mut text = format!("{m}\n{}\n", group_text(&r, &b));
            for h in &cert.parts {
                text += &format!("part {} index {}\n", h.format(g), h.index(g));
            }
            text += &bounds_text(&bounds);
            let cert_json = rep_json(g, &cert);
            write_certificate(cli, &cert_json)?;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "mu",
                "group": group_json(&r, &b),
                "mu": m.to_string(),
                "certificate": cert_json,
                "bounds": bounds,
            });
            emit(cli, out, &text, value)?;
            Ok(if bounds.iter().all(|x| x.holds) { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::C { target, cross_check } => {
            let r = load_target(cli, target)?;
            let g = &r.group;
            let (c, cert) = quasiperm::minimal_c(g, &b)?;
            let bounds = quasiperm::bound_oracles(g, c, Some(&cert), &b)?;
            let mut text = format!("{c}\n{}\n", group_text(&r, &b));
            for cc in &cert.classes {
                text += &format!("class H={} K={} weight {}\n", cc.h.format(g), cc.k.format(g), cc.weight(g));
            }
            text += &bounds_text(&bounds);
            let mut ok = bounds.iter().all(|x| x.holds);
            let mut cross = Value::Null;
            if *cross_check {
                let (m, _) = mu::minimal_degree(g, &b)?;
                let agree = m == c;
                ok &= agree;
                text += &format!("cross-check {} (mu = {m})\n", if agree { "OK" } else { "MISMATCH" });
                cross = json!({"mu": m.to_string(), "agree": agree});
            }
            let cert_json = quasi_json(g, &cert);
            write_certificate(cli, &cert_json)?;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "c",
                "group": group_json(&r, &b),
                "c": c.to_string(),
                "certificate": cert_json,
                "bounds": bounds,
                "cross_check": cross,
            });
            emit(cli, out, &text, value)?;
            Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Verify { id, all } => {
            let cat = catalog(cli)?;
            let mode = Mode { exact: cli.exact };
            let summary = match (id, all) {
                (_, true) => catalog::verify_all(&cat, cli.prime, mode, &b)?,
                (Some(id), false) => {
                    let entry = cat.entry(id)?;
                    primes::resolve_params(cli.prime)?;
                    let sweeps = if !cli.params.is_empty() {
                        vec![cli.params.clone()]
                    } else if entry.source.is_some() && entry.valid_for(cli.prime) {
                        cat.sweep(entry, cli.prime)?
                    } else {
                        vec![vec![]]
                    };
                    let reports = sweeps.iter().map(|s| catalog::verify_entry(&cat, entry, cli.prime, s, mode, &b)).collect();
                    catalog::Summary { p: cli.prime, reports }
                }
                (None, false) => return Err(Failure { code: EXIT_INPUT, msg: "give an id or --all".into() }),
            };
            let mut text = String::new();
            for r in &summary.reports {
                let status = match &r.status {
                    Status::Pass => "pass".to_string(),
                    Status::Fail(m) => format!("FAIL {m}"),
                    Status::Bounded(bd) => format!("budget exhausted, bound {bd:?}"),
                    Status::Skipped(m) => format!("skipped ({m})"),
                };
                let mut vals = format!("expected {}", r.expected);
                if let Some(w) = r.witness_degree {
                    vals += &format!(" witness {w}");
                }
                if let Some(m) = r.mu {
                    vals += &format!(" mu {m}");
                }
                if let Some(c) = r.c {
                    vals += &format!(" c {c}");
                }
                text += &format!("{} p={}: {status}; {vals}\n", r.label(), summary.p);
            }
            let failed = summary.failures().len();
            let bounded = summary.count(|s| matches!(s, Status::Bounded(_)));
            let passed = summary.count(|s| *s == Status::Pass);
            let skipped = summary.count(|s| matches!(s, Status::Skipped(_)));
            text += &format!("{passed} passed, {failed} failed, {bounded} bounded, {skipped} skipped\n");
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "verify",
                "p": summary.p,
                "reports": summary.reports,
                "passed": passed,
                "failed": failed,
                "bounded": bounded,
                "skipped": skipped,
            });
            emit(cli, out, &text, value)?;
            Ok(if failed > 0 {
                EXIT_MISMATCH
            } else if bounded > 0 {
                EXIT_BUDGET
            } else if passed == 0 {
                EXIT_INPUT
            } else {
                EXIT_OK
            })
        }
        Command::Export { target, output } => {
            let r = load_target(cli, target)?;
            let g = &r.group;
            let (_, cert) = mu::minimal_degree(g, &b)?;
            let rep = mu::coset_action(g, &cert.parts, &b)?;
            let text = rep.to_text();
            write_certificate(cli, &rep_json(g, &cert))?;
            match output {
                Some(path) => std::fs::write(path, &text)?,
                None => write!(out, "{text}")?,
            }
            Ok(EXIT_OK)
        }
    }
}
