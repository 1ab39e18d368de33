//! Catalog of presentations with expected degrees and witnesses, and the
//! batch verification harness.
//!
//! Layout: `<root>/expected.tsv` lists one entry per line with columns
//! `id`, `validity`, `expected`, `witness`, `source`, `witness_degree`.
//! `source` is a path relative to the root or `needs-external-presentation`.
//! `witness_degree` is `=` when the witness attains the expected value and
//! otherwise the (larger) degree the listed witness attains.

use crate::error::{Error, Result};
use crate::mu;
use crate::pcpres::{self, Refined};
use crate::primes;
use crate::quasiperm::{self, CharClass};
use crate::structure::{self, Subgroup};
use crate::Budget;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};

/// Marker used in place of a presentation file.
pub const EXTERNAL: &str = "needs-external-presentation";

/// Polynomial in `p` with nonnegative integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<(u128, u32)>);

impl Poly {
    pub fn parse(s: &str) -> Result<Poly> {
        let bad = || Error::Catalog(format!("bad polynomial `{s}`"));
        let mut terms = Vec::new();
        for t in s.replace(' ', "").split('+') {
            let (coef, rest) = match t.find('p') {
                Some(0) => (1, t),
                Some(i) => (t[..i].trim_end_matches('*').parse().map_err(|_| bad())?, &t[i..]),
                None => (t.parse().map_err(|_| bad())?, ""),
            };
            let exp = if rest.is_empty() {
                0
            } else if rest == "p" {
                1
            } else {
                let e = rest.strip_prefix("p^").ok_or_else(bad)?;
                e.trim_matches(|c| c == '{' || c == '}').parse().map_err(|_| bad())?
            };
            terms.push((coef, exp));
        }
        Ok(Poly(terms))
    }

    pub fn eval(&self, p: u64) -> u128 {
        self.0.iter().map(|(c, e)| c * (p as u128).pow(*e)).sum()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(c, e)| {
                let base = match e {
                    0 => String::new(),
                    1 => "p".to_string(),
                    _ => format!("p^{e}"),
                };
                match (c, e) {
                    (_, 0) => c.to_string(),
                    (1, _) => base,
                    _ => format!("{c}{base}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Condition on the prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    AtLeast(u64),
    Exactly(u64),
}

impl Validity {
    fn parse(s: &str) -> Result<Vec<Validity>> {
        s.split(',')
            .map(|c| {
                let c = c.trim();
                let num = |t: &str| t.trim().parse().map_err(|_| Error::Catalog(format!("bad validity `{s}`")));
                if let Some(v) = c.strip_prefix("p>=") {
                    Ok(Validity::AtLeast(num(v)?))
                } else if let Some(v) = c.strip_prefix("p==") {
                    Ok(Validity::Exactly(num(v)?))
                } else {
                    Err(Error::Catalog(format!("bad validity `{s}`")))
                }
            })
            .collect()
    }

    fn holds(&self, p: u64) -> bool {
        match self {
            Validity::AtLeast(m) => p >= *m,
            Validity::Exactly(m) => p == *m,
        }
    }
}

/// Witness attached to an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Generator words for each subgroup of a permutation representation.
    Subgroups(Vec<Vec<String>>),
    /// `(H, K)` pairs; `None` for `H` means the whole group.
    Characters(Vec<(Option<Vec<String>>, Vec<String>)>),
    /// Verified by exact computation only.
    None,
}

fn parse_gens(s: &str) -> Result<Vec<String>> {
    let inner = s
        .trim()
        .strip_prefix('<')
        .and_then(|x| x.strip_suffix('>'))
        .ok_or_else(|| Error::Catalog(format!("expected `<...>`, found `{s}`")))?;
    Ok(inner.split(',').map(|w| w.trim().to_string()).filter(|w| !w.is_empty()).collect())
}

impl Witness {
    pub fn parse(s: &str) -> Result<Witness> {
        if s == "none" {
            return Ok(Witness::None);
        }
        if let Some(rest) = s.strip_prefix("sub:") {
            return Ok(Witness::Subgroups(rest.split(';').map(parse_gens).collect::<Result<_>>()?));
        }
        if let Some(rest) = s.strip_prefix("char:") {
            let mut out = Vec::new();
            for item in rest.split(';') {
                let bad = || Error::Catalog(format!("bad character witness `{item}`"));
                let (h, k) = item.split_once(",K=").ok_or_else(bad)?;
                let h = h.strip_prefix("H=").ok_or_else(bad)?;
                let h = if h == "G" { None } else { Some(parse_gens(h)?) };
                out.push((h, parse_gens(k)?));
            }
            return Ok(Witness::Characters(out));
        }
        Err(Error::Catalog(format!("unknown witness `{s}`")))
    }
}

/// One catalog row.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub validity: Vec<Validity>,
    pub expected: Poly,
    pub witness: Witness,
    /// Presentation file, or `None` when only external data defines the group.
    pub source: Option<PathBuf>,
    /// Degree attained by the witness when it exceeds the expected value.
    pub witness_degree: Option<Poly>,
}

impl CatalogEntry {
    pub fn valid_for(&self, p: u64) -> bool {
        self.validity.iter().all(|v| v.holds(p))
    }

    pub fn witness_value(&self, p: u64) -> u128 {
        self.witness_degree.as_ref().unwrap_or(&self.expected).eval(p)
    }
}

/// Normalizes `G_3_23`, `G_(3, 23)` and `Phi38_3` to `G_(3,23)` form.
pub fn normalize_id(id: &str) -> String {
    let s: String = id.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = s.strip_prefix("Phi") {
        return format!("G_({})", rest.replacen('_', ",", 1));
    }
    if let Some(rest) = s.strip_prefix("G_") {
        if !rest.starts_with('(') {
            return format!("G_({})", rest.replacen('_', ",", 1));
        }
    }
    s
}

/// The loaded catalog.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub root: PathBuf,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Directory from `PERMDEG_CATALOG`, else the one shipped with the sources.
    pub fn default_root() -> PathBuf {
        std::env::var_os("PERMDEG_CATALOG")
            .map(PathBuf::from)
            .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog"))
    }

    pub fn load_default() -> Result<Catalog> {
        Catalog::load(&Catalog::default_root())
    }

    pub fn load(root: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(root.join("expected.tsv"))?;
        let mut entries = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 6 {
                return Err(Error::Catalog(format!("expected.tsv line {}: {} columns", ln + 1, cols.len())));
            }
            entries.push(CatalogEntry {
                id: normalize_id(cols[0]),
                validity: Validity::parse(cols[1])?,
                expected: Poly::parse(cols[2])?,
                witness: Witness::parse(cols[3])?,
                source: (cols[4] != EXTERNAL).then(|| PathBuf::from(cols[4])),
                witness_degree: if cols[5] == "=" { None } else { Some(Poly::parse(cols[5])?) },
            });
        }
        Ok(Catalog { root: root.to_path_buf(), entries })
    }

    pub fn entry(&self, id: &str) -> Result<&CatalogEntry> {
        let id = normalize_id(id);
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| Error::Catalog(format!("unknown id `{id}`")))
    }

    fn source_text(&self, entry: &CatalogEntry) -> Result<String> {
        let path = entry.source.as_ref().ok_or_else(|| Error::Catalog(format!("{}: {EXTERNAL}", entry.id)))?;
        Ok(std::fs::read_to_string(self.root.join(path))?)
    }

    /// Builds the group for `id` at `p`. Entries whose printed presentation
    /// is specific to one prime load only at that prime.
    pub fn load_entry(&self, id: &str, p: u64, bindings: &[(&str, &str)]) -> Result<(Refined, &CatalogEntry)> {
        let entry = self.entry(id)?;
        let prime = primes::resolve_params(p)?;
        if !entry.valid_for(p) {
            return Err(Error::Catalog(format!("{} is not catalogued for p={p}", entry.id)));
        }
        let text = self.source_text(entry)?;
        let pres = pcpres::parse_presentation(&text, prime, bindings)?;
        Ok((pcpres::refine(&pres)?, entry))
    }

    /// Parameter bindings to sweep for `entry` at `p`: every value of the
    /// declared range, or the default when no range applies.
    pub fn sweep(&self, entry: &CatalogEntry, p: u64) -> Result<Vec<Vec<(String, String)>>> {
        let text = self.source_text(entry)?;
        let pres = pcpres::parse_presentation(&text, primes::resolve_params(p)?, &[])?;
        let mut out: Vec<Vec<(String, String)>> = vec![vec![]];
        for (name, _) in &pres.params {
            let Some(vals) = pres.param_range(name) else { continue };
            out = out
                .into_iter()
                .flat_map(|b| {
                    vals.iter().map(move |v| {
                        let mut b = b.clone();
                        b.push((name.clone(), v.to_string()));
                        b
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

/// Verification outcome for one entry and parameter choice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail(String),
    /// Exact search exhausted its budget; carries the best bound if known.
    Bounded(Option<u64>),
    Skipped(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub params: Vec<(String, String)>,
    pub expected: u128,
    pub witness_degree: Option<u128>,
    pub mu: Option<u128>,
    pub c: Option<u128>,
    pub status: Status,
}

impl EntryReport {
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.id.clone()
        } else {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}[{}]", self.id, ps.join(","))
        }
    }
}

fn subgroup_of(r: &Refined, words: &[String]) -> Result<Subgroup> {
    let gens = words.iter().map(|w| r.element(w)).collect::<Result<Vec<_>>>()?;
    Ok(structure::closure(&r.group, &gens))
}

/// Checks a witness; returns the degree it attains.
pub fn check_witness(r: &Refined, witness: &Witness) -> Result<std::result::Result<u128, String>> {
    let g = &r.group;
    match witness {
        Witness::None => Ok(Err("no witness".into())),
        Witness::Subgroups(list) => {
            let parts = list.iter().map(|w| subgroup_of(r, w)).collect::<Result<Vec<_>>>()?;
            let (ok, x) = mu::is_faithful(g, &parts);
            if !ok {
                let x = x.map(|x| g.format(&x)).unwrap_or_default();
                return Ok(Err(format!("subgroups not faithful: {x} acts trivially")));
            }
            Ok(Ok(mu::RepSet::new(g, parts).degree))
        }
        Witness::Characters(list) => {
            let mut classes = Vec::new();
            for (h, k) in list {
                let h = match h {
                    Some(w) => subgroup_of(r, w)?,
                    None => structure::whole(g),
                };
                classes.push(CharClass::new(h, subgroup_of(r, k)?));
            }
            let cert = quasiperm::QuasiCert::new(g, classes);
            Ok(quasiperm::check_cert(g, &cert).map(|_| cert.c_value))
        }
    }
}

/// Verification mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mode {
    /// Also compute `μ` and `c` exactly and compare with the expected value.
    pub exact: bool,
}

fn budget_status(e: Error) -> Status {
    match e {
        Error::BudgetExhausted { best_bound, .. } => Status::Bounded(best_bound),
        other => Status::Fail(other.to_string()),
    }
}

/// Verifies one entry at one parameter choice.
pub fn verify_entry(cat: &Catalog, entry: &CatalogEntry, p: u64, params: &[(String, String)], mode: Mode, budget: &Budget) -> EntryReport {
    let expected = entry.expected.eval(p);
    let mut report = EntryReport {
        id: entry.id.clone(),
        params: params.to_vec(),
        expected,
        witness_degree: None,
        mu: None,
        c: None,
        status: Status::Pass,
    };
    if entry.source.is_none() {
        report.status = Status::Skipped(EXTERNAL.into());
        return report;
    }
    if !entry.valid_for(p) {
        report.status = Status::Skipped(format!("not catalogued for p={p}"));
        return report;
    }
    let bindings: Vec<(&str, &str)> = params.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    let r = match cat.load_entry(&entry.id, p, &bindings) {
        Ok((r, _)) => r,
        Err(e) => {
            report.status = Status::Fail(e.to_string());
            return report;
        }
    };
    let g = &r.group;
    if let Some(v) = g.consistency_check().first() {
        report.status = Status::Fail(format!("inconsistent presentation: {v:?}"));
        return report;
    }
    if entry.witness != Witness::None {
        match check_witness(&r, &entry.witness) {
            Err(e) => {
                report.status = Status::Fail(e.to_string());
                return report;
            }
            Ok(Err(msg)) => {
                report.status = Status::Fail(msg);
                return report;
            }
            Ok(Ok(d)) => {
                report.witness_degree = Some(d);
                let want = entry.witness_value(p);
                if d != want {
                    report.status = Status::Fail(format!("witness degree {d}, table value {want}"));
                    return report;
                }
            }
        }
    }
    if mode.exact || entry.witness == Witness::None {
        match mu::minimal_degree(g, budget) {
            Ok((m, _)) => report.mu = Some(m),
            Err(e) => {
                report.status = budget_status(e);
                return report;
            }
        }
        if mode.exact {
            match quasiperm::minimal_c(g, budget) {
                Ok((c, _)) => report.c = Some(c),
                Err(e) => {
                    report.status = budget_status(e);
                    return report;
                }
            }
        }
        let m = report.mu.unwrap_or_default();
        if m != expected {
            report.status = Status::Fail(format!("exact value {m}, expected {expected}"));
        } else if report.c.is_some_and(|c| c != m) {
            report.status = Status::Fail(format!("c = {} differs from mu = {m}", report.c.unwrap_or_default()));
        }
    }
    report
}

/// Reports for every entry and parameter choice at `p`.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub p: u64,
    pub reports: Vec<EntryReport>,
}

impl Summary {
    pub fn failures(&self) -> Vec<&EntryReport> {
        self.reports.iter().filter(|r| matches!(r.status, Status::Fail(_))).collect()
    }
    pub fn count(&self, f: impl Fn(&Status) -> bool) -> usize {
        self.reports.iter().filter(|r| f(&r.status)).count()
    }
}

/// Verifies the whole catalog at `p`, one worker per entry.
pub fn verify_all(cat: &Catalog, p: u64, mode: Mode, budget: &Budget) -> Result<Summary> {
    primes::resolve_params(p)?;
    if p > 97 {
        return Err(Error::Catalog(format!("catalog commands take p <= 97, got {p}")));
    }
    let jobs: Vec<(&CatalogEntry, Vec<(String, String)>)> = cat
        .entries
        .iter()
        .flat_map(|e| {
            let sweeps = if e.source.is_some() && e.valid_for(p) { cat.sweep(e, p).unwrap_or_default() } else { vec![vec![]] };
            sweeps.into_iter().map(move |s| (e, s))
        })
        .collect();
    let reports = jobs.par_iter().map(|(e, s)| verify_entry(cat, e, p, s, mode, budget)).collect();
    Ok(Summary { p, reports })
}

/// Rows of the order-`3^6` reference table: `(μ, identifiers)`.
pub fn reference_table(cat: &Catalog) -> Result<Vec<(u32, Vec<u32>)>> {
    let text = std::fs::read_to_string(cat.root.join("table8.tsv"))?;
    let bad = |l: &str| Error::Catalog(format!("bad reference row `{l}`"));
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (m, ids) = l.split_once('\t').ok_or_else(|| bad(l))?;
            let ids = ids.split(',').map(|x| x.trim().parse().map_err(|_| bad(l))).collect::<Result<_>>()?;
            Ok((m.trim().parse().map_err(|_| bad(l))?, ids))
        })
        .collect()
}
