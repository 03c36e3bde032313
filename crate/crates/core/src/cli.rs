//! Batch driver behind the `ppcurve` binary.
//!
//! Exit codes: 0 pass, 1 claim mismatch, 2 usage or parse error,
//! 3 size cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    self, default_instances, finale_triples, outside_fq_triples, search_table1,
    verify_factorization, verify_family, verify_resultant, AuditReport, Caps, CatalogData,
    FamilyReport, Instance, Outcome, Table1Search,
};
use crate::gf::{parse_field_spec, Fe, FieldCtx, DEFAULT_FIELD_CAP};
use crate::permcheck::{mu_subgroup, permutes_fn, DomainMode, PermutationReport, FULL_FIELD_CAP};
use crate::polyalg::{parse_fraction_parts, parse_unipoly_with};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Default evaluation budget for `verify-all`.
pub const DEFAULT_MAX_COST: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    /// One JSON record per line.
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "ppcurve",
    version,
    about = "Permutation polynomials over finite fields via fractional polynomials and curves"
)]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Catalog data file to use instead of the built-in one.
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// Largest field order constructed.
    #[arg(long, global = true, default_value_t = DEFAULT_FIELD_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub field_cap: u64,
    /// Largest domain checked by full-field brute force.
    #[arg(long, global = true, default_value_t = FULL_FIELD_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub brute_cap: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one family at the given sizes against its claim.
    Verify(VerifyArgs),
    /// Check every family at every size within the budget.
    VerifyAll(VerifyAllArgs),
    /// Test a polynomial or fraction on a field or on mu_{q+1}.
    Check(CheckArgs),
    /// Verify the stored factorizations and resultants.
    Audit(AuditArgs),
    /// Search all x(x^2+Ax+B)^2/(x^2+Cx+D)^2 over F_5^k.
    SearchTable1(SearchArgs),
    /// List the family catalog.
    Families,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub family: String,
    /// Sizes (k, n or m; all three flags are accepted).
    #[arg(
        long = "k",
        visible_alias = "n",
        visible_alias = "m",
        alias = "sizes",
        value_delimiter = ','
    )]
    pub sizes: Vec<u32>,
    /// Characteristic, for families where p is a parameter.
    #[arg(long)]
    pub p: Option<u64>,
    /// Parameter values (encodings), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct VerifyAllArgs {
    /// Largest number of domain evaluations per instance.
    #[arg(long, default_value_t = DEFAULT_MAX_COST)]
    pub max_cost: u64,
    /// Also run the factorization and resultant audits.
    #[arg(long)]
    pub audits: bool,
    /// Restrict to these family ids.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["poly", "frac"])))]
pub struct CheckArgs {
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub frac: Option<String>,
    /// Field F_{p^n} as p^n; with --mu this is q and the ambient field is F_{q^2}.
    #[arg(long)]
    pub field: String,
    /// Check on mu_{q+1} instead of the whole field.
    #[arg(long)]
    pub mu: bool,
    /// Exit 1 unless the verdict matches.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Permutes,
    NotPermutes,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Only the cases with these ids.
    #[arg(long, value_delimiter = ',')]
    pub id: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long = "k", value_delimiter = ',', default_values_t = [1u32, 3])]
    pub ks: Vec<u32>,
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub format: Format,
    pub workers: usize,
    pub caps: Caps,
    pub data: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        RunConfig {
            format: cli.format,
            workers: cli.workers,
            caps: Caps {
                field: cli.field_cap,
                brute: cli.brute_cap,
            },
            data: cli.data.clone(),
        }
    }

    pub fn catalog_data(&self) -> Result<CatalogData> {
        match &self.data {
            Some(p) => CatalogData::load(p),
            None => Ok(CatalogData::builtin()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub input: String,
    pub field: String,
    pub domain: String,
    pub report: PermutationReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTally {
    pub family: String,
    pub pass: usize,
    pub fail: usize,
    pub info: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub pass: usize,
    pub fail: usize,
    pub info: usize,
    pub audits_ok: usize,
    pub audits_failed: usize,
    pub families: Vec<FamilyTally>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub formula: String,
    pub size: String,
    pub params: String,
    pub claim: String,
}

impl CatalogEntry {
    fn of(f: &families::FamilySpec) -> Self {
        CatalogEntry {
            id: f.id.into(),
            formula: f.formula.into(),
            size: f.size_name.to_string(),
            params: f.param_domain.into(),
            claim: f.claim.into(),
        }
    }
}

/// A line of structured output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Record {
    Family(FamilyReport),
    Audit(AuditReport),
    Check(CheckReport),
    Search(Table1Search),
    Summary(Summary),
    Entry(CatalogEntry),
    Error { message: String, exit_code: i32 },
}

impl Record {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::parse(line, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        match self {
            Record::Family(r) => {
                let params = if r.params.is_empty() {
                    String::new()
                } else {
                    format!(" {:?}", r.params)
                };
                let witness = r
                    .witness
                    .map(|w| format!(" witness {w:?}"))
                    .unwrap_or_default();
                format!(
                    "{:<6} {}{} p={} k={} on {}: {} (claim {:?}){} [{} ms]",
                    outcome_tag(r.outcome),
                    r.family,
                    params,
                    r.p,
                    r.k,
                    r.domain,
                    verdict_word(r.verdict),
                    r.predicted,
                    witness,
                    r.elapsed_ms
                )
            }
            Record::Audit(a) => format!(
                "{:<6} {} {} over {}: w={} scalar={}{}{} ({} candidates) [{} ms]",
                if a.ok { "PASS" } else { "FAIL" },
                a.kind,
                a.id,
                a.field,
                a.primitive.map_or("-".into(), |v| v.to_string()),
                a.scalar.map_or("-".into(), |v| v.to_string()),
                if a.exact { " exact" } else { "" },
                a.sign.map_or(String::new(), |s| format!(" sign {s}")),
                a.candidates,
                a.elapsed_ms
            ),
            Record::Check(c) => {
                let witness = c
                    .report
                    .witness
                    .map(|w| format!(", witness {w:?}"))
                    .unwrap_or_default();
                format!(
                    "{} on {} ({} elements): {}{}",
                    c.input,
                    c.domain,
                    c.report.domain_size,
                    verdict_word(c.report.verdict),
                    witness
                )
            }
            Record::Search(s) => {
                let mut out = format!(
                    "table1 search k={:?}: {} survivors\n",
                    s.ks,
                    s.survivors.len()
                );
                for q in &s.survivors {
                    out.push_str(&format!("  {:?}\n", q));
                }
                out.push_str(&format!("listed but missing: {:?}\n", s.missing));
                out.push_str(&format!("unlisted survivors: {:?}", s.extras));
                for (q, k, w) in &s.failures {
                    out.push_str(&format!("\n  {q:?} fails at k={k}: {w:?}"));
                }
                out
            }
            Record::Summary(s) => {
                let mut out = format!(
                    "{:<10} {:>5} {:>5} {:>5}\n",
                    "family", "pass", "fail", "info"
                );
                for t in &s.families {
                    out.push_str(&format!(
                        "{:<10} {:>5} {:>5} {:>5}\n",
                        t.family, t.pass, t.fail, t.info
                    ));
                }
                out.push_str(&format!(
                    "{} instances: {} pass, {} fail, {} info",
                    s.instances, s.pass, s.fail, s.info
                ));
                if s.audits_ok + s.audits_failed > 0 {
                    out.push_str(&format!(
                        "; audits {} ok, {} failed",
                        s.audits_ok, s.audits_failed
                    ));
                }
                out
            }
            Record::Entry(e) => format!(
                "{:<8} {}  ({}; params: {})  {}",
                e.id, e.formula, e.size, e.params, e.claim
            ),
            Record::Error { message, .. } => format!("error: {message}"),
        }
    }
}

fn outcome_tag(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "PASS",
        Outcome::Fail => "FAIL",
        Outcome::Info => "info",
    }
}

fn verdict_word(v: bool) -> &'static str {
    if v {
        "permutes"
    } else {
        "does not permute"
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

/// The outcome of a command: records in output order and an exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub records: Vec<Record>,
    pub code: i32,
}

impl RunOutput {
    fn new(records: Vec<Record>, mismatch: bool) -> Self {
        RunOutput {
            records,
            code: if mismatch { EXIT_MISMATCH } else { EXIT_PASS },
        }
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let cfg = RunConfig::from_cli(&cli);
    let result = run(&cli.command, &cfg);
    let (records, code) = match result {
        Ok(o) => (o.records, o.code),
        Err(e) => {
            let code = exit_code(&e);
            (
                vec![Record::Error {
                    message: e.to_string(),
                    exit_code: code,
                }],
                code,
            )
        }
    };
    for r in &records {
        let line = match cfg.format {
            Format::Json => r.to_json(),
            Format::Text => r.to_text(),
        };
        let sink: &mut dyn Write = match (r, cfg.format) {
            (Record::Error { .. }, Format::Text) => &mut *err,
            _ => &mut *out,
        };
        let _ = writeln!(sink, "{line}");
    }
    code
}

/// Runs one command on a pool of `cfg.workers` threads.
pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<RunOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot start workers: {e}")))?;
    pool.install(|| match cmd {
        Command::Verify(a) => cmd_verify(a, cfg),
        Command::VerifyAll(a) => cmd_verify_all(a, cfg),
        Command::Check(a) => cmd_check(a, cfg).map(|(r, code)| RunOutput {
            records: vec![Record::Check(r)],
            code,
        }),
        Command::Audit(a) => cmd_audit(a, cfg),
        Command::SearchTable1(a) => {
            let data = cfg.catalog_data()?;
            let s = search_table1(&a.ks, &data.table1, cfg.caps.brute)?;
            let miss = !s.missing.is_empty();
            Ok(RunOutput::new(vec![Record::Search(s)], miss))
        }
        Command::Families => Ok(RunOutput::new(
            families::catalog()
                .iter()
                .map(|f| Record::Entry(CatalogEntry::of(f)))
                .collect(),
            false,
        )),
    })
}

/// The instances `verify` runs for its arguments.
pub fn verify_instances(a: &VerifyArgs, data: &CatalogData) -> Result<Vec<Instance>> {
    let spec = families::family(&a.family)?;
    let p = match (a.p, spec.characteristic) {
        (Some(p), _) => p,
        (None, Some(p)) => p,
        (None, None) => return Err(Error::InvalidParams(format!("{} needs --p", spec.id))),
    };
    let defaults: Vec<Instance> = default_instances(data)?
        .into_iter()
        .filter(|i| i.family == spec.id && i.p == p)
        .collect();
    let sizes: Vec<u32> = if a.sizes.is_empty() {
        let mut s: Vec<u32> = defaults.iter().map(|i| i.k).collect();
        s.dedup();
        if s.is_empty() {
            return Err(Error::InvalidParams(format!(
                "{} needs sizes (--{})",
                spec.id, spec.size_name
            )));
        }
        s
    } else {
        a.sizes.clone()
    };
    let param_sets: Vec<Vec<u64>> = match &a.params {
        Some(v) => vec![v.clone()],
        None if spec.param_count == 0 => vec![vec![]],
        None => match spec.id {
            "table1" => data.table1.iter().map(|r| r.to_vec()).collect(),
            "table2" => data.table2.iter().map(|r| r.to_vec()).collect(),
            _ => Vec::new(),
        },
    };
    let mut out = Vec::new();
    for &k in &sizes {
        let sets = if param_sets.is_empty() {
            // finale / quad: every qualifying triple at this size.
            let mut t = finale_triples(p, k)?;
            if spec.id == "quad" {
                t.extend(outside_fq_triples(p, k)?);
            }
            t.into_iter().map(|t| t.to_vec()).collect()
        } else {
            param_sets.clone()
        };
        for params in sets {
            out.push(Instance::new(spec.id, p, k, &params));
        }
    }
    Ok(out)
}

fn run_instances(insts: &[Instance], data: &CatalogData, caps: Caps) -> Result<Vec<FamilyReport>> {
    let results: Vec<Result<FamilyReport>> = insts
        .par_iter()
        .map(|i| verify_family(i, data, caps))
        .collect();
    results.into_iter().collect()
}

fn family_records(reports: Vec<FamilyReport>) -> (Vec<Record>, bool) {
    let mismatch = reports.iter().any(|r| r.outcome == Outcome::Fail);
    (reports.into_iter().map(Record::Family).collect(), mismatch)
}

pub fn cmd_verify(a: &VerifyArgs, cfg: &RunConfig) -> Result<RunOutput> {
    let data = cfg.catalog_data()?;
    let insts = verify_instances(a, &data)?;
    let (records, mismatch) = family_records(run_instances(&insts, &data, cfg.caps)?);
    Ok(RunOutput::new(records, mismatch))
}

pub fn cmd_verify_all(a: &VerifyAllArgs, cfg: &RunConfig) -> Result<RunOutput> {
    let data = cfg.catalog_data()?;
    for id in &a.only {
        families::family(id)?;
    }
    let mut insts = Vec::new();
    for i in default_instances(&data)? {
        if !a.only.is_empty() && !a.only.contains(&i.family) {
            continue;
        }
        if i.cost()? <= a.max_cost as u128 {
            insts.push(i);
        }
    }
    let reports = run_instances(&insts, &data, cfg.caps)?;
    let mut summary = Summary {
        instances: reports.len(),
        ..Summary::default()
    };
    for r in &reports {
        let pos = match summary.families.iter().position(|t| t.family == r.family) {
            Some(p) => p,
            None => {
                summary.families.push(FamilyTally {
                    family: r.family.clone(),
                    ..FamilyTally::default()
                });
                summary.families.len() - 1
            }
        };
        let t = &mut summary.families[pos];
        match r.outcome {
            Outcome::Pass => (t.pass += 1, summary.pass += 1),
            Outcome::Fail => (t.fail += 1, summary.fail += 1),
            Outcome::Info => (t.info += 1, summary.info += 1),
        };
    }
    let (mut records, mut mismatch) = family_records(reports);
    if a.audits {
        let audits = run_audits(&data, &[])?;
        summary.audits_ok = audits.iter().filter(|r| r.ok).count();
        summary.audits_failed = audits.len() - summary.audits_ok;
        mismatch |= summary.audits_failed > 0;
        records.extend(audits.into_iter().map(Record::Audit));
    }
    records.push(Record::Summary(summary));
    Ok(RunOutput::new(records, mismatch))
}

fn run_audits(data: &CatalogData, ids: &[String]) -> Result<Vec<AuditReport>> {
    let keep = |id: &str| ids.is_empty() || ids.iter().any(|x| x == id);
    for id in ids {
        if data.case(id).is_none() && data.resultant(id).is_none() {
            return Err(Error::InvalidParams(format!("no audit case {id:?}")));
        }
    }
    let facts: Vec<Result<AuditReport>> = data
        .cases
        .par_iter()
        .filter(|c| keep(&c.id))
        .map(verify_factorization)
        .collect();
    let res: Vec<Result<AuditReport>> = data
        .resultants
        .par_iter()
        .filter(|c| keep(&c.id))
        .map(verify_resultant)
        .collect();
    facts.into_iter().chain(res).collect()
}

pub fn cmd_audit(a: &AuditArgs, cfg: &RunConfig) -> Result<RunOutput> {
    let data = cfg.catalog_data()?;
    let reports = run_audits(&data, &a.id)?;
    let mismatch = reports.iter().any(|r| !r.ok);
    Ok(RunOutput::new(
        reports.into_iter().map(Record::Audit).collect(),
        mismatch,
    ))
}

/// Evaluates a polynomial or fraction (as written; zeros of the
/// denominator are poles) on a field or on mu_{q+1}.
pub fn cmd_check(a: &CheckArgs, cfg: &RunConfig) -> Result<(CheckReport, i32)> {
    let (p, k) = parse_field_spec(&a.field)?;
    // With --mu the spec names q and the map lives on mu_{q+1} < F_{q^2}.
    let n = if a.mu { 2 * k } else { k };
    let ctx = FieldCtx::with_cap(p, n, cfg.caps.field)?;
    let w = ctx.generator();
    let input = a
        .poly
        .clone()
        .or_else(|| a.frac.clone())
        .unwrap_or_default();
    let (num, den) = match (&a.poly, &a.frac) {
        (Some(s), _) => (parse_unipoly_with(&ctx, s, w)?, None),
        (None, Some(s)) => {
            let (nu, de) = parse_fraction_parts(&ctx, s, w)?;
            (nu, Some(de))
        }
        (None, None) => return Err(Error::InvalidParams("give --poly or --frac".into())),
    };
    let f = |z| match &den {
        None => Some(num.eval(z)),
        Some(d) => {
            let dz = d.eval(z);
            (!dz.is_zero()).then(|| num.eval(z) / dz)
        }
    };
    let (domain, report) = if a.mu {
        let q = p.pow(k as u32);
        let mu = mu_subgroup(&ctx, q + 1)?;
        (
            format!("mu_{} < {ctx}", q + 1),
            permutes_fn(mu.elements(), DomainMode::MuSubgroup, f),
        )
    } else {
        if ctx.order() > cfg.caps.brute {
            return Err(Error::cap(
                format!("brute force over {ctx}"),
                ctx.order() as u128,
                cfg.caps.brute as u128,
            ));
        }
        let dom: Vec<Fe> = ctx.elements().collect();
        (ctx.to_string(), permutes_fn(&dom, DomainMode::FullField, f))
    };
    let code = match a.expect {
        Some(Expect::Permutes) if !report.verdict => EXIT_MISMATCH,
        Some(Expect::NotPermutes) if report.verdict => EXIT_MISMATCH,
        _ => EXIT_PASS,
    };
    Ok((
        CheckReport {
            input,
            field: ctx.to_string(),
            domain,
            report,
        },
        code,
    ))
}
