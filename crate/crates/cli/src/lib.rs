//! Front end for the `dlres` binary.

pub mod cache;
pub mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dlres::restlab::{restriction_census, restriction_report, CensusSummary};
use dlres::{CharIndex, Error, FieldTower, GroupKind, GroupModel, Lab, Suite, TorusKind, VerificationSummary};
use serde::Serialize;

use cache::DiskStore;
use render::{number, opt, Format, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "dlres", version, about = "Deligne-Lusztig characters of GL2(F_q) and their restriction to SL2(F_q)")]
pub struct Cli {
    /// Directory for cached class partitions and Green tables.
    #[arg(long, global = true, env = "DLRES_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Values of R_{T,theta} on every conjugacy class.
    Table(CharArgs),
    /// Clifford analysis of the restriction of ±R_{T,theta} to a determinant subgroup.
    Restrict(CharArgs),
    /// Run property suites and report every failing witness.
    Verify(VerifyArgs),
    /// Conjugacy classes of a determinant subgroup of GL2 or of the Borel subgroup.
    Classes(ClassArgs),
    /// Restriction of every cuspidal character of GL2 to SL2.
    Census(CensusArgs),
}

#[derive(Args, Debug)]
pub struct CharArgs {
    /// Field order: an odd prime power up to 11.
    #[arg(long)]
    pub q: u32,
    /// split or nonsplit; inferred from --theta when omitted.
    #[arg(long)]
    pub torus: Option<TorusKind>,
    /// `j` for the nonsplit torus, `j1,j2` for the split one (default trivial).
    #[arg(long)]
    pub theta: Option<ThetaArg>,
    /// Order of D for the subgroup {g : det g ∈ D}: 1 is SL2, q-1 is GL2.
    #[arg(long)]
    pub subgroup: Option<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated field orders.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    /// restriction, split_oracle, orthogonality, degrees, clifford,
    /// regularity, coset, iso, green, or all.
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    #[arg(long)]
    pub q: u32,
    /// Order of D; defaults to q-1 (GL2).
    #[arg(long, conflicts_with = "borel")]
    pub subgroup: Option<u32>,
    /// Upper-triangular matrices instead of a determinant subgroup.
    #[arg(long)]
    pub borel: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    /// Comma-separated field orders.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaArg(pub Vec<u32>);

impl FromStr for ThetaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| format!("bad theta component {p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        match parts.len() {
            1 | 2 => Ok(ThetaArg(parts)),
            n => Err(format!("theta takes one or two indices, got {n}")),
        }
    }
}

/// Errors that end the run with a specific exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(VerificationSummary),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrimePower(_)
            | Error::EvenCharacteristic(_)
            | Error::BudgetExceeded { .. }
            | Error::NotADeterminantSubgroup { .. }
            | Error::CharacterKindMismatch(_)
            | Error::NotRegular
            | Error::NotIrreducible(_)
            | Error::UnsupportedGroup(_) => Failure::Usage(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

/// Parses the process arguments and maps the outcome of the run to an exit code.
pub fn main_exit() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    ExitCode::from(report_outcome(run(&cli), &mut std::io::stderr()))
}

/// Prints a diagnostic (a JSON failure manifest for failed verification) and
/// returns the exit code.
pub fn report_outcome(outcome: Result<(), Failure>, err: &mut impl Write) -> u8 {
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Verification(summary)) => {
            let _ = writeln!(err, "{}", serde_json::to_string_pretty(&failure_manifest(&summary)).unwrap());
            EXIT_FAILED
        }
        Err(Failure::Other(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_FAILED
        }
    }
}

#[derive(Serialize)]
pub struct ManifestEntry<'a> {
    pub suite: &'a str,
    #[serde(flatten)]
    pub failure: &'a dlres::restlab::Failure,
}

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub total_failures: usize,
    pub failures: Vec<ManifestEntry<'a>>,
}

pub fn failure_manifest(summary: &VerificationSummary) -> Manifest<'_> {
    Manifest {
        total_failures: summary.total_failures,
        failures: summary
            .failures()
            .map(|(suite, failure)| ManifestEntry { suite, failure })
            .collect(),
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let lab = match &cli.cache_dir {
        Some(dir) => Lab::with_store(Box::new(DiskStore::new(dir))),
        None => Lab::new(),
    };
    let (text, failed) = match &cli.command {
        Command::Table(a) => (table(&lab, a)?, None),
        Command::Restrict(a) => (restrict(&lab, a)?, None),
        Command::Classes(a) => (classes(&lab, a)?, None),
        Command::Census(a) => (census(&lab, a)?, None),
        Command::Verify(a) => {
            for &q in &a.q {
                check_q(q)?;
            }
            let summary = dlres::run_suite(&lab, a.suite, &a.q)?;
            let text = render_summary(&summary, a.format.unwrap_or(Format::Json))?;
            let failed = (!summary.passed).then_some(summary);
            (text, failed)
        }
    };
    emit(cli, &text)?;
    match failed {
        Some(summary) => Err(Failure::Verification(summary)),
        None => Ok(()),
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// `FieldTower` rejects even and oversized q; this gives the same message
/// before any heavier work.
fn check_q(q: u32) -> Result<(), Failure> {
    FieldTower::with_order(q).map(|_| ()).map_err(Failure::from)
}

fn json(value: &impl Serialize) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn render(table: &Table, format: Format, value: &impl Serialize) -> anyhow::Result<String> {
    match format {
        Format::Md => Ok(table.markdown()),
        Format::Csv => table.csv(),
        Format::Json => json(value),
    }
}

fn char_index(a: &CharArgs) -> Result<CharIndex, Failure> {
    let from_theta = a.theta.as_ref().map(|t| match t.0[..] {
        [j] => CharIndex::Nonsplit(j),
        [j1, j2] => CharIndex::Split(j1, j2),
        _ => unreachable!("checked by the parser"),
    });
    match (a.torus, from_theta) {
        (None, None) => Err(Failure::Usage("give --torus or --theta".into())),
        (Some(k), None) => Ok(CharIndex::trivial(k)),
        (None, Some(i)) => Ok(i),
        (Some(k), Some(i)) if k == i.kind() => Ok(i),
        (Some(k), Some(_)) => Err(Error::CharacterKindMismatch(k).into()),
    }
}

fn d_order(q: u32, subgroup: Option<u32>) -> u32 {
    subgroup.unwrap_or(q - 1)
}

fn group_for(lab: &Lab, q: u32, d: u32) -> Result<Arc<GroupModel>, Failure> {
    Ok(lab.group(q, GroupKind::DetSubgroup { d_order: d })?)
}

#[derive(Serialize)]
struct ClassRow {
    class: usize,
    representative: String,
    size: usize,
    order: u32,
}

#[derive(Serialize)]
struct ClassListRow {
    #[serde(flatten)]
    class: ClassRow,
    semisimple: bool,
    unipotent: bool,
}

#[derive(Serialize)]
struct ValueRow {
    #[serde(flatten)]
    class: ClassRow,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct CharacterTable {
    group: String,
    q: u32,
    torus: TorusKind,
    theta: CharIndex,
    rows: Vec<ValueRow>,
}

fn class_row(i: usize, c: &dlres::group::ConjClass) -> ClassRow {
    ClassRow {
        class: i,
        representative: c.representative().to_string(),
        size: c.size(),
        order: c.element_order(),
    }
}

fn table(lab: &Lab, a: &CharArgs) -> Result<String, Failure> {
    check_q(a.q)?;
    let index = char_index(a)?;
    let d = d_order(a.q, a.subgroup);
    let g = group_for(lab, a.q, d)?;
    if !g.is_gl2() && !g.is_sl2() {
        return Err(Error::UnsupportedGroup(g.label()).into());
    }
    let ev = lab.evaluator(a.q, d, index.kind())?;
    let chi = ev.evaluate(&ev.torus().character(index)?)?;
    let rows: Vec<ValueRow> = g
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| ValueRow {
            class: class_row(i, c),
            re: chi.values()[i].re,
            im: chi.values()[i].im,
        })
        .collect();
    let mut t = Table::new(["class", "representative", "size", "order", "re", "im"]);
    for r in &rows {
        t.push(vec![
            r.class.class.to_string(),
            r.class.representative.clone(),
            r.class.size.to_string(),
            r.class.order.to_string(),
            number(r.re),
            number(r.im),
        ]);
    }
    let doc = CharacterTable {
        group: g.label(),
        q: a.q,
        torus: index.kind(),
        theta: index,
        rows,
    };
    Ok(render(&t, a.format.unwrap_or(Format::Md), &doc)?)
}

fn restrict(lab: &Lab, a: &CharArgs) -> Result<String, Failure> {
    check_q(a.q)?;
    let index = char_index(a)?;
    let d = a.subgroup.unwrap_or(1);
    group_for(lab, a.q, d)?;
    let r = restriction_report(lab, a.q, index, d)?;
    let mut t = Table::new(["field", "value"]);
    let fields: Vec<(&str, String)> = vec![
        ("q", r.q.to_string()),
        ("character", r.character.clone()),
        ("subgroup |D|", r.d_order.to_string()),
        ("restriction identity applies", r.theorem_applies.to_string()),
        ("theorem deviation", opt(r.theorem_deviation.map(|x| format!("{x:.3e}")))),
        ("dim", r.dim_character.to_string()),
        ("<Res, Res>", r.restriction_norm.to_string()),
        ("twist stabilizer", r.twist_stabilizer_size.to_string()),
        ("m", opt(r.multiplicity)),
        ("t", opt(r.component_count)),
        ("component dim", opt(r.dim_components)),
        ("regular", opt(r.regular)),
        ("regular on T_H", opt(r.regular_h)),
        ("regular in G", opt(r.regular_in_g)),
        ("prediction matched", opt(r.prediction_matched)),
    ];
    for (k, v) in fields {
        t.push(vec![k.to_string(), v]);
    }
    Ok(render(&t, a.format.unwrap_or(Format::Json), &r)?)
}

#[derive(Serialize)]
struct ClassList {
    group: String,
    q: u32,
    order: usize,
    classes: Vec<ClassListRow>,
}

fn classes(lab: &Lab, a: &ClassArgs) -> Result<String, Failure> {
    check_q(a.q)?;
    let g = if a.borel {
        lab.borel(a.q)?
    } else {
        group_for(lab, a.q, d_order(a.q, a.subgroup))?
    };
    let rows: Vec<ClassListRow> = g
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| ClassListRow {
            class: class_row(i, c),
            semisimple: g.is_semisimple(c.representative()),
            unipotent: g.is_unipotent(c.representative()),
        })
        .collect();
    let mut t = Table::new(["class", "representative", "size", "order", "semisimple", "unipotent"]);
    for r in &rows {
        t.push(vec![
            r.class.class.to_string(),
            r.class.representative.clone(),
            r.class.size.to_string(),
            r.class.order.to_string(),
            r.semisimple.to_string(),
            r.unipotent.to_string(),
        ]);
    }
    let doc = ClassList {
        group: g.label(),
        q: a.q,
        order: g.order(),
        classes: rows,
    };
    Ok(render(&t, a.format.unwrap_or(Format::Md), &doc)?)
}

fn census(lab: &Lab, a: &CensusArgs) -> Result<String, Failure> {
    for &q in &a.q {
        check_q(q)?;
    }
    let all: Vec<CensusSummary> = a
        .q
        .iter()
        .map(|&q| restriction_census(lab, q))
        .collect::<dlres::Result<_>>()?;
    let mut t = Table::new(["q", "theta", "n", "m", "t", "component dim", "regular in G", "prediction matched", "deviation"]);
    for c in &all {
        for r in &c.reports {
            t.push(vec![
                c.q.to_string(),
                opt(r.theta),
                r.restriction_norm.to_string(),
                opt(r.multiplicity),
                opt(r.component_count),
                opt(r.dim_components),
                opt(r.regular_in_g),
                opt(r.prediction_matched),
                opt(r.theorem_deviation.map(|x| format!("{x:.3e}"))),
            ]);
        }
    }
    Ok(render(&t, a.format.unwrap_or(Format::Md), &all)?)
}

fn render_summary(s: &VerificationSummary, format: Format) -> anyhow::Result<String> {
    let mut t = Table::new(["suite", "q", "checks", "failures", "max deviation"]);
    for r in &s.suites {
        t.push(vec![
            r.name.clone(),
            r.q.to_string(),
            r.checks.to_string(),
            r.failures.len().to_string(),
            format!("{:.3e}", r.max_deviation),
        ]);
    }
    render(&t, format, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dlres::restlab::SuiteResult;

    #[test]
    fn theta_parsing() {
        assert_eq!("3".parse::<ThetaArg>().unwrap(), ThetaArg(vec![3]));
        assert_eq!("1, 2".parse::<ThetaArg>().unwrap(), ThetaArg(vec![1, 2]));
        assert!("1,2,3".parse::<ThetaArg>().is_err());
        assert!("x".parse::<ThetaArg>().is_err());
    }

    #[test]
    fn failed_verification_exits_one_with_manifest() {
        let failure = dlres::restlab::Failure {
            q: 5,
            torus: Some(TorusKind::Nonsplit),
            theta: Some(CharIndex::Nonsplit(3)),
            detail: "injected".into(),
            deviation: Some(0.5),
        };
        let summary = VerificationSummary {
            qs: vec![5],
            suites: vec![SuiteResult {
                name: "restriction".into(),
                q: 5,
                checks: 1,
                failures: vec![failure],
                max_deviation: 0.5,
            }],
            total_checks: 1,
            total_failures: 1,
            passed: false,
        };
        let mut err = Vec::new();
        assert_eq!(report_outcome(Err(Failure::Verification(summary)), &mut err), EXIT_FAILED);
        let manifest: serde_json::Value = serde_json::from_slice(&err).unwrap();
        assert_eq!(manifest["total_failures"], 1);
        assert_eq!(manifest["failures"][0]["suite"], "restriction");
        assert_eq!(manifest["failures"][0]["theta"], 3);
        assert_eq!(manifest["failures"][0]["torus"], "nonsplit");
    }

    #[test]
    fn usage_errors_exit_two() {
        let mut err = Vec::new();
        assert_eq!(report_outcome(Err(Error::EvenCharacteristic(2).into()), &mut err), EXIT_USAGE);
        assert!(String::from_utf8(err).unwrap().contains("divides |W|"));
        assert!(matches!(Failure::from(Error::ZeroNorm), Failure::Other(_)));
    }
}
