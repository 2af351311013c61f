//! Batch front end: loads structures, runs suites, writes JSON reports.
//!
//! Exit status: 0 when every check passes, 1 on a failed check, 2 on
//! usage, parse or malformed-input errors, 3 when a resource bound stops
//! the run.

pub mod structure;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use koca::aks::LemmaScope;
use koca::hilbert::{aks_quasi_proof_check, sample_proofs};
use koca::homega::{
    adequacy_suite, check_derivation, modular_arithmetic, pa_axioms_check, parse_document, satisfaction_witness,
    theory_member, AdequacySetup, Interpretation, Signature,
};
use koca::lattice::lattice_suite;
use koca::translate::{aks_to_koca, galois_check, koca_to_aks, roundtrip_tripos_equivalence, streicher_iso_check};
use koca::tripos::{koca_tripos_suite, predicate_count, tripos_suite};
use koca::{CheckResult, Coverage, Exec, Limits, Report, Status};
use serde::Serialize;
use sha2::{Digest, Sha256};

use structure::{aks_file, koca_file, Structure};

#[derive(Debug, Parser)]
#[command(name = "koca", version, about = "Finite-model checks for realizability structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Structure file, or `boolean:n` for the Boolean KOCA on n atoms.
    #[arg(long, global = true)]
    pub structure: Option<String>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Seed for every sampled scan.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest |Π| for closed-set enumeration.
    #[arg(long, global = true)]
    pub max_enum: Option<usize>,
    /// Refuse to sample: exceed a cap and the run stops with status 3.
    #[arg(long, global = true, conflicts_with = "samples")]
    pub exhaustive: bool,
    /// Sample exactly this many predicate tuples per check.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Run scans on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Record wall-clock time in the report (makes it run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every law of the structure's layer and the layers below it.
    Check,
    /// Build the other presentation of a structure.
    Translate {
        #[arg(long, value_enum)]
        direction: Direction,
        /// Also check the result.
        #[arg(long)]
        verify: bool,
        /// Write the translated structure here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tripos laws over index sets up to the given size.
    Tripos {
        #[arg(long, default_value_t = 2)]
        index_size: usize,
    },
    /// Derivations, Peano axioms and adequacy in L^ω.
    Homega {
        /// Interpretation of kinds and constants (JSON).
        #[arg(long)]
        interp: Option<PathBuf>,
        /// Derivation file to check.
        #[arg(long)]
        check: Option<PathBuf>,
        /// Check the Peano axioms.
        #[arg(long)]
        pa: bool,
        /// Check adequacy of all derivations up to this depth.
        #[arg(long)]
        adequacy: Option<usize>,
    },
    /// KOCA → AKS → KOCA, with the tripos comparisons.
    Roundtrip {
        #[arg(long, default_value_t = 2)]
        index_size: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Aks2koca,
    Koca2aks,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] koca::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(koca::Error::Resource { .. }) => 3,
            _ => 2,
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

#[derive(Debug, Serialize)]
pub struct Fingerprint {
    pub source: String,
    pub kind: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<Fingerprint>,
    pub seed: u64,
    pub coverage: Coverage,
    pub caps: Limits,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
    pub suites: Vec<Report>,
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Ctx {
    limits: Limits,
    coverage: Coverage,
    exec: Exec,
}

fn load(common: &Common) -> Res<(Structure, Fingerprint)> {
    let spec = common
        .structure
        .as_deref()
        .ok_or_else(|| CliError::Usage("--structure is required".into()))?;
    let (text, bytes) = if spec.starts_with("boolean:") {
        (None, spec.as_bytes().to_vec())
    } else {
        let t = read(Path::new(spec))?;
        let b = t.as_bytes().to_vec();
        (Some(t), b)
    };
    let s = structure::load(spec, text.as_deref())?;
    let fp = Fingerprint { source: spec.to_string(), kind: s.kind().to_string(), sha256: sha256(&bytes) };
    Ok((s, fp))
}

fn want_koca<'a>(s: &'a Structure, what: &str) -> Res<&'a koca::Koca> {
    s.koca()
        .ok_or_else(|| CliError::Usage(format!("{what} needs a koca, quadruple or boolean:n structure, got {}", s.kind())))
}

fn check(s: &Structure, cx: &Ctx) -> Res<Vec<Report>> {
    let (l, x) = (&cx.limits, cx.exec);
    Ok(match s {
        Structure::Lattice(lat) => vec![lattice_suite(lat, l, x)?],
        Structure::Aks(a) => vec![
            a.suite(l, x, LemmaScope::AllSubsets)?,
            aks_quasi_proof_check(a, &sample_proofs(), l, LemmaScope::AllSubsets, x)?,
        ],
        Structure::Oca(o) => vec![o.suite(x)?],
        Structure::Ioca(i) => vec![i.suite(x)?],
        Structure::Koca(k) => vec![k.suite(x)?],
        Structure::Quadruple(q, k) => {
            let mut r = Report::new("quadruple");
            r.push(q.app_is_least_check(k, x));
            vec![r, k.suite(x)?]
        }
    })
}

fn translate(s: &Structure, direction: Direction, verify: bool, output: Option<&Path>, cx: &Ctx) -> Res<Vec<Report>> {
    let (l, x) = (&cx.limits, cx.exec);
    let mut head = Report::new("translate");
    let mut out = Vec::new();
    let text = match (direction, s) {
        (Direction::Aks2koca, Structure::Aks(a)) => {
            let k = aks_to_koca(a, l)?;
            head.push(CheckResult::pass("aks2koca", 1).with_note(format!("{} closed stack sets", k.len())));
            if verify {
                out.push(k.suite(x)?);
            }
            structure::to_text(&koca_file(&k))
        }
        (Direction::Koca2aks, s) => {
            let k = want_koca(s, "koca2aks")?;
            let a = koca_to_aks(k)?;
            head.push(CheckResult::pass("koca2aks", 1).with_note(format!("{} terms, {} stacks", a.n_terms(), a.n_stacks())));
            if verify {
                out.push(a.check_axioms(x));
                out.push(a.verify_lemmas(l, x, LemmaScope::AllSubsets)?);
                out.push(galois_check(k, l, x)?);
            }
            structure::to_text(&aks_file(&a))
        }
        (Direction::Aks2koca, other) => {
            return Err(CliError::Usage(format!("aks2koca needs an aks structure, got {}", other.kind())))
        }
    };
    if let Some(path) = output {
        write(path, &text)?;
    }
    out.insert(0, head);
    Ok(out)
}

fn tripos(s: &Structure, index_size: usize, cx: &Ctx) -> Res<Vec<Report>> {
    let (l, c, x) = (&cx.limits, &cx.coverage, cx.exec);
    if let Some(k) = s.koca() {
        return Ok(vec![koca_tripos_suite(k, index_size, c, l, x)?]);
    }
    match s.ioca() {
        Some(i) => Ok(vec![tripos_suite(i, index_size, c, l, x)?]),
        None => Err(CliError::Usage(format!("tripos needs an ioca or koca, got {}", s.kind()))),
    }
}

fn interpretation(path: Option<&Path>, sig: &Signature, k: &koca::Koca, l: &Limits) -> Res<Interpretation> {
    let v = match path {
        Some(p) => {
            let text = read(p)?;
            serde_json::from_str(&text)
                .map_err(|e| koca::Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?
        }
        None => serde_json::json!({}),
    };
    Ok(Interpretation::from_json(&v, sig, k, l)?)
}

fn homega(
    s: &Structure,
    interp: Option<&Path>,
    file: Option<&Path>,
    pa: bool,
    adequacy: Option<usize>,
    cx: &Ctx,
) -> Res<Vec<Report>> {
    let (l, x) = (&cx.limits, cx.exec);
    let k = want_koca(s, "homega")?;
    if file.is_none() && !pa && adequacy.is_none() {
        return Err(CliError::Usage("homega needs --check, --pa or --adequacy".into()));
    }
    let mut out = Vec::new();
    let (z3_sig, z3) = modular_arithmetic(3);
    let mut pa_setting = None;
    if let Some(path) = file {
        let doc = parse_document(&read(path)?)?;
        let it = interpretation(interp, &doc.signature, k, l)?;
        let mut r = Report::new("derivations");
        for d in &doc.derivations {
            let seq = check_derivation(&d.context, &d.tree)?;
            let w = satisfaction_witness(k, &it, &seq, l, x)?;
            r.push(CheckResult::from_witness(&d.name, 1, w).with_note(seq.to_string()));
        }
        let mut th = Report::new("theory");
        for (name, f) in &doc.formulas {
            if !f.free_vars().is_empty() {
                th.push(CheckResult::skipped(name, "not closed"));
                continue;
            }
            let note = match theory_member(k, &it, f, l)? {
                Some(r) => format!("realized by {}", k.name(r)),
                None => "no realizer in Φ".to_string(),
            };
            th.push(CheckResult::pass(name, 1).with_note(note));
        }
        out.push(r);
        out.push(th);
        pa_setting = Some((doc.signature, it));
    }
    if pa {
        let (sig, it) = match pa_setting.take() {
            Some(p) => p,
            None if interp.is_some() => {
                let it = interpretation(interp, &z3_sig, k, l)?;
                (z3_sig.clone(), it)
            }
            None => (z3_sig.clone(), z3.clone()),
        };
        out.push(pa_axioms_check(k, &sig, &it, l, x)?);
    }
    if let Some(depth) = adequacy {
        let (setup, sig) = AdequacySetup::standard();
        let it = match interp {
            Some(p) => interpretation(Some(p), &sig, k, l)?,
            None => AdequacySetup::standard_interpretation(),
        };
        out.push(adequacy_suite(k, &setup, &it, depth, l, x)?);
    }
    Ok(out)
}

fn roundtrip(s: &Structure, index_size: usize, cx: &Ctx) -> Res<Vec<Report>> {
    let (l, c, x) = (&cx.limits, &cx.coverage, cx.exec);
    let k = want_koca(s, "roundtrip")?;
    let aks = koca_to_aks(k)?;
    let back = aks_to_koca(&aks, l)?;
    let mut head = Report::new("roundtrip");
    head.push(CheckResult::from_witness(
        "carrier-size-preserved",
        1,
        (back.len() != k.len()).then(|| {
            koca::Witness::new()
                .with("before", k.len().to_string())
                .with("after", back.len().to_string())
        }),
    ));
    let mut out = vec![head, back.check(x), galois_check(k, l, x)?];
    for size in 0..=index_size {
        out.push(roundtrip_tripos_equivalence(k, size, c, l, x)?);
        out.push(streicher_iso_check(&aks, size, c, l, x)?);
    }
    Ok(out)
}

/// Refuses up front when an exhaustive predicate scan cannot fit.
fn precheck(cmd: &Command, s: &Structure, limits: &Limits) -> Res<()> {
    let (Command::Tripos { index_size } | Command::Roundtrip { index_size }) = cmd else { return Ok(()) };
    let carrier = match s {
        Structure::Aks(a) => a.n_terms(),
        other => other.ioca().map_or(0, |i| i.len()),
    };
    for size in 0..=*index_size {
        let n = predicate_count(carrier, size).unwrap_or(usize::MAX);
        if n > limits.predicate_cap {
            return Err(koca::Error::Resource {
                what: format!("exhaustive predicate scan over |I| = {size}"),
                needed: n as u128,
                limit: limits.predicate_cap as u128,
            }
            .into());
        }
    }
    Ok(())
}

/// Runs one command; the reports come back even when checks fail.
pub fn execute(cli: &Cli) -> Res<RunReport> {
    let start = Instant::now();
    let c = &cli.common;
    let mut limits = Limits::default();
    if let Some(m) = c.max_enum {
        limits.max_enum = m;
        limits.max_brute_force = limits.max_brute_force.min(m);
    }
    let coverage = match c.samples {
        Some(samples) => Coverage::Sampled { samples, seed: c.seed },
        None => Coverage::Auto { fallback_samples: 1000, seed: c.seed },
    };
    let exec = if c.sequential { Exec::Sequential } else { Exec::Parallel };
    let cx = Ctx { limits, coverage, exec };
    let (s, fp) = load(c)?;
    if c.exhaustive {
        precheck(&cli.command, &s, &limits)?;
    }
    let (name, suites) = match &cli.command {
        Command::Check => ("check", check(&s, &cx)?),
        Command::Translate { direction, verify, output } => {
            ("translate", translate(&s, *direction, *verify, output.as_deref(), &cx)?)
        }
        Command::Tripos { index_size } => ("tripos", tripos(&s, *index_size, &cx)?),
        Command::Homega { interp, check, pa, adequacy } => {
            ("homega", homega(&s, interp.as_deref(), check.as_deref(), *pa, *adequacy, &cx)?)
        }
        Command::Roundtrip { index_size } => ("roundtrip", roundtrip(&s, *index_size, &cx)?),
    };
    if c.exhaustive {
        let sampled = suites
            .iter()
            .flat_map(|r| r.checks.iter().map(move |ch| (r, ch)))
            .find(|(_, ch)| ch.note.as_deref().is_some_and(|n| n.starts_with("sampled")));
        if let Some((r, ch)) = sampled {
            return Err(koca::Error::Resource {
                what: format!(
                    "exhaustive scan for {}/{} ({})",
                    r.suite,
                    ch.name,
                    ch.note.as_deref().unwrap_or_default()
                ),
                needed: u128::MAX,
                limit: limits.predicate_cap as u128,
            }
            .into());
        }
    }
    Ok(RunReport {
        tool: "koca",
        version: env!("CARGO_PKG_VERSION"),
        command: name.to_string(),
        structure: Some(fp),
        seed: c.seed,
        coverage,
        caps: limits,
        passed: suites.iter().all(Report::passed),
        timing_ms: c.timing.then(|| start.elapsed().as_millis()),
        suites,
    })
}

/// Plain-text summary, one line per check.
pub fn summary(r: &RunReport, out: &mut dyn Write) -> std::io::Result<()> {
    let caps = &r.caps;
    write!(out, "koca {} {}", r.version, r.command)?;
    if let Some(fp) = &r.structure {
        write!(out, " {} ({}, sha256 {})", fp.source, fp.kind, &fp.sha256[..16])?;
    }
    writeln!(
        out,
        "\ncaps: max_enum={} max_brute_force={} predicate_cap={} function_space_cap={} term_nodes={}; seed {}",
        caps.max_enum, caps.max_brute_force, caps.predicate_cap, caps.function_space_cap, caps.term_nodes, r.seed
    )?;
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for rep in &r.suites {
        for c in &rep.checks {
            let tag = match c.status {
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
            write!(out, "{tag} {}/{} ({} cases)", rep.suite, c.name, c.cases)?;
            if let Some(w) = &c.witness {
                let parts: Vec<String> = w.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(out, " witness: {}", parts.join(", "))?;
            }
            if let Some(n) = &c.note {
                write!(out, " [{n}]")?;
            }
            writeln!(out)?;
        }
    }
    writeln!(out, "{} checks: {pass} passed, {fail} failed, {skip} skipped", pass + fail + skip)?;
    if let Some(ms) = r.timing_ms {
        writeln!(out, "time: {ms} ms")?;
    }
    Ok(())
}

/// Parses `args`, runs, prints the summary and writes `--report`.
/// Returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let _ = summary(&report, &mut stdout.lock());
    if let Some(path) = &cli.common.report {
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        if let Err(e) = write(path, &text) {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    }
    if report.passed {
        0
    } else {
        1
    }
}
