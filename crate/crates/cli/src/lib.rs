//! Job parsing and execution for the `gctool` binary.
//!
//! A job is a sequence spec plus an action and scan options, supplied as a
//! JSON file, as flags, or both (flags win). Execution is deterministic:
//! exit codes are a function of the report content alone. 0 means no
//! violation / zero p-curvature at every checked prime, 1 means a violation
//! was found, 2 means the input or a precondition was bad.

use gauss_cartier::arith::{format_rational, primes_in};
use gauss_cartier::congruence::{
    prefix_diagnostic, puiseux_rescale, reverify_report, scan, ExpansionPoint, Mode, ScanConfig,
    Verdict,
};
use gauss_cartier::dynzeta::{all_integral, orbit_invert, realizable, zeta_coeffs};
use gauss_cartier::hypergeom::{conductor, conjugate_family, is_algebraic_interlacing, is_factorial};
use gauss_cartier::pcurvature::{pcurv_is_zero, strip_and_rescale, suggest_lambda, PcurvVerdict};
use gauss_cartier::sequences::{SequenceSource, SequenceSpec};
use gauss_cartier::series::TruncSeries;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read job file: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad job file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("conflicting flags: both --gauss and --cartier given")]
    ConflictingModes,
    #[error("no action given (flag or job file)")]
    MissingAction,
    #[error("no sequence given (flag or job file)")]
    MissingSequence,
    #[error("bad --primes range: {0} (expected MIN..MAX)")]
    BadPrimeRange(String),
    #[error("bad lambda {0:?}: expected a positive integer")]
    BadLambda(String),
    #[error("action {action} requires a {needs} sequence spec")]
    IncompatibleSpec { action: &'static str, needs: &'static str },
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    fn pre(e: impl std::fmt::Display) -> CliError {
        CliError::Precondition(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    CheckGauss,
    CheckCartier,
    Pcurvature,
    ClassifyHypergeom,
    Dynzeta,
    Dwork,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::CheckGauss => "check-gauss",
            Action::CheckCartier => "check-cartier",
            Action::Pcurvature => "pcurvature",
            Action::ClassifyHypergeom => "classify-hypergeom",
            Action::Dynzeta => "dynzeta",
            Action::Dwork => "dwork",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutputMode {
    Table,
    Json,
    #[default]
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct PuiseuxSpec {
    pub d: u64,
    pub at: ExpansionPoint,
}

/// On-disk job file; every field is optional so flags can fill the gaps.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct JobFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<Action>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSpec>,
    /// [p_min, p_max], inclusive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primes: Option<[u64; 2]>,
    /// Index bound N: pairs with |n|*p <= N are checked; also the series
    /// precision for pcurvature/dwork.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub puiseux: Option<PuiseuxSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<OutputMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
}

/// Fully resolved job, defaults applied.
#[derive(Debug, Clone)]
pub struct Job {
    pub action: Action,
    pub sequence: SequenceSpec,
    pub p_min: u64,
    pub p_max: u64,
    pub terms: i64,
    pub lambda: Option<BigInt>,
    pub skip: Vec<u64>,
    pub puiseux: Option<PuiseuxSpec>,
    pub mode: OutputMode,
    pub json_path: Option<String>,
}

/// Flag-level overrides, mirroring the job file schema.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub action: Option<Action>,
    pub gauss: bool,
    pub cartier: bool,
    pub sequence: Option<String>,
    pub primes: Option<String>,
    pub terms: Option<i64>,
    pub lambda: Option<String>,
    pub skip: Vec<u64>,
    pub mode: Option<OutputMode>,
    pub json: Option<String>,
}

fn parse_prime_range(s: &str) -> Result<[u64; 2], CliError> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| CliError::BadPrimeRange(s.into()))?;
    let lo = lo.trim().parse().map_err(|_| CliError::BadPrimeRange(s.into()))?;
    let hi = hi.trim().parse().map_err(|_| CliError::BadPrimeRange(s.into()))?;
    Ok([lo, hi])
}

fn parse_lambda(s: &str) -> Result<BigInt, CliError> {
    let l: BigInt = s.parse().map_err(|_| CliError::BadLambda(s.into()))?;
    if l <= BigInt::from(0) {
        return Err(CliError::BadLambda(s.into()));
    }
    Ok(l)
}

/// Merge a job file (if any) with flag overrides and apply the defaults:
/// primes 3..50, N = 10 * p_max, table+json output.
pub fn resolve_job(file: Option<JobFile>, flags: &Overrides) -> Result<Job, CliError> {
    if flags.gauss && flags.cartier {
        return Err(CliError::ConflictingModes);
    }
    let file = file.unwrap_or_default();
    let mut action = flags.action.or(file.action);
    if flags.gauss {
        action = Some(Action::CheckGauss);
    }
    if flags.cartier {
        action = Some(Action::CheckCartier);
    }
    let action = action.ok_or(CliError::MissingAction)?;
    let sequence = match &flags.sequence {
        Some(raw) => serde_json::from_str(raw)?,
        None => file.sequence.ok_or(CliError::MissingSequence)?,
    };
    let [p_min, p_max] = match &flags.primes {
        Some(raw) => parse_prime_range(raw)?,
        None => file.primes.unwrap_or([3, 50]),
    };
    let terms = flags.terms.or(file.terms).unwrap_or(10 * p_max as i64);
    let lambda = match flags.lambda.as_ref().or(file.lambda.as_ref()) {
        Some(raw) => Some(parse_lambda(raw)?),
        None => None,
    };
    let mut skip = file.skip.unwrap_or_default();
    skip.extend(&flags.skip);
    Ok(Job {
        action,
        sequence,
        p_min,
        p_max,
        terms,
        lambda,
        skip,
        puiseux: file.puiseux,
        mode: flags.mode.or(file.mode).unwrap_or_default(),
        json_path: flags.json.clone().or(file.json),
    })
}

pub fn parse_job_file(path: &Path) -> Result<JobFile, CliError> {
    let raw = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&raw)?)
}

/// Everything `main` needs: the exit code, the JSON report, rendered table
/// lines, and warnings for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub exit: i32,
    pub report: serde_json::Value,
    pub table: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn run(job: &Job) -> Result<Outcome, CliError> {
    match job.action {
        Action::CheckGauss => run_scan(job, Mode::Gauss),
        Action::CheckCartier => run_scan(job, Mode::Cartier),
        Action::Pcurvature => run_pcurvature(job),
        Action::ClassifyHypergeom => run_classify(job),
        Action::Dynzeta => run_dynzeta(job),
        Action::Dwork => run_dwork(job),
    }
}

fn build_source(job: &Job) -> Result<(Arc<SequenceSource>, Vec<String>), CliError> {
    let seq = SequenceSource::from_spec(&job.sequence).map_err(CliError::pre)?;
    let mut warnings = Vec::new();
    if let Some((alpha, beta)) = seq.hypergeometric_params() {
        if alpha.len() != beta.len() {
            warnings.push(format!(
                "hypergeometric series with r = {} != s = {} has zero or infinite radius of convergence",
                alpha.len(),
                beta.len()
            ));
        }
    }
    let mut seq = Arc::new(seq);
    if let Some(pu) = &job.puiseux {
        seq = Arc::new(puiseux_rescale(seq, pu.d, pu.at).map_err(CliError::pre)?);
    }
    Ok((seq, warnings))
}

fn run_scan(job: &Job, mode: Mode) -> Result<Outcome, CliError> {
    let (seq, warnings) = build_source(job)?;
    let cfg = ScanConfig::new(mode, job.p_min, job.p_max, job.terms)
        .map_err(CliError::pre)?
        .with_skips(job.skip.iter().copied());
    let diag = prefix_diagnostic(&seq).ok();
    let report = scan(&seq, &cfg);
    let reverified = reverify_report(&seq, &report);
    let exit = match report.verdict {
        Verdict::Violation => 1,
        Verdict::HoldsToBound => 0,
    };
    let mut table = vec![format!(
        "{} scan, primes {}..{}, |n|*p <= {}",
        job.action.name(),
        job.p_min,
        job.p_max,
        job.terms
    )];
    if let Some(d) = &diag {
        if !d.clean() {
            table.push(format!(
                "prefix diagnostic: negative nonzero indices {:?}, irrational constant term {}",
                d.negative_nonzero_indices, d.irrational_constant_term
            ));
        }
    }
    for r in &report.primes {
        let mut line = format!("p = {:>3}  {:?}  pairs {}", r.p, r.status, r.pairs_checked);
        if let Some(w) = &r.witness {
            line.push_str(&format!("  witness n = {}, valuation {}", w.n, w.valuation));
        }
        if let Some(reason) = &r.reason {
            line.push_str(&format!("  ({reason})"));
        }
        table.push(line);
    }
    table.push(format!("verdict: {:?}", report.verdict));
    let report = json!({
        "action": job.action.name(),
        "prefix_diagnostic": diag,
        "report": report,
        "witnesses_reverified": reverified,
        "warnings": warnings,
    });
    Ok(Outcome { exit, report, table, warnings })
}

fn run_pcurvature(job: &Job) -> Result<Outcome, CliError> {
    let (seq, warnings) = build_source(job)?;
    let (lambda, heuristic) = match &job.lambda {
        Some(l) => (l.clone(), false),
        None => {
            let depth = job.terms.clamp(1, 50);
            (suggest_lambda(&seq, depth).map_err(CliError::pre)?, true)
        }
    };
    let et = strip_and_rescale(seq, lambda.clone(), heuristic).map_err(CliError::pre)?;
    let precision = usize::try_from(job.terms).map_err(CliError::pre)?;
    let mut records = Vec::new();
    let mut table = vec![format!(
        "p-curvature of d/dx - eta, lambda = {lambda}{}, order {precision}",
        if heuristic { " (heuristic)" } else { "" }
    )];
    let mut any_nonzero = false;
    for p in primes_in(job.p_min, job.p_max) {
        if job.skip.contains(&p) {
            records.push(json!({"p": p, "skipped": "user skip"}));
            table.push(format!("p = {p:>3}  skipped (user skip)"));
            continue;
        }
        match pcurv_is_zero(&et, p, precision) {
            Ok(v) => {
                match &v {
                    PcurvVerdict::ZeroToOrder { order } => {
                        table.push(format!("p = {p:>3}  zero to order {order}"));
                    }
                    PcurvVerdict::Nonzero { witness_exponent } => {
                        any_nonzero = true;
                        table.push(format!("p = {p:>3}  nonzero at exponent {witness_exponent}"));
                    }
                }
                let mut rec = serde_json::to_value(&v).expect("verdict serializes");
                rec["p"] = json!(p);
                records.push(rec);
            }
            Err(e) => {
                records.push(json!({"p": p, "skipped": e.to_string()}));
                table.push(format!("p = {p:>3}  skipped ({e})"));
            }
        }
    }
    let exit = i32::from(any_nonzero);
    let report = json!({
        "action": "pcurvature",
        "lambda": lambda.to_string(),
        "lambda_heuristic": heuristic,
        "residue": format_rational(et.residue()),
        "primes": records,
        "warnings": warnings,
    });
    Ok(Outcome { exit, report, table, warnings })
}

fn run_classify(job: &Job) -> Result<Outcome, CliError> {
    let (seq, warnings) = build_source(job)?;
    let (alpha, beta) = seq.hypergeometric_params().ok_or(CliError::IncompatibleSpec {
        action: "classify-hypergeom",
        needs: "hypergeometric",
    })?;
    let d = conductor(alpha, beta);
    let interlacing = is_algebraic_interlacing(alpha, beta).map_err(CliError::pre)?;
    let factorial = is_factorial(alpha, beta);
    let family: Vec<_> = conjugate_family(alpha, beta)
        .into_iter()
        .map(|(k, a, b)| {
            json!({
                "k": k,
                "alpha": a.entries().iter().map(format_rational).collect::<Vec<_>>(),
                "beta": b.entries().iter().map(format_rational).collect::<Vec<_>>(),
            })
        })
        .collect();
    let table = vec![
        format!("conductor d = {d}, family size {}", family.len()),
        format!("algebraic (interlacing): {interlacing}"),
        format!("factorial: {factorial}"),
    ];
    let report = json!({
        "action": "classify-hypergeom",
        "algebraic_interlacing": interlacing,
        "factorial": factorial,
        "d": d,
        "family": family,
        "warnings": warnings,
    });
    Ok(Outcome { exit: 0, report, table, warnings })
}

fn run_dynzeta(job: &Job) -> Result<Outcome, CliError> {
    let (seq, warnings) = build_source(job)?;
    let fix = seq.fix_counts().ok_or(CliError::IncompatibleSpec {
        action: "dynzeta",
        needs: "fix or orbits",
    })?;
    let fix: Vec<i64> = fix.iter().map(|&c| c as i64).collect();
    let orbits = orbit_invert(&fix);
    let integral = all_integral(&orbits);
    let real = realizable(&orbits);
    let zeta = zeta_coeffs(&fix, fix.len() + 1);
    let mut table = vec![format!("fix counts: {fix:?}")];
    for o in &orbits {
        table.push(format!(
            "n = {:>3}  orbits {}{}",
            o.n,
            format_rational(&o.count),
            if o.integral { "" } else { "  (non-integral)" }
        ));
    }
    table.push(format!("all integral: {integral}, realizable: {real}"));
    let report = json!({
        "action": "dynzeta",
        "orbits": orbits,
        "all_integral": integral,
        "realizable": real,
        "zeta": zeta.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
        "warnings": warnings,
    });
    Ok(Outcome { exit: i32::from(!integral), report, table, warnings })
}

fn run_dwork(job: &Job) -> Result<Outcome, CliError> {
    let (seq, warnings) = build_source(job)?;
    let field = seq.field().clone();
    let order = usize::try_from(job.terms).map_err(CliError::pre)?;
    let coeffs = (0..order as i64)
        .map(|n| seq.term(n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::pre)?;
    let s = TruncSeries::from_coeffs(field.clone(), coeffs, order);
    let mut records = Vec::new();
    let mut table = vec![format!("Dwork congruence for exp(s), order {order}")];
    let mut any_violation = false;
    for p in primes_in(job.p_min, job.p_max) {
        if job.skip.contains(&p) {
            records.push(json!({"p": p, "skipped": "user skip"}));
            table.push(format!("p = {p:>3}  skipped (user skip)"));
            continue;
        }
        match gauss_cartier::dynzeta::dwork_check(&field, &s, p, order) {
            Ok(v) => {
                table.push(format!(
                    "p = {p:>3}  {}",
                    if v.holds() { "holds" } else { "violation" }
                ));
                if !v.holds() {
                    any_violation = true;
                }
                let mut rec = serde_json::to_value(&v).expect("verdict serializes");
                rec["p"] = json!(p);
                records.push(rec);
            }
            Err(e) => {
                records.push(json!({"p": p, "skipped": e.to_string()}));
                table.push(format!("p = {p:>3}  skipped ({e})"));
            }
        }
    }
    let report = json!({
        "action": "dwork",
        "primes": records,
        "warnings": warnings,
    });
    Ok(Outcome { exit: i32::from(any_violation), report, table, warnings })
}
