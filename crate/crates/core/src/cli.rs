//! Command-line front end. The binary is a thin wrapper around [`run`].
//!
//! Every command writes one JSON document (standard output or `--out`) with
//! the shape `{"config", "reports", "certificates", "summary", ...}`;
//! diagnostics and timings go to standard error.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::basis_synth::{end_to_end, Analysis, Outcome, Refutation, SimilarityCertificate};
use crate::error::{Error, Result};
use crate::group_builder::{
    abelian_reduction_check, build_b, case1_char_b, case3_power_constraint, corner_assignments,
    corner_domains, CaseTag, CornerDomain, GroupReport, GroupSpec,
};
use crate::oracle::{run_oracle_check, OracleConfig};
use crate::residue_orbits::find_r;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;
pub const EXIT_THEOREM_VIOLATION: i32 = 3;
pub const EXIT_DISCREPANCY: i32 = 2;

/// Largest p that classify and verify-theorem accept without `--allow-large`.
pub const COST_GUARD_P: u64 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "permlike",
    version,
    about = "Permutation bases for groups normalizing a maximal p^2-cycle"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan one spec and emit a certificate or a refutation.
    Analyze(SpecArgs),
    /// Scan every corner assignment for p (and every q unless given).
    Classify(SpecArgs),
    /// Classify, then require a verified certificate for every survivor.
    VerifyTheorem(SpecArgs),
    /// Cross-check fast paths against brute-force oracles.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct SpecArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub r: Option<u64>,
    /// Non-unit orbit corners, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<u64>>,
    /// Unit orbit corners, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub omegas: Option<Vec<u64>>,
    /// Case 3: required value of a in B^{ps} = C^{ap}.
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub modulus: Option<u64>,
    /// `zero` sets every corner to 1 (the default).
    #[arg(long)]
    pub corners: Option<String>,
    /// First corner as a root of unity `KofM`, i.e. z_M^K.
    #[arg(long)]
    pub eps0: Option<String>,
    /// Verify the image of every group element, not just the generators.
    #[arg(long)]
    pub full_group_verify: bool,
    /// Lift the cost guard on p.
    #[arg(long)]
    #[serde(skip)]
    pub allow_large: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub instances: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long = "N-max", default_value_t = 24)]
    #[serde(rename = "N_max")]
    pub modulus_max: u64,
    /// Skip the double-precision trace cross-check.
    #[arg(long)]
    pub no_numeric: bool,
    #[arg(long, hide = true)]
    #[serde(skip)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub scanned: usize,
    pub survivors: usize,
    pub verified: usize,
}

/// One command's result: the JSON document and the process exit code.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub json: Value,
    pub exit_code: i32,
}

fn parse_root(text: &str, modulus: u64) -> Result<u64> {
    let bad = || Error::InvalidSpec(format!("expected KofM (e.g. 1of2), got {text:?}"));
    let (k, m) = text.split_once("of").ok_or_else(bad)?;
    let k: u64 = k.trim().parse().map_err(|_| bad())?;
    let m: u64 = m.trim().parse().map_err(|_| bad())?;
    if m == 0 || !modulus.is_multiple_of(m) {
        return Err(Error::NotDivisor { n: m, modulus });
    }
    Ok((k % m) * (modulus / m))
}

/// The spec described by the flags; unspecified corners are trivial.
pub fn spec_from_args(args: &SpecArgs) -> Result<GroupSpec> {
    let q = args
        .q
        .ok_or_else(|| Error::InvalidSpec("--q is required".into()))?;
    if !crate::arith::is_prime(args.p) {
        return Err(Error::NotPrime(args.p));
    }
    let r = match args.r {
        Some(r) => r,
        None => find_r(args.p, q)?,
    };
    let modulus = args
        .modulus
        .unwrap_or_else(|| GroupSpec::default_modulus(args.p, q));
    let mut spec = GroupSpec::trivial_with_r(args.p, q, r, modulus)?;
    match args.corners.as_deref() {
        None | Some("zero") => {}
        Some(other) => {
            return Err(Error::InvalidSpec(format!(
                "unknown --corners value {other:?}; only \"zero\" is supported"
            )))
        }
    }
    if let Some(eps) = &args.eps {
        spec.eps = eps.clone();
    }
    if let Some(omegas) = &args.omegas {
        spec.omegas = omegas.clone();
    }
    if let Some(e0) = &args.eps0 {
        let v = parse_root(e0, spec.modulus)?;
        *spec
            .eps
            .first_mut()
            .ok_or_else(|| Error::InvalidSpec("spec has no eps corners".into()))? = v;
    }
    spec.validate()?;
    if let Some(a) = args.a {
        let got = case3_power_constraint(&spec)?.a;
        if got != Some(a) {
            return Err(Error::InvalidSpec(format!(
                "B^(ps) = C^(ap) does not hold with a = {a} (found {got:?})"
            )));
        }
    }
    Ok(spec)
}

fn write_output(out: &Option<PathBuf>, json: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(json).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn envelope(
    config: Value,
    reports: &[&GroupReport],
    certificates: &[&SimilarityCertificate],
    summary: Summary,
    extra: Vec<(&str, Value)>,
) -> Value {
    let mut doc = json!({
        "config": config,
        "reports": reports,
        "certificates": certificates,
        "summary": summary,
    });
    let map = doc.as_object_mut().expect("object");
    for (k, v) in extra {
        map.insert(k.into(), v);
    }
    doc
}

fn is_verified(a: &Analysis) -> bool {
    a.certificate().is_some_and(|c| c.verified)
}

pub fn cmd_analyze(args: &SpecArgs) -> Result<CommandOutput> {
    let spec = spec_from_args(args)?;
    let analysis = end_to_end(&spec, args.full_group_verify)?;
    let mut extra = vec![(
        "analysis",
        json!({
            "outcome": outcome_tag(&analysis.outcome),
            "generator_shift": analysis.generator_shift,
            "sc_split": analysis.sc_split,
        }),
    )];
    let refutations: Vec<Refutation> = match &analysis.outcome {
        Outcome::Refuted(r) => vec![*r],
        _ => vec![],
    };
    extra.push(("refutations", json!(refutations)));
    match spec.case_tag() {
        Ok(CaseTag::One) => extra.push(("case1", json!(case1_char_b(&spec)?))),
        Ok(CaseTag::Three) => extra.push(("case3", json!(case3_power_constraint(&spec)?))),
        Ok(CaseTag::Two) => {}
        Err(_) => {
            let b = build_b(&spec)?;
            extra.push((
                "abelian_reduction",
                json!(abelian_reduction_check(spec.dimension(), spec.modulus, &b)?),
            ));
        }
    }
    let survivor = analysis.report.permutation_like && analysis.report.is_group;
    let summary = Summary {
        scanned: 1,
        survivors: usize::from(survivor),
        verified: usize::from(is_verified(&analysis)),
    };
    let certs: Vec<&SimilarityCertificate> = analysis.certificate().into_iter().collect();
    let json = envelope(
        json!({"command": "analyze", "args": args, "spec": spec}),
        &[&analysis.report],
        &certs,
        summary,
        extra,
    );
    let exit_code = match &analysis.outcome {
        Outcome::Refuted(_) => EXIT_REFUTED,
        Outcome::Certified(c) if c.verified => EXIT_OK,
        _ => EXIT_THEOREM_VIOLATION,
    };
    Ok(CommandOutput { json, exit_code })
}

fn outcome_tag(o: &Outcome) -> &'static str {
    match o {
        Outcome::Certified(_) => "certified",
        Outcome::Refuted(_) => "refuted",
        Outcome::Uncertified(_) => "uncertified",
    }
}

/// Per-q result of a classification scan.
#[derive(Debug, Clone, Serialize)]
pub struct ClassTable {
    pub q: u64,
    pub r: u64,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub case_tag: CaseTag,
    pub domains: Vec<CornerDomain>,
    pub assignments: usize,
    pub survivors: Vec<GroupSpec>,
    pub verified: usize,
    /// Survivors of the Case 3 scan all have a = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survivors_a: Option<Vec<Option<u64>>>,
}

pub struct Classification {
    pub tables: Vec<ClassTable>,
    /// Reports in scan order, each trimmed to its first violation.
    pub reports: Vec<GroupReport>,
    pub certificates: Vec<SimilarityCertificate>,
    pub summary: Summary,
}

/// The orders q > 1 of units modulo p^2, ascending.
pub fn nonabelian_orders(p: u64) -> Vec<u64> {
    crate::arith::divisors(p * (p - 1))
        .into_iter()
        .filter(|&q| q > 1)
        .collect()
}

/// Exhaustive scan for `p` (one `q` or all of them).
pub fn classify(
    p: u64,
    q: Option<u64>,
    a: Option<u64>,
    full_group: bool,
) -> Result<Classification> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let qs = match q {
        Some(1) => return Err(Error::Abelian),
        Some(q) => vec![q],
        None => nonabelian_orders(p),
    };
    let mut out = Classification {
        tables: vec![],
        reports: vec![],
        certificates: vec![],
        summary: Summary {
            scanned: 0,
            survivors: 0,
            verified: 0,
        },
    };
    for q in qs {
        let specs = corner_assignments(p, q)?;
        let case = crate::group_builder::case_tag(p, q)?;
        let analyses: Vec<Analysis> = specs
            .par_iter()
            .map(|s| end_to_end(s, full_group))
            .collect::<Result<_>>()?;
        let mut table = ClassTable {
            q,
            r: specs[0].r,
            modulus: specs[0].modulus,
            case_tag: case,
            domains: corner_domains(p, q)?,
            assignments: 0,
            survivors: vec![],
            verified: 0,
            survivors_a: None,
        };
        for an in analyses {
            if case == CaseTag::Three {
                if let Some(want) = a {
                    if case3_power_constraint(&an.report.spec)?.a != Some(want) {
                        continue;
                    }
                }
            }
            table.assignments += 1;
            if an.report.permutation_like && an.report.is_group {
                table.survivors.push(an.report.spec.clone());
                if is_verified(&an) {
                    table.verified += 1;
                }
                if let Some(c) = an.certificate() {
                    out.certificates.push(c.clone());
                }
            }
            let mut report = an.report;
            report.violations.truncate(1);
            out.reports.push(report);
        }
        if case == CaseTag::Three {
            table.survivors_a = Some(
                table
                    .survivors
                    .iter()
                    .map(|s| case3_power_constraint(s).map(|c| c.a))
                    .collect::<Result<_>>()?,
            );
        }
        out.summary.scanned += table.assignments;
        out.summary.survivors += table.survivors.len();
        out.summary.verified += table.verified;
        out.tables.push(table);
    }
    Ok(out)
}

fn guard(args: &SpecArgs) -> Result<()> {
    if args.p > COST_GUARD_P && !args.allow_large {
        return Err(Error::CostGuard { p: args.p });
    }
    Ok(())
}

pub fn cmd_classify(args: &SpecArgs) -> Result<CommandOutput> {
    guard(args)?;
    let c = classify(args.p, args.q, args.a, args.full_group_verify)?;
    let reports: Vec<&GroupReport> = c.reports.iter().collect();
    let certs: Vec<&SimilarityCertificate> = c.certificates.iter().collect();
    let domains: Vec<Value> = c
        .tables
        .iter()
        .map(|t| json!({"q": t.q, "domains": t.domains}))
        .collect();
    let json = envelope(
        json!({"command": "classify", "args": args, "domains": domains}),
        &reports,
        &certs,
        c.summary,
        vec![("tables", json!(c.tables))],
    );
    Ok(CommandOutput {
        json,
        exit_code: EXIT_OK,
    })
}

pub fn cmd_verify_theorem(args: &SpecArgs) -> Result<CommandOutput> {
    guard(args)?;
    let c = classify(args.p, args.q, None, args.full_group_verify)?;
    let per_q: Vec<Value> = c
        .tables
        .iter()
        .map(|t| {
            json!({
                "q": t.q,
                "case_tag": t.case_tag,
                "assignments": t.assignments,
                "survivors": t.survivors.len(),
                "verified": t.verified,
            })
        })
        .collect();
    let all_verified = c.summary.verified == c.summary.survivors;
    let certs: Vec<&SimilarityCertificate> = c.certificates.iter().collect();
    let json = envelope(
        json!({"command": "verify-theorem", "args": args}),
        &[],
        &certs,
        c.summary,
        vec![
            ("per_q", json!(per_q)),
            ("theorem_holds", json!(all_verified)),
        ],
    );
    Ok(CommandOutput {
        json,
        exit_code: if all_verified {
            EXIT_OK
        } else {
            EXIT_THEOREM_VIOLATION
        },
    })
}

pub fn cmd_oracle_check(args: &OracleArgs) -> Result<CommandOutput> {
    let report = run_oracle_check(&OracleConfig {
        seed: args.seed,
        instances: args.instances,
        n_max: args.n_max,
        modulus_max: args.modulus_max,
        numeric: !args.no_numeric,
        inject_fault: args.inject_fault,
    })?;
    let failing: std::collections::BTreeSet<usize> =
        report.discrepancies.iter().map(|d| d.instance).collect();
    let summary = Summary {
        scanned: report.instances,
        survivors: report.permutation_like,
        verified: report.instances - failing.len(),
    };
    let exit_code = if report.discrepancies.is_empty() {
        EXIT_OK
    } else {
        EXIT_DISCREPANCY
    };
    let json = envelope(
        json!({"command": "oracle-check", "args": args}),
        &[],
        &[],
        summary,
        vec![("oracle", json!(report))],
    );
    Ok(CommandOutput { json, exit_code })
}

/// Runs a parsed command inside a pool of `jobs` workers.
pub fn execute(cli: &Cli) -> Result<CommandOutput> {
    let work = || match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Classify(a) => cmd_classify(a),
        Command::VerifyTheorem(a) => cmd_verify_theorem(a),
        Command::OracleCheck(a) => cmd_oracle_check(a),
    };
    match cli.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Parses arguments, runs, writes JSON and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = write_output(&cli.out, &out.json) {
                eprintln!("error: cannot write report: {e}");
                return EXIT_INPUT;
            }
            eprintln!("done in {:.2?} (exit {})", start.elapsed(), out.exit_code);
            out.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(p: u64, q: u64) -> SpecArgs {
        SpecArgs {
            p,
            q: Some(q),
            ..SpecArgs::default()
        }
    }

    #[test]
    fn eps0_parsing() {
        assert_eq!(parse_root("1of2", 54), Ok(27));
        assert_eq!(parse_root("3of3", 27), Ok(0));
        assert!(parse_root("1/2", 54).is_err());
        assert!(parse_root("1of5", 54).is_err());
    }

    #[test]
    fn analyze_exit_codes() {
        assert_eq!(cmd_analyze(&args(3, 3)).unwrap().exit_code, EXIT_OK);
        let mut a = args(3, 2);
        a.eps0 = Some("1of2".into());
        assert_eq!(cmd_analyze(&a).unwrap().exit_code, EXIT_REFUTED);
        assert_eq!(cmd_analyze(&args(4, 2)).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn classify_small() {
        let c = classify(3, Some(3), None, false).unwrap();
        assert_eq!(
            c.summary,
            Summary {
                scanned: 27,
                survivors: 1,
                verified: 1
            }
        );
        let c = classify(3, Some(2), None, false).unwrap();
        assert_eq!(
            c.summary,
            Summary {
                scanned: 2,
                survivors: 1,
                verified: 1
            }
        );
    }

    #[test]
    fn cost_guard() {
        let mut a = args(7, 3);
        a.q = None;
        assert_eq!(cmd_classify(&a).unwrap_err(), Error::CostGuard { p: 7 });
    }
}
