//! `eval-roof`, `eval-witness` and `verify`.

use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use symroof::roofs::extension::{extended_roof, Region, ENVELOPE_GAP_TOL};
use symroof::roofs::isotropic::{iso_minimizer, iso_pre_envelope};
use symroof::roofs::werner::{werner_minimizer, werner_pre_envelope};
use symroof::verify::{run_suite, Suite, VerifyReport};
use symroof::witness::{
    pure_to_isotropic_nogo_with, pure_to_werner, IsoWitnessOptions, WitnessResult,
};
use symroof::{FamilyPoint, MonotoneSpec, SchmidtVector};

use crate::parse::Target;
use crate::record::{write_file, OutputRecord, SCHEMA};
use crate::VerificationFailed;

fn region_name(region: Region) -> &'static str {
    match region {
        Region::WernerOrbit => "werner-orbit",
        Region::IsoOrbit => "isotropic-orbit",
        Region::Separable => "separable",
        Region::Unknown => "unknown",
    }
}

fn fmt_vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
    format!("({})", parts.join(", "))
}

/// The pure state attaining the roof at `point`, when the roof there equals
/// the fiber minimum of its coordinate.
fn minimizer(spec: &MonotoneSpec, point: &FamilyPoint, region: Region, value: f64) -> Result<Option<SchmidtVector>> {
    let d = point.d();
    let on_fiber = |pre: f64| (pre - value).abs() <= ENVELOPE_GAP_TOL;
    Ok(match region {
        Region::WernerOrbit => {
            let a = point.werner_coordinate();
            on_fiber(werner_pre_envelope(spec, a, d)?).then_some(werner_minimizer(a)?.schmidt)
        }
        Region::IsoOrbit => {
            let b = point.isotropic_coordinate();
            if b <= 1.0 / d as f64 {
                Some(SchmidtVector::product(d))
            } else if on_fiber(iso_pre_envelope(spec, b, d)?) {
                Some(iso_minimizer(spec, b, d)?.schmidt)
            } else {
                None
            }
        }
        Region::Separable => Some(SchmidtVector::product(d)),
        Region::Unknown => None,
    })
}

pub fn eval_roof(command: &str, spec: &MonotoneSpec, point: &FamilyPoint) -> Result<OutputRecord> {
    let roof = extended_roof(spec, point)?;
    let lambda = minimizer(spec, point, roof.region, roof.value)?;
    let mut record = OutputRecord::new(command);
    record
        .meta("point", point)
        .meta("monotone", spec.label())
        .meta("region", region_name(roof.region))
        .meta("continuity_extension", roof.continuity_extension)
        .column("value", vec![roof.value]);
    match &lambda {
        Some(l) => {
            for (i, &x) in l.as_slice().iter().enumerate() {
                record.column(format!("lambda_{}", i + 1), vec![x]);
            }
        }
        None => {
            record.meta("minimizer", "none: the roof is linear here and attained only by mixtures");
        }
    }
    println!("{point} {}", spec.label());
    println!("value      {:.16e}", roof.value);
    println!("region     {}", region_name(roof.region));
    if roof.continuity_extension {
        println!("note       value extended by continuity of the monotone");
    }
    match lambda {
        Some(l) => println!("minimizer  {}", fmt_vector(l.as_slice())),
        None => println!("minimizer  none (attained only by mixtures)"),
    }
    Ok(record)
}

fn verdict_name(r: &WitnessResult) -> String {
    format!("{:?}", r.verdict)
}

pub fn eval_witness(
    command: &str,
    lambda: &SchmidtVector,
    target: Target,
    d: Option<usize>,
    seed: u64,
) -> Result<OutputRecord> {
    let mut record = OutputRecord::new(command);
    let (label, r) = match target {
        Target::Werner(a) => (format!("werner:{a}"), pure_to_werner(lambda, a)?),
        Target::Isotropic(b) => {
            let d = d.unwrap_or(lambda.d().max(2));
            let options = IsoWitnessOptions {
                seed,
                ..IsoWitnessOptions::default()
            };
            record.meta("d", d).meta("seed", seed);
            (format!("iso:{b}"), pure_to_isotropic_nogo_with(lambda, b, d, &options)?)
        }
    };
    let per_k: Vec<String> = r
        .per_k
        .iter()
        .map(|v| v.map_or("infeasible".to_string(), |x| format!("{x:.16e}")))
        .collect();
    record
        .meta("lambda", fmt_vector(lambda.as_slice()))
        .meta("target", &label)
        .meta("verdict", verdict_name(&r))
        .meta("class", format!("{:?}", r.class))
        .meta("kkt_residual", format!("{:.3e}", r.diagnostics.kkt_residual))
        .meta("max_violation", format!("{:.3e}", r.diagnostics.max_violation))
        .meta("boundary", r.diagnostics.boundary)
        .column("value", vec![r.value]);
    if !per_k.is_empty() {
        record.meta("per_k", per_k.join(" "));
    }
    println!("{} -> {label}", fmt_vector(lambda.as_slice()));
    println!("value    {:.16e}", r.value);
    println!("verdict  {} ({:?} witness)", verdict_name(&r), r.class);
    for (k, v) in per_k.iter().enumerate() {
        println!("k={:<6} {v}", k + 1);
    }
    if !r.per_k.is_empty() {
        println!(
            "solver   kkt {:.1e}  violation {:.1e}  restarts {}{}",
            r.diagnostics.kkt_residual,
            r.diagnostics.max_violation,
            r.diagnostics.restarts,
            if r.diagnostics.boundary { "  boundary" } else { "" },
        );
    }
    Ok(record)
}

#[derive(Serialize)]
struct CheckJson<'a> {
    id: &'a str,
    description: &'a str,
    passed: bool,
    worst: f64,
    tolerance: f64,
    detail: &'a str,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    schema: &'a str,
    command: &'a str,
    suite: &'a str,
    seed: u64,
    passed: bool,
    checks: Vec<CheckJson<'a>>,
}

fn report_json(command: &str, report: &VerifyReport) -> Result<String> {
    let checks = report
        .checks
        .iter()
        .map(|c| CheckJson {
            id: c.id,
            description: c.description,
            passed: c.passed,
            worst: c.worst,
            tolerance: c.tolerance,
            detail: &c.detail,
        })
        .collect();
    let json = ReportJson {
        schema: SCHEMA,
        command,
        suite: report.suite.name(),
        seed: report.seed,
        passed: report.passed(),
        checks,
    };
    Ok(serde_json::to_string_pretty(&json)? + "\n")
}

pub fn verify(command: &str, suite: Suite, seed: u64, out: Option<&Path>) -> Result<()> {
    let report = run_suite(suite, seed);
    print!("{}", report.render());
    if let Some(path) = out {
        write_file(path, &report_json(command, &report)?)?;
    }
    match report.first_failure() {
        Some(c) => Err(VerificationFailed(c.id.to_string()).into()),
        None => Ok(()),
    }
}

