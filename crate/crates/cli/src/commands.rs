use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use copx_core::facets::{full_description, necessity_audit, MinimalityMode, Variant};
use copx_core::hull::{hrep_to_vrep, vrep_to_hrep, BoxBounds, HRep, VRep};
use copx_core::instances::{
    gen_family, instance_from_json, instance_to_json, load_instance, load_weights, save_instance, weights_to_json,
    Family, GenLimits, Graph, Instance, WeightVector,
};
use copx_core::lattice::LatticeCaps;
use copx_core::optimality::{OptimalityEngine, Regime};
use copx_core::rational::{parse_rat, RatVec};
use copx_core::verify::{equivalence_trial, run_suite, Suite, SuiteConfig, Verdict};
use copx_core::{CopxError, Result};
use serde_json::{json, Value};

use crate::{CertifyArgs, Direction, FacetsArgs, FamilyArg, GenArgs, Global, OracleArgs, VerifyArgs};

pub enum Outcome {
    Ok,
    /// A completed run whose result calls for a nonzero exit.
    Fail {
        code: u8,
        message: String,
    },
}

fn caps(g: &Global) -> LatticeCaps {
    LatticeCaps { full: g.full_cap as usize, cube: g.cube_cap as usize }
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(path)
}

/// Best effort: failing to record an error must not mask the original one.
pub fn write_error(dir: &Path, command: &str, code: u8, message: &str) {
    let value = json!({ "command": command, "exit_code": code, "error": message });
    if let Err(e) = write_json(dir, "error.json", &value) {
        eprintln!("could not write error file: {e}");
    }
}

fn init_pool(g: &Global) {
    // a second initialisation (only possible in tests) is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(g.workers as usize).build_global();
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| char::from(b'0' + b)).collect()
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| CopxError::InvalidParams(format!("--family {family} needs --{flag}")))
}

fn parse_points(text: &str) -> Result<Vec<Vec<u8>>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.chars()
                .map(|ch| match ch {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(CopxError::InvalidParams(format!("point {s:?} is not a 0/1 string"))),
                })
                .collect()
        })
        .collect()
}

pub fn gen(g: &Global, a: &GenArgs) -> Result<Outcome> {
    let graph = || -> Result<Graph> {
        Graph::parse(a.graph.as_deref().ok_or_else(|| CopxError::InvalidParams("this family needs --graph".into()))?)
    };
    let family = match a.family {
        FamilyArg::SpanningTrees => Family::SpanningTrees(graph()?),
        FamilyArg::PerfectMatchings => Family::PerfectMatchings(graph()?),
        FamilyArg::KSubsets => Family::KSubsets { n: need(a.n, "n", "k-subsets")?, k: need(a.k, "k", "k-subsets")? },
        FamilyArg::Tsp => Family::TspTours { cities: need(a.cities, "cities", "tsp")? },
        FamilyArg::Explicit => {
            let text = a
                .points
                .as_deref()
                .ok_or_else(|| CopxError::InvalidParams("--family explicit needs --points".into()))?;
            Family::Explicit { labels: None, vertices: parse_points(text)? }
        }
    };
    let inst = gen_family(&family, &GenLimits::default())?;
    let out = a.out.clone().unwrap_or_else(|| g.results_dir.join("instance.json"));
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    save_instance(&inst, &out)?;
    println!("{}: |X|={} N={} -> {}", inst.family(), inst.len(), inst.n(), out.display());
    Ok(Outcome::Ok)
}

fn read_weights(a: &CertifyArgs) -> Result<WeightVector> {
    match (&a.weights, &a.c) {
        (Some(path), _) => load_weights(path),
        (None, Some(text)) => {
            Ok(WeightVector::new(RatVec::new(text.split(',').map(|s| parse_rat(s.trim())).collect::<Result<_>>()?)))
        }
        (None, None) => Err(CopxError::InvalidParams("give --weights, --c or --random".into())),
    }
}

pub fn certify(g: &Global, a: &CertifyArgs) -> Result<Outcome> {
    init_pool(g);
    let inst = load_instance(&a.instance)?;
    let regime: Regime = a.regime.parse()?;
    let caps = caps(g);

    if let Some(trials) = a.random {
        let report = equivalence_trial(&inst, trials, g.seed, regime, &caps)?;
        let path = write_json(&g.results_dir, "certify.json", &serde_json::to_value(&report)?)?;
        println!("{} {} trials (seed {}): {:?} -> {}", inst.family(), trials, g.seed, report.verdict, path.display());
        return Ok(match &report.verdict {
            Verdict::Confirmed => Outcome::Ok,
            Verdict::Refuted => {
                let ce = json!({ "instance": instance_to_json(&inst), "report": report });
                let ce_path = write_json(&g.results_dir, "counterexample_certify.json", &ce)?;
                Outcome::Fail {
                    code: 3,
                    message: format!("cone verdicts disagree with argmax, see {}", ce_path.display()),
                }
            }
            Verdict::Skipped { reason } => Outcome::Fail { code: 4, message: reason.clone() },
        });
    }

    let c = read_weights(a)?;
    let engine = OptimalityEngine::new(&inst, caps);
    let (value, agrees, summary) = match a.vertex {
        Some(k) => {
            let v = engine.decide(&c, k, regime)?;
            let summary = format!("vertex {k} ({}) optimal: {}", bits(inst.vertex(k)), v.is_optimal);
            (v.to_json(), v.cross_check, summary)
        }
        None => {
            let set = engine.optimal_set(&c, regime)?;
            let listed: Vec<String> = set.optimal.iter().map(|&k| format!("{k}:{}", bits(inst.vertex(k)))).collect();
            (set.to_json(), set.agrees(), format!("optimal set [{}]", listed.join(", ")))
        }
    };
    let mut value = value;
    value["instance"] = json!(inst.family());
    value["c"] = json!(c.entries());
    let path = write_json(&g.results_dir, "certify.json", &value)?;
    println!("{summary} -> {}", path.display());
    if agrees {
        return Ok(Outcome::Ok);
    }
    let ce = json!({ "instance": instance_to_json(&inst), "weights": weights_to_json(&c), "verdict": value });
    let ce_path = write_json(&g.results_dir, "counterexample_certify.json", &ce)?;
    Ok(Outcome::Fail { code: 3, message: format!("cone verdict disagrees with argmax, see {}", ce_path.display()) })
}

pub fn facets(g: &Global, a: &FacetsArgs) -> Result<Outcome> {
    init_pool(g);
    let inst = load_instance(&a.instance)?;
    let variant: Variant = a.variant.parse()?;
    let mode: MinimalityMode = a.mode.parse()?;
    let report = full_description(&inst, variant, mode, &caps(g), g.hull_cap as usize)?;
    let mut value = report.to_json();
    if a.audit {
        value["audit"] = if report.polytope_match {
            serde_json::to_value(necessity_audit(&report, &inst, g.hull_cap as usize)?)?
        } else {
            json!(null)
        };
    }
    let path = write_json(&g.results_dir, "facets.json", &value)?;
    println!(
        "{} variant {variant} mode {}: {} rows, polytope_match {} -> {}",
        inst.family(),
        a.mode,
        report.rows.len(),
        report.polytope_match,
        path.display()
    );
    if !report.divergence.is_empty() {
        let ks: Vec<usize> = report.divergence.iter().map(|d| d.k).collect();
        return Ok(Outcome::Fail {
            code: 5,
            message: format!(
                "kept generators do not span the generator cone at vertices {ks:?}, see {}",
                path.display()
            ),
        });
    }
    if variant == Variant::V && !report.polytope_match {
        return Ok(Outcome::Fail { code: 3, message: "boxed description does not reproduce X".into() });
    }
    if !report.oracle_diff.invalid_rows.is_empty() {
        return Ok(Outcome::Fail { code: 3, message: "description contains rows violated by X".into() });
    }
    Ok(Outcome::Ok)
}

pub fn verify(g: &Global, a: &VerifyArgs) -> Result<Outcome> {
    let suite: Suite = a.suite.parse()?;
    let instances: Vec<Instance> = a.instances.iter().map(load_instance).collect::<Result<_>>()?;
    let cfg = SuiteConfig {
        seed: g.seed,
        caps: caps(g),
        hull_cap: g.hull_cap as usize,
        workers: g.workers as usize,
        trials: a.trials,
        results_dir: Some(g.results_dir.clone()),
        ..SuiteConfig::default()
    };
    let report = run_suite(&instances, suite, &cfg)?;
    fs::create_dir_all(&g.results_dir)?;
    let path = g.results_dir.join("suite.json");
    fs::write(&path, report.to_json_string()? + "\n")?;

    let mut skipped: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut refuted: BTreeMap<String, usize> = BTreeMap::new();
    for r in &report.reports {
        match &r.verdict {
            Verdict::Skipped { reason } => *skipped.entry((r.claim.to_string(), reason.clone())).or_default() += 1,
            Verdict::Refuted => *refuted.entry(format!("{} on {}", r.claim, r.instance)).or_default() += 1,
            Verdict::Confirmed => {}
        }
    }
    println!(
        "suite {}: {} confirmed, {} refuted, {} skipped -> {}",
        suite.name(),
        report.summary.confirmed,
        report.summary.refuted,
        report.summary.skipped,
        path.display()
    );
    for ((claim, reason), count) in &skipped {
        println!("  skipped {claim} x{count}: {reason}");
    }
    for (what, count) in &refuted {
        println!("  refuted {what} x{count}");
    }
    if report.success() {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::Fail {
            code: 3,
            message: format!(
                "{} checks refuted; {} counterexample files in {}",
                report.summary.refuted,
                report.counterexample_files.len(),
                g.results_dir.display()
            ),
        })
    }
}

fn read_vrep(text: &str) -> Result<VRep> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("schema").is_some() {
        let inst = instance_from_json(text)?;
        return Ok(VRep::from_binary(inst.vertices()));
    }
    let raw: VRep = serde_json::from_value(value).map_err(|e| CopxError::Schema(e.to_string()))?;
    VRep::new(raw.vertices)
}

pub fn oracle(g: &Global, a: &OracleArgs) -> Result<Outcome> {
    let text = fs::read_to_string(&a.input)?;
    let cap = g.hull_cap as usize;
    let value = match a.direction {
        Direction::V2h => serde_json::to_value(vrep_to_hrep(&read_vrep(&text)?, cap)?)?,
        Direction::H2v => {
            let raw: HRep = serde_json::from_str(&text).map_err(|e| CopxError::Schema(e.to_string()))?;
            let h = HRep::new(raw.n, raw.inequalities, raw.equalities)?;
            let bounds = a.unit_box.then(|| BoxBounds::unit(h.n));
            serde_json::to_value(hrep_to_vrep(&h, bounds.as_ref(), cap)?)?
        }
    };
    write_json(&g.results_dir, "oracle.json", &value)?;
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&value)?);
    Ok(Outcome::Ok)
}
