//! Falsification harness: each claim is checked by comparing two
//! independently computed objects (lattice filters against hull-oracle
//! vertex sets, cone verdicts against brute-force argmax), and every
//! refutation carries a witness that is re-checked before it is reported.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CopxError, Result};
use crate::facets::{full_description, necessity_audit, MinimalityMode, Variant};
use crate::hull::{hrep_to_vrep, region_vertices, region_vertices_from_points, BoxBounds, VRep};
use crate::instances::{argmax_brute, instance_to_json, Instance, WeightVector};
use crate::lattice::{
    filter_by_points, select_generators, shift_points, Dominance, GeneratorSpec, Lattice, LatticeCaps, SignVector,
};
use crate::optimality::{OptimalityEngine, Regime};
use crate::rational::{Rat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClaimId {
    L1,
    L2,
    L3,
    L4,
    T1,
    T1b,
    T1c,
    L231,
    L232,
    T21,
    T21b,
    T21c,
    T3,
}

impl ClaimId {
    pub fn for_regime(regime: Regime) -> ClaimId {
        match regime {
            Regime::Nonneg => ClaimId::T21,
            Regime::SignedSupport => ClaimId::T21b,
            Regime::General => ClaimId::T21c,
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Confirmed,
    Refuted,
    Skipped { reason: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(rename = "Y", skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<usize>>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<MinimalityMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub instance: String,
    pub params: ClaimParams,
    pub verdict: Verdict,
    pub evidence: Value,
}

impl ClaimReport {
    fn new(claim: ClaimId, inst: &Instance, params: ClaimParams, verdict: Verdict, evidence: Value) -> Self {
        ClaimReport { claim, instance: inst.family().to_string(), params, verdict, evidence }
    }

    fn skipped(claim: ClaimId, inst: &Instance, params: ClaimParams, reason: impl Into<String>) -> Self {
        ClaimReport::new(claim, inst, params, Verdict::Skipped { reason: reason.into() }, Value::Null)
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    pub fn is_confirmed(&self) -> bool {
        self.verdict == Verdict::Confirmed
    }
}

// ---------------------------------------------------------------------------
// Region claims
// ---------------------------------------------------------------------------

fn signed(v: &[u8]) -> Vec<i8> {
    v.iter().map(|&x| x as i8).collect()
}

fn need(v: Option<usize>, what: &str, claim: ClaimId) -> Result<usize> {
    v.ok_or_else(|| CopxError::InvalidParams(format!("claim {claim} needs parameter {what}")))
}

/// Does `x` satisfy `anchor·x = e·x`, `anchor·x >= d·x` and the box?
fn in_region(x: &RatVec, bounds: &[(i8, i8)], anchor: &[i8], equal: &[Vec<i8>], dominated: &[Vec<i8>]) -> bool {
    let dot = |p: &[i8]| x.dot_int(p).expect("dimensions checked");
    let a = dot(anchor);
    x.iter().zip(bounds).all(|(v, &(lo, hi))| *v >= Rat::from_int(lo as i64) && *v <= Rat::from_int(hi as i64))
        && equal.iter().all(|e| dot(e) == a)
        && dominated.iter().all(|d| dot(d) <= a)
}

/// Compares region vertices with the generator set plus the zero vector;
/// any vertex on one side only is re-checked against the region's
/// constraints before being reported.
fn compare_region(
    region: &VRep,
    generators: &[SignVector],
    bounds: &[(i8, i8)],
    anchor: &[i8],
    equal: &[Vec<i8>],
    dominated: &[Vec<i8>],
) -> (Verdict, Value) {
    let n = bounds.len();
    let mut hull_side: BTreeSet<RatVec> = BTreeSet::new();
    hull_side.extend(region.vertices.iter().cloned());
    let mut lattice_side: BTreeSet<RatVec> = generators.iter().map(SignVector::to_rat).collect();
    lattice_side.insert(RatVec::zeros(n));
    if hull_side == lattice_side {
        return (Verdict::Confirmed, json!({ "vertices": hull_side.len() }));
    }
    let only_region: Vec<&RatVec> = hull_side.difference(&lattice_side).collect();
    let only_generators: Vec<&RatVec> = lattice_side.difference(&hull_side).collect();
    let witnesses_hold =
        only_region.iter().chain(&only_generators).all(|x| in_region(x, bounds, anchor, equal, dominated));
    (
        Verdict::Refuted,
        json!({
            "region_vertices": hull_side.len(),
            "generators_with_zero": lattice_side.len(),
            "only_in_region": only_region,
            "only_in_generators": only_generators,
            "witnesses_rechecked": witnesses_hold,
        }),
    )
}

/// `(x_k - v)` shifted by `C`: the vertices of X moved into `H(C)`.
fn shifted_vertex(v: &[u8], c: &[usize]) -> Vec<i8> {
    let mut out = signed(v);
    for &i in c {
        out[i] -= 1;
    }
    out
}

/// Region-versus-generators check of one region claim.
///
/// L1: `equal_to = [j]`; L2: `[j, l]`; L3: `[j]` dominated by `l`;
/// L4: `[j]` dominated by `Y`; T1: dominated by all of X (cube);
/// T1c: the same over `H(C)`; T1b: `X(C)` inside `H(C)` with shifted anchor.
pub fn check_region_claim(
    inst: &Instance,
    claim: ClaimId,
    params: &ClaimParams,
    caps: &LatticeCaps,
    hull_cap: usize,
) -> Result<ClaimReport> {
    let n = inst.n();
    let k = need(params.k, "k", claim)?;
    inst.check_index(k)?;
    if n > hull_cap {
        return Ok(ClaimReport::skipped(claim, inst, params.clone(), format!("n = {n} exceeds hull cap {hull_cap}")));
    }
    if n > caps.cube {
        return Ok(ClaimReport::skipped(
            claim,
            inst,
            params.clone(),
            format!("n = {n} exceeds lattice cap {}", caps.cube),
        ));
    }
    let support = params.c.clone().unwrap_or_default();
    let (lattice, spec) = match claim {
        ClaimId::L1 => (
            Lattice::cube(n),
            GeneratorSpec { equal_to: vec![need(params.j, "j", claim)?], dominating: Dominance::Only(vec![]) },
        ),
        ClaimId::L2 => (
            Lattice::cube(n),
            GeneratorSpec {
                equal_to: vec![need(params.j, "j", claim)?, need(params.l, "l", claim)?],
                dominating: Dominance::Only(vec![]),
            },
        ),
        ClaimId::L3 => (
            Lattice::cube(n),
            GeneratorSpec {
                equal_to: vec![need(params.j, "j", claim)?],
                dominating: Dominance::Only(vec![need(params.l, "l", claim)?]),
            },
        ),
        ClaimId::L4 => (
            Lattice::cube(n),
            GeneratorSpec {
                equal_to: vec![need(params.j, "j", claim)?],
                dominating: Dominance::Only(
                    params.y.clone().ok_or_else(|| CopxError::InvalidParams("claim L4 needs parameter Y".into()))?,
                ),
            },
        ),
        ClaimId::T1 => (Lattice::cube(n), GeneratorSpec::normal_cone()),
        ClaimId::T1c | ClaimId::T1b => (Lattice::shifted(n, &support)?, GeneratorSpec::normal_cone()),
        other => return Err(CopxError::InvalidParams(format!("{other} is not a region claim"))),
    };
    let bounds = lattice.bounds();
    let dominating: Vec<usize> = match &spec.dominating {
        Dominance::All => (0..inst.len()).collect(),
        Dominance::Only(list) => list.clone(),
    };
    for &i in spec.equal_to.iter().chain(&dominating) {
        inst.check_index(i)?;
    }

    let (region, generators, anchor, equal, dominated) = if claim == ClaimId::T1b {
        // both sides work with the shifted vertex set X(C)
        let anchor = shifted_vertex(inst.vertex(k), &support);
        let dominated: Vec<Vec<i8>> = inst.vertices().iter().map(|v| shifted_vertex(v, &support)).collect();
        let region = region_vertices_from_points(&lattice, &anchor, &[], &dominated, hull_cap)?;
        let shifted = shift_points(inst.vertices(), &support)?;
        let shifted: Vec<Vec<i8>> = shifted.iter().map(|s| s.entries().to_vec()).collect();
        let generators = filter_by_points(&lattice, &shifted[k], &[], &shifted, caps)?;
        (region, generators, anchor, vec![], dominated)
    } else {
        let region = region_vertices(inst, &lattice, k, &spec.equal_to, &spec.dominating, hull_cap)?;
        let generators = select_generators(inst, &lattice, k, &spec, caps)?.members;
        let equal = spec.equal_to.iter().map(|&j| signed(inst.vertex(j))).collect();
        let dominated = dominating.iter().map(|&l| signed(inst.vertex(l))).collect();
        (region, generators, signed(inst.vertex(k)), equal, dominated)
    };
    let (verdict, evidence) = compare_region(&region, &generators, &bounds, &anchor, &equal, &dominated);
    Ok(ClaimReport::new(claim, inst, params.clone(), verdict, evidence))
}

// ---------------------------------------------------------------------------
// Shift claims
// ---------------------------------------------------------------------------

/// A seeded random rational point of the box of `H(C)`.
pub fn random_box_point(rng: &mut impl Rng, n: usize, c: &[usize]) -> RatVec {
    let mut x: Vec<Rat> = (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=1000i64);
            Rat::new(rng.gen_range(0..=q), q).expect("positive denominator")
        })
        .collect();
    for &i in c {
        x[i] = &x[i] - &Rat::one();
    }
    RatVec::new(x)
}

/// Product identity `x_k·x - x_k(C)·x = x_j·x - x_j(C)·x` for every
/// `j ∈ pairs_with` on `points` random points of the `H(C)` box.
fn product_identity(
    inst: &Instance,
    ks: &[usize],
    c: &[usize],
    points: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Verdict, Value)> {
    let shifted: Vec<SignVector> = shift_points(inst.vertices(), c)?;
    let n = inst.n();
    for _ in 0..points {
        let x = random_box_point(rng, n, c);
        let gap = |v: usize| -> Result<Rat> { Ok(x.dot_int(inst.vertex(v))? - x.dot_int(shifted[v].entries())?) };
        let gaps: Vec<Rat> = (0..inst.len()).map(gap).collect::<Result<_>>()?;
        for &k in ks {
            if let Some(j) = (0..inst.len()).find(|&j| gaps[j] != gaps[k]) {
                // re-check the witness directly against the definition of the shift
                let recheck: Rat = c.iter().map(|&i| x[i].clone()).sum();
                return Ok((
                    Verdict::Refuted,
                    json!({ "k": k, "j": j, "x": x, "gap_k": gaps[k], "gap_j": gaps[j], "sum_over_C": recheck }),
                ));
            }
        }
    }
    Ok((Verdict::Confirmed, json!({ "points": points, "pairs": ks.len() * inst.len() })))
}

/// L231 on all pairs `(k, j)` and L232 (`H_k(C) = H'_k(C)` and, within the
/// hull cap, `M_k(C) = M'_k(C)` as vertex sets) for one `(k, C)`.
pub fn check_shift_claims(
    inst: &Instance,
    k: usize,
    c: &[usize],
    points: usize,
    seed: u64,
    caps: &LatticeCaps,
    hull_cap: usize,
) -> Result<Vec<ClaimReport>> {
    inst.check_index(k)?;
    let lattice = Lattice::shifted(inst.n(), c)?;
    let support = lattice.support().to_vec();
    let params = ClaimParams { k: Some(k), c: Some(support.clone()), seed: Some(seed), ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (verdict, evidence) = product_identity(inst, &[k], &support, points, &mut rng)?;
    let l231 = ClaimReport::new(ClaimId::L231, inst, params.clone(), verdict, evidence);
    Ok(vec![l231, shift_invariance(inst, k, &lattice, caps, hull_cap)?])
}

fn shift_invariance(inst: &Instance, k: usize, lattice: &Lattice, caps: &LatticeCaps, hull_cap: usize) -> Result<ClaimReport> {
    let support = lattice.support().to_vec();
    let params = ClaimParams { k: Some(k), c: Some(support.clone()), ..Default::default() };
    if inst.n() > caps.cube {
        return Ok(ClaimReport::skipped(
            ClaimId::L232,
            inst,
            params,
            format!("n = {} exceeds lattice cap {}", inst.n(), caps.cube),
        ));
    }
    let original = select_generators(inst, lattice, k, &GeneratorSpec::normal_cone(), caps)?.members;
    let shifted: Vec<Vec<i8>> = inst.vertices().iter().map(|v| shifted_vertex(v, &support)).collect();
    let primed = filter_by_points(lattice, &shifted[k], &[], &shifted, caps)?;
    let generators_equal = original == primed;

    let mut evidence = json!({ "generators": original.len(), "generators_equal": generators_equal });
    let mut regions_equal = true;
    if inst.n() <= hull_cap {
        let plain: Vec<Vec<i8>> = inst.vertices().iter().map(|v| signed(v)).collect();
        let m = region_vertices_from_points(lattice, &plain[k], &[], &plain, hull_cap)?;
        let m_primed = region_vertices_from_points(lattice, &shifted[k], &[], &shifted, hull_cap)?;
        regions_equal = m == m_primed;
        evidence["region_vertices"] = json!(m.len());
        evidence["regions_equal"] = json!(regions_equal);
        if !regions_equal {
            evidence["only_in_M"] =
                json!(m.vertices.iter().filter(|v| !m_primed.vertices.contains(v)).collect::<Vec<_>>());
            evidence["only_in_M_primed"] =
                json!(m_primed.vertices.iter().filter(|v| !m.vertices.contains(v)).collect::<Vec<_>>());
        }
    } else {
        evidence["regions_equal"] = json!(null);
        evidence["regions_skipped"] = json!(format!("n = {} exceeds hull cap {hull_cap}", inst.n()));
    }
    if !generators_equal {
        let a: BTreeSet<&SignVector> = original.iter().collect();
        let b: BTreeSet<&SignVector> = primed.iter().collect();
        evidence["only_in_H"] = json!(a.difference(&b).collect::<Vec<_>>());
        evidence["only_in_H_primed"] = json!(b.difference(&a).collect::<Vec<_>>());
    }
    let verdict = if generators_equal && regions_equal { Verdict::Confirmed } else { Verdict::Refuted };
    Ok(ClaimReport::new(ClaimId::L232, inst, params, verdict, evidence))
}

// ---------------------------------------------------------------------------
// Equivalence trials
// ---------------------------------------------------------------------------

/// A seeded random weight vector: numerators in [-1000, 1000] (absolute
/// values for the nonnegative regime), denominators in [1, 1000].
pub fn random_weight(rng: &mut impl Rng, n: usize, regime: Regime) -> WeightVector {
    WeightVector::new(RatVec::new(
        (0..n)
            .map(|_| {
                let p: i64 = rng.gen_range(-1000..=1000);
                let q: i64 = rng.gen_range(1..=1000);
                let p = if regime == Regime::Nonneg { p.abs() } else { p };
                Rat::new(p, q).expect("positive denominator")
            })
            .collect(),
    ))
}

/// Cone verdicts against brute-force argmax on explicit weight vectors.
pub fn equivalence_trial_weights(
    inst: &Instance,
    weights: &[WeightVector],
    regime: Regime,
    caps: &LatticeCaps,
) -> Result<ClaimReport> {
    let claim = ClaimId::for_regime(regime);
    let params = ClaimParams { regime: Some(regime), trials: Some(weights.len()), ..Default::default() };
    let lattice_n = inst.n();
    let cap_hit = match regime {
        Regime::General => (lattice_n > caps.full).then_some(caps.full),
        _ => (lattice_n > caps.cube).then_some(caps.cube),
    };
    if let Some(cap) = cap_hit {
        return Ok(ClaimReport::skipped(claim, inst, params, format!("n = {lattice_n} exceeds lattice cap {cap}")));
    }
    let engine = OptimalityEngine::new(inst, *caps);
    let mut counterexamples = Vec::new();
    let mut decisions = 0usize;
    for c in weights {
        let set = engine.optimal_set(c, regime)?;
        decisions += set.verdicts.len();
        for ce in set.counterexamples {
            // the certificate was verified when issued; confirm the brute side again
            let argmax = argmax_brute(inst, c)?;
            if argmax.contains(&ce.k) == ce.brute_verdict {
                counterexamples.push(ce);
            }
        }
    }
    let verdict = if counterexamples.is_empty() { Verdict::Confirmed } else { Verdict::Refuted };
    let evidence = json!({
        "weights": weights.len(),
        "decisions": decisions,
        "counterexamples": counterexamples,
    });
    Ok(ClaimReport::new(claim, inst, params, verdict, evidence))
}

/// The zero vector plus `trials` seeded random weight vectors.
pub fn equivalence_trial(
    inst: &Instance,
    trials: usize,
    seed: u64,
    regime: Regime,
    caps: &LatticeCaps,
) -> Result<ClaimReport> {
    if trials == 0 {
        return Err(CopxError::InvalidParams("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = vec![WeightVector::new(RatVec::zeros(inst.n()))];
    weights.extend((0..trials).map(|_| random_weight(&mut rng, inst.n(), regime)));
    let mut report = equivalence_trial_weights(inst, &weights, regime, caps)?;
    report.params.trials = Some(trials);
    report.params.seed = Some(seed);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Facet description claim
// ---------------------------------------------------------------------------

/// The V-variant description is confirmed when its boxed vertex set is X,
/// every oracle facet is among its rows, no row is invalid or a proper
/// non-facet face, and the kept generators span each vertex's generator
/// cone. Equalities may be implied rather than listed; redundant rows
/// found by the necessity audit are reported as evidence.
pub fn check_facet_claim(
    inst: &Instance,
    mode: MinimalityMode,
    caps: &LatticeCaps,
    hull_cap: usize,
) -> Result<ClaimReport> {
    let params = ClaimParams { mode: Some(mode), ..Default::default() };
    if inst.n() > hull_cap {
        return Ok(ClaimReport::skipped(
            ClaimId::T3,
            inst,
            params,
            format!("n = {} exceeds hull cap {hull_cap}", inst.n()),
        ));
    }
    let report = full_description(inst, Variant::V, mode, caps, hull_cap)?;
    let diff = &report.oracle_diff;
    let complete = report.polytope_match && diff.missing_facets.is_empty();
    let sound = diff.invalid_rows.is_empty() && diff.extra_non_facets.is_empty();
    let spans = report.divergence.is_empty();
    let mut evidence = json!({
        "rows": report.rows.len(),
        "polytope_match": report.polytope_match,
        "oracle_facets": diff.oracle_facets,
        "missing_facets": diff.missing_facets,
        "missing_equalities": diff.missing_equalities,
        "extra_non_facets": diff.extra_non_facets,
        "invalid_rows": diff.invalid_rows,
        "improper_pairs": diff.improper_pairs.len(),
        "divergence": report.divergence,
    });
    if report.polytope_match {
        let audit = necessity_audit(&report, inst, hull_cap)?;
        evidence["unnecessary_rows"] = json!(audit.unnecessary);
    } else {
        // witness: vertices of the boxed description that are not in X
        let rows = report.hrep(inst.n())?;
        let got = hrep_to_vrep(&rows, Some(&BoxBounds::unit(inst.n())), hull_cap)?;
        let x = VRep::from_binary(inst.vertices());
        evidence["extra_vertices"] = json!(got.vertices.iter().filter(|v| !x.vertices.contains(v)).collect::<Vec<_>>());
        evidence["lost_vertices"] = json!(x.vertices.iter().filter(|v| !got.vertices.contains(v)).collect::<Vec<_>>());
    }
    let verdict = if complete && sound && spans { Verdict::Confirmed } else { Verdict::Refuted };
    Ok(ClaimReport::new(ClaimId::T3, inst, params, verdict, evidence))
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Regions, shift, trials and the irreducible facet description.
    Default,
    Regions,
    Shift,
    Trials,
    /// Facet descriptions in both minimality modes.
    Facets,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Default => "default",
            Suite::Regions => "regions",
            Suite::Shift => "shift",
            Suite::Trials => "trials",
            Suite::Facets => "facets",
        }
    }
}

impl FromStr for Suite {
    type Err = CopxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Suite::Default),
            "regions" => Ok(Suite::Regions),
            "shift" => Ok(Suite::Shift),
            "trials" => Ok(Suite::Trials),
            "facets" => Ok(Suite::Facets),
            other => Err(CopxError::InvalidParams(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub caps: LatticeCaps,
    pub hull_cap: usize,
    pub workers: usize,
    /// Random weight vectors per (instance, regime).
    pub trials: usize,
    /// Random points per `C` for the product identity.
    pub shift_points: usize,
    /// All `2^n` supports `C` up to this `n`; seeded samples above it.
    pub exhaustive_support_n: usize,
    pub sampled_supports: usize,
    /// All pairs and triples up to this `|X|`; seeded samples above it.
    pub exhaustive_x: usize,
    pub sampled_tuples: usize,
    pub results_dir: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            caps: LatticeCaps::default(),
            hull_cap: crate::hull::DEFAULT_HULL_DIM_CAP,
            workers: 1,
            trials: 200,
            shift_points: 100,
            exhaustive_support_n: 6,
            sampled_supports: 16,
            exhaustive_x: 6,
            sampled_tuples: 64,
            results_dir: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub confirmed: usize,
    pub refuted: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub instances: Vec<String>,
    pub reports: Vec<ClaimReport>,
    pub summary: SuiteSummary,
    pub counterexample_files: Vec<String>,
}

impl SuiteReport {
    pub fn success(&self) -> bool {
        self.summary.refuted == 0
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug)]
enum Job {
    Region(ClaimId, ClaimParams),
    Identity(Vec<usize>),
    ShiftInvariance(usize, Vec<usize>),
    Trial(Regime),
    Facets(MinimalityMode),
}

fn job_seed(base: u64, instance: usize, job: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(((instance as u64) << 32) | job as u64);
    rng.gen()
}

fn supports(n: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    if n <= cfg.exhaustive_support_n {
        return (0u64..1 << n).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect();
    }
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    out.insert(vec![]);
    out.insert((0..n).collect());
    while out.len() < cfg.sampled_supports.max(2) {
        out.insert((0..n).filter(|_| rng.gen_bool(0.5)).collect());
    }
    out.into_iter().collect()
}

fn tuples(size: usize, arity: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    if size <= cfg.exhaustive_x {
        let mut all = vec![vec![]];
        for _ in 0..arity {
            all = all
                .into_iter()
                .flat_map(|t: Vec<usize>| (0..size).map(move |i| [t.clone(), vec![i]].concat()))
                .collect();
        }
        return all;
    }
    let mut out = BTreeSet::new();
    let cap = cfg.sampled_tuples.min(size.pow(arity as u32));
    while out.len() < cap {
        out.insert((0..arity).map(|_| rng.gen_range(0..size)).collect::<Vec<_>>());
    }
    out.into_iter().collect()
}

fn y_subsets(size: usize, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    if size <= cfg.exhaustive_x {
        return (0u64..1 << size).map(|mask| (0..size).filter(|i| mask >> i & 1 == 1).collect()).collect();
    }
    let mut out = BTreeSet::new();
    out.insert(vec![]);
    out.insert((0..size).collect());
    while out.len() < cfg.sampled_tuples.clamp(2, 8) {
        out.insert((0..size).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
    }
    out.into_iter().collect()
}

fn plan(inst: &Instance, index: usize, suite: Suite, cfg: &SuiteConfig) -> Vec<Job> {
    let mut rng = ChaCha8Rng::seed_from_u64(job_seed(cfg.seed, index, usize::MAX >> 32));
    let size = inst.len();
    let n = inst.n();
    let mut jobs = Vec::new();
    let regions = matches!(suite, Suite::Default | Suite::Regions);
    let shift = matches!(suite, Suite::Default | Suite::Shift);
    let cs = if regions || shift { supports(n, cfg, &mut rng) } else { vec![] };
    if regions {
        let p = |k: usize| ClaimParams { k: Some(k), ..Default::default() };
        for k in 0..size {
            jobs.push(Job::Region(ClaimId::T1, p(k)));
        }
        for t in tuples(size, 2, cfg, &mut rng) {
            jobs.push(Job::Region(ClaimId::L1, ClaimParams { j: Some(t[1]), ..p(t[0]) }));
        }
        for t in tuples(size, 3, cfg, &mut rng) {
            let params = ClaimParams { j: Some(t[1]), l: Some(t[2]), ..p(t[0]) };
            jobs.push(Job::Region(ClaimId::L2, params.clone()));
            jobs.push(Job::Region(ClaimId::L3, params));
        }
        let ys = y_subsets(size, cfg, &mut rng);
        for t in tuples(size, 2, cfg, &mut rng) {
            for y in &ys {
                jobs.push(Job::Region(ClaimId::L4, ClaimParams { j: Some(t[1]), y: Some(y.clone()), ..p(t[0]) }));
            }
        }
        for c in &cs {
            for k in 0..size {
                let params = ClaimParams { c: Some(c.clone()), ..p(k) };
                jobs.push(Job::Region(ClaimId::T1c, params.clone()));
                jobs.push(Job::Region(ClaimId::T1b, params));
            }
        }
    }
    if shift {
        for c in &cs {
            jobs.push(Job::Identity(c.clone()));
            for k in 0..size {
                jobs.push(Job::ShiftInvariance(k, c.clone()));
            }
        }
    }
    if matches!(suite, Suite::Default | Suite::Trials) {
        for regime in Regime::ALL {
            jobs.push(Job::Trial(regime));
        }
    }
    match suite {
        Suite::Default => jobs.push(Job::Facets(MinimalityMode::Irreducible)),
        Suite::Facets => {
            jobs.push(Job::Facets(MinimalityMode::Irreducible));
            jobs.push(Job::Facets(MinimalityMode::Literal));
        }
        _ => {}
    }
    jobs
}

fn run_job(inst: &Instance, index: usize, job_index: usize, job: &Job, cfg: &SuiteConfig) -> Result<Vec<ClaimReport>> {
    let seed = job_seed(cfg.seed, index, job_index);
    match job {
        Job::Region(claim, params) => Ok(vec![check_region_claim(inst, *claim, params, &cfg.caps, cfg.hull_cap)?]),
        Job::Identity(c) => {
            let ks: Vec<usize> = (0..inst.len()).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (verdict, evidence) = product_identity(inst, &ks, c, cfg.shift_points, &mut rng)?;
            let params = ClaimParams { c: Some(c.clone()), seed: Some(seed), ..Default::default() };
            Ok(vec![ClaimReport::new(ClaimId::L231, inst, params, verdict, evidence)])
        }
        Job::ShiftInvariance(k, c) => Ok(vec![shift_invariance(inst, *k, &Lattice::shifted(inst.n(), c)?, &cfg.caps, cfg.hull_cap)?]),
        Job::Trial(regime) => Ok(vec![equivalence_trial(inst, cfg.trials.max(1), seed, *regime, &cfg.caps)?]),
        Job::Facets(mode) => Ok(vec![check_facet_claim(inst, *mode, &cfg.caps, cfg.hull_cap)?]),
    }
}

fn write_counterexamples(dir: &Path, instances: &[Instance], reports: &[(usize, ClaimReport)]) -> Result<Vec<String>> {
    let mut files = Vec::new();
    let refuted: Vec<&(usize, ClaimReport)> = reports.iter().filter(|(_, r)| r.is_refuted()).collect();
    if refuted.is_empty() {
        return Ok(files);
    }
    std::fs::create_dir_all(dir)?;
    for (i, (inst_index, r)) in refuted.into_iter().enumerate() {
        let name = format!("counterexample_{i:04}_{}.json", r.claim);
        let payload = json!({
            "claim_id": r.claim,
            "instance": instance_to_json(&instances[*inst_index]),
            "params": r.params,
            "witness": r.evidence,
        });
        std::fs::write(dir.join(&name), serde_json::to_string_pretty(&payload)?)?;
        files.push(name);
    }
    Ok(files)
}

/// Runs every applicable check of `suite` on each instance. Jobs run on a
/// pool of `cfg.workers` threads; results are merged in plan order, so the
/// report does not depend on the worker count.
pub fn run_suite(instances: &[Instance], suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let jobs: Vec<(usize, usize, Job)> = instances
        .iter()
        .enumerate()
        .flat_map(|(i, inst)| plan(inst, i, suite, cfg).into_iter().enumerate().map(move |(j, job)| (i, j, job)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| CopxError::InvalidParams(format!("cannot build worker pool: {e}")))?;
    let results: Vec<Vec<(usize, ClaimReport)>> = pool.install(|| {
        jobs.par_iter()
            .map(|(i, j, job)| {
                run_job(&instances[*i], *i, *j, job, cfg).map(|rs| rs.into_iter().map(|r| (*i, r)).collect())
            })
            .collect::<Result<_>>()
    })?;
    let tagged: Vec<(usize, ClaimReport)> = results.into_iter().flatten().collect();
    let counterexample_files = match &cfg.results_dir {
        Some(dir) => write_counterexamples(dir, instances, &tagged)?,
        None => vec![],
    };
    let reports: Vec<ClaimReport> = tagged.into_iter().map(|(_, r)| r).collect();
    let summary = SuiteSummary {
        confirmed: reports.iter().filter(|r| r.is_confirmed()).count(),
        refuted: reports.iter().filter(|r| r.is_refuted()).count(),
        skipped: reports.iter().filter(|r| matches!(r.verdict, Verdict::Skipped { .. })).count(),
    };
    Ok(SuiteReport {
        suite,
        seed: cfg.seed,
        instances: instances.iter().map(|i| i.family().to_string()).collect(),
        reports,
        summary,
        counterexample_files,
    })
}
