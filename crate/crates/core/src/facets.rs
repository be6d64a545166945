//! Facet synthesis: every minimal generator `h` of the normal cone at a
//! vertex `x_k` yields the valid inequality `h·x <= h·x_k`. The union over
//! all vertices is compared with the hull oracle's own description.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cone::{elementwise_minimal, first_uncovered, irreducible_subset, lineality_basis, FarkasCertificate};
use crate::error::{CopxError, Result};
use crate::hull::{
    face_classify, hrep_to_vrep, tight_set, tight_vertices, vrep_to_hrep, BoxBounds, FaceClass, HRep, Halfspace, VRep,
};
use crate::instances::Instance;
use crate::lattice::{normal_generators, GeneratorSet, Lattice, LatticeCaps, SignVector};
use crate::rational::{rank, Rat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Generators from the full {-1,0,1} lattice.
    V,
    /// Generators from the unit cube only.
    H,
}

impl Variant {
    pub fn lattice(self, n: usize) -> Lattice {
        match self {
            Variant::V => Lattice::full(n),
            Variant::H => Lattice::cube(n),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::V => "V",
            Variant::H => "H",
        })
    }
}

impl FromStr for Variant {
    type Err = CopxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V" | "v" => Ok(Variant::V),
            "H" | "h" => Ok(Variant::H),
            other => Err(CopxError::InvalidParams(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinimalityMode {
    /// Keep `h` iff `h` is outside the cone of the other generators.
    Literal,
    /// Greedy irreducible generating subset.
    #[default]
    Irreducible,
}

impl fmt::Display for MinimalityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MinimalityMode::Literal => "literal",
            MinimalityMode::Irreducible => "irreducible",
        })
    }
}

impl FromStr for MinimalityMode {
    type Err = CopxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(MinimalityMode::Literal),
            "irreducible" => Ok(MinimalityMode::Irreducible),
            other => Err(CopxError::InvalidParams(format!("unknown minimality mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetInequality {
    pub h: SignVector,
    pub rhs: i64,
    pub sources: Vec<usize>,
    pub tight: Vec<usize>,
    #[serde(rename = "class")]
    pub class: FaceClass,
    pub equality_pair: bool,
}

impl FacetInequality {
    pub fn halfspace(&self) -> Halfspace {
        Halfspace::new(self.h.to_rat(), Rat::from_int(self.rhs))
    }

    /// `x_i <= 1` or `-x_i <= 0`: implied by the unit box.
    pub fn is_box_row(&self) -> bool {
        let nz: Vec<i8> = self.h.entries().iter().copied().filter(|&x| x != 0).collect();
        matches!((nz.as_slice(), self.rhs), ([1], 1) | ([-1], 0))
    }
}

/// Minimal generators of one vertex's normal cone.
#[derive(Clone, Debug)]
pub struct VertexSynthesis {
    pub k: usize,
    pub generators: GeneratorSet,
    pub kept: GeneratorSet,
}

pub fn synthesize_vertex(
    inst: &Instance,
    k: usize,
    variant: Variant,
    mode: MinimalityMode,
    caps: &LatticeCaps,
) -> Result<VertexSynthesis> {
    let generators = normal_generators(inst, &variant.lattice(inst.n()), k, caps)?;
    let kept = match mode {
        MinimalityMode::Literal => elementwise_minimal(&generators),
        MinimalityMode::Irreducible => irreducible_subset(&generators),
    };
    Ok(VertexSynthesis { k, generators, kept })
}

fn classify_row(inst: &Instance, h: SignVector, rhs: i64, sources: Vec<usize>) -> Result<FacetInequality> {
    let l = Rat::from_int(rhs);
    let tight = tight_vertices(inst, &h, &l).unwrap_or_default();
    let class = face_classify(inst, &h, &l)?;
    Ok(FacetInequality { h, rhs, sources, tight, class, equality_pair: false })
}

/// Inequalities `h·x <= h·x_k` for the minimal generators at vertex `k`.
pub fn vertex_facets(
    inst: &Instance,
    k: usize,
    variant: Variant,
    mode: MinimalityMode,
    caps: &LatticeCaps,
) -> Result<Vec<FacetInequality>> {
    let synth = synthesize_vertex(inst, k, variant, mode, caps)?;
    synth
        .kept
        .members
        .into_iter()
        .map(|h| {
            let rhs = h.dot_binary(inst.vertex(k));
            classify_row(inst, h, rhs, vec![k])
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleFacet {
    pub a: RatVec,
    pub b: Rat,
    pub tight: Vec<usize>,
    /// The oracle's canonical normal has entries in {-1,0,1}.
    pub unit_normal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowRef {
    pub h: SignVector,
    pub rhs: i64,
    #[serde(rename = "class")]
    pub class: FaceClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDiff {
    pub oracle_facets: usize,
    pub oracle_equalities: usize,
    /// Oracle facets (matched by tight vertex set) with no emitted row.
    pub missing_facets: Vec<OracleFacet>,
    /// Emitted rows that are neither facets nor affine-hull equalities.
    pub extra_non_facets: Vec<RowRef>,
    /// Pairs `(h, l)`, `(-h, -l)` both emitted; listed by the lexicographically larger member.
    pub improper_pairs: Vec<RowRef>,
    /// Improper rows emitted in one direction only.
    pub unpaired_improper: Vec<RowRef>,
    /// Oracle equalities not spanned by the emitted equality pairs.
    pub missing_equalities: Vec<Halfspace>,
    /// Rows violated by some vertex; the construction predicts none.
    pub invalid_rows: Vec<RowRef>,
}

/// A vertex whose kept generators fail to generate its full generator cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub k: usize,
    pub generators: usize,
    pub kept: usize,
    pub uncovered: SignVector,
    pub separator: FarkasCertificate,
    pub lineality: Vec<RatVec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescriptionReport {
    pub instance: String,
    pub variant: Variant,
    pub mode: MinimalityMode,
    pub rows: Vec<FacetInequality>,
    pub polytope_match: bool,
    pub oracle_diff: OracleDiff,
    pub divergence: Vec<Divergence>,
}

impl DescriptionReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "instance": self.instance,
            "variant": self.variant,
            "mode": self.mode,
            "rows": self.rows,
            "polytope_match": self.polytope_match,
            "oracle_diff": self.oracle_diff,
            "divergence": self.divergence,
        })
    }

    pub fn hrep(&self, n: usize) -> Result<HRep> {
        HRep::new(n, self.rows.iter().map(FacetInequality::halfspace).collect(), vec![])
    }
}

fn row_ref(r: &FacetInequality) -> RowRef {
    RowRef { h: r.h.clone(), rhs: r.rhs, class: r.class.clone() }
}

fn boxed_vertices(rows: &[Halfspace], n: usize, hull_cap: usize) -> Result<VRep> {
    let h = HRep::new(n, rows.to_vec(), vec![])?;
    hrep_to_vrep(&h, Some(&BoxBounds::unit(n)), hull_cap)
}

fn oracle_diff(inst: &Instance, rows: &[FacetInequality], hull_cap: usize) -> Result<OracleDiff> {
    let x = VRep::from_binary(inst.vertices());
    let oracle = vrep_to_hrep(&x, hull_cap)?;
    let points: Vec<RatVec> = (0..inst.len()).map(|k| inst.vertex_rat(k)).collect();

    let emitted_facets: BTreeSet<&Vec<usize>> =
        rows.iter().filter(|r| r.class == FaceClass::Facet).map(|r| &r.tight).collect();
    let mut missing_facets = Vec::new();
    for row in &oracle.inequalities {
        let tight = tight_set(&points, row)?;
        if !emitted_facets.contains(&tight) {
            let unit_normal = row.a.iter().all(|v| v.is_zero() || v.abs() == Rat::one());
            missing_facets.push(OracleFacet { a: row.a.clone(), b: row.b.clone(), tight, unit_normal });
        }
    }

    let extra_non_facets = rows
        .iter()
        .filter(|r| !matches!(r.class, FaceClass::Facet | FaceClass::Improper | FaceClass::Invalid))
        .map(row_ref)
        .collect();
    let invalid_rows = rows.iter().filter(|r| r.class == FaceClass::Invalid).map(row_ref).collect();
    let improper: Vec<&FacetInequality> = rows.iter().filter(|r| r.class == FaceClass::Improper).collect();
    let improper_pairs =
        improper.iter().filter(|r| r.equality_pair && r.h > r.h.negated()).map(|r| row_ref(r)).collect();
    let unpaired_improper = improper.iter().filter(|r| !r.equality_pair).map(|r| row_ref(r)).collect();

    let as_row = |a: &RatVec, b: &Rat| -> Vec<Rat> {
        let mut v = a.entries().to_vec();
        v.push(b.clone());
        v
    };
    let span: Vec<Vec<Rat>> =
        improper.iter().filter(|r| r.equality_pair).map(|r| as_row(&r.h.to_rat(), &Rat::from_int(r.rhs))).collect();
    let base = rank(&span);
    let missing_equalities = oracle
        .equalities
        .iter()
        .filter(|e| {
            let mut with = span.clone();
            with.push(as_row(&e.a, &e.b));
            rank(&with) > base
        })
        .cloned()
        .collect();

    Ok(OracleDiff {
        oracle_facets: oracle.inequalities.len(),
        oracle_equalities: oracle.equalities.len(),
        missing_facets,
        extra_non_facets,
        improper_pairs,
        unpaired_improper,
        missing_equalities,
        invalid_rows,
    })
}

/// Union of the per-vertex inequalities, classified and checked against the
/// hull oracle.
pub fn full_description(
    inst: &Instance,
    variant: Variant,
    mode: MinimalityMode,
    caps: &LatticeCaps,
    hull_cap: usize,
) -> Result<DescriptionReport> {
    let n = inst.n();
    if n > hull_cap {
        return Err(CopxError::SizeCap { what: "hull oracle", n, cap: hull_cap });
    }
    let synth: Vec<VertexSynthesis> = (0..inst.len())
        .into_par_iter()
        .map(|k| synthesize_vertex(inst, k, variant, mode, caps))
        .collect::<Result<_>>()?;

    let mut sources: BTreeMap<(SignVector, i64), Vec<usize>> = BTreeMap::new();
    for s in &synth {
        for h in &s.kept.members {
            let rhs = h.dot_binary(inst.vertex(s.k));
            sources.entry((h.clone(), rhs)).or_default().push(s.k);
        }
    }
    let keys: BTreeSet<(SignVector, i64)> = sources.keys().cloned().collect();
    let mut rows: Vec<FacetInequality> = sources
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|((h, rhs), src)| classify_row(inst, h, rhs, src))
        .collect::<Result<_>>()?;
    for r in rows.iter_mut() {
        r.equality_pair = keys.contains(&(r.h.negated(), -r.rhs));
    }

    let divergence: Vec<Divergence> = synth
        .par_iter()
        .filter_map(|s| {
            first_uncovered(&s.kept.members, &s.generators.members).map(|(uncovered, separator)| Divergence {
                k: s.k,
                generators: s.generators.len(),
                kept: s.kept.len(),
                uncovered,
                separator,
                lineality: lineality_basis(&s.generators.members),
            })
        })
        .collect();

    let halfspaces: Vec<Halfspace> = rows.iter().map(FacetInequality::halfspace).collect();
    let polytope_match = boxed_vertices(&halfspaces, n, hull_cap)? == VRep::from_binary(inst.vertices());
    let oracle_diff = oracle_diff(inst, &rows, hull_cap)?;
    Ok(DescriptionReport {
        instance: inst.family().to_string(),
        variant,
        mode,
        rows,
        polytope_match,
        oracle_diff,
        divergence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowNecessity {
    Necessary,
    Unnecessary,
    /// Implied by the unit box, which stays in place during the audit.
    BoxRow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowAudit {
    pub index: usize,
    pub h: SignVector,
    pub rhs: i64,
    pub status: RowNecessity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecessityAudit {
    pub rows: Vec<RowAudit>,
    pub unnecessary: Vec<usize>,
}

/// Drops each non-box row in turn and checks whether the boxed vertex set
/// changes.
pub fn necessity_audit(report: &DescriptionReport, inst: &Instance, hull_cap: usize) -> Result<NecessityAudit> {
    if !report.polytope_match {
        return Err(CopxError::Precondition("necessity audit needs a description with polytope_match = true".into()));
    }
    let n = inst.n();
    let x = VRep::from_binary(inst.vertices());
    let halfspaces: Vec<Halfspace> = report.rows.iter().map(FacetInequality::halfspace).collect();
    let rows: Vec<RowAudit> = report
        .rows
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let status = if r.is_box_row() {
                RowNecessity::BoxRow
            } else {
                let others: Vec<Halfspace> =
                    halfspaces.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, h)| h.clone()).collect();
                if boxed_vertices(&others, n, hull_cap)? == x {
                    RowNecessity::Unnecessary
                } else {
                    RowNecessity::Necessary
                }
            };
            Ok(RowAudit { index: i, h: r.h.clone(), rhs: r.rhs, status })
        })
        .collect::<Result<_>>()?;
    let unnecessary = rows.iter().filter(|r| r.status == RowNecessity::Unnecessary).map(|r| r.index).collect();
    Ok(NecessityAudit { rows, unnecessary })
}
