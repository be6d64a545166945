//! Sign-vector lattices and the generator families cut from them.
//!
//! A lattice is one of: the 0/1 cube vertices, a shifted cube whose
//! coordinates in `C` range over {-1, 0} instead of {0, 1}, or the full
//! {-1, 0, 1}^n. Generator sets are the lattice vectors `h` satisfying a list
//! of equalities `x_k·h = x_j·h` and dominances `x_k·h >= x_l·h`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{CopxError, Result};
use crate::instances::Instance;
use crate::rational::{Rat, RatVec};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|x| !(-1..=1).contains(*x)) {
            return Err(CopxError::InvalidParams(format!("sign vector entry {bad} outside {{-1,0,1}}")));
        }
        Ok(SignVector(entries))
    }

    pub fn from_binary(v: &[u8]) -> Self {
        SignVector(v.iter().map(|&x| x as i8).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        SignVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&x| x == 0 || x == 1)
    }

    pub fn negated(&self) -> SignVector {
        SignVector(self.0.iter().map(|&x| -x).collect())
    }

    pub fn dot_binary(&self, x: &[u8]) -> i64 {
        self.0.iter().zip(x).map(|(&h, &x)| h as i64 * x as i64).sum()
    }

    pub fn dot_ints(&self, x: &[i8]) -> i64 {
        int_dot(&self.0, x)
    }

    pub fn to_rat(&self) -> RatVec {
        RatVec::from_ints(self.0.iter().map(|&x| x as i64))
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn int_dot(a: &[i8], b: &[i8]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x as i64 * y as i64).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeKind {
    /// 0/1 vectors, the vertices of the unit cube.
    Cube,
    /// Vertices of the unit cube shifted by `-1` on the listed coordinates.
    ShiftedCube(Vec<usize>),
    /// All {-1,0,1} vectors.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    pub kind: LatticeKind,
    pub n: usize,
}

impl Lattice {
    pub fn cube(n: usize) -> Self {
        Lattice { kind: LatticeKind::Cube, n }
    }

    pub fn full(n: usize) -> Self {
        Lattice { kind: LatticeKind::Full, n }
    }

    /// Shifted cube with support `c`; an empty support is the plain cube.
    pub fn shifted(n: usize, c: &[usize]) -> Result<Self> {
        let support = check_support(n, c)?;
        if support.is_empty() {
            return Ok(Lattice::cube(n));
        }
        Ok(Lattice { kind: LatticeKind::ShiftedCube(support), n })
    }

    pub fn support(&self) -> &[usize] {
        match &self.kind {
            LatticeKind::ShiftedCube(c) => c,
            _ => &[],
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            LatticeKind::Cube => "cube",
            LatticeKind::ShiftedCube(_) => "shifted",
            LatticeKind::Full => "full",
        }
    }

    /// Per-coordinate value range `[lo, hi]`.
    pub fn bounds(&self) -> Vec<(i8, i8)> {
        match &self.kind {
            LatticeKind::Cube => vec![(0, 1); self.n],
            LatticeKind::Full => vec![(-1, 1); self.n],
            LatticeKind::ShiftedCube(c) => {
                let mut b = vec![(0, 1); self.n];
                for &i in c {
                    b[i] = (-1, 0);
                }
                b
            }
        }
    }

    pub fn size(&self) -> u128 {
        let base: u128 = if self.kind == LatticeKind::Full { 3 } else { 2 };
        base.pow(self.n as u32)
    }

    pub fn contains(&self, h: &SignVector) -> bool {
        h.len() == self.n && self.bounds().iter().zip(h.entries()).all(|(&(lo, hi), &x)| lo <= x && x <= hi)
    }
}

fn check_support(n: usize, c: &[usize]) -> Result<Vec<usize>> {
    if let Some(&bad) = c.iter().find(|&&i| i >= n) {
        return Err(CopxError::InvalidParams(format!("support index {bad} out of range for n = {n}")));
    }
    Ok(c.iter().copied().collect::<BTreeSet<_>>().into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeCaps {
    pub full: usize,
    pub cube: usize,
}

impl Default for LatticeCaps {
    fn default() -> Self {
        LatticeCaps { full: 14, cube: 20 }
    }
}

impl LatticeCaps {
    pub fn check(&self, lattice: &Lattice) -> Result<()> {
        let (what, cap) = match lattice.kind {
            LatticeKind::Full => ("full lattice", self.full),
            _ => ("cube lattice", self.cube),
        };
        if lattice.n > cap {
            return Err(CopxError::SizeCap { what, n: lattice.n, cap });
        }
        Ok(())
    }
}

const CHUNK: u128 = 1 << 12;

/// Lattice vectors passing `keep`, in lexicographic order. Candidate ranges
/// are filtered in parallel and merged in order.
fn filter_lattice<F>(lattice: &Lattice, caps: &LatticeCaps, keep: F) -> Result<Vec<SignVector>>
where
    F: Fn(&[i8]) -> bool + Sync,
{
    caps.check(lattice)?;
    let bounds = lattice.bounds();
    let total = lattice.size();
    let chunks = total.div_ceil(CHUNK) as usize;
    let parts: Vec<Vec<SignVector>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk as u128 * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut v = decode(start, &bounds);
            let mut out = Vec::new();
            for idx in start..end {
                if keep(&v) {
                    out.push(SignVector(v.clone()));
                }
                if idx + 1 < end {
                    increment(&mut v, &bounds);
                }
            }
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

fn decode(mut idx: u128, bounds: &[(i8, i8)]) -> Vec<i8> {
    let mut v = vec![0i8; bounds.len()];
    for i in (0..bounds.len()).rev() {
        let (lo, hi) = bounds[i];
        let radix = (hi - lo + 1) as u128;
        v[i] = lo + (idx % radix) as i8;
        idx /= radix;
    }
    v
}

fn increment(v: &mut [i8], bounds: &[(i8, i8)]) {
    for i in (0..v.len()).rev() {
        if v[i] < bounds[i].1 {
            v[i] += 1;
            return;
        }
        v[i] = bounds[i].0;
    }
}

/// Every vector of the lattice, lexicographically ordered.
pub fn enum_lattice(lattice: &Lattice, caps: &LatticeCaps) -> Result<Vec<SignVector>> {
    filter_lattice(lattice, caps, |_| true)
}

/// Coordinates in `c` decrease by one; `h` must be 0/1-valued.
pub fn shift_by_support(h: &SignVector, c: &[usize]) -> Result<SignVector> {
    if !h.is_binary() {
        return Err(CopxError::Precondition(format!("shift expects a 0/1 vector, got {h:?}")));
    }
    let support = check_support(h.len(), c)?;
    let mut out = h.0.clone();
    for i in support {
        out[i] -= 1;
    }
    Ok(SignVector(out))
}

/// Shifts a 0/1 point set (the instance's X) by the same support.
pub fn shift_points(points: &[Vec<u8>], c: &[usize]) -> Result<Vec<SignVector>> {
    points.iter().map(|p| shift_by_support(&SignVector::from_binary(p), c)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    /// Every vertex of X, the anchor included.
    All,
    Only(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub equal_to: Vec<usize>,
    pub dominating: Dominance,
}

impl GeneratorSpec {
    pub fn normal_cone() -> Self {
        GeneratorSpec { equal_to: vec![], dominating: Dominance::All }
    }

    pub fn unconstrained() -> Self {
        GeneratorSpec { equal_to: vec![], dominating: Dominance::Only(vec![]) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub anchor: usize,
    pub lattice: Lattice,
    pub members: Vec<SignVector>,
    pub spec: GeneratorSpec,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, h: &SignVector) -> bool {
        self.members.binary_search(h).is_ok()
    }

    /// Same anchor and provenance, members restricted to the given indices.
    pub fn restricted(&self, keep: &[usize]) -> GeneratorSet {
        GeneratorSet {
            anchor: self.anchor,
            lattice: self.lattice.clone(),
            members: keep.iter().map(|&i| self.members[i].clone()).collect(),
            spec: self.spec.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "anchor": self.anchor,
            "lattice": self.lattice.name(),
            "C": self.lattice.support(),
            "members": self.members,
        })
    }
}

/// Filters the lattice by `anchor·h = e·h` for every `e` in `equal` and
/// `anchor·h >= d·h` for every `d` in `dominated`, dropping the zero vector.
/// Points may be arbitrary {-1,0,1} vectors (e.g. a shifted X).
pub fn filter_by_points(
    lattice: &Lattice,
    anchor: &[i8],
    equal: &[Vec<i8>],
    dominated: &[Vec<i8>],
    caps: &LatticeCaps,
) -> Result<Vec<SignVector>> {
    let n = lattice.n;
    for p in std::iter::once(anchor).chain(equal.iter().map(Vec::as_slice)).chain(dominated.iter().map(Vec::as_slice)) {
        if p.len() != n {
            return Err(CopxError::DimensionMismatch { expected: n, found: p.len() });
        }
    }
    let diff = |p: &Vec<i8>| -> Vec<i8> { anchor.iter().zip(p).map(|(a, b)| a - b).collect() };
    let eq_rows: BTreeSet<Vec<i8>> = equal.iter().map(diff).filter(|d| d.iter().any(|&x| x != 0)).collect();
    let ge_rows: BTreeSet<Vec<i8>> = dominated.iter().map(diff).filter(|d| d.iter().any(|&x| x != 0)).collect();
    let eq_rows: Vec<Vec<i8>> = eq_rows.into_iter().collect();
    let ge_rows: Vec<Vec<i8>> = ge_rows.into_iter().collect();
    filter_lattice(lattice, caps, |h| {
        h.iter().any(|&x| x != 0)
            && eq_rows.iter().all(|d| int_dot(d, h) == 0)
            && ge_rows.iter().all(|d| int_dot(d, h) >= 0)
    })
}

fn binary_as_signed(v: &[u8]) -> Vec<i8> {
    v.iter().map(|&x| x as i8).collect()
}

/// Generator set of `anchor` over `lattice`: the equality and dominance
/// constraints are taken against the instance's own (unshifted) vertices.
pub fn select_generators(
    inst: &Instance,
    lattice: &Lattice,
    anchor: usize,
    spec: &GeneratorSpec,
    caps: &LatticeCaps,
) -> Result<GeneratorSet> {
    if lattice.n != inst.n() {
        return Err(CopxError::DimensionMismatch { expected: inst.n(), found: lattice.n });
    }
    inst.check_index(anchor)?;
    let dominating: Vec<usize> = match &spec.dominating {
        Dominance::All => (0..inst.len()).collect(),
        Dominance::Only(list) => list.clone(),
    };
    for &i in spec.equal_to.iter().chain(&dominating) {
        inst.check_index(i)?;
    }
    let equal: Vec<Vec<i8>> = spec.equal_to.iter().map(|&j| binary_as_signed(inst.vertex(j))).collect();
    let dominated: Vec<Vec<i8>> = dominating.iter().map(|&l| binary_as_signed(inst.vertex(l))).collect();
    let members = filter_by_points(lattice, &binary_as_signed(inst.vertex(anchor)), &equal, &dominated, caps)?;
    Ok(GeneratorSet { anchor, lattice: lattice.clone(), members, spec: spec.clone() })
}

/// The normal-cone generator set `H_k` over the given lattice.
pub fn normal_generators(
    inst: &Instance,
    lattice: &Lattice,
    anchor: usize,
    caps: &LatticeCaps,
) -> Result<GeneratorSet> {
    select_generators(inst, lattice, anchor, &GeneratorSpec::normal_cone(), caps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub subset: String,
    pub superset: String,
    /// `None` when the link does not apply to the given parameters.
    pub holds: Option<bool>,
    pub offending: Vec<SignVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub links: Vec<ChainLink>,
    pub sizes: Vec<(String, usize)>,
}

impl ChainReport {
    pub fn violations(&self) -> Vec<&ChainLink> {
        self.links.iter().filter(|l| l.holds == Some(false)).collect()
    }
}

/// Checks the inclusion chain `H_kj^Y ⊆ H_kj^l ⊆ H_kj ⊆ H_k` over the cube.
///
/// The first link only applies when `l ∈ Y`. The last link is evaluated as
/// written and can fail (an `h` with `x_k·h = x_j·h` need not have `x_k`
/// maximal); the report also carries `H_kj^X ⊆ H_k`, which always holds.
pub fn chain_check(
    inst: &Instance,
    k: usize,
    j: usize,
    l: usize,
    y: &[usize],
    caps: &LatticeCaps,
) -> Result<ChainReport> {
    let cube = Lattice::cube(inst.n());
    let make = |equal_to: Vec<usize>, dominating: Dominance| {
        select_generators(inst, &cube, k, &GeneratorSpec { equal_to, dominating }, caps)
    };
    let h_kjy = make(vec![j], Dominance::Only(y.to_vec()))?;
    let h_kjl = make(vec![j], Dominance::Only(vec![l]))?;
    let h_kj = make(vec![j], Dominance::Only(vec![]))?;
    let h_kjx = make(vec![j], Dominance::All)?;
    let h_k = make(vec![], Dominance::All)?;
    let link = |a: &GeneratorSet, an: &str, b: &GeneratorSet, bn: &str, applies: bool| {
        let offending: Vec<SignVector> =
            if applies { a.members.iter().filter(|h| !b.contains(h)).cloned().collect() } else { vec![] };
        ChainLink { subset: an.into(), superset: bn.into(), holds: applies.then_some(offending.is_empty()), offending }
    };
    let links = vec![
        link(&h_kjy, "H_kj^Y", &h_kjl, "H_kj^l", y.contains(&l)),
        link(&h_kjl, "H_kj^l", &h_kj, "H_kj", true),
        link(&h_kj, "H_kj", &h_k, "H_k", true),
        link(&h_kjx, "H_kj^X", &h_k, "H_k", true),
    ];
    let sizes = [("H_kj^Y", &h_kjy), ("H_kj^l", &h_kjl), ("H_kj", &h_kj), ("H_kj^X", &h_kjx), ("H_k", &h_k)]
        .iter()
        .map(|(name, set)| (name.to_string(), set.len()))
        .collect();
    Ok(ChainReport { links, sizes })
}

/// Evaluates `x·h` exactly for a rational point.
pub fn rat_dot(h: &SignVector, x: &RatVec) -> Result<Rat> {
    x.dot_int(h.entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_family, triangle_trees, Family, GenLimits, Graph};

    fn sv(v: &[i8]) -> SignVector {
        SignVector::new(v.to_vec()).unwrap()
    }

    fn caps() -> LatticeCaps {
        LatticeCaps::default()
    }

    #[test]
    fn enumerate_small_lattices() {
        let cube = enum_lattice(&Lattice::cube(2), &caps()).unwrap();
        assert_eq!(cube, vec![sv(&[0, 0]), sv(&[0, 1]), sv(&[1, 0]), sv(&[1, 1])]);
        let full = enum_lattice(&Lattice::full(1), &caps()).unwrap();
        assert_eq!(full, vec![sv(&[-1]), sv(&[0]), sv(&[1])]);
        let shifted = enum_lattice(&Lattice::shifted(2, &[0]).unwrap(), &caps()).unwrap();
        assert_eq!(shifted, vec![sv(&[-1, 0]), sv(&[-1, 1]), sv(&[0, 0]), sv(&[0, 1])]);
        assert_eq!(enum_lattice(&Lattice::full(5), &caps()).unwrap().len(), 243);
    }

    #[test]
    fn enumeration_respects_caps() {
        let small = LatticeCaps { full: 3, cube: 4 };
        let err = enum_lattice(&Lattice::full(4), &small).unwrap_err();
        assert!(matches!(err, CopxError::SizeCap { cap: 3, n: 4, .. }));
        assert!(err.to_string().contains('3'));
        assert!(enum_lattice(&Lattice::cube(5), &small).is_err());
        assert!(enum_lattice(&Lattice::cube(4), &small).is_ok());
    }

    #[test]
    fn large_enumeration_is_sorted_and_complete() {
        let all = enum_lattice(&Lattice::full(9), &caps()).unwrap();
        assert_eq!(all.len(), 19683);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_by_support(&sv(&[1, 1, 0]), &[0]).unwrap(), sv(&[0, 1, 0]));
        assert_eq!(shift_by_support(&sv(&[1, 0, 1]), &[]).unwrap(), sv(&[1, 0, 1]));
        assert_eq!(shift_by_support(&sv(&[0, 1]), &[0, 1]).unwrap(), sv(&[-1, 0]));
        assert!(shift_by_support(&sv(&[0, 1]), &[2]).is_err());
        assert!(shift_by_support(&sv(&[-1, 1]), &[0]).is_err());
    }

    #[test]
    fn shift_consistency_with_enumeration() {
        for n in 1..=4usize {
            let cube = enum_lattice(&Lattice::cube(n), &caps()).unwrap();
            for mask in 0u32..(1 << n) {
                let c: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let lattice = Lattice::shifted(n, &c).unwrap();
                let direct: BTreeSet<SignVector> = enum_lattice(&lattice, &caps()).unwrap().into_iter().collect();
                let shifted: BTreeSet<SignVector> = cube.iter().map(|h| shift_by_support(h, &c).unwrap()).collect();
                assert_eq!(direct, shifted, "n={n} C={c:?}");
            }
        }
    }

    #[test]
    fn triangle_generator_sets() {
        let inst = triangle_trees();
        let cube = Lattice::cube(3);
        let hk = normal_generators(&inst, &cube, 0, &caps()).unwrap();
        assert_eq!(hk.members, vec![sv(&[0, 0, 1]), sv(&[0, 1, 0]), sv(&[0, 1, 1]), sv(&[1, 1, 1])]);

        let hkj = select_generators(
            &inst,
            &cube,
            0,
            &GeneratorSpec { equal_to: vec![2], dominating: Dominance::Only(vec![]) },
            &caps(),
        )
        .unwrap();
        assert_eq!(hkj.members, vec![sv(&[0, 1, 0]), sv(&[1, 0, 1]), sv(&[1, 1, 1])]);

        let all = select_generators(&inst, &Lattice::full(3), 1, &GeneratorSpec::unconstrained(), &caps()).unwrap();
        assert_eq!(all.len(), 26);
        assert!(!all.members.iter().any(SignVector::is_zero));

        // listing the anchor among equal_to is a no-op
        let self_eq = select_generators(
            &inst,
            &cube,
            0,
            &GeneratorSpec { equal_to: vec![0], dominating: Dominance::All },
            &caps(),
        )
        .unwrap();
        assert_eq!(self_eq.members, hk.members);
    }

    #[test]
    fn generator_set_json() {
        let inst = triangle_trees();
        let hk = normal_generators(&inst, &Lattice::shifted(3, &[0]).unwrap(), 0, &caps()).unwrap();
        let v = hk.to_json();
        assert_eq!(v["lattice"], "shifted");
        assert_eq!(v["C"], json!([0]));
        assert_eq!(v["anchor"], 0);
        assert!(v["members"].as_array().unwrap().iter().all(|m| m.as_array().unwrap().len() == 3));
    }

    #[test]
    fn chain_on_triangle() {
        let inst = triangle_trees();
        for k in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    for mask in 0u32..8 {
                        let y: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
                        let report = chain_check(&inst, k, j, l, &y, &caps()).unwrap();
                        for link in &report.links {
                            if link.subset != "H_kj" {
                                assert_ne!(link.holds, Some(false), "k={k} j={j} l={l} Y={y:?}: {link:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn literal_boundary_link_fails_on_triangle() {
        // x_k=(0,1,1), x_j=(1,1,0): h=(1,0,1) ties the pair but x_l=(1,0,1) beats x_k on it
        let report = chain_check(&triangle_trees(), 0, 2, 1, &[1], &caps()).unwrap();
        let link = &report.links[2];
        assert_eq!(link.holds, Some(false));
        assert_eq!(link.offending, vec![sv(&[1, 0, 1])]);
        assert_eq!(report.violations().len(), 1);
    }

    #[test]
    fn chain_degenerate_cases() {
        let inst = triangle_trees();
        let cube = Lattice::cube(3);
        let make = |dom: Dominance| {
            select_generators(&inst, &cube, 0, &GeneratorSpec { equal_to: vec![2], dominating: dom }, &caps())
                .unwrap()
                .members
        };
        // Y = {x_l} coincides with the single-vertex family, Y = ∅ with H_kj
        assert_eq!(make(Dominance::Only(vec![1])), vec![sv(&[0, 1, 0]), sv(&[1, 1, 1])]);
        assert_eq!(make(Dominance::Only(vec![])), vec![sv(&[0, 1, 0]), sv(&[1, 0, 1]), sv(&[1, 1, 1])]);
        let report = chain_check(&inst, 0, 2, 1, &[1], &caps()).unwrap();
        assert_eq!(report.sizes[0].1, report.sizes[1].1);
        let report = chain_check(&inst, 0, 2, 1, &[], &caps()).unwrap();
        assert_eq!(report.sizes[0].1, report.sizes[2].1);
        assert_eq!(report.links[0].holds, None);
    }

    #[test]
    fn anchor_in_own_generator_set_when_self_maximizing() {
        let limits = GenLimits::default();
        let instances = [
            triangle_trees(),
            gen_family(&Family::SpanningTrees(Graph::complete(4)), &limits).unwrap(),
            gen_family(&Family::TspTours { cities: 4 }, &limits).unwrap(),
        ];
        for inst in &instances {
            let cube = Lattice::cube(inst.n());
            for k in 0..inst.len() {
                let xk = SignVector::from_binary(inst.vertex(k));
                let best = inst.vertices().iter().map(|x| xk.dot_binary(x)).max().unwrap();
                let hk = normal_generators(inst, &cube, k, &caps()).unwrap();
                if xk.dot_binary(inst.vertex(k)) == best {
                    assert!(hk.contains(&xk));
                }
            }
        }
    }

    #[test]
    fn determinism_across_pool_sizes() {
        let inst = gen_family(&Family::TspTours { cities: 5 }, &GenLimits::default()).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| normal_generators(&inst, &Lattice::full(10), 3, &caps()).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
