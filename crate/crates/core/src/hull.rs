//! Brute-force polyhedral oracle: exact conversion between vertex and
//! inequality descriptions by the double description method.
//!
//! This module shares only the rational substrate and the instance type with
//! the rest of the crate; it never calls into the cone or lattice filters, so
//! it can be used to check them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{CopxError, Result};
use crate::instances::Instance;
use crate::lattice::{Dominance, Lattice, LatticeKind, SignVector};
use crate::rational::{affine_rank, primitive_integer, rref, Rat, RatVec};

pub const DEFAULT_HULL_DIM_CAP: usize = 8;

/// `a·x <= b` (or `a·x = b` when stored as an equality).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Halfspace {
    pub a: RatVec,
    pub b: Rat,
}

impl Halfspace {
    pub fn new(a: RatVec, b: Rat) -> Self {
        Halfspace { a, b }
    }

    pub fn slack(&self, x: &RatVec) -> Result<Rat> {
        Ok(&self.b - self.a.dot(x)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HRep {
    pub n: usize,
    pub inequalities: Vec<Halfspace>,
    pub equalities: Vec<Halfspace>,
}

impl HRep {
    /// Drops vacuous rows (`0·x <= b` with `b >= 0`, `0·x = 0`); a zero row
    /// with an unsatisfiable right-hand side is kept as an infeasibility marker.
    pub fn new(n: usize, inequalities: Vec<Halfspace>, equalities: Vec<Halfspace>) -> Result<Self> {
        for row in inequalities.iter().chain(&equalities) {
            if row.a.len() != n {
                return Err(CopxError::DimensionMismatch { expected: n, found: row.a.len() });
            }
        }
        let inequalities = inequalities.into_iter().filter(|r| !(r.a.is_zero() && !r.b.is_negative())).collect();
        let equalities = equalities.into_iter().filter(|r| !(r.a.is_zero() && r.b.is_zero())).collect();
        Ok(HRep { n, inequalities, equalities })
    }

    pub fn contains(&self, x: &RatVec) -> Result<bool> {
        for row in &self.inequalities {
            if row.slack(x)?.is_negative() {
                return Ok(false);
            }
        }
        for row in &self.equalities {
            if !row.slack(x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VRep {
    pub vertices: Vec<RatVec>,
}

impl VRep {
    /// Sorted, deduplicated vertex list.
    pub fn new(points: Vec<RatVec>) -> Result<Self> {
        if let Some(first) = points.first() {
            if let Some(bad) = points.iter().find(|p| p.len() != first.len()) {
                return Err(CopxError::DimensionMismatch { expected: first.len(), found: bad.len() });
            }
        }
        let set: BTreeSet<RatVec> = points.into_iter().collect();
        Ok(VRep { vertices: set.into_iter().collect() })
    }

    pub fn from_binary(points: &[Vec<u8>]) -> Self {
        VRep::new(points.iter().map(|p| RatVec::from_ints(p.iter().map(|&x| x as i64))).collect())
            .expect("binary points share a length")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.vertices.first().map(RatVec::len)
    }
}

/// Axis-aligned bounds `lo_i <= x_i <= hi_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxBounds(pub Vec<(Rat, Rat)>);

impl BoxBounds {
    pub fn unit(n: usize) -> Self {
        BoxBounds(vec![(Rat::zero(), Rat::one()); n])
    }

    /// The box spanned by a lattice: `[0,1]^n`, the shifted cube, or `[-1,1]^n`.
    pub fn of_lattice(lattice: &Lattice) -> Self {
        let mut b = vec![(Rat::zero(), Rat::one()); lattice.n];
        match &lattice.kind {
            LatticeKind::Cube => {}
            LatticeKind::Full => b.iter_mut().for_each(|r| r.0 = Rat::from_int(-1)),
            LatticeKind::ShiftedCube(c) => {
                for &i in c {
                    b[i] = (Rat::from_int(-1), Rat::zero());
                }
            }
        }
        BoxBounds(b)
    }

    pub fn rows(&self) -> Vec<Halfspace> {
        let n = self.0.len();
        let mut rows = Vec::with_capacity(2 * n);
        for (i, (lo, hi)) in self.0.iter().enumerate() {
            let mut up = vec![Rat::zero(); n];
            up[i] = Rat::one();
            rows.push(Halfspace::new(RatVec::new(up), hi.clone()));
            let mut down = vec![Rat::zero(); n];
            down[i] = Rat::from_int(-1);
            rows.push(Halfspace::new(RatVec::new(down), -lo));
        }
        rows
    }
}

// ---------------------------------------------------------------------------
// Double description on homogeneous cones {z : A z >= 0, E z = 0}
// ---------------------------------------------------------------------------

type IVec = Vec<BigInt>;

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: IVec) -> IVec {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// `alpha·u + beta·v`, normalized.
fn combine(alpha: &BigInt, u: &[BigInt], beta: &BigInt, v: &[BigInt]) -> IVec {
    normalize(u.iter().zip(v).map(|(x, y)| alpha * x + beta * y).collect())
}

#[derive(Clone)]
struct Ray {
    v: IVec,
    /// Indices of processed inequalities tight at this ray.
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut Vec<u64>, i: usize) {
    if bits.len() <= i / 64 {
        bits.resize(i / 64 + 1, 0);
    }
    bits[i / 64] |= 1 << (i % 64);
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().enumerate().all(|(i, x)| x & !b.get(i).copied().unwrap_or(0) == 0)
}

struct ConeGenerators {
    lineality: Vec<IVec>,
    rays: Vec<IVec>,
}

/// Generators of `{z ∈ R^dim : a·z >= 0 for a in ineqs, e·z = 0 for e in eqs}`:
/// a lineality basis plus one ray per extreme ray of the pointed part.
fn double_description(dim: usize, ineqs: &[IVec], eqs: &[IVec]) -> ConeGenerators {
    let mut lineality: Vec<IVec> =
        (0..dim).map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed = 0usize;

    let rows = eqs.iter().map(|e| (e, true)).chain(ineqs.iter().map(|a| (a, false)));
    for (a, is_eq) in rows {
        let tag = processed;
        if !is_eq {
            processed += 1;
        }
        if let Some(pos) = lineality.iter().position(|l| !idot(a, l).is_zero()) {
            let mut l = lineality.remove(pos);
            let mut al = idot(a, &l);
            if al.is_negative() {
                l = l.into_iter().map(|x| -x).collect();
                al = -al;
            }
            for other in lineality.iter_mut() {
                let ao = idot(a, other);
                if !ao.is_zero() {
                    *other = combine(&al, other, &-ao, &l);
                }
            }
            for r in rays.iter_mut() {
                let ar = idot(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&al, &r.v, &-ar, &l);
                }
                if !is_eq {
                    bit_set(&mut r.zeros, tag);
                }
            }
            if !is_eq {
                let mut zeros = Vec::new();
                for i in 0..tag {
                    bit_set(&mut zeros, i);
                }
                rays.push(Ray { v: l, zeros });
            }
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if values[i].is_zero() {
                let mut r = r.clone();
                if !is_eq {
                    bit_set(&mut r.zeros, tag);
                }
                next.push(r);
            } else if values[i].is_positive() && !is_eq {
                next.push(r.clone());
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = bits_and(&rays[p].zeros, &rays[q].zeros);
                let adjacent =
                    (0..rays.len()).filter(|&i| i != p && i != q).all(|i| !bits_subset(&common, &rays[i].zeros));
                if adjacent {
                    let v = combine(&values[p], &rays[q].v, &-&values[q], &rays[p].v);
                    let mut zeros = common;
                    if !is_eq {
                        bit_set(&mut zeros, tag);
                    }
                    next.push(Ray { v, zeros });
                }
            }
        }
        rays = next;
    }
    ConeGenerators { lineality, rays: rays.into_iter().map(|r| r.v).collect() }
}

fn to_ints(row: &[Rat]) -> IVec {
    primitive_integer(row)
}

fn to_rats(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_bigint(x.clone())).collect()
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(CopxError::SizeCap { what: "hull oracle", n, cap });
    }
    Ok(())
}

/// Scales `(a, b)` to a primitive integer row by a positive factor.
fn primitive_row(a: &[Rat], b: &Rat) -> Halfspace {
    let mut all: Vec<Rat> = a.to_vec();
    all.push(b.clone());
    let mut ints = to_rats(&primitive_integer(&all));
    let b = ints.pop().expect("row has a right-hand side");
    Halfspace::new(RatVec::new(ints), b)
}

/// Minimal H-description of `conv(v)`: equalities spanning the affine hull
/// (reduced echelon form) and one facet inequality per facet, each reduced
/// against the equalities' pivot columns and scaled to primitive integers.
pub fn vrep_to_hrep(v: &VRep, cap: usize) -> Result<HRep> {
    let n = v.dim().ok_or(CopxError::EmptyInput("vrep_to_hrep needs at least one vertex"))?;
    check_cap(n, cap)?;
    // valid inequalities a·x <= b form the cone {(b, a) : b - a·p >= 0}
    let rows: Vec<IVec> = v
        .vertices
        .iter()
        .map(|p| {
            let mut row = vec![Rat::one()];
            row.extend(p.iter().map(|x| -x));
            to_ints(&row)
        })
        .collect();
    let gens = double_description(n + 1, &rows, &[]);

    // equality rows laid out as [a | b] so pivots land on a-coordinates
    let eq_rows: Vec<Vec<Rat>> = gens
        .lineality
        .iter()
        .map(|z| {
            let mut row = to_rats(&z[1..]);
            row.push(Rat::from_bigint(z[0].clone()));
            row
        })
        .collect();
    let (eq_rref, pivots) = rref(&eq_rows);
    let equalities: Vec<Halfspace> = eq_rref.iter().map(|row| primitive_row(&row[..n], &row[n])).collect();

    let mut inequalities = BTreeSet::new();
    for z in &gens.rays {
        if z[1..].iter().all(Zero::is_zero) {
            continue;
        }
        let mut row = to_rats(&z[1..]);
        row.push(Rat::from_bigint(z[0].clone()));
        for (eq, &p) in eq_rref.iter().zip(&pivots) {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, e) in row.iter_mut().zip(eq) {
                    *x = &*x - &(&f * e);
                }
            }
        }
        inequalities.insert(primitive_row(&row[..n], &row[n]));
    }
    HRep::new(n, inequalities.into_iter().collect(), equalities)
}

/// Extreme points of `{x : h} ∩ box`. An infeasible system yields an empty
/// VRep; an unbounded one is an error naming a recession direction.
pub fn hrep_to_vrep(h: &HRep, bbox: Option<&BoxBounds>, cap: usize) -> Result<VRep> {
    let n = h.n;
    check_cap(n, cap)?;
    let mut ineq_rows: Vec<IVec> = Vec::new();
    let mut t_row = vec![Rat::zero(); n + 1];
    t_row[0] = Rat::one();
    ineq_rows.push(to_ints(&t_row));
    let homogenize = |row: &Halfspace| {
        let mut z = vec![row.b.clone()];
        z.extend(row.a.iter().map(|x| -x));
        to_ints(&z)
    };
    if let Some(b) = bbox {
        if b.0.len() != n {
            return Err(CopxError::DimensionMismatch { expected: n, found: b.0.len() });
        }
        ineq_rows.extend(b.rows().iter().map(homogenize));
    }
    ineq_rows.extend(h.inequalities.iter().map(homogenize));
    let eq_rows: Vec<IVec> = h.equalities.iter().map(homogenize).collect();
    let gens = double_description(n + 1, &ineq_rows, &eq_rows);

    let mut vertices = Vec::new();
    let mut recession: Option<&IVec> = gens.lineality.first();
    for z in &gens.rays {
        if z[0].is_positive() {
            let t = Rat::from_bigint(z[0].clone());
            vertices.push(RatVec::new(z[1..].iter().map(|x| Rat::from_bigint(x.clone()) / &t).collect()));
        } else if recession.is_none() {
            recession = Some(z);
        }
    }
    if vertices.is_empty() {
        return VRep::new(vec![]);
    }
    if let Some(ray) = recession {
        return Err(CopxError::Unbounded { ray: ray[1..].iter().map(ToString::to_string).collect() });
    }
    VRep::new(vertices)
}

/// The constraint system of a region cut from a lattice box:
/// `(anchor - e)·x = 0` and `(d - anchor)·x <= 0`.
pub fn region_hrep(lattice: &Lattice, anchor: &[i8], equal: &[Vec<i8>], dominated: &[Vec<i8>]) -> Result<HRep> {
    let n = lattice.n;
    let row = |p: &Vec<i8>, sign: i64| -> Result<RatVec> {
        if p.len() != n || anchor.len() != n {
            return Err(CopxError::DimensionMismatch { expected: n, found: p.len().min(anchor.len()) });
        }
        Ok(RatVec::from_ints(anchor.iter().zip(p).map(|(&a, &q)| sign * (a as i64 - q as i64))))
    };
    let equalities = equal.iter().map(|p| Ok(Halfspace::new(row(p, 1)?, Rat::zero()))).collect::<Result<_>>()?;
    let inequalities = dominated.iter().map(|p| Ok(Halfspace::new(row(p, -1)?, Rat::zero()))).collect::<Result<_>>()?;
    HRep::new(n, inequalities, equalities)
}

/// Vertices of the region given by explicit points, boxed by the lattice box.
pub fn region_vertices_from_points(
    lattice: &Lattice,
    anchor: &[i8],
    equal: &[Vec<i8>],
    dominated: &[Vec<i8>],
    cap: usize,
) -> Result<VRep> {
    let h = region_hrep(lattice, anchor, equal, dominated)?;
    hrep_to_vrep(&h, Some(&BoxBounds::of_lattice(lattice)), cap)
}

/// Vertices of `{x in box : x_k·x = x_j·x (j in equal_to), x_k·x >= x_l·x (l in dominating)}`.
pub fn region_vertices(
    inst: &Instance,
    lattice: &Lattice,
    anchor: usize,
    equal_to: &[usize],
    dominating: &Dominance,
    cap: usize,
) -> Result<VRep> {
    if lattice.n != inst.n() {
        return Err(CopxError::DimensionMismatch { expected: inst.n(), found: lattice.n });
    }
    inst.check_index(anchor)?;
    let point = |k: usize| -> Result<Vec<i8>> {
        inst.check_index(k)?;
        Ok(inst.vertex(k).iter().map(|&x| x as i8).collect())
    };
    let dominating: Vec<usize> = match dominating {
        Dominance::All => (0..inst.len()).collect(),
        Dominance::Only(list) => list.clone(),
    };
    let equal = equal_to.iter().map(|&j| point(j)).collect::<Result<Vec<_>>>()?;
    let dominated = dominating.iter().map(|&l| point(l)).collect::<Result<Vec<_>>>()?;
    region_vertices_from_points(lattice, &point(anchor)?, &equal, &dominated, cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FaceClass {
    Facet,
    /// Proper face of the given dimension, neither a facet nor a vertex.
    LowerFace(usize),
    VertexOnly,
    /// Some vertex violates the inequality.
    Invalid,
    /// Valid but no vertex attains it.
    NonTight,
    /// Every vertex is tight: an equality of the affine hull.
    Improper,
}

impl fmt::Display for FaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceClass::Facet => write!(f, "facet"),
            FaceClass::LowerFace(d) => write!(f, "lower_face({d})"),
            FaceClass::VertexOnly => write!(f, "vertex_only"),
            FaceClass::Invalid => write!(f, "invalid"),
            FaceClass::NonTight => write!(f, "non_tight"),
            FaceClass::Improper => write!(f, "improper"),
        }
    }
}

impl Serialize for FaceClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Tight vertex indices of `h·x <= l` over X, or `None` when some vertex violates it.
pub fn tight_vertices(inst: &Instance, h: &SignVector, l: &Rat) -> Option<Vec<usize>> {
    let mut tight = Vec::new();
    for (k, x) in inst.vertices().iter().enumerate() {
        let value = Rat::from_int(h.dot_binary(x));
        if &value > l {
            return None;
        }
        if &value == l {
            tight.push(k);
        }
    }
    Some(tight)
}

/// Classifies the face of conv(X) induced by `h·x <= l`.
pub fn face_classify(inst: &Instance, h: &SignVector, l: &Rat) -> Result<FaceClass> {
    if h.len() != inst.n() {
        return Err(CopxError::DimensionMismatch { expected: inst.n(), found: h.len() });
    }
    let Some(tight) = tight_vertices(inst, h, l) else {
        return Ok(FaceClass::Invalid);
    };
    if tight.is_empty() {
        return Ok(FaceClass::NonTight);
    }
    let all: Vec<RatVec> = (0..inst.len()).map(|k| inst.vertex_rat(k)).collect();
    let rank_x = affine_rank(&all)?;
    let tight_points: Vec<RatVec> = tight.iter().map(|&k| all[k].clone()).collect();
    let rank_t = affine_rank(&tight_points)?;
    Ok(if rank_t == rank_x {
        FaceClass::Improper
    } else if rank_t + 1 == rank_x {
        FaceClass::Facet
    } else if rank_t == 1 {
        FaceClass::VertexOnly
    } else {
        FaceClass::LowerFace(rank_t - 1)
    })
}

/// Tight vertex set of an oracle row over X (used to match faces independent
/// of the chosen normal representative).
pub fn tight_set(points: &[RatVec], row: &Halfspace) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if row.slack(p)?.is_zero() {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_family, triangle_trees, Family, GenLimits, Graph};
    use crate::rational::rank;

    const CAP: usize = DEFAULT_HULL_DIM_CAP;

    fn pts(list: &[&[i64]]) -> Vec<RatVec> {
        list.iter().map(|p| RatVec::from_ints(p.iter().copied())).collect()
    }

    fn cube_points(n: usize) -> Vec<Vec<u8>> {
        (0u32..1 << n).map(|m| (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect()).collect()
    }

    fn hs(a: &[i64], b: i64) -> Halfspace {
        Halfspace::new(RatVec::from_ints(a.iter().copied()), Rat::from_int(b))
    }

    #[test]
    fn triangle_hrep() {
        let v = VRep::from_binary(triangle_trees().vertices());
        let h = vrep_to_hrep(&v, CAP).unwrap();
        assert_eq!(h.equalities, vec![hs(&[1, 1, 1], 2)]);
        assert_eq!(h.inequalities.len(), 3);
        // every inequality is tight on exactly two vertices, each vertex misses one
        let mut missing = BTreeSet::new();
        for row in &h.inequalities {
            let tight = tight_set(&v.vertices, row).unwrap();
            assert_eq!(tight.len(), 2);
            missing.extend((0..3).filter(|i| !tight.contains(i)));
            for p in &v.vertices {
                assert!(!row.slack(p).unwrap().is_negative());
            }
        }
        assert_eq!(missing.len(), 3);
    }

    #[test]
    fn single_point_hrep() {
        let v = VRep::new(pts(&[&[1, 0, 1]])).unwrap();
        let h = vrep_to_hrep(&v, CAP).unwrap();
        assert!(h.inequalities.is_empty());
        assert_eq!(h.equalities, vec![hs(&[1, 0, 0], 1), hs(&[0, 1, 0], 0), hs(&[0, 0, 1], 1)]);
    }

    #[test]
    fn unit_square_hrep() {
        let v = VRep::from_binary(&cube_points(2));
        let h = vrep_to_hrep(&v, CAP).unwrap();
        assert!(h.equalities.is_empty());
        let expected: BTreeSet<Halfspace> =
            [hs(&[1, 0], 1), hs(&[0, 1], 1), hs(&[-1, 0], 0), hs(&[0, -1], 0)].into_iter().collect();
        assert_eq!(h.inequalities.into_iter().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn empty_vrep_rejected_and_cap_enforced() {
        assert!(matches!(vrep_to_hrep(&VRep::new(vec![]).unwrap(), CAP), Err(CopxError::EmptyInput(_))));
        let v = VRep::from_binary(&cube_points(3));
        assert!(matches!(vrep_to_hrep(&v, 2), Err(CopxError::SizeCap { .. })));
    }

    #[test]
    fn hrep_to_vrep_examples() {
        let h = HRep::new(3, vec![hs(&[1, 0, 0], 1), hs(&[0, 1, 0], 1), hs(&[0, 0, 1], 1)], vec![hs(&[1, 1, 1], 2)])
            .unwrap();
        let v = hrep_to_vrep(&h, Some(&BoxBounds::unit(3)), CAP).unwrap();
        assert_eq!(v, VRep::from_binary(triangle_trees().vertices()));

        let infeasible = HRep::new(1, vec![hs(&[1], -1), hs(&[-1], 0)], vec![]).unwrap();
        assert!(hrep_to_vrep(&infeasible, None, CAP).unwrap().is_empty());

        let square = HRep::new(2, BoxBounds::unit(2).rows(), vec![]).unwrap();
        assert_eq!(hrep_to_vrep(&square, None, CAP).unwrap().len(), 4);

        let half_line = HRep::new(2, vec![hs(&[-1, 0], 0), hs(&[0, 1], 0), hs(&[0, -1], 0)], vec![]).unwrap();
        match hrep_to_vrep(&half_line, None, CAP) {
            Err(CopxError::Unbounded { ray }) => assert_eq!(ray, vec!["1", "0"]),
            other => panic!("{other:?}"),
        }
        let line = HRep::new(2, vec![hs(&[0, 1], 0), hs(&[0, -1], 0)], vec![]).unwrap();
        assert!(matches!(hrep_to_vrep(&line, None, CAP), Err(CopxError::Unbounded { .. })));
        assert_eq!(hrep_to_vrep(&line, Some(&BoxBounds::unit(2)), CAP).unwrap().len(), 2);
    }

    #[test]
    fn vacuous_rows_dropped() {
        let h = HRep::new(2, vec![hs(&[0, 0], 3), hs(&[0, 0], -1)], vec![hs(&[0, 0], 0)]).unwrap();
        assert_eq!(h.inequalities, vec![hs(&[0, 0], -1)]);
        assert!(h.equalities.is_empty());
        assert!(hrep_to_vrep(&h, Some(&BoxBounds::unit(2)), CAP).unwrap().is_empty());
    }

    #[test]
    fn triangle_regions() {
        let inst = triangle_trees();
        let cube = Lattice::cube(3);
        let b = region_vertices(&inst, &cube, 0, &[2], &Dominance::Only(vec![]), CAP).unwrap();
        assert_eq!(b, VRep::from_binary(&[vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![1, 1, 1]]));
        let m = region_vertices(&inst, &cube, 0, &[], &Dominance::All, CAP).unwrap();
        assert_eq!(m, VRep::from_binary(&[vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]));
        let all = region_vertices(&inst, &cube, 0, &[], &Dominance::Only(vec![]), CAP).unwrap();
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn face_classes() {
        let inst = triangle_trees();
        let sv = |v: &[i8]| SignVector::new(v.to_vec()).unwrap();
        assert_eq!(face_classify(&inst, &sv(&[1, 1, 1]), &Rat::from_int(2)).unwrap(), FaceClass::Improper);
        assert_eq!(face_classify(&inst, &sv(&[0, 0, 1]), &Rat::one()).unwrap(), FaceClass::Facet);
        assert_eq!(face_classify(&inst, &sv(&[-1, 0, 0]), &Rat::zero()).unwrap(), FaceClass::VertexOnly);
        assert_eq!(face_classify(&inst, &sv(&[1, 0, 0]), &Rat::zero()).unwrap(), FaceClass::Invalid);
        assert_eq!(face_classify(&inst, &sv(&[1, 0, 0]), &Rat::from_int(3)).unwrap(), FaceClass::NonTight);

        let cube = Instance::from_vertices(cube_points(3), "cube").unwrap();
        assert_eq!(face_classify(&cube, &sv(&[1, 1, 0]), &Rat::from_int(2)).unwrap(), FaceClass::LowerFace(1));
        assert_eq!(face_classify(&cube, &sv(&[1, 1, 1]), &Rat::from_int(3)).unwrap(), FaceClass::VertexOnly);
    }

    fn k4_trees() -> Instance {
        gen_family(&Family::SpanningTrees(Graph::complete(4)), &GenLimits::default()).unwrap()
    }

    fn round_trip(points: Vec<RatVec>, bbox: Option<&BoxBounds>) {
        let v = VRep::new(points).unwrap();
        let h = vrep_to_hrep(&v, CAP).unwrap();
        assert_eq!(hrep_to_vrep(&h, bbox, CAP).unwrap(), v);
    }

    #[test]
    fn round_trips() {
        for n in 1..=5 {
            let v = VRep::from_binary(&cube_points(n));
            round_trip(v.vertices, None);
        }
        round_trip(VRep::from_binary(triangle_trees().vertices()).vertices, None);
        round_trip(VRep::from_binary(k4_trees().vertices()).vertices, Some(&BoxBounds::unit(6)));
        // cross-polytope section: ±e_i in the plane x3 = 0 plus an apex
        round_trip(pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1]]), None);
    }

    #[test]
    fn vertices_are_basic() {
        let inst = k4_trees();
        let h = vrep_to_hrep(&VRep::from_binary(inst.vertices()), CAP).unwrap();
        let eq_rows: Vec<Vec<Rat>> = h.equalities.iter().map(|r| r.a.entries().to_vec()).collect();
        let eq_rank = rank(&eq_rows);
        let v = hrep_to_vrep(&h, None, CAP).unwrap();
        for p in &v.vertices {
            let mut active = eq_rows.clone();
            let tight: Vec<&Halfspace> = h.inequalities.iter().filter(|r| r.slack(p).unwrap().is_zero()).collect();
            assert!(tight.len() >= inst.n() - eq_rank);
            active.extend(tight.iter().map(|r| r.a.entries().to_vec()));
            assert_eq!(rank(&active), inst.n());
        }
    }

    #[test]
    fn fractional_vertices_are_found() {
        // triangle with vertices (0,0), (1,0), (2/3,1/3)
        let h = HRep::new(2, vec![hs(&[1, 1], 1), hs(&[-1, 2], 0), hs(&[0, -1], 0)], vec![]).unwrap();
        let v = hrep_to_vrep(&h, None, CAP).unwrap();
        let two_thirds: Rat = "2/3".parse().unwrap();
        let third: Rat = "1/3".parse().unwrap();
        assert!(v.vertices.contains(&RatVec::new(vec![two_thirds, third])));
        assert_eq!(v.len(), 3);
    }
}
