//! Cone membership with certificates.
//!
//! Membership of `t` in `cone(G)` is decided by a phase-one simplex on
//! `G·γ = t, γ >= 0` in exact arithmetic, with steepest pricing until the
//! first degenerate pivot and Bland's rule after it. A feasible terminal
//! basis yields the decomposition coefficients; an infeasible one yields a
//! separating vector `y` (`y·g <= 0` for every generator, `y·t > 0`) read
//! off the terminal duals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CopxError, Result};
use crate::lattice::{GeneratorSet, SignVector};
use crate::rational::{primitive_integer, rref, Rat, RatVec};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeCertificate {
    /// Generator index → coefficient; only nonzero coefficients are stored.
    pub gamma: BTreeMap<usize, Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub y: RatVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Membership {
    Cone(ConeCertificate),
    Farkas(FarkasCertificate),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Cone(_))
    }

    pub fn verify(&self, gens: &[SignVector], target: &RatVec) -> bool {
        match self {
            Membership::Cone(c) => c.verify(gens, target),
            Membership::Farkas(f) => f.verify(gens, target),
        }
    }
}

impl ConeCertificate {
    /// Recomputes `Σ γ_i g_i` and compares with the target exactly.
    pub fn verify(&self, gens: &[SignVector], target: &RatVec) -> bool {
        let n = target.len();
        let mut acc = vec![Rat::zero(); n];
        for (&i, g) in &self.gamma {
            if g.is_negative() || i >= gens.len() || gens[i].len() != n {
                return false;
            }
            for (a, &h) in acc.iter_mut().zip(gens[i].entries()) {
                match h {
                    1 => *a += g,
                    -1 => *a -= g,
                    _ => {}
                }
            }
        }
        acc.as_slice() == target.entries()
    }
}

impl FarkasCertificate {
    pub fn verify(&self, gens: &[SignVector], target: &RatVec) -> bool {
        if self.y.len() != target.len() {
            return false;
        }
        let n = target.len();
        if !matches!(self.y.dot(target), Ok(v) if v.is_positive()) || gens.iter().any(|g| g.len() != n) {
            return false;
        }
        // a positive integer multiple of y has the same signs against every g
        let scaled = primitive_integer(self.y.entries());
        let bound = i64::MAX / (n as i64 + 1);
        let small: Option<Vec<i64>> = scaled.iter().map(|v| v.to_i64().filter(|x| x.abs() <= bound)).collect();
        match small {
            Some(y) => gens.iter().all(|g| g.entries().iter().zip(&y).map(|(&a, &b)| a as i64 * b).sum::<i64>() <= 0),
            None => gens.iter().all(|g| {
                let dot: BigInt = g.entries().iter().zip(&scaled).map(|(&a, b)| b * BigInt::from(a)).sum();
                !dot.is_positive()
            }),
        }
    }
}

enum PhaseOne {
    Feasible(BTreeMap<usize, Rat>),
    Infeasible(Vec<Rat>),
}

/// Column-major {-1,0,1} matrix, contiguous for fast pricing.
struct Columns {
    data: Vec<i8>,
    m: usize,
    len: usize,
}

impl Columns {
    fn new(cols: &[&[i8]], m: usize) -> Self {
        let mut data = Vec::with_capacity(cols.len() * m);
        for c in cols {
            data.extend_from_slice(c);
        }
        Columns { data, m, len: cols.len() }
    }

    fn col(&self, j: usize) -> &[i8] {
        &self.data[j * self.m..(j + 1) * self.m]
    }
}

/// Entering column among `0..len` given each column's reduced value (an
/// improving column has a positive value): with `bland` the lowest such
/// index, otherwise the largest value with the lowest index on ties.
fn select<T: Ord>(len: usize, bland: bool, zero: T, value: impl Fn(usize) -> T) -> Option<usize> {
    if bland {
        return (0..len).find(|&j| value(j) > zero);
    }
    let mut best: Option<(T, usize)> = None;
    for j in 0..len {
        let v = value(j);
        if v > zero && best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, j));
        }
    }
    best.map(|(_, j)| j)
}

fn price_rational(cols: &Columns, signed_w: &[Rat], bland: bool) -> Option<usize> {
    select(cols.len, bland, Rat::zero(), |j| {
        let mut acc = Rat::zero();
        for (&a, x) in cols.col(j).iter().zip(signed_w) {
            match a {
                1 => acc += x,
                -1 => acc -= x,
                _ => {}
            }
        }
        acc
    })
}

fn price_integer(cols: &Columns, signed_w: &[i64], bland: bool) -> Option<usize> {
    select(cols.len, bland, 0i64, |j| cols.col(j).iter().zip(signed_w).map(|(&a, &x)| a as i64 * x).sum())
}

/// Fraction-free variant of [`phase_one_rational`] with identical pivoting.
///
/// The right-hand side is scaled to a primitive integer vector `t`, and the
/// basis inverse is kept as `A / d` with `d = |det B|`, so `A` is an integer
/// (signed) adjugate and every update divides exactly. Basic values are kept
/// as numerators over `d`. Returns `None` when an `i128` would overflow.
fn phase_one_integer(cols: &Columns, rhs: &[Rat]) -> Option<PhaseOne> {
    let m = rhs.len();
    let p = cols.len;
    let t = primitive_integer(rhs);
    // rhs = t / scale
    let scale = t
        .iter()
        .zip(rhs)
        .find(|(_, r)| !r.is_zero())
        .map(|(ti, r)| Rat::from_bigint(ti.clone()) / r)
        .unwrap_or_else(Rat::one);
    let sign: Vec<i64> = t.iter().map(|x| if x.is_negative() { -1 } else { 1 }).collect();
    let mut beta: Vec<BigInt> = t.iter().map(|x| x.abs()).collect();
    let mut basic: Vec<usize> = (p..p + m).collect();
    let mut inv: Vec<Vec<i128>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i128).collect()).collect();
    let mut det: i128 = 1;
    let mut bland = false;
    let bound = (i64::MAX / (m as i64 + 1)) as i128;

    loop {
        if (0..m).all(|i| basic[i] < p || beta[i].is_zero()) {
            let denom = Rat::from_bigint(BigInt::from(det)) * &scale;
            let gamma = (0..m)
                .filter(|&i| basic[i] < p && !beta[i].is_zero())
                .map(|i| (basic[i], Rat::from_bigint(beta[i].clone()) / &denom))
                .collect();
            return Some(PhaseOne::Feasible(gamma));
        }

        let mut w = vec![0i128; m];
        for i in (0..m).filter(|&i| basic[i] >= p) {
            for (wr, &x) in w.iter_mut().zip(&inv[i]) {
                *wr = wr.checked_add(x)?;
            }
        }
        let mut signed_w = Vec::with_capacity(m);
        for (x, &s) in w.iter().zip(&sign) {
            if x.abs() > bound {
                return None;
            }
            signed_w.push(*x as i64 * s);
        }

        let Some(j) = price_integer(cols, &signed_w, bland) else {
            let y: Vec<Rat> = signed_w.iter().map(|&x| Rat::from_int(x)).collect();
            return Some(PhaseOne::Infeasible(primitive_integer(&y).into_iter().map(Rat::from_bigint).collect()));
        };

        let col: Vec<i128> = cols.col(j).iter().zip(&sign).map(|(&a, &s)| (a as i64 * s) as i128).collect();
        let mut u = Vec::with_capacity(m);
        for row in &inv {
            let mut acc: i128 = 0;
            for (&b, &a) in row.iter().zip(&col) {
                acc = acc.checked_add(b.checked_mul(a)?)?;
            }
            u.push(acc);
        }

        let mut leave: Option<usize> = None;
        for i in (0..m).filter(|&i| u[i] > 0) {
            let better = match leave {
                None => true,
                Some(r) => {
                    let lhs = &beta[i] * BigInt::from(u[r]);
                    let rhs = &beta[r] * BigInt::from(u[i]);
                    lhs < rhs || (lhs == rhs && basic[i] < basic[r])
                }
            };
            if better {
                leave = Some(i);
            }
        }
        let r = leave.expect("phase one is bounded below, an improving column has a positive entry");
        if beta[r].is_zero() {
            bland = true;
        }

        let pivot = u[r];
        let pivot_row = inv[r].clone();
        let pivot_beta = beta[r].clone();
        let big_det = BigInt::from(det);
        let big_pivot = BigInt::from(pivot);
        for i in (0..m).filter(|&i| i != r) {
            for (x, &pr) in inv[i].iter_mut().zip(&pivot_row) {
                let num = x.checked_mul(pivot)?.checked_sub(u[i].checked_mul(pr)?)?;
                debug_assert_eq!(num % det, 0);
                *x = num / det;
            }
            let num = &beta[i] * &big_pivot - BigInt::from(u[i]) * &pivot_beta;
            debug_assert!((&num % &big_det).is_zero());
            beta[i] = num / &big_det;
        }
        det = pivot;
        basic[r] = j;
    }
}

/// Phase-one revised simplex over columns `D·a_j`, `D = diag(sign(rhs))`,
/// started from the all-artificial basis. Artificial columns never re-enter.
///
/// Pricing takes the steepest column until the first degenerate pivot and
/// Bland's rule from then on. The objective strictly decreases before the
/// switch, so no basis repeats there, and Bland's rule cannot cycle after it.
fn phase_one_rational(cols: &Columns, rhs: &[Rat]) -> PhaseOne {
    let m = rhs.len();
    let p = cols.len;
    let sign: Vec<i64> = rhs.iter().map(|r| if r.is_negative() { -1 } else { 1 }).collect();
    let mut beta: Vec<Rat> = rhs.iter().map(Rat::abs).collect();
    let mut basic: Vec<usize> = (p..p + m).collect();
    let mut binv: Vec<Vec<Rat>> =
        (0..m).map(|i| (0..m).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    let mut bland = false;

    loop {
        let objective: Rat = (0..m).filter(|&i| basic[i] >= p).map(|i| beta[i].clone()).sum();
        if objective.is_zero() {
            let gamma =
                (0..m).filter(|&i| basic[i] < p && !beta[i].is_zero()).map(|i| (basic[i], beta[i].clone())).collect();
            return PhaseOne::Feasible(gamma);
        }

        // duals w = c_B^T B^{-1}; the phase-one cost is 1 on artificials
        let mut w = vec![Rat::zero(); m];
        for i in (0..m).filter(|&i| basic[i] >= p) {
            for (wr, b) in w.iter_mut().zip(&binv[i]) {
                *wr += b;
            }
        }
        let signed_w: Vec<Rat> = w.iter().zip(&sign).map(|(x, &s)| x.mul_int(s)).collect();

        // improving columns have negative reduced cost, i.e. signed_w · a_j > 0
        let Some(j) = price_rational(cols, &signed_w, bland) else {
            return PhaseOne::Infeasible(signed_w);
        };

        let col: Vec<i64> = cols.col(j).iter().zip(&sign).map(|(&a, &s)| a as i64 * s).collect();
        let u: Vec<Rat> = binv
            .iter()
            .map(|row| {
                let mut acc = Rat::zero();
                for (b, &a) in row.iter().zip(&col) {
                    match a {
                        0 => {}
                        1 => acc += b,
                        -1 => acc -= b,
                        _ => acc += &b.mul_int(a),
                    }
                }
                acc
            })
            .collect();

        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if !u[i].is_positive() {
                continue;
            }
            let ratio = &beta[i] / &u[i];
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basic[i] < basic[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (r, ratio) = leave.expect("phase one is bounded below, an improving column has a positive entry");
        if ratio.is_zero() {
            bland = true;
        }

        let pivot = u[r].clone();
        let inv = pivot.recip();
        for x in binv[r].iter_mut() {
            *x = &*x * &inv;
        }
        beta[r] = &beta[r] * &inv;
        let pivot_row = binv[r].clone();
        let pivot_beta = beta[r].clone();
        for i in 0..m {
            if i == r || u[i].is_zero() {
                continue;
            }
            for (x, pr) in binv[i].iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *x = &*x - &(&u[i] * pr);
                }
            }
            beta[i] = &beta[i] - &(&u[i] * &pivot_beta);
        }
        basic[r] = j;
    }
}

fn check_dims(gens: &[SignVector], target: &RatVec) -> Result<()> {
    if let Some(g) = gens.iter().find(|g| g.len() != target.len()) {
        return Err(CopxError::DimensionMismatch { expected: target.len(), found: g.len() });
    }
    Ok(())
}

fn member_of(cols: &[&[i8]], target: &RatVec) -> Membership {
    if cols.is_empty() {
        if target.is_zero() {
            return Membership::Cone(ConeCertificate { gamma: BTreeMap::new() });
        }
        return Membership::Farkas(FarkasCertificate { y: target.clone() });
    }
    let columns = Columns::new(cols, target.len());
    let outcome =
        phase_one_integer(&columns, target.entries()).unwrap_or_else(|| phase_one_rational(&columns, target.entries()));
    match outcome {
        PhaseOne::Feasible(gamma) => Membership::Cone(ConeCertificate { gamma }),
        PhaseOne::Infeasible(y) => Membership::Farkas(FarkasCertificate { y: RatVec::new(y) }),
    }
}

/// Decides `target ∈ cone(gens)`, returning a certificate either way.
pub fn cone_member(gens: &[SignVector], target: &RatVec) -> Result<Membership> {
    check_dims(gens, target)?;
    let cols: Vec<&[i8]> = gens.iter().map(SignVector::entries).collect();
    Ok(member_of(&cols, target))
}

fn member_without(gens: &[SignVector], skip: usize, target: &RatVec) -> bool {
    let cols: Vec<&[i8]> = gens.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, g)| g.entries()).collect();
    member_of(&cols, target).is_member()
}

/// True iff `target` leaves `cone(gens)` once generator `index` is removed.
pub fn requires_generator(gens: &[SignVector], target: &RatVec, index: usize) -> Result<bool> {
    check_dims(gens, target)?;
    if index >= gens.len() {
        return Err(CopxError::InvalidParams(format!("generator index {index} out of range")));
    }
    if !cone_member(gens, target)?.is_member() {
        return Err(CopxError::Precondition("target is not in the cone of the full generator set".into()));
    }
    Ok(!member_without(gens, index, target))
}

/// Indices `i` with `g_i ∉ cone(G \ {g_i})`, each tested against the
/// original set independently.
pub fn elementwise_minimal_indices(gens: &[SignVector]) -> Vec<usize> {
    (0..gens.len()).into_par_iter().filter(|&i| !member_without(gens, i, &gens[i].to_rat())).collect()
}

/// Greedy single pass in lexicographic member order: a generator is dropped
/// when it lies in the cone of the generators still kept. The survivors
/// generate the same cone and none of them can be dropped.
pub fn irreducible_subset_indices(gens: &[SignVector]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by(|&a, &b| gens[a].cmp(&gens[b]));
    let mut alive = vec![true; gens.len()];
    for &i in &order {
        let cols: Vec<&[i8]> = (0..gens.len()).filter(|&j| j != i && alive[j]).map(|j| gens[j].entries()).collect();
        if member_of(&cols, &gens[i].to_rat()).is_member() {
            alive[i] = false;
        }
    }
    (0..gens.len()).filter(|&i| alive[i]).collect()
}

pub fn elementwise_minimal(set: &GeneratorSet) -> GeneratorSet {
    set.restricted(&elementwise_minimal_indices(&set.members))
}

pub fn irreducible_subset(set: &GeneratorSet) -> GeneratorSet {
    set.restricted(&irreducible_subset_indices(&set.members))
}

/// Basis (reduced echelon form, primitive integer rows) of the largest
/// subspace contained in `cone(gens)`. Uses the fact that this subspace is
/// spanned by the generators whose negation also lies in the cone.
pub fn lineality_basis(gens: &[SignVector]) -> Vec<RatVec> {
    let cols: Vec<&[i8]> = gens.iter().map(SignVector::entries).collect();
    let in_lineality: Vec<Vec<Rat>> = gens
        .par_iter()
        .filter(|g| member_of(&cols, &g.negated().to_rat()).is_member())
        .map(|g| g.to_rat().into_entries())
        .collect();
    let (rows, _) = rref(&in_lineality);
    rows.iter().map(|row| RatVec::new(primitive_integer(row).into_iter().map(Rat::from_bigint).collect())).collect()
}

/// Checks `cone(a) ⊇ cone(b)` by testing every generator of `b`; returns the
/// first generator of `b` outside `cone(a)` together with its separator.
pub fn first_uncovered(a: &[SignVector], b: &[SignVector]) -> Option<(SignVector, FarkasCertificate)> {
    let cols: Vec<&[i8]> = a.iter().map(SignVector::entries).collect();
    b.iter().find_map(|g| match member_of(&cols, &g.to_rat()) {
        Membership::Farkas(f) => Some((g.clone(), f)),
        Membership::Cone(_) => None,
    })
}
