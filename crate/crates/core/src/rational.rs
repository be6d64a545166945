//! Exact rational scalars and vectors.
//!
//! [`Rat`] wraps an arbitrary-precision fraction that is always stored in
//! lowest terms with a positive denominator, so structural equality and
//! hashing agree with numeric equality. Text form is `p` or `p/q`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CopxError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Rat(BigRational::from_integer(v))
    }

    /// Builds `num/den`; fails when `den` is zero.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::from_parts(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_parts(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(CopxError::ParseRational { text: format!("{num}/{den}"), reason: "zero denominator".into() });
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    /// Integer value when the denominator is one and it fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn mul_int(&self, k: i64) -> Rat {
        match k {
            0 => Rat::zero(),
            1 => self.clone(),
            -1 => -self.clone(),
            _ => Rat(&self.0 * BigRational::from_integer(BigInt::from(k))),
        }
    }

    /// Debug-build check of the canonical-form invariant.
    fn checked(self) -> Self {
        debug_assert!(self.0.denom().is_positive());
        debug_assert!(self.0.numer().gcd(self.0.denom()).is_one());
        self
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_integer(text: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match text.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => text,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Parses `p`, `-p` or `p/q` with `q` a positive integer.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let bad = |reason: &str| CopxError::ParseRational { text: text.to_string(), reason: reason.to_string() };
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (
            parse_integer(p, true).ok_or_else(|| bad("malformed numerator"))?,
            parse_integer(q, false).ok_or_else(|| bad("malformed denominator"))?,
        ),
        None => (parse_integer(text, true).ok_or_else(|| bad("malformed integer"))?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat(BigRational::new(num, den)).checked())
}

impl FromStr for Rat {
    type Err = CopxError;

    fn from_str(s: &str) -> Result<Self> {
        parse_rat(s)
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::from_int(v)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rat(&text).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0)).checked()
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0)).checked()
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0)).checked()
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0)).checked()
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// A dense vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVec(Vec<Rat>);

impl RatVec {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVec(entries)
    }

    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Rat::zero(); n])
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(values: I) -> Self {
        RatVec(values.into_iter().map(Rat::from_int).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RatVec) -> Result<Rat> {
        dot(self, other)
    }

    /// Inner product with an integer vector (sign vectors, incidence vectors).
    pub fn dot_int<T: Copy + Into<i64>>(&self, other: &[T]) -> Result<Rat> {
        check_dims(self.len(), other.len())?;
        let mut acc = Rat::zero();
        for (x, &k) in self.0.iter().zip(other) {
            match k.into() {
                0 => {}
                1 => acc += x,
                -1 => acc -= x,
                k => acc += &x.mul_int(k),
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, factor: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn add(&self, other: &RatVec) -> Result<RatVec> {
        check_dims(self.len(), other.len())?;
        Ok(RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &RatVec) -> Result<RatVec> {
        check_dims(self.len(), other.len())?;
        Ok(RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn neg(&self) -> RatVec {
        RatVec(self.0.iter().map(|x| -x).collect())
    }
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl From<Vec<Rat>> for RatVec {
    fn from(v: Vec<Rat>) -> Self {
        RatVec(v)
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(CopxError::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub fn dot(u: &RatVec, v: &RatVec) -> Result<Rat> {
    check_dims(u.len(), v.len())?;
    Ok(u.0.iter().zip(&v.0).map(|(a, b)| a * b).sum())
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(rows).1.len()
}

/// Number of affinely independent points among `points`.
pub fn affine_rank(points: &[RatVec]) -> Result<usize> {
    let first = points.first().ok_or(CopxError::EmptyInput("affine_rank needs a point"))?;
    let mut diffs = Vec::with_capacity(points.len().saturating_sub(1));
    for p in &points[1..] {
        diffs.push(p.sub(first)?.into_entries());
    }
    Ok(rank(&diffs) + 1)
}

/// Scales a rational vector by a positive factor into a primitive integer vector.
/// The zero vector maps to zeros.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rat {
        parse_rat(s).unwrap()
    }

    fn rv(items: &[&str]) -> RatVec {
        RatVec::new(items.iter().map(|s| r(s)).collect())
    }

    #[test]
    fn parse_canonicalizes() {
        assert_eq!(r("2/4"), Rat::new(1, 2).unwrap());
        assert_eq!(r("2/4").to_string(), "1/2");
        assert_eq!(r("-1").to_string(), "-1");
        assert_eq!(r("-1").denom(), &BigInt::one());
        assert_eq!(r("7/3").to_string(), "7/3");
        assert_eq!(r("3/6"), r("1/2"));
        assert_eq!(r("0/5").to_string(), "0");
        assert_eq!(r("-6/4").to_string(), "-3/2");
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["", "1/0", "a", "1/", "/2", "1/-2", "--1", "1.5", " 1", "+1", "1/2/3"] {
            assert!(parse_rat(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&RatVec::from_ints([0, 1, 1]), &RatVec::from_ints([1, 1, 1])).unwrap(), Rat::from_int(2));
        assert!(dot(&rv(&["3", "-5/7"]), &RatVec::zeros(2)).unwrap().is_zero());
        assert!(dot(&rv(&["1/2", "-1/3"]), &RatVec::from_ints([2, 3])).unwrap().is_zero());
        assert!(matches!(
            dot(&RatVec::zeros(2), &RatVec::zeros(3)),
            Err(CopxError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn affine_rank_examples() {
        let tri = [RatVec::from_ints([0, 1, 1]), RatVec::from_ints([1, 0, 1]), RatVec::from_ints([1, 1, 0])];
        assert_eq!(affine_rank(&tri).unwrap(), 3);
        assert_eq!(affine_rank(&[rv(&["1/2", "3"])]).unwrap(), 1);
        let line = [RatVec::from_ints([0, 0]), RatVec::from_ints([1, 1]), RatVec::from_ints([2, 2])];
        assert_eq!(affine_rank(&line).unwrap(), 2);
        assert!(matches!(affine_rank(&[]), Err(CopxError::EmptyInput(_))));
    }

    #[test]
    fn primitive_integer_scaling() {
        let v = primitive_integer(&[r("1/2"), r("-1/3"), r("0")]);
        assert_eq!(v, vec![BigInt::from(3), BigInt::from(-2), BigInt::zero()]);
        let v = primitive_integer(&[r("4"), r("6")]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(3)]);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-50i64..=50, 1i64..=20).prop_map(|(p, q)| Rat::new(p, q).unwrap())
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = RatVec> {
        prop::collection::vec(arb_rat(), n).prop_map(RatVec::new)
    }

    proptest! {
        #[test]
        fn arithmetic_stays_canonical(a in arb_rat(), b in arb_rat()) {
            for x in [&a + &b, &a - &b, &a * &b] {
                prop_assert!(x.denom() > &BigInt::zero());
                prop_assert!(x.numer().gcd(x.denom()).is_one());
            }
            prop_assert_eq!(parse_rat(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn dot_is_bilinear(a in arb_rat(), b in arb_rat(), u in arb_vec(4), w in arb_vec(4), v in arb_vec(4)) {
            let lhs = dot(&u.scale(&a).add(&w.scale(&b)).unwrap(), &v).unwrap();
            let rhs = &a * dot(&u, &v).unwrap() + &b * dot(&w, &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn affine_rank_translation_and_permutation_invariant(
            pts in prop::collection::vec(arb_vec(3), 1..6),
            shift in arb_vec(3),
            rot in 0usize..6,
        ) {
            let base = affine_rank(&pts).unwrap();
            let moved: Vec<RatVec> = pts.iter().map(|p| p.add(&shift).unwrap()).collect();
            prop_assert_eq!(affine_rank(&moved).unwrap(), base);
            let mut perm = pts.clone();
            let len = perm.len();
            perm.rotate_left(rot % len);
            perm.reverse();
            prop_assert_eq!(affine_rank(&perm).unwrap(), base);
        }
    }
}
