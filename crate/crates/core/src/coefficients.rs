//! Exact coefficient arithmetic.
//!
//! All coefficient groups are written additively. The circle group `𝕋` is
//! `ℚ/ℤ` with canonical representatives in `[0, 1)`, so the multiplicative
//! `𝕋`-valued formulas elsewhere in the crate are the additive `ℚ/ℤ`
//! instances of the same expressions. `ℝ` coefficients are modelled by `ℚ`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoefficientError {
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// Which ring of scalars a complex is read over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientRing {
    /// `ℤ`
    Integer,
    /// `ℚ`
    Rational,
    /// `ℚ/ℤ`
    Circle,
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integer => write!(f, "Z"),
            CoefficientRing::Rational => write!(f, "Q"),
            CoefficientRing::Circle => write!(f, "QZ"),
        }
    }
}

/// An element of an additively written abelian group that knows how to
/// produce a zero of its own shape. `zero_like` exists because vector and
/// matrix values only know their rank at runtime.
pub trait GroupValue: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Integer multiple `k·self`.
    fn int_mul(&self, k: &BigInt) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

/// Scalar coefficients: `ℤ`, `ℚ` or `ℚ/ℤ`.
pub trait Scalar: GroupValue + Eq + Ord {
    fn zero() -> Self;
    /// The image of an integer under the canonical map `ℤ → A`.
    fn from_int(k: &BigInt) -> Self;
}

impl GroupValue for BigInt {
    fn zero_like(&self) -> Self {
        <BigInt as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn int_mul(&self, k: &BigInt) -> Self {
        self * k
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn from_int(k: &BigInt) -> Self {
        k.clone()
    }
}

impl GroupValue for BigRational {
    fn zero_like(&self) -> Self {
        <BigRational as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn int_mul(&self, k: &BigInt) -> Self {
        self * BigRational::from_integer(k.clone())
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn from_int(k: &BigInt) -> Self {
        BigRational::from_integer(k.clone())
    }
}

/// An element of `ℚ/ℤ`, stored as its canonical representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circle(BigRational);

impl Circle {
    /// Canonical reduction `ℚ → ℚ/ℤ`.
    pub fn from_rational(q: &BigRational) -> Self {
        Circle(q - q.floor())
    }

    pub fn from_parts(numer: i64, denom: i64) -> Self {
        Circle::from_rational(&BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// The `[0, 1)` representative.
    pub fn lift(&self) -> BigRational {
        self.0.clone()
    }

    // Inherent copies of the group operations, so callers that already have
    // `num_traits` in scope do not hit method ambiguity.

    pub fn zero() -> Self {
        Circle(<BigRational as Zero>::zero())
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Circle::from_rational(&(&self.0 + &rhs.0))
    }

    pub fn neg(&self) -> Self {
        Circle::from_rational(&(-&self.0))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn int_mul(&self, k: &BigInt) -> Self {
        Circle::from_rational(&(&self.0 * BigRational::from_integer(k.clone())))
    }
}

impl fmt::Debug for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 1", self.0)
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 1", self.0)
    }
}

impl GroupValue for Circle {
    fn zero_like(&self) -> Self {
        Circle(<BigRational as Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        Circle::from_rational(&(&self.0 + &rhs.0))
    }
    fn neg(&self) -> Self {
        Circle::from_rational(&(-&self.0))
    }
    fn int_mul(&self, k: &BigInt) -> Self {
        Circle::from_rational(&(&self.0 * BigRational::from_integer(k.clone())))
    }
}

impl Scalar for Circle {
    fn zero() -> Self {
        Circle(<BigRational as Zero>::zero())
    }
    fn from_int(_k: &BigInt) -> Self {
        Circle(<BigRational as Zero>::zero())
    }
}

/// Canonical representative of a rational modulo 1. This is the connecting
/// map `ℚ → ℚ/ℤ` of the coefficient sequence `0 → ℤ → ℚ → ℚ/ℤ → 0`.
pub fn circle_reduce(q: &BigRational) -> Circle {
    Circle::from_rational(q)
}

/// A length-`n` coefficient vector, `n` being the torus rank of the ambient
/// computation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorValue<S> {
    components: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for VectorValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.components.fmt(f)
    }
}

impl<S: Scalar> VectorValue<S> {
    pub fn new(components: Vec<S>) -> Self {
        VectorValue { components }
    }

    pub fn zeros(n: usize) -> Self {
        VectorValue {
            components: vec![S::zero(); n],
        }
    }

    /// The standard basis vector `e_l` (0-based).
    pub fn basis(n: usize, l: usize) -> Self {
        let mut v = Self::zeros(n);
        v.components[l] = S::from_int(&BigInt::from(1));
        v
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, l: usize) -> &S {
        &self.components[l]
    }

    pub fn components(&self) -> &[S] {
        &self.components
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> VectorValue<T> {
        VectorValue {
            components: self.components.iter().map(f).collect(),
        }
    }
}

impl VectorValue<BigInt> {
    pub fn from_i64(values: &[i64]) -> Self {
        VectorValue {
            components: values.iter().map(|v| BigInt::from(*v)).collect(),
        }
    }
}

impl<S: Scalar> GroupValue for VectorValue<S> {
    fn zero_like(&self) -> Self {
        VectorValue {
            components: self.components.iter().map(|c| c.zero_like()).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.components.iter().all(GroupValue::is_zero)
    }
    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.components.len(), rhs.components.len());
        VectorValue {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
    fn neg(&self) -> Self {
        VectorValue {
            components: self.components.iter().map(GroupValue::neg).collect(),
        }
    }
    fn int_mul(&self, k: &BigInt) -> Self {
        VectorValue {
            components: self.components.iter().map(|c| c.int_mul(k)).collect(),
        }
    }
}

/// A strictly upper triangular `n × n` matrix value; only the entries
/// `m_{ij}` with `i < j` are stored, row by row.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpperTriValue<S> {
    n: usize,
    entries: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for UpperTriValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "upper{}{:?}", self.n, self.entries)
    }
}

pub fn upper_tri_rank(n: usize) -> usize {
    n * (n - 1) / 2
}

impl<S: Scalar> UpperTriValue<S> {
    pub fn zeros(n: usize) -> Self {
        UpperTriValue {
            n,
            entries: vec![S::zero(); upper_tri_rank(n)],
        }
    }

    pub fn from_entries(n: usize, entries: Vec<S>) -> Self {
        assert_eq!(entries.len(), upper_tri_rank(n));
        UpperTriValue { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    fn index(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n, "invalid upper-triangular index");
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Entry `m_{ij}` with 0-based `i < j`.
    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.entries[self.index(i, j)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: S) {
        let idx = self.index(i, j);
        self.entries[idx] = value;
    }

    pub fn flat(&self) -> &[S] {
        &self.entries
    }

    pub fn flat_entry(&self, r: usize) -> &S {
        &self.entries[r]
    }

    /// Iterate `(i, j, value)` over stored positions.
    pub fn iter_pairs(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.entries.iter())
            .map(|((i, j), v)| (i, j, v))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> UpperTriValue<T> {
        UpperTriValue {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl<S: Scalar> GroupValue for UpperTriValue<S> {
    fn zero_like(&self) -> Self {
        UpperTriValue {
            n: self.n,
            entries: self.entries.iter().map(|c| c.zero_like()).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupValue::is_zero)
    }
    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        UpperTriValue {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
    fn neg(&self) -> Self {
        UpperTriValue {
            n: self.n,
            entries: self.entries.iter().map(GroupValue::neg).collect(),
        }
    }
    fn int_mul(&self, k: &BigInt) -> Self {
        UpperTriValue {
            n: self.n,
            entries: self.entries.iter().map(|c| c.int_mul(k)).collect(),
        }
    }
}

/// The pairing `⟨φ, F⟩ = Σ_l φ_l · F_l` of an `A`-valued vector against an
/// integer vector.
pub fn pair_vector<S: Scalar>(
    phi: &VectorValue<S>,
    f: &VectorValue<BigInt>,
) -> Result<S, CoefficientError> {
    if phi.n() != f.n() {
        return Err(CoefficientError::LengthMismatch {
            left: phi.n(),
            right: f.n(),
        });
    }
    let mut acc = S::zero();
    for (p, k) in phi.components().iter().zip(f.components()) {
        acc = acc.add(&p.int_mul(k));
    }
    Ok(acc)
}

/// The Mackey pairing `Σ_{i<j} m_{ij} · u_i · v_j`.
pub fn mackey_bilinear<S: Scalar>(
    m: &UpperTriValue<S>,
    u: &VectorValue<BigInt>,
    v: &VectorValue<BigInt>,
) -> Result<S, CoefficientError> {
    if u.n() != m.n() || v.n() != m.n() {
        return Err(CoefficientError::LengthMismatch {
            left: u.n().max(v.n()),
            right: m.n(),
        });
    }
    let mut acc = S::zero();
    for (i, j, mij) in m.iter_pairs() {
        let coeff = u.component(i) * v.component(j);
        acc = acc.add(&mij.int_mul(&coeff));
    }
    Ok(acc)
}

/// Antisymmetrised Mackey pairing `Σ_{i<j} m_{ij} (u_i v_j − v_i u_j)`.
pub fn mackey_antisym<S: Scalar>(
    m: &UpperTriValue<S>,
    u: &VectorValue<BigInt>,
    v: &VectorValue<BigInt>,
) -> Result<S, CoefficientError> {
    let uv = mackey_bilinear(m, u, v)?;
    let vu = mackey_bilinear(m, v, u)?;
    Ok(uv.sub(&vu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn circle_reduce_canonicalizes() {
        assert_eq!(circle_reduce(&rat(7, 2)), Circle::from_parts(1, 2));
        assert_eq!(circle_reduce(&rat(-1, 3)), Circle::from_parts(2, 3));
        assert_eq!(circle_reduce(&rat(4, 1)), Circle::zero());
        assert!(circle_reduce(&rat(4, 1)).is_zero());
    }

    #[test]
    fn pair_vector_matches_hand_values() {
        // (1/2, 0) paired with (2, 3) wraps around to zero mod 1.
        let phi = VectorValue::new(vec![Circle::from_parts(1, 2), Circle::zero()]);
        let f = VectorValue::from_i64(&[2, 3]);
        assert!(pair_vector(&phi, &f).unwrap().is_zero());

        let phi = VectorValue::new(vec![Circle::from_parts(1, 2), Circle::from_parts(1, 3)]);
        let f = VectorValue::from_i64(&[1, 1]);
        assert_eq!(pair_vector(&phi, &f).unwrap(), Circle::from_parts(5, 6));

        let zero_f = VectorValue::from_i64(&[0, 0]);
        assert!(pair_vector(&phi, &zero_f).unwrap().is_zero());
    }

    #[test]
    fn pair_vector_rejects_length_mismatch() {
        let phi: VectorValue<BigInt> = VectorValue::from_i64(&[1, 2]);
        let f = VectorValue::from_i64(&[1]);
        assert!(matches!(
            pair_vector(&phi, &f),
            Err(CoefficientError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mackey_bilinear_single_term() {
        let mut m = UpperTriValue::zeros(2);
        m.set_entry(0, 1, Circle::from_parts(1, 2));
        let e1 = VectorValue::from_i64(&[1, 0]);
        let e2 = VectorValue::from_i64(&[0, 1]);
        assert_eq!(
            mackey_bilinear(&m, &e1, &e2).unwrap(),
            Circle::from_parts(1, 2)
        );
        // No i < j term pairs e2 against e1.
        assert!(mackey_bilinear(&m, &e2, &e1).unwrap().is_zero());

        let e1_doubled = VectorValue::from_i64(&[2, 0]);
        assert_eq!(
            mackey_bilinear(&m, &e1_doubled, &e2).unwrap(),
            mackey_bilinear(&m, &e1, &e2)
                .unwrap()
                .add(&mackey_bilinear(&m, &e1, &e2).unwrap())
        );
    }

    #[test]
    fn upper_tri_indexing_round_trips() {
        let mut m: UpperTriValue<BigInt> = UpperTriValue::zeros(4);
        let mut c = 0i64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                m.set_entry(i, j, BigInt::from(c));
                c += 1;
            }
        }
        let collected: Vec<(usize, usize, i64)> = m
            .iter_pairs()
            .map(|(i, j, v)| (i, j, i64::try_from(v).unwrap()))
            .collect();
        assert_eq!(
            collected,
            vec![
                (0, 1, 0),
                (0, 2, 1),
                (0, 3, 2),
                (1, 2, 3),
                (1, 3, 4),
                (2, 3, 5)
            ]
        );
    }

    proptest! {
        #[test]
        fn circle_reduce_identifies_integer_differences(n1 in -40i64..40, d1 in 1i64..12, shift in -5i64..5) {
            let a = rat(n1, d1);
            let b = &a + BigRational::from_integer(BigInt::from(shift));
            prop_assert_eq!(circle_reduce(&a) == circle_reduce(&b), true);
            let off = &a + rat(1, 7);
            prop_assert_eq!(circle_reduce(&a) == circle_reduce(&off), false);
        }

        #[test]
        fn pairings_are_biadditive(
            u in proptest::collection::vec(-6i64..6, 3),
            u2 in proptest::collection::vec(-6i64..6, 3),
            v in proptest::collection::vec(-6i64..6, 3),
            m in proptest::collection::vec((-9i64..9, 1i64..9), 3),
        ) {
            let mval = UpperTriValue::from_entries(
                3,
                m.iter().map(|(n, d)| Circle::from_parts(*n, *d)).collect(),
            );
            let uv = VectorValue::from_i64(&u);
            let u2v = VectorValue::from_i64(&u2);
            let vv = VectorValue::from_i64(&v);
            let sum = VectorValue::from_i64(
                &u.iter().zip(&u2).map(|(a, b)| a + b).collect::<Vec<_>>(),
            );
            let lhs = mackey_bilinear(&mval, &sum, &vv).unwrap();
            let rhs = mackey_bilinear(&mval, &uv, &vv)
                .unwrap()
                .add(&mackey_bilinear(&mval, &u2v, &vv).unwrap());
            prop_assert_eq!(lhs, rhs);

            let anti = mackey_antisym(&mval, &uv, &vv).unwrap();
            let anti_flip = mackey_antisym(&mval, &vv, &uv).unwrap();
            prop_assert_eq!(anti.neg(), anti_flip);
        }
    }
}
