//! The three-column twisted complex `C•_F` with differential `D_F`, and its
//! two-column variant.
//!
//! A degree-`k` cochain is a triple: a scalar `k`-cochain (column 0), a
//! vector-valued `(k−1)`-cochain (column 1, absent below degree 1), and an
//! upper-triangular-valued `(k−2)`-cochain (column 2, absent below degree
//! 2). The differential is
//!
//! ```text
//! D_F(φ⁰, φ¹, φ²) = ( ∂̌φ⁰ + (−1)^{k+1} φ¹ ∪₁ F + (−1)^{k+1} φ² ∪₂ C(F),
//!                     ∂̌φ¹ + (−1)^k φ² ∪₁ F,
//!                     ∂̌φ² )
//! ```
//!
//! One integer matrix per degree serves all three coefficient rings; the
//! assembled matrices are the single source of truth for rank, torsion and
//! universal-coefficient computations downstream.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::coefficients::{
    upper_tri_rank, CoefficientRing, GroupValue, Scalar, UpperTriValue, VectorValue,
};
use crate::homology::{
    self, ChainMap, CohomologyGroup, HomologyError, IntMat, LesReport, MatrixComplex,
};
use crate::nerve::{cech_differential, Cochain, Nerve, Simplex};
use crate::twist::{cup1_col1, cup1_col2, cup2, steenrod_cochain, SteenrodCochain, TwistCocycle};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("cochain degree {found} does not match expected degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
}

/// A degree-`k` element of the three-column complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimRedCochain<S: Scalar> {
    pub degree: usize,
    pub col0: Cochain<S>,
    pub col1: Option<Cochain<VectorValue<S>>>,
    pub col2: Option<Cochain<UpperTriValue<S>>>,
}

impl<S: Scalar> DimRedCochain<S> {
    pub fn zero(n: usize, degree: usize) -> Self {
        DimRedCochain {
            degree,
            col0: Cochain::new(degree, S::zero()),
            col1: (degree >= 1).then(|| Cochain::new(degree - 1, VectorValue::zeros(n))),
            col2: (degree >= 2).then(|| Cochain::new(degree - 2, UpperTriValue::zeros(n))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.col0.is_zero()
            && self.col1.as_ref().is_none_or(Cochain::is_zero)
            && self.col2.as_ref().is_none_or(Cochain::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree);
        DimRedCochain {
            degree: self.degree,
            col0: self.col0.add(&rhs.col0),
            col1: match (&self.col1, &rhs.col1) {
                (Some(a), Some(b)) => Some(a.add(b)),
                (a, b) => a.clone().or_else(|| b.clone()),
            },
            col2: match (&self.col2, &rhs.col2) {
                (Some(a), Some(b)) => Some(a.add(b)),
                (a, b) => a.clone().or_else(|| b.clone()),
            },
        }
    }
}

fn signed<A: GroupValue>(c: Cochain<A>, positive: bool) -> Cochain<A> {
    if positive {
        c
    } else {
        c.neg()
    }
}

/// Apply `D_F` to a triple, with the low-degree truncations built in.
pub fn d_f<S: Scalar>(
    nerve: &Nerve,
    twist: &TwistCocycle,
    steenrod: &SteenrodCochain,
    c: &DimRedCochain<S>,
    include_col2: bool,
) -> Result<DimRedCochain<S>, ComplexError> {
    let k = c.degree;
    let n = twist.n();
    for (col, expected) in [
        (c.col0.degree(), k),
        (
            c.col1.as_ref().map_or(k.saturating_sub(1), Cochain::degree),
            k.saturating_sub(1),
        ),
        (
            c.col2.as_ref().map_or(k.saturating_sub(2), Cochain::degree),
            k.saturating_sub(2),
        ),
    ] {
        if col != expected {
            return Err(ComplexError::DegreeMismatch {
                expected,
                found: col,
            });
        }
    }

    // Column 0 output: ∂̌φ⁰ + (−1)^{k+1}(φ¹ ∪₁ F) + (−1)^{k+1}(φ² ∪₂ C(F)).
    let sign_k1 = (k + 1) % 2 == 0;
    let mut col0 = cech_differential(nerve, &c.col0);
    if let Some(phi1) = &c.col1 {
        col0 = col0.add(&signed(cup1_col1(nerve, phi1, twist), sign_k1));
    }
    if include_col2 {
        if let Some(phi2) = &c.col2 {
            col0 = col0.add(&signed(cup2(nerve, phi2, steenrod), sign_k1));
        }
    }

    // Column 1 output: ∂̌φ¹ + (−1)^k (φ² ∪₁ F).
    let sign_k = k % 2 == 0;
    let col1 = match (&c.col1, include_col2.then_some(()).and(c.col2.as_ref())) {
        (Some(phi1), Some(phi2)) => {
            cech_differential(nerve, phi1).add(&signed(cup1_col2(nerve, phi2, twist), sign_k))
        }
        (Some(phi1), None) => cech_differential(nerve, phi1),
        (None, Some(phi2)) => signed(cup1_col2(nerve, phi2, twist), sign_k),
        (None, None) => Cochain::new(0, VectorValue::zeros(n)),
    };

    // Column 2 output: ∂̌φ².
    let col2 = if k + 1 >= 2 && include_col2 {
        Some(match &c.col2 {
            Some(phi2) => cech_differential(nerve, phi2),
            None => Cochain::new(k.saturating_sub(1), UpperTriValue::zeros(n)),
        })
    } else if k + 1 >= 2 {
        Some(Cochain::new(k - 1, UpperTriValue::zeros(n)))
    } else {
        None
    };

    Ok(DimRedCochain {
        degree: k + 1,
        col0,
        col1: Some(col1),
        col2,
    })
}

/// Where a matrix column lives: which column of the complex, the simplex,
/// and the coefficient component (vector index or flattened `i<j` slot).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub column: usize,
    pub simplex: Simplex,
    pub component: usize,
}

/// The assembled complex: lexicographic bases per degree and one sparse
/// integer matrix per differential.
pub struct DimRedComplex {
    pub nerve: Nerve,
    pub twist: TwistCocycle,
    pub steenrod: SteenrodCochain,
    pub ring: CoefficientRing,
    pub kmax: usize,
    pub columns: usize,
    pub bases: Vec<Vec<BasisElement>>,
    pub matrix_complex: MatrixComplex,
}

fn basis_for_degree(nerve: &Nerve, n: usize, k: usize, columns: usize) -> Vec<BasisElement> {
    let mut basis = Vec::new();
    for s in nerve.simplices(k) {
        basis.push(BasisElement {
            column: 0,
            simplex: s.clone(),
            component: 0,
        });
    }
    if k >= 1 {
        for s in nerve.simplices(k - 1) {
            for l in 0..n {
                basis.push(BasisElement {
                    column: 1,
                    simplex: s.clone(),
                    component: l,
                });
            }
        }
    }
    if k >= 2 && columns == 3 {
        for s in nerve.simplices(k - 2) {
            for r in 0..upper_tri_rank(n) {
                basis.push(BasisElement {
                    column: 2,
                    simplex: s.clone(),
                    component: r,
                });
            }
        }
    }
    basis
}

fn cochain_from_basis(n: usize, k: usize, e: &BasisElement) -> DimRedCochain<BigInt> {
    let mut c = DimRedCochain::zero(n, k);
    match e.column {
        0 => c.col0.set(e.simplex.clone(), BigInt::from(1)),
        1 => {
            let mut v = VectorValue::zeros(n);
            let one: VectorValue<BigInt> = VectorValue::basis(n, e.component);
            v = v.add(&one);
            c.col1.as_mut().unwrap().set(e.simplex.clone(), v);
        }
        2 => {
            let mut entries = vec![<BigInt as Zero>::zero(); upper_tri_rank(n)];
            entries[e.component] = BigInt::from(1);
            c.col2
                .as_mut()
                .unwrap()
                .set(e.simplex.clone(), UpperTriValue::from_entries(n, entries));
        }
        _ => unreachable!(),
    }
    c
}

fn coordinates(
    basis: &[BasisElement],
    index: &std::collections::BTreeMap<(usize, Simplex, usize), usize>,
    value: &DimRedCochain<BigInt>,
) -> Vec<(usize, BigInt)> {
    let _ = basis;
    let mut out = Vec::new();
    for (s, v) in value.col0.iter() {
        let row = index[&(0, s.clone(), 0)];
        out.push((row, v.clone()));
    }
    if let Some(col1) = &value.col1 {
        for (s, v) in col1.iter() {
            for l in 0..v.n() {
                if !Zero::is_zero(v.component(l)) {
                    let row = index[&(1, s.clone(), l)];
                    out.push((row, v.component(l).clone()));
                }
            }
        }
    }
    if let Some(col2) = &value.col2 {
        for (s, v) in col2.iter() {
            for (r, entry) in v.flat().iter().enumerate() {
                if !Zero::is_zero(entry) {
                    let row = index[&(2, s.clone(), r)];
                    out.push((row, entry.clone()));
                }
            }
        }
    }
    out
}

fn assemble(
    nerve: &Nerve,
    twist: &TwistCocycle,
    ring: CoefficientRing,
    kmax: usize,
    columns: usize,
) -> DimRedComplex {
    let n = twist.n();
    let steenrod = steenrod_cochain(nerve, twist);
    let bases: Vec<Vec<BasisElement>> = (0..=kmax)
        .map(|k| basis_for_degree(nerve, n, k, columns))
        .collect();
    let indexes: Vec<std::collections::BTreeMap<(usize, Simplex, usize), usize>> = bases
        .iter()
        .map(|basis| {
            basis
                .iter()
                .enumerate()
                .map(|(i, e)| ((e.column, e.simplex.clone(), e.component), i))
                .collect()
        })
        .collect();

    let mut mats = Vec::new();
    for k in 0..kmax {
        let mut m = IntMat::zero(bases[k + 1].len(), bases[k].len());
        for (j, e) in bases[k].iter().enumerate() {
            let c = cochain_from_basis(n, k, e);
            let dc = d_f(nerve, twist, &steenrod, &c, columns == 3).unwrap();
            for (row, v) in coordinates(&bases[k + 1], &indexes[k + 1], &dc) {
                m.set(row, j, v);
            }
        }
        mats.push(m);
    }
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    DimRedComplex {
        nerve: nerve.clone(),
        twist: twist.clone(),
        steenrod,
        ring,
        kmax,
        columns,
        bases,
        matrix_complex: MatrixComplex::new(dims, mats),
    }
}

/// Assemble the three-column complex through degree `kmax`.
pub fn assemble_complex(
    nerve: &Nerve,
    twist: &TwistCocycle,
    ring: CoefficientRing,
    kmax: usize,
) -> DimRedComplex {
    assemble(nerve, twist, ring, kmax, 3)
}

/// Assemble the two-column complex (columns 0 and 1 only) through `kmax`.
pub fn assemble_two_column(
    nerve: &Nerve,
    twist: &TwistCocycle,
    ring: CoefficientRing,
    kmax: usize,
) -> DimRedComplex {
    assemble(nerve, twist, ring, kmax, 2)
}

impl DimRedComplex {
    pub fn dims(&self) -> &[usize] {
        &self.matrix_complex.dims
    }

    pub fn differential(&self, k: usize) -> &IntMat {
        self.matrix_complex.differential(k)
    }

    /// `ℍᵏ_F` over the complex's coefficient ring.
    pub fn cohomology(&self, k: usize) -> Result<CohomologyGroup, HomologyError> {
        homology::cohomology_group(&self.matrix_complex, k, self.ring)
    }

    pub fn cohomology_over(
        &self,
        k: usize,
        ring: CoefficientRing,
    ) -> Result<CohomologyGroup, HomologyError> {
        homology::cohomology_group(&self.matrix_complex, k, ring)
    }
}

/// The plain Čech complex of the nerve with `ℤ^width` coefficients (used as
/// the column sub/quotient complexes of the filtration).
pub fn cech_matrix_complex(nerve: &Nerve, width: usize, kmax: usize) -> MatrixComplex {
    let dims: Vec<usize> = (0..=kmax).map(|k| nerve.simplex_count(k) * width).collect();
    let mut mats = Vec::new();
    for k in 0..kmax {
        let mut m = IntMat::zero(dims[k + 1], dims[k]);
        for (j, s) in nerve.simplices(k).iter().enumerate() {
            // Differential of the indicator cochain on s.
            let mut c: Cochain<BigInt> = Cochain::new(k, <BigInt as Zero>::zero());
            c.set(s.clone(), BigInt::from(1));
            let dc = cech_differential(nerve, &c);
            for (target, v) in dc.iter() {
                let row = nerve.simplex_position(target).unwrap();
                for l in 0..width {
                    m.set(row * width + l, j * width + l, v.clone());
                }
            }
        }
        mats.push(m);
    }
    MatrixComplex::new(dims, mats)
}

/// A degree-shifted copy: `shifted^k = base^{k-shift}` (zero below).
pub fn shifted_complex(base: &MatrixComplex, shift: usize, kmax: usize) -> MatrixComplex {
    let dims: Vec<usize> = (0..=kmax)
        .map(|k| {
            if k < shift {
                0
            } else {
                base.dims.get(k - shift).copied().unwrap_or(0)
            }
        })
        .collect();
    let mut mats = Vec::new();
    for k in 0..kmax {
        if k < shift {
            mats.push(IntMat::zero(dims[k + 1], dims[k]));
        } else if k - shift < base.d.len() {
            mats.push(base.d[k - shift].clone());
        } else {
            mats.push(IntMat::zero(dims[k + 1], dims[k]));
        }
    }
    MatrixComplex::new(dims, mats)
}

/// The column filtration short exact sequence `0 → low → total → high → 0`,
/// where `low` keeps the columns below `cut` and `high` is the top column
/// as a shifted Čech complex. Returns (sub, quot, inclusion, projection).
pub fn column_ses(
    total: &DimRedComplex,
    cut: usize,
) -> (MatrixComplex, MatrixComplex, ChainMap, ChainMap) {
    assert!(cut == 1 || cut == 2, "cut below column 1 or column 2");
    assert_eq!(
        total.columns,
        if cut == 1 { 2 } else { 3 },
        "cut must split off the top column"
    );
    let nerve = &total.nerve;
    let n = total.twist.n();
    let kmax = total.kmax;

    // Subcomplex: columns < cut of the same twisted complex.
    let sub = if cut == 1 {
        cech_matrix_complex(nerve, 1, kmax)
    } else {
        let two = assemble_two_column(nerve, &total.twist, total.ring, kmax);
        two.matrix_complex
    };
    // Quotient: the top column, a shifted plain Čech complex.
    let width = if cut == 1 { n } else { upper_tri_rank(n) };
    let quot = shifted_complex(&cech_matrix_complex(nerve, width, kmax), cut, kmax);

    let mut incl_mats = Vec::new();
    let mut proj_mats = Vec::new();
    for k in 0..=kmax {
        let basis = &total.bases[k];
        let mut incl = IntMat::zero(basis.len(), sub.dims[k]);
        let mut proj = IntMat::zero(quot.dims[k], basis.len());
        let mut sub_next = 0usize;
        let mut quot_next = 0usize;
        for (row, e) in basis.iter().enumerate() {
            if e.column < cut {
                incl.set(row, sub_next, BigInt::from(1));
                sub_next += 1;
            } else {
                proj.set(quot_next, row, BigInt::from(1));
                quot_next += 1;
            }
        }
        assert_eq!(sub_next, sub.dims[k]);
        assert_eq!(quot_next, quot.dims[k]);
        incl_mats.push(incl);
        proj_mats.push(proj);
    }
    (
        sub,
        quot,
        ChainMap { mats: incl_mats },
        ChainMap { mats: proj_mats },
    )
}

/// Certify the long exact sequence of the column filtration of `total`.
pub fn verify_column_les(total: &DimRedComplex, cut: usize) -> Result<LesReport, HomologyError> {
    let (sub, quot, incl, proj) = column_ses(total, cut);
    homology::verify_exactness(&sub, &total.matrix_complex, &quot, &incl, &proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerve::build_nerve;
    use crate::twist::validate_twist;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeSet;

    fn facets(sets: &[&[u32]]) -> Vec<BTreeSet<u32>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    fn sx(ids: &[u32]) -> Simplex {
        Simplex::from_ids(ids).unwrap()
    }

    fn boundary_tetra() -> Nerve {
        build_nerve(&facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap()
    }

    fn circle_nerve() -> Nerve {
        build_nerve(&facets(&[&[0, 1], &[1, 2], &[0, 2]])).unwrap()
    }

    fn indicator_twist(nerve: &Nerve, n: usize, simplex: &[u32], value: &[i64]) -> TwistCocycle {
        let mut f = Cochain::new(2, VectorValue::zeros(n));
        f.set(sx(simplex), VectorValue::from_i64(value));
        validate_twist(nerve, n, f).unwrap()
    }

    fn random_exact_twist(nerve: &Nerve, n: usize, rng: &mut impl Rng) -> TwistCocycle {
        let mut eta = Cochain::new(1, VectorValue::zeros(n));
        for s in nerve.simplices(1) {
            let v: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
            eta.set(s.clone(), VectorValue::from_i64(&v));
        }
        let f = cech_differential(nerve, &eta);
        validate_twist(nerve, n, f).unwrap()
    }

    #[test]
    fn dimension_counts_on_fixtures() {
        let nerve = boundary_tetra();
        let twist = indicator_twist(&nerve, 1, &[0, 1, 2], &[1]);
        let cx = assemble_complex(&nerve, &twist, CoefficientRing::Integer, 3);
        assert_eq!(cx.dims(), &[4, 10, 10, 4]);

        let circle = circle_nerve();
        let zero2 = TwistCocycle::zero(&circle, 2);
        let cx2 = assemble_complex(&circle, &zero2, CoefficientRing::Integer, 2);
        // C² = 0 + 3 edges × 2 + 3 vertices × 1.
        assert_eq!(cx2.dims()[2], 9);
    }

    #[test]
    fn d_f_hand_value_on_degree_one_input() {
        let nerve = boundary_tetra();
        let twist = indicator_twist(&nerve, 1, &[0, 1, 2], &[2]);
        let steenrod = steenrod_cochain(&nerve, &twist);
        let mut c: DimRedCochain<BigInt> = DimRedCochain::zero(1, 1);
        c.col1
            .as_mut()
            .unwrap()
            .set(sx(&[0]), VectorValue::from_i64(&[1]));
        let dc = d_f(&nerve, &twist, &steenrod, &c, true).unwrap();
        // Sign (−1)^{k+1} = +1 at k = 1: column 0 picks up ψ ∪₁ F.
        assert_eq!(dc.col0.get(&sx(&[0, 1, 2])), BigInt::from(2));
        assert_eq!(dc.col0.support_len(), 1);
        let expected_col1 = cech_differential(&nerve, c.col1.as_ref().unwrap());
        assert_eq!(dc.col1.unwrap(), expected_col1);
    }

    #[test]
    fn d_f_with_zero_twist_is_componentwise_cech() {
        let nerve = boundary_tetra();
        let twist = TwistCocycle::zero(&nerve, 2);
        let steenrod = steenrod_cochain(&nerve, &twist);
        let mut rng = StdRng::seed_from_u64(3);
        let mut c: DimRedCochain<BigInt> = DimRedCochain::zero(2, 1);
        c.col0
            .set(sx(&[0, 2]), BigInt::from(rng.random_range(1..5)));
        c.col1
            .as_mut()
            .unwrap()
            .set(sx(&[1]), VectorValue::from_i64(&[2, -1]));
        let dc = d_f(&nerve, &twist, &steenrod, &c, true).unwrap();
        assert_eq!(dc.col0, cech_differential(&nerve, &c.col0));
        assert_eq!(
            dc.col1.unwrap(),
            cech_differential(&nerve, c.col1.as_ref().unwrap())
        );
        let zero: DimRedCochain<BigInt> = DimRedCochain::zero(2, 1);
        assert!(d_f(&nerve, &twist, &steenrod, &zero, true)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn d_f_squared_is_zero_randomized() {
        let mut rng = StdRng::seed_from_u64(17);
        let shapes: Vec<Vec<BTreeSet<u32>>> = vec![
            facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]),
            facets(&[&[0, 1, 2, 3, 4]]),
            facets(&[&[0, 1, 2, 3], &[2, 3, 4], &[4, 5]]),
        ];
        for f in &shapes {
            let nerve = build_nerve(f).unwrap();
            for n in 1..=3 {
                let twist = random_exact_twist(&nerve, n, &mut rng);
                let cx = assemble_complex(&nerve, &twist, CoefficientRing::Integer, 4);
                assert!(cx.matrix_complex.composition_is_zero());
            }
        }
    }

    #[test]
    fn two_column_matches_three_column_for_rank_one() {
        let nerve = boundary_tetra();
        let twist = indicator_twist(&nerve, 1, &[0, 1, 2], &[3]);
        let three = assemble_complex(&nerve, &twist, CoefficientRing::Integer, 4);
        let two = assemble_two_column(&nerve, &twist, CoefficientRing::Integer, 4);
        assert_eq!(three.dims(), two.dims());
        for k in 0..4 {
            assert_eq!(three.differential(k), two.differential(k));
        }
    }

    #[test]
    fn two_column_differential_entry_pattern() {
        // The single ∪₁F entry links the column-1 basis vector at vertex 0
        // into the (0,1,2) row of column 0.
        let nerve = boundary_tetra();
        let k = 4i64;
        let twist = indicator_twist(&nerve, 1, &[0, 1, 2], &[k]);
        let two = assemble_two_column(&nerve, &twist, CoefficientRing::Integer, 3);
        let d1 = two.differential(1);
        let col = two.bases[1]
            .iter()
            .position(|e| e.column == 1 && e.simplex == sx(&[0]))
            .unwrap();
        let row = two.bases[2]
            .iter()
            .position(|e| e.column == 0 && e.simplex == sx(&[0, 1, 2]))
            .unwrap();
        assert_eq!(d1.get(row, col), BigInt::from(k));
    }

    #[test]
    fn zero_twist_cohomology_splits_as_direct_sum() {
        let nerve = boundary_tetra();
        for n in 1..=3usize {
            let twist = TwistCocycle::zero(&nerve, n);
            let cx = assemble_complex(&nerve, &twist, CoefficientRing::Integer, 4);
            let cech = cech_matrix_complex(&nerve, 1, 4);
            for k in 0..=3usize {
                let h = cx.cohomology(k).unwrap();
                let mut rank = 0;
                let mut torsion: Vec<BigInt> = Vec::new();
                let weights = [1, n, upper_tri_rank(n)];
                for (shift, w) in weights.iter().enumerate() {
                    if k >= shift {
                        let part =
                            homology::cohomology_group(&cech, k - shift, CoefficientRing::Integer)
                                .unwrap();
                        rank += part.rank * w;
                        for _ in 0..*w {
                            torsion.extend(part.torsion.iter().cloned());
                        }
                    }
                }
                torsion.sort();
                let mut got = h.torsion.clone();
                got.sort();
                assert_eq!((h.rank, got), (rank, torsion), "degree {k}, n = {n}");
            }
        }
    }

    #[test]
    fn hopf_and_lens_groups() {
        let nerve = boundary_tetra();
        // Untwisted sphere: H² has rank 1.
        let zero = TwistCocycle::zero(&nerve, 1);
        let cx = assemble_complex(&nerve, &zero, CoefficientRing::Integer, 4);
        let h2 = cx.cohomology(2).unwrap();
        assert_eq!((h2.rank, h2.torsion.len()), (1, 0));

        // Lens twist k = 2: ℍ² = ℤ/2, ℍ³ = ℤ.
        let lens = indicator_twist(&nerve, 1, &[0, 1, 2], &[2]);
        let cx = assemble_complex(&nerve, &lens, CoefficientRing::Integer, 4);
        let h2 = cx.cohomology(2).unwrap();
        assert_eq!((h2.rank, h2.torsion.clone()), (0, vec![BigInt::from(2)]));
        let h3 = cx.cohomology(3).unwrap();
        assert_eq!((h3.rank, h3.torsion.len()), (1, 0));

        // Rank 2, F = (2,0): ℍ³ = ℤ ⊕ ℤ/2.
        let t = indicator_twist(&nerve, 2, &[0, 1, 2], &[2, 0]);
        let cx = assemble_complex(&nerve, &t, CoefficientRing::Integer, 4);
        let h3 = cx.cohomology(3).unwrap();
        assert_eq!((h3.rank, h3.torsion.clone()), (1, vec![BigInt::from(2)]));
    }

    #[test]
    fn column_les_on_the_hopf_fixture() {
        let nerve = boundary_tetra();
        let twist = indicator_twist(&nerve, 1, &[0, 1, 2], &[1]);
        let two = assemble_two_column(&nerve, &twist, CoefficientRing::Integer, 4);
        let report = verify_column_les(&two, 1).unwrap();
        assert!(report.all_exact(), "{:?}", report.nodes);
    }

    #[test]
    fn column_les_splits_for_zero_twist() {
        let nerve = circle_nerve();
        let twist = TwistCocycle::zero(&nerve, 2);
        let three = assemble_complex(&nerve, &twist, CoefficientRing::Integer, 3);
        let report = verify_column_les(&three, 2).unwrap();
        assert!(report.all_exact());
    }

    #[test]
    fn lens_torsion_generator_obstructs_and_bockstein_realizes_it() {
        use crate::homology::{
            bockstein, coboundary_witness_int, presentation, torsion_witnesses, HomologyError,
        };
        // Lens k = 2: the generator 2-cocycle of ℍ² = Z/2 is not a
        // coboundary, with residue 1 mod 2.
        let nerve = boundary_tetra();
        let lens = indicator_twist(&nerve, 1, &[0, 1, 2], &[2]);
        let cx = assemble_complex(&nerve, &lens, CoefficientRing::Integer, 5);
        let mcx = &cx.matrix_complex;
        let pres2 = presentation(mcx, 2).unwrap();
        assert_eq!(pres2.group.torsion, vec![BigInt::from(2)]);
        let z = pres2.generator_cocycle(0);
        let err = coboundary_witness_int(mcx, 2, &z).unwrap_err();
        assert_eq!(
            err,
            HomologyError::NotCoboundary {
                factor: BigInt::from(2),
                residue: BigInt::from(1),
            }
        );
        // Doubling the generator makes it a coboundary.
        let doubled: Vec<BigInt> = z.iter().map(|v| v * 2).collect();
        let witness = coboundary_witness_int(mcx, 2, &doubled).unwrap();
        assert_eq!(mcx.differential(1).apply(&witness), doubled);

        // Rank 2, F = (2, 0): a mod-1 2-triple whose Bockstein represents
        // the Z/2 torsion generator of ℍ³, of order exactly 2.
        let t = indicator_twist(&nerve, 2, &[0, 1, 2], &[2, 0]);
        let cx = assemble_complex(&nerve, &t, CoefficientRing::Integer, 5);
        let mcx = &cx.matrix_complex;
        let ws = torsion_witnesses(mcx, 2).unwrap();
        assert_eq!(ws.len(), 1);
        let w = &ws[0];
        assert_eq!(w.factor, BigInt::from(2));
        assert_eq!(bockstein(mcx, 2, &w.cocycle).unwrap(), w.bockstein_rep);
        let err = coboundary_witness_int(mcx, 3, &w.bockstein_rep).unwrap_err();
        assert!(matches!(err, HomologyError::NotCoboundary { .. }));
        let doubled: Vec<BigInt> = w.bockstein_rep.iter().map(|v| v * 2).collect();
        assert!(coboundary_witness_int(mcx, 3, &doubled).is_ok());
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let nerve = boundary_tetra();
        let twist = TwistCocycle::zero(&nerve, 1);
        let steenrod = steenrod_cochain(&nerve, &twist);
        let mut c: DimRedCochain<BigInt> = DimRedCochain::zero(1, 2);
        c.col0 = Cochain::new(1, <BigInt as Zero>::zero());
        assert!(matches!(
            d_f(&nerve, &twist, &steenrod, &c, true),
            Err(ComplexError::DegreeMismatch { .. })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        prop_compose! {
            fn arb_facets()(count in 1usize..5)(
                sets in proptest::collection::vec(
                    proptest::collection::btree_set(0u32..6, 1..5), count.max(1))
            ) -> Vec<BTreeSet<u32>> {
                sets
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            // The master property: D_F ∘ D_F = 0 as exact integer matrices
            // for arbitrary nerves, ranks and exact twists, in both the
            // two- and three-column assemblies.
            #[test]
            fn d_f_squared_is_zero(
                facets in arb_facets(),
                n in 1usize..=3,
                seed in 0u64..10_000,
            ) {
                let nerve = build_nerve(&facets).unwrap();
                let mut rng = StdRng::seed_from_u64(seed);
                let twist = random_exact_twist(&nerve, n, &mut rng);
                let three = assemble_complex(&nerve, &twist, CoefficientRing::Integer, 4);
                prop_assert!(three.matrix_complex.composition_is_zero());
                let two = assemble_two_column(&nerve, &twist, CoefficientRing::Integer, 4);
                prop_assert!(two.matrix_complex.composition_is_zero());
            }
        }
    }
}
