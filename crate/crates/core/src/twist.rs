//! The Euler cocycle `F`, its Steenrod correction cochain `C(F)`, and the
//! cup operations built from them.
//!
//! `C(F)` is the explicit 3-cochain with
//! `C_{λ₀λ₁λ₂λ₃,ij} = F_{λ₀λ₁λ₂,i} F_{λ₀λ₂λ₃,j} − F_{λ₁λ₂λ₃,i} F_{λ₀λ₁λ₃,j}`,
//! which corrects the non-commutativity of the cup product of the
//! components of `F`.

use num_bigint::BigInt;
use thiserror::Error;

use crate::coefficients::{
    mackey_bilinear, pair_vector, upper_tri_rank, GroupValue, Scalar, UpperTriValue, VectorValue,
};
use crate::nerve::{cech_differential, Cochain, Nerve, Simplex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwistError {
    #[error("twist cochain must have degree 2, found {0}")]
    WrongDegree(usize),
    #[error("twist value on {simplex:?} has length {found}, expected {expected}")]
    WrongRank {
        simplex: Simplex,
        expected: usize,
        found: usize,
    },
    #[error("∂̌F ≠ 0 at {simplex:?}, component {component}: value {value}")]
    NotClosed {
        simplex: Simplex,
        component: usize,
        value: BigInt,
    },
}

/// A validated integer 2-cocycle `F ∈ Ž²(W, ℤⁿ)` representing the Euler
/// vector of the bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCocycle {
    n: usize,
    f: Cochain<VectorValue<BigInt>>,
}

/// The derived degree-3 Steenrod cochain `C(F)` with values in `M_n^u(ℤ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteenrodCochain {
    n: usize,
    c: Cochain<UpperTriValue<BigInt>>,
}

/// Check `∂̌F = 0` componentwise on every 3-simplex and wrap `F` up.
pub fn validate_twist(
    nerve: &Nerve,
    n: usize,
    f: Cochain<VectorValue<BigInt>>,
) -> Result<TwistCocycle, TwistError> {
    if f.degree() != 2 {
        return Err(TwistError::WrongDegree(f.degree()));
    }
    for (s, v) in f.iter() {
        if v.n() != n {
            return Err(TwistError::WrongRank {
                simplex: s.clone(),
                expected: n,
                found: v.n(),
            });
        }
    }
    let df = cech_differential(nerve, &f);
    for (s, v) in df.iter() {
        for l in 0..n {
            if !v.component(l).is_zero() {
                return Err(TwistError::NotClosed {
                    simplex: s.clone(),
                    component: l,
                    value: v.component(l).clone(),
                });
            }
        }
    }
    Ok(TwistCocycle { n, f })
}

impl TwistCocycle {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cochain(&self) -> &Cochain<VectorValue<BigInt>> {
        &self.f
    }

    /// `F` on an increasing 2-simplex; zero off the support.
    pub fn value(&self, s: &Simplex) -> VectorValue<BigInt> {
        self.f.get(s)
    }

    pub fn zero(nerve: &Nerve, n: usize) -> TwistCocycle {
        let _ = nerve;
        TwistCocycle {
            n,
            f: Cochain::new(2, VectorValue::zeros(n)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }
}

/// `C(F)` on every 3-simplex of the nerve; the zero cochain when the nerve
/// has no 3-simplices or `n = 1`.
pub fn steenrod_cochain(nerve: &Nerve, twist: &TwistCocycle) -> SteenrodCochain {
    let n = twist.n();
    let mut c = Cochain::new(3, UpperTriValue::zeros(n));
    if upper_tri_rank(n) == 0 {
        return SteenrodCochain { n, c };
    }
    for s in nerve.simplices(3) {
        // Faces of (λ₀,λ₁,λ₂,λ₃) in the order the formula consumes them.
        let f012 = twist.value(&s.face(3));
        let f023 = twist.value(&s.face(1));
        let f123 = twist.value(&s.face(0));
        let f013 = twist.value(&s.face(2));
        let mut val = UpperTriValue::zeros(n);
        let mut nonzero = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let entry =
                    f012.component(i) * f023.component(j) - f123.component(i) * f013.component(j);
                if !entry.is_zero() {
                    nonzero = true;
                }
                val.set_entry(i, j, entry);
            }
        }
        if nonzero {
            c.set(s.clone(), val);
        }
    }
    SteenrodCochain { n, c }
}

impl SteenrodCochain {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cochain(&self) -> &Cochain<UpperTriValue<BigInt>> {
        &self.c
    }

    pub fn value(&self, s: &Simplex) -> UpperTriValue<BigInt> {
        self.c.get(s)
    }

    /// One `(i,j)` component as a plain integer 3-cochain.
    pub fn component(&self, i: usize, j: usize) -> Cochain<BigInt> {
        let mut out = Cochain::new(3, BigInt::from(0));
        for (s, v) in self.c.iter() {
            out.set(s.clone(), v.entry(i, j).clone());
        }
        out
    }
}

/// `(φ ∪₁ F)` for a vector-valued `φ` of degree `k−1`: the output has degree
/// `k+1` and value `⟨φ_{λ₀…λ_{k−1}}, F_{λ_{k−1}λ_kλ_{k+1}}⟩`.
pub fn cup1_col1<S: Scalar>(
    nerve: &Nerve,
    phi: &Cochain<VectorValue<S>>,
    twist: &TwistCocycle,
) -> Cochain<S> {
    let p = phi.degree();
    let mut out = Cochain::new(p + 2, S::zero());
    for s in nerve.simplices(p + 2) {
        let front = s.front(p + 1);
        let Some(phi_v) = phi.get_stored(&front) else {
            continue;
        };
        let back = s.back(3);
        let f_v = twist.value(&back);
        if f_v.is_zero() {
            continue;
        }
        let value = pair_vector(phi_v, &f_v).expect("rank checked at twist validation");
        out.set(s.clone(), value);
    }
    out
}

/// `(φ ∪₁ F)` for an upper-triangular `φ` of degree `k−2`: the output is the
/// vector-valued degree-`k` cochain with component
/// `l ↦ Σ_{i<j} φ_{ij} (F_i (e_l)_j − (e_l)_i F_j)`.
pub fn cup1_col2<S: Scalar>(
    nerve: &Nerve,
    phi: &Cochain<UpperTriValue<S>>,
    twist: &TwistCocycle,
) -> Cochain<VectorValue<S>> {
    let p = phi.degree();
    let n = twist.n();
    let mut out = Cochain::new(p + 2, VectorValue::zeros(n));
    for s in nerve.simplices(p + 2) {
        let front = s.front(p + 1);
        let Some(phi_v) = phi.get_stored(&front) else {
            continue;
        };
        let back = s.back(3);
        let f_v = twist.value(&back);
        if f_v.is_zero() {
            continue;
        }
        let mut components = vec![S::zero(); n];
        for (i, j, m) in phi_v.iter_pairs() {
            // The (e_l) deltas leave two terms per stored entry.
            components[j] = components[j].add(&m.int_mul(f_v.component(i)));
            components[i] = components[i].sub(&m.int_mul(f_v.component(j)));
        }
        out.set(s.clone(), VectorValue::new(components));
    }
    out
}

/// `(φ ∪₂ C(F))` for an upper-triangular `φ` of degree `k−2`: output degree
/// `k+1`, value `Σ_{i<j} φ_{λ₀…λ_{k−2},ij} · C_{λ_{k−2}…λ_{k+1},ij}`.
pub fn cup2<S: Scalar>(
    nerve: &Nerve,
    phi: &Cochain<UpperTriValue<S>>,
    steenrod: &SteenrodCochain,
) -> Cochain<S> {
    let p = phi.degree();
    let mut out = Cochain::new(p + 3, S::zero());
    for s in nerve.simplices(p + 3) {
        let front = s.front(p + 1);
        let Some(phi_v) = phi.get_stored(&front) else {
            continue;
        };
        let back = s.back(4);
        let Some(c_v) = steenrod.cochain().get_stored(&back) else {
            continue;
        };
        let mut acc = S::zero();
        for (i, j, m) in phi_v.iter_pairs() {
            acc = acc.add(&m.int_mul(c_v.entry(i, j)));
        }
        out.set(s.clone(), acc);
    }
    out
}

/// Plain front/back cup product of two integer cochains,
/// `(a ∪ b)_{λ₀…λ_{p+q}} = a_{λ₀…λ_p} · b_{λ_p…λ_{p+q}}`.
pub fn cup_int(nerve: &Nerve, a: &Cochain<BigInt>, b: &Cochain<BigInt>) -> Cochain<BigInt> {
    let (p, q) = (a.degree(), b.degree());
    let mut out = Cochain::new(p + q, BigInt::from(0));
    for s in nerve.simplices(p + q) {
        let front = s.front(p + 1);
        let back = s.back(q + 1);
        let (Some(av), Some(bv)) = (a.get_stored(&front), b.get_stored(&back)) else {
            continue;
        };
        out.set(s.clone(), av * bv);
    }
    out
}

/// Convenience: evaluate the pairing `Σ_{i<j} φ_{ij} u_i v_j` of a stored
/// upper-triangular value; used by the verification suites.
pub fn pair_upper<S: Scalar>(
    m: &UpperTriValue<S>,
    u: &VectorValue<BigInt>,
    v: &VectorValue<BigInt>,
) -> S {
    mackey_bilinear(m, u, v).expect("rank consistency checked by callers")
}
