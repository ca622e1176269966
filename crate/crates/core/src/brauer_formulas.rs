//! The standard-setup cocycle pipeline: rational section data `s` with
//! integer `∂̌s`, fiber samples with integer lift offsets, the integer
//! `m`-evaluator, the Mackey pairing, the surjectivity Tu-Čech 2-cocycle
//! with its closure check, the witness identities relating it back to the
//! twisted complex, and the lift-independence vanishing computation.
//!
//! Fiber points are modelled as a component label plus a coordinate
//! `ξ ∈ (ℚ mod 1)ⁿ` relative to the section over the component's base
//! vertex; the integral part of every translation is carried explicitly by
//! the group argument, which is what makes the `m`-values integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::coefficients::{mackey_bilinear, upper_tri_rank, Circle, UpperTriValue, VectorValue};
use crate::complex::{d_f, DimRedCochain};
use crate::nerve::{alternating_value, cech_differential, Cochain, Nerve, Simplex, VertexId};
use crate::twist::{steenrod_cochain, validate_twist, SteenrodCochain, TwistCocycle};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BrauerError {
    #[error("pair ({0}, {1}) does not span an edge of the nerve")]
    NotAnEdge(VertexId, VertexId),
    #[error("vertex {0} is not in the nerve")]
    UnknownVertex(VertexId),
    #[error("s must be given on strictly increasing pairs")]
    NotAntisymmetric,
    #[error("∂̌s is not integer-valued on {simplex:?} (component {component})")]
    CoboundaryNotIntegral { simplex: Simplex, component: usize },
    #[error("base vertex {base} does not share an edge with {vertex} in its component")]
    BaseNotAdjacent { base: VertexId, vertex: VertexId },
    #[error("s is not coherent over the base at edge ({0}, {1}): the global fiber coordinate needs s_ab + s_{{b,a}} − s_{{b,b}} integral")]
    NotCoherent(VertexId, VertexId),
    #[error("m-value is not an integer at ({a}, {b}), component {component}: {value}")]
    NonInteger {
        a: VertexId,
        b: VertexId,
        component: usize,
        value: BigRational,
    },
    #[error("triple fails the cocycle identity `{identity}` at {context}")]
    NotACocycleTriple {
        identity: &'static str,
        context: String,
    },
    #[error("fiber sample lives in component {found}, expected {expected}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("twist validation failed: {0}")]
    Twist(#[from] crate::twist::TwistError),
    #[error("missing Mackey data for component {0}")]
    MissingComponent(usize),
}

fn rep0(q: &BigRational) -> BigRational {
    q - q.floor()
}

fn rep0_vec(v: &[BigRational]) -> Vec<BigRational> {
    v.iter().map(rep0).collect()
}

fn unit_vec(n: usize, l: usize) -> Vec<BigInt> {
    (0..n)
        .map(|i| {
            if i == l {
                BigInt::from(1)
            } else {
                BigInt::zero()
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Standard setup
// ---------------------------------------------------------------------------

/// A good cover with an antisymmetric rational 1-cochain `s` whose Čech
/// coboundary is the integer Euler cocycle `F`.
///
/// Besides `∂̌s ∈ ℤⁿ` on every 2-simplex, construction checks the two
/// conditions the global fiber-coordinate model needs: each component's
/// base vertex shares an edge with every other vertex of the component, and
/// `s_{λ₀λ₁} + s_{bλ₀} − s_{bλ₁} ∈ ℤⁿ` on every edge.
#[derive(Debug, Clone)]
pub struct StandardSetup {
    pub nerve: Nerve,
    pub n: usize,
    s: BTreeMap<(VertexId, VertexId), Vec<BigRational>>,
    base: BTreeMap<usize, VertexId>,
    twist: TwistCocycle,
    steenrod: SteenrodCochain,
}

impl StandardSetup {
    /// Build and validate a setup from `s`-values on increasing edges.
    /// Components without an explicit base vertex get their smallest one.
    pub fn new(
        nerve: Nerve,
        n: usize,
        s_entries: Vec<((VertexId, VertexId), Vec<BigRational>)>,
        mut base: BTreeMap<usize, VertexId>,
    ) -> Result<Self, BrauerError> {
        let mut s = BTreeMap::new();
        for ((a, b), v) in s_entries {
            if a >= b {
                return Err(BrauerError::NotAntisymmetric);
            }
            if !nerve.has_edge(a, b) {
                return Err(BrauerError::NotAnEdge(a, b));
            }
            assert_eq!(v.len(), n, "s values must have length n");
            s.insert((a, b), v);
        }
        for comp in 0..nerve.num_components() {
            base.entry(comp)
                .or_insert_with(|| nerve.component_vertices(comp)[0]);
        }

        let zero_twist = TwistCocycle::zero(&nerve, n);
        let zero_steenrod = steenrod_cochain(&nerve, &zero_twist);
        let mut setup = StandardSetup {
            nerve,
            n,
            s,
            base,
            twist: zero_twist,
            steenrod: zero_steenrod,
        };

        // ∂̌s must be integral on every 2-simplex; it becomes the twist.
        let mut f = Cochain::new(2, VectorValue::zeros(n));
        for simplex in setup.nerve.simplices(2).to_vec() {
            let value =
                setup.f_rational_at(simplex.vertex(0), simplex.vertex(1), simplex.vertex(2))?;
            for (component, q) in value.iter().enumerate() {
                if !q.is_integer() {
                    return Err(BrauerError::CoboundaryNotIntegral {
                        simplex: simplex.clone(),
                        component,
                    });
                }
            }
            f.set(
                simplex.clone(),
                VectorValue::new(value.iter().map(BigRational::to_integer).collect()),
            );
        }
        let twist = validate_twist(&setup.nerve, n, f)?;
        setup.steenrod = steenrod_cochain(&setup.nerve, &twist);
        setup.twist = twist;

        // Base adjacency and mod-ℤ coherence over the base.
        for comp in 0..setup.nerve.num_components() {
            let b = setup.base[&comp];
            for v in setup.nerve.component_vertices(comp) {
                if v != b && !setup.nerve.has_edge(b, v) {
                    return Err(BrauerError::BaseNotAdjacent { base: b, vertex: v });
                }
            }
        }
        for (a, b) in setup.s.keys().copied().collect::<Vec<_>>() {
            let comp = setup.nerve.component_of(a).unwrap();
            let bb = setup.base[&comp];
            let defect = setup.f_rational_at(bb, a, b)?;
            if defect.iter().any(|q| !q.is_integer()) {
                return Err(BrauerError::NotCoherent(a, b));
            }
        }
        Ok(setup)
    }

    /// `s_{ab}` on an arbitrary ordered pair: antisymmetric, zero on the
    /// diagonal.
    pub fn s_at(&self, a: VertexId, b: VertexId) -> Result<Vec<BigRational>, BrauerError> {
        if !self.nerve.has_vertex(a) {
            return Err(BrauerError::UnknownVertex(a));
        }
        if !self.nerve.has_vertex(b) {
            return Err(BrauerError::UnknownVertex(b));
        }
        if a == b {
            return Ok(vec![BigRational::zero(); self.n]);
        }
        if !self.nerve.has_edge(a, b) {
            return Err(BrauerError::NotAnEdge(a, b));
        }
        let (lo, hi, flip) = if a < b { (a, b, false) } else { (b, a, true) };
        let v = self
            .s
            .get(&(lo, hi))
            .cloned()
            .unwrap_or_else(|| vec![BigRational::zero(); self.n]);
        Ok(if flip {
            v.iter().map(|q| -q).collect()
        } else {
            v
        })
    }

    /// `(∂̌s)_{abc} = s_{bc} − s_{ac} + s_{ab}` on an arbitrary triple.
    pub fn f_rational_at(
        &self,
        a: VertexId,
        b: VertexId,
        c: VertexId,
    ) -> Result<Vec<BigRational>, BrauerError> {
        let sbc = self.s_at(b, c)?;
        let sac = self.s_at(a, c)?;
        let sab = self.s_at(a, b)?;
        Ok((0..self.n).map(|l| &sbc[l] - &sac[l] + &sab[l]).collect())
    }

    /// The integer Euler value on an arbitrary edge-supported triple.
    pub fn f_at(
        &self,
        a: VertexId,
        b: VertexId,
        c: VertexId,
    ) -> Result<VectorValue<BigInt>, BrauerError> {
        let v = self.f_rational_at(a, b, c)?;
        let mut out = Vec::with_capacity(self.n);
        for (component, q) in v.iter().enumerate() {
            if !q.is_integer() {
                return Err(BrauerError::NonInteger {
                    a,
                    b: c,
                    component,
                    value: q.clone(),
                });
            }
            out.push(q.to_integer());
        }
        Ok(VectorValue::new(out))
    }

    pub fn twist(&self) -> &TwistCocycle {
        &self.twist
    }

    pub fn steenrod(&self) -> &SteenrodCochain {
        &self.steenrod
    }

    pub fn base_of(&self, component: usize) -> VertexId {
        self.base[&component]
    }

    pub fn bases(&self) -> &BTreeMap<usize, VertexId> {
        &self.base
    }

    pub fn s_entries(&self) -> &BTreeMap<(VertexId, VertexId), Vec<BigRational>> {
        &self.s
    }

    pub fn component_of(&self, v: VertexId) -> Result<usize, BrauerError> {
        self.nerve
            .component_of(v)
            .ok_or(BrauerError::UnknownVertex(v))
    }

    /// The fiber sample sitting on the section over `λ`:
    /// `ξ = rep₀(−s_{base,λ})`.
    pub fn section_sample(&self, lambda: VertexId) -> Result<FiberSample, BrauerError> {
        let comp = self.component_of(lambda)?;
        let s = self.s_at(self.base_of(comp), lambda)?;
        Ok(FiberSample::new(
            comp,
            s.iter().map(|q| -q).collect::<Vec<_>>(),
        ))
    }
}

// ---------------------------------------------------------------------------
// Fiber samples and lift data
// ---------------------------------------------------------------------------

/// A sampled point of the total space over one component of the base:
/// the fiber coordinate `ξ ∈ (ℚ mod 1)ⁿ`, canonicalised to `[0, 1)ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiberSample {
    pub component: usize,
    xi: Vec<BigRational>,
}

impl FiberSample {
    pub fn new(component: usize, xi: Vec<BigRational>) -> Self {
        FiberSample {
            component,
            xi: rep0_vec(&xi),
        }
    }

    pub fn xi(&self) -> &[BigRational] {
        &self.xi
    }

    /// The group action on fiber coordinates: `v · (z, ξ) = (z, ξ + v)`.
    pub fn translated(&self, v: &[BigRational]) -> FiberSample {
        FiberSample::new(
            self.component,
            self.xi.iter().zip(v).map(|(a, b)| a + b).collect(),
        )
    }
}

/// Integer offsets `n_λ(z, ξ)` for the lifts `w̃`. `Zero` is the default
/// lift; `Seeded` draws a deterministic pseudo-random offset for every
/// (vertex, sample) pair, optionally pinned to zero on each vertex's own
/// section sample — the normalisation the witness identities require.
#[derive(Debug, Clone)]
pub enum WLiftData {
    Zero,
    Explicit(BTreeMap<(VertexId, FiberSample), Vec<BigInt>>),
    Seeded {
        seed: u64,
        spread: i64,
        normalized: bool,
    },
}

fn fnv_mix(seed: u64, bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64 ^ seed.wrapping_mul(0x9e3779b97f4a7c15);
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl WLiftData {
    pub fn offset(&self, setup: &StandardSetup, lambda: VertexId, x: &FiberSample) -> Vec<BigInt> {
        match self {
            WLiftData::Zero => vec![BigInt::zero(); setup.n],
            WLiftData::Explicit(map) => map
                .get(&(lambda, x.clone()))
                .cloned()
                .unwrap_or_else(|| vec![BigInt::zero(); setup.n]),
            WLiftData::Seeded {
                seed,
                spread,
                normalized,
            } => {
                if *normalized {
                    if let Ok(own) = setup.section_sample(lambda) {
                        if own == *x {
                            return vec![BigInt::zero(); setup.n];
                        }
                    }
                }
                let mut key = format!("{}|{}", lambda.0, x.component);
                for q in x.xi() {
                    key.push_str(&format!("|{}/{}", q.numer(), q.denom()));
                }
                (0..setup.n)
                    .map(|l| {
                        let h = fnv_mix(*seed, format!("{key}#{l}").as_bytes());
                        BigInt::from((h % (2 * *spread as u64 + 1)) as i64 - *spread)
                    })
                    .collect()
            }
        }
    }
}

/// The lift `w̃_λ(z, ξ) = rep₀(ξ + s_{base(z),λ}(z)) + n_λ(z, ξ)`.
pub fn w_tilde(
    setup: &StandardSetup,
    wdata: &WLiftData,
    lambda: VertexId,
    x: &FiberSample,
) -> Result<Vec<BigRational>, BrauerError> {
    let comp = setup.component_of(lambda)?;
    if comp != x.component {
        return Err(BrauerError::ComponentMismatch {
            expected: comp,
            found: x.component,
        });
    }
    let anchor = setup.s_at(setup.base_of(comp), lambda)?;
    let offset = wdata.offset(setup, lambda, x);
    Ok(x.xi()
        .iter()
        .zip(&anchor)
        .zip(&offset)
        .map(|((xi, a), o)| rep0(&(xi + a)) + BigRational::from_integer(o.clone()))
        .collect())
}

/// The integer correction
/// `m_{λ₀λ₁}(s, x) = s_{λ₀λ₁}(z) − w̃_{λ₁}(x) + w̃_{λ₀}((−s)·x) + s`.
pub fn m_value(
    setup: &StandardSetup,
    wdata: &WLiftData,
    a: VertexId,
    b: VertexId,
    s_arg: &[BigRational],
    x: &FiberSample,
) -> Result<Vec<BigInt>, BrauerError> {
    let s_ab = setup.s_at(a, b)?;
    let w_b = w_tilde(setup, wdata, b, x)?;
    let neg_s: Vec<BigRational> = s_arg.iter().map(|q| -q).collect();
    let shifted = x.translated(&neg_s);
    let w_a = w_tilde(setup, wdata, a, &shifted)?;
    let mut out = Vec::with_capacity(setup.n);
    for l in 0..setup.n {
        let v = &s_ab[l] - &w_b[l] + &w_a[l] + &s_arg[l];
        if !v.is_integer() {
            return Err(BrauerError::NonInteger {
                a,
                b,
                component: l,
                value: v,
            });
        }
        out.push(v.to_integer());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Mackey pairing
// ---------------------------------------------------------------------------

/// The Mackey obstruction data: one strictly upper triangular `ℚ/ℤ` matrix
/// per base component.
#[derive(Debug, Clone)]
pub struct MackeyMatrix {
    pub per_component: BTreeMap<usize, UpperTriValue<Circle>>,
}

/// `M(m, l) = Σ_{i<j} f_{ij} m_i l_j` in `ℚ/ℤ`.
pub fn mackey_pairing(
    f: &UpperTriValue<Circle>,
    m: &[BigInt],
    l: &[BigInt],
) -> Result<Circle, BrauerError> {
    let mv = VectorValue::new(m.to_vec());
    let lv = VectorValue::new(l.to_vec());
    mackey_bilinear(f, &mv, &lv).map_err(|_| BrauerError::MissingComponent(0))
}

// ---------------------------------------------------------------------------
// Brauer triples
// ---------------------------------------------------------------------------

/// One generating term of a degree-2 triple. Pullback terms are alternating
/// extensions of base 2-cocycles with a rational representative; g-derived
/// terms come from a constant `M_n^u(ℚ)` matrix per component via
///
/// ```text
/// φ⁰²               = [g],
/// φ¹¹_{λ₀λ₁}(m)     = [Σ_{i<j} g_ij (m_i s_{λ₀λ₁,j} − s_{λ₀λ₁,i} m_j)],
/// φ²⁰_{λ₀λ₁λ₂}      = [Σ_{i<j} g_ij (s_{λ₀λ₁,i} s_{λ₁λ₂,j} − F_{λ₀λ₁λ₂,i} s_{λ₀λ₂,j})].
/// ```
#[derive(Debug, Clone)]
enum TripleTerm {
    Pullback {
        beta: Cochain<BigRational>,
    },
    GDerived {
        g: BTreeMap<usize, UpperTriValue<BigRational>>,
    },
}

/// A degree-2 triple over `ℚ/ℤ`, evaluable on arbitrary index tuples, with
/// a rational lift of every component.
#[derive(Debug, Clone)]
pub struct BrauerTriple {
    pub n: usize,
    terms: Vec<TripleTerm>,
}

fn add_upper(
    a: &UpperTriValue<BigRational>,
    b: &UpperTriValue<BigRational>,
) -> UpperTriValue<BigRational> {
    UpperTriValue::from_entries(
        a.n(),
        a.flat().iter().zip(b.flat()).map(|(x, y)| x + y).collect(),
    )
}

impl BrauerTriple {
    pub fn zero(n: usize) -> Self {
        BrauerTriple { n, terms: vec![] }
    }

    /// `(β, 0, 0)` for an alternating-extended Čech 2-cochain with rational
    /// representative `beta`; it must be a mod-1 cocycle (`∂̌β` integral).
    pub fn pullback(
        setup: &StandardSetup,
        beta: Cochain<BigRational>,
    ) -> Result<Self, BrauerError> {
        assert_eq!(beta.degree(), 2);
        let dbeta = cech_differential(&setup.nerve, &beta);
        for (s, v) in dbeta.iter() {
            if !v.is_integer() {
                return Err(BrauerError::NotACocycleTriple {
                    identity: "pullback coefficient is not a mod-1 cocycle",
                    context: format!("{s:?}"),
                });
            }
        }
        Ok(BrauerTriple {
            n: setup.n,
            terms: vec![TripleTerm::Pullback { beta }],
        })
    }

    /// The triple derived from `g ∈ M_n^u(ℚ)` per component.
    pub fn from_g(
        setup: &StandardSetup,
        g: BTreeMap<usize, UpperTriValue<BigRational>>,
    ) -> Result<Self, BrauerError> {
        for comp in 0..setup.nerve.num_components() {
            if !g.contains_key(&comp) {
                return Err(BrauerError::MissingComponent(comp));
            }
        }
        Ok(BrauerTriple {
            n: setup.n,
            terms: vec![TripleTerm::GDerived { g }],
        })
    }

    pub fn sum(&self, rhs: &BrauerTriple) -> BrauerTriple {
        assert_eq!(self.n, rhs.n);
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.clone());
        BrauerTriple { n: self.n, terms }
    }

    /// Rational lift of `φ²⁰` on an arbitrary tuple.
    pub fn phi20_lift(
        &self,
        setup: &StandardSetup,
        t: [VertexId; 3],
    ) -> Result<BigRational, BrauerError> {
        let mut acc = BigRational::zero();
        for term in &self.terms {
            match term {
                TripleTerm::Pullback { beta } => {
                    let v = alternating_value(&setup.nerve, beta, &t)
                        .map_err(|_| BrauerError::NotAnEdge(t[0], t[2]))?;
                    acc += v;
                }
                TripleTerm::GDerived { g } => {
                    let comp = setup.component_of(t[0])?;
                    let gm = &g[&comp];
                    let s01 = setup.s_at(t[0], t[1])?;
                    let s12 = setup.s_at(t[1], t[2])?;
                    let s02 = setup.s_at(t[0], t[2])?;
                    let f012 = setup.f_rational_at(t[0], t[1], t[2])?;
                    for (i, j, gij) in gm.iter_pairs() {
                        acc += gij * (&s01[i] * &s12[j] - &f012[i] * &s02[j]);
                    }
                }
            }
        }
        Ok(acc)
    }

    pub fn phi20(&self, setup: &StandardSetup, t: [VertexId; 3]) -> Result<Circle, BrauerError> {
        Ok(Circle::from_rational(&self.phi20_lift(setup, t)?))
    }

    /// Rational lift of `φ¹¹_{λ₀λ₁}(m)`; linear in `m` by construction.
    pub fn phi11_lift(
        &self,
        setup: &StandardSetup,
        a: VertexId,
        b: VertexId,
        m: &[BigInt],
    ) -> Result<BigRational, BrauerError> {
        let mut acc = BigRational::zero();
        for term in &self.terms {
            match term {
                TripleTerm::Pullback { .. } => {}
                TripleTerm::GDerived { g } => {
                    let comp = setup.component_of(a)?;
                    let gm = &g[&comp];
                    let s_ab = setup.s_at(a, b)?;
                    for (i, j, gij) in gm.iter_pairs() {
                        let mi = BigRational::from_integer(m[i].clone());
                        let mj = BigRational::from_integer(m[j].clone());
                        acc += gij * (mi * &s_ab[j] - &s_ab[i] * mj);
                    }
                }
            }
        }
        Ok(acc)
    }

    pub fn phi11(
        &self,
        setup: &StandardSetup,
        a: VertexId,
        b: VertexId,
        m: &[BigInt],
    ) -> Result<Circle, BrauerError> {
        Ok(Circle::from_rational(&self.phi11_lift(setup, a, b, m)?))
    }

    /// Rational lift of `φ⁰²` on a component.
    pub fn phi02_lift(&self, component: usize) -> UpperTriValue<BigRational> {
        let mut acc = UpperTriValue::zeros(self.n);
        for term in &self.terms {
            if let TripleTerm::GDerived { g } = term {
                acc = add_upper(&acc, &g[&component]);
            }
        }
        acc
    }

    pub fn phi02(&self, component: usize) -> UpperTriValue<Circle> {
        self.phi02_lift(component).map(Circle::from_rational)
    }

    /// Check the `D_F`-cocycle identities on every arbitrary tuple whose
    /// support spans a simplex of the nerve. `φ¹¹` is linear in `m`, so
    /// basis vectors suffice for the middle identity.
    pub fn validate(&self, setup: &StandardSetup) -> Result<(), BrauerError> {
        let nerve = &setup.nerve;
        let n = self.n;
        // Middle identity on triples: ∂̌φ¹¹(m) = Q(m, F) − Q(F, m).
        for t in arbitrary_tuples(nerve, 3) {
            let comp = setup.component_of(t[0])?;
            let f = setup.f_at(t[0], t[1], t[2])?;
            let q = self.phi02(comp);
            for l in 0..n {
                let e_l = unit_vec(n, l);
                let lhs = self
                    .phi11(setup, t[1], t[2], &e_l)?
                    .sub(&self.phi11(setup, t[0], t[2], &e_l)?)
                    .add(&self.phi11(setup, t[0], t[1], &e_l)?);
                let rhs = mackey_pairing(&q, &e_l, f.components())?.sub(&mackey_pairing(
                    &q,
                    f.components(),
                    &e_l,
                )?);
                if lhs != rhs {
                    return Err(BrauerError::NotACocycleTriple {
                        identity: "∂̌φ¹¹ = antisymmetrised F-pairing",
                        context: format!("tuple {t:?}, component {l}"),
                    });
                }
            }
        }
        // Top identity on quadruples: ∂̌φ²⁰ = φ¹¹(F₁₂₃) + Σ φ⁰²_ij C_ij.
        for t in arbitrary_tuples(nerve, 4) {
            let comp = setup.component_of(t[0])?;
            let q = self.phi02(comp);
            let lhs = self
                .phi20(setup, [t[1], t[2], t[3]])?
                .sub(&self.phi20(setup, [t[0], t[2], t[3]])?)
                .add(&self.phi20(setup, [t[0], t[1], t[3]])?)
                .sub(&self.phi20(setup, [t[0], t[1], t[2]])?);
            let f123 = setup.f_at(t[1], t[2], t[3])?;
            let f012 = setup.f_at(t[0], t[1], t[2])?;
            let f023 = setup.f_at(t[0], t[2], t[3])?;
            let f013 = setup.f_at(t[0], t[1], t[3])?;
            let mut rhs = self.phi11(setup, t[0], t[1], f123.components())?;
            for (i, j, fij) in q.iter_pairs() {
                let c =
                    f012.component(i) * f023.component(j) - f123.component(i) * f013.component(j);
                rhs = rhs.add(&fij.int_mul(&c));
            }
            if lhs != rhs {
                return Err(BrauerError::NotACocycleTriple {
                    identity: "∂̌φ²⁰ = φ¹¹(F) + ⟨φ⁰², C(F)⟩",
                    context: format!("tuple {t:?}"),
                });
            }
        }
        Ok(())
    }
}

/// All tuples of the given length whose entries come from a single simplex
/// of the nerve (repetitions allowed) — the finite domain on which the
/// arbitrary-tuple formulas are exercised.
pub fn arbitrary_tuples(nerve: &Nerve, len: usize) -> Vec<Vec<VertexId>> {
    let mut seen = std::collections::BTreeSet::new();
    for dim in 0..=nerve.max_dim() {
        for s in nerve.simplices(dim) {
            let verts = s.vertices();
            let mut stack: Vec<Vec<VertexId>> = vec![vec![]];
            for _ in 0..len {
                let mut next = Vec::new();
                for prefix in &stack {
                    for &v in verts {
                        let mut p = prefix.clone();
                        p.push(v);
                        next.push(p);
                    }
                }
                stack = next;
            }
            seen.extend(stack);
        }
    }
    seen.into_iter().collect()
}

// ---------------------------------------------------------------------------
// The surjectivity cocycle and its checks
// ---------------------------------------------------------------------------

/// Evaluator for the Tu-Čech 2-cocycle
///
/// ```text
/// φ(λ₀λ₁λ₂; s, t, x) = φ²⁰_{λ₀λ₁λ₂} + φ¹¹_{λ₀λ₁}(m_{λ₁λ₂}(t,x))
///                      − Q(m_{λ₁λ₂}(t,x), m_{λ₀λ₁}(s,(−t)x))
///                      + Q(F_{λ₀λ₁λ₂}, m_{λ₀λ₂}(s+t,x)).
/// ```
///
/// The arrow-cover cell index of the underlying Tu cochain only affects
/// domains, never values, so it is not an argument of the evaluator.
pub struct SurjectivityCocycle<'a> {
    pub triple: &'a BrauerTriple,
    pub setup: &'a StandardSetup,
    pub wdata: &'a WLiftData,
}

impl SurjectivityCocycle<'_> {
    pub fn eval(
        &self,
        t: [VertexId; 3],
        s_arg: &[BigRational],
        t_arg: &[BigRational],
        x: &FiberSample,
    ) -> Result<Circle, BrauerError> {
        let setup = self.setup;
        let q = self.triple.phi02(x.component);
        let m12 = m_value(setup, self.wdata, t[1], t[2], t_arg, x)?;
        let neg_t: Vec<BigRational> = t_arg.iter().map(|v| -v).collect();
        let m01 = m_value(setup, self.wdata, t[0], t[1], s_arg, &x.translated(&neg_t))?;
        let st: Vec<BigRational> = s_arg.iter().zip(t_arg).map(|(a, b)| a + b).collect();
        let m02 = m_value(setup, self.wdata, t[0], t[2], &st, x)?;
        let f012 = setup.f_at(t[0], t[1], t[2])?;

        let mut acc = self.triple.phi20(setup, t)?;
        acc = acc.add(&self.triple.phi11(setup, t[0], t[1], &m12)?);
        acc = acc.sub(&mackey_pairing(&q, &m12, &m01)?);
        acc = acc.add(&mackey_pairing(&q, f012.components(), &m02)?);
        Ok(acc)
    }
}

/// One sample of the closure check: an index quadruple with support in a
/// simplex, group arguments `(r, s, t)` and a fiber point.
#[derive(Debug, Clone)]
pub struct ClosureSample {
    pub quad: [VertexId; 4],
    pub r: Vec<BigRational>,
    pub s: Vec<BigRational>,
    pub t: Vec<BigRational>,
    pub x: FiberSample,
}

#[derive(Debug, Clone)]
pub struct ClosureFailure {
    pub sample: ClosureSample,
    pub value: Circle,
}

#[derive(Debug)]
pub struct ClosureReport {
    pub seed: Option<u64>,
    pub samples: usize,
    pub failures: Vec<ClosureFailure>,
}

impl ClosureReport {
    pub fn all_zero(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluate `(∂_Tu φ)(r, s, t, x)` pointwise on every sample:
/// `φ_{λ₁λ₂λ₃}(s,t,x) − φ_{λ₀λ₂λ₃}(r+s,t,x) + φ_{λ₀λ₁λ₃}(r,s+t,x) − φ_{λ₀λ₁λ₂}(r,s,(−t)x)`.
pub fn check_tu_closure(
    phi: &SurjectivityCocycle<'_>,
    samples: &[ClosureSample],
    seed: Option<u64>,
) -> Result<ClosureReport, BrauerError> {
    let mut failures = Vec::new();
    for sample in samples {
        let [l0, l1, l2, l3] = sample.quad;
        let rs: Vec<BigRational> = sample.r.iter().zip(&sample.s).map(|(a, b)| a + b).collect();
        let st: Vec<BigRational> = sample.s.iter().zip(&sample.t).map(|(a, b)| a + b).collect();
        let neg_t: Vec<BigRational> = sample.t.iter().map(|v| -v).collect();
        let x_shift = sample.x.translated(&neg_t);

        let term0 = phi.eval([l1, l2, l3], &sample.s, &sample.t, &sample.x)?;
        let term1 = phi.eval([l0, l2, l3], &rs, &sample.t, &sample.x)?;
        let term2 = phi.eval([l0, l1, l3], &sample.r, &st, &sample.x)?;
        let term3 = phi.eval([l0, l1, l2], &sample.r, &sample.s, &x_shift)?;
        let value = term0.sub(&term1).add(&term2).sub(&term3);
        if !value.is_zero() {
            failures.push(ClosureFailure {
                sample: sample.clone(),
                value,
            });
        }
    }
    Ok(ClosureReport {
        seed,
        samples: samples.len(),
        failures,
    })
}

/// Deterministic sample-plan generation from a seed: index quadruples drawn
/// from simplex supports (degenerate variants included), rational group
/// triples, and random fiber points.
pub fn seeded_closure_samples(
    setup: &StandardSetup,
    seed: u64,
    count: usize,
) -> Vec<ClosureSample> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let nerve = &setup.nerve;
    let mut simplices = Vec::new();
    for dim in 0..=nerve.max_dim() {
        simplices.extend(nerve.simplices(dim).iter().cloned());
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let s = &simplices[rng.random_range(0..simplices.len())];
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            s.vertices()[rng.random_range(0..s.vertices().len())]
        };
        let quad = [
            pick(&mut rng),
            pick(&mut rng),
            pick(&mut rng),
            pick(&mut rng),
        ];
        let rand_vec = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<BigRational> {
            (0..setup.n)
                .map(|_| {
                    BigRational::new(
                        BigInt::from(rng.random_range(-12i64..=12)),
                        BigInt::from(rng.random_range(1i64..=6)),
                    )
                })
                .collect()
        };
        let r = rand_vec(&mut rng);
        let sv = rand_vec(&mut rng);
        let t = rand_vec(&mut rng);
        let xi = rand_vec(&mut rng);
        let comp = setup.component_of(quad[0]).unwrap();
        out.push(ClosureSample {
            quad,
            r,
            s: sv,
            t,
            x: FiberSample::new(comp, xi),
        });
    }
    out
}

// ---------------------------------------------------------------------------
// Witness identities
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct TuDimRedReport {
    pub seed: u64,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl TuDimRedReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The degree-(0,1) witness of the surjectivity argument:
/// `τ⁰¹_λ(m) = −φ²⁰(λ,λ,λ) − Q(m, m)`. Its partner `τ¹⁰` is identically
/// zero (additively).
pub fn tudimred_tau01(
    triple: &BrauerTriple,
    setup: &StandardSetup,
    lambda: VertexId,
    m: &[BigInt],
) -> Result<Circle, BrauerError> {
    let comp = setup.component_of(lambda)?;
    let q = triple.phi02(comp);
    Ok(triple
        .phi20(setup, [lambda, lambda, lambda])?
        .neg()
        .sub(&mackey_pairing(&q, m, m)?))
}

/// Verify the witness maps `(τ¹⁰ ≡ 0, τ⁰¹)` pointwise against the three
/// identities tying the triple to the Tu-Čech cocycle, with the
/// degenerate-tuple φ-values supplied by the evaluator itself. The
/// identities hold for lift data normalised to vanish on each vertex's own
/// section sample.
pub fn tudimred_witnesses(
    triple: &BrauerTriple,
    setup: &StandardSetup,
    wdata: &WLiftData,
    seed: u64,
    samples: usize,
) -> Result<TuDimRedReport, BrauerError> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let phi = SurjectivityCocycle {
        triple,
        setup,
        wdata,
    };
    let nerve = &setup.nerve;
    let n = setup.n;
    let tau01 = |lambda: VertexId, m: &[BigInt]| -> Result<Circle, BrauerError> {
        tudimred_tau01(triple, setup, lambda, m)
    };
    let rat = |m: &[BigInt]| -> Vec<BigRational> {
        m.iter()
            .map(|v| BigRational::from_integer(v.clone()))
            .collect()
    };
    let neg = |v: &[BigRational]| -> Vec<BigRational> { v.iter().map(|q| -q).collect() };
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let edges: Vec<&Simplex> = nerve.simplices(1).iter().collect();
    let vertices = nerve.vertices().to_vec();

    for _ in 0..samples {
        let rand_int_vec = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<BigInt> {
            (0..n)
                .map(|_| BigInt::from(rng.random_range(-4i64..=4)))
                .collect()
        };

        // Identity 1 at a random vertex with random integer arguments.
        let l0 = vertices[rng.random_range(0..vertices.len())];
        let m = rand_int_vec(&mut rng);
        let l = rand_int_vec(&mut rng);
        let x0 = setup.section_sample(l0)?;
        let comp = setup.component_of(l0)?;
        let q = triple.phi02(comp);
        let ml: Vec<BigInt> = m.iter().zip(&l).map(|(a, b)| a + b).collect();
        let lhs = mackey_pairing(&q, &m, &l)?;
        let rhs = tau01(l0, &l)?
            .add(&tau01(l0, &m)?)
            .sub(&tau01(l0, &ml)?)
            .add(&phi.eval([l0, l0, l0], &rat(&m), &rat(&l), &x0)?);
        checks += 1;
        if lhs != rhs {
            failures.push(format!(
                "identity 1 fails at λ₀ = {l0}, m = {m:?}, l = {l:?}"
            ));
        }

        // Identity 2 on a random edge.
        let e = edges[rng.random_range(0..edges.len())];
        let (a, b) = (e.vertex(0), e.vertex(1));
        let m = rand_int_vec(&mut rng);
        let x1 = setup.section_sample(b)?;
        let s01 = setup.s_at(a, b)?;
        let lhs = triple.phi11(setup, a, b, &m)?;
        let rhs = tau01(b, &m)?
            .sub(&tau01(a, &m)?)
            .add(&phi.eval([a, b, b], &neg(&s01), &rat(&m), &x1)?)
            .sub(&phi.eval([a, a, b], &rat(&m), &neg(&s01), &x1)?);
        checks += 1;
        if lhs != rhs {
            failures.push(format!("identity 2 fails at ({a}, {b}), m = {m:?}"));
        }

        // Identity 3 on a random simplex-supported triple.
        let [l0, l1, l2] = {
            let dim = rng.random_range(0..=nerve.max_dim());
            let list = nerve.simplices(dim);
            let s = &list[rng.random_range(0..list.len())];
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                s.vertices()[rng.random_range(0..s.vertices().len())]
            };
            [pick(&mut rng), pick(&mut rng), pick(&mut rng)]
        };
        let x2 = setup.section_sample(l2)?;
        let s01 = setup.s_at(l0, l1)?;
        let s12 = setup.s_at(l1, l2)?;
        let s02 = setup.s_at(l0, l2)?;
        let f012 = setup.f_at(l0, l1, l2)?;
        let neg_f: Vec<BigInt> = f012.components().iter().map(|v| -v).collect();
        let lhs = triple.phi20(setup, [l0, l1, l2])?;
        let rhs = tau01(l0, &neg_f)?
            .neg()
            .add(&phi.eval([l0, l1, l2], &neg(&s01), &neg(&s12), &x2)?)
            .sub(&phi.eval([l0, l0, l2], &rat(&neg_f), &neg(&s02), &x2)?);
        checks += 1;
        if lhs != rhs {
            failures.push(format!("identity 3 fails at ({l0}, {l1}, {l2})"));
        }
    }
    Ok(TuDimRedReport {
        seed,
        checks,
        failures,
    })
}

// ---------------------------------------------------------------------------
// Lift independence
// ---------------------------------------------------------------------------

/// Shorthand for [`BrauerTriple::from_g`].
pub fn lift_triple_from_g(
    setup: &StandardSetup,
    g: BTreeMap<usize, UpperTriValue<BigRational>>,
) -> Result<BrauerTriple, BrauerError> {
    BrauerTriple::from_g(setup, g)
}

/// Apply `D_F` over `ℚ` to the rational lift of a g-derived triple and read
/// off the three integer components (the connecting-map computation). The
/// contract is that all three come back identically zero.
pub fn bockstein_of_g_triple(
    setup: &StandardSetup,
    g: &BTreeMap<usize, UpperTriValue<BigRational>>,
) -> Result<
    (
        Cochain<BigInt>,
        Cochain<VectorValue<BigInt>>,
        Cochain<UpperTriValue<BigInt>>,
    ),
    BrauerError,
> {
    let triple = BrauerTriple::from_g(setup, g.clone())?;
    let nerve = &setup.nerve;
    let n = setup.n;

    let mut col0 = Cochain::new(2, BigRational::zero());
    for s in nerve.simplices(2) {
        col0.set(
            s.clone(),
            triple.phi20_lift(setup, [s.vertex(0), s.vertex(1), s.vertex(2)])?,
        );
    }
    let mut col1 = Cochain::new(1, VectorValue::zeros(n));
    for s in nerve.simplices(1) {
        let comps: Vec<BigRational> = (0..n)
            .map(|l| triple.phi11_lift(setup, s.vertex(0), s.vertex(1), &unit_vec(n, l)))
            .collect::<Result<_, _>>()?;
        col1.set(s.clone(), VectorValue::new(comps));
    }
    let mut col2 = Cochain::new(0, UpperTriValue::zeros(n));
    for s in nerve.simplices(0) {
        let comp = setup.component_of(s.vertex(0))?;
        col2.set(s.clone(), triple.phi02_lift(comp));
    }

    let lift = DimRedCochain {
        degree: 2,
        col0,
        col1: Some(col1),
        col2: Some(col2),
    };
    let image = d_f(nerve, setup.twist(), setup.steenrod(), &lift, true)
        .expect("degrees are consistent by construction");

    let to_int = |q: &BigRational| -> Result<BigInt, BrauerError> {
        if !q.is_integer() {
            return Err(BrauerError::NonInteger {
                a: VertexId(0),
                b: VertexId(0),
                component: 0,
                value: q.clone(),
            });
        }
        Ok(q.to_integer())
    };
    let mut delta30 = Cochain::new(3, BigInt::zero());
    for (s, v) in image.col0.iter() {
        delta30.set(s.clone(), to_int(v)?);
    }
    let mut delta21 = Cochain::new(2, VectorValue::zeros(n));
    for (s, v) in image.col1.as_ref().unwrap().iter() {
        let ints: Vec<BigInt> = v
            .components()
            .iter()
            .map(to_int)
            .collect::<Result<_, _>>()?;
        delta21.set(s.clone(), VectorValue::new(ints));
    }
    let mut delta12 = Cochain::new(1, UpperTriValue::zeros(n));
    for (s, v) in image.col2.as_ref().unwrap().iter() {
        let ints: Vec<BigInt> = v.flat().iter().map(to_int).collect::<Result<_, _>>()?;
        delta12.set(s.clone(), UpperTriValue::from_entries(n, ints));
    }
    Ok((delta30, delta21, delta12))
}

// ---------------------------------------------------------------------------
// Seeded generation
// ---------------------------------------------------------------------------

/// A random standard setup on the nerve: `s = η + ∂̌h` for a random integer
/// 1-cochain `η` and a random rational 0-cochain `h`, so `∂̌s = ∂̌η` is an
/// integer cocycle while `s` itself has nontrivial rational parts.
pub fn seeded_setup(nerve: &Nerve, n: usize, seed: u64) -> Result<StandardSetup, BrauerError> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut h: BTreeMap<VertexId, Vec<BigRational>> = BTreeMap::new();
    for v in nerve.vertices() {
        h.insert(
            *v,
            (0..n)
                .map(|_| {
                    BigRational::new(
                        BigInt::from(rng.random_range(-8i64..=8)),
                        BigInt::from(rng.random_range(1i64..=5)),
                    )
                })
                .collect(),
        );
    }
    let mut entries = Vec::new();
    for e in nerve.simplices(1) {
        let (a, b) = (e.vertex(0), e.vertex(1));
        let value: Vec<BigRational> = (0..n)
            .map(|l| {
                let eta = BigRational::from_integer(BigInt::from(rng.random_range(-3i64..=3)));
                eta + &h[&b][l] - &h[&a][l]
            })
            .collect();
        entries.push(((a, b), value));
    }
    StandardSetup::new(nerve.clone(), n, entries, BTreeMap::new())
}

/// A seeded pullback 2-cochain that is a mod-1 cocycle: random rational
/// values when the nerve has no 3-simplices, the coboundary of a random
/// rational 1-cochain otherwise.
pub fn seeded_pullback(setup: &StandardSetup, seed: u64) -> BrauerTriple {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let nerve = &setup.nerve;
    let rand_rat = |rng: &mut rand_chacha::ChaCha8Rng| {
        BigRational::new(
            BigInt::from(rng.random_range(-9i64..=9)),
            BigInt::from(rng.random_range(1i64..=7)),
        )
    };
    let beta = if nerve.simplex_count(3) == 0 {
        let mut beta = Cochain::new(2, BigRational::zero());
        for s in nerve.simplices(2) {
            beta.set(s.clone(), rand_rat(&mut rng));
        }
        beta
    } else {
        let mut eta = Cochain::new(1, BigRational::zero());
        for s in nerve.simplices(1) {
            eta.set(s.clone(), rand_rat(&mut rng));
        }
        cech_differential(nerve, &eta)
    };
    BrauerTriple::pullback(setup, beta).expect("constructed as a mod-1 cocycle")
}

/// A seeded random `g ∈ M_n^u(ℚ)` per component.
pub fn seeded_g(setup: &StandardSetup, seed: u64) -> BTreeMap<usize, UpperTriValue<BigRational>> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for comp in 0..setup.nerve.num_components() {
        let entries: Vec<BigRational> = (0..upper_tri_rank(setup.n))
            .map(|_| {
                BigRational::new(
                    BigInt::from(rng.random_range(-9i64..=9)),
                    BigInt::from(rng.random_range(1i64..=7)),
                )
            })
            .collect();
        out.insert(comp, UpperTriValue::from_entries(setup.n, entries));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerve::build_nerve;
    use std::collections::BTreeSet;

    fn facets(sets: &[&[u32]]) -> Vec<BTreeSet<u32>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    fn boundary_tetra() -> Nerve {
        build_nerve(&facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn v(id: u32) -> VertexId {
        VertexId(id)
    }

    #[test]
    fn seeded_setups_validate_on_the_fixtures() {
        let nerve = boundary_tetra();
        for seed in 0..5 {
            let setup = seeded_setup(&nerve, 2, seed).unwrap();
            // Antisymmetry of the extension and s_λλ = 0.
            let ab = setup.s_at(v(0), v(1)).unwrap();
            let ba = setup.s_at(v(1), v(0)).unwrap();
            assert_eq!(ab[0], -ba[0].clone());
            assert!(setup.s_at(v(2), v(2)).unwrap().iter().all(|q| q.is_zero()));
        }
    }

    #[test]
    fn setup_rejects_non_integral_coboundary() {
        let nerve = boundary_tetra();
        let entries = vec![((v(0), v(1)), vec![rat(1, 3)])];
        let err = StandardSetup::new(nerve, 1, entries, BTreeMap::new()).unwrap_err();
        assert!(matches!(err, BrauerError::CoboundaryNotIntegral { .. }));
    }

    #[test]
    fn mwiths_normalizations() {
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 11).unwrap();
        let wdata = WLiftData::Zero;
        for e in setup.nerve.simplices(1) {
            let (a, b) = (e.vertex(0), e.vertex(1));
            // m_{λ₀λ₁}(−s_{λ₀λ₁}, σ_{λ₁}) = 0 with default offsets.
            let s_ab = setup.s_at(a, b).unwrap();
            let neg: Vec<BigRational> = s_ab.iter().map(|q| -q).collect();
            let x1 = setup.section_sample(b).unwrap();
            let m = m_value(&setup, &wdata, a, b, &neg, &x1).unwrap();
            assert!(
                m.iter().all(|z| z.is_zero()),
                "first normalisation at ({a}, {b})"
            );
        }
        // m_{λλ}(k, σ_λ) = k for integer k, with any offsets.
        let wdata = WLiftData::Seeded {
            seed: 5,
            spread: 3,
            normalized: false,
        };
        for lam in setup.nerve.vertices() {
            let x = setup.section_sample(*lam).unwrap();
            let k: Vec<BigRational> = vec![rat(3, 1), rat(-2, 1)];
            let m = m_value(&setup, &wdata, *lam, *lam, &k, &x).unwrap();
            assert_eq!(m, vec![BigInt::from(3), BigInt::from(-2)]);
        }
    }

    #[test]
    fn m_values_are_integers_and_coherent_for_random_offsets() {
        use rand::Rng;
        use rand::SeedableRng;
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 3).unwrap();
        let wdata = WLiftData::Seeded {
            seed: 17,
            spread: 4,
            normalized: false,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let rand_rat = |rng: &mut rand_chacha::ChaCha8Rng| {
            rat(rng.random_range(-10..=10), rng.random_range(1..=6))
        };
        for _ in 0..100 {
            let tri = &setup.nerve.simplices(2)[rng.random_range(0..setup.nerve.simplex_count(2))];
            let (a, b, c) = (tri.vertex(0), tri.vertex(1), tri.vertex(2));
            let s: Vec<BigRational> = (0..2).map(|_| rand_rat(&mut rng)).collect();
            let t: Vec<BigRational> = (0..2).map(|_| rand_rat(&mut rng)).collect();
            let x = FiberSample::new(
                setup.component_of(a).unwrap(),
                (0..2).map(|_| rand_rat(&mut rng)).collect(),
            );
            let neg_t: Vec<BigRational> = t.iter().map(|q| -q).collect();
            let st: Vec<BigRational> = s.iter().zip(&t).map(|(p, q)| p + q).collect();
            // Coherence law with defect F.
            let m01 = m_value(&setup, &wdata, a, b, &s, &x.translated(&neg_t)).unwrap();
            let m12 = m_value(&setup, &wdata, b, c, &t, &x).unwrap();
            let m02 = m_value(&setup, &wdata, a, c, &st, &x).unwrap();
            let f = setup.f_at(a, b, c).unwrap();
            for l in 0..2 {
                assert_eq!(&m01[l] + &m12[l] - &m02[l], f.components()[l].clone());
            }
        }
    }

    #[test]
    fn g_derived_and_pullback_triples_validate() {
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 7).unwrap();
        let g = seeded_g(&setup, 19);
        let triple = BrauerTriple::from_g(&setup, g).unwrap();
        triple.validate(&setup).unwrap();

        // Pullback of a rational 2-cochain; on the boundary tetrahedron any
        // 2-cochain is a mod-1 cocycle.
        let mut beta = Cochain::new(2, BigRational::zero());
        beta.set(Simplex::from_ids(&[0, 1, 2]).unwrap(), rat(1, 3));
        let pb = BrauerTriple::pullback(&setup, beta).unwrap();
        pb.validate(&setup).unwrap();

        let sum = triple.sum(&pb);
        sum.validate(&setup).unwrap();

        // n = 1 g-derived triples are zero.
        let setup1 = seeded_setup(&nerve, 1, 7).unwrap();
        let g1 = seeded_g(&setup1, 5);
        let t1 = BrauerTriple::from_g(&setup1, g1).unwrap();
        assert!(t1.phi20(&setup1, [v(0), v(1), v(2)]).unwrap().is_zero());
    }

    #[test]
    fn phi11_hand_value() {
        // n = 2, g₁₂ = 1/3 constant: φ¹¹_{λ₀λ₁}(e₁) = (1/3)·s_{λ₀λ₁,2}.
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 29).unwrap();
        let mut g = BTreeMap::new();
        let mut m = UpperTriValue::zeros(2);
        m.set_entry(0, 1, rat(1, 3));
        g.insert(0, m);
        let triple = BrauerTriple::from_g(&setup, g).unwrap();
        let e1 = unit_vec(2, 0);
        let s01 = setup.s_at(v(0), v(1)).unwrap();
        let got = triple.phi11_lift(&setup, v(0), v(1), &e1).unwrap();
        assert_eq!(got, rat(1, 3) * &s01[1]);
    }

    #[test]
    fn zero_triple_evaluates_to_zero_and_pullback_is_group_independent() {
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 31).unwrap();
        let wdata = WLiftData::Zero;
        let zero = BrauerTriple::zero(2);
        let phi = SurjectivityCocycle {
            triple: &zero,
            setup: &setup,
            wdata: &wdata,
        };
        let x = setup.section_sample(v(0)).unwrap();
        let val = phi
            .eval(
                [v(0), v(1), v(2)],
                &[rat(1, 2), rat(0, 1)],
                &[rat(1, 3), rat(2, 1)],
                &x,
            )
            .unwrap();
        assert!(val.is_zero());

        // Pullback triples evaluate to β no matter the group arguments.
        let mut beta = Cochain::new(2, BigRational::zero());
        beta.set(Simplex::from_ids(&[0, 1, 2]).unwrap(), rat(2, 5));
        let pb = BrauerTriple::pullback(&setup, beta).unwrap();
        let phi = SurjectivityCocycle {
            triple: &pb,
            setup: &setup,
            wdata: &wdata,
        };
        for (s_arg, t_arg) in [
            (vec![rat(1, 2), rat(3, 4)], vec![rat(0, 1), rat(5, 6)]),
            (vec![rat(7, 2), rat(-1, 4)], vec![rat(2, 3), rat(0, 1)]),
        ] {
            let val = phi.eval([v(0), v(1), v(2)], &s_arg, &t_arg, &x).unwrap();
            assert_eq!(val, Circle::from_parts(2, 5));
        }
    }

    #[test]
    fn closure_holds_for_g_derived_triples_with_arbitrary_offsets() {
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 41).unwrap();
        let g = seeded_g(&setup, 43);
        let triple = BrauerTriple::from_g(&setup, g).unwrap();
        let wdata = WLiftData::Seeded {
            seed: 47,
            spread: 3,
            normalized: false,
        };
        let phi = SurjectivityCocycle {
            triple: &triple,
            setup: &setup,
            wdata: &wdata,
        };
        let samples = seeded_closure_samples(&setup, 53, 120);
        let report = check_tu_closure(&phi, &samples, Some(53)).unwrap();
        assert!(report.all_zero(), "{:?}", report.failures.first());
    }

    #[test]
    fn tudimred_identities_hold_with_normalized_offsets() {
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 61).unwrap();
        let g = seeded_g(&setup, 67);
        let triple = BrauerTriple::from_g(&setup, g).unwrap();
        let wdata = WLiftData::Seeded {
            seed: 71,
            spread: 3,
            normalized: true,
        };
        let report = tudimred_witnesses(&triple, &setup, &wdata, 73, 60).unwrap();
        assert!(report.all_hold(), "{:?}", report.failures.first());
    }

    #[test]
    fn tudimred_identities_are_trivial_for_the_zero_triple() {
        // All φ-terms vanish, so every identity reduces to 0 = 0 no matter
        // how the lifts wind.
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 77).unwrap();
        let zero = BrauerTriple::zero(2);
        let wdata = WLiftData::Seeded {
            seed: 79,
            spread: 4,
            normalized: false,
        };
        let report = tudimred_witnesses(&zero, &setup, &wdata, 83, 20).unwrap();
        assert!(report.all_hold());
        assert!(
            tudimred_tau01(&zero, &setup, v(0), &[BigInt::from(3), BigInt::from(-1)])
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn tudimred_identities_need_the_section_normalization() {
        // With offsets that do not vanish on the section samples, the
        // antisymmetrised Mackey terms survive and the edge identity fails
        // for a rank-2 g-derived triple.
        let nerve = boundary_tetra();
        let setup = seeded_setup(&nerve, 2, 61).unwrap();
        let g = seeded_g(&setup, 67);
        let triple = BrauerTriple::from_g(&setup, g).unwrap();
        let wdata = WLiftData::Seeded {
            seed: 71,
            spread: 3,
            normalized: false,
        };
        let report = tudimred_witnesses(&triple, &setup, &wdata, 73, 60).unwrap();
        assert!(!report.all_hold());
    }

    #[test]
    fn bockstein_of_g_triples_vanishes() {
        let nerve = boundary_tetra();
        for seed in [0u64, 1, 2] {
            let setup = seeded_setup(&nerve, 2, seed).unwrap();
            let g = seeded_g(&setup, seed + 100);
            let (d30, d21, d12) = bockstein_of_g_triple(&setup, &g).unwrap();
            assert!(d30.is_zero(), "Δ³⁰ must vanish");
            assert!(d21.is_zero(), "Δ²¹ must vanish");
            assert!(d12.is_zero(), "Δ¹² must vanish");
        }
        // g = 0 trivially maps to (0, 0, 0).
        let setup = seeded_setup(&nerve, 2, 9).unwrap();
        let mut g = BTreeMap::new();
        g.insert(0, UpperTriValue::zeros(2));
        let (d30, d21, d12) = bockstein_of_g_triple(&setup, &g).unwrap();
        assert!(d30.is_zero() && d21.is_zero() && d12.is_zero());
    }

    #[test]
    fn mackey_pairing_values() {
        let mut f = UpperTriValue::zeros(2);
        f.set_entry(0, 1, Circle::from_parts(1, 2));
        let e1 = [BigInt::from(1), BigInt::zero()];
        let e2 = [BigInt::zero(), BigInt::from(1)];
        assert_eq!(
            mackey_pairing(&f, &e1, &e2).unwrap(),
            Circle::from_parts(1, 2)
        );
        let zero = [BigInt::zero(), BigInt::zero()];
        assert!(mackey_pairing(&f, &zero, &e2).unwrap().is_zero());
    }
}
