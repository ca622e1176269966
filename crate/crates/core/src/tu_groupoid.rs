//! Finite-groupoid Tu-Čech machinery: transformation groupoids, covers of
//! object and arrow spaces, the presimplicial index sets `Λ′ₙ` with their
//! face action, the Tu differential, and brute-force low-degree cohomology.
//!
//! A degree-`n` cochain assigns a `ℚ/ℤ` value to every *cell*: a pair of an
//! index `λ ∈ Λ′ₙ` and an `n`-tuple of composable arrows lying in `U^n_λ`.
//! The face maps compose adjacent arrows (dropping the first or last at the
//! endpoints), and the index face action deletes every occurrence of the
//! removed vertex index.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::coefficients::{Circle, CoefficientRing};
use crate::homology::{self, CohomologyGroup, IntMat, MatrixComplex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TuError {
    #[error("groupoid axiom violated: {0}")]
    InvalidGroupoid(String),
    #[error("cover does not cover the {0} space")]
    NotACover(&'static str),
    #[error("face index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("cochain value missing on a required cell")]
    CellUndefined,
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("cell enumeration exceeds budget: {cells} cells > {budget}")]
    TooLarge { cells: usize, budget: usize },
}

// ---------------------------------------------------------------------------
// Groupoids
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

/// A finite groupoid with explicit composition, identity and inverse tables.
/// `compose(a, b)` is "a then b": defined when `target(a) = source(b)`.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    num_objects: usize,
    arrows: Vec<Arrow>,
    compose: BTreeMap<(usize, usize), usize>,
    identities: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn new(
        num_objects: usize,
        arrows: Vec<Arrow>,
        compose: BTreeMap<(usize, usize), usize>,
        identities: Vec<usize>,
        inverses: Vec<usize>,
    ) -> Result<Self, TuError> {
        let g = FiniteGroupoid {
            num_objects,
            arrows,
            compose,
            identities,
            inverses,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), TuError> {
        let fail = |msg: String| Err(TuError::InvalidGroupoid(msg));
        for (i, a) in self.arrows.iter().enumerate() {
            if a.source >= self.num_objects || a.target >= self.num_objects {
                return fail(format!("arrow {i} has out-of-range endpoints"));
            }
        }
        if self.identities.len() != self.num_objects {
            return fail("one identity arrow per object required".into());
        }
        for (x, &e) in self.identities.iter().enumerate() {
            if self.arrows[e].source != x || self.arrows[e].target != x {
                return fail(format!("identity of object {x} has wrong endpoints"));
            }
        }
        if self.inverses.len() != self.arrows.len() {
            return fail("one inverse per arrow required".into());
        }
        // Composition totality on composable pairs, endpoints, associativity.
        for a in 0..self.arrows.len() {
            for b in 0..self.arrows.len() {
                let composable = self.arrows[a].target == self.arrows[b].source;
                match self.compose.get(&(a, b)) {
                    Some(&ab) if composable => {
                        if self.arrows[ab].source != self.arrows[a].source
                            || self.arrows[ab].target != self.arrows[b].target
                        {
                            return fail(format!("compose({a},{b}) has wrong endpoints"));
                        }
                    }
                    Some(_) => return fail(format!("compose({a},{b}) defined but not composable")),
                    None if composable => {
                        return fail(format!("compose({a},{b}) missing"));
                    }
                    None => {}
                }
            }
        }
        for a in 0..self.arrows.len() {
            let (s, t) = (self.arrows[a].source, self.arrows[a].target);
            if self.compose[&(self.identities[s], a)] != a
                || self.compose[&(a, self.identities[t])] != a
            {
                return fail(format!("identity laws fail at arrow {a}"));
            }
            let inv = self.inverses[a];
            if self.arrows[inv].source != t || self.arrows[inv].target != s {
                return fail(format!("inverse of arrow {a} has wrong endpoints"));
            }
            if self.compose[&(a, inv)] != self.identities[s]
                || self.compose[&(inv, a)] != self.identities[t]
            {
                return fail(format!("inverse laws fail at arrow {a}"));
            }
        }
        for a in 0..self.arrows.len() {
            for b in 0..self.arrows.len() {
                if self.arrows[a].target != self.arrows[b].source {
                    continue;
                }
                for c in 0..self.arrows.len() {
                    if self.arrows[b].target != self.arrows[c].source {
                        continue;
                    }
                    let ab_c = self.compose[&(self.compose[&(a, b)], c)];
                    let a_bc = self.compose[&(a, self.compose[&(b, c)])];
                    if ab_c != a_bc {
                        return fail(format!("associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn source(&self, a: usize) -> usize {
        self.arrows[a].source
    }

    pub fn target(&self, a: usize) -> usize {
        self.arrows[a].target
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.compose[&(a, b)]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

/// `G ⋉ X` for a finite abelian group `G = ℤ/m₁ × … × ℤ/m_r` acting on a
/// finite set. Arrows are pairs `(g, x)` with source `g⁻¹·x` and target `x`.
#[derive(Debug, Clone)]
pub struct TransformationGroupoid {
    pub moduli: Vec<u64>,
    pub set: Vec<String>,
    elements: Vec<Vec<u64>>,
    action: Vec<Vec<usize>>,
    pub groupoid: FiniteGroupoid,
}

fn enumerate_group(moduli: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &m in moduli {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..m {
                let mut e = prefix.clone();
                e.push(v);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

fn add_mod(moduli: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    moduli
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&m, (&x, &y))| (x + y) % m)
        .collect()
}

fn neg_mod(moduli: &[u64], a: &[u64]) -> Vec<u64> {
    moduli.iter().zip(a).map(|(&m, &x)| (m - x) % m).collect()
}

impl TransformationGroupoid {
    pub fn new(
        moduli: Vec<u64>,
        set: Vec<String>,
        act: impl Fn(&[u64], usize) -> usize,
    ) -> Result<Self, TuError> {
        let elements = enumerate_group(&moduli);
        let set_size = set.len();
        let action: Vec<Vec<usize>> = elements
            .iter()
            .map(|g| (0..set_size).map(|x| act(g, x)).collect())
            .collect();
        // Group action axioms, checked exhaustively.
        let zero_idx = 0usize;
        for x in 0..set_size {
            if action[zero_idx][x] != x {
                return Err(TuError::InvalidGroupoid(
                    "identity element must act trivially".into(),
                ));
            }
        }
        let index_of: BTreeMap<Vec<u64>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        for (gi, g) in elements.iter().enumerate() {
            for (hi, h) in elements.iter().enumerate() {
                let gh = index_of[&add_mod(&moduli, g, h)];
                for x in 0..set_size {
                    if action[gh][x] != action[gi][action[hi][x]] {
                        return Err(TuError::InvalidGroupoid(
                            "action is not a group action".into(),
                        ));
                    }
                }
            }
        }

        // Arrow (g, x): id = g_index * set_size + x.
        let num_group = elements.len();
        let mut arrows = Vec::with_capacity(num_group * set_size);
        for gi in 0..num_group {
            let neg = index_of[&neg_mod(&moduli, &elements[gi])];
            for x in 0..set_size {
                arrows.push(Arrow {
                    source: action[neg][x],
                    target: x,
                });
            }
        }
        let mut compose = BTreeMap::new();
        for gi in 0..num_group {
            for hi in 0..num_group {
                let ghi = index_of[&add_mod(&moduli, &elements[gi], &elements[hi])];
                for x in 0..set_size {
                    // (g, h⁻¹x) then (h, x) is (g+h, x).
                    let b = hi * set_size + x;
                    let neg_h = index_of[&neg_mod(&moduli, &elements[hi])];
                    let a = gi * set_size + action[neg_h][x];
                    compose.insert((a, b), ghi * set_size + x);
                }
            }
        }
        let identities: Vec<usize> = (0..set_size).map(|x| zero_idx * set_size + x).collect();
        let mut inverses = vec![0usize; arrows.len()];
        for gi in 0..num_group {
            let neg = index_of[&neg_mod(&moduli, &elements[gi])];
            for x in 0..set_size {
                let a = gi * set_size + x;
                // inverse of (g, x) is (−g, g⁻¹x).
                inverses[a] = neg * set_size + action[neg][x];
            }
        }
        let groupoid = FiniteGroupoid::new(set_size, arrows, compose, identities, inverses)?;
        Ok(TransformationGroupoid {
            moduli,
            set,
            elements,
            action,
            groupoid,
        })
    }

    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &[u64] {
        &self.elements[i]
    }

    pub fn arrow_id(&self, g_index: usize, x: usize) -> usize {
        g_index * self.set.len() + x
    }

    pub fn arrow_parts(&self, arrow: usize) -> (usize, usize) {
        (arrow / self.set.len(), arrow % self.set.len())
    }

    pub fn act(&self, g_index: usize, x: usize) -> usize {
        self.action[g_index][x]
    }
}

// ---------------------------------------------------------------------------
// Covers, indices, tuples, cells
// ---------------------------------------------------------------------------

/// Open covers `𝒰⁰` of the object space and `𝒰¹` of the arrow space.
#[derive(Debug, Clone)]
pub struct GroupoidCover {
    pub object_sets: Vec<BTreeSet<usize>>,
    pub arrow_sets: Vec<BTreeSet<usize>>,
}

impl GroupoidCover {
    pub fn trivial(g: &FiniteGroupoid) -> Self {
        GroupoidCover {
            object_sets: vec![(0..g.num_objects()).collect()],
            arrow_sets: vec![(0..g.num_arrows()).collect()],
        }
    }

    pub fn validate(&self, g: &FiniteGroupoid) -> Result<(), TuError> {
        let covered: BTreeSet<usize> = self.object_sets.iter().flatten().copied().collect();
        if covered.len() != g.num_objects() {
            return Err(TuError::NotACover("object"));
        }
        let covered: BTreeSet<usize> = self.arrow_sets.iter().flatten().copied().collect();
        if covered.len() != g.num_arrows() {
            return Err(TuError::NotACover("arrow"));
        }
        Ok(())
    }
}

/// An element of `Λ′ₙ`: a vertex index `λ_l ∈ 𝓘⁰` for each `0 ≤ l ≤ n` and a
/// pair index `λ_{lp} ∈ 𝓘¹` for each `0 ≤ l < p ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PresimplicialIndex {
    verts: Vec<usize>,
    pairs: Vec<usize>,
}

impl PresimplicialIndex {
    pub fn new(verts: Vec<usize>, pairs: Vec<usize>) -> Self {
        let n = verts.len() - 1;
        assert_eq!(pairs.len(), n * (n + 1) / 2, "pair slot count");
        PresimplicialIndex { verts, pairs }
    }

    pub fn n(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn vert(&self, l: usize) -> usize {
        self.verts[l]
    }

    fn pair_slot(&self, l: usize, p: usize) -> usize {
        let n = self.n();
        assert!(l < p && p <= n);
        // Row l holds the slots (l, l+1) … (l, n).
        l * (2 * n - l + 1) / 2 + (p - l - 1)
    }

    pub fn pair(&self, l: usize, p: usize) -> usize {
        self.pairs[self.pair_slot(l, p)]
    }
}

/// The index face action `g̃(λ)(f) := λ(g ∘ f)` for a strictly increasing
/// map `g : [k] → [n]`: keep the vertex indices at `g(l)` and the pair
/// indices at `(g(l), g(p))`.
pub fn index_face(g: &[usize], lambda: &PresimplicialIndex) -> PresimplicialIndex {
    assert!(g.windows(2).all(|w| w[0] < w[1]), "g must be increasing");
    let verts: Vec<usize> = g.iter().map(|&l| lambda.vert(l)).collect();
    let mut pairs = Vec::new();
    for l in 0..g.len() {
        for p in (l + 1)..g.len() {
            pairs.push(lambda.pair(g[l], g[p]));
        }
    }
    PresimplicialIndex::new(verts, pairs)
}

/// `ε̃ᵢ` on indices: delete every occurrence of `λ_i`, `λ_{il}` and `λ_{li}`.
pub fn index_face_eps(i: usize, lambda: &PresimplicialIndex) -> PresimplicialIndex {
    let n = lambda.n();
    let g: Vec<usize> = (0..=n).filter(|&l| l != i).collect();
    index_face(&g, lambda)
}

/// An `n`-tuple of composable arrows (with `s(γ_{i+1}) = r(γ_i)`), plus the
/// base object so that 0-tuples are points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tuple {
    pub base: usize,
    pub arrows: Vec<usize>,
}

impl Tuple {
    pub fn point(x: usize) -> Self {
        Tuple {
            base: x,
            arrows: Vec::new(),
        }
    }

    pub fn from_arrows(g: &FiniteGroupoid, arrows: Vec<usize>) -> Self {
        assert!(!arrows.is_empty());
        Tuple {
            base: g.source(arrows[0]),
            arrows,
        }
    }

    pub fn degree(&self) -> usize {
        self.arrows.len()
    }
}

/// All composable `n`-tuples in deterministic (lexicographic) order;
/// for `n = 0` the object list.
pub fn composable_tuples(g: &FiniteGroupoid, n: usize) -> Vec<Tuple> {
    if n == 0 {
        return (0..g.num_objects()).map(Tuple::point).collect();
    }
    let mut tuples: Vec<Vec<usize>> = (0..g.num_arrows()).map(|a| vec![a]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for t in &tuples {
            let last = *t.last().unwrap();
            for b in 0..g.num_arrows() {
                if g.source(b) == g.target(last) {
                    let mut t2 = t.clone();
                    t2.push(b);
                    next.push(t2);
                }
            }
        }
        tuples = next;
    }
    tuples
        .into_iter()
        .map(|arrows| Tuple::from_arrows(g, arrows))
        .collect()
}

/// The face `ε̃ᵢ` on tuples: drop the first arrow at `i = 0`, drop the last
/// at `i = n`, compose `γ_{i−1}γ_i` in between. A 1-tuple degenerates to its
/// range (`i = 0`) or source (`i = 1`).
pub fn face_map(g: &FiniteGroupoid, i: usize, t: &Tuple) -> Result<Tuple, TuError> {
    let n = t.degree();
    if i > n || n == 0 {
        return Err(TuError::IndexOutOfRange {
            index: i,
            degree: n,
        });
    }
    if n == 1 {
        let a = t.arrows[0];
        return Ok(Tuple::point(if i == 0 { g.target(a) } else { g.source(a) }));
    }
    let arrows = match i {
        0 => t.arrows[1..].to_vec(),
        _ if i == n => t.arrows[..n - 1].to_vec(),
        _ => {
            let mut v = Vec::with_capacity(n - 1);
            v.extend_from_slice(&t.arrows[..i - 1]);
            v.push(g.compose(t.arrows[i - 1], t.arrows[i]));
            v.extend_from_slice(&t.arrows[i + 1..]);
            v
        }
    };
    Ok(Tuple::from_arrows(g, arrows))
}

/// The degeneracy `η̃ᵢ` on tuples: insert the identity of `s(γ₀)` at the
/// front (`i = 0`) or of `r(γ_{i−1})` before position `i`.
pub fn degeneracy_map(g: &FiniteGroupoid, i: usize, t: &Tuple) -> Tuple {
    let mut arrows = t.arrows.clone();
    let id = if i == 0 {
        g.identity(t.base)
    } else {
        g.identity(g.target(t.arrows[i - 1]))
    };
    arrows.insert(i, id);
    Tuple {
        base: g.source(arrows[0]),
        arrows,
    }
}

/// Is the tuple in the cell `U^n_λ`?
pub fn cell_membership(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    lambda: &PresimplicialIndex,
    t: &Tuple,
) -> bool {
    let n = lambda.n();
    if t.degree() != n {
        return false;
    }
    if n == 0 {
        return cover.object_sets[lambda.vert(0)].contains(&t.base);
    }
    if !cover.object_sets[lambda.vert(0)].contains(&g.source(t.arrows[0])) {
        return false;
    }
    for k in 0..n {
        if !cover.object_sets[lambda.vert(k + 1)].contains(&g.target(t.arrows[k])) {
            return false;
        }
    }
    for k in 0..n {
        let mut product = t.arrows[k];
        for l in k..n {
            if l > k {
                product = g.compose(product, t.arrows[l]);
            }
            if !cover.arrow_sets[lambda.pair(k, l + 1)].contains(&product) {
                return false;
            }
        }
    }
    true
}

/// A cell: an index together with a member tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub index: PresimplicialIndex,
    pub tuple: Tuple,
}

impl Cell {
    pub fn face(&self, g: &FiniteGroupoid, i: usize) -> Result<Cell, TuError> {
        Ok(Cell {
            index: index_face_eps(i, &self.index),
            tuple: face_map(g, i, &self.tuple)?,
        })
    }
}

fn enumerate_indices(cover: &GroupoidCover, n: usize) -> Vec<PresimplicialIndex> {
    let v_choices = cover.object_sets.len();
    let p_choices = cover.arrow_sets.len();
    let v_slots = n + 1;
    let p_slots = n * (n + 1) / 2;
    let total: usize = v_choices.pow(v_slots as u32) * p_choices.pow(p_slots as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut verts = Vec::with_capacity(v_slots);
        for _ in 0..v_slots {
            verts.push(code % v_choices);
            code /= v_choices;
        }
        let mut pairs = Vec::with_capacity(p_slots);
        for _ in 0..p_slots {
            pairs.push(code % p_choices);
            code /= p_choices;
        }
        out.push(PresimplicialIndex::new(verts, pairs));
    }
    out.sort();
    out
}

/// All degree-`n` cells, in deterministic order.
pub fn enumerate_cells(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    n: usize,
    budget: usize,
) -> Result<Vec<Cell>, TuError> {
    let v_choices = cover.object_sets.len();
    let p_choices = cover.arrow_sets.len();
    let tuples = composable_tuples(g, n);
    let candidates = v_choices
        .checked_pow((n + 1) as u32)
        .and_then(|v| {
            p_choices
                .checked_pow((n * (n + 1) / 2) as u32)
                .map(|p| v * p)
        })
        .and_then(|i| i.checked_mul(tuples.len().max(1)))
        .ok_or(TuError::TooLarge {
            cells: usize::MAX,
            budget,
        })?;
    if candidates > budget {
        return Err(TuError::TooLarge {
            cells: candidates,
            budget,
        });
    }
    let mut cells = Vec::new();
    for index in enumerate_indices(cover, n) {
        for t in &tuples {
            if cell_membership(g, cover, &index, t) {
                cells.push(Cell {
                    index: index.clone(),
                    tuple: t.clone(),
                });
            }
        }
    }
    Ok(cells)
}

// ---------------------------------------------------------------------------
// Cochains and the Tu differential
// ---------------------------------------------------------------------------

/// A `ℚ/ℤ`-valued Tu cochain, total on the cells of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuCochain {
    pub degree: usize,
    pub values: BTreeMap<Cell, Circle>,
}

impl TuCochain {
    pub fn zero(
        g: &FiniteGroupoid,
        cover: &GroupoidCover,
        degree: usize,
        budget: usize,
    ) -> Result<Self, TuError> {
        let cells = enumerate_cells(g, cover, degree, budget)?;
        Ok(TuCochain {
            degree,
            values: cells.into_iter().map(|c| (c, Circle::zero())).collect(),
        })
    }

    pub fn value(&self, cell: &Cell) -> Result<&Circle, TuError> {
        self.values.get(cell).ok_or(TuError::CellUndefined)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Circle::is_zero)
    }
}

/// `(∂_Tu φ)_μ(γ) = Σᵢ (−1)ⁱ φ_{ε̃ᵢμ}(ε̃ᵢγ)` on every degree-`(n+1)` cell.
pub fn tu_differential(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    c: &TuCochain,
    budget: usize,
) -> Result<TuCochain, TuError> {
    let n = c.degree;
    let cells = enumerate_cells(g, cover, n + 1, budget)?;
    let mut values = BTreeMap::new();
    for cell in cells {
        let mut acc = Circle::zero();
        for i in 0..=n + 1 {
            let face = cell.face(g, i)?;
            let v = c.value(&face)?;
            acc = if i % 2 == 0 { acc.add(v) } else { acc.sub(v) };
        }
        values.insert(cell, acc);
    }
    Ok(TuCochain {
        degree: n + 1,
        values,
    })
}

/// The integer cellular cochain complex of the cover through `max_degree`:
/// one basis element per cell, differential entries `(−1)ⁱ` against faces.
pub fn cell_complex(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    max_degree: usize,
    budget: usize,
) -> Result<(Vec<Vec<Cell>>, MatrixComplex), TuError> {
    let cells: Vec<Vec<Cell>> = (0..=max_degree)
        .map(|n| enumerate_cells(g, cover, n, budget))
        .collect::<Result<_, _>>()?;
    let positions: Vec<BTreeMap<&Cell, usize>> = cells
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let dims: Vec<usize> = cells.iter().map(Vec::len).collect();
    let mut mats = Vec::new();
    for n in 0..max_degree {
        let mut m = IntMat::zero(dims[n + 1], dims[n]);
        for (row, cell) in cells[n + 1].iter().enumerate() {
            for i in 0..=n + 1 {
                let face = cell.face(g, i)?;
                let col = positions[n][&face];
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m.add_to(row, col, &BigInt::from(sign));
            }
        }
        mats.push(m);
    }
    Ok((cells, MatrixComplex::new(dims, mats)))
}

/// Cohomology with coefficients `(1/N)ℤ/ℤ ≅ ℤ/N` at the fixed cover, by
/// exact chain-level linear algebra.
pub fn brute_cohomology(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    k: usize,
    n_coeff: u64,
    budget: usize,
) -> Result<CohomologyGroup, TuError> {
    cover.validate(g)?;
    let (_, cx) = cell_complex(g, cover, k + 1, budget)?;
    let torsion = homology::cohomology_mod_n(&cx, k, &BigInt::from(n_coeff))
        .expect("degree guarded by construction");
    Ok(CohomologyGroup {
        rank: 0,
        torsion,
        ring: CoefficientRing::Circle,
    })
}

/// Cohomology with full `ℚ/ℤ` coefficients at the fixed cover, through
/// universal coefficients on the integer cell complex.
pub fn qz_cohomology(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    k: usize,
    budget: usize,
) -> Result<CohomologyGroup, TuError> {
    cover.validate(g)?;
    let (_, cx) = cell_complex(g, cover, k + 2, budget)?;
    Ok(homology::cohomology_group(&cx, k, CoefficientRing::Circle)
        .expect("degree guarded by construction"))
}

/// Exhaustive check that `∂_Tu ∘ ∂_Tu = 0` on every cell up to a degree.
pub fn tu_d_squared_is_zero(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    max_degree: usize,
    budget: usize,
) -> Result<bool, TuError> {
    let (_, cx) = cell_complex(g, cover, max_degree, budget)?;
    Ok(cx.composition_is_zero())
}

/// All degree-`degree` cocycles with values in `(1/N)ℤ/ℤ`, enumerated
/// exhaustively. Only viable for very small covers.
pub fn enumerate_cocycles(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    degree: usize,
    n_coeff: u64,
    budget: usize,
) -> Result<Vec<TuCochain>, TuError> {
    let cells = enumerate_cells(g, cover, degree, budget)?;
    let count = cells.len();
    let total = (n_coeff as usize)
        .checked_pow(count as u32)
        .ok_or(TuError::TooLarge {
            cells: usize::MAX,
            budget,
        })?;
    if total > budget {
        return Err(TuError::TooLarge {
            cells: total,
            budget,
        });
    }
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut values = BTreeMap::new();
        for cell in &cells {
            let digit = (code % n_coeff as usize) as i64;
            code /= n_coeff as usize;
            values.insert(cell.clone(), Circle::from_parts(digit, n_coeff as i64));
        }
        let cochain = TuCochain { degree, values };
        if tu_differential(g, cover, &cochain, budget)?.is_zero() {
            out.push(cochain);
        }
    }
    Ok(out)
}

/// For a 1-cocycle, the value on `(λ₀, λ₁, λ₀₁)` must not depend on the
/// choice of the arrow-cover index `λ₀₁`. Returns `false` as soon as two
/// cells with the same vertex indices and the same arrow disagree; errors
/// with `NotACocycle` if the values are independent but the cochain is not
/// closed.
pub fn check_onecocycle_independence(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    phi: &TuCochain,
    budget: usize,
) -> Result<bool, TuError> {
    assert_eq!(phi.degree, 1);
    let mut by_key: BTreeMap<(usize, usize, Tuple), Circle> = BTreeMap::new();
    for (cell, v) in &phi.values {
        let key = (cell.index.vert(0), cell.index.vert(1), cell.tuple.clone());
        if let Some(prev) = by_key.get(&key) {
            if prev != v {
                return Ok(false);
            }
        } else {
            by_key.insert(key, v.clone());
        }
    }
    if !tu_differential(g, cover, phi, budget)?.is_zero() {
        return Err(TuError::NotACocycle);
    }
    Ok(true)
}

/// Certify that a `(1/N)ℤ/ℤ`-valued cocycle dies in `ℚ/ℤ` by producing a
/// primitive with denominators dividing `denom`; `None` if no such
/// primitive exists at that denominator.
pub fn divisibility_witness(
    g: &FiniteGroupoid,
    cover: &GroupoidCover,
    z: &TuCochain,
    denom: u64,
    budget: usize,
) -> Result<Option<TuCochain>, TuError> {
    let k = z.degree;
    assert!(k >= 1);
    let (cells, cx) = cell_complex(g, cover, k, budget)?;
    let z_vec: Vec<BigInt> = cells[k]
        .iter()
        .map(|c| {
            let v = z.value(c).expect("total cochain").lift()
                * BigRational::from_integer(BigInt::from(denom));
            assert!(v.is_integer(), "denominator must clear the cocycle values");
            v.to_integer()
        })
        .collect();
    // Solve d·w ≡ denom·z (mod denom) over ℤ via the augmented system.
    let d = cx.differential(k - 1);
    let rows = d.rows();
    let mut aug = IntMat::zero(rows, d.cols() + rows);
    for (i, j, v) in d.entries() {
        aug.set(i, j, v.clone());
    }
    for i in 0..rows {
        aug.set(i, d.cols() + i, BigInt::from(denom));
    }
    let Some(sol) = homology::smith_normal_form(&aug).solve_integer(&z_vec) else {
        return Ok(None);
    };
    let mut values = BTreeMap::new();
    for (j, cell) in cells[k - 1].iter().enumerate() {
        let q = BigRational::new(sol[j].clone(), BigInt::from(denom));
        values.insert(cell.clone(), Circle::from_rational(&q));
    }
    Ok(Some(TuCochain {
        degree: k - 1,
        values,
    }))
}

// ---------------------------------------------------------------------------

/// `ℤ/m ⋉ point`.
pub fn cyclic_point_groupoid(m: u64) -> TransformationGroupoid {
    TransformationGroupoid::new(vec![m], vec!["pt".to_string()], |_, x| x).unwrap()
}

/// `ℤ/2` swapping two points.
pub fn swap_groupoid() -> TransformationGroupoid {
    TransformationGroupoid::new(vec![2], vec!["a".to_string(), "b".to_string()], |g, x| {
        if g[0] == 1 {
            1 - x
        } else {
            x
        }
    })
    .unwrap()
}
