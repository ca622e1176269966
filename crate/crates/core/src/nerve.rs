//! Finite cover combinatorics: the simplicial nerve, ordered-tuple cochains
//! and the plain Čech differential.
//!
//! Cochains are indexed by strictly increasing vertex tuples. Formulas that
//! want arbitrary index tuples are served by [`alternating_value`], which
//! extends an increasing-tuple cochain antisymmetrically and by zero on
//! repeated indices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::coefficients::GroupValue;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NerveError {
    #[error("facet list is empty")]
    EmptyInput,
    #[error("simplex vertices must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<u32>),
    #[error("tuple does not span a simplex of the nerve: {0:?}")]
    NotInNerve(Vec<u32>),
    #[error("vertex {0:?} is not in the nerve")]
    UnknownVertex(VertexId),
}

/// Index of one cover set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nonempty intersection of cover sets, stored as the strictly increasing
/// tuple of its cover indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Simplex {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self, NerveError> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(NerveError::NotIncreasing(
                vertices.iter().map(|v| v.0).collect(),
            ));
        }
        Ok(Simplex { vertices })
    }

    pub fn from_ids(ids: &[u32]) -> Result<Self, NerveError> {
        Simplex::new(ids.iter().map(|&i| VertexId(i)).collect())
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> VertexId {
        self.vertices[i]
    }

    /// The face obtained by deleting the `i`-th vertex.
    pub fn face(&self, i: usize) -> Simplex {
        let mut vs = self.vertices.clone();
        vs.remove(i);
        Simplex { vertices: vs }
    }

    /// The sub-simplex spanned by positions `range` of the vertex tuple.
    pub fn front(&self, len: usize) -> Simplex {
        Simplex {
            vertices: self.vertices[..len].to_vec(),
        }
    }

    pub fn back(&self, len: usize) -> Simplex {
        Simplex {
            vertices: self.vertices[self.vertices.len() - len..].to_vec(),
        }
    }
}

/// Finite abstract simplicial complex: the nerve of a good cover, closed
/// under faces, with connected components computed from the 1-skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    vertices: Vec<VertexId>,
    by_dim: Vec<Vec<Simplex>>,
    position: Vec<BTreeMap<Simplex, usize>>,
    component: BTreeMap<VertexId, usize>,
    num_components: usize,
}

/// Face-close a list of facets into a nerve.
pub fn build_nerve(facets: &[BTreeSet<u32>]) -> Result<Nerve, NerveError> {
    if facets.is_empty() || facets.iter().all(|f| f.is_empty()) {
        return Err(NerveError::EmptyInput);
    }
    let mut simplices: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    for facet in facets.iter().filter(|f| !f.is_empty()) {
        let verts: Vec<VertexId> = facet.iter().map(|&v| VertexId(v)).collect();
        // All nonempty subsets of the facet, via bitmask.
        let k = verts.len();
        for mask in 1u64..(1 << k) {
            let sub: Vec<VertexId> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| verts[i])
                .collect();
            simplices.insert(sub);
        }
    }

    let max_dim = simplices.iter().map(|s| s.len() - 1).max().unwrap();
    let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); max_dim + 1];
    for vs in simplices {
        let dim = vs.len() - 1;
        by_dim[dim].push(Simplex { vertices: vs });
    }
    // BTreeSet iteration is sorted, but the by-dim split needs a re-sort to
    // guarantee lexicographic order within each dimension.
    for list in &mut by_dim {
        list.sort();
    }
    let position: Vec<BTreeMap<Simplex, usize>> = by_dim
        .iter()
        .map(|list| {
            list.iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect()
        })
        .collect();

    let vertices: Vec<VertexId> = by_dim[0].iter().map(|s| s.vertices[0]).collect();

    // Union-find over the 1-skeleton.
    let index_of: BTreeMap<VertexId, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    if by_dim.len() > 1 {
        for edge in &by_dim[1] {
            let a = index_of[&edge.vertices[0]];
            let b = index_of[&edge.vertices[1]];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut label_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut component = BTreeMap::new();
    for (i, &v) in vertices.iter().enumerate() {
        let root = find(&mut parent, i);
        let next = label_of_root.len();
        let label = *label_of_root.entry(root).or_insert(next);
        component.insert(v, label);
    }
    let num_components = label_of_root.len();

    Ok(Nerve {
        vertices,
        by_dim,
        position,
        component,
        num_components,
    })
}

impl Nerve {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn max_dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// All `k`-simplices in lexicographic order; empty above the top degree.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        static EMPTY: Vec<Simplex> = Vec::new();
        self.by_dim.get(k).unwrap_or(&EMPTY)
    }

    pub fn simplex_count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.position
            .get(s.dim())
            .is_some_and(|m| m.contains_key(s))
    }

    pub fn simplex_position(&self, s: &Simplex) -> Option<usize> {
        self.position.get(s.dim()).and_then(|m| m.get(s)).copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.component.contains_key(&v)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        if a == b {
            return self.has_vertex(a);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.contains(&Simplex {
            vertices: vec![lo, hi],
        })
    }

    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        self.component.get(&v).copied()
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    /// Vertices of one connected component, in increasing order.
    pub fn component_vertices(&self, label: usize) -> Vec<VertexId> {
        self.vertices
            .iter()
            .copied()
            .filter(|v| self.component[v] == label)
            .collect()
    }
}

/// Deterministic enumeration of the `k`-simplices, lexicographic in the
/// vertex tuples.
pub fn enumerate_simplices(nerve: &Nerve, k: usize) -> Vec<Simplex> {
    nerve.simplices(k).to_vec()
}

/// A degree-`k` cochain with values in `A`. Only nonzero values are stored;
/// `zero` is the zero element of `A` used for absent keys.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain<A> {
    degree: usize,
    zero: A,
    entries: BTreeMap<Simplex, A>,
}

impl<A: fmt::Debug> fmt::Debug for Cochain<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(deg {}, {:?})", self.degree, self.entries)
    }
}

impl<A: GroupValue> Cochain<A> {
    pub fn new(degree: usize, zero: A) -> Self {
        Cochain {
            degree,
            zero,
            entries: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zero_value(&self) -> &A {
        &self.zero
    }

    pub fn set(&mut self, simplex: Simplex, value: A) {
        assert_eq!(simplex.dim(), self.degree, "cochain degree mismatch");
        if value.is_zero() {
            self.entries.remove(&simplex);
        } else {
            self.entries.insert(simplex, value);
        }
    }

    pub fn add_to(&mut self, simplex: Simplex, value: &A) {
        let current = self.get(&simplex).add(value);
        self.set(simplex, current);
    }

    /// The value on `simplex`; the zero of `A` when absent.
    pub fn get(&self, simplex: &Simplex) -> A {
        self.entries
            .get(simplex)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn get_stored(&self, simplex: &Simplex) -> Option<&A> {
        self.entries.get(simplex)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &A)> {
        self.entries.iter()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, rhs: &Cochain<A>) -> Cochain<A> {
        assert_eq!(self.degree, rhs.degree);
        let mut out = self.clone();
        for (s, v) in rhs.iter() {
            out.add_to(s.clone(), v);
        }
        out
    }

    pub fn neg(&self) -> Cochain<A> {
        let mut out = Cochain::new(self.degree, self.zero.clone());
        for (s, v) in self.iter() {
            out.set(s.clone(), v.neg());
        }
        out
    }

    pub fn map_values<B: GroupValue>(&self, zero: B, f: impl Fn(&A) -> B) -> Cochain<B> {
        let mut out = Cochain::new(self.degree, zero);
        for (s, v) in self.iter() {
            out.set(s.clone(), f(v));
        }
        out
    }
}

/// The Čech differential `(∂̌c)_{λ₀…λ_{k+1}} = Σᵢ (−1)ⁱ c_{λ₀…λ̂ᵢ…λ_{k+1}}`.
pub fn cech_differential<A: GroupValue>(nerve: &Nerve, c: &Cochain<A>) -> Cochain<A> {
    let k = c.degree();
    let mut out = Cochain::new(k + 1, c.zero_value().clone());
    for simplex in nerve.simplices(k + 1) {
        let mut acc: Option<A> = None;
        for i in 0..=k + 1 {
            let face = simplex.face(i);
            if let Some(v) = c.get_stored(&face) {
                let term = if i % 2 == 0 { v.clone() } else { v.neg() };
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
        }
        if let Some(v) = acc {
            out.set(simplex.clone(), v);
        }
    }
    out
}

/// Evaluate a cochain on an arbitrary index tuple: antisymmetric under
/// permutations, zero on repeated indices.
pub fn alternating_value<A: GroupValue>(
    nerve: &Nerve,
    c: &Cochain<A>,
    tuple: &[VertexId],
) -> Result<A, NerveError> {
    for &v in tuple {
        if !nerve.has_vertex(v) {
            return Err(NerveError::UnknownVertex(v));
        }
    }
    let distinct: BTreeSet<VertexId> = tuple.iter().copied().collect();
    let span = Simplex {
        vertices: distinct.iter().copied().collect(),
    };
    if !nerve.contains(&span) {
        return Err(NerveError::NotInNerve(tuple.iter().map(|v| v.0).collect()));
    }
    if distinct.len() < tuple.len() {
        return Ok(c.zero_value().clone());
    }
    // Sort by selection, counting transpositions.
    let mut sorted = tuple.to_vec();
    let mut swaps = 0usize;
    for i in 0..sorted.len() {
        let min_idx = (i..sorted.len()).min_by_key(|&j| sorted[j]).unwrap();
        if min_idx != i {
            sorted.swap(i, min_idx);
            swaps += 1;
        }
    }
    let value = c.get(&Simplex { vertices: sorted });
    Ok(if swaps % 2 == 0 { value } else { value.neg() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    pub(crate) fn facets(sets: &[&[u32]]) -> Vec<BTreeSet<u32>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    fn sx(ids: &[u32]) -> Simplex {
        Simplex::from_ids(ids).unwrap()
    }

    #[test]
    fn boundary_tetrahedron_counts() {
        let n = build_nerve(&facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap();
        assert_eq!(n.simplex_count(0), 4);
        assert_eq!(n.simplex_count(1), 6);
        assert_eq!(n.simplex_count(2), 4);
        assert_eq!(n.simplex_count(3), 0);
        assert_eq!(n.num_components(), 1);
    }

    #[test]
    fn circle_nerve_counts() {
        let n = build_nerve(&facets(&[&[0, 1], &[1, 2], &[0, 2]])).unwrap();
        assert_eq!(n.simplex_count(0), 3);
        assert_eq!(n.simplex_count(1), 3);
        assert_eq!(n.simplex_count(2), 0);
    }

    #[test]
    fn single_point() {
        let n = build_nerve(&facets(&[&[0]])).unwrap();
        assert_eq!(n.simplex_count(0), 1);
        assert_eq!(n.max_dim(), 0);
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(build_nerve(&[]).unwrap_err(), NerveError::EmptyInput);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let n = build_nerve(&facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap();
        let edges: Vec<Vec<u32>> = enumerate_simplices(&n, 1)
            .iter()
            .map(|s| s.vertices().iter().map(|v| v.0).collect())
            .collect();
        assert_eq!(
            edges,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert!(enumerate_simplices(&n, 3).is_empty());
        // Re-running gives the identical order.
        assert_eq!(enumerate_simplices(&n, 1), enumerate_simplices(&n, 1));
    }

    #[test]
    fn differential_of_vertex_indicator() {
        let n = build_nerve(&facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap();
        let mut c = Cochain::new(0, BigInt::zero());
        c.set(sx(&[0]), BigInt::from(1));
        let dc = cech_differential(&n, &c);
        // (∂̌c)_{ab} = c_b − c_a, so edges leaving vertex 0 pick up −1.
        assert_eq!(dc.get(&sx(&[0, 1])), BigInt::from(-1));
        assert_eq!(dc.get(&sx(&[0, 2])), BigInt::from(-1));
        assert_eq!(dc.get(&sx(&[0, 3])), BigInt::from(-1));
        assert_eq!(dc.get(&sx(&[1, 2])), BigInt::zero());
        assert_eq!(dc.support_len(), 3);
    }

    #[test]
    fn constant_cochain_is_closed_on_connected_nerve() {
        let n = build_nerve(&facets(&[&[0, 1], &[1, 2], &[0, 2]])).unwrap();
        let mut c = Cochain::new(0, BigInt::zero());
        for v in n.vertices() {
            c.set(Simplex::new(vec![*v]).unwrap(), BigInt::from(7));
        }
        assert!(cech_differential(&n, &c).is_zero());
    }

    #[test]
    fn top_degree_differential_is_empty() {
        let n = build_nerve(&facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap();
        let mut c = Cochain::new(2, BigInt::zero());
        c.set(sx(&[0, 1, 2]), BigInt::from(5));
        assert!(cech_differential(&n, &c).is_zero());
    }

    #[test]
    fn alternating_value_signs() {
        let n = build_nerve(&facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap();
        let mut c = Cochain::new(1, BigInt::zero());
        c.set(sx(&[0, 1]), BigInt::from(5));
        let v = |ids: &[u32]| ids.iter().map(|&i| VertexId(i)).collect::<Vec<_>>();

        assert_eq!(
            alternating_value(&n, &c, &v(&[1, 0])).unwrap(),
            BigInt::from(-5)
        );
        assert!(alternating_value(&n, &c, &v(&[0, 0])).unwrap() == BigInt::zero());

        let mut c2 = Cochain::new(2, BigInt::zero());
        c2.set(sx(&[0, 1, 2]), BigInt::from(7));
        assert_eq!(
            alternating_value(&n, &c2, &v(&[2, 0, 1])).unwrap(),
            BigInt::from(7)
        );
        assert_eq!(
            alternating_value(&n, &c2, &v(&[1, 0, 2])).unwrap(),
            BigInt::from(-7)
        );
        assert_eq!(
            alternating_value(&n, &c2, &v(&[0, 1, 2])).unwrap(),
            BigInt::from(7)
        );
    }

    #[test]
    fn alternating_value_rejects_non_simplices() {
        // Two triangles glued along an edge: {0,3} is not a simplex.
        let n = build_nerve(&facets(&[&[0, 1, 2], &[1, 2, 3]])).unwrap();
        let c: Cochain<BigInt> = Cochain::new(1, BigInt::zero());
        let err = alternating_value(&n, &c, &[VertexId(0), VertexId(3)]).unwrap_err();
        assert!(matches!(err, NerveError::NotInNerve(_)));
    }

    #[test]
    fn components_from_one_skeleton() {
        let n = build_nerve(&facets(&[&[0, 1], &[2, 3], &[5]])).unwrap();
        assert_eq!(n.num_components(), 3);
        assert_eq!(n.component_of(VertexId(0)), n.component_of(VertexId(1)));
        assert_ne!(n.component_of(VertexId(0)), n.component_of(VertexId(2)));
        assert_eq!(n.component_vertices(0), vec![VertexId(0), VertexId(1)]);
    }

    prop_compose! {
        fn arb_facets()(count in 1usize..5)(
            sets in proptest::collection::vec(
                proptest::collection::btree_set(0u32..6, 1..4), count.max(1))
        ) -> Vec<BTreeSet<u32>> {
            sets
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn nerve_is_face_closed(facets in arb_facets()) {
            let n = build_nerve(&facets).unwrap();
            for k in 1..=n.max_dim() {
                for s in n.simplices(k) {
                    for i in 0..=k {
                        prop_assert!(n.contains(&s.face(i)));
                    }
                }
            }
        }

        #[test]
        fn d_squared_is_zero(
            facets in arb_facets(),
            values in proptest::collection::vec(-9i64..9, 10),
        ) {
            let n = build_nerve(&facets).unwrap();
            for degree in 0..=n.max_dim() {
                let mut c = Cochain::new(degree, BigInt::zero());
                for (s, v) in n.simplices(degree).iter().zip(values.iter().cycle()) {
                    c.set(s.clone(), BigInt::from(*v));
                }
                let dd = cech_differential(&n, &cech_differential(&n, &c));
                prop_assert!(dd.is_zero());
            }
        }
    }
}
