//! The worked example library: named nerves, twists and setups used by the
//! command-line interface and the verification suites.
//!
//! The 7-vertex torus triangulation is not trusted as written down: the
//! constructor checks it is a closed surface and recomputes its untwisted
//! cohomology (`H⁰ = ℤ`, `H¹ = ℤ²`, `H² = ℤ`) before handing it out.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::brauer_formulas::{seeded_setup, StandardSetup};
use crate::coefficients::{CoefficientRing, VectorValue};
use crate::complex::cech_matrix_complex;
use crate::homology::{cohomology_group, presentation};
use crate::nerve::{build_nerve, Cochain, Nerve, Simplex};
use crate::twist::{validate_twist, TwistCocycle};

fn facets(sets: &[&[u32]]) -> Vec<BTreeSet<u32>> {
    sets.iter().map(|s| s.iter().copied().collect()).collect()
}

/// The boundary of the tetrahedron: a good-cover nerve of `S²`.
pub fn sphere_nerve() -> Nerve {
    build_nerve(&facets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])).unwrap()
}

/// Three arcs covering the circle.
pub fn circle_nerve() -> Nerve {
    build_nerve(&facets(&[&[0, 1], &[1, 2], &[0, 2]])).unwrap()
}

/// The 7-vertex triangulation of the 2-torus (triangles `{i, i+1, i+3}` and
/// `{i, i+2, i+3}` mod 7), validated before use.
pub fn torus_nerve() -> Nerve {
    let mut triangles = Vec::new();
    for i in 0u32..7 {
        triangles.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        triangles.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    let sets: Vec<BTreeSet<u32>> = triangles
        .iter()
        .map(|t| t.iter().copied().collect())
        .collect();
    let nerve = build_nerve(&sets).unwrap();

    // Closed-surface combinatorics.
    assert_eq!(nerve.simplex_count(0), 7);
    assert_eq!(nerve.simplex_count(1), 21);
    assert_eq!(nerve.simplex_count(2), 14);
    for edge in nerve.simplices(1) {
        let incident = nerve
            .simplices(2)
            .iter()
            .filter(|t| edge.vertices().iter().all(|v| t.vertices().contains(v)))
            .count();
        assert_eq!(incident, 2, "edge {edge:?} must lie in exactly 2 triangles");
    }

    // Cohomology of the torus, recomputed rather than asserted.
    let cx = cech_matrix_complex(&nerve, 1, 3);
    let expect = [(0usize, 1usize), (1, 2), (2, 1)];
    for (k, rank) in expect {
        let h = cohomology_group(&cx, k, CoefficientRing::Integer).unwrap();
        assert_eq!((h.rank, h.torsion.len()), (rank, 0), "H^{k} of the torus");
    }
    nerve
}

/// An integer 2-cocycle generating `H²` of the torus nerve.
pub fn torus_generator_cocycle(nerve: &Nerve) -> Cochain<VectorValue<BigInt>> {
    let cx = cech_matrix_complex(nerve, 1, 3);
    let pres = presentation(&cx, 2).unwrap();
    assert_eq!(pres.group.rank, 1);
    assert!(pres.group.torsion.is_empty());
    let vec = pres.generator_cocycle(0);
    let mut out = Cochain::new(2, VectorValue::zeros(1));
    for (pos, s) in nerve.simplices(2).iter().enumerate() {
        if !vec[pos].is_zero() {
            out.set(s.clone(), VectorValue::new(vec![vec[pos].clone()]));
        }
    }
    out
}

fn indicator_twist(nerve: &Nerve, value: &[i64]) -> TwistCocycle {
    let n = value.len();
    let mut f = Cochain::new(2, VectorValue::zeros(n));
    f.set(
        Simplex::from_ids(&[0, 1, 2]).unwrap(),
        VectorValue::from_i64(value),
    );
    validate_twist(nerve, n, f).unwrap()
}

/// `S³` as a circle bundle over `S²` with Euler number 1.
pub fn hopf() -> (Nerve, TwistCocycle) {
    let nerve = sphere_nerve();
    let twist = indicator_twist(&nerve, &[1]);
    (nerve, twist)
}

/// The lens space `L(k)`: Euler number `k` over `S²`.
pub fn lens(k: i64) -> (Nerve, TwistCocycle) {
    let nerve = sphere_nerve();
    let twist = indicator_twist(&nerve, &[k]);
    (nerve, twist)
}

/// The 3-torus: trivial rank-2 bundle over the circle, with a standard
/// setup attached.
pub fn t3(seed: u64) -> (Nerve, TwistCocycle, StandardSetup) {
    let nerve = circle_nerve();
    let setup = seeded_setup(&nerve, 2, seed).expect("circle setups always validate");
    let twist = setup.twist().clone();
    assert!(twist.is_zero(), "no 2-simplices means a zero twist");
    (nerve, twist, setup)
}

/// Rank-2 torus bundles over `S²` with Euler vector `(a, b)`.
pub fn s2_rank2(a: i64, b: i64) -> (Nerve, TwistCocycle) {
    let nerve = sphere_nerve();
    let twist = indicator_twist(&nerve, &[a, b]);
    (nerve, twist)
}

/// Circle bundles over the torus with Euler number `k` (the Heisenberg
/// nilmanifolds for `k ≠ 0`): `F = k · generator`.
pub fn nilmanifold(k: i64) -> (Nerve, TwistCocycle) {
    let nerve = torus_nerve();
    let generator = torus_generator_cocycle(&nerve);
    let mut f = Cochain::new(2, VectorValue::zeros(1));
    for (s, v) in generator.iter() {
        f.set(
            s.clone(),
            crate::coefficients::GroupValue::int_mul(v, &BigInt::from(k)),
        );
    }
    let twist = validate_twist(&nerve, 1, f).unwrap();
    (nerve, twist)
}

/// A seeded standard setup on the torus nerve (rank `n`), with the twist it
/// derives.
pub fn torus_setup(n: usize, seed: u64) -> StandardSetup {
    seeded_setup(&torus_nerve(), n, seed).expect("torus setups validate")
}
