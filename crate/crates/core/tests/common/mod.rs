#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use curvmorse::geometry::Embedding;
use curvmorse::SimplicialComplex;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Face closures of up to five random simplices on eight vertices, at most 30 simplices.
pub fn small_complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0u32..8, 1..=4), 1..6)
        .prop_map(|sets| SimplicialComplex::build(sets.iter().map(|s| s.iter().copied().collect::<Vec<_>>())).unwrap())
        .prop_filter("at most 30 simplices", |c| c.len() <= 30)
}

/// Erdős-Rényi graph on `n` vertices with edge probability `p`.
pub fn random_graph(seed: u64, n: u32, p: f64) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut simplices: Vec<Vec<u32>> = (0..n).map(|v| vec![v]).collect();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                simplices.push(vec![a, b]);
            }
        }
    }
    SimplicialComplex::build(simplices).unwrap()
}

/// `k x n` matrix with orthonormal columns.
pub fn random_isometry(seed: u64, k: usize, n: usize) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(k, n, |_, _| rng.random_range(-1.0..1.0));
    a.qr().q()
}

/// Applies `q` to every point of `e`.
pub fn map_embedding(e: &Embedding, q: &DMatrix<f64>) -> Embedding {
    let coords: BTreeMap<u32, Vec<f64>> = e
        .coords()
        .map(|(v, p)| {
            (
                v,
                (q * nalgebra::DVector::from_column_slice(p)).iter().copied().collect(),
            )
        })
        .collect();
    Embedding::new(coords).unwrap()
}

pub fn vertex_set(c: &SimplicialComplex) -> BTreeSet<u32> {
    c.vertices().collect()
}
