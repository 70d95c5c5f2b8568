//! Seeded random minimal functions for property tests and experiments.
//!
//! Finite samples are convex combinations of exact polytope vertices.
//! Circle samples interpolate a finite minimal function on the grid `k/q`,
//! which keeps minimality, optionally mixed with a discontinuous MD2 profile.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::error::Result;
use crate::finite::FiniteGroupFunction;
use crate::group::{CyclicGroup, ElementSet};
use crate::polytope::{build_polytope, enumerate_vertices, VertexSet};
use crate::rational::{int, rat, Rational};
use crate::torus::{is_minimal_pwl, torus_md2, PwlTorusFunction, Symmetry};

/// Memoized vertex sets keyed by `(q, b)`; safe to share across threads.
#[derive(Debug, Default)]
pub struct VertexPool {
    sets: Mutex<HashMap<(u64, u64), Arc<VertexSet>>>,
}

impl VertexPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, q: u64, b: u64) -> Result<Arc<VertexSet>> {
        if let Some(vs) = self.sets.lock().expect("pool lock").get(&(q, b)) {
            return Ok(Arc::clone(vs));
        }
        let vs = Arc::new(enumerate_vertices(&build_polytope(q, b)?)?);
        self.sets
            .lock()
            .expect("pool lock")
            .insert((q, b), Arc::clone(&vs));
        Ok(vs)
    }
}

/// Uniform rational `k/den` with `lo ≤ k/den ≤ hi` (bounds in units of `1/den`).
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    rat(rng.random_range(lo..=hi), den)
}

/// `n` positive rational weights summing to one.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..=12)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| rat(w, total)).collect()
}

pub fn random_vertex<'a, R: Rng + ?Sized>(rng: &mut R, vs: &'a VertexSet) -> &'a FiniteGroupFunction {
    &vs.vertices[rng.random_range(0..vs.len())]
}

/// Convex combination of up to `k` random vertices.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, vs: &VertexSet, k: usize) -> FiniteGroupFunction {
    let n = rng.random_range(1..=k.max(1));
    let weights = random_weights(rng, n);
    let mut values = vec![Rational::from_integer(0.into()); vs.q as usize];
    for w in &weights {
        let v = random_vertex(rng, vs);
        for (acc, x) in values.iter_mut().zip(v.values()) {
            *acc += w * x;
        }
    }
    FiniteGroupFunction::new(vs.q, vs.b, values).expect("convex combination of vertices")
}

/// Nonempty random subset of ℤ/qℤ.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, q: u64) -> ElementSet {
    let group = CyclicGroup::new(q).expect("q >= 2");
    loop {
        let residues: Vec<u64> = (0..q).filter(|_| rng.random_bool(0.4)).collect();
        if !residues.is_empty() {
            return ElementSet::new(group, residues).expect("residues below q");
        }
    }
}

/// Piecewise-linear interpolation of `π` through `(k/q, π(k))`, with
/// right-hand side `b/q`.
pub fn interpolate(pi: &FiniteGroupFunction) -> Result<PwlTorusFunction> {
    let q = int(pi.q() as i64);
    let mut nodes: Vec<(Rational, Rational)> = pi
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| (int(k as i64) / &q, v.clone()))
        .collect();
    nodes.push((int(1), pi.values()[0].clone()));
    let b = int(pi.b().residue() as i64) / &q;
    PwlTorusFunction::from_nodes(Symmetry::rhs(b)?, &nodes)
}

/// Orders and right-hand sides used for random circle functions.
const TORUS_GRIDS: [u64; 3] = [3, 5, 7];

/// A random minimal piecewise-linear function on the circle.
///
/// Every sample is re-verified with the exact minimality test.
pub fn random_minimal_pwl<R: Rng + ?Sized>(rng: &mut R, pool: &VertexPool) -> Result<PwlTorusFunction> {
    loop {
        let q = TORUS_GRIDS[rng.random_range(0..TORUS_GRIDS.len())];
        let b = rng.random_range(1..q);
        let vs = pool.get(q, b)?;
        let mut f = interpolate(&random_point(rng, &vs, 3))?;
        if rng.random_bool(0.3) {
            let md = torus_md2(&rat(b as i64, q as i64))?;
            let w = random_rational(rng, 1, 7, 8);
            f = PwlTorusFunction::linear_combination(&f, &(int(1) - &w), &md, &w);
        }
        if is_minimal_pwl(&f).is_minimal {
            return Ok(f);
        }
    }
}
