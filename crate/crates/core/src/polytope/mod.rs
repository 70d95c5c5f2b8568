//! The polytope of minimal functions on ℤ/qℤ, its vertices (the extreme
//! functions), volume minimization over them, and the perturbation that
//! splits a nondecreasing minimal function off the Gomory function.
//!
//! The polytope lives in `ℝ^q` and is cut out by `π(0) = 0`, the symmetry
//! equalities `π(x) + π(b - x) = 1` and the subadditivity and nonnegativity
//! inequalities. Symmetry is used to eliminate variables: for each pair
//! `{x, b - x}` with `x ∉ {0, b}` and `x ≠ b - x` the smaller residue is kept
//! as a free coordinate `t`, and its partner becomes `1 - t`. Vertices are
//! then enumerated by double description in the reduced space.

mod dd;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::criteria::volume_product;
use crate::error::{Error, Result};
use crate::finite::{gom, is_minimal, FiniteGroupFunction};
use crate::group::CyclicGroup;
use crate::rational::{int, rat, Rational};

/// Default upper bound on `q` for vertex enumeration.
pub const DEFAULT_VERTEX_CAP: u64 = 31;

/// How `π(x)` is expressed through the free coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Substitution {
    Constant(#[serde(with = "crate::rational::serde_str")] Rational),
    /// `π(x) = t_i`.
    Free(usize),
    /// `π(x) = 1 - t_i`.
    Complement(usize),
}

/// `constant + Σ coeffs[i]·t_i >= 0` with primitive integer data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedInequality {
    pub constant: BigInt,
    pub coeffs: Vec<BigInt>,
}

impl ReducedInequality {
    pub fn slack(&self, t: &[Rational]) -> Rational {
        let mut s = Rational::from_integer(self.constant.clone());
        for (c, x) in self.coeffs.iter().zip(t) {
            s += Rational::from_integer(c.clone()) * x;
        }
        s
    }

    fn homogeneous(&self) -> Vec<BigInt> {
        std::iter::once(self.constant.clone())
            .chain(self.coeffs.iter().cloned())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalFunctionPolytope {
    q: u64,
    b: u64,
    free: Vec<u64>,
    substitution: Vec<Substitution>,
    equalities: Vec<(u64, u64)>,
    inequalities: Vec<ReducedInequality>,
}

/// Affine form `constant + Σ coeffs·t` with rational data.
#[derive(Clone)]
struct Affine {
    constant: Rational,
    coeffs: Vec<Rational>,
}

impl Affine {
    fn of(sub: &Substitution, dim: usize) -> Affine {
        let mut coeffs = vec![Rational::zero(); dim];
        let constant = match sub {
            Substitution::Constant(c) => c.clone(),
            Substitution::Free(i) => {
                coeffs[*i] = Rational::one();
                Rational::zero()
            }
            Substitution::Complement(i) => {
                coeffs[*i] = -Rational::one();
                Rational::one()
            }
        };
        Affine { constant, coeffs }
    }

    fn plus(&self, other: &Affine, sign: i64) -> Affine {
        let s = int(sign);
        Affine {
            constant: &self.constant + &s * &other.constant,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + &s * b)
                .collect(),
        }
    }

    /// Integer row with the same sign pattern, reduced by its content.
    fn to_row(&self) -> ReducedInequality {
        let den = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scale = |x: &Rational| x.numer() * (&den / x.denom());
        let mut all: Vec<BigInt> = std::iter::once(scale(&self.constant))
            .chain(self.coeffs.iter().map(scale))
            .collect();
        dd::make_primitive(&mut all);
        let constant = all.remove(0);
        ReducedInequality {
            constant,
            coeffs: all,
        }
    }
}

/// Builds the H-representation of the minimal-function polytope for
/// right-hand side `b` on ℤ/qℤ, with symmetry substituted out.
pub fn build_polytope(q: u64, b: u64) -> Result<MinimalFunctionPolytope> {
    let group = CyclicGroup::new(q)?;
    if group.element(b)?.is_zero() {
        return Err(Error::ZeroElement);
    }
    let partner = |x: u64| (b + q - x) % q;

    let mut free = Vec::new();
    let mut substitution = vec![Substitution::Constant(Rational::zero()); q as usize];
    let mut equalities = vec![(0, 0)];
    for x in 0..q {
        let y = partner(x);
        if x > y {
            continue;
        }
        equalities.push((x, y));
        if x == 0 || y == 0 {
            substitution[0] = Substitution::Constant(Rational::zero());
            substitution[b as usize] = Substitution::Constant(Rational::one());
        } else if x == y {
            substitution[x as usize] = Substitution::Constant(rat(1, 2));
        } else {
            substitution[x as usize] = Substitution::Free(free.len());
            substitution[y as usize] = Substitution::Complement(free.len());
            free.push(x);
        }
    }
    let dim = free.len();
    let forms: Vec<Affine> = substitution.iter().map(|s| Affine::of(s, dim)).collect();

    let mut rows = BTreeSet::new();
    let mut push = |form: Affine| -> Result<()> {
        if form.coeffs.iter().all(Zero::is_zero) {
            if form.constant.is_negative() {
                return Err(Error::DegeneratePolytope(
                    "a constant constraint is violated".into(),
                ));
            }
            return Ok(());
        }
        rows.insert(form.to_row());
        Ok(())
    };
    for x in 0..q {
        push(forms[x as usize].clone())?;
    }
    for x in 1..q {
        for y in x..q {
            let s = (x + y) % q;
            push(forms[x as usize].plus(&forms[y as usize], 1).plus(&forms[s as usize], -1))?;
        }
    }
    Ok(MinimalFunctionPolytope {
        q,
        b,
        free,
        substitution,
        equalities,
        inequalities: rows.into_iter().collect(),
    })
}

impl MinimalFunctionPolytope {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Number of free coordinates after substituting the equalities.
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Residues whose values are the free coordinates, in coordinate order.
    pub fn free_residues(&self) -> &[u64] {
        &self.free
    }

    pub fn substitution(&self) -> &[Substitution] {
        &self.substitution
    }

    /// Symmetry pairs `(x, b - x)` with `x <= b - x`, preceded by `(0, 0)`
    /// for `π(0) = 0`.
    pub fn equalities(&self) -> &[(u64, u64)] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[ReducedInequality] {
        &self.inequalities
    }

    /// The full function determined by free coordinates `t`.
    pub fn lift(&self, t: &[Rational]) -> Result<FiniteGroupFunction> {
        let values = self
            .substitution
            .iter()
            .map(|s| match s {
                Substitution::Constant(c) => c.clone(),
                Substitution::Free(i) => t[*i].clone(),
                Substitution::Complement(i) => Rational::one() - &t[*i],
            })
            .collect();
        FiniteGroupFunction::new(self.q, self.b, values)
    }

    /// The free coordinates of a function.
    pub fn project(&self, f: &FiniteGroupFunction) -> Vec<Rational> {
        self.free.iter().map(|&x| f.value(x).clone()).collect()
    }

    pub fn contains(&self, f: &FiniteGroupFunction) -> bool {
        if f.q() != self.q {
            return false;
        }
        let t = self.project(f);
        match self.lift(&t) {
            Ok(g) if g.values() == f.values() => {}
            _ => return false,
        }
        self.inequalities.iter().all(|r| !r.slack(&t).is_negative())
    }

    /// Rank of the tight reduced inequalities at `t`.
    pub fn tight_rank(&self, t: &[Rational]) -> usize {
        let tight: Vec<Vec<BigInt>> = self
            .inequalities
            .iter()
            .filter(|r| r.slack(t).is_zero())
            .map(|r| r.coeffs.clone())
            .collect();
        dd::rank(&tight)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMethod {
    DoubleDescription,
}

/// Exact vertex list of a [`MinimalFunctionPolytope`], lexicographically
/// sorted by value vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSet {
    pub q: u64,
    pub b: u64,
    pub vertices: Vec<FiniteGroupFunction>,
    pub method: EnumerationMethod,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, f: &FiniteGroupFunction) -> bool {
        self.vertices.binary_search(f).is_ok()
    }
}

pub fn enumerate_vertices(p: &MinimalFunctionPolytope) -> Result<VertexSet> {
    enumerate_vertices_capped(p, DEFAULT_VERTEX_CAP)
}

/// Enumerates all vertices; each one is certified by a full-rank set of
/// tight constraints before it is returned.
pub fn enumerate_vertices_capped(p: &MinimalFunctionPolytope, cap: u64) -> Result<VertexSet> {
    if p.q > cap {
        return Err(Error::DimensionCap { q: p.q, cap });
    }
    let n = p.dimension() + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(p.inequalities.len() + 1);
    let mut s_row = vec![BigInt::zero(); n];
    s_row[0] = BigInt::one();
    rows.push(s_row);
    rows.extend(p.inequalities.iter().map(ReducedInequality::homogeneous));

    let rays = dd::extreme_rays(&rows, n)?;
    let mut vertices = Vec::with_capacity(rays.len());
    for ray in rays {
        if !ray[0].is_positive() {
            return Err(Error::DegeneratePolytope("polytope is unbounded".into()));
        }
        let s = Rational::from_integer(ray[0].clone());
        let t: Vec<Rational> = ray[1..]
            .iter()
            .map(|x| Rational::from_integer(x.clone()) / &s)
            .collect();
        let rank = p.tight_rank(&t);
        if rank != p.dimension() {
            return Err(Error::DegeneratePolytope(format!(
                "enumerated point has tight rank {rank}, expected {}",
                p.dimension()
            )));
        }
        vertices.push(p.lift(&t)?);
    }
    vertices.sort();
    vertices.dedup();
    Ok(VertexSet {
        q: p.q,
        b: p.b,
        vertices,
        method: EnumerationMethod::DoubleDescription,
    })
}

/// Result of minimizing `∏_{x≠0} π(x)` over the minimal functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VolumeOptimum {
    pub argmin: FiniteGroupFunction,
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
    pub unique: bool,
    pub n_vertices: usize,
}

/// `(q-1)! / (q-1)^(q-1)`.
pub fn gomory_volume(q: u64) -> Rational {
    let m = q - 1;
    let fact: BigInt = (1..=m).map(BigInt::from).product();
    Rational::new(fact, num_traits::pow(BigInt::from(m), m as usize))
}

/// Minimizes the volume product over all minimal functions for prime `q`.
///
/// The objective is log-concave, so its minimum over the polytope is
/// attained at a vertex; scanning the exact vertex list is globally exact.
pub fn minimize_volume(q: u64, b: u64) -> Result<VolumeOptimum> {
    minimize_volume_capped(q, b, DEFAULT_VERTEX_CAP)
}

pub fn minimize_volume_capped(q: u64, b: u64, cap: u64) -> Result<VolumeOptimum> {
    let group = CyclicGroup::new(q)?;
    if !group.is_prime() {
        return Err(Error::NotPrime(q));
    }
    let vs = enumerate_vertices_capped(&build_polytope(q, b)?, cap)?;
    minimize_over_vertices(&vs)
}

/// Vertex scan without the primality requirement.
pub fn minimize_over_vertices(vs: &VertexSet) -> Result<VolumeOptimum> {
    let mut scored: Vec<(Rational, &FiniteGroupFunction)> = vs
        .vertices
        .iter()
        .map(|v| (volume_product(v), v))
        .collect();
    if scored.is_empty() {
        return Err(Error::DegeneratePolytope("no vertices".into()));
    }
    // Stable sort keeps lexicographic vertex order among ties.
    scored.sort_by(|a, b| a.0.cmp(&b.0));
    let unique = scored.len() == 1 || scored[0].0 < scored[1].0;
    Ok(VolumeOptimum {
        argmin: scored[0].1.clone(),
        value: scored[0].0.clone(),
        unique,
        n_vertices: vs.len(),
    })
}

/// `π = λ·g + (1-λ)·π̃` with `g = GOMᵠ_{q-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(with = "crate::rational::serde_str")]
    pub lambda: Rational,
    pub pi_tilde: FiniteGroupFunction,
    /// `min{π(x) + π(y) - π(x+y) : x + y >= q}`.
    #[serde(with = "crate::rational::serde_str")]
    pub gamma: Rational,
    pub g: FiniteGroupFunction,
}

/// Splits a nondecreasing minimal function (right-hand side `q - 1`) as a
/// convex combination of the Gomory function and another minimal function.
///
/// `λ` is the largest admissible value `min(γ(q-1)/q, min_{x≠0} π(x)/x)`.
/// For `q = 2` that bound equals 1 while `π` must already be the Gomory
/// function, and `λ = 1/2` is used instead.
pub fn gomory_decomposition(pi: &FiniteGroupFunction) -> Result<Decomposition> {
    let q = pi.q();
    if !pi.group().is_prime() {
        return Err(Error::NotPrime(q));
    }
    if !pi.is_nondecreasing() {
        return Err(Error::NotNondecreasing);
    }
    if pi.b().residue() != q - 1 || !is_minimal(pi).is_minimal {
        return Err(Error::NotMinimal);
    }
    let g = gom(q, q - 1)?;

    let mut gamma: Option<Rational> = None;
    for x in 1..q {
        for y in x.max(q - x)..q {
            let slack = pi.value(x) + pi.value(y) - pi.value((x + y) % q);
            if gamma.as_ref().is_none_or(|c| slack < *c) {
                gamma = Some(slack);
            }
        }
    }
    let gamma = gamma.expect("q >= 2 has a wrap-around pair");
    let qi = q as i64;
    let mut lambda = &gamma * rat(qi - 1, qi);
    for x in 1..q {
        let r = pi.value(x) / int(x as i64);
        if r < lambda {
            lambda = r;
        }
    }
    if lambda >= Rational::one() {
        lambda = rat(1, 2);
    }
    debug_assert!(lambda.is_positive());

    let one_minus = Rational::one() - &lambda;
    let values = (0..q)
        .map(|x| (pi.value(x) - &lambda * g.value(x)) / &one_minus)
        .collect();
    let pi_tilde = FiniteGroupFunction::new(q, q - 1, values)?;
    debug_assert!(is_minimal(&pi_tilde).is_minimal);
    Ok(Decomposition {
        lambda,
        pi_tilde,
        gamma,
        g,
    })
}
