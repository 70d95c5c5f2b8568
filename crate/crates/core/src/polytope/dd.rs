//! Exact double description for pointed polyhedral cones `{x : A x >= 0}`.
//!
//! Rays are primitive integer vectors. Adjacency uses the combinatorial
//! test: two rays are adjacent iff no third ray is tight on every
//! constraint the pair is jointly tight on.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone)]
struct Ray {
    v: Vec<BigInt>,
    zero: FixedBitSet,
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides by the gcd of the entries (keeps the sign).
pub(crate) fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Rank of a rational matrix by Gaussian elimination.
pub(crate) fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Picks `n` linearly independent rows greedily, in order.
fn independent_rows(rows: &[Vec<BigInt>], n: usize) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
            if chosen.len() == n {
                return Some(chosen);
            }
        } else {
            basis.pop();
        }
    }
    None
}

/// Inverse of a nonsingular square integer matrix, returned column by column
/// as primitive integer vectors (columns of `A⁻¹` up to positive scaling).
fn inverse_columns(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().cloned().map(Rational::from_integer).collect();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).expect("nonsingular");
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    (0..n)
        .map(|j| {
            let col: Vec<Rational> = (0..n).map(|i| m[i][n + j].clone()).collect();
            let den = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut v: Vec<BigInt> = col
                .iter()
                .map(|x| x.numer() * (&den / x.denom()))
                .collect();
            make_primitive(&mut v);
            v
        })
        .collect()
}

/// Extreme rays of `{x ∈ ℝⁿ : row · x >= 0 for every row}`.
///
/// The cone must be pointed (the rows must have rank `n`).
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], n: usize) -> Result<Vec<Vec<BigInt>>> {
    let m = rows.len();
    let basis = independent_rows(rows, n)
        .ok_or_else(|| Error::DegeneratePolytope("constraint matrix is not of full rank".into()))?;
    let basis_rows: Vec<Vec<BigInt>> = basis.iter().map(|&i| rows[i].clone()).collect();
    let mut rays: Vec<Ray> = inverse_columns(&basis_rows)
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            let mut zero = FixedBitSet::with_capacity(m);
            for (k, &row) in basis.iter().enumerate() {
                if k != j {
                    zero.insert(row);
                }
            }
            Ray { v, zero }
        })
        .collect();

    let mut in_basis = vec![false; m];
    for &i in &basis {
        in_basis[i] = true;
    }

    for k in (0..m).filter(|&k| !in_basis[k]) {
        let row = &rows[k];
        let dots: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, d) in dots.iter().enumerate() {
                if d.is_zero() {
                    rays[i].zero.insert(k);
                }
            }
            continue;
        }

        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zero.clone();
                common.intersect_with(&rays[q].zero);
                if common.count_ones(..) + 2 < n {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(r, ray)| {
                    r == p || r == q || !common.is_subset(&ray.zero)
                });
                if !adjacent {
                    continue;
                }
                let mut v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(vq, vp)| &dots[p] * vq - &dots[q] * vp)
                    .collect();
                make_primitive(&mut v);
                common.insert(k);
                created.push(Ray { v, zero: common });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut ray) in rays.into_iter().enumerate() {
            if dots[i].is_negative() {
                continue;
            }
            if dots[i].is_zero() {
                ray.zero.insert(k);
            }
            next.push(ray);
        }
        next.extend(created);
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}
