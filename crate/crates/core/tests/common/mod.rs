//! Shared generators and brute-force oracles for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use groupcut::finite::FiniteGroupFunction;
use groupcut::rational::{int, rat, Rational};
use groupcut::torus::{Piece, PwlTorusFunction, Symmetry};
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Solves a square rational system; `None` if singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        rhs.swap(c, p);
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
                let t = &f * &rhs[c];
                rhs[i] -= t;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &a[i][i]).collect())
}

/// All vertices of the minimal-function polytope for `(q, b)` by solving
/// every square subsystem of tight inequalities.
///
/// Works directly on `π(1..q)`: symmetry pairs are substituted by hand
/// (the smaller residue is free), then each `d`-subset of inequalities is
/// solved and kept if feasible.
pub fn brute_vertices(q: u64, b: u64) -> BTreeSet<Vec<Rational>> {
    // Affine expression in the free variables: (constant, coeffs).
    let mut free: Vec<u64> = Vec::new();
    let mut expr: Vec<Option<(Rational, Vec<i64>)>> = vec![None; q as usize];
    for x in 0..q {
        let partner = (b + q - x) % q;
        if x == 0 {
            expr[0] = Some((int(0), vec![]));
        } else if x == b {
            expr[x as usize] = Some((int(1), vec![]));
        } else if x == partner {
            expr[x as usize] = Some((rat(1, 2), vec![]));
        } else if x < partner {
            free.push(x);
        }
    }
    let d = free.len();
    for (i, &x) in free.iter().enumerate() {
        let mut e = vec![0; d];
        e[i] = 1;
        expr[x as usize] = Some((int(0), e.clone()));
        let partner = (b + q - x) % q;
        let neg: Vec<i64> = e.iter().map(|v| -v).collect();
        expr[partner as usize] = Some((int(1), neg));
    }
    let expr: Vec<(Rational, Vec<i64>)> = expr
        .into_iter()
        .map(|e| {
            let (c, mut v) = e.unwrap();
            v.resize(d, 0);
            (c, v)
        })
        .collect();
    // Inequalities c + a·t >= 0.
    let mut ineqs: BTreeSet<(Rational, Vec<i64>)> = BTreeSet::new();
    let mut push = |c: Rational, a: Vec<i64>| {
        if a.iter().all(|v| *v == 0) {
            assert!(!c.is_negative(), "infeasible constant row");
        } else {
            ineqs.insert((c, a));
        }
    };
    for x in 1..q {
        push(expr[x as usize].0.clone(), expr[x as usize].1.clone());
        for y in x..q {
            let z = ((x + y) % q) as usize;
            let (ex, ey, ez) = (&expr[x as usize], &expr[y as usize], &expr[z]);
            let c = &ex.0 + &ey.0 - &ez.0;
            let a = (0..d).map(|i| ex.1[i] + ey.1[i] - ez.1[i]).collect();
            push(c, a);
        }
    }
    let ineqs: Vec<_> = ineqs.into_iter().collect();
    let eval = |t: &[Rational]| -> Vec<Rational> {
        expr.iter()
            .map(|(c, a)| c + a.iter().zip(t).map(|(ai, ti)| int(*ai) * ti).sum::<Rational>())
            .collect()
    };
    let mut out = BTreeSet::new();
    if d == 0 {
        out.insert(eval(&[]));
        return out;
    }
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let a = idx
            .iter()
            .map(|&i| ineqs[i].1.iter().map(|&v| int(v)).collect())
            .collect();
        let r = idx.iter().map(|&i| -ineqs[i].0.clone()).collect();
        if let Some(t) = solve(a, r) {
            let feasible = ineqs.iter().all(|(c, a)| {
                !(c + a.iter().zip(&t).map(|(ai, ti)| int(*ai) * ti).sum::<Rational>()).is_negative()
            });
            if feasible {
                out.insert(eval(&t));
            }
        }
        // Next combination.
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < ineqs.len() - d + k {
                idx[k] += 1;
                for j in k + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Direct minimality test from the definition, over all pairs.
pub fn brute_is_minimal(f: &FiniteGroupFunction) -> bool {
    let q = f.q();
    let b = f.b().residue();
    let v = f.values();
    v[0].is_zero()
        && v.iter().all(|x| !x.is_negative())
        && (0..q).all(|x| &v[x as usize] + &v[((b + q - x) % q) as usize] == int(1))
        && (0..q).all(|x| (0..q).all(|y| &v[x as usize] + &v[y as usize] >= v[((x + y) % q) as usize]))
}

/// Random PWL function on the grid `k/den`, possibly discontinuous and
/// usually not minimal.
pub fn random_pwl(r: &mut StdRng, den: i64) -> PwlTorusFunction {
    let mut bps: Vec<i64> = (1..den).filter(|_| r.random_bool(0.35)).collect();
    bps.insert(0, 0);
    let val = |r: &mut StdRng| rat(r.random_range(0..=den), den);
    let mut pieces = Vec::new();
    let mut at = Vec::new();
    for (i, &k) in bps.iter().enumerate() {
        let l = rat(k, den);
        let rr = rat(bps.get(i + 1).copied().unwrap_or(den), den);
        let (yl, yr) = (val(r), val(r));
        pieces.push(Piece::through(&l, &yl, &rr, &yr));
        at.push(if r.random_bool(0.5) { yl } else { val(r) });
    }
    let b = rat(r.random_range(1..den), den);
    PwlTorusFunction::new(
        Symmetry::Rhs(b),
        bps.iter().map(|&k| rat(k, den)).collect(),
        pieces,
        at,
    )
    .unwrap()
}
