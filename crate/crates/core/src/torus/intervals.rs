//! Finite unions of closed arcs on the circle, with exact sumsets.
//!
//! Used to test the sumset inequality `μ(A + B) ≥ min(1, μ(A) + μ(B))` on
//! sublevel sets of piecewise-linear functions.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{frac, PwlTorusFunction};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Disjoint, sorted closed intervals inside `[0, 1]`. Degenerate intervals
/// are isolated points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TorusIntervals {
    parts: Vec<(Rational, Rational)>,
}

impl TorusIntervals {
    pub fn new(parts: Vec<(Rational, Rational)>) -> Self {
        let mut s = TorusIntervals { parts };
        s.normalize();
        s
    }

    pub fn full() -> Self {
        TorusIntervals {
            parts: vec![(Rational::zero(), Rational::one())],
        }
    }

    pub fn parts(&self) -> &[(Rational, Rational)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.parts.iter().map(|(l, r)| r - l).sum()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = frac(x);
        let hit = |x: &Rational| self.parts.iter().any(|(l, r)| l <= x && x <= r);
        hit(&x) || (x.is_zero() && hit(&Rational::one()))
    }

    fn normalize(&mut self) {
        self.parts.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(self.parts.len());
        for (l, r) in self.parts.drain(..) {
            match out.last_mut() {
                Some(last) if l <= last.1 => {
                    if r > last.1 {
                        last.1 = r;
                    }
                }
                _ => out.push((l, r)),
            }
        }
        self.parts = out;
    }

    /// `A + B = {a + b}` on the circle.
    pub fn sumset(&self, other: &TorusIntervals) -> TorusIntervals {
        let one = Rational::one();
        let mut parts = Vec::new();
        for (a0, a1) in &self.parts {
            for (b0, b1) in &other.parts {
                let len = (a1 - a0) + (b1 - b0);
                if len >= one {
                    return TorusIntervals::full();
                }
                let start = frac(&(a0 + b0));
                let end = &start + &len;
                if end <= one {
                    parts.push((start, end));
                } else {
                    parts.push((start, one.clone()));
                    parts.push((Rational::zero(), end - &one));
                }
            }
        }
        TorusIntervals::new(parts)
    }
}

/// `{x : π(x) ≤ α}` up to finitely many boundary points of its own arcs.
pub fn sublevel_set(pi: &PwlTorusFunction, alpha: &Rational) -> TorusIntervals {
    let mut parts = Vec::new();
    for (i, (l, r, p)) in pi.cells().enumerate() {
        if pi.at_values()[i] <= *alpha {
            parts.push((l.clone(), l.clone()));
        }
        let (lo, hi) = if p.slope.is_zero() {
            if p.intercept <= *alpha {
                (l, r)
            } else {
                continue;
            }
        } else {
            let root = (alpha - &p.intercept) / &p.slope;
            if p.slope.is_positive() {
                (l, if root < r { root } else { r })
            } else {
                (if root > l { root } else { l }, r)
            }
        };
        if lo < hi {
            parts.push((lo, hi));
        }
    }
    TorusIntervals::new(parts)
}

/// Measures involved in the sumset inequality for two sublevel sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KempermanCheck {
    #[serde(with = "crate::rational::serde_str")]
    pub measure_a: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub measure_b: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub measure_sum: Rational,
    pub holds: bool,
}

/// Checks `μ(A + B) ≥ min(1, μ(A) + μ(B))` for `A = {π ≤ α₁}`, `B = {π ≤ α₂}`.
pub fn kemperman_check(
    pi: &PwlTorusFunction,
    alpha1: &Rational,
    alpha2: &Rational,
) -> Result<KempermanCheck> {
    let a = sublevel_set(pi, alpha1);
    let b = sublevel_set(pi, alpha2);
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let (measure_a, measure_b) = (a.measure(), b.measure());
    let measure_sum = a.sumset(&b).measure();
    let bound = std::cmp::min(Rational::one(), &measure_a + &measure_b);
    Ok(KempermanCheck {
        holds: measure_sum >= bound && !measure_sum.is_negative(),
        measure_a,
        measure_b,
        measure_sum,
    })
}
