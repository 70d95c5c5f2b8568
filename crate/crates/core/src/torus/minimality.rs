//! Exact minimality test for piecewise-linear torus functions.
//!
//! Subadditivity is certified on the complex cut out by the lines
//! `x ∈ B`, `y ∈ B` and `x + y ∈ B` (mod 1), where `B` is the breakpoint
//! set. `Δπ` is affine on each open cell and edge, so its infimum is
//! approached at a vertex along some direction `(u, v)`. Every vertex is
//! therefore evaluated with all 13 sign patterns of `(u, v, u + v)`, each
//! sign selecting a left limit, value or right limit.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::{frac, PwlTorusFunction, Symmetry};
use crate::rational::{int, Rational};
use crate::verdict::{CheckOptions, MinimalityVerdict, Side, Violation, ViolationKind, Witness};

pub fn is_minimal_pwl(pi: &PwlTorusFunction) -> MinimalityVerdict {
    is_minimal_pwl_with(pi, CheckOptions::default())
}

fn side_of(sign: i8) -> Side {
    match sign {
        -1 => Side::Left,
        0 => Side::At,
        _ => Side::Right,
    }
}

/// The 13 realizable sign patterns of `(u, v, u + v)`.
fn sign_patterns() -> Vec<[i8; 3]> {
    let mut out = Vec::with_capacity(13);
    for su in -1i8..=1 {
        for sv in -1i8..=1 {
            if su != 0 && sv == -su {
                for sw in -1i8..=1 {
                    out.push([su, sv, sw]);
                }
            } else {
                out.push([su, sv, (su + sv).signum()]);
            }
        }
    }
    out
}

pub fn is_minimal_pwl_with(pi: &PwlTorusFunction, opts: CheckOptions) -> MinimalityVerdict {
    let mut violations = Vec::new();
    let done = |v: &Vec<Violation>| opts.stop_at_first && !v.is_empty();

    // Negativity: values and one-sided limits at every cell end.
    for i in 0..pi.breakpoints().len() {
        let l = pi.limits_at(i);
        let x = &pi.breakpoints()[i];
        for (value, side) in [(&l.left, Side::Left), (&l.at, Side::At), (&l.right, Side::Right)] {
            if value.is_negative() {
                violations.push(Violation {
                    kind: ViolationKind::Negativity,
                    witness: if side == Side::At {
                        Witness::Point(x.clone())
                    } else {
                        Witness::PointPair {
                            x: x.clone(),
                            y: Rational::zero(),
                            sides: [side, Side::At, side],
                        }
                    },
                    amount: -value,
                });
                break;
            }
        }
        if done(&violations) {
            return MinimalityVerdict::from_violations(violations);
        }
    }

    let zero = Rational::zero();
    let origin = pi.value(&zero);
    if !origin.is_zero() {
        violations.push(Violation {
            kind: ViolationKind::Origin,
            witness: Witness::Point(zero.clone()),
            amount: origin.abs(),
        });
        if done(&violations) {
            return MinimalityVerdict::from_violations(violations);
        }
    }

    check_symmetry(pi, &mut violations, opts);
    if done(&violations) {
        return MinimalityVerdict::from_violations(violations);
    }
    check_subadditivity(pi, &mut violations, opts);
    MinimalityVerdict::from_violations(violations)
}

fn check_symmetry(pi: &PwlTorusFunction, violations: &mut Vec<Violation>, opts: CheckOptions) {
    let b = pi.symmetry().as_rational();
    let wrap = matches!(pi.symmetry(), Symmetry::WrapAround);
    let mut points: BTreeSet<Rational> = BTreeSet::new();
    for x in pi.breakpoints() {
        points.insert(x.clone());
        points.insert(frac(&(&b - x)));
    }
    let points: Vec<Rational> = points.into_iter().collect();
    let one = Rational::one();
    let probe = |x: Rational, violations: &mut Vec<Violation>| -> bool {
        let s = pi.value(&x) + pi.value(&(&b - &x)) - &one;
        if s.is_zero() {
            return false;
        }
        violations.push(Violation {
            kind: ViolationKind::Symmetry,
            witness: Witness::Point(x),
            amount: s.abs(),
        });
        true
    };
    for (j, p) in points.iter().enumerate() {
        if !(wrap && p.is_zero()) && probe(p.clone(), violations) && opts.stop_at_first {
            return;
        }
        // On an open cell both terms are affine; two interior points fix it.
        let next = points.get(j + 1).cloned().unwrap_or_else(|| one.clone());
        let m1 = (int(2) * p + &next) / int(3);
        let m2 = (p + int(2) * &next) / int(3);
        if (probe(m1, violations) || probe(m2, violations))
            && opts.stop_at_first {
                return;
            }
    }
}

fn check_subadditivity(pi: &PwlTorusFunction, violations: &mut Vec<Violation>, opts: CheckOptions) {
    let bps = pi.breakpoints();
    let mut vertices: BTreeSet<(Rational, Rational)> = BTreeSet::new();
    let mut add = |x: Rational, y: Rational| {
        if x <= y {
            vertices.insert((x, y));
        } else {
            vertices.insert((y, x));
        }
    };
    for x in bps {
        for y in bps {
            add(x.clone(), y.clone());
            add(x.clone(), frac(&(y - x)));
        }
    }
    let patterns = sign_patterns();
    for (x, y) in vertices {
        let z = frac(&(&x + &y));
        let mut worst: Option<(Rational, [Side; 3])> = None;
        for pat in &patterns {
            let sides = [side_of(pat[0]), side_of(pat[1]), side_of(pat[2])];
            let delta = pi.limit(&x, sides[0]) + pi.limit(&y, sides[1]) - pi.limit(&z, sides[2]);
            if delta.is_negative() && worst.as_ref().is_none_or(|(w, _)| delta < *w) {
                worst = Some((delta, sides));
            }
        }
        if let Some((delta, sides)) = worst {
            violations.push(Violation {
                kind: ViolationKind::Subadditivity,
                witness: Witness::PointPair { x, y, sides },
                amount: -delta,
            });
            if opts.stop_at_first {
                return;
            }
        }
    }
}
