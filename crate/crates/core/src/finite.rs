//! Exact functions on ℤ/qℤ: the classic constructions, minimality testing,
//! composition with automorphisms and the nondecreasing rearrangement.

use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Automorphism, CyclicGroup, GroupElement};
use crate::rational::{format_rational, int, parse_rational, rat, Rational};
use crate::verdict::{CheckOptions, MinimalityVerdict, Violation, ViolationKind, Witness};

/// A nonnegative rational function `π` on ℤ/qℤ together with the right-hand
/// side `b ≠ 0` it is meant to be valid for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FiniteJson", into = "FiniteJson")]
pub struct FiniteGroupFunction {
    group: CyclicGroup,
    b: GroupElement,
    values: Vec<Rational>,
}

impl FiniteGroupFunction {
    pub fn new(q: u64, b: u64, values: Vec<Rational>) -> Result<Self> {
        let group = CyclicGroup::new(q)?;
        let b = group.element(b)?;
        if b.is_zero() {
            return Err(Error::ZeroElement);
        }
        if values.len() as u64 != q {
            return Err(Error::InvalidFunction(format!(
                "expected {q} values, got {}",
                values.len()
            )));
        }
        if let Some((x, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(Error::InvalidFunction(format!(
                "value at {x} is negative ({})",
                format_rational(v)
            )));
        }
        Ok(FiniteGroupFunction { group, b, values })
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn q(&self) -> u64 {
        self.group.order()
    }

    pub fn b(&self) -> GroupElement {
        self.b
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, x: u64) -> &Rational {
        &self.values[(x % self.q()) as usize]
    }

    /// Same values, different right-hand side.
    pub fn with_rhs(mut self, b: u64) -> Result<Self> {
        let b = self.group.element(b)?;
        if b.is_zero() {
            return Err(Error::ZeroElement);
        }
        self.b = b;
        Ok(self)
    }

    /// `π(x) <= π(y)` whenever `x <= y` as integers in `[0, q-1]`.
    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_subadditive(&self) -> bool {
        subadditivity_violations(self, true).is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct FiniteJson {
    q: u64,
    b: u64,
    values: Vec<String>,
}

/// `(π(0), …, π(q-1)) mod b` with exact entries.
impl std::fmt::Display for FiniteGroupFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vals: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "({}) b={}", vals.join(", "), self.b.residue())
    }
}

impl TryFrom<FiniteJson> for FiniteGroupFunction {
    type Error = Error;

    fn try_from(j: FiniteJson) -> Result<Self> {
        let values = j
            .values
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        FiniteGroupFunction::new(j.q, j.b, values)
    }
}

impl From<FiniteGroupFunction> for FiniteJson {
    fn from(f: FiniteGroupFunction) -> Self {
        FiniteJson {
            q: f.q(),
            b: f.b.residue(),
            values: f.values.iter().map(format_rational).collect(),
        }
    }
}

/// The Gomory function `GOMᵠ_b`: `x/b` up to `b`, then `(q-x)/(q-b)`.
pub fn gom(q: u64, b: u64) -> Result<FiniteGroupFunction> {
    let group = CyclicGroup::new(q)?;
    let b_el = group.element(b)?;
    if b_el.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (qi, bi) = (q as i64, b as i64);
    let values = (0..qi)
        .map(|x| {
            if x <= bi {
                rat(x, bi)
            } else {
                rat(qi - x, qi - bi)
            }
        })
        .collect();
    FiniteGroupFunction::new(q, b, values)
}

/// The MD2 function: `1/2` everywhere except `π(0) = 0` and `π(b) = 1`.
pub fn md2(q: u64, b: u64) -> Result<FiniteGroupFunction> {
    let group = CyclicGroup::new(q)?;
    if group.element(b)?.is_zero() {
        return Err(Error::ZeroElement);
    }
    let values = (0..q)
        .map(|x| {
            if x == 0 {
                int(0)
            } else if x == b {
                int(1)
            } else {
                rat(1, 2)
            }
        })
        .collect();
    FiniteGroupFunction::new(q, b, values)
}

/// The Dantzig function, equal to 1 everywhere (including the origin).
///
/// Validity does not depend on the right-hand side; it is set to 1 and can
/// be changed with [`FiniteGroupFunction::with_rhs`].
pub fn dantzig(q: u64) -> Result<FiniteGroupFunction> {
    FiniteGroupFunction::new(q, 1, vec![int(1); q as usize])
}

/// Tests the three conditions characterising minimal functions
/// (`π(0) = 0`, subadditivity, symmetry) plus nonnegativity.
/// Every violation is reported.
pub fn is_minimal(pi: &FiniteGroupFunction) -> MinimalityVerdict {
    is_minimal_with(pi, CheckOptions::default())
}

pub fn is_minimal_with(pi: &FiniteGroupFunction, opts: CheckOptions) -> MinimalityVerdict {
    let mut violations = Vec::new();
    let done = |v: &Vec<Violation>| opts.stop_at_first && !v.is_empty();

    for (x, v) in pi.values.iter().enumerate() {
        if v.is_negative() {
            violations.push(Violation {
                kind: ViolationKind::Negativity,
                witness: Witness::Element(x as u64),
                amount: -v.clone(),
            });
        }
    }
    if done(&violations) {
        return MinimalityVerdict::from_violations(violations);
    }
    if !pi.values[0].is_zero() {
        violations.push(Violation {
            kind: ViolationKind::Origin,
            witness: Witness::Element(0),
            amount: pi.values[0].abs(),
        });
    }
    if done(&violations) {
        return MinimalityVerdict::from_violations(violations);
    }
    let q = pi.q();
    let b = pi.b.residue();
    let one = Rational::one();
    for x in 0..q {
        let partner = (b + q - x) % q;
        if x > partner {
            continue;
        }
        let sum = &pi.values[x as usize] + &pi.values[partner as usize];
        if sum != one {
            violations.push(Violation {
                kind: ViolationKind::Symmetry,
                witness: Witness::Element(x),
                amount: (sum - &one).abs(),
            });
            if done(&violations) {
                return MinimalityVerdict::from_violations(violations);
            }
        }
    }
    violations.extend(subadditivity_violations(pi, opts.stop_at_first));
    MinimalityVerdict::from_violations(violations)
}

/// All pairs `x <= y` with `π(x) + π(y) < π(x + y)`.
///
/// Values are first scaled to a common denominator so the `q²/2` comparisons
/// run on machine integers whenever they fit.
fn subadditivity_violations(pi: &FiniteGroupFunction, stop_at_first: bool) -> Vec<Violation> {
    let denom = pi
        .values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = pi
        .values
        .iter()
        .map(|v| v.numer() * (&denom / v.denom()))
        .collect();
    let small: Option<Vec<i128>> = scaled
        .iter()
        .map(|n| n.to_i64().map(i128::from))
        .collect();
    let raw = match small {
        Some(vals) => pair_scan(&vals, stop_at_first)
            .into_iter()
            .map(|(x, y, d)| (x, y, BigInt::from(d)))
            .collect(),
        None => pair_scan(&scaled, stop_at_first),
    };
    raw.into_iter()
        .map(|(x, y, d)| Violation {
            kind: ViolationKind::Subadditivity,
            witness: Witness::Pair(x, y),
            amount: Rational::new(d, denom.clone()),
        })
        .collect()
}

fn pair_scan<T>(vals: &[T], stop_at_first: bool) -> Vec<(u64, u64, T)>
where
    T: Ord + Clone,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    let q = vals.len();
    let mut out = Vec::new();
    for x in 0..q {
        for y in x..q {
            let s = (x + y) % q;
            let lhs = &vals[x] + &vals[y];
            if lhs < vals[s] {
                out.push((x as u64, y as u64, &vals[s] - &lhs));
                if stop_at_first {
                    return out;
                }
            }
        }
    }
    out
}

/// `π ∘ φ`, valid for the right-hand side `φ⁻¹(b)`.
pub fn compose(pi: &FiniteGroupFunction, phi: &Automorphism) -> Result<FiniteGroupFunction> {
    if !pi.group.is_prime() {
        return Err(Error::NotPrime(pi.q()));
    }
    if phi.group() != pi.group {
        return Err(Error::InvalidFunction(
            "automorphism acts on a different group".into(),
        ));
    }
    let values = (0..pi.q())
        .map(|x| pi.values[phi.apply_residue(x) as usize].clone())
        .collect();
    let b = phi.inverse().apply(pi.b);
    FiniteGroupFunction::new(pi.q(), b.residue(), values)
}

/// The nondecreasing rearrangement `π̂(x) = min{α ≥ 0 : |π⁻¹((0, α])| ≥ x}`.
///
/// For subadditive `π` with `π(0) = 0` on a group of prime order every
/// nonzero element has a positive value, so `π̂` is the sorted value vector.
/// The result is assigned right-hand side `q - 1`; if `π` satisfies symmetry
/// for its own `b`, the result satisfies it for `q - 1`.
pub fn rearrange_finite(pi: &FiniteGroupFunction) -> Result<FiniteGroupFunction> {
    if !pi.group.is_prime() {
        return Err(Error::NotPrime(pi.q()));
    }
    if !pi.values[0].is_zero() {
        return Err(Error::OriginNotZero);
    }
    if pi.values.iter().all(Zero::is_zero) {
        return Err(Error::IdenticallyZero);
    }
    if !pi.is_subadditive() {
        return Err(Error::NotSubadditive);
    }
    let mut values = pi.values.clone();
    values.sort();
    FiniteGroupFunction::new(pi.q(), pi.q() - 1, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::automorphism_sending;

    fn vals(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn gom_examples() {
        assert_eq!(
            gom(5, 4).unwrap().values(),
            vals(&[(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)])
        );
        assert_eq!(gom(3, 1).unwrap().values(), vals(&[(0, 1), (1, 1), (1, 2)]));
        assert_eq!(
            gom(5, 2).unwrap().values(),
            vals(&[(0, 1), (1, 2), (1, 1), (2, 3), (1, 3)])
        );
        assert_eq!(gom(5, 0), Err(Error::ZeroElement));
    }

    #[test]
    fn md2_and_dantzig_examples() {
        assert_eq!(
            md2(5, 2).unwrap().values(),
            vals(&[(0, 1), (1, 2), (1, 1), (1, 2), (1, 2)])
        );
        assert_eq!(md2(3, 1).unwrap().values(), gom(3, 1).unwrap().values());
        assert_eq!(
            md2(7, 3).unwrap().values(),
            vals(&[(0, 1), (1, 2), (1, 2), (1, 1), (1, 2), (1, 2), (1, 2)])
        );
        assert_eq!(md2(7, 0), Err(Error::ZeroElement));
        assert_eq!(dantzig(3).unwrap().values(), vec![int(1); 3]);
        assert_eq!(dantzig(2).unwrap().values(), vec![int(1); 2]);
    }

    #[test]
    fn minimality_examples() {
        assert!(is_minimal(&gom(5, 4).unwrap()).is_minimal);
        assert!(is_minimal(&md2(5, 2).unwrap()).is_minimal);
        let other = FiniteGroupFunction::new(5, 4, vals(&[(0, 1), (2, 3), (1, 2), (1, 3), (1, 1)]))
            .unwrap();
        assert!(is_minimal(&other).is_minimal);

        let d = is_minimal(&dantzig(3).unwrap().with_rhs(1).unwrap());
        assert!(!d.is_minimal);
        assert!(d.has(ViolationKind::Origin));
    }

    #[test]
    fn brute_force_agrees_on_explicit_vertex() {
        // Independent all-pairs check (both orders) for the second vertex of q = 5, b = 4.
        let v = vals(&[(0, 1), (2, 3), (1, 2), (1, 3), (1, 1)]);
        for x in 0..5 {
            for y in 0..5 {
                assert!(&v[x] + &v[y] >= v[(x + y) % 5]);
            }
            assert_eq!(&v[x] + &v[(4 + 5 - x) % 5], int(1));
        }
    }

    #[test]
    fn violations_are_exact() {
        // π(1) = 1/4 forces π(2) <= 1/2; set it to 3/4.
        let f = FiniteGroupFunction::new(5, 4, vals(&[(0, 1), (1, 4), (3, 4), (3, 4), (1, 1)]))
            .unwrap();
        let v = is_minimal(&f);
        assert!(!v.is_minimal);
        let sub: Vec<_> = v
            .violations
            .iter()
            .filter(|v| v.kind == ViolationKind::Subadditivity)
            .collect();
        assert!(sub
            .iter()
            .any(|v| v.witness == Witness::Pair(1, 1) && v.amount == rat(1, 4)));
        assert!(v.has(ViolationKind::Symmetry));
        let first = is_minimal_with(&f, CheckOptions { stop_at_first: true });
        assert_eq!(first.violations.len(), 1);
    }

    #[test]
    fn compose_examples() {
        let g5 = CyclicGroup::new(5).unwrap();
        let phi = Automorphism::new(g5, 2).unwrap();
        let c = compose(&gom(5, 4).unwrap(), &phi).unwrap();
        assert_eq!(c.values(), vals(&[(0, 1), (1, 2), (1, 1), (1, 4), (3, 4)]));
        assert_eq!(c.b().residue(), 2);
        assert!(is_minimal(&c).is_minimal);

        let id = Automorphism::identity(g5);
        assert_eq!(compose(&gom(5, 4).unwrap(), &id).unwrap(), gom(5, 4).unwrap());

        let g7 = CyclicGroup::new(7).unwrap();
        let c7 = compose(&gom(7, 6).unwrap(), &Automorphism::new(g7, 2).unwrap()).unwrap();
        assert_eq!(
            c7.values(),
            vals(&[(0, 1), (2, 6), (4, 6), (1, 1), (1, 6), (3, 6), (5, 6)])
        );
        assert_eq!(c7.b().residue(), 3);

        let g6 = CyclicGroup::new(6).unwrap();
        let f6 = gom(6, 5).unwrap();
        assert_eq!(
            compose(&f6, &Automorphism::new(g6, 5).unwrap()),
            Err(Error::NotPrime(6))
        );
    }

    #[test]
    fn compose_with_sending_automorphism_moves_rhs() {
        let g7 = CyclicGroup::new(7).unwrap();
        for b in 1..7 {
            let phi = automorphism_sending(g7.element(b).unwrap(), g7.element(6).unwrap()).unwrap();
            let f = compose(&gom(7, 6).unwrap(), &phi).unwrap();
            assert_eq!(f.b().residue(), b);
            assert!(is_minimal(&f).is_minimal);
        }
    }

    #[test]
    fn rearrange_examples() {
        let f = FiniteGroupFunction::new(5, 2, vals(&[(0, 1), (1, 2), (1, 1), (1, 4), (3, 4)]))
            .unwrap();
        assert_eq!(rearrange_finite(&f).unwrap(), gom(5, 4).unwrap());
        assert_eq!(rearrange_finite(&gom(5, 4).unwrap()).unwrap(), gom(5, 4).unwrap());
        let r = rearrange_finite(&md2(5, 2).unwrap()).unwrap();
        assert_eq!(r.values(), vals(&[(0, 1), (1, 2), (1, 2), (1, 2), (1, 1)]));
        assert_eq!(r.b().residue(), 4);
    }

    #[test]
    fn rearrange_errors() {
        assert_eq!(
            rearrange_finite(&gom(6, 5).unwrap()),
            Err(Error::NotPrime(6))
        );
        let zero = FiniteGroupFunction::new(5, 4, vec![int(0); 5]).unwrap();
        assert_eq!(rearrange_finite(&zero), Err(Error::IdenticallyZero));
        assert_eq!(
            rearrange_finite(&dantzig(5).unwrap()),
            Err(Error::OriginNotZero)
        );
        let bad = FiniteGroupFunction::new(5, 4, vals(&[(0, 1), (1, 4), (3, 4), (3, 4), (1, 1)]))
            .unwrap();
        assert_eq!(rearrange_finite(&bad), Err(Error::NotSubadditive));
    }

    #[test]
    fn constructor_rejects_bad_data() {
        assert!(FiniteGroupFunction::new(3, 0, vec![int(0); 3]).is_err());
        assert!(FiniteGroupFunction::new(3, 1, vec![int(0); 2]).is_err());
        assert!(FiniteGroupFunction::new(3, 1, vec![int(0), int(-1), int(0)]).is_err());
        assert!(FiniteGroupFunction::new(3, 3, vec![int(0); 3]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = gom(5, 2).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"q":5,"b":2,"values":["0","1/2","1","2/3","1/3"]}"#);
        let back: FiniteGroupFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert!(serde_json::from_str::<FiniteGroupFunction>(r#"{"q":3,"b":0,"values":["0","1","1/2"]}"#).is_err());
    }
}
