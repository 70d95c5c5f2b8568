//! Arithmetic in the cyclic group ℤ/qℤ.
//!
//! Residues are always stored canonically in `[0, q-1]`. Groups, elements and
//! automorphisms are small `Copy` values.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// The cyclic group ℤ/qℤ with `q >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicGroup {
    q: u64,
    is_prime: bool,
}

impl CyclicGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::OrderTooSmall(q));
        }
        Ok(CyclicGroup {
            q,
            is_prime: is_prime(q),
        })
    }

    /// Like [`CyclicGroup::new`] but fails with [`Error::NotPrime`] on composite orders.
    pub fn prime(q: u64) -> Result<Self> {
        let g = Self::new(q)?;
        if !g.is_prime {
            return Err(Error::NotPrime(q));
        }
        Ok(g)
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn is_prime(&self) -> bool {
        self.is_prime
    }

    /// The element with the given residue; fails if `residue >= q`.
    pub fn element(&self, residue: u64) -> Result<GroupElement> {
        if residue >= self.q {
            return Err(Error::ResidueOutOfRange {
                residue,
                order: self.q,
            });
        }
        Ok(GroupElement {
            residue,
            group: *self,
        })
    }

    /// The element congruent to `value`, for any integer.
    pub fn reduce(&self, value: i128) -> GroupElement {
        GroupElement {
            residue: value.rem_euclid(self.q as i128) as u64,
            group: *self,
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            residue: 0,
            group: *self,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.q).map(move |residue| GroupElement {
            residue,
            group: *self,
        })
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residue: u64,
    group: CyclicGroup,
}

// Ordering on the embedded group is arbitrary but needed for the derive above.
impl PartialOrd for CyclicGroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CyclicGroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.q.cmp(&other.q)
    }
}

impl GroupElement {
    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn add(&self, other: GroupElement) -> GroupElement {
        debug_assert_eq!(self.group, other.group);
        let q = self.group.q;
        GroupElement {
            residue: ((self.residue as u128 + other.residue as u128) % q as u128) as u64,
            group: self.group,
        }
    }

    pub fn neg(&self) -> GroupElement {
        let q = self.group.q;
        GroupElement {
            residue: (q - self.residue) % q,
            group: self.group,
        }
    }

    pub fn sub(&self, other: GroupElement) -> GroupElement {
        self.add(other.neg())
    }

    /// `k·x`, i.e. `x` added to itself `k` times.
    pub fn scale(&self, k: u64) -> GroupElement {
        let q = self.group.q as u128;
        GroupElement {
            residue: ((self.residue as u128 * (k as u128 % q)) % q) as u64,
            group: self.group,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.group.q)
    }
}

/// Inverse of `a` modulo `q`.
pub fn mod_inverse(a: u64, q: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::OrderTooSmall(q));
    }
    let a = a % q;
    let eg = (a as i128).extended_gcd(&(q as i128));
    if eg.gcd != 1 {
        return Err(Error::NotAUnit { value: a, modulus: q });
    }
    Ok(eg.x.rem_euclid(q as i128) as u64)
}

/// The group automorphism `x ↦ multiplier·x` for a unit `multiplier`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Automorphism {
    multiplier: u64,
    group: CyclicGroup,
}

impl Automorphism {
    pub fn new(group: CyclicGroup, multiplier: u64) -> Result<Self> {
        let multiplier = multiplier % group.q;
        mod_inverse(multiplier, group.q)?;
        Ok(Automorphism { multiplier, group })
    }

    pub fn identity(group: CyclicGroup) -> Self {
        Automorphism {
            multiplier: 1 % group.q,
            group,
        }
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn apply(&self, x: GroupElement) -> GroupElement {
        debug_assert_eq!(x.group, self.group);
        x.scale(self.multiplier)
    }

    pub fn apply_residue(&self, x: u64) -> u64 {
        ((x as u128 * self.multiplier as u128) % self.group.q as u128) as u64
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            multiplier: mod_inverse(self.multiplier, self.group.q).expect("multiplier is a unit"),
            group: self.group,
        }
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn then_after(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            multiplier: self.apply_residue(other.multiplier),
            group: self.group,
        }
    }

    /// Images of `0, 1, …, q-1`.
    pub fn permutation(&self) -> Vec<u64> {
        (0..self.group.q).map(|x| self.apply_residue(x)).collect()
    }
}

/// The unique automorphism of ℤ/qℤ (q prime) sending `b` to `target`.
///
/// Its multiplier is `target·b⁻¹`; for `target = q-1` this is `-b⁻¹`.
pub fn automorphism_sending(b: GroupElement, target: GroupElement) -> Result<Automorphism> {
    let group = b.group;
    if target.group != group {
        return Err(Error::InvalidFunction(
            "elements belong to different groups".into(),
        ));
    }
    if !group.is_prime {
        return Err(Error::NotPrime(group.q));
    }
    if b.is_zero() || target.is_zero() {
        return Err(Error::ZeroElement);
    }
    let b_inv = mod_inverse(b.residue, group.q)?;
    let multiplier = ((target.residue as u128 * b_inv as u128) % group.q as u128) as u64;
    Ok(Automorphism { multiplier, group })
}

/// A set of elements of one group, kept as a sorted residue list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    group: CyclicGroup,
    residues: Vec<u64>,
}

impl ElementSet {
    pub fn new(group: CyclicGroup, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut residues: Vec<u64> = residues.into_iter().collect();
        if let Some(&bad) = residues.iter().find(|&&r| r >= group.q) {
            return Err(Error::ResidueOutOfRange {
                residue: bad,
                order: group.q,
            });
        }
        residues.sort_unstable();
        residues.dedup();
        Ok(ElementSet { group, residues })
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, residue: u64) -> bool {
        self.residues.binary_search(&residue).is_ok()
    }
}

/// The sumset `A + B = {a + b : a ∈ A, b ∈ B}`.
pub fn sumset(a: &ElementSet, b: &ElementSet) -> Result<ElementSet> {
    if a.group != b.group {
        return Err(Error::InvalidFunction(
            "sets belong to different groups".into(),
        ));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let q = a.group.q;
    let mut hit = vec![false; q as usize];
    for &x in &a.residues {
        for &y in &b.residues {
            hit[((x + y) % q) as usize] = true;
        }
    }
    let residues = hit
        .iter()
        .enumerate()
        .filter_map(|(r, &h)| h.then_some(r as u64))
        .collect();
    Ok(ElementSet {
        group: a.group,
        residues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert_eq!(mod_inverse(1, 7).unwrap(), 1);
        assert_eq!(
            mod_inverse(4, 6),
            Err(Error::NotAUnit { value: 4, modulus: 6 })
        );
        assert!(mod_inverse(0, 7).is_err());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1009));
        assert!(!is_prime(1001));
        assert!(CyclicGroup::new(1).is_err());
        assert!(!CyclicGroup::new(9).unwrap().is_prime());
    }

    #[test]
    fn automorphism_examples() {
        let g5 = CyclicGroup::new(5).unwrap();
        let phi = automorphism_sending(g5.element(2).unwrap(), g5.element(4).unwrap()).unwrap();
        assert_eq!(phi.multiplier(), 2);
        let id = automorphism_sending(g5.element(4).unwrap(), g5.element(4).unwrap()).unwrap();
        assert_eq!(id.multiplier(), 1);
        let g7 = CyclicGroup::new(7).unwrap();
        let psi = automorphism_sending(g7.element(3).unwrap(), g7.element(6).unwrap()).unwrap();
        assert_eq!(psi.multiplier(), 2);
        assert_eq!(psi.apply(g7.element(3).unwrap()).residue(), 6);
    }

    #[test]
    fn automorphism_errors() {
        let g6 = CyclicGroup::new(6).unwrap();
        assert_eq!(
            automorphism_sending(g6.element(1).unwrap(), g6.element(5).unwrap()),
            Err(Error::NotPrime(6))
        );
        let g5 = CyclicGroup::new(5).unwrap();
        assert_eq!(
            automorphism_sending(g5.zero(), g5.element(4).unwrap()),
            Err(Error::ZeroElement)
        );
        assert_eq!(
            automorphism_sending(g5.element(1).unwrap(), g5.zero()),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn sumset_examples() {
        let g5 = CyclicGroup::new(5).unwrap();
        let s = |v: &[u64]| ElementSet::new(g5, v.iter().copied()).unwrap();
        assert_eq!(sumset(&s(&[1]), &s(&[2])).unwrap().residues(), &[3]);
        assert_eq!(sumset(&s(&[0, 1]), &s(&[0, 1])).unwrap().residues(), &[0, 1, 2]);
        let g3 = CyclicGroup::new(3).unwrap();
        let full = ElementSet::new(g3, [0, 1, 2]).unwrap();
        let one = ElementSet::new(g3, [1]).unwrap();
        assert_eq!(sumset(&full, &one).unwrap().residues(), &[0, 1, 2]);
        assert_eq!(sumset(&s(&[]), &s(&[1])), Err(Error::EmptySet));
    }

    #[test]
    fn element_arithmetic() {
        let g = CyclicGroup::new(7).unwrap();
        let x = g.element(5).unwrap();
        assert_eq!(x.add(g.element(4).unwrap()).residue(), 2);
        assert_eq!(x.neg().residue(), 2);
        assert_eq!(g.zero().neg().residue(), 0);
        assert_eq!(x.scale(3).residue(), 1);
        assert_eq!(g.reduce(-1).residue(), 6);
        assert!(g.element(7).is_err());
    }
}
