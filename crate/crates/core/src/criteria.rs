//! Strength scores of finite-group functions.
//!
//! Norms use the normalized Haar measure on ℤ/qℤ (weight `1/q` per element),
//! so the `L_p` lower bound of `1/2` is shared with the circle case. Exact
//! quantities stay rational; only roots and logarithms are `f64`. The
//! logarithmic score sums `q - 1` individually rounded logs, so its error is
//! bounded by roughly `4q` ulps.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Serialize, Serializer};

use crate::finite::FiniteGroupFunction;
use crate::rational::{format_rational, int, ln_rational, rat, to_f64, Rational};

/// `|π|_p` reported as its exact `p`-th power and a floating-point root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpNorm {
    pub p: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub pth_power: Rational,
    pub norm: f64,
}

/// `|π|_p^p = (1/q) Σ_x |π(x)|^p`.
pub fn lp_norm(pi: &FiniteGroupFunction, p: u32) -> LpNorm {
    assert!(p >= 1, "p must be at least 1");
    let q = pi.q();
    let sum: Rational = pi.values().iter().map(|v| Pow::pow(v, p)).sum();
    let pth_power = sum / int(q as i64);
    let norm = pth_root(&pth_power, p);
    LpNorm { p, pth_power, norm }
}

pub(crate) fn pth_root(value: &Rational, p: u32) -> f64 {
    let x = to_f64(value);
    match p {
        1 => x,
        2 => x.sqrt(),
        3 => x.cbrt(),
        _ => {
            if x == 0.0 {
                return 0.0;
            }
            let pf = p as f64;
            let y = x.powf(1.0 / pf);
            // One Newton step on y^p = x.
            y - (y.powi(p as i32) - x) / (pf * y.powi(p as i32 - 1))
        }
    }
}

/// Smallest possible `|π|_p^p` over minimal functions on a group of order
/// `q`: `(1/2)^p + (1 - 2(1/2)^p)/q`, attained by MD2.
///
/// The infimum over all groups is `(1/2)^p`; on a finite group the forced
/// values `π(0) = 0` and `π(b) = 1` add the second term.
pub fn finite_lp_power_bound(q: u64, p: u32) -> Rational {
    let half_p: Rational = Pow::pow(rat(1, 2), p);
    &half_p + (Rational::one() - int(2) * &half_p) / int(q as i64)
}

/// `∏_{x≠0} π(x)`.
pub fn volume_product(pi: &FiniteGroupFunction) -> Rational {
    pi.values()[1..].iter().product()
}

/// Volume of the simplex cut off from the nonnegative orthant of the
/// nonzero coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplexVolume {
    Finite(Rational),
    Infinite,
}

impl SimplexVolume {
    pub fn is_finite(&self) -> bool {
        matches!(self, SimplexVolume::Finite(_))
    }
}

impl Serialize for SimplexVolume {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SimplexVolume::Finite(r) => s.serialize_str(&format_rational(r)),
            SimplexVolume::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `(1/(q-1)!) ∏_{x≠0} 1/π(x)`, or `Infinite` when some `π(x) = 0`, `x ≠ 0`.
pub fn simplex_volume(pi: &FiniteGroupFunction) -> SimplexVolume {
    let prod = volume_product(pi);
    if prod.is_zero() {
        return SimplexVolume::Infinite;
    }
    let fact: BigInt = (1..pi.q()).map(BigInt::from).product();
    SimplexVolume::Finite(prod.recip() / Rational::from_integer(fact))
}

/// `(1/(q-1)) Σ_{x≠0} ln π(x)`; `-inf` if some value vanishes.
pub fn log_geo_mean(pi: &FiniteGroupFunction) -> f64 {
    let rest = &pi.values()[1..];
    if rest.iter().any(Zero::is_zero) {
        return f64::NEG_INFINITY;
    }
    rest.iter().map(ln_rational).sum::<f64>() / rest.len() as f64
}

/// All scores for one function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub lp_norms: BTreeMap<u32, LpNorm>,
    /// `(1/2)^p + (1 - 2(1/2)^p)/q` per `p`, the finite-group lower bound for
    /// `|π|_p^p`. The group-independent infimum is `(1/2)^p`.
    #[serde(serialize_with = "ser_rational_map")]
    pub lp_finite_bounds: BTreeMap<u32, Rational>,
    #[serde(with = "crate::rational::serde_str")]
    pub volume_product: Rational,
    pub simplex_volume: SimplexVolume,
    #[serde(serialize_with = "ser_extended_f64")]
    pub log_geo_mean: f64,
}

impl CriterionReport {
    pub fn compute(pi: &FiniteGroupFunction, ps: &[u32]) -> Self {
        CriterionReport {
            lp_norms: ps.iter().map(|&p| (p, lp_norm(pi, p))).collect(),
            lp_finite_bounds: ps
                .iter()
                .map(|&p| (p, finite_lp_power_bound(pi.q(), p)))
                .collect(),
            volume_product: volume_product(pi),
            simplex_volume: simplex_volume(pi),
            log_geo_mean: log_geo_mean(pi),
        }
    }
}

fn ser_rational_map<S: Serializer>(m: &BTreeMap<u32, Rational>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &format_rational(v))?;
    }
    map.end()
}

/// Finite floats as numbers, infinities as the strings `"inf"` / `"-inf"`.
pub(crate) fn ser_extended_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else if *x < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}
