//! Integrals over the circle: `∫ ln π`, `L_p` norms and the layer-cake
//! identity `-∫ ln π = ∫₀¹ μ({π ≤ s}) / s ds`.

use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use super::rearrange::sublevel_profile;
use super::PwlTorusFunction;
use crate::criteria::pth_root;
use crate::rational::{int, ln_rational, to_f64, Rational};

/// Mean of `ln u` over a segment where `u` runs linearly between `a` and `c`.
fn mean_ln(a: &Rational, c: &Rational) -> f64 {
    let (a, c) = if a <= c { (a, c) } else { (c, a) };
    if c.is_zero() {
        return f64::NEG_INFINITY;
    }
    if a.is_zero() {
        return ln_rational(c) - 1.0;
    }
    if a == c {
        return ln_rational(a);
    }
    // c = a(1 + t): mean = ln a + (1 + t)·ln(1 + t)/t - 1.
    let t_exact = (c - a) / a;
    let t = to_f64(&t_exact);
    ln_rational(a) + to_f64(&(c / a)) * t.ln_1p() / t - 1.0
}

/// `∫_𝕋 ln π dμ`; `-inf` when `π` vanishes on a set of positive measure and
/// `NaN` if `π` takes negative values.
pub fn integral_ln(pi: &PwlTorusFunction) -> f64 {
    let mut total = 0.0;
    for (l, r, p) in pi.cells() {
        let (a, c) = (p.eval(&l), p.eval(&r));
        if a.is_negative() || c.is_negative() {
            return f64::NAN;
        }
        let m = mean_ln(&a, &c);
        if m == f64::NEG_INFINITY {
            return m;
        }
        total += to_f64(&(&r - &l)) * m;
    }
    total
}

/// Mean of `u^p` over a segment where `u ≥ 0` runs linearly from `a` to `c`.
fn mean_pow(a: &Rational, c: &Rational, p: u32) -> Rational {
    if a == c {
        return Pow::pow(a, p);
    }
    (Pow::pow(c, p + 1) - Pow::pow(a, p + 1)) / ((c - a) * int(p as i64 + 1))
}

/// Exact `∫_𝕋 |π|^p dμ`.
pub fn lp_power_torus(pi: &PwlTorusFunction, p: u32) -> Rational {
    assert!(p >= 1, "p must be at least 1");
    let mut total = Rational::zero();
    for (l, r, piece) in pi.cells() {
        let (a, c) = (piece.eval(&l), piece.eval(&r));
        if a.is_negative() != c.is_negative() && !a.is_zero() && !c.is_zero() {
            let root = -&piece.intercept / &piece.slope;
            total += (&root - &l) * mean_pow(&a.abs(), &Rational::zero(), p);
            total += (&r - &root) * mean_pow(&Rational::zero(), &c.abs(), p);
        } else {
            total += (&r - &l) * mean_pow(&a.abs(), &c.abs(), p);
        }
    }
    total
}

/// `(∫ |π|^p)^{1/p}`.
pub fn lp_norm_torus(pi: &PwlTorusFunction, p: u32) -> f64 {
    pth_root(&lp_power_torus(pi, p), p)
}

/// Both sides of the layer-cake identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerCake {
    /// `-∫ ln π`.
    #[serde(serialize_with = "crate::criteria::ser_extended_f64")]
    pub lhs: f64,
    /// `∫₀¹ μ({π ≤ s}) / s ds`.
    #[serde(serialize_with = "crate::criteria::ser_extended_f64")]
    pub rhs: f64,
    #[serde(serialize_with = "crate::criteria::ser_extended_f64")]
    pub gap: f64,
}

/// Evaluates both sides for `0 ≤ π ≤ 1`. The right side is integrated in
/// closed form on each affine stretch of the sublevel profile.
pub fn layer_cake_check(pi: &PwlTorusFunction) -> LayerCake {
    let lhs = -integral_ln(pi);
    let rhs = layer_cake_rhs(pi);
    let gap = if lhs.is_infinite() && rhs.is_infinite() && lhs.signum() == rhs.signum() {
        0.0
    } else {
        (lhs - rhs).abs()
    };
    LayerCake { lhs, rhs, gap }
}

fn layer_cake_rhs(pi: &PwlTorusFunction) -> f64 {
    let knots = sublevel_profile(pi).knots;
    let one = Rational::one();
    let mut total = 0.0;
    // ∫_lo^hi (A + B s)/s ds over each stretch clipped to (0, 1].
    let mut add = |lo: &Rational, hi: &Rational, a: Rational, b: Rational| -> bool {
        let hi = if *hi > one { one.clone() } else { hi.clone() };
        if hi <= *lo {
            return true;
        }
        if lo.is_zero() {
            if !a.is_zero() {
                return false;
            }
        } else if !a.is_zero() {
            total += to_f64(&a) * ln_rational(&(&hi / lo));
        }
        total += to_f64(&(b * (&hi - lo)));
        true
    };
    for (j, k) in knots.iter().enumerate() {
        let (next_alpha, next_left) = match knots.get(j + 1) {
            Some(n) => (n.alpha.clone(), n.left.clone()),
            None => (one.clone() + one.clone(), k.value.clone()),
        };
        let slope = (&next_left - &k.value) / (&next_alpha - &k.alpha);
        let intercept = &k.value - &slope * &k.alpha;
        if !add(&k.alpha, &next_alpha, intercept, slope) {
            return f64::INFINITY;
        }
    }
    total
}
