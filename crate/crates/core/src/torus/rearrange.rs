//! Sublevel measures and the nondecreasing rearrangement on the circle.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{minimality::is_minimal_pwl, Piece, PwlTorusFunction, Symmetry};
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

fn clamp(x: Rational, lo: &Rational, hi: &Rational) -> Rational {
    if x < *lo {
        lo.clone()
    } else if x > *hi {
        hi.clone()
    } else {
        x
    }
}

/// Measure of `{x ∈ (l, r) : p(x) ≤ α}` (or `< α` when `strict`).
fn piece_measure(l: &Rational, r: &Rational, p: &Piece, alpha: &Rational, strict: bool) -> Rational {
    if p.slope.is_zero() {
        let inside = if strict { p.intercept < *alpha } else { p.intercept <= *alpha };
        return if inside { r - l } else { Rational::zero() };
    }
    let root = (alpha - &p.intercept) / &p.slope;
    let root = clamp(root, l, r);
    if p.slope.is_positive() {
        root - l
    } else {
        r - root
    }
}

fn measure(pi: &PwlTorusFunction, alpha: &Rational, strict: bool) -> Rational {
    pi.cells()
        .map(|(l, r, p)| piece_measure(&l, &r, p, alpha, strict))
        .sum()
}

/// Exact `μ({x : π(x) ≤ α})`.
pub fn sublevel_measure(pi: &PwlTorusFunction, alpha: &Rational) -> Rational {
    measure(pi, alpha, false)
}

/// One knot of a [`SublevelProfile`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileKnot {
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
    /// `μ({π < α})`, the left limit of the profile at `alpha`.
    #[serde(with = "crate::rational::serde_str")]
    pub left: Rational,
    /// `μ({π ≤ α})`.
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
}

/// `α ↦ μ({π ≤ α})`: zero below the first knot, one from the last knot on,
/// affine between the value at one knot and the left limit at the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SublevelProfile {
    pub knots: Vec<ProfileKnot>,
}

impl SublevelProfile {
    pub fn eval(&self, alpha: &Rational) -> Rational {
        let i = self.knots.partition_point(|k| k.alpha <= *alpha);
        if i == 0 {
            return Rational::zero();
        }
        let k = &self.knots[i - 1];
        match self.knots.get(i) {
            None => k.value.clone(),
            Some(n) => {
                &k.value + (&n.left - &k.value) * (alpha - &k.alpha) / (&n.alpha - &k.alpha)
            }
        }
    }
}

pub fn sublevel_profile(pi: &PwlTorusFunction) -> SublevelProfile {
    let mut levels: Vec<Rational> = pi
        .cells()
        .flat_map(|(l, r, p)| [p.eval(&l), p.eval(&r)])
        .collect();
    levels.sort();
    levels.dedup();
    let knots = levels
        .into_iter()
        .map(|alpha| ProfileKnot {
            left: measure(pi, &alpha, true),
            value: measure(pi, &alpha, false),
            alpha,
        })
        .collect();
    SublevelProfile { knots }
}

/// `ĥ(x) = inf{α ≥ 0 : μ(π⁻¹([0, α])) ≥ x}`, the generalized inverse of the
/// sublevel profile. The result is nondecreasing, left continuous and
/// equimeasurable with `π`; it uses the wrap-around symmetry convention.
pub fn rearrange_torus(pi: &PwlTorusFunction) -> Result<PwlTorusFunction> {
    if pi.min_value().is_negative() {
        return Err(Error::InvalidFunction(
            "rearrangement needs a nonnegative function".into(),
        ));
    }
    let knots = sublevel_profile(pi).knots;
    // Segments (lo, hi, piece) covering (0, 1] in x.
    let mut segs: Vec<(Rational, Rational, Piece)> = Vec::new();
    for (j, k) in knots.iter().enumerate() {
        if k.value > k.left {
            segs.push((k.left.clone(), k.value.clone(), Piece::constant(k.alpha.clone())));
        }
        if let Some(n) = knots.get(j + 1) {
            if n.left > k.value {
                let slope = (&n.alpha - &k.alpha) / (&n.left - &k.value);
                let intercept = &k.alpha - &slope * &k.value;
                segs.push((k.value.clone(), n.left.clone(), Piece::new(slope, intercept)));
            }
        }
    }
    let mut breakpoints = Vec::with_capacity(segs.len());
    let mut pieces = Vec::with_capacity(segs.len());
    let mut at = Vec::with_capacity(segs.len());
    for (i, (lo, _, piece)) in segs.iter().enumerate() {
        breakpoints.push(lo.clone());
        at.push(if i == 0 {
            Rational::zero()
        } else {
            segs[i - 1].2.eval(lo)
        });
        pieces.push(piece.clone());
    }
    PwlTorusFunction::new(Symmetry::WrapAround, breakpoints, pieces, at)
}

/// `π̄(x) = lim_{ε→0⁺} ĥ(x + ε)`.
pub fn right_limit_fn(h: &PwlTorusFunction) -> Result<PwlTorusFunction> {
    if !h.is_nondecreasing() {
        return Err(Error::NotNondecreasing);
    }
    let at = (0..h.breakpoints().len())
        .map(|i| h.limits_at(i).right)
        .collect();
    PwlTorusFunction::new(
        h.symmetry().clone(),
        h.breakpoints().to_vec(),
        h.pieces().to_vec(),
        at,
    )
}

/// `π̃ = (ĥ + π̄)/2` with `π̃(0) = 0`, for a minimal `π`.
pub fn tilde_fn(pi: &PwlTorusFunction) -> Result<PwlTorusFunction> {
    if !is_minimal_pwl(pi).is_minimal {
        return Err(Error::NotMinimal);
    }
    let h = rearrange_torus(pi)?;
    let bar = right_limit_fn(&h)?;
    let half = rat(1, 2);
    let avg = PwlTorusFunction::linear_combination(&h, &half, &bar, &half);
    let mut at = avg.at_values().to_vec();
    at[0] = Rational::zero();
    PwlTorusFunction::new(
        Symmetry::WrapAround,
        avg.breakpoints().to_vec(),
        avg.pieces().to_vec(),
        at,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::torus::{constant_off_origin, gmi, identity, scaled_gmi, torus_md2};
    use crate::verdict::Side;

    #[test]
    fn sublevel_examples() {
        assert_eq!(sublevel_measure(&gmi(&rat(1, 2)).unwrap(), &rat(1, 2)), rat(1, 2));
        for b in [rat(1, 4), rat(1, 3), rat(7, 9)] {
            let g = gmi(&b).unwrap();
            for a in [rat(0, 1), rat(1, 7), rat(1, 2), rat(5, 6), int(1)] {
                assert_eq!(sublevel_measure(&g, &a), a);
            }
        }
        let md = torus_md2(&rat(1, 3)).unwrap();
        assert_eq!(sublevel_measure(&md, &rat(1, 4)), int(0));
        assert_eq!(sublevel_measure(&md, &rat(1, 2)), int(1));
        assert_eq!(sublevel_measure(&md, &int(7)), int(1));
    }

    #[test]
    fn profile_matches_pointwise_measure() {
        let f = scaled_gmi(&rat(2, 5), 3).unwrap();
        let prof = sublevel_profile(&f);
        for k in 0..=40 {
            let a = rat(k, 37);
            assert_eq!(prof.eval(&a), sublevel_measure(&f, &a));
        }
        let md = sublevel_profile(&torus_md2(&rat(1, 2)).unwrap());
        assert_eq!(md.knots.len(), 1);
        assert_eq!(md.knots[0].left, int(0));
        assert_eq!(md.knots[0].value, int(1));
    }

    #[test]
    fn rearrangement_examples() {
        for b in [rat(1, 4), rat(1, 3), rat(1, 2), rat(3, 4)] {
            assert_eq!(rearrange_torus(&gmi(&b).unwrap()).unwrap(), identity());
        }
        assert_eq!(rearrange_torus(&identity()).unwrap(), identity());
        let md = rearrange_torus(&torus_md2(&rat(1, 3)).unwrap()).unwrap();
        assert_eq!(md, constant_off_origin(rat(1, 2), Symmetry::WrapAround));
    }

    #[test]
    fn rearrangement_is_left_continuous_with_plateaus() {
        // Three levels: 1/4 on [0,1/2), 1 on [1/2,3/4), 1/2 on [3/4,1).
        let f = PwlTorusFunction::new(
            Symmetry::WrapAround,
            vec![int(0), rat(1, 2), rat(3, 4)],
            vec![
                Piece::constant(rat(1, 4)),
                Piece::constant(int(1)),
                Piece::constant(rat(1, 2)),
            ],
            vec![int(0), int(1), rat(1, 2)],
        )
        .unwrap();
        let h = rearrange_torus(&f).unwrap();
        assert_eq!(h.breakpoints(), &[int(0), rat(1, 2), rat(3, 4)]);
        assert_eq!(h.value(&rat(1, 2)), rat(1, 4));
        assert_eq!(h.limit(&rat(1, 2), Side::Right), rat(1, 2));
        assert_eq!(h.value(&rat(3, 4)), rat(1, 2));
        assert_eq!(h.value(&rat(9, 10)), int(1));
        assert!(h.is_nondecreasing());
        for a in [rat(1, 8), rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3), int(1)] {
            assert_eq!(sublevel_measure(&h, &a), sublevel_measure(&f, &a));
        }
    }

    #[test]
    fn right_limit_examples() {
        assert_eq!(right_limit_fn(&identity()).unwrap(), identity());
        let step = PwlTorusFunction::new(
            Symmetry::WrapAround,
            vec![int(0), rat(1, 2)],
            vec![Piece::constant(rat(1, 4)), Piece::constant(rat(3, 4))],
            vec![int(0), rat(1, 4)],
        )
        .unwrap();
        let r = right_limit_fn(&step).unwrap();
        assert_eq!(r.value(&rat(1, 2)), rat(3, 4));
        assert_eq!(r.value(&int(0)), rat(1, 4));
        assert_eq!(
            right_limit_fn(&gmi(&rat(1, 2)).unwrap()),
            Err(Error::NotNondecreasing)
        );
        let h = rearrange_torus(&gmi(&rat(1, 3)).unwrap()).unwrap();
        assert_eq!(right_limit_fn(&h).unwrap(), identity());
    }

    #[test]
    fn tilde_examples() {
        assert_eq!(tilde_fn(&gmi(&rat(1, 3)).unwrap()).unwrap(), identity());
        assert_eq!(tilde_fn(&identity()).unwrap(), identity());
        assert_eq!(
            tilde_fn(&torus_md2(&rat(2, 5)).unwrap()).unwrap(),
            constant_off_origin(rat(1, 2), Symmetry::WrapAround)
        );
        let bad = identity().with_symmetry(Symmetry::Rhs(rat(1, 2)));
        assert_eq!(tilde_fn(&bad), Err(Error::NotMinimal));
    }

    #[test]
    fn negative_input_rejected() {
        let f = constant_off_origin(rat(-1, 2), Symmetry::WrapAround);
        assert!(rearrange_torus(&f).is_err());
    }
}
