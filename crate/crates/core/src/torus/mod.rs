//! Piecewise-linear functions on the circle 𝕋¹ = ℝ/ℤ with rational data.
//!
//! A function is stored on `[0, 1)` as a strictly increasing breakpoint list
//! starting at `0`, one affine piece per half-open cell `[x_i, x_{i+1})`
//! (the last cell ends at `1`), and an explicit value at every breakpoint.
//! One-sided limits at breakpoints are read off the adjacent pieces; the
//! left limit at `0` comes from the last piece at `1`. The representation is
//! kept canonical (no removable breakpoints except `0`), so structural
//! equality is functional equality.

mod integrate;
mod intervals;
mod minimality;
mod rearrange;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::verdict::Side;

pub use integrate::{integral_ln, layer_cake_check, lp_norm_torus, lp_power_torus, LayerCake};
pub use intervals::{kemperman_check, sublevel_set, KempermanCheck, TorusIntervals};
pub use minimality::{is_minimal_pwl, is_minimal_pwl_with};
pub use rearrange::{
    rearrange_torus, right_limit_fn, sublevel_measure, sublevel_profile, tilde_fn, ProfileKnot,
    SublevelProfile,
};

/// Which symmetry a minimal function is expected to satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// `π(x) + π(b - x) = 1` for every `x`, with `0 < b < 1`.
    Rhs(Rational),
    /// `π(x) + π(-x) = 1` for every `x ≠ 0` (the limiting case `b → 0⁺`
    /// used by nondecreasing rearrangements). Serialized as `b = 0`.
    WrapAround,
}

impl Symmetry {
    pub fn rhs(b: Rational) -> Result<Symmetry> {
        if b.is_positive() && b < Rational::one() {
            Ok(Symmetry::Rhs(b))
        } else {
            Err(Error::OutOfRange(format_rational(&b)))
        }
    }

    /// The right-hand side as a rational, `0` for [`Symmetry::WrapAround`].
    pub fn as_rational(&self) -> Rational {
        match self {
            Symmetry::Rhs(b) => b.clone(),
            Symmetry::WrapAround => Rational::zero(),
        }
    }
}

/// An affine map `slope·x + intercept`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Piece {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Piece { slope, intercept }
    }

    pub fn constant(c: Rational) -> Self {
        Piece {
            slope: Rational::zero(),
            intercept: c,
        }
    }

    /// The affine map through `(x0, y0)` and `(x1, y1)`.
    pub fn through(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        Piece { slope, intercept }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

/// One-sided limits and value at a breakpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub left: Rational,
    pub at: Rational,
    pub right: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TorusJson", into = "TorusJson")]
pub struct PwlTorusFunction {
    symmetry: Symmetry,
    breakpoints: Vec<Rational>,
    pieces: Vec<Piece>,
    at: Vec<Rational>,
}

/// Reduces a rational to its representative in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - Rational::from_integer(x.floor().to_integer())
}

impl PwlTorusFunction {
    /// Builds a function from breakpoints (first must be `0`), one piece per
    /// cell and the value at each breakpoint.
    pub fn new(
        symmetry: Symmetry,
        breakpoints: Vec<Rational>,
        pieces: Vec<Piece>,
        at: Vec<Rational>,
    ) -> Result<Self> {
        if breakpoints.is_empty() || !breakpoints[0].is_zero() {
            return Err(Error::InvalidFunction("first breakpoint must be 0".into()));
        }
        if !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidFunction(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if breakpoints.last().is_some_and(|x| *x >= Rational::one()) {
            return Err(Error::InvalidFunction("breakpoints must lie in [0, 1)".into()));
        }
        if pieces.len() != breakpoints.len() || at.len() != breakpoints.len() {
            return Err(Error::InvalidFunction(
                "need exactly one piece and one value per breakpoint".into(),
            ));
        }
        let mut f = PwlTorusFunction {
            symmetry,
            breakpoints,
            pieces,
            at,
        };
        f.canonicalize();
        Ok(f)
    }

    /// Builds a function from breakpoints and explicit limit triples,
    /// checking that the triples agree with the pieces.
    pub fn from_limits(
        symmetry: Symmetry,
        breakpoints: Vec<Rational>,
        pieces: Vec<Piece>,
        limits: Vec<Limits>,
    ) -> Result<Self> {
        if limits.len() != breakpoints.len() {
            return Err(Error::InvalidFunction(
                "need one limit triple per breakpoint".into(),
            ));
        }
        let at = limits.iter().map(|l| l.at.clone()).collect();
        let f = PwlTorusFunction::new(symmetry, breakpoints.clone(), pieces, at)?;
        for (x, l) in breakpoints.iter().zip(&limits) {
            if f.limit(x, Side::Left) != l.left || f.limit(x, Side::Right) != l.right {
                return Err(Error::InvalidFunction(format!(
                    "limits at {} disagree with the pieces",
                    format_rational(x)
                )));
            }
        }
        Ok(f)
    }

    /// The continuous-on-(0,1) interpolant through `nodes`, which must start
    /// at `x = 0` and end at `x = 1`. The value at `0` is the first node's
    /// value; the last node only fixes the left limit at `0`.
    pub fn from_nodes(symmetry: Symmetry, nodes: &[(Rational, Rational)]) -> Result<Self> {
        if nodes.len() < 2 || !nodes[0].0.is_zero() || !nodes[nodes.len() - 1].0.is_one() {
            return Err(Error::InvalidFunction(
                "nodes must start at 0 and end at 1".into(),
            ));
        }
        let n = nodes.len() - 1;
        let breakpoints = nodes[..n].iter().map(|(x, _)| x.clone()).collect();
        let pieces = nodes
            .windows(2)
            .map(|w| Piece::through(&w[0].0, &w[0].1, &w[1].0, &w[1].1))
            .collect();
        let at = nodes[..n].iter().map(|(_, y)| y.clone()).collect();
        PwlTorusFunction::new(symmetry, breakpoints, pieces, at)
    }

    fn canonicalize(&mut self) {
        let mut i = self.breakpoints.len();
        while i > 1 {
            i -= 1;
            let x = &self.breakpoints[i];
            if self.pieces[i - 1] == self.pieces[i] && self.pieces[i].eval(x) == self.at[i] {
                self.breakpoints.remove(i);
                self.pieces.remove(i);
                self.at.remove(i);
            }
        }
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn at_values(&self) -> &[Rational] {
        &self.at
    }

    /// Right end of cell `i`.
    pub fn cell_end(&self, i: usize) -> Rational {
        self.breakpoints
            .get(i + 1)
            .cloned()
            .unwrap_or_else(Rational::one)
    }

    /// `(start, end, piece)` for each cell.
    pub fn cells(&self) -> impl Iterator<Item = (Rational, Rational, &Piece)> + '_ {
        (0..self.pieces.len()).map(move |i| {
            (
                self.breakpoints[i].clone(),
                self.cell_end(i),
                &self.pieces[i],
            )
        })
    }

    /// Index of the cell containing `x ∈ [0, 1)`.
    fn cell_of(&self, x: &Rational) -> usize {
        match self.breakpoints.binary_search(x) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    pub fn limits_at(&self, i: usize) -> Limits {
        let x = &self.breakpoints[i];
        let left = if i == 0 {
            self.pieces[self.pieces.len() - 1].eval(&Rational::one())
        } else {
            self.pieces[i - 1].eval(x)
        };
        Limits {
            left,
            at: self.at[i].clone(),
            right: self.pieces[i].eval(x),
        }
    }

    /// `π(x)` for any rational `x` (reduced mod 1).
    pub fn value(&self, x: &Rational) -> Rational {
        self.limit(x, Side::At)
    }

    /// One-sided limit (or value, for [`Side::At`]) at `x` mod 1.
    pub fn limit(&self, x: &Rational, side: Side) -> Rational {
        let x = frac(x);
        let i = self.cell_of(&x);
        if self.breakpoints[i] != x {
            return self.pieces[i].eval(&x);
        }
        match side {
            Side::At => self.at[i].clone(),
            Side::Right => self.pieces[i].eval(&x),
            Side::Left => self.limits_at(i).left,
        }
    }

    /// Floating-point evaluation, for plotting and sampling.
    pub fn value_f64(&self, x: f64) -> f64 {
        let xr = Rational::from_float(x.rem_euclid(1.0)).unwrap_or_else(Rational::zero);
        crate::rational::to_f64(&self.value(&xr))
    }

    /// Every value the function takes or approaches at a cell end.
    pub fn extreme_values(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.at.clone();
        for (l, r, p) in self.cells() {
            v.push(p.eval(&l));
            v.push(p.eval(&r));
        }
        v
    }

    pub fn max_value(&self) -> Rational {
        self.extreme_values().into_iter().max().expect("nonempty")
    }

    pub fn min_value(&self) -> Rational {
        self.extreme_values().into_iter().min().expect("nonempty")
    }

    /// Nondecreasing on `[0, 1)`.
    pub fn is_nondecreasing(&self) -> bool {
        if self.pieces.iter().any(|p| p.slope.is_negative()) {
            return false;
        }
        (0..self.breakpoints.len()).all(|i| {
            let l = self.limits_at(i);
            (i == 0 || l.left <= l.at) && l.at <= l.right
        })
    }

    /// `wa·a + wb·b` on the common refinement; symmetry is taken from `a`.
    pub fn linear_combination(
        a: &PwlTorusFunction,
        wa: &Rational,
        b: &PwlTorusFunction,
        wb: &Rational,
    ) -> PwlTorusFunction {
        let mut bps: Vec<Rational> = a.breakpoints.iter().chain(&b.breakpoints).cloned().collect();
        bps.sort();
        bps.dedup();
        let mut pieces = Vec::with_capacity(bps.len());
        let mut at = Vec::with_capacity(bps.len());
        for x in &bps {
            let pa = &a.pieces[a.cell_of(x)];
            let pb = &b.pieces[b.cell_of(x)];
            pieces.push(Piece {
                slope: wa * &pa.slope + wb * &pb.slope,
                intercept: wa * &pa.intercept + wb * &pb.intercept,
            });
            at.push(wa * a.value(x) + wb * b.value(x));
        }
        PwlTorusFunction::new(a.symmetry.clone(), bps, pieces, at).expect("refinement is valid")
    }
}

impl fmt::Display for PwlTorusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, r, p)) in self.cells().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(
                f,
                "[{}, {}): {}·x + {} (at {} = {})",
                format_rational(&l),
                format_rational(&r),
                format_rational(&p.slope),
                format_rational(&p.intercept),
                format_rational(&l),
                format_rational(&self.at[i])
            )?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    slope: String,
    intercept: String,
}

#[derive(Serialize, Deserialize)]
struct LimitsJson {
    left: String,
    at: String,
    right: String,
}

#[derive(Serialize, Deserialize)]
struct TorusJson {
    b: String,
    breakpoints: Vec<String>,
    pieces: Vec<PieceJson>,
    limits: Vec<LimitsJson>,
}

impl TryFrom<TorusJson> for PwlTorusFunction {
    type Error = Error;

    fn try_from(j: TorusJson) -> Result<Self> {
        let b = parse_rational(&j.b)?;
        let symmetry = if b.is_zero() {
            Symmetry::WrapAround
        } else {
            Symmetry::rhs(b)?
        };
        let breakpoints = j
            .breakpoints
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let pieces = j
            .pieces
            .iter()
            .map(|p| Ok(Piece::new(parse_rational(&p.slope)?, parse_rational(&p.intercept)?)))
            .collect::<Result<Vec<_>>>()?;
        let limits = j
            .limits
            .iter()
            .map(|l| {
                Ok(Limits {
                    left: parse_rational(&l.left)?,
                    at: parse_rational(&l.at)?,
                    right: parse_rational(&l.right)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PwlTorusFunction::from_limits(symmetry, breakpoints, pieces, limits)
    }
}

impl From<PwlTorusFunction> for TorusJson {
    fn from(f: PwlTorusFunction) -> Self {
        let limits = (0..f.breakpoints.len())
            .map(|i| {
                let l = f.limits_at(i);
                LimitsJson {
                    left: format_rational(&l.left),
                    at: format_rational(&l.at),
                    right: format_rational(&l.right),
                }
            })
            .collect();
        TorusJson {
            b: format_rational(&f.symmetry.as_rational()),
            breakpoints: f.breakpoints.iter().map(format_rational).collect(),
            pieces: f
                .pieces
                .iter()
                .map(|p| PieceJson {
                    slope: format_rational(&p.slope),
                    intercept: format_rational(&p.intercept),
                })
                .collect(),
            limits,
        }
    }
}

fn check_unit_interval(b: &Rational) -> Result<()> {
    if b.is_positive() && *b < Rational::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format_rational(b)))
    }
}

/// The Gomory mixed-integer function: `x/b` on `[0, b]`, `(1-x)/(1-b)` after.
pub fn gmi(b: &Rational) -> Result<PwlTorusFunction> {
    check_unit_interval(b)?;
    let one = Rational::one();
    PwlTorusFunction::from_nodes(
        Symmetry::Rhs(b.clone()),
        &[
            (Rational::zero(), Rational::zero()),
            (b.clone(), one.clone()),
            (one, Rational::zero()),
        ],
    )
}

/// `GMI` on the n-dimensional torus, which depends only on one coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateGmi {
    /// Dimension of the torus.
    pub n: usize,
    /// 1-based coordinate index.
    pub coordinate: usize,
    pub profile: PwlTorusFunction,
}

impl CoordinateGmi {
    /// Evaluates at a point of 𝕋ⁿ.
    pub fn value(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::InvalidFunction(format!(
                "expected a point with {} coordinates",
                self.n
            )));
        }
        Ok(self.profile.value(&x[self.coordinate - 1]))
    }
}

/// `GMIⁿ` for right-hand side `b` using coordinate `i` (1-based).
pub fn gmi_n(b: &[Rational], i: usize) -> Result<CoordinateGmi> {
    if i == 0 || i > b.len() {
        return Err(Error::ZeroCoordinate(i));
    }
    let bi = frac(&b[i - 1]);
    if bi.is_zero() {
        return Err(Error::ZeroCoordinate(i));
    }
    Ok(CoordinateGmi {
        n: b.len(),
        coordinate: i,
        profile: gmi(&bi)?,
    })
}

/// `x ↦ GMI_b(k·x)`: `k` copies of the GMI profile; symmetric for `b/k`.
pub fn scaled_gmi(b: &Rational, k: u32) -> Result<PwlTorusFunction> {
    check_unit_interval(b)?;
    if k == 0 {
        return Err(Error::OutOfRange("k = 0".into()));
    }
    let kk = int(k as i64);
    let mut nodes = Vec::with_capacity(2 * k as usize + 1);
    for j in 0..k {
        let j = int(j as i64);
        nodes.push((&j / &kk, Rational::zero()));
        nodes.push(((&j + b) / &kk, Rational::one()));
    }
    nodes.push((Rational::one(), Rational::zero()));
    PwlTorusFunction::from_nodes(Symmetry::Rhs(b / &kk), &nodes)
}

/// `g(x) = x` on `[0, 1)`, symmetric in the wrap-around sense.
pub fn identity() -> PwlTorusFunction {
    PwlTorusFunction::from_nodes(
        Symmetry::WrapAround,
        &[
            (Rational::zero(), Rational::zero()),
            (Rational::one(), Rational::one()),
        ],
    )
    .expect("valid nodes")
}

/// `1/2` everywhere except `π(0) = 0` and `π(b) = 1`.
pub fn torus_md2(b: &Rational) -> Result<PwlTorusFunction> {
    check_unit_interval(b)?;
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    PwlTorusFunction::new(
        Symmetry::Rhs(b.clone()),
        vec![Rational::zero(), b.clone()],
        vec![Piece::constant(half.clone()), Piece::constant(half)],
        vec![Rational::zero(), Rational::one()],
    )
}

/// Constant `c` on `(0, 1)` with value `0` at the origin.
pub fn constant_off_origin(c: Rational, symmetry: Symmetry) -> PwlTorusFunction {
    PwlTorusFunction::new(
        symmetry,
        vec![Rational::zero()],
        vec![Piece::constant(c)],
        vec![Rational::zero()],
    )
    .expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn gmi_pieces() {
        let f = gmi(&rat(1, 2)).unwrap();
        assert_eq!(f.breakpoints(), &[rat(0, 1), rat(1, 2)]);
        assert_eq!(f.pieces()[0], Piece::new(int(2), int(0)));
        assert_eq!(f.pieces()[1], Piece::new(int(-2), int(2)));
        let f = gmi(&rat(1, 4)).unwrap();
        assert_eq!(f.pieces()[0], Piece::new(int(4), int(0)));
        assert_eq!(f.pieces()[1], Piece::new(rat(-4, 3), rat(4, 3)));
        for b in [rat(1, 10), rat(1, 3), rat(9, 10)] {
            assert_eq!(gmi(&b).unwrap().value(&b), int(1));
        }
        assert!(gmi(&int(0)).is_err());
        assert!(gmi(&int(1)).is_err());
    }

    #[test]
    fn gmi_n_projects() {
        let g = gmi_n(&[rat(1, 3), rat(1, 2)], 1).unwrap();
        assert_eq!(g.profile, gmi(&rat(1, 3)).unwrap());
        assert_eq!((g.n, g.coordinate), (2, 1));
        assert_eq!(g.value(&[rat(1, 6), rat(1, 5)]).unwrap(), rat(1, 2));
        assert_eq!(gmi_n(&[int(0), rat(1, 2)], 1), Err(Error::ZeroCoordinate(1)));
        assert_eq!(gmi_n(&[int(0), rat(1, 2)], 2).unwrap().profile, gmi(&rat(1, 2)).unwrap());
        assert!(gmi_n(&[rat(1, 2)], 3).is_err());
    }

    #[test]
    fn scaled_gmi_shapes() {
        assert_eq!(scaled_gmi(&rat(1, 2), 1).unwrap(), gmi(&rat(1, 2)).unwrap());
        let s = scaled_gmi(&rat(1, 2), 2).unwrap();
        assert_eq!(s.pieces().len(), 4);
        assert_eq!(s.value(&rat(1, 4)), int(1));
        assert_eq!(s.value(&rat(1, 2)), int(0));
        assert_eq!(s.value(&rat(3, 8)), rat(1, 2));
        assert!(scaled_gmi(&rat(1, 2), 0).is_err());
    }

    #[test]
    fn limits_and_wraparound() {
        let id = identity();
        assert_eq!(id.limits_at(0), Limits { left: int(1), at: int(0), right: int(0) });
        assert_eq!(id.value(&rat(5, 4)), rat(1, 4));
        assert_eq!(id.value(&rat(-1, 4)), rat(3, 4));
        let md = torus_md2(&rat(1, 3)).unwrap();
        assert_eq!(md.value(&rat(1, 3)), int(1));
        assert_eq!(md.limit(&rat(1, 3), Side::Left), rat(1, 2));
        assert_eq!(md.value(&int(0)), int(0));
        assert_eq!(md.value(&rat(1, 5)), rat(1, 2));
    }

    #[test]
    fn canonical_form_merges_cells() {
        let f = PwlTorusFunction::from_nodes(
            Symmetry::WrapAround,
            &[(int(0), int(0)), (rat(1, 3), rat(1, 3)), (int(1), int(1))],
        )
        .unwrap();
        assert_eq!(f, identity());
    }

    #[test]
    fn constructor_validation() {
        let p = || vec![Piece::constant(int(0))];
        assert!(PwlTorusFunction::new(Symmetry::WrapAround, vec![rat(1, 2)], p(), vec![int(0)]).is_err());
        assert!(PwlTorusFunction::new(Symmetry::WrapAround, vec![int(0)], p(), vec![]).is_err());
        assert!(PwlTorusFunction::new(
            Symmetry::WrapAround,
            vec![int(0), rat(1, 2), rat(1, 3)],
            vec![Piece::constant(int(0)); 3],
            vec![int(0); 3]
        )
        .is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = torus_md2(&rat(1, 3)).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"b":"1/3","breakpoints":["0","1/3"],"pieces":[{"slope":"0","intercept":"1/2"},{"slope":"0","intercept":"1/2"}],"limits":[{"left":"1/2","at":"0","right":"1/2"},{"left":"1/2","at":"1","right":"1/2"}]}"#
        );
        let back: PwlTorusFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);

        let id: PwlTorusFunction = serde_json::from_str(&serde_json::to_string(&identity()).unwrap()).unwrap();
        assert_eq!(id.symmetry(), &Symmetry::WrapAround);

        let inconsistent = s.replace(r#""left":"1/2","at":"1""#, r#""left":"1/3","at":"1""#);
        assert!(serde_json::from_str::<PwlTorusFunction>(&inconsistent).is_err());
    }

    #[test]
    fn linear_combination_refines() {
        let a = gmi(&rat(1, 2)).unwrap();
        let b = torus_md2(&rat(1, 2)).unwrap();
        let c = PwlTorusFunction::linear_combination(&a, &rat(1, 2), &b, &rat(1, 2));
        assert_eq!(c.value(&rat(1, 4)), rat(1, 2));
        assert_eq!(c.value(&rat(1, 2)), int(1));
        assert_eq!(c.value(&rat(1, 8)), rat(3, 8));
    }
}
