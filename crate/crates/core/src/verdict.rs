use std::fmt;

use serde::Serialize;

use crate::rational::{format_rational, Rational};

/// Which minimality condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Origin,
    Subadditivity,
    Symmetry,
    Negativity,
}

/// One-sided approach used when a torus check is evaluated as a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    At,
    Right,
}

/// Where a violation was observed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Element(u64),
    Pair(u64, u64),
    #[serde(serialize_with = "ser_point")]
    Point(Rational),
    /// A torus pair evaluated with one-sided limits for `x`, `y` and `x + y`.
    #[serde(serialize_with = "ser_point_pair")]
    PointPair {
        x: Rational,
        y: Rational,
        sides: [Side; 3],
    },
}

fn ser_point<S: serde::Serializer>(p: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(p))
}

fn ser_point_pair<S: serde::Serializer>(
    x: &Rational,
    y: &Rational,
    sides: &[Side; 3],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("PointPair", 3)?;
    st.serialize_field("x", &format_rational(x))?;
    st.serialize_field("y", &format_rational(y))?;
    st.serialize_field("sides", sides)?;
    st.end()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Witness,
    /// Exact size of the violation (always positive).
    #[serde(with = "crate::rational::serde_str")]
    pub amount: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at {:?} by {}",
            self.kind,
            self.witness,
            format_rational(&self.amount)
        )
    }
}

/// Outcome of a minimality test. `is_minimal` holds exactly when no
/// violation was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityVerdict {
    pub is_minimal: bool,
    pub violations: Vec<Violation>,
}

impl MinimalityVerdict {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        MinimalityVerdict {
            is_minimal: violations.is_empty(),
            violations,
        }
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Controls how much work a minimality test does.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Return as soon as the first violation is found.
    pub stop_at_first: bool,
}
