//! Experiment harnesses, cut emission and batch reports.
//!
//! Report CSV columns (rationals are exact `p/q` strings, vectors are
//! space-separated):
//!
//! | file | columns |
//! |------|---------|
//! | optimize | `q,b,n_vertices,min_product,argmin,unique,wall_time_ms,status` |
//! | stirling | `q,factorial,power,log_mean,gap_to_minus_one` |
//! | sublevel plot | `alpha,measure` |

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{log_geo_mean, ser_extended_f64, volume_product};
use crate::error::{Error, Result};
use crate::finite::{compose, gom, is_minimal, rearrange_finite, FiniteGroupFunction};
use crate::group::{automorphism_sending, is_prime, CyclicGroup};
use crate::polytope::{gomory_volume, minimize_volume_capped, DEFAULT_VERTEX_CAP};
use crate::rational::{format_rational, int, ln_bigint, ln_rational, parse_rational, to_f64, Rational};
use crate::torus::{
    integral_ln, is_minimal_pwl, sublevel_measure, PwlTorusFunction, Symmetry,
};

/// Either kind of function, as read from JSON (finite functions carry
/// `values`, circle functions carry `breakpoints`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyFunction {
    Finite(FiniteGroupFunction),
    Torus(PwlTorusFunction),
}

impl AnyFunction {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let parsed = if v.get("values").is_some() {
            serde_json::from_value(v).map(AnyFunction::Finite)
        } else if v.get("breakpoints").is_some() {
            serde_json::from_value(v).map(AnyFunction::Torus)
        } else {
            return Err(Error::Parse(
                "expected a finite function (\"values\") or a circle function (\"breakpoints\")"
                    .into(),
            ));
        };
        parsed.map_err(|e| Error::Parse(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Discretization of a circle function.

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiemannResult {
    pub q: u64,
    pub discrete_mean: f64,
    pub lower_bound: f64,
    #[serde(serialize_with = "ser_extended_f64")]
    pub integral: f64,
    /// `∏_{x≠0} πᵠ(x)`.
    #[serde(with = "crate::rational::serde_str")]
    pub product: Rational,
    /// `(q-1)!/(q-1)^(q-1)`.
    #[serde(with = "crate::rational::serde_str")]
    pub bound: Rational,
    /// `product ≥ bound`, decided exactly.
    pub dominates: bool,
}

/// Samples `h` on the grid `x/(q-1)` to get `πᵠ` on ℤ/qℤ with `b = q - 1`.
///
/// `h` must be nondecreasing and minimal in the wrap-around sense. The last
/// grid point `x = q - 1` sits at `1 ≡ 0`; its value is fixed to `1`, the
/// value forced by symmetry against `πᵠ(0) = 0`.
pub fn discretize(h: &PwlTorusFunction, q: u64) -> Result<FiniteGroupFunction> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if *h.symmetry() != Symmetry::WrapAround
        || !h.is_nondecreasing()
        || !is_minimal_pwl(h).is_minimal
    {
        return Err(Error::NotInClassG);
    }
    let m = int(q as i64 - 1);
    let mut values: Vec<Rational> = (0..q - 1).map(|x| h.value(&(int(x as i64) / &m))).collect();
    values.push(Rational::one());
    FiniteGroupFunction::new(q, q - 1, values)
}

pub fn riemann_experiment(h: &PwlTorusFunction, q: u64) -> Result<RiemannResult> {
    let pi = discretize(h, q)?;
    if !is_minimal(&pi).is_minimal {
        return Err(Error::NotInClassG);
    }
    let product = volume_product(&pi);
    let bound = gomory_volume(q);
    let lower_bound = ln_rational(&bound) / (q - 1) as f64;
    Ok(RiemannResult {
        q,
        discrete_mean: log_geo_mean(&pi),
        lower_bound,
        integral: integral_ln(h),
        dominates: product >= bound,
        product,
        bound,
    })
}

// ---------------------------------------------------------------------------
// Stirling limit.

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StirlingRow {
    pub q: u64,
    /// `(q-1)!` in decimal.
    pub factorial: String,
    /// `(q-1)^(q-1)` in decimal.
    pub power: String,
    pub log_mean: f64,
    pub gap_to_minus_one: f64,
}

/// `(1/(q-1))·ln((q-1)!/(q-1)^(q-1))` for each prime, in input order.
/// Factorials are built once, incrementally, in increasing `q`.
pub fn stirling_table(primes: &[u64]) -> Result<Vec<StirlingRow>> {
    if let Some(&q) = primes.iter().find(|&&q| !is_prime(q)) {
        return Err(Error::NotPrime(q));
    }
    let mut order: Vec<u64> = primes.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut fact = BigInt::one();
    let mut done = 1u64;
    let mut rows: BTreeMap<u64, StirlingRow> = BTreeMap::new();
    for q in order {
        let m = q - 1;
        while done < m {
            done += 1;
            fact *= done;
        }
        let power = num_traits::pow(BigInt::from(m), m as usize);
        let log_mean = (ln_bigint(&fact) - m as f64 * (m as f64).ln()) / m as f64;
        rows.insert(
            q,
            StirlingRow {
                q,
                factorial: fact.to_string(),
                power: power.to_string(),
                log_mean,
                gap_to_minus_one: (log_mean + 1.0).abs(),
            },
        );
    }
    Ok(primes.iter().map(|q| rows[q].clone()).collect())
}

// ---------------------------------------------------------------------------
// Cuts from tableau rows.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauColumn {
    pub name: String,
    #[serde(with = "crate::rational::serde_str")]
    pub frac: Rational,
}

/// Fractional parts of one simplex-tableau row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauRow {
    #[serde(with = "crate::rational::serde_str")]
    pub rhs: Rational,
    pub columns: Vec<TableauColumn>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutTerm {
    pub name: String,
    #[serde(with = "crate::rational::serde_str")]
    pub coefficient: Rational,
}

/// `Σ coefficient_j · y_j ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub terms: Vec<CutTerm>,
    #[serde(with = "crate::rational::serde_str")]
    pub rhs: Rational,
}

impl Cut {
    pub fn coefficients(&self) -> Vec<Rational> {
        self.terms.iter().map(|t| t.coefficient.clone()).collect()
    }
}

fn in_unit(x: &Rational) -> bool {
    !x.is_negative() && *x < Rational::one()
}

/// Residue `k` with `x = k/q`, if `x` lies on the grid.
fn grid_residue(x: &Rational, q: u64) -> Option<u64> {
    let scaled = x * int(q as i64);
    scaled.is_integer().then(|| scaled.to_integer().try_into().ok()).flatten()
}

pub fn emit_cut(row: &TableauRow, pi: &AnyFunction) -> Result<Cut> {
    if row.rhs.is_zero() || !in_unit(&row.rhs) {
        return Err(Error::OutOfRange(format_rational(&row.rhs)));
    }
    if let Some(c) = row.columns.iter().find(|c| !in_unit(&c.frac)) {
        return Err(Error::OutOfRange(format_rational(&c.frac)));
    }
    let terms = match pi {
        AnyFunction::Finite(f) => {
            let q = f.q();
            let b = int(f.b().residue() as i64) / int(q as i64);
            if row.rhs != b {
                return Err(Error::RhsMismatch {
                    row: format_rational(&row.rhs),
                    function: format_rational(&b),
                });
            }
            row.columns
                .iter()
                .map(|c| {
                    let k = grid_residue(&c.frac, q)
                        .ok_or_else(|| Error::GridMismatch(format_rational(&c.frac)))?;
                    Ok(CutTerm {
                        name: c.name.clone(),
                        coefficient: f.value(k).clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        AnyFunction::Torus(f) => {
            let b = f.symmetry().as_rational();
            if row.rhs != b {
                return Err(Error::RhsMismatch {
                    row: format_rational(&row.rhs),
                    function: format_rational(&b),
                });
            }
            row.columns
                .iter()
                .map(|c| CutTerm {
                    name: c.name.clone(),
                    coefficient: f.value(&c.frac),
                })
                .collect()
        }
    };
    Ok(Cut {
        terms,
        rhs: Rational::one(),
    })
}

// ---------------------------------------------------------------------------
// Batch verification of the volume optimum.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BPolicy {
    /// Every `b ∈ {1, …, q-1}`.
    #[default]
    All,
    /// The single residue `fixed_b`.
    Fixed,
    /// `b = q - 1`.
    Canonical,
}

/// Batch configuration, read from a flat TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub primes: Vec<u64>,
    #[serde(default)]
    pub b_policy: BPolicy,
    #[serde(default)]
    pub fixed_b: Option<u64>,
    /// Per-experiment float tolerances (for example `riemann = 1e-12`).
    #[serde(default)]
    pub tolerance: BTreeMap<String, f64>,
    #[serde(default)]
    pub csv_path: Option<PathBuf>,
    #[serde(default)]
    pub json_path: Option<PathBuf>,
    /// Worker threads; `None` uses all cores.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_cap")]
    pub vertex_cap: u64,
}

fn default_cap() -> u64 {
    DEFAULT_VERTEX_CAP
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            primes: Vec::new(),
            b_policy: BPolicy::All,
            fixed_b: None,
            tolerance: BTreeMap::new(),
            csv_path: None,
            json_path: None,
            workers: None,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((k, v)) = self.tolerance.iter().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::OutOfRange(format!("tolerance {k} = {v}")));
        }
        if self.b_policy == BPolicy::Fixed && self.fixed_b.is_none_or(|b| b == 0) {
            return Err(Error::Parse("b_policy = \"fixed\" needs a nonzero fixed_b".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::OutOfRange("workers = 0".into()));
        }
        Ok(())
    }

    fn pairs(&self) -> Vec<(u64, Option<u64>)> {
        let mut out = Vec::new();
        for &q in &self.primes {
            if !is_prime(q) {
                out.push((q, None));
                continue;
            }
            match self.b_policy {
                BPolicy::All => out.extend((1..q).map(|b| (q, Some(b)))),
                BPolicy::Fixed => out.push((q, self.fixed_b)),
                BPolicy::Canonical => out.push((q, Some(q - 1))),
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RowStatus {
    Ok,
    Mismatch,
    SkippedNotPrime,
    Error,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "OK",
            RowStatus::Mismatch => "MISMATCH",
            RowStatus::SkippedNotPrime => "SKIPPED_NOT_PRIME",
            RowStatus::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub q: u64,
    pub b: Option<u64>,
    pub n_vertices: Option<usize>,
    #[serde(with = "crate::rational::serde_str::option")]
    pub min_product: Option<Rational>,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub argmin: Vec<Rational>,
    pub unique: Option<bool>,
    pub wall_time_ms: f64,
    pub status: RowStatus,
    /// Why the row is not `OK`.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    /// No row failed (skipped rows do not count as failures).
    pub fn all_ok(&self) -> bool {
        self.rows
            .iter()
            .all(|r| matches!(r.status, RowStatus::Ok | RowStatus::SkippedNotPrime))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record([
            "q",
            "b",
            "n_vertices",
            "min_product",
            "argmin",
            "unique",
            "wall_time_ms",
            "status",
        ])
        .map_err(io)?;
        for r in &self.rows {
            let opt = |x: Option<String>| x.unwrap_or_default();
            w.write_record([
                r.q.to_string(),
                opt(r.b.map(|b| b.to_string())),
                opt(r.n_vertices.map(|n| n.to_string())),
                opt(r.min_product.as_ref().map(format_rational)),
                r.argmin.iter().map(format_rational).collect::<Vec<_>>().join(" "),
                opt(r.unique.map(|u| u.to_string())),
                format!("{:.3}", r.wall_time_ms),
                r.status.as_str().to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn verify_pair(q: u64, b: u64, cap: u64) -> ReportRow {
    let start = Instant::now();
    let mut row = ReportRow {
        q,
        b: Some(b),
        n_vertices: None,
        min_product: None,
        argmin: Vec::new(),
        unique: None,
        wall_time_ms: 0.0,
        status: RowStatus::Error,
        detail: None,
    };
    let outcome = (|| -> Result<Vec<String>> {
        let opt = minimize_volume_capped(q, b, cap)?;
        let group = CyclicGroup::prime(q)?;
        let phi = automorphism_sending(group.element(b)?, group.element(q - 1)?)?;
        let target = gom(q, q - 1)?;
        let mut problems = Vec::new();
        if opt.value != gomory_volume(q) {
            problems.push(format!("minimum {} differs from (q-1)!/(q-1)^(q-1)", opt.value));
        }
        if !opt.unique {
            problems.push("minimum is attained at more than one vertex".into());
        }
        if rearrange_finite(&opt.argmin)? != target {
            problems.push("rearranged argmin is not the Gomory function".into());
        }
        if compose(&opt.argmin, &phi.inverse())? != target {
            problems.push("argmin is not an automorphic image of the Gomory function".into());
        }
        row.n_vertices = Some(opt.n_vertices);
        row.min_product = Some(opt.value);
        row.argmin = opt.argmin.values().to_vec();
        row.unique = Some(opt.unique);
        Ok(problems)
    })();
    match outcome {
        Ok(p) if p.is_empty() => row.status = RowStatus::Ok,
        Ok(p) => {
            row.status = RowStatus::Mismatch;
            row.detail = Some(p.join("; "));
        }
        Err(e) => row.detail = Some(e.to_string()),
    }
    row.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

/// Runs the volume-optimum verification for every configured `(q, b)`,
/// in parallel, and writes the CSV/JSON reports configured in `config`.
pub fn optimize_and_report(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let pairs = config.pairs();
    let run = || -> Vec<ReportRow> {
        pairs
            .par_iter()
            .map(|&(q, b)| match b {
                None => ReportRow {
                    q,
                    b: None,
                    n_vertices: None,
                    min_product: None,
                    argmin: Vec::new(),
                    unique: None,
                    wall_time_ms: 0.0,
                    status: RowStatus::SkippedNotPrime,
                    detail: None,
                },
                Some(b) => verify_pair(q, b, config.vertex_cap),
            })
            .collect()
    };
    let rows = match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Parse(e.to_string()))?
            .install(run),
        None => run(),
    };
    let report = Report { rows };
    let io = |e: std::io::Error| Error::Parse(e.to_string());
    if let Some(p) = &config.csv_path {
        std::fs::write(p, report.to_csv()?).map_err(io)?;
    }
    if let Some(p) = &config.json_path {
        std::fs::write(p, report.to_json()).map_err(io)?;
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Plot data.

pub fn stirling_csv(rows: &[StirlingRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// `alpha,measure` at `n + 1` evenly spaced levels in `[min π, max π]`,
/// plus every profile knot.
pub fn sublevel_plot_csv(pi: &PwlTorusFunction, n: u32) -> Result<String> {
    let (lo, hi) = (pi.min_value(), pi.max_value());
    let mut levels: Vec<Rational> = (0..=n.max(1))
        .map(|k| &lo + (&hi - &lo) * int(k as i64) / int(n.max(1) as i64))
        .chain(crate::torus::sublevel_profile(pi).knots.into_iter().map(|k| k.alpha))
        .collect();
    levels.sort();
    levels.dedup();
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["alpha", "measure"]).map_err(io)?;
    for a in levels {
        let m = sublevel_measure(pi, &a);
        w.write_record([format_rational(&a), format_rational(&m)]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// Parses a comma-separated list of rationals (CLI helper).
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

/// Floating-point view of a coefficient vector.
pub fn to_f64_vec(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}
