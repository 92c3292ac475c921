//! Closed-form dimension bounds for subspaces of `dA × dB` matrices.
//!
//! * rank ≥ r everywhere: at most `(dA−r+1)(dB−r+1)`, attained by the
//!   diagonal construction;
//! * rank ≤ r everywhere (Flanders): at most `r·max(dA,dB)`;
//! * rank = r everywhere (Westwick): between `dB−r+1` and `dA+dB−2r+1`, exact
//!   in the divisibility and `dA = r+1, dB = 2r−1` cases.
//!
//! Inputs with `dA > dB` are transposed before evaluation.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `dA` for which the factorial divisibility clause is evaluated.
pub const WESTWICK_FACTORIAL_LIMIT: usize = 64;

/// Slack used when rounding real products up to integers, so that values like
/// `0.3 · 10` do not round to 4.
const CEIL_SLACK: f64 = 1e-9;

fn ceil_int(x: f64) -> i64 {
    (x - CEIL_SLACK).ceil() as i64
}

fn ordered(da: usize, db: usize) -> (usize, usize) {
    (da.min(db), da.max(db))
}

fn check(da: usize, db: usize, r: usize, lo: usize, hi: usize) -> Result<()> {
    if da == 0 || db == 0 {
        return Err(Error::Domain("dimensions must be positive".into()));
    }
    if r < lo || r > hi {
        return Err(Error::Domain(format!("r out of range: r={r} must satisfy {lo} <= r <= {hi}")));
    }
    Ok(())
}

/// Largest dimension of a subspace whose nonzero elements all have rank ≥ r.
pub fn max_dim_geq(da: usize, db: usize, r: usize) -> Result<usize> {
    check(da, db, r, 1, da.min(db))?;
    Ok((da - r + 1) * (db - r + 1))
}

/// Flanders: a subspace whose elements have rank ≤ r has dimension ≤ r·max(dA,dB).
pub fn flanders_max_leq(da: usize, db: usize, r: usize) -> Result<usize> {
    check(da, db, r, 1, da.min(db))?;
    Ok(r * da.max(db))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WestwickRange {
    pub lo: usize,
    pub hi: usize,
    pub exact: Option<usize>,
    pub reason: String,
}

/// `(dA−1)!/(r−1)! = r·(r+1)···(dA−1)`.
fn factorial_ratio(da: usize, r: usize) -> BigUint {
    (r..da).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Westwick's bounds on subspaces whose nonzero elements all have rank exactly r.
pub fn westwick_range(da: usize, db: usize, r: usize) -> Result<WestwickRange> {
    let (da, db) = ordered(da, db);
    check(da, db, r, 2, da)?;
    let lo = db - r + 1;
    let hi = da + db - 2 * r + 1;
    let (exact, reason) = if lo == hi {
        (Some(lo), "bounds coincide (r = dA)".to_string())
    } else if da == r + 1 && db == 2 * r - 1 {
        (Some(r + 1), "dA = r+1 and dB = 2r-1".to_string())
    } else if da > WESTWICK_FACTORIAL_LIMIT {
        (None, format!("divisibility not evaluated for dA > {WESTWICK_FACTORIAL_LIMIT}"))
    } else if !factorial_ratio(da, r).is_multiple_of(&BigUint::from(lo)) {
        (Some(lo), format!("{lo} does not divide (dA-1)!/(r-1)!"))
    } else {
        (None, "open in general".to_string())
    };
    Ok(WestwickRange { lo, hi, exact, reason })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyDim {
    pub affine: usize,
    pub projective: i64,
}

/// Dimension of the variety of matrices of rank < r, `dA·dB − (dA−r+1)(dB−r+1)`.
/// `r = min(dA,dB) + 1` gives the whole space.
pub fn variety_dim(da: usize, db: usize, r: usize) -> Result<VarietyDim> {
    check(da, db, r, 1, da.min(db) + 1)?;
    let affine = da * db - (da + 1 - r) * (db + 1 - r);
    Ok(VarietyDim { affine, projective: affine as i64 - 1 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub da: usize,
    pub db: usize,
    pub r: usize,
    pub max_dim_geq: usize,
    pub flanders_max_leq: usize,
    pub westwick_lo: usize,
    pub westwick_hi: usize,
    pub westwick_exact: Option<usize>,
    pub westwick_reason: String,
    pub naive_fixed_upper: usize,
    pub variety_dim: usize,
}

pub fn bounds_table(da: usize, db: usize, r: usize) -> Result<BoundsTable> {
    let (a, b) = ordered(da, db);
    let w = westwick_range(a, b, r)?;
    Ok(BoundsTable {
        da: a,
        db: b,
        r,
        max_dim_geq: max_dim_geq(a, b, r)?,
        flanders_max_leq: flanders_max_leq(a, b, r)?,
        westwick_lo: w.lo,
        westwick_hi: w.hi,
        westwick_exact: w.exact,
        westwick_reason: w.reason,
        naive_fixed_upper: (b - r + 1) + (a - r),
        variety_dim: variety_dim(a, b, r)?.affine,
    })
}

/// Rows for `r = 2..=min(dA,dB)`.
pub fn bounds_grid(da: usize, db: usize) -> Result<Vec<BoundsTable>> {
    let (a, b) = ordered(da, db);
    if a < 2 {
        return Err(Error::Domain(format!("grid needs min(dA,dB) >= 2, got {a}")));
    }
    (2..=a).map(|r| bounds_table(a, b, r)).collect()
}

/// Aligned plain-text rendering, one row per table.
pub fn render_bounds(rows: &[BoundsTable]) -> String {
    let header = ["da", "db", "r", "geq", "flanders", "westwick_lo", "westwick_hi", "exact", "variety_dim", "reason"];
    let body: Vec<[String; 10]> = rows
        .iter()
        .map(|t| {
            [
                t.da.to_string(),
                t.db.to_string(),
                t.r.to_string(),
                t.max_dim_geq.to_string(),
                t.flanders_max_leq.to_string(),
                t.westwick_lo.to_string(),
                t.westwick_hi.to_string(),
                t.westwick_exact.map_or("-".into(), |e| e.to_string()),
                t.variety_dim.to_string(),
                t.westwick_reason.clone(),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| body.iter().map(|row| row[c].len()).chain([header[c].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let last = cells.len() - 1;
        for (c, cell) in cells.iter().enumerate() {
            if c == last {
                let _ = write!(out, "{cell}");
            } else {
                let _ = write!(out, "{cell:>w$}  ", w = widths[c]);
            }
        }
        out.push('\n');
    };
    line(header.to_vec());
    for row in &body {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

/// Figures for the normalised projector onto a maximal rank-≥r subspace of
/// `C^d ⊗ C^d`, with `r = ⌈(1−p)d⌉`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedStateReport {
    pub d: usize,
    pub p: f64,
    pub r: usize,
    /// `(d−r+1)²`, the rank of the projector.
    pub dim: usize,
    /// `⌈p²d²⌉`, the asymptotic rank figure.
    pub rank_lower_paper: usize,
    /// Entropy of the flat spectrum, `log₂ dim`.
    pub entropy_bits: f64,
    /// `2 log₂ d + 2 log₂ p`, the asymptotic entropy figure.
    pub entropy_asymptotic_bits: f64,
    pub schmidt_measure_lb: usize,
    /// `dim ≥ p²d²` holds at this finite `d`.
    pub asymptotic_regime: bool,
    pub justification: String,
}

pub fn mixed_state_report(d: usize, p: f64) -> Result<MixedStateReport> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be at least 2, got {d}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1), got {p}")));
    }
    let r = ceil_int((1.0 - p) * d as f64);
    if r < 2 {
        return Err(Error::Domain(format!("r = ceil((1-p)d) = {r} < 2; the bound is trivial")));
    }
    let r = r as usize;
    let dim = max_dim_geq(d, d, r)?;
    let asymptotic = p * p * (d * d) as f64;
    let rank_lower_paper = ceil_int(asymptotic).max(0) as usize;
    Ok(MixedStateReport {
        d,
        p,
        r,
        dim,
        rank_lower_paper,
        entropy_bits: (dim as f64).log2(),
        entropy_asymptotic_bits: 2.0 * (d as f64).log2() + 2.0 * p.log2(),
        schmidt_measure_lb: r,
        asymptotic_regime: dim as f64 >= asymptotic,
        justification: format!(
            "every pure-state decomposition of the projector uses vectors from the subspace, all of Schmidt rank >= {r}"
        ),
    })
}

/// Exact maximal dimension at `r = ⌈k·dA⌉` against the `(1−k)²·dA·dB` asymptote.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomComparison {
    pub da: usize,
    pub db: usize,
    pub k: f64,
    pub r: usize,
    pub exact_dim: usize,
    /// `2^{−dA/(dB ln 2)} = e^{−dA/dB}`.
    pub threshold_k: f64,
    pub asymptotic: f64,
    /// `k ≥ threshold_k`: the random-subspace bound is trivial here.
    pub above_threshold: bool,
}

pub fn random_comparison(da: usize, db: usize, k: f64) -> Result<RandomComparison> {
    if da == 0 || db == 0 {
        return Err(Error::Domain("dimensions must be positive".into()));
    }
    if da > db {
        return Err(Error::Domain(format!("comparison needs dA <= dB, got {da}x{db}")));
    }
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::Domain(format!("k must lie in (0, 1], got {k}")));
    }
    let r = (ceil_int(k * da as f64).max(1) as usize).min(da);
    let threshold_k = 2f64.powf(-(da as f64) / (db as f64 * std::f64::consts::LN_2));
    Ok(RandomComparison {
        da,
        db,
        k,
        r,
        exact_dim: max_dim_geq(da, db, r)?,
        threshold_k,
        asymptotic: (1.0 - k).powi(2) * (da * db) as f64,
        above_threshold: k >= threshold_k,
    })
}
