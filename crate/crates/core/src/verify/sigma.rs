//! Numerical search for a low-rank element of a complex matrix subspace.
//!
//! Minimises `σ_r / σ_1` of `Σ x_i B_i` over unit coefficient vectors by
//! alternating projections: truncate the current element to its best
//! rank-`(r−1)` approximation, then take the least-squares element of the
//! subspace closest to that target. With an orthonormal basis the
//! least-squares step is a single projection, and each round can only shrink
//! the Frobenius distance to the rank-`(r−1)` matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{CertificateKind, RankCertificate, RankClaim, Verdict, VerificationReport, VerifyMode};
use crate::construct::SubspaceBasis;
use crate::error::{Error, Result};
use crate::json::{AnyMatrix, AnyVector};
use crate::rng::stream_rng;
use crate::statemat::{frobenius_norm, schmidt_rank_numeric, singular_values, StateMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaOptions {
    pub restarts: usize,
    pub iters: usize,
    /// Relative `σ_r` below which a witness is attempted.
    pub tol: f64,
    /// Relative tolerance of the numeric rank confirming a witness.
    pub confirm_tol: f64,
    pub seed: u64,
}

impl Default for SigmaOptions {
    fn default() -> Self {
        SigmaOptions { restarts: 64, iters: 500, tol: 1e-7, confirm_tol: 1e-6, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct SigmaOutcome {
    /// Unit-norm coefficients with respect to the basis as given.
    pub coeffs: Vec<Complex64>,
    pub min_sigma_r: f64,
    pub report: VerificationReport,
}

/// Orthonormal frame of the vectorized, unit-normalised basis.
struct Frame {
    q: DMatrix<Complex64>,
    r: DMatrix<Complex64>,
    norms: Vec<f64>,
    da: usize,
    db: usize,
}

impl Frame {
    fn new(basis: &SubspaceBasis<Complex64>) -> Result<Frame> {
        let (da, db, n) = (basis.da, basis.db, basis.dim());
        if n > da * db {
            return Err(Error::Domain(format!("{n} matrices cannot be independent in {da}x{db}")));
        }
        let norms: Vec<f64> = basis.matrices.iter().map(frobenius_norm).collect();
        if norms.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::Numeric("basis contains a zero or non-finite matrix".into()));
        }
        let a = DMatrix::from_fn(da * db, n, |k, i| basis.matrices[i].entries()[k] / norms[i]);
        let qr = a.qr();
        let (q, r) = (qr.q(), qr.r());
        let diag_max = (0..n).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
        if (0..n).any(|i| r[(i, i)].norm() <= 1e-10 * diag_max) {
            return Err(Error::Domain("basis matrices are numerically dependent".into()));
        }
        Ok(Frame { q, r, norms, da, db })
    }

    fn element(&self, y: &DVector<Complex64>) -> DMatrix<Complex64> {
        let v = &self.q * y;
        DMatrix::from_row_slice(self.da, self.db, v.as_slice())
    }

    /// Coefficients of the frame element `y` in the original basis, unit norm.
    fn original_coeffs(&self, y: &DVector<Complex64>) -> Vec<Complex64> {
        let z = self.r.solve_upper_triangular(y).expect("nonsingular triangular factor");
        let x: Vec<Complex64> = z.iter().zip(&self.norms).map(|(c, n)| c / n).collect();
        let norm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        x.into_iter().map(|c| c / norm).collect()
    }
}

/// `σ_r / σ_1` plus the best rank-`(r−1)` approximation of `m`.
fn ratio_and_truncation(m: &DMatrix<Complex64>, r: usize) -> (f64, DMatrix<Complex64>) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s = |k: usize| svd.singular_values[order[k]];
    let ratio = if s(0) == 0.0 { 0.0 } else { s(r - 1) / s(0) };
    let mut t = DMatrix::zeros(m.nrows(), m.ncols());
    for &k in &order[..r - 1] {
        t += u.column(k) * vt.row(k) * Complex64::new(svd.singular_values[k], 0.0);
    }
    (ratio, t)
}

fn unit_gaussian(rng: &mut impl Rng, n: usize) -> DVector<Complex64> {
    let v = DVector::from_fn(n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// One restart: returns the best ratio seen and the frame coefficients reaching it.
fn descend(frame: &Frame, r: usize, iters: usize, seed: u64, index: u64) -> (f64, DVector<Complex64>) {
    let mut rng = stream_rng(seed, "sigma-restart", index);
    let mut y = unit_gaussian(&mut rng, frame.q.ncols());
    let mut best = (f64::INFINITY, y.clone());
    for _ in 0..iters.max(1) {
        let (ratio, target) = ratio_and_truncation(&frame.element(&y), r);
        if ratio < best.0 {
            best = (ratio, y.clone());
        }
        if ratio < 1e-14 {
            break;
        }
        let flat = DVector::from_iterator(frame.da * frame.db, target.transpose().iter().copied());
        let next = frame.q.ad_mul(&flat);
        let norm = next.norm();
        if norm.is_nan() || norm <= 1e-300 {
            break;
        }
        y = next / Complex64::new(norm, 0.0);
    }
    best
}

/// Multi-restart minimisation of the relative `r`-th singular value over the
/// subspace. A best value below `opts.tol` whose numeric rank at
/// `opts.confirm_tol` is below `r` becomes a `witness_lt` certificate and
/// refutes "every element has rank ≥ r"; otherwise the report is
/// inconclusive and carries the floor found.
pub fn minimize_sigma_r(basis: &SubspaceBasis<Complex64>, r: usize, opts: &SigmaOptions) -> Result<SigmaOutcome> {
    if r == 0 || r > basis.da.min(basis.db) {
        return Err(Error::Domain(format!("r out of range: r={r} must satisfy 1 <= r <= {}", basis.da.min(basis.db))));
    }
    if opts.restarts == 0 {
        return Err(Error::Domain("at least one restart is required".into()));
    }
    if !(opts.tol > 0.0 && opts.confirm_tol > 0.0) {
        return Err(Error::Domain("tolerances must be positive".into()));
    }
    let frame = Frame::new(basis)?;
    let results: Vec<(f64, DVector<Complex64>)> = (0..opts.restarts as u64)
        .into_par_iter()
        .map(|i| descend(&frame, r, opts.iters, opts.seed, i))
        .collect();
    // Lowest ratio wins; ties go to the earliest restart.
    let (_, y) = results
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one restart");

    let coeffs = frame.original_coeffs(&y);
    let element = basis.combination(&coeffs)?;
    let sv = singular_values(&element)?;
    let min_sigma_r = if sv[0] == 0.0 { 0.0 } else { sv[r - 1] / sv[0] };
    let numeric_rank = schmidt_rank_numeric(&element, opts.confirm_tol)?.rank;

    let mut witnesses = Vec::new();
    if min_sigma_r < opts.tol && numeric_rank < r {
        witnesses.push(RankCertificate {
            kind: CertificateKind::WitnessLt,
            coeffs: AnyVector::Complex(coeffs.clone()),
            kappa: None,
            positions: None,
            minor_value: None,
            rank_found: Some(numeric_rank),
            relative_sigma: Some(min_sigma_r),
            matrix: Some(AnyMatrix::Complex(element)),
        });
    }
    let verdict = if witnesses.is_empty() { Verdict::Inconclusive } else { Verdict::Refuted };
    let report = VerificationReport {
        mode: VerifyMode::SigmaMin,
        claim: RankClaim::at_least(r),
        samples_or_points: opts.restarts as u64,
        min_rank_observed: Some(numeric_rank),
        max_rank_observed: None,
        min_sigma_r: Some(min_sigma_r),
        tolerance: Some(opts.tol),
        seed: Some(opts.seed),
        prime: None,
        witnesses,
        verdict,
    };
    Ok(SigmaOutcome { coeffs, min_sigma_r, report })
}

/// Relative `σ_r` of a single element, exposed for re-checking witnesses.
pub fn relative_sigma(m: &StateMatrix<Complex64>, r: usize) -> Result<f64> {
    let sv = singular_values(m)?;
    if r == 0 || r > sv.len() {
        return Err(Error::Domain(format!("r out of range: r={r}")));
    }
    Ok(if sv[0] == 0.0 { 0.0 } else { sv[r - 1] / sv[0] })
}
