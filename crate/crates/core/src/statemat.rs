//! Bipartite states as coefficient matrices.
//!
//! A state `Σ c_ij |i⟩|j⟩` on `C^dA ⊗ C^dB` is stored as the `dA × dB` matrix
//! `(c_ij)`. Indices are 0-based and the flat amplitude list is row-major:
//! `c_ij` lives at position `i * dB + j`. Normalisation is never imposed, any
//! nonzero vector is a valid state. The Schmidt rank of the state is the rank
//! of its matrix.

use std::ops::{Add, Mul};

use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{denominator_lcm, Fp, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct StateMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T> StateMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(StateMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        StateMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn min_dim(&self) -> usize {
        self.rows.min(self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries, i.e. the amplitude list of the state.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        self.entries[i * self.cols + j] = value;
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> StateMatrix<U> {
        StateMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }
}

impl<T: Clone> StateMatrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self::from_fn(rows, cols, |_, _| value.clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |a, b| self.get(rows[a], cols[b]).clone())
    }
}

impl<T: Clone + Zero> StateMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, T::zero())
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}

/// `M(ψ)`: arranges the amplitudes `c_ij` (flat index `i * db + j`) into a matrix.
pub fn matrix_of_state<T: Clone>(amplitudes: &[T], da: usize, db: usize) -> Result<StateMatrix<T>> {
    StateMatrix::new(da, db, amplitudes.to_vec())
}

/// Inverse of [`matrix_of_state`].
pub fn state_of_matrix<T: Clone>(m: &StateMatrix<T>) -> Vec<T> {
    m.entries.clone()
}

/// `Σ coeffs[i] · mats[i]`.
pub fn combine<T>(mats: &[StateMatrix<T>], coeffs: &[T]) -> Result<StateMatrix<T>>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    let first = mats.first().ok_or_else(|| Error::Dimension("empty matrix list".into()))?;
    if mats.len() != coeffs.len() {
        return Err(Error::Dimension(format!("{} matrices but {} coefficients", mats.len(), coeffs.len())));
    }
    let (rows, cols) = first.shape();
    let mut acc = StateMatrix::<T>::zeros(rows, cols);
    for (m, c) in mats.iter().zip(coeffs) {
        if m.shape() != (rows, cols) {
            return Err(Error::Dimension(format!("mixed shapes {rows}x{cols} and {}x{}", m.rows, m.cols)));
        }
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.entries.iter_mut().zip(&m.entries) {
            if !x.is_zero() {
                *a = a.clone() + c.clone() * x.clone();
            }
        }
    }
    Ok(acc)
}

/// Exact fields with rank and determinant routines.
pub trait ExactField: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn is_zero_value(&self) -> bool;
    fn rank_of(m: &StateMatrix<Self>) -> usize;
    /// Determinant of a square matrix.
    fn det_of(m: &StateMatrix<Self>) -> Self;
}

/// Scales each row to integers by the lcm of its denominators. Rank is
/// unchanged; the determinant is divided by the returned product of scales.
fn clear_denominators(m: &StateMatrix<Rational>) -> (Vec<BigInt>, BigInt) {
    let mut out = Vec::with_capacity(m.entries.len());
    let mut scale = BigInt::one();
    for row in m.entries.chunks(m.cols) {
        let l = denominator_lcm(row);
        out.extend(row.iter().map(|q| q.numer() * (&l / q.denom())));
        scale *= l;
    }
    (out, scale)
}

/// Fraction-free (Bareiss) elimination. Returns the rank and, for square
/// input, the determinant. Every intermediate entry is a minor of the input,
/// so all divisions are exact.
fn bareiss(mut a: Vec<BigInt>, rows: usize, cols: usize) -> (usize, BigInt) {
    let mut prev = BigInt::one();
    let mut sign_flip = false;
    let mut rank = 0usize;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
            sign_flip = !sign_flip;
        }
        let pivot = a[rank * cols + c].clone();
        for i in rank + 1..rows {
            let lead = a[i * cols + c].clone();
            for j in c + 1..cols {
                let v = (&pivot * &a[i * cols + j] - &lead * &a[rank * cols + j]) / &prev;
                a[i * cols + j] = v;
            }
            a[i * cols + c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    let det = if rows == cols && rank == rows {
        if sign_flip {
            -prev
        } else {
            prev
        }
    } else {
        BigInt::zero()
    };
    (rank, det)
}

impl ExactField for BigRational {
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn rank_of(m: &StateMatrix<Self>) -> usize {
        let (ints, _) = clear_denominators(m);
        bareiss(ints, m.rows, m.cols).0
    }

    fn det_of(m: &StateMatrix<Self>) -> Self {
        assert!(m.is_square(), "determinant of a non-square {}x{} matrix", m.rows, m.cols);
        let (ints, scale) = clear_denominators(m);
        let (_, det) = bareiss(ints, m.rows, m.cols);
        BigRational::new(det, scale)
    }
}

/// Gaussian elimination over GF(p); returns rank and determinant (square only).
fn gauss_fp(mut a: Vec<Fp>, rows: usize, cols: usize) -> (usize, Option<Fp>) {
    let p = a[0].modulus();
    let mut det = Fp::one(p);
    let mut rank = 0usize;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            det = Fp::zero(p);
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
            det = -det;
        }
        let pivot = a[rank * cols + c];
        det = det * pivot;
        let inv = pivot.inv();
        for i in rank + 1..rows {
            let f = a[i * cols + c] * inv;
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = a[i * cols + j] - f * a[rank * cols + j];
                a[i * cols + j] = v;
            }
        }
        rank += 1;
    }
    let det = (rows == cols).then(|| if rank == rows { det } else { Fp::zero(p) });
    (rank, det)
}

impl ExactField for Fp {
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn rank_of(m: &StateMatrix<Self>) -> usize {
        gauss_fp(m.entries.clone(), m.rows, m.cols).0
    }

    fn det_of(m: &StateMatrix<Self>) -> Self {
        assert!(m.is_square(), "determinant of a non-square {}x{} matrix", m.rows, m.cols);
        gauss_fp(m.entries.clone(), m.rows, m.cols).1.expect("square")
    }
}

/// Checks that every entry of a GF(p) matrix uses the same prime.
pub fn check_single_field(m: &StateMatrix<Fp>) -> Result<u64> {
    let p = m.entries[0].modulus();
    if m.entries.iter().any(|x| x.modulus() != p) {
        return Err(Error::Domain("GF(p) matrix mixes moduli".into()));
    }
    Ok(p)
}

/// Exact linear rank.
pub fn rank_exact<T: ExactField>(m: &StateMatrix<T>) -> usize {
    T::rank_of(m)
}

pub fn determinant<T: ExactField>(m: &StateMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of a non-square {}x{} matrix", m.rows, m.cols)));
    }
    Ok(T::det_of(m))
}

/// One `r × r` minor: the selected rows and columns (ascending) and its value.
#[derive(Clone, Debug, PartialEq)]
pub struct Minor<T> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: T,
}

/// Lazily enumerates all `C(dA,r)·C(dB,r)` minors of order `r`, rows outer and
/// columns inner, both in lexicographic order.
pub fn order_r_minors<T: ExactField>(
    m: &StateMatrix<T>,
    r: usize,
) -> Result<impl Iterator<Item = Minor<T>> + '_> {
    if r == 0 || r > m.min_dim() {
        return Err(Error::Dimension(format!(
            "minor order {r} outside 1..={} for a {}x{} matrix",
            m.min_dim(),
            m.rows,
            m.cols
        )));
    }
    let cols = m.cols;
    Ok((0..m.rows).combinations(r).flat_map(move |rs| {
        (0..cols).combinations(r).map(move |cs| {
            let value = T::det_of(&m.submatrix(&rs, &cs));
            Minor { rows: rs.clone(), cols: cs, value }
        })
    }))
}

/// Schmidt data of a state: its rank and, in numeric mode, the Schmidt
/// coefficients (singular values, descending).
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtInfo {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub tolerance_used: Option<f64>,
}

pub fn to_nalgebra(m: &StateMatrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows, m.cols, &m.entries)
}

pub fn from_nalgebra(m: &DMatrix<Complex64>) -> StateMatrix<Complex64> {
    StateMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn check_finite(m: &StateMatrix<Complex64>) -> Result<()> {
    if m.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Singular values in descending order.
pub fn singular_values(m: &StateMatrix<Complex64>) -> Result<Vec<f64>> {
    check_finite(m)?;
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Numerical Schmidt rank: the number of singular values strictly above
/// `tol · σ_max`. The zero matrix has rank 0.
pub fn schmidt_rank_numeric(m: &StateMatrix<Complex64>, tol: f64) -> Result<SchmidtInfo> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!("tolerance must be positive and finite, got {tol}")));
    }
    let singular_values = singular_values(m)?;
    let cutoff = tol * singular_values[0];
    let rank = if singular_values[0] == 0.0 {
        0
    } else {
        singular_values.iter().filter(|&&s| s > cutoff).count()
    };
    Ok(SchmidtInfo { rank, singular_values, tolerance_used: Some(tol) })
}

/// Exact Schmidt rank reported in the same shape as the numeric one.
pub fn schmidt_info_exact<T: ExactField>(m: &StateMatrix<T>) -> SchmidtInfo {
    SchmidtInfo { rank: rank_exact(m), singular_values: Vec::new(), tolerance_used: None }
}

/// `|ψ⟩ = Σ_k λ_k |e_k⟩|f_k⟩` with orthonormal `e_k`, `f_k` and descending `λ_k`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> StateMatrix<Complex64> {
        let (da, db) = (self.left[0].len(), self.right[0].len());
        StateMatrix::from_fn(da, db, |i, j| {
            self.coefficients
                .iter()
                .zip(self.left.iter().zip(&self.right))
                .map(|(&l, (e, f))| e[i] * f[j] * l)
                .sum()
        })
    }
}

/// Schmidt decomposition via the SVD, keeping terms above `tol · σ_max`.
pub fn schmidt_decomposition(m: &StateMatrix<Complex64>, tol: f64) -> Result<SchmidtDecomposition> {
    check_finite(m)?;
    let svd = to_nalgebra(m).svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = order.into_iter().filter(|&k| smax > 0.0 && svd.singular_values[k] > tol * smax).collect();
    Ok(SchmidtDecomposition {
        coefficients: keep.iter().map(|&k| svd.singular_values[k]).collect(),
        left: keep.iter().map(|&k| u.column(k).iter().copied().collect()).collect(),
        right: keep.iter().map(|&k| vt.row(k).iter().copied().collect()).collect(),
    })
}

/// Relative Frobenius norm helper used by the numeric back-ends.
pub fn frobenius_norm(m: &StateMatrix<Complex64>) -> f64 {
    m.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
