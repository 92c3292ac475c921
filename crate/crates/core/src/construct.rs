//! Explicit subspace constructions.
//!
//! The main one spans matrices whose every nonzero combination has rank at
//! least `r`. Each diagonal `k` of length `L ≥ r` contributes `L − r + 1`
//! matrices, the `j`-th carrying column `j` of the leading `L × L` block of a
//! totally non-singular Vandermonde matrix along that diagonal. A nonzero
//! combination then has at least `r` nonzero entries on its top-rightmost
//! occupied diagonal `κ`, and the `r × r` submatrix through those entries is
//! triangular with nonzero diagonal.
//!
//! Diagonals are labelled `k = col − row`, increasing from lower-left to
//! upper-right; cells within a diagonal are ordered by increasing row. When
//! `dA > dB` the construction runs on the transpose and the result is
//! transposed back, with `metadata.transposed` set and diagonal labels kept in
//! the construction frame.

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{FieldKind, FieldScalar};
use crate::rng::stream_rng;
use crate::scalar::{int, rational_to_complex, Rational};
use crate::statemat::{combine, rank_exact, schmidt_rank_numeric, StateMatrix};
use crate::tns::{default_vandermonde, TnsMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalIndex {
    pub da: usize,
    pub db: usize,
    /// `col − row`, from `−(dA−1)` to `dB−1`.
    pub k: i64,
    pub length: usize,
    pub cells: Vec<(usize, usize)>,
}

/// All `dA + dB − 1` diagonals in increasing `k`.
pub fn diagonals(da: usize, db: usize) -> Vec<DiagonalIndex> {
    let (a, b) = (da as i64, db as i64);
    (-(a - 1)..b)
        .map(|k| {
            let cells: Vec<(usize, usize)> = (0.max(-k)..a)
                .take_while(|&i| i + k < b)
                .map(|i| (i as usize, (i + k) as usize))
                .collect();
            let length = a.min(b).min(a + k).min(b - k) as usize;
            debug_assert_eq!(length, cells.len());
            DiagonalIndex { da, db, k, length, cells }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    MinRankGeqR,
    MaxRankLeqR,
    FixedRank,
    Antisymmetric,
    Random,
    User,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BasisMetadata {
    /// Diagonal label of each matrix, in the construction frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonals: Option<Vec<i64>>,
    /// Vandermonde column placed on the diagonal, per matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tns_columns: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tns_nodes: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tns_certification: Option<String>,
    /// The basis was built for the transposed shape and transposed back.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub transposed: bool,
    /// Rows spanning the factor `R` of `R ⊗ C^dB`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_rows: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: FieldScalar", deserialize = "T: FieldScalar"))]
pub struct SubspaceBasis<T> {
    pub da: usize,
    pub db: usize,
    pub r: usize,
    pub kind: BasisKind,
    pub field: FieldKind,
    pub matrices: Vec<StateMatrix<T>>,
    #[serde(default)]
    pub metadata: BasisMetadata,
}

impl<T: FieldScalar> SubspaceBasis<T> {
    pub fn new(da: usize, db: usize, r: usize, kind: BasisKind, matrices: Vec<StateMatrix<T>>, metadata: BasisMetadata) -> Result<Self> {
        let basis = SubspaceBasis { da, db, r, kind, field: T::FIELD, matrices, metadata };
        basis.check_shape()?;
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    /// Shape and field consistency; independence is checked separately.
    pub fn check_shape(&self) -> Result<()> {
        if self.field != T::FIELD {
            return Err(Error::Format(format!("basis declares field {:?} but holds {:?}", self.field, T::FIELD)));
        }
        if self.matrices.is_empty() {
            return Err(Error::Dimension("basis has no matrices".into()));
        }
        if let Some((i, m)) = self.matrices.iter().enumerate().find(|(_, m)| m.shape() != (self.da, self.db)) {
            return Err(Error::Dimension(format!(
                "matrix {i} is {}x{}, basis is {}x{}",
                m.rows(),
                m.cols(),
                self.da,
                self.db
            )));
        }
        let moduli: Vec<Option<u64>> = self.matrices.iter().flat_map(|m| m.entries().iter().map(|x| x.modulus())).collect();
        if moduli.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Domain("basis mixes scalar fields".into()));
        }
        if let Some(labels) = &self.metadata.diagonals {
            if labels.len() != self.dim() {
                return Err(Error::Format(format!("{} diagonal labels for {} matrices", labels.len(), self.dim())));
            }
        }
        Ok(())
    }

    /// Matrices flattened to the rows of a `dim × (dA·dB)` matrix.
    pub fn stacked(&self) -> StateMatrix<T> {
        let entries = self.matrices.iter().flat_map(|m| m.entries().iter().cloned()).collect();
        StateMatrix::new(self.dim(), self.da * self.db, entries).expect("shapes checked")
    }
}

impl SubspaceBasis<Rational> {
    pub fn combination(&self, coeffs: &[Rational]) -> Result<StateMatrix<Rational>> {
        combine(&self.matrices, coeffs)
    }

    pub fn is_independent(&self) -> bool {
        rank_exact(&self.stacked()) == self.dim()
    }

    pub fn to_complex(&self) -> SubspaceBasis<Complex64> {
        SubspaceBasis {
            da: self.da,
            db: self.db,
            r: self.r,
            kind: self.kind,
            field: FieldKind::Complex,
            matrices: self.matrices.iter().map(|m| m.map(rational_to_complex)).collect(),
            metadata: self.metadata.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut metadata = self.metadata.clone();
        metadata.transposed = !metadata.transposed;
        SubspaceBasis {
            da: self.db,
            db: self.da,
            r: self.r,
            kind: self.kind,
            field: self.field,
            matrices: self.matrices.iter().map(StateMatrix::transpose).collect(),
            metadata,
        }
    }

    /// A user-supplied basis, rejected unless exactly independent.
    pub fn user(matrices: Vec<StateMatrix<Rational>>, r: usize) -> Result<Self> {
        let (da, db) = matrices.first().map(|m| m.shape()).ok_or_else(|| Error::Dimension("basis has no matrices".into()))?;
        let basis = SubspaceBasis::new(da, db, r, BasisKind::User, matrices, BasisMetadata::default())?;
        if !basis.is_independent() {
            return Err(Error::Domain("basis matrices are linearly dependent".into()));
        }
        Ok(basis)
    }
}

impl SubspaceBasis<Complex64> {
    pub fn combination(&self, coeffs: &[Complex64]) -> Result<StateMatrix<Complex64>> {
        combine(&self.matrices, coeffs)
    }

    /// Numerical independence of the vectorized stack at relative tolerance 1e-10.
    pub fn is_independent(&self) -> bool {
        schmidt_rank_numeric(&self.stacked(), 1e-10).map(|s| s.rank == self.dim()).unwrap_or(false)
    }

    pub fn user(matrices: Vec<StateMatrix<Complex64>>, r: usize) -> Result<Self> {
        let (da, db) = matrices.first().map(|m| m.shape()).ok_or_else(|| Error::Dimension("basis has no matrices".into()))?;
        let basis = SubspaceBasis::new(da, db, r, BasisKind::User, matrices, BasisMetadata::default())?;
        if !basis.is_independent() {
            return Err(Error::Domain("basis matrices are numerically dependent".into()));
        }
        Ok(basis)
    }
}

/// A basis read from JSON, over whichever field the file declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyBasis {
    Rational(SubspaceBasis<Rational>),
    Complex(SubspaceBasis<Complex64>),
}

impl AnyBasis {
    /// Parses a basis file. Syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<AnyBasis> {
        #[derive(Deserialize)]
        struct Probe {
            field: FieldKind,
        }
        let probe: Probe = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let basis = match probe.field {
            FieldKind::Rational => AnyBasis::Rational(serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?),
            FieldKind::Complex => AnyBasis::Complex(serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?),
            FieldKind::Gfp => return Err(Error::Format("bases over GF(p) are not supported; store integer bases as rational".into())),
        };
        match &basis {
            AnyBasis::Rational(b) => b.check_shape()?,
            AnyBasis::Complex(b) => b.check_shape()?,
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyBasis::Rational(b) => b.dim(),
            AnyBasis::Complex(b) => b.dim(),
        }
    }
}

fn check_r(r: usize, lo: usize, hi: usize) -> Result<()> {
    if r < lo || r > hi {
        return Err(Error::Domain(format!("r out of range: r={r} must satisfy {lo} <= r <= {hi}")));
    }
    Ok(())
}

/// The `t = length − r + 1` matrices of one diagonal family; empty when the
/// diagonal is shorter than `r`.
pub fn build_diagonal_family(diag: &DiagonalIndex, r: usize, tns: &TnsMatrix) -> Result<Vec<StateMatrix<Rational>>> {
    if r == 0 {
        return Err(Error::Domain("r must be positive".into()));
    }
    if diag.length < r {
        return Ok(Vec::new());
    }
    if tns.size() < diag.length {
        return Err(Error::Dimension(format!(
            "TNS matrix of size {} is too small for a diagonal of length {}",
            tns.size(),
            diag.length
        )));
    }
    let block = tns.leading(diag.length)?;
    let t = diag.length - r + 1;
    Ok((0..t)
        .map(|j| {
            let mut m = StateMatrix::<Rational>::zeros(diag.da, diag.db);
            for (i, &(row, col)) in diag.cells.iter().enumerate() {
                m.set(row, col, block.matrix().get(i, j).clone());
            }
            m
        })
        .collect())
}

/// Number of self-check samples drawn after building a rank-floor basis.
const SELF_CHECK_SAMPLES: usize = 32;

fn min_rank_frame(da: usize, db: usize, r: usize, kind: BasisKind) -> Result<SubspaceBasis<Rational>> {
    debug_assert!(da <= db);
    let tns = default_vandermonde(da)?;
    let mut matrices = Vec::new();
    let mut labels = Vec::new();
    let mut columns = Vec::new();
    for diag in diagonals(da, db) {
        let family = build_diagonal_family(&diag, r, &tns)?;
        labels.extend(std::iter::repeat_n(diag.k, family.len()));
        columns.extend(0..family.len());
        matrices.extend(family);
    }
    let metadata = BasisMetadata {
        diagonals: Some(labels),
        tns_columns: Some(columns),
        tns_nodes: Some((1..=da as i64).collect()),
        tns_certification: Some(match tns.certification() {
            crate::tns::Certification::Exhaustive => "exhaustive".into(),
            crate::tns::Certification::ByTheorem { .. } => "by-theorem".into(),
        }),
        ..BasisMetadata::default()
    };
    SubspaceBasis::new(da, db, r, kind, matrices, metadata)
}

/// Checks that seeded integer combinations keep exact rank at least `r`.
fn rank_floor_self_check(basis: &SubspaceBasis<Rational>) -> Result<()> {
    let mut rng = stream_rng(0, "construct-self-check", 0);
    for _ in 0..SELF_CHECK_SAMPLES {
        let coeffs = loop {
            let c: Vec<i64> = (0..basis.dim()).map(|_| rng.random_range(-9..=9)).collect();
            if c.iter().any(|&x| x != 0) {
                break c;
            }
        };
        let coeffs: Vec<Rational> = coeffs.into_iter().map(int).collect();
        let rank = rank_exact(&basis.combination(&coeffs)?);
        if rank < basis.r {
            return Err(Error::Internal(format!("constructed combination has rank {rank} < {}", basis.r)));
        }
    }
    Ok(())
}

/// Basis of dimension `(dA−r+1)(dB−r+1)` whose nonzero elements all have
/// rank at least `r`.
pub fn construct_min_rank_subspace(da: usize, db: usize, r: usize) -> Result<SubspaceBasis<Rational>> {
    min_rank_kind(da, db, r, BasisKind::MinRankGeqR)
}

fn min_rank_kind(da: usize, db: usize, r: usize, kind: BasisKind) -> Result<SubspaceBasis<Rational>> {
    if da == 0 || db == 0 {
        return Err(Error::Domain("dimensions must be positive".into()));
    }
    check_r(r, 2, da.min(db))?;
    let basis = if da <= db {
        min_rank_frame(da, db, r, kind)?
    } else {
        min_rank_frame(db, da, r, kind)?.transpose()
    };
    if !basis.is_independent() {
        return Err(Error::Internal("constructed basis is linearly dependent".into()));
    }
    rank_floor_self_check(&basis)?;
    Ok(basis)
}

/// `R ⊗ C^dB` with `R` spanned by the first `r` basis rows: the elementary
/// matrices `E_ij`, `i < r`. Every element has rank at most `r`.
pub fn construct_max_rank_leq_subspace(da: usize, db: usize, r: usize) -> Result<SubspaceBasis<Rational>> {
    if da == 0 || db == 0 {
        return Err(Error::Domain("dimensions must be positive".into()));
    }
    check_r(r, 1, da.min(db))?;
    let (a, b) = (da.min(db), da.max(db));
    let matrices = (0..r)
        .flat_map(|i| (0..b).map(move |j| (i, j)))
        .map(|(i, j)| StateMatrix::from_fn(a, b, |x, y| int(((x, y) == (i, j)) as i64)))
        .collect();
    let metadata = BasisMetadata { factor_rows: Some((0..r).collect()), ..BasisMetadata::default() };
    let basis = SubspaceBasis::new(a, b, r, BasisKind::MaxRankLeqR, matrices, metadata)?;
    Ok(if da > db { basis.transpose() } else { basis })
}

/// The rank-floor construction at `r = dA`: dimension `dB − dA + 1`, every
/// nonzero element of rank exactly `dA`.
pub fn construct_fixed_rank_subspace(da: usize, db: usize) -> Result<SubspaceBasis<Rational>> {
    if da > db {
        return Err(Error::Domain(format!("fixed-rank construction needs dA <= dB, got {da}x{db}; transpose first")));
    }
    if da < 2 {
        return Err(Error::Domain("fixed-rank construction needs dA >= 2".into()));
    }
    min_rank_kind(da, db, da, BasisKind::FixedRank)
}

/// The antisymmetric subspace of `C^3 ⊗ C^3`: `E01−E10`, `E02−E20`, `E12−E21`.
pub fn antisymmetric_basis_3x3() -> SubspaceBasis<Rational> {
    let matrices = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .map(|(a, b)| {
            StateMatrix::from_fn(3, 3, |i, j| {
                if (i, j) == (a, b) {
                    int(1)
                } else if (i, j) == (b, a) {
                    int(-1)
                } else {
                    Rational::zero()
                }
            })
        })
        .collect();
    SubspaceBasis::new(3, 3, 2, BasisKind::Antisymmetric, matrices, BasisMetadata::default()).expect("fixed shapes")
}

/// `dim` matrices with independent standard complex Gaussian entries.
pub fn random_complex_subspace(da: usize, db: usize, dim: usize, r: usize, seed: u64) -> Result<SubspaceBasis<Complex64>> {
    if da == 0 || db == 0 {
        return Err(Error::Domain("dimensions must be positive".into()));
    }
    if dim == 0 || dim > da * db {
        return Err(Error::Domain(format!("dimension {dim} outside 1..={}", da * db)));
    }
    let mut rng = stream_rng(seed, "random-subspace", 0);
    let matrices = (0..dim)
        .map(|_| {
            StateMatrix::from_fn(da, db, |_, _| {
                Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
            })
        })
        .collect();
    let metadata = BasisMetadata { seed: Some(seed), ..BasisMetadata::default() };
    SubspaceBasis::new(da, db, r, BasisKind::Random, matrices, metadata)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lengths(da: usize, db: usize) -> Vec<usize> {
        diagonals(da, db).iter().map(|d| d.length).collect()
    }

    #[test]
    fn diagonal_lengths() {
        assert_eq!(lengths(3, 4), vec![1, 2, 3, 3, 2, 1]);
        assert_eq!(lengths(1, 5), vec![1; 5]);
        assert_eq!(lengths(3, 3), vec![1, 2, 3, 2, 1]);
        let ks: Vec<i64> = diagonals(3, 4).iter().map(|d| d.k).collect();
        assert_eq!(ks, vec![-2, -1, 0, 1, 2, 3]);
        assert_eq!(diagonals(3, 4)[0].cells, vec![(2, 0)]);
        assert_eq!(diagonals(3, 4)[4].cells, vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn diagonals_partition_the_matrix() {
        for da in 1..=6 {
            for db in 1..=6 {
                let ds = diagonals(da, db);
                assert_eq!(ds.len(), da + db - 1);
                let mut seen = vec![false; da * db];
                for d in &ds {
                    assert_eq!(d.length, d.cells.len());
                    for &(i, j) in &d.cells {
                        assert_eq!(j as i64 - i as i64, d.k);
                        assert!(!seen[i * db + j]);
                        seen[i * db + j] = true;
                    }
                    assert!(d.cells.windows(2).all(|w| w[0].0 < w[1].0));
                }
                assert!(seen.iter().all(|&s| s));
                if da <= db {
                    assert_eq!(ds.iter().filter(|d| d.length == da).count(), 1 + db - da);
                    for l in 1..da {
                        assert_eq!(ds.iter().filter(|d| d.length == l).count(), 2);
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_family_examples() {
        let tns = default_vandermonde(3).unwrap();
        let d = &diagonals(3, 3)[2];
        assert_eq!(d.k, 0);
        let fam = build_diagonal_family(d, 2, &tns).unwrap();
        assert_eq!(fam.len(), 2);
        let diag = |m: &StateMatrix<Rational>| (0..3).map(|i| m.get(i, i).clone()).collect::<Vec<_>>();
        assert_eq!(diag(&fam[0]), vec![int(1), int(1), int(1)]);
        assert_eq!(diag(&fam[1]), vec![int(1), int(2), int(3)]);
        for m in &fam {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert!(m.get(i, j).is_zero());
                    }
                }
            }
        }

        // Length exactly r gives a single fully nonzero matrix.
        let fam = build_diagonal_family(d, 3, &tns).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(diag(&fam[0]).iter().all(|x| !x.is_zero()));

        // Too short: contributes nothing.
        assert!(build_diagonal_family(&diagonals(3, 3)[0], 2, &tns).unwrap().is_empty());

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fam = build_diagonal_family(d, 2, &tns).unwrap();
        for _ in 0..500 {
            let c = loop {
                let c = [rational(rng.random_range(-9..=9), rng.random_range(1..=5)), rational(rng.random_range(-9..=9), rng.random_range(1..=5))];
                if c.iter().any(|x| !x.is_zero()) {
                    break c;
                }
            };
            let m = combine(&fam, &c).unwrap();
            assert!(diag(&m).iter().filter(|x| !x.is_zero()).count() >= 2);
        }
    }

    #[test]
    fn min_rank_dimensions() {
        assert_eq!(construct_min_rank_subspace(3, 3, 2).unwrap().dim(), 4);
        for d in 2..=5 {
            let b = construct_min_rank_subspace(d, d, d).unwrap();
            assert_eq!(b.dim(), 1);
            assert_eq!(rank_exact(&b.matrices[0]), d);
        }
        assert_eq!(construct_min_rank_subspace(4, 5, 3).unwrap().dim(), 6);
        assert!(matches!(construct_min_rank_subspace(3, 3, 5), Err(Error::Domain(_))));
        assert!(matches!(construct_min_rank_subspace(3, 3, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn counting_sum_matches_product_formula() {
        for da in 2..=8usize {
            for db in da..=8 {
                for r in 2..=da {
                    let sum: usize = diagonals(da, db).iter().map(|d| (d.length + 1).saturating_sub(r)).sum();
                    assert_eq!(sum, (da - r + 1) * (db - r + 1));
                }
            }
        }
    }

    #[test]
    fn families_have_disjoint_supports() {
        let b = construct_min_rank_subspace(4, 6, 2).unwrap();
        let labels = b.metadata.diagonals.clone().unwrap();
        for (m, &k) in b.matrices.iter().zip(&labels) {
            for i in 0..4 {
                for j in 0..6 {
                    if j as i64 - i as i64 != k {
                        assert!(m.get(i, j).is_zero());
                    }
                }
            }
        }
        assert!(labels.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn transposed_construction() {
        for (da, db, r) in [(3, 5, 2), (2, 4, 2), (4, 6, 3)] {
            let a = construct_min_rank_subspace(da, db, r).unwrap();
            let b = construct_min_rank_subspace(db, da, r).unwrap();
            assert_eq!(a.dim(), b.dim());
            assert!(b.metadata.transposed);
            for (x, y) in a.matrices.iter().zip(&b.matrices) {
                assert_eq!(&x.transpose(), y);
            }
        }
    }

    #[test]
    fn flanders_examples() {
        let b = construct_max_rank_leq_subspace(3, 4, 2).unwrap();
        assert_eq!(b.dim(), 8);
        assert!(b.is_independent());
        assert_eq!(construct_max_rank_leq_subspace(3, 4, 3).unwrap().dim(), 12);
        assert_eq!(construct_max_rank_leq_subspace(3, 4, 1).unwrap().dim(), 4);
        let t = construct_max_rank_leq_subspace(4, 3, 2).unwrap();
        assert_eq!((t.da, t.db, t.dim()), (4, 3, 8));
        assert!(matches!(construct_max_rank_leq_subspace(3, 4, 0), Err(Error::Domain(_))));
        assert!(matches!(construct_max_rank_leq_subspace(3, 4, 4), Err(Error::Domain(_))));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b1 = construct_max_rank_leq_subspace(3, 5, 1).unwrap();
        for _ in 0..100 {
            let c: Vec<Rational> = (0..b1.dim()).map(|_| int(rng.random_range(-9..=9))).collect();
            assert!(rank_exact(&b1.combination(&c).unwrap()) <= 1);
        }
    }

    #[test]
    fn fixed_rank_examples() {
        assert_eq!(construct_fixed_rank_subspace(3, 3).unwrap().dim(), 1);
        assert_eq!(construct_fixed_rank_subspace(3, 5).unwrap().dim(), 3);
        let b = construct_fixed_rank_subspace(2, 4).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.kind, BasisKind::FixedRank);
        assert!(matches!(construct_fixed_rank_subspace(4, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn antisymmetric_examples() {
        let b = antisymmetric_basis_3x3();
        assert_eq!(b.dim(), 3);
        assert!(b.is_independent());
        let m = b.combination(&[int(1), int(0), int(0)]).unwrap();
        assert_eq!(rank_exact(&m), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let c: Vec<Rational> = (0..3).map(|_| rational(rng.random_range(-9..=9), rng.random_range(1..=4))).collect();
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            assert_eq!(rank_exact(&b.combination(&c).unwrap()), 2);
        }
    }

    #[test]
    fn basis_json_round_trip() {
        let b = construct_min_rank_subspace(3, 4, 2).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.starts_with(r#"{"da":3,"db":4,"r":2,"kind":"min_rank_geq_r","field":"rational","matrices":["#));
        match AnyBasis::from_json(&text).unwrap() {
            AnyBasis::Rational(back) => assert_eq!(back, b),
            other => panic!("{other:?}"),
        }
        let c = random_complex_subspace(3, 3, 5, 2, 1).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(AnyBasis::from_json(&text).unwrap(), AnyBasis::Complex(c));
    }

    #[test]
    fn malformed_basis_reports_location() {
        let err = AnyBasis::from_json("{\"da\":3,\n\"db\":3,\"r\":2,\"kind\":\"user\",\"field\":\"rational\",\"matrices\":[}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let wrong_shape = r#"{"da":2,"db":2,"r":2,"kind":"user","field":"rational","matrices":[{"rows":1,"cols":1,"field":"rational","entries":["1/1"]}]}"#;
        assert!(matches!(AnyBasis::from_json(wrong_shape), Err(Error::Dimension(_))));
    }

    #[test]
    fn user_basis_independence() {
        let e = |i: usize| StateMatrix::from_fn(2, 2, |a, b| int((a * 2 + b == i) as i64));
        assert!(SubspaceBasis::<Rational>::user(vec![e(0), e(1)], 1).is_ok());
        assert!(matches!(SubspaceBasis::<Rational>::user(vec![e(0), e(0)], 1), Err(Error::Domain(_))));
    }
}
