//! Totally non-singular matrices: square matrices all of whose minors, of
//! every order, are nonzero.
//!
//! The generator is the Vandermonde matrix on strictly increasing positive
//! nodes, which is totally positive. Up to [`CERTIFICATION_CAP`] every minor is
//! checked exactly when the matrix is built; larger matrices rely on the
//! total-positivity theorem and say so in their [`Certification`].

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::{FieldKind, FieldScalar};
use crate::scalar::{format_rational, int, Rational};
use crate::statemat::{combine, determinant, StateMatrix};

/// Largest size for which all `Σ_k C(m,k)²` minors are enumerated.
pub const CERTIFICATION_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Every minor was evaluated and found nonzero.
    Exhaustive,
    /// Vandermonde above the cap; nonsingularity of minors is by theorem.
    ByTheorem { cap: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TnsMatrix {
    entries: StateMatrix<Rational>,
    nodes: Option<Vec<Rational>>,
    certification: Certification,
}

impl TnsMatrix {
    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &StateMatrix<Rational> {
        &self.entries
    }

    pub fn nodes(&self) -> Option<&[Rational]> {
        self.nodes.as_deref()
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.size()).map(|i| self.entries.get(i, j).clone()).collect()
    }

    /// Leading `len × len` block, itself totally non-singular.
    pub fn leading(&self, len: usize) -> Result<TnsMatrix> {
        if len == 0 || len > self.size() {
            return Err(Error::Dimension(format!("leading block {len} of a size-{} TNS matrix", self.size())));
        }
        let idx: Vec<usize> = (0..len).collect();
        Ok(TnsMatrix {
            entries: self.entries.submatrix(&idx, &idx),
            nodes: self.nodes.as_ref().map(|n| n[..len].to_vec()),
            certification: self.certification,
        })
    }

    /// Accepts an arbitrary square matrix after exhaustive certification.
    pub fn certify(m: StateMatrix<Rational>) -> Result<TnsMatrix> {
        if m.rows() > CERTIFICATION_CAP {
            return Err(Error::Domain(format!(
                "cannot certify a non-Vandermonde matrix of size {} above the cap {CERTIFICATION_CAP}",
                m.rows()
            )));
        }
        let check = is_totally_nonsingular(&m, None)?;
        if let Some(w) = check.witness {
            return Err(Error::Domain(format!("minor on rows {:?}, cols {:?} vanishes", w.rows, w.cols)));
        }
        Ok(TnsMatrix { entries: m, nodes: None, certification: Certification::Exhaustive })
    }
}

impl Serialize for TnsMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("rows", &self.size())?;
        map.serialize_entry("cols", &self.size())?;
        map.serialize_entry("field", &FieldKind::Rational)?;
        let entries: Vec<_> = self.entries.entries().iter().map(FieldScalar::encode).collect();
        map.serialize_entry("entries", &entries)?;
        if let Some(nodes) = &self.nodes {
            let nodes: Vec<String> = nodes.iter().map(format_rational).collect();
            map.serialize_entry("nodes", &nodes)?;
        }
        map.serialize_entry("certification", &self.certification)?;
        map.end()
    }
}

/// Vandermonde matrix `V[i][j] = nodes[i]^j`.
pub fn vandermonde(nodes: &[Rational]) -> Result<TnsMatrix> {
    if nodes.is_empty() {
        return Err(Error::Domain("Vandermonde needs at least one node".into()));
    }
    if let Some(bad) = nodes.iter().find(|x| !x.is_positive()) {
        return Err(Error::Domain(format!("nodes must be positive, got {}", format_rational(bad))));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("nodes must be strictly increasing".into()));
    }
    let m = nodes.len();
    let entries = StateMatrix::from_fn(m, m, |i, j| num_traits::pow(nodes[i].clone(), j));
    let certification = if m <= CERTIFICATION_CAP {
        if let Some(w) = is_totally_nonsingular(&entries, None)?.witness {
            return Err(Error::Internal(format!(
                "Vandermonde minor on rows {:?}, cols {:?} vanished",
                w.rows, w.cols
            )));
        }
        Certification::Exhaustive
    } else {
        Certification::ByTheorem { cap: CERTIFICATION_CAP }
    };
    Ok(TnsMatrix { entries, nodes: Some(nodes.to_vec()), certification })
}

/// Vandermonde on nodes `1, 2, …, m`.
pub fn default_vandermonde(m: usize) -> Result<TnsMatrix> {
    let nodes: Vec<Rational> = (1..=m as i64).map(int).collect();
    vandermonde(&nodes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TnsCheck {
    pub nonsingular: bool,
    /// First vanishing minor, by order then lexicographically.
    pub witness: Option<MinorWitness>,
}

/// Checks every minor of order `1..=order_cap` (default: the full size).
pub fn is_totally_nonsingular(m: &StateMatrix<Rational>, order_cap: Option<usize>) -> Result<TnsCheck> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("total non-singularity needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let cap = order_cap.unwrap_or(n).min(n);
    for k in 1..=cap {
        for rows in (0..n).combinations(k) {
            for cols in (0..n).combinations(k) {
                let det = determinant(&m.submatrix(&rows, &cols))?;
                if det.is_zero() {
                    return Ok(TnsCheck { nonsingular: false, witness: Some(MinorWitness { rows, cols }) });
                }
            }
        }
    }
    Ok(TnsCheck { nonsingular: true, witness: None })
}

/// Number of nonzero entries of `Σ coeffs[i] · column(cols[i])`. For a TNS
/// matrix of size `m` and `n` columns this is at least `m − n + 1`.
pub fn combination_nonzero_count(tns: &TnsMatrix, cols: &[usize], coeffs: &[Rational]) -> Result<usize> {
    if cols.len() != coeffs.len() {
        return Err(Error::Dimension(format!("{} columns but {} coefficients", cols.len(), coeffs.len())));
    }
    if cols.is_empty() || cols.len() > tns.size() {
        return Err(Error::Dimension(format!("need 1..={} columns, got {}", tns.size(), cols.len())));
    }
    if let Some(&c) = cols.iter().find(|&&c| c >= tns.size()) {
        return Err(Error::Dimension(format!("column {c} out of range")));
    }
    if !cols.iter().all_unique() {
        return Err(Error::Domain("column indices must be distinct".into()));
    }
    if coeffs.iter().all(Zero::is_zero) {
        return Err(Error::Domain("coefficients are all zero".into()));
    }
    let columns: Vec<StateMatrix<Rational>> = cols
        .iter()
        .map(|&c| StateMatrix::new(tns.size(), 1, tns.column(c)))
        .collect::<Result<_>>()?;
    let v = combine(&columns, coeffs)?;
    Ok(v.entries().iter().filter(|x| !x.is_zero()).count())
}

/// Exponential-time count of minors of all orders: `Σ_k C(m,k)² = C(2m,m) − 1`.
pub fn minor_count(m: usize) -> u128 {
    let mut c = 1u128;
    for k in 0..m as u128 {
        c = c * (2 * m as u128 - k) / (k + 1);
    }
    c - 1
}
