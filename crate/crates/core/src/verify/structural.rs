use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{draw_coefficients, CertificateKind, RankCertificate, RankClaim, Verdict, VerificationReport, VerifyMode, WITNESS_LIMIT};
use crate::construct::{BasisKind, SubspaceBasis};
use crate::error::{Error, Result};
use crate::json::{AnyMatrix, AnyVector};
use crate::scalar::{int, Rational};
use crate::statemat::{determinant, rank_exact};

/// Certificate that the combination `Σ coeffs[i] B_i` of a diagonal
/// construction has rank at least `r`.
///
/// `κ` is the largest diagonal label carrying a nonzero coefficient. Only that
/// diagonal's family reaches diagonal `κ`, and its vectors have at least `r`
/// nonzero entries there. The `r × r` submatrix through the first `r` of them
/// has zeros above its main diagonal, since those cells lie on diagonals
/// beyond `κ`, so its determinant is the product of the chosen entries.
pub fn structural_certificate(basis: &SubspaceBasis<Rational>, coeffs: &[Rational]) -> Result<RankCertificate> {
    if !matches!(basis.kind, BasisKind::MinRankGeqR | BasisKind::FixedRank) {
        return Err(Error::Domain(format!("structural certificates need a diagonal construction, basis kind is {:?}", basis.kind)));
    }
    let labels = basis
        .metadata
        .diagonals
        .as_ref()
        .ok_or_else(|| Error::Domain("basis carries no diagonal metadata".into()))?;
    if coeffs.len() != basis.dim() {
        return Err(Error::Dimension(format!("{} coefficients for a basis of dimension {}", coeffs.len(), basis.dim())));
    }
    let kappa = labels
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&k, _)| k)
        .max()
        .ok_or_else(|| Error::Domain("coefficients are all zero".into()))?;

    let combination = basis.combination(coeffs)?;
    let frame = if basis.metadata.transposed { combination.transpose() } else { combination.clone() };
    let r = basis.r;
    let cells: Vec<(usize, usize)> = (0..frame.rows())
        .filter_map(|i| {
            let j = i as i64 + kappa;
            (j >= 0 && (j as usize) < frame.cols()).then_some((i, j as usize))
        })
        .filter(|&(i, j)| !frame.get(i, j).is_zero())
        .take(r)
        .collect();
    if cells.len() < r {
        return Err(Error::Internal(format!(
            "diagonal {kappa} has only {} nonzero entries, construction promises {r}",
            cells.len()
        )));
    }
    let rows: Vec<usize> = cells.iter().map(|c| c.0).collect();
    let cols: Vec<usize> = cells.iter().map(|c| c.1).collect();
    let minor = determinant(&frame.submatrix(&rows, &cols))?;
    let product = cells.iter().fold(Rational::one(), |acc, &(i, j)| acc * frame.get(i, j));
    if minor.is_zero() || minor != product {
        return Err(Error::Internal(format!("triangular minor on diagonal {kappa} is {minor}, expected {product}")));
    }
    let positions = if basis.metadata.transposed { cells.iter().map(|&(i, j)| (j, i)).collect() } else { cells };
    Ok(RankCertificate {
        kind: CertificateKind::StructuralGeq,
        coeffs: AnyVector::Rational(coeffs.to_vec()),
        kappa: Some(kappa),
        positions: Some(positions),
        minor_value: Some(minor),
        rank_found: None,
        relative_sigma: None,
        matrix: Some(AnyMatrix::Rational(combination)),
    })
}

/// Structural certificates for `n` seeded combinations, each cross-checked
/// against the exact rank.
pub fn structural_verify(basis: &SubspaceBasis<Rational>, n: usize, seed: u64) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let draws = draw_coefficients(basis.dim(), n, seed);
    let results: Vec<(RankCertificate, usize)> = draws
        .par_iter()
        .map(|c| {
            let coeffs: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
            let cert = structural_certificate(basis, &coeffs)?;
            let rank = match &cert.matrix {
                Some(AnyMatrix::Rational(m)) => rank_exact(m),
                _ => unreachable!("structural certificates embed the rational combination"),
            };
            if rank < basis.r {
                return Err(Error::Internal(format!("certified combination has exact rank {rank} < {}", basis.r)));
            }
            Ok((cert, rank))
        })
        .collect::<Result<_>>()?;
    let ranks = results.iter().map(|(_, r)| *r);
    Ok(VerificationReport {
        mode: VerifyMode::Structural,
        claim: RankClaim::at_least(basis.r),
        samples_or_points: n as u64,
        min_rank_observed: ranks.clone().min(),
        max_rank_observed: ranks.max(),
        min_sigma_r: None,
        tolerance: None,
        seed: Some(seed),
        prime: None,
        witnesses: results.into_iter().take(WITNESS_LIMIT).map(|(c, _)| c).collect(),
        verdict: Verdict::Consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{antisymmetric_basis_3x3, construct_min_rank_subspace};

    fn unit(dim: usize, i: usize) -> Vec<Rational> {
        (0..dim).map(|j| int((i == j) as i64)).collect()
    }

    #[test]
    fn unit_vector_on_main_diagonal_family() {
        let b = construct_min_rank_subspace(3, 3, 2).unwrap();
        let labels = b.metadata.diagonals.clone().unwrap();
        let i = labels.iter().position(|&k| k == 0).unwrap();
        let cert = structural_certificate(&b, &unit(4, i)).unwrap();
        assert_eq!(cert.kappa, Some(0));
        assert_eq!(cert.positions.as_ref().unwrap().len(), 2);
        assert!(cert.positions.unwrap().iter().all(|&(r, c)| r == c));
        assert!(!cert.minor_value.unwrap().is_zero());
    }

    #[test]
    fn single_matrix_basis_gives_full_determinant() {
        let b = construct_min_rank_subspace(4, 4, 4).unwrap();
        let cert = structural_certificate(&b, &[int(1)]).unwrap();
        assert_eq!(cert.positions.as_ref().unwrap().len(), 4);
        let full = match &cert.matrix {
            Some(AnyMatrix::Rational(m)) => determinant(m).unwrap(),
            _ => unreachable!(),
        };
        assert_eq!(cert.minor_value, Some(full.clone()));
        assert!(!full.is_zero());
    }

    #[test]
    fn thousand_certificates_on_4x5_r3() {
        let b = construct_min_rank_subspace(4, 5, 3).unwrap();
        let report = structural_verify(&b, 1000, 17).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent);
        assert!(report.min_rank_observed.unwrap() >= 3);
        // Re-check each embedded certificate independently.
        for cert in &report.witnesses {
            let Some(AnyMatrix::Rational(m)) = &cert.matrix else { unreachable!() };
            let pos = cert.positions.as_ref().unwrap();
            let rows: Vec<usize> = pos.iter().map(|p| p.0).collect();
            let cols: Vec<usize> = pos.iter().map(|p| p.1).collect();
            assert_eq!(Some(determinant(&m.submatrix(&rows, &cols)).unwrap()), cert.minor_value);
        }
    }

    #[test]
    fn transposed_basis_positions_are_in_original_frame() {
        let b = construct_min_rank_subspace(5, 3, 2).unwrap();
        let report = structural_verify(&b, 50, 3).unwrap();
        for cert in &report.witnesses {
            let Some(AnyMatrix::Rational(m)) = &cert.matrix else { unreachable!() };
            for &(i, j) in cert.positions.as_ref().unwrap() {
                assert!(!m.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn rejects_unsuitable_input() {
        let a = antisymmetric_basis_3x3();
        assert!(matches!(structural_certificate(&a, &unit(3, 0)), Err(Error::Domain(_))));
        let b = construct_min_rank_subspace(3, 3, 2).unwrap();
        assert!(matches!(structural_certificate(&b, &vec![int(0); 4]), Err(Error::Domain(_))));
        assert!(matches!(structural_certificate(&b, &vec![int(1); 3]), Err(Error::Dimension(_))));
    }
}
