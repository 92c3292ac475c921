use rayon::prelude::*;

use super::{draw_coefficients, RankCertificate, RankClaim, Verdict, VerificationReport, VerifyMode, WITNESS_LIMIT};
use crate::construct::SubspaceBasis;
use crate::error::{Error, Result};
use crate::json::{AnyMatrix, AnyVector};
use crate::scalar::{int, Rational};
use crate::statemat::rank_exact;

/// Exact ranks of `n` seeded integer combinations with entries in `[-9, 9]`.
/// Any rank violating `claim` refutes it and is kept as a witness.
pub fn sample_verify_exact(basis: &SubspaceBasis<Rational>, claim: RankClaim, n: usize, seed: u64) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let draws = draw_coefficients(basis.dim(), n, seed);
    let ranks: Vec<usize> = draws
        .par_iter()
        .map(|c| {
            let coeffs: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
            basis.combination(&coeffs).map(|m| rank_exact(&m))
        })
        .collect::<Result<_>>()?;

    let mut witnesses = Vec::new();
    for (c, &rank) in draws.iter().zip(&ranks).filter(|(_, &rank)| !claim.holds(rank)).take(WITNESS_LIMIT) {
        let coeffs: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
        witnesses.push(RankCertificate {
            kind: claim.violation_kind(rank),
            matrix: Some(AnyMatrix::Rational(basis.combination(&coeffs)?)),
            coeffs: AnyVector::Rational(coeffs),
            kappa: None,
            positions: None,
            minor_value: None,
            rank_found: Some(rank),
            relative_sigma: None,
        });
    }
    let verdict = if witnesses.is_empty() { Verdict::Consistent } else { Verdict::Refuted };
    Ok(VerificationReport {
        mode: VerifyMode::SampleExact,
        claim,
        samples_or_points: n as u64,
        min_rank_observed: ranks.iter().copied().min(),
        max_rank_observed: ranks.iter().copied().max(),
        min_sigma_r: None,
        tolerance: None,
        seed: Some(seed),
        prime: None,
        witnesses,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct_max_rank_leq_subspace, construct_min_rank_subspace, BasisKind, BasisMetadata};
    use crate::statemat::StateMatrix;
    use crate::verify::CertificateKind;

    #[test]
    fn constructed_3x3_r2_is_consistent() {
        let b = construct_min_rank_subspace(3, 3, 2).unwrap();
        let report = sample_verify_exact(&b, RankClaim::at_least(2), 1000, 7).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent);
        assert_eq!(report.min_rank_observed, Some(2));
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn rank_one_generator_is_refuted() {
        let e00 = StateMatrix::from_fn(2, 2, |i, j| int((i == 0 && j == 0) as i64));
        let b = SubspaceBasis::new(2, 2, 2, BasisKind::User, vec![e00], BasisMetadata::default()).unwrap();
        let report = sample_verify_exact(&b, RankClaim::at_least(2), 10, 1).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        assert_eq!(report.witnesses[0].kind, CertificateKind::WitnessLt);
        assert_eq!(report.witnesses[0].rank_found, Some(1));
    }

    #[test]
    fn flanders_upper_bound_holds() {
        let b = construct_max_rank_leq_subspace(3, 4, 2).unwrap();
        let report = sample_verify_exact(&b, RankClaim::at_most(2), 1000, 3).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent);
        assert_eq!(report.max_rank_observed, Some(2));
        // Claiming a smaller ceiling is refuted by a rank-2 witness.
        let report = sample_verify_exact(&b, RankClaim::at_most(1), 50, 3).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        assert_eq!(report.witnesses[0].kind, CertificateKind::WitnessGt);
    }

    #[test]
    fn reports_are_deterministic() {
        let b = construct_min_rank_subspace(3, 4, 2).unwrap();
        let a = serde_json::to_string(&sample_verify_exact(&b, RankClaim::at_least(2), 200, 42).unwrap()).unwrap();
        let c = serde_json::to_string(&sample_verify_exact(&b, RankClaim::at_least(2), 200, 42).unwrap()).unwrap();
        assert_eq!(a, c);
    }
}
