//! Exhaustive minimum rank over GF(p).
//!
//! Rank over the rationals is at least the rank of the reduction mod `p`, so a
//! minimum `≥ r` over all projective points is a sound check of the reduced
//! space, while a smaller minimum proves nothing about the complex subspace.

use rayon::prelude::*;

use super::{CertificateKind, RankCertificate, RankClaim, Verdict, VerificationReport, VerifyMode};
use crate::construct::SubspaceBasis;
use crate::error::{Error, Result};
use crate::json::{AnyMatrix, AnyVector};
use crate::scalar::{is_integer, is_prime, Fp, Rational, MAX_PRIME};
use crate::statemat::{rank_exact, StateMatrix};

pub const GFP_ENUMERATION_CAP: u128 = 1_000_000;

/// `(p^n − 1)/(p − 1)`, or `None` on overflow.
fn projective_count(p: u64, n: usize) -> Option<u128> {
    let pn = (p as u128).checked_pow(u32::try_from(n).ok()?)?;
    Some((pn - 1) / (p as u128 - 1))
}

/// The `index`-th projective point, representatives normalised so the first
/// nonzero coordinate is one. Points are ordered by the position of that
/// coordinate, then lexicographically (base p) in the remaining ones.
fn projective_point(mut index: u128, p: u64, n: usize) -> Vec<u64> {
    for lead in 0..n {
        let block = (p as u128).pow((n - lead - 1) as u32);
        if index < block {
            let mut point = vec![0u64; n];
            point[lead] = 1;
            for slot in point[lead + 1..].iter_mut().rev() {
                *slot = (index % p as u128) as u64;
                index /= p as u128;
            }
            return point;
        }
        index -= block;
    }
    unreachable!("index beyond the projective point count")
}

fn reduce(basis: &SubspaceBasis<Rational>, p: u64) -> Result<Vec<StateMatrix<Fp>>> {
    basis
        .matrices
        .iter()
        .map(|m| {
            if let Some(q) = m.entries().iter().find(|q| !is_integer(q)) {
                return Err(Error::Domain(format!("GF(p) reduction needs integer entries, found {q}")));
            }
            Ok(m.map(|q| Fp::from_bigint(q.numer(), p)))
        })
        .collect()
}

fn combine_fp(mats: &[StateMatrix<Fp>], point: &[u64], p: u64) -> StateMatrix<Fp> {
    let (rows, cols) = mats[0].shape();
    let mut acc = vec![Fp::zero(p); rows * cols];
    for (m, &c) in mats.iter().zip(point) {
        if c == 0 {
            continue;
        }
        let c = Fp::from_u64(c, p);
        for (a, &x) in acc.iter_mut().zip(m.entries()) {
            *a = *a + c * x;
        }
    }
    StateMatrix::new(rows, cols, acc).expect("shape preserved")
}

/// Minimum rank mod `p` over every projective coefficient point. Refuses when
/// the point count exceeds `cap`.
pub fn gfp_exhaustive_min_rank(basis: &SubspaceBasis<Rational>, p: u64, cap: u128) -> Result<VerificationReport> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("p must be prime (got {p})")));
    }
    if p >= MAX_PRIME {
        return Err(Error::Domain(format!("p must be below {MAX_PRIME}")));
    }
    let n = basis.dim();
    let required = projective_count(p, n).unwrap_or(u128::MAX);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let mats = reduce(basis, p)?;
    let stacked = StateMatrix::new(n, basis.da * basis.db, mats.iter().flat_map(|m| m.entries().iter().copied()).collect())?;
    if rank_exact(&stacked) < n {
        return Err(Error::Domain(format!("reduction mod {p} makes the basis linearly dependent")));
    }

    let (min_rank, argmin, max_rank) = (0..required)
        .into_par_iter()
        .map(|g| {
            let rank = rank_exact(&combine_fp(&mats, &projective_point(g, p, n), p));
            (rank, g, rank)
        })
        .reduce(|| (usize::MAX, u128::MAX, 0), |a, b| {
            let (min, arg) = if (b.0, b.1) < (a.0, a.1) { (b.0, b.1) } else { (a.0, a.1) };
            (min, arg, a.2.max(b.2))
        });

    let claim = RankClaim::at_least(basis.r);
    let mut witnesses = Vec::new();
    if min_rank < basis.r {
        let point = projective_point(argmin, p, n);
        witnesses.push(RankCertificate {
            kind: CertificateKind::WitnessLt,
            matrix: Some(AnyMatrix::Gfp(combine_fp(&mats, &point, p))),
            coeffs: AnyVector::Gfp { p, values: point },
            kappa: None,
            positions: None,
            minor_value: None,
            rank_found: Some(min_rank),
            relative_sigma: None,
        });
    }
    Ok(VerificationReport {
        mode: VerifyMode::GfpExhaustive,
        claim,
        samples_or_points: required as u64,
        min_rank_observed: Some(min_rank),
        max_rank_observed: Some(max_rank),
        min_sigma_r: None,
        tolerance: None,
        seed: None,
        prime: Some(p),
        witnesses,
        // A drop mod p need not lift to a drop over C.
        verdict: if min_rank >= basis.r { Verdict::Consistent } else { Verdict::Inconclusive },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct_min_rank_subspace, BasisKind, BasisMetadata};
    use crate::scalar::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn enumerates_every_projective_point_once() {
        for (p, n) in [(2, 3), (3, 4), (5, 2), (7, 1)] {
            let count = projective_count(p, n).unwrap();
            let mut seen = HashSet::new();
            for g in 0..count {
                let pt = projective_point(g, p, n);
                let lead = pt.iter().position(|&x| x != 0).unwrap();
                assert_eq!(pt[lead], 1);
                assert!(seen.insert(pt));
            }
            // Brute force: normalise every nonzero vector of GF(p)^n.
            let mut lines = HashSet::new();
            for code in 1..(p as usize).pow(n as u32) {
                let v: Vec<u64> = (0..n).map(|i| (code / (p as usize).pow((n - 1 - i) as u32)) as u64 % p).collect();
                let lead = Fp::from_u64(*v.iter().find(|&&x| x != 0).unwrap(), p).inv();
                lines.insert(v.iter().map(|&x| (Fp::from_u64(x, p) * lead).value()).collect::<Vec<_>>());
            }
            assert_eq!(lines, seen);
        }
        assert_eq!(projective_count(3, 4), Some(40));
        assert_eq!(projective_count(5, 2), Some(6));
    }

    #[test]
    fn constructed_3x3_mod_3() {
        let b = construct_min_rank_subspace(3, 3, 2).unwrap();
        let report = gfp_exhaustive_min_rank(&b, 3, GFP_ENUMERATION_CAP).unwrap();
        assert_eq!(report.samples_or_points, 40);
        assert!(report.min_rank_observed.unwrap() >= 2);
        assert_eq!(report.verdict, Verdict::Consistent);
    }

    #[test]
    fn identity_mod_2() {
        let id = StateMatrix::from_fn(3, 3, |i, j| int((i == j) as i64));
        let b = SubspaceBasis::new(3, 3, 3, BasisKind::User, vec![id], BasisMetadata::default()).unwrap();
        let report = gfp_exhaustive_min_rank(&b, 2, GFP_ENUMERATION_CAP).unwrap();
        assert_eq!(report.samples_or_points, 1);
        assert_eq!(report.min_rank_observed, Some(3));
    }

    #[test]
    fn two_by_three_mod_5_has_six_points() {
        let b = construct_min_rank_subspace(2, 3, 2).unwrap();
        assert_eq!(b.dim(), 2);
        let report = gfp_exhaustive_min_rank(&b, 5, GFP_ENUMERATION_CAP).unwrap();
        assert_eq!(report.samples_or_points, 6);
    }

    #[test]
    fn refusals() {
        let b = construct_min_rank_subspace(3, 3, 2).unwrap();
        assert!(matches!(gfp_exhaustive_min_rank(&b, 4, GFP_ENUMERATION_CAP), Err(Error::Domain(m)) if m.contains("p must be prime")));
        assert!(matches!(gfp_exhaustive_min_rank(&b, 3, 39), Err(Error::CapExceeded { required: 40, cap: 39 })));
        // (1, 1) and (1, 3) coincide mod 2.
        let dependent = SubspaceBasis::new(
            1,
            2,
            1,
            BasisKind::User,
            vec![StateMatrix::new(1, 2, vec![int(1), int(1)]).unwrap(), StateMatrix::new(1, 2, vec![int(1), int(3)]).unwrap()],
            BasisMetadata::default(),
        )
        .unwrap();
        assert!(matches!(gfp_exhaustive_min_rank(&dependent, 2, GFP_ENUMERATION_CAP), Err(Error::Domain(_))));
    }

    #[test]
    fn rank_drop_mod_p_is_inconclusive() {
        let m = StateMatrix::new(2, 2, vec![int(1), int(1), int(1), int(3)]).unwrap();
        let b = SubspaceBasis::new(2, 2, 2, BasisKind::User, vec![m], BasisMetadata::default()).unwrap();
        let report = gfp_exhaustive_min_rank(&b, 2, GFP_ENUMERATION_CAP).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert_eq!(report.witnesses[0].rank_found, Some(1));
    }

    #[test]
    fn rank_mod_p_never_exceeds_rational_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let rows = rng.random_range(1..=5);
            let cols = rng.random_range(1..=5);
            let m = StateMatrix::from_fn(rows, cols, |_, _| int(rng.random_range(-6..=6)));
            let q = rank_exact(&m);
            for p in [2u64, 3, 5] {
                let reduced = m.map(|x| Fp::from_bigint(x.numer(), p));
                assert!(rank_exact(&reduced) <= q);
            }
        }
    }
}
