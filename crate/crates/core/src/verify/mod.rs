//! Evidence about the rank of the elements of a matrix subspace.
//!
//! Minimum rank over a subspace is a worst case, so sampling alone never
//! proves a lower bound. Reports therefore use the verdicts `consistent`,
//! `refuted` (with a witness) and `inconclusive`, and the back-ends are
//! layered: structural certificates for the diagonal construction, exact
//! sampling, exhaustive enumeration over a prime field, and a numerical search
//! for a low-rank element.

mod gfp;
mod pencil;
mod sampling;
mod sigma;
mod structural;

pub use gfp::{gfp_exhaustive_min_rank, GFP_ENUMERATION_CAP};
pub use pencil::{pencil_low_rank, PencilOutcome, PencilRoot};
pub use sampling::sample_verify_exact;
pub use sigma::{minimize_sigma_r, relative_sigma, SigmaOptions, SigmaOutcome};
pub use structural::{structural_certificate, structural_verify};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::construct::BasisKind;
use crate::json::{opt_rational, AnyMatrix, AnyVector};
use crate::rng::stream_rng;
use crate::scalar::Rational;

/// Upper bound on the witnesses kept in a report.
pub const WITNESS_LIMIT: usize = 8;

/// Coefficients are drawn from `[-COEFF_BOUND, COEFF_BOUND]`.
pub const COEFF_BOUND: i64 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtLeast,
    AtMost,
    Exactly,
}

/// The rank property every nonzero element is claimed to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankClaim {
    pub relation: Relation,
    pub r: usize,
}

impl RankClaim {
    pub fn at_least(r: usize) -> Self {
        RankClaim { relation: Relation::AtLeast, r }
    }

    pub fn at_most(r: usize) -> Self {
        RankClaim { relation: Relation::AtMost, r }
    }

    pub fn exactly(r: usize) -> Self {
        RankClaim { relation: Relation::Exactly, r }
    }

    /// The claim a construction of the given kind makes.
    pub fn for_kind(kind: BasisKind, r: usize) -> Self {
        match kind {
            BasisKind::MaxRankLeqR => Self::at_most(r),
            BasisKind::FixedRank | BasisKind::Antisymmetric => Self::exactly(r),
            BasisKind::MinRankGeqR | BasisKind::Random | BasisKind::User => Self::at_least(r),
        }
    }

    pub fn holds(&self, rank: usize) -> bool {
        match self.relation {
            Relation::AtLeast => rank >= self.r,
            Relation::AtMost => rank <= self.r,
            Relation::Exactly => rank == self.r,
        }
    }

    /// Certificate kind for a rank that violates the claim.
    fn violation_kind(&self, rank: usize) -> CertificateKind {
        if rank < self.r {
            CertificateKind::WitnessLt
        } else {
            CertificateKind::WitnessGt
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// Nonzero triangular minor proving rank at least `r`.
    StructuralGeq,
    /// A combination of rank below `r`.
    WitnessLt,
    /// A combination of rank above `r`, refuting an upper-bound claim.
    WitnessGt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub kind: CertificateKind,
    pub coeffs: AnyVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub minor_value: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_found: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<AnyMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    SampleExact,
    GfpExhaustive,
    SigmaMin,
    Structural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub claim: RankClaim,
    pub samples_or_points: u64,
    pub min_rank_observed: Option<usize>,
    pub max_rank_observed: Option<usize>,
    pub min_sigma_r: Option<f64>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub prime: Option<u64>,
    pub witnesses: Vec<RankCertificate>,
    pub verdict: Verdict,
}

/// `n` nonzero integer coefficient vectors of length `dim`, deterministic in
/// `seed`. Sampling and structural modes share this stream so the same seed
/// inspects the same combinations.
pub fn draw_coefficients(dim: usize, n: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = stream_rng(seed, "coefficients", 0);
    (0..n)
        .map(|_| loop {
            let c: Vec<i64> = (0..dim).map(|_| rng.random_range(-COEFF_BOUND..=COEFF_BOUND)).collect();
            if c.iter().any(|&x| x != 0) {
                break c;
            }
        })
        .collect()
}
