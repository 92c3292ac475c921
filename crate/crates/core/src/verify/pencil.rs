//! Roots of `det(A + xB)` for square complex `A`, `B`.
//!
//! With a shift `s` making `C = A + sB` well conditioned,
//! `det(A + xB) = det(C) · det(I + (x − s) C⁻¹B)`, so every nonzero
//! eigenvalue `μ` of `C⁻¹B` gives the root `x = s − 1/μ`. Zero eigenvalues are
//! roots at infinity, where the degree of the determinant drops. If no shift
//! makes `C` invertible, the determinant vanishes identically.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statemat::{to_nalgebra, StateMatrix};

/// Below this relative smallest singular value a shifted pencil is treated as singular.
const SINGULAR_SHIFT: f64 = 1e-12;
/// `|μ| ≤ INFINITE_ROOT · ‖C⁻¹B‖` is read as an infinite root.
const INFINITE_ROOT: f64 = 1e-8;
/// Rayleigh-quotient refinement steps per root.
const REFINE_STEPS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilRoot {
    pub x: Complex64,
    /// `σ_d / σ_1` of `A + xB`; zero when `A + xB` vanishes to rounding.
    pub relative_sigma_min: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PencilOutcome {
    /// Finite roots with multiplicity, plus the number of infinite ones.
    Roots { finite: Vec<PencilRoot>, infinite: usize },
    /// `det(A + xB) = 0` for every `x`.
    IdenticallySingular,
}

fn relative_sigma_min(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, x: Complex64) -> f64 {
    let m = a + b * x;
    let sv = m.singular_values();
    let (smin, smax) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let scale = a.norm() + x.norm() * b.norm();
    if smax <= 1e-12 * scale {
        0.0
    } else {
        smin / smax
    }
}

/// Newton-like update `x ← −(uᴴAv)/(uᴴBv)` from the singular pair of the
/// smallest singular value; kept only while it lowers the residual.
fn refine(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, mut x: Complex64) -> PencilRoot {
    let mut res = relative_sigma_min(a, b, x);
    for _ in 0..REFINE_STEPS {
        if res == 0.0 {
            break;
        }
        let svd = (a + b * x).svd(true, true);
        let k = svd.singular_values.imin();
        let u = svd.u.as_ref().expect("requested U").column(k).into_owned();
        let v = svd.v_t.as_ref().expect("requested V^H").row(k).adjoint();
        let num = (u.adjoint() * a * &v)[(0, 0)];
        let den = (u.adjoint() * b * &v)[(0, 0)];
        if den.norm() == 0.0 {
            break;
        }
        let candidate = -num / den;
        let r = relative_sigma_min(a, b, candidate);
        if r.is_nan() || r >= res {
            break;
        }
        x = candidate;
        res = r;
    }
    PencilRoot { x, relative_sigma_min: res }
}

/// Values `x` with `det(a + x·b) = 0`.
pub fn pencil_low_rank(a: &StateMatrix<Complex64>, b: &StateMatrix<Complex64>) -> Result<PencilOutcome> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "pencil needs two square matrices of one size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if a.entries().iter().chain(b.entries()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("pencil has non-finite entries".into()));
    }
    let d = a.rows();
    let (am, bm) = (to_nalgebra(a), to_nalgebra(b));
    let (na, nb) = (am.norm(), bm.norm());
    if nb == 0.0 {
        // Constant determinant det(A).
        return Ok(if relative_sigma_min(&am, &bm, Complex64::new(0.0, 0.0)) < SINGULAR_SHIFT {
            PencilOutcome::IdenticallySingular
        } else {
            PencilOutcome::Roots { finite: Vec::new(), infinite: d }
        });
    }

    // d + 8 spread-out shifts; a nonconstant det has at most d roots among them.
    let scale = if na > 0.0 { na / nb } else { 1.0 };
    let (shift, conditioning) = (0..d + 8)
        .map(|k| {
            let theta = 0.7 + 2.399_963_229_728_653 * k as f64;
            let s = Complex64::from_polar(scale * (1.0 + 0.37 * k as f64), theta);
            let c = &am + &bm * s;
            let sv = c.singular_values();
            let (lo, hi) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            (s, if hi == 0.0 { 0.0 } else { lo / hi })
        })
        .fold((Complex64::new(0.0, 0.0), -1.0), |best, cand| if cand.1 > best.1 { cand } else { best });
    if conditioning < SINGULAR_SHIFT {
        return Ok(PencilOutcome::IdenticallySingular);
    }

    let c = &am + &bm * shift;
    let k = c.lu().solve(&bm).ok_or_else(|| Error::Numeric("shifted pencil is not invertible".into()))?;
    let knorm = k.norm();
    let mu = Schur::try_new(k, f64::EPSILON, 10_000)
        .and_then(|s| s.eigenvalues())
        .ok_or_else(|| Error::Numeric("eigenvalue iteration did not converge".into()))?;

    let mut finite = Vec::new();
    let mut infinite = 0;
    for &m in mu.iter() {
        if m.norm() <= INFINITE_ROOT * knorm {
            infinite += 1;
        } else {
            finite.push(refine(&am, &bm, shift - m.inv()));
        }
    }
    Ok(PencilOutcome::Roots { finite, infinite })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn real(d: usize, f: impl Fn(usize, usize) -> f64) -> StateMatrix<Complex64> {
        StateMatrix::from_fn(d, d, |i, j| Complex64::new(f(i, j), 0.0))
    }

    fn random(rng: &mut ChaCha8Rng, d: usize) -> StateMatrix<Complex64> {
        StateMatrix::from_fn(d, d, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    }

    fn roots(outcome: PencilOutcome) -> (Vec<PencilRoot>, usize) {
        match outcome {
            PencilOutcome::Roots { finite, infinite } => (finite, infinite),
            PencilOutcome::IdenticallySingular => panic!("unexpected identically singular pencil"),
        }
    }

    #[test]
    fn diagonal_pencil() {
        let a = real(2, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
        let b = real(2, |i, j| (i == j) as u8 as f64);
        let (mut found, infinite) = roots(pencil_low_rank(&a, &b).unwrap());
        assert_eq!(infinite, 0);
        found.sort_by(|p, q| q.x.re.total_cmp(&p.x.re));
        assert!((found[0].x - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((found[1].x - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn identity_pencil_has_root_minus_one_with_multiplicity_d() {
        for d in 1..=5 {
            let id = real(d, |i, j| (i == j) as u8 as f64);
            let (found, infinite) = roots(pencil_low_rank(&id, &id).unwrap());
            assert_eq!((found.len(), infinite), (d, 0));
            for r in found {
                assert!((r.x + 1.0).norm() < 1e-12);
                assert!(r.relative_sigma_min < 1e-8);
            }
        }
    }

    /// Cross-check against the eigenvalues of −B⁻¹A computed directly.
    #[test]
    fn random_pencil_matches_eigenvalue_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (a, b) = (random(&mut rng, 6), random(&mut rng, 6));
        let (found, infinite) = roots(pencil_low_rank(&a, &b).unwrap());
        assert_eq!((found.len(), infinite), (6, 0));
        let binv = to_nalgebra(&b).try_inverse().unwrap();
        let oracle = (-(binv * to_nalgebra(&a))).schur().eigenvalues().unwrap();
        let mut unmatched: Vec<Complex64> = oracle.iter().copied().collect();
        for r in &found {
            let (k, dist) = unmatched
                .iter()
                .enumerate()
                .map(|(k, z)| (k, (z - r.x).norm()))
                .fold((0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
            assert!(dist < 1e-8 * (1.0 + r.x.norm()), "root {} off by {dist}", r.x);
            unmatched.remove(k);
        }
    }

    #[test]
    fn roots_drive_smallest_singular_value_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in 1..=10 {
            for _ in 0..5 {
                let (a, b) = (random(&mut rng, d), random(&mut rng, d));
                let (found, _) = roots(pencil_low_rank(&a, &b).unwrap());
                assert!(!found.is_empty());
                for r in found {
                    assert!(r.relative_sigma_min < 1e-8, "d={d}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn singular_b_reports_infinite_roots() {
        // det(A + xB) = 1 + x for A = I, B = diag(1, 0): one finite root, one at infinity.
        let a = real(2, |i, j| (i == j) as u8 as f64);
        let b = real(2, |i, j| (i == 0 && j == 0) as u8 as f64);
        let (found, infinite) = roots(pencil_low_rank(&a, &b).unwrap());
        assert_eq!((found.len(), infinite), (1, 1));
        assert!((found[0].x + 1.0).norm() < 1e-12);

        let zero = real(2, |_, _| 0.0);
        assert_eq!(roots(pencil_low_rank(&a, &zero).unwrap()), (Vec::new(), 2));
    }

    #[test]
    fn identically_singular_pencil() {
        // Shared null vector e_1.
        let a = real(2, |i, j| [[1.0, 0.0], [2.0, 0.0]][i][j]);
        let b = real(2, |i, j| [[3.0, 0.0], [1.0, 0.0]][i][j]);
        assert_eq!(pencil_low_rank(&a, &b).unwrap(), PencilOutcome::IdenticallySingular);
    }

    #[test]
    fn shape_errors() {
        let a = real(2, |_, _| 1.0);
        let b = real(3, |_, _| 1.0);
        assert!(matches!(pencil_low_rank(&a, &b), Err(Error::Dimension(_))));
    }
}
