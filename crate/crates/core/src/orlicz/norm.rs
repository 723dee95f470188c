//! Luxemburg norms of discrete densities and the spectral projection
//! identity relating `Ψ` to its fundamental function.

use crate::classical::DiscreteDensity;
use crate::error::{Error, Result};
use crate::spectral::{self, HermitianMatrix, ScalarFn};

use super::young::{FundamentalFunction, YoungFunction};

/// Commutator bound, in Frobenius norm, for pairs treated as commuting.
pub const COMMUTING_TOL: f64 = 1e-10;

/// `inf{k > 0 : Σ λ_a Ψ(f_a / k) ≤ 1}`.
pub fn luxemburg_norm(f: &DiscreteDensity, young: &YoungFunction) -> f64 {
    let weights = f.base().weights();
    let modular = |k: f64| -> f64 {
        weights
            .iter()
            .zip(f.values())
            .filter(|(w, v)| **w > 0.0 && **v > 0.0)
            .map(|(w, v)| w * young.eval(v / k))
            .sum()
    };
    let top = f
        .values()
        .iter()
        .zip(weights)
        .filter(|(_, w)| **w > 0.0)
        .fold(0.0f64, |m, (v, _)| m.max(*v));
    if top == 0.0 {
        return 0.0;
    }
    // the modular is decreasing in k; bracket the crossing geometrically
    let (mut lo, mut hi) = (top, top);
    while modular(hi) > 1.0 {
        hi *= 2.0;
    }
    while modular(lo) <= 1.0 && lo > f64::MIN_POSITIVE {
        lo *= 0.5;
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `‖χ_(1,∞)(a φ_Ψ(b)) − χ_(1,∞)(Ψ(a) b)‖_F` for commuting positive `a`, `b`.
pub fn projection_identity_defect(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    young: &YoungFunction,
) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let c = spectral::commutator_norm(a.as_matrix(), b.as_matrix());
    if c > COMMUTING_TOL {
        return Err(Error::Domain(format!(
            "projection identity needs commuting inputs, ‖[a,b]‖ = {c:e}"
        )));
    }
    let psi_a = match young {
        YoungFunction::PsiLog => spectral::apply_scalar_function(a, &ScalarFn::YoungLog)?,
        YoungFunction::PsiEnt => spectral::apply_scalar_function(a, &ScalarFn::YoungEnt)?,
        _ => {
            let sd = spectral::positive_spectrum(a)?;
            HermitianMatrix::hermitian_part(&sd.map(|x| young.eval(x)))
        }
    };
    let phi_b = match young {
        YoungFunction::PsiLog => spectral::apply_scalar_function(b, &ScalarFn::PhiLog)?,
        YoungFunction::PsiEnt => spectral::apply_scalar_function(b, &ScalarFn::PhiEnt)?,
        _ => {
            let sd = spectral::positive_spectrum(b)?;
            let thr = sd.support_threshold();
            let phi = FundamentalFunction::luxemburg(young.clone());
            HermitianMatrix::hermitian_part(
                &sd.map(|x| if x <= thr { 0.0 } else { phi.eval(x).unwrap_or(0.0) }),
            )
        }
    };
    let left = HermitianMatrix::hermitian_part(&(a.as_matrix() * phi_b.as_matrix()));
    let right = HermitianMatrix::hermitian_part(&(psi_a.as_matrix() * b.as_matrix()));
    let chi = ScalarFn::ChiAbove(1.0);
    let pl = spectral::apply_on_spectrum(&left.eigh(), &chi)?;
    let pr = spectral::apply_on_spectrum(&right.eigh(), &chi)?;
    Ok(spectral::frobenius(&(pl.as_matrix() - pr.as_matrix())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{DiscreteDensity, DiscreteMeasure};
    use crate::orlicz::young;
    use crate::sampling;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn counting(values: &[f64]) -> DiscreteDensity {
        DiscreteDensity::new(DiscreteMeasure::counting(values.len()).unwrap(), values.to_vec()).unwrap()
    }

    #[test]
    fn zero_density_has_zero_norm() {
        assert_eq!(luxemburg_norm(&counting(&[0.0, 0.0]), &YoungFunction::PsiLog), 0.0);
    }

    #[test]
    fn indicator_norm_is_fundamental_function() {
        let n = luxemburg_norm(&counting(&[1.0, 1.0, 0.0]), &YoungFunction::PsiLog);
        assert!((n - 1.206995642162657).abs() < 1e-8);
        for m in [0.25, 1.0, 3.5, 40.0] {
            let f = DiscreteDensity::new(DiscreteMeasure::from_weights(&[m]).unwrap(), vec![1.0]).unwrap();
            for y in [YoungFunction::PsiLog, YoungFunction::PsiEnt] {
                let phi = FundamentalFunction::luxemburg(y.clone()).eval(m).unwrap();
                assert!((luxemburg_norm(&f, &y) - phi).abs() <= 1e-8 * phi);
            }
        }
    }

    #[test]
    fn norm_is_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let v: Vec<f64> = (0..5).map(|_| rng.random_range(0.0..3.0)).collect();
            let scaled: Vec<f64> = v.iter().map(|x| 3.0 * x).collect();
            let a = luxemburg_norm(&counting(&v), &YoungFunction::PsiLog);
            let b = luxemburg_norm(&counting(&scaled), &YoungFunction::PsiLog);
            assert!((b - 3.0 * a).abs() <= 1e-9 * b);
        }
    }

    #[test]
    fn projection_identity_scalar_cases() {
        let i = HermitianMatrix::identity(2);
        assert_eq!(projection_identity_defect(&i, &i, &YoungFunction::PsiLog).unwrap(), 0.0);
        let two = i.scale(2.0);
        assert_eq!(projection_identity_defect(&two, &i, &YoungFunction::PsiLog).unwrap(), 0.0);
        // both sides are the full projection here
        assert!(2.0 * young::phi_log(1.0) > 1.0 && 2.0 * 2f64.ln() > 1.0);
    }

    #[test]
    fn projection_identity_random_commuting() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for y in [YoungFunction::PsiLog, YoungFunction::PsiEnt] {
            for k in 0..50 {
                let n = 2 + k % 5;
                let u = sampling::random_unitary(&mut rng, n);
                let da: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
                let db: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
                let a = sampling::conjugate_diagonal(&u, &da);
                let b = sampling::conjugate_diagonal(&u, &db);
                assert!(projection_identity_defect(&a, &b, &y).unwrap() <= 1e-9);
            }
        }
    }

    #[test]
    fn projection_identity_rejects_noncommuting() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap();
        let b = HermitianMatrix::from_parts(&[vec![1.0, 0.5], vec![0.5, 1.0]], None).unwrap();
        assert!(matches!(
            projection_identity_defect(&a, &b, &YoungFunction::PsiLog),
            Err(Error::Domain(_))
        ));
    }
}
