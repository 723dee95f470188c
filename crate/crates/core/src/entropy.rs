//! Relative entropy along four independent routes.
//!
//! * divergence: `Tr(ρ_ψ log ρ_ψ − ρ_ψ log ρ_φ)` on supports;
//! * limit: `−i d/dt ϑ((Dϑ:Dψ)_t)` at `t = 0`, from symmetric difference
//!   quotients of the cocycle and Richardson extrapolation;
//! * araki: `−⟨Ψ, log Δ_{φ,ψ} Ψ⟩` as a sum over the spectral measure of
//!   the relative modular operator;
//! * interpolated: `F(s) = Tr(ρ_ϑ^s (log ρ_ϑ − log ρ_φ) ρ_φ^{1−s})` extrapolated
//!   to `s = 1`.
//!
//! Entropies use the sign of the H-functional: `S(ρ) = Tr ρ log ρ ≤ 0`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extrapolate::richardson;
use crate::modular::{relative_modular, standard_vector, CocycleDerivative};
use crate::spectral::{frobenius, CMatrix, DensityMatrix};

/// Support inclusion tolerance, `‖(𝟙 − P_φ) P_ψ‖_F`.
pub const SUPPORT_INCLUSION_TOL: f64 = 1e-8;
/// Magnitude beyond which a monotonically growing limit sequence is
/// declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Exponents `k` of the interpolation points `s_k = 1 − 2^{−k}`.
pub const INTERPOLATION_EXPONENTS: std::ops::RangeInclusive<i32> = 3..=12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Divergence,
    Limit,
    Araki,
    Interpolated,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Divergence, Route::Limit, Route::Araki, Route::Interpolated];

    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Divergence => "divergence",
            Route::Limit => "limit",
            Route::Araki => "araki",
            Route::Interpolated => "interpolated",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A relative entropy in nats; `value = +∞` flags divergence.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    pub value: f64,
    pub route: Route,
    pub error_estimate: f64,
    /// `(parameter, raw value)` rows of the convergence sweep, if any.
    pub diagnostics: Vec<(f64, f64)>,
}

impl EntropyResult {
    fn exact(value: f64, route: Route) -> Self {
        Self {
            value,
            route,
            error_estimate: if value.is_finite() { 0.0 } else { f64::INFINITY },
            diagnostics: Vec::new(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

fn same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// `Σ λ_k log λ_k` over the support, i.e. minus the textbook von Neumann
/// entropy.
pub fn h_functional_quantum(rho: &DensityMatrix) -> f64 {
    let sd = rho.spectrum();
    let thr = sd.support_threshold();
    sd.eigenvalues
        .iter()
        .filter(|&&l| l > thr)
        .map(|&l| l * l.ln())
        .sum()
}

/// `S(ψ|φ) = Tr(ρ_ψ log ρ_ψ − ρ_ψ log ρ_φ)`, or `+∞` when the support of
/// `ρ_ψ` is not contained in the support of `ρ_φ`.
pub fn relative_entropy_divergence(psi: &DensityMatrix, phi: &DensityMatrix) -> Result<EntropyResult> {
    same_dim(psi, phi)?;
    let n = psi.dim();
    let outside = CMatrix::identity(n, n) - phi.support_projection().as_matrix();
    let leak = frobenius(&(outside * psi.support_projection().as_matrix()));
    if leak > SUPPORT_INCLUSION_TOL {
        return Ok(EntropyResult::exact(f64::INFINITY, Route::Divergence));
    }
    let cross = psi.expect(&phi.log_on_support()).re;
    Ok(EntropyResult::exact(
        h_functional_quantum(psi) - cross,
        Route::Divergence,
    ))
}

/// Step schedule for the limit route.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule(Vec<f64>);

impl Schedule {
    /// `t_k = t0 · 2^{−k}`, `k = 0..=8`.
    pub fn halving(t0: f64) -> Result<Self> {
        Self::new((0..=8).map(|k| t0 / 2f64.powi(k)).collect())
    }

    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Validation("schedule is empty".into()));
        }
        if points.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
            return Err(Error::Validation("schedule points must be positive".into()));
        }
        if points.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Validation("schedule must be strictly decreasing".into()));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Self::halving(1e-2).expect("default schedule is valid")
    }
}

/// Symmetric difference quotient `(−i/2t)(ϑ(u_t) − ϑ(u_{−t}))`.
pub fn limit_quotient(cocycle: &CocycleDerivative, t: f64) -> f64 {
    let rho = cocycle.source();
    let diff = cocycle.minus_identity(t) - cocycle.minus_identity(-t);
    (rho.expect(&diff) * Complex64::new(0.0, -0.5 / t)).re
}

/// A sweep diverges when it has non-finite entries, or at least four
/// entries growing monotonically in magnitude past [`DIVERGENCE_THRESHOLD`].
pub fn diverges(values: &[f64]) -> bool {
    let growing = values.len() >= 4
        && values.windows(2).all(|w| w[1].abs() > w[0].abs())
        && values.last().is_some_and(|v| v.abs() > DIVERGENCE_THRESHOLD);
    growing || values.iter().any(|v| !v.is_finite())
}

/// `S(ϑ|ψ) = lim_{t→0} (−i/t) ϑ((Dϑ:Dψ)_t − 𝟙)`.
pub fn relative_entropy_limit(
    theta: &DensityMatrix,
    psi: &DensityMatrix,
    schedule: &Schedule,
) -> Result<EntropyResult> {
    let cocycle = CocycleDerivative::new(theta, psi)?;
    let steps = schedule.points();
    let values: Vec<f64> = steps.iter().map(|&t| limit_quotient(&cocycle, t)).collect();
    let diagnostics: Vec<(f64, f64)> = steps.iter().copied().zip(values.iter().copied()).collect();

    if diverges(&values) {
        return Ok(EntropyResult {
            value: f64::INFINITY,
            route: Route::Limit,
            error_estimate: f64::INFINITY,
            diagnostics,
        });
    }

    let ex = richardson(steps, &values, 2);
    Ok(EntropyResult {
        value: ex.value,
        route: Route::Limit,
        error_estimate: ex.error_estimate,
        diagnostics,
    })
}

/// `S(ψ|φ) = −Σ_ij ψ_j |⟨f_i|g_j⟩|² log(φ_i/ψ_j)`.
pub fn relative_entropy_araki(psi: &DensityMatrix, phi: &DensityMatrix) -> Result<EntropyResult> {
    same_dim(psi, phi)?;
    phi.require_faithful()?;
    let delta = relative_modular(phi, psi)?;
    let vector = standard_vector(psi);
    let value = -delta
        .spectral_measure(&vector)
        .into_iter()
        .map(|(lambda, weight)| weight * lambda.ln())
        .sum::<f64>();
    Ok(EntropyResult::exact(value, Route::Araki))
}

/// `F(s) = Tr(ρ_ϑ^s log ρ_ϑ ρ_φ^{1−s} − ρ_ϑ^s log ρ_φ ρ_φ^{1−s})`.
pub fn interpolated_integrand(theta: &DensityMatrix, phi: &DensityMatrix, s: f64) -> Result<f64> {
    same_dim(theta, phi)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("interpolation parameter {s} outside (0, 1)")));
    }
    theta.require_faithful()?;
    phi.require_faithful()?;
    let left = theta.power(s)?;
    let right = phi.power(1.0 - s)?;
    let logs = theta.log_on_support() - phi.log_on_support();
    Ok((left * logs * right).trace().re)
}

/// `lim_{s↗1} F(s)` from `s_k = 1 − 2^{−k}`, `k = 3..=12`.
pub fn relative_entropy_interpolated(theta: &DensityMatrix, phi: &DensityMatrix) -> Result<EntropyResult> {
    let steps: Vec<f64> = INTERPOLATION_EXPONENTS.map(|k| 2f64.powi(-k)).collect();
    let values = steps
        .iter()
        .map(|&h| interpolated_integrand(theta, phi, 1.0 - h))
        .collect::<Result<Vec<f64>>>()?;
    let ex = richardson(&steps, &values, 1);
    Ok(EntropyResult {
        value: ex.value,
        route: Route::Interpolated,
        error_estimate: ex.error_estimate,
        diagnostics: steps.iter().map(|h| 1.0 - h).zip(values).collect(),
    })
}

/// Relative entropy `S(ψ|φ)` along one route.
pub fn relative_entropy(route: Route, psi: &DensityMatrix, phi: &DensityMatrix) -> Result<EntropyResult> {
    match route {
        Route::Divergence => relative_entropy_divergence(psi, phi),
        Route::Limit => relative_entropy_limit(psi, phi, &Schedule::default()),
        Route::Araki => relative_entropy_araki(psi, phi),
        Route::Interpolated => relative_entropy_interpolated(psi, phi),
    }
}

/// Results of several routes and their largest pairwise gap.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteComparison {
    pub results: Vec<EntropyResult>,
    pub max_discrepancy: f64,
}

pub fn max_pairwise_discrepancy(values: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let d = if a.is_infinite() && b.is_infinite() && a.signum() == b.signum() {
                0.0
            } else {
                (a - b).abs()
            };
            worst = worst.max(d);
        }
    }
    worst
}

/// Runs every requested route on `S(ψ|φ)`.
pub fn compare_routes(routes: &[Route], psi: &DensityMatrix, phi: &DensityMatrix) -> Result<RouteComparison> {
    let results = routes
        .iter()
        .map(|&r| relative_entropy(r, psi, phi))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = results.iter().map(|r| r.value).collect();
    Ok(RouteComparison {
        max_discrepancy: max_pairwise_discrepancy(&values),
        results,
    })
}

/// `−i d/dt Tr(ρ ρ^{it})` at `t = 0` by a symmetric difference of step
/// `h`; `ρ^{it}` acts as the identity phase on the support only.
pub fn dirac_cocycle_derivative(rho: &DensityMatrix, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let sd = rho.spectrum();
    let thr = sd.support_threshold();
    let power = |t: f64| {
        sd.map_complex(|l| {
            if l > thr {
                Complex64::from_polar(1.0, t * l.ln())
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let diff = rho.expect(&power(h)) - rho.expect(&power(-h));
    Ok((diff * Complex64::new(0.0, -0.5 / h)).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // 0.7 log 1.4 + 0.3 log 0.6, mpmath
    const QUBIT_KL: f64 = 0.082282878505051782;

    fn qubit() -> (DensityMatrix, DensityMatrix) {
        (
            DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap(),
            DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap(),
        )
    }

    #[test]
    fn h_functional_examples() {
        let pure = DensityMatrix::from_diagonal(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(h_functional_quantum(&pure), 0.0);
        let mixed = DensityMatrix::maximally_mixed(5);
        assert!((h_functional_quantum(&mixed) + 5f64.ln()).abs() < 1e-14);
        let (rho, _) = qubit();
        assert!((h_functional_quantum(&rho) + 0.610864302054893).abs() < 1e-14);
    }

    #[test]
    fn divergence_examples() {
        let (a, b) = qubit();
        assert!(relative_entropy_divergence(&a, &a).unwrap().value.abs() < 1e-15);
        assert!((relative_entropy_divergence(&a, &b).unwrap().value - QUBIT_KL).abs() < 1e-14);
        let up = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let down = DensityMatrix::from_diagonal(&[0.0, 1.0]).unwrap();
        assert!(relative_entropy_divergence(&up, &down).unwrap().is_infinite());
        // reference with larger support is fine
        let v = relative_entropy_divergence(&up, &b).unwrap();
        assert!((v.value - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn limit_examples() {
        let (a, b) = qubit();
        let same = relative_entropy_limit(&a, &a, &Schedule::default()).unwrap();
        assert!(same.value.abs() < 1e-12);
        assert!(same.error_estimate <= 1e-12);
        let r = relative_entropy_limit(&a, &b, &Schedule::default()).unwrap();
        assert!((r.value - QUBIT_KL).abs() < 1e-8);
        assert_eq!(r.diagnostics.len(), 9);
    }

    #[test]
    fn limit_quotients_converge_monotonically() {
        let (a, b) = qubit();
        let r = relative_entropy_limit(&a, &b, &Schedule::default()).unwrap();
        let errs: Vec<f64> = r.diagnostics.iter().map(|(_, v)| (v - QUBIT_KL).abs()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn limit_rejects_non_faithful() {
        let (a, _) = qubit();
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            relative_entropy_limit(&a, &pure, &Schedule::default()),
            Err(Error::NotFaithful { .. })
        ));
    }

    #[test]
    fn schedule_validation() {
        assert!(Schedule::new(vec![]).is_err());
        assert!(Schedule::new(vec![0.1, 0.2]).is_err());
        assert!(Schedule::new(vec![0.1, -0.05]).is_err());
        assert_eq!(Schedule::default().points()[0], 1e-2);
    }

    #[test]
    fn divergence_detection() {
        assert!(diverges(&[10.0, 1e3, 1e5, 1e7]));
        assert!(!diverges(&[1e3, 1e5, 1e7]));
        assert!(!diverges(&[10.0, 1e3, 1e7, 1e5]));
        assert!(!diverges(&[1.0, 2.0, 3.0, 4.0]));
        assert!(diverges(&[1.0, f64::NAN]));
    }

    #[test]
    fn near_singular_reference_stays_finite() {
        let theta = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let psi = DensityMatrix::from_diagonal(&[1.0 - 1e-11, 1e-11]).unwrap();
        let sched = Schedule::new(vec![1e-6, 1e-7, 1e-8, 1e-9]).unwrap();
        let r = relative_entropy_limit(&theta, &psi, &sched).unwrap();
        assert!(r.value.is_finite());
        let div = relative_entropy_divergence(&theta, &psi).unwrap().value;
        assert!((r.value - div).abs() < 1e-6);
    }

    #[test]
    fn araki_examples() {
        let (a, b) = qubit();
        assert!(relative_entropy_araki(&a, &a).unwrap().value.abs() < 1e-15);
        assert!((relative_entropy_araki(&a, &b).unwrap().value - QUBIT_KL).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let p = sampling::random_density(&mut rng, 5);
        let q = sampling::random_density(&mut rng, 5);
        let ar = relative_entropy_araki(&p, &q).unwrap().value;
        let dv = relative_entropy_divergence(&p, &q).unwrap().value;
        assert!((ar - dv).abs() < 1e-10);
    }

    #[test]
    fn interpolated_examples() {
        let (a, b) = qubit();
        assert!(interpolated_integrand(&a, &a, 0.3).unwrap().abs() < 1e-15);
        // √0.35 log 1.4 + √0.15 log 0.6, mpmath
        let half = interpolated_integrand(&a, &b, 0.5).unwrap();
        assert!((half - 0.001217746298736996).abs() < 1e-14);
        let lim = relative_entropy_interpolated(&a, &b).unwrap();
        assert!((lim.value - QUBIT_KL).abs() < 1e-9);
        for s in [0.0, 1.0, -0.2, 1.5] {
            assert!(matches!(interpolated_integrand(&a, &b, s), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn routes_agree_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in [2, 3, 4] {
            let p = sampling::random_density(&mut rng, n);
            let q = sampling::random_density(&mut rng, n);
            let cmp = compare_routes(&Route::ALL, &p, &q).unwrap();
            assert!(cmp.max_discrepancy < 1e-7, "n = {n}: {:e}", cmp.max_discrepancy);
        }
    }

    #[test]
    fn dirac_form_is_the_h_functional() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rho = sampling::random_density(&mut rng, 4);
        let d = dirac_cocycle_derivative(&rho, 1e-4).unwrap();
        assert!((d - h_functional_quantum(&rho)).abs() < 1e-7);
        let pure = DensityMatrix::from_diagonal(&[0.0, 1.0]).unwrap();
        assert!(dirac_cocycle_derivative(&pure, 1e-4).unwrap().abs() < 1e-15);
    }

    #[test]
    fn discrepancy_of_matching_infinities_is_zero() {
        assert_eq!(max_pairwise_discrepancy(&[f64::INFINITY, f64::INFINITY]), 0.0);
        assert!(max_pairwise_discrepancy(&[1.0, f64::INFINITY]).is_infinite());
        assert_eq!(max_pairwise_discrepancy(&[1.0, 1.5, 0.75]), 0.75);
    }
}
