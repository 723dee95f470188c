//! A model of the crossed product of a finite-dimensional tracial algebra by
//! its modular flow.
//!
//! Elements are separable, `a ⊗ g(e^t)`, and the trace is `τ_ω ⊗ e^{−t} dt`.
//! Every element is stored through its joint spectrum: components
//! `(w, α, d)` meaning a spectral projection of `τ_ω`-weight `w` tensored
//! with `α · g(d e^t)`. For increasing `g` the tail trace is then exact:
//!
//! ```text
//! τ(χ_(ε,∞)(α g(d e^t))) = ∫_{d e^t > g⁻¹(ε/α)} e^{−t} dt = d / g⁻¹(ε/α)
//! ```

use crate::entropy;
use crate::error::{Error, Result};
use crate::spectral::{self, DensityMatrix, HermitianMatrix};

use super::norm::COMMUTING_TOL;
use super::young;

/// Tolerance on `τ_ω(a) = 1` for states.
pub const STATE_NORMALIZATION_TOL: f64 = 1e-8;
/// Relative width at which the golden-section refinement stops.
const REFINE_TOL: f64 = 1e-9;

/// Trace on the base algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaseTrace {
    /// `Tr / n`, so the trace is itself a state.
    #[default]
    Normalized,
    Counting,
}

impl BaseTrace {
    /// Weight of a rank-one projection in dimension `n`.
    pub fn unit(&self, n: usize) -> f64 {
        match self {
            BaseTrace::Normalized => 1.0 / n as f64,
            BaseTrace::Counting => 1.0,
        }
    }

    pub fn apply(&self, a: &HermitianMatrix) -> f64 {
        a.trace() * self.unit(a.dim())
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BaseTrace::Normalized => "normalized",
            BaseTrace::Counting => "counting",
        }
    }
}

/// Which `ζ` multiplies a sandwiched profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zeta {
    One,
    Log,
}

impl Zeta {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Zeta::One => young::zeta_1(x),
            Zeta::Log => young::zeta_log(x),
        }
    }
}

/// The scalar function `g` in `a ⊗ g(e^t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Identity,
    PhiLog,
    PhiEnt,
    /// `ζ(h)^{1/2} g ζ(h)^{1/2}`, which for commuting factors is the
    /// pointwise product `ζ · g`.
    Sandwich(Zeta, Box<Profile>),
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            Profile::Identity => x,
            Profile::PhiLog => young::phi_log(x),
            Profile::PhiEnt => young::phi_ent(x),
            Profile::Sandwich(z, g) => z.eval(x) * g.eval(x),
        }
    }

    /// Whether the tail set `{g > y}` is an up-set, so tails have the closed
    /// form above.
    pub fn is_increasing(&self) -> bool {
        match self {
            Profile::Identity | Profile::PhiLog | Profile::PhiEnt => true,
            // ζ_1 φ_ent = x and ζ_log φ_ent = φ_log
            Profile::Sandwich(_, g) => **g == Profile::PhiEnt,
        }
    }

    /// The crossing `x*` with `g(x*) = y`.
    pub fn inverse(&self, y: f64) -> f64 {
        match self {
            Profile::Identity => y,
            Profile::PhiLog => young::phi_log_inverse(y),
            Profile::PhiEnt => young::phi_ent_inverse(y),
            Profile::Sandwich(..) => self.bisect_log(y),
        }
    }

    fn bisect_log(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = (-700.0f64, 700.0f64);
        while hi - lo > 1e-15 * hi.abs().max(lo.abs()).max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid.exp()) > y {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    pub fn name(&self) -> String {
        match self {
            Profile::Identity => "identity".into(),
            Profile::PhiLog => "phi_log".into(),
            Profile::PhiEnt => "phi_ent".into(),
            Profile::Sandwich(z, g) => {
                let z = match z {
                    Zeta::One => "zeta_1",
                    Zeta::Log => "zeta_log",
                };
                format!("{z}*{}", g.name())
            }
        }
    }
}

/// Spectral piece `w · P ⊗ α g(d e^t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub coefficient: f64,
    pub dilation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelCrossedElement {
    components: Vec<Component>,
    profile: Profile,
}

impl ModelCrossedElement {
    /// `a ⊗ g(e^t)` for positive `a`.
    pub fn new(a: &HermitianMatrix, trace: BaseTrace, profile: Profile) -> Result<Self> {
        let sd = spectral::positive_spectrum(a)?;
        let w = trace.unit(a.dim());
        let components = sd
            .eigenvalues
            .iter()
            .map(|&alpha| Component {
                weight: w,
                coefficient: alpha,
                dilation: 1.0,
            })
            .collect();
        Ok(Self { components, profile })
    }

    pub fn from_components(components: Vec<Component>, profile: Profile) -> Result<Self> {
        if components
            .iter()
            .any(|c| !(c.weight >= 0.0 && c.coefficient >= 0.0 && c.dilation > 0.0))
        {
            return Err(Error::Domain("components need w, α ≥ 0 and d > 0".into()));
        }
        Ok(Self { components, profile })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// The dual action `θ_s`, which sends `g(e^t)` to `g(e^{t−s})`.
    pub fn shift(&self, s: f64) -> Self {
        let k = (-s).exp();
        Self {
            components: self
                .components
                .iter()
                .map(|c| Component {
                    dilation: c.dilation * k,
                    ..*c
                })
                .collect(),
            profile: self.profile.clone(),
        }
    }

    /// Largest `|θ_s(h)(x) − e^{−s} h(x)|` over sample points, relative to
    /// `h(x)`. Vanishes exactly for dual densities.
    pub fn scaling_defect(&self, s: f64) -> f64 {
        let shifted = self.shift(s);
        let mut worst = 0.0f64;
        for k in -20..=20 {
            let x = (k as f64).exp();
            for (c, d) in self.components.iter().zip(&shifted.components) {
                let base = c.coefficient * self.profile.eval(c.dilation * x);
                if base == 0.0 {
                    continue;
                }
                let moved = d.coefficient * self.profile.eval(d.dilation * x);
                worst = worst.max((moved - (-s).exp() * base).abs() / base);
            }
        }
        worst
    }

    /// `τ(χ_(ε,∞)(h))`.
    pub fn tail_trace(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Domain(format!("tail trace needs ε > 0, got {eps}")));
        }
        if !self.profile.is_increasing() {
            return Err(Error::Domain(format!(
                "tail trace needs an increasing profile, got {}",
                self.profile.name()
            )));
        }
        Ok(self
            .components
            .iter()
            .filter(|c| c.coefficient > 0.0 && c.weight > 0.0)
            .map(|c| c.weight * c.dilation / self.profile.inverse(eps / c.coefficient))
            .sum())
    }

    /// `tr(h) = τ(χ_(1,∞)(h))`, the `L¹` norm of a scaling-covariant
    /// positive element.
    pub fn l1_norm(&self) -> Result<f64> {
        self.tail_trace(1.0)
    }
}

/// The dual density `h = a ⊗ e^t`.
pub fn dual_density(a: &HermitianMatrix, trace: BaseTrace) -> Result<ModelCrossedElement> {
    ModelCrossedElement::new(a, trace, Profile::Identity)
}

/// Log-spaced `ε` values.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsGrid(Vec<f64>);

impl EpsGrid {
    pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi.is_finite() && hi >= lo) {
            return Err(Error::Domain(format!("ε-grid needs 0 < lo ≤ hi, got {lo}:{hi}")));
        }
        if n == 0 || (n == 1 && lo != hi) {
            return Err(Error::Domain(format!("ε-grid needs at least two points, got {n}")));
        }
        if n == 1 {
            return Ok(Self(vec![lo]));
        }
        let (a, b) = (lo.ln(), hi.ln());
        let step = (b - a) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|k| (a + step * k as f64).exp()).collect();
        points[0] = lo;
        points[n - 1] = hi;
        Ok(Self(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }
}

impl Default for EpsGrid {
    fn default() -> Self {
        Self::log_spaced(1e-8, 1e2, 161).expect("default grid is valid")
    }
}

/// One row of an `ε`-sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub eps: f64,
    /// `ε τ(χ_(ε,∞)(·)) + log ε ‖·‖₁` evaluated in the crossed product.
    pub bracket: f64,
    /// The same bracket computed in the base algebra.
    pub closed_form: f64,
}

/// Grid minimum of `f(ε)` refined by golden section in `log ε` between the
/// neighbours of the best grid point.
fn grid_infimum(grid: &[f64], values: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let (best, &fmin) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty grid");
    if grid.len() < 2 {
        return fmin;
    }
    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let (_, neg) = young::golden_max(|u| -f(u.exp()), lo, hi, REFINE_TOL);
    fmin.min(-neg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularEntropy {
    /// Infimum of the crossed-product bracket.
    pub value: f64,
    /// `inf_ε τ_ω(a log(a + ε))`.
    pub closed_form: f64,
    /// `τ_ω(a log a)`.
    pub limit: f64,
    pub sweep: Vec<SweepPoint>,
}

impl RegularEntropy {
    pub fn max_discrepancy(&self) -> f64 {
        entropy::max_pairwise_discrepancy(&[self.value, self.closed_form, self.limit])
    }
}

fn spectral_sum(eigs: &[f64], w: f64, f: impl Fn(f64) -> f64) -> f64 {
    eigs.iter().filter(|&&a| a > 0.0).map(|&a| w * f(a)).sum()
}

/// The three expressions that agree for the regularized entropy bracket at
/// `ε`: the crossed-product bracket, its closed form through `φ_log⁻¹`, and
/// `τ_ω(a log(a + ε))`.
pub fn remark_identity_terms(a: &HermitianMatrix, trace: BaseTrace, eps: f64) -> Result<[f64; 3]> {
    let brackets = RegularBrackets::new(a, trace)?;
    Ok([
        brackets.crossed(eps)?,
        brackets.via_inverse(eps),
        brackets.closed_form(eps),
    ])
}

struct RegularBrackets {
    eigs: Vec<f64>,
    w: f64,
    log_part: ModelCrossedElement,
    one_part: ModelCrossedElement,
}

impl RegularBrackets {
    fn new(a: &HermitianMatrix, trace: BaseTrace) -> Result<Self> {
        let sd = spectral::positive_spectrum(a)?;
        // g = a ⊗ φ_ent(e^t); the sandwiches by ζ_log(h) and ζ_1(h)
        let log_part = ModelCrossedElement::new(
            a,
            trace,
            Profile::Sandwich(Zeta::Log, Box::new(Profile::PhiEnt)),
        )?;
        let one_part = ModelCrossedElement::new(
            a,
            trace,
            Profile::Sandwich(Zeta::One, Box::new(Profile::PhiEnt)),
        )?;
        Ok(Self {
            eigs: sd.eigenvalues,
            w: trace.unit(a.dim()),
            log_part,
            one_part,
        })
    }

    fn mass(&self) -> f64 {
        spectral_sum(&self.eigs, self.w, |a| a)
    }

    fn crossed(&self, eps: f64) -> Result<f64> {
        Ok(eps * self.log_part.tail_trace(eps)? + eps.ln() * self.one_part.l1_norm()?)
    }

    fn via_inverse(&self, eps: f64) -> f64 {
        spectral_sum(&self.eigs, self.w, |a| a * (a / eps).ln_1p()) + eps.ln() * self.mass()
    }

    fn closed_form(&self, eps: f64) -> f64 {
        spectral_sum(&self.eigs, self.w, |a| a * (a + eps).ln())
    }

    fn limit(&self) -> f64 {
        spectral_sum(&self.eigs, self.w, |a| a * a.ln())
    }
}

/// The regularized entropy `S̃(ϑ)` of the state with density `a` against
/// `τ_ω`, with dual density `h = a ⊗ e^t` and `g = a ⊗ φ_ent(e^t)`.
pub fn regular_entropy(a: &HermitianMatrix, trace: BaseTrace, grid: &EpsGrid) -> Result<RegularEntropy> {
    let mass = trace.apply(a);
    if (mass - 1.0).abs() > STATE_NORMALIZATION_TOL {
        return Err(Error::Validation(format!(
            "density must have τ_ω(a) = 1, got {mass}"
        )));
    }
    let brackets = RegularBrackets::new(a, trace)?;
    let sweep = grid
        .points()
        .iter()
        .map(|&eps| {
            Ok(SweepPoint {
                eps,
                bracket: brackets.crossed(eps)?,
                closed_form: brackets.closed_form(eps),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let eps: Vec<f64> = sweep.iter().map(|p| p.eps).collect();
    let crossed: Vec<f64> = sweep.iter().map(|p| p.bracket).collect();
    let closed: Vec<f64> = sweep.iter().map(|p| p.closed_form).collect();
    let value = grid_infimum(&eps, &crossed, |e| brackets.crossed(e).unwrap_or(f64::INFINITY));
    let closed_form = grid_infimum(&eps, &closed, |e| brackets.closed_form(e));
    Ok(RegularEntropy {
        value,
        closed_form,
        limit: brackets.limit(),
        sweep,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutingEntropy {
    /// `φ(f log f)` with `f = ρ_ϑ ρ_φ⁻¹`.
    pub value: f64,
    /// Infimum of the crossed-product bracket.
    pub infimum: f64,
    /// `‖f − f*‖_F`, zero for a genuinely commuting pair.
    pub hermitian_defect: f64,
    pub sweep: Vec<SweepPoint>,
}

/// Relative entropy of commuting faithful states through the density
/// `f = ρ_ϑ ρ_φ⁻¹` and the crossed-product bracket with `h_φ = ρ_φ ⊗ e^t`
/// under the counting trace.
pub fn commuting_relative_entropy(
    theta: &DensityMatrix,
    phi: &DensityMatrix,
    grid: &EpsGrid,
) -> Result<CommutingEntropy> {
    if theta.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            left: theta.dim(),
            right: phi.dim(),
        });
    }
    theta.require_faithful()?;
    phi.require_faithful()?;
    let c = spectral::commutator_norm(theta.as_matrix(), phi.as_matrix());
    if c > COMMUTING_TOL {
        return Err(Error::Domain(format!(
            "states do not commute, ‖[ρ_ϑ, ρ_φ]‖ = {c:e}"
        )));
    }
    let f = theta.as_matrix() * phi.power(-1.0)?;
    let hermitian_defect = spectral::frobenius(&(&f - f.adjoint()));

    // joint eigenbasis from a generic combination
    let golden = num_complex::Complex64::new(0.618_033_988_749_894_9, 0.0);
    let mix = HermitianMatrix::hermitian_part(&(phi.as_matrix() + theta.as_matrix() * golden));
    let v = mix.eigh().eigenvectors;
    let diag = |m: &spectral::CMatrix| -> Vec<f64> {
        let d = v.adjoint() * m * &v;
        (0..d.nrows()).map(|i| d[(i, i)].re).collect()
    };
    let phis = diag(phi.as_matrix());
    let thetas = diag(theta.as_matrix());
    let fs: Vec<f64> = thetas.iter().zip(&phis).map(|(t, p)| t / p).collect();

    let value: f64 = phis.iter().zip(&fs).map(|(p, f)| p * f * f.ln()).sum();
    let parts = |profile: Profile| {
        ModelCrossedElement::from_components(
            phis.iter()
                .zip(&fs)
                .map(|(&p, &f)| Component {
                    weight: 1.0,
                    coefficient: f,
                    dilation: p,
                })
                .collect(),
            profile,
        )
    };
    // φ_log(h_φ) f and h_φ f
    let log_part = parts(Profile::PhiLog)?;
    let one_part = parts(Profile::Identity)?;
    let norm = one_part.l1_norm()?;
    let bracket = |eps: f64| -> Result<f64> { Ok(eps * log_part.tail_trace(eps)? + eps.ln() * norm) };
    let closed = |eps: f64| -> f64 { phis.iter().zip(&fs).map(|(p, f)| p * f * (f + eps).ln()).sum() };
    let sweep = grid
        .points()
        .iter()
        .map(|&eps| {
            Ok(SweepPoint {
                eps,
                bracket: bracket(eps)?,
                closed_form: closed(eps),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let eps: Vec<f64> = sweep.iter().map(|p| p.eps).collect();
    let values: Vec<f64> = sweep.iter().map(|p| p.bracket).collect();
    let infimum = grid_infimum(&eps, &values, |e| bracket(e).unwrap_or(f64::INFINITY));
    Ok(CommutingEntropy {
        value,
        infimum,
        hermitian_defect,
        sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::CocycleDerivative;
    use crate::sampling;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `∫ χ(α g(d e^t) > ε) e^{−t} dt` by recursive cell splitting on
    /// `[−60, 60]`, using only forward evaluations of the profile.
    fn quadrature_tail(profile: &Profile, c: &Component, eps: f64) -> f64 {
        fn cell(profile: &Profile, c: &Component, eps: f64, a: f64, b: f64, depth: u32) -> f64 {
            let above = |t: f64| c.coefficient * profile.eval(c.dilation * t.exp()) > eps;
            let exact = (-a).exp() - (-b).exp();
            match (above(a), above(b)) {
                (true, true) => exact,
                (false, false) => 0.0,
                _ if depth == 0 => 0.5 * exact,
                _ => {
                    let m = 0.5 * (a + b);
                    cell(profile, c, eps, a, m, depth - 1) + cell(profile, c, eps, m, b, depth - 1)
                }
            }
        }
        let steps = 240;
        (0..steps)
            .map(|k| {
                let a = -60.0 + k as f64 * 0.5;
                cell(profile, c, eps, a, a + 0.5, 60)
            })
            .sum::<f64>()
            * c.weight
    }

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(v).unwrap()
    }

    #[test]
    fn dual_density_normalization() {
        let h = dual_density(&HermitianMatrix::identity(3), BaseTrace::Normalized).unwrap();
        assert!((h.l1_norm().unwrap() - 1.0).abs() < 1e-15);

        let e = [1.0, (-1.0f64).exp()];
        let tau = 0.5 * (e[0] + e[1]);
        let a = diag(&[e[0] / tau, e[1] / tau]);
        let h = dual_density(&a, BaseTrace::Normalized).unwrap();
        assert!((h.l1_norm().unwrap() - 1.0).abs() < 1e-14);
        assert!(h.scaling_defect(0.7) <= 1e-15);
    }

    #[test]
    fn tail_trace_examples() {
        let h = dual_density(&diag(&[0.6, 0.4]), BaseTrace::Counting).unwrap();
        assert!((h.tail_trace(0.5).unwrap() - 2.0).abs() < 1e-15);
        let zero = dual_density(&diag(&[0.0, 0.0]), BaseTrace::Counting).unwrap();
        assert_eq!(zero.tail_trace(0.3).unwrap(), 0.0);
        assert!(h.tail_trace(0.0).is_err());
        assert!(h.tail_trace(-1.0).is_err());
    }

    #[test]
    fn shift_scales_tails() {
        let h = dual_density(&diag(&[0.9, 0.3, 1.8]), BaseTrace::Normalized).unwrap();
        for s in [-1.5, 0.3, 2.0] {
            for eps in [1e-3, 0.2, 5.0] {
                let moved = h.shift(s).tail_trace(eps).unwrap();
                let expected = (-s).exp() * h.tail_trace(eps).unwrap();
                assert!((moved - expected).abs() <= 1e-12 * expected);
                let scaled = h.tail_trace(s.exp() * eps).unwrap();
                assert!((scaled - (-s).exp() * h.tail_trace(eps).unwrap()).abs() <= 1e-10 * scaled);
            }
        }
    }

    #[test]
    fn phi_log_tail_matches_quadrature() {
        for alpha in [0.2, 1.0, 3.7] {
            let c = Component {
                weight: 1.0,
                coefficient: alpha,
                dilation: 1.0,
            };
            let h = ModelCrossedElement::from_components(vec![c], Profile::PhiLog).unwrap();
            for eps in [1e-6, 1e-2, 0.5, 4.0] {
                let closed = alpha * (alpha / eps).ln_1p();
                let tail = eps * h.tail_trace(eps).unwrap();
                assert!((tail - closed).abs() <= 1e-12 * closed);
                let quad = eps * quadrature_tail(&Profile::PhiLog, &c, eps);
                assert!((quad - closed).abs() <= 1e-9 * closed.max(1.0));
            }
        }
    }

    #[test]
    fn sandwiches_reduce_to_products() {
        let log = Profile::Sandwich(Zeta::Log, Box::new(Profile::PhiEnt));
        let one = Profile::Sandwich(Zeta::One, Box::new(Profile::PhiEnt));
        for x in [1e-9, 1e-3, 0.5, 0.58, 1.0, 30.0, 1e6] {
            assert!((log.eval(x) - young::phi_log(x)).abs() <= 1e-14 * young::phi_log(x));
            assert!((one.eval(x) - x).abs() <= 1e-14 * x);
            assert!((log.inverse(log.eval(x)) - x).abs() <= 1e-12 * x);
        }
        let bare = Profile::Sandwich(Zeta::Log, Box::new(Profile::Identity));
        assert!(!bare.is_increasing());
        let h = ModelCrossedElement::new(&HermitianMatrix::identity(2), BaseTrace::Counting, bare).unwrap();
        assert!(h.tail_trace(1.0).is_err());
    }

    #[test]
    fn tracial_state_has_zero_entropy() {
        let r = regular_entropy(&HermitianMatrix::identity(3), BaseTrace::Normalized, &EpsGrid::default())
            .unwrap();
        assert!(r.value.abs() <= 1e-5);
        for p in &r.sweep {
            assert!((p.bracket - p.eps.ln_1p()).abs() <= 1e-9);
        }
    }

    #[test]
    fn diagonal_regular_entropy() {
        let a = diag(&[1.2, 0.8]);
        let r = regular_entropy(&a, BaseTrace::Normalized, &EpsGrid::default()).unwrap();
        // mpmath: ½(1.2 log 1.2 + 0.8 log 0.8)
        let expected = 0.020135513550688766;
        assert!((r.limit - expected).abs() < 1e-15);
        assert!((r.value - expected).abs() < 1e-6);
        assert!((r.closed_form - expected).abs() < 1e-6);
        assert!(r.max_discrepancy() < 1e-6);
    }

    #[test]
    fn unnormalized_density_is_rejected() {
        let a = diag(&[1.2, 0.8]);
        assert!(matches!(
            regular_entropy(&a, BaseTrace::Counting, &EpsGrid::default()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn three_way_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in 0..20 {
            let n = 2 + k % 4;
            let rho = sampling::random_density(&mut rng, n);
            let a = rho.matrix().scale(n as f64);
            for eps in [1e-8, 1e-4, 0.3, 20.0] {
                let [x, y, z] = remark_identity_terms(&a, BaseTrace::Normalized, eps).unwrap();
                assert!((x - y).abs() <= 1e-8 && (y - z).abs() <= 1e-8, "{x} {y} {z}");
            }
        }
    }

    #[test]
    fn regular_entropy_is_relative_entropy_to_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..6 {
            let p = sampling::random_probabilities(&mut rng, n, 1e-3);
            let a: Vec<f64> = p.iter().map(|x| x * n as f64).collect();
            let r = regular_entropy(&diag(&a), BaseTrace::Normalized, &EpsGrid::default()).unwrap();
            let state = DensityMatrix::from_diagonal(&p).unwrap();
            let omega = DensityMatrix::maximally_mixed(n);
            let s = entropy::relative_entropy_divergence(&state, &omega).unwrap().value;
            assert!((r.value - s).abs() < 1e-6);
        }
    }

    #[test]
    fn grid_construction() {
        let g = EpsGrid::default();
        assert_eq!(g.points().len(), 161);
        assert_eq!(g.points()[0], 1e-8);
        assert_eq!(g.points()[160], 1e2);
        assert!(g.points().windows(2).all(|w| w[0] < w[1]));
        assert!(EpsGrid::log_spaced(0.0, 1.0, 5).is_err());
        assert!(EpsGrid::log_spaced(1.0, 0.1, 5).is_err());
    }

    #[test]
    fn commuting_examples() {
        let grid = EpsGrid::default();
        let a = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let same = commuting_relative_entropy(&a, &a, &grid).unwrap();
        assert!(same.value.abs() < 1e-15);
        let r = commuting_relative_entropy(&a, &b, &grid).unwrap();
        assert!((r.value - 0.082282878505051782).abs() < 1e-12);
        assert!((r.infimum - r.value).abs() < 1e-6);
        let r = commuting_relative_entropy(&b, &a, &grid).unwrap();
        assert!((r.value - 0.087176693572388).abs() < 1e-12);
        assert!((r.infimum - r.value).abs() < 1e-6);
    }

    #[test]
    fn commuting_pair_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..6 {
            let (theta, phi) = sampling::random_commuting_pair(&mut rng, n);
            let r = commuting_relative_entropy(&theta, &phi, &EpsGrid::default()).unwrap();
            assert!(r.hermitian_defect <= 1e-10);
            let s = entropy::relative_entropy_divergence(&theta, &phi).unwrap().value;
            assert!((r.value - s).abs() < 1e-6 && (r.infimum - s).abs() < 1e-6);

            let u = CocycleDerivative::new(&theta, &phi).unwrap();
            let (t, s) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            assert!(spectral::commutator_norm(&u.at(t), &u.at(s)) <= 1e-10);
        }
    }

    #[test]
    fn noncommuting_pair_is_rejected() {
        let a = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::new(
            HermitianMatrix::from_parts(&[vec![0.5, 0.2], vec![0.2, 0.5]], None).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            commuting_relative_entropy(&a, &b, &EpsGrid::default()),
            Err(Error::Domain(_))
        ));
    }
}
