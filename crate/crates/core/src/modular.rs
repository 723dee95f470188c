//! Modular theory of a full matrix algebra.
//!
//! A faithful state with density `ρ` has modular flow `σ_t(x) = ρ^{it} x ρ^{-it}`
//! and standard vector `ρ^{1/2}` in Hilbert–Schmidt space. The Connes cocycle
//! of `ϑ` relative to `ψ` is `u_t = ρ_ϑ^{it} ρ_ψ^{-it}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    complex_power_of, frobenius, imaginary_power_of, CMatrix, DensityMatrix, HermitianMatrix,
    SpectralDecomposition,
};

/// Number of imaginary-part samples in [`CocycleDerivative::strip_sup_norm`].
pub const STRIP_SAMPLES: usize = 33;

/// A vector of the natural cone, stored as its Hilbert–Schmidt matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardFormVector {
    psi: CMatrix,
}

impl StandardFormVector {
    pub fn matrix(&self) -> &CMatrix {
        &self.psi
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.psi)
    }

    /// Hilbert–Schmidt inner product `Tr(Ψ* Φ)`.
    pub fn inner(&self, other: &CMatrix) -> Complex64 {
        (self.psi.adjoint() * other).trace()
    }

    /// `⟨Ψ, xΨ⟩ = Tr(Ψ* x Ψ)`.
    pub fn expectation(&self, x: &CMatrix) -> Complex64 {
        self.inner(&(x * &self.psi))
    }
}

/// `Ψ = ρ^{1/2}`.
pub fn standard_vector(rho: &DensityMatrix) -> StandardFormVector {
    let psi = rho.power(0.5).expect("positive power is always defined");
    StandardFormVector { psi }
}

/// `σ_t^φ(x) = ρ^{it} x ρ^{-it}` for an arbitrary matrix `x`.
pub fn modular_flow_matrix(rho: &DensityMatrix, t: f64, x: &CMatrix) -> Result<CMatrix> {
    let u = rho.imaginary_power(t)?;
    Ok(&u * x * u.adjoint())
}

/// Modular flow of a Hermitian observable.
pub fn modular_flow(rho: &DensityMatrix, t: f64, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    let y = modular_flow_matrix(rho, t, x.as_matrix())?;
    Ok(HermitianMatrix::hermitian_part(&y))
}

/// Generator `L(x) = i[log ρ, x]`, the derivative of `σ_t(x)` at `t = 0`.
pub fn modular_generator(rho: &DensityMatrix, x: &CMatrix) -> Result<CMatrix> {
    rho.require_faithful()?;
    let log = rho.log_on_support();
    Ok((&log * x - x * &log) * Complex64::i())
}

/// `Δ_{φ,ψ}: x ↦ ρ_φ x ρ_ψ^{-1}` on Hilbert–Schmidt space, kept as the
/// two spectra. Its eigenvectors are `|f_i⟩⟨g_j|` with eigenvalues `φ_i/ψ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeModularOperator {
    left: SpectralDecomposition,
    right: SpectralDecomposition,
}

impl RelativeModularOperator {
    pub fn new(phi: &DensityMatrix, psi: &DensityMatrix) -> Result<Self> {
        if phi.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                left: phi.dim(),
                right: psi.dim(),
            });
        }
        psi.require_faithful()?;
        Ok(Self {
            left: phi.spectrum().clone(),
            right: psi.spectrum().clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    pub fn left(&self) -> &SpectralDecomposition {
        &self.left
    }

    pub fn right(&self) -> &SpectralDecomposition {
        &self.right
    }

    /// `λ_ij = φ_i / ψ_j`, row-major in `(i, j)`.
    pub fn eigenvalue_grid(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim() * self.dim());
        for &p in &self.left.eigenvalues {
            for &q in &self.right.eigenvalues {
                out.push(p / q);
            }
        }
        out
    }

    /// Applies `g(λ_ij)` entrywise in the `(f_i, g_j)` frame.
    fn apply_fn(&self, x: &CMatrix, g: impl Fn(f64) -> Complex64) -> CMatrix {
        let f = &self.left.eigenvectors;
        let gv = &self.right.eigenvectors;
        let mut y = f.adjoint() * x * gv;
        for (i, &p) in self.left.eigenvalues.iter().enumerate() {
            for (j, &q) in self.right.eigenvalues.iter().enumerate() {
                y[(i, j)] *= g(p / q);
            }
        }
        f * y * gv.adjoint()
    }

    /// `Σ λ_ij |f_i⟩⟨f_i| x |g_j⟩⟨g_j|`.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        self.apply_fn(x, |l| Complex64::new(l, 0.0))
    }

    /// `Δ^{it} x`; needs both states faithful.
    pub fn imaginary_power_apply(&self, t: f64, x: &CMatrix) -> Result<CMatrix> {
        if let Some((index, eigenvalue)) = self.left.first_null() {
            return Err(Error::NotFaithful { eigenvalue, index });
        }
        Ok(self.apply_fn(x, |l| Complex64::from_polar(1.0, t * l.ln())))
    }

    /// Spectral measure of `Ψ`: pairs `(λ_ij, |⟨f_i|Ψ|g_j⟩|²)` realizing
    /// `d⟨Ψ, e_λ Ψ⟩`.
    pub fn spectral_measure(&self, vector: &StandardFormVector) -> Vec<(f64, f64)> {
        let y = self.left.eigenvectors.adjoint() * vector.matrix() * &self.right.eigenvectors;
        let mut out = Vec::with_capacity(self.dim() * self.dim());
        for (i, &p) in self.left.eigenvalues.iter().enumerate() {
            for (j, &q) in self.right.eigenvalues.iter().enumerate() {
                out.push((p / q, y[(i, j)].norm_sqr()));
            }
        }
        out
    }
}

/// Relative modular operator `Δ_{φ,ψ}`.
pub fn relative_modular(phi: &DensityMatrix, psi: &DensityMatrix) -> Result<RelativeModularOperator> {
    RelativeModularOperator::new(phi, psi)
}

/// The cocycle `(Dϑ:Dψ)_t = ρ_ϑ^{it} ρ_ψ^{-it}` of two faithful states.
#[derive(Debug, Clone)]
pub struct CocycleDerivative {
    source: DensityMatrix,
    reference: DensityMatrix,
}

impl CocycleDerivative {
    pub fn new(source: &DensityMatrix, reference: &DensityMatrix) -> Result<Self> {
        if source.dim() != reference.dim() {
            return Err(Error::DimensionMismatch {
                left: source.dim(),
                right: reference.dim(),
            });
        }
        source.require_faithful()?;
        reference.require_faithful()?;
        Ok(Self {
            source: source.clone(),
            reference: reference.clone(),
        })
    }

    pub fn source(&self) -> &DensityMatrix {
        &self.source
    }

    pub fn reference(&self) -> &DensityMatrix {
        &self.reference
    }

    pub fn at(&self, t: f64) -> CMatrix {
        imaginary_power_of(self.source.spectrum(), t)
            * imaginary_power_of(self.reference.spectrum(), -t)
    }

    /// `u_t − 𝟙`, assembled from `ρ^{±it} − 𝟙` so that its entries keep
    /// full relative accuracy as `t → 0`.
    pub fn minus_identity(&self, t: f64) -> CMatrix {
        let a = phase_minus_one(self.source.spectrum(), t);
        let b = phase_minus_one(self.reference.spectrum(), -t);
        &a + &b + &a * &b
    }

    /// Analytic extension `ρ_ϑ^{iz} ρ_ψ^{-iz}`.
    pub fn analytic(&self, z: Complex64) -> CMatrix {
        let iz = Complex64::i() * z;
        complex_power_of(self.source.spectrum(), iz) * complex_power_of(self.reference.spectrum(), -iz)
    }

    /// `max_{y} ‖u_{iy}‖` over [`STRIP_SAMPLES`] equispaced `y ∈ [−δ, 0]`.
    pub fn strip_sup_norm(&self, delta: f64) -> f64 {
        (0..STRIP_SAMPLES)
            .map(|k| {
                let y = -delta * k as f64 / (STRIP_SAMPLES - 1) as f64;
                operator_norm(&self.analytic(Complex64::new(0.0, y)))
            })
            .fold(0.0, f64::max)
    }

    /// `|ϑ(x) − ψ(u* x u)|` with `u = u_{−i/2}`.
    pub fn transport_defect(&self, x: &CMatrix) -> f64 {
        let u = self.analytic(Complex64::new(0.0, -0.5));
        let lhs = self.source.expect(x);
        let rhs = self.reference.expect(&(u.adjoint() * x * &u));
        (lhs - rhs).norm()
    }
}

/// `ρ^{it} − 𝟙` with `e^{iθ} − 1 = 2i sin(θ/2) e^{iθ/2}`.
fn phase_minus_one(sd: &SpectralDecomposition, t: f64) -> CMatrix {
    sd.map_complex(|l| {
        let theta = t * l.ln();
        Complex64::new(0.0, 2.0 * (0.5 * theta).sin()) * Complex64::from_polar(1.0, 0.5 * theta)
    })
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

/// `u_t = ρ_ϑ^{it} ρ_ψ^{-it}`.
pub fn cocycle(theta: &DensityMatrix, psi: &DensityMatrix, t: f64) -> Result<CMatrix> {
    Ok(CocycleDerivative::new(theta, psi)?.at(t))
}

/// `ρ_ϑ^{iz} ρ_ψ^{-iz}` for complex `z`.
pub fn cocycle_analytic(theta: &DensityMatrix, psi: &DensityMatrix, z: Complex64) -> Result<CMatrix> {
    Ok(CocycleDerivative::new(theta, psi)?.analytic(z))
}

/// KMS boundary defect `|Tr(ρ x σ_{−i}(y)) − Tr(ρ y x)|` with
/// `σ_{−i}(y) = ρ y ρ^{-1}`.
pub fn kms_defect(rho: &DensityMatrix, x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    rho.require_faithful()?;
    if x.dim() != rho.dim() || y.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: x.dim().max(y.dim()),
        });
    }
    let r = rho.as_matrix();
    let r_inv = rho.power(-1.0)?;
    let (x, y) = (x.as_matrix(), y.as_matrix());
    let shifted = r * y * r_inv;
    let lhs = (r * x * shifted).trace();
    let rhs = (r * y * x).trace();
    Ok((lhs - rhs).norm())
}
