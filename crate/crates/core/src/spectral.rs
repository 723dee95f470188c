//! Dense Hermitian linear algebra.
//!
//! Everything downstream is a function of eigenvalues: matrix logarithms,
//! imaginary and complex powers, indicator projections and the Orlicz
//! functions all go through [`SpectralDecomposition::map`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::orlicz::young;

pub type CMatrix = DMatrix<Complex64>;

/// Absolute tolerance for the Hermitian check on input entries.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative threshold below which an eigenvalue counts as zero.
pub const SUPPORT_REL_TOL: f64 = 1e-12;
/// Distance from an indicator threshold at which a tie is broken upward.
pub const CHI_TIE_TOL: f64 = 1e-12;

/// A validated complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Empty);
        }
        let n = m.nrows();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (m[(i, j)] - m[(j, i)].conj()).norm();
                if !d.is_finite() {
                    return Err(Error::Validation("matrix has non-finite entries".into()));
                }
                defect = defect.max(d);
            }
        }
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        // Remove the residual anti-Hermitian part so that downstream solvers
        // see an exactly Hermitian input.
        let sym = (&m + m.adjoint()).scale(0.5);
        Ok(Self(sym))
    }

    /// Hermitian part of `m`, without validation. Used for results of
    /// products of commuting Hermitian matrices.
    pub(crate) fn hermitian_part(m: &CMatrix) -> Self {
        Self((m + m.adjoint()).scale(0.5))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Empty);
        }
        let n = diag.len();
        Self::new(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Build from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        for row in re {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        if let Some(im) = im {
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(Error::Validation(
                    "imaginary part has a different shape than the real part".into(),
                ));
            }
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| {
            let imv = im.map_or(0.0, |im| im[i][j]);
            Complex64::new(re[i][j], imv)
        }))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale(c))
    }

    pub fn eigh(&self) -> SpectralDecomposition {
        eigh(self)
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues at or below this value are treated as exact zeros.
    pub fn support_threshold(&self) -> f64 {
        SUPPORT_REL_TOL * self.max_eigenvalue().abs()
    }

    /// `V f(Λ) V*` for a real-valued `f`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.map_complex(|x| Complex64::new(f(x), 0.0))
    }

    /// `V f(Λ) V*` for a complex-valued `f`.
    pub fn map_complex(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let fk = f(lam);
            for i in 0..v.nrows() {
                scaled[(i, k)] *= fk;
            }
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|x| x)
    }

    /// Index of the first eigenvalue at or below the support threshold,
    /// with its value.
    pub fn first_null(&self) -> Option<(usize, f64)> {
        let thr = self.support_threshold();
        self.eigenvalues
            .iter()
            .copied()
            .enumerate()
            .find(|&(_, l)| l <= thr)
    }
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(a: &HermitianMatrix) -> SpectralDecomposition {
    let eig = a.as_matrix().clone().symmetric_eigen();
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖AB − BA‖_F`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    frobenius(&(a * b - b * a))
}

/// Scalar functions available to the functional calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    /// Natural log; a zero eigenvalue is a domain error.
    Log,
    /// Natural log on the support, 0 on the kernel (`0 · log 0 = 0`).
    LogOnSupport,
    /// `x^r`; negative `r` at a zero eigenvalue is a domain error.
    Pow(f64),
    /// Indicator of `(ε, ∞)`.
    ChiAbove(f64),
    /// `Ψ_log(t) = t log(t + 1)`.
    YoungLog,
    /// `Ψ_ent(t) = max(t, t log(t + 1))`.
    YoungEnt,
    /// Luxemburg fundamental function of `L log(L+1)`.
    PhiLog,
    /// `φ_ent(t) = max(t, φ_log(t))`.
    PhiEnt,
    /// `ζ_1(t) = t / φ_ent(t)`.
    Zeta1,
    /// `ζ_log(t) = φ_log(t) / φ_ent(t)`.
    ZetaLog,
    /// Piecewise-linear interpolation through `(x, y)` knots sorted by `x`,
    /// constant beyond the end knots.
    Table(Vec<(f64, f64)>),
}

impl ScalarFn {
    fn eval(&self, x: f64, null: bool) -> Result<f64> {
        Ok(match self {
            ScalarFn::Log => {
                if null {
                    return Err(Error::Domain(format!(
                        "log is undefined at eigenvalue {x:e}; restrict to the support"
                    )));
                }
                x.ln()
            }
            ScalarFn::LogOnSupport => {
                if null {
                    0.0
                } else {
                    x.ln()
                }
            }
            ScalarFn::Pow(r) => {
                if null {
                    if *r < 0.0 {
                        return Err(Error::Domain(format!(
                            "negative power {r} at null eigenvalue {x:e}"
                        )));
                    }
                    if *r == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    x.powf(*r)
                }
            }
            ScalarFn::ChiAbove(eps) => chi_above(x, *eps),
            ScalarFn::YoungLog => young::psi_log(x),
            ScalarFn::YoungEnt => young::psi_ent(x),
            ScalarFn::PhiLog => zero_or(null, || young::phi_log(x)),
            ScalarFn::PhiEnt => zero_or(null, || young::phi_ent(x)),
            ScalarFn::Zeta1 => zero_or(null, || young::zeta_1(x)),
            ScalarFn::ZetaLog => zero_or(null, || young::zeta_log(x)),
            ScalarFn::Table(knots) => interpolate(knots, x)?,
        })
    }
}

fn zero_or(null: bool, f: impl FnOnce() -> f64) -> f64 {
    if null {
        0.0
    } else {
        f()
    }
}

/// `χ_(ε,∞)(x)`; an argument within [`CHI_TIE_TOL`] of `ε` counts as not
/// above the threshold.
pub fn chi_above(x: f64, eps: f64) -> f64 {
    if x > eps + CHI_TIE_TOL {
        1.0
    } else {
        0.0
    }
}

fn interpolate(knots: &[(f64, f64)], x: f64) -> Result<f64> {
    if knots.is_empty() {
        return Err(Error::Domain("empty function table".into()));
    }
    if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Domain("table knots must be strictly increasing".into()));
    }
    let (x0, y0) = knots[0];
    if x <= x0 {
        return Ok(y0);
    }
    for w in knots.windows(2) {
        let ((xa, ya), (xb, yb)) = (w[0], w[1]);
        if x <= xb {
            return Ok(ya + (yb - ya) * (x - xa) / (xb - xa));
        }
    }
    Ok(knots[knots.len() - 1].1)
}

/// Checks positive semidefiniteness and returns the spectrum with tiny
/// negative eigenvalues clamped to zero.
pub(crate) fn positive_spectrum(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let mut sd = eigh(a);
    let floor = -SUPPORT_REL_TOL * sd.max_eigenvalue().abs().max(1.0);
    if let Some(&neg) = sd.eigenvalues.iter().find(|&&l| l < floor) {
        return Err(Error::NotPositive { eigenvalue: neg });
    }
    for l in sd.eigenvalues.iter_mut() {
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(sd)
}

/// `V f(Λ) V*` for positive semidefinite `A`.
pub fn apply_scalar_function(a: &HermitianMatrix, f: &ScalarFn) -> Result<HermitianMatrix> {
    let sd = positive_spectrum(a)?;
    apply_on_spectrum(&sd, f)
}

pub fn apply_on_spectrum(sd: &SpectralDecomposition, f: &ScalarFn) -> Result<HermitianMatrix> {
    let thr = sd.support_threshold();
    let values = sd
        .eigenvalues
        .iter()
        .map(|&l| f.eval(l, l <= thr))
        .collect::<Result<Vec<f64>>>()?;
    let diag = SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: sd.eigenvectors.clone(),
    };
    Ok(HermitianMatrix::hermitian_part(&diag.reconstruct()))
}

/// Spectrum of a faithful positive matrix, or a domain error naming the
/// offending eigenvalue.
pub fn faithful_spectrum(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let sd = positive_spectrum(a)?;
    check_faithful(&sd)?;
    Ok(sd)
}

pub(crate) fn check_faithful(sd: &SpectralDecomposition) -> Result<()> {
    if let Some((index, eigenvalue)) = sd.first_null() {
        return Err(Error::NotFaithful { eigenvalue, index });
    }
    Ok(())
}

/// `A^{it} = V diag(e^{it log λ}) V*`, a unitary.
pub fn imaginary_power(a: &HermitianMatrix, t: f64) -> Result<CMatrix> {
    let sd = faithful_spectrum(a)?;
    Ok(imaginary_power_of(&sd, t))
}

pub(crate) fn imaginary_power_of(sd: &SpectralDecomposition, t: f64) -> CMatrix {
    sd.map_complex(|l| Complex64::from_polar(1.0, t * l.ln()))
}

/// `A^z = V diag(e^{z log λ}) V*`.
pub fn complex_power(a: &HermitianMatrix, z: Complex64) -> Result<CMatrix> {
    let sd = faithful_spectrum(a)?;
    Ok(complex_power_of(&sd, z))
}

pub(crate) fn complex_power_of(sd: &SpectralDecomposition, z: Complex64) -> CMatrix {
    sd.map_complex(|l| (z * l.ln()).exp())
}

/// Projection onto the span of eigenvectors with `λ > 1e-12 λ_max`.
pub fn support_projection(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let sd = positive_spectrum(a)?;
    Ok(support_projection_of(&sd))
}

pub(crate) fn support_projection_of(sd: &SpectralDecomposition) -> HermitianMatrix {
    let thr = sd.support_threshold();
    HermitianMatrix::hermitian_part(&sd.map(|l| if l > thr { 1.0 } else { 0.0 }))
}

/// A positive semidefinite, unit-trace Hermitian matrix with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
    faithful: bool,
}

impl DensityMatrix {
    pub const TRACE_TOL: f64 = 1e-10;

    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let spectrum = positive_spectrum(&matrix)?;
        let faithful = spectrum.first_null().is_none();
        Ok(Self {
            matrix,
            spectrum,
            faithful,
        })
    }

    /// Normalizes a positive semidefinite matrix to unit trace.
    pub fn normalized(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if !(trace > 0.0) || !trace.is_finite() {
            return Err(Error::TraceNotOne { trace });
        }
        Self::new(matrix.scale(1.0 / trace))
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(p)?)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::new(HermitianMatrix::identity(n).scale(1.0 / n as f64))
            .expect("maximally mixed state is valid")
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn as_matrix(&self) -> &CMatrix {
        self.matrix.as_matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    /// Domain error unless the state is faithful.
    pub fn require_faithful(&self) -> Result<()> {
        check_faithful(&self.spectrum)
    }

    /// `Tr(ρ x)`.
    pub fn expect(&self, x: &CMatrix) -> Complex64 {
        (self.as_matrix() * x).trace()
    }

    /// `log ρ` on the support, 0 on the kernel.
    pub fn log_on_support(&self) -> CMatrix {
        let thr = self.spectrum.support_threshold();
        self.spectrum.map(|l| if l > thr { l.ln() } else { 0.0 })
    }

    pub fn support_projection(&self) -> HermitianMatrix {
        support_projection_of(&self.spectrum)
    }

    pub fn imaginary_power(&self, t: f64) -> Result<CMatrix> {
        self.require_faithful()?;
        Ok(imaginary_power_of(&self.spectrum, t))
    }

    pub fn complex_power(&self, z: Complex64) -> Result<CMatrix> {
        self.require_faithful()?;
        Ok(complex_power_of(&self.spectrum, z))
    }

    pub fn power(&self, r: f64) -> Result<CMatrix> {
        Ok(apply_on_spectrum(&self.spectrum, &ScalarFn::Pow(r))?.into_matrix())
    }
}
