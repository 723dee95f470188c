//! Random matrices and states for self-tests and property checks.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{StandardNormal, Uniform};

use crate::spectral::{CMatrix, DensityMatrix, HermitianMatrix};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Hermitian part of a Ginibre matrix.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let g = ginibre(rng, n);
    HermitianMatrix::new((&g + g.adjoint()).scale(0.5)).expect("Hermitian by construction")
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = ginibre(rng, n).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Faithful density `G G* / Tr(G G*)` mixed with 1% of the tracial state so
/// that the smallest eigenvalue stays away from the faithfulness threshold.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let g = ginibre(rng, n);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    let m = w.scale(0.99 / tr) + CMatrix::identity(n, n).scale(0.01 / n as f64);
    DensityMatrix::new(HermitianMatrix::new((&m + m.adjoint()).scale(0.5)).expect("Hermitian"))
        .expect("valid density")
}

/// Probability vector with entries bounded below by `floor / n`.
pub fn random_probabilities<R: Rng + ?Sized>(rng: &mut R, n: usize, floor: f64) -> Vec<f64> {
    let u = Uniform::new(0.0, 1.0).expect("valid range");
    let raw: Vec<f64> = (0..n).map(|_| rng.sample(u) + floor).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

pub fn random_diagonal_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    DensityMatrix::from_diagonal(&random_probabilities(rng, n, 0.05)).expect("valid density")
}

/// `U diag(d) U*`.
pub fn conjugate_diagonal(u: &CMatrix, d: &[f64]) -> HermitianMatrix {
    let diag = CMatrix::from_diagonal(&DVector::from_iterator(
        d.len(),
        d.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let m = u * diag * u.adjoint();
    HermitianMatrix::new((&m + m.adjoint()).scale(0.5)).expect("Hermitian by construction")
}

/// Two faithful states diagonal in a common random basis.
pub fn random_commuting_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (DensityMatrix, DensityMatrix) {
    let u = random_unitary(rng, n);
    let p = random_probabilities(rng, n, 0.05);
    let q = random_probabilities(rng, n, 0.05);
    (
        DensityMatrix::new(conjugate_diagonal(&u, &p)).expect("valid density"),
        DensityMatrix::new(conjugate_diagonal(&u, &q)).expect("valid density"),
    )
}
