//! Discrete classical measures: Radon–Nikodym derivatives, the
//! H-functional, KL divergence and Gibbs states.
//!
//! Conventions: `0 log 0 = 0` and `p log(p/0) = +∞` for `p > 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for probability normalization and common-base checks.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// Finitely many labeled atoms with nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Validation("measure needs at least one atom".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                left: atoms.len(),
                right: weights.len(),
            });
        }
        if let Some((a, w)) = atoms
            .iter()
            .zip(&weights)
            .find(|(_, w)| !(**w >= 0.0) || !w.is_finite())
        {
            return Err(Error::Validation(format!("atom `{a}` has invalid weight {w}")));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = atoms.iter().find(|a| !seen.insert(a.as_str())) {
            return Err(Error::Validation(format!("duplicate atom `{dup}`")));
        }
        Ok(Self { atoms, weights })
    }

    /// Counting measure on atoms labeled `0..n`.
    pub fn counting(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), vec![1.0; n])
    }

    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        Self::new((0..weights.len()).map(|i| i.to_string()).collect(), weights.to_vec())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.atoms != other.atoms {
            return Err(Error::Validation("measures live on different atoms".into()));
        }
        if self
            .weights
            .iter()
            .zip(&other.weights)
            .any(|(a, b)| (a - b).abs() > PROBABILITY_TOL * a.abs().max(b.abs()).max(1.0))
        {
            return Err(Error::Validation("densities have different base measures".into()));
        }
        Ok(())
    }
}

/// `p = dμ/dλ`: nonnegative values on the atoms of a base measure.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDensity {
    base: DiscreteMeasure,
    values: Vec<f64>,
}

impl DiscreteDensity {
    pub fn new(base: DiscreteMeasure, values: Vec<f64>) -> Result<Self> {
        if values.len() != base.len() {
            return Err(Error::DimensionMismatch {
                left: base.len(),
                right: values.len(),
            });
        }
        if let Some((a, v)) = base
            .atoms
            .iter()
            .zip(&values)
            .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
        {
            return Err(Error::Validation(format!("atom `{a}` has invalid density {v}")));
        }
        Ok(Self { base, values })
    }

    /// Probability density, checked to integrate to one.
    pub fn probability(base: DiscreteMeasure, values: Vec<f64>) -> Result<Self> {
        let d = Self::new(base, values)?;
        d.require_probability()?;
        Ok(d)
    }

    pub fn base(&self) -> &DiscreteMeasure {
        &self.base
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Σ λ_a p_a`.
    pub fn mass(&self) -> f64 {
        self.base.weights.iter().zip(&self.values).map(|(w, p)| w * p).sum()
    }

    pub fn is_probability(&self) -> bool {
        (self.mass() - 1.0).abs() <= PROBABILITY_TOL
    }

    fn require_probability(&self) -> Result<()> {
        if !self.is_probability() {
            return Err(Error::Validation(format!(
                "density integrates to {} instead of 1",
                self.mass()
            )));
        }
        Ok(())
    }

    /// The measure `μ = p λ`.
    pub fn measure(&self) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: self.base.atoms.clone(),
            weights: self.base.weights.iter().zip(&self.values).map(|(w, p)| w * p).collect(),
        }
    }

    /// `⟨f⟩_μ = Σ λ_a p_a f_a`.
    pub fn expectation(&self, f: &[f64]) -> f64 {
        self.base
            .weights
            .iter()
            .zip(&self.values)
            .zip(f)
            .map(|((w, p), x)| w * p * x)
            .sum()
    }
}

/// `dμ/dλ` atom by atom; zero off the support of `λ`.
pub fn radon_nikodym(mu: &DiscreteMeasure, lambda: &DiscreteMeasure) -> Result<DiscreteDensity> {
    if mu.atoms != lambda.atoms {
        return Err(Error::Validation("measures live on different atoms".into()));
    }
    let mut values = Vec::with_capacity(mu.len());
    for ((atom, &m), &l) in mu.atoms.iter().zip(&mu.weights).zip(&lambda.weights) {
        if l == 0.0 {
            if m != 0.0 {
                return Err(Error::AbsoluteContinuity { atom: atom.clone() });
            }
            values.push(0.0);
        } else {
            values.push(m / l);
        }
    }
    DiscreteDensity::new(lambda.clone(), values)
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `H(p) = Σ λ_a p_a log p_a`.
pub fn h_functional(p: &DiscreteDensity) -> f64 {
    p.base.weights.iter().zip(&p.values).map(|(w, &x)| w * xlogx(x)).sum()
}

/// `Σ λ_a p_a log(p_a/q_a)` for densities on a common base; `q` need not be
/// normalized.
pub fn relative_h(p: &DiscreteDensity, q: &DiscreteDensity) -> Result<f64> {
    p.base.same_base(&q.base)?;
    let mut total = 0.0;
    for ((w, &a), &b) in p.base.weights.iter().zip(&p.values).zip(&q.values) {
        if a == 0.0 || *w == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += w * a * (a / b).ln();
    }
    Ok(total)
}

/// `S(μ|ν) = Σ λ_a p_a log(p_a/q_a)` for probability densities.
pub fn kl_divergence(mu: &DiscreteDensity, nu: &DiscreteDensity) -> Result<f64> {
    mu.require_probability()?;
    nu.require_probability()?;
    relative_h(mu, nu)
}

/// Entropy of `p` against the two uniform references on a counting base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformComparison {
    /// `H(p)`.
    pub h: f64,
    /// `S(μ|τ)` against the non-normalized counting functional, equal to `H(p)`.
    pub against_counting: f64,
    /// `S(μ|uniform)` against the normalized uniform distribution.
    pub against_uniform: f64,
    /// `log N`, so that `against_uniform = h + offset`.
    pub offset: f64,
}

/// Compares a probability density on a counting base with the uniform
/// references.
pub fn uniform_comparison(p: &DiscreteDensity) -> Result<UniformComparison> {
    p.require_probability()?;
    if p.base.weights.iter().any(|&w| w != 1.0) {
        return Err(Error::Validation("uniform comparison needs a counting base".into()));
    }
    let n = p.base.len();
    let counting = DiscreteDensity::new(p.base.clone(), vec![1.0; n])?;
    let uniform = DiscreteDensity::new(p.base.clone(), vec![1.0 / n as f64; n])?;
    Ok(UniformComparison {
        h: h_functional(p),
        against_counting: relative_h(p, &counting)?,
        against_uniform: kl_divergence(p, &uniform)?,
        offset: (n as f64).ln(),
    })
}

/// A Maxwell–Boltzmann density `dμ/dλ = Z e^{−βH} = e^K`.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsState {
    pub density: DiscreteDensity,
    /// `K_a = log Z − β H_a`.
    pub k_values: Vec<f64>,
    /// `log Z`, where `Z = 1 / Σ λ_a e^{−β H_a}`.
    pub log_z: f64,
    pub beta: f64,
}

pub fn gibbs_state(energies: &[f64], beta: f64, lambda: &DiscreteMeasure) -> Result<GibbsState> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("inverse temperature must be positive, got {beta}")));
    }
    if energies.len() != lambda.len() {
        return Err(Error::DimensionMismatch {
            left: lambda.len(),
            right: energies.len(),
        });
    }
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::Domain("energies must be finite".into()));
    }
    if lambda.total() <= 0.0 {
        return Err(Error::Validation("reference measure has zero mass".into()));
    }
    // shift by the ground energy for overflow safety
    let ground = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let partition_shifted: f64 = lambda
        .weights
        .iter()
        .zip(energies)
        .map(|(w, e)| w * (-beta * (e - ground)).exp())
        .sum();
    let log_z = -(partition_shifted.ln() - beta * ground);
    let k_values: Vec<f64> = energies.iter().map(|e| log_z - beta * e).collect();
    let values = k_values.iter().map(|k| k.exp()).collect();
    Ok(GibbsState {
        density: DiscreteDensity::new(lambda.clone(), values)?,
        k_values,
        log_z,
        beta,
    })
}

/// Both sides of the Gibbs entropy identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsIdentities {
    /// `H(p)` and `⟨K⟩_μ`.
    pub entropy: (f64, f64),
    /// `KL(μ|ν)` and `⟨K₁⟩_μ − ⟨K₂⟩_μ`, for pairs.
    pub relative: Option<(f64, f64)>,
}

impl GibbsIdentities {
    /// Largest gap between the two sides of any identity.
    pub fn defect(&self) -> f64 {
        let a = (self.entropy.0 - self.entropy.1).abs();
        let b = self.relative.map_or(0.0, |(x, y)| (x - y).abs());
        a.max(b)
    }
}

pub fn gibbs_entropy_identities(mu: &GibbsState, nu: Option<&GibbsState>) -> Result<GibbsIdentities> {
    let entropy = (h_functional(&mu.density), mu.density.expectation(&mu.k_values));
    let relative = match nu {
        None => None,
        Some(nu) => {
            mu.density.base.same_base(&nu.density.base)?;
            let kl = kl_divergence(&mu.density, &nu.density)?;
            let diff = mu.density.expectation(&mu.k_values) - mu.density.expectation(&nu.k_values);
            Some((kl, diff))
        }
    };
    Ok(GibbsIdentities { entropy, relative })
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    Ok(())
}

/// `−i d/dt ⟨e^{itK}⟩_μ` at `t = 0` by a symmetric difference of `step`.
pub fn characteristic_derivative(k: &[f64], mu: &DiscreteDensity, step: f64) -> Result<f64> {
    check_step(step)?;
    if k.len() != mu.values.len() {
        return Err(Error::DimensionMismatch {
            left: mu.values.len(),
            right: k.len(),
        });
    }
    let phase = |t: f64| -> Complex64 {
        mu.base
            .weights
            .iter()
            .zip(&mu.values)
            .zip(k)
            .map(|((w, p), x)| Complex64::from_polar(w * p, t * x))
            .sum()
    };
    let diff = phase(step) - phase(-step);
    Ok((diff * Complex64::new(0.0, -0.5 / step)).re)
}

/// `−i d/dt ⟨e^{itK₁} e^{−itK₂}⟩_μ` at `t = 0`.
pub fn characteristic_derivative_pair(
    k1: &[f64],
    k2: &[f64],
    mu: &DiscreteDensity,
    step: f64,
) -> Result<f64> {
    if k1.len() != k2.len() {
        return Err(Error::DimensionMismatch {
            left: k1.len(),
            right: k2.len(),
        });
    }
    // commutative: e^{itK₁} e^{−itK₂} = e^{it(K₁ − K₂)}
    let diff: Vec<f64> = k1.iter().zip(k2).map(|(a, b)| a - b).collect();
    characteristic_derivative(&diff, mu, step)
}

/// Error bound `10 · step² · max|K|³` for the symmetric difference.
pub fn characteristic_tolerance(k: &[f64], step: f64) -> f64 {
    let m = k.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    10.0 * step * step * m.powi(3)
}
