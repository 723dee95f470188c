//! Young functions and the fundamental functions of their Orlicz spaces.

use crate::error::{Error, Result};

/// `Ψ_log(t) = t log(t + 1)`.
pub fn psi_log(t: f64) -> f64 {
    t * t.ln_1p()
}

/// `Ψ_ent(t) = max(t, t log(t + 1))`; the branches switch at `t = e − 1`.
pub fn psi_ent(t: f64) -> f64 {
    t.max(psi_log(t))
}

/// Inverse of `Ψ_log` on `[0, ∞)`.
pub fn psi_log_inverse(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y.is_infinite() {
        return f64::INFINITY;
    }
    // Bracket, then Newton steps that fall back to bisection whenever they
    // leave the bracket.
    let mut lo = 0.0;
    let mut hi = 1.0;
    while psi_log(hi) < y {
        lo = hi;
        hi *= 2.0;
    }
    let mut t = if y < 1.0 { y.sqrt() } else { 0.5 * (lo + hi) };
    if !(t > lo && t < hi) {
        t = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let f = psi_log(t) - y;
        if f == 0.0 {
            return t;
        }
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let df = t.ln_1p() + t / (1.0 + t);
        let mut next = t - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-16 * t || hi - lo <= 4.0 * f64::EPSILON * hi {
            return next;
        }
        t = next;
    }
    t
}

/// Inverse of `Ψ_ent`: `min(y, Ψ_log⁻¹(y))`.
pub fn psi_ent_inverse(y: f64) -> f64 {
    y.min(psi_log_inverse(y))
}

/// `φ_log(t) = 1 / Ψ_log⁻¹(1/t)`, the Luxemburg fundamental function of
/// `L log(L+1)`.
pub fn phi_log(t: f64) -> f64 {
    1.0 / psi_log_inverse(1.0 / t)
}

/// Closed form `φ_log⁻¹(s) = s / log(1/s + 1)`.
pub fn phi_log_inverse(s: f64) -> f64 {
    s / (1.0 / s).ln_1p()
}

/// `φ_ent(t) = max(t, φ_log(t))`.
pub fn phi_ent(t: f64) -> f64 {
    t.max(phi_log(t))
}

pub fn phi_ent_inverse(s: f64) -> f64 {
    s.min(phi_log_inverse(s))
}

/// `ζ_1(t) = t / φ_ent(t)`, bounded by 1.
pub fn zeta_1(t: f64) -> f64 {
    t / phi_ent(t)
}

/// `ζ_log(t) = φ_log(t) / φ_ent(t)`, bounded by 1.
pub fn zeta_log(t: f64) -> f64 {
    phi_log(t) / phi_ent(t)
}

/// A Young function: convex, increasing, `Ψ(0) = 0`.
#[derive(Debug, Clone)]
pub enum YoungFunction {
    PsiLog,
    PsiEnt,
    Custom { name: String, eval: fn(f64) -> f64 },
}

/// Custom functions compare by name.
impl PartialEq for YoungFunction {
    fn eq(&self, other: &Self) -> bool {
        self.name() == other.name()
    }
}

/// Bounds of the log-spaced grid used by the numerical Legendre transform.
const LEGENDRE_GRID: (f64, f64, usize) = (1e-8, 1e8, 4097);

impl YoungFunction {
    pub fn name(&self) -> &str {
        match self {
            YoungFunction::PsiLog => "psi_log",
            YoungFunction::PsiEnt => "psi_ent",
            YoungFunction::Custom { name, .. } => name,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            YoungFunction::PsiLog => psi_log(t),
            YoungFunction::PsiEnt => psi_ent(t),
            YoungFunction::Custom { eval, .. } => eval(t),
        }
    }

    /// `Ψ⁻¹(y) = sup{t ≥ 0 : Ψ(t) ≤ y}`.
    pub fn inverse(&self, y: f64) -> f64 {
        match self {
            YoungFunction::PsiLog => psi_log_inverse(y),
            YoungFunction::PsiEnt => psi_ent_inverse(y),
            YoungFunction::Custom { eval, .. } => bisect_increasing(*eval, y),
        }
    }

    /// Complementary function `Ψ*(s) = sup_{t ≥ 0} (st − Ψ(t))`, evaluated
    /// on a log-spaced grid over `[1e-8, 1e8]` with golden-section
    /// refinement around the best grid point.
    pub fn conjugate(&self, s: f64) -> f64 {
        let (lo, hi, n) = LEGENDRE_GRID;
        let objective = |t: f64| s * t - self.eval(t);
        let ratio = (hi / lo).ln() / (n - 1) as f64;
        let grid = |k: usize| lo * (ratio * k as f64).exp();
        let mut best = (0.0, 0.0);
        let mut best_k = None;
        for k in 0..n {
            let v = objective(grid(k));
            if v > best.1 {
                best = (grid(k), v);
                best_k = Some(k);
            }
        }
        let Some(k) = best_k else {
            return 0.0;
        };
        let a = if k == 0 { 0.0 } else { grid(k - 1) };
        let b = grid((k + 1).min(n - 1));
        let (_, v) = golden_max(objective, a, b, 1e-12);
        v.max(best.1)
    }

    /// `(Ψ*)⁻¹(y)` by bisection on `s`.
    pub fn conjugate_inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        while self.conjugate(hi) < y {
            lo = hi;
            hi *= 2.0;
            if hi > 1e6 {
                return f64::INFINITY;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.conjugate(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

fn bisect_increasing(f: fn(f64) -> f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) <= y {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (a.abs() + b.abs()).max(1e-300) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Which norm the Orlicz space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormFlavor {
    Luxemburg,
    Orlicz,
}

/// `t ↦ ‖χ_E‖` for `λ(E) = t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalFunction {
    pub young: YoungFunction,
    pub flavor: NormFlavor,
}

impl FundamentalFunction {
    pub fn luxemburg(young: YoungFunction) -> Self {
        Self {
            young,
            flavor: NormFlavor::Luxemburg,
        }
    }

    pub fn orlicz(young: YoungFunction) -> Self {
        Self {
            young,
            flavor: NormFlavor::Orlicz,
        }
    }

    /// Luxemburg: `1/Ψ⁻¹(1/t)`. Orlicz: `t (Ψ*)⁻¹(1/t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!(
                "fundamental function needs t > 0, got {t}"
            )));
        }
        Ok(match self.flavor {
            NormFlavor::Luxemburg => match self.young {
                YoungFunction::PsiLog => phi_log(t),
                YoungFunction::PsiEnt => phi_ent(t),
                _ => 1.0 / self.young.inverse(1.0 / t),
            },
            NormFlavor::Orlicz => t * self.young.conjugate_inverse(1.0 / t),
        })
    }

    /// Inverse of the Luxemburg fundamental function, `s ↦ 1/Ψ(1/s)`.
    /// The Orlicz flavor is inverted by bisection.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!(
                "fundamental function inverse needs s > 0, got {s}"
            )));
        }
        Ok(match self.flavor {
            NormFlavor::Luxemburg => match self.young {
                YoungFunction::PsiLog => phi_log_inverse(s),
                YoungFunction::PsiEnt => phi_ent_inverse(s),
                _ => 1.0 / self.young.eval(1.0 / s),
            },
            NormFlavor::Orlicz => {
                let f = |t: f64| self.eval(t).unwrap_or(f64::INFINITY);
                let (mut lo, mut hi) = (0.0, 1.0);
                while f(hi) < s {
                    lo = hi;
                    hi *= 2.0;
                    if hi > 1e300 {
                        return Ok(f64::INFINITY);
                    }
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if f(mid) < s {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-14 * hi {
                        break;
                    }
                }
                0.5 * (lo + hi)
            }
        })
    }
}
