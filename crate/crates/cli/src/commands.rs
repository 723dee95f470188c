//! One runner per subcommand. Each returns its report rows together with
//! the tolerance checks that failed.

use std::path::Path;
use std::time::Instant;

use entropy_lab::classical::{self, DiscreteDensity};
use entropy_lab::entropy::{self, Route, Schedule};
use entropy_lab::extrapolate::richardson;
use entropy_lab::modular::CocycleDerivative;
use entropy_lab::orlicz::{self, BaseTrace, EpsGrid, ModelCrossedElement, Profile, YoungFunction};
use entropy_lab::{io, sampling, DensityMatrix, HermitianMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, Task};
use crate::report::{format_number, Row};
use crate::CliError;

/// Tolerance for identities that hold exactly in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub violations: Vec<String>,
}

impl Outcome {
    fn check(&mut self, what: &str, gap: f64, tol: f64) {
        if !(gap <= tol) {
            self.violations
                .push(format!("{what}: {} exceeds tolerance {}", format_number(gap), format_number(tol)));
        }
    }
}

struct Clock {
    enabled: bool,
}

impl Clock {
    fn time<T>(&self, f: impl FnOnce() -> T) -> (T, u64) {
        if !self.enabled {
            return (f(), 0);
        }
        let start = Instant::now();
        let out = f();
        (out, start.elapsed().as_millis() as u64)
    }
}

fn read(path: &Path, flag: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("--{flag} {}: {e}", path.display())))
}

fn load_matrix(path: &Path, flag: &str) -> Result<HermitianMatrix, CliError> {
    io::parse_matrix_json(&read(path, flag)?).map_err(|e| CliError::Input(format!("--{flag}: {e}")))
}

fn load_state(path: &Path, flag: &str) -> Result<DensityMatrix, CliError> {
    DensityMatrix::new(load_matrix(path, flag)?).map_err(|e| CliError::Input(format!("--{flag}: {e}")))
}

fn load_distribution(path: &Path, flag: &str) -> Result<DiscreteDensity, CliError> {
    io::parse_distribution_csv(&read(path, flag)?).map_err(|e| CliError::Input(format!("--{flag}: {e}")))
}

fn input<T>(r: entropy_lab::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input(e.to_string()))
}

/// Runs the configured task.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let clock = Clock { enabled: cfg.timings };
    match &cfg.task {
        Task::QuantumRel { rho, sigma, routes, t0 } => {
            run_quantum_report(&load_state(rho, "rho")?, &load_state(sigma, "sigma")?, routes, *t0, cfg.tol, &clock)
        }
        Task::SweepT { rho, sigma, t0 } => {
            run_sweep_t(&load_state(rho, "rho")?, &load_state(sigma, "sigma")?, *t0, cfg.tol)
        }
        Task::Classical {
            dist,
            reference,
            energies,
            beta,
            step,
        } => {
            let p = dist.as_deref().map(|d| load_distribution(d, "dist")).transpose()?;
            let q = reference.as_deref().map(|d| load_distribution(d, "ref")).transpose()?;
            let e = energies
                .as_deref()
                .map(|d| read(d, "energies").and_then(|t| io::parse_energies_csv(&t).map_err(|e| CliError::Input(format!("--energies: {e}")))))
                .transpose()?;
            run_classical_report(p.as_ref(), q.as_ref(), e.as_ref(), *beta, *step, cfg.tol)
        }
        Task::OrliczNorm { dist, young } => run_orlicz_norm(&load_distribution(dist, "dist")?, young, cfg.tol),
        Task::Regular {
            density,
            sigma,
            grid,
            base,
        } => match sigma {
            None => run_regular_sweep(&load_matrix(density, "density")?, *base, grid, cfg.tol, &clock),
            Some(s) => run_commuting_sweep(&load_state(density, "density")?, &load_state(s, "sigma")?, grid, cfg.tol),
        },
        Task::CrossedTail {
            density,
            grid,
            profile,
            base,
            shift,
        } => run_crossed_tail(&load_matrix(density, "density")?, *base, profile, *shift, grid, cfg.tol),
        Task::Selftest { seed, pairs, dims } => run_selftest(*seed, *pairs, dims, cfg.tol, &clock),
    }
}

fn route_result(route: Route, psi: &DensityMatrix, phi: &DensityMatrix, t0: f64) -> entropy_lab::Result<entropy::EntropyResult> {
    match route {
        Route::Limit => entropy::relative_entropy_limit(psi, phi, &Schedule::halving(t0)?),
        r => entropy::relative_entropy(r, psi, phi),
    }
}

/// One row per route and the largest pairwise discrepancy.
fn run_quantum_report(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    routes: &[Route],
    t0: f64,
    tol: Option<f64>,
    clock: &Clock,
) -> Result<Outcome, CliError> {
    let tol = tol.unwrap_or(1e-6);
    let mut out = Outcome::default();
    let mut values = Vec::new();
    for &route in routes {
        let (res, ms) = clock.time(|| route_result(route, rho, sigma, t0));
        let res = input(res)?;
        values.push(res.value);
        out.rows
            .push(Row::new("quantum", route.as_str(), res.value, Some(res.error_estimate), "nats").with_elapsed(ms));
    }
    let gap = entropy::max_pairwise_discrepancy(&values);
    out.rows.push(Row::new("quantum", "max_discrepancy", gap, None, "nats"));
    out.check("route discrepancy", gap, tol);
    Ok(out)
}

/// Raw symmetric quotients over the halving schedule, then the
/// extrapolated value against the closed-form divergence.
fn run_sweep_t(rho: &DensityMatrix, sigma: &DensityMatrix, t0: f64, tol: Option<f64>) -> Result<Outcome, CliError> {
    let tol = tol.unwrap_or(1e-6);
    let schedule = input(Schedule::halving(t0))?;
    let cocycle = input(CocycleDerivative::new(rho, sigma))?;
    let exact = input(entropy::relative_entropy_divergence(rho, sigma))?.value;
    let steps = schedule.points();
    let values: Vec<f64> = steps.iter().map(|&t| entropy::limit_quotient(&cocycle, t)).collect();
    let mut out = Outcome::default();
    for (t, v) in steps.iter().zip(&values) {
        out.rows
            .push(Row::new("sweep_t", format!("t={}", format_number(*t)), *v, Some((v - exact).abs()), "nats"));
    }
    let ex = richardson(steps, &values, 2);
    out.rows.push(Row::new("sweep_t", "extrapolated", ex.value, Some(ex.error_estimate), "nats"));
    out.rows.push(Row::new("sweep_t", "divergence", exact, None, "nats"));
    out.check("extrapolated limit", (ex.value - exact).abs(), tol);
    Ok(out)
}

fn log_density(p: &DiscreteDensity) -> Vec<f64> {
    p.values().iter().map(|&x| if x > 0.0 { x.ln() } else { 0.0 }).collect()
}

fn run_classical_report(
    p: Option<&DiscreteDensity>,
    q: Option<&DiscreteDensity>,
    energies: Option<&(Vec<f64>, classical::DiscreteMeasure)>,
    beta: f64,
    step: f64,
    tol: Option<f64>,
) -> Result<Outcome, CliError> {
    let tol = tol.unwrap_or(1e-7);
    let mut out = Outcome::default();
    if let Some(p) = p {
        if !p.is_probability() {
            return Err(CliError::Input(format!("--dist integrates to {}, not 1", p.mass())));
        }
        let h = classical::h_functional(p);
        out.rows.push(Row::new("classical", "h_functional", h, None, "nats"));
        let k = log_density(p);
        let c = input(classical::characteristic_derivative(&k, p, step))?;
        out.rows.push(Row::new("classical", "h_characteristic", c, Some((c - h).abs()), "nats"));
        out.check("characteristic derivative of log p", (c - h).abs(), tol);
        if p.base().weights().iter().all(|&w| w == 1.0) {
            let u = input(classical::uniform_comparison(p))?;
            let gap = (u.against_uniform - u.h - u.offset).abs();
            out.rows.push(Row::new("classical", "s_against_counting", u.against_counting, None, "nats"));
            out.rows.push(Row::new("classical", "s_against_uniform", u.against_uniform, Some(gap), "nats"));
            out.rows.push(Row::new("classical", "log_n", u.offset, None, "nats"));
            out.check("uniform offset identity", gap, EXACT_TOL);
            out.check("counting reference identity", (u.against_counting - u.h).abs(), EXACT_TOL);
        }
        if let Some(q) = q {
            if !q.is_probability() {
                return Err(CliError::Input(format!("--ref integrates to {}, not 1", q.mass())));
            }
            let kl = input(classical::kl_divergence(p, q))?;
            out.rows.push(Row::new("classical", "kl", kl, None, "nats"));
            if kl.is_finite() {
                let (k1, k2) = (log_density(p), log_density(q));
                let diff = p.expectation(&k1) - p.expectation(&k2);
                out.rows.push(Row::new("classical", "kl_mean_k_difference", diff, Some((diff - kl).abs()), "nats"));
                out.check("mean K difference", (diff - kl).abs(), EXACT_TOL);
                let c = input(classical::characteristic_derivative_pair(&k1, &k2, p, step))?;
                out.rows.push(Row::new("classical", "kl_characteristic", c, Some((c - kl).abs()), "nats"));
                out.check("characteristic derivative of the pair", (c - kl).abs(), tol);
            }
        }
    }
    if let Some((e, lambda)) = energies {
        let g = input(classical::gibbs_state(e, beta, lambda))?;
        let ids = input(classical::gibbs_entropy_identities(&g, None))?;
        for (atom, v) in lambda.atoms().iter().zip(g.density.values()) {
            out.rows.push(Row::new("gibbs", format!("density[{atom}]"), *v, None, ""));
        }
        out.rows.push(Row::new("gibbs", "log_z", g.log_z, None, "nats"));
        out.rows.push(Row::new("gibbs", "h_functional", ids.entropy.0, None, "nats"));
        out.rows.push(Row::new("gibbs", "mean_k", ids.entropy.1, Some(ids.defect()), "nats"));
        out.check("Gibbs entropy identity", ids.defect(), EXACT_TOL);
        let c = input(classical::characteristic_derivative(&g.k_values, &g.density, step))?;
        out.rows.push(Row::new("gibbs", "characteristic", c, Some((c - ids.entropy.1).abs()), "nats"));
        out.check("Gibbs characteristic derivative", (c - ids.entropy.1).abs(), tol);
    }
    Ok(out)
}

fn run_orlicz_norm(f: &DiscreteDensity, young: &YoungFunction, tol: Option<f64>) -> Result<Outcome, CliError> {
    let tol = tol.unwrap_or(1e-9);
    let norm = orlicz::luxemburg_norm(f, young);
    let mut out = Outcome::default();
    out.rows.push(Row::new("orlicz", format!("luxemburg_norm[{}]", young.name()), norm, None, ""));
    if norm > 0.0 {
        let modular: f64 = f
            .base()
            .weights()
            .iter()
            .zip(f.values())
            .map(|(w, v)| w * young.eval(v / norm))
            .sum();
        out.rows.push(Row::new("orlicz", "modular_at_norm", modular, Some((modular - 1.0).abs()), ""));
        out.check("modular at the norm", (modular - 1.0).abs(), tol);
    }
    let support: f64 = f
        .base()
        .weights()
        .iter()
        .zip(f.values())
        .filter(|(_, v)| **v > 0.0)
        .map(|(w, _)| w)
        .sum();
    out.rows.push(Row::new("orlicz", "support_measure", support, None, ""));
    if support > 0.0 {
        let phi = input(orlicz::FundamentalFunction::luxemburg(young.clone()).eval(support))?;
        out.rows.push(Row::new("orlicz", "fundamental_of_support", phi, None, ""));
    }
    Ok(out)
}

fn run_regular_sweep(
    a: &HermitianMatrix,
    base: BaseTrace,
    grid: &EpsGrid,
    tol: Option<f64>,
    clock: &Clock,
) -> Result<Outcome, CliError> {
    let tol = tol.unwrap_or(1e-6);
    let (res, ms) = clock.time(|| orlicz::regular_entropy(a, base, grid));
    let res = input(res)?;
    let mut out = Outcome::default();
    for p in &res.sweep {
        out.rows.push(Row::new(
            "sweep_eps",
            format!("eps={}", format_number(p.eps)),
            p.bracket,
            Some((p.bracket - p.closed_form).abs()),
            "nats",
        ));
    }
    out.rows.push(Row::new("regular", "regular_entropy", res.value, None, "nats").with_elapsed(ms));
    out.rows.push(Row::new("regular", "closed_form_infimum", res.closed_form, None, "nats"));
    out.rows.push(Row::new("regular", "tau_a_log_a", res.limit, None, "nats"));
    out.rows.push(Row::new("regular", "max_discrepancy", res.max_discrepancy(), None, "nats"));
    out.check("regularized entropy discrepancy", res.max_discrepancy(), tol);
    Ok(out)
}

fn run_commuting_sweep(
    theta: &DensityMatrix,
    phi: &DensityMatrix,
    grid: &EpsGrid,
    tol: Option<f64>,
) -> Result<Outcome, CliError> {
    let tol = tol.unwrap_or(1e-6);
    let res = input(orlicz::commuting_relative_entropy(theta, phi, grid))?;
    let exact = input(entropy::relative_entropy_divergence(theta, phi))?.value;
    let mut out = Outcome::default();
    for p in &res.sweep {
        out.rows.push(Row::new(
            "sweep_eps",
            format!("eps={}", format_number(p.eps)),
            p.bracket,
            Some((p.bracket - p.closed_form).abs()),
            "nats",
        ));
    }
    let gap = entropy::max_pairwise_discrepancy(&[res.value, res.infimum, exact]);
    out.rows.push(Row::new("commuting", "phi_f_log_f", res.value, None, "nats"));
    out.rows.push(Row::new("commuting", "infimum", res.infimum, None, "nats"));
    out.rows.push(Row::new("commuting", "divergence", exact, None, "nats"));
    out.rows.push(Row::new("commuting", "hermitian_defect", res.hermitian_defect, None, ""));
    out.rows.push(Row::new("commuting", "max_discrepancy", gap, None, "nats"));
    out.check("commuting entropy discrepancy", gap, tol);
    Ok(out)
}

/// Closed-form tail of `α g(d e^t)` at `ε`, per component.
fn closed_tail(profile: &Profile, alpha: f64, d: f64, eps: f64) -> Option<f64> {
    let r = alpha / eps;
    match profile {
        Profile::Identity => Some(d * r),
        Profile::PhiLog => Some(d * r * r.ln_1p()),
        Profile::PhiEnt => Some(d * r * r.ln_1p().max(1.0)),
        Profile::Sandwich(..) => None,
    }
}

fn run_crossed_tail(
    a: &HermitianMatrix,
    base: BaseTrace,
    profile: &Profile,
    shift: f64,
    grid: &EpsGrid,
    tol: Option<f64>,
) -> Result<Outcome, CliError> {
    let tol = tol.unwrap_or(1e-9);
    let h = input(ModelCrossedElement::new(a, base, profile.clone()))?.shift(shift);
    let mut out = Outcome::default();
    let mut worst = 0.0f64;
    for &eps in grid.points() {
        let tail = input(h.tail_trace(eps))?;
        let closed: Option<f64> = h
            .components()
            .iter()
            .filter(|c| c.coefficient > 0.0)
            .map(|c| closed_tail(profile, c.coefficient, c.dilation, eps).map(|x| c.weight * x))
            .sum();
        let err = closed.map(|c| (tail - c).abs());
        if let (Some(e), Some(c)) = (err, closed) {
            worst = worst.max(if c > 0.0 { e / c } else { e });
        }
        out.rows.push(Row::new("crossed_tail", format!("eps={}", format_number(eps)), tail, err, ""));
    }
    out.rows.push(Row::new("crossed", "profile", 0.0, None, &profile.name()));
    out.rows.push(Row::new("crossed", "base_trace", base.unit(a.dim()), None, base.as_str()));
    out.rows.push(Row::new("crossed", "tau_a", base.apply(a), None, ""));
    if *profile == Profile::Identity {
        let l1 = input(h.l1_norm())?;
        out.rows.push(Row::new("crossed", "l1_norm", l1, None, ""));
        out.rows.push(Row::new("crossed", "scaling_defect", h.scaling_defect(1.0), None, ""));
    }
    out.check("tail trace closed form (relative)", worst, tol);
    Ok(out)
}

fn run_selftest(seed: u64, pairs: usize, dims: &[usize], tol: Option<f64>, clock: &Clock) -> Result<Outcome, CliError> {
    let tol = tol.unwrap_or(1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Outcome::default();
    out.rows.push(Row::new("selftest", format!("seed={seed}"), pairs as f64, None, "pairs"));
    for &n in dims {
        let (res, ms) = clock.time(|| -> Result<(f64, f64), CliError> {
            let (mut gap, mut err) = (0.0f64, 0.0f64);
            for _ in 0..pairs {
                let theta = sampling::random_density(&mut rng, n);
                let psi = sampling::random_density(&mut rng, n);
                let c = input(entropy::compare_routes(&Route::ALL, &theta, &psi))?;
                gap = gap.max(c.max_discrepancy);
                let limit = c.results.iter().find(|r| r.route == Route::Limit).expect("limit route");
                err = err.max(limit.error_estimate);
            }
            Ok((gap, err))
        });
        let (gap, err) = res?;
        out.rows
            .push(Row::new("selftest", format!("dim={n}"), gap, Some(err), "nats").with_elapsed(ms));
        out.check(&format!("route discrepancy in dimension {n}"), gap, tol);
    }
    Ok(out)
}
