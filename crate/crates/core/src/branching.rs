//! Single-type Galton–Watson process whose survival probability is the
//! giant length fraction `gamma`.
//!
//! Each individual has a Poisson number of children with random mean
//! `Γ_β = min(Γ, β)`, where `Γ` is Gamma with shape 2 and rate `λ`.

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, QrgError, Result};
use crate::model::check_shape;
use crate::quad::{GaussLegendre, Quadrature};
use crate::rng::{self, Purpose};

pub const DEFAULT_MAX_GENERATIONS: u32 = 60;
pub const DEFAULT_POPULATION_CAP: u64 = 1_000_000;

const MAX_FIXED_POINT_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GwConfig {
    pub beta: f64,
    pub hole_intensity: f64,
    pub max_generations: u32,
    pub population_cap: u64,
    pub trials: u64,
}

impl GwConfig {
    pub fn new(beta: f64, hole_intensity: f64, trials: u64) -> Self {
        Self {
            beta,
            hole_intensity,
            max_generations: DEFAULT_MAX_GENERATIONS,
            population_cap: DEFAULT_POPULATION_CAP,
            trials,
        }
    }

    fn validate(&self) -> Result<()> {
        check_shape(self.beta, self.hole_intensity)?;
        if self.max_generations == 0 || self.population_cap == 0 || self.trials == 0 {
            return Err(domain("generations, population cap and trials must be positive"));
        }
        Ok(())
    }
}

/// Draws `min(Γ, β)` with `Γ ~ Gamma(2, rate λ)`; always `β` when `λ = 0`.
pub fn sample_gamma_beta<R: Rng + ?Sized>(hole_intensity: f64, beta: f64, rng: &mut R) -> f64 {
    if hole_intensity <= 0.0 {
        return beta;
    }
    let exp = Exp::new(hole_intensity).expect("positive rate");
    let g = exp.sample(rng) + exp.sample(rng);
    g.min(beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalEstimate {
    pub estimate: f64,
    /// Binomial standard error of `estimate`.
    pub stderr: f64,
    pub survived: u64,
    pub trials: u64,
    /// Survival is declared at the generation or population cap, so the
    /// estimate is biased upward by the chance of dying out later.
    pub upper_biased: bool,
}

/// Whether one process started from a single individual is still alive at
/// `max_generations` or has reached `population_cap`.
fn run_trial<R: Rng + ?Sized>(config: &GwConfig, rng: &mut R) -> bool {
    let mut population: u64 = 1;
    for _ in 0..config.max_generations {
        let mut rate = 0.0;
        for _ in 0..population {
            rate += sample_gamma_beta(config.hole_intensity, config.beta, rng);
        }
        population = if rate > 0.0 {
            Poisson::new(rate).expect("positive rate").sample(rng) as u64
        } else {
            0
        };
        if population == 0 {
            return false;
        }
        if population >= config.population_cap {
            return true;
        }
    }
    true
}

/// Monte Carlo survival frequency over independent trials. Each trial has
/// its own stream, so the result does not depend on the thread count.
pub fn gw_survival_mc(config: &GwConfig, master_seed: u64) -> Result<SurvivalEstimate> {
    config.validate()?;
    let survived: u64 = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(master_seed, Purpose::BranchingTrial, &[t]);
            u64::from(run_trial(config, &mut rng))
        })
        .sum();
    let trials = config.trials;
    let p = survived as f64 / trials as f64;
    Ok(SurvivalEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        survived,
        trials,
        upper_biased: true,
    })
}

/// `E[1 - e^{-g Γ_β}]`: Gamma(2, λ) density `λ² t e^{-λt}` on `(0, β)` plus
/// the atom `(1 + λβ)e^{-λβ}` at `β`.
pub fn expected_survival_map(
    beta: f64,
    hole_intensity: f64,
    gamma: f64,
    quad: &Quadrature,
) -> Result<f64> {
    let l = hole_intensity;
    let atom = (1.0 + l * beta) * (-l * beta).exp() * -(-gamma * beta).exp_m1();
    if l == 0.0 {
        return Ok(atom);
    }
    let body = quad.integrate(|t| survival_integrand(l, gamma, t), 0.0, beta)?;
    Ok(atom + body)
}

fn survival_integrand(l: f64, gamma: f64, t: f64) -> f64 {
    -(-gamma * t).exp_m1() * l * l * t * (-l * t).exp()
}

/// Same map with a fixed 24-point rule on unit-width panels; the integrand
/// is entire with rate at most `λ + 1`, so this sits at rounding level.
fn expected_survival_map_fixed(beta: f64, l: f64, gamma: f64, gl: &GaussLegendre) -> f64 {
    let atom = (1.0 + l * beta) * (-l * beta).exp() * -(-gamma * beta).exp_m1();
    if l == 0.0 {
        return atom;
    }
    let panels = (beta * (1.0 + l)).ceil() as usize;
    atom + gl.integrate(|t| survival_integrand(l, gamma, t), 0.0, beta, panels)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRun {
    pub gamma: f64,
    /// `iterates[0] = 1`, followed by each map application.
    pub iterates: Vec<f64>,
}

/// Maximal fixed point of `g ↦ E[1 - e^{-g Γ_β}]`, iterating from `g = 1`.
///
/// The iterates decrease monotonically. Iteration stops once the geometric
/// estimate of the remaining distance, `Δ_k q/(1-q)` with `q = Δ_k/Δ_{k-1}`,
/// drops below `tol`; an iterate below `tol` means extinction and returns 0.
pub fn extinction_fixed_point(beta: f64, hole_intensity: f64, tol: f64) -> Result<f64> {
    extinction_fixed_point_run(beta, hole_intensity, tol).map(|r| r.gamma)
}

pub fn extinction_fixed_point_run(beta: f64, hole_intensity: f64, tol: f64) -> Result<FixedPointRun> {
    check_shape(beta, hole_intensity)?;
    if !(tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    let gl = GaussLegendre::new(24);
    let mut iterates = vec![1.0];
    let mut gamma = 1.0f64;
    let mut prev_step: Option<f64> = None;
    for _ in 0..MAX_FIXED_POINT_ITERATIONS {
        let next = expected_survival_map_fixed(beta, hole_intensity, gamma, &gl);
        iterates.push(next);
        if next < tol {
            return Ok(FixedPointRun {
                gamma: 0.0,
                iterates,
            });
        }
        let step = gamma - next;
        if step <= 0.0 {
            return Ok(FixedPointRun {
                gamma: next,
                iterates,
            });
        }
        if let Some(prev) = prev_step {
            let q = step / prev;
            if q < 1.0 && step * q / (1.0 - q) < tol {
                return Ok(FixedPointRun {
                    gamma: next,
                    iterates,
                });
            }
        }
        prev_step = Some(step);
        gamma = next;
    }
    Err(QrgError::FixedPoint {
        iterations: MAX_FIXED_POINT_ITERATIONS,
        last_step: prev_step.unwrap_or(f64::NAN),
    })
}
