//! Closed-form limits of the component structure.
//!
//! Everything here is a deterministic function of `(beta, hole_intensity)`.
//! The survival fraction `gamma` solves `gamma = Φ(gamma)` with
//! `Φ(g) = β⁻¹ ∫ y (1 - e^{-g y}) dμ̂(y)`; the remaining limits are explicit in
//! `gamma`.

use serde::{Deserialize, Serialize};

use crate::error::{QrgError, Result};
use crate::model::{check_shape, MeasureHat};

/// Default tolerance of [`solve_gamma`].
pub const GAMMA_TOLERANCE: f64 = 1e-12;

const NEWTON_STEPS: usize = 3;

/// `P(Po(x) > k)`, accurate for small `x` where `1 - e^{-x} Σ` cancels.
fn poisson_upper_tail(k: u32, x: f64) -> f64 {
    if x < 1.0 {
        // Σ_{j>k} e^{-x} x^j / j!
        let mut term = 1.0;
        for j in 1..=k + 1 {
            term *= x / j as f64;
        }
        let mut sum = 0.0;
        let mut j = k + 1;
        while term > 1e-18 * sum || sum == 0.0 {
            sum += term;
            j += 1;
            term *= x / j as f64;
            if term == 0.0 {
                break;
            }
        }
        sum * (-x).exp()
    } else {
        let mut term = 1.0;
        let mut head = 1.0;
        for j in 1..=k {
            term *= x / j as f64;
            head += term;
        }
        1.0 - (-x).exp() * head
    }
}

/// The critical functional `F(β, λ) = (2/λ)(1 - e^{-λβ}) - β e^{-λβ}`,
/// with the limit `β` at `λ = 0`. A giant component exists iff `F > 1`.
pub fn critical_f(beta: f64, hole_intensity: f64) -> Result<f64> {
    check_shape(beta, hole_intensity)?;
    let l = hole_intensity;
    if l == 0.0 {
        return Ok(beta);
    }
    let x = l * beta;
    Ok(2.0 / l * (-(-x).exp_m1()) - beta * (-x).exp())
}

/// `Φ(g) = β⁻¹ ∫ y (1 - e^{-g y}) dμ̂(y)` in closed form.
pub fn survival_map(beta: f64, hole_intensity: f64, gamma: f64) -> f64 {
    let l = hole_intensity;
    let s = l + gamma;
    let atom = (l * beta + 1.0) * (-s * beta).exp();
    let cont = if l == 0.0 {
        0.0
    } else {
        (l / s).powi(2) * poisson_upper_tail(1, s * beta)
    };
    1.0 - atom - cont
}

/// Derivative of [`survival_map`] in `gamma`; equals `F` at `gamma = 0`.
pub fn survival_map_derivative(beta: f64, hole_intensity: f64, gamma: f64) -> f64 {
    let l = hole_intensity;
    let s = l + gamma;
    let atom = beta * (l * beta + 1.0) * (-s * beta).exp();
    let cont = if l == 0.0 {
        0.0
    } else {
        2.0 * l * l / (s * s * s) * poisson_upper_tail(2, s * beta)
    };
    atom + cont
}

/// Left-hand side of the scalar equation for `gamma` in its published form,
/// `(2λ+γ)/(λ+γ)² (1 - e^{-(λ+γ)β}) - λβ/(λ+γ) e^{-(λ+γ)β}`. Equals `1` at
/// the positive root. Requires `gamma > 0` or `hole_intensity > 0`.
pub fn gamma_equation_lhs(beta: f64, hole_intensity: f64, gamma: f64) -> f64 {
    let l = hole_intensity;
    let s = l + gamma;
    let e = (-s * beta).exp();
    (2.0 * l + gamma) / (s * s) * (-(-s * beta).exp_m1()) - l * beta / s * e
}

/// Fraction of total length in the giant component.
///
/// Zero when `F <= 1`. Otherwise the positive root of `Φ(g) = g`, bracketed
/// by bisection on `[tol, 1]` and polished with Newton steps that stay inside
/// the final bracket.
pub fn solve_gamma(beta: f64, hole_intensity: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(crate::error::domain("tolerance must be positive"));
    }
    let f = critical_f(beta, hole_intensity)?;
    if f <= 1.0 {
        return Ok(0.0);
    }
    let h = |g: f64| survival_map(beta, hole_intensity, g) - g;

    let (mut lo, mut hi) = (tol, 1.0);
    if h(hi) >= 0.0 {
        return Err(QrgError::Solver(format!(
            "no sign change on [{lo}, {hi}] for beta={beta}, lambda={hole_intensity}"
        )));
    }
    if h(lo) <= 0.0 {
        // F > 1 but the root sits below the requested resolution.
        return Ok(0.0);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut g = 0.5 * (lo + hi);
    for _ in 0..NEWTON_STEPS {
        let slope = survival_map_derivative(beta, hole_intensity, g) - 1.0;
        if slope == 0.0 {
            break;
        }
        let next = g - h(g) / slope;
        if !(next >= lo - tol && next <= hi + tol) {
            break;
        }
        g = next;
    }
    Ok(g)
}

/// Giant vertex density, closed form.
pub fn rho_closed(beta: f64, hole_intensity: f64, gamma: f64) -> f64 {
    let l = hole_intensity;
    let s = l + gamma;
    let first = if s == 0.0 {
        0.0
    } else {
        gamma * l * beta / s * (-(-s * beta).exp_m1())
    };
    first + (-l * beta).exp() * (-(-gamma * beta).exp_m1())
}

/// Giant vertex density as `∫ (1 - e^{-γx}) dμ̂(x)` by quadrature.
pub fn rho_integral(beta: f64, hole_intensity: f64, gamma: f64) -> Result<f64> {
    MeasureHat::new(beta, hole_intensity)?.integral(|x| -(-gamma * x).exp_m1())
}

/// Giant edge density `γ(1 - γ/2)β`.
pub fn zeta_closed(beta: f64, gamma: f64) -> f64 {
    gamma * (1.0 - gamma / 2.0) * beta
}

/// Giant edge density from the rank-one form `(2Aβ - A²) / 2β` with
/// `A = ∫ x (1 - e^{-γx}) dμ̂(x)`, by quadrature.
pub fn zeta_integral(beta: f64, hole_intensity: f64, gamma: f64) -> Result<f64> {
    let a = MeasureHat::new(beta, hole_intensity)?.integral(|x| x * -(-gamma * x).exp_m1())?;
    Ok((2.0 * a * beta - a * a) / (2.0 * beta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryPrediction {
    pub beta: f64,
    pub lambda: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub gamma: f64,
    pub rho: f64,
    pub zeta: f64,
    pub giant_length_density: f64,
    pub vertex_density: f64,
    pub edge_density: f64,
}

impl TheoryPrediction {
    pub fn is_supercritical(&self) -> bool {
        self.f > 1.0
    }
}

pub fn predictions(beta: f64, hole_intensity: f64) -> Result<TheoryPrediction> {
    let f = critical_f(beta, hole_intensity)?;
    let gamma = solve_gamma(beta, hole_intensity, GAMMA_TOLERANCE)?;
    let measure = MeasureHat::new(beta, hole_intensity)?;
    Ok(TheoryPrediction {
        beta,
        lambda: hole_intensity,
        f,
        gamma,
        rho: rho_closed(beta, hole_intensity, gamma),
        zeta: zeta_closed(beta, gamma),
        giant_length_density: gamma * beta,
        vertex_density: measure.total_mass(),
        edge_density: beta / 2.0,
    })
}

/// Limiting degree law truncated at `k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreePmf {
    pub probabilities: Vec<f64>,
    /// Mass of degrees above `k_max`.
    pub tail: f64,
}

impl DegreePmf {
    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }
}

/// Poisson mixed over the normalised length law:
/// `P(D = k) = ∫ e^{-x} x^k / k! dμ̂(x) / μ̂(total)`.
pub fn degree_pmf(beta: f64, hole_intensity: f64, k_max: usize) -> Result<DegreePmf> {
    let measure = MeasureHat::new(beta, hole_intensity)?;
    let total = measure.total_mass();
    let mut probabilities = Vec::with_capacity(k_max + 1);
    let mut ln_fact = 0.0;
    for k in 0..=k_max {
        if k > 0 {
            ln_fact += (k as f64).ln();
        }
        let pmf = |x: f64| {
            if x <= 0.0 {
                return if k == 0 { 1.0 } else { 0.0 };
            }
            (k as f64 * x.ln() - x - ln_fact).exp()
        };
        probabilities.push(measure.integral(pmf)? / total);
    }
    let tail = (1.0 - probabilities.iter().sum::<f64>()).max(0.0);
    Ok(DegreePmf {
        probabilities,
        tail,
    })
}
