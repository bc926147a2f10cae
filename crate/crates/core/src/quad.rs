//! Adaptive Simpson quadrature with interval halving.
//!
//! Every integrand in this crate is a smooth product of polynomials and
//! exponentials on a bounded interval, so a plain adaptive Simpson rule with
//! a Richardson correction is accurate to the requested absolute tolerance.

use crate::error::{QrgError, Result};

/// Default absolute tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Default evaluation budget.
pub const DEFAULT_BUDGET: usize = 1_000_000;

const MAX_DEPTH: u32 = 60;

/// Panels the interval is cut into before adaptation starts. Prevents an
/// accidental early acceptance when the integrand happens to be symmetric
/// about the midpoint of the whole range.
const INITIAL_PANELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub tolerance: f64,
    pub budget: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            budget: DEFAULT_BUDGET,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

impl Quadrature {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    /// Integrates `f` over `[a, b]`. Returns `0` for an empty interval.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        if !(self.tolerance > 0.0) {
            return Err(crate::error::domain("quadrature tolerance must be positive"));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(crate::error::domain("quadrature bounds must be finite"));
        }
        if a == b {
            return Ok(0.0);
        }
        if a > b {
            return self.integrate(f, b, a).map(|v| -v);
        }

        let fail = || QrgError::Quadrature {
            lo: a,
            hi: b,
            budget: self.budget,
        };

        let width = (b - a) / INITIAL_PANELS as f64;
        let panel_tol = self.tolerance / INITIAL_PANELS as f64;
        let mut evals = 0usize;
        let mut stack = Vec::with_capacity(64);

        let mut left = a;
        let mut f_left = f(left);
        evals += 1;
        for k in 0..INITIAL_PANELS {
            let right = if k + 1 == INITIAL_PANELS {
                b
            } else {
                a + width * (k + 1) as f64
            };
            let mid = 0.5 * (left + right);
            let fm = f(mid);
            let fr = f(right);
            evals += 2;
            stack.push(Panel {
                a: left,
                b: right,
                fa: f_left,
                fm,
                fb: fr,
                whole: simpson(left, right, f_left, fm, fr),
                tol: panel_tol,
                depth: 0,
            });
            left = right;
            f_left = fr;
        }

        let mut total = 0.0;
        while let Some(p) = stack.pop() {
            if evals + 2 > self.budget || p.depth >= MAX_DEPTH {
                return Err(fail());
            }
            let m = 0.5 * (p.a + p.b);
            let lm = 0.5 * (p.a + m);
            let rm = 0.5 * (m + p.b);
            let flm = f(lm);
            let frm = f(rm);
            evals += 2;
            let sl = simpson(p.a, m, p.fa, flm, p.fm);
            let sr = simpson(m, p.b, p.fm, frm, p.fb);
            let delta = sl + sr - p.whole;
            if !delta.is_finite() {
                return Err(fail());
            }
            if delta.abs() <= 15.0 * p.tol {
                total += sl + sr + delta / 15.0;
            } else {
                let tol = 0.5 * p.tol;
                stack.push(Panel {
                    a: p.a,
                    b: m,
                    fa: p.fa,
                    fm: flm,
                    fb: p.fm,
                    whole: sl,
                    tol,
                    depth: p.depth + 1,
                });
                stack.push(Panel {
                    a: m,
                    b: p.b,
                    fa: p.fm,
                    fm: frm,
                    fb: p.fb,
                    whole: sr,
                    tol,
                    depth: p.depth + 1,
                });
            }
        }
        Ok(total)
    }
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Fixed-order Gauss–Legendre rule on `[-1, 1]`, applied over equal panels.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_order` from Chebyshev starting points.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]` cut into `panels` equal pieces.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64, panels: usize) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for k in 0..panels {
            let mid = a + (k as f64 + 0.5) * h;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + 0.5 * h * x);
            }
            total += 0.5 * h * s;
        }
        total
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Integrates with the default tolerance and budget.
pub fn integrate<F>(f: F, a: f64, b: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    Quadrature::default().integrate(f, a, b)
}
