//! Circle geometry, the overlap kernel and the vertex-type measures.
//!
//! Positions and lengths are measured in circle-length units on a circle of
//! circumference `beta`. Arcs are half-open, `[start, start + length)` taken
//! modulo `beta`, and an arc of length `beta` is the whole circle regardless
//! of where it starts.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quad::Quadrature;

/// Parameters of the graph: circle length, hole intensity and circle count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    /// Intensity of the hole process, per unit length.
    pub hole_intensity: f64,
    pub n: u64,
}

impl ModelParams {
    pub fn new(beta: f64, hole_intensity: f64, n: u64) -> Result<Self> {
        check_shape(beta, hole_intensity)?;
        if n == 0 {
            return Err(domain("n must be at least 1"));
        }
        Ok(Self {
            beta,
            hole_intensity,
            n,
        })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.beta, self.hole_intensity, self.n).map(|_| ())
    }

    /// Expected number of holes on one circle.
    pub fn mean_holes(&self) -> f64 {
        self.hole_intensity * self.beta
    }

    pub fn measure_hat(&self) -> MeasureHat {
        MeasureHat {
            beta: self.beta,
            hole_intensity: self.hole_intensity,
        }
    }
}

pub(crate) fn check_shape(beta: f64, hole_intensity: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(domain(format!("beta must be finite and > 0, got {beta}")));
    }
    if !(hole_intensity >= 0.0) || !hole_intensity.is_finite() {
        return Err(domain(format!(
            "hole intensity must be finite and >= 0, got {hole_intensity}"
        )));
    }
    Ok(())
}

/// An interval vertex: an open arc on one circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexInterval {
    pub circle: u32,
    pub start: f64,
    pub length: f64,
}

impl VertexInterval {
    /// True for the whole-circle vertex (no hole, or a single hole).
    pub fn is_full_circle(&self, beta: f64) -> bool {
        self.length >= beta
    }

    /// Whether `x` lies on this arc, using the half-open convention.
    pub fn contains(&self, x: f64, beta: f64) -> bool {
        if self.is_full_circle(beta) {
            return true;
        }
        (x - self.start).rem_euclid(beta) < self.length
    }
}

/// Length of the overlap of two arcs on a circle of circumference `beta`.
///
/// An arc of length `beta` is the full circle, so the overlap is then the
/// other arc's length and the start of the full arc plays no role.
pub fn arc_intersection_length(
    a_start: f64,
    a_len: f64,
    b_start: f64,
    b_len: f64,
    beta: f64,
) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(domain(format!("beta must be finite and > 0, got {beta}")));
    }
    for len in [a_len, b_len] {
        if !(len > 0.0 && len <= beta) {
            return Err(domain(format!("arc length {len} outside (0, {beta}]")));
        }
    }
    if !a_start.is_finite() || !b_start.is_finite() {
        return Err(domain("arc start must be finite"));
    }
    if a_len == beta {
        return Ok(b_len);
    }
    if b_len == beta {
        return Ok(a_len);
    }

    let (mut a0, mut a_len, mut b0, mut b_len) =
        (a_start.rem_euclid(beta), a_len, b_start.rem_euclid(beta), b_len);
    // Canonical argument order makes the result bit-for-bit symmetric.
    if (a0, a_len) > (b0, b_len) {
        std::mem::swap(&mut a0, &mut b0);
        std::mem::swap(&mut a_len, &mut b_len);
    }
    let a1 = a0 + a_len;
    // Both arcs are shorter than the circle and start in [0, beta), so the
    // unwrapped copies of b at offsets -beta, 0, +beta cover every overlap.
    let mut total = 0.0;
    for shift in [-beta, 0.0, beta] {
        let lo = a0.max(b0 + shift);
        let hi = a1.min(b0 + shift + b_len);
        if hi > lo {
            total += hi - lo;
        }
    }
    Ok(total.min(a_len.min(b_len)))
}

/// Overlap kernel between two vertices.
pub fn kernel(a: &VertexInterval, b: &VertexInterval, beta: f64) -> Result<f64> {
    arc_intersection_length(a.start, a.length, b.start, b.length, beta)
}

/// Distribution of vertex lengths induced by the vertex-type measure: an
/// atom of mass `(λβ + 1)e^{-λβ}` at `β` plus the density `βλ²e^{-λℓ}` on
/// `(0, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureHat {
    pub beta: f64,
    pub hole_intensity: f64,
}

impl MeasureHat {
    pub fn new(beta: f64, hole_intensity: f64) -> Result<Self> {
        check_shape(beta, hole_intensity)?;
        Ok(Self {
            beta,
            hole_intensity,
        })
    }

    /// Mass of the atom at `β`; equals `P(M <= 1)` for `M ~ Po(λβ)`.
    pub fn atom_mass(&self) -> f64 {
        full_circle_atom_mass(self.beta, self.hole_intensity)
    }

    pub fn density(&self, length: f64) -> f64 {
        let l = self.hole_intensity;
        if l == 0.0 || !(length > 0.0 && length < self.beta) {
            return 0.0;
        }
        self.beta * l * l * (-l * length).exp()
    }

    /// `λβ + e^{-λβ}`, the expected number of vertices per circle.
    pub fn total_mass(&self) -> f64 {
        let x = self.hole_intensity * self.beta;
        x + (-x).exp()
    }

    /// `∫ g dμ̂` with the default quadrature settings.
    pub fn integral<G>(&self, g: G) -> Result<f64>
    where
        G: FnMut(f64) -> f64,
    {
        self.integral_with(g, &Quadrature::default())
    }

    pub fn integral_with<G>(&self, mut g: G, quad: &Quadrature) -> Result<f64>
    where
        G: FnMut(f64) -> f64,
    {
        let atom = self.atom_mass() * g(self.beta);
        if self.hole_intensity == 0.0 {
            return Ok(atom);
        }
        let l = self.hole_intensity;
        let scale = self.beta * l * l;
        let continuous = quad.integrate(|x| g(x) * scale * (-l * x).exp(), 0.0, self.beta)?;
        Ok(atom + continuous)
    }
}

/// `∫ g dμ̂` for the length law of the given parameters.
pub fn measure_hat_integral<G>(g: G, beta: f64, hole_intensity: f64) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    MeasureHat::new(beta, hole_intensity)?.integral(g)
}

/// Mass of the whole-circle point in the vertex-type measure.
pub fn full_circle_atom_mass(beta: f64, hole_intensity: f64) -> f64 {
    let x = hole_intensity * beta;
    (1.0 + x) * (-x).exp()
}

/// A box of partial-circle vertex types: start in `[x_lo, x_hi]`, length in
/// `[len_lo, len_hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeRect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub len_lo: f64,
    pub len_hi: f64,
}

impl TypeRect {
    pub fn contains(&self, v: &VertexInterval, beta: f64) -> bool {
        !v.is_full_circle(beta)
            && v.start >= self.x_lo
            && v.start <= self.x_hi
            && v.length >= self.len_lo
            && v.length < self.len_hi
    }
}

/// Expected number of partial-circle vertices per circle whose type lies in
/// the rectangle. The full-circle atom is not included; see
/// [`full_circle_atom_mass`].
pub fn mu_rectangle_mass(rect: &TypeRect, beta: f64, hole_intensity: f64) -> Result<f64> {
    check_shape(beta, hole_intensity)?;
    let TypeRect {
        x_lo,
        x_hi,
        len_lo,
        len_hi,
    } = *rect;
    if !(0.0 <= x_lo && x_lo <= x_hi && x_hi <= beta) {
        return Err(domain(format!(
            "start bounds [{x_lo}, {x_hi}] must satisfy 0 <= lo <= hi <= beta"
        )));
    }
    if !(0.0 <= len_lo && len_lo <= len_hi && len_hi <= beta) {
        return Err(domain(format!(
            "length bounds [{len_lo}, {len_hi}) must satisfy 0 <= lo <= hi <= beta"
        )));
    }
    let l = hole_intensity;
    if l == 0.0 {
        return Ok(0.0);
    }
    let upper = len_hi.min(beta);
    Ok((x_hi - x_lo) * l * ((-l * len_lo).exp() - (-l * upper).exp()))
}
