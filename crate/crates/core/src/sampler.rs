//! Seeded generation of the random graph.
//!
//! Each circle carries a Poisson process of holes; the holes cut the circle
//! into interval vertices. Every unordered pair of circles carries a Poisson
//! process of edge points of intensity `1/n`, and each point joins the two
//! intervals covering it.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::{ModelParams, VertexInterval};
use crate::rng::{self, Purpose, StreamRng};

/// Sorted hole positions on one circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleRow {
    pub circle: u32,
    pub positions: Vec<f64>,
}

impl HoleRow {
    pub fn count(&self) -> usize {
        self.positions.len()
    }
}

/// One point of a pairwise edge process: circles `i < j`, position `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgePoint {
    pub i: u32,
    pub j: u32,
    pub x: f64,
}

/// An edge between vertex ids `u < v`, with its number of parallel copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeSampling {
    /// One Poisson total for all pairs, each point assigned a uniform pair.
    #[default]
    Aggregate,
    /// A separate Poisson process for every pair. Quadratic in `n`.
    PerPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SamplerOptions {
    pub edge_sampling: EdgeSampling,
    /// Keep the raw edge points alongside the graph.
    pub audit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiGraph {
    params: ModelParams,
    vertices: Vec<VertexInterval>,
    /// `circle_offsets[i]..circle_offsets[i + 1]` are the ids on circle `i`.
    circle_offsets: Vec<u32>,
    edges: Vec<Edge>,
    edge_points: Option<Vec<EdgePoint>>,
}

impl MultiGraph {
    /// Assembles a graph from explicit parts.
    ///
    /// Vertices must be grouped by circle in increasing circle order. Edge
    /// endpoints are normalised to `u < v` and repeated pairs are merged.
    pub fn from_parts(
        params: ModelParams,
        vertices: Vec<VertexInterval>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        params.validate()?;
        if vertices.len() > u32::MAX as usize {
            return Err(domain("too many vertices"));
        }
        let mut circle_offsets = vec![0u32; params.n as usize + 1];
        let mut last_circle = 0u32;
        for (id, v) in vertices.iter().enumerate() {
            if v.circle as u64 >= params.n {
                return Err(domain(format!("vertex {id} on circle {} >= n", v.circle)));
            }
            if v.circle < last_circle {
                return Err(domain("vertices must be grouped by increasing circle"));
            }
            if !(v.length > 0.0 && v.length <= params.beta) {
                return Err(domain(format!("vertex {id} has length {}", v.length)));
            }
            last_circle = v.circle;
            circle_offsets[v.circle as usize + 1] += 1;
        }
        for i in 0..params.n as usize {
            circle_offsets[i + 1] += circle_offsets[i];
        }

        let mut raw = Vec::new();
        for e in edges {
            let (u, v) = (e.u.min(e.v), e.u.max(e.v));
            if v as usize >= vertices.len() {
                return Err(domain(format!("edge ({}, {}) references a missing vertex", e.u, e.v)));
            }
            if vertices[u as usize].circle == vertices[v as usize].circle {
                return Err(domain(format!("edge ({u}, {v}) joins two vertices of one circle")));
            }
            if e.multiplicity == 0 {
                return Err(domain("edge multiplicity must be at least 1"));
            }
            raw.push(Edge {
                u,
                v,
                multiplicity: e.multiplicity,
            });
        }
        Ok(Self {
            params,
            vertices,
            circle_offsets,
            edges: merge_parallel(raw),
            edge_points: None,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn vertices(&self) -> &[VertexInterval] {
        &self.vertices
    }

    /// Edges sorted by `(u, v)`, one record per adjacent pair.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_points(&self) -> Option<&[EdgePoint]> {
        self.edge_points.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of adjacent vertex pairs.
    pub fn edge_count_simple(&self) -> u64 {
        self.edges.len() as u64
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count_multi(&self) -> u64 {
        self.edges.iter().map(|e| u64::from(e.multiplicity)).sum()
    }

    /// Parallel copies beyond the first, summed over pairs.
    pub fn excess_edges(&self) -> u64 {
        self.edge_count_multi() - self.edge_count_simple()
    }

    pub fn circle_vertices(&self, circle: u32) -> &[VertexInterval] {
        let c = circle as usize;
        &self.vertices[self.circle_offsets[c] as usize..self.circle_offsets[c + 1] as usize]
    }

    pub fn first_vertex_of(&self, circle: u32) -> u32 {
        self.circle_offsets[circle as usize]
    }

    pub fn total_length(&self) -> f64 {
        self.vertices.iter().map(|v| v.length).sum()
    }
}

fn merge_parallel(mut raw: Vec<Edge>) -> Vec<Edge> {
    raw.sort_unstable_by_key(|e| (e.u, e.v));
    let mut out: Vec<Edge> = Vec::with_capacity(raw.len());
    for e in raw {
        match out.last_mut() {
            Some(last) if last.u == e.u && last.v == e.v => last.multiplicity += e.multiplicity,
            _ => out.push(e),
        }
    }
    out
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    // Poisson::new only fails for non-positive or non-finite means.
    let dist = Poisson::new(mean).expect("finite positive Poisson mean");
    dist.sample(rng) as u64
}

/// Samples the holes of one circle from the stream keyed by
/// `(master_seed, circle)`.
pub fn sample_holes(params: &ModelParams, circle: u32, master_seed: u64) -> HoleRow {
    let mut rng = rng::stream(master_seed, Purpose::Holes, &[u64::from(circle)]);
    sample_holes_from(params, circle, &mut rng)
}

pub(crate) fn sample_holes_from(params: &ModelParams, circle: u32, rng: &mut StreamRng) -> HoleRow {
    let count = poisson_count(params.mean_holes(), rng) as usize;
    let mut positions = vec![0.0; count];
    loop {
        for p in positions.iter_mut() {
            *p = rng.random_range(0.0..params.beta);
        }
        positions.sort_unstable_by(f64::total_cmp);
        if positions.windows(2).all(|w| w[0] < w[1]) {
            break;
        }
    }
    HoleRow { circle, positions }
}

/// Cuts a circle at its holes. No hole or a single hole gives one
/// whole-circle vertex; `M >= 2` holes give `M` arcs, the last one wrapping
/// through zero.
pub fn build_vertices(holes: &HoleRow, beta: f64) -> Vec<VertexInterval> {
    let circle = holes.circle;
    let h = &holes.positions;
    match h.len() {
        0 => vec![VertexInterval {
            circle,
            start: 0.0,
            length: beta,
        }],
        1 => vec![VertexInterval {
            circle,
            start: h[0],
            length: beta,
        }],
        m => {
            let mut out = Vec::with_capacity(m);
            for k in 0..m - 1 {
                out.push(VertexInterval {
                    circle,
                    start: h[k],
                    length: h[k + 1] - h[k],
                });
            }
            out.push(VertexInterval {
                circle,
                start: h[m - 1],
                length: beta - h[m - 1] + h[0],
            });
            out
        }
    }
}

/// Index, within its circle, of the vertex covering `x`. A point that
/// coincides with a hole belongs to the arc starting there.
pub fn locate(holes: &[f64], x: f64) -> usize {
    if holes.len() <= 1 {
        return 0;
    }
    match holes.partition_point(|&h| h <= x) {
        0 => holes.len() - 1,
        k => k - 1,
    }
}

/// Edge points of all pairwise processes, drawn as one Poisson total with
/// mean `β(n-1)/2` whose points pick a uniform pair and a uniform position.
pub fn sample_edge_points(params: &ModelParams, master_seed: u64) -> Vec<EdgePoint> {
    let mut rng = rng::stream(master_seed, Purpose::EdgePoints, &[0]);
    sample_edge_points_from(params, &mut rng)
}

pub(crate) fn sample_edge_points_from(params: &ModelParams, rng: &mut StreamRng) -> Vec<EdgePoint> {
    let n = params.n;
    if n < 2 {
        return Vec::new();
    }
    let mean = params.beta * (n - 1) as f64 / 2.0;
    let total = poisson_count(mean, rng);
    let mut points = Vec::with_capacity(total as usize);
    for _ in 0..total {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let x = rng.random_range(0.0..params.beta);
        points.push(EdgePoint {
            i: a.min(b) as u32,
            j: a.max(b) as u32,
            x,
        });
    }
    points
}

/// Edge points drawn pair by pair, each pair an independent Poisson process
/// of intensity `1/n` on the circle. Reference construction for small `n`.
pub fn sample_edge_points_per_pair(params: &ModelParams, master_seed: u64) -> Vec<EdgePoint> {
    let mut rng = rng::stream(master_seed, Purpose::EdgePoints, &[1]);
    sample_edge_points_per_pair_from(params, &mut rng)
}

pub(crate) fn sample_edge_points_per_pair_from(
    params: &ModelParams,
    rng: &mut StreamRng,
) -> Vec<EdgePoint> {
    let n = params.n;
    let mean = params.beta / n as f64;
    let mut points = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..poisson_count(mean, rng) {
                points.push(EdgePoint {
                    i: i as u32,
                    j: j as u32,
                    x: rng.random_range(0.0..params.beta),
                });
            }
        }
    }
    points
}

/// Builds the graph with default options.
pub fn build_graph(params: &ModelParams, master_seed: u64) -> Result<MultiGraph> {
    build_graph_with(params, master_seed, &SamplerOptions::default())
}

pub fn build_graph_with(
    params: &ModelParams,
    master_seed: u64,
    options: &SamplerOptions,
) -> Result<MultiGraph> {
    params.validate()?;
    if params.n > u64::from(u32::MAX) {
        return Err(domain("n must fit in 32 bits"));
    }

    let holes: Vec<HoleRow> = (0..params.n as u32)
        .into_par_iter()
        .map(|c| sample_holes(params, c, master_seed))
        .collect();

    let mut circle_offsets = Vec::with_capacity(holes.len() + 1);
    circle_offsets.push(0u64);
    for row in &holes {
        let last = *circle_offsets.last().unwrap();
        circle_offsets.push(last + row.count().max(1) as u64);
    }
    let vertex_total = *circle_offsets.last().unwrap();
    if vertex_total > u64::from(u32::MAX) {
        return Err(domain("vertex count exceeds 32-bit ids"));
    }
    let circle_offsets: Vec<u32> = circle_offsets.into_iter().map(|o| o as u32).collect();

    let mut vertices = Vec::with_capacity(vertex_total as usize);
    for row in &holes {
        vertices.extend(build_vertices(row, params.beta));
    }

    let points = match options.edge_sampling {
        EdgeSampling::Aggregate => sample_edge_points(params, master_seed),
        EdgeSampling::PerPair => sample_edge_points_per_pair(params, master_seed),
    };

    let raw: Vec<Edge> = points
        .iter()
        .map(|p| {
            let u = circle_offsets[p.i as usize] + locate(&holes[p.i as usize].positions, p.x) as u32;
            let v = circle_offsets[p.j as usize] + locate(&holes[p.j as usize].positions, p.x) as u32;
            Edge {
                u,
                v,
                multiplicity: 1,
            }
        })
        .collect();

    Ok(MultiGraph {
        params: *params,
        vertices,
        circle_offsets,
        edges: merge_parallel(raw),
        edge_points: options.audit.then_some(points),
    })
}

/// Collapses parallel edges. Returns the simple graph and the number of
/// removed copies.
pub fn simplify(graph: &MultiGraph) -> (MultiGraph, u64) {
    let excess = graph.excess_edges();
    let mut simple = graph.clone();
    for e in &mut simple.edges {
        e.multiplicity = 1;
    }
    (simple, excess)
}
