//! Component structure and degree statistics of a sampled graph.

use serde::{Deserialize, Serialize};

use crate::sampler::MultiGraph;

/// Number of equal-width length bins used by [`degree_histogram`].
pub const LENGTH_BINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats {
    /// 1 for the largest component.
    pub rank: usize,
    pub vertex_count: u64,
    pub total_length: f64,
    pub edge_count_simple: u64,
    pub edge_count_multi: u64,
    /// Smallest vertex id in the component; breaks ties between equal sizes.
    pub min_vertex: u32,
}

impl ComponentStats {
    /// Placeholder for a rank beyond the number of components.
    pub fn empty(rank: usize) -> Self {
        Self {
            rank,
            vertex_count: 0,
            total_length: 0.0,
            edge_count_simple: 0,
            edge_count_multi: 0,
            min_vertex: u32::MAX,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count == 0
    }
}

/// Union-find over vertex ids with per-root component totals.
struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
    length: Vec<f64>,
    edges_simple: Vec<u64>,
    edges_multi: Vec<u64>,
    min_vertex: Vec<u32>,
}

impl DisjointSet {
    fn new(graph: &MultiGraph) -> Self {
        let n = graph.vertex_count();
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            length: graph.vertices().iter().map(|v| v.length).collect(),
            edges_simple: vec![0; n],
            edges_multi: vec![0; n],
            min_vertex: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// Merges the sets of `a` and `b` and returns the surviving root.
    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra as usize, rb as usize)
        } else {
            (rb as usize, ra as usize)
        };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.length[big] += self.length[small];
        self.edges_simple[big] += self.edges_simple[small];
        self.edges_multi[big] += self.edges_multi[small];
        self.min_vertex[big] = self.min_vertex[big].min(self.min_vertex[small]);
        big as u32
    }
}

fn run_union_find(graph: &MultiGraph) -> DisjointSet {
    let mut ds = DisjointSet::new(graph);
    for e in graph.edges() {
        let root = ds.union(e.u, e.v) as usize;
        ds.edges_simple[root] += 1;
        ds.edges_multi[root] += u64::from(e.multiplicity);
    }
    ds
}

/// Connected components, largest first. Equal vertex counts are ordered by
/// smallest vertex id.
pub fn components(graph: &MultiGraph) -> Vec<ComponentStats> {
    let mut ds = run_union_find(graph);
    let mut out = Vec::new();
    for v in 0..graph.vertex_count() as u32 {
        if ds.find(v) == v {
            let r = v as usize;
            out.push(ComponentStats {
                rank: 0,
                vertex_count: u64::from(ds.size[r]),
                total_length: ds.length[r],
                edge_count_simple: ds.edges_simple[r],
                edge_count_multi: ds.edges_multi[r],
                min_vertex: ds.min_vertex[r],
            });
        }
    }
    out.sort_by(|a, b| {
        b.vertex_count
            .cmp(&a.vertex_count)
            .then(a.min_vertex.cmp(&b.min_vertex))
    });
    for (i, c) in out.iter_mut().enumerate() {
        c.rank = i + 1;
    }
    out
}

/// Component label of every vertex: the smallest vertex id in its component.
pub fn component_labels(graph: &MultiGraph) -> Vec<u32> {
    let mut ds = run_union_find(graph);
    (0..graph.vertex_count() as u32)
        .map(|v| {
            let r = ds.find(v);
            ds.min_vertex[r as usize]
        })
        .collect()
}

/// The component of the given rank (1-based), or an empty placeholder.
pub fn nth_component(stats: &[ComponentStats], rank: usize) -> ComponentStats {
    rank.checked_sub(1)
        .and_then(|i| stats.get(i))
        .copied()
        .unwrap_or_else(|| ComponentStats::empty(rank))
}

/// Probability that two independent points, uniform over the total length,
/// fall in the same component: `Σ_j (λ(C_j) / βn)²`.
pub fn same_component_length_prob(graph: &MultiGraph) -> f64 {
    same_component_length_prob_from(&components(graph), graph)
}

pub fn same_component_length_prob_from(stats: &[ComponentStats], graph: &MultiGraph) -> f64 {
    let total = graph.params().beta * graph.params().n as f64;
    stats
        .iter()
        .map(|c| {
            let f = c.total_length / total;
            f * f
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthBin {
    pub lo: f64,
    pub hi: f64,
    pub vertices: u64,
    pub mean_length: f64,
    pub mean_degree: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    /// `counts[k]` is the number of vertices of degree `k`.
    pub counts: Vec<u64>,
    pub length_bins: Vec<LengthBin>,
}

impl DegreeHistogram {
    pub fn vertex_total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.vertex_total().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        let total = self.vertex_total();
        if total == 0 {
            return 0.0;
        }
        let sum: u64 = self.counts.iter().enumerate().map(|(k, &c)| k as u64 * c).sum();
        sum as f64 / total as f64
    }

    /// Least-squares slope through the origin of mean degree against mean
    /// length, over non-empty bins.
    pub fn length_slope(&self) -> f64 {
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for b in self.length_bins.iter().filter(|b| b.vertices > 0) {
            sxy += b.mean_length * b.mean_degree;
            sxx += b.mean_length * b.mean_length;
        }
        if sxx == 0.0 {
            0.0
        } else {
            sxy / sxx
        }
    }
}

/// Degree distribution over all vertices, plus mean degree per length bin.
/// With `use_multiplicity` parallel edges count separately.
pub fn degree_histogram(graph: &MultiGraph, use_multiplicity: bool) -> DegreeHistogram {
    let mut degree = vec![0u64; graph.vertex_count()];
    for e in graph.edges() {
        let w = if use_multiplicity {
            u64::from(e.multiplicity)
        } else {
            1
        };
        degree[e.u as usize] += w;
        degree[e.v as usize] += w;
    }
    let max = degree.iter().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![0u64; max + 1];
    for &d in &degree {
        counts[d as usize] += 1;
    }

    let beta = graph.params().beta;
    let width = beta / LENGTH_BINS as f64;
    let mut bin_count = [0u64; LENGTH_BINS];
    let mut bin_len = [0.0f64; LENGTH_BINS];
    let mut bin_deg = [0.0f64; LENGTH_BINS];
    for (v, &d) in graph.vertices().iter().zip(&degree) {
        let idx = ((v.length / width).ceil() as usize).clamp(1, LENGTH_BINS) - 1;
        bin_count[idx] += 1;
        bin_len[idx] += v.length;
        bin_deg[idx] += d as f64;
    }
    let length_bins = (0..LENGTH_BINS)
        .map(|i| {
            let c = bin_count[i];
            let denom = c.max(1) as f64;
            LengthBin {
                lo: i as f64 * width,
                hi: (i + 1) as f64 * width,
                vertices: c,
                mean_length: bin_len[i] / denom,
                mean_degree: bin_deg[i] / denom,
            }
        })
        .collect();
    DegreeHistogram {
        counts,
        length_bins,
    }
}
