//! Plain-text tables: edge list, vertex table and component table.

use std::io::{self, Write};

use crate::analysis::ComponentStats;
use crate::sampler::{EdgePoint, MultiGraph};

/// Formats `x` with `digits` significant digits in positional notation,
/// dropping trailing zeros.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".to_string() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// One `u v multiplicity` line per edge.
pub fn write_edge_list<W: Write>(graph: &MultiGraph, mut out: W) -> io::Result<()> {
    for e in graph.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.multiplicity)?;
    }
    out.flush()
}

/// One `id circle start length` line per vertex, reals to 9 significant digits.
pub fn write_vertex_table<W: Write>(graph: &MultiGraph, mut out: W) -> io::Result<()> {
    for (id, v) in graph.vertices().iter().enumerate() {
        writeln!(
            out,
            "{} {} {} {}",
            id,
            v.circle,
            format_significant(v.start, 9),
            format_significant(v.length, 9)
        )?;
    }
    out.flush()
}

/// One `i j x` line per raw edge point.
pub fn write_edge_points<W: Write>(points: &[EdgePoint], mut out: W) -> io::Result<()> {
    for p in points {
        writeln!(out, "{} {} {}", p.i, p.j, format_significant(p.x, 9))?;
    }
    out.flush()
}

/// One `rank vertices length edges` line per component. `edges` counts
/// multiplicity when `with_multiplicity` is set.
pub fn write_component_table<W: Write>(
    stats: &[ComponentStats],
    with_multiplicity: bool,
    mut out: W,
) -> io::Result<()> {
    for c in stats {
        let edges = if with_multiplicity {
            c.edge_count_multi
        } else {
            c.edge_count_simple
        };
        writeln!(
            out,
            "{} {} {} {}",
            c.rank,
            c.vertex_count,
            format_significant(c.total_length, 9),
            edges
        )?;
    }
    out.flush()
}
