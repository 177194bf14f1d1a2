use std::collections::HashMap;

use rayon::prelude::*;

use super::{BBox, PseudoDiskFamily};
use crate::error::Result;
use crate::hypergraph::Hypergraph;

/// A grid member whose box covers more cells than this is checked against
/// every query instead.
const MAX_CELLS_PER_ITEM: i64 = 64;
const PARALLEL_THRESHOLD: usize = 256;

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Absolute slack added to every predicate. Zero means exact comparisons.
    pub tolerance: f64,
    /// Use the uniform grid index. When false, test all pairs.
    pub use_grid: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { tolerance: 0.0, use_grid: true }
    }
}

struct GridIndex {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    oversized: Vec<usize>,
    total: usize,
}

impl GridIndex {
    fn new(family: &PseudoDiskFamily, cell: f64, inflate: f64) -> Self {
        let mut index = GridIndex {
            cell,
            cells: HashMap::new(),
            oversized: Vec::new(),
            total: family.len(),
        };
        for id in 0..family.len() {
            let (lo, hi) = index.cell_range(family.bbox(id).inflate(inflate));
            if cells_spanned(lo, hi) > MAX_CELLS_PER_ITEM {
                index.oversized.push(id);
                continue;
            }
            for gx in lo.0..=hi.0 {
                for gy in lo.1..=hi.1 {
                    index.cells.entry((gx, gy)).or_default().push(id);
                }
            }
        }
        index
    }

    fn cell_range(&self, b: BBox) -> ((i64, i64), (i64, i64)) {
        let f = |v: f64| (v / self.cell).floor() as i64;
        ((f(b.min.x), f(b.min.y)), (f(b.max.x), f(b.max.y)))
    }

    /// Sorted, deduplicated ids whose boxes may overlap `b`.
    fn candidates(&self, b: BBox) -> Vec<usize> {
        let (lo, hi) = self.cell_range(b);
        if cells_spanned(lo, hi) > MAX_CELLS_PER_ITEM * 16 {
            return (0..self.total).collect();
        }
        let mut out = self.oversized.clone();
        for gx in lo.0..=hi.0 {
            for gy in lo.1..=hi.1 {
                if let Some(ids) = self.cells.get(&(gx, gy)) {
                    out.extend_from_slice(ids);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn cells_spanned(lo: (i64, i64), hi: (i64, i64)) -> i64 {
    let w = hi.0.saturating_sub(lo.0).saturating_add(1);
    let h = hi.1.saturating_sub(lo.1).saturating_add(1);
    w.saturating_mul(h)
}

fn median_diagonal(a: &PseudoDiskFamily, b: &PseudoDiskFamily) -> f64 {
    let mut diags: Vec<f64> = (0..a.len())
        .map(|i| a.bbox(i).diagonal())
        .chain((0..b.len()).map(|i| b.bbox(i).diagonal()))
        .collect();
    if diags.is_empty() {
        return 1.0;
    }
    let mid = diags.len() / 2;
    let (_, m, _) = diags.select_nth_unstable_by(mid, f64::total_cmp);
    if m.is_finite() && *m > 0.0 {
        *m
    } else {
        1.0
    }
}

/// For each range `S` of `ranges`, in order, the sorted ids of members of
/// `family` meeting `S`.
pub fn range_edges(
    family: &PseudoDiskFamily,
    ranges: &PseudoDiskFamily,
    opts: &BuildOptions,
) -> Result<Vec<Vec<usize>>> {
    family.check_compatible(ranges)?;
    let tol = opts.tolerance;
    let edge_for = |s: usize, candidates: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        candidates.filter(|&p| family.meets(p, ranges, s, tol)).collect()
    };
    let edges = if opts.use_grid {
        let index = GridIndex::new(family, median_diagonal(family, ranges), tol);
        let one = |s: usize| {
            let cands = index.candidates(ranges.bbox(s).inflate(tol));
            edge_for(s, &mut cands.into_iter())
        };
        if ranges.len() >= PARALLEL_THRESHOLD {
            (0..ranges.len()).into_par_iter().map(one).collect()
        } else {
            (0..ranges.len()).map(one).collect()
        }
    } else {
        (0..ranges.len())
            .map(|s| edge_for(s, &mut (0..family.len())))
            .collect()
    };
    Ok(edges)
}

/// `H(P, F)`: ground set `P`, one edge per range of `F` holding the members
/// of `P` it meets, deduplicated. The first range producing an edge is kept
/// as its witness.
pub fn build_intersection_hypergraph(
    family: &PseudoDiskFamily,
    ranges: &PseudoDiskFamily,
) -> Result<Hypergraph> {
    build_intersection_hypergraph_with(family, ranges, &BuildOptions::default())
}

pub fn build_intersection_hypergraph_with(
    family: &PseudoDiskFamily,
    ranges: &PseudoDiskFamily,
    opts: &BuildOptions,
) -> Result<Hypergraph> {
    let raw = range_edges(family, ranges, opts)?;
    Hypergraph::canonicalize_witnessed(raw.into_iter().zip(0..), family.len())?
        .with_weights(family.weights())?
        .with_labels(family.labels().to_vec())
}

/// Reference construction testing every (member, range) pair.
pub fn build_intersection_hypergraph_all_pairs(
    family: &PseudoDiskFamily,
    ranges: &PseudoDiskFamily,
) -> Result<Hypergraph> {
    build_intersection_hypergraph_with(
        family,
        ranges,
        &BuildOptions { tolerance: 0.0, use_grid: false },
    )
}

/// `H(P) = H(P, P)`: each member's edge is its closed neighborhood in the
/// intersection graph, itself included.
pub fn neighborhood_hypergraph(family: &PseudoDiskFamily) -> Result<Hypergraph> {
    build_intersection_hypergraph(family, family)
}

/// Adjacency lists of the intersection graph (no self loops).
pub fn intersection_graph(family: &PseudoDiskFamily) -> Result<Vec<Vec<usize>>> {
    let mut adj = range_edges(family, family, &BuildOptions::default())?;
    for (v, nbrs) in adj.iter_mut().enumerate() {
        nbrs.retain(|&u| u != v);
    }
    Ok(adj)
}
