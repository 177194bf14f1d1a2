//! Well-behaved subsets and the 2-good-pair graph.
//!
//! For a family `P` and ranges `F`, let `K` be the members of `P` that own a
//! private point (a point covered by no other member). `G(K)` joins two
//! members of `K` whenever some range meets both of them and no other member
//! of `K`. For pseudo-disks this graph is planar, so it has at most
//! `3|K| - 6` edges. The same holds on every `K' ⊆ K` with the edge rule
//! re-applied inside `K'`. [`euler_bound_check`] counts edges against that
//! bound on `G(K)` and on random subsets.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{derive_seed, rng_from_seed};
use crate::geometry::{find_private_point, range_edges, BuildOptions, FamilyKind, Point, PseudoDiskFamily};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GoodPairEdge {
    pub a: usize,
    pub b: usize,
    /// Range id that meets exactly `a` and `b` within `K`.
    pub witness: usize,
}

#[derive(Clone, Debug)]
pub struct GoodPairGraph {
    vertices: Vec<usize>,
    private_points: Vec<Option<Point>>,
    edges: Vec<GoodPairEdge>,
    /// Every range meeting at least two members of `K`: its trace on `K` and its id.
    traces: Vec<(Vec<usize>, usize)>,
}

fn pairs_from_traces<'a>(
    traces: impl Iterator<Item = (&'a [usize], usize)>,
    keep: impl Fn(usize) -> bool,
) -> BTreeMap<(usize, usize), usize> {
    let mut pairs = BTreeMap::new();
    let mut inside = Vec::with_capacity(2);
    for (trace, witness) in traces {
        inside.clear();
        for &i in trace {
            if keep(i) {
                inside.push(i);
                if inside.len() > 2 {
                    break;
                }
            }
        }
        if inside.len() == 2 {
            pairs.entry((inside[0], inside[1])).or_insert(witness);
        }
    }
    pairs
}

impl GoodPairGraph {
    fn from_traces(vertices: Vec<usize>, private_points: Vec<Option<Point>>, traces: Vec<(Vec<usize>, usize)>) -> Self {
        let edges = pairs_from_traces(traces.iter().map(|(t, w)| (t.as_slice(), *w)), |_| true)
            .into_iter()
            .map(|((a, b), witness)| GoodPairEdge { a, b, witness })
            .collect();
        GoodPairGraph { vertices, private_points, edges, traces }
    }

    /// Treats every ground element of an abstract hypergraph as well behaved
    /// and every edge as a range (witness: the stored witness, else the edge
    /// index). No geometry backs the result, so it carries no private points.
    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        let traces = h
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.len() >= 2)
            .map(|(idx, e)| (e.clone(), h.witnesses().map_or(idx, |w| w[idx])))
            .collect();
        GoodPairGraph::from_traces((0..h.n()).collect(), vec![None; h.n()], traces)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GoodPairEdge] {
        &self.edges
    }

    /// Private point of each vertex, parallel to [`GoodPairGraph::vertices`].
    pub fn private_points(&self) -> &[Option<Point>] {
        &self.private_points
    }

    /// Edges of `G(K')` for a subset `K'` of the vertices, recomputed from the
    /// range traces.
    pub fn induced_edges(&self, subset: &[usize]) -> Vec<GoodPairEdge> {
        let max = self.vertices.last().map_or(0, |&v| v + 1);
        let mut keep = vec![false; max];
        for &v in subset {
            if v < max {
                keep[v] = true;
            }
        }
        pairs_from_traces(self.traces.iter().map(|(t, w)| (t.as_slice(), *w)), |i| keep[i])
            .into_iter()
            .map(|((a, b), witness)| GoodPairEdge { a, b, witness })
            .collect()
    }
}

/// Builds `G(K)` for ground family `family` and range family `ranges`.
///
/// Circle-boundary families are rejected: their members are curves, not
/// regions, and the planarity argument does not apply to them.
pub fn build_good_pair_graph(family: &PseudoDiskFamily, ranges: &PseudoDiskFamily) -> Result<GoodPairGraph> {
    if family.kind() == FamilyKind::CircleBoundary {
        return Err(Error::invalid(
            "good-pair graphs need region families (disk or homothet), not circle boundaries",
        ));
    }
    family.check_compatible(ranges)?;
    let mut vertices = Vec::new();
    let mut private_points = Vec::new();
    for id in 0..family.len() {
        if let Some(p) = find_private_point(family, id) {
            vertices.push(id);
            private_points.push(Some(p));
        }
    }
    let mut in_k = vec![false; family.len()];
    for &v in &vertices {
        in_k[v] = true;
    }
    let traces = range_edges(family, ranges, &BuildOptions::default())?
        .into_iter()
        .enumerate()
        .filter_map(|(s, e)| {
            let t: Vec<usize> = e.into_iter().filter(|&i| in_k[i]).collect();
            (t.len() >= 2).then_some((t, s))
        })
        .collect();
    Ok(GoodPairGraph::from_traces(vertices, private_points, traces))
}

/// Re-checks every stored fact of `g` directly against the geometry: each
/// private point lies in its member and outside all others, and each witness
/// meets both endpoints and no other vertex. Returns a description of every
/// failure.
pub fn verify_good_pair_graph(g: &GoodPairGraph, family: &PseudoDiskFamily, ranges: &PseudoDiskFamily) -> Vec<String> {
    let mut problems = Vec::new();
    for (&v, p) in g.vertices.iter().zip(&g.private_points) {
        match p {
            Some(p) => {
                if !family.contains(v, *p) {
                    problems.push(format!("private point of {v} lies outside it"));
                }
                if let Some(u) = (0..family.len()).find(|&u| u != v && family.contains(u, *p)) {
                    problems.push(format!("private point of {v} is covered by {u}"));
                }
            }
            None => problems.push(format!("vertex {v} has no private point")),
        }
    }
    for e in &g.edges {
        if !family.meets(e.a, ranges, e.witness, 0.0) || !family.meets(e.b, ranges, e.witness, 0.0) {
            problems.push(format!("witness {} misses an endpoint of ({}, {})", e.witness, e.a, e.b));
        }
        if let Some(&other) = g
            .vertices
            .iter()
            .find(|&&v| v != e.a && v != e.b && family.meets(v, ranges, e.witness, 0.0))
        {
            problems.push(format!(
                "witness {} of ({}, {}) also meets vertex {other}",
                e.witness, e.a, e.b
            ));
        }
    }
    problems
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerViolation {
    /// Sample index, or `None` for the full vertex set.
    pub sample: Option<usize>,
    pub subset_size: usize,
    pub edge_count: usize,
    pub bound: i64,
    pub witnesses: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerReport {
    pub k_size: usize,
    pub edge_count: usize,
    /// `3|K| - 6`, absent when `|K| < 3` (the check is vacuous).
    pub bound: Option<i64>,
    pub violations: Vec<EulerViolation>,
    pub samples_checked: usize,
}

impl EulerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn euler_bound(k: usize) -> Option<i64> {
    (k >= 3).then(|| 3 * k as i64 - 6)
}

fn check(edges: &[GoodPairEdge], k: usize, sample: Option<usize>) -> Option<EulerViolation> {
    let bound = euler_bound(k)?;
    (edges.len() as i64 > bound).then(|| EulerViolation {
        sample,
        subset_size: k,
        edge_count: edges.len(),
        bound,
        witnesses: edges.iter().map(|e| e.witness).collect(),
    })
}

/// Checks `|E| <= 3|K| - 6` on `g` and on `samples` random vertex subsets of
/// size at least 3, each drawn from its own seed derived from `seed`.
pub fn euler_bound_check(g: &GoodPairGraph, samples: usize, seed: u64) -> EulerReport {
    let k = g.vertices.len();
    let mut violations: Vec<EulerViolation> = check(&g.edges, k, None).into_iter().collect();
    if k >= 3 {
        let sampled: Vec<Option<EulerViolation>> = (0..samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = rng_from_seed(derive_seed(seed, &[s as u64]));
                let size = rng.random_range(3..=k);
                let mut subset: Vec<usize> =
                    sample(&mut rng, k, size).into_iter().map(|i| g.vertices[i]).collect();
                subset.sort_unstable();
                check(&g.induced_edges(&subset), size, Some(s))
            })
            .collect();
        violations.extend(sampled.into_iter().flatten());
    }
    EulerReport {
        k_size: k,
        edge_count: g.edges.len(),
        bound: euler_bound(k),
        violations,
        samples_checked: samples,
    }
}
