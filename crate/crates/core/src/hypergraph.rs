//! Geometry-free hypergraphs over a ground set `0..n`.
//!
//! Edges are kept in canonical form: each edge is a strictly increasing list of
//! element ids, the edge list is sorted lexicographically, and no edge appears
//! twice. Empty edges are never stored. Whether some range met no element at
//! all is tracked separately by the `empty_trace` flag, which matters for
//! shattering (the empty set must be a trace) but not for edge counting.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ElementId = usize;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphDoc", into = "HypergraphDoc")]
pub struct Hypergraph {
    n: usize,
    labels: Vec<String>,
    weights: Vec<f64>,
    edges: Vec<Vec<ElementId>>,
    witnesses: Option<Vec<usize>>,
    empty_trace: bool,
}

/// Number of distinct non-empty edges per cardinality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EdgeCardinalityProfile {
    counts: BTreeMap<usize, usize>,
}

impl EdgeCardinalityProfile {
    /// Edges of cardinality exactly `k`.
    pub fn exactly(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Edges of cardinality in `1..=k`.
    pub fn at_most(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.counts.range(1..=k).map(|(_, c)| c).sum()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn max_cardinality(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn check_ids(ids: &[ElementId], n: usize) -> Result<()> {
    match ids.iter().find(|&&i| i >= n) {
        Some(bad) => Err(Error::invalid(format!("element id {bad} out of range for n = {n}"))),
        None => Ok(()),
    }
}

fn sorted_unique(ids: &[ElementId]) -> Vec<ElementId> {
    let mut v = ids.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

impl Hypergraph {
    /// Builds a hypergraph from raw id lists. Permutations and repeats are
    /// collapsed, and empty lists only set the empty-trace flag.
    pub fn canonicalize<I, E>(raw_edges: I, n: usize) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[ElementId]>,
    {
        let mut edges = BTreeSet::new();
        let mut empty_trace = false;
        for raw in raw_edges {
            let raw = raw.as_ref();
            check_ids(raw, n)?;
            if raw.is_empty() {
                empty_trace = true;
            } else {
                edges.insert(sorted_unique(raw));
            }
        }
        Ok(Hypergraph {
            n,
            labels: default_labels(n),
            weights: vec![1.0; n],
            edges: edges.into_iter().collect(),
            witnesses: None,
            empty_trace,
        })
    }

    /// Like [`Hypergraph::canonicalize`] but each raw edge carries the id of
    /// the range that produced it. The first producer of each distinct edge
    /// is kept as its witness.
    pub fn canonicalize_witnessed<I, E>(raw_edges: I, n: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (E, usize)>,
        E: AsRef<[ElementId]>,
    {
        let mut edges: BTreeMap<Vec<ElementId>, usize> = BTreeMap::new();
        let mut empty_trace = false;
        for (raw, witness) in raw_edges {
            let raw = raw.as_ref();
            check_ids(raw, n)?;
            if raw.is_empty() {
                empty_trace = true;
            } else {
                edges.entry(sorted_unique(raw)).or_insert(witness);
            }
        }
        let (edges, witnesses): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
        Ok(Hypergraph {
            n,
            labels: default_labels(n),
            weights: vec![1.0; n],
            edges,
            witnesses: Some(witnesses),
            empty_trace,
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::invalid(format!(
                "expected {} weights, got {}",
                self.n,
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::invalid(format!("weight {w} is not a finite non-negative number")));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::invalid(format!(
                "expected {} labels, got {}",
                self.n,
                labels.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_empty_trace(mut self, empty_trace: bool) -> Self {
        self.empty_trace = empty_trace;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<ElementId>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, id: ElementId) -> f64 {
        self.weights[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, id: ElementId) -> &str {
        &self.labels[id]
    }

    pub fn witnesses(&self) -> Option<&[usize]> {
        self.witnesses.as_deref()
    }

    pub fn has_empty_trace(&self) -> bool {
        self.empty_trace
    }

    pub fn contains_edge(&self, edge: &[ElementId]) -> bool {
        self.edges.binary_search_by(|e| e.as_slice().cmp(edge)).is_ok()
    }

    pub fn total_weight(&self, ids: &[ElementId]) -> f64 {
        ids.iter().fold(0.0, |acc, &i| acc + self.weights[i])
    }

    pub fn profile(&self) -> EdgeCardinalityProfile {
        let mut counts = BTreeMap::new();
        for e in &self.edges {
            *counts.entry(e.len()).or_insert(0) += 1;
        }
        EdgeCardinalityProfile { counts }
    }

    /// Number of distinct edges with `1 <= |e| <= k`.
    pub fn count_edges_at_most(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        Ok(self.edges.iter().filter(|e| e.len() <= k).count())
    }

    /// Traces of all edges on `subset`, with the ground set renumbered to
    /// positions in the sorted subset.
    pub fn restrict_trace(&self, subset: &[ElementId]) -> Result<Hypergraph> {
        check_ids(subset, self.n)?;
        let subset = sorted_unique(subset);
        let mut new_id = vec![usize::MAX; self.n];
        for (pos, &old) in subset.iter().enumerate() {
            new_id[old] = pos;
        }
        let raw = self.edges.iter().enumerate().map(|(idx, e)| {
            let trace: Vec<ElementId> = e
                .iter()
                .filter_map(|&i| (new_id[i] != usize::MAX).then_some(new_id[i]))
                .collect();
            let witness = self.witnesses.as_ref().map_or(idx, |w| w[idx]);
            (trace, witness)
        });
        let mut h = Hypergraph::canonicalize_witnessed(raw, subset.len())?;
        if self.witnesses.is_none() {
            h.witnesses = None;
        }
        h.empty_trace |= self.empty_trace;
        h.weights = subset.iter().map(|&i| self.weights[i]).collect();
        h.labels = subset.iter().map(|&i| self.labels[i].clone()).collect();
        Ok(h)
    }

    /// Whether every subset of `set` occurs as a trace `set ∩ e`. The empty
    /// subset is realized by an edge disjoint from `set` or by the
    /// empty-trace flag.
    pub fn is_shattered(&self, set: &[ElementId]) -> bool {
        let d = set.len();
        if d >= usize::BITS as usize - 1 {
            return false;
        }
        let mut seen = vec![false; 1 << d];
        let mut remaining = 1usize << d;
        if self.empty_trace {
            seen[0] = true;
            remaining -= 1;
        }
        for e in &self.edges {
            let mut mask = 0usize;
            for (bit, id) in set.iter().enumerate() {
                if e.binary_search(id).is_ok() {
                    mask |= 1 << bit;
                }
            }
            if !seen[mask] {
                seen[mask] = true;
                remaining -= 1;
                if remaining == 0 {
                    return true;
                }
            }
        }
        remaining == 0
    }

    /// Lexicographically smallest `d`-subset of the ground set that is
    /// shattered, if any.
    ///
    /// Only sets contained in some edge can be shattered, and every subset of
    /// a shattered set is shattered, so the search grows sets in increasing id
    /// order and drops any prefix that fails either test.
    pub fn find_shattered_subset(&self, d: usize) -> Result<Option<Vec<ElementId>>> {
        if d == 0 || d > self.n {
            return Err(Error::invalid(format!(
                "shattered-set size must be in 1..={}, got {d}",
                self.n
            )));
        }
        let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (idx, e) in self.edges.iter().enumerate() {
            for &i in e {
                incidence[i].push(idx);
            }
        }
        let mut current = Vec::with_capacity(d);
        let all: Vec<usize> = (0..self.edges.len()).collect();
        Ok(self.shatter_search(d, 0, &all, &incidence, &mut current))
    }

    fn shatter_search(
        &self,
        d: usize,
        start: ElementId,
        covering: &[usize],
        incidence: &[Vec<usize>],
        current: &mut Vec<ElementId>,
    ) -> Option<Vec<ElementId>> {
        if current.len() == d {
            return Some(current.clone());
        }
        let needed = d - current.len();
        for x in start..self.n {
            if self.n - x < needed {
                break;
            }
            let next_covering = intersect_sorted(covering, &incidence[x]);
            if next_covering.is_empty() {
                continue;
            }
            current.push(x);
            if self.is_shattered(current) {
                if let Some(found) = self.shatter_search(d, x + 1, &next_covering, incidence, current)
                {
                    return Some(found);
                }
            }
            current.pop();
        }
        None
    }

    /// Largest `d <= limit` for which a shattered `d`-set exists.
    pub fn max_shattered_size(&self, limit: usize) -> usize {
        let mut best = 0;
        for d in 1..=limit.min(self.n) {
            match self.find_shattered_subset(d) {
                Ok(Some(_)) => best = d,
                _ => break,
            }
        }
        best
    }

    /// Unordered pairs `{a, b}` of `subfamily` that lie together in some edge
    /// meeting at most `k` members of `subfamily`. Pairs are returned as
    /// `(a, b)` with `a < b`.
    pub fn k_good_pairs(&self, subfamily: &[ElementId], k: usize) -> Result<BTreeSet<(ElementId, ElementId)>> {
        if k < 2 {
            return Err(Error::invalid(format!("k must be at least 2, got {k}")));
        }
        check_ids(subfamily, self.n)?;
        let mut member = vec![false; self.n];
        for &i in subfamily {
            member[i] = true;
        }
        let mut pairs = HashSet::new();
        let mut trace = Vec::new();
        for e in &self.edges {
            trace.clear();
            trace.extend(e.iter().copied().filter(|&i| member[i]));
            if trace.len() < 2 || trace.len() > k {
                continue;
            }
            for (pos, &a) in trace.iter().enumerate() {
                for &b in &trace[pos + 1..] {
                    pairs.insert((a, b));
                }
            }
        }
        Ok(pairs.into_iter().collect())
    }

    pub fn count_k_good_pairs(&self, subfamily: &[ElementId], k: usize) -> Result<usize> {
        Ok(self.k_good_pairs(subfamily, k)?.len())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// On-disk form: `{"n", "weights", "edges", "empty_trace"}` plus optional
/// labels and witnesses.
#[derive(Serialize, Deserialize)]
struct HypergraphDoc {
    n: usize,
    #[serde(default)]
    weights: Vec<f64>,
    edges: Vec<Vec<ElementId>>,
    #[serde(default)]
    empty_trace: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<usize>>,
}

impl TryFrom<HypergraphDoc> for Hypergraph {
    type Error = Error;

    fn try_from(doc: HypergraphDoc) -> Result<Self> {
        let mut h = match doc.witnesses {
            Some(w) if w.len() == doc.edges.len() => {
                Hypergraph::canonicalize_witnessed(doc.edges.into_iter().zip(w), doc.n)?
            }
            Some(_) => return Err(Error::invalid("witness list length differs from edge list")),
            None => Hypergraph::canonicalize(doc.edges, doc.n)?,
        };
        h.empty_trace |= doc.empty_trace;
        if !doc.weights.is_empty() {
            h = h.with_weights(doc.weights)?;
        }
        if let Some(labels) = doc.labels {
            h = h.with_labels(labels)?;
        }
        Ok(h)
    }
}

impl From<Hypergraph> for HypergraphDoc {
    fn from(h: Hypergraph) -> Self {
        let default = h.labels == default_labels(h.n);
        HypergraphDoc {
            n: h.n,
            weights: h.weights,
            edges: h.edges,
            empty_trace: h.empty_trace,
            labels: (!default).then_some(h.labels),
            witnesses: h.witnesses,
        }
    }
}
