use super::{greedy_hitting_set, reject_empty_edges, Diagnostics, DomSetResult};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Copy, Debug)]
pub struct ExactConfig {
    pub node_limit: u64,
    /// Refuse ground sets larger than this.
    pub max_n: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { node_limit: 10_000_000, max_n: 22 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Free,
    In,
    Out,
}

struct Search<'a> {
    h: &'a Hypergraph,
    state: Vec<State>,
    best_weight: f64,
    best: Vec<usize>,
    nodes: u64,
    limit: u64,
    aborted: bool,
}

impl Search<'_> {
    fn is_hit(&self, e: &[usize]) -> bool {
        e.iter().any(|&i| self.state[i] == State::In)
    }

    fn free<'s>(&'s self, e: &'s [usize]) -> impl Iterator<Item = usize> + 's {
        e.iter().copied().filter(|&i| self.state[i] == State::Free)
    }

    /// Greedy packing of pairwise disjoint unhit edges; each contributes the
    /// cheapest free element it still has.
    fn lower_bound(&self) -> f64 {
        let mut used = vec![false; self.h.n()];
        let mut bound = 0.0;
        for e in self.h.edges() {
            if self.is_hit(e) || self.free(e).any(|i| used[i]) {
                continue;
            }
            let mut cheapest = f64::INFINITY;
            for i in self.free(e) {
                used[i] = true;
                cheapest = cheapest.min(self.h.weight(i));
            }
            bound += cheapest;
        }
        bound
    }

    fn run(&mut self, weight: f64) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        // Unhit edge with the fewest free elements.
        let mut branch: Option<(usize, usize)> = None;
        for (idx, e) in self.h.edges().iter().enumerate() {
            if self.is_hit(e) {
                continue;
            }
            let free = self.free(e).count();
            if branch.is_none_or(|(_, f)| free < f) {
                branch = Some((idx, free));
            }
        }
        let Some((edge_idx, free)) = branch else {
            if weight < self.best_weight {
                self.best_weight = weight;
                self.best = (0..self.h.n()).filter(|&i| self.state[i] == State::In).collect();
            }
            return;
        };
        if free == 0 || weight + self.lower_bound() >= self.best_weight {
            return;
        }
        let mut options: Vec<usize> = self.free(&self.h.edges()[edge_idx]).collect();
        options.sort_by(|&a, &b| self.h.weight(a).total_cmp(&self.h.weight(b)).then(a.cmp(&b)));
        for (pos, &i) in options.iter().enumerate() {
            self.state[i] = State::In;
            self.run(weight + self.h.weight(i));
            // Later branches exclude the elements already tried.
            self.state[i] = State::Out;
            if self.aborted {
                for &j in &options[..=pos] {
                    self.state[j] = State::Free;
                }
                return;
            }
        }
        for &i in &options {
            self.state[i] = State::Free;
        }
    }
}

/// Minimum-weight hitting set by branch and bound, seeded with the greedy
/// solution. Fails with [`Error::NodeLimit`] (carrying the best set found)
/// when the search visits more than `node_limit` nodes.
pub fn exact_min_weight_hitting_set(h: &Hypergraph, node_limit: u64) -> Result<DomSetResult> {
    reject_empty_edges(h)?;
    let start = greedy_hitting_set(h)?;
    let mut search = Search {
        h,
        state: vec![State::Free; h.n()],
        best_weight: start.total_weight,
        best: start.chosen.clone(),
        nodes: 0,
        limit: node_limit,
        aborted: false,
    };
    search.run(0.0);
    let diagnostics = Diagnostics { iterations: search.nodes, ..Default::default() };
    let result = DomSetResult::new(h, "exact", search.best, diagnostics)?;
    if search.aborted {
        return Err(Error::NodeLimit { limit: node_limit, incumbent: Some(Box::new(result)) });
    }
    Ok(result)
}

pub fn exact_with(h: &Hypergraph, config: &ExactConfig) -> Result<DomSetResult> {
    if h.n() > config.max_n {
        return Err(Error::ResourceLimit(format!(
            "exact solver is limited to {} elements, instance has {}",
            config.max_n,
            h.n()
        )));
    }
    exact_min_weight_hitting_set(h, config.node_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{star_fixture, weighted_star_fixture};
    use crate::geometry::neighborhood_hypergraph;
    use crate::solvers::verify_hitting_set;

    fn brute_force(h: &Hypergraph) -> f64 {
        let n = h.n();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << n) {
            let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if verify_hitting_set(h, &chosen) {
                best = best.min(h.total_weight(&chosen));
            }
        }
        best
    }

    #[test]
    fn star_unit() {
        let h = neighborhood_hypergraph(&star_fixture()).unwrap();
        let r = exact_min_weight_hitting_set(&h, 1000).unwrap();
        assert_eq!(r.chosen, vec![0]);
        assert_eq!(r.total_weight, 1.0);
    }

    #[test]
    fn star_heavy_center() {
        let h = neighborhood_hypergraph(&weighted_star_fixture(10.0).unwrap()).unwrap();
        let r = exact_min_weight_hitting_set(&h, 1000).unwrap();
        assert_eq!(r.chosen, vec![1, 2, 3, 4, 5]);
        assert_eq!(r.total_weight, 5.0);
    }

    #[test]
    fn singletons_force_both() {
        let h = Hypergraph::canonicalize(vec![vec![0], vec![1]], 2)
            .unwrap()
            .with_weights(vec![3.0, 4.0])
            .unwrap();
        let r = exact_min_weight_hitting_set(&h, 100).unwrap();
        assert_eq!(r.chosen, vec![0, 1]);
        assert_eq!(r.total_weight, 7.0);
    }

    #[test]
    fn matches_brute_force_on_cycles() {
        // Odd cycles of pairs with varied weights.
        for n in 3..=9 {
            let raw: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
            let weights: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7) % 5) as f64).collect();
            let h = Hypergraph::canonicalize(raw, n).unwrap().with_weights(weights).unwrap();
            let r = exact_min_weight_hitting_set(&h, 1_000_000).unwrap();
            assert_eq!(r.total_weight, brute_force(&h), "cycle of length {n}");
        }
    }

    #[test]
    fn node_limit_returns_incumbent() {
        let raw: Vec<Vec<usize>> = (0..12).map(|i| vec![i, (i + 1) % 12, (i + 5) % 12]).collect();
        let h = Hypergraph::canonicalize(raw, 12).unwrap();
        match exact_min_weight_hitting_set(&h, 2) {
            Err(Error::NodeLimit { limit, incumbent }) => {
                assert_eq!(limit, 2);
                let inc = incumbent.unwrap();
                assert!(verify_hitting_set(&h, &inc.chosen));
            }
            other => panic!("expected node limit, got {other:?}"),
        }
    }

    #[test]
    fn no_edges() {
        let h = Hypergraph::canonicalize(Vec::<Vec<usize>>::new(), 4).unwrap();
        let r = exact_min_weight_hitting_set(&h, 10).unwrap();
        assert!(r.chosen.is_empty());
        assert_eq!(r.total_weight, 0.0);
    }
}
