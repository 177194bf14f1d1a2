use rand::Rng;

use super::{greedy_hitting_set, Diagnostics, DomSetResult, FractionalSolution};
use crate::error::{Error, Result};
use crate::generators::rng_from_seed;
use crate::hypergraph::Hypergraph;

/// Turns a feasible fractional cover into a verified hitting set.
///
/// This is the slot for constant-factor rounding schemes (such as
/// quasi-uniform sampling). Implementations must return a hitting set of `h`
/// and record its weight.
pub trait RoundingStrategy {
    fn name(&self) -> &'static str;

    fn round(&self, h: &Hypergraph, x: &FractionalSolution, seed: u64) -> Result<DomSetResult>;
}

/// Independent randomized rounding followed by a repair pass.
#[derive(Clone, Copy, Debug, Default)]
pub struct LpRounding {
    /// Inclusion scale; `ln(2m)` when absent.
    pub alpha: Option<f64>,
}

/// Ignores the fractional solution and runs the greedy algorithm.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedyRounding;

impl RoundingStrategy for LpRounding {
    fn name(&self) -> &'static str {
        "lp_round"
    }

    fn round(&self, h: &Hypergraph, x: &FractionalSolution, seed: u64) -> Result<DomSetResult> {
        round_and_repair(h, x, seed, self.alpha)
    }
}

impl RoundingStrategy for GreedyRounding {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn round(&self, h: &Hypergraph, _x: &FractionalSolution, seed: u64) -> Result<DomSetResult> {
        let mut r = greedy_hitting_set(h)?;
        r.diagnostics.seed = Some(seed);
        Ok(r)
    }
}

/// `ln(2m)` for `m` edges.
pub fn default_alpha(edge_count: usize) -> f64 {
    (2.0 * edge_count.max(1) as f64).ln()
}

/// Includes each element independently with probability
/// `min(1, alpha * x_i)`, then walks the edges in canonical order adding the
/// lightest element (lowest id on ties) of every edge still unhit.
///
/// One uniform draw is consumed per element, in id order, so the pre-repair
/// set for a given seed does not depend on `x` beyond the thresholds.
pub fn round_and_repair(
    h: &Hypergraph,
    x: &FractionalSolution,
    seed: u64,
    alpha: Option<f64>,
) -> Result<DomSetResult> {
    if !x.is_feasible(h, 1e-9) {
        return Err(Error::invalid("fractional solution is not a feasible cover of this hypergraph"));
    }
    let alpha = alpha.unwrap_or_else(|| default_alpha(h.edge_count()));
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut member = vec![false; h.n()];
    let mut expected = 0.0;
    for (i, slot) in member.iter_mut().enumerate() {
        let p = (alpha * x.x[i]).min(1.0);
        expected += h.weight(i) * p;
        let u: f64 = rng.random();
        *slot = u < p;
    }
    let pre_repair: Vec<usize> = (0..h.n()).filter(|&i| member[i]).collect();
    let pre_repair_weight = h.total_weight(&pre_repair);

    let mut repaired = 0;
    for e in h.edges() {
        if e.iter().any(|&i| member[i]) {
            continue;
        }
        let lightest = *e
            .iter()
            .min_by(|&&a, &&b| h.weight(a).total_cmp(&h.weight(b)).then(a.cmp(&b)))
            .expect("canonical edges are non-empty");
        member[lightest] = true;
        repaired += 1;
    }
    let chosen = (0..h.n()).filter(|&i| member[i]).collect();
    let diagnostics = Diagnostics {
        lp_value: Some(x.objective),
        seed: Some(seed),
        iterations: 1,
        alpha: Some(alpha),
        pre_repair_weight: Some(pre_repair_weight),
        expected_pre_repair_weight: Some(expected),
        pre_repair_bound: Some(alpha * x.objective),
        repaired_edges: Some(repaired),
        ..Default::default()
    };
    DomSetResult::new(h, "lp_round", chosen, diagnostics)
}
