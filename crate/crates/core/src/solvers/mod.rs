//! Weighted hitting-set solvers and the dominating-set pipeline.
//!
//! A dominating set of the intersection graph of `P` is exactly a hitting set
//! of the neighborhood hypergraph `H(P)`: every closed neighborhood must
//! contain a chosen member. The pipeline builds `H(P)`, solves the hitting-set
//! problem with the requested method, and checks the answer both ways.

mod exact;
mod greedy;
mod lp;
mod rounding;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{intersection_graph, neighborhood_hypergraph, PseudoDiskFamily};
use crate::hypergraph::{ElementId, Hypergraph};

pub use exact::{exact_min_weight_hitting_set, exact_with, ExactConfig};
pub use greedy::greedy_hitting_set;
pub use lp::{solve_lp, FractionalSolution, DEFAULT_EPSILON};
pub use rounding::{default_alpha, round_and_repair, GreedyRounding, LpRounding, RoundingStrategy};

/// Slack allowed when comparing objective values computed along different
/// floating-point paths.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Greedy,
    LpRound,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::LpRound => "lp_round",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "greedy" => Ok(Method::Greedy),
            "lp_round" | "lp-round" => Ok(Method::LpRound),
            other => Err(Error::invalid(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Optimal value of the covering LP, when it was solved.
    pub lp_value: Option<f64>,
    pub seed: Option<u64>,
    /// Greedy rounds, search nodes, or simplex pivots, depending on method.
    pub iterations: u64,
    /// Proven ratio bound against the LP optimum (greedy: `1 + ln m`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_repair_weight: Option<f64>,
    /// `sum_i w_i * min(1, alpha * x_i)`, the exact mean of the pre-repair weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_pre_repair_weight: Option<f64>,
    /// `alpha * LP objective`, an upper bound on the expectation above.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_repair_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repaired_edges: Option<usize>,
}

/// A verified hitting set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomSetResult {
    pub method: String,
    pub chosen: Vec<ElementId>,
    pub chosen_labels: Vec<String>,
    pub total_weight: f64,
    /// For each canonical edge, the smallest chosen id it contains.
    pub certificate: Vec<ElementId>,
    pub diagnostics: Diagnostics,
}

impl DomSetResult {
    /// Packages `chosen` as a result, failing if some edge is missed.
    pub fn new(h: &Hypergraph, method: &str, mut chosen: Vec<ElementId>, diagnostics: Diagnostics) -> Result<Self> {
        chosen.sort_unstable();
        chosen.dedup();
        if let Some(&bad) = chosen.iter().find(|&&i| i >= h.n()) {
            return Err(Error::invalid(format!("chosen id {bad} out of range")));
        }
        let certificate = h
            .edges()
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                e.iter()
                    .copied()
                    .find(|i| chosen.binary_search(i).is_ok())
                    .ok_or_else(|| Error::Verification(format!("edge {idx} {e:?} is not hit")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DomSetResult {
            method: method.to_string(),
            chosen_labels: chosen.iter().map(|&i| h.label(i).to_string()).collect(),
            total_weight: h.total_weight(&chosen),
            chosen,
            certificate,
            diagnostics,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Every edge of `h` contains a member of `chosen`.
pub fn verify_hitting_set(h: &Hypergraph, chosen: &[ElementId]) -> bool {
    let mut member = vec![false; h.n()];
    for &i in chosen {
        if i >= h.n() {
            return false;
        }
        member[i] = true;
    }
    h.edges().iter().all(|e| e.iter().any(|&i| member[i]))
}

/// Every vertex is chosen or adjacent to a chosen vertex.
pub fn verify_dominating_set(adjacency: &[Vec<usize>], chosen: &[usize]) -> bool {
    let mut member = vec![false; adjacency.len()];
    for &i in chosen {
        if i >= adjacency.len() {
            return false;
        }
        member[i] = true;
    }
    adjacency
        .iter()
        .enumerate()
        .all(|(v, nbrs)| member[v] || nbrs.iter().any(|&u| member[u]))
}

pub(crate) fn reject_empty_edges(h: &Hypergraph) -> Result<()> {
    // Canonical hypergraphs never store empty edges, but a ground set of
    // size zero with edges cannot occur either; this guards hand-built input.
    if h.edges().iter().any(Vec::is_empty) {
        return Err(Error::Infeasible("an edge contains no elements".into()));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub method: Method,
    pub seed: u64,
    pub epsilon: f64,
    pub exact: ExactConfig,
    /// Rounding scale; `ln(2m)` when absent.
    pub alpha: Option<f64>,
    /// Solve the LP relaxation for every method and record its value.
    pub compute_lp: bool,
}

impl PipelineOptions {
    pub fn new(method: Method, seed: u64) -> Self {
        PipelineOptions {
            method,
            seed,
            epsilon: DEFAULT_EPSILON,
            exact: ExactConfig::default(),
            alpha: None,
            compute_lp: true,
        }
    }
}

/// Solves the weighted hitting-set problem on `h` with the configured method
/// and checks the answer.
pub fn solve_hitting_set(h: &Hypergraph, opts: &PipelineOptions) -> Result<DomSetResult> {
    reject_empty_edges(h)?;
    let lp = if opts.compute_lp || opts.method == Method::LpRound {
        Some(solve_lp(h, opts.epsilon)?)
    } else {
        None
    };
    let mut result = match opts.method {
        Method::Exact => exact_with(h, &opts.exact)?,
        Method::Greedy => greedy_hitting_set(h)?,
        Method::LpRound => {
            let x = lp.as_ref().expect("solved above");
            LpRounding { alpha: opts.alpha }.round(h, x, opts.seed)?
        }
    };
    result.diagnostics.seed = Some(opts.seed);
    if let Some(x) = &lp {
        result.diagnostics.lp_value = Some(x.objective);
        let slack = WEIGHT_TOLERANCE * (1.0 + x.objective);
        if result.total_weight + slack < x.objective {
            return Err(Error::Verification(format!(
                "{} weight {} is below the LP bound {}",
                result.method, result.total_weight, x.objective
            )));
        }
        if let Some(bound) = result.diagnostics.approx_bound {
            if result.total_weight > bound * x.objective + slack {
                return Err(Error::Verification(format!(
                    "greedy weight {} exceeds (1 + ln m) * LP = {}",
                    result.total_weight,
                    bound * x.objective
                )));
            }
        }
    }
    if !verify_hitting_set(h, &result.chosen) {
        return Err(Error::Verification("solver output is not a hitting set".into()));
    }
    Ok(result)
}

/// Minimum-weight dominating set of the intersection graph of `family`.
pub fn domset_pipeline(family: &PseudoDiskFamily, method: Method, seed: u64) -> Result<DomSetResult> {
    domset_pipeline_with(family, &PipelineOptions::new(method, seed))
}

pub fn domset_pipeline_with(family: &PseudoDiskFamily, opts: &PipelineOptions) -> Result<DomSetResult> {
    let h = neighborhood_hypergraph(family)?;
    let result = solve_hitting_set(&h, opts)?;
    let adjacency = intersection_graph(family)?;
    if !verify_dominating_set(&adjacency, &result.chosen) {
        return Err(Error::Verification("solver output is not a dominating set".into()));
    }
    Ok(result)
}
