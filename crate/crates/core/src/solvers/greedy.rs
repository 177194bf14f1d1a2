use super::{reject_empty_edges, Diagnostics, DomSetResult};
use crate::error::Result;
use crate::hypergraph::Hypergraph;

/// Classic weighted greedy: repeatedly take the element minimizing
/// `weight / (unhit edges it would hit)`, ties to the lower id.
///
/// The result weighs at most `H(d) <= 1 + ln m` times the LP optimum, where
/// `d` is the largest number of edges through one element; that factor is
/// stored in `diagnostics.approx_bound` so callers can check it.
pub fn greedy_hitting_set(h: &Hypergraph) -> Result<DomSetResult> {
    reject_empty_edges(h)?;
    let m = h.edge_count();
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    for (idx, e) in h.edges().iter().enumerate() {
        for &i in e {
            incidence[i].push(idx);
        }
    }
    let mut unhit_count: Vec<usize> = incidence.iter().map(Vec::len).collect();
    let mut hit = vec![false; m];
    let mut remaining = m;
    let mut chosen = Vec::new();
    let mut rounds = 0;
    while remaining > 0 {
        rounds += 1;
        let mut best: Option<usize> = None;
        for i in 0..h.n() {
            if unhit_count[i] == 0 {
                continue;
            }
            let better = match best {
                None => true,
                // w_i / c_i < w_b / c_b, cross-multiplied.
                Some(b) => h.weight(i) * (unhit_count[b] as f64) < h.weight(b) * (unhit_count[i] as f64),
            };
            if better {
                best = Some(i);
            }
        }
        let pick = best.expect("an unhit non-empty edge has a candidate");
        chosen.push(pick);
        for &idx in &incidence[pick] {
            if !hit[idx] {
                hit[idx] = true;
                remaining -= 1;
                for &j in &h.edges()[idx] {
                    unhit_count[j] -= 1;
                }
            }
        }
    }
    let diagnostics = Diagnostics {
        iterations: rounds,
        approx_bound: Some(1.0 + (m.max(1) as f64).ln()),
        ..Default::default()
    };
    DomSetResult::new(h, "greedy", chosen, diagnostics)
}
