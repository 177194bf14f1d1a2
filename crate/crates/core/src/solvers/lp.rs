//! The covering LP `min w.x  s.t.  sum_{i in e} x_i >= 1 for every edge e,
//! 0 <= x <= 1`.
//!
//! Solved exactly with a dense primal simplex (Bland's rule) on the dual
//! packing LP `max sum_e y_e  s.t.  sum_{e ∋ i} y_e <= w_i, y >= 0`, whose slack
//! basis is feasible from the start because weights are non-negative. The
//! covering solution is read off the final reduced costs of the slack
//! columns. The upper bounds `x <= 1` never bind at an optimum with
//! non-negative weights, so they are applied by clipping afterwards.

use serde::{Deserialize, Serialize};

use super::reject_empty_edges;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const DEFAULT_EPSILON: f64 = 0.05;

const PIVOT_TOL: f64 = 1e-12;
const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    /// `sum_i w_i x_i`.
    pub objective: f64,
    /// Smallest edge coverage `sum_{i in e} x_i`; absent when there are no edges.
    pub min_coverage: Option<f64>,
    /// Value of the dual packing solution found alongside `x`. Equal to the
    /// objective up to rounding, and a lower bound on every hitting set.
    pub dual_objective: f64,
    /// Dual packing values, one per canonical edge.
    pub dual: Vec<f64>,
    pub pivots: u64,
    pub epsilon: f64,
}

impl FractionalSolution {
    /// Checks bounds and coverage against `h`.
    pub fn is_feasible(&self, h: &Hypergraph, tol: f64) -> bool {
        self.x.len() == h.n()
            && self.x.iter().all(|&v| (0.0..=1.0).contains(&v))
            && h.edges()
                .iter()
                .all(|e| e.iter().map(|&i| self.x[i]).sum::<f64>() >= 1.0 - tol)
    }
}

fn min_coverage(h: &Hypergraph, x: &[f64]) -> Option<f64> {
    h.edges()
        .iter()
        .map(|e| e.iter().map(|&i| x[i]).sum::<f64>())
        .min_by(f64::total_cmp)
}

/// Optimal fractional cover of `h`. `epsilon` is the admissible relative gap
/// in `(0, 0.5]`; the simplex method is exact, so it is only validated and
/// recorded.
pub fn solve_lp(h: &Hypergraph, epsilon: f64) -> Result<FractionalSolution> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 0.5], got {epsilon}")));
    }
    reject_empty_edges(h)?;
    let n = h.n();
    let m = h.edge_count();
    let cols = m + n;
    let width = cols + 1;

    // Row i: sum_{e ∋ i} y_e + s_i = w_i.
    let mut tab = vec![0.0; n * width];
    for (e_idx, e) in h.edges().iter().enumerate() {
        for &i in e {
            tab[i * width + e_idx] = 1.0;
        }
    }
    for i in 0..n {
        tab[i * width + m + i] = 1.0;
        tab[i * width + cols] = h.weight(i);
    }
    // Reduced costs for maximizing sum y: -1 on y columns.
    let mut z = vec![0.0; width];
    z[..m].iter_mut().for_each(|v| *v = -1.0);
    let mut basis: Vec<usize> = (m..m + n).collect();

    let max_pivots = 50 * (cols as u64) + 1000;
    let mut pivots = 0;
    while let Some(enter) = (0..cols).find(|&j| z[j] < -PIVOT_TOL) {
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..n {
            let a = tab[r * width + enter];
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = tab[r * width + cols] / a;
            leave = match leave {
                None => Some((r, ratio)),
                Some((best, best_ratio)) => {
                    if ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[best]) {
                        Some((r, ratio))
                    } else {
                        Some((best, best_ratio))
                    }
                }
            };
        }
        let Some((row, _)) = leave else {
            // Unbounded dual means an uncoverable edge; excluded above.
            return Err(Error::Infeasible("covering LP is infeasible".into()));
        };
        pivot(&mut tab, &mut z, width, row, enter);
        basis[row] = enter;
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::ResourceLimit(format!("simplex exceeded {max_pivots} pivots")));
        }
    }

    let mut dual = vec![0.0; m];
    for (r, &b) in basis.iter().enumerate() {
        if b < m {
            dual[b] = tab[r * width + cols].max(0.0);
        }
    }
    let mut x: Vec<f64> = (0..n).map(|i| z[m + i].max(0.0)).collect();

    let residual = min_coverage(h, &x).map_or(0.0, |c| (1.0 - c).max(0.0));
    if residual > FEASIBILITY_TOL {
        return Err(Error::Verification(format!(
            "simplex solution violates coverage by {residual:e}"
        )));
    }
    if let Some(c) = min_coverage(h, &x) {
        if c < 1.0 {
            let scale = (1.0 / c) * (1.0 + 4.0 * f64::EPSILON);
            x.iter_mut().for_each(|v| *v *= scale);
        }
    }
    x.iter_mut().for_each(|v| *v = v.min(1.0));
    let cov = min_coverage(h, &x);
    if cov.is_some_and(|c| c < 1.0) {
        return Err(Error::Verification("fractional cover is infeasible after scaling".into()));
    }
    let objective = x.iter().zip(h.weights()).fold(0.0, |acc, (x, w)| acc + x * w);
    Ok(FractionalSolution {
        x,
        objective,
        min_coverage: cov,
        dual_objective: dual.iter().fold(0.0, |acc, y| acc + y),
        dual,
        pivots,
        epsilon,
    })
}

fn pivot(tab: &mut [f64], z: &mut [f64], width: usize, row: usize, col: usize) {
    let inv = 1.0 / tab[row * width + col];
    for v in &mut tab[row * width..(row + 1) * width] {
        *v *= inv;
    }
    tab[row * width + col] = 1.0;
    let pivot_row = tab[row * width..(row + 1) * width].to_vec();
    let rows = tab.len() / width;
    for r in 0..rows {
        if r == row {
            continue;
        }
        let f = tab[r * width + col];
        if f != 0.0 {
            let dst = &mut tab[r * width..(r + 1) * width];
            for (d, p) in dst.iter_mut().zip(&pivot_row) {
                *d -= f * p;
            }
            dst[col] = 0.0;
        }
    }
    let f = z[col];
    if f != 0.0 {
        for (d, p) in z.iter_mut().zip(&pivot_row) {
            *d -= f * p;
        }
        z[col] = 0.0;
    }
}
