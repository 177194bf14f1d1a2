//! Experiment harness: measured counts and ratios on seeded random families,
//! summarized by medians, doubling ratios and least-squares slopes, and
//! compared against fixed acceptance windows.
//!
//! Random families keep the density of the supplied [`GenSpec`] as `n`
//! changes: the region side is rescaled by `sqrt(n / spec.n)`. A fixed region
//! would make the families denser as `n` grows and every per-element count
//! would drift upward.

use std::io::Write;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    derive_seed, gen_random_family, pairwise_intersecting_circles, rng_from_seed, GenSpec, WeightScheme, RNG_ALGORITHM,
};
use crate::geometry::{build_intersection_hypergraph, neighborhood_hypergraph};
use crate::hypergraph::Hypergraph;
use crate::solvers::{
    exact_with, greedy_hitting_set, round_and_repair, solve_lp, verify_hitting_set, ExactConfig, DEFAULT_EPSILON,
    WEIGHT_TOLERANCE,
};

pub const DEFAULT_N_LIST: [usize; 4] = [200, 400, 800, 1600];
pub const DEFAULT_K_MAX: usize = 8;
pub const DEFAULT_TRIALS: usize = 10;
/// Members per unit area of the default disk families. With radii in
/// `[0.5, 1.0]` a member meets about two others on average.
pub const DEFAULT_DENSITY: f64 = 0.28;
pub const RATIO_DENSITY: f64 = 1.0;
pub const DEFAULT_RMIN: f64 = 0.5;
pub const DEFAULT_RMAX: f64 = 1.0;

/// Doubling-ratio window standing in for linear growth in `n`.
pub const LINEAR_WINDOW: (f64, f64) = (1.5, 2.5);
/// Upper bound on the log-log slope of `count/n` against `k`.
pub const CUBIC_SLOPE_MAX: f64 = 3.3;
/// Upper bound on the relative growth per doubling of k-good pairs per element.
pub const KGOOD_GROWTH_MAX: f64 = 0.05;
/// Upper bound on the slope of median `lp_round / LP*` against `ln n`.
pub const ROUNDING_SLOPE_MAX: f64 = 0.1;
/// Largest ground set on which the ratio experiment runs the exact solver.
pub const EXACT_MAX_N: usize = 22;

/// Disk spec at [`DEFAULT_DENSITY`] for `n` members.
pub fn default_disk_spec(n: usize, seed: u64) -> GenSpec {
    GenSpec::disks(n, (n as f64 / DEFAULT_DENSITY).sqrt(), DEFAULT_RMIN, DEFAULT_RMAX, seed)
}

/// `base` resized to `n` members at the same density, with its own seed.
pub fn spec_at(base: &GenSpec, n: usize, seed: u64) -> GenSpec {
    let side = base.side * (n as f64 / base.n as f64).sqrt();
    base.clone().with_n(n).with_side(side).with_seed(seed)
}

/// One measurement, or one derived statistic when `trial` is empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub n: usize,
    pub k: Option<usize>,
    pub trial: Option<usize>,
    pub seed: u64,
    pub metric: String,
    pub value: f64,
    pub per_n: Option<f64>,
    pub doubling_ratio: Option<f64>,
    pub slope: Option<f64>,
    pub error: Option<String>,
}

impl ExperimentRecord {
    fn measured(experiment: &str, n: usize, k: Option<usize>, trial: usize, seed: u64, metric: &str, value: f64) -> Self {
        ExperimentRecord {
            experiment: experiment.to_string(),
            n,
            k,
            trial: Some(trial),
            seed,
            metric: metric.to_string(),
            value,
            per_n: None,
            doubling_ratio: None,
            slope: None,
            error: None,
        }
    }

    fn summary(experiment: &str, n: usize, k: Option<usize>, seed: u64, metric: &str, value: f64) -> Self {
        ExperimentRecord { trial: None, ..Self::measured(experiment, n, k, 0, seed, metric, value) }
    }
}

/// A pre-registered acceptance window and how the measurement fared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowCheck {
    pub name: String,
    pub value: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub passed: bool,
}

impl WindowCheck {
    pub fn new(name: impl Into<String>, value: f64, lo: Option<f64>, hi: Option<f64>) -> Self {
        let passed = value.is_finite() && lo.is_none_or(|l| value >= l) && hi.is_none_or(|h| value <= h);
        WindowCheck { name: name.into(), value, lo, hi, passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub experiment: String,
    pub seed: u64,
    pub generator: Option<GenSpec>,
    pub records: Vec<ExperimentRecord>,
    pub windows: Vec<WindowCheck>,
}

impl ExperimentOutput {
    pub fn passed(&self) -> bool {
        self.windows.iter().all(|w| w.passed)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Generation(e.to_string()))
    }

    /// Manifest with the generator spec, seeds, code version and windows.
    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "experiment": self.experiment,
            "seed": self.seed,
            "generator": self.generator,
            "rng": RNG_ALGORITHM,
            "code_version": env!("CARGO_PKG_VERSION"),
            "records": self.records.len(),
            "windows": self.windows,
            "passed": self.passed(),
        })
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) })
}

/// Ordinary least-squares slope of `y` on `x`; `None` with fewer than two
/// distinct `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] == 0 {
        return Err(Error::invalid("n list must be non-empty, positive and strictly ascending"));
    }
    Ok(())
}

/// Counts of edges of cardinality at most `k` for `k = 1..=k_max` on
/// neighborhood hypergraphs of random families.
///
/// Windows: for each `k <= 4` and each step of `n_list`, the median over
/// trials of `count(2n, k) / count(n, k)` lies in [`LINEAR_WINDOW`]; for each
/// `n`, the slope of `log(median count / n)` against `log k` is at most
/// [`CUBIC_SLOPE_MAX`]. Doubling windows only apply where consecutive sizes
/// differ by a factor of two.
pub fn shallow_edge_growth(
    n_list: &[usize],
    k_max: usize,
    trials: usize,
    gen: &GenSpec,
    seed: u64,
) -> Result<ExperimentOutput> {
    const NAME: &str = "shallow_edge_growth";
    check_n_list(n_list)?;
    if k_max < 1 || trials < 1 {
        return Err(Error::invalid("k_max and trials must be at least 1"));
    }
    gen.validate()?;
    let tasks: Vec<(usize, usize)> = n_list.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let counts: Vec<(u64, Vec<usize>)> = tasks
        .par_iter()
        .map(|&(n, t)| {
            let s = derive_seed(seed, &[n as u64, t as u64]);
            let h = neighborhood_hypergraph(&gen_random_family(&spec_at(gen, n, s))?)?;
            let profile = h.profile();
            Ok((s, (1..=k_max).map(|k| profile.at_most(k)).collect()))
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    for (&(n, t), (s, c)) in tasks.iter().zip(&counts) {
        for (k, &count) in (1..=k_max).zip(c) {
            let mut r = ExperimentRecord::measured(NAME, n, Some(k), t, *s, "edges_at_most", count as f64);
            r.per_n = Some(count as f64 / n as f64);
            records.push(r);
        }
    }
    let count_at = |ni: usize, t: usize, k: usize| counts[ni * trials + t].1[k - 1] as f64;

    let mut windows = Vec::new();
    for (ni, &n) in n_list.iter().enumerate() {
        let mut points = Vec::new();
        for k in 1..=k_max {
            let med = median(&(0..trials).map(|t| count_at(ni, t, k)).collect::<Vec<_>>()).unwrap_or(0.0);
            let mut r = ExperimentRecord::summary(NAME, n, Some(k), seed, "median_edges_at_most", med);
            r.per_n = Some(med / n as f64);
            if ni > 0 && n == 2 * n_list[ni - 1] {
                let ratios: Vec<f64> = (0..trials)
                    .filter(|&t| count_at(ni - 1, t, k) > 0.0)
                    .map(|t| count_at(ni, t, k) / count_at(ni - 1, t, k))
                    .collect();
                let ratio = median(&ratios).unwrap_or(f64::NAN);
                r.doubling_ratio = Some(ratio);
                if k <= 4 {
                    windows.push(WindowCheck::new(
                        format!("doubling_ratio n={}->{n} k={k}", n_list[ni - 1]),
                        ratio,
                        Some(LINEAR_WINDOW.0),
                        Some(LINEAR_WINDOW.1),
                    ));
                }
            }
            if med > 0.0 {
                points.push(((k as f64).ln(), (med / n as f64).ln()));
            }
            records.push(r);
        }
        if let Some(slope) = least_squares_slope(&points) {
            let mut r = ExperimentRecord::summary(NAME, n, None, seed, "loglog_slope_per_n_vs_k", slope);
            r.slope = Some(slope);
            records.push(r);
            windows.push(WindowCheck::new(format!("loglog_slope n={n}"), slope, None, Some(CUBIC_SLOPE_MAX)));
        }
    }
    Ok(ExperimentOutput { experiment: NAME.into(), seed, generator: Some(gen.clone()), records, windows })
}

/// Cardinality-2 edge counts of the circle-boundary construction. Any count
/// other than `n(n-1)/2` is an error.
pub fn counterexample_growth(n_list: &[usize], seed: u64) -> Result<ExperimentOutput> {
    const NAME: &str = "counterexample_growth";
    if n_list.iter().any(|&n| n < 2) {
        return Err(Error::invalid("counterexample needs n >= 2"));
    }
    let counts: Vec<(u64, usize)> = n_list
        .par_iter()
        .map(|&n| {
            let s = derive_seed(seed, &[n as u64]);
            let (p, f) = pairwise_intersecting_circles(n, s)?;
            Ok((s, build_intersection_hypergraph(&p, &f)?.profile().exactly(2)))
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    let mut windows = Vec::new();
    for (&n, &(s, count)) in n_list.iter().zip(&counts) {
        let expected = n * (n - 1) / 2;
        if count != expected {
            return Err(Error::Verification(format!(
                "counterexample with n={n} has {count} cardinality-2 edges, expected {expected}"
            )));
        }
        let mut r = ExperimentRecord::measured(NAME, n, Some(2), 0, s, "edges_of_cardinality_2", count as f64);
        r.per_n = Some(count as f64 / n as f64);
        records.push(r);
        let exp = expected as f64;
        windows.push(WindowCheck::new(format!("pairs n={n}"), count as f64, Some(exp), Some(exp)));
    }
    Ok(ExperimentOutput { experiment: NAME.into(), seed, generator: None, records, windows })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VcRow {
    pub name: String,
    pub n: usize,
    pub edges: usize,
    pub shattered_4: Option<Vec<usize>>,
    pub shattered_5: Option<Vec<usize>>,
    pub max_shattered: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VcReport {
    pub rows: Vec<VcRow>,
    pub size_5_hits: usize,
    pub size_4_hits: usize,
}

/// Searches each hypergraph for shattered sets of sizes 4 and 5 and reports
/// its largest shattered size (capped at 5).
pub fn vc_scan(instances: &[(String, Hypergraph)]) -> Result<VcReport> {
    let rows: Vec<VcRow> = instances
        .par_iter()
        .map(|(name, h)| {
            let find = |d: usize| if d <= h.n() { h.find_shattered_subset(d) } else { Ok(None) };
            let shattered_4 = find(4)?;
            let shattered_5 = if shattered_4.is_some() { find(5)? } else { None };
            Ok(VcRow {
                name: name.clone(),
                n: h.n(),
                edges: h.edge_count(),
                shattered_4,
                shattered_5,
                max_shattered: h.max_shattered_size(5),
            })
        })
        .collect::<Result<_>>()?;
    Ok(VcReport {
        size_5_hits: rows.iter().filter(|r| r.shattered_5.is_some()).count(),
        size_4_hits: rows.iter().filter(|r| r.shattered_4.is_some()).count(),
        rows,
    })
}

/// `count` random disk instances with independent ground and range families:
/// `|P|` in `[10, 40]`, `|F|` in `[|P|, 200]`, all in a square of side 4.
/// Range radii span `[0.05, 3]` so both tiny and covering ranges occur.
pub fn random_vc_instances(count: usize, seed: u64) -> Result<Vec<(String, Hypergraph)>> {
    use rand::Rng;
    (0..count)
        .map(|i| {
            let s = derive_seed(seed, &[i as u64]);
            let mut rng = rng_from_seed(s);
            let n = rng.random_range(10..=40);
            let m = rng.random_range(n..=200);
            let p = gen_random_family(&GenSpec::disks(n, 4.0, 0.3, 1.0, derive_seed(s, &[0])))?;
            let f = gen_random_family(&GenSpec::disks(m, 4.0, 0.05, 3.0, derive_seed(s, &[1])))?;
            Ok((format!("random-{i} seed={s}"), build_intersection_hypergraph(&p, &f)?))
        })
        .collect()
}

/// k-good pairs per element on random subfamilies. For each `m`, a family of
/// `2m` members is drawn at the density of `gen` (ranges: the family itself)
/// and a uniformly random subfamily of size `m` is examined.
///
/// Window: for each `k`, the least-squares slope of the median ratio against
/// `log2 m`, divided by the mean of those medians, is at most
/// [`KGOOD_GROWTH_MAX`].
pub fn kgood_linearity(
    m_list: &[usize],
    k_list: &[usize],
    trials: usize,
    gen: &GenSpec,
    seed: u64,
) -> Result<ExperimentOutput> {
    const NAME: &str = "kgood_linearity";
    check_n_list(m_list)?;
    if k_list.iter().any(|&k| k < 2) || k_list.is_empty() || trials < 1 {
        return Err(Error::invalid("k values must be at least 2 and trials at least 1"));
    }
    gen.validate()?;
    let tasks: Vec<(usize, usize)> = m_list.iter().flat_map(|&m| (0..trials).map(move |t| (m, t))).collect();
    let counts: Vec<(u64, Vec<usize>)> = tasks
        .par_iter()
        .map(|&(m, t)| {
            let s = derive_seed(seed, &[m as u64, t as u64]);
            let h = neighborhood_hypergraph(&gen_random_family(&spec_at(gen, 2 * m, s))?)?;
            let mut rng = rng_from_seed(derive_seed(s, &[1]));
            let mut sub = sample(&mut rng, 2 * m, m).into_vec();
            sub.sort_unstable();
            let c = k_list.iter().map(|&k| h.count_k_good_pairs(&sub, k)).collect::<Result<_>>()?;
            Ok((s, c))
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    for (&(m, t), (s, c)) in tasks.iter().zip(&counts) {
        for (&k, &count) in k_list.iter().zip(c) {
            let mut r = ExperimentRecord::measured(NAME, m, Some(k), t, *s, "k_good_pairs", count as f64);
            r.per_n = Some(count as f64 / m as f64);
            records.push(r);
        }
    }
    let mut windows = Vec::new();
    for (ki, &k) in k_list.iter().enumerate() {
        let mut points = Vec::new();
        for (mi, &m) in m_list.iter().enumerate() {
            let ratios: Vec<f64> = (0..trials).map(|t| counts[mi * trials + t].1[ki] as f64 / m as f64).collect();
            let med = median(&ratios).unwrap_or(0.0);
            let mut r = ExperimentRecord::summary(NAME, m, Some(k), seed, "median_k_good_pairs_per_m", med);
            r.per_n = Some(med);
            records.push(r);
            points.push(((m as f64).log2(), med));
        }
        let mean = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
        if let Some(slope) = least_squares_slope(&points) {
            let growth = if mean > 0.0 { slope / mean } else { 0.0 };
            let mut r = ExperimentRecord::summary(NAME, 0, Some(k), seed, "relative_growth_per_doubling", growth);
            r.slope = Some(slope);
            records.push(r);
            windows.push(WindowCheck::new(format!("growth_per_doubling k={k}"), growth, None, Some(KGOOD_GROWTH_MAX)));
        }
    }
    Ok(ExperimentOutput { experiment: NAME.into(), seed, generator: Some(gen.clone()), records, windows })
}

/// Solver weights on weighted random neighborhood hypergraphs.
///
/// Per instance: LP optimum, greedy, lp_round and (for `n <= 22`) exact
/// weight, plus their ratios. Failures are recorded in the `error` column and
/// the run continues. Windows: every `weight / LP* >= 1`; every
/// `greedy / exact` within `[1, 1 + ln m]`; every `LP* <= exact`; and the
/// slope of median `lp_round / LP*` against `ln n` at most
/// [`ROUNDING_SLOPE_MAX`] when at least two sizes are given.
pub fn ratio_experiment(n_list: &[usize], trials: usize, gen: &GenSpec, seed: u64) -> Result<ExperimentOutput> {
    const NAME: &str = "ratio_experiment";
    check_n_list(n_list)?;
    if trials < 1 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    gen.validate()?;
    let tasks: Vec<(usize, usize)> = n_list.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let rows: Vec<Vec<ExperimentRecord>> = tasks
        .par_iter()
        .map(|&(n, t)| {
            let s = derive_seed(seed, &[n as u64, t as u64]);
            let record = |metric: &str, value: f64| ExperimentRecord::measured(NAME, n, None, t, s, metric, value);
            match ratio_row(&spec_at(gen, n, s), s) {
                Ok(values) => values.into_iter().map(|(metric, v)| record(metric, v)).collect(),
                Err(e) => vec![ExperimentRecord { error: Some(e.to_string()), ..record("failed", f64::NAN) }],
            }
        })
        .collect();
    let records: Vec<ExperimentRecord> = rows.into_iter().flatten().collect();

    let get = |metric: &'static str| ok_rows(&records, metric);
    let mut windows = Vec::new();
    let failures = records.iter().filter(|r| r.error.is_some()).count();
    windows.push(WindowCheck::new("failed_rows", failures as f64, None, Some(0.0)));
    for metric in ["greedy_over_lp", "lp_round_over_lp", "exact_over_lp"] {
        let worst = get(metric).map(|r| r.value).fold(f64::INFINITY, f64::min);
        if worst.is_finite() {
            windows.push(WindowCheck::new(format!("min {metric}"), worst, Some(1.0 - WEIGHT_TOLERANCE), None));
        }
    }
    let greedy_excess = get("greedy_over_exact_minus_bound").map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    if greedy_excess.is_finite() {
        windows.push(WindowCheck::new("max greedy/exact - (1 + ln m)", greedy_excess, None, Some(WEIGHT_TOLERANCE)));
        let worst = get("greedy_over_exact").map(|r| r.value).fold(f64::INFINITY, f64::min);
        windows.push(WindowCheck::new("min greedy/exact", worst, Some(1.0 - WEIGHT_TOLERANCE), None));
    }

    let mut summary = Vec::new();
    let mut points = Vec::new();
    for &n in n_list {
        let values: Vec<f64> = get("lp_round_over_lp").filter(|r| r.n == n).map(|r| r.value).collect();
        if let Some(med) = median(&values) {
            summary.push(ExperimentRecord::summary(NAME, n, None, seed, "median_lp_round_over_lp", med));
            points.push(((n as f64).ln(), med));
        }
    }
    if let Some(slope) = least_squares_slope(&points) {
        let mut r = ExperimentRecord::summary(NAME, 0, None, seed, "slope_median_lp_round_over_lp_vs_ln_n", slope);
        r.slope = Some(slope);
        summary.push(r);
        windows.push(WindowCheck::new("lp_round/LP* slope vs ln n", slope, None, Some(ROUNDING_SLOPE_MAX)));
    }
    let mut records = records;
    records.extend(summary);
    Ok(ExperimentOutput { experiment: NAME.into(), seed, generator: Some(gen.clone()), records, windows })
}

fn ok_rows<'a>(records: &'a [ExperimentRecord], metric: &'a str) -> impl Iterator<Item = &'a ExperimentRecord> + 'a {
    records.iter().filter(move |r| r.metric == metric && r.error.is_none())
}

fn ratio_row(spec: &GenSpec, seed: u64) -> Result<Vec<(&'static str, f64)>> {
    let h = neighborhood_hypergraph(&gen_random_family(spec)?)?;
    let lp = solve_lp(&h, DEFAULT_EPSILON)?;
    let greedy = greedy_hitting_set(&h)?;
    let rounded = round_and_repair(&h, &lp, derive_seed(seed, &[2]), None)?;
    for r in [&greedy, &rounded] {
        if !verify_hitting_set(&h, &r.chosen) {
            return Err(Error::Verification(format!("{} output is not a hitting set", r.method)));
        }
    }
    let lp_value = lp.objective;
    let mut row = vec![
        ("edges", h.edge_count() as f64),
        ("lp", lp_value),
        ("greedy", greedy.total_weight),
        ("lp_round", rounded.total_weight),
        ("greedy_over_lp", greedy.total_weight / lp_value),
        ("lp_round_over_lp", rounded.total_weight / lp_value),
    ];
    if h.n() <= EXACT_MAX_N {
        let exact = exact_with(&h, &ExactConfig::default())?;
        if !verify_hitting_set(&h, &exact.chosen) {
            return Err(Error::Verification("exact output is not a hitting set".into()));
        }
        let bound = 1.0 + (h.edge_count().max(1) as f64).ln();
        let g = greedy.total_weight / exact.total_weight;
        row.extend([
            ("exact", exact.total_weight),
            ("exact_over_lp", exact.total_weight / lp_value),
            ("greedy_over_exact", g),
            ("greedy_over_exact_minus_bound", g - bound),
            ("lp_round_over_exact", rounded.total_weight / exact.total_weight),
        ]);
    }
    Ok(row)
}

/// Weighted disk spec used by the ratio experiment by default: denser than
/// [`default_disk_spec`] (about seven neighbors each) so the solvers have
/// real choices to make.
pub fn default_ratio_spec(n: usize, seed: u64) -> GenSpec {
    GenSpec::disks(n, (n as f64 / RATIO_DENSITY).sqrt(), DEFAULT_RMIN, DEFAULT_RMAX, seed)
        .with_weights(WeightScheme::Uniform01)
}
