//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use pseudodisk::experiments::{
    counterexample_growth, default_disk_spec, default_ratio_spec, kgood_linearity, random_vc_instances,
    ratio_experiment, shallow_edge_growth, vc_scan, DEFAULT_K_MAX, DEFAULT_N_LIST, DEFAULT_TRIALS,
};
use pseudodisk::gallery::{build_good_pair_graph, euler_bound_check, verify_good_pair_graph};
use pseudodisk::generators::{
    derive_seed, fig4_abstract_pattern, gen_random_family, star_fixture, weighted_star_fixture, GenSpec,
    WeightScheme,
};
use pseudodisk::solvers::{
    domset_pipeline_with, exact_with, solve_lp, verify_hitting_set, ExactConfig, PipelineOptions, DEFAULT_EPSILON,
};
use pseudodisk::{neighborhood_hypergraph, FamilyKind, Method};

const SEED: u64 = 20_140_601;
/// Absolute tolerance for weights that must match exactly in exact arithmetic.
const WEIGHT_TOL: f64 = 1e-9;
const DOUBLING_WINDOW: (f64, f64) = (1.5, 2.5);
const SLOPE_MAX: f64 = 3.3;
const KGOOD_GROWTH_MAX: f64 = 0.05;
const ROUNDING_SLOPE_MAX: f64 = 0.1;
const VC_INSTANCES: usize = 100;
const EULER_INSTANCES: u64 = 500;
const EULER_SAMPLES: usize = 20;
const SOLVER_INSTANCES: u64 = 200;
const KGOOD_TRIALS: usize = 30;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed <= limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn star_fixture_reproduction() -> Outcome {
    let h = neighborhood_hypergraph(&star_fixture()).map_err(|e| e.to_string())?;
    let expected: Vec<Vec<usize>> = vec![vec![0, 1], vec![0, 1, 2, 3, 4, 5], vec![0, 2], vec![0, 3], vec![0, 4], vec![0, 5]];
    check(h.edges() == expected.as_slice(), format!("edges {:?}", h.edges()))?;
    for method in [Method::Exact, Method::Greedy] {
        let r = domset_pipeline_with(&star_fixture(), &PipelineOptions::new(method, SEED)).map_err(|e| e.to_string())?;
        check(
            r.total_weight == 1.0 && r.chosen_labels == ["P1"],
            format!("{method}: weight {} chosen {:?}", r.total_weight, r.chosen_labels),
        )?;
    }
    Ok("6 edges as listed; exact and greedy give weight 1 = {P1}".into())
}

fn weighted_star() -> Outcome {
    let p = weighted_star_fixture(10.0).map_err(|e| e.to_string())?;
    let r = domset_pipeline_with(&p, &PipelineOptions::new(Method::Exact, SEED)).map_err(|e| e.to_string())?;
    let h = neighborhood_hypergraph(&p).map_err(|e| e.to_string())?;
    let lp = solve_lp(&h, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
    check((r.total_weight - 5.0).abs() <= WEIGHT_TOL, format!("exact weight {}", r.total_weight))?;
    check((lp.objective - 5.0).abs() <= WEIGHT_TOL, format!("LP objective {}", lp.objective))?;
    Ok(format!("exact {} LP {:.12}", r.total_weight, lp.objective))
}

fn counterexample_growth_check() -> Outcome {
    let counts = counterexample_growth(&[5, 10, 20], SEED).map_err(|e| e.to_string())?;
    let values: Vec<f64> = counts.records.iter().map(|r| r.value).collect();
    check(values == [10.0, 45.0, 190.0], format!("counts {values:?}"))?;
    let contrast = shallow_edge_growth(&DEFAULT_N_LIST, 2, DEFAULT_TRIALS, &default_disk_spec(200, SEED), SEED)
        .map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = contrast
        .records
        .iter()
        .filter(|r| r.k == Some(2) && r.trial.is_none())
        .filter_map(|r| r.doubling_ratio)
        .collect();
    check(ratios.len() == DEFAULT_N_LIST.len() - 1, "missing doubling ratios")?;
    for &r in &ratios {
        check(
            (DOUBLING_WINDOW.0..=DOUBLING_WINDOW.1).contains(&r),
            format!("disk doubling ratio {r:.3} outside window"),
        )?;
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    Ok(format!("circles 10/45/190; disk count2 doubling medians [{}]", shown.join(", ")))
}

fn vc_dimension() -> Outcome {
    let instances = random_vc_instances(VC_INSTANCES, SEED).map_err(|e| e.to_string())?;
    for (name, h) in &instances {
        check(h.n() <= 40 && h.edge_count() <= 200, format!("{name} exceeds size limits"))?;
    }
    let report = vc_scan(&instances).map_err(|e| e.to_string())?;
    check(report.size_5_hits == 0, format!("{} disk instances shatter a 5-set", report.size_5_hits))?;
    let fig4 = vc_scan(&[("fig4".into(), fig4_abstract_pattern())]).map_err(|e| e.to_string())?;
    check(fig4.rows[0].shattered_4.is_some(), "fig4 pattern has no shattered 4-set")?;
    Ok(format!(
        "{VC_INSTANCES} disk instances: size 5 none, size 4 in {}; fig4 shatters 4",
        report.size_4_hits
    ))
}

fn shallow_edge_envelope() -> Outcome {
    let out = shallow_edge_growth(&DEFAULT_N_LIST, DEFAULT_K_MAX, DEFAULT_TRIALS, &default_disk_spec(200, SEED), SEED)
        .map_err(|e| e.to_string())?;
    let doubling: Vec<_> = out.windows.iter().filter(|w| w.name.starts_with("doubling_ratio")).collect();
    let slopes: Vec<_> = out.windows.iter().filter(|w| w.name.starts_with("loglog_slope")).collect();
    check(doubling.len() == 4 * (DEFAULT_N_LIST.len() - 1), "missing doubling windows")?;
    check(slopes.len() == DEFAULT_N_LIST.len(), "missing slope windows")?;
    for w in doubling.iter().chain(&slopes) {
        check(w.passed, format!("{} = {:.3}", w.name, w.value))?;
    }
    let (lo, hi) = doubling
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), w| (lo.min(w.value), hi.max(w.value)));
    let max_slope = slopes.iter().map(|w| w.value).fold(f64::NEG_INFINITY, f64::max);
    check(max_slope <= SLOPE_MAX, format!("slope {max_slope:.3}"))?;
    Ok(format!("doubling medians k<=4 in [{lo:.3}, {hi:.3}]; max log-log slope {max_slope:.3}"))
}

fn euler_bound() -> Outcome {
    let mut edges = 0;
    for i in 0..EULER_INSTANCES {
        let s = derive_seed(SEED, &[6, i]);
        let kind = if i % 2 == 0 { FamilyKind::Disk } else { FamilyKind::Homothet };
        let n = 10 + (s % 51) as usize;
        let spec = GenSpec::disks(n, (n as f64 / 0.6).sqrt(), 0.4, 1.4, s).with_kind(kind);
        let p = gen_random_family(&spec).map_err(|e| e.to_string())?;
        // Half the instances use P itself as ranges, half an unrelated family.
        let f = if i % 4 < 2 {
            p.clone()
        } else {
            gen_random_family(&spec.clone().with_seed(derive_seed(s, &[1])).with_n(2 * n)).map_err(|e| e.to_string())?
        };
        let g = build_good_pair_graph(&p, &f).map_err(|e| e.to_string())?;
        let problems = verify_good_pair_graph(&g, &p, &f);
        check(problems.is_empty(), format!("instance {i}: {}", problems.join("; ")))?;
        let report = euler_bound_check(&g, EULER_SAMPLES, s);
        check(report.samples_checked == EULER_SAMPLES, "samples not checked")?;
        check(report.passed(), format!("instance {i}: {:?}", report.violations))?;
        edges += report.edge_count;
    }
    Ok(format!("{EULER_INSTANCES} instances x {EULER_SAMPLES} samples, 0 violations ({edges} good-pair edges)"))
}

fn solver_ratios() -> Outcome {
    let mut worst_greedy = 0.0f64;
    for i in 0..SOLVER_INSTANCES {
        let s = derive_seed(SEED, &[7, i]);
        let n = 5 + (s % 16) as usize;
        let density = [0.3, 0.8, 1.5][(i % 3) as usize];
        let spec = GenSpec::disks(n, (n as f64 / density).sqrt(), 0.5, 1.0, s).with_weights(WeightScheme::Uniform01);
        let p = gen_random_family(&spec).map_err(|e| e.to_string())?;
        let h = neighborhood_hypergraph(&p).map_err(|e| e.to_string())?;
        let exact = exact_with(&h, &ExactConfig::default()).map_err(|e| e.to_string())?;
        let lp = solve_lp(&h, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
        check(lp.objective <= exact.total_weight + WEIGHT_TOL, format!("instance {i}: LP above exact"))?;
        for method in [Method::Exact, Method::Greedy, Method::LpRound] {
            let r = domset_pipeline_with(&p, &PipelineOptions::new(method, s)).map_err(|e| format!("instance {i}: {e}"))?;
            check(verify_hitting_set(&h, &r.chosen), format!("instance {i}: {method} output not a hitting set"))?;
            if method == Method::Greedy {
                let ratio = r.total_weight / exact.total_weight;
                let bound = 1.0 + (h.edge_count() as f64).ln();
                check(ratio <= bound + WEIGHT_TOL, format!("instance {i}: greedy/exact {ratio} > {bound}"))?;
                worst_greedy = worst_greedy.max(ratio);
            }
        }
    }
    let out = ratio_experiment(&[50, 100, 200, 400], DEFAULT_TRIALS, &default_ratio_spec(50, SEED), SEED)
        .map_err(|e| e.to_string())?;
    for w in &out.windows {
        check(w.passed, format!("{} = {}", w.name, w.value))?;
    }
    let slope = out
        .windows
        .iter()
        .find(|w| w.name.starts_with("lp_round/LP* slope"))
        .map(|w| w.value)
        .ok_or("no slope window")?;
    check(slope <= ROUNDING_SLOPE_MAX, format!("lp_round/LP* slope {slope}"))?;
    Ok(format!(
        "{SOLVER_INSTANCES} instances verified, worst greedy/exact {worst_greedy:.3}; lp_round/LP* slope {slope:.4}"
    ))
}

fn kgood_growth() -> Outcome {
    let out = kgood_linearity(&[100, 200, 400, 800], &[2, 3], KGOOD_TRIALS, &default_disk_spec(100, SEED), SEED)
        .map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for w in &out.windows {
        check(w.value <= KGOOD_GROWTH_MAX, format!("{} = {:.4}", w.name, w.value))?;
        parts.push(format!("{} {:.4}", w.name, w.value));
    }
    check(out.windows.len() == 2, "missing k windows")?;
    Ok(parts.join(", "))
}

fn run_cli(bin: &Path, dir: &Path, threads: usize, name: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = dir.join(format!("{name}-t{threads}"));
    let status = Command::new(bin)
        .args(args)
        .arg("--threads")
        .arg(threads.to_string())
        .arg("--out")
        .arg(&out)
        .env_remove("PSEUDODISK_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    check(status.status.success(), format!("`{}` failed: {}", args.join(" "), String::from_utf8_lossy(&status.stderr)))?;
    let mut bytes = std::fs::read(&out).map_err(|e| e.to_string())?;
    let mut manifest = out.into_os_string();
    manifest.push(".manifest.json");
    if let Ok(extra) = std::fs::read(&manifest) {
        bytes.extend(extra);
    }
    Ok(bytes)
}

fn determinism() -> Outcome {
    let bin = Path::new(env!("CARGO_BIN_EXE_pseudodisk"));
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let instance = dir.path().join("instance.json");
    let made = Command::new(bin)
        .args(["gen", "--n", "300", "--weights", "uniform01", "--seed", "5", "--out"])
        .arg(&instance)
        .output()
        .map_err(|e| e.to_string())?;
    check(made.status.success(), "gen failed")?;
    let inst = instance.to_str().ok_or("non-UTF-8 temp path")?;
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("gen", vec!["gen", "--n", "500", "--kind", "homothet"]),
        ("count", vec!["count", "--in", inst, "--k", "3"]),
        ("count-csv", vec!["count", "--in", inst, "--format", "csv"]),
        ("vc", vec!["vc", "--random", "20"]),
        ("goodpairs", vec!["goodpairs", "--in", inst, "--k", "3"]),
        ("domset-greedy", vec!["domset", "--in", inst, "--method", "greedy"]),
        ("domset-lp", vec!["domset", "--in", inst, "--method", "lp_round"]),
        ("gallery", vec!["gallery", "--in", inst, "--samples", "50"]),
        ("gallery-ce", vec!["gallery", "--fixture", "counterexample:12", "--abstract"]),
        ("shallow", vec!["bench", "--experiment", "shallow", "--n-list", "200,400", "--trials", "4", "--format", "csv"]),
        ("kgood", vec!["bench", "--experiment", "kgood", "--n-list", "100,200", "--trials", "4"]),
        ("ratio", vec!["bench", "--experiment", "ratio", "--n-list", "20,40", "--trials", "4"]),
    ];
    for (name, args) in &cases {
        let one = run_cli(bin, dir.path(), 1, name, args)?;
        let eight = run_cli(bin, dir.path(), 8, name, args)?;
        check(!one.is_empty(), format!("{name}: empty artifact"))?;
        check(one == eight, format!("{name}: artifacts differ between 1 and 8 threads"))?;
        let again = run_cli(bin, dir.path(), 8, &format!("{name}-again"), args)?;
        check(one == again, format!("{name}: artifacts differ between runs"))?;
    }
    Ok(format!("{} invocations byte-identical at 1 and 8 threads", cases.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "star fixture reproduction", star_fixture_reproduction, Duration::from_secs(1)),
        (2, "weighted star", weighted_star, Duration::from_secs(1)),
        (3, "counterexample quadratic growth", counterexample_growth_check, Duration::from_secs(30)),
        (4, "VC-dimension", vc_dimension, Duration::from_secs(300)),
        (5, "shallow-edge envelope", shallow_edge_envelope, Duration::from_secs(600)),
        (6, "Euler bound", euler_bound, Duration::from_secs(600)),
        (7, "solver soundness and ratios", solver_ratios, Duration::from_secs(600)),
        (8, "k-good linearity", kgood_growth, Duration::from_secs(300)),
        (9, "determinism", determinism, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (id, name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f().and_then(|msg| within(start.elapsed(), limit).map(|()| msg));
        let elapsed = start.elapsed();
        match outcome {
            Ok(msg) => println!("criterion {id} PASS  {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id} FAIL  {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
