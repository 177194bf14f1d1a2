//! Inputs shared by the benchmarks.

use pseudodisk::experiments::{default_disk_spec, default_ratio_spec};
use pseudodisk::generators::gen_random_family;
use pseudodisk::{neighborhood_hypergraph, FamilyKind, Hypergraph, PseudoDiskFamily};

pub const SEED: u64 = 7;

/// Disk or homothet family of `n` members at the harness density.
pub fn family(kind: FamilyKind, n: usize) -> PseudoDiskFamily {
    gen_random_family(&default_disk_spec(n, SEED).with_kind(kind)).expect("valid spec")
}

/// Weighted neighborhood hypergraph at the ratio-experiment density.
pub fn weighted_hypergraph(n: usize) -> Hypergraph {
    let p = gen_random_family(&default_ratio_spec(n, SEED)).expect("valid spec");
    neighborhood_hypergraph(&p).expect("valid family")
}
