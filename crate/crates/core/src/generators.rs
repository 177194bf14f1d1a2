//! Seeded instance generators and named fixtures.
//!
//! All randomness comes from [`rng_from_seed`], a ChaCha8 stream seeded from a
//! 64-bit integer. The identifier [`RNG_ALGORITHM`] is written into every
//! generated instance so that tables can be regenerated elsewhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{circle_circle_points, circle_crossing_count, ConvexTemplate, Disk, FamilyKind, Homothet, Instance, Point, PseudoDiskFamily};
use crate::hypergraph::Hypergraph;

pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9, seed_from_u64)";

pub type InstanceRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer, used to derive independent per-task seeds.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut z = base;
    for &p in parts {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(p);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    Unit,
    Uniform01,
    /// Exponential with rate 1.
    Exponential,
}

impl WeightScheme {
    fn draw(self, rng: &mut InstanceRng) -> f64 {
        match self {
            WeightScheme::Unit => 1.0,
            WeightScheme::Uniform01 => rng.random::<f64>(),
            WeightScheme::Exponential => Exp1.sample(rng),
        }
    }
}

impl std::str::FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(WeightScheme::Unit),
            "uniform01" => Ok(WeightScheme::Uniform01),
            "exponential" | "exponential1" => Ok(WeightScheme::Exponential),
            other => Err(Error::invalid(format!("unknown weight scheme `{other}`"))),
        }
    }
}

/// Parameters of a random family: `n` members with centers uniform in
/// `[0, side]^2` and radii (or scales) uniform in `[rmin, rmax]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: FamilyKind,
    pub n: usize,
    pub side: f64,
    pub rmin: f64,
    pub rmax: f64,
    pub weights: WeightScheme,
    pub seed: u64,
    /// Homothet template; a regular hexagon of circumradius 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<Vec<[f64; 2]>>,
}

impl GenSpec {
    pub fn disks(n: usize, side: f64, rmin: f64, rmax: f64, seed: u64) -> Self {
        GenSpec {
            kind: FamilyKind::Disk,
            n,
            side,
            rmin,
            rmax,
            weights: WeightScheme::Unit,
            seed,
            template: None,
        }
    }

    pub fn with_kind(mut self, kind: FamilyKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_weights(mut self, weights: WeightScheme) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_side(mut self, side: f64) -> Self {
        self.side = side;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if !(self.side.is_finite() && self.side > 0.0) {
            return Err(Error::invalid(format!("region side must be positive, got {}", self.side)));
        }
        if !(self.rmin.is_finite() && self.rmax.is_finite() && self.rmin > 0.0 && self.rmin <= self.rmax) {
            return Err(Error::invalid(format!(
                "radius range must satisfy 0 < rmin <= rmax, got [{}, {}]",
                self.rmin, self.rmax
            )));
        }
        Ok(())
    }

    fn template(&self) -> Result<ConvexTemplate> {
        match &self.template {
            Some(v) => ConvexTemplate::new(v.iter().map(|&[x, y]| Point::new(x, y)).collect()),
            None => ConvexTemplate::regular(6),
        }
    }
}

fn uniform(rng: &mut InstanceRng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

pub fn gen_random_family(spec: &GenSpec) -> Result<PseudoDiskFamily> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    match spec.kind {
        FamilyKind::Disk | FamilyKind::CircleBoundary => {
            let mut disks = Vec::with_capacity(spec.n);
            for id in 0..spec.n {
                let cx = uniform(&mut rng, 0.0, spec.side);
                let cy = uniform(&mut rng, 0.0, spec.side);
                let r = uniform(&mut rng, spec.rmin, spec.rmax);
                let w = spec.weights.draw(&mut rng);
                disks.push(Disk::new(id, cx, cy, r, w)?);
            }
            if spec.kind == FamilyKind::Disk {
                PseudoDiskFamily::disks(disks)
            } else {
                PseudoDiskFamily::circles(disks)
            }
        }
        FamilyKind::Homothet => {
            let template = spec.template()?;
            let mut items = Vec::with_capacity(spec.n);
            for id in 0..spec.n {
                let tx = uniform(&mut rng, 0.0, spec.side);
                let ty = uniform(&mut rng, 0.0, spec.side);
                let scale = uniform(&mut rng, spec.rmin, spec.rmax);
                let w = spec.weights.draw(&mut rng);
                items.push(Homothet::new(id, scale, tx, ty, w)?);
            }
            PseudoDiskFamily::homothets(template, items)
        }
    }
}

/// [`gen_random_family`] wrapped as an instance with provenance metadata.
pub fn gen_instance(spec: &GenSpec) -> Result<Instance> {
    let mut inst = Instance::new(gen_random_family(spec)?);
    inst.meta = Some(serde_json::json!({
        "generator": "random_family",
        "spec": spec,
        "rng": RNG_ALGORITHM,
    }));
    Ok(inst)
}

/// Six disks whose intersection graph is a star: `P1` of radius 2 at the
/// origin, and `P2..P6` of radius 1.6 at distance 3.5, spaced 72 degrees apart
/// starting straight up. Each leaf meets `P1` (3.5 <= 3.6) and no other leaf
/// (adjacent centers are about 4.11 apart, more than 3.2). Unit weights.
pub fn star_fixture() -> PseudoDiskFamily {
    let mut disks = vec![Disk::new(0, 0.0, 0.0, 2.0, 1.0).expect("valid disk")];
    for i in 0..5 {
        let angle = (90.0 + 72.0 * i as f64).to_radians();
        disks.push(
            Disk::new(i + 1, 3.5 * angle.cos(), 3.5 * angle.sin(), 1.6, 1.0).expect("valid disk"),
        );
    }
    PseudoDiskFamily::disks(disks)
        .and_then(|f| f.with_labels((1..=6).map(|i| format!("P{i}")).collect()))
        .expect("star fixture is well formed")
}

/// Star fixture with `P1` weighing `center_weight` and every leaf weighing 1.
pub fn weighted_star_fixture(center_weight: f64) -> Result<PseudoDiskFamily> {
    let mut w = vec![1.0; 6];
    w[0] = center_weight;
    star_fixture().with_weights(&w)
}

/// `n` pairwise crossing unit circles plus one tiny circle per pair, placed at
/// one of the pair's two crossing points. Each tiny circle meets exactly its
/// own pair, so `H(P, F)` has `n(n-1)/2` distinct edges of size two.
///
/// Returns `(P, F)`; range `F[t]` belongs to the `t`-th pair in lexicographic
/// order `(0,1), (0,2), ..., (n-2,n-1)`.
pub fn pairwise_intersecting_circles(n: usize, seed: u64) -> Result<(PseudoDiskFamily, PseudoDiskFamily)> {
    if n < 2 {
        return Err(Error::invalid("the circle construction needs n >= 2"));
    }
    let mut rng = rng_from_seed(seed);
    let mut last_reason = String::new();
    for _ in 0..100 {
        match try_circles(n, &mut rng) {
            Ok(pair) => return Ok(pair),
            Err(reason) => last_reason = reason,
        }
    }
    Err(Error::Generation(format!(
        "no valid circle configuration for n = {n} after 100 attempts ({last_reason})"
    )))
}

const MIN_TINY_RADIUS: f64 = 1e-9;

fn try_circles(n: usize, rng: &mut InstanceRng) -> std::result::Result<(PseudoDiskFamily, PseudoDiskFamily), String> {
    // Centers uniform in the disk of radius 0.5, so any two are less than 1
    // apart and every pair of unit circles crosses twice.
    let mut centers: Vec<Point> = Vec::with_capacity(n);
    while centers.len() < n {
        let x = rng.random_range(-0.5..0.5);
        let y = rng.random_range(-0.5..0.5);
        if x * x + y * y < 0.25 {
            centers.push(Point::new(x, y));
        }
    }
    let circles: Vec<Disk> = centers
        .iter()
        .enumerate()
        .map(|(i, c)| Disk::new(i, c.x, c.y, 1.0, 1.0).expect("valid circle"))
        .collect();
    for (i, a) in circles.iter().enumerate() {
        for b in &circles[i + 1..] {
            if a.center().dist2(b.center()) < MIN_TINY_RADIUS * MIN_TINY_RADIUS {
                return Err("two centers coincide".into());
            }
        }
    }

    let mut tiny = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            let mut pts = circle_circle_points(&circles[a], &circles[b]);
            if pts.len() != 2 {
                return Err(format!("circles {a} and {b} do not cross"));
            }
            pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
            let p = pts[0];
            let clearance = circles
                .iter()
                .filter(|c| c.id != a && c.id != b)
                .map(|c| (c.center().dist2(p).sqrt() - c.r).abs())
                .fold(f64::INFINITY, f64::min);
            let radius = if clearance.is_finite() { 0.5 * clearance } else { 0.25 };
            if radius < MIN_TINY_RADIUS {
                return Err(format!("crossing point of {a} and {b} lies on another circle"));
            }
            tiny.push(Disk::new(tiny.len(), p.x, p.y, radius, 1.0).expect("valid circle"));
        }
    }

    // Post-hoc validation with the exact predicate.
    for (i, a) in circles.iter().enumerate() {
        for b in &circles[i + 1..] {
            if circle_crossing_count(a, b).map_err(|e| e.to_string())? != 2 {
                return Err(format!("circles {} and {} do not cross twice", a.id, b.id));
            }
        }
    }
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in &circles {
                let want = if c.id == a || c.id == b { 2 } else { 0 };
                if circle_crossing_count(&tiny[t], c).map_err(|e| e.to_string())? != want {
                    return Err(format!("tiny circle {t} meets circle {} wrongly", c.id));
                }
            }
            t += 1;
        }
    }

    let p = PseudoDiskFamily::circles(circles).map_err(|e| e.to_string())?;
    let f = PseudoDiskFamily::circles(tiny).map_err(|e| e.to_string())?;
    Ok((p, f))
}

/// The circle construction as an instance with `ranges` set.
pub fn counterexample_instance(n: usize, seed: u64) -> Result<Instance> {
    let (p, f) = pairwise_intersecting_circles(n, seed)?;
    let mut inst = Instance::with_ranges(p, f)?;
    inst.meta = Some(serde_json::json!({
        "generator": "pairwise_intersecting_circles",
        "n": n,
        "seed": seed,
        "rng": RNG_ALGORITHM,
    }));
    Ok(inst)
}

/// Four elements with every non-empty subset as an edge and the empty-trace
/// flag set: the trace pattern of a shattered four-set.
pub fn fig4_abstract_pattern() -> Hypergraph {
    let raw: Vec<Vec<usize>> = (1u32..16)
        .map(|mask| (0..4).filter(|b| mask & (1 << b) != 0).collect())
        .collect();
    Hypergraph::canonicalize(raw, 4)
        .expect("ids in range")
        .with_empty_trace(true)
}
