//! Search for a point of one member not covered by any other member.
//!
//! The search is sound but incomplete: candidates come from a fixed recipe
//! and each one is accepted only after exact membership tests against every
//! other member. Returning `None` does not prove the member is covered.

use std::f64::consts::TAU;

use super::predicates::{circle_circle_points, segment_intersection};
use super::{Elements, Point, PseudoDiskFamily};
use crate::error::Result;

/// Relative size of the inward nudge applied to boundary candidates.
const NUDGE: f64 = 1e-6;

/// A point of member `id` lying outside every other member of `family`.
pub fn find_private_point(family: &PseudoDiskFamily, id: usize) -> Option<Point> {
    search(family, id, family, Some(id))
}

/// A point of member `id` of `target` lying outside every member of `others`.
pub fn find_private_point_in(
    target: &PseudoDiskFamily,
    id: usize,
    others: &PseudoDiskFamily,
) -> Result<Option<Point>> {
    target.check_compatible(others)?;
    Ok(search(target, id, others, None))
}

fn search(
    target: &PseudoDiskFamily,
    id: usize,
    others: &PseudoDiskFamily,
    skip: Option<usize>,
) -> Option<Point> {
    let delta = NUDGE * target.size(id);
    let touching: Vec<usize> = (0..others.len())
        .filter(|&j| Some(j) != skip && target.meets(id, others, j, 0.0))
        .collect();
    let accept = |p: Point| {
        target.contains(id, p)
            && (0..others.len()).all(|j| Some(j) == skip || !others.contains(j, p))
    };

    let mut candidates = match (target.elements(), others.elements()) {
        (Elements::Disks(t), Elements::Disks(o)) | (Elements::Circles(t), Elements::Circles(o)) => {
            disk_candidates(&t[id], o, &touching, delta)
        }
        (
            Elements::Homothets { template, items: t },
            Elements::Homothets { items: o, .. },
        ) => {
            let poly = t[id].polygon(template);
            let polys: Vec<Vec<Point>> = touching.iter().map(|&j| o[j].polygon(template)).collect();
            polygon_candidates(&poly, t[id].map(template.centroid()), &polys, delta)
        }
        _ => return None,
    };

    // Crossings of two other boundaries inside the target, nudged along the axes.
    let mut vertices = Vec::new();
    for (a_pos, &a) in touching.iter().enumerate() {
        for &b in &touching[a_pos + 1..] {
            vertices.extend(boundary_crossings(others, a, b));
        }
    }
    for v in vertices {
        if target.contains(id, v) {
            candidates.extend([
                Point::new(v.x + delta, v.y),
                Point::new(v.x - delta, v.y),
                Point::new(v.x, v.y + delta),
                Point::new(v.x, v.y - delta),
            ]);
        }
    }

    candidates.into_iter().find(|&p| accept(p))
}

fn disk_candidates(
    d: &super::Disk,
    others: &[super::Disk],
    touching: &[usize],
    delta: f64,
) -> Vec<Point> {
    let c = d.center();
    let mut out = vec![c];
    let mut angles: Vec<f64> = touching
        .iter()
        .flat_map(|&j| circle_circle_points(d, &others[j]))
        .map(|p| (p.y - c.y).atan2(p.x - c.x).rem_euclid(TAU))
        .collect();
    if angles.is_empty() {
        angles = vec![0.0, TAU / 4.0, TAU / 2.0, 3.0 * TAU / 4.0];
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let inner = (d.r - delta).max(0.0);
    for (i, &a) in angles.iter().enumerate() {
        let next = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + TAU };
        let mid = 0.5 * (a + next);
        out.push(Point::new(c.x + inner * mid.cos(), c.y + inner * mid.sin()));
    }
    out
}

fn polygon_candidates(poly: &[Point], centroid: Point, others: &[Vec<Point>], delta: f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = vec![centroid];
    // Perimeter parameter: edge index plus position along the edge.
    let mut params: Vec<f64> = Vec::new();
    for other in others {
        let m = other.len();
        for i in 0..n {
            for j in 0..m {
                if let Some((t, _)) =
                    segment_intersection(poly[i], poly[(i + 1) % n], other[j], other[(j + 1) % m])
                {
                    params.push(i as f64 + t);
                }
            }
        }
    }
    if params.is_empty() {
        params = (0..n).map(|i| i as f64).collect();
    }
    params.sort_by(f64::total_cmp);
    params.dedup();
    let at = |s: f64| {
        let s = s.rem_euclid(n as f64);
        let i = (s.floor() as usize).min(n - 1);
        let t = s - i as f64;
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    };
    let nudge = |p: Point| {
        let (dx, dy) = (centroid.x - p.x, centroid.y - p.y);
        let len = (dx * dx + dy * dy).sqrt();
        if len == 0.0 {
            p
        } else {
            Point::new(p.x + delta * dx / len, p.y + delta * dy / len)
        }
    };
    for (i, &s) in params.iter().enumerate() {
        let next = if i + 1 < params.len() { params[i + 1] } else { params[0] + n as f64 };
        out.push(nudge(at(0.5 * (s + next))));
    }
    // Vertices are the extreme points of the member; covering them is
    // hardest, so try them too.
    out.extend(poly.iter().map(|&v| nudge(v)));
    out
}

fn boundary_crossings(family: &PseudoDiskFamily, a: usize, b: usize) -> Vec<Point> {
    match family.elements() {
        Elements::Disks(d) | Elements::Circles(d) => circle_circle_points(&d[a], &d[b]),
        Elements::Homothets { template, items } => {
            let pa = items[a].polygon(template);
            let pb = items[b].polygon(template);
            let (na, nb) = (pa.len(), pb.len());
            let mut out = Vec::new();
            for i in 0..na {
                for j in 0..nb {
                    if let Some((_, p)) =
                        segment_intersection(pa[i], pa[(i + 1) % na], pb[j], pb[(j + 1) % nb])
                    {
                        out.push(p);
                    }
                }
            }
            out
        }
    }
}
