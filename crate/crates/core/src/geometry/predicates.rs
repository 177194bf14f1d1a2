//! Intersection predicates on closed regions.
//!
//! Every test compares squared distances or cross products built directly from
//! input coordinates. No square roots are taken. The `_tol` variants widen the
//! comparison by an absolute tolerance. With a tolerance of zero they agree
//! with the plain versions.

use serde::{Deserialize, Serialize};

use super::{ConvexTemplate, Disk, Homothet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn diagonal(&self) -> f64 {
        self.min.dist2(self.max).sqrt()
    }

    pub fn inflate(self, by: f64) -> BBox {
        BBox {
            min: Point::new(self.min.x - by, self.min.y - by),
            max: Point::new(self.max.x + by, self.max.y + by),
        }
    }
}

#[inline]
pub(crate) fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn center_dist2(a: &Disk, b: &Disk) -> f64 {
    a.center().dist2(b.center())
}

/// Closed disks meet iff the squared center distance is at most `(ra + rb)^2`.
/// Tangent disks intersect.
pub fn disks_intersect(a: &Disk, b: &Disk) -> bool {
    disks_intersect_tol(a, b, 0.0)
}

pub fn disks_intersect_tol(a: &Disk, b: &Disk, tol: f64) -> bool {
    let reach = a.r + b.r + tol;
    center_dist2(a, b) <= reach * reach
}

/// Number of points in which the boundary circles of `a` and `b` meet:
/// 2 for a proper crossing, 1 for tangency (internal or external), 0 for
/// disjoint or strictly nested circles.
pub fn circle_crossing_count(a: &Disk, b: &Disk) -> Result<u8> {
    circle_crossing_count_tol(a, b, 0.0)
}

pub fn circle_crossing_count_tol(a: &Disk, b: &Disk, tol: f64) -> Result<u8> {
    let d2 = center_dist2(a, b);
    if d2 == 0.0 && a.r == b.r {
        return Err(Error::Degenerate(format!(
            "circles {} and {} coincide",
            a.id, b.id
        )));
    }
    let diff = (a.r - b.r).abs();
    let sum = a.r + b.r;
    let near = |bound: f64| {
        let lo = (bound - tol).max(0.0);
        let hi = bound + tol;
        lo * lo <= d2 && d2 <= hi * hi
    };
    if near(diff) || near(sum) {
        return Ok(1);
    }
    if diff * diff < d2 && d2 < sum * sum {
        Ok(2)
    } else {
        Ok(0)
    }
}

pub fn disk_contains(d: &Disk, p: Point) -> bool {
    d.center().dist2(p) <= d.r * d.r
}

/// Closed convex polygon (counterclockwise) contains `p`.
pub fn polygon_contains(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], p) >= 0.0)
}

/// Projection interval of a polygon onto the axis `(ax, ay)` (not normalized).
fn project(poly: &[Point], ax: f64, ay: f64) -> (f64, f64) {
    poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let v = p.x * ax + p.y * ay;
        (lo.min(v), hi.max(v))
    })
}

/// Separating-axis test on two closed convex polygons. Touching polygons
/// intersect.
pub fn convex_polygons_intersect(a: &[Point], b: &[Point], tol: f64) -> bool {
    for poly in [a, b] {
        let n = poly.len();
        for i in 0..n {
            let p = poly[i];
            let q = poly[(i + 1) % n];
            // Edge normal.
            let (ax, ay) = (q.y - p.y, p.x - q.x);
            let slack = tol * (ax * ax + ay * ay).sqrt();
            let (alo, ahi) = project(a, ax, ay);
            let (blo, bhi) = project(b, ax, ay);
            if ahi + slack < blo || bhi + slack < alo {
                return false;
            }
        }
    }
    true
}

pub fn homothets_intersect(
    template_a: &ConvexTemplate,
    a: &Homothet,
    template_b: &ConvexTemplate,
    b: &Homothet,
) -> Result<bool> {
    homothets_intersect_tol(template_a, a, template_b, b, 0.0)
}

pub fn homothets_intersect_tol(
    template_a: &ConvexTemplate,
    a: &Homothet,
    template_b: &ConvexTemplate,
    b: &Homothet,
    tol: f64,
) -> Result<bool> {
    if template_a != template_b {
        return Err(Error::invalid("homothets built from different templates"));
    }
    Ok(convex_polygons_intersect(
        &a.polygon(template_a),
        &b.polygon(template_b),
        tol,
    ))
}

/// Intersection points of two circles. Empty for disjoint, nested, or
/// coincident circles.
pub fn circle_circle_points(a: &Disk, b: &Disk) -> Vec<Point> {
    let d2 = center_dist2(a, b);
    if d2 == 0.0 {
        return Vec::new();
    }
    let d = d2.sqrt();
    if d > a.r + b.r || d < (a.r - b.r).abs() {
        return Vec::new();
    }
    let along = (a.r * a.r - b.r * b.r + d2) / (2.0 * d);
    let h2 = a.r * a.r - along * along;
    let h = if h2 > 0.0 { h2.sqrt() } else { 0.0 };
    let (ux, uy) = ((b.cx - a.cx) / d, (b.cy - a.cy) / d);
    let base = Point::new(a.cx + along * ux, a.cy + along * uy);
    if h == 0.0 {
        return vec![base];
    }
    vec![
        Point::new(base.x - h * uy, base.y + h * ux),
        Point::new(base.x + h * uy, base.y - h * ux),
    ]
}

/// Intersection point of closed segments `p1p2` and `q1q2`, with the
/// parameter along the first segment. Collinear overlaps yield nothing.
pub(crate) fn segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Option<(f64, Point)> {
    let rx = p2.x - p1.x;
    let ry = p2.y - p1.y;
    let sx = q2.x - q1.x;
    let sy = q2.y - q1.y;
    let denom = rx * sy - ry * sx;
    if denom == 0.0 {
        return None;
    }
    let qpx = q1.x - p1.x;
    let qpy = q1.y - p1.y;
    let t = (qpx * sy - qpy * sx) / denom;
    let u = (qpx * ry - qpy * rx) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((t, Point::new(p1.x + t * rx, p1.y + t * ry)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(cx: f64, cy: f64, r: f64) -> Disk {
        Disk::new(0, cx, cy, r, 1.0).unwrap()
    }

    fn unit_square() -> ConvexTemplate {
        ConvexTemplate::new(vec![
            Point::new(-0.5, -0.5),
            Point::new(0.5, -0.5),
            Point::new(0.5, 0.5),
            Point::new(-0.5, 0.5),
        ])
        .unwrap()
    }

    fn hom(scale: f64, tx: f64, ty: f64) -> Homothet {
        Homothet::new(0, scale, tx, ty, 1.0).unwrap()
    }

    #[test]
    fn disk_intersection_cases() {
        assert!(!disks_intersect(&disk(0.0, 0.0, 1.0), &disk(3.0, 0.0, 1.0)));
        assert!(disks_intersect(&disk(0.0, 0.0, 1.0), &disk(2.0, 0.0, 1.0)));
        assert!(disks_intersect(&disk(0.0, 0.0, 2.0), &disk(0.0, 0.5, 0.5)));
    }

    #[test]
    fn disk_tolerance_widens() {
        let a = disk(0.0, 0.0, 1.0);
        let b = disk(2.1, 0.0, 1.0);
        assert!(!disks_intersect(&a, &b));
        assert!(disks_intersect_tol(&a, &b, 0.2));
    }

    #[test]
    fn crossing_counts() {
        let c = |a, b| circle_crossing_count(&a, &b).unwrap();
        assert_eq!(c(disk(0.0, 0.0, 1.0), disk(1.0, 0.0, 1.0)), 2);
        assert_eq!(c(disk(0.0, 0.0, 2.0), disk(0.0, 0.5, 1.0)), 0);
        assert_eq!(c(disk(0.0, 0.0, 1.0), disk(2.0, 0.0, 1.0)), 1);
        // Internal tangency.
        assert_eq!(c(disk(0.0, 0.0, 2.0), disk(1.0, 0.0, 1.0)), 1);
        assert_eq!(c(disk(0.0, 0.0, 1.0), disk(5.0, 0.0, 1.0)), 0);
    }

    #[test]
    fn identical_circles_are_degenerate() {
        assert!(matches!(
            circle_crossing_count(&disk(1.0, 1.0, 1.0), &disk(1.0, 1.0, 1.0)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn homothet_cases() {
        let t = unit_square();
        assert!(!homothets_intersect(&t, &hom(1.0, 0.0, 0.0), &t, &hom(1.0, 2.0, 0.0)).unwrap());
        assert!(homothets_intersect(&t, &hom(1.0, 0.0, 0.0), &t, &hom(1.0, 1.0, 0.0)).unwrap());
        assert!(homothets_intersect(&t, &hom(2.0, 0.0, 0.0), &t, &hom(0.5, 0.0, 0.0)).unwrap());
    }

    #[test]
    fn homothet_template_mismatch() {
        let t = unit_square();
        let tri = ConvexTemplate::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(homothets_intersect(&t, &hom(1.0, 0.0, 0.0), &tri, &hom(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn circle_points_lie_on_both() {
        let a = disk(0.0, 0.0, 1.0);
        let b = disk(1.0, 0.5, 0.8);
        let pts = circle_circle_points(&a, &b);
        assert_eq!(pts.len(), 2);
        for p in pts {
            assert!((a.center().dist2(p).sqrt() - a.r).abs() < 1e-12);
            assert!((b.center().dist2(p).sqrt() - b.r).abs() < 1e-12);
        }
    }

    #[test]
    fn segments() {
        let hit = segment_intersection(
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
        );
        assert_eq!(hit, Some((0.5, Point::new(1.0, 0.0))));
        assert!(segment_intersection(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
        )
        .is_none());
    }
}
