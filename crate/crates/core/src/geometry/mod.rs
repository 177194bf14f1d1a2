//! Concrete pseudo-disk families and their intersection hypergraphs.
//!
//! Three homogeneous kinds are supported: closed disks, circle boundaries,
//! and homothets (scaled translates) of one strictly convex polygon. Any two
//! members of one such family have boundaries meeting at most twice. Mixing
//! kinds breaks that, so every operation taking two families rejects a kind
//! or template mismatch.

mod build;
mod predicates;
mod private_point;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use build::{
    build_intersection_hypergraph, build_intersection_hypergraph_all_pairs,
    build_intersection_hypergraph_with, intersection_graph, neighborhood_hypergraph, range_edges,
    BuildOptions,
};
pub use predicates::{
    circle_circle_points, circle_crossing_count, circle_crossing_count_tol, convex_polygons_intersect, disk_contains,
    disks_intersect, disks_intersect_tol, homothets_intersect, homothets_intersect_tol,
    polygon_contains, BBox, Point,
};
pub use private_point::{find_private_point, find_private_point_in};

fn check_weight(weight: f64) -> Result<()> {
    if weight.is_finite() && weight >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("weight {weight} is not a finite non-negative number")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub id: usize,
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    pub weight: f64,
}

impl Disk {
    pub fn new(id: usize, cx: f64, cy: f64, r: f64, weight: f64) -> Result<Self> {
        if !(cx.is_finite() && cy.is_finite()) {
            return Err(Error::invalid(format!("disk {id} has a non-finite center")));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::invalid(format!("disk {id} has radius {r}")));
        }
        check_weight(weight)?;
        Ok(Disk { id, cx, cy, r, weight })
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    pub fn bbox(&self) -> BBox {
        BBox {
            min: Point::new(self.cx - self.r, self.cy - self.r),
            max: Point::new(self.cx + self.r, self.cy + self.r),
        }
    }
}

/// A strictly convex polygon, vertices counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexTemplate {
    vertices: Vec<Point>,
}

impl ConvexTemplate {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::invalid("a convex template needs at least 3 vertices"));
        }
        if vertices.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::invalid("template vertex is not finite"));
        }
        // Every other vertex strictly left of every edge: strictly convex,
        // counterclockwise, simple, and free of repeated vertices.
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            for (j, &p) in vertices.iter().enumerate() {
                if j != i && j != (i + 1) % n && predicates::cross(a, b, p) <= 0.0 {
                    return Err(Error::invalid(
                        "template must be strictly convex with counterclockwise vertices",
                    ));
                }
            }
        }
        Ok(ConvexTemplate { vertices })
    }

    /// Regular polygon with circumradius 1 centered at the origin.
    pub fn regular(sides: usize) -> Result<Self> {
        let pts = (0..sides)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / sides as f64;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        ConvexTemplate::new(pts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max(a.dist2(*b));
            }
        }
        best.sqrt()
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Point::new(sx / n, sy / n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Homothet {
    pub id: usize,
    pub scale: f64,
    pub tx: f64,
    pub ty: f64,
    pub weight: f64,
}

impl Homothet {
    pub fn new(id: usize, scale: f64, tx: f64, ty: f64, weight: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::invalid(format!("homothet {id} has scale {scale}")));
        }
        if !(tx.is_finite() && ty.is_finite()) {
            return Err(Error::invalid(format!("homothet {id} has a non-finite translation")));
        }
        check_weight(weight)?;
        Ok(Homothet { id, scale, tx, ty, weight })
    }

    pub fn map(&self, p: Point) -> Point {
        Point::new(self.scale * p.x + self.tx, self.scale * p.y + self.ty)
    }

    pub fn polygon(&self, template: &ConvexTemplate) -> Vec<Point> {
        template.vertices.iter().map(|&p| self.map(p)).collect()
    }

    pub fn bbox(&self, template: &ConvexTemplate) -> BBox {
        let poly = self.polygon(template);
        let mut min = poly[0];
        let mut max = poly[0];
        for p in &poly[1..] {
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        BBox { min, max }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Disk,
    CircleBoundary,
    Homothet,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyKind::Disk => "disk",
            FamilyKind::CircleBoundary => "circle_boundary",
            FamilyKind::Homothet => "homothet",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Elements {
    Disks(Vec<Disk>),
    Circles(Vec<Disk>),
    Homothets {
        template: ConvexTemplate,
        items: Vec<Homothet>,
    },
}

/// A homogeneous family whose members have ids `0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoDiskFamily {
    elements: Elements,
    labels: Vec<String>,
}

fn sort_by_id<T>(mut items: Vec<T>, id: impl Fn(&T) -> usize) -> Result<Vec<T>> {
    items.sort_by_key(&id);
    for (pos, item) in items.iter().enumerate() {
        if id(item) != pos {
            return Err(Error::invalid(format!(
                "element ids must be unique and contiguous from 0 (found {} at position {pos})",
                id(item)
            )));
        }
    }
    Ok(items)
}

impl PseudoDiskFamily {
    pub fn disks(disks: Vec<Disk>) -> Result<Self> {
        let disks = sort_by_id(disks, |d| d.id)?;
        Ok(Self::with_default_labels(Elements::Disks(disks)))
    }

    pub fn circles(circles: Vec<Disk>) -> Result<Self> {
        let circles = sort_by_id(circles, |d| d.id)?;
        Ok(Self::with_default_labels(Elements::Circles(circles)))
    }

    pub fn homothets(template: ConvexTemplate, items: Vec<Homothet>) -> Result<Self> {
        let items = sort_by_id(items, |h| h.id)?;
        Ok(Self::with_default_labels(Elements::Homothets { template, items }))
    }

    fn with_default_labels(elements: Elements) -> Self {
        let mut family = PseudoDiskFamily { elements, labels: Vec::new() };
        family.labels = (0..family.len()).map(|i| i.to_string()).collect();
        family
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::invalid("label count differs from family size"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn kind(&self) -> FamilyKind {
        match &self.elements {
            Elements::Disks(_) => FamilyKind::Disk,
            Elements::Circles(_) => FamilyKind::CircleBoundary,
            Elements::Homothets { .. } => FamilyKind::Homothet,
        }
    }

    pub fn elements(&self) -> &Elements {
        &self.elements
    }

    pub fn template(&self) -> Option<&ConvexTemplate> {
        match &self.elements {
            Elements::Homothets { template, .. } => Some(template),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.elements {
            Elements::Disks(d) | Elements::Circles(d) => d.len(),
            Elements::Homothets { items, .. } => items.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight(&self, id: usize) -> f64 {
        match &self.elements {
            Elements::Disks(d) | Elements::Circles(d) => d[id].weight,
            Elements::Homothets { items, .. } => items[id].weight,
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    /// Replaces all weights, keeping geometry.
    pub fn with_weights(mut self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(Error::invalid("weight count differs from family size"));
        }
        for &w in weights {
            check_weight(w)?;
        }
        match &mut self.elements {
            Elements::Disks(d) | Elements::Circles(d) => {
                d.iter_mut().zip(weights).for_each(|(d, &w)| d.weight = w)
            }
            Elements::Homothets { items, .. } => {
                items.iter_mut().zip(weights).for_each(|(h, &w)| h.weight = w)
            }
        }
        Ok(self)
    }

    pub fn bbox(&self, id: usize) -> BBox {
        match &self.elements {
            Elements::Disks(d) | Elements::Circles(d) => d[id].bbox(),
            Elements::Homothets { template, items } => items[id].bbox(template),
        }
    }

    /// Nominal size used to scale nudges: the radius, or the scaled template
    /// diameter.
    pub fn size(&self, id: usize) -> f64 {
        match &self.elements {
            Elements::Disks(d) | Elements::Circles(d) => d[id].r,
            Elements::Homothets { template, items } => items[id].scale * template.diameter(),
        }
    }

    /// Closed-region membership. Circle-boundary members are treated as the
    /// disks they bound.
    pub fn contains(&self, id: usize, p: Point) -> bool {
        match &self.elements {
            Elements::Disks(d) | Elements::Circles(d) => disk_contains(&d[id], p),
            Elements::Homothets { template, items } => {
                polygon_contains(&items[id].polygon(template), p)
            }
        }
    }

    /// Fails unless `other` has the same kind (and template, for homothets).
    pub fn check_compatible(&self, other: &PseudoDiskFamily) -> Result<()> {
        if self.kind() != other.kind() {
            return Err(Error::invalid(format!(
                "family kinds differ: {} vs {}",
                self.kind(),
                other.kind()
            )));
        }
        if self.template() != other.template() {
            return Err(Error::invalid("homothet families use different templates"));
        }
        Ok(())
    }

    /// Whether member `i` of `self` meets member `j` of `other`. For circle
    /// boundaries this means the circles share a point; coincident circles
    /// count as meeting.
    pub fn meets(&self, i: usize, other: &PseudoDiskFamily, j: usize, tol: f64) -> bool {
        match (&self.elements, &other.elements) {
            (Elements::Disks(a), Elements::Disks(b)) => disks_intersect_tol(&a[i], &b[j], tol),
            (Elements::Circles(a), Elements::Circles(b)) => {
                circle_crossing_count_tol(&a[i], &b[j], tol).map_or(true, |c| c >= 1)
            }
            (
                Elements::Homothets { template, items: a },
                Elements::Homothets { items: b, .. },
            ) => convex_polygons_intersect(&a[i].polygon(template), &b[j].polygon(template), tol),
            _ => false,
        }
    }

    /// Subfamily with the given members, renumbered `0..ids.len()` in the
    /// given order.
    pub fn select(&self, ids: &[usize]) -> Result<PseudoDiskFamily> {
        if let Some(&bad) = ids.iter().find(|&&i| i >= self.len()) {
            return Err(Error::invalid(format!("element id {bad} out of range")));
        }
        let elements = match &self.elements {
            Elements::Disks(d) => Elements::Disks(
                ids.iter().enumerate().map(|(k, &i)| Disk { id: k, ..d[i] }).collect(),
            ),
            Elements::Circles(d) => Elements::Circles(
                ids.iter().enumerate().map(|(k, &i)| Disk { id: k, ..d[i] }).collect(),
            ),
            Elements::Homothets { template, items } => Elements::Homothets {
                template: template.clone(),
                items: ids
                    .iter()
                    .enumerate()
                    .map(|(k, &i)| Homothet { id: k, ..items[i] })
                    .collect(),
            },
        };
        Ok(PseudoDiskFamily {
            elements,
            labels: ids.iter().map(|&i| self.labels[i].clone()).collect(),
        })
    }
}

/// A ground family `P` with an optional, independent range family `F`.
/// Without ranges, `P` serves as its own range family.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub family: PseudoDiskFamily,
    pub ranges: Option<PseudoDiskFamily>,
    /// Free-form provenance (generator spec, RNG identifier, seed).
    pub meta: Option<serde_json::Value>,
}

impl Instance {
    pub fn new(family: PseudoDiskFamily) -> Self {
        Instance { family, ranges: None, meta: None }
    }

    pub fn with_ranges(family: PseudoDiskFamily, ranges: PseudoDiskFamily) -> Result<Self> {
        family.check_compatible(&ranges)?;
        Ok(Instance { family, ranges: Some(ranges), meta: None })
    }

    pub fn range_family(&self) -> &PseudoDiskFamily {
        self.ranges.as_ref().unwrap_or(&self.family)
    }

    pub fn hypergraph(&self) -> Result<crate::Hypergraph> {
        build_intersection_hypergraph(&self.family, self.range_family())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&InstanceDoc::from(self))?)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementDoc {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ty: Option<f64>,
    #[serde(default = "unit_weight")]
    weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize)]
struct FamilyDoc {
    kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    template: Option<Vec<[f64; 2]>>,
    elements: Vec<ElementDoc>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    #[serde(flatten)]
    family: FamilyDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ranges: Option<FamilyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
}

fn missing(id: usize, field: &str) -> Error {
    Error::invalid(format!("element {id} is missing `{field}`"))
}

impl TryFrom<FamilyDoc> for PseudoDiskFamily {
    type Error = Error;

    fn try_from(doc: FamilyDoc) -> Result<Self> {
        let mut labeled: Vec<(usize, Option<String>)> =
            doc.elements.iter().map(|e| (e.id, e.label.clone())).collect();
        labeled.sort_by_key(|(id, _)| *id);
        let family = match doc.kind {
            FamilyKind::Disk | FamilyKind::CircleBoundary => {
                let disks = doc
                    .elements
                    .iter()
                    .map(|e| {
                        Disk::new(
                            e.id,
                            e.cx.ok_or_else(|| missing(e.id, "cx"))?,
                            e.cy.ok_or_else(|| missing(e.id, "cy"))?,
                            e.r.ok_or_else(|| missing(e.id, "r"))?,
                            e.weight,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                if doc.kind == FamilyKind::Disk {
                    PseudoDiskFamily::disks(disks)?
                } else {
                    PseudoDiskFamily::circles(disks)?
                }
            }
            FamilyKind::Homothet => {
                let template = doc
                    .template
                    .ok_or_else(|| Error::invalid("homothet family requires a `template`"))?;
                let template =
                    ConvexTemplate::new(template.into_iter().map(|[x, y]| Point::new(x, y)).collect())?;
                let items = doc
                    .elements
                    .iter()
                    .map(|e| {
                        Homothet::new(
                            e.id,
                            e.scale.ok_or_else(|| missing(e.id, "scale"))?,
                            e.tx.ok_or_else(|| missing(e.id, "tx"))?,
                            e.ty.ok_or_else(|| missing(e.id, "ty"))?,
                            e.weight,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                PseudoDiskFamily::homothets(template, items)?
            }
        };
        if labeled.iter().any(|(_, l)| l.is_some()) {
            let labels = labeled
                .into_iter()
                .map(|(id, l)| l.unwrap_or_else(|| id.to_string()))
                .collect();
            family.with_labels(labels)
        } else {
            Ok(family)
        }
    }
}

impl From<&PseudoDiskFamily> for FamilyDoc {
    fn from(f: &PseudoDiskFamily) -> Self {
        let label = |id: usize| (f.labels[id] != id.to_string()).then(|| f.labels[id].clone());
        let disk_doc = |d: &Disk| ElementDoc {
            id: d.id,
            label: label(d.id),
            cx: Some(d.cx),
            cy: Some(d.cy),
            r: Some(d.r),
            scale: None,
            tx: None,
            ty: None,
            weight: d.weight,
        };
        match &f.elements {
            Elements::Disks(d) | Elements::Circles(d) => FamilyDoc {
                kind: f.kind(),
                template: None,
                elements: d.iter().map(disk_doc).collect(),
            },
            Elements::Homothets { template, items } => FamilyDoc {
                kind: FamilyKind::Homothet,
                template: Some(template.vertices.iter().map(|p| [p.x, p.y]).collect()),
                elements: items
                    .iter()
                    .map(|h| ElementDoc {
                        id: h.id,
                        label: label(h.id),
                        cx: None,
                        cy: None,
                        r: None,
                        scale: Some(h.scale),
                        tx: Some(h.tx),
                        ty: Some(h.ty),
                        weight: h.weight,
                    })
                    .collect(),
            },
        }
    }
}

impl TryFrom<InstanceDoc> for Instance {
    type Error = Error;

    fn try_from(doc: InstanceDoc) -> Result<Self> {
        let family = PseudoDiskFamily::try_from(doc.family)?;
        let mut instance = match doc.ranges {
            Some(r) => Instance::with_ranges(family, PseudoDiskFamily::try_from(r)?)?,
            None => Instance::new(family),
        };
        instance.meta = doc.meta;
        Ok(instance)
    }
}

impl From<&Instance> for InstanceDoc {
    fn from(inst: &Instance) -> Self {
        InstanceDoc {
            family: FamilyDoc::from(&inst.family),
            ranges: inst.ranges.as_ref().map(FamilyDoc::from),
            meta: inst.meta.clone(),
        }
    }
}
