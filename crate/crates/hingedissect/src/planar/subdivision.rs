//! Cell complexes partitioning a polygon, and the exact partition checker.

use super::point::{segment_contains, segments_properly_cross, Containment, Point};
use super::polygon::Polygon;
use super::PlanarError;
use std::cmp::Ordering;

/// A polygon partitioned into interior-disjoint cells whose areas sum to it
/// exactly.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub outer: Polygon,
    pub cells: Vec<Polygon>,
}

impl Subdivision {
    /// The one-cell subdivision of a polygon by itself.
    pub fn trivial(outer: Polygon) -> Self {
        let cell = outer.clone();
        Subdivision { outer, cells: vec![cell] }
    }

    pub fn validate(&self) -> Result<(), PlanarError> {
        self.outer.validate()?;
        for c in &self.cells {
            c.validate()?;
        }
        check_partition(&self.outer, &self.cells)
    }

    /// Are the outers the same polygon, up to rotation of the vertex list?
    pub fn same_outer(&self, other: &Subdivision) -> bool {
        same_polygon_rotated(&self.outer, &other.outer)
    }
}

pub fn same_polygon_rotated(a: &Polygon, b: &Polygon) -> bool {
    a.canonicalized().vertices() == b.canonicalized().vertices()
}

/// Exact test that the interiors of two simple polygons are disjoint
/// (boundary contact is fine).
pub fn interiors_disjoint(p: &Polygon, q: &Polygon) -> bool {
    if !p.bbox().intersects(q.bbox()) {
        return true;
    }
    // Any proper edge crossing means overlapping interiors.
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        let ebox = a.f64_bbox().merge(&b.f64_bbox());
        if !ebox.intersects(q.bbox()) {
            continue;
        }
        for j in 0..q.len() {
            let (c, d) = q.edge(j);
            if !ebox.intersects(&c.f64_bbox().merge(&d.f64_bbox())) {
                continue;
            }
            if segments_properly_cross(&a, &b, &c, &d) {
                return false;
            }
        }
    }
    // Boundary passing through the other's interior (touch-and-cross cases
    // that are not proper crossings).
    if edge_passes_through_interior(p, q) || edge_passes_through_interior(q, p) {
        return false;
    }
    // Full containment with non-crossing boundaries.
    if q.contains(&p.interior_point()) == Containment::Inside {
        return false;
    }
    if p.contains(&q.interior_point()) == Containment::Inside {
        return false;
    }
    true
}

/// Does some edge of `q` run through the interior of `p`? Each edge is split
/// at every contact with ∂p and the open pieces are probed at midpoints.
fn edge_passes_through_interior(p: &Polygon, q: &Polygon) -> bool {
    for j in 0..q.len() {
        let (c, d) = q.edge(j);
        let ebox = c.f64_bbox().merge(&d.f64_bbox());
        if !ebox.intersects(p.bbox()) {
            continue;
        }
        let dir = d.sub(&c);
        let mut cuts: Vec<Point> = vec![c.clone(), d.clone()];
        for i in 0..p.len() {
            let (a, b) = p.edge(i);
            if !ebox.intersects(&a.f64_bbox().merge(&b.f64_bbox())) {
                continue;
            }
            for e in [&a, &b] {
                if segment_contains(&c, &d, e) {
                    cuts.push((*e).clone());
                }
            }
            for e in [&c, &d] {
                if segment_contains(&a, &b, e) {
                    cuts.push((*e).clone());
                }
            }
            if segments_properly_cross(&a, &b, &c, &d) {
                if let Some(x) = super::point::line_intersection(&a, &b, &c, &d) {
                    cuts.push(x);
                }
            }
        }
        cuts.sort_by(|u, v| dir.dot(&u.sub(&c)).cmp(&dir.dot(&v.sub(&c))));
        cuts.dedup();
        for w in cuts.windows(2) {
            let mid = w[0].midpoint(&w[1]);
            if p.contains(&mid) == Containment::Inside {
                return true;
            }
        }
    }
    false
}

/// Exact test that `inner` is contained in `outer` (boundary contact fine).
pub fn polygon_inside(outer: &Polygon, inner: &Polygon) -> bool {
    for v in inner.vertices() {
        if outer.contains(v) == Containment::Outside {
            return false;
        }
    }
    for i in 0..inner.len() {
        let (a, b) = inner.edge(i);
        for j in 0..outer.len() {
            let (c, d) = outer.edge(j);
            if segments_properly_cross(&a, &b, &c, &d) {
                return false;
            }
        }
    }
    // Edges may still slip outside through boundary touch points.
    if edge_passes_through_exterior(outer, inner) {
        return false;
    }
    outer.contains(&inner.interior_point()) == Containment::Inside
}

fn edge_passes_through_exterior(outer: &Polygon, inner: &Polygon) -> bool {
    for j in 0..inner.len() {
        let (c, d) = inner.edge(j);
        let dir = d.sub(&c);
        let mut cuts: Vec<Point> = vec![c.clone(), d.clone()];
        for i in 0..outer.len() {
            let (a, b) = outer.edge(i);
            for e in [&a, &b] {
                if segment_contains(&c, &d, e) {
                    cuts.push((*e).clone());
                }
            }
            for e in [&c, &d] {
                if segment_contains(&a, &b, e) {
                    cuts.push((*e).clone());
                }
            }
        }
        cuts.sort_by(|u, v| dir.dot(&u.sub(&c)).cmp(&dir.dot(&v.sub(&c))));
        cuts.dedup();
        for w in cuts.windows(2) {
            let mid = w[0].midpoint(&w[1]);
            if outer.contains(&mid) == Containment::Outside {
                return true;
            }
        }
    }
    false
}

/// Verify that `cells` tile `outer` exactly: pairwise disjoint interiors,
/// every cell inside, and areas summing with zero slack.
pub fn check_partition(outer: &Polygon, cells: &[Polygon]) -> Result<(), PlanarError> {
    let mut sum = crate::numeric::CReal::zero();
    for c in cells {
        sum = sum.add(&c.area());
    }
    if sum.compare(&outer.area()) != Ordering::Equal {
        return Err(PlanarError::AreaMismatch(format!(
            "cell areas sum to {:?}, outer has {:?}",
            sum,
            outer.area()
        )));
    }
    for (i, c) in cells.iter().enumerate() {
        if !polygon_inside(outer, c) {
            return Err(PlanarError::NotContained(format!("cell {}", i)));
        }
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if !interiors_disjoint(&cells[i], &cells[j]) {
                return Err(PlanarError::CellOverlap(format!("cells {} and {}", i, j)));
            }
        }
    }
    Ok(())
}
