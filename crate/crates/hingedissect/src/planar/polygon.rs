//! Simple oriented polygons with exact vertices.

use super::point::{
    orientation, segment_contains, segments_properly_cross, BBox, Containment, Orientation, Point,
};
use super::PlanarError;
use crate::numeric::{rat, CReal};
use std::cmp::Ordering;

/// A strictly simple counterclockwise polygon. Collinear ("flat") vertices
/// are allowed and preserved: a hinge may sit at a 180° corner.
#[derive(Clone)]
pub struct Polygon {
    verts: Vec<Point>,
    bbox: BBox,
}

impl PartialEq for Polygon {
    fn eq(&self, other: &Self) -> bool {
        self.verts == other.verts
    }
}
impl Eq for Polygon {}

impl Polygon {
    pub fn new(verts: Vec<Point>) -> Result<Self, PlanarError> {
        let p = Polygon::new_unchecked(verts);
        p.validate()?;
        Ok(p)
    }

    /// Skips validation. For internal construction steps whose output is
    /// verified downstream (certificates re-check everything).
    pub fn new_unchecked(verts: Vec<Point>) -> Self {
        let bbox = verts
            .iter()
            .fold(BBox::empty(), |acc, p| acc.merge(&p.f64_bbox()));
        Polygon { verts, bbox }
    }

    pub fn from_int_coords(coords: &[(i64, i64)]) -> Result<Self, PlanarError> {
        Polygon::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn validate(&self) -> Result<(), PlanarError> {
        let n = self.verts.len();
        if n < 3 {
            return Err(PlanarError::TooFewVertices);
        }
        let mut sorted: Vec<&Point> = self.verts.iter().collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(PlanarError::DuplicateVertices);
            }
        }
        // Adjacent edges may continue straight (flat vertex) but must not
        // fold back on themselves.
        for i in 0..n {
            let a = &self.verts[i];
            let b = &self.verts[(i + 1) % n];
            let c = &self.verts[(i + 2) % n];
            if orientation(a, b, c) == Orientation::Collinear
                && c.sub(b).dot(&b.sub(a)).sign() != Ordering::Greater
            {
                return Err(PlanarError::NotSimple(format!("spike at vertex {}", (i + 1) % n)));
            }
        }
        // Non-adjacent edges must be fully disjoint.
        for i in 0..n {
            let (a, b) = self.edge(i);
            let ebox = a.f64_bbox().merge(&b.f64_bbox());
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (c, d) = self.edge(j);
                if !ebox.intersects(&c.f64_bbox().merge(&d.f64_bbox())) {
                    continue;
                }
                if segments_properly_cross(&a, &b, &c, &d)
                    || segment_contains(&a, &b, &c)
                    || segment_contains(&a, &b, &d)
                    || segment_contains(&c, &d, &a)
                    || segment_contains(&c, &d, &b)
                {
                    return Err(PlanarError::NotSimple(format!("edges {} and {} touch", i, j)));
                }
            }
        }
        if self.signed_area().sign() != Ordering::Greater {
            return Err(PlanarError::NotCounterClockwise);
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.verts[i % self.verts.len()]
    }

    /// Directed edge from vertex i to vertex i+1.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.verts.len();
        (self.verts[i % n].clone(), self.verts[(i + 1) % n].clone())
    }

    pub fn bbox(&self) -> &BBox {
        &self.bbox
    }

    /// Shoelace value: positive for counterclockwise boundaries.
    pub fn signed_area(&self) -> CReal {
        signed_area_of(&self.verts)
    }

    pub fn area(&self) -> CReal {
        self.signed_area()
    }

    /// Exact point classification.
    pub fn contains(&self, p: &Point) -> Containment {
        let n = self.verts.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if segment_contains(&a, &b, p) {
                return Containment::Boundary;
            }
        }
        let mut crossings = 0usize;
        for i in 0..n {
            let (mut a, mut b) = self.edge(i);
            match a.y.compare(&b.y) {
                Ordering::Equal => continue,
                Ordering::Greater => std::mem::swap(&mut a, &mut b),
                Ordering::Less => {}
            }
            // upward edge a→b; count if the horizontal ray from p to +x hits it
            if p.y.compare(&a.y) != Ordering::Less
                && p.y.compare(&b.y) == Ordering::Less
                && orientation(&a, &b, p) == Orientation::Left
            {
                crossings += 1;
            }
        }
        if crossings % 2 == 1 {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    /// A point strictly interior to the polygon.
    pub fn interior_point(&self) -> Point {
        let n = self.verts.len();
        // Lowest-then-leftmost vertex is strictly convex.
        let mut vi = 0;
        for i in 1..n {
            let cur = &self.verts[i];
            let best = &self.verts[vi];
            if cur.y.compare(&best.y) == Ordering::Less
                || (cur.y == best.y && cur.x.compare(&best.x) == Ordering::Less)
            {
                vi = i;
            }
        }
        // Walk to the neighboring non-flat corners.
        let mut ui = (vi + n - 1) % n;
        while orientation(self.vertex(ui + n - 1), &self.verts[ui], &self.verts[vi])
            == Orientation::Collinear
        {
            ui = (ui + n - 1) % n;
        }
        let mut wi = (vi + 1) % n;
        while orientation(&self.verts[vi], &self.verts[wi], self.vertex(wi + 1))
            == Orientation::Collinear
        {
            wi = (wi + 1) % n;
        }
        let (u, v, w) = (&self.verts[ui], &self.verts[vi], &self.verts[wi]);
        // If no other vertex intrudes strictly into triangle (u,v,w), its
        // centroid is interior; otherwise pair v with the deepest intruder.
        let mut deepest: Option<(&Point, CReal)> = None;
        for (i, q) in self.verts.iter().enumerate() {
            if i == ui || i == vi || i == wi {
                continue;
            }
            if point_in_triangle_strict(q, u, v, w) {
                let depth = w.sub(u).cross(&q.sub(u)).neg();
                match &deepest {
                    Some((_, d)) if depth.compare(d) != Ordering::Greater => {}
                    _ => deepest = Some((q, depth)),
                }
            }
        }
        match deepest {
            None => {
                let third = rat(1, 3);
                u.add(&v.add(w)).scale_rat(&third)
            }
            Some((q, _)) => v.midpoint(q),
        }
    }

    /// Lexicographically canonical rotation of the vertex list.
    pub fn canonicalized(&self) -> Polygon {
        let n = self.verts.len();
        let mut best = 0;
        for i in 1..n {
            if self.verts[i].cmp(&self.verts[best]) == Ordering::Less {
                best = i;
            }
        }
        let mut verts = Vec::with_capacity(n);
        for i in 0..n {
            verts.push(self.verts[(best + i) % n].clone());
        }
        Polygon { verts, bbox: self.bbox }
    }

    pub fn reversed(&self) -> Polygon {
        let mut verts = self.verts.clone();
        verts.reverse();
        Polygon::new_unchecked(verts)
    }

    pub fn transform(&self, iso: &super::Isometry) -> Polygon {
        Polygon::new_unchecked(self.verts.iter().map(|p| iso.apply(p)).collect())
    }

    /// Is vertex i a flat (180°) vertex?
    pub fn is_flat_vertex(&self, i: usize) -> bool {
        let n = self.verts.len();
        orientation(
            &self.verts[(i + n - 1) % n],
            &self.verts[i],
            &self.verts[(i + 1) % n],
        ) == Orientation::Collinear
    }

    /// Indices of the non-flat vertices.
    pub fn corner_indices(&self) -> Vec<usize> {
        (0..self.verts.len()).filter(|&i| !self.is_flat_vertex(i)).collect()
    }

    /// Insert a vertex at parameter t along edge i (strictly interior to the
    /// edge); returns the index of the new vertex.
    pub fn with_vertex_on_edge(&self, i: usize, p: Point) -> (Polygon, usize) {
        debug_assert!({
            let (a, b) = self.edge(i);
            segment_contains(&a, &b, &p) && p != a && p != b
        });
        let mut verts = self.verts.clone();
        verts.insert(i + 1, p);
        (Polygon::new_unchecked(verts), i + 1)
    }
}

pub fn signed_area_of(verts: &[Point]) -> CReal {
    let mut twice = CReal::zero();
    let n = verts.len();
    for i in 0..n {
        let a = &verts[i];
        let b = &verts[(i + 1) % n];
        twice = twice.add(&a.cross(b));
    }
    twice.mul(&CReal::from_rat(rat(1, 2)))
}

pub fn point_in_triangle_closed(p: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    let o1 = orientation(a, b, p);
    let o2 = orientation(b, c, p);
    let o3 = orientation(c, a, p);
    let has_left = [o1, o2, o3].iter().any(|o| *o == Orientation::Left);
    let has_right = [o1, o2, o3].iter().any(|o| *o == Orientation::Right);
    !(has_left && has_right)
}

/// Strictly inside the counterclockwise triangle (a, b, c).
pub fn point_in_triangle_strict(p: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    orientation(a, b, p) == Orientation::Left
        && orientation(b, c, p) == Orientation::Left
        && orientation(c, a, p) == Orientation::Left
}

impl std::fmt::Debug for Polygon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Polygon{:?}", self.verts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn unit_square() -> Polygon {
        Polygon::from_int_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn signed_area_examples() {
        assert_eq!(unit_square().signed_area(), CReal::from_int(1));
        let tri = Polygon::from_int_coords(&[(0, 0), (2, 0), (0, 1)]).unwrap();
        assert_eq!(tri.signed_area(), CReal::from_int(1));
        let reversed: Vec<Point> = unit_square().vertices().iter().rev().cloned().collect();
        assert_eq!(signed_area_of(&reversed), CReal::from_int(-1));
        assert!(Polygon::new(reversed).is_err());
    }

    #[test]
    fn contains_examples() {
        let sq = unit_square();
        assert_eq!(
            sq.contains(&Point::from_rats(rat(1, 2), rat(1, 2))),
            Containment::Inside
        );
        assert_eq!(
            sq.contains(&Point::from_rats(rat(1, 1), rat(1, 2))),
            Containment::Boundary
        );
        assert_eq!(sq.contains(&Point::from_ints(2, 0)), Containment::Outside);
    }

    #[test]
    fn flat_vertices_are_allowed_and_detected() {
        let p = Polygon::from_int_coords(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]).unwrap();
        assert!(p.is_flat_vertex(1));
        assert!(!p.is_flat_vertex(0));
        assert_eq!(p.corner_indices(), vec![0, 2, 3, 4]);
    }

    #[test]
    fn self_intersecting_rejected() {
        let bowtie = Polygon::from_int_coords(&[(0, 0), (2, 2), (2, 0), (0, 2)]);
        assert!(bowtie.is_err());
    }

    #[test]
    fn interior_point_is_inside() {
        let shapes = [
            unit_square(),
            Polygon::from_int_coords(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap(),
            Polygon::from_int_coords(&[(0, 0), (4, 0), (4, 1), (1, 1), (1, 3), (3, 3), (3, 4), (0, 4)])
                .unwrap(),
        ];
        for s in &shapes {
            assert_eq!(s.contains(&s.interior_point()), Containment::Inside);
        }
    }
}
