//! Free regions: per-edge inward isosceles triangles and per-vertex circular
//! sectors, pairwise disjoint, reserved for gadget cuts.

use super::GadgetError;
use crate::numeric::{rat, rational_angle_below, CReal, Rat, RationalAngle};
use crate::planar::{interiors_disjoint, triangulate, Isometry, Point, Polygon};
use std::cmp::Ordering;

/// Circular free sector at a vertex: all directions counterclockwise from
/// `dir_start` to `dir_end` (a cone smaller than a half turn), out to
/// `radius` from `center`.
#[derive(Clone, Debug)]
pub struct Sector {
    pub center: Point,
    pub radius: Rat,
    pub dir_start: Point,
    pub dir_end: Point,
}

impl Sector {
    /// Is a direction strictly inside the cone?
    pub fn direction_inside(&self, d: &Point) -> bool {
        self.dir_start.cross(d).sign() == Ordering::Greater
            && d.cross(&self.dir_end).sign() == Ordering::Greater
    }
}

/// Free regions of one link, all verified exactly.
#[derive(Clone, Debug)]
pub struct FreeRegions {
    /// The link's free angle β (every edge triangle has base angle β and the
    /// sector cones have width β).
    pub angle: RationalAngle,
    /// The link's free radius r.
    pub radius: Rat,
    /// Per edge: the inward isosceles triangle on the whole edge.
    pub edge_triangles: Vec<Polygon>,
    /// Per vertex: the free sector.
    pub vertex_sectors: Vec<Sector>,
}

/// Apex of the inward isosceles triangle with base [a, b] and base angle
/// whose tangent is `tan`: midpoint + (tan/2)·rot90(b−a).
pub fn notch_apex(a: &Point, b: &Point, tan: &Rat) -> Point {
    let half = rat(1, 2);
    a.midpoint(b).add(&b.sub(a).rot90().scale_rat(&(tan * &half)))
}

pub fn edge_triangle(a: &Point, b: &Point, tan: &Rat) -> Polygon {
    Polygon::new_unchecked(vec![a.clone(), b.clone(), notch_apex(a, b, tan)])
}

/// Compute free regions per the triangulation bound: β strictly below a
/// third of the smallest triangulation angle (emitted at half that bound),
/// r at half the smallest in-radius-style slack, then shrunk until the exact
/// disjointness and containment checks all pass.
pub fn free_regions(link: &Polygon) -> Result<FreeRegions, GadgetError> {
    let tri = triangulate(link)?;
    // Smallest corner angle over all triangulation triangles, as a rational
    // lower bound on tan(angle/3): tan(x/3) ≥ sin(x)/3 ≥ T/(3(1+T)).
    let mut bound: Option<Rat> = None;
    let mut slack: Option<CReal> = None;
    for cell in &tri.cells {
        let corners = cell.corner_indices();
        if corners.len() != 3 {
            return Err(GadgetError::Construction(
                "triangulation produced a non-triangle cell".into(),
            ));
        }
        let pts: Vec<Point> = corners.iter().map(|&i| cell.vertex(i).clone()).collect();
        for k in 0..3 {
            let o = &pts[k];
            let u = pts[(k + 1) % 3].sub(o);
            let v = pts[(k + 2) % 3].sub(o);
            let cross = u.cross(&v);
            let dot = u.dot(&v);
            if dot.sign() == Ordering::Greater {
                // acute corner: tan = cross/dot > 0
                let t = positive_rational_below(&cross.div(&dot)?);
                let cand = &t / (rat(3, 1) * (rat(1, 1) + &t));
                if bound.as_ref().map_or(true, |b| cand < *b) {
                    bound = Some(cand);
                }
            }
        }
        // semiperimeter slacks s−a, s−b, s−c
        let la = pts[1].dist_sq(&pts[2]).sqrt()?;
        let lb = pts[2].dist_sq(&pts[0]).sqrt()?;
        let lc = pts[0].dist_sq(&pts[1]).sqrt()?;
        let s = la.add(&lb).add(&lc).mul(&CReal::from_rat(rat(1, 2)));
        for l in [&la, &lb, &lc] {
            let d = s.sub(l);
            if slack.as_ref().map_or(true, |m| d.compare(m) == Ordering::Less) {
                slack = Some(d);
            }
        }
    }
    let bound = bound.ok_or_else(|| {
        GadgetError::Construction("no acute triangulation corner found".into())
    })?;
    let angle = rational_angle_below(&bound, &rat(1, 2));
    let mut radius = positive_rational_below(&slack.unwrap()) * rat(1, 2);

    for _ in 0..64 {
        match build_regions(link, &angle, &radius) {
            Ok(fr) => return Ok(fr),
            Err(_) => radius = radius * rat(1, 2),
        }
    }
    Err(GadgetError::Construction(
        "free regions failed to verify even after shrinking".into(),
    ))
}

fn build_regions(
    link: &Polygon,
    angle: &RationalAngle,
    radius: &Rat,
) -> Result<FreeRegions, GadgetError> {
    let n = link.len();
    let tan = angle.tan();
    let mut edge_triangles = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = link.edge(i);
        edge_triangles.push(edge_triangle(&a, &b, &tan));
    }
    let mut vertex_sectors = Vec::with_capacity(n);
    let rot2 = Isometry::from_angle(&angle.compose(angle));
    let rot3 = Isometry::from_angle(&angle.compose(angle).compose(angle));
    for i in 0..n {
        let v = link.vertex(i).clone();
        let out = link.vertex(i + 1).sub(&v);
        vertex_sectors.push(Sector {
            center: v,
            radius: radius.clone(),
            dir_start: rot2.apply_vector(&out),
            dir_end: rot3.apply_vector(&out),
        });
    }
    let fr = FreeRegions {
        angle: angle.clone(),
        radius: radius.clone(),
        edge_triangles,
        vertex_sectors,
    };
    verify_regions(link, &fr)?;
    Ok(fr)
}

/// All the exact invariants: containment in the link and pairwise
/// disjointness except at shared vertices.
pub fn verify_regions(link: &Polygon, fr: &FreeRegions) -> Result<(), GadgetError> {
    let n = link.len();
    let fail = |msg: String| Err(GadgetError::Construction(msg));
    for (i, t) in fr.edge_triangles.iter().enumerate() {
        if !crate::planar::polygon_inside(link, t) {
            return fail(format!("edge triangle {} leaves the link", i));
        }
        for (j, u) in fr.edge_triangles.iter().enumerate().skip(i + 1) {
            if !interiors_disjoint(t, u) {
                return fail(format!("edge triangles {} and {} overlap", i, j));
            }
        }
    }
    let r2 = CReal::from_rat(&fr.radius * &fr.radius);
    for (i, s) in fr.vertex_sectors.iter().enumerate() {
        // Cone strictly inside the vertex wedge.
        let out = link.vertex(i + 1).sub(&s.center);
        let inc = link.vertex(i + n - 1).sub(&s.center);
        if s.dir_start.cross(&s.dir_end).sign() != Ordering::Greater {
            return fail(format!("sector {} cone degenerate", i));
        }
        if out.cross(&s.dir_start).sign() != Ordering::Greater {
            return fail(format!("sector {} not past the outgoing edge", i));
        }
        // The wedge from `out` to `inc` counterclockwise holds the interior;
        // require dir_end strictly before `inc` in that sweep. For wedges at
        // least a half turn the start test above plus the small cone width
        // suffices; detect via orientation of inc relative to out.
        let wedge_convex = out.cross(&inc).sign() == Ordering::Greater;
        if wedge_convex && s.dir_end.cross(&inc).sign() != Ordering::Greater {
            return fail(format!("sector {} crosses the incoming edge", i));
        }
        // Disk portion: every non-incident edge at distance ≥ r.
        for e in 0..n {
            if e == i || (e + 1) % n == i {
                continue;
            }
            let (a, b) = link.edge(e);
            if dist_sq_point_segment(&s.center, &a, &b).compare(&r2) == Ordering::Less {
                return fail(format!("sector {} too close to edge {}", i, e));
            }
        }
        // Sector vs non-incident edge triangles: whole disk stays clear.
        for (j, t) in fr.edge_triangles.iter().enumerate() {
            if j == i || (j + 1) % n == i {
                continue; // incident triangles are separated in angle
            }
            if link.vertex(j).sub(&s.center).norm_sq().compare(&r2) == Ordering::Less
                || link.vertex(j + 1).sub(&s.center).norm_sq().compare(&r2) == Ordering::Less
            {
                return fail(format!("sector {} reaches triangle {}", i, j));
            }
            for k in 0..t.len() {
                let (a, b) = t.edge(k);
                if dist_sq_point_segment(&s.center, &a, &b).compare(&r2) == Ordering::Less {
                    return fail(format!("sector {} reaches triangle {}", i, j));
                }
            }
        }
        // Sector vs other sectors: centers at least 2r apart.
        for (j, s2) in fr.vertex_sectors.iter().enumerate().skip(i + 1) {
            let d2 = s2.center.sub(&s.center).norm_sq();
            let rr = &fr.radius + &fr.radius;
            if d2.compare(&CReal::from_rat(&rr * &rr)) == Ordering::Less {
                return fail(format!("sectors {} and {} too close", i, j));
            }
        }
    }
    Ok(())
}

pub fn dist_sq_point_segment(p: &Point, a: &Point, b: &Point) -> CReal {
    let ab = b.sub(a);
    let t = p.sub(a).dot(&ab);
    if t.sign() != Ordering::Greater {
        return p.dist_sq(a);
    }
    let n2 = ab.norm_sq();
    if t.compare(&n2) != Ordering::Less {
        return p.dist_sq(b);
    }
    // |ap|² − t²/|ab|²
    let proj = t.mul(&t).div(&n2).expect("segment has positive length");
    p.dist_sq(a).sub(&proj)
}

/// Largest rational strictly below a positive value (with positive result).
pub fn positive_rational_below(x: &CReal) -> Rat {
    if let Some(q) = x.as_rational() {
        // strictly below a rational: back off a little
        return &q * rat(255, 256);
    }
    let mut bits = 32;
    loop {
        let iv = x.approx(bits);
        if iv.lo > rat(0, 1) {
            return iv.lo;
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat_int;

    #[test]
    fn unit_right_triangle_regions() {
        let t = Polygon::from_int_coords(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        let fr = free_regions(&t).unwrap();
        verify_regions(&t, &fr).unwrap();
        assert_eq!(fr.edge_triangles.len(), 3);
        assert_eq!(fr.vertex_sectors.len(), 3);
        // 45° is the smallest angle; β must be below 15°, tan 15° < 0.268
        assert!(fr.angle.tan() < rat(268, 1000));
    }

    #[test]
    fn equilateral_bounds() {
        // unit equilateral: half the side sits at (1/2, √3/2)
        let apex = Point::new(
            CReal::from_rat(rat(1, 2)),
            CReal::from_int(3).sqrt().unwrap().div(&CReal::from_int(2)).unwrap(),
        );
        let t = Polygon::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 0), apex]).unwrap();
        let fr = free_regions(&t).unwrap();
        // bound is 20° = 60°/3 and we emit at half: tan β ≤ tan 10° < 0.1764,
        // and r ≤ (s−a)/2 = 1/4.
        assert!(fr.angle.tan() < rat(1764, 10000));
        assert!(fr.radius <= rat(1, 4));
        assert!(fr.radius > rat(0, 1));
    }

    #[test]
    fn rectangle_regions_disjoint() {
        let r = Polygon::from_int_coords(&[(0, 0), (2, 0), (2, 1), (0, 1)]).unwrap();
        let fr = free_regions(&r).unwrap();
        verify_regions(&r, &fr).unwrap();
    }

    #[test]
    fn flat_vertex_gets_a_sector() {
        let flat = Polygon::from_int_coords(&[(0, 0), (2, 0), (4, 0), (0, 4)]).unwrap();
        let plain = Polygon::from_int_coords(&[(0, 0), (4, 0), (0, 4)]).unwrap();
        let fr1 = free_regions(&flat).unwrap();
        let fr0 = free_regions(&plain).unwrap();
        assert_eq!(fr1.vertex_sectors.len(), 4);
        // same β on the real corners (identical triangulation geometry)
        assert_eq!(fr1.angle.tan(), fr0.angle.tan());
        // the flat vertex's sector points into the upper half plane
        let s = &fr1.vertex_sectors[1];
        assert_eq!(s.center, Point::from_ints(2, 0));
        assert_eq!(s.dir_start.y.sign(), Ordering::Greater);
        assert_eq!(s.dir_end.y.sign(), Ordering::Greater);
        verify_regions(&flat, &fr1).unwrap();
    }

    #[test]
    fn distance_to_segment() {
        let d = dist_sq_point_segment(
            &Point::from_ints(0, 3),
            &Point::from_ints(-1, 0),
            &Point::from_ints(5, 0),
        );
        assert_eq!(d, CReal::from_int(9));
        let d2 = dist_sq_point_segment(
            &Point::from_ints(7, 1),
            &Point::from_ints(-1, 0),
            &Point::from_ints(5, 0),
        );
        assert_eq!(d2, CReal::from_int(5));
        assert_eq!(rat_int(1), rat(2, 2));
    }
}
