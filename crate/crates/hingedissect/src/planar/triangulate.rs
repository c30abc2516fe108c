//! Ear-clipping triangulation with exact predicates.
//!
//! Flat vertices are never ear tips, but they are preserved in the output:
//! each triangle keeps the flat vertices lying on the boundary stretches it
//! inherits, because later refinement stages hinge at such vertices.

use super::point::{orientation, segment_contains, Orientation, Point};
use super::polygon::{point_in_triangle_closed, Polygon};
use super::subdivision::Subdivision;
use super::PlanarError;

/// Triangulate a simple polygon. An n-gon without flat vertices yields
/// exactly n−2 triangles.
pub fn triangulate(p: &Polygon) -> Result<Subdivision, PlanarError> {
    p.validate()?;
    let corners = p.corner_indices();
    if corners.len() < 3 {
        return Err(PlanarError::Triangulation("fewer than 3 corners".into()));
    }

    // Ring of corner indices into p; `original[k]` marks whether the ring
    // edge from ring[k] to its successor is a stretch of the input boundary.
    let mut ring: Vec<usize> = corners.clone();
    let mut original: Vec<bool> = vec![true; ring.len()];
    let mut cells: Vec<Polygon> = Vec::new();

    while ring.len() > 3 {
        let n = ring.len();
        let mut clipped = false;
        'candidates: for k in 0..n {
            let ku = (k + n - 1) % n;
            let kw = (k + 1) % n;
            let (u, v, w) = (p.vertex(ring[ku]), p.vertex(ring[k]), p.vertex(ring[kw]));
            if orientation(u, v, w) != Orientation::Left {
                continue;
            }
            for (j, &cj) in ring.iter().enumerate() {
                if j == ku || j == k || j == kw {
                    continue;
                }
                let c = p.vertex(cj);
                let blocked = point_in_triangle_closed(c, u, v, w)
                    || segment_contains(u, w, c);
                if blocked {
                    continue 'candidates;
                }
            }
            cells.push(build_cell(
                p,
                &[
                    (ring[ku], ring[k], original[ku]),
                    (ring[k], ring[kw], original[k]),
                    (ring[kw], ring[ku], false),
                ],
            ));
            ring.remove(k);
            original.remove(k);
            let prev = (k + original.len() - 1) % original.len();
            original[prev] = false;
            clipped = true;
            break;
        }
        if !clipped {
            return Err(PlanarError::Triangulation("no ear found".into()));
        }
    }
    cells.push(build_cell(
        p,
        &[
            (ring[0], ring[1], original[0]),
            (ring[1], ring[2], original[1]),
            (ring[2], ring[0], original[2]),
        ],
    ));
    Ok(Subdivision { outer: p.clone(), cells })
}

/// Assemble a triangle cell, copying the original boundary chain (with its
/// flat vertices) for edges that lie on the input boundary.
fn build_cell(p: &Polygon, sides: &[(usize, usize, bool)]) -> Polygon {
    let n = p.len();
    let mut verts: Vec<Point> = Vec::new();
    for &(from, to, is_original) in sides {
        verts.push(p.vertex(from).clone());
        if is_original {
            let mut i = (from + 1) % n;
            while i != to {
                verts.push(p.vertex(i).clone());
                i = (i + 1) % n;
            }
        }
    }
    Polygon::new_unchecked(verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::CReal;
    use crate::planar::subdivision::check_partition;
    use crate::planar::Containment;

    #[test]
    fn triangle_is_its_own_triangulation() {
        let t = Polygon::from_int_coords(&[(0, 0), (3, 0), (0, 2)]).unwrap();
        let s = triangulate(&t).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.cells[0].vertices().len(), 3);
    }

    #[test]
    fn convex_quad_gives_two_triangles() {
        let q = Polygon::from_int_coords(&[(0, 0), (2, 0), (3, 2), (0, 1)]).unwrap();
        let s = triangulate(&q).unwrap();
        assert_eq!(s.cells.len(), 2);
        s.validate().unwrap();
    }

    #[test]
    fn l_shape_gives_four_interior_triangles() {
        let l =
            Polygon::from_int_coords(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        let s = triangulate(&l).unwrap();
        assert_eq!(s.cells.len(), 4);
        check_partition(&s.outer, &s.cells).unwrap();
        // Diagonal midpoints stay inside the polygon (diagonals are interior).
        for cell in &s.cells {
            for i in 0..cell.len() {
                let (a, b) = cell.edge(i);
                let mid = a.midpoint(&b);
                assert_ne!(l.contains(&mid), Containment::Outside);
            }
        }
    }

    #[test]
    fn flat_vertices_preserved_in_cells() {
        let p = Polygon::from_int_coords(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]).unwrap();
        let s = triangulate(&p).unwrap();
        // 4 corners → 2 triangles; the flat vertex (1,0) survives in a cell.
        assert_eq!(s.cells.len(), 2);
        let flat = Point::from_ints(1, 0);
        let kept = s
            .cells
            .iter()
            .any(|c| c.vertices().iter().any(|v| *v == flat));
        assert!(kept);
        check_partition(&s.outer, &s.cells).unwrap();
    }

    #[test]
    fn areas_add_up_exactly() {
        let p = Polygon::from_int_coords(&[(0, 0), (4, 0), (4, 1), (1, 1), (1, 3), (3, 3), (3, 4), (0, 4)])
            .unwrap();
        let s = triangulate(&p).unwrap();
        let mut sum = CReal::zero();
        for c in &s.cells {
            sum = sum.add(&c.area());
        }
        assert_eq!(sum, p.area());
        check_partition(&s.outer, &s.cells).unwrap();
    }
}
