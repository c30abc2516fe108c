//! Exact overlay of two subdivisions of the same polygon.
//!
//! All cell edges of both inputs are split at every mutual contact point,
//! deduplicated, and assembled into a planar graph; faces are traced by
//! walking the rotation system with exact angular comparisons. Degenerate
//! contacts (shared endpoints, collinear overlaps) need no special cases
//! beyond the splitting itself. Every output cell is a maximal region lying
//! in exactly one cell of each input, reported as `(cell_of_a, cell_of_b)`
//! provenance pairs.

use super::point::{
    line_intersection, segment_contains, segments_properly_cross, Containment, Point,
};
use super::polygon::{signed_area_of, Polygon};
use super::subdivision::Subdivision;
use super::PlanarError;
use std::cmp::Ordering;

pub fn overlay(
    a: &Subdivision,
    b: &Subdivision,
) -> Result<(Subdivision, Vec<(usize, usize)>), PlanarError> {
    if !a.same_outer(b) {
        return Err(PlanarError::OuterMismatch);
    }
    let mut segments: Vec<(Point, Point)> = Vec::new();
    for cell in a.cells.iter().chain(b.cells.iter()) {
        for i in 0..cell.len() {
            let (p, q) = cell.edge(i);
            segments.push((p, q));
        }
    }

    // Split every segment at every contact with another segment.
    let boxes: Vec<_> = segments
        .iter()
        .map(|(p, q)| p.f64_bbox().merge(&q.f64_bbox()))
        .collect();
    let mut cuts: Vec<Vec<Point>> = segments
        .iter()
        .map(|(p, q)| vec![p.clone(), q.clone()])
        .collect();
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            if !boxes[i].intersects(&boxes[j]) {
                continue;
            }
            let (a1, a2) = &segments[i];
            let (b1, b2) = &segments[j];
            if segments_properly_cross(a1, a2, b1, b2) {
                if let Some(x) = line_intersection(a1, a2, b1, b2) {
                    cuts[i].push(x.clone());
                    cuts[j].push(x);
                }
            } else {
                for e in [b1, b2] {
                    if segment_contains(a1, a2, e) {
                        cuts[i].push(e.clone());
                    }
                }
                for e in [a1, a2] {
                    if segment_contains(b1, b2, e) {
                        cuts[j].push(e.clone());
                    }
                }
            }
        }
    }

    // Canonical node set.
    let mut nodes: Vec<Point> = cuts.iter().flatten().cloned().collect();
    nodes.sort();
    nodes.dedup();
    let node_id = |p: &Point| -> usize {
        nodes.binary_search_by(|n| n.cmp(p)).expect("node must exist")
    };

    // Deduplicated subsegments as undirected node-id pairs.
    let mut subsegs: Vec<(usize, usize)> = Vec::new();
    for (i, (p, _)) in segments.iter().enumerate() {
        let dir = segments[i].1.sub(p);
        cuts[i].sort_by(|u, v| dir.dot(&u.sub(p)).cmp(&dir.dot(&v.sub(p))));
        cuts[i].dedup();
        for w in cuts[i].windows(2) {
            let u = node_id(&w[0]);
            let v = node_id(&w[1]);
            subsegs.push((u.min(v), u.max(v)));
        }
    }
    subsegs.sort();
    subsegs.dedup();

    // Rotation system: outgoing half-edges sorted counterclockwise.
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &(u, v) in &subsegs {
        outgoing[u].push(v);
        outgoing[v].push(u);
    }
    for (u, list) in outgoing.iter_mut().enumerate() {
        let base = nodes[u].clone();
        list.sort_by(|&v1, &v2| angular_cmp(&nodes[v1].sub(&base), &nodes[v2].sub(&base)));
        list.dedup();
    }

    // Trace faces: next half-edge of (u→v) is the clockwise successor of
    // (v→u) around v, which walks bounded faces counterclockwise.
    let mut visited: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    let mut cells: Vec<Polygon> = Vec::new();
    let mut provenance: Vec<(usize, usize)> = Vec::new();
    for &(su, sv) in &subsegs {
        for (mut u, mut v) in [(su, sv), (sv, su)] {
            if visited.contains(&(u, v)) {
                continue;
            }
            let mut cycle: Vec<usize> = Vec::new();
            let (start_u, start_v) = (u, v);
            loop {
                visited.insert((u, v));
                cycle.push(u);
                let rot = &outgoing[v];
                let idx = rot
                    .iter()
                    .position(|&w| w == u)
                    .expect("reverse edge in rotation");
                let next = rot[(idx + rot.len() - 1) % rot.len()];
                u = v;
                v = next;
                if (u, v) == (start_u, start_v) {
                    break;
                }
            }
            let pts: Vec<Point> = cycle.iter().map(|&i| nodes[i].clone()).collect();
            if signed_area_of(&pts).sign() != Ordering::Greater {
                continue; // outer face
            }
            let poly = Polygon::new(pts)
                .map_err(|e| PlanarError::Overlay(format!("bad face: {}", e)))?;
            let ip = poly.interior_point();
            let ia = locate(&a.cells, &ip)
                .ok_or_else(|| PlanarError::Overlay("face not in any cell of a".into()))?;
            let ib = locate(&b.cells, &ip)
                .ok_or_else(|| PlanarError::Overlay("face not in any cell of b".into()))?;
            cells.push(poly.canonicalized());
            provenance.push((ia, ib));
        }
    }

    Ok((
        Subdivision { outer: a.outer.clone(), cells },
        provenance,
    ))
}

fn locate(cells: &[Polygon], p: &Point) -> Option<usize> {
    let pb = p.f64_bbox();
    cells
        .iter()
        .position(|c| c.bbox().intersects(&pb) && c.contains(p) == Containment::Inside)
}

/// Counterclockwise angular order starting just above the +x axis.
fn angular_cmp(d1: &Point, d2: &Point) -> Ordering {
    let class = |d: &Point| -> u8 {
        match d.y.sign() {
            Ordering::Greater => 0,
            Ordering::Less => 1,
            Ordering::Equal => {
                if d.x.sign() == Ordering::Greater {
                    0
                } else {
                    1
                }
            }
        }
    };
    class(d1).cmp(&class(d2)).then_with(|| match d1.cross(d2).sign() {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => Ordering::Equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::CReal;
    use crate::planar::triangulate;

    fn rect(x0: i64, y0: i64, x1: i64, y1: i64) -> Polygon {
        Polygon::from_int_coords(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)]).unwrap()
    }

    fn unit_square() -> Polygon {
        rect(0, 0, 1, 1)
    }

    #[test]
    fn overlay_with_self_is_identity() {
        let s = Subdivision {
            outer: rect(0, 0, 2, 2),
            cells: vec![rect(0, 0, 1, 2), rect(1, 0, 2, 2)],
        };
        let (out, prov) = overlay(&s, &s).unwrap();
        assert_eq!(out.cells.len(), 2);
        out.validate().unwrap();
        for (i, j) in prov {
            assert_eq!(i, j);
        }
    }

    #[test]
    fn vertical_and_horizontal_halves_make_quadrants() {
        let outer = unit_square();
        let v = Subdivision {
            outer: outer.clone(),
            cells: vec![
                Polygon::from_int_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap(),
            ],
        };
        let vertical = Subdivision {
            outer: outer.clone(),
            cells: vec![
                Polygon::new(vec![
                    Point::from_ints(0, 0),
                    Point::from_rats(crate::numeric::rat(1, 2), crate::numeric::rat(0, 1)),
                    Point::from_rats(crate::numeric::rat(1, 2), crate::numeric::rat(1, 1)),
                    Point::from_ints(0, 1),
                ])
                .unwrap(),
                Polygon::new(vec![
                    Point::from_rats(crate::numeric::rat(1, 2), crate::numeric::rat(0, 1)),
                    Point::from_ints(1, 0),
                    Point::from_ints(1, 1),
                    Point::from_rats(crate::numeric::rat(1, 2), crate::numeric::rat(1, 1)),
                ])
                .unwrap(),
            ],
        };
        let horizontal = Subdivision {
            outer: outer.clone(),
            cells: vec![
                Polygon::new(vec![
                    Point::from_ints(0, 0),
                    Point::from_ints(1, 0),
                    Point::from_rats(crate::numeric::rat(1, 1), crate::numeric::rat(1, 2)),
                    Point::from_rats(crate::numeric::rat(0, 1), crate::numeric::rat(1, 2)),
                ])
                .unwrap(),
                Polygon::new(vec![
                    Point::from_rats(crate::numeric::rat(0, 1), crate::numeric::rat(1, 2)),
                    Point::from_rats(crate::numeric::rat(1, 1), crate::numeric::rat(1, 2)),
                    Point::from_ints(1, 1),
                    Point::from_ints(0, 1),
                ])
                .unwrap(),
            ],
        };
        let (out, prov) = overlay(&vertical, &horizontal).unwrap();
        assert_eq!(out.cells.len(), 4);
        out.validate().unwrap();
        let quarter = CReal::from_rat(crate::numeric::rat(1, 4));
        for c in &out.cells {
            assert_eq!(c.area(), quarter);
        }
        assert_eq!(prov.len(), 4);
        let _ = v;
    }

    #[test]
    fn diagonals_against_vertical_split() {
        // Square split by both diagonals (4 cells) overlaid on a vertical
        // half-split: 6 cells with areas summing to 1. Oracle: the two side
        // triangles are cut by the vertical line, the top/bottom ones are not.
        let outer = unit_square();
        let c = Point::from_rats(crate::numeric::rat(1, 2), crate::numeric::rat(1, 2));
        let cells = vec![
            Polygon::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 0), c.clone()]).unwrap(),
            Polygon::new(vec![Point::from_ints(1, 0), Point::from_ints(1, 1), c.clone()]).unwrap(),
            Polygon::new(vec![Point::from_ints(1, 1), Point::from_ints(0, 1), c.clone()]).unwrap(),
            Polygon::new(vec![Point::from_ints(0, 1), Point::from_ints(0, 0), c.clone()]).unwrap(),
        ];
        let diagonals = Subdivision { outer: outer.clone(), cells };
        diagonals.validate().unwrap();
        let half = crate::numeric::rat(1, 2);
        let vertical = Subdivision {
            outer: outer.clone(),
            cells: vec![
                Polygon::new(vec![
                    Point::from_ints(0, 0),
                    Point::from_rats(half.clone(), crate::numeric::rat(0, 1)),
                    Point::from_rats(half.clone(), crate::numeric::rat(1, 1)),
                    Point::from_ints(0, 1),
                ])
                .unwrap(),
                Polygon::new(vec![
                    Point::from_rats(half.clone(), crate::numeric::rat(0, 1)),
                    Point::from_ints(1, 0),
                    Point::from_ints(1, 1),
                    Point::from_rats(half.clone(), crate::numeric::rat(1, 1)),
                ])
                .unwrap(),
            ],
        };
        let (out, _) = overlay(&diagonals, &vertical).unwrap();
        assert_eq!(out.cells.len(), 6);
        out.validate().unwrap();
        let mut areas: Vec<CReal> = out.cells.iter().map(|c| c.area()).collect();
        areas.sort();
        let total = areas.iter().fold(CReal::zero(), |acc, a| acc.add(a));
        assert_eq!(total, CReal::from_int(1));
        // Area multiset: four pieces of 1/8 (halved side triangles) and two of 1/4.
        let eighth = CReal::from_rat(crate::numeric::rat(1, 8));
        let quarter = CReal::from_rat(crate::numeric::rat(1, 4));
        assert_eq!(areas.iter().filter(|a| **a == eighth).count(), 4);
        assert_eq!(areas.iter().filter(|a| **a == quarter).count(), 2);
    }

    #[test]
    fn commutativity_up_to_relabeling() {
        let l = Polygon::from_int_coords(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]).unwrap();
        let t1 = triangulate(&l).unwrap();
        let t2 = Subdivision {
            outer: l.clone(),
            cells: vec![
                rect(0, 0, 1, 2),
                rect(1, 0, 2, 1),
            ],
        };
        let (ab, _) = overlay(&t1, &t2).unwrap();
        let (ba, _) = overlay(&t2, &t1).unwrap();
        let mut areas_ab: Vec<CReal> = ab.cells.iter().map(|c| c.area()).collect();
        let mut areas_ba: Vec<CReal> = ba.cells.iter().map(|c| c.area()).collect();
        areas_ab.sort();
        areas_ba.sort();
        assert_eq!(areas_ab, areas_ba);
        ab.validate().unwrap();
        ba.validate().unwrap();
    }
}
