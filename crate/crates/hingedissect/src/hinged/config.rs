//! Configurations: exact placements of a figure's links in the plane.

use super::HingedFigure;
use crate::planar::{Isometry, Point, Polygon};
use std::cmp::Ordering;

/// A per-link placement. All placements are orientation-preserving; the
/// paper's pieces are oriented polygons and reflections are never used.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub placements: Vec<Isometry>,
}

impl Configuration {
    pub fn identity(figure: &HingedFigure) -> Self {
        Configuration { placements: vec![Isometry::identity(); figure.links.len()] }
    }

    pub fn placed_link(&self, figure: &HingedFigure, link: usize) -> Polygon {
        figure.links[link].transform(&self.placements[link])
    }

    pub fn placed_vertex(&self, figure: &HingedFigure, link: usize, vertex: usize) -> Point {
        self.placements[link].apply(figure.links[link].vertex(vertex))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("placement count {got} does not match link count {want}")]
    PlacementCount { got: usize, want: usize },
    #[error("placement of link {0} is not a rigid rotation: {1}")]
    BadPlacement(usize, crate::numeric::NumericError),
    #[error("hinge {hinge}: incident vertices do not coincide (links {a} and {b})")]
    HingeTorn { hinge: usize, a: usize, b: usize },
    #[error("hinge {hinge}: cyclic order of links is not maintained")]
    CyclicOrder { hinge: usize },
    #[error("links {a} and {b} have overlapping interiors")]
    Overlap { a: usize, b: usize },
}

/// Exact validation: hinge coincidence, cyclic order, disjoint interiors.
pub fn validate_configuration(
    figure: &HingedFigure,
    config: &Configuration,
) -> Result<(), ConfigError> {
    if config.placements.len() != figure.links.len() {
        return Err(ConfigError::PlacementCount {
            got: config.placements.len(),
            want: figure.links.len(),
        });
    }
    for (i, iso) in config.placements.iter().enumerate() {
        iso.validate().map_err(|e| ConfigError::BadPlacement(i, e))?;
    }
    for (h, hinge) in figure.hinges.iter().enumerate() {
        let (l0, v0) = hinge.incidences[0];
        let p0 = config.placed_vertex(figure, l0, v0);
        for &(l, v) in &hinge.incidences[1..] {
            if config.placed_vertex(figure, l, v) != p0 {
                return Err(ConfigError::HingeTorn { hinge: h, a: l0, b: l });
            }
        }
        if hinge.incidences.len() > 2 && !cyclic_order_ok(figure, config, hinge) {
            return Err(ConfigError::CyclicOrder { hinge: h });
        }
    }
    let placed: Vec<Polygon> = (0..figure.links.len())
        .map(|i| config.placed_link(figure, i))
        .collect();
    if let Some((a, b)) = pairwise_interiors_disjoint(&placed) {
        return Err(ConfigError::Overlap { a, b });
    }
    Ok(())
}

/// Check that the placed angular order of the link wedges around a hinge
/// matches the stored counterclockwise order, up to rotation.
fn cyclic_order_ok(
    figure: &HingedFigure,
    config: &Configuration,
    hinge: &super::Hinge,
) -> bool {
    // Wedge of incidence (l, v): direction of the outgoing edge at v.
    let dirs: Vec<Point> = hinge
        .incidences
        .iter()
        .map(|&(l, v)| {
            let n = figure.links[l].len();
            let out = figure.links[l].vertex((v + 1) % n).sub(figure.links[l].vertex(v));
            config.placements[l].apply_vector(&out)
        })
        .collect();
    let m = dirs.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| angular_cmp(&dirs[i], &dirs[j]));
    // `order` lists incidences counterclockwise; compare cyclic sequences.
    (0..m).any(|shift| (0..m).all(|k| order[(shift + k) % m] == k))
}

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

/// Sweep over bounding boxes, exact pair tests on the survivors. Returns an
/// offending pair if any two interiors intersect.
pub fn pairwise_interiors_disjoint(polys: &[Polygon]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..polys.len()).collect();
    order.sort_by(|&i, &j| {
        polys[i]
            .bbox()
            .xl
            .partial_cmp(&polys[j].bbox().xl)
            .unwrap_or(Ordering::Equal)
    });
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let bi = polys[i].bbox();
        active.retain(|&j| polys[j].bbox().xh >= bi.xl);
        for &j in &active {
            if bi.intersects(polys[j].bbox())
                && !crate::planar::interiors_disjoint(&polys[i], &polys[j])
            {
                return Some((j.min(i), j.max(i)));
            }
        }
        active.push(i);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hinged::Hinge;
    use crate::numeric::RationalAngle;
    use crate::planar::Polygon;

    fn unit_square() -> Polygon {
        Polygon::from_int_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    fn two_squares_hinged() -> HingedFigure {
        // hinge at square 0's corner (1,1) and square 1's corner (0,0)
        HingedFigure {
            links: vec![unit_square(), unit_square()],
            hinges: vec![Hinge { incidences: vec![(0, 2), (1, 0)] }],
        }
    }

    #[test]
    fn identity_single_link_is_valid() {
        let f = HingedFigure::single_link(unit_square());
        let c = Configuration::identity(&f);
        validate_configuration(&f, &c).unwrap();
    }

    #[test]
    fn diagonal_squares_are_valid() {
        let f = two_squares_hinged();
        let c = Configuration {
            placements: vec![
                Isometry::identity(),
                Isometry::translation(&Point::from_ints(1, 1)),
            ],
        };
        validate_configuration(&f, &c).unwrap();
    }

    #[test]
    fn coincident_squares_overlap() {
        let f = two_squares_hinged();
        // place link 1 exactly on link 0: the half turn about the square's
        // center maps (0,0) onto the hinge corner (1,1) and the square onto
        // itself.
        let c = Configuration {
            placements: vec![
                Isometry::identity(),
                Isometry::rotation_about(
                    &Point::from_rats(crate::numeric::rat(1, 2), crate::numeric::rat(1, 2)),
                    &RationalAngle::half_turn(),
                ),
            ],
        };
        assert!(matches!(
            validate_configuration(&f, &c),
            Err(ConfigError::Overlap { .. })
        ));
    }

    #[test]
    fn torn_hinge_detected() {
        let f = two_squares_hinged();
        let c = Configuration {
            placements: vec![
                Isometry::identity(),
                Isometry::translation(&Point::from_ints(2, 2)),
            ],
        };
        assert!(matches!(
            validate_configuration(&f, &c),
            Err(ConfigError::HingeTorn { .. })
        ));
    }

    #[test]
    fn cyclic_order_enforced_on_ternary_hinge() {
        // three unit squares around the origin at quarter turns: stored CCW
        // order must match the geometric one.
        let sq = unit_square();
        let q = RationalAngle::quarter_turn();
        let placements = vec![
            Isometry::identity(),
            Isometry::from_angle(&q),
            Isometry::from_angle(&q.compose(&q)),
        ];
        let links = vec![sq.clone(), sq.clone(), sq.clone()];
        let good = HingedFigure {
            links: links.clone(),
            hinges: vec![Hinge { incidences: vec![(0, 0), (1, 0), (2, 0)] }],
        };
        let c = Configuration { placements };
        validate_configuration(&good, &c).unwrap();
        let bad = HingedFigure {
            links,
            hinges: vec![Hinge { incidences: vec![(0, 0), (2, 0), (1, 0)] }],
        };
        assert!(matches!(
            validate_configuration(&bad, &c),
            Err(ConfigError::CyclicOrder { .. })
        ));
    }
}
