//! Depth-first boundary traversal of tree-like figures.
//!
//! The boundary of a tree-like figure is a single closed path visiting every
//! link edge exactly once. Arriving at a hinged vertex on one link, the path
//! departs on the cyclically next link around that hinge; a hinge point is
//! therefore traced once per incident wedge, each visit a distinct boundary
//! point.

use super::{FigureError, HingedFigure};

/// One step of the boundary path: the directed edge of `link` from vertex
/// `edge` to vertex `edge + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryStep {
    pub link: usize,
    pub edge: usize,
}

#[derive(Clone, Debug)]
pub struct BoundaryPath {
    pub steps: Vec<BoundaryStep>,
}

impl BoundaryPath {
    /// Index of the step departing from boundary point `(link, vertex)`.
    /// Each such pair departs exactly once on a tree-like boundary.
    pub fn departure_index(&self, link: usize, vertex: usize) -> Option<usize> {
        self.steps
            .iter()
            .position(|s| s.link == link && s.edge == vertex)
    }

    /// The steps strictly between the departures of two boundary points,
    /// walking forward (cyclically) from `from` to `to`.
    pub fn steps_between(
        &self,
        from: (usize, usize),
        to: (usize, usize),
    ) -> Option<Vec<BoundaryStep>> {
        let i = self.departure_index(from.0, from.1)?;
        let j = self.departure_index(to.0, to.1)?;
        let n = self.steps.len();
        let mut out = Vec::new();
        let mut k = i;
        while k != j {
            out.push(self.steps[k]);
            k = (k + 1) % n;
        }
        Some(out)
    }
}

/// Walk the boundary of a tree-like figure.
pub fn boundary_path(figure: &HingedFigure) -> Result<BoundaryPath, FigureError> {
    let report = figure.validate().map_err(|e| e)?;
    if !report.tree_like {
        return Err(FigureError::NotTreeLike);
    }
    let start = BoundaryStep { link: 0, edge: 0 };
    let mut steps = Vec::new();
    let mut cur = start;
    loop {
        steps.push(cur);
        let n = figure.links[cur.link].len();
        let arrive = (cur.edge + 1) % n;
        cur = match figure.hinge_at(cur.link, arrive) {
            None => BoundaryStep { link: cur.link, edge: arrive },
            Some(h) => {
                let hinge = &figure.hinges[h];
                let pos = hinge
                    .incidences
                    .iter()
                    .position(|&(l, v)| l == cur.link && v == arrive)
                    .expect("hinge_at found it");
                let (l2, v2) = hinge.incidences[(pos + 1) % hinge.incidences.len()];
                BoundaryStep { link: l2, edge: v2 }
            }
        };
        if cur == start {
            break;
        }
        let total: usize = figure.links.iter().map(|l| l.len()).sum();
        if steps.len() > total {
            return Err(FigureError::Boundary(
                "walk exceeded edge count without closing".into(),
            ));
        }
    }
    let total: usize = figure.links.iter().map(|l| l.len()).sum();
    if steps.len() != total {
        return Err(FigureError::Boundary(format!(
            "boundary covered {} of {} edges",
            steps.len(),
            total
        )));
    }
    Ok(BoundaryPath { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hinged::Hinge;
    use crate::planar::Polygon;

    fn triangle() -> Polygon {
        Polygon::from_int_coords(&[(0, 0), (2, 0), (0, 2)]).unwrap()
    }

    #[test]
    fn single_triangle_has_three_steps() {
        let f = HingedFigure::single_link(triangle());
        let p = boundary_path(&f).unwrap();
        assert_eq!(p.steps.len(), 3);
    }

    #[test]
    fn two_hinged_triangles_have_six_steps() {
        let f = HingedFigure {
            links: vec![triangle(), triangle()],
            hinges: vec![Hinge { incidences: vec![(0, 1), (1, 0)] }],
        };
        let p = boundary_path(&f).unwrap();
        assert_eq!(p.steps.len(), 6);
        // The hinge appears as two distinct boundary points: once per link.
        let visits: Vec<_> = p
            .steps
            .iter()
            .filter(|s| (s.link == 0 && s.edge == 1) || (s.link == 1 && s.edge == 0))
            .collect();
        assert_eq!(visits.len(), 2);
    }

    #[test]
    fn chains_of_k_triangles_have_3k_steps() {
        for k in 1..=6usize {
            let links: Vec<Polygon> = (0..k).map(|_| triangle()).collect();
            let hinges: Vec<Hinge> = (0..k - 1)
                .map(|i| Hinge { incidences: vec![(i, 1), (i + 1, 0)] })
                .collect();
            let f = HingedFigure { links, hinges };
            let p = boundary_path(&f).unwrap();
            assert_eq!(p.steps.len(), 3 * k);
            // every undirected link edge appears exactly once
            let mut seen = std::collections::HashSet::new();
            for s in &p.steps {
                assert!(seen.insert((s.link, s.edge)));
            }
        }
    }

    #[test]
    fn steps_between_boundary_points() {
        let f = HingedFigure {
            links: vec![triangle(), triangle()],
            hinges: vec![Hinge { incidences: vec![(0, 1), (1, 0)] }],
        };
        let p = boundary_path(&f).unwrap();
        let seg = p.steps_between((0, 0), (1, 0)).unwrap();
        assert!(!seg.is_empty());
        let whole = p.steps_between((0, 0), (0, 0)).unwrap();
        assert!(whole.is_empty());
    }

    #[test]
    fn non_tree_figures_unsupported() {
        let hinges = vec![
            Hinge { incidences: vec![(0, 1), (1, 0)] },
            Hinge { incidences: vec![(1, 1), (2, 0)] },
            Hinge { incidences: vec![(2, 1), (0, 0)] },
        ];
        let f = HingedFigure { links: vec![triangle(), triangle(), triangle()], hinges };
        assert!(matches!(boundary_path(&f), Err(FigureError::NotTreeLike)));
    }
}
