//! Hinged figures, configurations, and mechanical verification of the
//! refinement relation.
//!
//! A hinged figure is a finite set of simple polygons (links) joined at
//! rotatable vertex hinges with a fixed counterclockwise cyclic order of
//! links around each hinge. A configuration places every link rigidly so
//! that hinged vertices coincide, link interiors are disjoint, and each
//! hinge's cyclic order is maintained. A refinement certificate exhibits one
//! figure's links tiling another's, together with enough hinge bookkeeping
//! that any configuration of the coarse figure induces one of the fine
//! figure. Everything here verifies with exact arithmetic and is independent
//! of the construction gadgets.

mod boundary;
mod config;
mod refine;

pub use boundary::{boundary_path, BoundaryPath, BoundaryStep};
pub use config::{pairwise_interiors_disjoint, validate_configuration, Configuration};
pub use refine::{
    check_refinement, check_refinement_chain, compose_certs, induced_configuration, HingeWitness,
    verify_cert_with_config, RefineError, RefinementCert, TilePlacement,
};

use crate::planar::{Point, Polygon};

/// Identification of link vertices into a rotatable joint, with the
/// counterclockwise cyclic order of the incident links stored explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hinge {
    /// `(link index, vertex index)` pairs in counterclockwise order.
    pub incidences: Vec<(usize, usize)>,
}

/// Links plus hinges. Link polygons live in their own local frames.
#[derive(Clone, PartialEq, Eq)]
pub struct HingedFigure {
    pub links: Vec<Polygon>,
    pub hinges: Vec<Hinge>,
}

#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error("figure has no links")]
    Empty,
    #[error("link {0} invalid: {1}")]
    BadLink(usize, crate::planar::PlanarError),
    #[error("hinge {0} invalid: {1}")]
    BadHinge(usize, String),
    #[error("incidence graph is not connected")]
    Disconnected,
    #[error("operation requires a tree-like figure")]
    NotTreeLike,
    #[error("boundary traversal failed: {0}")]
    Boundary(String),
}

/// Validation summary for a figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureReport {
    pub tree_like: bool,
    pub chain_like: bool,
}

impl HingedFigure {
    pub fn single_link(p: Polygon) -> Self {
        HingedFigure { links: vec![p], hinges: Vec::new() }
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    /// Position of a link vertex in the link's local frame.
    pub fn vertex_pos(&self, link: usize, vertex: usize) -> Point {
        self.links[link].vertex(vertex).clone()
    }

    /// Hinges incident to a given link.
    pub fn hinges_of_link(&self, link: usize) -> Vec<usize> {
        (0..self.hinges.len())
            .filter(|&h| self.hinges[h].incidences.iter().any(|&(l, _)| l == link))
            .collect()
    }

    /// Hinge at a given (link, vertex), if any.
    pub fn hinge_at(&self, link: usize, vertex: usize) -> Option<usize> {
        (0..self.hinges.len())
            .find(|&h| self.hinges[h].incidences.iter().any(|&(l, v)| l == link && v == vertex))
    }

    /// Full validation; returns the tree/chain classification.
    pub fn validate(&self) -> Result<FigureReport, FigureError> {
        if self.links.is_empty() {
            return Err(FigureError::Empty);
        }
        for (i, l) in self.links.iter().enumerate() {
            l.validate().map_err(|e| FigureError::BadLink(i, e))?;
        }
        let mut seen = std::collections::HashSet::new();
        for (h, hinge) in self.hinges.iter().enumerate() {
            if hinge.incidences.len() < 2 {
                return Err(FigureError::BadHinge(h, "fewer than 2 incidences".into()));
            }
            for &(l, v) in &hinge.incidences {
                if l >= self.links.len() {
                    return Err(FigureError::BadHinge(h, format!("link {} out of range", l)));
                }
                if v >= self.links[l].len() {
                    return Err(FigureError::BadHinge(
                        h,
                        format!("vertex {} out of range on link {}", v, l),
                    ));
                }
                if !seen.insert((l, v)) {
                    return Err(FigureError::BadHinge(
                        h,
                        format!("(link {}, vertex {}) appears in two hinges", l, v),
                    ));
                }
            }
        }
        // Incidence graph: nodes = links ∪ hinges, edges = incidences.
        let nodes = self.links.len() + self.hinges.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        let mut edges = 0usize;
        for (h, hinge) in self.hinges.iter().enumerate() {
            let hn = self.links.len() + h;
            for &(l, _) in &hinge.incidences {
                adj[l].push(hn);
                adj[hn].push(l);
                edges += 1;
            }
        }
        let mut visited = vec![false; nodes];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut count = 1;
        while let Some(n) = stack.pop() {
            for &m in &adj[n] {
                if !visited[m] {
                    visited[m] = true;
                    count += 1;
                    stack.push(m);
                }
            }
        }
        if count != nodes {
            return Err(FigureError::Disconnected);
        }
        let tree_like = edges + 1 == nodes;
        let chain_like = tree_like && adj.iter().all(|a| a.len() <= 2);
        Ok(FigureReport { tree_like, chain_like })
    }

    pub fn is_tree_like(&self) -> bool {
        matches!(self.validate(), Ok(FigureReport { tree_like: true, .. }))
    }

    /// Total area of all links.
    pub fn total_area(&self) -> crate::numeric::CReal {
        self.links
            .iter()
            .fold(crate::numeric::CReal::zero(), |acc, l| acc.add(&l.area()))
    }

    /// Insert a flat vertex at `p` on edge `edge` of `link`, shifting the
    /// vertex indices stored in hinges. Returns the new vertex index. If `p`
    /// already is an endpoint of that edge, nothing changes.
    pub fn declare_vertex(&mut self, link: usize, edge: usize, p: &Point) -> usize {
        let poly = &self.links[link];
        let (a, b) = poly.edge(edge);
        if *p == a {
            return edge;
        }
        if *p == b {
            return (edge + 1) % poly.len();
        }
        let (new_poly, idx) = poly.with_vertex_on_edge(edge, p.clone());
        self.links[link] = new_poly;
        for hinge in &mut self.hinges {
            for inc in &mut hinge.incidences {
                if inc.0 == link && inc.1 >= idx {
                    inc.1 += 1;
                }
            }
        }
        idx
    }
}

impl std::fmt::Debug for HingedFigure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "HingedFigure({} links, {} hinges)",
            self.links.len(),
            self.hinges.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::from_int_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    fn triangle() -> Polygon {
        Polygon::from_int_coords(&[(0, 0), (2, 0), (0, 2)]).unwrap()
    }

    #[test]
    fn single_link_is_tree_and_chain() {
        let f = HingedFigure::single_link(square());
        let r = f.validate().unwrap();
        assert!(r.tree_like && r.chain_like);
    }

    #[test]
    fn two_triangles_hinged_make_a_path() {
        let f = HingedFigure {
            links: vec![triangle(), triangle()],
            hinges: vec![Hinge { incidences: vec![(0, 1), (1, 0)] }],
        };
        let r = f.validate().unwrap();
        assert!(r.tree_like && r.chain_like);
    }

    #[test]
    fn three_links_in_a_cycle_are_valid_but_not_tree_like() {
        let hinges = vec![
            Hinge { incidences: vec![(0, 1), (1, 0)] },
            Hinge { incidences: vec![(1, 1), (2, 0)] },
            Hinge { incidences: vec![(2, 1), (0, 0)] },
        ];
        let f = HingedFigure { links: vec![triangle(), triangle(), triangle()], hinges };
        let r = f.validate().unwrap();
        assert!(!r.tree_like);
        assert!(!r.chain_like);
    }

    #[test]
    fn disconnected_figures_rejected() {
        let f = HingedFigure { links: vec![triangle(), triangle()], hinges: vec![] };
        assert!(matches!(f.validate(), Err(FigureError::Disconnected)));
    }

    #[test]
    fn declare_vertex_shifts_hinges() {
        let mut f = HingedFigure {
            links: vec![triangle(), triangle()],
            hinges: vec![Hinge { incidences: vec![(0, 2), (1, 0)] }],
        };
        let p = Point::from_ints(1, 0);
        let idx = f.declare_vertex(0, 0, &p);
        assert_eq!(idx, 1);
        assert_eq!(f.hinges[0].incidences[0], (0, 3));
        assert_eq!(f.links[0].len(), 4);
        f.validate().unwrap();
    }
}
