//! Refinement certificates and their verifier.
//!
//! `child ≺ parent` is witnessed by a map sending every child link into a
//! parent link (with a rigid placement in the parent's local frame). The
//! checker verifies, per parent link, that its assigned child links tile it
//! exactly; that every child hinge is consistent (both sides land on the same
//! point when the parents are assembled, or are pinned to a parent hinge when
//! they straddle two parent links); and that every parent hinge is realized
//! by child boundary points. Those facts make the gluing sound: any valid
//! configuration of the parent induces a valid configuration of the child.

use super::config::{validate_configuration, Configuration};
use super::HingedFigure;
use crate::planar::{check_partition, Isometry, Point, Polygon};

/// Placement of one child link inside a parent link's local frame.
#[derive(Clone, Debug)]
pub struct TilePlacement {
    pub parent_link: usize,
    pub placement: Isometry,
}

/// For one parent hinge: a child vertex realizing each incidence.
#[derive(Clone, Debug)]
pub struct HingeWitness {
    /// `(child link, child vertex)` per parent-hinge incidence, in order.
    pub realizations: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct RefinementCert {
    pub parent: HingedFigure,
    pub child: HingedFigure,
    /// Indexed by child link.
    pub tiles: Vec<TilePlacement>,
    /// Indexed by parent hinge.
    pub hinge_witnesses: Vec<HingeWitness>,
}

#[derive(Debug, thiserror::Error)]
pub enum RefineError {
    #[error("{side} figure invalid: {source}")]
    FigureInvalid { side: &'static str, source: super::FigureError },
    #[error("tile table has {got} entries for {want} child links")]
    TileCount { got: usize, want: usize },
    #[error("tile {0} placement invalid: {1}")]
    BadPlacement(usize, crate::numeric::NumericError),
    #[error("parent link {0} receives no child links")]
    Uncovered(usize),
    #[error("parent link {parent_link} not tiled exactly: {source}")]
    Tiling { parent_link: usize, source: crate::planar::PlanarError },
    #[error("child hinge {hinge}: {detail}")]
    HingeInconsistent { hinge: usize, detail: String },
    #[error("parent hinge {hinge} witness invalid: {detail}")]
    WitnessInvalid { hinge: usize, detail: String },
    #[error("certificate chain broken between entries {0} and {1}")]
    ChainMismatch(usize, usize),
}

impl RefinementCert {
    /// The identity refinement of a figure by itself.
    pub fn identity(figure: &HingedFigure) -> Self {
        RefinementCert {
            parent: figure.clone(),
            child: figure.clone(),
            tiles: (0..figure.links.len())
                .map(|i| TilePlacement { parent_link: i, placement: Isometry::identity() })
                .collect(),
            hinge_witnesses: figure
                .hinges
                .iter()
                .map(|h| HingeWitness { realizations: h.incidences.clone() })
                .collect(),
        }
    }

    /// Position of a child vertex inside its parent link's frame.
    pub fn child_vertex_in_parent(&self, link: usize, vertex: usize) -> Point {
        self.tiles[link]
            .placement
            .apply(self.child.links[link].vertex(vertex))
    }
}

pub fn check_refinement(cert: &RefinementCert) -> Result<(), RefineError> {
    cert.parent
        .validate()
        .map_err(|e| RefineError::FigureInvalid { side: "parent", source: e })?;
    cert.child
        .validate()
        .map_err(|e| RefineError::FigureInvalid { side: "child", source: e })?;
    if cert.tiles.len() != cert.child.links.len() {
        return Err(RefineError::TileCount {
            got: cert.tiles.len(),
            want: cert.child.links.len(),
        });
    }
    for (i, t) in cert.tiles.iter().enumerate() {
        t.placement
            .validate()
            .map_err(|e| RefineError::BadPlacement(i, e))?;
        if t.parent_link >= cert.parent.links.len() {
            return Err(RefineError::Uncovered(t.parent_link));
        }
    }

    // Exact tiling of every parent link.
    for (pl, parent_poly) in cert.parent.links.iter().enumerate() {
        let placed: Vec<Polygon> = cert
            .tiles
            .iter()
            .enumerate()
            .filter(|(_, t)| t.parent_link == pl)
            .map(|(c, t)| cert.child.links[c].transform(&t.placement))
            .collect();
        if placed.is_empty() {
            return Err(RefineError::Uncovered(pl));
        }
        check_partition(parent_poly, &placed)
            .map_err(|e| RefineError::Tiling { parent_link: pl, source: e })?;
    }

    // Child hinges must survive every parent configuration.
    for (h, hinge) in cert.child.hinges.iter().enumerate() {
        let spots: Vec<(usize, Point)> = hinge
            .incidences
            .iter()
            .map(|&(l, v)| (cert.tiles[l].parent_link, cert.child_vertex_in_parent(l, v)))
            .collect();
        let all_same_parent = spots.iter().all(|(p, _)| *p == spots[0].0);
        if all_same_parent {
            for (_, pos) in &spots[1..] {
                if *pos != spots[0].1 {
                    return Err(RefineError::HingeInconsistent {
                        hinge: h,
                        detail: "incidences within one parent link do not coincide".into(),
                    });
                }
            }
        } else {
            // Straddling hinge: must be pinned to a parent hinge so the join
            // is maintained in every parent configuration.
            let mut groups: Vec<(usize, Point)> = Vec::new();
            for (p, pos) in &spots {
                match groups.iter().find(|(gp, _)| gp == p) {
                    Some((_, gpos)) => {
                        if gpos != pos {
                            return Err(RefineError::HingeInconsistent {
                                hinge: h,
                                detail: "incidences in the same parent link disagree".into(),
                            });
                        }
                    }
                    None => groups.push((*p, pos.clone())),
                }
            }
            let pinned = cert.parent.hinges.iter().any(|ph| {
                groups.iter().all(|(p, pos)| {
                    ph.incidences
                        .iter()
                        .any(|&(l, v)| l == *p && cert.parent.links[l].vertex(v) == pos)
                })
            });
            if !pinned {
                return Err(RefineError::HingeInconsistent {
                    hinge: h,
                    detail: "straddles parent links without a parent hinge at that point".into(),
                });
            }
        }
    }

    // Every parent hinge realized by child boundary points.
    if cert.hinge_witnesses.len() != cert.parent.hinges.len() {
        return Err(RefineError::WitnessInvalid {
            hinge: cert.hinge_witnesses.len().min(cert.parent.hinges.len()),
            detail: "witness table length mismatch".into(),
        });
    }
    for (h, (hinge, wit)) in cert
        .parent
        .hinges
        .iter()
        .zip(&cert.hinge_witnesses)
        .enumerate()
    {
        if wit.realizations.len() != hinge.incidences.len() {
            return Err(RefineError::WitnessInvalid {
                hinge: h,
                detail: "one realization required per incidence".into(),
            });
        }
        for (&(pl, pv), &(cl, cv)) in hinge.incidences.iter().zip(&wit.realizations) {
            if cl >= cert.child.links.len() || cv >= cert.child.links[cl].len() {
                return Err(RefineError::WitnessInvalid {
                    hinge: h,
                    detail: "realization indices out of range".into(),
                });
            }
            if cert.tiles[cl].parent_link != pl {
                return Err(RefineError::WitnessInvalid {
                    hinge: h,
                    detail: format!("child link {} is not a tile of parent link {}", cl, pl),
                });
            }
            let want = cert.parent.links[pl].vertex(pv).clone();
            if cert.child_vertex_in_parent(cl, cv) != want {
                return Err(RefineError::WitnessInvalid {
                    hinge: h,
                    detail: format!("child vertex ({}, {}) misses the hinge point", cl, cv),
                });
            }
        }
    }
    Ok(())
}

/// Verify a chain of certificates `Cn ≺ … ≺ C0` (refinement is transitive);
/// each entry's parent must be the next entry's child.
pub fn check_refinement_chain(certs: &[RefinementCert]) -> Result<(), RefineError> {
    for (i, c) in certs.iter().enumerate() {
        check_refinement(c)?;
        if i + 1 < certs.len() && c.parent != certs[i + 1].child {
            return Err(RefineError::ChainMismatch(i, i + 1));
        }
    }
    Ok(())
}

/// The configuration of the child imposed by a configuration of the parent.
pub fn induced_configuration(
    cert: &RefinementCert,
    parent_config: &Configuration,
) -> Configuration {
    Configuration {
        placements: cert
            .tiles
            .iter()
            .map(|t| parent_config.placements[t.parent_link].compose(&t.placement))
            .collect(),
    }
}

/// Compose `fine ≺ mid` with `mid ≺ coarse` into `fine ≺ coarse`.
pub fn compose_certs(
    fine: &RefinementCert,
    coarse: &RefinementCert,
) -> Result<RefinementCert, RefineError> {
    if fine.parent != coarse.child {
        return Err(RefineError::ChainMismatch(0, 1));
    }
    let tiles: Vec<TilePlacement> = fine
        .tiles
        .iter()
        .map(|t| {
            let outer = &coarse.tiles[t.parent_link];
            TilePlacement {
                parent_link: outer.parent_link,
                placement: outer.placement.compose(&t.placement),
            }
        })
        .collect();
    // Re-witness coarse-parent hinges with vertices of the fine figure: the
    // mid-level witness vertex must appear as a vertex of some fine tile.
    let mut hinge_witnesses = Vec::with_capacity(coarse.hinge_witnesses.len());
    for (h, wit) in coarse.hinge_witnesses.iter().enumerate() {
        let mut realizations = Vec::with_capacity(wit.realizations.len());
        for &(mid_link, mid_vertex) in &wit.realizations {
            let target = fine.parent.links[mid_link].vertex(mid_vertex).clone();
            let found = fine
                .tiles
                .iter()
                .enumerate()
                .filter(|(_, t)| t.parent_link == mid_link)
                .find_map(|(c, t)| {
                    fine.child.links[c]
                        .vertices()
                        .iter()
                        .position(|v| t.placement.apply(v) == target)
                        .map(|v| (c, v))
                });
            match found {
                Some(r) => realizations.push(r),
                None => {
                    return Err(RefineError::WitnessInvalid {
                        hinge: h,
                        detail: "no fine vertex realizes the mid-level witness".into(),
                    })
                }
            }
        }
        hinge_witnesses.push(HingeWitness { realizations });
    }
    Ok(RefinementCert {
        parent: coarse.parent.clone(),
        child: fine.child.clone(),
        tiles,
        hinge_witnesses,
    })
}

/// Convenience: check a cert and validate the induced configuration for a
/// given parent configuration.
pub fn verify_cert_with_config(
    cert: &RefinementCert,
    parent_config: &Configuration,
) -> Result<Configuration, String> {
    check_refinement(cert).map_err(|e| e.to_string())?;
    validate_configuration(&cert.parent, parent_config).map_err(|e| e.to_string())?;
    let induced = induced_configuration(cert, parent_config);
    validate_configuration(&cert.child, &induced).map_err(|e| e.to_string())?;
    Ok(induced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hinged::Hinge;
    use crate::numeric::RationalAngle;
    use crate::planar::Polygon;

    fn unit_square_figure() -> HingedFigure {
        HingedFigure::single_link(
            Polygon::from_int_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap(),
        )
    }

    /// Square cut along its diagonal into two triangles hinged at a corner
    /// of the diagonal.
    fn diagonal_split_cert() -> RefinementCert {
        let parent = unit_square_figure();
        let t0 = Polygon::from_int_coords(&[(0, 0), (1, 0), (1, 1)]).unwrap();
        let t1 = Polygon::from_int_coords(&[(0, 0), (1, 1), (0, 1)]).unwrap();
        let child = HingedFigure {
            links: vec![t0, t1],
            hinges: vec![Hinge { incidences: vec![(0, 0), (1, 0)] }],
        };
        RefinementCert {
            parent,
            child,
            tiles: vec![
                TilePlacement { parent_link: 0, placement: Isometry::identity() },
                TilePlacement { parent_link: 0, placement: Isometry::identity() },
            ],
            hinge_witnesses: vec![],
        }
    }

    #[test]
    fn identity_cert_passes() {
        let f = unit_square_figure();
        check_refinement(&RefinementCert::identity(&f)).unwrap();
    }

    #[test]
    fn diagonal_split_passes() {
        check_refinement(&diagonal_split_cert()).unwrap();
    }

    #[test]
    fn dropping_a_tile_is_caught() {
        let mut cert = diagonal_split_cert();
        cert.child.links.pop();
        cert.child.hinges.clear();
        cert.tiles.pop();
        assert!(matches!(
            check_refinement(&cert),
            Err(RefineError::Tiling { .. })
        ));
    }

    #[test]
    fn unpinned_straddling_hinge_is_caught() {
        // Two parent links (squares hinged at a corner), child = same squares
        // but with an extra child hinge between them at a non-hinge point.
        let sq = Polygon::from_int_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
        let parent = HingedFigure {
            links: vec![sq.clone(), sq.clone()],
            hinges: vec![Hinge { incidences: vec![(0, 2), (1, 0)] }],
        };
        let child = HingedFigure {
            links: vec![sq.clone(), sq.clone()],
            hinges: vec![
                Hinge { incidences: vec![(0, 2), (1, 0)] },
                Hinge { incidences: vec![(0, 1), (1, 3)] },
            ],
        };
        let cert = RefinementCert {
            parent: parent.clone(),
            child,
            tiles: vec![
                TilePlacement { parent_link: 0, placement: Isometry::identity() },
                TilePlacement { parent_link: 1, placement: Isometry::identity() },
            ],
            hinge_witnesses: vec![HingeWitness { realizations: vec![(0, 2), (1, 0)] }],
        };
        assert!(matches!(
            check_refinement(&cert),
            Err(RefineError::HingeInconsistent { hinge: 1, .. })
        ));
    }

    #[test]
    fn induced_configuration_follows_parent() {
        let cert = diagonal_split_cert();
        check_refinement(&cert).unwrap();
        let moved = Configuration {
            placements: vec![Isometry::translation(&crate::planar::Point::from_ints(5, -2))],
        };
        let induced = verify_cert_with_config(&cert, &moved).unwrap();
        assert_eq!(
            induced.placements[0].apply(&crate::planar::Point::from_ints(0, 0)),
            crate::planar::Point::from_ints(5, -2)
        );
        assert_eq!(
            induced.placements[1].apply(&crate::planar::Point::from_ints(0, 0)),
            crate::planar::Point::from_ints(5, -2)
        );
    }

    #[test]
    fn fold_out_configuration_of_diagonal_split() {
        // The two triangles may also hinge open about the shared corner; the
        // induced-configuration machinery is not needed for that, but the
        // child figure must admit it as a valid configuration of its own.
        let cert = diagonal_split_cert();
        let open = Configuration {
            placements: vec![
                Isometry::identity(),
                Isometry::rotation_about(
                    &crate::planar::Point::from_ints(0, 0),
                    &RationalAngle::quarter_turn(),
                ),
            ],
        };
        validate_configuration(&cert.child, &open).unwrap();
    }

    #[test]
    fn composition_passes_checker() {
        // square ≺ square (identity) composed under diagonal split.
        let cert1 = diagonal_split_cert();
        let cert0 = RefinementCert::identity(&cert1.child);
        let composed = compose_certs(&cert0, &cert1).unwrap();
        check_refinement(&composed).unwrap();
        assert_eq!(composed.parent.links.len(), 1);
        assert_eq!(composed.child.links.len(), 2);
    }
}
