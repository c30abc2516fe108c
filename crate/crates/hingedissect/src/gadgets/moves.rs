//! Rooted subtree movement.
//!
//! To move a subtree hinged at `b` to a new boundary point `b′`, cut a chain
//! of isosceles triangles out of the boundary path γ from `b` to `b′`, and a
//! congruent chain out of a kite sweep at the subtree's root vertex; rehinged,
//! either chain can fill either hole, so the figure refines both the old and
//! the new hinging. The *unaltered* variant cuts both chains from the parent
//! side, leaving the moved subtree piece-for-piece intact.
//!
//! Both entry points return certificates for the two refinements plus the
//! rearranged figure; nothing is trusted without the checker.

use super::free::{free_regions, notch_apex, FreeRegions};
use super::GadgetError;
use crate::hinged::{
    boundary_path, Hinge, HingeWitness, HingedFigure, RefinementCert, TilePlacement,
};
use crate::numeric::{rat, rational_angle_below, CReal, Rat, RationalAngle};
use crate::planar::{Isometry, Point, Polygon};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathChoice {
    /// Follow the boundary orientation from b to b′.
    Forward,
    /// Take the complementary boundary path.
    Backward,
    /// Whichever has fewer steps.
    Auto,
}

#[derive(Clone, Debug)]
pub struct MoveSpec {
    /// Hinge of F to break; must have exactly two incidences.
    pub hinge: usize,
    /// Which incidence of that hinge roots the moved subtree.
    pub moved_side: usize,
    /// Existing boundary vertex (link, vertex) on the stationary side to
    /// reattach at.
    pub target: (usize, usize),
    pub path: PathChoice,
}

#[derive(Clone, Copy, Debug)]
pub struct MoveStats {
    /// t: number of subdivided γ segments.
    pub segments: usize,
    /// Links added: 4t+1, or 0 for the degenerate identity move.
    pub new_links: usize,
}

#[derive(Debug)]
pub struct MoveOutcome {
    pub figure: HingedFigure,
    pub f_new: HingedFigure,
    pub cert_old: RefinementCert,
    pub cert_new: RefinementCert,
    pub stats: MoveStats,
}

pub fn move_subtree(f: &HingedFigure, spec: &MoveSpec) -> Result<MoveOutcome, GadgetError> {
    perform_move(f, spec, MoveStyle::CutSubtree)
}

/// Subtree movement that refines only the stationary side.
pub fn unaltered_move(f: &HingedFigure, spec: &MoveSpec) -> Result<MoveOutcome, GadgetError> {
    perform_move(f, spec, MoveStyle::Unaltered)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MoveStyle {
    CutSubtree,
    Unaltered,
}

/// One subdivided γ segment, in walk order from b towards b′.
#[derive(Clone)]
pub(crate) struct Slot {
    pub link: usize,
    pub edge: usize,
    /// true if the walk traverses the boundary edge against its orientation
    pub reversed: bool,
    pub start: Point,
    pub mid: Point,
    pub end: Point,
}

impl Slot {
    /// Half-segment vector (start→mid); its length is the kite diagonal.
    pub fn half_vec(&self) -> Point {
        self.mid.sub(&self.start)
    }
}

/// A chain triangle as cut from its slot: base endpoints in walk order plus
/// the inward apex, with the CCW local polygon.
#[derive(Clone)]
pub(crate) struct ChainTri {
    pub walk_start: Point,
    pub walk_end: Point,
    pub apex: Point,
    pub poly: Polygon,
    pub host: usize,
}

fn chain_tri(walk_start: Point, walk_end: Point, apex: Point, host: usize) -> ChainTri {
    let ccw = crate::planar::orientation(&walk_start, &walk_end, &apex)
        == crate::planar::Orientation::Left;
    let poly = if ccw {
        Polygon::new_unchecked(vec![walk_start.clone(), walk_end.clone(), apex.clone()])
    } else {
        Polygon::new_unchecked(vec![walk_end.clone(), walk_start.clone(), apex.clone()])
    };
    ChainTri { walk_start, walk_end, apex, poly, host }
}

impl ChainTri {
    fn index_of(&self, p: &Point) -> usize {
        self.poly
            .vertices()
            .iter()
            .position(|v| v == p)
            .expect("chain triangle vertex by position")
    }
}

/// Proper rigid motion mapping one triangle (given by base + apex) onto a
/// congruent one; tries both base orientations and demands the apex match.
fn placement_matching(
    from_base: (&Point, &Point),
    from_apex: &Point,
    to_base: (&Point, &Point),
    to_apex: &Point,
) -> Result<Isometry, GadgetError> {
    for (t1, t2) in [(to_base.0, to_base.1), (to_base.1, to_base.0)] {
        if let Ok(iso) = Isometry::mapping_segment(from_base.0, from_base.1, t1, t2) {
            if iso.apply(from_apex) == *to_apex {
                return Ok(iso);
            }
        }
    }
    Err(GadgetError::Construction(
        "no proper congruence between chain triangle and its alternate slot".into(),
    ))
}

fn perform_move(
    f0: &HingedFigure,
    spec: &MoveSpec,
    style: MoveStyle,
) -> Result<MoveOutcome, GadgetError> {
    let report = f0.validate()?;
    if !report.tree_like {
        return Err(GadgetError::Unsupported("figure must be tree-like".into()));
    }
    let hinge = f0
        .hinges
        .get(spec.hinge)
        .ok_or_else(|| GadgetError::Unsupported("no such hinge".into()))?;
    if hinge.incidences.len() != 2 {
        return Err(GadgetError::Unsupported(
            "subtree movement needs a binary hinge".into(),
        ));
    }
    let (la, va) = hinge.incidences[spec.moved_side];
    let (lb, vb) = hinge.incidences[1 - spec.moved_side];
    let (lb2, vb2) = spec.target;

    if (lb2, vb2) == (lb, vb) {
        // Degenerate move: nothing to do.
        let cert = RefinementCert::identity(f0);
        return Ok(MoveOutcome {
            figure: f0.clone(),
            f_new: f0.clone(),
            cert_old: cert.clone(),
            cert_new: cert,
            stats: MoveStats { segments: 0, new_links: 0 },
        });
    }
    if f0.hinge_at(lb2, vb2).is_some() {
        return Err(GadgetError::Unsupported(
            "target vertex already carries a hinge".into(),
        ));
    }

    // Split into moved side (A ∋ la) and stationary side (B ∋ lb).
    let (_a_links, b_links) = split_at_hinge(f0, spec.hinge, la, lb)?;
    if !b_links.contains(&lb2) {
        return Err(GadgetError::Unsupported(
            "target must lie on the stationary side".into(),
        ));
    }

    // γ along the boundary of the stationary subfigure.
    let slots_gamma = gamma_slots(f0, &b_links, (lb, vb), (lb2, vb2), spec.path)?;
    build_move(f0, spec, style, (la, va), (lb, vb), (lb2, vb2), slots_gamma)
}

/// Extract the boundary path of the subfigure induced by `links` between two
/// of its boundary points and return it as a list of directed edges; an
/// override can force the free-region radius used for subdivision.
pub(crate) fn gamma_slots(
    f: &HingedFigure,
    links: &HashSet<usize>,
    from: (usize, usize),
    to: (usize, usize),
    path: PathChoice,
) -> Result<GammaData, GadgetError> {
    let (sub, old_ids) = subfigure(f, links);
    let bp = boundary_path(&sub)?;
    let new_of = |old: (usize, usize)| -> Result<(usize, usize), GadgetError> {
        let link = old_ids
            .iter()
            .position(|&l| l == old.0)
            .ok_or_else(|| GadgetError::Unsupported("boundary point off the subfigure".into()))?;
        Ok((link, old.1))
    };
    let nf = new_of(from)?;
    let nt = new_of(to)?;
    let fwd = bp
        .steps_between((nf.0, nf.1), (nt.0, nt.1))
        .ok_or_else(|| GadgetError::Construction("boundary points not on path".into()))?;
    let bwd = bp
        .steps_between((nt.0, nt.1), (nf.0, nf.1))
        .ok_or_else(|| GadgetError::Construction("boundary points not on path".into()))?;
    let (steps, reversed) = match path {
        PathChoice::Forward => (fwd, false),
        PathChoice::Backward => (bwd, true),
        PathChoice::Auto => {
            if fwd.len() <= bwd.len() {
                (fwd, false)
            } else {
                (bwd, true)
            }
        }
    };
    // Directed γ edges in walk order from `from` towards `to`.
    let mut edges: Vec<(usize, usize, bool)> = Vec::new(); // (old link, edge, reversed)
    if reversed {
        for s in steps.iter().rev() {
            edges.push((old_ids[s.link], s.edge, true));
        }
    } else {
        for s in &steps {
            edges.push((old_ids[s.link], s.edge, false));
        }
    }

    // Free regions per touched link (plus override radii), minimum angle α.
    let mut regions: BTreeMap<usize, FreeRegions> = BTreeMap::new();
    for &(l, _, _) in &edges {
        if !regions.contains_key(&l) {
            regions.insert(l, free_regions(&f.links[l])?);
        }
    }
    let mut alpha: Option<RationalAngle> = None;
    for r in regions.values() {
        if alpha
            .as_ref()
            .map_or(true, |a| r.angle.tan() < a.tan())
        {
            alpha = Some(r.angle.clone());
        }
    }
    Ok(GammaData { edges, regions, alpha })
}

pub(crate) struct GammaData {
    /// (link, edge index, reversed) in walk order.
    pub edges: Vec<(usize, usize, bool)>,
    pub regions: BTreeMap<usize, FreeRegions>,
    pub alpha: Option<RationalAngle>,
}

impl GammaData {
    /// Subdivide every γ edge so each slot's half length is at most `r`.
    pub fn subdivide(&self, f: &HingedFigure, r: &Rat) -> Vec<Slot> {
        let mut slots = Vec::new();
        for &(link, edge, reversed) in &self.edges {
            let (a, b) = f.links[link].edge(edge);
            let (from, to) = if reversed { (b, a) } else { (a, b) };
            let len2 = to.sub(&from).norm_sq();
            let k = segments_needed(&len2, r);
            for i in 0..k {
                let t0 = Rat::new((i as i64).into(), (k as i64).into());
                let t1 = Rat::new((i as i64 + 1).into(), (k as i64).into());
                let tm = Rat::new((2 * i as i64 + 1).into(), (2 * k as i64).into());
                slots.push(Slot {
                    link,
                    edge,
                    reversed,
                    start: from.lerp(&to, &t0),
                    mid: from.lerp(&to, &tm),
                    end: from.lerp(&to, &t1),
                });
            }
        }
        slots
    }
}

/// Smallest k with len ≤ 2rk, i.e. half-segments at most r.
fn segments_needed(len_sq: &CReal, r: &Rat) -> usize {
    let r2 = CReal::from_rat(r * r * rat(4, 1));
    let mut k = 1usize;
    // fast doubling, then binary refinement
    while len_sq.compare(&r2.mul(&CReal::from_int((k * k) as i64))) == Ordering::Greater {
        k *= 2;
        assert!(k < 1 << 24, "γ segment needs absurd subdivision");
    }
    let mut lo = k / 2;
    let mut hi = k;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if len_sq.compare(&r2.mul(&CReal::from_int((mid * mid) as i64))) == Ordering::Greater {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn split_at_hinge(
    f: &HingedFigure,
    hinge: usize,
    la: usize,
    lb: usize,
) -> Result<(HashSet<usize>, HashSet<usize>), GadgetError> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); f.links.len()];
    for (h, hg) in f.hinges.iter().enumerate() {
        if h == hinge {
            continue;
        }
        for w in 1..hg.incidences.len() {
            let (x, _) = hg.incidences[w - 1];
            let (y, _) = hg.incidences[w];
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    let component = |start: usize| -> HashSet<usize> {
        let mut seen = HashSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(n) = stack.pop() {
            for &m in &adj[n] {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen
    };
    let ca = component(la);
    if ca.contains(&lb) {
        return Err(GadgetError::Unsupported(
            "hinge does not separate the figure".into(),
        ));
    }
    let cb = component(lb);
    Ok((ca, cb))
}

/// Induced subfigure on a set of links, dropping hinges that leave the set.
/// Returns the subfigure and the original link id per new link.
fn subfigure(f: &HingedFigure, links: &HashSet<usize>) -> (HingedFigure, Vec<usize>) {
    let mut old_ids: Vec<usize> = links.iter().copied().collect();
    old_ids.sort_unstable();
    let new_of: HashMap<usize, usize> =
        old_ids.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let sub_links = old_ids.iter().map(|&o| f.links[o].clone()).collect();
    let mut hinges = Vec::new();
    for h in &f.hinges {
        if h.incidences.iter().all(|(l, _)| links.contains(l)) {
            hinges.push(Hinge {
                incidences: h.incidences.iter().map(|&(l, v)| (new_of[&l], v)).collect(),
            });
        }
    }
    (HingedFigure { links: sub_links, hinges }, old_ids)
}

/// The kite fan: an abutting sweep of rhombi at a host vertex, one per slot,
/// each congruent to the slot's pair of cut triangles.
pub(crate) struct Fan {
    pub host: usize,
    pub apex: Point,
    /// Per slot: (tip point, upper corner, lower corner).
    pub rhombi: Vec<(Point, Point, Point)>,
    /// Fan triangles in walk order (2 per slot), local coords = host frame.
    pub tris: Vec<ChainTri>,
    pub corner: Polygon,
    /// Host polygon after removing the fan hole and the corner.
    pub new_host: Polygon,
}

/// Build the fan for the given slots in the host's free sector at `vertex`.
/// `host_poly` is the (possibly already notched) polygon to carve from.
pub(crate) fn build_fan(
    host: usize,
    host_poly: &Polygon,
    sector: &super::free::Sector,
    beta: &RationalAngle,
    slots: &[Slot],
) -> Result<Fan, GadgetError> {
    let a = sector.center.clone();
    let tan = beta.tan();
    let t = slots.len();
    // Anchor the first diagonal strictly inside [start+β, start+2β].
    let rot_beta = Isometry::from_angle(beta);
    let cone_lo = rot_beta.apply_vector(&sector.dir_start);
    let cone_hi = rot_beta.apply_vector(&cone_lo);
    let w1 = slots[0].half_vec();
    let phi = super::cone::rational_rotation_into_cone(&w1, &cone_lo, &cone_hi)?;
    let rot_2beta = beta.compose(beta);

    // diag_j = rot(2β)^(j−1) ∘ φ ∘ align(w_j → w_1) · w_j
    let mut diags: Vec<Point> = Vec::with_capacity(t);
    let mut step = Isometry::from_angle(&phi);
    for (j, slot) in slots.iter().enumerate() {
        if j > 0 {
            step = Isometry::from_angle(&rot_2beta).compose(&step);
        }
        let w = slot.half_vec();
        let aligned = align_to(&w, &w1)?;
        diags.push(step.apply_vector(&aligned));
    }

    // Verify the sweep stays inside the sector cone and the disk.
    let r2 = CReal::from_rat(&sector.radius * &sector.radius);
    let mut rhombi = Vec::with_capacity(t);
    let mut tris: Vec<ChainTri> = Vec::with_capacity(2 * t);
    for (j, g) in diags.iter().enumerate() {
        let half = rat(1, 2);
        let mid = a.add(&g.scale_rat(&half));
        let off = g.rot90().scale_rat(&(&tan * &half));
        let tip = a.add(g);
        let upper = mid.add(&off);
        let lower = mid.sub(&off);
        for p in [&tip, &upper, &lower] {
            if p.sub(&a).norm_sq().compare(&r2) == Ordering::Greater {
                return Err(GadgetError::Construction("kite leaves the free disk".into()));
            }
        }
        let lo_dir = lower.sub(&a);
        let hi_dir = upper.sub(&a);
        if sector.dir_start.cross(&lo_dir).sign() != Ordering::Greater
            || hi_dir.cross(&sector.dir_end).sign() != Ordering::Greater
        {
            return Err(GadgetError::Construction("kite leaves the sector cone".into()));
        }
        // fan triangles in walk order: first half then second half
        tris.push(chain_tri(a.clone(), tip.clone(), upper.clone(), host));
        tris.push(chain_tri(tip.clone(), a.clone(), lower.clone(), host));
        rhombi.push((tip, upper, lower));
        let _ = j;
    }

    // Hole polygon: a → lower₁ → tip₁ → upper₁ → (ray) lower₂ → … → upperₜ → a.
    let mut hole_pts: Vec<Point> = vec![a.clone()];
    for j in 0..t {
        let (tip, upper, lower) = &rhombi[j];
        if hole_pts.last() != Some(lower) {
            hole_pts.push(lower.clone());
        }
        hole_pts.push(tip.clone());
        hole_pts.push(upper.clone());
    }
    // Corner piece between the fan's top ray and the adjacent boundary edge;
    // fall back to the bottom side if blocked.
    let host_idx_a = index_of_point(host_poly, &a)?;
    let n = host_poly.len();
    let prev_pt = host_poly.vertex((host_idx_a + n - 1) % n).clone();
    let succ_pt = host_poly.vertex(host_idx_a + 1).clone();
    let top_mid = a.midpoint(&rhombi[t - 1].1);
    let bot_mid = a.midpoint(&rhombi[0].2);

    let mut tau = rat(1, 2);
    for _ in 0..40 {
        // top-side corner: (a, u=top_mid, v on edge toward prev)
        let v = a.lerp(&prev_pt, &tau);
        if let Some(fan) = try_assemble(
            host, host_poly, &a, host_idx_a, &hole_pts, &rhombi, &tris, &top_mid, &v, true,
        ) {
            return Ok(fan);
        }
        let v2 = a.lerp(&succ_pt, &tau);
        if let Some(fan) = try_assemble(
            host, host_poly, &a, host_idx_a, &hole_pts, &rhombi, &tris, &bot_mid, &v2, false,
        ) {
            return Ok(fan);
        }
        tau = tau * rat(1, 2);
    }
    Err(GadgetError::Construction("no valid corner cut found".into()))
}

/// In-field rotation aligning v with the direction of w (|result| = |v|).
fn align_to(v: &Point, w: &Point) -> Result<Point, GadgetError> {
    let cross = w.cross(v);
    let dot = w.dot(v);
    if cross.is_zero() {
        return Ok(if dot.sign() == Ordering::Greater { v.clone() } else { v.neg() });
    }
    // rotate v by −angle(v→w): scaled result = w·(|v|/|w|)
    let n = v.norm_sq().mul(&w.norm_sq()).sqrt()?;
    let c = dot.div(&n)?;
    let s = cross.div(&n)?;
    // rotation by (angle w − angle v) applied to v equals w·|v|/|w|
    Ok(Point::new(
        c.mul(&v.x).sub(&s.mul(&v.y)),
        s.mul(&v.x).add(&c.mul(&v.y)),
    ))
}

#[allow(clippy::too_many_arguments)]
fn try_assemble(
    host: usize,
    host_poly: &Polygon,
    a: &Point,
    host_idx_a: usize,
    hole_pts: &[Point],
    rhombi: &[(Point, Point, Point)],
    tris: &[ChainTri],
    u: &Point,
    v: &Point,
    top_side: bool,
) -> Option<Fan> {
    let corner = if top_side {
        Polygon::new_unchecked(vec![a.clone(), u.clone(), v.clone()])
    } else {
        Polygon::new_unchecked(vec![a.clone(), v.clone(), u.clone()])
    };
    if corner.validate().is_err() {
        return None;
    }
    // Walk the original cycle starting at a, emitting the hole + corner
    // detour in place of the single vertex a.
    let n = host_poly.len();
    let mut out: Vec<Point> = hole_detour(a, rhombi, u, v, top_side);
    for i in 1..n {
        let idx = (host_idx_a + i) % n;
        out.push(host_poly.vertex(idx).clone());
    }
    let new_host = Polygon::new_unchecked(out);
    if new_host.validate().is_err() {
        return None;
    }
    // The corner and all fan triangles must sit inside the original host.
    if !crate::planar::polygon_inside(host_poly, &corner) {
        return None;
    }
    for t in tris {
        if !crate::planar::polygon_inside(host_poly, &t.poly) {
            return None;
        }
        if !crate::planar::interiors_disjoint(&t.poly, &corner) {
            return None;
        }
    }
    if !crate::planar::interiors_disjoint(&corner, &Polygon::new_unchecked(hole_pts.to_vec())) {
        return None;
    }
    Some(Fan {
        host,
        apex: a.clone(),
        rhombi: rhombi.to_vec(),
        tris: tris.to_vec(),
        corner,
        new_host,
    })
}

/// The boundary detour replacing vertex `a`: from the walk's entry into `a`
/// around the removed fan + corner and back out. With the corner on the top
/// side, `v` sits on the edge into `a` and `u` halfway up the fan's top ray;
/// on the bottom side, `u` sits halfway down the fan's bottom ray and `v` on
/// the edge out of `a`.
fn hole_detour(
    a: &Point,
    rhombi: &[(Point, Point, Point)],
    u: &Point,
    v: &Point,
    top_side: bool,
) -> Vec<Point> {
    let t = rhombi.len();
    let mut seq: Vec<Point> = Vec::new();
    if top_side {
        // …prev → v → u → upper_t → tip_t → lower_t → … → lower_1 → a → succ…
        seq.push(v.clone());
        seq.push(u.clone());
        for j in (0..t).rev() {
            let (tip, upper, lower) = &rhombi[j];
            if seq.last() != Some(upper) {
                seq.push(upper.clone());
            }
            seq.push(tip.clone());
            seq.push(lower.clone());
        }
        seq.push(a.clone());
    } else {
        // …prev → a → upper_t → tip_t → … → lower_1 → u → v → succ…
        seq.push(a.clone());
        for j in (0..t).rev() {
            let (tip, upper, lower) = &rhombi[j];
            if seq.last() != Some(upper) {
                seq.push(upper.clone());
            }
            seq.push(tip.clone());
            seq.push(lower.clone());
        }
        seq.push(u.clone());
        seq.push(v.clone());
    }
    seq.dedup();
    seq
}

fn index_of_point(poly: &Polygon, p: &Point) -> Result<usize, GadgetError> {
    poly.vertices()
        .iter()
        .position(|v| v == p)
        .ok_or_else(|| GadgetError::Construction("expected vertex not found".into()))
}

/// Cut the notches for all slots into their host links. Returns the modified
/// polygons and the chain triangles in walk order.
pub(crate) fn notch_links(
    f: &HingedFigure,
    slots: &[Slot],
    tan: &Rat,
) -> (HashMap<usize, Polygon>, Vec<ChainTri>) {
    // group slots by (link, edge) in edge order
    let mut per_edge: BTreeMap<(usize, usize), Vec<&Slot>> = BTreeMap::new();
    for s in slots {
        per_edge.entry((s.link, s.edge)).or_default().push(s);
    }
    let mut new_polys: HashMap<usize, Polygon> = HashMap::new();
    for (&(link, edge), group) in &per_edge {
        let poly = new_polys
            .get(&link)
            .cloned()
            .unwrap_or_else(|| f.links[link].clone());
        // points along the edge in edge order with notch apexes
        let (ea, _eb) = f.links[link].edge(edge);
        let mut items: Vec<(CReal, Vec<Point>)> = Vec::new(); // (param, inserted pts)
        for s in group.iter() {
            // in edge order the slot runs from s.start→s.end or reversed
            let (p, m, q) = if s.reversed {
                (s.end.clone(), s.mid.clone(), s.start.clone())
            } else {
                (s.start.clone(), s.mid.clone(), s.end.clone())
            };
            let apex1 = notch_apex(&p, &m, tan);
            let apex2 = notch_apex(&m, &q, tan);
            let key = p.sub(&ea).norm_sq();
            items.push((key, vec![apex1, m, apex2, q]));
        }
        items.sort_by(|x, y| x.0.cmp(&y.0));
        // rebuild polygon: replace edge (from its start vertex) with the zigzag
        let start_idx = index_of_point(&poly, &ea).expect("edge start exists");
        let n = poly.len();
        let mut verts: Vec<Point> = Vec::new();
        for i in 0..n {
            let idx = (start_idx + i) % n;
            verts.push(poly.vertex(idx).clone());
            if i == 0 {
                for (_, pts) in &items {
                    for p in pts {
                        verts.push(p.clone());
                    }
                }
                // the final q of the last slot is the edge's far endpoint:
                // drop the duplicate emitted by the loop when we reach it
            }
        }
        // remove consecutive duplicates (the far endpoint may repeat)
        let mut cleaned: Vec<Point> = Vec::new();
        for p in verts {
            if cleaned.last() != Some(&p) {
                cleaned.push(p);
            }
        }
        if cleaned.last() == cleaned.first() {
            cleaned.pop();
        }
        new_polys.insert(link, Polygon::new_unchecked(cleaned));
    }
    // chain triangles in walk order
    let mut tris = Vec::with_capacity(2 * slots.len());
    for s in slots {
        let a1 = notch_apex_walk(s, true, tan);
        let a2 = notch_apex_walk(s, false, tan);
        tris.push(chain_tri(s.start.clone(), s.mid.clone(), a1, s.link));
        tris.push(chain_tri(s.mid.clone(), s.end.clone(), a2, s.link));
    }
    (new_polys, tris)
}

/// Apex of the inward notch triangle on a slot half, respecting walk
/// direction (the interior sits left of forward walks, right of reversed).
fn notch_apex_walk(s: &Slot, first_half: bool, tan: &Rat) -> Point {
    let (x, y) = if first_half {
        (s.start.clone(), s.mid.clone())
    } else {
        (s.mid.clone(), s.end.clone())
    };
    if s.reversed {
        notch_apex(&y, &x, tan)
    } else {
        notch_apex(&x, &y, tan)
    }
}

#[allow(clippy::too_many_arguments)]
fn build_move(
    f0: &HingedFigure,
    spec: &MoveSpec,
    style: MoveStyle,
    (la, va): (usize, usize),
    (lb, vb): (usize, usize),
    (lb2, vb2): (usize, usize),
    gamma: GammaData,
) -> Result<MoveOutcome, GadgetError> {
    // Fan host and free regions.
    let (fan_host, fan_vertex) = match style {
        MoveStyle::CutSubtree => (la, va),
        MoveStyle::Unaltered => (lb, vb),
    };
    let host_regions = if let Some(r) = gamma.regions.get(&fan_host) {
        r.clone()
    } else {
        free_regions(&f0.links[fan_host])?
    };
    let sector = host_regions.vertex_sectors[fan_vertex].clone();
    let r_sub = sector.radius.clone();
    let mut alpha = gamma.alpha.clone().unwrap_or_else(|| host_regions.angle.clone());
    if host_regions.angle.tan() < alpha.tan() {
        alpha = host_regions.angle.clone();
    }

    let slots = gamma.subdivide(f0, &r_sub);
    let t = slots.len();
    if t == 0 {
        return Err(GadgetError::Construction("empty boundary path".into()));
    }
    // tan β ≤ sin(α)/(4t): guarantees β < α/(2t), so 2tβ uses at most half
    // the free angle and every notch fits its edge's free triangle.
    let bound = alpha.sin() / Rat::from(num_bigint::BigInt::from(2 * t as i64));
    let beta = rational_angle_below(&bound, &rat(1, 2));
    let tan = beta.tan();

    // Notch the γ links.
    let (mut new_polys, gamma_tris) = notch_links(f0, &slots, &tan);

    // Fan carved from the (possibly notched) host.
    let host_current = new_polys
        .get(&fan_host)
        .cloned()
        .unwrap_or_else(|| f0.links[fan_host].clone());
    let fan = build_fan(fan_host, &host_current, &sector, &beta, &slots)?;
    new_polys.insert(fan_host, fan.new_host.clone());

    // --- assemble the refined figure -------------------------------------
    let n_old = f0.links.len();
    let mut links: Vec<Polygon> = (0..n_old)
        .map(|i| new_polys.get(&i).cloned().unwrap_or_else(|| f0.links[i].clone()))
        .collect();
    let c_base = links.len();
    links.extend(gamma_tris.iter().map(|t| t.poly.clone()));
    let d_base = links.len();
    links.extend(fan.tris.iter().map(|t| t.poly.clone()));
    let corner_id = links.len();
    links.push(fan.corner.clone());

    let vertex_in = |links: &Vec<Polygon>, link: usize, p: &Point| -> Result<usize, GadgetError> {
        index_of_point(&links[link], p)
    };

    let mut hinges: Vec<Hinge> = Vec::new();
    // surviving hinges of F, with vertex indices remapped by position
    for (h, hg) in f0.hinges.iter().enumerate() {
        if h == spec.hinge {
            continue;
        }
        let mut incidences = Vec::with_capacity(hg.incidences.len());
        for &(l, v) in &hg.incidences {
            let p = f0.links[l].vertex(v).clone();
            incidences.push((l, vertex_in(&links, l, &p)?));
        }
        hinges.push(Hinge { incidences });
    }
    // Chain hinges join consecutive triangles at their shared junction; each
    // side addresses the point in its own local frame (the frames differ
    // when γ crosses from one link to the next).
    for j in 0..gamma_tris.len() - 1 {
        hinges.push(Hinge {
            incidences: vec![
                (c_base + j, gamma_tris[j].index_of(&gamma_tris[j].walk_end)),
                (c_base + j + 1, gamma_tris[j + 1].index_of(&gamma_tris[j + 1].walk_start)),
            ],
        });
    }
    for j in 0..fan.tris.len() - 1 {
        hinges.push(Hinge {
            incidences: vec![
                (d_base + j, fan.tris[j].index_of(&fan.tris[j].walk_end)),
                (d_base + j + 1, fan.tris[j + 1].index_of(&fan.tris[j + 1].walk_start)),
            ],
        });
    }
    // corner attachment: at its boundary-edge point v (third vertex)
    let corner_anchor = fan.corner.vertex(2).clone();
    hinges.push(Hinge {
        incidences: vec![
            (corner_id, 2),
            (fan_host, vertex_in(&links, fan_host, &corner_anchor)?),
        ],
    });

    let b_pos = f0.links[lb].vertex(vb).clone();
    let b2_pos = f0.links[lb2].vertex(vb2).clone();
    let a_pos = f0.links[la].vertex(va).clone();
    match style {
        MoveStyle::CutSubtree => {
            // C's far end hinges at b′; D spans from b (start) to A's root.
            let c_last = c_base + gamma_tris.len() - 1;
            hinges.push(Hinge {
                incidences: vec![
                    (c_last, gamma_tris.last().unwrap().index_of(&b2_pos)),
                    (lb2, vertex_in(&links, lb2, &b2_pos)?),
                ],
            });
            hinges.push(Hinge {
                incidences: vec![
                    (d_base, fan.tris[0].index_of(&fan.apex)),
                    (lb, vertex_in(&links, lb, &b_pos)?),
                ],
            });
            let d_last = d_base + fan.tris.len() - 1;
            hinges.push(Hinge {
                incidences: vec![
                    (d_last, fan.tris.last().unwrap().index_of(&fan.apex)),
                    (la, vertex_in(&links, la, &a_pos)?),
                ],
            });
        }
        MoveStyle::Unaltered => {
            // D tethers A: start at b on the host, end at A's root vertex.
            hinges.push(Hinge {
                incidences: vec![
                    (d_base, fan.tris[0].index_of(&fan.apex)),
                    (lb, vertex_in(&links, lb, &b_pos)?),
                ],
            });
            let d_last = d_base + fan.tris.len() - 1;
            hinges.push(Hinge {
                incidences: vec![
                    (d_last, fan.tris.last().unwrap().index_of(&fan.apex)),
                    (la, vertex_in(&links, la, &a_pos)?),
                ],
            });
            // C hangs at the source vertex, anchored on the corner piece
            // (whose apex sits at b in every configuration).
            hinges.push(Hinge {
                incidences: vec![(c_base, gamma_tris[0].index_of(&b_pos)), (corner_id, 0)],
            });
        }
    }

    let figure = HingedFigure { links, hinges };

    // --- certificates ------------------------------------------------------
    // F′: same links, broken hinge replaced by the new attachment.
    let mut f_new = f0.clone();
    f_new.hinges[spec.hinge] = Hinge { incidences: vec![(la, va), (lb2, vb2)] };

    let identity_tiles = |fig: &HingedFigure| -> Vec<TilePlacement> {
        let tiles: Vec<TilePlacement> = (0..n_old)
            .map(|i| TilePlacement { parent_link: i, placement: Isometry::identity() })
            .collect();
        let _ = fig;
        tiles
    };

    // cert_old: everything in the position it was cut from.
    let mut tiles_old = identity_tiles(&figure);
    for tri in &gamma_tris {
        tiles_old.push(TilePlacement { parent_link: tri.host, placement: Isometry::identity() });
    }
    for tri in &fan.tris {
        tiles_old.push(TilePlacement { parent_link: fan_host, placement: Isometry::identity() });
        let _ = tri;
    }
    tiles_old.push(TilePlacement { parent_link: fan_host, placement: Isometry::identity() });

    // cert_new: chains swap places.
    let mut tiles_new = identity_tiles(&figure);
    for (j, tri) in gamma_tris.iter().enumerate() {
        let fan_tri = &fan.tris[j];
        let placement = placement_matching(
            (&tri.walk_start, &tri.walk_end),
            &tri.apex,
            (&fan_tri.walk_start, &fan_tri.walk_end),
            &fan_tri.apex,
        )?;
        tiles_new.push(TilePlacement { parent_link: fan_host, placement });
    }
    for (j, fan_tri) in fan.tris.iter().enumerate() {
        let tri = &gamma_tris[j];
        let placement = placement_matching(
            (&fan_tri.walk_start, &fan_tri.walk_end),
            &fan_tri.apex,
            (&tri.walk_start, &tri.walk_end),
            &tri.apex,
        )?;
        tiles_new.push(TilePlacement { parent_link: tri.host, placement });
    }
    tiles_new.push(TilePlacement { parent_link: fan_host, placement: Isometry::identity() });

    let witnesses = |parent: &HingedFigure| -> Result<Vec<HingeWitness>, GadgetError> {
        parent
            .hinges
            .iter()
            .map(|hg| {
                let realizations = hg
                    .incidences
                    .iter()
                    .map(|&(l, v)| {
                        let p = parent.links[l].vertex(v).clone();
                        Ok((l, index_of_point(&figure.links[l], &p)?))
                    })
                    .collect::<Result<Vec<_>, GadgetError>>()?;
                Ok(HingeWitness { realizations })
            })
            .collect()
    };

    let cert_old = RefinementCert {
        parent: f0.clone(),
        child: figure.clone(),
        tiles: tiles_old,
        hinge_witnesses: witnesses(f0)?,
    };
    let cert_new = RefinementCert {
        parent: f_new.clone(),
        child: figure.clone(),
        tiles: tiles_new,
        hinge_witnesses: witnesses(&f_new)?,
    };

    Ok(MoveOutcome {
        figure,
        f_new,
        cert_old,
        cert_new,
        stats: MoveStats { segments: t, new_links: 4 * t + 1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hinged::{check_refinement, validate_configuration, verify_cert_with_config, Configuration};

    fn unit_square() -> Polygon {
        Polygon::from_int_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    /// Two unit squares hinged corner-to-corner: square 1 hangs at square 0's
    /// corner (1,1).
    fn two_squares() -> (HingedFigure, Configuration) {
        let f = HingedFigure {
            links: vec![unit_square(), unit_square()],
            hinges: vec![Hinge { incidences: vec![(0, 2), (1, 0)] }],
        };
        let c = Configuration {
            placements: vec![
                Isometry::identity(),
                Isometry::translation(&Point::from_ints(1, 1)),
            ],
        };
        (f, c)
    }

    #[test]
    fn move_square_to_adjacent_corner() {
        let (f, config_f) = two_squares();
        validate_configuration(&f, &config_f).unwrap();
        let spec = MoveSpec {
            hinge: 0,
            moved_side: 1,          // square 1 moves
            target: (0, 1),         // to square 0's corner (1,0)
            path: PathChoice::Auto,
        };
        let out = move_subtree(&f, &spec).unwrap();
        assert_eq!(out.stats.new_links, 4 * out.stats.segments + 1);
        assert_eq!(
            out.figure.links.len(),
            f.links.len() + out.stats.new_links
        );
        check_refinement(&out.cert_old).unwrap();
        check_refinement(&out.cert_new).unwrap();
        // induced configuration from the original shape
        verify_cert_with_config(&out.cert_old, &config_f).unwrap();
        // and from the rearranged shape
        let config_fnew = Configuration {
            placements: vec![
                Isometry::identity(),
                Isometry::translation(&Point::from_ints(1, 0)),
            ],
        };
        validate_configuration(&out.f_new, &config_fnew).unwrap();
        verify_cert_with_config(&out.cert_new, &config_fnew).unwrap();
    }

    #[test]
    fn unaltered_move_keeps_subtree_links() {
        let (f, config_f) = two_squares();
        let spec = MoveSpec {
            hinge: 0,
            moved_side: 1,
            target: (0, 1),
            path: PathChoice::Auto,
        };
        let out = unaltered_move(&f, &spec).unwrap();
        assert_eq!(out.stats.new_links, 4 * out.stats.segments + 1);
        // the moved link is untouched, piece for piece
        assert_eq!(out.figure.links[1], f.links[1]);
        check_refinement(&out.cert_old).unwrap();
        check_refinement(&out.cert_new).unwrap();
        verify_cert_with_config(&out.cert_old, &config_f).unwrap();
        let config_fnew = Configuration {
            placements: vec![
                Isometry::identity(),
                Isometry::translation(&Point::from_ints(1, 0)),
            ],
        };
        verify_cert_with_config(&out.cert_new, &config_fnew).unwrap();
    }

    #[test]
    fn degenerate_move_is_identity() {
        let (f, _) = two_squares();
        let spec = MoveSpec {
            hinge: 0,
            moved_side: 1,
            target: (0, 2),
            path: PathChoice::Forward,
        };
        let out = move_subtree(&f, &spec).unwrap();
        assert_eq!(out.stats.new_links, 0);
        assert_eq!(out.figure.links.len(), 2);
        check_refinement(&out.cert_old).unwrap();
    }

    #[test]
    fn forward_path_across_multiple_edges() {
        let (f, config_f) = two_squares();
        let spec = MoveSpec {
            hinge: 0,
            moved_side: 1,
            target: (0, 1),
            path: PathChoice::Forward, // the long way: 3 edges
        };
        let out = move_subtree(&f, &spec).unwrap();
        check_refinement(&out.cert_old).unwrap();
        check_refinement(&out.cert_new).unwrap();
        verify_cert_with_config(&out.cert_old, &config_f).unwrap();
        let config_fnew = Configuration {
            placements: vec![
                Isometry::identity(),
                Isometry::translation(&Point::from_ints(1, 0)),
            ],
        };
        verify_cert_with_config(&out.cert_new, &config_fnew).unwrap();
    }
}
