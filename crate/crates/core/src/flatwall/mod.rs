//! Either a K_t model grasped by a wall, or a small apex set and a flat
//! subwall.

mod apex;
mod kt;

pub use apex::{
    apex_universal_defect, flat_subwall, is_apex_universal, refine_apex, ApexUniversalCert,
    RefineOutcome, RefineStep,
};
pub use kt::crosses_to_kt;

use serde::{Deserialize, Serialize};

use crate::config::{Config, Profile};
use crate::cross::{
    cyclic_eq, find_cross_or_reduce, flat_separation, replay_reduction_sequence, validate_disk,
    Cross, CrossOutcome, PlaneDrawing, ReductionSequence,
};
use crate::error::{capacity, input, internal, Error, Result};
use crate::graph::{
    enumerate_bridges, menger_paths, Bridge, Graph, Linkage, MinorModel, Path, Separation,
    Subgraph, VertexId, VertexSet,
};
use crate::minor::{mesh_prune_or_kt, GraspCert, PruneOutcome};
use crate::wall::{grid_contraction, place_subwalls, subwall_extract, Wall};

/// A wall `W'` that is flat in `G − apex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatWallCert {
    pub apex: VertexSet,
    /// The flat wall; its pegs are the chosen pegs.
    pub wall: Wall,
    /// (X, Y) of G − apex.
    pub separation: Separation,
    /// X∩Y in the order of the outer cycle of `wall`.
    pub boundary: Vec<VertexId>,
    /// An X∩Y-reduction sequence of G[Y].
    pub sequence: ReductionSequence,
    /// The reduced G[Y] drawn in a disk with `boundary` on its rim.
    pub drawing: PlaneDrawing,
}

#[derive(Clone, Debug)]
pub enum FlatWallOutcome {
    Minor { model: MinorModel, grasp: GraspCert },
    Flat(FlatWallCert),
}

/// The first failed condition of a flat-wall certificate, described.
pub fn flat_cert_defect(g: &Graph, cert: &FlatWallCert) -> Option<String> {
    let wv = cert.wall.vertex_set();
    if !wv.is_disjoint(&cert.apex) {
        return Some("the wall meets the apex set".into());
    }
    let h = g.without_vertices(&cert.apex);
    if let Err(e) = cert.wall.check(&h) {
        return Some(format!("not a wall of G − A: {e}"));
    }
    let (x, y) = (&cert.separation.a, &cert.separation.b);
    if x.iter().chain(y).any(|&v| !h.has_vertex(v)) {
        return Some("the separation names a vertex outside G − A".into());
    }
    if let Err(e) = cert.separation.check(&h) {
        return Some(format!("not a separation of G − A: {e}"));
    }
    let xy = cert.separation.boundary();
    let outer = cert.wall.mesh.outer_cycle();
    if xy.iter().any(|v| !outer.contains(v)) {
        return Some("X∩Y leaves the outer cycle".into());
    }
    if !wv.is_subset(y) {
        return Some("the wall is not inside Y".into());
    }
    if let Some(p) = cert.wall.pegs.iter().find(|p| !x.contains(p)) {
        return Some(format!("peg {p} is not in X"));
    }
    let listed: VertexSet = cert.boundary.iter().copied().collect();
    let in_order: Vec<VertexId> = outer.iter().copied().filter(|v| xy.contains(v)).collect();
    if listed != xy || listed.len() != cert.boundary.len() || !cyclic_eq(&cert.boundary, &in_order)
    {
        return Some("the boundary is not X∩Y in outer-cycle order".into());
    }
    let j = match replay_reduction_sequence(&h.induced(y), &xy, &cert.sequence) {
        Ok((j, _)) => j,
        Err(e) => return Some(format!("the reduction sequence does not replay: {e}")),
    };
    if cert.drawing.outer != cert.boundary {
        return Some("the drawing's rim is not the boundary".into());
    }
    if let Err(e) = validate_disk(&j, &cert.drawing) {
        return Some(format!("the disk drawing: {e}"));
    }
    None
}

pub fn validate_flat_cert(g: &Graph, cert: &FlatWallCert) -> bool {
    flat_cert_defect(g, cert).is_none()
}

/// Bridges of `W − apex` in `h = G − apex`.
fn wall_bridges(h: &Graph, w: &Wall) -> Result<Vec<Bridge>> {
    let mut sub = Subgraph::default();
    for p in w.mesh.horizontal.iter().chain(&w.mesh.vertical) {
        sub.vertices
            .extend(p.iter().copied().filter(|&v| h.has_vertex(v)));
        for pair in p.windows(2) {
            if let Some(e) = h.edge_between(pair[0], pair[1]) {
                sub.edges.insert(e);
            }
        }
    }
    enumerate_bridges(h, &sub)
}

fn attachment_graph(h: &Graph, bridges: &[Bridge], wi: &Wall, ci: &[VertexId]) -> Result<Graph> {
    let sub = wi.mesh.subgraph(h)?;
    let mut out = Graph::new();
    let add = |out: &mut Graph, e| -> Result<()> {
        let (u, v) = h.endpoints(e).unwrap();
        out.add_vertex(u);
        out.add_vertex(v);
        out.insert_edge(e, u, v)
    };
    for &v in &sub.vertices {
        out.add_vertex(v);
    }
    for &e in &sub.edges {
        add(&mut out, e)?;
    }
    for b in bridges {
        if b.attachments.is_disjoint(&sub.vertices) {
            continue;
        }
        for &e in &b.edges {
            let (u, v) = h.endpoints(e).unwrap();
            let keep = |x| b.interior.contains(&x) || sub.vertices.contains(&x);
            if keep(u) && keep(v) {
                add(&mut out, e)?;
            }
        }
    }
    // cycle edges get identifiers unused in `h`
    let mut next = h.fresh_edge().max(out.fresh_edge());
    for k in 0..ci.len() {
        let (u, v) = (ci[k], ci[(k + 1) % ci.len()]);
        if !out.adjacent(u, v) {
            out.insert_edge(next, u, v)?;
            next += 1;
        }
    }
    Ok(out)
}

/// `H_i`: the subwall `wi`, its corner cycle `ci`, and every bridge of
/// `W − A` in `G − A` that attaches to `wi`, cut off at its attachments
/// outside `wi`. Edge identifiers of `G` are kept; cycle edges get new ones.
pub fn build_attachment_graph(
    g: &Graph,
    a: &VertexSet,
    w: &Wall,
    wi: &Wall,
    ci: &[VertexId],
) -> Result<Graph> {
    if ci.len() != 4 || ci.iter().any(|v| !wi.mesh.corners().contains(v)) {
        return input("the cycle must list the four corners of the subwall");
    }
    let h = g.without_vertices(a);
    attachment_graph(&h, &wall_bridges(&h, w)?, wi, ci)
}

/// A W-path inside one bridge joining `wi` and `wj`, if one exists.
fn shared_bridge_path(
    h: &Graph,
    bridges: &[Bridge],
    wi: &VertexSet,
    wj: &VertexSet,
) -> Option<Path> {
    bridges.iter().find_map(|b| {
        let from: VertexSet = b.attachments.intersection(wi).copied().collect();
        let to: VertexSet = b.attachments.intersection(wj).copied().collect();
        if from.is_empty() || to.is_empty() {
            return None;
        }
        h.bfs_path(&from, &to, |v| b.interior.contains(&v))
    })
}

/// For each exit, an arc of the cycle `d` from the exit to a vertex with
/// a neighbour inside, the arcs pairwise disjoint, plus such a neighbour.
/// The paths may share their first vertex.
fn arcs_to_inside(
    d: &[VertexId],
    inside_nbrs: &[Vec<VertexId>],
    exits: &[VertexId],
) -> Option<Vec<(Path, VertexId)>> {
    let n = d.len();
    let at = |v: VertexId| d.iter().position(|&x| x == v).unwrap();
    for mask in 0..1u32 << exits.len() {
        let mut used: VertexSet = exits.iter().copied().collect();
        let mut arcs = Vec::new();
        for (k, &e) in exits.iter().enumerate() {
            let step = if mask >> k & 1 == 0 { 1 } else { n - 1 };
            let mut i = at(e);
            let mut arc = vec![e];
            while inside_nbrs[i].is_empty() {
                i = (i + step) % n;
                if used.contains(&d[i]) {
                    break;
                }
                used.insert(d[i]);
                arc.push(d[i]);
            }
            if !inside_nbrs[i].is_empty() && *arc.last().unwrap() == d[i] {
                arcs.push(arc);
            }
        }
        if arcs.len() < exits.len() {
            continue;
        }
        return Some(
            arcs.into_iter()
                .map(|a| {
                    let v = inside_nbrs[at(*a.last().unwrap())][0];
                    (a, v)
                })
                .collect(),
        );
    }
    None
}

/// Four internally disjoint paths from the inside of `inner` to the
/// corners of `wi`, each meeting the outer cycle of `inner` in a path.
pub fn linking_paths(h: &Graph, wi: &Wall, inner: &Wall) -> Result<[Path; 4]> {
    let wg = wi.mesh.graph(h)?;
    let ring: VertexSet = wi
        .vertex_set()
        .difference(&inner.vertex_set())
        .copied()
        .collect();
    let corners: VertexSet = wi.mesh.corners().into_iter().collect();
    link_through(&wg, &ring, inner, &corners)
}

/// Four internally disjoint paths from the inside of `inner` to distinct
/// vertices of `targets`, running through `ring` in the host wall graph
/// `wg` and meeting the outer cycle of `inner` in a path.
pub(crate) fn link_through(
    wg: &Graph,
    ring: &VertexSet,
    inner: &Wall,
    targets: &VertexSet,
) -> Result<[Path; 4]> {
    let d = inner.mesh.outer_cycle();
    let on_d: VertexSet = d.iter().copied().collect();
    let ig = inner.mesh.graph(wg)?;
    let inside_nbrs: Vec<Vec<VertexId>> = d
        .iter()
        .map(|&v| {
            ig.neighbors(v)
                .into_iter()
                .filter(|u| !on_d.contains(u))
                .collect()
        })
        .collect();
    let mut exits: VertexSet = d
        .iter()
        .copied()
        .filter(|&v| wg.neighbors(v).iter().any(|u| ring.contains(u)))
        .collect();
    loop {
        let mut ring_v = ring.clone();
        ring_v.extend(exits.iter().copied());
        let ring_g = wg.induced(&ring_v);
        let Linkage::Paths(outer) = menger_paths(&ring_g, 4, &exits, targets)? else {
            return capacity("the targets are not linked to the inner wall");
        };
        let starts: Vec<VertexId> = outer.iter().map(|p| p[0]).collect();
        if let Some(arcs) = arcs_to_inside(&d, &inside_nbrs, &starts) {
            let out: Vec<Path> = outer
                .into_iter()
                .zip(arcs)
                .map(|(p, (arc, v))| {
                    let mut q = vec![v];
                    q.extend(arc.iter().rev());
                    q.extend(p.into_iter().skip(1));
                    q
                })
                .collect();
            return Ok(out.try_into().unwrap());
        }
        // drop an exit that cannot reach the inside on its own
        let stuck = starts
            .iter()
            .copied()
            .find(|&e| arcs_to_inside(&d, &inside_nbrs, &[e]).is_none())
            .unwrap_or(starts[0]);
        exits.remove(&stuck);
    }
}

/// A layout of candidate subwalls that fits a wall of `size` paths, with
/// the number of candidates. Only the relaxed profile shrinks.
pub fn fit_layout(cfg: &Config, size: usize) -> (Config, usize) {
    let tt = cfg.tt();
    let span =
        |c: &Config, k: usize| 2 * c.margin + k * c.subwall_size + (k - 1) * (c.gap.max(1) - 1);
    let fits = |c: &Config, k: usize| span(c, k) <= size && c.strip_height <= size;
    if cfg.profile != Profile::Relaxed || fits(cfg, tt) {
        return (cfg.clone(), tt);
    }
    let mut c = cfg.clone();
    c.trim = 1;
    c.gap = 2;
    c.subwall_size = c.r + 2;
    for margin in [(tt / 2).max(1), 1] {
        c.margin = margin;
        c.strip_height = c.subwall_size + 2 * margin;
        if let Some(k) = (1..=tt).rev().find(|&k| fits(&c, k)) {
            if k == tt || margin == 1 {
                return (c, k);
            }
        }
    }
    (cfg.clone(), tt)
}

/// Applies the flat separation to `hi` and extends it to `G − A`.
#[allow(clippy::too_many_arguments)]
fn flat_candidate(
    g: &Graph,
    h: &Graph,
    apex: &VertexSet,
    wi: &Wall,
    hi: &Graph,
    trim: usize,
    seq: &ReductionSequence,
    drawing: &PlaneDrawing,
) -> Result<FlatWallCert> {
    let last = wi.size() - 1 - trim;
    let inner = subwall_extract(h, wi, (trim, last), (trim, last))?;
    let ci = wi.mesh.corners();
    let d = inner.mesh.outer_cycle();
    let paths = linking_paths(hi, wi, &inner)?;
    let wsub = inner.mesh.subgraph(hi)?;
    let fs = flat_separation(hi, &wsub, &d, &ci, &paths, seq, drawing)?;
    let mut x = fs.separation.a;
    x.extend(h.vertices().filter(|&v| !hi.has_vertex(v)));
    let y = fs.separation.b;
    let only_x = |v: &VertexId| x.contains(v) && !y.contains(v);
    let only_y = |v: &VertexId| y.contains(v) && !x.contains(v);
    if let Some((e, u, v)) = h
        .edges()
        .find(|(_, u, v)| (only_x(u) && only_y(v)) || (only_x(v) && only_y(u)))
    {
        return Err(Error::Capacity(format!(
            "edge {e} ({u},{v}) leaves the attachment graph across the separation"
        )));
    }
    let cert = FlatWallCert {
        apex: apex.clone(),
        wall: inner,
        separation: Separation { a: x, b: y },
        boundary: fs.boundary,
        sequence: fs.sequence,
        drawing: fs.drawing,
    };
    if let Some(d) = flat_cert_defect(g, &cert) {
        return internal(format!("assembled flat-wall certificate: {d}"));
    }
    Ok(cert)
}

/// A K_t model grasped by `w`, or an apex set `A` and an `r`-subwall of
/// `w` flat in `G − A`. Under the paper profiles `w` must have the
/// profile's size; the relaxed profile takes any wall and shrinks the
/// subwall layout to fit.
pub fn flat_wall_or_minor(g: &Graph, w: &Wall, cfg: &Config) -> Result<FlatWallOutcome> {
    w.check(g)
        .map_err(|e| Error::Input(format!("not a wall: {e}")))?;
    if cfg.profile != Profile::Relaxed {
        cfg.check_wall(w.size())?;
    }
    if cfg.r < 3 {
        return input("a flat-wall certificate needs r >= 3");
    }
    let relaxed = cfg.profile == Profile::Relaxed;
    let soft = |msg: String| {
        if relaxed {
            Error::Capacity(msg)
        } else {
            Error::Internal(msg)
        }
    };

    let gc = grid_contraction(&w.mesh);
    let blk = match mesh_prune_or_kt(g, &w.mesh, &gc, cfg.t, cfg)? {
        PruneOutcome::Minor(m) => {
            return Ok(FlatWallOutcome::Minor {
                model: m.model,
                grasp: m.grasp,
            })
        }
        PruneOutcome::Blocker(b) => b,
    };
    if blk.a.len() as u128 > cfg.apex_bound {
        return Err(soft(format!(
            "apex set of {} exceeds the bound {}",
            blk.a.len(),
            cfg.apex_bound
        )));
    }
    let forbidden: VertexSet = blk.a.union(&blk.z).copied().collect();
    let (layout, count) = fit_layout(cfg, w.size());
    let strip = place_subwalls(g, w, &layout, &forbidden, count)?;
    let h = g.without_vertices(&blk.a);
    let bridges = wall_bridges(&h, w)?;
    let mut hs = Vec::new();
    for wi in &strip.subwalls {
        hs.push(attachment_graph(&h, &bridges, wi, &wi.mesh.corners())?);
    }
    let mut clash = None;
    'outer: for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            if hs[i].vertices().any(|v| hs[j].has_vertex(v)) {
                let (vi, vj) = (
                    strip.subwalls[i].vertex_set(),
                    strip.subwalls[j].vertex_set(),
                );
                let path = shared_bridge_path(&h, &bridges, &vi, &vj);
                clash = Some(format!(
                    "attachment graphs {} and {} meet; W-path {path:?}",
                    i + 1,
                    j + 1
                ));
                break 'outer;
            }
        }
    }
    if let (Some(msg), false) = (&clash, relaxed) {
        return internal(msg.clone());
    }

    let mut crosses: Vec<Cross> = Vec::new();
    let mut failure = None;
    for (wi, hi) in strip.subwalls.iter().zip(&hs) {
        match find_cross_or_reduce(hi, &wi.mesh.corners())? {
            CrossOutcome::Cross(c) => crosses.push(c),
            CrossOutcome::Drawing {
                sequence, drawing, ..
            } => match flat_candidate(g, &h, &blk.a, wi, hi, layout.trim, &sequence, &drawing) {
                Ok(cert) => return Ok(FlatWallOutcome::Flat(cert)),
                Err(Error::Capacity(m)) => {
                    if !relaxed {
                        return internal(m);
                    }
                    failure.get_or_insert(m);
                }
                Err(e) => return Err(e),
            },
        }
    }
    if let Some(m) = failure {
        return capacity(format!("no candidate subwall gave a flat wall: {m}"));
    }
    if count < cfg.tt() {
        return capacity(format!(
            "every one of the {count} candidate subwalls has a cross, but {} are needed for K_{}",
            cfg.tt(),
            cfg.t
        ));
    }
    if let Some(msg) = clash {
        return Err(soft(msg));
    }
    let (model, grasp) = crosses_to_kt(g, w, &strip, &crosses, cfg.t)?;
    Ok(FlatWallOutcome::Minor { model, grasp })
}
