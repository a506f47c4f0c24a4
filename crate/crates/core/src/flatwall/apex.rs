//! Shrinking the apex set of a flat wall to apices that see every brick.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{flat_cert_defect, link_through, FlatWallCert};
use crate::config::{Config, Profile};
use crate::cross::{
    disk_drawing, find_cross_or_reduce, flat_separation, planar_with_face, reduce_fully,
    replay_reduction_sequence, CrossOutcome,
};
use crate::error::{capacity, input, internal, Error, Result};
use crate::graph::{Graph, MinorModel, Path, Separation, VertexId, VertexSet};
use crate::minor::{grasp_cert, model_defect, GraspCert};
use crate::wall::{subwall_extract, Mesh, Wall};

/// Witness that every vertex of `universal` reaches every brick of `wall`
/// avoiding `V(wall) ∪ apex` internally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexUniversalCert {
    pub wall: Wall,
    pub apex: VertexSet,
    pub universal: VertexSet,
    /// `(a, brick, path)`: brick indices follow `Mesh::bricks`; the path
    /// runs from `a` to a vertex of the brick.
    pub paths: Vec<(VertexId, usize, Path)>,
}

/// Shortest paths from `a` to each vertex of `wall_v` it reaches with
/// interior outside `wall_v ∪ apex`.
fn apex_reach(
    g: &Graph,
    wall_v: &VertexSet,
    apex: &VertexSet,
    a: VertexId,
) -> BTreeMap<VertexId, Path> {
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut hit: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    parent.insert(a, a);
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if wall_v.contains(&v) {
                hit.entry(v).or_insert(u);
            } else if !apex.contains(&v) && !parent.contains_key(&v) {
                parent.insert(v, u);
                queue.push_back(v);
            }
        }
    }
    hit.into_iter()
        .map(|(w, mut u)| {
            let mut p = vec![w, u];
            while u != a {
                u = parent[&u];
                p.push(u);
            }
            p.reverse();
            (w, p)
        })
        .collect()
}

/// A certificate that `universal` is apex-universal for `(w, apex)`, or
/// `None` if some apex misses some brick or the preconditions fail.
pub fn is_apex_universal(
    g: &Graph,
    w: &Wall,
    apex: &VertexSet,
    universal: &VertexSet,
) -> Option<ApexUniversalCert> {
    let wv = w.vertex_set();
    if !wv.is_disjoint(apex) || !universal.is_subset(apex) {
        return None;
    }
    let bricks = w.mesh.bricks();
    let mut paths = Vec::new();
    for &a in universal {
        if !g.has_vertex(a) {
            return None;
        }
        let reach = apex_reach(g, &wv, apex, a);
        for (k, c) in bricks.iter().enumerate() {
            let p = c.iter().find_map(|v| reach.get(v))?;
            paths.push((a, k, p.clone()));
        }
    }
    Some(ApexUniversalCert {
        wall: w.clone(),
        apex: apex.clone(),
        universal: universal.clone(),
        paths,
    })
}

/// The first failed condition of an apex-universality certificate.
pub fn apex_universal_defect(g: &Graph, cert: &ApexUniversalCert) -> Option<String> {
    let h = g.without_vertices(&cert.apex);
    if let Err(e) = cert.wall.check(&h) {
        return Some(format!("not a wall of G − A: {e}"));
    }
    if !cert.universal.is_subset(&cert.apex) {
        return Some("A′ is not contained in A".into());
    }
    let bricks = cert.wall.mesh.bricks();
    let wv = cert.wall.vertex_set();
    let mut seen = BTreeMap::new();
    for (a, k, p) in &cert.paths {
        let Some(c) = bricks.get(*k) else {
            return Some(format!("brick {k} does not exist"));
        };
        if !cert.universal.contains(a) || p.first() != Some(a) || !g.is_path(p) {
            return Some(format!(
                "the path for apex {a} and brick {k} is not a path from {a}"
            ));
        }
        if !c.contains(p.last().unwrap()) {
            return Some(format!("the path for apex {a} does not end on brick {k}"));
        }
        if let Some(v) = p[1..p.len() - 1]
            .iter()
            .find(|v| wv.contains(v) || cert.apex.contains(v))
        {
            return Some(format!(
                "the path for apex {a} and brick {k} passes through {v}"
            ));
        }
        seen.insert((*a, *k), ());
    }
    if seen.len() != cert.universal.len() * bricks.len() {
        return Some("some apex lacks a path to some brick".into());
    }
    None
}

/// Flat-wall certificate for a subwall `sub` of a flat wall avoiding its
/// outer cycle. Pegs of `sub` are the outer-cycle vertices with a wall
/// neighbour in the outer part of `W − V(sub)`.
pub fn flat_subwall(g: &Graph, cert: &FlatWallCert, sub: &Wall) -> Result<FlatWallCert> {
    if let Some(d) = flat_cert_defect(g, cert) {
        return input(format!("the flat-wall certificate is invalid: {d}"));
    }
    let w = &cert.wall;
    let wv = w.vertex_set();
    let sv = sub.vertex_set();
    let outer: VertexSet = w.mesh.outer_cycle().into_iter().collect();
    if !sv.is_subset(&wv) {
        return input("the subwall has vertices outside the flat wall");
    }
    if !sv.is_disjoint(&outer) {
        return input("the subwall touches the outer cycle of the flat wall");
    }
    let h = g.without_vertices(&cert.apex);
    sub.mesh
        .check(&h)
        .map_err(|e| Error::Input(format!("not a subwall: {e}")))?;
    let wg = w.mesh.graph(&h)?;
    if sub
        .mesh
        .subgraph(&h)?
        .edges
        .iter()
        .any(|e| !wg.has_edge_id(*e))
    {
        return input("the subwall uses edges outside the flat wall");
    }
    let c = &cert.boundary;
    if c.len() < 4 {
        return input("the flat wall has fewer than four boundary vertices");
    }

    // G[Y] with the cycle through X∩Y
    let y = &cert.separation.b;
    let mut gb = h.induced(y);
    let mut next = h.fresh_edge().max(gb.fresh_edge());
    for k in 0..c.len() {
        let (u, v) = (c[k], c[(k + 1) % c.len()]);
        if !gb.adjacent(u, v) {
            gb.insert_edge(next, u, v)?;
            next += 1;
        }
    }
    let ring: VertexSet = wv.difference(&sv).copied().collect();
    let targets: VertexSet = c.iter().copied().collect();
    let paths = link_through(&wg, &ring, sub, &targets)?;
    let d = sub.mesh.outer_cycle();
    let ws = sub.mesh.subgraph(&gb)?;
    // the certificate's own reduction first; a fresh optimal one if that fails
    let reused = replay_reduction_sequence(&gb, &targets, &cert.sequence)
        .ok()
        .and_then(|(j, _)| planar_with_face(&j, c).ok().flatten())
        .and_then(|dr| flat_separation(&gb, &ws, &d, c, &paths, &cert.sequence, &dr).ok());
    let fs = match reused {
        Some(fs) => fs,
        None => {
            let CrossOutcome::Drawing {
                sequence, drawing, ..
            } = find_cross_or_reduce(&gb, c)?
            else {
                return internal("the disk of a flat wall carries a cross");
            };
            flat_separation(&gb, &ws, &d, c, &paths, &sequence, &drawing)?
        }
    };

    let outside: VertexSet = wg
        .components_within(&ring)
        .into_iter()
        .filter(|comp| !comp.is_disjoint(&outer))
        .flatten()
        .collect();
    let pegs = d
        .iter()
        .copied()
        .filter(|&v| wg.neighbors(v).iter().any(|u| outside.contains(u)))
        .collect();
    let mut x = fs.separation.a;
    x.extend(h.vertices().filter(|v| !y.contains(v)));
    let out = FlatWallCert {
        apex: cert.apex.clone(),
        wall: Wall {
            mesh: sub.mesh.clone(),
            pegs,
        },
        separation: Separation {
            a: x,
            b: fs.separation.b,
        },
        boundary: fs.boundary,
        sequence: fs.sequence,
        drawing: fs.drawing,
    };
    if let Some(d) = flat_cert_defect(g, &out) {
        return internal(format!("flat subwall certificate: {d}"));
    }
    Ok(out)
}

/// Moves `a` from the apex set to the X side, after shrinking Y to the
/// parts of Y∖X that reach the wall.
fn release_apex(g: &Graph, cert: FlatWallCert, a: VertexId) -> Result<FlatWallCert> {
    let h = g.without_vertices(&cert.apex);
    let (mut x, mut y) = (cert.separation.a.clone(), cert.separation.b.clone());
    let wv = cert.wall.vertex_set();
    let only_y: VertexSet = y.difference(&x).copied().collect();
    let moved: VertexSet = h
        .components_within(&only_y)
        .into_iter()
        .filter(|comp| comp.is_disjoint(&wv))
        .flatten()
        .collect();
    let (mut sequence, mut drawing) = (cert.sequence.clone(), cert.drawing.clone());
    if !moved.is_empty() {
        x.extend(moved.iter().copied());
        y.retain(|v| !moved.contains(v));
        let xy: VertexSet = x.intersection(&y).copied().collect();
        let (reduced, seq, _) = reduce_fully(&h.induced(&y), &xy);
        let Some(dr) = disk_drawing(&reduced, &cert.boundary)? else {
            return internal("the shrunk disk side has no disk drawing");
        };
        sequence = seq;
        drawing = dr;
    }
    if let Some(v) = g
        .neighbors(a)
        .into_iter()
        .find(|v| y.contains(v) && !x.contains(v))
    {
        return internal(format!(
            "apex {a} still has the neighbour {v} inside the disk"
        ));
    }
    x.insert(a);
    let mut apex = cert.apex.clone();
    apex.remove(&a);
    let out = FlatWallCert {
        apex,
        separation: Separation { a: x, b: y },
        sequence,
        drawing,
        ..cert
    };
    if let Some(d) = flat_cert_defect(g, &out) {
        return internal(format!("after releasing apex {a}: {d}"));
    }
    Ok(out)
}

/// One iteration of the shrink loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefineStep {
    /// The apex reaches every candidate subwall and joins A′.
    Promote { apex: VertexId, size: usize },
    /// The apex misses a candidate subwall and leaves A.
    Release { apex: VertexId, size: usize },
}

#[derive(Clone, Debug)]
pub enum RefineOutcome {
    Minor {
        model: MinorModel,
        grasp: GraspCert,
        trace: Vec<RefineStep>,
    },
    Flat {
        cert: FlatWallCert,
        universal: ApexUniversalCert,
        trace: Vec<RefineStep>,
    },
}

fn shrink_target(cfg: &Config, s: usize, left: usize) -> Option<usize> {
    let k = if cfg.profile == Profile::Relaxed {
        (2..=s).take_while(|k| k * k - k + 3 <= s).last()?
    } else {
        let mut k = cfg.r as u128;
        for _ in 1..left {
            k = k.checked_mul(k)?;
        }
        usize::try_from(k).ok()?
    };
    (k >= cfg.r.max(2) && k.checked_mul(k)? - k + 3 <= s).then_some(k)
}

/// Either a K_t model grasped by `w0`, or an apex set of at most `t − 5`
/// vertices that is apex-universal for a flat subwall of size at least
/// `r`. Starts from the flat wall `first` and settles one apex per step.
pub fn refine_apex(
    g: &Graph,
    w0: &Wall,
    first: &FlatWallCert,
    cfg: &Config,
) -> Result<RefineOutcome> {
    let t = cfg.t;
    if t < 5 {
        return input("apex refinement needs t >= 5");
    }
    if let Some(d) = flat_cert_defect(g, first) {
        return input(format!("the flat-wall certificate is invalid: {d}"));
    }
    if !first.wall.vertex_set().is_subset(&w0.vertex_set()) {
        return input("the flat wall is not a subwall of the given wall");
    }
    if cfg.profile != Profile::Relaxed {
        let mut need = cfg.r as u128;
        for _ in 0..first.apex.len() {
            need = need.saturating_mul(need);
        }
        if (first.wall.size() as u128) < need {
            return capacity(format!(
                "a flat wall of size {} cannot absorb {} apices; size {need} is needed",
                first.wall.size(),
                first.apex.len()
            ));
        }
    }
    let mut cert = first.clone();
    let mut universal = VertexSet::new();
    let mut trace = Vec::new();
    while cert.apex != universal {
        let s = cert.wall.size();
        let a = *cert.apex.difference(&universal).next().unwrap();
        if cfg.profile == Profile::Relaxed {
            // an apex that already sees every brick needs no shrink step
            let mut more = universal.clone();
            more.insert(a);
            if is_apex_universal(g, &cert.wall, &cert.apex, &more).is_some() {
                universal = more;
                trace.push(RefineStep::Promote { apex: a, size: s });
                continue;
            }
        }
        let left = cert.apex.len() - universal.len();
        let Some(k) = shrink_target(cfg, s, left) else {
            return capacity(format!(
                "a wall of size {s} is too small for another shrink step with r = {}",
                cfg.r
            ));
        };
        let idx: Vec<usize> = (1..=k).map(|i| 1 + i * (k - 1)).collect();
        let h = g.without_vertices(&cert.apex);
        let reach = apex_reach(g, &cert.wall.vertex_set(), &cert.apex, a);
        let mut missed = None;
        'find: for p in 0..k - 1 {
            for q in 0..k - 1 {
                let wi =
                    subwall_extract(&h, &cert.wall, (idx[p], idx[p + 1]), (idx[q], idx[q + 1]))?;
                if wi.vertex_set().iter().all(|v| !reach.contains_key(v)) {
                    missed = Some(wi);
                    break 'find;
                }
            }
        }
        match missed {
            None => {
                let star = Wall {
                    mesh: cert.wall.mesh.submesh_on(&idx, &idx)?,
                    pegs: VertexSet::new(),
                };
                cert = flat_subwall(g, &cert, &star)?;
                universal.insert(a);
                trace.push(RefineStep::Promote { apex: a, size: k });
            }
            Some(wi) => {
                cert = release_apex(g, flat_subwall(g, &cert, &wi)?, a)?;
                trace.push(RefineStep::Release { apex: a, size: k });
            }
        }
        if is_apex_universal(g, &cert.wall, &cert.apex, &universal).is_none() {
            return internal("A′ lost apex-universality after a shrink step");
        }
    }
    let Some(univ) = is_apex_universal(g, &cert.wall, &cert.apex, &universal) else {
        return internal("the final apex set is not apex-universal");
    };
    if cert.apex.len() + 5 <= t {
        return Ok(RefineOutcome::Flat {
            cert,
            universal: univ,
            trace,
        });
    }
    let (model, grasp) = bricks_to_kt(g, w0, &univ, t)?;
    Ok(RefineOutcome::Minor {
        model,
        grasp,
        trace,
    })
}

fn pos(p: &Path, v: VertexId) -> usize {
    p.iter().position(|&x| x == v).unwrap()
}

/// Vertices of `H_i` strictly between its meets with `V_ja` and `V_jb`,
/// or through the meet with `V_jb` when `through`.
fn row_piece(m: &Mesh, i: usize, ja: usize, jb: usize, through: bool) -> Vec<VertexId> {
    let p = &m.horizontal[i];
    let a = m.meet(i, ja).iter().map(|&v| pos(p, v)).max().unwrap();
    let b = if through {
        m.meet(i, jb).iter().map(|&v| pos(p, v)).max().unwrap() + 1
    } else {
        m.meet(i, jb).iter().map(|&v| pos(p, v)).min().unwrap()
    };
    p[a + 1..b].to_vec()
}

/// Vertices of `V_j` strictly below `from` down to the meet with `H_i`,
/// or strictly above `to` from the meet with `H_i` when going up.
fn column_to(m: &Mesh, j: usize, from: VertexId, i: usize) -> Vec<VertexId> {
    let q = &m.vertical[j];
    let f = pos(q, from);
    let meet: Vec<usize> = m.meet(i, j).iter().map(|&v| pos(q, v)).collect();
    let (lo, hi) = (*meet.iter().min().unwrap(), *meet.iter().max().unwrap());
    if hi > f {
        q[f + 1..=hi].to_vec()
    } else {
        q[lo..f].to_vec()
    }
}

/// Branch sets from `t` bricks in the second row of the wall of `univ`:
/// the first `t − 4` take one apex each, and the last four are joined by
/// wall paths below the bricks and one route along the top row. Every set
/// carries a leg down through `t` horizontal paths for the grasp.
fn bricks_to_kt(
    g: &Graph,
    w0: &Wall,
    univ: &ApexUniversalCert,
    t: usize,
) -> Result<(MinorModel, GraspCert)> {
    let m = &univ.wall.mesh;
    let s = m.rows();
    if s < 3 * t + 1 {
        return capacity(format!(
            "the brick construction for K_{t} needs a wall of size {}",
            3 * t + 1
        ));
    }
    let apices: Vec<VertexId> = univ.universal.iter().copied().take(t - 4).collect();
    let bricks = m.bricks();
    let col: Vec<usize> = (0..t).map(|i| 1 + 3 * i).collect();
    let index: Vec<usize> = col.iter().map(|&q| (s - 1) + q).collect();
    let path_to = |a: VertexId, k: usize| {
        univ.paths
            .iter()
            .find(|(x, b, _)| *x == a && *b == k)
            .map(|(_, _, p)| p)
    };

    let mut sets: Vec<VertexSet> = Vec::new();
    let mut owner: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, &k) in index.iter().enumerate() {
        let mut set: VertexSet = bricks[k].iter().copied().collect();
        for &a in &apices {
            let p = path_to(a, k)
                .ok_or_else(|| Error::Internal(format!("no path from {a} to brick {k}")))?;
            for &v in &p[1..] {
                if let Some(&j) = owner.get(&v).filter(|&&j| j != i) {
                    return internal(format!(
                        "apex paths to bricks {j} and {i} meet at {v}, a path between bricks outside the wall"
                    ));
                }
                owner.insert(v, i);
                set.insert(v);
            }
        }
        for &v in &set {
            owner.insert(v, i);
        }
        if i < t - 4 {
            set.insert(apices[i]);
        }
        // leg: left side of the brick down to H_depth
        let depth = match i + 4 {
            x if x == t => t + 2,
            x if x == t + 2 => t + 1,
            x if x == t + 3 => t + 2,
            _ => t,
        };
        let q = &m.vertical[col[i]];
        let b = m.meet(2, col[i]).iter().map(|&v| pos(q, v)).min().unwrap();
        set.extend(column_to(m, col[i], q[b], depth));
        sets.push(set);
    }
    let [c1, c2, c3, c4] = [col[t - 4], col[t - 3], col[t - 2], col[t - 1]];
    let last = t - 4;
    sets[last].extend(row_piece(m, t, c1, c2, false));
    sets[last].extend(row_piece(m, t + 1, c1, c3, false));
    sets[last].extend(row_piece(m, t + 2, c1, c4, false));
    sets[last + 1].extend(row_piece(m, t, c2, c3, false));
    sets[last + 2].extend(row_piece(m, t, c3, c4, false));
    // top route from the second brick over the third to the fourth
    let q2 = &m.vertical[c2];
    let top2 = m.meet(1, c2).iter().map(|&v| pos(q2, v)).max().unwrap();
    let up = column_to(m, c2, q2[top2], 0);
    sets[last + 1].extend(up);
    sets[last + 1].extend(row_piece(m, 0, c2, c4, true));
    let q4 = &m.vertical[c4];
    let low0 = m.meet(0, c4).iter().map(|&v| pos(q4, v)).max().unwrap();
    let brick4: VertexSet = bricks[index[t - 1]].iter().copied().collect();
    sets[last + 1].extend(q4[low0 + 1..].iter().take_while(|v| !brick4.contains(v)));

    let model = MinorModel::with_witnesses(sets, g);
    let grasp = grasp_cert(&w0.mesh, &model);
    if let Some(d) = model_defect(g, &model, t, Some((&w0.mesh, &grasp))) {
        return internal(format!("model assembled from bricks: {d}"));
    }
    Ok((model, grasp))
}
