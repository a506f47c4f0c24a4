use std::collections::BTreeMap;

use super::{grasp_cert, kt_from_matching, validate_model, MatchingOutcome};
use crate::config::Config;
use crate::dispersed::{
    find_dispersed, find_semi_dispersed, BlockerCert, Dispersal, DispersedFamily,
};
use crate::error::{capacity, input, internal, Result};
use crate::graph::{Graph, Path, VertexId, VertexSet};
use crate::wall::{grid_contraction, GridContraction, Mesh};

/// Disjoint paths with at least one edge and both ends in `y`, at least
/// `ceil((|y|-1)/4)` of them, in a connected graph of maximum degree four.
pub fn disjoint_y_paths(b: &Graph, y: &VertexSet) -> Result<Vec<Path>> {
    if b.n() == 0 || !b.is_connected() {
        return input("the graph must be connected");
    }
    if let Some(v) = b.vertices().find(|&v| b.simple_degree(v) > 4) {
        return input(format!("vertex {v} has degree above four"));
    }
    if let Some(v) = y.iter().find(|v| !b.has_vertex(**v)) {
        return input(format!("terminal {v} is not in the graph"));
    }
    // BFS tree rooted at a vertex of smallest degree
    let root = b
        .vertices()
        .min_by_key(|&v| (b.simple_degree(v), v))
        .unwrap();
    let mut order = vec![root];
    let mut parent = BTreeMap::from([(root, root)]);
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for w in b.neighbors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(w) {
                e.insert(v);
                order.push(w);
            }
        }
    }
    let mut children: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &v in &order[1..] {
        children.entry(parent[&v]).or_default().push(v);
    }
    // open[v]: a path from an unused terminal up to v, through unused vertices
    let mut open: BTreeMap<VertexId, Path> = BTreeMap::new();
    let mut out = Vec::new();
    for &v in order.iter().rev() {
        let mut chains: Vec<Path> = children
            .get(&v)
            .into_iter()
            .flatten()
            .filter_map(|c| open.remove(c))
            .collect();
        if y.contains(&v) {
            if let Some(mut c) = chains.pop() {
                c.push(v);
                out.push(c);
            } else {
                open.insert(v, vec![v]);
            }
        } else if chains.len() >= 2 {
            let mut a = chains.swap_remove(0);
            let b = chains.swap_remove(0);
            a.push(v);
            a.extend(b.into_iter().rev());
            out.push(a);
        } else if let Some(mut c) = chains.pop() {
            c.push(v);
            open.insert(v, c);
        }
    }
    let bound = y.len().saturating_sub(1).div_ceil(4);
    if out.len() < bound {
        return internal(format!("{} paths found, {bound} promised", out.len()));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum PruneOutcome {
    Minor(MatchingOutcome),
    Blocker(BlockerCert),
}

/// Horizontal and vertical indices (0-based) of the submesh kept away from
/// `z`: paths with a vertex whose grid image is within `rho` of `z` in
/// the interior metric, and paths lying inside `ball`, are dropped.
pub fn prune_indices(
    mesh: &Mesh,
    gc: &GridContraction,
    z: VertexId,
    rho: usize,
    ball: &VertexSet,
) -> (Vec<usize>, Vec<usize>) {
    let (zi, zj) = gc.f[&z];
    let keep = |paths: &[Path], centre: usize| -> Vec<usize> {
        paths
            .iter()
            .enumerate()
            .filter(|(i, p)| (i + 1).abs_diff(centre) > rho && !p.iter().all(|v| ball.contains(v)))
            .map(|(i, _)| i)
            .collect()
    };
    (keep(&mesh.horizontal, zi), keep(&mesh.vertical, zj))
}

fn usize_of(v: u128) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

/// Path inside the mesh from `x` to the submesh along the path of `x`
/// that was dropped, as the trimming argument prescribes.
fn stub_along(mesh: &Mesh, x: VertexId, rows: &[usize], cols: &[usize]) -> Option<Path> {
    for (own, cross, kept_own, kept_cross) in [
        (&mesh.horizontal, &mesh.vertical, rows, cols),
        (&mesh.vertical, &mesh.horizontal, cols, rows),
    ] {
        let Some(i) = own.iter().position(|p| p.contains(&x)) else {
            continue;
        };
        if kept_own.contains(&i) {
            continue;
        }
        let p = &own[i];
        let on: Vec<Option<usize>> = p
            .iter()
            .map(|v| cross.iter().position(|q| q.contains(v)))
            .collect();
        let at = p.iter().position(|&v| v == x).unwrap();
        let j = on[..=at].iter().rev().find_map(|c| *c)?;
        if kept_cross.contains(&j) {
            let from = (0..=at).rev().find(|&k| on[k] == Some(j))?;
            return Some(p[from..=at].iter().rev().copied().collect());
        }
        if kept_cross.contains(&(j + 1)) {
            let to = (at..p.len()).find(|&k| on[k] == Some(j + 1))?;
            return Some(p[at..=to].to_vec());
        }
        return None;
    }
    None
}

/// Either a K_t model grasped by `mesh`, or sets `A` and `Z` such that the
/// ends of every M-path avoiding `A` are close or both near `Z`.
pub fn mesh_prune_or_kt(
    g: &Graph,
    mesh: &Mesh,
    gc: &GridContraction,
    t: usize,
    cfg: &Config,
) -> Result<PruneOutcome> {
    let m = mesh.subgraph(g)?;
    let k = usize_of(cfg.k);
    let first = find_dispersed(g, &m, gc, cfg.l_full, k, cfg.strict)?;
    let blk1 = match first.outcome {
        Dispersal::Family(f) => {
            return kt_from_matching(g, mesh, gc, &f.paths, t, cfg).map(PruneOutcome::Minor)
        }
        Dispersal::Blocker(b) => b,
    };
    let second = find_semi_dispersed(g, &m, gc, cfg.l_semi, usize_of(cfg.k0), cfg.strict)?;
    let fam = match second.outcome {
        Dispersal::Blocker(b) => return Ok(PruneOutcome::Blocker(b)),
        Dispersal::Family(f) => f,
    };
    let links = links_around_blocker(g, mesh, gc, &blk1, &fam)?;
    let sub = &links.0;
    let sub_gc = grid_contraction(sub);
    let out = kt_from_matching(g, sub, &sub_gc, &links.1, t, cfg)?;
    // grasping transfers: each submesh path lies in its own path of `mesh`
    let grasp = grasp_cert(mesh, &out.model);
    if !validate_model(g, &out.model, t, Some((mesh, &grasp))) {
        return internal("the model grasped by the submesh is not grasped by the mesh");
    }
    Ok(PruneOutcome::Minor(MatchingOutcome { grasp, ..out }))
}

/// Turns semi-dispersed paths whose near ends crowd around one vertex of
/// `blk.z` into far apart links over a submesh avoiding that vertex.
fn links_around_blocker(
    g: &Graph,
    mesh: &Mesh,
    gc: &GridContraction,
    blk: &BlockerCert,
    fam: &DispersedFamily,
) -> Result<(Mesh, Vec<Path>)> {
    let rho = blk.radius;
    let d = |u, v| gc.distance(u, v).unwrap();
    let usable: Vec<usize> = (0..fam.paths.len())
        .filter(|&i| fam.paths[i].iter().all(|v| !blk.a.contains(v)))
        .collect();
    let near = |z: VertexId, i: usize| {
        let (x, y) = fam.ends[i];
        d(x, z) <= rho || d(y, z) <= rho
    };
    let Some(&z) = blk.z.iter().max_by_key(|&&z| {
        (
            usable.iter().filter(|&&i| near(z, i)).count(),
            std::cmp::Reverse(z),
        )
    }) else {
        return capacity("the blocker has no centres to build around");
    };
    let ball = gc.ball(z, rho + 1);
    let crowd: Vec<usize> = usable
        .into_iter()
        .filter(|&i| ball.contains(&fam.ends[i].1) && !ball.contains(&fam.ends[i].0))
        .collect();

    let (rows, cols) = prune_indices(mesh, gc, z, rho, &ball);
    if rows.len() < 2 || cols.len() < 2 {
        return capacity("too few mesh paths remain away from the crowded ball");
    }
    let sub = mesh.submesh_on(&rows, &cols)?;
    sub.check(g)
        .map_err(|e| crate::Error::Internal(format!("pruned submesh: {e}")))?;
    let sub_v = sub.vertex_set();
    let mg = mesh.graph(g)?;

    let inside: VertexSet = ball.difference(&sub_v).copied().collect();
    let comps = mg.components_within(&inside);
    let ys: VertexSet = crowd.iter().map(|&i| fam.ends[i].1).collect();
    let Some(comp) = comps
        .into_iter()
        .max_by_key(|c| c.iter().filter(|v| ys.contains(v)).count())
    else {
        return capacity("the crowded ball is empty");
    };

    let mut used: VertexSet = crowd.iter().map(|&i| fam.ends[i].0).collect();
    used.extend(comp.iter().copied());
    let mut stubs: BTreeMap<VertexId, Path> = BTreeMap::new();
    for &i in &crowd {
        let (x, y) = fam.ends[i];
        if !comp.contains(&y) {
            continue;
        }
        let ok = |p: &Path| {
            sub_v.contains(p.last().unwrap())
                && p[1..].iter().all(|v| !used.contains(v))
                && p[..p.len() - 1].iter().all(|v| !sub_v.contains(v))
        };
        let stub = if sub_v.contains(&x) {
            Some(vec![x])
        } else {
            stub_along(mesh, x, &rows, &cols).filter(ok).or_else(|| {
                let to: VertexSet = sub_v.difference(&used).copied().collect();
                mg.bfs_path(&[x].into(), &to, |v| {
                    !used.contains(&v) && !sub_v.contains(&v)
                })
            })
        };
        if let Some(s) = stub {
            used.extend(s.iter().copied());
            stubs.insert(y, s);
        }
    }
    let ys: VertexSet = stubs.keys().copied().collect();
    let bg = mg.induced(&comp);
    let pairs = disjoint_y_paths(&bg, &ys)?;
    let by_y: BTreeMap<VertexId, usize> = crowd.iter().map(|&i| (fam.ends[i].1, i)).collect();
    let mut links = Vec::new();
    for r in pairs {
        let (y1, y2) = (r[0], r[r.len() - 1]);
        let (p1, p2) = (&fam.paths[by_y[&y1]], &fam.paths[by_y[&y2]]);
        let mut link: Path = stubs[&y1].iter().rev().copied().collect();
        link.extend(p1.iter().skip(1));
        link.extend(r.iter().skip(1));
        link.extend(p2.iter().rev().skip(1));
        link.extend(stubs[&y2].iter().skip(1));
        if g.is_path(&link) {
            links.push(link);
        }
    }
    Ok((sub, links))
}
