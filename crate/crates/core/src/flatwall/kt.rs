//! K_t models from one cross per candidate subwall.

use std::collections::BTreeMap;

use crate::cross::Cross;
use crate::error::{capacity, input, internal, Result};
use crate::graph::{Graph, MinorModel, Path, VertexId, VertexSet};
use crate::minor::{grasp_cert, h1_kt_model, model_defect, GraspCert};
use crate::wall::{Coord, Mesh, Strip, Wall};

fn pos(p: &Path, v: VertexId) -> usize {
    p.iter().position(|&x| x == v).unwrap()
}

/// Vertices of `Q_j` strictly between its meets with `P_i1` and `P_i2`.
fn vertical_piece(m: &Mesh, j: usize, i1: usize, i2: usize) -> Vec<VertexId> {
    let q = &m.vertical[j];
    let a = m.meet(i1, j).into_iter().map(|v| pos(q, v)).max().unwrap();
    let b = m.meet(i2, j).into_iter().map(|v| pos(q, v)).min().unwrap();
    q[a + 1..b].to_vec()
}

/// Vertices of `Q_j` strictly between its meet with `P_i` and `corner`,
/// which lies on `Q_j` below (`down`) or above that meet.
fn connector(m: &Mesh, j: usize, i: usize, corner: VertexId, down: bool) -> Vec<VertexId> {
    let q = &m.vertical[j];
    let at = pos(q, corner);
    let meet = m.meet(i, j).into_iter().map(|v| pos(q, v));
    if down {
        let a = meet.max().unwrap();
        q[a + 1..at].to_vec()
    } else {
        let b = meet.min().unwrap();
        q[at + 1..b].to_vec()
    }
}

/// Cross paths of subwall `sub`, oriented top-left to bottom-right and
/// bottom-left to top-right.
fn orient(sub: &Wall, c: &Cross) -> Result<(Path, Path)> {
    let [tl, tr, br, bl] = sub.mesh.corners();
    let mut paths = [c.p1.clone(), c.p2.clone()];
    for p in paths.iter_mut() {
        if p.last() == Some(&tl) || p.last() == Some(&bl) {
            p.reverse();
        }
    }
    let (a, b) = if paths[0][0] == tl {
        (paths[0].clone(), paths[1].clone())
    } else {
        (paths[1].clone(), paths[0].clone())
    };
    if a[0] != tl || a.last() != Some(&br) || b[0] != bl || b.last() != Some(&tr) {
        return input("a cross does not join opposite corners of its subwall");
    }
    Ok((a, b))
}

/// A K_t model grasped by `w` built from the subwalls of `strip` and a
/// cross over the corner cycle of each of the first `t(t-1) - 1` of them.
/// The strip rows above and below the subwalls carry the grid of H¹ and
/// each cross supplies one pair of crossing edges.
pub fn crosses_to_kt(
    g: &Graph,
    w: &Wall,
    strip: &Strip,
    crosses: &[Cross],
    t: usize,
) -> Result<(MinorModel, GraspCert)> {
    if t < 2 {
        return input("t must be at least 2");
    }
    let n = t * (t - 1);
    if crosses.len() < n || strip.subwalls.len() < n {
        return input(format!(
            "{} crosses over {} subwalls; {n} are needed",
            crosses.len(),
            strip.subwalls.len()
        ));
    }
    let m = &w.mesh;
    let big = w.size();
    let half = n / 2;
    let ((r0, r1), _) = strip.ranges[0];
    if strip.ranges.iter().any(|&(rows, _)| rows != (r0, r1)) {
        return input("the subwalls of a strip share their rows");
    }
    if r0 < half || r1 + half >= big {
        return capacity(format!(
            "the crossing construction needs {half} wall rows above and below the subwalls"
        ));
    }
    let c: Vec<usize> = strip.ranges[..n - 1]
        .iter()
        .map(|&(_, cols)| cols.0)
        .collect();
    let s = r1 - r0 + 1;
    let free = c.windows(2).all(|p| p[1] > p[0] + s);
    if c[0] == 0 || !free || c[n - 2] + s >= big {
        return capacity("the crossing construction needs a free column beside every subwall");
    }
    // H¹ column a spans wall columns lo[a]..lo[a+1]; mid[a] crosses the strip
    let mut lo = vec![0];
    lo.extend(c.iter().map(|&x| x + 1));
    let mut mid: Vec<usize> = c.iter().map(|&x| x - 1).collect();
    mid.push(c[n - 2] + s);
    let row = |b: usize| {
        if b <= half {
            r0 - half + b - 1
        } else {
            r1 + b - half
        }
    };

    let mut sets: BTreeMap<Coord, VertexSet> = BTreeMap::new();
    for b in 1..=n {
        let i = row(b);
        let p = &m.horizontal[i];
        let start = |a: usize| {
            m.meet(i, lo[a - 1])
                .into_iter()
                .map(|v| pos(p, v))
                .min()
                .unwrap()
        };
        for a in 1..=n {
            let from = start(a);
            let to = if a == n { p.len() } else { start(a + 1) };
            let set = sets.entry((a, b)).or_default();
            set.extend(p[from..to].iter().copied());
            if b < n {
                let j = if b == half { mid[a - 1] } else { lo[a - 1] };
                set.extend(vertical_piece(m, j, i, row(b + 1)));
            }
        }
    }
    for a in 1..n {
        let sub = &strip.subwalls[a - 1];
        let (p1, p2) = orient(sub, &crosses[a - 1])?;
        let [tl, tr, br, bl] = sub.mesh.corners();
        let (left, right) = (c[a - 1], c[a - 1] + s - 1);
        let (up, down) = (row(half), row(half + 1));
        let mut put = |key: Coord, vs: Vec<VertexId>| sets.get_mut(&key).unwrap().extend(vs);
        put((a, half), connector(m, left, up, tl, true));
        put((a, half), p1[..p1.len() - 1].to_vec());
        put((a + 1, half + 1), connector(m, right, down, br, false));
        put((a + 1, half + 1), vec![br]);
        put((a, half + 1), connector(m, left, down, bl, false));
        put((a, half + 1), p2[..p2.len() - 1].to_vec());
        put((a + 1, half), connector(m, right, up, tr, true));
        put((a + 1, half), vec![tr]);
    }

    let (h1, hmodel, _) = h1_kt_model(t)?;
    let branch_sets: Vec<VertexSet> = hmodel
        .branch_sets
        .iter()
        .map(|hs| {
            hs.iter()
                .flat_map(|&v| sets[&h1.coord(v)].iter().copied())
                .collect()
        })
        .collect();
    let model = MinorModel::with_witnesses(branch_sets, g);
    let grasp = grasp_cert(m, &model);
    if let Some(d) = model_defect(g, &model, t, Some((m, &grasp))) {
        return internal(format!("model assembled from crosses: {d}"));
    }
    Ok((model, grasp))
}
