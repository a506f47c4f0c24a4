//! Separations that cut a drawable disk around a cycle of a wall-like
//! subgraph.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::drawing::{check_cycle, disk_drawing, faces};
use super::reduce::a_side;
use super::{
    cyclic_eq, reduce_fully, replay_reduction_sequence, validate_drawing, PlaneDrawing,
    ReductionSequence,
};
use crate::error::{input, internal, Error, Result};
use crate::graph::{Graph, Path, Separation, Subgraph, VertexId, VertexSet};

/// Where the boundary of a reduction step ended up during the backward pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlacementCase {
    /// X∩Y ⊆ B′: B grows by Y and the step joins the disk-side sequence.
    InB,
    /// X∩Y ⊆ A′: A grows by Y, B only by the cycle vertices in Y.
    InA,
    /// As `InA`, with a subpath of D through Y∖X inserted into the boundary.
    InASubpath,
}

#[derive(Clone, Debug)]
pub struct FlatSeparation {
    pub separation: Separation,
    /// A∩B in the cyclic order of D.
    pub boundary: Vec<VertexId>,
    /// An A∩B-reduction sequence of G[B].
    pub sequence: ReductionSequence,
    /// The reduced G[B] drawn in a disk with `boundary` on its rim.
    pub reduced: Graph,
    pub drawing: PlaneDrawing,
    /// One entry per step of the input sequence.
    pub cases: Vec<PlacementCase>,
    /// Set when the sequence carried through the backward pass did not
    /// replay on G[B] and a fresh maximal one was computed instead.
    pub rebuilt: bool,
}

fn check_hypotheses(
    g: &Graph,
    w: &Subgraph,
    d: &[VertexId],
    c: &[VertexId],
    paths: &[Path; 4],
) -> Result<()> {
    if !w.is_subgraph_of(g) {
        return input("W is not a subgraph of G");
    }
    check_cycle(g, c)?;
    let wg = g.subgraph(w);
    check_cycle(&wg, d).map_err(|e| Error::Input(format!("D is not a cycle of W: {e}")))?;
    let on_d: VertexSet = d.iter().copied().collect();
    let rest: VertexSet = w.vertices.difference(&on_d).copied().collect();
    if !wg.induces_connected(&rest) {
        return input("W − V(D) is not connected");
    }
    let on_c: VertexSet = c.iter().copied().collect();
    let mut used = VertexSet::new();
    let mut ends = VertexSet::new();
    for p in paths {
        if p.len() < 2 || !g.is_path(p) {
            return input("a linking path is not a path of G");
        }
        if !rest.contains(&p[0]) || !on_c.contains(p.last().unwrap()) {
            return input("a linking path must run from V(W)∖V(D) to V(C)");
        }
        if !ends.insert(*p.last().unwrap()) {
            return input("the linking paths need distinct ends on C");
        }
        for &v in &p[1..p.len() - 1] {
            if !used.insert(v) {
                return input("the linking paths are not internally disjoint");
            }
        }
        let hits: Vec<usize> = (0..p.len()).filter(|&i| on_d.contains(&p[i])).collect();
        if hits.is_empty() || hits.last().unwrap() - hits[0] + 1 != hits.len() {
            return input("a linking path does not meet D in a path");
        }
    }
    let starts: Vec<VertexId> = paths.iter().map(|p| p[0]).collect();
    if paths.iter().any(|p| {
        p[1..].iter().any(|v| starts.contains(v))
            || p[1..p.len() - 1].iter().any(|v| ends.contains(v))
    }) {
        return input("the linking paths are not internally disjoint");
    }
    Ok(())
}

/// The base separation of a drawn graph: faces reachable from the outer
/// face without crossing an edge joining two vertices of D lie on the A
/// side, the rest on the B side.
fn base_separation(j: &Graph, drawing: &PlaneDrawing, d: &[VertexId]) -> Result<Separation> {
    let on_d: VertexSet = d.iter().copied().collect();
    let fs = faces(&drawing.rotation);
    let mut owner: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (i, f) in fs.iter().enumerate() {
        if f.len() < 2 && j.neighbors(f[0]).is_empty() {
            continue;
        }
        for k in 0..f.len() {
            owner.insert((f[k], f[(k + 1) % f.len()]), i);
        }
    }
    let Some(outer) = fs.iter().position(|f| cyclic_eq(f, &drawing.outer)) else {
        return internal("no face matches the outer cycle");
    };
    let mut reached = vec![false; fs.len()];
    reached[outer] = true;
    let mut queue = VecDeque::from([outer]);
    while let Some(i) = queue.pop_front() {
        let f = &fs[i];
        for k in 0..f.len() {
            let (u, v) = (f[k], f[(k + 1) % f.len()]);
            if on_d.contains(&u) && on_d.contains(&v) {
                continue;
            }
            if let Some(&o) = owner.get(&(v, u)) {
                if !reached[o] {
                    reached[o] = true;
                    queue.push_back(o);
                }
            }
        }
    }
    let mut a = VertexSet::new();
    let mut b = VertexSet::new();
    let main: VertexSet = j
        .components()
        .into_iter()
        .find(|comp| comp.contains(&drawing.outer[0]))
        .unwrap_or_default();
    for (i, f) in fs.iter().enumerate() {
        if !main.contains(&f[0]) {
            continue;
        }
        if reached[i] {
            a.extend(f.iter().copied());
        } else {
            b.extend(f.iter().copied());
        }
    }
    a.extend(j.vertices().filter(|v| !main.contains(v)));
    Ok(Separation { a, b })
}

/// A separation (A, B) of `g` with A∩B ⊆ V(D), V(W) ⊆ B and V(C) ⊆ A,
/// together with a reduction of G[B] drawn in a disk with A∩B on the rim
/// in the order of D. `seq` must be a C-reduction sequence whose result
/// is drawn by `drawing` with C outside; `paths` are the four linking
/// paths from W − V(D) to C.
pub fn flat_separation(
    g: &Graph,
    w: &Subgraph,
    d: &[VertexId],
    c: &[VertexId],
    paths: &[Path; 4],
    seq: &ReductionSequence,
    drawing: &PlaneDrawing,
) -> Result<FlatSeparation> {
    check_hypotheses(g, w, d, c, paths)?;
    let on_c: VertexSet = c.iter().copied().collect();
    let (j, _) = replay_reduction_sequence(g, &on_c, seq)
        .map_err(|e| Error::Input(format!("the reduction sequence does not replay: {e}")))?;
    validate_drawing(&j, drawing)
        .map_err(|e| Error::Input(format!("the drawing does not fit the reduced graph: {e}")))?;
    if !cyclic_eq(&drawing.outer, c) {
        return input("the drawing's outer face is not C");
    }

    // forward: the graphs G_i, separations (X_i, Y_i), and D_i
    let mut graphs = vec![g.simplified()];
    let mut seps = Vec::new();
    let mut ds = vec![d.to_vec()];
    for y in &seq.steps {
        let cur = graphs.last().unwrap();
        let sep = Separation {
            a: a_side(cur, y, &on_c),
            b: y.clone(),
        };
        let mut next = cur.induced(&sep.a);
        let bd: Vec<VertexId> = sep.boundary().into_iter().collect();
        for i in 0..bd.len() {
            for k in i + 1..bd.len() {
                if !next.adjacent(bd[i], bd[k]) {
                    next.add_edge(bd[i], bd[k]);
                }
            }
        }
        let dn: Vec<VertexId> = ds
            .last()
            .unwrap()
            .iter()
            .copied()
            .filter(|v| sep.a.contains(v))
            .collect();
        if dn.len() < 3 {
            return input("a reduction step swallows the cycle D");
        }
        ds.push(dn);
        seps.push(sep);
        graphs.push(next);
    }

    let k = seq.steps.len();
    let mut cur = base_separation(&graphs[k], drawing, &ds[k])?;
    let w_left: VertexSet = w
        .vertices
        .intersection(&graphs[k].vertex_set())
        .copied()
        .collect();
    if !w_left.is_subset(&cur.b) {
        return input("W is not drawn inside D; the linking paths do not hold");
    }
    let mut b_steps: Vec<VertexSet> = Vec::new();
    let mut cases = vec![PlacementCase::InB; k];
    for i in (0..k).rev() {
        let (x, y) = (&seps[i].a, &seps[i].b);
        let xy = seps[i].boundary();
        let d_prev: VertexSet = ds[i].iter().copied().collect();
        if xy.is_subset(&cur.b) {
            cur.b.extend(y.iter().copied());
            b_steps.push(y.clone());
        } else {
            let inserted = xy.intersection(&cur.b).count() == 2
                && d_prev.iter().any(|v| y.contains(v) && !x.contains(v));
            cases[i] = if inserted {
                PlacementCase::InASubpath
            } else {
                PlacementCase::InA
            };
            cur.a.extend(y.iter().copied());
            cur.b.extend(y.intersection(&d_prev).copied());
        }
        if let Err(e) = cur.check(&graphs[i]) {
            return internal(format!("backward step {} broke the separation: {e}", i + 1));
        }
    }
    b_steps.reverse();

    let bd = cur.boundary();
    let full_d: VertexSet = d.iter().copied().collect();
    if !bd.is_subset(&full_d) || !w.vertices.is_subset(&cur.b) || !on_c.is_subset(&cur.a) {
        return internal("the separation misses one of its guarantees");
    }
    let boundary: Vec<VertexId> = d.iter().copied().filter(|v| bd.contains(v)).collect();
    let gb = g.induced(&cur.b);
    let carried = ReductionSequence { steps: b_steps };
    let attempt =
        |s: ReductionSequence| -> Result<Option<(ReductionSequence, Graph, PlaneDrawing)>> {
            let Ok((reduced, _)) = replay_reduction_sequence(&gb, &bd, &s) else {
                return Ok(None);
            };
            Ok(disk_drawing(&reduced, &boundary)?.map(|dr| (s, reduced, dr)))
        };
    let (found, rebuilt) = match attempt(carried)? {
        Some(f) => (f, false),
        None => {
            let (_, fresh, _) = reduce_fully(&gb, &bd);
            match attempt(fresh)? {
                Some(f) => (f, true),
                None => return internal("G[B] has no reduction drawable in the disk"),
            }
        }
    };
    let (sequence, reduced, drawing) = found;
    Ok(FlatSeparation {
        separation: cur,
        boundary,
        sequence,
        reduced,
        drawing,
        cases,
        rebuilt,
    })
}
