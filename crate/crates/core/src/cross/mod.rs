//! Crosses over a cycle, reductions along separations of order at most
//! three, plane drawings, and flat separations around a cycle.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Path, VertexId, VertexSet};

pub mod drawing;
mod flatsep;
mod reduce;
mod solve;
mod tripod;

pub use drawing::{
    cyclic_eq, disk_drawing, faces, planar_with_face, plane_embedding, validate_disk,
    validate_drawing, PlaneDrawing, Rotation,
};
pub use flatsep::{flat_separation, FlatSeparation, PlacementCase};
pub use reduce::{
    elementary_reduction, is_optimal, optimalize, reduce_fully, replay_reduction_sequence,
    ReductionSequence, StepReport,
};
pub use solve::{
    find_cross_or_reduce, lift_cross, split_on_path, stable_c_path, CrossOutcome, Side, Split,
};

/// Two disjoint paths `s1..t1` and `s2..t2` whose ends appear on the cycle
/// in the order s1, s2, t1, t2 and whose interiors avoid the cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cross {
    pub p1: Path,
    pub p2: Path,
}

/// Two paths from `v` and three from `u`, as in a K_{2,3} subdivision hung
/// on the cycle by the first three paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tripod {
    pub v: VertexId,
    pub u: VertexId,
    /// Paths from `v` to the cycle.
    pub legs: [Path; 3],
    /// Paths from `u` to a vertex of the matching leg.
    pub feet: [Path; 3],
}

pub(crate) fn positions(c: &[VertexId]) -> BTreeMap<VertexId, usize> {
    c.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

impl Cross {
    /// Orients two paths so their ends read s1, s2, t1, t2 along `c`; `None`
    /// unless the ends are distinct cycle vertices that alternate.
    pub fn oriented(c: &[VertexId], a: Path, b: Path) -> Option<Cross> {
        let pos = positions(c);
        let ends = |p: &Path| Some((*pos.get(&p[0])?, *pos.get(p.last()?)?));
        let (a0, a1) = ends(&a)?;
        let (b0, b1) = ends(&b)?;
        let (mut a, mut b) = (a, b);
        let (mut lo_a, mut hi_a) = (a0, a1);
        if a0 > a1 {
            a.reverse();
            (lo_a, hi_a) = (a1, a0);
        }
        let inside = |x: usize| lo_a < x && x < hi_a;
        if inside(b0) == inside(b1) || [b0, b1].contains(&lo_a) || [b0, b1].contains(&hi_a) {
            return None;
        }
        if !inside(b0) {
            b.reverse();
        }
        Some(Cross { p1: a, p2: b })
    }
}

/// Checks the cross conditions in `g` relative to the cycle `c`.
pub fn check_cross(g: &Graph, c: &[VertexId], x: &Cross) -> Result<()> {
    let bad = |m: &str| Err(Error::Validation(m.to_string()));
    let on_c: VertexSet = c.iter().copied().collect();
    for p in [&x.p1, &x.p2] {
        if p.len() < 2 || !g.is_path(p) {
            return bad("a cross path is not a path of the graph");
        }
        if p[1..p.len() - 1].iter().any(|v| on_c.contains(v)) {
            return bad("a cross path meets the cycle internally");
        }
    }
    let first: VertexSet = x.p1.iter().copied().collect();
    if x.p2.iter().any(|v| first.contains(v)) {
        return bad("the cross paths intersect");
    }
    match Cross::oriented(c, x.p1.clone(), x.p2.clone()) {
        Some(_) => Ok(()),
        None => bad("the ends do not alternate on the cycle"),
    }
}

/// Checks the tripod conditions in `g` relative to the cycle `c`.
pub fn check_tripod(g: &Graph, c: &[VertexId], t: &Tripod) -> Result<()> {
    let bad = |m: &str| Err(Error::Validation(m.to_string()));
    let on_c: VertexSet = c.iter().copied().collect();
    if on_c.contains(&t.v) || on_c.contains(&t.u) || t.u == t.v {
        return bad("tripod centres must be distinct and off the cycle");
    }
    let mut legs = VertexSet::new();
    for p in &t.legs {
        if p.len() < 2 || p[0] != t.v || !g.is_path(p) {
            return bad("a leg is not a path from v");
        }
        if p[..p.len() - 1].iter().any(|x| on_c.contains(x)) || !on_c.contains(p.last().unwrap()) {
            return bad("a leg must meet the cycle exactly at its far end");
        }
        for &x in &p[1..] {
            if !legs.insert(x) {
                return bad("legs intersect");
            }
        }
    }
    let mut feet = VertexSet::new();
    for (i, q) in t.feet.iter().enumerate() {
        if q.len() < 2 || q[0] != t.u || !g.is_path(q) {
            return bad("a foot is not a path from u");
        }
        let y = *q.last().unwrap();
        if y == t.v || !t.legs[i].contains(&y) {
            return bad("a foot must end on its own leg away from v");
        }
        if q[..q.len() - 1]
            .iter()
            .any(|x| legs.contains(x) || *x == t.v)
        {
            return bad("a foot meets the legs before its end");
        }
        for &x in &q[1..] {
            if !feet.insert(x) {
                return bad("feet intersect");
            }
        }
    }
    Ok(())
}

/// Path from `a` to `b` whose interior is non-empty and lies in `inside`.
pub(crate) fn route_through(
    g: &Graph,
    a: VertexId,
    b: VertexId,
    inside: &VertexSet,
) -> Option<Path> {
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for s in g.neighbors(a) {
        if inside.contains(&s) {
            parent.insert(s, a);
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        if g.adjacent(x, b) {
            let mut path = vec![b, x];
            let mut cur = x;
            while parent[&cur] != a {
                cur = parent[&cur];
                path.push(cur);
            }
            path.push(a);
            path.reverse();
            return Some(path);
        }
        for y in g.neighbors(x) {
            if inside.contains(&y) && !parent.contains_key(&y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}
