//! Recursive cross search along stable cycle paths.

use std::collections::{BTreeMap, BTreeSet};

use super::drawing::{check_cycle, cycle_rotation, faces, mirror};
use super::reduce::maximal_sides;
use super::tripod::cross_from_tripod;
use super::{
    check_cross, cyclic_eq, positions, reduce_fully, replay_reduction_sequence, route_through,
    validate_drawing, Cross, PlaneDrawing, ReductionSequence, Rotation, Tripod,
};
use crate::error::{input, internal, Result};
use crate::graph::{enumerate_bridges, Bridge, Graph, Path, Subgraph, VertexId, VertexSet};

#[derive(Clone, Debug)]
pub enum CrossOutcome {
    Cross(Cross),
    /// An optimal reduction sequence, the graph it yields, and a drawing of
    /// that graph with the cycle bounding the outer face.
    Drawing {
        sequence: ReductionSequence,
        reduced: Graph,
        drawing: PlaneDrawing,
    },
}

/// One of the two graphs obtained by cutting along a cycle path.
#[derive(Clone, Debug)]
pub struct Side {
    pub cycle: Vec<VertexId>,
    pub graph: Graph,
}

#[derive(Clone, Debug)]
pub enum Split {
    Sides(Box<[Side; 2]>),
    /// A bridge joins both arcs, so the path and that bridge cross.
    Jump(Cross),
}

enum Solved {
    Cross(Cross),
    Drawn(Rotation),
}

fn path_bridges(g: &Graph, c: &[VertexId], p: &Path) -> Result<Vec<Bridge>> {
    let mut closed = c.to_vec();
    closed.push(c[0]);
    enumerate_bridges(g, &Subgraph::from_paths(g, [&closed, p])?)
}

fn first_path(g: &Graph, c: &[VertexId], on_c: &VertexSet) -> Option<Path> {
    let n = c.len();
    let pos = positions(c);
    for (i, &a) in c.iter().enumerate() {
        for w in g.neighbors(a) {
            if let Some(&j) = pos.get(&w) {
                if (i + 1) % n != j && (j + 1) % n != i {
                    return Some(vec![a, w]);
                }
                continue;
            }
            let mut rest = on_c.clone();
            rest.remove(&a);
            if let Some(q) = g.bfs_path(&[w].into(), &rest, |v| !on_c.contains(&v)) {
                let mut p = vec![a];
                p.extend(q);
                return Some(p);
            }
        }
    }
    None
}

/// Improves a cycle path until every bridge of C ∪ P has an attachment
/// off P. Each round reroutes P through a bridge that straddles the
/// attachment of a bridge leaving the first straddled run.
fn stable_unchecked(g: &Graph, c: &[VertexId]) -> Result<Path> {
    let on_c: VertexSet = c.iter().copied().collect();
    let Some(mut p) = first_path(g, c, &on_c) else {
        return internal("the graph has no path between cycle vertices");
    };
    let mut seen = BTreeSet::new();
    loop {
        if !seen.insert(p.clone()) {
            return internal("path improvement returned to an earlier path");
        }
        let bridges = path_bridges(g, c, &p)?;
        let pos: BTreeMap<VertexId, usize> = positions(&p);
        let unstable: Vec<(&Bridge, usize, usize)> = bridges
            .iter()
            .filter(|b| b.attachments.iter().all(|a| pos.contains_key(a)))
            .map(|b| {
                let ks = b.attachments.iter().map(|a| pos[a]);
                (b, ks.clone().min().unwrap(), ks.max().unwrap())
            })
            .collect();
        if unstable.is_empty() {
            return Ok(p);
        }
        let straddled = |k: usize| unstable.iter().any(|&(_, lo, hi)| lo < k && k < hi);
        let Some(i) = (1..p.len() - 1).find(|&k| straddled(k)) else {
            return internal("an unstable bridge straddles nothing");
        };
        let mut j = i;
        while j + 2 < p.len() && straddled(j + 1) {
            j += 1;
        }
        let in_run = |k: usize| i <= k && k <= j;
        let Some(x) = bridges.iter().find_map(|b| {
            let leaves = b
                .attachments
                .iter()
                .any(|a| pos.get(a).is_none_or(|&k| k + 1 < i || k > j + 1));
            let inner = b
                .attachments
                .iter()
                .filter_map(|a| pos.get(a))
                .find(|&&k| in_run(k));
            inner.filter(|_| leaves).copied()
        }) else {
            return internal(format!("no bridge leaves the straddled run at {}", p[i]));
        };
        let Some(&(d, lo, hi)) = unstable.iter().find(|&&(_, lo, hi)| lo < x && x < hi) else {
            return internal("run vertex not straddled");
        };
        let detour = if d.is_trivial() {
            vec![p[lo], p[hi]]
        } else {
            match route_through(g, p[lo], p[hi], &d.interior) {
                Some(r) => r,
                None => return internal("bridge interior does not join its attachments"),
            }
        };
        let mut q = p[..lo].to_vec();
        q.extend(detour);
        q.extend_from_slice(&p[hi + 1..]);
        p = q;
    }
}

/// A cycle path P such that every bridge of C ∪ P attaches off P. The
/// graph must be simple, differ from C, and admit no elementary reduction.
pub fn stable_c_path(g: &Graph, c: &[VertexId]) -> Result<Path> {
    check_cycle(g, c)?;
    if !g.is_simple() {
        return input("the graph must be simple");
    }
    if g.n() == c.len() && g.m() == c.len() {
        return input("the graph is the cycle itself");
    }
    let x: VertexSet = c.iter().copied().collect();
    if let Some((w, _)) = maximal_sides(g, &x, &mut VertexSet::new()).first() {
        return input(format!("vertex {w} lies behind an elementary reduction"));
    }
    stable_unchecked(g, c)
}

/// Cuts along the path `p` between two cycle vertices. Side 0 holds P
/// followed by the arc from its last vertex back to its first.
pub fn split_on_path(g: &Graph, c: &[VertexId], p: &Path) -> Result<Split> {
    let n = c.len();
    let pos = positions(c);
    let (Some(&i0), Some(&i1)) = (pos.get(&p[0]), pos.get(p.last().unwrap())) else {
        return input("the path must start and end on the cycle");
    };
    let arc = |from: usize, to: usize| {
        let mut out = Vec::new();
        let mut k = (from + 1) % n;
        while k != to {
            out.push(c[k]);
            k = (k + 1) % n;
        }
        out
    };
    let arcs = [arc(i1, i0), arc(i0, i1)];
    let mut cycles = [p.clone(), p.iter().rev().copied().collect::<Path>()];
    cycles[0].extend(&arcs[0]);
    cycles[1].extend(&arcs[1]);
    let mut subs = Vec::new();
    for cyc in &cycles {
        let mut closed = cyc.clone();
        closed.push(cyc[0]);
        subs.push(Subgraph::from_paths(g, [&closed])?);
    }
    let arc_sets: [VertexSet; 2] = arcs.map(|a| a.into_iter().collect());
    for b in path_bridges(g, c, p)? {
        let hits = arc_sets
            .clone()
            .map(|s| b.attachments.iter().copied().find(|a| s.contains(a)));
        let side = match hits {
            [Some(a1), Some(a2)] => {
                let q = if b.is_trivial() {
                    vec![a1, a2]
                } else {
                    match route_through(g, a1, a2, &b.interior) {
                        Some(q) => q,
                        None => return internal("bridge interior does not join its attachments"),
                    }
                };
                return match Cross::oriented(c, p.clone(), q) {
                    Some(x) => Ok(Split::Jump(x)),
                    None => internal("jumping bridge does not cross the path"),
                };
            }
            [Some(_), None] => 0,
            [None, Some(_)] => 1,
            [None, None] => return input("the path is not stable"),
        };
        subs[side].vertices.extend(b.vertices());
        subs[side].edges.extend(b.edges.iter().copied());
    }
    let [c0, c1] = cycles;
    Ok(Split::Sides(Box::new([
        Side {
            graph: g.subgraph(&subs[0]),
            cycle: c0,
        },
        Side {
            graph: g.subgraph(&subs[1]),
            cycle: c1,
        },
    ])))
}

fn solve(g: &Graph, c: &[VertexId]) -> Result<Solved> {
    if g.n() == c.len() && g.m() == c.len() {
        return Ok(Solved::Drawn(cycle_rotation(c)));
    }
    let p = stable_unchecked(g, c)?;
    let sides = match split_on_path(g, c, &p)? {
        Split::Jump(x) => return Ok(Solved::Cross(x)),
        Split::Sides(s) => s,
    };
    let mut rots = Vec::new();
    for side in sides.iter() {
        match solve(&side.graph, &side.cycle)? {
            Solved::Cross(q) => return lift_unchecked(g, c, &p, side, q).map(Solved::Cross),
            Solved::Drawn(r) => rots.push(r),
        }
    }
    glue(g, c, &p, &sides, &rots[0], &rots[1]).map(Solved::Drawn)
}

fn around(walk: &[VertexId], v: VertexId) -> Option<(VertexId, VertexId)> {
    let n = walk.len();
    let i = walk.iter().position(|&x| x == v)?;
    Some((walk[(i + n - 1) % n], walk[(i + 1) % n]))
}

/// Inserts the rotation of side 1 at each vertex of P into the outer angle
/// of side 0 and merges the shared path edges.
fn try_glue(
    p: &Path,
    r1: &Rotation,
    w1: &[VertexId],
    r2: &Rotation,
    w2: &[VertexId],
) -> Option<Rotation> {
    let mut rot = r1.clone();
    for (v, l) in r2 {
        rot.entry(*v).or_insert_with(|| l.clone());
    }
    for &v in p {
        let (prev1, next1) = around(w1, v)?;
        let (_, next2) = around(w2, v)?;
        let (l1, l2) = (&r1[&v], &r2[&v]);
        let k = l1.iter().position(|&x| x == prev1)?;
        if l1[(k + 1) % l1.len()] != next1 {
            return None;
        }
        let s = l2.iter().position(|&x| x == next2)?;
        let mut merged = l1[..=k].to_vec();
        merged.extend((0..l2.len()).map(|i| l2[(s + i) % l2.len()]));
        merged.extend_from_slice(&l1[k + 1..]);
        let m = merged.len();
        let out: Vec<VertexId> = (0..m)
            .filter(|&i| merged[i] != merged[(i + 1) % m])
            .map(|i| merged[i])
            .collect();
        if out.iter().collect::<BTreeSet<_>>().len() != out.len() {
            return None;
        }
        rot.insert(v, out);
    }
    Some(rot)
}

fn glue(
    g: &Graph,
    c: &[VertexId],
    p: &Path,
    sides: &[Side; 2],
    r1: &Rotation,
    r2: &Rotation,
) -> Result<Rotation> {
    let walks = |r: &Rotation, cyc: &[VertexId]| -> Vec<Vec<VertexId>> {
        faces(r).into_iter().filter(|f| cyclic_eq(f, cyc)).collect()
    };
    for w1 in walks(r1, &sides[0].cycle) {
        for r2v in [r2.clone(), mirror(r2)] {
            for w2 in walks(&r2v, &sides[1].cycle) {
                let Some(rot) = try_glue(p, r1, &w1, &r2v, &w2) else {
                    continue;
                };
                let d = PlaneDrawing {
                    rotation: rot,
                    outer: c.to_vec(),
                };
                if validate_drawing(g, &d).is_ok() {
                    return Ok(d.rotation);
                }
            }
        }
    }
    internal("the drawings of the two sides do not combine")
}

/// Extends cross ends lying inside P along P to its ends.
fn extend(g: &Graph, c: &[VertexId], p: &Path, a: Path, b: Path) -> Result<Cross> {
    let pos = positions(p);
    let last = p.len() - 1;
    let mut paths = [a, b];
    let ends: VertexSet = paths
        .iter()
        .flat_map(|q| [q[0], *q.last().unwrap()])
        .collect();
    let mut inner = Vec::new();
    for (w, q) in paths.iter().enumerate() {
        for front in [true, false] {
            let v = if front { q[0] } else { *q.last().unwrap() };
            if let Some(&k) = pos.get(&v) {
                if 0 < k && k < last {
                    inner.push((w, front, k));
                }
            }
        }
    }
    let toward_start: Vec<bool> = match inner.len() {
        0 => vec![],
        1 => vec![!ends.contains(&p[0])],
        2 => vec![inner[0].2 < inner[1].2, inner[1].2 < inner[0].2],
        _ => return internal("too many cross ends inside the path"),
    };
    for (&(w, front, k), &down) in inner.iter().zip(&toward_start) {
        let seg: Path = if down {
            p[..k].iter().rev().copied().collect()
        } else {
            p[k + 1..].to_vec()
        };
        let q = &mut paths[w];
        if front {
            let mut grown: Path = seg.into_iter().rev().collect();
            grown.extend(q.iter());
            *q = grown;
        } else {
            q.extend(seg);
        }
    }
    let [a, b] = paths;
    let Some(x) = Cross::oriented(c, a, b) else {
        return internal("extended cross does not alternate");
    };
    check_cross(g, c, &x).or_else(|e| internal(format!("extended cross is invalid: {e}")))?;
    Ok(x)
}

/// Replaces the part of `hit` on one side of `r[0]` by `r`, keeping a
/// cross of the side graph.
fn reroute(side: &Side, hit: &Path, other: &Path, r: &Path) -> Option<(Path, Path)> {
    let k = hit.iter().position(|&v| v == r[0])?;
    let mut keep_front = hit[..=k].to_vec();
    keep_front.extend_from_slice(&r[1..]);
    let mut keep_back: Path = hit[k..].iter().rev().copied().collect();
    keep_back.extend_from_slice(&r[1..]);
    [keep_front, keep_back].into_iter().find_map(|cand| {
        let x = Cross {
            p1: cand.clone(),
            p2: other.clone(),
        };
        check_cross(&side.graph, &side.cycle, &x)
            .ok()
            .map(|_| (cand, other.clone()))
    })
}

fn interior(q: &Path) -> VertexSet {
    q[1..q.len() - 1].iter().copied().collect()
}

enum Step {
    Pair(Path, Path),
    Done(Cross),
}

fn three_ends(g: &Graph, c: &[VertexId], side: &Side, p: &Path, a: Path, b: Path) -> Result<Step> {
    let pos = positions(p);
    let both = |q: &Path| pos.contains_key(&q[0]) && pos.contains_key(q.last().unwrap());
    let (mut q1, mut q2) = if both(&a) { (a, b) } else { (b, a) };
    if pos[&q1[0]] > pos[q1.last().unwrap()] {
        q1.reverse();
    }
    if !pos.contains_key(&q2[0]) {
        q2.reverse();
    }
    let ci: VertexSet = side.cycle.iter().copied().collect();
    let mut blocked: VertexSet = p.iter().chain(&q1).copied().collect();
    blocked.extend(&ci);
    let to: VertexSet = ci
        .iter()
        .filter(|v| !pos.contains_key(v))
        .copied()
        .collect();
    let Some(r) = side
        .graph
        .bfs_path(&interior(&q1), &to, |v| !blocked.contains(&v))
    else {
        return internal("no path from the cross back to the cycle");
    };
    let q2set: VertexSet = q2.iter().copied().collect();
    let Some(k) = r.iter().position(|v| q2set.contains(v)) else {
        return match reroute(side, &q1, &q2, &r) {
            Some((x, y)) => Ok(Step::Pair(x, y)),
            None => internal("rerouting the cross failed"),
        };
    };
    let (v, bv) = (r[0], r[k]);
    let ia = q1.iter().position(|&x| x == v).unwrap();
    let ib = q2.iter().position(|&x| x == bv).unwrap();
    let (ps1, ps2, pt1) = (pos[&q1[0]], pos[&q2[0]], pos[q1.last().unwrap()]);
    let mut leg1: Path = q1[..=ia].iter().rev().copied().collect();
    leg1.extend(p[..ps1].iter().rev());
    let mut leg2 = q1[ia..].to_vec();
    leg2.extend_from_slice(&p[pt1 + 1..]);
    let mut leg3 = r[..=k].to_vec();
    leg3.extend_from_slice(&q2[ib + 1..]);
    let t = Tripod {
        v,
        u: q2[0],
        legs: [leg1, leg2, leg3],
        feet: [
            p[ps1..=ps2].iter().rev().copied().collect(),
            p[ps2..=pt1].to_vec(),
            q2[..=ib].to_vec(),
        ],
    };
    cross_from_tripod(g, c, &t).map(Step::Done)
}

fn lift_unchecked(g: &Graph, c: &[VertexId], p: &Path, side: &Side, q: Cross) -> Result<Cross> {
    let on_p: VertexSet = p.iter().copied().collect();
    let (mut a, mut b) = (q.p1, q.p2);
    for _ in 0..3 {
        let count = [a[0], *a.last().unwrap(), b[0], *b.last().unwrap()]
            .iter()
            .filter(|v| on_p.contains(v))
            .count();
        match count {
            0..=2 => return extend(g, c, p, a, b),
            3 => match three_ends(g, c, side, p, a, b)? {
                Step::Pair(x, y) => (a, b) = (x, y),
                Step::Done(x) => return Ok(x),
            },
            _ => {
                let ci: VertexSet = side.cycle.iter().copied().collect();
                let mut blocked: VertexSet = ci.iter().chain(&a).chain(&b).copied().collect();
                blocked.extend(&on_p);
                let to: VertexSet = ci.difference(&on_p).copied().collect();
                let from: VertexSet = interior(&a).union(&interior(&b)).copied().collect();
                let Some(r) = side.graph.bfs_path(&from, &to, |v| !blocked.contains(&v)) else {
                    return internal("no path from the cross back to the cycle");
                };
                let step = if a.contains(&r[0]) {
                    reroute(side, &a, &b, &r)
                } else {
                    reroute(side, &b, &a, &r)
                };
                let Some(pair) = step else {
                    return internal("rerouting the cross failed");
                };
                (a, b) = pair;
            }
        }
    }
    internal("lifting the cross did not settle")
}

/// Turns a cross of one side of the split along `p` into a cross of `g`.
pub fn lift_cross(g: &Graph, c: &[VertexId], p: &Path, side: usize, q: &Cross) -> Result<Cross> {
    check_cycle(g, c)?;
    let sides = match split_on_path(g, c, p)? {
        Split::Jump(_) => return input("a bridge jumps the path"),
        Split::Sides(s) => s,
    };
    let Some(s) = sides.get(side) else {
        return input("side must be 0 or 1");
    };
    check_cross(&s.graph, &s.cycle, q)
        .or_else(|e| input(format!("not a cross of the side: {e}")))?;
    lift_unchecked(g, c, p, s, q.clone())
}

/// Maps a cross of the reduced graph back through the reductions, routing
/// each added clique edge through the part it replaced.
fn map_back(parts: &[(Graph, VertexSet)], x: Cross) -> Result<Cross> {
    let mut paths = [x.p1, x.p2];
    for (sub, bd) in parts.iter().rev() {
        let inside: VertexSet = sub.vertices().filter(|v| !bd.contains(v)).collect();
        for q in paths.iter_mut() {
            let fake = q
                .windows(2)
                .any(|w| bd.contains(&w[0]) && bd.contains(&w[1]) && !sub.adjacent(w[0], w[1]));
            if !fake {
                continue;
            }
            let i0 = q.iter().position(|v| bd.contains(v)).unwrap();
            let i1 = q.iter().rposition(|v| bd.contains(v)).unwrap();
            let Some(r) = route_through(sub, q[i0], q[i1], &inside) else {
                return internal("a reduced part does not join its boundary");
            };
            let mut out = q[..i0].to_vec();
            out.extend(r);
            out.extend_from_slice(&q[i1 + 1..]);
            *q = out;
        }
    }
    let [p1, p2] = paths;
    Ok(Cross { p1, p2 })
}

/// A cross over `c`, or an optimal reduction sequence whose result can be
/// drawn with `c` bounding the outer face.
pub fn find_cross_or_reduce(g: &Graph, c: &[VertexId]) -> Result<CrossOutcome> {
    check_cycle(g, c)?;
    let x: VertexSet = c.iter().copied().collect();
    let (j, sequence, parts) = reduce_fully(g, &x);
    match solve(&j, c)? {
        Solved::Cross(cr) => {
            let cr = map_back(&parts, cr)?;
            check_cross(g, c, &cr)
                .or_else(|e| internal(format!("mapped cross is invalid: {e}")))?;
            Ok(CrossOutcome::Cross(cr))
        }
        Solved::Drawn(rotation) => {
            let (reduced, _) = replay_reduction_sequence(g, &x, &sequence)?;
            let drawing = PlaneDrawing {
                rotation,
                outer: c.to_vec(),
            };
            validate_drawing(&reduced, &drawing)
                .or_else(|e| internal(format!("drawing of the reduced graph is invalid: {e}")))?;
            Ok(CrossOutcome::Drawing {
                sequence,
                reduced,
                drawing,
            })
        }
    }
}
