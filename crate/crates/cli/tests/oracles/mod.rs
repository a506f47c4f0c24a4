//! Brute-force oracles for the acceptance run.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use flatwall_core::dispersed::{BlockerCert, Mode};
use flatwall_core::graph::{Graph, Separation, Subgraph, VertexId, VertexSet};
use flatwall_core::wall::{Coord, GridContraction};

/// Whether `to` is adjacent to some vertex reachable from `from` through
/// vertices satisfying `inside`.
fn joins(g: &Graph, from: VertexId, to: VertexId, inside: impl Fn(VertexId) -> bool) -> bool {
    let mut seen = VertexSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if y == to {
                return true;
            }
            if inside(y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    false
}

/// Two disjoint paths with alternating ends on `c` and interiors off `c`.
/// For every set S of off-cycle vertices: can the first path live in S
/// and the second outside it.
pub fn has_cross(g: &Graph, c: &[VertexId]) -> bool {
    let on_c: VertexSet = c.iter().copied().collect();
    let off: Vec<VertexId> = g.vertices().filter(|v| !on_c.contains(v)).collect();
    assert!(
        off.len() < 20,
        "oracle is exponential in the off-cycle vertices"
    );
    let l = c.len();
    for q0 in 0..l {
        for q1 in q0 + 1..l {
            for q2 in q1 + 1..l {
                for q3 in q2 + 1..l {
                    let (a, b, s, t) = (c[q0], c[q1], c[q2], c[q3]);
                    for mask in 0u32..(1 << off.len()) {
                        let in_s: VertexSet = (0..off.len())
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| off[i])
                            .collect();
                        if joins(g, a, s, |v| in_s.contains(&v))
                            && joins(g, b, t, |v| !on_c.contains(&v) && !in_s.contains(&v))
                        {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Largest number of paths from `v` to `x` pairwise sharing only `v`,
/// capped at `cap`: the smallest vertex cut, found by enumeration.
fn fan_size(g: &Graph, v: VertexId, x: &VertexSet, cap: usize) -> usize {
    let others: Vec<VertexId> = g.vertices().filter(|&w| w != v).collect();
    for k in 0..cap {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let cut: VertexSet = idx.iter().map(|&i| others[i]).collect();
            let open = x.iter().any(|&t| {
                !cut.contains(&t) && joins(g, v, t, |w| !cut.contains(&w) && !x.contains(&w))
            });
            if !open {
                return k;
            }
            // next k-subset
            let mut i = k;
            while i > 0 && idx[i - 1] == others.len() - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    cap
}

/// Every separation (A, B) of order at most three with `x` ⊆ A whose far
/// side holds a vertex linked to `x` by as many paths as the order.
pub fn all_reductions(g: &Graph, x: &VertexSet) -> Vec<Separation> {
    let free: Vec<VertexId> = g.vertices().filter(|v| !x.contains(v)).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << free.len()) {
        let inner: VertexSet = (0..free.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| free[i])
            .collect();
        let nbhd: VertexSet = inner
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .filter(|w| !inner.contains(w))
            .collect();
        if nbhd.len() > 3 {
            continue;
        }
        let k = nbhd.len();
        if inner.iter().any(|&v| fan_size(g, v, x, k) >= k) {
            let b: VertexSet = inner.union(&nbhd).copied().collect();
            let a: VertexSet = g.vertices().filter(|v| !inner.contains(v)).collect();
            out.push(Separation { a, b });
        }
    }
    out
}

/// Fewest intersections of a plane curve from `a` to `b` with the drawn
/// `r × s` grid, minus one. Visiting a vertex or crossing an edge costs one.
pub fn curve_distance(a: Coord, b: Coord, r: usize, s: usize) -> usize {
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Node {
        V(usize, usize),
        F(usize, usize),
        Outer,
    }
    let face = |x: isize, y: isize| {
        if x >= 1 && y >= 1 && (x as usize) < r && (y as usize) < s {
            Node::F(x as usize, y as usize)
        } else {
            Node::Outer
        }
    };
    let next = |n: Node| -> Vec<Node> {
        let mut out = Vec::new();
        match n {
            Node::V(x, y) => {
                for (dx, dy) in [(-1, -1), (-1, 0), (0, -1), (0, 0)] {
                    out.push(face(x as isize + dx, y as isize + dy));
                }
            }
            Node::F(x, y) => {
                for (vx, vy) in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
                    out.push(Node::V(vx, vy));
                }
                for (dx, dy) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                    out.push(face(x as isize + dx, y as isize + dy));
                }
            }
            Node::Outer => {
                for x in 1..=r {
                    for y in 1..=s {
                        if x == 1 || y == 1 || x == r || y == s {
                            out.push(Node::V(x, y));
                        }
                        if x < r && y < s && (x == 1 || y == 1 || x == r - 1 || y == s - 1) {
                            out.push(Node::F(x, y));
                        }
                    }
                }
            }
        }
        out
    };
    let goal = Node::V(b.0, b.1);
    let mut dist = BTreeMap::from([(Node::V(a.0, a.1), 1usize)]);
    let mut heap = BinaryHeap::from([Reverse((1usize, Node::V(a.0, a.1)))]);
    while let Some(Reverse((d, n))) = heap.pop() {
        if n == goal {
            return d - 1;
        }
        if dist[&n] < d {
            continue;
        }
        for m in next(n) {
            // entering a vertex, or crossing from face to face, costs one
            let nd = d + usize::from(matches!(m, Node::V(..)) || !matches!(n, Node::V(..)));
            if dist.get(&m).is_none_or(|&x| nd < x) {
                dist.insert(m, nd);
                heap.push(Reverse((nd, m)));
            }
        }
    }
    unreachable!("the grid is connected")
}

/// Ends of every M-path of `g − a`, by depth-first search.
pub fn all_m_path_ends(g: &Graph, m: &Subgraph, a: &VertexSet) -> Vec<(VertexId, VertexId)> {
    fn walk(
        g: &Graph,
        m: &Subgraph,
        a: &VertexSet,
        start: VertexId,
        cur: VertexId,
        seen: &mut VertexSet,
        out: &mut Vec<(VertexId, VertexId)>,
    ) {
        for &(e, w) in g.incident(cur) {
            if w == cur || a.contains(&w) || seen.contains(&w) {
                continue;
            }
            if m.vertices.contains(&w) {
                if cur != start || !m.edges.contains(&e) {
                    out.push((start, w));
                }
                continue;
            }
            seen.insert(w);
            walk(g, m, a, start, w, seen, out);
            seen.remove(&w);
        }
    }
    let mut out = Vec::new();
    for &x in m.vertices.difference(a) {
        walk(g, m, a, x, x, &mut VertexSet::from([x]), &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Whether every listed M-path end pair is short or covered.
pub fn blocker_holds(
    gc: &GridContraction,
    cert: &BlockerCert,
    ends: &[(VertexId, VertexId)],
) -> bool {
    let d = |u, v| gc.distance(u, v).unwrap();
    let covered = |v| cert.z.iter().any(|&z| d(z, v) < cert.radius);
    ends.iter().all(|&(x, y)| {
        let short = if cert.exact {
            d(x, y) < cert.radius
        } else {
            d(x, y) + 2 <= 2 * cert.radius
        };
        short
            || match cert.mode {
                Mode::Semi => covered(x) && covered(y),
                Mode::Full => covered(x) || covered(y),
            }
    })
}

/// Most disjoint paths with both ends in `y`, by search over partial packings.
pub fn max_y_packing(g: &Graph, y: &VertexSet) -> usize {
    fn paths_from(
        g: &Graph,
        y: &VertexSet,
        used: &VertexSet,
        cur: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let x = *cur.last().unwrap();
        for w in g.neighbors(x) {
            if used.contains(&w) || cur.contains(&w) {
                continue;
            }
            cur.push(w);
            if y.contains(&w) {
                out.push(cur.clone());
            } else {
                paths_from(g, y, used, cur, out);
            }
            cur.pop();
        }
    }
    fn go(g: &Graph, y: &VertexSet, used: &mut VertexSet) -> usize {
        let Some(&a) = y.iter().find(|v| !used.contains(v)) else {
            return 0;
        };
        used.insert(a);
        let mut best = go(g, y, used);
        let mut paths = Vec::new();
        paths_from(g, y, used, &mut vec![a], &mut paths);
        for p in paths {
            used.extend(p[1..].iter().copied());
            best = best.max(1 + go(g, y, used));
            for v in &p[1..] {
                used.remove(v);
            }
        }
        used.remove(&a);
        best
    }
    go(g, y, &mut VertexSet::new())
}
