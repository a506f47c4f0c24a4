//! Turning a tripod hung on a cycle into a cross.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{check_cross, check_tripod, positions, Cross, Tripod};
use crate::error::{internal, Result};
use crate::graph::{Graph, Path, VertexId, VertexSet};

const SRC: usize = 0;
const SNK: usize = 1;
const HX: usize = 2;
const HC: usize = 3;

struct Arc {
    to: usize,
    cap: i32,
    label: Option<(VertexId, VertexId)>,
}

/// Small unit-capacity network with labelled arcs.
struct Net {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Net {
    fn new(nodes: usize) -> Self {
        Net {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    fn arc(&mut self, from: usize, to: usize, label: Option<(VertexId, VertexId)>) {
        let k = self.arcs.len();
        self.arcs.push(Arc { to, cap: 1, label });
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            label: None,
        });
        self.out[from].push(k);
        self.out[to].push(k + 1);
    }

    fn augment(&mut self) -> bool {
        let mut prev: Vec<Option<usize>> = vec![None; self.out.len()];
        let mut queue = VecDeque::from([SRC]);
        let mut seen = vec![false; self.out.len()];
        seen[SRC] = true;
        while let Some(x) = queue.pop_front() {
            for &k in &self.out[x] {
                let y = self.arcs[k].to;
                if !seen[y] && self.arcs[k].cap > 0 {
                    seen[y] = true;
                    prev[y] = Some(k);
                    queue.push_back(y);
                }
            }
        }
        if !seen[SNK] {
            return false;
        }
        let mut y = SNK;
        while let Some(k) = prev[y] {
            self.arcs[k].cap -= 1;
            self.arcs[k ^ 1].cap += 1;
            y = self.arcs[k ^ 1].to;
        }
        true
    }

    /// Paths of the flow, read off the labels of the used forward arcs.
    fn paths(&mut self) -> Vec<Path> {
        let mut out = Vec::new();
        loop {
            let mut x = SRC;
            let mut path: Path = Vec::new();
            let mut moved = false;
            while x != SNK {
                let Some(&k) = self.out[x]
                    .iter()
                    .find(|&&k| k % 2 == 0 && self.arcs[k ^ 1].cap > 0)
                else {
                    break;
                };
                self.arcs[k ^ 1].cap -= 1;
                moved = true;
                if let Some((a, b)) = self.arcs[k].label {
                    if path.is_empty() {
                        path.push(a);
                    }
                    if path.last() != Some(&b) {
                        path.push(b);
                    }
                }
                x = self.arcs[k].to;
            }
            if !moved {
                return out;
            }
            out.push(path);
        }
    }
}

/// Four disjoint paths from the tripod part `x` (three starting at the
/// feet ends `ys`) to the cycle (three ending at the leg ends `xs`), with
/// interiors off both.
fn linkage(
    g: &Graph,
    on_c: &VertexSet,
    x: &VertexSet,
    ys: [VertexId; 3],
    xs: [VertexId; 3],
) -> Option<Vec<Path>> {
    let free: Vec<VertexId> = g
        .vertices()
        .filter(|v| !x.contains(v) && !on_c.contains(v))
        .collect();
    let idx: BTreeMap<VertexId, usize> = free.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut net = Net::new(10 + 2 * free.len());
    let n_in = |v: VertexId| 10 + 2 * idx[&v];
    let c_node = |w: VertexId| xs.iter().position(|&z| z == w).map_or(HC, |j| 7 + j);
    for i in 0..3 {
        net.arc(SRC, 4 + i, None);
        net.arc(7 + i, SNK, None);
    }
    net.arc(SRC, HX, None);
    net.arc(HC, SNK, None);
    for &v in &free {
        net.arc(n_in(v), n_in(v) + 1, None);
    }
    for &u in x {
        let node = ys.iter().position(|&y| y == u).map_or(HX, |i| 4 + i);
        if on_c.contains(&u) {
            if node != HX && xs[node - 4] == u {
                net.arc(node, 7 + node - 4, Some((u, u)));
            }
            continue;
        }
        for w in g.neighbors(u) {
            if x.contains(&w) {
                continue;
            }
            let to = if on_c.contains(&w) {
                c_node(w)
            } else {
                n_in(w)
            };
            net.arc(node, to, Some((u, w)));
        }
    }
    for &v in &free {
        for w in g.neighbors(v) {
            if x.contains(&w) {
                continue;
            }
            let to = if on_c.contains(&w) {
                c_node(w)
            } else {
                n_in(w)
            };
            net.arc(n_in(v) + 1, to, Some((v, w)));
        }
    }
    let mut value = 0;
    while value < 4 && net.augment() {
        value += 1;
    }
    (value == 4).then(|| net.paths())
}

/// Two disjoint paths in the union of `pieces` with ends alternating on
/// the cycle and interiors off it, by exhaustive search.
fn cross_in(c: &[VertexId], pieces: &[Path]) -> Option<(Path, Path)> {
    let on_c: VertexSet = c.iter().copied().collect();
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for p in pieces {
        for w in p.windows(2) {
            adj.entry(w[0]).or_default().insert(w[1]);
            adj.entry(w[1]).or_default().insert(w[0]);
        }
    }
    let pos = positions(c);
    let mut ends: Vec<VertexId> = adj.keys().copied().filter(|v| on_c.contains(v)).collect();
    ends.sort_by_key(|v| pos[v]);
    let second = |p: &Path, a: VertexId, b: VertexId| -> Option<Path> {
        let used: VertexSet = p.iter().copied().collect();
        let mut parent = BTreeMap::from([(a, a)]);
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                if parent.contains_key(&y) || used.contains(&y) {
                    continue;
                }
                parent.insert(y, x);
                if y == b {
                    let mut out = vec![b];
                    while *out.last().unwrap() != a {
                        out.push(parent[out.last().unwrap()]);
                    }
                    out.reverse();
                    return Some(out);
                }
                if !on_c.contains(&y) {
                    queue.push_back(y);
                }
            }
        }
        None
    };
    let mut budget = 200_000usize;
    for a in 0..ends.len() {
        for b in a + 1..ends.len() {
            for d in b + 1..ends.len() {
                for e in d + 1..ends.len() {
                    let (t0, t1, t2, t3) = (ends[a], ends[b], ends[d], ends[e]);
                    // depth-first enumeration of t0..t2 paths
                    let mut stack = vec![(t0, 0usize)];
                    let mut on_path = VertexSet::from([t0]);
                    while let Some(top) = stack.last_mut() {
                        let x = top.0;
                        let Some(&y) = adj[&x].iter().nth(top.1) else {
                            stack.pop();
                            on_path.remove(&x);
                            continue;
                        };
                        top.1 += 1;
                        budget = budget.checked_sub(1)?;
                        if on_path.contains(&y) {
                            continue;
                        }
                        if y == t2 {
                            let mut p: Path = stack.iter().map(|s| s.0).collect();
                            p.push(t2);
                            if let Some(q) = second(&p, t1, t3) {
                                return Some((p, q));
                            }
                        } else if !on_c.contains(&y) {
                            on_path.insert(y);
                            stack.push((y, 0));
                        }
                    }
                }
            }
        }
    }
    None
}

/// A cross over `c` inside the tripod together with four disjoint paths
/// from it to the cycle.
pub(crate) fn cross_from_tripod(g: &Graph, c: &[VertexId], t: &Tripod) -> Result<Cross> {
    if let Err(e) = check_tripod(g, c, t) {
        return internal(format!("malformed tripod: {e}"));
    }
    let on_c: VertexSet = c.iter().copied().collect();
    let ys = [0, 1, 2].map(|i| *t.feet[i].last().unwrap());
    let xs = [0, 1, 2].map(|i| *t.legs[i].last().unwrap());
    let mut x = VertexSet::new();
    for i in 0..3 {
        let cut = t.legs[i].iter().position(|&v| v == ys[i]).unwrap();
        x.extend(t.legs[i][..=cut].iter().copied());
        x.extend(t.feet[i].iter().copied());
    }
    let Some(paths) = linkage(g, &on_c, &x, ys, xs) else {
        return internal(format!(
            "no four disjoint paths from the tripod at {} and {} to the cycle",
            t.v, t.u
        ));
    };
    let mut pieces: Vec<Path> = paths.into_iter().filter(|p| p.len() >= 2).collect();
    pieces.extend(t.legs.iter().cloned());
    pieces.extend(t.feet.iter().cloned());
    let Some((p, q)) = cross_in(c, &pieces) else {
        return internal(format!("tripod at {} and {} yields no cross", t.v, t.u));
    };
    let Some(cross) = Cross::oriented(c, p, q) else {
        return internal("cross ends do not alternate");
    };
    check_cross(g, c, &cross).or_else(|e| internal(format!("bad cross from tripod: {e}")))?;
    Ok(cross)
}
