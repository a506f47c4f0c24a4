//! Unit vertex-capacity max-flow used for Menger-type searches.

use std::collections::{BTreeMap, VecDeque};

use crate::graph::{Graph, Path, VertexId, VertexSet};

const INF: i32 = i32::MAX / 4;

#[derive(Clone, Copy, Debug)]
struct Arc {
    to: usize,
    cap: i32,
    flow: i32,
}

/// Vertex-split flow network. Vertex `i` (dense index) owns nodes `2i`
/// (in) and `2i+1` (out); the super source and sink follow.
pub(crate) struct VertexFlow {
    ids: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
    value: usize,
    sources: Vec<usize>,
    sinks: Vec<usize>,
}

impl VertexFlow {
    /// Network over the vertices accepted by `allowed`.
    pub fn new(g: &Graph, allowed: &dyn Fn(VertexId) -> bool) -> Self {
        let ids: Vec<VertexId> = g.vertices().filter(|&v| allowed(v)).collect();
        let index: BTreeMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let nodes = 2 * ids.len() + 2;
        let mut f = VertexFlow {
            ids,
            index,
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            source: nodes - 2,
            sink: nodes - 1,
            value: 0,
            sources: Vec::new(),
            sinks: Vec::new(),
        };
        for i in 0..f.ids.len() {
            f.add_arc(2 * i, 2 * i + 1, 1);
        }
        for i in 0..f.ids.len() {
            let v = f.ids[i];
            for w in g.neighbors(v) {
                if let Some(&j) = f.index.get(&w) {
                    f.add_arc(2 * i + 1, 2 * j, INF);
                }
            }
        }
        f
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i32) {
        let k = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow: 0 });
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            flow: 0,
        });
        self.out[from].push(k);
        self.out[to].push(k + 1);
    }

    pub fn add_sources(&mut self, xs: &VertexSet) {
        for x in xs {
            if let Some(&i) = self.index.get(x) {
                self.add_arc(self.source, 2 * i, 1);
                self.sources.push(i);
            }
        }
    }

    /// Source vertex with unbounded capacity: paths may share it.
    pub fn add_hub(&mut self, v: VertexId) {
        if let Some(&i) = self.index.get(&v) {
            self.add_arc(self.source, 2 * i + 1, INF);
        }
    }

    pub fn add_sinks(&mut self, ys: &VertexSet) {
        for y in ys {
            if let Some(&i) = self.index.get(y) {
                self.add_arc(2 * i + 1, self.sink, 1);
                self.sinks.push(i);
            }
        }
    }

    fn residual(&self, k: usize) -> i32 {
        let a = &self.arcs[k];
        a.cap - a.flow
    }

    /// Augments until the flow reaches `limit` or is maximum.
    pub fn run(&mut self, limit: usize) -> usize {
        while self.value < limit {
            let n = self.out.len();
            let mut via = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[self.source] = true;
            let mut queue = VecDeque::from([self.source]);
            while let Some(u) = queue.pop_front() {
                if u == self.sink {
                    break;
                }
                for &k in &self.out[u] {
                    let to = self.arcs[k].to;
                    if !seen[to] && self.residual(k) > 0 {
                        seen[to] = true;
                        via[to] = k;
                        queue.push_back(to);
                    }
                }
            }
            if !seen[self.sink] {
                break;
            }
            let mut node = self.sink;
            while node != self.source {
                let k = via[node];
                self.arcs[k].flow += 1;
                self.arcs[k ^ 1].flow -= 1;
                node = self.arcs[k ^ 1].to;
            }
            self.value += 1;
        }
        self.value
    }

    /// Decomposes the current flow into vertex paths from a source to a sink.
    pub fn paths(&self) -> Vec<Path> {
        let mut used: Vec<i32> = self.arcs.iter().map(|a| a.flow.max(0)).collect();
        let mut out = Vec::new();
        loop {
            let Some(&start) = self.out[self.source]
                .iter()
                .find(|&&k| k % 2 == 0 && used[k] > 0)
            else {
                break;
            };
            used[start] -= 1;
            let mut node = self.arcs[start].to;
            let mut path: Path = Vec::new();
            while node != self.sink {
                if node % 2 == 1 && path.last() != Some(&self.ids[node / 2]) {
                    path.push(self.ids[node / 2]);
                }
                let k = *self.out[node]
                    .iter()
                    .find(|&&k| k % 2 == 0 && used[k] > 0)
                    .expect("flow conservation");
                used[k] -= 1;
                node = self.arcs[k].to;
            }
            out.push(path);
        }
        out
    }

    fn reach_from_source(&self) -> Vec<bool> {
        let n = self.out.len();
        let mut seen = vec![false; n];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &k in &self.out[u] {
                let to = self.arcs[k].to;
                if !seen[to] && self.residual(k) > 0 {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
        seen
    }

    fn reach_to_sink(&self) -> Vec<bool> {
        let n = self.out.len();
        let mut seen = vec![false; n];
        seen[self.sink] = true;
        let mut queue = VecDeque::from([self.sink]);
        while let Some(v) = queue.pop_front() {
            // arcs u->v with residual > 0: their reverse arc sits in out[v]
            for &k in &self.out[v] {
                let u = self.arcs[k].to;
                if !seen[u] && self.residual(k ^ 1) > 0 {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Minimum cut closest to the sources. A source whose in-node is cut
    /// off counts as cut through its source arc.
    pub fn source_side_cut(&self) -> VertexSet {
        let r = self.reach_from_source();
        let mut cut: VertexSet = (0..self.ids.len())
            .filter(|&i| r[2 * i] && !r[2 * i + 1])
            .map(|i| self.ids[i])
            .collect();
        cut.extend(
            self.sources
                .iter()
                .filter(|&&i| !r[2 * i])
                .map(|&i| self.ids[i]),
        );
        cut
    }

    /// Minimum cut closest to the sinks, with the vertices strictly on the
    /// source side of it.
    pub fn sink_side_cut(&self) -> (VertexSet, VertexSet) {
        let r = self.reach_to_sink();
        let mut cut: VertexSet = (0..self.ids.len())
            .filter(|&i| !r[2 * i] && r[2 * i + 1])
            .map(|i| self.ids[i])
            .collect();
        cut.extend(
            self.sinks
                .iter()
                .filter(|&&i| !r[2 * i + 1])
                .map(|&i| self.ids[i]),
        );
        let inside = (0..self.ids.len())
            .filter(|&i| !r[2 * i] && !r[2 * i + 1] && !cut.contains(&self.ids[i]))
            .map(|i| self.ids[i])
            .collect();
        (cut, inside)
    }
}
