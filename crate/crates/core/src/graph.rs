//! Multigraphs with stable identifiers, separations, bridges, Menger linkages
//! and edge contraction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{input, Error, Result};
use crate::flow::VertexFlow;

pub type VertexId = u32;
pub type EdgeId = u32;
pub type VertexSet = BTreeSet<VertexId>;
/// A path or walk given by its vertex sequence.
pub type Path = Vec<VertexId>;

/// Finite multigraph. Loops and parallel edges are stored but every
/// path, bridge and separation routine skips loops.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list, numbering edges from zero.
    pub fn from_edges(pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut g = Graph::new();
        for (u, v) in pairs {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, Vec::new());
        true
    }

    /// Smallest identifier larger than every present vertex.
    pub fn fresh_vertex(&self) -> VertexId {
        self.adj.keys().next_back().map_or(0, |v| v + 1)
    }

    pub fn fresh_edge(&self) -> EdgeId {
        self.edges.keys().next_back().map_or(0, |e| e + 1)
    }

    /// Adds an edge with the next free identifier; missing ends are created.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        let id = self.fresh_edge();
        self.insert_edge(id, u, v).expect("fresh edge id");
        id
    }

    /// Adds an edge with a caller-chosen identifier.
    pub fn insert_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<()> {
        if self.edges.contains_key(&id) {
            return input(format!("duplicate edge id {id}"));
        }
        self.add_vertex(u);
        self.add_vertex(v);
        self.edges.insert(id, (u, v));
        insert_sorted(self.adj.get_mut(&u).unwrap(), (id, v));
        if u != v {
            insert_sorted(self.adj.get_mut(&v).unwrap(), (id, u));
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Option<(VertexId, VertexId)> {
        let (u, v) = self.edges.remove(&id)?;
        self.adj.get_mut(&u).unwrap().retain(|&(e, _)| e != id);
        if u != v {
            self.adj.get_mut(&v).unwrap().retain(|&(e, _)| e != id);
        }
        Some((u, v))
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> bool {
        let Some(inc) = self.adj.get(&v).cloned() else {
            return false;
        };
        for (e, _) in inc {
            self.remove_edge(e);
        }
        self.adj.remove(&v);
        true
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge_id(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    /// Incident (edge, other end) pairs in ascending edge order. Loops appear once.
    pub fn incident(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        self.adj.get(&v).map_or(&[], |x| x.as_slice())
    }

    /// Distinct neighbours other than `v` itself, ascending.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .incident(v)
            .iter()
            .map(|&(_, w)| w)
            .filter(|&w| w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of distinct neighbours (loops and parallel edges ignored).
    pub fn simple_degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// Multigraph degree; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v)
            .iter()
            .map(|&(_, w)| if w == v { 2 } else { 1 })
            .sum()
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.incident(u).iter().any(|&(_, w)| w == v)
    }

    /// Lowest-numbered edge joining `u` and `v`.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.incident(u)
            .iter()
            .find(|&&(_, w)| w == v)
            .map(|&(e, _)| e)
    }

    /// Subgraph induced on `keep`; identifiers are preserved.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let mut g = Graph::new();
        for &v in keep {
            if self.has_vertex(v) {
                g.add_vertex(v);
            }
        }
        for (e, u, v) in self.edges() {
            if keep.contains(&u) && keep.contains(&v) {
                g.insert_edge(e, u, v).unwrap();
            }
        }
        g
    }

    pub fn without_vertices(&self, drop: &VertexSet) -> Graph {
        let keep: VertexSet = self.vertices().filter(|v| !drop.contains(v)).collect();
        self.induced(&keep)
    }

    /// Copy with loops removed and each parallel class reduced to its
    /// lowest-numbered edge.
    pub fn simplified(&self) -> Graph {
        let mut g = Graph::new();
        for v in self.vertices() {
            g.add_vertex(v);
        }
        let mut seen = BTreeSet::new();
        for (e, u, v) in self.edges() {
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                g.insert_edge(e, u, v).unwrap();
            }
        }
        g
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges()
            .all(|(_, u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    /// The subgraph consisting of the listed edges and vertices.
    pub fn subgraph(&self, sub: &Subgraph) -> Graph {
        let mut g = Graph::new();
        for &v in &sub.vertices {
            g.add_vertex(v);
        }
        for &e in &sub.edges {
            if let Some((u, v)) = self.endpoints(e) {
                g.insert_edge(e, u, v).unwrap();
            }
        }
        g
    }

    /// Checks that consecutive vertices of `p` are adjacent and no vertex repeats.
    pub fn is_path(&self, p: &[VertexId]) -> bool {
        if p.is_empty() || p.iter().any(|&v| !self.has_vertex(v)) {
            return false;
        }
        let distinct: VertexSet = p.iter().copied().collect();
        distinct.len() == p.len() && p.windows(2).all(|w| self.adjacent(w[0], w[1]))
    }

    /// Edge identifiers along a path, taking the lowest edge for each step.
    pub fn path_edges(&self, p: &[VertexId]) -> Option<Vec<EdgeId>> {
        p.windows(2)
            .map(|w| self.edge_between(w[0], w[1]))
            .collect()
    }

    /// Connected components of the subgraph induced on `allowed`, each as a
    /// vertex set, ordered by smallest member.
    pub fn components_within(&self, allowed: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &s in allowed {
            if seen.contains(&s) || !self.has_vertex(s) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = VecDeque::from([s]);
            seen.insert(s);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for w in self.neighbors(v) {
                    if allowed.contains(&w) && seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertex_set())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Whether `set` induces a connected subgraph (the empty set does not).
    pub fn induces_connected(&self, set: &VertexSet) -> bool {
        !set.is_empty() && self.components_within(set).len() == 1
    }

    /// Shortest path from a vertex of `from` to a vertex of `to` whose
    /// interior vertices all satisfy `inner`. Ties go to smaller identifiers.
    pub fn bfs_path(
        &self,
        from: &VertexSet,
        to: &VertexSet,
        inner: impl Fn(VertexId) -> bool,
    ) -> Option<Path> {
        let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &s in from {
            if !self.has_vertex(s) {
                continue;
            }
            if to.contains(&s) {
                return Some(vec![s]);
            }
            parent.insert(s, s);
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            if !from.contains(&v) && !inner(v) {
                continue;
            }
            for w in self.neighbors(v) {
                if parent.contains_key(&w) {
                    continue;
                }
                parent.insert(w, v);
                if to.contains(&w) {
                    let mut path = vec![w];
                    let mut cur = w;
                    while parent[&cur] != cur {
                        cur = parent[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }
}

fn insert_sorted(list: &mut Vec<(EdgeId, VertexId)>, item: (EdgeId, VertexId)) {
    let pos = list.partition_point(|x| x.0 < item.0);
    list.insert(pos, item);
}

/// A subgraph given by explicit vertex and edge sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: VertexSet,
    pub edges: BTreeSet<EdgeId>,
}

impl Subgraph {
    /// Union of paths, using the lowest edge between consecutive vertices.
    pub fn from_paths<'a>(g: &Graph, paths: impl IntoIterator<Item = &'a Path>) -> Result<Self> {
        let mut s = Subgraph::default();
        for p in paths {
            s.vertices.extend(p.iter().copied());
            for w in p.windows(2) {
                let e = g.edge_between(w[0], w[1]).ok_or_else(|| {
                    Error::Input(format!("no edge between {} and {}", w[0], w[1]))
                })?;
                s.edges.insert(e);
            }
        }
        Ok(s)
    }

    pub fn whole(g: &Graph) -> Self {
        Subgraph {
            vertices: g.vertex_set(),
            edges: g.edges().map(|(e, _, _)| e).collect(),
        }
    }

    pub fn is_subgraph_of(&self, g: &Graph) -> bool {
        self.vertices.iter().all(|&v| g.has_vertex(v))
            && self.edges.iter().all(|&e| match g.endpoints(e) {
                Some((u, v)) => self.vertices.contains(&u) && self.vertices.contains(&v),
                None => false,
            })
    }
}

/// A pair (A, B) covering V(G) with no edge between A∖B and B∖A.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Separation {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl Separation {
    pub fn order(&self) -> usize {
        self.a.intersection(&self.b).count()
    }

    pub fn boundary(&self) -> VertexSet {
        self.a.intersection(&self.b).copied().collect()
    }

    /// Verifies the covering and no-crossing-edge conditions.
    pub fn check(&self, g: &Graph) -> Result<()> {
        for v in g.vertices() {
            if !self.a.contains(&v) && !self.b.contains(&v) {
                return Err(Error::Validation(format!("vertex {v} on neither side")));
            }
        }
        for (e, u, v) in g.edges() {
            let ua = self.a.contains(&u) && !self.b.contains(&u);
            let ub = self.b.contains(&u) && !self.a.contains(&u);
            let va = self.a.contains(&v) && !self.b.contains(&v);
            let vb = self.b.contains(&v) && !self.a.contains(&v);
            if (ua && vb) || (ub && va) {
                return Err(Error::Validation(format!(
                    "edge {e} ({u},{v}) crosses the separation"
                )));
            }
        }
        Ok(())
    }
}

/// An H-bridge: a single edge with both ends in H, or a component of
/// G − V(H) together with every edge touching it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub edges: BTreeSet<EdgeId>,
    pub attachments: VertexSet,
    pub interior: VertexSet,
}

impl Bridge {
    pub fn is_trivial(&self) -> bool {
        self.interior.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.attachments.union(&self.interior).copied().collect()
    }
}

/// All H-bridges of G, ordered by their smallest edge identifier.
pub fn enumerate_bridges(g: &Graph, h: &Subgraph) -> Result<Vec<Bridge>> {
    if !h.is_subgraph_of(g) {
        return input("H is not a subgraph of G");
    }
    let outside: VertexSet = g.vertices().filter(|v| !h.vertices.contains(v)).collect();
    let mut bridges = Vec::new();
    for comp in g.components_within(&outside) {
        let mut edges = BTreeSet::new();
        let mut attachments = VertexSet::new();
        for &v in &comp {
            for &(e, w) in g.incident(v) {
                edges.insert(e);
                if h.vertices.contains(&w) {
                    attachments.insert(w);
                }
            }
        }
        bridges.push(Bridge {
            edges,
            attachments,
            interior: comp,
        });
    }
    for (e, u, v) in g.edges() {
        if h.vertices.contains(&u) && h.vertices.contains(&v) && !h.edges.contains(&e) {
            bridges.push(Bridge {
                edges: BTreeSet::from([e]),
                attachments: VertexSet::from([u, v]),
                interior: VertexSet::new(),
            });
        }
    }
    bridges.sort_by_key(|b| b.edges.iter().next().copied());
    Ok(bridges)
}

/// Outcome of a Menger search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Linkage {
    Paths(Vec<Path>),
    Separator(VertexSet),
}

/// Either `k` vertex-disjoint X–Y paths or a separator of size below `k`.
pub fn menger_paths(g: &Graph, k: usize, x: &VertexSet, y: &VertexSet) -> Result<Linkage> {
    if k == 0 {
        return input("k must be at least 1");
    }
    let mut flow = VertexFlow::new(g, &|_| true);
    flow.add_sources(x);
    flow.add_sinks(y);
    let value = flow.run(k);
    if value >= k {
        let paths = flow.paths();
        Ok(Linkage::Paths(
            paths.into_iter().map(|p| trim_xy(&p, x, y)).collect(),
        ))
    } else {
        Ok(Linkage::Separator(flow.source_side_cut()))
    }
}

/// Shortens a flow path so it meets X only at its start and Y only at its end.
fn trim_xy(p: &[VertexId], x: &VertexSet, y: &VertexSet) -> Path {
    let end = p.iter().position(|v| y.contains(v)).unwrap_or(p.len() - 1);
    let head = &p[..=end];
    let start = head.iter().rposition(|v| x.contains(v)).unwrap_or(0);
    head[start..].to_vec()
}

/// Paths from `v` to `targets` that share only `v`, at most `limit` of them,
/// avoiding vertices rejected by `allowed`.
pub fn fan(
    g: &Graph,
    v: VertexId,
    targets: &VertexSet,
    limit: usize,
    allowed: &dyn Fn(VertexId) -> bool,
) -> Vec<Path> {
    if targets.contains(&v) {
        return vec![vec![v]];
    }
    let mut flow = VertexFlow::new(g, allowed);
    flow.add_hub(v);
    flow.add_sinks(targets);
    flow.run(limit);
    flow.paths()
        .into_iter()
        .map(|p| {
            let end = p.iter().position(|w| targets.contains(w)).unwrap();
            p[..=end].to_vec()
        })
        .collect()
}

/// Contracts the edge set `z`, returning the minor and the vertex map.
/// Each fiber is represented by its smallest vertex; contracted edges vanish
/// and remaining edges keep their identifiers (possibly becoming loops).
pub fn contract_edges(
    g: &Graph,
    z: &BTreeSet<EdgeId>,
) -> Result<(Graph, BTreeMap<VertexId, VertexId>)> {
    let mut parent: BTreeMap<VertexId, VertexId> = g.vertices().map(|v| (v, v)).collect();
    fn find(p: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let mut r = v;
        while p[&r] != r {
            r = p[&r];
        }
        let mut c = v;
        while p[&c] != r {
            let n = p[&c];
            p.insert(c, r);
            c = n;
        }
        r
    }
    for &e in z {
        let (u, v) = g
            .endpoints(e)
            .ok_or_else(|| Error::Input(format!("edge {e} not in graph")))?;
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            parent.insert(hi, lo);
        }
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    let cmap: BTreeMap<VertexId, VertexId> =
        verts.iter().map(|&v| (v, find(&mut parent, v))).collect();
    let mut out = Graph::new();
    for &r in cmap.values() {
        out.add_vertex(r);
    }
    for (e, u, v) in g.edges() {
        if !z.contains(&e) {
            out.insert_edge(e, cmap[&u], cmap[&v])?;
        }
    }
    Ok((out, cmap))
}

/// Model of a K_t minor: disjoint connected branch sets and, for each pair,
/// an edge joining them.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MinorModel {
    pub branch_sets: Vec<VertexSet>,
    /// `(i, j, e)` with `i < j` and edge `e` joining branch sets i and j.
    pub witness_edges: Vec<(usize, usize, EdgeId)>,
}

impl MinorModel {
    pub fn t(&self) -> usize {
        self.branch_sets.len()
    }

    /// Fills in witness edges by scanning `g`; pairs without an edge are skipped.
    pub fn with_witnesses(branch_sets: Vec<VertexSet>, g: &Graph) -> Self {
        let mut owner = BTreeMap::new();
        for (i, s) in branch_sets.iter().enumerate() {
            for &v in s {
                owner.insert(v, i);
            }
        }
        let mut found: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
        for (e, u, v) in g.edges() {
            if let (Some(&i), Some(&j)) = (owner.get(&u), owner.get(&v)) {
                if i != j {
                    found.entry((i.min(j), i.max(j))).or_insert(e);
                }
            }
        }
        MinorModel {
            branch_sets,
            witness_edges: found.into_iter().map(|((i, j), e)| (i, j, e)).collect(),
        }
    }
}

/// Pulls a model in G/Z back to G through the contraction map.
pub fn lift_model(model: &MinorModel, cmap: &BTreeMap<VertexId, VertexId>) -> Result<MinorModel> {
    let mut fibers: BTreeMap<VertexId, VertexSet> = BTreeMap::new();
    for (&v, &r) in cmap {
        fibers.entry(r).or_default().insert(v);
    }
    let mut sets = Vec::with_capacity(model.branch_sets.len());
    for s in &model.branch_sets {
        let mut lifted = VertexSet::new();
        for v in s {
            let fiber = fibers
                .get(v)
                .ok_or_else(|| Error::Input(format!("vertex {v} of the model has no preimage")))?;
            lifted.extend(fiber.iter().copied());
        }
        sets.push(lifted);
    }
    Ok(MinorModel {
        branch_sets: sets,
        witness_edges: model.witness_edges.clone(),
    })
}
