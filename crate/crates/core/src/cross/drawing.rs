//! Combinatorial plane drawings (rotation systems) and a path-addition
//! planarity embedder.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{input, internal, Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};

/// Cyclic order of neighbours around each vertex of a simple graph.
pub type Rotation = BTreeMap<VertexId, Vec<VertexId>>;

type Adj = BTreeMap<VertexId, BTreeSet<VertexId>>;

/// A plane drawing of the underlying simple graph, with the vertices of a
/// designated face listed in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneDrawing {
    pub rotation: Rotation,
    pub outer: Vec<VertexId>,
}

impl PlaneDrawing {
    pub fn faces(&self) -> Vec<Vec<VertexId>> {
        faces(&self.rotation)
    }
}

/// Face boundary walks, each as the tails of its darts. The dart after
/// `(u, v)` is `(v, w)` with `w` following `u` around `v`. An isolated
/// vertex forms a face by itself.
pub fn faces(rot: &Rotation) -> Vec<Vec<VertexId>> {
    let mut pos: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (&v, list) in rot {
        for (i, &w) in list.iter().enumerate() {
            pos.insert((v, w), i);
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (&v, list) in rot {
        if list.is_empty() {
            out.push(vec![v]);
            continue;
        }
        for &w in list {
            if seen.contains(&(v, w)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (v, w);
            loop {
                seen.insert((a, b));
                face.push(a);
                let around = &rot[&b];
                let c = around[(pos[&(b, a)] + 1) % around.len()];
                (a, b) = (b, c);
                if (a, b) == (v, w) {
                    break;
                }
            }
            out.push(face);
        }
    }
    out
}

pub fn mirror(rot: &Rotation) -> Rotation {
    rot.iter()
        .map(|(&v, l)| (v, l.iter().rev().copied().collect()))
        .collect()
}

/// Whether `a` and `b` are the same cyclic sequence, in either direction.
pub fn cyclic_eq(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let Some(s) = b.iter().position(|&x| x == a[0]) else {
        return false;
    };
    let n = a.len();
    (0..n).all(|i| a[i] == b[(s + i) % n]) || (0..n).all(|i| a[i] == b[(s + n - i) % n])
}

/// Rotation of a cycle drawn alone.
pub fn cycle_rotation(c: &[VertexId]) -> Rotation {
    let n = c.len();
    (0..n)
        .map(|i| (c[i], vec![c[(i + n - 1) % n], c[(i + 1) % n]]))
        .collect()
}

fn check_rotation(g: &Graph, rot: &Rotation) -> Result<()> {
    let bad = |m: String| Err(Error::Validation(m));
    if rot.len() != g.n() {
        return bad(format!(
            "rotation covers {} of {} vertices",
            rot.len(),
            g.n()
        ));
    }
    for v in g.vertices() {
        let Some(list) = rot.get(&v) else {
            return bad(format!("vertex {v} has no rotation"));
        };
        let mut sorted = list.clone();
        sorted.sort_unstable();
        if sorted != g.neighbors(v) {
            return bad(format!("rotation at {v} does not list its neighbours"));
        }
    }
    // Euler's formula, component by component
    let comp_of: BTreeMap<VertexId, usize> = g
        .components()
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&v| (v, i)))
        .collect();
    let k = comp_of.values().max().map_or(0, |m| m + 1);
    let mut count = vec![(0i64, 0i64, 0i64); k];
    for (&v, l) in rot {
        count[comp_of[&v]].0 += 1;
        count[comp_of[&v]].1 += l.len() as i64;
    }
    for f in faces(rot) {
        count[comp_of[&f[0]]].2 += 1;
    }
    for (vc, twice_e, fc) in count {
        if vc - twice_e / 2 + fc != 2 {
            return bad("rotation system is not planar".into());
        }
    }
    Ok(())
}

/// Checks a drawing of the simple graph underlying `g` whose designated
/// face is bounded exactly by the cycle `outer`.
pub fn validate_drawing(g: &Graph, d: &PlaneDrawing) -> Result<()> {
    check_rotation(g, &d.rotation)?;
    if !d.outer.is_empty() && !faces(&d.rotation).iter().any(|f| cyclic_eq(f, &d.outer)) {
        return Err(Error::Validation(
            "no face is bounded by the outer cycle".into(),
        ));
    }
    Ok(())
}

/// Checks a drawing in a disk: some face meets every vertex of `outer`,
/// in that cyclic order.
pub fn validate_disk(g: &Graph, d: &PlaneDrawing) -> Result<()> {
    check_rotation(g, &d.rotation)?;
    if d.outer.len() <= 1 {
        return Ok(());
    }
    let want: VertexSet = d.outer.iter().copied().collect();
    let ok = faces(&d.rotation).iter().any(|f| {
        let mut firsts = Vec::new();
        for &v in f {
            if want.contains(&v) && !firsts.contains(&v) {
                firsts.push(v);
            }
        }
        cyclic_eq(&firsts, &d.outer)
    });
    if !ok {
        return Err(Error::Validation(
            "boundary vertices do not share a face in order".into(),
        ));
    }
    Ok(())
}

fn adjacency(g: &Graph) -> Adj {
    g.vertices()
        .map(|v| (v, g.neighbors(v).into_iter().collect()))
        .collect()
}

/// Edge sets of the blocks of a simple graph (bridges are one-edge blocks).
fn blocks(adj: &Adj) -> Vec<Vec<(VertexId, VertexId)>> {
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut out = Vec::new();
    let mut timer = 0;
    for &root in adj.keys() {
        if disc.contains_key(&root) {
            continue;
        }
        disc.insert(root, timer);
        low.insert(root, timer);
        timer += 1;
        let nbrs = |v: VertexId| adj[&v].iter().copied().collect::<Vec<_>>();
        let mut stack = vec![(root, root, nbrs(root), 0usize)];
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.3 < top.2.len() {
                let w = top.2[top.3];
                top.3 += 1;
                if w == parent {
                    continue;
                }
                if let Some(&dw) = disc.get(&w) {
                    if dw < disc[&v] {
                        edges.push((v, w));
                        let l = low[&v].min(dw);
                        low.insert(v, l);
                    }
                } else {
                    edges.push((v, w));
                    disc.insert(w, timer);
                    low.insert(w, timer);
                    timer += 1;
                    stack.push((w, v, nbrs(w), 0));
                }
            } else {
                stack.pop();
                if let Some(p) = stack.last() {
                    let u = p.0;
                    let l = low[&u].min(low[&v]);
                    low.insert(u, l);
                    if low[&v] >= disc[&u] {
                        let mut block = Vec::new();
                        while let Some(e) = edges.pop() {
                            block.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

/// A piece of the graph not yet drawn: a chord between two drawn vertices,
/// or a component of the undrawn vertices with its attachments.
struct Fragment {
    att: VertexSet,
    comp: VertexSet,
    /// Faces containing every attachment.
    faces: Vec<usize>,
}

/// Path-addition embedding of one biconnected block.
struct PathAdder<'a> {
    adj: &'a Adj,
    faces: Vec<Vec<VertexId>>,
    hv: VertexSet,
    he: BTreeSet<(VertexId, VertexId)>,
    avoid: Option<VertexId>,
    /// Faces through each drawn vertex.
    vfaces: BTreeMap<VertexId, BTreeSet<usize>>,
    frags: BTreeMap<usize, Fragment>,
    next_frag: usize,
    /// Fragments admissible in each face.
    face_frags: BTreeMap<usize, BTreeSet<usize>>,
}

impl<'a> PathAdder<'a> {
    fn new(adj: &'a Adj) -> Self {
        PathAdder {
            adj,
            faces: Vec::new(),
            hv: VertexSet::new(),
            he: BTreeSet::new(),
            avoid: None,
            vfaces: BTreeMap::new(),
            frags: BTreeMap::new(),
            next_frag: 0,
            face_frags: BTreeMap::new(),
        }
    }

    fn start(&mut self, cycle: &[VertexId]) {
        self.faces = vec![cycle.to_vec(), cycle.iter().rev().copied().collect()];
        self.hv.extend(cycle.iter().copied());
        for i in 0..cycle.len() {
            self.he.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
        }
        for &v in cycle {
            self.vfaces.insert(v, BTreeSet::from([0, 1]));
        }
    }

    /// Draws `path` through face `fi`, splitting it into `fi` and a new
    /// face. Returns the new face id.
    fn add_path(&mut self, fi: usize, path: &[VertexId]) -> usize {
        let f = &self.faces[fi];
        let (a, b) = (path[0], path[path.len() - 1]);
        let i = f.iter().position(|&x| x == a).unwrap();
        let f: Vec<VertexId> = f[i..].iter().chain(&f[..i]).copied().collect();
        let j = f.iter().position(|&x| x == b).unwrap();
        let inner = &path[1..path.len() - 1];
        let mut f1 = f[..=j].to_vec();
        f1.extend(inner.iter().rev());
        let mut f2 = f[j..].to_vec();
        f2.push(a);
        f2.extend(inner);
        let nf = self.faces.len();
        for &v in &f {
            self.vfaces.get_mut(&v).unwrap().remove(&fi);
        }
        for &v in &f1 {
            self.vfaces.entry(v).or_default().insert(fi);
        }
        for &v in &f2 {
            self.vfaces.entry(v).or_default().insert(nf);
        }
        self.faces[fi] = f1;
        self.faces.push(f2);
        self.hv.extend(path.iter().copied());
        for w in path.windows(2) {
            self.he.insert(key(w[0], w[1]));
        }
        nf
    }

    fn admissible(&self, att: &VertexSet) -> Vec<usize> {
        let Some(first) = att.iter().min_by_key(|v| self.vfaces[v].len()) else {
            return Vec::new();
        };
        self.vfaces[first]
            .iter()
            .copied()
            .filter(|fi| att.iter().all(|v| self.vfaces[v].contains(fi)))
            .collect()
    }

    fn register(&mut self, att: VertexSet, comp: VertexSet) {
        let faces = self.admissible(&att);
        let id = self.next_frag;
        self.next_frag += 1;
        for &fi in &faces {
            self.face_frags.entry(fi).or_default().insert(id);
        }
        self.frags.insert(id, Fragment { att, comp, faces });
    }

    fn unregister(&mut self, id: usize) -> Fragment {
        let frag = self.frags.remove(&id).unwrap();
        for fi in &frag.faces {
            if let Some(s) = self.face_frags.get_mut(fi) {
                s.remove(&id);
            }
        }
        frag
    }

    /// Registers the chords at the given drawn vertices and the components
    /// of undrawn vertices among `region`.
    fn collect(&mut self, chord_ends: &[VertexId], region: &VertexSet) {
        let mut chords = BTreeSet::new();
        for &v in chord_ends {
            for &w in &self.adj[&v] {
                if self.hv.contains(&w) && !self.he.contains(&key(v, w)) {
                    chords.insert(key(v, w));
                }
            }
        }
        for (u, v) in chords {
            self.register(VertexSet::from([u, v]), VertexSet::new());
        }
        let mut seen = VertexSet::new();
        for &v in region {
            if self.hv.contains(&v) || !seen.insert(v) {
                continue;
            }
            let mut comp = VertexSet::from([v]);
            let mut queue = VecDeque::from([v]);
            let mut att = VertexSet::new();
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[&x] {
                    if self.hv.contains(&y) {
                        att.insert(y);
                    } else if seen.insert(y) {
                        comp.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            self.register(att, comp);
        }
    }

    /// Path between two attachments of a fragment through its interior.
    fn route(&self, frag: &Fragment) -> Vec<VertexId> {
        let a = *frag.att.first().unwrap();
        let b = *frag.att.last().unwrap();
        if frag.comp.is_empty() {
            return vec![a, b];
        }
        let comp = &frag.comp;
        let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &s in self.adj[&a].iter().filter(|s| comp.contains(s)) {
            parent.insert(s, a);
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            if self.adj[&x].contains(&b) {
                let mut path = vec![b, x];
                let mut cur = x;
                while parent[&cur] != a {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            for &y in &self.adj[&x] {
                if comp.contains(&y) && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        unreachable!("fragment component reaches every attachment")
    }

    fn run(&mut self) -> bool {
        let drawn: Vec<VertexId> = self.hv.iter().copied().collect();
        let all: VertexSet = self.adj.keys().copied().collect();
        self.collect(&drawn, &all);
        while let Some((&first, _)) = self.frags.first_key_value() {
            let forced = self.frags.iter().find(|(_, f)| f.faces.len() <= 1);
            let (id, fi) = match forced {
                Some((_, f)) if f.faces.is_empty() => return false,
                Some((&id, f)) => (id, f.faces[0]),
                None => {
                    let f = &self.frags[&first];
                    let pick = f
                        .faces
                        .iter()
                        .copied()
                        .find(|&i| self.avoid.is_none_or(|x| !self.faces[i].contains(&x)))
                        .unwrap_or(f.faces[0]);
                    (first, pick)
                }
            };
            let frag = self.unregister(id);
            let path = self.route(&frag);
            let nf = self.add_path(fi, &path);
            // fragments that could go in the old face now fit one, both or neither half
            let waiting: Vec<usize> = self
                .face_frags
                .remove(&fi)
                .unwrap_or_default()
                .into_iter()
                .collect();
            let halves: [VertexSet; 2] = [fi, nf].map(|i| self.faces[i].iter().copied().collect());
            for w in waiting {
                let f = self.frags.get_mut(&w).unwrap();
                f.faces.retain(|&x| x != fi);
                for (k, face) in [fi, nf].into_iter().enumerate() {
                    if f.att.is_subset(&halves[k]) {
                        f.faces.push(face);
                        self.face_frags.entry(face).or_default().insert(w);
                    }
                }
                f.faces.sort_unstable();
            }
            let inner = &path[1..path.len() - 1];
            self.collect(inner, &frag.comp);
        }
        true
    }

    fn rotation(&self) -> Option<Rotation> {
        let mut succ: BTreeMap<VertexId, BTreeMap<VertexId, VertexId>> = BTreeMap::new();
        for f in &self.faces {
            let n = f.len();
            for i in 0..n {
                let (u, v, w) = (f[(i + n - 1) % n], f[i], f[(i + 1) % n]);
                succ.entry(v).or_default().insert(u, w);
            }
        }
        let mut rot = Rotation::new();
        for (&v, s) in &succ {
            let first = *s.keys().next()?;
            let mut list = vec![first];
            let mut cur = s[&first];
            while cur != first {
                list.push(cur);
                cur = *s.get(&cur)?;
                if list.len() > s.len() {
                    return None;
                }
            }
            if list.len() != self.adj[&v].len() {
                return None;
            }
            rot.insert(v, list);
        }
        Some(rot)
    }
}

fn cycle_in(adj: &Adj) -> Vec<VertexId> {
    let (&u, ns) = adj.iter().next().unwrap();
    let v = *ns.iter().next().unwrap();
    let mut parent = BTreeMap::from([(v, v)]);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[&x] {
            if x == v && y == u {
                continue;
            }
            if y == u {
                let mut path = vec![u, x];
                let mut cur = x;
                while parent[&cur] != cur {
                    cur = parent[&cur];
                    path.push(cur);
                }
                return path;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(y) {
                e.insert(x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("blocks with two or more edges contain a cycle")
}

/// Rotation system of a planar simple graph, or `None`. With a hint
/// `(cycle, hub)`, the hub is joined to every cycle vertex and no other
/// part of the graph is placed in a face containing the hub.
fn embed(adj: &Adj, hint: Option<(&[VertexId], VertexId)>) -> Option<Rotation> {
    let mut block_rots: Vec<Rotation> = Vec::new();
    for edges in blocks(adj) {
        if edges.len() == 1 {
            let (u, v) = edges[0];
            block_rots.push(Rotation::from([(u, vec![v]), (v, vec![u])]));
            continue;
        }
        let mut badj = Adj::new();
        for &(u, v) in &edges {
            badj.entry(u).or_default().insert(v);
            badj.entry(v).or_default().insert(u);
        }
        let mut pa = PathAdder::new(&badj);
        match hint {
            Some((cycle, hub)) if badj.contains_key(&hub) => {
                pa.avoid = Some(hub);
                pa.start(cycle);
                pa.add_path(1, &[cycle[0], hub, cycle[1]]);
                for &c in &cycle[2..] {
                    let fi = pa
                        .faces
                        .iter()
                        .position(|f| f.contains(&hub) && f.contains(&c))?;
                    pa.add_path(fi, &[hub, c]);
                }
            }
            _ => pa.start(&cycle_in(&badj)),
        }
        if !pa.run() {
            return None;
        }
        block_rots.push(pa.rotation()?);
    }
    let hub = hint.map(|h| h.1);
    let mut rot = Rotation::new();
    for &v in adj.keys() {
        if adj[&v].is_empty() {
            rot.insert(v, Vec::new());
        }
    }
    let mut pending: Vec<Rotation> = block_rots;
    if let Some(h) = hub {
        if let Some(i) = pending.iter().position(|b| b.contains_key(&h)) {
            let first = pending.remove(i);
            rot.extend(first);
        }
    }
    while !pending.is_empty() {
        let i = pending
            .iter()
            .position(|b| b.keys().any(|v| rot.contains_key(v)))
            .unwrap_or(0);
        let b = pending.remove(i);
        for (v, list) in b {
            match rot.get_mut(&v) {
                None => {
                    rot.insert(v, list);
                }
                Some(host) => {
                    let n = host.len();
                    let p = (0..n)
                        .find(|&p| Some(host[p]) != hub && Some(host[(p + 1) % n]) != hub)
                        .unwrap_or(0);
                    host.splice(p + 1..p + 1, list);
                }
            }
        }
    }
    Some(rot)
}

/// Rotation system of the simple graph underlying `g`, if it is planar.
pub fn plane_embedding(g: &Graph) -> Option<Rotation> {
    embed(&adjacency(g), None)
}

pub(crate) fn check_cycle(g: &Graph, c: &[VertexId]) -> Result<()> {
    let distinct: VertexSet = c.iter().copied().collect();
    if c.len() < 3 || distinct.len() != c.len() {
        return input("a cycle needs at least three distinct vertices");
    }
    for i in 0..c.len() {
        if !g.adjacent(c[i], c[(i + 1) % c.len()]) {
            return input(format!(
                "{} and {} are not adjacent",
                c[i],
                c[(i + 1) % c.len()]
            ));
        }
    }
    Ok(())
}

/// A drawing of `g` with the cycle `c` bounding the outer face, if one
/// exists: a hub is joined to every vertex of `c`, the result is embedded,
/// and the hub is removed again.
pub fn planar_with_face(g: &Graph, c: &[VertexId]) -> Result<Option<PlaneDrawing>> {
    check_cycle(g, c)?;
    let mut adj = adjacency(g);
    let hub = g.fresh_vertex();
    adj.insert(hub, c.iter().copied().collect());
    for &v in c {
        adj.get_mut(&v).unwrap().insert(hub);
    }
    let Some(mut rot) = embed(&adj, Some((c, hub))) else {
        return Ok(None);
    };
    rot.remove(&hub);
    for l in rot.values_mut() {
        l.retain(|&w| w != hub);
    }
    let d = PlaneDrawing {
        rotation: rot,
        outer: c.to_vec(),
    };
    if let Err(e) = validate_drawing(g, &d) {
        return internal(format!("embedder produced a bad drawing: {e}"));
    }
    Ok(Some(d))
}

/// A drawing of `g` in a disk with `boundary` on the boundary in the
/// given cyclic order, if one exists.
pub fn disk_drawing(g: &Graph, boundary: &[VertexId]) -> Result<Option<PlaneDrawing>> {
    let distinct: VertexSet = boundary.iter().copied().collect();
    if distinct.len() != boundary.len() || boundary.iter().any(|&v| !g.has_vertex(v)) {
        return input("boundary vertices must be distinct vertices of the graph");
    }
    let mut rot = if boundary.len() >= 3 {
        let mut framed = g.simplified();
        let n = boundary.len();
        let mut added = BTreeSet::new();
        for i in 0..n {
            let (u, v) = (boundary[i], boundary[(i + 1) % n]);
            if !framed.adjacent(u, v) {
                framed.add_edge(u, v);
                added.insert(key(u, v));
            }
        }
        let Some(d) = planar_with_face(&framed, boundary)? else {
            return Ok(None);
        };
        let mut rot = d.rotation;
        for (&v, l) in rot.iter_mut() {
            l.retain(|&w| !added.contains(&key(v, w)));
        }
        rot
    } else {
        let mut adj = adjacency(g);
        let hub = g.fresh_vertex();
        adj.insert(hub, distinct.clone());
        for &v in boundary {
            adj.get_mut(&v).unwrap().insert(hub);
        }
        let Some(mut rot) = embed(&adj, None) else {
            return Ok(None);
        };
        rot.remove(&hub);
        for l in rot.values_mut() {
            l.retain(|&w| w != hub);
        }
        rot
    };
    for v in g.vertices() {
        rot.entry(v).or_default();
    }
    let d = PlaneDrawing {
        rotation: rot,
        outer: boundary.to_vec(),
    };
    if let Err(e) = validate_disk(g, &d) {
        return internal(format!("embedder produced a bad disk drawing: {e}"));
    }
    Ok(Some(d))
}
