//! Packing or covering long M-paths: either many disjoint M-paths whose
//! ends are far apart, or a few vertices and balls that meet every long one.

use serde::{Deserialize, Serialize};

use crate::error::{internal, Result};
use crate::graph::{enumerate_bridges, Bridge, Graph, Path, Subgraph, VertexId, VertexSet};
use crate::wall::GridContraction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Only the first end of each path is kept away from the other paths.
    Semi,
    /// All ends pairwise far apart.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispersedFamily {
    pub mode: Mode,
    pub radius: usize,
    pub paths: Vec<Path>,
    /// `(x_i, y_i)`: the first and last vertex of `paths[i]`.
    pub ends: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockerCert {
    pub mode: Mode,
    pub radius: usize,
    pub a: VertexSet,
    pub z: VertexSet,
    /// With `exact` short paths are those with `d < radius`; otherwise
    /// `d <= 2*radius - 2`.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dispersal {
    Family(DispersedFamily),
    Blocker(BlockerCert),
}

#[derive(Clone, Debug)]
pub struct DispersalRun {
    pub outcome: Dispersal,
    pub iterations: usize,
}

/// The mesh minus `a` inside `g` minus `a`, with its bridges.
fn bridges_without(g: &Graph, m: &Subgraph, a: &VertexSet) -> Result<(Graph, Vec<Bridge>)> {
    let ga = g.without_vertices(a);
    let mut h = Subgraph::default();
    h.vertices = m.vertices.difference(a).copied().collect();
    for &e in &m.edges {
        if let Some((u, v)) = ga.endpoints(e) {
            if h.vertices.contains(&u) && h.vertices.contains(&v) {
                h.edges.insert(e);
            }
        }
    }
    let bridges = enumerate_bridges(&ga, &h)?;
    Ok((ga, bridges))
}

/// An M-path through bridge `b` from `x` to `y`.
fn path_in_bridge(ga: &Graph, b: &Bridge, x: VertexId, y: VertexId) -> Option<Path> {
    if b.is_trivial() {
        return Some(vec![x, y]);
    }
    let inside = |v: VertexId| b.interior.contains(&v);
    let from: VertexSet = ga.neighbors(x).into_iter().filter(|&v| inside(v)).collect();
    let to: VertexSet = ga.neighbors(y).into_iter().filter(|&v| inside(v)).collect();
    let mid = ga.bfs_path(&from, &to, inside)?;
    let mut p = vec![x];
    p.extend(mid);
    p.push(y);
    Some(p)
}

struct State<'a> {
    gc: &'a GridContraction,
    l: usize,
    mode: Mode,
    /// P_i with ends (x_i, y_i), stored so that `ps[i][0] = x_i`.
    ps: Vec<Path>,
    /// Q_i from `w_i` (first) to `a_i` (last), attached to `ps[i]`.
    qs: Vec<Path>,
}

impl State<'_> {
    fn d(&self, u: VertexId, v: VertexId) -> usize {
        self.gc.distance(u, v).expect("mesh vertex")
    }

    fn z(&self) -> VertexSet {
        let mut z = VertexSet::new();
        for p in &self.ps {
            z.insert(p[0]);
            z.insert(*p.last().unwrap());
        }
        for q in &self.qs {
            z.insert(q[0]);
        }
        z
    }

    fn a(&self) -> VertexSet {
        self.qs.iter().map(|q| *q.last().unwrap()).collect()
    }

    fn in_w(&self, z: &VertexSet, v: VertexId) -> bool {
        z.iter().any(|&c| self.d(c, v) < self.l)
    }

    /// Applies one rewiring step for the good path `s` (starting at its
    /// free end `x`).
    fn absorb(&mut self, s: Path) -> Result<()> {
        let mut hit = None;
        'scan: for (pos, &v) in s.iter().enumerate().skip(1) {
            for (i, q) in self.qs.iter().enumerate() {
                if let Some(at) = q.iter().position(|&u| u == v) {
                    hit = Some((pos, false, i, at));
                    break 'scan;
                }
            }
            for (i, p) in self.ps.iter().enumerate() {
                if let Some(at) = p.iter().position(|&u| u == v) {
                    hit = Some((pos, true, i, at));
                    break 'scan;
                }
            }
        }
        let p = self.qs.len();
        match hit {
            None => {
                self.ps.push(s);
            }
            Some((pos, false, i, at)) => {
                // x .. y along S, then y .. w_i along Q_i
                let mut np: Path = s[..pos].to_vec();
                np.extend(self.qs[i][..=at].iter().rev());
                self.ps.swap(i, p - 1);
                self.qs.swap(i, p - 1);
                self.qs.pop();
                self.ps.push(np);
            }
            Some((pos, true, i, at)) if i < p => {
                let pi = self.ps[i].clone();
                let qi = self.qs[i].clone();
                let ai = pi
                    .iter()
                    .position(|&u| u == *qi.last().unwrap())
                    .expect("anchor on its path");
                if ai == at {
                    return internal("good path reached a deleted anchor");
                }
                // P' runs from x to y and on along P_i away from a_i;
                // P'' runs from w_i to a_i and on along P_i away from y.
                let mut p1: Path = s[..pos].to_vec();
                let mut p2: Path = qi.clone();
                if at < ai {
                    p1.extend(pi[..=at].iter().rev());
                    p2.extend(&pi[ai + 1..]);
                } else {
                    p1.extend(&pi[at..]);
                    p2.extend(pi[..ai].iter().rev());
                }
                self.ps.swap(i, p - 1);
                self.qs.swap(i, p - 1);
                self.qs.pop();
                self.ps.remove(p - 1);
                self.ps.push(p1);
                self.ps.push(p2);
            }
            Some((pos, true, i, _)) => {
                self.ps.swap(i, p);
                self.qs.push(s[..=pos].to_vec());
            }
        }
        self.check_invariants()
    }

    fn check_invariants(&self) -> Result<()> {
        let l = self.l;
        for (i, p) in self.ps.iter().enumerate() {
            let (x, y) = (p[0], *p.last().unwrap());
            if self.d(x, y) < l {
                return internal(format!("path {i} became short"));
            }
            for (j, o) in self.ps.iter().enumerate().skip(i + 1) {
                let (x2, y2) = (o[0], *o.last().unwrap());
                let far = match self.mode {
                    Mode::Semi => self.d(x, x2) >= l,
                    Mode::Full => [x, y]
                        .iter()
                        .all(|&u| [x2, y2].iter().all(|&v| self.d(u, v) >= l)),
                };
                if !far {
                    return internal(format!("paths {i} and {j} are not dispersed"));
                }
            }
        }
        for (i, q) in self.qs.iter().enumerate() {
            let w = q[0];
            for (j, p) in self.ps.iter().enumerate() {
                let (x, y) = (p[0], *p.last().unwrap());
                let need_y = j == i || self.mode == Mode::Full;
                if self.d(w, x) < l || (need_y && self.d(w, y) < l) {
                    return internal(format!("anchor path {i} too close to path {j}"));
                }
            }
            for o in &self.qs[i + 1..] {
                if self.d(w, o[0]) < l {
                    return internal("anchor ends too close");
                }
            }
            if !self.ps[i].contains(q.last().unwrap()) {
                return internal("anchor off its path");
            }
        }
        Ok(())
    }
}

/// Looks for a good path: an M-path in G−A with a free end outside `W`
/// (both ends outside in full mode) and ends at distance at least `l`.
/// Without `exact`, only the first free attachment of each bridge is tried,
/// so a miss certifies only the absence of paths with `d >= 2l-1`.
fn good_path(st: &State, g: &Graph, m: &Subgraph, exact: bool) -> Result<Option<Path>> {
    let a = st.a();
    let z = st.z();
    let (ga, bridges) = bridges_without(g, m, &a)?;
    for b in &bridges {
        let free: Vec<VertexId> = b
            .attachments
            .iter()
            .copied()
            .filter(|&v| !st.in_w(&z, v))
            .collect();
        let tries = if exact { free.len() } else { free.len().min(1) };
        for &x in &free[..tries] {
            let far = |y: VertexId| y != x && st.d(x, y) >= st.l;
            let pool: Vec<VertexId> = match st.mode {
                Mode::Semi => b.attachments.iter().copied().collect(),
                Mode::Full => free.clone(),
            };
            if let Some(&y) = pool.iter().find(|&&y| far(y)) {
                return Ok(path_in_bridge(&ga, b, x, y));
            }
        }
    }
    Ok(None)
}

fn run(
    g: &Graph,
    m: &Subgraph,
    gc: &GridContraction,
    l: usize,
    k: usize,
    mode: Mode,
    exact: bool,
) -> Result<DispersalRun> {
    let blocker = |a: VertexSet, z: VertexSet| BlockerCert {
        mode,
        radius: l,
        a,
        z,
        exact,
    };
    if k == 0 {
        return Ok(DispersalRun {
            outcome: Dispersal::Family(DispersedFamily {
                mode,
                radius: l,
                paths: vec![],
                ends: vec![],
            }),
            iterations: 0,
        });
    }
    let mut st = State {
        gc,
        l,
        mode,
        ps: vec![],
        qs: vec![],
    };
    if !exact && l >= gc.rows.min(gc.cols) {
        // every pair of mesh vertices is within 2l-2
        let z = match good_path(&st, g, m, true)? {
            Some(_) => m.vertices.iter().next().copied().into_iter().collect(),
            None => VertexSet::new(),
        };
        return Ok(DispersalRun {
            outcome: Dispersal::Blocker(blocker(VertexSet::new(), z)),
            iterations: 0,
        });
    }
    let mut iterations = 0;
    loop {
        if st.ps.len() >= k {
            st.ps.truncate(k);
            let ends = st.ps.iter().map(|p| (p[0], *p.last().unwrap())).collect();
            return Ok(DispersalRun {
                outcome: Dispersal::Family(DispersedFamily {
                    mode,
                    radius: l,
                    paths: st.ps,
                    ends,
                }),
                iterations,
            });
        }
        let Some(s) = good_path(&st, g, m, exact)? else {
            return Ok(DispersalRun {
                outcome: Dispersal::Blocker(blocker(st.a(), st.z())),
                iterations,
            });
        };
        iterations += 1;
        if iterations > 3 * k {
            return internal("packing loop exceeded 3k iterations");
        }
        st.absorb(s)?;
    }
}

/// Either `k` disjoint semi-dispersed M-paths at radius `l`, or a blocker.
pub fn find_semi_dispersed(
    g: &Graph,
    m: &Subgraph,
    gc: &GridContraction,
    l: usize,
    k: usize,
    exact: bool,
) -> Result<DispersalRun> {
    run(g, m, gc, l, k, Mode::Semi, exact)
}

/// Either `k` disjoint dispersed M-paths at radius `l`, or a blocker.
pub fn find_dispersed(
    g: &Graph,
    m: &Subgraph,
    gc: &GridContraction,
    l: usize,
    k: usize,
    exact: bool,
) -> Result<DispersalRun> {
    run(g, m, gc, l, k, Mode::Full, exact)
}

/// Whether a pair of M-path ends escapes the blocker.
fn escapes(cert: &BlockerCert, gc: &GridContraction, x: VertexId, y: VertexId) -> bool {
    let d = |u, v| gc.distance(u, v).expect("mesh vertex");
    let short = if cert.exact {
        d(x, y) < cert.radius
    } else {
        d(x, y) + 2 <= 2 * cert.radius
    };
    if short {
        return false;
    }
    let covered = |v: VertexId| cert.z.iter().any(|&c| d(c, v) < cert.radius);
    match cert.mode {
        Mode::Semi => !(covered(x) && covered(y)),
        Mode::Full => !(covered(x) || covered(y)),
    }
}

/// Checks the blocker: every M-path of G−A is short or covered. The ends of
/// M-paths are exactly the pairs of attachments of a common bridge.
pub fn verify_blocker(
    g: &Graph,
    m: &Subgraph,
    gc: &GridContraction,
    cert: &BlockerCert,
) -> Result<bool> {
    let (_, bridges) = bridges_without(g, m, &cert.a)?;
    for b in &bridges {
        let at: Vec<VertexId> = b.attachments.iter().copied().collect();
        for (i, &x) in at.iter().enumerate() {
            for &y in &at[i + 1..] {
                if escapes(cert, gc, x, y) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Checks a family: disjoint M-paths with the required end distances.
pub fn verify_family(g: &Graph, m: &Subgraph, gc: &GridContraction, fam: &DispersedFamily) -> bool {
    let d = |u, v| gc.distance(u, v);
    let mut seen = VertexSet::new();
    for (p, &(x, y)) in fam.paths.iter().zip(&fam.ends) {
        if p.len() < 2 || p[0] != x || *p.last().unwrap() != y || !g.is_path(p) {
            return false;
        }
        if !m.vertices.contains(&x) || !m.vertices.contains(&y) {
            return false;
        }
        if p[1..p.len() - 1].iter().any(|v| m.vertices.contains(v)) {
            return false;
        }
        if p.len() == 2 {
            let off_mesh = g
                .incident(x)
                .iter()
                .any(|&(e, w)| w == y && !m.edges.contains(&e));
            if !off_mesh {
                return false;
            }
        }
        if p.iter().any(|v| !seen.insert(*v)) {
            return false;
        }
        match d(x, y) {
            Some(v) if v >= fam.radius => {}
            _ => return false,
        }
    }
    if fam.paths.len() != fam.ends.len() {
        return false;
    }
    for (i, &(x, y)) in fam.ends.iter().enumerate() {
        for &(x2, y2) in &fam.ends[i + 1..] {
            let pairs: Vec<(VertexId, VertexId)> = match fam.mode {
                Mode::Semi => vec![(x, x2)],
                Mode::Full => vec![(x, x2), (x, y2), (y, x2), (y, y2)],
            };
            if pairs
                .iter()
                .any(|&(u, v)| d(u, v).is_none_or(|dv| dv < fam.radius))
            {
                return false;
            }
        }
    }
    true
}
