//! Walls, meshes, grid contractions and the mesh distance function.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::graph::{Graph, Path, Subgraph, VertexId, VertexSet};

/// Grid coordinate, both entries 1-based.
pub type Coord = (usize, usize);

/// `r × s` mesh given by its oriented horizontal and vertical paths.
/// `horizontal[i]` runs from `vertical[0]` to `vertical[s-1]`; `vertical[j]`
/// runs from `horizontal[0]` to `horizontal[r-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mesh {
    pub horizontal: Vec<Path>,
    pub vertical: Vec<Path>,
}

fn violation<T>(msg: String) -> Result<T> {
    Err(Error::Validation(msg))
}

impl Mesh {
    pub fn rows(&self) -> usize {
        self.horizontal.len()
    }

    pub fn cols(&self) -> usize {
        self.vertical.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.horizontal
            .iter()
            .chain(&self.vertical)
            .flatten()
            .copied()
            .collect()
    }

    pub fn subgraph(&self, g: &Graph) -> Result<Subgraph> {
        Subgraph::from_paths(g, self.horizontal.iter().chain(&self.vertical))
    }

    /// The mesh as a standalone graph carrying the host's edge ids.
    pub fn graph(&self, g: &Graph) -> Result<Graph> {
        Ok(g.subgraph(&self.subgraph(g)?))
    }

    /// Vertices of `horizontal[i] ∩ vertical[j]` in the order of the horizontal path.
    pub fn meet(&self, i: usize, j: usize) -> Vec<VertexId> {
        let q: BTreeSet<VertexId> = self.vertical[j].iter().copied().collect();
        self.horizontal[i]
            .iter()
            .copied()
            .filter(|v| q.contains(v))
            .collect()
    }

    /// Checks the four mesh conditions, naming the first violated one.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let (r, s) = (self.rows(), self.cols());
        if r < 2 || s < 2 {
            return violation(format!("mesh needs at least 2x2 paths, got {r}x{s}"));
        }
        for (name, fam) in [
            ("horizontal", &self.horizontal),
            ("vertical", &self.vertical),
        ] {
            for (i, p) in fam.iter().enumerate() {
                if p.is_empty() || !g.is_path(p) {
                    return violation(format!("{name} path {} is not a path of the graph", i + 1));
                }
            }
        }
        // (1)
        for (name, fam) in [
            ("horizontal", &self.horizontal),
            ("vertical", &self.vertical),
        ] {
            let mut owner: BTreeMap<VertexId, usize> = BTreeMap::new();
            for (i, p) in fam.iter().enumerate() {
                for &v in p {
                    if let Some(j) = owner.insert(v, i) {
                        return violation(format!(
                            "condition (1): {name} paths {} and {} share vertex {v}",
                            j + 1,
                            i + 1
                        ));
                    }
                }
            }
        }
        let hpos: Vec<BTreeMap<VertexId, usize>> = self
            .horizontal
            .iter()
            .map(|p| p.iter().enumerate().map(|(k, &v)| (v, k)).collect())
            .collect();
        let vpos: Vec<BTreeMap<VertexId, usize>> = self
            .vertical
            .iter()
            .map(|p| p.iter().enumerate().map(|(k, &v)| (v, k)).collect())
            .collect();
        // (2)
        let mut spans_h = vec![vec![(0usize, 0usize); s]; r];
        let mut spans_v = vec![vec![(0usize, 0usize); r]; s];
        for i in 0..r {
            for j in 0..s {
                let common: Vec<VertexId> = self.meet(i, j);
                if common.is_empty() {
                    return violation(format!(
                        "condition (2): horizontal {} and vertical {} do not meet",
                        i + 1,
                        j + 1
                    ));
                }
                let hp: Vec<usize> = common.iter().map(|v| hpos[i][v]).collect();
                let mut vp: Vec<usize> = common.iter().map(|v| vpos[j][v]).collect();
                let h_contig = hp.windows(2).all(|w| w[1] == w[0] + 1);
                let asc = vp.windows(2).all(|w| w[1] == w[0] + 1);
                let desc = vp.windows(2).all(|w| w[0] == w[1] + 1);
                if !h_contig || !(asc || desc) {
                    return violation(format!(
                        "condition (2): horizontal {} and vertical {} meet in more than a path",
                        i + 1,
                        j + 1
                    ));
                }
                let boundary = i == 0 || i == r - 1 || j == 0 || j == s - 1;
                if boundary && common.len() != 1 {
                    return violation(format!(
                        "condition (2): boundary intersection of horizontal {} and vertical {} has {} vertices",
                        i + 1,
                        j + 1,
                        common.len()
                    ));
                }
                spans_h[i][j] = (hp[0], *hp.last().unwrap());
                vp.sort_unstable();
                spans_v[j][i] = (vp[0], *vp.last().unwrap());
            }
        }
        // (3)
        for i in 0..r {
            let p = &self.horizontal[i];
            if spans_h[i][0].0 != 0 || spans_h[i][s - 1].1 != p.len() - 1 {
                return violation(format!(
                    "condition (3): horizontal {} does not run from the first to the last vertical path",
                    i + 1
                ));
            }
            for j in 1..s {
                if spans_h[i][j].0 <= spans_h[i][j - 1].1 {
                    return violation(format!(
                        "condition (3): horizontal {} meets vertical {} before vertical {}",
                        i + 1,
                        j + 1,
                        j
                    ));
                }
            }
        }
        // (4)
        for j in 0..s {
            let q = &self.vertical[j];
            if spans_v[j][0].0 != 0 || spans_v[j][r - 1].1 != q.len() - 1 {
                return violation(format!(
                    "condition (4): vertical {} does not run from the first to the last horizontal path",
                    j + 1
                ));
            }
            for i in 1..r {
                if spans_v[j][i].0 <= spans_v[j][i - 1].1 {
                    return violation(format!(
                        "condition (4): vertical {} meets horizontal {} before horizontal {}",
                        j + 1,
                        i + 1,
                        i
                    ));
                }
            }
        }
        // every edge between two path vertices that lies on neither family is
        // allowed in the host; the mesh itself is the union of the paths
        Ok(())
    }

    /// Submesh on the horizontal index range `rows` and vertical range `cols`
    /// (0-based, inclusive).
    pub fn submesh(&self, rows: (usize, usize), cols: (usize, usize)) -> Result<Mesh> {
        let (r0, r1) = rows;
        let (c0, c1) = cols;
        if r0 >= r1 || c0 >= c1 || r1 >= self.rows() || c1 >= self.cols() {
            return input(format!(
                "submesh ranges {r0}..={r1} x {c0}..={c1} do not fit a {}x{} mesh",
                self.rows(),
                self.cols()
            ));
        }
        let rows: Vec<usize> = (r0..=r1).collect();
        let cols: Vec<usize> = (c0..=c1).collect();
        self.submesh_on(&rows, &cols)
    }

    /// Submesh on the given strictly increasing horizontal and vertical
    /// indices (0-based), each list of length at least two.
    pub fn submesh_on(&self, rows: &[usize], cols: &[usize]) -> Result<Mesh> {
        let increasing = |v: &[usize], n: usize| {
            v.len() >= 2 && v.windows(2).all(|w| w[0] < w[1]) && v[v.len() - 1] < n
        };
        if !increasing(rows, self.rows()) || !increasing(cols, self.cols()) {
            return input(format!(
                "submesh indices {rows:?} x {cols:?} do not fit a {}x{} mesh",
                self.rows(),
                self.cols()
            ));
        }
        let (c0, c1) = (cols[0], cols[cols.len() - 1]);
        let (r0, r1) = (rows[0], rows[rows.len() - 1]);
        let pos = |p: &Path, v: VertexId| p.iter().position(|&x| x == v).unwrap();
        let mut horizontal = Vec::new();
        for &i in rows {
            let p = &self.horizontal[i];
            let a = *self.meet(i, c0).last().unwrap();
            let b = self.meet(i, c1)[0];
            horizontal.push(p[pos(p, a)..=pos(p, b)].to_vec());
        }
        let last = horizontal.len() - 1;
        let mut vertical = Vec::new();
        for &j in cols {
            let q = &self.vertical[j];
            // on the side paths the new corners are fixed by the horizontal trim
            let top = if j == c0 {
                horizontal[0][0]
            } else if j == c1 {
                *horizontal[0].last().unwrap()
            } else {
                let m = self.meet(r0, j);
                *m.iter().max_by_key(|&&v| pos(q, v)).unwrap()
            };
            let bottom = if j == c0 {
                horizontal[last][0]
            } else if j == c1 {
                *horizontal[last].last().unwrap()
            } else {
                let m = self.meet(r1, j);
                *m.iter().min_by_key(|&&v| pos(q, v)).unwrap()
            };
            vertical.push(q[pos(q, top)..=pos(q, bottom)].to_vec());
        }
        Ok(Mesh {
            horizontal,
            vertical,
        })
    }

    /// Outer cycle `P_1 ∪ Q_s ∪ P_r ∪ Q_1` as a closed vertex sequence
    /// (first vertex not repeated), starting at the `P_1 ∩ Q_1` corner.
    pub fn outer_cycle(&self) -> Path {
        let (r, s) = (self.rows(), self.cols());
        let mut out: Path = self.horizontal[0].clone();
        out.extend(self.vertical[s - 1].iter().skip(1));
        out.extend(self.horizontal[r - 1].iter().rev().skip(1));
        let q1 = &self.vertical[0];
        out.extend(q1.iter().rev().skip(1).take(q1.len() - 2));
        out
    }

    /// Corners in the order `P_1∩Q_1, P_1∩Q_s, P_r∩Q_s, P_r∩Q_1`.
    pub fn corners(&self) -> [VertexId; 4] {
        let r = self.rows();
        [
            self.horizontal[0][0],
            *self.horizontal[0].last().unwrap(),
            *self.horizontal[r - 1].last().unwrap(),
            self.horizontal[r - 1][0],
        ]
    }

    /// Boundary cycles of the finite faces of the natural drawing, one per
    /// pair of consecutive horizontal paths and consecutive vertical paths.
    pub fn bricks(&self) -> Vec<Path> {
        let (r, s) = (self.rows(), self.cols());
        let pos = |p: &Path, v: VertexId| p.iter().position(|&x| x == v).unwrap();
        let mut out = Vec::new();
        for i in 0..r - 1 {
            // for each vertical path, where it leaves P_i and where it reaches P_{i+1}
            let legs: Vec<(VertexId, VertexId)> = (0..s)
                .map(|j| {
                    let q = &self.vertical[j];
                    let a = *self.meet(i, j).iter().max_by_key(|&&v| pos(q, v)).unwrap();
                    let b = *self
                        .meet(i + 1, j)
                        .iter()
                        .min_by_key(|&&v| pos(q, v))
                        .unwrap();
                    (a, b)
                })
                .collect();
            let top = &self.horizontal[i];
            let bot = &self.horizontal[i + 1];
            for j in 0..s - 1 {
                let (a, b) = legs[j];
                let (a2, b2) = legs[j + 1];
                let mut cyc: Path = top[pos(top, a)..=pos(top, a2)].to_vec();
                let q2 = &self.vertical[j + 1];
                cyc.extend(&q2[pos(q2, a2) + 1..=pos(q2, b2)]);
                cyc.extend(bot[pos(bot, b)..pos(bot, b2)].iter().rev());
                let q1 = &self.vertical[j];
                cyc.extend(q1[pos(q1, a) + 1..pos(q1, b)].iter().rev());
                out.push(cyc);
            }
        }
        out
    }
}

/// A wall: an `r × r` mesh together with its chosen pegs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub mesh: Mesh,
    pub pegs: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallFeatures {
    pub corners: [VertexId; 4],
    pub pegs: VertexSet,
    pub outer_cycle: Path,
    pub bricks: Vec<Path>,
}

impl Wall {
    pub fn size(&self) -> usize {
        self.mesh.rows()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.mesh.vertex_set()
    }

    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.mesh.rows() != self.mesh.cols() {
            return violation(format!(
                "a wall needs as many horizontal as vertical paths ({} vs {})",
                self.mesh.rows(),
                self.mesh.cols()
            ));
        }
        self.mesh.check(g)?;
        let outer: VertexSet = self.mesh.outer_cycle().into_iter().collect();
        if let Some(p) = self.pegs.iter().find(|p| !outer.contains(p)) {
            return violation(format!("peg {p} is not on the outer cycle"));
        }
        Ok(())
    }

    /// Wall built from a mesh with pegs taken as the outer-cycle vertices of
    /// degree two in the wall itself.
    pub fn from_mesh(g: &Graph, mesh: Mesh) -> Result<Wall> {
        let wg = mesh.graph(g)?;
        let pegs = mesh
            .outer_cycle()
            .into_iter()
            .filter(|&v| wg.simple_degree(v) == 2)
            .collect();
        let w = Wall { mesh, pegs };
        w.check(g)?;
        Ok(w)
    }
}

/// Corners, pegs, outer cycle and bricks of a valid wall.
pub fn wall_features(g: &Graph, w: &Wall) -> Result<WallFeatures> {
    w.check(g).map_err(|e| Error::Input(e.to_string()))?;
    Ok(WallFeatures {
        corners: w.mesh.corners(),
        pegs: w.pegs.clone(),
        outer_cycle: w.mesh.outer_cycle(),
        bricks: w.mesh.bricks(),
    })
}

/// Vertex id of `(i, j)` in the elementary `r`-wall (`i ∈ [2r]`, `j ∈ [r]`).
pub fn elementary_id(r: usize, i: usize, j: usize) -> VertexId {
    ((j - 1) * 2 * r + (i - 1)) as VertexId
}

/// The elementary `r`-wall and its wall structure.
pub fn build_elementary_wall(r: usize) -> Result<(Graph, Wall)> {
    if r < 2 {
        return input("an elementary wall needs r >= 2");
    }
    let id = |i: usize, j: usize| elementary_id(r, i, j);
    let dropped = [
        (1, 1),
        if r.is_multiple_of(2) {
            (1, r)
        } else {
            (2 * r, r)
        },
    ];
    let alive = |i: usize, j: usize| !dropped.contains(&(i, j));
    let mut g = Graph::new();
    for j in 1..=r {
        for i in 1..=2 * r {
            if alive(i, j) {
                g.add_vertex(id(i, j));
            }
        }
    }
    for j in 1..=r {
        for i in 1..2 * r {
            if alive(i, j) && alive(i + 1, j) {
                g.add_edge(id(i, j), id(i + 1, j));
            }
        }
    }
    for j in 1..r {
        for i in 1..=2 * r {
            // odd columns keep rungs above even rows, even columns above odd rows
            let keep = (i % 2 == 1) == (j % 2 == 0);
            if keep && alive(i, j) && alive(i, j + 1) {
                g.add_edge(id(i, j), id(i, j + 1));
            }
        }
    }
    let mut vertical = Vec::new();
    for k in 1..=r {
        let mut q = Vec::new();
        for j in 1..=r {
            // column used to enter row j and column used to leave it
            let enter = if j == 1 || j % 2 == 0 {
                2 * k
            } else {
                2 * k - 1
            };
            let leave = if j % 2 == 1 { 2 * k } else { 2 * k - 1 };
            if j == 1 {
                q.push(id(2 * k, 1));
            } else if j == r {
                q.push(id(enter, j));
            } else {
                q.push(id(enter, j));
                q.push(id(leave, j));
            }
        }
        vertical.push(q);
    }
    let mut horizontal = Vec::new();
    for j in 1..=r {
        let first: BTreeSet<VertexId> = vertical[0].iter().copied().collect();
        let last: BTreeSet<VertexId> = vertical[r - 1].iter().copied().collect();
        let row: Vec<VertexId> = (1..=2 * r)
            .filter(|&i| alive(i, j))
            .map(|i| id(i, j))
            .collect();
        let a = row.iter().rposition(|v| first.contains(v)).unwrap();
        let b = row.iter().position(|v| last.contains(v)).unwrap();
        horizontal.push(row[a..=b].to_vec());
    }
    let pegs = g.vertices().filter(|&v| g.degree(v) == 2).collect();
    let wall = Wall {
        mesh: Mesh {
            horizontal,
            vertical,
        },
        pegs,
    };
    wall.check(&g)?;
    Ok((g, wall))
}

/// Subwall on horizontal paths `rows` and vertical paths `cols`
/// (0-based, inclusive, equal lengths). Pegs are the outer-cycle vertices
/// where the parent wall continues outwards, plus the corners and any
/// parent pegs on the new outer cycle.
pub fn subwall_extract(
    g: &Graph,
    w: &Wall,
    rows: (usize, usize),
    cols: (usize, usize),
) -> Result<Wall> {
    if rows.1 < rows.0 || cols.1 < cols.0 {
        return input("empty subwall range");
    }
    if rows.1 - rows.0 != cols.1 - cols.0 {
        return input("subwall ranges must have equal length");
    }
    if rows == (0, w.size() - 1) && cols == rows {
        return Ok(w.clone());
    }
    let mesh = w.mesh.submesh(rows, cols)?;
    let parent = w.mesh.graph(g)?;
    let inside = mesh.vertex_set();
    let outer = mesh.outer_cycle();
    let mut pegs: VertexSet = mesh.corners().into_iter().collect();
    for &v in &outer {
        if parent.neighbors(v).iter().any(|u| !inside.contains(u)) || w.pegs.contains(&v) {
            pegs.insert(v);
        }
    }
    let sub = Wall { mesh, pegs };
    sub.check(g)?;
    Ok(sub)
}

/// The canonical grid contraction of a mesh.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridContraction {
    pub rows: usize,
    pub cols: usize,
    pub f: BTreeMap<VertexId, Coord>,
}

/// Intersections map to their grid vertex; path vertices strictly between
/// two consecutive crossings map to the crossing before them.
pub fn grid_contraction(m: &Mesh) -> GridContraction {
    let (r, s) = (m.rows(), m.cols());
    let mut f = BTreeMap::new();
    let mut owner_v: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (j, q) in m.vertical.iter().enumerate() {
        for &v in q {
            owner_v.insert(v, j);
        }
    }
    let mut owner_h: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, p) in m.horizontal.iter().enumerate() {
        for &v in p {
            owner_h.insert(v, i);
        }
    }
    for (i, p) in m.horizontal.iter().enumerate() {
        let mut cur = 0usize;
        for &v in p {
            if let Some(&j) = owner_v.get(&v) {
                cur = j;
            }
            f.insert(v, (i + 1, cur + 1));
        }
    }
    for (j, q) in m.vertical.iter().enumerate() {
        let mut cur = 0usize;
        for &v in q {
            if let Some(&i) = owner_h.get(&v) {
                cur = i;
                continue;
            }
            f.insert(v, (cur + 1, j + 1));
        }
    }
    GridContraction {
        rows: r,
        cols: s,
        f,
    }
}

impl GridContraction {
    pub fn fiber(&self, c: Coord) -> VertexSet {
        self.f
            .iter()
            .filter(|(_, &x)| x == c)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn fibers(&self) -> BTreeMap<Coord, VertexSet> {
        let mut out: BTreeMap<Coord, VertexSet> = BTreeMap::new();
        for (&v, &c) in &self.f {
            out.entry(c).or_default().insert(v);
        }
        out
    }

    /// Mesh distance; `None` when a vertex is not on the mesh.
    pub fn distance(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let a = self.f.get(&u)?;
        let b = self.f.get(&v)?;
        Some(grid_distance_unchecked(*a, *b, self.rows, self.cols))
    }

    /// All mesh vertices at distance less than `l` from `x`.
    pub fn ball(&self, x: VertexId, l: usize) -> VertexSet {
        let Some(&c) = self.f.get(&x) else {
            return VertexSet::new();
        };
        self.f
            .iter()
            .filter(|(_, &y)| grid_distance_unchecked(c, y, self.rows, self.cols) < l)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Union of the balls around a set of centres.
    pub fn balls(&self, centres: &VertexSet, l: usize) -> VertexSet {
        let cs: BTreeSet<Coord> = centres
            .iter()
            .filter_map(|z| self.f.get(z).copied())
            .collect();
        self.f
            .iter()
            .filter(|(_, &y)| {
                cs.iter()
                    .any(|&c| grid_distance_unchecked(c, y, self.rows, self.cols) < l)
            })
            .map(|(&v, _)| v)
            .collect()
    }
}

pub fn mesh_distance(gc: &GridContraction, u: VertexId, v: VertexId) -> Option<usize> {
    gc.distance(u, v)
}

pub fn ball(gc: &GridContraction, x: VertexId, l: usize) -> VertexSet {
    gc.ball(x, l)
}

fn boundary_depth(c: Coord, r: usize, s: usize) -> usize {
    c.0.min(c.1).min(r + 1 - c.0).min(s + 1 - c.1)
}

pub(crate) fn grid_distance_unchecked(a: Coord, b: Coord, r: usize, s: usize) -> usize {
    let inner = a.0.abs_diff(b.0).max(a.1.abs_diff(b.1));
    let outer = boundary_depth(a, r, s) + boundary_depth(b, r, s) - 1;
    inner.min(outer)
}

/// Distance between two vertices of the `r × s` grid.
pub fn grid_distance(a: Coord, b: Coord, r: usize, s: usize) -> Result<usize> {
    for c in [a, b] {
        if c.0 < 1 || c.0 > r || c.1 < 1 || c.1 > s {
            return input(format!("coordinate {c:?} outside the {r}x{s} grid"));
        }
    }
    Ok(grid_distance_unchecked(a, b, r, s))
}

/// Vertex id of `(x, y)` in an `n`-column grid.
pub fn grid_id(cols: usize, x: usize, y: usize) -> VertexId {
    ((x - 1) * cols + (y - 1)) as VertexId
}

/// The `rows × cols` grid with its mesh (horizontal path `i` is `{(i, y)}`).
pub fn build_grid(rows: usize, cols: usize) -> (Graph, Mesh) {
    let mut g = Graph::new();
    for x in 1..=rows {
        for y in 1..=cols {
            g.add_vertex(grid_id(cols, x, y));
        }
    }
    for x in 1..=rows {
        for y in 1..cols {
            g.add_edge(grid_id(cols, x, y), grid_id(cols, x, y + 1));
        }
    }
    for y in 1..=cols {
        for x in 1..rows {
            g.add_edge(grid_id(cols, x, y), grid_id(cols, x + 1, y));
        }
    }
    let horizontal = (1..=rows)
        .map(|x| (1..=cols).map(|y| grid_id(cols, x, y)).collect())
        .collect();
    let vertical = (1..=cols)
        .map(|y| (1..=rows).map(|x| grid_id(cols, x, y)).collect())
        .collect();
    (
        g,
        Mesh {
            horizontal,
            vertical,
        },
    )
}

/// `H¹_{2r}`: the `2r × 2r` grid with crossing edges in each face of the
/// middle row of faces.
#[derive(Clone, Debug)]
pub struct H1 {
    pub n: usize,
    pub graph: Graph,
    pub grid: Mesh,
}

impl H1 {
    pub fn id(&self, x: usize, y: usize) -> VertexId {
        grid_id(self.n, x, y)
    }

    pub fn coord(&self, v: VertexId) -> Coord {
        let v = v as usize;
        (v / self.n + 1, v % self.n + 1)
    }
}

pub fn build_h1(r: usize) -> Result<H1> {
    if r < 1 {
        return input("H1 needs r >= 1");
    }
    let n = 2 * r;
    let (mut g, grid) = build_grid(n, n);
    for i in 1..n {
        g.add_edge(grid_id(n, i, r), grid_id(n, i + 1, r + 1));
        g.add_edge(grid_id(n, i, r + 1), grid_id(n, i + 1, r));
    }
    Ok(H1 { n, graph: g, grid })
}

/// A strip of consecutive horizontal paths and the candidate subwalls in it.
#[derive(Clone, Debug)]
pub struct Strip {
    /// 0-based index of the first horizontal path of the strip.
    pub first: usize,
    pub height: usize,
    pub subwalls: Vec<Wall>,
    /// Index ranges (rows, columns) of each subwall inside the big wall.
    pub ranges: Vec<((usize, usize), (usize, usize))>,
}

/// Vertices of the strip on horizontal paths `first..first+height`.
pub fn strip_vertices(m: &Mesh, first: usize, height: usize) -> VertexSet {
    let mut out: VertexSet = VertexSet::new();
    for p in &m.horizontal[first..first + height] {
        out.extend(p.iter().copied());
    }
    let last = first + height - 1;
    for (j, q) in m.vertical.iter().enumerate() {
        let pos = |v: VertexId| q.iter().position(|&x| x == v).unwrap();
        let a = m.meet(first, j).into_iter().map(pos).min().unwrap();
        let b = m.meet(last, j).into_iter().map(pos).max().unwrap();
        out.extend(q[a..=b].iter().copied());
    }
    out
}

/// Picks the first strip avoiding `forbidden` and places `t(t-1)` subwalls
/// in it, left to right, clear of the strip's first and last `margin`
/// paths and of the wall's first and last `margin` vertical paths.
pub fn strip_subwalls(
    g: &Graph,
    w: &Wall,
    cfg: &crate::config::Config,
    forbidden: &VertexSet,
) -> Result<Strip> {
    place_subwalls(g, w, cfg, forbidden, cfg.tt())
}

/// As [`strip_subwalls`] with `count` subwalls instead of `t(t-1)`.
pub fn place_subwalls(
    g: &Graph,
    w: &Wall,
    cfg: &crate::config::Config,
    forbidden: &VertexSet,
    count: usize,
) -> Result<Strip> {
    if count == 0 {
        return input("a strip needs at least one subwall");
    }
    let big = w.size();
    let h = cfg.strip_height;
    let size = cfg.subwall_size;
    let span = cfg.margin + count * size + (count - 1) * (cfg.gap.max(1) - 1) + cfg.margin;
    if h > big || span > big || size < 2 {
        return Err(Error::Capacity(format!(
            "a {big}-wall cannot hold a strip of height {h} with {count} subwalls of size {size} (needs {} paths)",
            span.max(h)
        )));
    }
    let first = (0..=big - h)
        .find(|&i| strip_vertices(&w.mesh, i, h).is_disjoint(forbidden))
        .ok_or_else(|| {
            Error::Capacity(format!(
                "every strip of height {h} meets the {} forbidden vertices",
                forbidden.len()
            ))
        })?;
    let r0 = first + cfg.margin;
    let rows = (r0, r0 + size - 1);
    let mut subwalls = Vec::new();
    let mut ranges = Vec::new();
    let mut c0 = cfg.margin;
    for _ in 0..count {
        let cols = (c0, c0 + size - 1);
        subwalls.push(subwall_extract(g, w, rows, cols)?);
        ranges.push((rows, cols));
        c0 += size - 1 + cfg.gap.max(1);
    }
    // pairwise distance between the index rectangles
    for a in 0..count {
        for b in a + 1..count {
            let ((ra0, ra1), (ca0, ca1)) = ranges[a];
            let ((rb0, rb1), (cb0, cb1)) = ranges[b];
            let mut best = usize::MAX;
            for x1 in ra0..=ra1 {
                for y1 in [ca0, ca1] {
                    for x2 in rb0..=rb1 {
                        for y2 in [cb0, cb1] {
                            let d = grid_distance_unchecked(
                                (x1 + 1, y1 + 1),
                                (x2 + 1, y2 + 1),
                                big,
                                big,
                            );
                            best = best.min(d);
                        }
                    }
                }
            }
            if best < cfg.gap {
                return Err(Error::Capacity(format!(
                    "subwalls {} and {} are only {best} apart (need {})",
                    a + 1,
                    b + 1,
                    cfg.gap
                )));
            }
        }
    }
    Ok(Strip {
        first,
        height: h,
        subwalls,
        ranges,
    })
}
