use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{grasp_cert, h1_sets, interval_extremes, longest_chain, model_defect, GraspCert};
use crate::config::{Config, Profile};
use crate::error::{capacity, input, internal, Result};
use crate::graph::{Graph, MinorModel, Path, Subgraph, VertexSet};
use crate::wall::{Coord, GridContraction, Mesh};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Pairwise disjoint column intervals, one crossing per link.
    Disjoint,
    /// Intervals sharing a column; links are paired up through the far side.
    CommonColumn,
}

#[derive(Clone, Debug)]
pub struct MatchingOutcome {
    pub model: MinorModel,
    pub grasp: GraspCert,
    pub branch: Branch,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    /// `(x, y) -> (Y + 1 - y, x)`
    Rotate,
    /// `(x, y) -> (y, x)`
    Swap,
}

/// Grid coordinates after a sequence of symmetries of the original grid.
struct Frame {
    ops: Vec<(Op, (usize, usize))>,
    dims: (usize, usize),
}

impl Frame {
    fn apply(&mut self, op: Op, pts: &mut [Link]) {
        let (_, y) = self.dims;
        let f = |c: Coord| match op {
            Op::Rotate => (y + 1 - c.1, c.0),
            Op::Swap => (c.1, c.0),
        };
        for l in pts.iter_mut() {
            l.p = f(l.p);
            l.q = f(l.q);
        }
        self.ops.push((op, self.dims));
        self.dims = (self.dims.1, self.dims.0);
    }

    fn original(&self, mut c: Coord) -> Coord {
        for &(op, (_, y)) in self.ops.iter().rev() {
            c = match op {
                Op::Rotate => (c.1, y + 1 - c.0),
                Op::Swap => (c.1, c.0),
            };
        }
        c
    }
}

#[derive(Clone, Copy, Debug)]
struct Link {
    id: usize,
    p: Coord,
    q: Coord,
}

impl Link {
    fn orient(&mut self) {
        let (p, q) = (self.p, self.q);
        if !(p.0 < q.0 || (p.0 == q.0 && p.1 > q.1)) {
            std::mem::swap(&mut self.p, &mut self.q);
        }
    }

    fn span(&self) -> (i64, i64) {
        let (a, b) = (self.p.0 as i64, self.q.0 as i64);
        if a < b {
            (a, b)
        } else {
            (a - 1, a + 1)
        }
    }
}

/// Grid cells plus whole links, in frame coordinates.
#[derive(Clone, Debug, Default)]
struct Piece {
    cells: BTreeSet<Coord>,
    links: BTreeSet<usize>,
}

impl Piece {
    fn absorb(&mut self, other: &Piece) {
        self.cells.extend(other.cells.iter().copied());
        self.links.extend(other.links.iter().copied());
    }
}

/// A link for the crossing construction: ends in the frame and what it
/// carries besides its end cells.
struct Crossing {
    p: Coord,
    q: Coord,
    extra: Piece,
}

/// Realizes H¹ of side `n` in the `dims` grid plus the links of
/// `crossings` (sorted left to right); returns the piece of every H¹ vertex.
fn h1_pieces(
    dims: (usize, usize),
    n: usize,
    crossings: &[Crossing],
) -> Result<BTreeMap<Coord, Piece>> {
    let (xmax, ymax) = dims;
    let r = n / 2;
    if crossings.len() + 1 != n {
        return internal(format!("{} crossings for H1 of side {n}", crossings.len()));
    }
    // band rows r+1 ..= ymax-r lie between the two halves of the b-lines
    let band = (r + 1, ymax.saturating_sub(r));
    let mut spans = Vec::with_capacity(crossings.len());
    for c in crossings {
        for y in [c.p.1, c.q.1] {
            if y < band.0 + 1 || y + 1 > band.1 {
                return internal(format!("link end row {y} leaves the band {band:?}"));
            }
        }
        let (l, h) = if c.p.0 < c.q.0 {
            (c.p.0, c.q.0)
        } else if c.p.0 == c.q.0 && c.p.0 >= 2 {
            (c.p.0 - 1, c.p.0 + 1)
        } else {
            return internal("crossing links must run left to right");
        };
        if h > xmax || spans.last().is_some_and(|&(_, ph)| ph >= l) {
            return internal(format!(
                "crossing span {l}..={h} overlaps or leaves the grid"
            ));
        }
        spans.push((l, h));
    }
    let col = |a: usize| if a == 1 { 1 } else { spans[a - 2].1 };
    let end = |a: usize| if a == n { xmax } else { col(a + 1) - 1 };
    let mut out: BTreeMap<Coord, Piece> = BTreeMap::new();
    for a in 1..=n {
        for b in 1..=n {
            let y = if b <= r { b } else { ymax - n + b };
            let piece = out.entry((a, b)).or_default();
            piece.cells.extend((col(a)..=end(a)).map(|x| (x, y)));
        }
    }
    for (k, c) in crossings.iter().enumerate() {
        let a = k + 1;
        let (l, h) = spans[k];
        // mirror so that the left end is not above the right end
        let flip = c.p.1 > c.q.1;
        let my = |y: usize| if flip { ymax + 1 - y } else { y };
        let (lo, hi) = if flip { (r + 1, r) } else { (r, r + 1) };
        let (yp, yq) = (my(c.p.1), my(c.q.1));
        let top = ymax - r;
        let mut add = |a: usize, b: usize, x: usize, ys: &mut dyn Iterator<Item = usize>| {
            let piece = out.get_mut(&(a, b)).unwrap();
            piece.cells.extend(ys.map(|y| (x, my(y))));
        };
        if c.p.0 < c.q.0 {
            add(a, lo, l, &mut (r + 1..=yp));
            add(a, hi, l, &mut (yp + 1..=top));
            add(a + 1, lo, h, &mut (r + 1..yq));
            add(a + 1, hi, h, &mut (yq..=top));
            if yq >= yp + 2 {
                for x in l + 1..h {
                    add(a, hi, x, &mut std::iter::once(yp + 1));
                }
            } else {
                if h < l + 2 {
                    return internal("link ends too close for a crossing");
                }
                add(a, hi, l + 1, &mut (yp - 1..=yp + 1));
                for x in l + 2..h {
                    add(a, hi, x, &mut std::iter::once(yp - 1));
                }
            }
        } else {
            let x = c.p.0;
            if yq < yp + 2 {
                return internal("link ends too close for a crossing");
            }
            add(a, lo, x, &mut (r + 1..=yp));
            add(a + 1, hi, x, &mut (yq..=top));
            add(a + 1, hi, x + 1, &mut std::iter::once(top));
            add(a, hi, x - 1, &mut (yp + 1..=top));
            add(a, hi, x, &mut std::iter::once(yp + 1));
            add(a + 1, lo, x + 1, &mut (r + 1..top));
        }
        out.get_mut(&(a, lo)).unwrap().absorb(&c.extra);
    }
    Ok(out)
}

fn check_links(
    g: &Graph,
    m: &Subgraph,
    gc: &GridContraction,
    links: &[Path],
    sep: usize,
) -> Result<()> {
    let mut used = VertexSet::new();
    let mut ends = Vec::new();
    for (i, p) in links.iter().enumerate() {
        if p.len() < 2 || !g.is_path(p) {
            return input(format!("link {i} is not a path with an edge"));
        }
        let (a, b) = (p[0], p[p.len() - 1]);
        if !m.vertices.contains(&a) || !m.vertices.contains(&b) {
            return input(format!("link {i} does not end in the mesh"));
        }
        if p[1..p.len() - 1].iter().any(|v| m.vertices.contains(v)) {
            return input(format!("link {i} has an inner vertex on the mesh"));
        }
        if p.len() == 2
            && !g
                .incident(a)
                .iter()
                .any(|&(e, w)| w == b && !m.edges.contains(&e))
        {
            return input(format!("link {i} is an edge of the mesh"));
        }
        for &v in p {
            if !used.insert(v) {
                return input(format!("links are not disjoint at vertex {v}"));
            }
        }
        ends.push(a);
        ends.push(b);
    }
    for (i, &u) in ends.iter().enumerate() {
        for &v in &ends[i + 1..] {
            let d = gc.distance(u, v).unwrap();
            if d < sep {
                return input(format!("link ends {u} and {v} are at distance {d} < {sep}"));
            }
        }
    }
    Ok(())
}

/// Builds a K_t model grasped by `mesh` from links (paths through `g`
/// joining far apart mesh vertices and otherwise avoiding the mesh).
pub fn kt_from_matching(
    g: &Graph,
    mesh: &Mesh,
    gc: &GridContraction,
    links: &[Path],
    t: usize,
    cfg: &Config,
) -> Result<MatchingOutcome> {
    if t < 2 {
        return input("K_t models need t >= 2");
    }
    let m = mesh.subgraph(g)?;
    if cfg.profile != Profile::Relaxed && (links.len() as u128) < cfg.k {
        return capacity(format!(
            "{} links given, the {} profile needs {}",
            links.len(),
            cfg.profile,
            cfg.k
        ));
    }
    check_links(g, &m, gc, links, cfg.l_full)?;
    let tt = t * (t - 1);
    let n = tt;
    let need = n - 1;

    let mut frame = Frame {
        ops: Vec::new(),
        dims: (gc.rows, gc.cols),
    };
    let (xm, ym) = frame.dims;
    let inner = |c: Coord| tt < c.0 && c.0 + tt < xm + 1 && tt < c.1 && c.1 + tt < ym + 1;
    let mut lks: Vec<Link> = links
        .iter()
        .enumerate()
        .map(|(id, p)| Link {
            id,
            p: gc.f[&p[0]],
            q: gc.f[&p[p.len() - 1]],
        })
        .filter(|l| inner(l.p) && inner(l.q))
        .collect();
    for l in &mut lks {
        l.orient();
    }
    let (mut up, mut down): (Vec<Link>, Vec<Link>) = lks.into_iter().partition(|l| l.p.1 <= l.q.1);
    if down.len() > up.len() {
        frame.apply(Op::Rotate, &mut down);
        for l in &mut down {
            l.orient();
        }
        up = down;
    }
    let mut lks = up;
    // all distinct first coordinates, or all equal
    let mut groups: BTreeMap<usize, Vec<Link>> = BTreeMap::new();
    for l in &lks {
        groups.entry(l.p.0).or_default().push(*l);
    }
    let largest = groups
        .values()
        .max_by_key(|v| v.len())
        .cloned()
        .unwrap_or_default();
    if largest.len() > groups.len() {
        lks = largest;
        frame.apply(Op::Swap, &mut lks);
    } else {
        lks = groups.values().map(|v| v[0]).collect();
    }

    let spans: Vec<(i64, i64)> = lks.iter().map(Link::span).collect();
    let (disjoint, _, _) = interval_extremes(&spans);
    let (pieces, branch) = if disjoint.len() >= need {
        let mut chosen: Vec<Link> = disjoint[..need].iter().map(|&i| lks[i]).collect();
        chosen.sort_by_key(|l| l.p.0);
        let crossings: Vec<Crossing> = chosen
            .iter()
            .map(|l| Crossing {
                p: l.p,
                q: l.q,
                extra: Piece {
                    cells: BTreeSet::new(),
                    links: [l.id].into(),
                },
            })
            .collect();
        (h1_pieces(frame.dims, n, &crossings)?, Branch::Disjoint)
    } else {
        let intervals: Vec<(i64, i64)> = lks.iter().map(|l| (l.p.0 as i64, l.q.0 as i64)).collect();
        let (_, z, members) = interval_extremes(&intervals);
        let z = z as usize;
        let mut js: Vec<Link> = members
            .iter()
            .map(|&i| lks[i])
            .filter(|l| l.p.0 < z)
            .collect();
        js.sort_by_key(|l| l.p.0);
        let ymax = frame.dims.1;
        // a path through every cell of the far side, column by column
        let pos = |c: Coord| {
            let k = c.0 - z;
            k * ymax
                + if k.is_multiple_of(2) {
                    c.1 - 1
                } else {
                    ymax - c.1
                }
        };
        let cell = |p: usize| {
            let k = p / ymax;
            let y = if k.is_multiple_of(2) {
                p % ymax + 1
            } else {
                ymax - p % ymax
            };
            (z + k, y)
        };
        let seq: Vec<usize> = js.iter().map(|l| pos(l.q)).collect();
        let a = longest_chain(&seq, |a, b| a <= b);
        let b = longest_chain(&seq, |a, b| a >= b);
        let idx = if a.len() >= b.len() { a } else { b };
        if idx.len() < 2 * need {
            return capacity(format!(
                "links give {} disjoint intervals and a monotone run of {}; {need} crossings are needed",
                disjoint.len(),
                idx.len()
            ));
        }
        let crossings: Vec<Crossing> = idx[..2 * need]
            .chunks(2)
            .map(|pair| {
                let (u, w) = (js[pair[0]], js[pair[1]]);
                let (s, e) = (pos(u.q).min(pos(w.q)), pos(u.q).max(pos(w.q)));
                Crossing {
                    p: u.p,
                    q: w.p,
                    extra: Piece {
                        cells: (s..=e).map(cell).collect(),
                        links: [u.id, w.id].into(),
                    },
                }
            })
            .collect();
        (
            h1_pieces((z - 1, ymax), n, &crossings)?,
            Branch::CommonColumn,
        )
    };

    let fibers = gc.fibers();
    let mut sets = Vec::with_capacity(t);
    for s in h1_sets(t) {
        let mut piece = Piece::default();
        for c in &s {
            piece.absorb(&pieces[c]);
        }
        let mut lifted = VertexSet::new();
        for &c in &piece.cells {
            lifted.extend(fibers[&frame.original(c)].iter().copied());
        }
        for &i in &piece.links {
            let p = &links[i];
            lifted.extend(p[1..p.len() - 1].iter().copied());
        }
        sets.push(lifted);
    }
    let model = MinorModel::with_witnesses(sets, g);
    let grasp = grasp_cert(mesh, &model);
    if let Some(why) = model_defect(g, &model, t, Some((mesh, &grasp))) {
        return internal(format!("the {branch:?} construction failed: {why}"));
    }
    Ok(MatchingOutcome {
        model,
        grasp,
        branch,
    })
}
