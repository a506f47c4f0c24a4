//! Building models of K_t: interval and monotone helpers, the model in H¹,
//! matchings to minors and the prune-or-minor driver for meshes.

mod matching;
mod prune;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::graph::{Graph, MinorModel, VertexSet};
use crate::wall::{build_h1, Coord, Mesh, H1};

pub use matching::{kt_from_matching, Branch, MatchingOutcome};
pub use prune::{disjoint_y_paths, mesh_prune_or_kt, prune_indices, PruneOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathFamily {
    Horizontal,
    Vertical,
}

/// For every branch set, the family and indices of the mesh paths it meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraspCert {
    pub sets: Vec<(PathFamily, Vec<usize>)>,
}

fn family_paths(mesh: &Mesh, fam: PathFamily) -> &[Vec<u32>] {
    match fam {
        PathFamily::Horizontal => &mesh.horizontal,
        PathFamily::Vertical => &mesh.vertical,
    }
}

/// Picks, per branch set, the family it meets more often.
pub fn grasp_cert(mesh: &Mesh, model: &MinorModel) -> GraspCert {
    let met = |fam, s: &VertexSet| -> Vec<usize> {
        family_paths(mesh, fam)
            .iter()
            .enumerate()
            .filter(|(_, p)| p.iter().any(|v| s.contains(v)))
            .map(|(i, _)| i)
            .collect()
    };
    let sets = model
        .branch_sets
        .iter()
        .map(|s| {
            let h = met(PathFamily::Horizontal, s);
            let v = met(PathFamily::Vertical, s);
            if h.len() >= v.len() {
                (PathFamily::Horizontal, h)
            } else {
                (PathFamily::Vertical, v)
            }
        })
        .collect();
    GraspCert { sets }
}

pub fn check_grasp(mesh: &Mesh, model: &MinorModel, cert: &GraspCert, t: usize) -> bool {
    if t > mesh.rows().min(mesh.cols()) || cert.sets.len() != model.t() {
        return false;
    }
    cert.sets
        .iter()
        .zip(&model.branch_sets)
        .all(|((fam, idx), s)| {
            let paths = family_paths(mesh, *fam);
            let distinct: BTreeSet<_> = idx.iter().collect();
            distinct.len() == idx.len()
                && idx.len() >= t
                && idx
                    .iter()
                    .all(|&i| i < paths.len() && paths[i].iter().any(|v| s.contains(v)))
        })
}

/// True iff `model` is a model of K_t in `g`, and, when a mesh and
/// certificate are given, the model is grasped by the mesh.
pub fn validate_model(
    g: &Graph,
    model: &MinorModel,
    t: usize,
    grasp: Option<(&Mesh, &GraspCert)>,
) -> bool {
    model_defect(g, model, t, grasp).is_none()
}

/// The first failed check of [`validate_model`], described.
pub fn model_defect(
    g: &Graph,
    model: &MinorModel,
    t: usize,
    grasp: Option<(&Mesh, &GraspCert)>,
) -> Option<String> {
    if model.t() != t {
        return Some(format!("{} branch sets, expected {t}", model.t()));
    }
    let mut owner = BTreeMap::new();
    for (i, s) in model.branch_sets.iter().enumerate() {
        if s.is_empty() || !g.induces_connected(s) {
            return Some(format!("branch set {i} is empty or disconnected"));
        }
        for &v in s {
            if !g.has_vertex(v) {
                return Some(format!("vertex {v} of branch set {i} is not in the graph"));
            }
            if let Some(j) = owner.insert(v, i) {
                return Some(format!("branch sets {j} and {i} share vertex {v}"));
            }
        }
    }
    let mut pairs = BTreeSet::new();
    for &(i, j, e) in &model.witness_edges {
        let ok = g.endpoints(e).is_some_and(|(u, v)| {
            matches!((owner.get(&u), owner.get(&v)),
                (Some(&x), Some(&y)) if (x, y) == (i, j) || (x, y) == (j, i))
        });
        if !ok || i == j {
            return Some(format!("edge {e} does not join branch sets {i} and {j}"));
        }
        pairs.insert((i.min(j), i.max(j)));
    }
    if pairs.len() != t * (t - 1) / 2 {
        let missing = (0..t)
            .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
            .find(|p| !pairs.contains(p));
        return Some(format!("no witness edge for branch sets {missing:?}"));
    }
    match grasp {
        Some((mesh, cert)) if !check_grasp(mesh, model, cert, t) => {
            Some("the model is not grasped by the mesh".into())
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalSplit {
    /// Indices of pairwise disjoint intervals.
    Disjoint(Vec<usize>),
    /// A point and the indices of intervals containing it.
    Common { point: i64, members: Vec<usize> },
}

/// Maximum set of pairwise disjoint closed intervals (by right end) and a
/// point of maximum depth with its intervals.
pub(crate) fn interval_extremes(iv: &[(i64, i64)]) -> (Vec<usize>, i64, Vec<usize>) {
    let mut order: Vec<usize> = (0..iv.len()).collect();
    order.sort_by_key(|&i| (iv[i].1, iv[i].0, i));
    let mut disjoint = Vec::new();
    let mut last = None;
    for &i in &order {
        if last.is_none_or(|l| iv[i].0 > l) {
            disjoint.push(i);
            last = Some(iv[i].1);
        }
    }
    // depth is maximal at some left end
    let mut best = (0, i64::MIN, Vec::new());
    for &(p, _) in iv {
        let members: Vec<usize> = (0..iv.len())
            .filter(|&i| iv[i].0 <= p && p <= iv[i].1)
            .collect();
        if members.len() > best.0 || (members.len() == best.0 && p < best.1) {
            best = (members.len(), p, members);
        }
    }
    (disjoint, best.1, best.2)
}

/// Either `r` pairwise disjoint intervals or `s` intervals sharing a point.
pub fn intervals_split(iv: &[(i64, i64)], r: usize, s: usize) -> Result<IntervalSplit> {
    if r == 0 || s == 0 || iv.len() < (r - 1) * (s - 1) + 1 {
        return input(format!(
            "{} intervals do not reach (r-1)(s-1)+1 for r={r}, s={s}",
            iv.len()
        ));
    }
    if let Some(i) = iv.iter().position(|&(a, b)| a > b) {
        return input(format!("interval {i} is empty"));
    }
    let (mut disjoint, point, mut members) = interval_extremes(iv);
    if disjoint.len() >= r {
        disjoint.truncate(r);
        disjoint.sort_unstable();
        return Ok(IntervalSplit::Disjoint(disjoint));
    }
    if members.len() >= s {
        members.truncate(s);
        return Ok(IntervalSplit::Common { point, members });
    }
    crate::error::internal("interval split found neither branch")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monotone {
    NonDecreasing(Vec<usize>),
    NonIncreasing(Vec<usize>),
}

/// Longest subsequence whose consecutive elements satisfy `ok`, as indices.
pub(crate) fn longest_chain<T>(seq: &[T], ok: impl Fn(&T, &T) -> bool) -> Vec<usize> {
    let n = seq.len();
    let mut len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..i {
            if ok(&seq[j], &seq[i]) && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
                prev[i] = j;
            }
        }
    }
    let Some(mut i) = (0..n).max_by_key(|&i| (len[i], std::cmp::Reverse(i))) else {
        return Vec::new();
    };
    let mut out = vec![i];
    while prev[i] != usize::MAX {
        i = prev[i];
        out.push(i);
    }
    out.reverse();
    out
}

/// Either a non-decreasing subsequence of length `r` or a non-increasing one
/// of length `s`, as increasing index lists.
pub fn longest_monotone<T: PartialOrd>(seq: &[T], r: usize, s: usize) -> Result<Monotone> {
    if r == 0 || s == 0 || seq.len() < (r - 1) * (s - 1) + 1 {
        return input(format!(
            "sequence of length {} is shorter than (r-1)(s-1)+1 for r={r}, s={s}",
            seq.len()
        ));
    }
    let mut up = longest_chain(seq, |a, b| a <= b);
    if up.len() >= r {
        up.truncate(r);
        return Ok(Monotone::NonDecreasing(up));
    }
    let mut down = longest_chain(seq, |a, b| a >= b);
    if down.len() >= s {
        down.truncate(s);
        return Ok(Monotone::NonIncreasing(down));
    }
    crate::error::internal("no monotone subsequence of the promised length")
}

/// Branch sets of K_t in H¹ of side t(t-1), as coordinate sets; every set
/// meets the row with second coordinate 1.
pub(crate) fn h1_sets(t: usize) -> Vec<BTreeSet<Coord>> {
    if t == 2 {
        return vec![[(1, 1), (2, 2)].into(), [(2, 1), (1, 2)].into()];
    }
    let inner = (t - 1) * (t - 2);
    let top = (t - 1) * (t - 1);
    let r = t * (t - 1) / 2;
    let mut prev: Vec<BTreeSet<Coord>> = h1_sets(t - 1)
        .into_iter()
        .map(|s| s.into_iter().map(|(x, y)| (x, top + 1 - y)).collect())
        .collect();
    // order by the column where each set meets the row `top`, right to left
    let foot = |s: &BTreeSet<Coord>| s.iter().filter(|c| c.1 == top).map(|c| c.0).max();
    prev.sort_by_key(|s| std::cmp::Reverse(foot(s)));
    let mut sets = Vec::with_capacity(t);
    for (k, mut s) in prev.into_iter().enumerate() {
        let i = k + 1;
        let xi = foot(&s).expect("every set meets the first row");
        let c = inner + 2 * i - 1;
        s.extend((top..=top + i).map(|y| (xi, y)));
        s.extend((xi..=c).map(|x| (x, top + i)));
        s.extend((r + 1..=top + i).map(|y| (c, y)));
        s.extend((1..=r).map(|y| (c + 1, y)));
        sets.push(s);
    }
    let mut last = BTreeSet::new();
    for i in 1..t {
        let c = inner + 2 * i - 1;
        last.insert((c, r));
        last.insert((c + 1, r + 1));
    }
    last.extend((1..=r).map(|y| (inner + 1, y)));
    sets.push(last);
    sets
}

/// A model of K_t in H¹ of side t(t-1), grasped by its underlying grid.
pub fn h1_kt_model(t: usize) -> Result<(H1, MinorModel, GraspCert)> {
    if t < 2 {
        return input("K_t models need t >= 2");
    }
    let h = build_h1(t * (t - 1) / 2)?;
    let sets: Vec<VertexSet> = h1_sets(t)
        .into_iter()
        .map(|s| s.into_iter().map(|(x, y)| h.id(x, y)).collect())
        .collect();
    let model = MinorModel::with_witnesses(sets, &h.graph);
    let cert = grasp_cert(&h.grid, &model);
    Ok((h, model, cert))
}
