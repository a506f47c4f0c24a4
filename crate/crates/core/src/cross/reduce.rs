//! Elementary reductions, sequence replay and maximal reduction steps.

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::flow::VertexFlow;
use crate::graph::{fan, Graph, Separation, VertexId, VertexSet};

/// The sets B_1, ..., B_k of a reduction sequence; each A_i is recovered
/// from B_i and the current graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSequence {
    pub steps: Vec<VertexSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub step: usize,
    pub boundary: VertexSet,
    /// A vertex of B∖A joined to the protected set by |A∩B| paths.
    pub witness: VertexId,
}

/// A for a given B: every vertex outside B, every vertex of B with a
/// neighbour outside B, and every protected vertex.
pub(crate) fn a_side(g: &Graph, b: &VertexSet, x: &VertexSet) -> VertexSet {
    g.vertices()
        .filter(|v| {
            !b.contains(v) || x.contains(v) || g.neighbors(*v).iter().any(|w| !b.contains(w))
        })
        .collect()
}

fn linkage_witness(g: &Graph, sep: &Separation, x: &VertexSet) -> Option<VertexId> {
    let k = sep.order();
    sep.b
        .iter()
        .filter(|v| !sep.a.contains(v))
        .copied()
        .find(|&v| fan(g, v, x, k, &|_| true).len() >= k)
}

fn apply(g: &Graph, sep: &Separation) -> Graph {
    let mut h = g.induced(&sep.a);
    let bd: Vec<VertexId> = sep.boundary().into_iter().collect();
    for i in 0..bd.len() {
        for j in i + 1..bd.len() {
            h.add_edge(bd[i], bd[j]);
        }
    }
    h
}

/// G[A] with an edge added between every two vertices of A∩B, after
/// checking the order, containment and linkage conditions.
pub fn elementary_reduction(g: &Graph, sep: &Separation, x: &VertexSet) -> Result<Graph> {
    sep.check(g).map_err(|e| Error::Input(e.to_string()))?;
    if sep.order() > 3 {
        return input(format!("separation has order {}", sep.order()));
    }
    if !x.is_subset(&sep.a) {
        return input("the protected set is not contained in A");
    }
    if linkage_witness(g, sep, x).is_none() {
        return input("no vertex of B∖A has the required paths to the protected set");
    }
    Ok(apply(g, sep))
}

/// Replays a sequence from `g`, checking every step; returns the reduced
/// graph and one report per step.
pub fn replay_reduction_sequence(
    g: &Graph,
    x: &VertexSet,
    seq: &ReductionSequence,
) -> Result<(Graph, Vec<StepReport>)> {
    let mut cur = g.clone();
    let mut reports = Vec::new();
    for (i, b) in seq.steps.iter().enumerate() {
        let step = i + 1;
        let fail = |m: &str| Err(Error::Validation(format!("step {step}: {m}")));
        if !b.iter().all(|&v| cur.has_vertex(v)) {
            return fail("B has vertices outside the current graph");
        }
        let sep = Separation {
            a: a_side(&cur, b, x),
            b: b.clone(),
        };
        if sep.order() > 3 {
            return fail("the separation has order above three");
        }
        if !x.is_subset(&sep.a) {
            return fail("a protected vertex lies in B∖A");
        }
        let Some(witness) = linkage_witness(&cur, &sep, x) else {
            return fail("no vertex of B∖A is linked to the protected set");
        };
        reports.push(StepReport {
            step,
            boundary: sep.boundary(),
            witness,
        });
        cur = apply(&cur, &sep);
    }
    Ok((cur, reports))
}

/// For each vertex `w` outside `x` joined to `x` by at most three paths,
/// the largest B of a reduction with linkage vertex `w`: the side of the
/// minimum cut nearest to `x`, with every part it cuts off. Vertices found
/// to have four paths are recorded in `skip`; reductions never lower that.
pub(crate) fn maximal_sides(
    g: &Graph,
    x: &VertexSet,
    skip: &mut VertexSet,
) -> Vec<(VertexId, VertexSet)> {
    let mut out = Vec::new();
    let verts: Vec<VertexId> = g.vertices().collect();
    for w in verts {
        if x.contains(&w) || skip.contains(&w) {
            continue;
        }
        let mut flow = VertexFlow::new(g, &|_| true);
        flow.add_hub(w);
        flow.add_sinks(x);
        if flow.run(4) >= 4 {
            skip.insert(w);
            continue;
        }
        let (cut, _) = flow.sink_side_cut();
        let rest: VertexSet = g.vertices().filter(|v| !cut.contains(v)).collect();
        let mut b = cut;
        for comp in g.components_within(&rest) {
            if comp.is_disjoint(x) {
                b.extend(comp);
            }
        }
        if !a_side(g, &b, x).contains(&w) {
            out.push((w, b));
        }
    }
    out
}

fn largest(cands: Vec<(VertexId, VertexSet)>) -> Option<VertexSet> {
    cands
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
        .map(|c| c.1)
}

/// Applies maximal elementary reductions to the simple graph `g` until
/// none remains. Returns the reduced graph, the sets B_i and, per step,
/// the subgraph induced on B_i before the step with A_i∩B_i.
pub fn reduce_fully(
    g: &Graph,
    x: &VertexSet,
) -> (Graph, ReductionSequence, Vec<(Graph, VertexSet)>) {
    let mut cur = g.simplified();
    let mut seq = ReductionSequence::default();
    let mut parts = Vec::new();
    let mut skip = VertexSet::new();
    while let Some(b) = largest(maximal_sides(&cur, x, &mut skip)) {
        let sep = Separation {
            a: a_side(&cur, &b, x),
            b: b.clone(),
        };
        parts.push((cur.induced(&b), sep.boundary()));
        cur = apply(&cur, &sep).simplified();
        seq.steps.push(b);
    }
    (cur, seq, parts)
}

/// Whether no step of `seq` can be replaced by a strictly larger B.
pub fn is_optimal(g: &Graph, x: &VertexSet, seq: &ReductionSequence) -> Result<bool> {
    replay_reduction_sequence(g, x, seq)?;
    let mut cur = g.simplified();
    for b in &seq.steps {
        let mut skip = VertexSet::new();
        if maximal_sides(&cur, x, &mut skip)
            .iter()
            .any(|(_, big)| big.is_superset(b) && big != b)
        {
            return Ok(false);
        }
        let sep = Separation {
            a: a_side(&cur, b, x),
            b: b.clone(),
        };
        cur = apply(&cur, &sep).simplified();
    }
    Ok(true)
}

/// Enlarges the first non-maximal step to a maximal one and completes the
/// sequence greedily from there; optimal sequences come back unchanged.
pub fn optimalize(g: &Graph, x: &VertexSet, seq: &ReductionSequence) -> Result<ReductionSequence> {
    replay_reduction_sequence(g, x, seq)?;
    let mut cur = g.simplified();
    let mut out = ReductionSequence::default();
    for b in &seq.steps {
        let mut skip = VertexSet::new();
        let bigger: Vec<(VertexId, VertexSet)> = maximal_sides(&cur, x, &mut skip)
            .into_iter()
            .filter(|(_, big)| big.is_superset(b) && big != b)
            .collect();
        let chosen = largest(bigger).unwrap_or_else(|| b.clone());
        let enlarged = &chosen != b;
        let sep = Separation {
            a: a_side(&cur, &chosen, x),
            b: chosen.clone(),
        };
        cur = apply(&cur, &sep).simplified();
        out.steps.push(chosen);
        if enlarged {
            let (_, rest, _) = reduce_fully(&cur, x);
            out.steps.extend(rest.steps);
            break;
        }
    }
    Ok(out)
}
