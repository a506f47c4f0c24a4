use flatwall_core::cross::{
    cyclic_eq, find_cross_or_reduce, flat_separation, planar_with_face, replay_reduction_sequence,
    validate_disk, CrossOutcome, FlatSeparation, PlacementCase, ReductionSequence,
};
use flatwall_core::flatwall::linking_paths;
use flatwall_core::graph::{Graph, Path, Subgraph, VertexId, VertexSet};
use flatwall_core::wall::{build_elementary_wall, subwall_extract, Wall};
use flatwall_core::Error;

struct Inst {
    g: Graph,
    inner: Wall,
    c: Vec<VertexId>,
    d: Vec<VertexId>,
    paths: [Path; 4],
}

/// A 7-wall with its corner cycle closed, and its inner 5-wall.
fn wall_instance() -> Inst {
    let (mut g, w) = build_elementary_wall(7).unwrap();
    let c = w.mesh.corners().to_vec();
    for k in 0..4 {
        g.add_edge(c[k], c[(k + 1) % 4]);
    }
    let inner = subwall_extract(&g, &w, (1, 5), (1, 5)).unwrap();
    let d = inner.mesh.outer_cycle();
    let paths = linking_paths(&g, &w, &inner).unwrap();
    Inst {
        g,
        inner,
        c,
        d,
        paths,
    }
}

fn run(
    inst: &Inst,
    g: &Graph,
    seq: &ReductionSequence,
    j: &Graph,
) -> flatwall_core::Result<FlatSeparation> {
    let drawing = planar_with_face(j, &inst.c)
        .unwrap()
        .expect("reduced graph is drawable");
    let w = inst.inner.mesh.subgraph(g).unwrap();
    flat_separation(g, &w, &inst.d, &inst.c, &inst.paths, seq, &drawing)
}

/// Conditions (1)-(4) checked from scratch.
fn check_guarantees(g: &Graph, inst: &Inst, fs: &FlatSeparation) {
    let sep = &fs.separation;
    sep.check(g).unwrap();
    let on_d: VertexSet = inst.d.iter().copied().collect();
    let ab = sep.boundary();
    assert!(ab.is_subset(&on_d));
    assert!(inst.inner.vertex_set().is_subset(&sep.b));
    assert!(inst.c.iter().all(|v| sep.a.contains(v)));
    let in_order: Vec<VertexId> = inst.d.iter().copied().filter(|v| ab.contains(v)).collect();
    assert_eq!(fs.boundary, in_order);
    let (j, _) = replay_reduction_sequence(&g.induced(&sep.b), &ab, &fs.sequence).unwrap();
    assert_eq!(fs.drawing.outer, fs.boundary);
    validate_disk(&j, &fs.drawing).unwrap();
}

#[test]
fn planar_wall_cuts_along_the_inner_cycle() {
    let inst = wall_instance();
    let CrossOutcome::Drawing {
        sequence, drawing, ..
    } = find_cross_or_reduce(&inst.g, &inst.c).unwrap()
    else {
        panic!("a planar wall has no cross over its corners");
    };
    let w = inst.inner.mesh.subgraph(&inst.g).unwrap();
    let fs = flat_separation(
        &inst.g,
        &w,
        &inst.d,
        &inst.c,
        &inst.paths,
        &sequence,
        &drawing,
    )
    .unwrap();
    check_guarantees(&inst.g, &inst, &fs);
    assert_eq!(fs.cases.len(), sequence.steps.len());
    // B is exactly the inner wall: nothing else is drawn inside D
    assert_eq!(fs.separation.b, inst.inner.vertex_set());

    // the same instance without reductions
    let fs0 = run(&inst, &inst.g, &ReductionSequence::default(), &inst.g).unwrap();
    check_guarantees(&inst.g, &inst, &fs0);
    assert_eq!(fs0.separation.b, inst.inner.vertex_set());
    let on_d: VertexSet = inst.d.iter().copied().collect();
    assert_eq!(fs0.separation.boundary(), on_d);
}

#[test]
fn step_inside_the_disk_grows_b() {
    let inst = wall_instance();
    let mut g = inst.g.clone();
    // a claw hung on three vertices of an inner brick
    let brick = inst.inner.mesh.bricks()[5].clone();
    let feet = [brick[0], brick[2], brick[4]];
    let z = g.fresh_vertex();
    for f in feet {
        g.add_edge(z, f);
    }
    let y: VertexSet = feet.iter().copied().chain([z]).collect();
    let seq = ReductionSequence {
        steps: vec![y.clone()],
    };
    let on_c: VertexSet = inst.c.iter().copied().collect();
    let (j, _) = replay_reduction_sequence(&g, &on_c, &seq).unwrap();
    let fs = run(&inst, &g, &seq, &j).unwrap();
    assert_eq!(fs.cases, vec![PlacementCase::InB]);
    check_guarantees(&g, &inst, &fs);
    let base = run(&inst, &j, &ReductionSequence::default(), &j).unwrap();
    assert_eq!(fs.separation.a, base.separation.a);
    let grown: VertexSet = base.separation.b.union(&y).copied().collect();
    assert_eq!(fs.separation.b, grown);
}

#[test]
fn step_across_the_cycle_inserts_a_subpath() {
    let inst = wall_instance();
    let g = &inst.g;
    let inner_v = inst.inner.vertex_set();
    let n = inst.d.len();
    // a vertex of D whose third neighbour lies outside the inner wall
    let (k, o) = (0..n)
        .find_map(|k| {
            let v = inst.d[k];
            let nb = g.neighbors(v);
            let out: Vec<VertexId> = nb
                .iter()
                .copied()
                .filter(|u| !inner_v.contains(u))
                .collect();
            (nb.len() == 3 && out.len() == 1 && !inst.paths.iter().any(|p| p.contains(&v)))
                .then(|| (k, out[0]))
        })
        .unwrap();
    let (u, d, v) = (inst.d[(k + n - 1) % n], inst.d[k], inst.d[(k + 1) % n]);
    let y: VertexSet = [u, d, v, o].into_iter().collect();
    let seq = ReductionSequence { steps: vec![y] };
    let on_c: VertexSet = inst.c.iter().copied().collect();
    let (j, _) = replay_reduction_sequence(g, &on_c, &seq).unwrap();
    let fs = run(&inst, g, &seq, &j).unwrap();
    assert_eq!(fs.cases, vec![PlacementCase::InASubpath]);
    check_guarantees(g, &inst, &fs);
    assert!(fs.separation.a.contains(&d) && fs.separation.b.contains(&d));
    let at = fs.boundary.iter().position(|&x| x == d).unwrap();
    let m = fs.boundary.len();
    let around = [fs.boundary[(at + m - 1) % m], fs.boundary[(at + 1) % m]];
    assert!(cyclic_eq(&[around[0], d, around[1]], &[u, d, v]));
}

#[test]
fn broken_hypotheses_are_named() {
    let inst = wall_instance();
    let w = inst.inner.mesh.subgraph(&inst.g).unwrap();
    let j = &inst.g;
    let drawing = planar_with_face(j, &inst.c).unwrap().unwrap();
    let seq = ReductionSequence::default();
    let expect = |res: flatwall_core::Result<FlatSeparation>, needle: &str| match res {
        Err(Error::Input(m)) => assert!(m.contains(needle), "{m}"),
        other => panic!(
            "expected an input error about {needle}, got {:?}",
            other.map(|f| f.boundary)
        ),
    };

    let mut same_end = inst.paths.clone();
    same_end[1] = same_end[0].clone();
    expect(
        flat_separation(&inst.g, &w, &inst.d, &inst.c, &same_end, &seq, &drawing),
        "distinct ends",
    );

    let mut from_d = inst.paths.clone();
    from_d[0].remove(0);
    expect(
        flat_separation(&inst.g, &w, &inst.d, &inst.c, &from_d, &seq, &drawing),
        "V(W)",
    );

    let mut cut = Subgraph::default();
    cut.vertices = inst.d.iter().copied().collect();
    for k in 0..inst.d.len() {
        let (a, b) = (inst.d[k], inst.d[(k + 1) % inst.d.len()]);
        cut.edges.insert(inst.g.edge_between(a, b).unwrap());
    }
    let far = inst.inner.mesh.horizontal[2][2];
    cut.vertices.insert(far);
    cut.vertices.insert(inst.inner.mesh.horizontal[2][4]);
    expect(
        flat_separation(&inst.g, &cut, &inst.d, &inst.c, &inst.paths, &seq, &drawing),
        "not connected",
    );

    let bogus = ReductionSequence {
        steps: vec![inst.c.iter().copied().collect()],
    };
    expect(
        flat_separation(&inst.g, &w, &inst.d, &inst.c, &inst.paths, &bogus, &drawing),
        "does not replay",
    );
}
