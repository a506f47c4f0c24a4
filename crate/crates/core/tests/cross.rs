use std::collections::{BTreeSet, VecDeque};

use flatwall_core::cross::*;
use flatwall_core::graph::{Graph, Path, Separation, VertexSet};
use flatwall_core::instances::rng;
use itertools::Itertools;
use rand::Rng;

fn cycle_graph(l: u32) -> Graph {
    Graph::from_edges((0..l).map(|i| (i, (i + 1) % l)))
}

fn random_instance(r: &mut impl Rng, n: u32, l: u32, p: f64) -> (Graph, Vec<u32>) {
    let mut g = cycle_graph(l);
    for v in l..n {
        g.add_vertex(v);
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.adjacent(u, v) && r.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    (g, (0..l).collect())
}

fn reachable(g: &Graph, from: u32, to: u32, blocked: &VertexSet) -> bool {
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if y == to {
                return true;
            }
            if !blocked.contains(&y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    false
}

/// Whether some two disjoint paths join alternating cycle vertices with
/// interiors off the cycle, by enumerating every first path.
fn has_cross(g: &Graph, c: &[u32]) -> bool {
    let on_c: VertexSet = c.iter().copied().collect();
    fn paths(g: &Graph, on_c: &VertexSet, cur: &mut Path, to: u32, out: &mut Vec<Path>) {
        let x = *cur.last().unwrap();
        for y in g.neighbors(x) {
            if y == to {
                let mut p = cur.clone();
                p.push(y);
                out.push(p);
            } else if !on_c.contains(&y) && !cur.contains(&y) {
                cur.push(y);
                paths(g, on_c, cur, to, out);
                cur.pop();
            }
        }
    }
    for q in (0..c.len()).combinations(4) {
        let (a, b, s, t) = (c[q[0]], c[q[1]], c[q[2]], c[q[3]]);
        let mut first = Vec::new();
        paths(g, &on_c, &mut vec![a], s, &mut first);
        for p in first {
            let mut blocked: VertexSet = on_c.clone();
            blocked.extend(p.iter().copied());
            if reachable(g, b, t, &blocked) {
                return true;
            }
        }
    }
    false
}

/// Most paths from `v` to `x` sharing only `v`: the smallest set of other
/// vertices meeting every such path, by enumeration.
fn fan_size(g: &Graph, v: u32, x: &VertexSet, cap: usize) -> usize {
    let others: Vec<u32> = g.vertices().filter(|&w| w != v).collect();
    for k in 0..cap {
        for s in others.iter().copied().combinations(k) {
            let cut: VertexSet = s.into_iter().collect();
            let open = x.iter().any(|&t| {
                !cut.contains(&t)
                    && (g.adjacent(v, t) || reachable(g, v, t, &cut.union(x).copied().collect()))
            });
            if !open {
                return k;
            }
        }
    }
    cap
}

/// Every (A, B) of order at most three with `x` ⊆ A and a linkage vertex,
/// as pairs (A∩B, B), by enumeration.
fn all_reductions(g: &Graph, x: &VertexSet) -> Vec<Separation> {
    let free: Vec<u32> = g.vertices().filter(|v| !x.contains(v)).collect();
    let verts: Vec<u32> = g.vertices().collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << free.len()) {
        let inner: VertexSet = (0..free.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| free[i])
            .collect();
        let nbhd: VertexSet = inner
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .filter(|w| !inner.contains(w))
            .collect();
        if nbhd.len() > 3 {
            continue;
        }
        let b: VertexSet = inner.union(&nbhd).copied().collect();
        let a: VertexSet = verts
            .iter()
            .copied()
            .filter(|v| !inner.contains(v))
            .collect();
        let k = nbhd.len();
        if inner.iter().any(|&v| fan_size(g, v, x, k) >= k) {
            out.push(Separation { a, b });
        }
    }
    out
}

fn check_outcome(g: &Graph, c: &[u32]) -> bool {
    match find_cross_or_reduce(g, c).unwrap() {
        CrossOutcome::Cross(x) => {
            check_cross(g, c, &x).unwrap();
            true
        }
        CrossOutcome::Drawing {
            sequence,
            reduced,
            drawing,
        } => {
            let on_c: VertexSet = c.iter().copied().collect();
            let (j, _) = replay_reduction_sequence(g, &on_c, &sequence).unwrap();
            assert_eq!(j.vertex_set(), reduced.vertex_set());
            validate_drawing(&reduced, &drawing).unwrap();
            assert!(cyclic_eq(&drawing.outer, c));
            false
        }
    }
}

#[test]
fn cross_examples() {
    let mut g = cycle_graph(4);
    g.add_edge(0, 2);
    g.add_edge(1, 3);
    assert!(check_outcome(&g, &[0, 1, 2, 3]));
    let mut w4 = cycle_graph(4);
    for v in 0..4 {
        w4.add_edge(4, v);
    }
    match find_cross_or_reduce(&w4, &[0, 1, 2, 3]).unwrap() {
        CrossOutcome::Drawing { sequence, .. } => assert!(sequence.steps.is_empty()),
        CrossOutcome::Cross(_) => panic!("a wheel has no cross"),
    }
}

#[test]
fn drawings_with_a_face() {
    let c3 = cycle_graph(3);
    let d = planar_with_face(&c3, &[0, 1, 2]).unwrap().unwrap();
    assert_eq!(d.faces().len(), 2);
    let k4 = Graph::from_edges((0..4).tuple_combinations());
    assert!(planar_with_face(&k4, &[0, 1, 2]).unwrap().is_some());
    let k5 = Graph::from_edges((0..5).tuple_combinations());
    for c in (0..5u32).permutations(3) {
        assert!(planar_with_face(&k5, &c).unwrap().is_none());
    }
    assert!(plane_embedding(&k5).is_none());
    let k33 = Graph::from_edges((0..3).flat_map(|a| (3..6).map(move |b| (a, b))));
    assert!(plane_embedding(&k33).is_none());
}

/// Whether some rotation system has genus zero and a face equal to `c`.
fn brute_face_drawing(g: &Graph, c: &[u32]) -> bool {
    let verts: Vec<u32> = g.vertices().collect();
    let orders: Vec<Vec<Vec<u32>>> = verts
        .iter()
        .map(|&v| {
            let nb = g.neighbors(v);
            if nb.len() <= 1 {
                return vec![nb];
            }
            nb[1..]
                .iter()
                .copied()
                .permutations(nb.len() - 1)
                .map(|p| std::iter::once(nb[0]).chain(p).collect())
                .collect()
        })
        .collect();
    let target = g.n() as i64 - g.m() as i64;
    orders
        .iter()
        .map(|o| o.iter())
        .multi_cartesian_product()
        .any(|choice| {
            let rot: Rotation = verts
                .iter()
                .copied()
                .zip(choice.into_iter().cloned())
                .collect();
            let fs = faces(&rot);
            fs.len() as i64 + target == 2 && fs.iter().any(|f| cyclic_eq(f, c))
        })
}

#[test]
fn face_drawings_match_rotation_search() {
    let mut r = rng(21);
    let mut seen = [0, 0];
    for _ in 0..400 {
        let n = r.gen_range(3..=6);
        let l = r.gen_range(3..=n);
        let (g, c) = random_instance(&mut r, n, l, 0.55);
        if !g.is_connected() {
            continue;
        }
        let work: usize = g
            .vertices()
            .map(|v| (1..g.neighbors(v).len().max(1)).product::<usize>())
            .product();
        if work > 200_000 {
            continue;
        }
        let got = planar_with_face(&g, &c).unwrap();
        assert_eq!(got.is_some(), brute_face_drawing(&g, &c), "{g:?} {c:?}");
        seen[got.is_some() as usize] += 1;
    }
    assert!(seen[0] > 10 && seen[1] > 10, "{seen:?}");
}

#[test]
fn cross_search_matches_exhaustive_corpus() {
    let mut count = 0;
    for n in 4..=6u32 {
        for l in 3..=n {
            let base = cycle_graph(l);
            let pairs: Vec<(u32, u32)> = (0..n)
                .tuple_combinations()
                .filter(|&(u, v)| !base.adjacent(u, v))
                .collect();
            if pairs.len() > 12 {
                continue;
            }
            for mask in 0u32..(1 << pairs.len()) {
                let mut g = base.clone();
                for v in l..n {
                    g.add_vertex(v);
                }
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        g.add_edge(u, v);
                    }
                }
                let c: Vec<u32> = (0..l).collect();
                assert_eq!(check_outcome(&g, &c), has_cross(&g, &c), "{g:?} {c:?}");
                count += 1;
            }
        }
    }
    assert!(count > 5000);
}

#[test]
fn cross_search_matches_random_instances() {
    let mut r = rng(7);
    let mut found = [0, 0];
    for round in 0..10_000 {
        let n = r.gen_range(4..=8);
        let l = r.gen_range(3..=n);
        let p = [0.2, 0.35, 0.5][round % 3];
        let (g, c) = random_instance(&mut r, n, l, p);
        let got = check_outcome(&g, &c);
        assert_eq!(got, has_cross(&g, &c), "{g:?} {c:?}");
        found[got as usize] += 1;
    }
    assert!(found[0] > 1000 && found[1] > 1000, "{found:?}");
}

#[test]
fn reductions_keep_cross_existence() {
    let mut r = rng(8);
    let mut checked = 0;
    for _ in 0..600 {
        let n = r.gen_range(5..=8);
        let l = r.gen_range(3..=n - 1);
        let (g, c) = random_instance(&mut r, n, l, 0.3);
        let x: VertexSet = c.iter().copied().collect();
        let before = has_cross(&g, &c);
        for sep in all_reductions(&g, &x) {
            let h = elementary_reduction(&g, &sep, &x).unwrap();
            assert_eq!(has_cross(&h, &c), before, "{g:?} {sep:?}");
            checked += 1;
        }
    }
    assert!(checked > 200);
}

#[test]
fn emitted_sequences_are_optimal() {
    let mut r = rng(9);
    let mut steps = 0;
    for _ in 0..400 {
        let n = r.gen_range(5..=8);
        let l = r.gen_range(3..=n - 1);
        let (g, c) = random_instance(&mut r, n, l, 0.3);
        let x: VertexSet = c.iter().copied().collect();
        let CrossOutcome::Drawing { sequence, .. } = find_cross_or_reduce(&g, &c).unwrap() else {
            continue;
        };
        assert!(is_optimal(&g, &x, &sequence).unwrap());
        assert_eq!(optimalize(&g, &x, &sequence).unwrap(), sequence);
        let mut cur = g.clone();
        for b in &sequence.steps {
            for sep in all_reductions(&cur, &x) {
                assert!(
                    !(sep.b.is_superset(b) && &sep.b != b),
                    "{b:?} < {:?}",
                    sep.b
                );
            }
            let one = ReductionSequence {
                steps: vec![b.clone()],
            };
            cur = replay_reduction_sequence(&cur, &x, &one)
                .unwrap()
                .0
                .simplified();
            steps += 1;
        }
    }
    assert!(steps > 100);
}

fn nested_triangles() -> Graph {
    let mut g = cycle_graph(6);
    for (a, b) in [
        (6, 0),
        (7, 2),
        (8, 4),
        (6, 7),
        (7, 8),
        (8, 6),
        (9, 6),
        (10, 7),
        (11, 8),
        (9, 10),
        (10, 11),
        (11, 9),
    ] {
        g.add_edge(a, b);
    }
    g
}

#[test]
fn optimalize_absorbs_the_inner_triangle() {
    let g = nested_triangles();
    let x: VertexSet = (0..6).collect();
    let seq = ReductionSequence {
        steps: vec![(6..12).collect(), [0, 2, 4, 6, 7, 8].into()],
    };
    replay_reduction_sequence(&g, &x, &seq).unwrap();
    assert!(!is_optimal(&g, &x, &seq).unwrap());
    let best = optimalize(&g, &x, &seq).unwrap();
    assert_eq!(best.steps, vec![[0, 2, 4, 6, 7, 8, 9, 10, 11].into()]);
    assert!(is_optimal(&g, &x, &best).unwrap());
    assert_eq!(optimalize(&g, &x, &best).unwrap(), best);
}

#[test]
fn replay_flags_corrupted_steps() {
    let g = nested_triangles();
    let x: VertexSet = (0..6).collect();
    let empty = ReductionSequence::default();
    assert_eq!(replay_reduction_sequence(&g, &x, &empty).unwrap().0, g);
    let mut bad = ReductionSequence {
        steps: vec![(6..12).collect()],
    };
    bad.steps[0].insert(3);
    let err = replay_reduction_sequence(&g, &x, &bad)
        .unwrap_err()
        .to_string();
    assert!(err.contains("step 1"), "{err}");
    let stray = Graph::from_edges([(0, 1), (1, 2), (2, 0), (5, 6)]);
    let sep = Separation {
        a: [0, 1, 2].into(),
        b: [5, 6].into(),
    };
    let h = elementary_reduction(&stray, &sep, &[0, 1, 2].into()).unwrap();
    assert_eq!(h.n(), 3);
}

#[test]
fn stable_paths_have_no_unstable_bridges() {
    let mut w4 = cycle_graph(4);
    for v in 0..4 {
        w4.add_edge(4, v);
    }
    let p = stable_c_path(&w4, &[0, 1, 2, 3]).unwrap();
    assert_eq!(p.len(), 3);
    assert!(stable_c_path(&cycle_graph(5), &[0, 1, 2, 3, 4]).is_err());
    let mut r = rng(10);
    let mut tried = 0;
    for _ in 0..3000 {
        let n = r.gen_range(6..=10);
        let l = r.gen_range(3..=5);
        let (g, c) = random_instance(&mut r, n, l, 0.45);
        let x: VertexSet = c.iter().copied().collect();
        let (j, _, _) = reduce_fully(&g, &x);
        if j.n() == c.len() && j.m() == c.len() {
            continue;
        }
        let p = stable_c_path(&j, &c).unwrap();
        assert!(j.is_path(&p) && x.contains(&p[0]) && x.contains(p.last().unwrap()));
        let on_p: VertexSet = p.iter().copied().collect();
        assert!(p[1..p.len() - 1].iter().all(|v| !x.contains(v)));
        // every C ∪ P bridge reaches off P: check each component of J − (C ∪ P)
        // and each chord
        let h: VertexSet = x.union(&on_p).copied().collect();
        let rest: VertexSet = j.vertices().filter(|v| !h.contains(v)).collect();
        for comp in j.components_within(&rest) {
            let att: VertexSet = comp
                .iter()
                .flat_map(|&v| j.neighbors(v))
                .filter(|w| h.contains(w))
                .collect();
            assert!(!att.is_subset(&on_p), "{p:?} {att:?}");
        }
        for (_, u, v) in j.edges() {
            let on_path_edge = p
                .windows(2)
                .any(|w| (w[0], w[1]) == (u, v) || (w[1], w[0]) == (u, v));
            if on_p.contains(&u) && on_p.contains(&v) && !on_path_edge {
                let cyc_edge = x.contains(&u) && x.contains(&v);
                assert!(cyc_edge, "chord {u}-{v} of P");
            }
        }
        tried += 1;
    }
    assert!(tried > 50, "{tried}");
}

#[test]
fn lifted_crosses_are_valid() {
    // C = 0..6 with a hub-like core; split along a stable path and lift
    // every cross found on a side.
    let mut r = rng(12);
    let mut lifted = 0;
    for _ in 0..3000 {
        let n = r.gen_range(7..=10);
        let (g, c) = random_instance(&mut r, n, 6, 0.4);
        let x: VertexSet = c.iter().copied().collect();
        let (j, _, _) = reduce_fully(&g, &x);
        if j.m() == c.len() {
            continue;
        }
        let p = stable_c_path(&j, &c).unwrap();
        let Ok(split) = split_on_path(&j, &c, &p) else {
            continue;
        };
        let Split::Sides(sides) = split else { continue };
        for (k, side) in sides.iter().enumerate() {
            if let CrossOutcome::Cross(q) = find_cross_or_reduce(&side.graph, &side.cycle).unwrap()
            {
                let out = lift_cross(&j, &c, &p, k, &q).unwrap();
                check_cross(&j, &c, &out).unwrap();
                lifted += 1;
            }
        }
    }
    assert!(lifted > 20, "{lifted}");
}

#[test]
fn disk_drawings_keep_the_boundary_order() {
    let mut g = Graph::from_edges([(0, 4), (1, 4), (2, 4), (3, 4)]);
    g.add_vertex(5);
    g.add_edge(5, 4);
    let d = disk_drawing(&g, &[0, 1, 2, 3]).unwrap().unwrap();
    validate_disk(&g, &d).unwrap();
    let mut crossed = g.clone();
    crossed.add_edge(0, 6);
    crossed.add_edge(6, 2);
    crossed.add_edge(1, 7);
    crossed.add_edge(7, 3);
    crossed.add_edge(6, 7);
    assert!(disk_drawing(&crossed, &[0, 1, 2, 3]).unwrap().is_none());
}
