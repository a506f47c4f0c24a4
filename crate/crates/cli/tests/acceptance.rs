//! Acceptance run: one PASS/FAIL line per criterion. Runs without the test
//! harness so the lines reach the output of `cargo test`.

mod oracles;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use clap::Parser;
use flatwall_cli::gen::{generate, Family, Spec};
use flatwall_cli::{emit_dot, execute, Artifact, Cli};
use flatwall_core::cross::{
    check_cross, cyclic_eq, disk_drawing, find_cross_or_reduce, replay_reduction_sequence,
    validate_drawing, CrossOutcome,
};
use flatwall_core::dispersed::{
    find_dispersed, find_semi_dispersed, verify_blocker, verify_family, Dispersal,
};
use flatwall_core::flatwall::{
    apex_universal_defect, flat_cert_defect, flat_wall_or_minor, refine_apex, validate_flat_cert,
    FlatWallCert, FlatWallOutcome, RefineOutcome,
};
use flatwall_core::graph::{Graph, Separation, VertexId, VertexSet};
use flatwall_core::instances::{add_path, grid_vertex, mesh_with_noise, rng};
use flatwall_core::minor::{disjoint_y_paths, h1_kt_model, validate_model};
use flatwall_core::wall::{
    build_elementary_wall, build_grid, grid_contraction, grid_distance, Wall,
};
use flatwall_core::{Config, Profile};
use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};

use oracles::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn cycle_graph(l: u32) -> Graph {
    Graph::from_edges((0..l).map(|i| (i, (i + 1) % l)))
}

/// Runs the cross search and checks whatever it emits. Returns whether a
/// cross was found.
fn checked_cross(g: &Graph, c: &[VertexId], optimal: bool) -> Result<bool, String> {
    let out = find_cross_or_reduce(g, c).map_err(|e| format!("{e} on {g:?}"))?;
    match out {
        CrossOutcome::Cross(x) => {
            check_cross(g, c, &x).map_err(|e| format!("bad cross: {e}"))?;
            Ok(true)
        }
        CrossOutcome::Drawing {
            sequence,
            reduced,
            drawing,
        } => {
            let x: VertexSet = c.iter().copied().collect();
            let (j, _) = replay_reduction_sequence(g, &x, &sequence)
                .map_err(|e| format!("sequence does not replay: {e}"))?;
            ensure!(
                j.vertex_set() == reduced.vertex_set(),
                "reduced graph differs from replay"
            );
            validate_drawing(&reduced, &drawing).map_err(|e| format!("bad drawing: {e}"))?;
            ensure!(cyclic_eq(&drawing.outer, c), "outer face is not the cycle");
            if optimal {
                let mut cur = g.clone();
                for b in &sequence.steps {
                    let bigger = all_reductions(&cur, &x)
                        .into_iter()
                        .any(|s: Separation| s.b.is_superset(b) && &s.b != b);
                    ensure!(!bigger, "step {b:?} is not maximal in {g:?}");
                    let one = flatwall_core::cross::ReductionSequence {
                        steps: vec![b.clone()],
                    };
                    cur = replay_reduction_sequence(&cur, &x, &one)
                        .unwrap()
                        .0
                        .simplified();
                }
            }
            Ok(false)
        }
    }
}

/// All graphs on `n` vertices containing the cycle 0..l, one per orbit of
/// the relabellings that fix the cycle pointwise, connected only.
fn corpus(n: u32, l: u32) -> Vec<Graph> {
    let base = cycle_graph(l);
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !base.adjacent(u, v))
        .collect();
    let index = |u: u32, v: u32| {
        pairs
            .iter()
            .position(|&p| p == (u.min(v), u.max(v)))
            .unwrap()
    };
    let mut perms: Vec<Vec<u32>> = vec![(l..n).collect()];
    for k in 1..(n - l) as usize {
        let mut next = Vec::new();
        for p in &perms {
            for i in 0..=k.min(p.len() - 1) {
                let mut q = p.clone();
                q.swap(i, k);
                next.push(q);
            }
        }
        perms = next;
    }
    perms.sort();
    perms.dedup();
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let img = |v: u32| if v < l { v } else { p[(v - l) as usize] };
            pairs.iter().map(|&(u, v)| index(img(u), img(v))).collect()
        })
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let canonical = maps.iter().all(|m| {
            let mut img = 0u32;
            for (i, &j) in m.iter().enumerate() {
                img |= (mask >> i & 1) << j;
            }
            img >= mask
        });
        if !canonical {
            continue;
        }
        let mut g = base.clone();
        for v in l..n {
            g.add_vertex(v);
        }
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut counts = [0usize; 2];
    let mut total = 0;
    for n in 3..=7u32 {
        for l in 3..=n {
            let c: Vec<u32> = (0..l).collect();
            for g in corpus(n, l) {
                let got = checked_cross(&g, &c, true)?;
                ensure!(got == has_cross(&g, &c), "disagreement on {g:?}");
                counts[got as usize] += 1;
                total += 1;
            }
        }
    }
    let mut r = rng(1);
    for round in 0..10_000 {
        let n = r.gen_range(4..=12u32);
        let l = r.gen_range(3..=n);
        let p = [0.15, 0.25, 0.4][round % 3];
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
        let c: Vec<u32> = (0..l).collect();
        let got = checked_cross(&g, &c, n <= 8)?;
        ensure!(got == has_cross(&g, &c), "disagreement on {g:?}");
        counts[got as usize] += 1;
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(600), "took {took:?}");
    Ok(format!(
        "{total} exhaustive + 10000 random instances agree ({} cross, {} reduced), {took:.1?}",
        counts[1], counts[0]
    ))
}

fn criterion2() -> Outcome {
    for t in 2..=6 {
        let start = Instant::now();
        let (h, model, cert) = h1_kt_model(t).map_err(|e| e.to_string())?;
        ensure!(
            validate_model(&h.graph, &model, t, Some((&h.grid, &cert))),
            "t = {t}: invalid"
        );
        for s in &model.branch_sets {
            ensure!(
                s.iter().any(|&v| h.coord(v).1 == 1),
                "t = {t}: misses row 1"
            );
            let cols: BTreeSet<usize> = s.iter().map(|&v| h.coord(v).0).collect();
            ensure!(cols.len() >= t, "t = {t}: {} vertical paths", cols.len());
        }
        ensure!(start.elapsed() < Duration::from_secs(1), "t = {t} too slow");
    }
    Ok("t = 2..6 valid, every set meets row 1 and >= t columns".into())
}

fn criterion3() -> Outcome {
    let mut pairs = 0;
    for r in 1..=5 {
        for s in 1..=5 {
            let cells: Vec<(usize, usize)> =
                (1..=r).flat_map(|x| (1..=s).map(move |y| (x, y))).collect();
            for &a in &cells {
                for &b in &cells {
                    let d = grid_distance(a, b, r, s).map_err(|e| e.to_string())?;
                    ensure!(d == curve_distance(a, b, r, s), "{a:?} {b:?} in {r}x{s}");
                    pairs += 1;
                }
            }
        }
    }
    let mut rg = rng(3);
    let mut pt = || (rg.gen_range(1..=50), rg.gen_range(1..=50));
    for _ in 0..100_000 {
        let (a, b, c) = (pt(), pt(), pt());
        let d = |p, q| grid_distance(p, q, 50, 50).unwrap();
        ensure!(d(a, b) == d(b, a), "asymmetric at {a:?} {b:?}");
        ensure!(
            d(a, c) <= d(a, b) + d(b, c),
            "triangle fails at {a:?} {b:?} {c:?}"
        );
    }
    Ok(format!(
        "{pairs} pairs match the curve oracle; 100000 triples are metric"
    ))
}

fn criterion4() -> Outcome {
    let mut r = rng(4);
    let (mut small, mut fams, mut blocks) = (0, 0, 0);
    for i in 0..1000u64 {
        let (g, mesh) = if i % 2 == 0 {
            let extra = r.gen_range(0..=3);
            mesh_with_noise(i, 3, 3, extra, r.gen_range(1..=5))
        } else if i % 4 == 1 {
            let (rows, cols) = (r.gen_range(5..=10), r.gen_range(5..=10));
            mesh_with_noise(i, rows, cols, r.gen_range(0..=60), r.gen_range(0..=20))
        } else {
            let (mut g, mesh) = build_grid(12, 12);
            for _ in 0..r.gen_range(1..=6) {
                let (a, b) = (
                    (r.gen_range(1..=12), r.gen_range(1..=12)),
                    (r.gen_range(1..=12), r.gen_range(1..=12)),
                );
                if a != b {
                    add_path(
                        &mut g,
                        grid_vertex(&mesh, a.0, a.1),
                        grid_vertex(&mesh, b.0, b.1),
                        r.gen_range(1..=3),
                    );
                }
            }
            (g, mesh)
        };
        ensure!(g.n() <= 200, "instance {i} has {} vertices", g.n());
        let m = mesh.subgraph(&g).unwrap();
        let gc = grid_contraction(&mesh);
        let (l, k, exact) = (r.gen_range(1..=3), r.gen_range(1..=4), r.gen_bool(0.5));
        for semi in [true, false] {
            let run = if semi {
                find_semi_dispersed(&g, &m, &gc, l, k, exact)
            } else {
                find_dispersed(&g, &m, &gc, l, k, exact)
            }
            .map_err(|e| format!("instance {i}: {e}"))?;
            ensure!(
                run.iterations <= 3 * k,
                "instance {i}: {} iterations",
                run.iterations
            );
            match &run.outcome {
                Dispersal::Family(f) => {
                    ensure!(
                        f.paths.len() == k && verify_family(&g, &m, &gc, f),
                        "instance {i}: bad family"
                    );
                    fams += 1;
                }
                Dispersal::Blocker(b) => {
                    ensure!(
                        verify_blocker(&g, &m, &gc, b).unwrap(),
                        "instance {i}: bad blocker"
                    );
                    if g.n() <= 12 {
                        let ends = all_m_path_ends(&g, &m, &b.a);
                        ensure!(
                            blocker_holds(&gc, b, &ends),
                            "instance {i}: enumeration refutes blocker"
                        );
                        small += 1;
                    }
                    blocks += 1;
                }
            }
        }
    }
    Ok(format!(
        "2000 runs valid ({fams} families, {blocks} blockers, {small} enumerated)"
    ))
}

fn criterion5() -> Outcome {
    let mut r = rng(5);
    let mut exhaustive = 0;
    for i in 0..1000 {
        let n = r.gen_range(1..=if i % 2 == 0 { 12 } else { 80 });
        // a random tree of degree at most four plus random chords
        let mut g = Graph::new();
        g.add_vertex(0);
        for v in 1..n as u32 {
            let free: Vec<u32> = (0..v).filter(|&u| g.degree(u) < 4).collect();
            g.add_edge(*free.choose(&mut r).unwrap(), v);
        }
        for _ in 0..r.gen_range(0..=n / 2) {
            let (u, v) = (r.gen_range(0..n as u32), r.gen_range(0..n as u32));
            if u != v && !g.adjacent(u, v) && g.degree(u) < 4 && g.degree(v) < 4 {
                g.add_edge(u, v);
            }
        }
        let y: VertexSet = g.vertices().filter(|_| r.gen_bool(0.5)).collect();
        let paths = disjoint_y_paths(&g, &y).map_err(|e| format!("instance {i}: {e}"))?;
        let mut seen = VertexSet::new();
        for p in &paths {
            ensure!(p.len() >= 2 && g.is_path(p), "instance {i}: not a path");
            ensure!(
                y.contains(&p[0]) && y.contains(p.last().unwrap()),
                "instance {i}: ends off Y"
            );
            ensure!(
                p.iter().all(|&v| seen.insert(v)),
                "instance {i}: paths meet"
            );
        }
        let bound = y.len().saturating_sub(1).div_ceil(4);
        ensure!(
            paths.len() >= bound,
            "instance {i}: {} < {bound}",
            paths.len()
        );
        if n <= 12 {
            ensure!(
                max_y_packing(&g, &y) >= paths.len(),
                "instance {i}: packing oracle"
            );
            exhaustive += 1;
        }
    }
    Ok(format!(
        "1000 instances meet the bound; {exhaustive} confirmed by exhaustive packing"
    ))
}

fn relaxed(t: usize, r: usize) -> Config {
    Config::new(t, r, Profile::Relaxed).unwrap()
}

fn criterion6() -> Outcome {
    let start = Instant::now();
    let mut tally = [0usize; 3];
    for i in 0..200u64 {
        let (family, size, t) = match i % 3 {
            0 => (
                Family::Pure,
                12 + (i as usize / 3) % 9,
                3 + (i as usize / 3) % 3,
            ),
            1 => (Family::Cross, 41 + (i as usize / 3) % 5, 3),
            _ => (Family::Cluster, 20 + (i as usize / 3) % 5, 3),
        };
        let spec = Spec {
            family,
            size,
            t,
            r: 3,
            seed: i,
            apices: 0,
        };
        let (g, w) = generate(&spec).map_err(|e| e.to_string())?;
        let cfg = relaxed(t, 3);
        let out = flat_wall_or_minor(&g, &w, &cfg)
            .map_err(|e| format!("{family:?} {size} t={t}: {e}"))?;
        match (family, out) {
            (Family::Cross, FlatWallOutcome::Minor { model, grasp }) => {
                ensure!(
                    validate_model(&g, &model, t, Some((&w.mesh, &grasp))),
                    "instance {i}: bad model"
                );
            }
            (Family::Pure, FlatWallOutcome::Flat(c)) => {
                ensure!(
                    c.apex.is_empty() && validate_flat_cert(&g, &c),
                    "instance {i}: bad flat wall"
                );
            }
            (Family::Cluster, FlatWallOutcome::Flat(c)) => {
                ensure!(validate_flat_cert(&g, &c), "instance {i}: bad flat wall");
                ensure!(
                    c.apex.len() as u128 <= cfg.apex_bound,
                    "instance {i}: {} apices",
                    c.apex.len()
                );
            }
            (f, _) => return Err(format!("instance {i}: wrong branch for {f:?}")),
        }
        tally[(i % 3) as usize] += 1;
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(300), "took {took:?}");
    Ok(format!(
        "{} pure, {} crossed, {} clustered instances valid, {took:.1?}",
        tally[0], tally[1], tally[2]
    ))
}

/// The whole wall with X its outer cycle: flat in G − apex when the wall
/// is planar there.
fn whole_wall_cert(g: &Graph, w: &Wall, apex: &[VertexId]) -> FlatWallCert {
    let outer = w.mesh.outer_cycle();
    let h = g.without_vertices(&apex.iter().copied().collect());
    let drawing = disk_drawing(&h.induced(&w.vertex_set()), &outer)
        .unwrap()
        .unwrap();
    FlatWallCert {
        apex: apex.iter().copied().collect(),
        wall: w.clone(),
        separation: Separation {
            a: outer.iter().copied().collect(),
            b: w.vertex_set(),
        },
        boundary: outer,
        sequence: Default::default(),
        drawing,
    }
}

fn criterion7() -> Outcome {
    let mut r = rng(7);
    let (mut flat, mut minor) = (0, 0);
    for i in 0..50 {
        let overflow = i % 2 == 1;
        let t = 5 + i % 3;
        let p = if overflow {
            t - 4 + (i / 2) % 2
        } else {
            (i / 2) % (t - 4)
        };
        // every release shrinks the wall to about its square root
        let local = if overflow { 0 } else { i % 3 };
        let size = match (overflow, local) {
            (true, _) => 3 * t + 1,
            (false, 2) => 75,
            _ => 14 + i % 7,
        };
        let (mut g, w) = build_elementary_wall(size).unwrap();
        let all: Vec<VertexId> = w.vertex_set().into_iter().collect();
        let mut apex = Vec::new();
        for _ in 0..p {
            let a = g.fresh_vertex();
            for &v in &all {
                g.add_edge(a, v);
            }
            apex.push(a);
        }
        // local apices that the refinement has to release
        for _ in 0..local {
            let a = g.fresh_vertex();
            let row = r.gen_range(0..3);
            for &v in &w.mesh.horizontal[row][..6] {
                g.add_edge(a, v);
            }
            apex.push(a);
        }
        apex.shuffle(&mut r);
        let rr = if overflow {
            3 * (t as f64).sqrt().ceil() as usize
        } else {
            3
        };
        let cert = whole_wall_cert(&g, &w, &apex);
        let out = refine_apex(&g, &w, &cert, &relaxed(t, rr))
            .map_err(|e| format!("instance {i} (t={t}, p={p}, size {size}): {e}"))?;
        match out {
            RefineOutcome::Flat {
                cert,
                universal,
                trace,
            } if !overflow => {
                ensure!(
                    trace.len() <= apex.len(),
                    "instance {i}: {} iterations",
                    trace.len()
                );
                ensure!(
                    flat_cert_defect(&g, &cert).is_none(),
                    "instance {i}: bad flat wall"
                );
                ensure!(
                    apex_universal_defect(&g, &universal).is_none(),
                    "instance {i}: not universal"
                );
                ensure!(
                    universal.universal == cert.apex && cert.apex.len() <= t - 5,
                    "instance {i}: apex set"
                );
                flat += 1;
            }
            RefineOutcome::Minor {
                model,
                grasp,
                trace,
            } if overflow => {
                ensure!(
                    trace.len() <= apex.len(),
                    "instance {i}: {} iterations",
                    trace.len()
                );
                ensure!(
                    validate_model(&g, &model, t, Some((&w.mesh, &grasp))),
                    "instance {i}: bad model"
                );
                minor += 1;
            }
            _ => return Err(format!("instance {i}: wrong branch (t={t}, p={p})")),
        }
    }
    Ok(format!("{flat} flat apex-universal, {minor} K_t models"))
}

fn cli(args: &[&str]) -> Vec<u8> {
    let cli = Cli::try_parse_from(std::iter::once("flatwall").chain(args.iter().copied())).unwrap();
    let mut buf = Vec::new();
    let code = execute(&cli, &mut buf).unwrap();
    buf.extend_from_slice(&code.to_le_bytes());
    buf
}

fn criterion8() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let (gc, wc, gk) = (
        format!("{d}/gc.json"),
        format!("{d}/wc.json"),
        format!("{d}/k.txt"),
    );
    cli(&[
        "gen",
        "--family",
        "cross",
        "--size",
        "41",
        "-t",
        "3",
        "--out",
        &gc,
        "--wall-out",
        &wc,
    ]);
    std::fs::write(&gk, "1 2\n2 3\n3 4\n4 5\n5 1\n1 3\n2 4\n6 1\n6 3\n").unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["gen", "--family", "cluster", "--size", "20", "--seed", "9"],
        vec!["run", "--generate-wall", "14", "-t", "5"],
        vec!["run", "--generate-wall", "14", "-t", "3", "--prune-only"],
        vec!["run", "--graph", &gc, "--wall", &wc, "-t", "3"],
        vec!["refine", "--generate-wall", "14", "-t", "6"],
        vec!["cross", "--graph", &gk, "--cycle", "1,2,3,4,5"],
        vec!["cross", "--graph", &gk, "--cycle", "1,2,3"],
    ];
    let hash = |bytes: &[u8]| Sha256::digest(bytes).to_vec();
    for args in &runs {
        ensure!(
            hash(&cli(args)) == hash(&cli(args)),
            "{args:?} differs between runs"
        );
    }
    let (h, model, _) = h1_kt_model(4).unwrap();
    let dot = || emit_dot(&Artifact::Model(&h.graph, &model));
    ensure!(
        hash(dot().as_bytes()) == hash(dot().as_bytes()),
        "DOT output differs"
    );
    Ok(format!(
        "{} commands and DOT export hash identically",
        runs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("cross oracle equivalence", criterion1),
        ("K_t model in H1 for t = 2..6", criterion2),
        ("grid distance fidelity", criterion3),
        ("packing/covering soundness", criterion4),
        ("disjoint Y-path bound", criterion5),
        ("end-to-end relaxed pipeline", criterion6),
        ("apex refinement", criterion7),
        ("determinism", criterion8),
    ];
    let mut failed = 0;
    for (no, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = run();
        let took = start.elapsed();
        match res {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg} [{took:.1?}]", no + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} [{took:.1?}]", no + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
