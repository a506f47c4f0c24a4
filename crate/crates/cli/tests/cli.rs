use std::path::Path;
use std::process::Command;

use clap::Parser;
use flatwall_cli::doc::{FlatPayload, Payload};
use flatwall_cli::io::{GraphJson, WallJson};
use flatwall_cli::{
    emit_dot, execute, load_instance, parse_graph, parse_wall, Artifact, CertificateDocument, Cli,
    Kind, WallSource,
};
use flatwall_core::graph::Graph;
use flatwall_core::minor::h1_kt_model;
use flatwall_core::wall::build_elementary_wall;
use tempfile::TempDir;

fn flatwall(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flatwall"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_lib(args: &[&str]) -> (i32, String) {
    let cli = Cli::try_parse_from(std::iter::once("flatwall").chain(args.iter().copied())).unwrap();
    let mut buf = Vec::new();
    let code = execute(&cli, &mut buf).unwrap();
    (code, String::from_utf8(buf).unwrap())
}

fn write_wall_json(dir: &Path, name: &str, wj: &WallJson) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(wj).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn edge_lists_and_their_errors() {
    let g = parse_graph("1 2\n2 3").unwrap();
    assert_eq!((g.n(), g.m()), (3, 2));
    assert!(g.adjacent(1, 2) && g.adjacent(2, 3) && !g.adjacent(1, 3));
    let g = parse_graph("# comment\n\n7\n1 2 # trailing\n").unwrap();
    assert_eq!((g.n(), g.m()), (3, 1));

    let err = format!("{:#}", parse_graph("1 2\n2 x\n").unwrap_err());
    assert!(err.contains("line 2, field 2"), "{err}");
    let err = format!("{:#}", parse_graph("1 2 3\n").unwrap_err());
    assert!(err.contains("line 1"), "{err}");
    let err = format!(
        "{:#}",
        parse_graph("{\"vertices\": [1], \"edges\": [[0, 1]]}").unwrap_err()
    );
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn wall_descriptors_go_through_the_mesh_checker() {
    let (g, w) = build_elementary_wall(4).unwrap();
    let mut wj = WallJson::of(&w);
    wj.pegs = None;
    let text = serde_json::to_string(&wj).unwrap();
    let back = parse_wall(&text, &g).unwrap();
    assert_eq!(back, w);

    // a vertical path listed bottom to top
    let mut rev = wj.clone();
    rev.vertical[1].reverse();
    let err = format!(
        "{:#}",
        parse_wall(&serde_json::to_string(&rev).unwrap(), &g).unwrap_err()
    );
    assert!(err.contains("condition (4)"), "{err}");
    // two vertical paths listed out of order
    let mut swapped = wj.clone();
    swapped.vertical.swap(1, 2);
    let err = format!(
        "{:#}",
        parse_wall(&serde_json::to_string(&swapped).unwrap(), &g).unwrap_err()
    );
    assert!(err.contains("condition (3)"), "{err}");
}

#[test]
fn generated_walls_need_a_matching_graph() {
    let dir = TempDir::new().unwrap();
    let (g, _) = load_instance(None, WallSource::Generated(5)).unwrap();
    assert_eq!(g.n(), 2 * 5 * 5 - 2);
    let p = dir.path().join("path.txt");
    std::fs::write(&p, "1 2\n2 3\n").unwrap();
    assert!(load_instance(Some(&p), WallSource::Generated(3)).is_err());
}

#[test]
fn dot_export() {
    let (g, _) = build_elementary_wall(4).unwrap();
    let text = emit_dot(&Artifact::Graph(&g));
    let nodes = text
        .lines()
        .filter(|l| l.trim_end().ends_with(';') && !l.contains("--") && !l.contains("node"))
        .count();
    assert_eq!(nodes, 30);
    assert_eq!(text.matches(" -- ").count(), g.m());
    assert!(text.starts_with("graph G {") && text.ends_with("}\n"));
    assert_eq!(text, emit_dot(&Artifact::Graph(&g.clone())));

    let (h1, model, _) = h1_kt_model(3).unwrap();
    let text = emit_dot(&Artifact::Model(&h1.graph, &model));
    let colours: std::collections::BTreeSet<&str> = text
        .lines()
        .filter_map(|l| l.split("fillcolor=\"").nth(1))
        .map(|s| &s[..7])
        .collect();
    assert_eq!(colours.len(), 3);
}

#[test]
fn pipeline_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let (c, _, _) = flatwall(
        d,
        &[
            "gen",
            "--size",
            "12",
            "--out",
            "g.json",
            "--wall-out",
            "w.json",
        ],
    );
    assert_eq!(c, 0);
    let (c, out, _) = flatwall(
        d,
        &[
            "run",
            "--graph",
            "g.json",
            "--wall",
            "w.json",
            "-t",
            "5",
            "-r",
            "3",
            "--profile",
            "relaxed",
            "--validate",
        ],
    );
    assert_eq!(c, 0);
    let doc: CertificateDocument = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.kind, Kind::FlatWall);
    let Payload::Flat(f) = doc.payload().unwrap() else {
        panic!()
    };
    assert!(f.cert.apex.is_empty());

    let (c, _, _) = flatwall(
        d,
        &[
            "gen",
            "--family",
            "cross",
            "--size",
            "41",
            "-t",
            "3",
            "--out",
            "gc.json",
            "--wall-out",
            "wc.json",
        ],
    );
    assert_eq!(c, 0);
    let (c, _, _) = flatwall(
        d,
        &[
            "run",
            "--graph",
            "gc.json",
            "--wall",
            "wc.json",
            "-t",
            "3",
            "--validate",
            "--out",
            "kt.json",
            "--dot",
            "kt.dot",
        ],
    );
    assert_eq!(c, 2);
    let (c, out, _) = flatwall(
        d,
        &[
            "validate", "--graph", "gc.json", "--wall", "wc.json", "--cert", "kt.json",
        ],
    );
    assert_eq!((c, out.trim()), (0, "ok: kt-model certificate"));
    assert!(std::fs::read_to_string(d.join("kt.dot"))
        .unwrap()
        .contains("fillcolor"));
    // the same document does not describe the pure instance
    let (c, _, err) = flatwall(
        d,
        &[
            "validate", "--graph", "g.json", "--wall", "w.json", "--cert", "kt.json",
        ],
    );
    assert_eq!(c, 1);
    assert!(err.contains("different instance"), "{err}");

    let (c, _, err) = flatwall(
        d,
        &[
            "run",
            "--generate-wall",
            "12",
            "-t",
            "3",
            "--profile",
            "paper-algorithm",
        ],
    );
    assert_eq!(c, 1);
    assert!(err.contains("requires R = "), "{err}");
    let (c, _, _) = flatwall(
        d,
        &[
            "run",
            "--graph",
            "missing.json",
            "--wall",
            "w.json",
            "-t",
            "3",
        ],
    );
    assert_eq!(c, 1);
}

#[test]
fn cross_documents_both_ways() {
    let dir = TempDir::new().unwrap();
    let k4 = dir.path().join("k4.txt");
    std::fs::write(&k4, "1 2\n2 3\n3 4\n4 1\n1 3\n2 4\n").unwrap();
    let k4 = k4.to_str().unwrap();
    let (c, out) = run_lib(&["cross", "--graph", k4, "--cycle", "1,2,3,4", "--validate"]);
    assert_eq!(c, 2);
    assert!(out.contains("\"cross\""));
    let (c, out) = run_lib(&["cross", "--graph", k4, "--cycle", "1,2,3", "--validate"]);
    assert_eq!(c, 0);
    assert!(out.contains("\"reduction\""));
}

#[test]
fn refinement_from_a_document() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let g = format!("{d}/g.json");
    let w = format!("{d}/w.json");
    let first = format!("{d}/first.json");
    run_lib(&[
        "gen",
        "--family",
        "apex",
        "--apices",
        "1",
        "--size",
        "12",
        "--out",
        &g,
        "--wall-out",
        &w,
    ]);
    let (c, _) = run_lib(&[
        "run", "--graph", &g, "--wall", &w, "-t", "6", "--out", &first,
    ]);
    assert_eq!(c, 0);
    let (c, out) = run_lib(&[
        "refine",
        "--graph",
        &g,
        "--wall",
        &w,
        "-t",
        "6",
        "--cert",
        &first,
        "--validate",
    ]);
    assert_eq!(c, 0);
    let doc: CertificateDocument = serde_json::from_str(&out).unwrap();
    let Payload::Flat(f) = doc.payload().unwrap() else {
        panic!()
    };
    let f: FlatPayload = *f;
    assert!(f.universal.is_some());
    assert!(f.cert.apex.len() <= 1);
}

#[test]
fn constants_files_override_the_profile() {
    let dir = TempDir::new().unwrap();
    let c = dir.path().join("c.txt");
    std::fs::write(&c, "# tighter\nk = 7\nstrict = true\n").unwrap();
    let (code, out) = run_lib(&[
        "run",
        "--generate-wall",
        "12",
        "-t",
        "3",
        "--prune-only",
        "--constants",
        c.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let doc: CertificateDocument = serde_json::from_str(&out).unwrap();
    let cfg = doc.config.unwrap();
    assert_eq!((cfg.k, cfg.strict), (7, true));
    std::fs::write(&c, "bogus = 1\n").unwrap();
    let cli = Cli::try_parse_from([
        "flatwall",
        "run",
        "--generate-wall",
        "12",
        "-t",
        "3",
        "--constants",
        c.to_str().unwrap(),
    ])
    .unwrap();
    assert!(execute(&cli, &mut Vec::new()).is_err());
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["run", "--generate-wall", "14", "-t", "5"];
    assert_eq!(run_lib(&args), run_lib(&args));
}

mod round_trip {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Generated instances survive JSON with their identifiers.
        #[test]
        fn graphs_and_walls_round_trip(size in 2usize..9, chords in prop::collection::vec((0u32..200, 0u32..200), 0..10)) {
            let (mut g, w) = build_elementary_wall(size).unwrap();
            let n = g.n() as u32;
            for (u, v) in chords {
                if u % n != v % n {
                    g.add_edge(u % n, v % n);
                }
            }
            g.remove_vertex(w.mesh.horizontal[0][0]);
            let text = serde_json::to_string(&GraphJson::of(&g)).unwrap();
            let back: Graph = parse_graph(&text).unwrap();
            prop_assert_eq!(&back, &g);
            let (g2, w2) = build_elementary_wall(size).unwrap();
            let wj = WallJson::of(&w2);
            prop_assert_eq!(parse_wall(&serde_json::to_string(&wj).unwrap(), &g2).unwrap(), w2);
        }
    }
}

#[test]
fn missing_wall_is_an_error() {
    let dir = TempDir::new().unwrap();
    let (_, w) = build_elementary_wall(3).unwrap();
    let name = write_wall_json(dir.path(), "w.json", &WallJson::of(&w));
    let cli = Cli::try_parse_from(["flatwall", "run", "--wall", &name, "-t", "3"]).unwrap();
    assert!(execute(&cli, &mut Vec::new()).is_err());
}
