use std::path::PathBuf;
use std::process::{Command, Output};

use grsp::io::read_table;
use grsp::{load_edge_list, EdgeListOptions};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn grsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grsp"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn estimate_on_star_graph() {
    let g1 = data("g1.tsv");
    let out = grsp(&[
        "estimate",
        "--graph",
        &g1,
        "--measure",
        "simrank",
        "--pair",
        "u,v",
        "--samples",
        "20000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let fields: Vec<&str> = text.trim().split('\t').collect();
    assert_eq!(&fields[..2], &["u", "v"]);
    let mean: f64 = fields[2].parse().unwrap();
    let se: f64 = fields[3].parse().unwrap();
    assert!((mean - 0.2).abs() <= 4.0 * se, "{text}");
}

#[test]
fn solve_single_edge_with_simrank_star() {
    let out = grsp(&[
        "solve",
        "--graph",
        &data("g2.tsv"),
        "--measure",
        "simrankstar",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# measure=simrankstar"));
    assert!(text.lines().any(|l| l == "b\ta\t0.400000"), "{text}");
    assert!(text.lines().any(|l| l == "a\tb\t0.400000"), "{text}");
}

#[test]
fn solve_output_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.tsv");
    let path_str = path.to_string_lossy().into_owned();
    let g1 = data("g1.tsv");
    let out = grsp(&[
        "solve",
        "--graph",
        &g1,
        "--measure",
        "psimrank",
        "--full-precision",
        "--output",
        &path_str,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (graph, _) = load_edge_list(
        std::fs::File::open(&g1).unwrap(),
        &EdgeListOptions::default(),
    )
    .unwrap();
    let table = read_table(std::fs::File::open(&path).unwrap(), &graph).unwrap();
    let (u, v) = (graph.resolve("u").unwrap(), graph.resolve("v").unwrap());
    assert!((table.get(u, v) - 0.8).abs() < 1e-9);
    assert_eq!(table.get(u, graph.resolve("p1").unwrap()), 0.0);
}

#[test]
fn topk_puts_the_sibling_first() {
    let out = grsp(&[
        "topk",
        "--graph",
        &data("g1.tsv"),
        "--measure",
        "psimrankstar",
        "--query",
        "u",
        "--k",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let first = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(first.starts_with("v\t"), "{text}");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);
}

#[test]
fn reruns_are_byte_identical_for_any_worker_count() {
    let graph = data("clusters.tsv");
    let args = [
        "topk",
        "--graph",
        &graph,
        "--measure",
        "prank:lambda=0.4",
        "--query",
        "da03",
        "--k",
        "10",
    ];
    let base = stdout(&grsp(&args));
    for workers in ["1", "4", "8"] {
        let mut with_workers = vec!["--workers", workers];
        with_workers.extend(args);
        assert_eq!(stdout(&grsp(&with_workers)), base);
    }
}

#[test]
fn eval_reports_perfect_map_on_separated_clusters() {
    let out = grsp(&[
        "eval",
        "--graph",
        &data("clusters.tsv"),
        "--labels",
        &data("clusters.labels.tsv"),
        "--measure",
        "simrank",
        "--measure",
        "psimrankstar",
        "--k",
        "10",
        "--num-queries",
        "5",
        "--num-trials",
        "3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let mean = text.lines().find(|l| l.starts_with("mean\t")).unwrap();
    assert_eq!(mean, "mean\t1.000000\t1.000000");
}

#[test]
fn kernels_lists_every_form() {
    let out = grsp(&["kernels"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for head in [
        "simrank",
        "rvs",
        "prank:",
        "psimrank",
        "simrankstar",
        "psimrankstar",
        "convex:",
        "product:",
    ] {
        assert!(text.lines().any(|l| l.starts_with(head)), "{head}");
    }
}

#[test]
fn exit_codes_separate_usage_and_data_errors() {
    let g1 = data("g1.tsv");
    let bad_measure = grsp(&["solve", "--graph", &g1, "--measure", "cosine"]);
    assert_eq!(bad_measure.status.code(), Some(1));
    let bad_flag = grsp(&["solve", "--graph", &g1]);
    assert_eq!(bad_flag.status.code(), Some(1));
    let missing = grsp(&[
        "solve",
        "--graph",
        "/nonexistent/edges.tsv",
        "--measure",
        "simrank",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown_node = grsp(&[
        "estimate",
        "--graph",
        &g1,
        "--measure",
        "simrank",
        "--pair",
        "u,zz",
    ]);
    assert_eq!(unknown_node.status.code(), Some(2));
}
