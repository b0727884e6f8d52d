use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn testdata(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/testdata")
        .join(name)
}

/// Sentences of the gold corpus whose id is in `ids`, in file order.
fn gold_subset(ids: &[&str]) -> String {
    let text = fs::read_to_string(testdata("gold.conllu")).unwrap();
    text.split_inclusive("\n\n")
        .filter(|block| {
            ids.iter()
                .any(|id| block.contains(&format!("# sent_id = {}\n", id)))
        })
        .collect()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapping"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_owned()
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.dir.path().join(name)).unwrap()
    }
}

fn embeddings() -> String {
    testdata("toy-en.vec").to_str().unwrap().to_owned()
}

#[test]
fn orphan_round_trip_through_files() {
    let ws = Workspace::new();
    let gold = gold_subset(&["single-1", "noncontiguous-1", "cluster-5"]);
    let gold_path = ws.write("gold.conllu", &gold);
    let basic = ws.path("basic.conllu");
    let out = ws.path("out.conllu");

    let convert = run(&[
        "convert", "--to", "orphan", "--input", &gold_path, "--output", &basic,
    ]);
    assert!(convert.status.success(), "{}", stderr(&convert));
    assert!(!ws.read("basic.conllu").contains("CopyOf"));

    let enhance = run(&[
        "enhance",
        "--method",
        "orphan",
        "--input",
        &basic,
        "--output",
        &out,
        "--embeddings",
        &embeddings(),
    ]);
    assert!(enhance.status.success(), "{}", stderr(&enhance));
    assert_eq!(ws.read("out.conllu"), gold);
    assert!(stderr(&enhance).contains("gaps found: 3, gaps resolved: 3, copies inserted: 4"));
}

#[test]
fn composite_round_trip_through_files() {
    let ws = Workspace::new();
    let gold = gold_subset(&["single-1", "cluster-1"]);
    let gold_path = ws.write("gold.conllu", &gold);
    let composite = ws.path("composite.conllu");
    let out = ws.path("out.conllu");

    assert!(run(&[
        "convert",
        "--to",
        "composite",
        "--input",
        &gold_path,
        "--output",
        &composite
    ])
    .status
    .success());
    let composite_text = ws.read("composite.conllu");
    assert!(composite_text.contains("\t2\tconj>nsubj\t"));
    assert!(composite_text.contains("\t2\tconj>xcomp>xcomp>xcomp>obj\t"));

    let enhance = run(&[
        "enhance",
        "--method",
        "composite",
        "--input",
        &composite,
        "--output",
        &out,
    ]);
    assert!(enhance.status.success());
    let eval = run(&["evaluate", "--system", &out, "--gold", &gold_path]);
    assert!(
        stdout(&eval).contains("LP=100.00\nLR=100.00\nSAcc=100.00"),
        "{}",
        stdout(&eval)
    );
}

#[test]
fn gap_free_input_is_lifted() {
    let ws = Workspace::new();
    let input = ws.write(
        "in.conllu",
        "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_\n2\tcat\tcat\tNOUN\t_\t_\t3\tnsubj\t_\t_\n3\tsat\tsit\tVERB\t_\t_\t0\troot\t_\t_\n\n",
    );
    let output = run(&["enhance", "--pos-only", "--input", &input]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "1\tThe\tthe\tDET\t_\t_\t2\tdet\t2:det\t_\n2\tcat\tcat\tNOUN\t_\t_\t3\tnsubj\t3:nsubj\t_\n3\tsat\tsit\tVERB\t_\t_\t0\troot\t0:root\t_\n\n"
    );
}

#[test]
fn convert_examples() {
    let ws = Workspace::new();
    let gold = ws.write(
        "gold.conllu",
        &gold_subset(&["single-1", "cluster-5", "free-1"]),
    );

    let orphan = stdout(&run(&["convert", "--to", "orphan", "--input", &gold]));
    assert!(orphan.contains("6\tMary\tMary\tPROPN\t_\t_\t2\tconj\t_\t"));
    assert!(orphan.contains("7\tflowers\tflower\tNOUN\t_\t_\t6\torphan\t_\t_"));
    assert!(orphan.contains("10\tbook\tbook\tNOUN\t_\t_\t8\torphan\t_\t"));

    let composite = stdout(&run(&["convert", "--to", "composite", "--input", &gold]));
    assert!(composite.contains("5\tand\tand\tCCONJ\t_\t_\t2\tconj>cc\t_\t_"));
    assert!(composite.contains("10\tbook\tbook\tNOUN\t_\t_\t2\tconj>xcomp>obj\t_\t"));
    let free = gold_subset(&["free-1"]);
    assert!(composite.ends_with(&free));
    assert!(orphan.ends_with(&free));
}

#[test]
fn evaluate_and_stats() {
    let gold = testdata("gold.conllu");
    let gold = gold.to_str().unwrap();

    let enhanced = run(&["evaluate", "--system", gold, "--gold", gold]);
    assert!(enhanced.status.success());
    let report = stdout(&enhanced);
    for key in ["UP", "UR", "LP", "LR", "SAcc"] {
        assert!(report.contains(&format!("{}=100.00\n", key)), "{}", report);
    }

    let remnant = stdout(&run(&[
        "evaluate", "--system", gold, "--gold", gold, "--metric", "remnant",
    ]));
    assert!(remnant.contains("UAS_g=100.00\nLAS_g=100.00\n"));

    let stats = stdout(&run(&["stats", "--input", gold]));
    assert!(stats.contains("sentences=23\n"));
    assert!(stats.contains("copy_nodes=34\n"));
    assert!(stats.contains("gap_type.VerbCluster=8\n"));
}

#[test]
fn deterministic_output() {
    let ws = Workspace::new();
    let gold = ws.write(
        "gold.conllu",
        &fs::read_to_string(testdata("gold.conllu")).unwrap(),
    );
    let basic = ws.path("basic.conllu");
    assert!(
        run(&["convert", "--to", "orphan", "--input", &gold, "--output", &basic])
            .status
            .success()
    );
    let args = ["enhance", "--input", &basic, "--embeddings", &embeddings()];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn unresolvable_gap_is_not_an_error() {
    let ws = Workspace::new();
    let input = ws.write(
        "in.conllu",
        "1\tMary\tMary\tPROPN\t_\t_\t0\troot\t_\t_\n2\tflowers\tflower\tNOUN\t_\t_\t1\torphan\t_\t_\n\n",
    );
    let output = run(&["enhance", "--pos-only", "--input", &input]);
    assert!(output.status.success());
    assert!(stderr(&output).contains("sentence 1: node 1:"));
    assert!(stdout(&output).contains("1:orphan"));
}

#[test]
fn errors_exit_with_one() {
    let ws = Workspace::new();
    let broken = ws.write("broken.conllu", "1\tonly three\tcolumns\n\n");
    let output = run(&["stats", "--input", &broken]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).starts_with("error:"));

    let missing = ws.path("missing.conllu");
    assert_eq!(
        run(&["convert", "--to", "orphan", "--input", &missing])
            .status
            .code(),
        Some(1)
    );

    let gold = testdata("gold.conllu");
    let other = ws.write("other.conllu", &gold_subset(&["single-1"]));
    let mismatch = run(&[
        "evaluate",
        "--system",
        &other,
        "--gold",
        gold.to_str().unwrap(),
    ]);
    assert_eq!(mismatch.status.code(), Some(1));

    let positive = run(&[
        "enhance",
        "--pos-only",
        "--gap-penalty",
        "1",
        "--input",
        &other,
    ]);
    assert_eq!(positive.status.code(), Some(1));
}
