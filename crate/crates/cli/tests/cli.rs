//! End-to-end tests of the `relsg` binary: artifact contents, stdout
//! summaries, and the exit-code contract (0 success, 1 validation error,
//! 2 failed verification).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn relsg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relsg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

/// Materializes the six-node fixture and returns (dir, manifest path,
/// partition path).
fn fig1_on_disk(dir: &Path) -> (PathBuf, PathBuf) {
    let out = relsg(&["fixtures", "fig1", "--out", path_str(dir)]);
    assert_eq!(code(&out), 0, "fixtures failed: {}", stderr(&out));
    (dir.join("manifest.json"), dir.join("partition3.json"))
}

fn monks_on_disk(dir: &Path) -> PathBuf {
    let out = relsg(&["fixtures", "monks-density", "--out", path_str(dir)]);
    assert_eq!(code(&out), 0, "fixtures failed: {}", stderr(&out));
    dir.join("manifest.json")
}

#[test]
fn fixtures_listing_names_bundles() {
    let out = relsg(&["fixtures"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("fig1"));
    assert!(text.contains("monks-density"));
}

#[test]
fn ingest_summarizes_fixture() {
    let tmp = TempDir::new().unwrap();
    let (manifest, _) = fig1_on_disk(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "ingest",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "6 nodes; 2 relations: H (5 ties), L (14 ties); boolean\n"
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("graph.json")).unwrap()).unwrap();
    assert_eq!(summary["node_count"], 6);
    assert_eq!(summary["relations"][1]["ties"], 14);
}

#[test]
fn exact_partition_restricted_to_one_relation() {
    let tmp = TempDir::new().unwrap();
    let (manifest, _) = fig1_on_disk(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "partition",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--exact",
        "--relations",
        "L",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "3 blocks: {1}  {2, 3}  {4, 5, 6}\n");
    let saved: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("partition.json")).unwrap())
            .unwrap();
    assert_eq!(saved["1"], "B1");
    assert_eq!(saved["2"], "B2");
    assert_eq!(saved["3"], "B2");
    assert_eq!(saved["6"], "B3");
}

#[test]
fn clustering_to_three_blocks_matches_exact_l_partition() {
    let tmp = TempDir::new().unwrap();
    let (manifest, _) = fig1_on_disk(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "partition",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--metric",
        "euclidean",
        "--blocks",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "3 blocks: {1}  {2, 3}  {4, 5, 6}\n");
    // Clustering also leaves the pairwise distances behind for inspection.
    let distances = fs::read_to_string(out_dir.join("distances.csv")).unwrap();
    assert_eq!(distances.lines().count(), 6);
    assert!(distances.starts_with("0,"));
}

#[test]
fn density_and_image_artifacts_for_three_block_partition() {
    let tmp = TempDir::new().unwrap();
    let (manifest, partition) = fig1_on_disk(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "density",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--partition",
        path_str(&partition),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("perfect: no"));
    assert_eq!(
        fs::read_to_string(out_dir.join("density_h.csv")).unwrap(),
        "0,1,0\n0,0,0.5\n0,0,0\n"
    );
    assert_eq!(
        fs::read_to_string(out_dir.join("density_l.csv")).unwrap(),
        "1,0,0\n0,1,0\n0,0,1\n"
    );

    let out = relsg(&[
        "image",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--partition",
        path_str(&partition),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("H = 5/36"));
    assert!(stdout(&out).contains("L = 7/18"));
    assert_eq!(
        fs::read_to_string(out_dir.join("image_h.csv")).unwrap(),
        "0,1,0\n0,0,1\n0,0,0\n"
    );
    assert_eq!(
        fs::read_to_string(out_dir.join("image_l.csv")).unwrap(),
        "1,0,0\n0,1,0\n0,0,1\n"
    );

    let out = relsg(&[
        "leanfit",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--partition",
        path_str(&partition),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // The lean fit coincides with the default-delta image on this graph.
    assert_eq!(
        fs::read_to_string(out_dir.join("leanfit_h.csv")).unwrap(),
        "0,1,0\n0,0,1\n0,0,0\n"
    );
}

#[test]
fn semigroup_json_and_table_artifacts() {
    let tmp = TempDir::new().unwrap();
    let (manifest, _) = fig1_on_disk(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "semigroup",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--table",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("semigroup.json")).unwrap())
            .unwrap();
    assert_eq!(doc["element_count"], 5);
    assert_eq!(doc["element_count_without_zero"], 4);
    assert_eq!(doc["zero_index"], 4);
    assert_eq!(doc["elements"][2]["label"], "HH");
    assert_eq!(doc["elements"][4]["word"], serde_json::json!(["H", "H", "H"]));
    let table: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("table.json")).unwrap()).unwrap();
    assert_eq!(table["labels"], serde_json::json!(["H", "L", "HH", "HL", "0"]));
    assert_eq!(table["cells"][0][0], "HH");
}

#[test]
fn truncate_monastery_generators_reports_expected_counts() {
    let tmp = TempDir::new().unwrap();
    let manifest = monks_on_disk(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "truncate",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--k",
        "18",
        "--round",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("truncated.json")).unwrap())
            .unwrap();
    assert_eq!(doc["count_all"], 10);
    assert_eq!(doc["count_excluding_generators"], 8);
    assert_eq!(doc["count_excluding_generators_and_zero"], 7);
    assert_eq!(doc["stabilization_depth"], 4);
    assert_eq!(doc["zero_status"], "realized");
    let listing = fs::read_to_string(out_dir.join("listing.txt")).unwrap();
    assert!(listing.contains("2-fold products (4):"));
    assert!(listing.contains("3-fold products (3):"));
    assert!(listing.contains("zero: realized; shortest word PPPP (length 4)"));
}

#[test]
fn verify_hom_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let (manifest, partition3) = fig1_on_disk(tmp.path());
    // All-singleton partitions are trivially perfect.
    let singles = tmp.path().join("singles.json");
    fs::write(
        &singles,
        r#"{"1":"a","2":"b","3":"c","4":"d","5":"e","6":"f"}"#,
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "verify-hom",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--partition",
        path_str(&singles),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("surjective: yes"));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("hom.json")).unwrap()).unwrap();
    assert_eq!(doc["source_count"], 5);
    assert_eq!(doc["target_count"], 5);
    assert_eq!(doc["surjective"], true);

    // The three-block partition is not perfect (one fractional density), so
    // the claim fails verification.
    let out = relsg(&[
        "verify-hom",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--partition",
        path_str(&partition3),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not perfect"));
}

#[test]
fn verify_functor_rejects_non_nesting_hierarchy() {
    let tmp = TempDir::new().unwrap();
    let (manifest, _) = fig1_on_disk(tmp.path());
    let p1 = tmp.path().join("p1.json");
    let p2 = tmp.path().join("p2.json");
    fs::write(&p1, r#"{"1":"x","2":"x","3":"y","4":"y","5":"z","6":"z"}"#).unwrap();
    fs::write(&p2, r#"{"1":"u","2":"v","3":"v","4":"v","5":"v","6":"v"}"#).unwrap();
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "verify-functor",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--hierarchy",
        path_str(&p1),
        path_str(&p2),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("straddles"), "{}", stderr(&out));
}

#[test]
fn report_composes_all_sections() {
    let tmp = TempDir::new().unwrap();
    let (manifest, partition) = fig1_on_disk(tmp.path());
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "report",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--partition",
        path_str(&partition),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    for section in [
        "== graph ==",
        "== partition ==",
        "== semigroup ==",
        "== densities ==",
        "== images (deltas: H = 5/36, L = 7/18) ==",
        "== lean fit ==",
    ] {
        assert!(text.contains(section), "missing {section} in:\n{text}");
    }
    let report_file = fs::read_to_string(out_dir.join("report.txt")).unwrap();
    assert_eq!(report_file, text);
    for artifact in [
        "graph.json",
        "partition.json",
        "semigroup.json",
        "table.txt",
        "blockmodel.json",
        "image.json",
        "leanfit.json",
        "density_h.csv",
        "image_l.csv",
        "leanfit_h.csv",
    ] {
        assert!(out_dir.join(artifact).exists(), "missing {artifact}");
    }
}

#[test]
fn weighted_graph_report_skips_boolean_only_sections() {
    let tmp = TempDir::new().unwrap();
    let manifest = monks_on_disk(tmp.path());
    let partition = tmp.path().join("p.json");
    fs::write(&partition, r#"{"F1":"a","F2":"b"}"#).unwrap();
    let out_dir = tmp.path().join("out");
    let out = relsg(&[
        "report",
        "--input",
        path_str(&manifest),
        "--out",
        path_str(&out_dir),
        "--partition",
        path_str(&partition),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(!text.contains("== semigroup =="));
    assert!(text.contains("images: skipped"));
    assert!(text.contains("== lean fit =="));
}

#[test]
fn validation_failures_exit_one() {
    let tmp = TempDir::new().unwrap();
    let (manifest, partition) = fig1_on_disk(tmp.path());
    let out_dir = tmp.path().join("out");
    let out_str = path_str(&out_dir);

    // Missing --input.
    let out = relsg(&["ingest", "--out", out_str]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--input"));

    // Nonexistent manifest.
    let out = relsg(&["ingest", "--input", "no-such.json", "--out", out_str]);
    assert_eq!(code(&out), 1);

    // Unknown subcommand and unknown flag are usage errors.
    assert_eq!(code(&relsg(&["frobnicate"])), 1);
    assert_eq!(code(&relsg(&["ingest", "--wat"])), 1);

    // Help and version are not errors.
    assert_eq!(code(&relsg(&["--help"])), 0);
    assert_eq!(code(&relsg(&["--version"])), 0);

    // Out-of-range delta.
    let manifest_str = path_str(&manifest);
    let partition_str = path_str(&partition);
    let out = relsg(&[
        "image", "--input", manifest_str, "--out", out_str, "--partition", partition_str,
        "--delta", "0",
    ]);
    assert_eq!(code(&out), 1);

    // Partition mode is mandatory.
    let out = relsg(&["partition", "--input", manifest_str, "--out", out_str]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--exact"));

    // Semigroup needs Boolean relations.
    let monks = monks_on_disk(tmp.path());
    let out = relsg(&["semigroup", "--input", path_str(&monks), "--out", out_str]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("Boolean"));

    // Unknown fixture.
    assert_eq!(code(&relsg(&["fixtures", "wat", "--out", out_str])), 1);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let (manifest, partition) = fig1_on_disk(tmp.path());
    let run = |out_dir: &Path| {
        let out = relsg(&[
            "report",
            "--input",
            path_str(&manifest),
            "--out",
            path_str(out_dir),
            "--partition",
            path_str(&partition),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    };
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run(&a);
    run(&b);
    for name in ["semigroup.json", "blockmodel.json", "image.json", "report.txt"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "artifact {name} differs between identical runs"
        );
    }
}
