//! End-to-end behavior of the `wsi` binary: exit codes, report formats,
//! and determinism of produced files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use wsi::tsv;
use wsi_core::dataset::{ContextRecord, Dataset};

fn wsi(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsi"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn record(id: &str, word: &str, gold: Option<&str>, pred: Option<&str>) -> ContextRecord {
    ContextRecord {
        context_id: id.into(),
        word: word.into(),
        gold_sense_id: gold.map(Into::into),
        predict_sense_id: pred.map(Into::into),
        positions: vec![],
        context: format!("a context mentioning {word}"),
    }
}

/// Two-sense six-context dataset for one word, gold only.
fn six_item_dataset() -> Dataset {
    let golds = ["A", "A", "A", "B", "B", "B"];
    Dataset::new(
        golds
            .iter()
            .enumerate()
            .map(|(i, g)| record(&format!("c{i}"), "w", Some(g), None))
            .collect(),
    )
}

fn write_dataset(dir: &Path, name: &str, ds: &Dataset) -> PathBuf {
    let path = dir.join(name);
    tsv::save_tsv(ds, &path).unwrap();
    path
}

fn synth(dir: &Path, extra: &[&str]) -> (PathBuf, PathBuf) {
    let data = dir.join("data.tsv");
    let vecs = dir.join("vecs.txt");
    let mut args = vec![
        "synth",
        "--dataset",
        data.to_str().unwrap(),
        "--embeddings",
        vecs.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let out = wsi(dir, &args);
    assert_eq!(code(&out), 0, "synth failed: {}", String::from_utf8_lossy(&out.stderr));
    (data, vecs)
}

#[test]
fn induce_one_constant_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_dataset(dir.path(), "in.tsv", &six_item_dataset());
    let output = dir.path().join("out.tsv");
    let out = wsi(
        dir.path(),
        &[
            "induce",
            "--method",
            "one",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "w\t1\n");
    let produced = tsv::load_tsv(&output).unwrap();
    assert!(produced.records.iter().all(|r| r.predict_sense_id.as_deref() == Some("1")));
}

#[test]
fn induce_nn_sub_without_embeddings_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_dataset(dir.path(), "in.tsv", &six_item_dataset());
    let out = wsi(
        dir.path(),
        &[
            "induce",
            "--method",
            "nn-sub",
            "--input",
            input.to_str().unwrap(),
            "--output",
            "out.tsv",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--embeddings"));
}

#[test]
fn induce_rejects_incompatible_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_dataset(dir.path(), "in.tsv", &six_item_dataset());
    let input = input.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["induce", "--method", "ap", "--embeddings", "e.txt", "--k", "3"],
        vec!["induce", "--method", "one", "--embeddings", "e.txt"],
        vec!["induce", "--method", "agglomerative", "--embeddings", "e.txt"],
        vec![
            "induce",
            "--method",
            "agglomerative",
            "--embeddings",
            "e.txt",
            "--k",
            "2",
            "--threshold",
            "1.0",
        ],
        vec!["induce", "--method", "random"],
        vec!["induce", "--method", "kmeans", "--embeddings", "e.txt", "--threshold", "0.5"],
        vec!["induce", "--method", "singletons", "--weighting", "tfidf"],
    ];
    for mut args in cases {
        args.extend_from_slice(&["--input", input, "--output", "o.tsv"]);
        let out = wsi(dir.path(), &args);
        assert_eq!(code(&out), 2, "args {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn missing_input_file_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = wsi(
        dir.path(),
        &["induce", "--method", "one", "--input", "absent.tsv", "--output", "o.tsv"],
    );
    assert_eq!(code(&out), 1);
}

#[test]
fn evaluate_gold_copy_scores_exactly_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut ds = six_item_dataset();
    for r in ds.records.iter_mut() {
        r.predict_sense_id = r.gold_sense_id.clone();
    }
    let path = write_dataset(dir.path(), "pred.tsv", &ds);
    let out = wsi(dir.path(), &["evaluate", "--pred", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "w\t6\t1.000000\nweighted_ari\t1.000000\nmacro_ari\t1.000000\n");
}

#[test]
fn evaluate_one_cluster_baseline_scores_exactly_zero() {
    let dir = tempfile::tempdir().unwrap();
    let gold = write_dataset(dir.path(), "gold.tsv", &six_item_dataset());
    let induced = dir.path().join("pred.tsv");
    let out = wsi(
        dir.path(),
        &[
            "induce",
            "--method",
            "one",
            "--input",
            gold.to_str().unwrap(),
            "--output",
            induced.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0);
    let out = wsi(
        dir.path(),
        &[
            "evaluate",
            "--gold",
            gold.to_str().unwrap(),
            "--pred",
            induced.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("weighted_ari\t0.000000"), "{}", stdout(&out));
}

#[test]
fn evaluate_six_item_fixture_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let gold = write_dataset(dir.path(), "gold.tsv", &six_item_dataset());
    let mut pred_ds = six_item_dataset();
    let labels = ["1", "1", "2", "2", "2", "2"];
    for (r, l) in pred_ds.records.iter_mut().zip(labels) {
        r.gold_sense_id = None;
        r.predict_sense_id = Some(l.into());
    }
    let pred = write_dataset(dir.path(), "pred.tsv", &pred_ds);
    let out = wsi(
        dir.path(),
        &["evaluate", "--gold", gold.to_str().unwrap(), "--pred", pred.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "w\t6\t0.324324\nweighted_ari\t0.324324\nmacro_ari\t0.324324\n");
}

#[test]
fn evaluate_id_mismatch_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let gold = write_dataset(dir.path(), "gold.tsv", &six_item_dataset());
    let mut other = six_item_dataset();
    other.records[0].context_id = "different".into();
    for r in other.records.iter_mut() {
        r.predict_sense_id = Some("1".into());
    }
    let pred = write_dataset(dir.path(), "pred.tsv", &other);
    let out = wsi(
        dir.path(),
        &["evaluate", "--gold", gold.to_str().unwrap(), "--pred", pred.to_str().unwrap()],
    );
    assert_eq!(code(&out), 1);
}

#[test]
fn ap_on_synthetic_data_scores_high_downstream() {
    let dir = tempfile::tempdir().unwrap();
    let (data, vecs) = synth(dir.path(), &[]);
    let pred = dir.path().join("pred.tsv");
    let out = wsi(
        dir.path(),
        &[
            "induce",
            "--method",
            "ap",
            "--weighting",
            "uniform",
            "--input",
            data.to_str().unwrap(),
            "--output",
            pred.to_str().unwrap(),
            "--embeddings",
            vecs.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = wsi(
        dir.path(),
        &["evaluate", "--gold", data.to_str().unwrap(), "--pred", pred.to_str().unwrap()],
    );
    let text = stdout(&out);
    let weighted: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("weighted_ari\t"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(weighted >= 0.9, "weighted ARI {weighted}");
}

#[test]
fn split_produces_two_valid_partitioning_files() {
    let dir = tempfile::tempdir().unwrap();
    let (data, _) = synth(dir.path(), &["--words", "9", "--contexts-per-sense", "2"]);
    let public = dir.path().join("public.tsv");
    let private = dir.path().join("private.tsv");
    let out = wsi(
        dir.path(),
        &[
            "split",
            "--input",
            data.to_str().unwrap(),
            "--public",
            public.to_str().unwrap(),
            "--private",
            private.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0);
    let input = tsv::load_tsv(&data).unwrap();
    let public = tsv::load_tsv(&public).unwrap();
    let private = tsv::load_tsv(&private).unwrap();
    assert_eq!(public.len() + private.len(), input.len());
    let public_words: Vec<&str> = public.group_by_word().iter().map(|_| "").collect();
    let _ = public_words;
    // No word appears on both sides.
    for (word, _) in public.group_by_word() {
        assert!(!private.records.iter().any(|r| r.word == word));
    }
}

#[test]
fn stats_match_synth_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let (data, _) = synth(
        dir.path(),
        &["--words", "3", "--senses", "2", "--contexts-per-sense", "10"],
    );
    let out = wsi(dir.path(), &["stats", "--input", data.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "words\t3\nsenses\t6\navg_senses_per_word\t2.000000\ncontexts\t60\n"
    );
}

#[test]
fn agreement_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let perfect = dir.path().join("perfect.tsv");
    std::fs::write(&perfect, "a\ta\nb\tb\nc\tc\na\ta\n").unwrap();
    let out = wsi(dir.path(), &["agreement", "--input", perfect.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1.000000\n");

    let disagree = dir.path().join("disagree.tsv");
    std::fs::write(&disagree, "a\tb\na\tb\nb\ta\nb\ta\n").unwrap();
    let out = wsi(dir.path(), &["agreement", "--input", disagree.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "-0.750000\n");

    // A matrix with no pairable unit cannot be scored.
    let unpairable = dir.path().join("unpairable.tsv");
    std::fs::write(&unpairable, "a\t\n\tb\n").unwrap();
    let out = wsi(dir.path(), &["agreement", "--input", unpairable.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn synth_and_induce_are_byte_deterministic() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let mut artifacts = Vec::new();
    for dir in [dir_a.path(), dir_b.path()] {
        let (data, vecs) = synth(dir, &["--report", "truth.tsv"]);
        let pred = dir.join("pred.tsv");
        let out = wsi(
            dir,
            &[
                "induce",
                "--method",
                "kmeans",
                "--k",
                "2",
                "--seed",
                "99",
                "--input",
                data.to_str().unwrap(),
                "--output",
                pred.to_str().unwrap(),
                "--embeddings",
                vecs.to_str().unwrap(),
            ],
        );
        assert_eq!(code(&out), 0);
        artifacts.push((
            std::fs::read(&data).unwrap(),
            std::fs::read(&vecs).unwrap(),
            std::fs::read(dir.join("truth.tsv")).unwrap(),
            std::fs::read(&pred).unwrap(),
            stdout(&out),
        ));
    }
    assert_eq!(artifacts[0], artifacts[1]);
}
