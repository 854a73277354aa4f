use sagefair::graph::write_store;
use sagefair::synth::{planted_partition, PlantedPartition};
use sagefair::RngStream;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sagefair"))
}

fn run_in(root: &Path, args: &[&str]) -> Output {
    bin().arg("--out-root").arg(root).args(args).output().expect("spawn sagefair")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// The value printed for `key=` in command output.
fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key}= in output:\n{out}"))
        .to_string()
}

#[test]
fn help_exits_zero_everywhere() {
    let subs: &[&[&str]] = &[
        &[],
        &["ingest"],
        &["sample"],
        &["sample", "durw"],
        &["sample", "diffusion"],
        &["train"],
        &["evaluate"],
        &["fairness"],
        &["demography"],
        &["gradcheck"],
    ];
    for s in subs {
        let o = bin().args(*s).arg("--help").output().unwrap();
        assert!(o.status.success(), "{s:?} --help failed");
        assert!(stdout(&o).contains("Usage"), "{s:?}");
    }
}

#[test]
fn usage_errors_exit_one() {
    let o = bin().arg("no-such-command").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = bin().args(["train"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fairness_table_on_crafted_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let preds = dir.path().join("preds.csv");
    // 128 protected negatives with 1 false positive, 50 other negatives
    // with 5, plus a handful of positives.
    let mut text = String::from("node_id,label,group,score\n");
    for i in 0..128 {
        let s = if i == 0 { 0.9 } else { 0.1 };
        text += &format!("{i},0,aa,{s}\n");
    }
    for i in 0..50 {
        let s = if i < 5 { 0.8 } else { 0.2 };
        text += &format!("{},0,other,{s}\n", 1000 + i);
    }
    for i in 0..10 {
        text += &format!("{},1,other,0.7\n", 2000 + i);
    }
    std::fs::write(&preds, text).unwrap();
    let o = run_in(dir.path(), &["fairness", "--pred", preds.to_str().unwrap(), "--protected", "aa"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("0.8"), "{out}");
    let run = PathBuf::from(field(&out, "run"));
    let kv = std::fs::read_to_string(run.join("fairness.kv")).unwrap();
    assert!(kv.contains("group.aa.fp=1"), "{kv}");
    assert!(run.join("config.txt").exists());

    // 26 false positives among 128 negatives prints 20.3
    let mut text = String::from("node_id,label,group,score\n");
    for i in 0..128 {
        let s = if i < 26 { 0.9 } else { 0.1 };
        text += &format!("{i},0,aa,{s}\n");
    }
    text += "500,1,aa,0.9\n";
    std::fs::write(&preds, text).unwrap();
    let o = run_in(dir.path(), &["fairness", "--pred", preds.to_str().unwrap(), "--protected", "aa"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("20.3"), "{}", stdout(&o));
}

#[test]
fn gradcheck_passes_for_sage_mean() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--seed", "7", "gradcheck", "--model", "sage-mean"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let worst: f64 = field(&stdout(&o), "max_rel_error").parse().unwrap();
    assert!(worst < 1e-4);
}

#[test]
fn empty_prediction_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let preds = dir.path().join("empty_preds.csv");
    std::fs::write(&preds, "").unwrap();
    let o = run_in(dir.path(), &["evaluate", "--pred", preds.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("empty_preds.csv"), "{err}");
    assert_eq!(err.trim().lines().count(), 1, "{err}");
}

#[test]
fn missing_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["evaluate", "--pred", "/nonexistent/preds.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/preds.csv"));
}

fn small_store(dir: &Path) -> PathBuf {
    let cfg = PlantedPartition {
        block_size: 20,
        feature_dim: 4,
        ..PlantedPartition::default()
    };
    let data = planted_partition(&cfg, RngStream::new(11, 0)).unwrap();
    let store = dir.join("store");
    write_store(&store, &data).unwrap();
    store
}

fn train_once(root: &Path, store: &Path, threads: &str) -> Vec<u8> {
    let o = run_in(
        root,
        &[
            "--seed", "5", "--threads", threads, "train", "--store", store.to_str().unwrap(), "--model", "sage-mean",
            "--epochs", "3", "--batch-size", "8", "--folds", "3",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let run = PathBuf::from(field(&out, "run"));
    for f in ["config.txt", "loss.csv", "report.txt", "report.kv", "fold0/manifest.txt"] {
        assert!(run.join(f).exists(), "missing {f}");
    }
    std::fs::read(field(&out, "predictions")).unwrap()
}

#[test]
fn seeded_training_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let store = small_store(dir.path());
    let a = train_once(dir.path(), &store, "1");
    let b = train_once(dir.path(), &store, "1");
    assert_eq!(a, b);
    let c = train_once(dir.path(), &store, "2");
    assert_eq!(a, c);
    // three runs, three distinct run directories
    let runs = std::fs::read_dir(dir.path()).unwrap().filter(|e| e.as_ref().unwrap().file_name() != "store").count();
    assert_eq!(runs, 3);
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let store = small_store(dir.path());
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "model=lr\nlearning_rate=0.1\n").unwrap();
    let o = run_in(
        dir.path(),
        &["train", "--store", store.to_str().unwrap(), "--config", cfg.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("learning_rate"));
}
