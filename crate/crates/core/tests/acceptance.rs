//! One PASS/FAIL/SKIPPED line per acceptance criterion.

use rand::Rng;
use sagefair::evaluation::{
    auc, confusion, fairness_report, labeled_columns, prf, ConfusionMatrix, FairnessReport, Prediction,
};
use sagefair::graph::{
    compute_network_features, load_edge_list, load_node_table, Dataset, DirectedGraph, Direction, FeatureKind,
    NodeSchema,
};
use sagefair::models::{check_model_gradients, Aggregator, InputFeatures, ModelConfig};
use sagefair::samplers::{diffusion_scores, durw_walk};
use sagefair::synth::{planted_partition, PlantedPartition};
use sagefair::training::{class_weight, fit, stratified_kfold, train, AdamConfig, FoldResult, TrainConfig};
use sagefair::RngStream;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

/// Directory holding the public retweet-graph release
/// (`users_neighborhood_anon.csv`, `users.edges`, optional `schema.txt`).
const DATASET_ENV: &str = "HATEFUL_USERS_DIR";

enum Outcome {
    Pass(String),
    Fail(String),
    Skipped(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn pooled_auc(results: &[FoldResult]) -> f64 {
    let preds: Vec<Prediction> = results.iter().flat_map(|r| r.predictions.clone()).collect();
    let (s, y, _) = labeled_columns(&preds);
    auc(&s, &y).unwrap()
}

fn default_schema() -> NodeSchema {
    NodeSchema::parse(
        "id=user_id\nlabel=hate\n\
         text=*glove*\n\
         user=statuses_count,followers_count,followees_count,favorites_count,listed_count,number_urls,number_hashtags,mentions,sentiment,subjectivity\n\
         network=betweenness,eigenvector,in_degree,out_degree\n",
    )
    .unwrap()
}

fn full_dataset() -> Outcome {
    let Some(dir) = std::env::var_os(DATASET_ENV) else {
        return Outcome::Skipped(format!("set {DATASET_ENV} to the dataset directory"));
    };
    let dir = Path::new(&dir);
    let schema = match std::fs::read_to_string(dir.join("schema.txt")) {
        Ok(text) => NodeSchema::parse(&text).unwrap(),
        Err(_) => default_schema(),
    };
    let edges = load_edge_list(dir.join("users.edges"), ' ').unwrap();
    let table = load_node_table(dir.join("users_neighborhood_anon.csv"), &schema).unwrap();
    let mut data = Dataset::join(edges, &table).unwrap();
    if !data.table.feature_kinds().contains(&FeatureKind::Network) {
        let cols = compute_network_features(&data.graph, None).unwrap();
        data.table.append_columns(&cols.names, FeatureKind::Network, &cols.columns).unwrap();
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let plan = stratified_kfold(data.table.labels(), 5, 0).unwrap();
    let hyper = TrainConfig::default();
    let run = |cfg: &ModelConfig| train(cfg, &hyper, &data, &plan, RngStream::new(0, 0), threads).unwrap();

    let sage = run(&ModelConfig::sage(Aggregator::Mean));
    let preds: Vec<Prediction> = sage.iter().flat_map(|r| r.predictions.clone()).collect();
    let (s, y, _) = labeled_columns(&preds);
    let a_sage = auc(&s, &y).unwrap();
    let f1 = prf(&confusion(&s, &y, 0.5).unwrap()).f1.value;
    let a_lr = pooled_auc(&run(&ModelConfig::lr()));
    let mut beats = true;
    let mut detail = format!("sage-mean auc {a_sage:.3} f1 {f1:.3}; lr auc {a_lr:.3}");
    for agg in [Aggregator::MaxPool, Aggregator::Attention] {
        let a = pooled_auc(&run(&ModelConfig::sage(agg)));
        beats &= a > a_lr;
        detail += &format!("; sage-{agg} auc {a:.3}");
    }
    check(a_sage >= 0.85 && f1 >= 0.50 && a_sage > a_lr && beats, detail)
}

/// Predictions for 128 protected negatives of which `fp` score above the
/// threshold, plus one positive so the report is well defined.
fn crafted(fp: usize) -> FairnessReport {
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    for i in 0..128 {
        scores.push(if i < fp { 0.9 } else { 0.1 });
        labels.push(false);
        groups.push(Some("aa".to_string()));
    }
    for i in 0..40 {
        scores.push(if i < 3 { 0.8 } else { 0.2 });
        labels.push(i >= 30);
        groups.push(Some("other".to_string()));
    }
    fairness_report(&scores, &labels, &groups, "aa", 0.5).unwrap()
}

fn fairness_arithmetic() -> Outcome {
    let table = [(26, 20.3), (13, 10.2), (5, 3.9), (1, 0.7), (0, 0.0)];
    let mut ok = true;
    let mut shown = Vec::new();
    for (fp, expected) in table {
        let r = crafted(fp);
        let pct = 100.0 * r.protected_stats.fpr.unwrap();
        // independent oracle: fp / 128 as an exact rational, in percent
        let oracle = fp as f64 * 100.0 / 128.0;
        ok &= (pct - oracle).abs() < 1e-9 && (pct - expected).abs() <= 0.1 + 1e-9;
        ok &= r.protected_stats.confusion.fp == fp as u64 && r.protected_stats.confusion.negatives() == 128;
        shown.push(format!("{pct:.2}"));
    }
    check(ok, format!("aa fpr% = {}", shown.join(", ")))
}

fn homophily() -> Outcome {
    let start = Instant::now();
    let mut sage_aucs = Vec::new();
    let mut lr_aucs = Vec::new();
    let mut sage_cfg = ModelConfig::sage(Aggregator::Mean);
    sage_cfg.hidden_dim = 16;
    sage_cfg.fanouts = vec![10, 10];
    let hyper = TrainConfig {
        adam: AdamConfig { lr: 0.01, ..Default::default() },
        epochs: 60,
        batch_size: 32,
    };
    for rep in 0..5u64 {
        let data = planted_partition(&PlantedPartition::default(), RngStream::new(1000 + rep, 0)).unwrap();
        assert_eq!(data.graph.node_count(), 100);
        let plan = stratified_kfold(data.table.labels(), 5, rep).unwrap();
        let rng = RngStream::new(rep, 1);
        sage_aucs.push(pooled_auc(&train(&sage_cfg, &hyper, &data, &plan, rng, 1).unwrap()));
        lr_aucs.push(pooled_auc(&train(&ModelConfig::lr(), &hyper, &data, &plan, rng, 1).unwrap()));
    }
    let elapsed = start.elapsed();
    let lr_mean = lr_aucs.iter().sum::<f64>() / lr_aucs.len() as f64;
    let sage_min = sage_aucs.iter().cloned().fold(f64::INFINITY, f64::min);
    check(
        sage_min > 0.9 && (lr_mean - 0.5).abs() <= 0.1 && elapsed < Duration::from_secs(60),
        format!(
            "min sage auc {sage_min:.3}, mean lr auc {lr_mean:.3} over 5 replicates, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn gradients() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut configs = vec![ModelConfig::lr(), ModelConfig::mlp()];
    for agg in [Aggregator::Mean, Aggregator::MaxPool, Aggregator::Attention] {
        let mut c = ModelConfig::sage(agg);
        c.hidden_dim = 4;
        c.fanouts = vec![3, 3];
        configs.push(c);
    }
    configs[1].hidden_dim = 4;
    for cfg in &configs {
        for point in 0..10 {
            let r = check_model_gradients(cfg, 5, RngStream::new(7, point), 1e-5).unwrap();
            worst = worst.max(r.max_rel_error);
        }
    }
    check(worst < 1e-4, format!("max relative error {worst:.2e} over 5 models x 10 points"))
}

fn metric_oracles() -> Outcome {
    let mut rng = RngStream::new(2024, 0).rng();
    let mut auc_ok = 0;
    let mut cm_ok = 0;
    let trials = 1000;
    for _ in 0..trials {
        let n = rng.gen_range(2..=30);
        let levels = rng.gen_range(1..=10);
        let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..levels) as f64 / levels as f64).collect();
        let mut labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        labels[0] = true;
        labels[1] = false;
        // exhaustive pair count, in half-units so the numerator stays integral
        let (mut half_hits, mut pairs) = (0u64, 0u64);
        for i in 0..n {
            for j in 0..n {
                if labels[i] && !labels[j] {
                    pairs += 1;
                    half_hits += match scores[i].partial_cmp(&scores[j]).unwrap() {
                        std::cmp::Ordering::Greater => 2,
                        std::cmp::Ordering::Equal => 1,
                        std::cmp::Ordering::Less => 0,
                    };
                }
            }
        }
        if auc(&scores, &labels).unwrap() == half_hits as f64 / (2 * pairs) as f64 {
            auc_ok += 1;
        }
        // interior grid points, so some scores sit exactly on the threshold
        let t = if levels > 1 { rng.gen_range(1..levels) as f64 / levels as f64 } else { 0.5 };
        let mut oracle = ConfusionMatrix::default();
        for (&s, &y) in scores.iter().zip(&labels) {
            match (s > t, y) {
                (true, true) => oracle.tp += 1,
                (true, false) => oracle.fp += 1,
                (false, false) => oracle.tn += 1,
                (false, true) => oracle.fn_ += 1,
            }
        }
        let cm = confusion(&scores, &labels, t).unwrap();
        let m = prf(&cm);
        let (tp, fp, fneg) = (oracle.tp as f64, oracle.fp as f64, oracle.fn_ as f64);
        let prec_ok = if oracle.tp + oracle.fp == 0 {
            m.precision.undefined
        } else {
            m.precision.value == tp / (tp + fp)
        };
        let rec_ok = m.recall.value == tp / (tp + fneg);
        let acc_ok = m.accuracy == (oracle.tp + oracle.tn) as f64 / n as f64;
        if cm == oracle && prec_ok && rec_ok && acc_ok {
            cm_ok += 1;
        }
    }
    check(
        auc_ok == trials && cm_ok == trials,
        format!("auc exact {auc_ok}/{trials}, confusion+prf exact {cm_ok}/{trials}"),
    )
}

fn samplers() -> Outcome {
    let path = DirectedGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap().0;
    let steps = 1_000_000;
    let walk = durw_walk(&path, 0, 0.0, steps, RngStream::new(99, 0)).unwrap();
    let total: u64 = walk.visits.iter().sum();
    // undirected degrees 1,2,2,2,1
    let stationary = [1.0, 2.0, 2.0, 2.0, 1.0].map(|d| d / 8.0);
    let mut worst: f64 = 0.0;
    for (&v, &c) in walk.nodes.iter().zip(&walk.visits) {
        let freq = c as f64 / total as f64;
        worst = worst.max((freq - stationary[v as usize]).abs() / stationary[v as usize]);
    }
    let seeds = vec![0.3, 0.0, 1.5, 0.2, 7.0];
    let identity = diffusion_scores(&path, &seeds, 0.0, 25).unwrap() == seeds;
    check(
        walk.nodes.len() == 5 && worst < 0.02 && identity,
        format!("durw max relative deviation {:.3}%, diffusion alpha=0 identity {identity}", 100.0 * worst),
    )
}

fn inductivity() -> Outcome {
    let data = planted_partition(&PlantedPartition::default(), RngStream::new(5, 0)).unwrap();
    let n = data.graph.node_count();
    let mut cfg = ModelConfig::sage(Aggregator::Mean);
    cfg.hidden_dim = 8;
    cfg.fanouts = vec![5, 5];
    let nodes: Vec<u32> = (0..n as u32).collect();
    let labels: Vec<bool> = data.table.labels().iter().map(|l| l.unwrap()).collect();
    let hyper = TrainConfig { epochs: 5, batch_size: 25, ..Default::default() };
    let rows: Vec<usize> = (0..n).collect();
    let feats = InputFeatures::new(&data.table, cfg.feature_set).unwrap().fit_on(&rows);
    let (model, _, _) = fit(&cfg, &hyper, &data.graph, &feats, &nodes, &labels, RngStream::new(1, 0)).unwrap();

    // a newcomer that retweets three hateful users, unseen during training
    let newcomer = n as u32;
    let mut edges: Vec<(u32, u32)> = data.graph.edges().collect();
    edges.extend([(newcomer, 60), (newcomer, 70), (newcomer, 80)]);
    let grown = DirectedGraph::from_edges(n + 1, edges).unwrap().0;
    let mut table = data.table.clone();
    let raw = vec![0.0; table.feature_dim()];
    table.push_row(1_000_000, &raw, None, None).unwrap();
    let feats2 = InputFeatures::new(&table, cfg.feature_set)
        .unwrap()
        .with_standardizer(feats.standardizer().cloned().unwrap())
        .unwrap();
    let p = model.predict(&grown, &feats2, &[newcomer], 1, RngStream::new(2, 0)).unwrap()[0];

    // fanouts at least the maximum degree: sampling keeps whole neighborhoods
    let max_deg = (0..n as u32)
        .map(|v| data.graph.neighbor_slice(v, Direction::Both).len())
        .max()
        .unwrap();
    let mut full = model.clone();
    full.config.fanouts = vec![max_deg; 2];
    let a = full.logits(&data.graph, &feats, &nodes, 17, RngStream::new(3, 0)).unwrap();
    let b = full.logits(&data.graph, &feats, &nodes, 17, RngStream::new(4, 8)).unwrap();
    let same = a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits());
    check(
        p.is_finite() && (0.0..=1.0).contains(&p) && same,
        format!("unseen node scored {p:.3}; full-fanout logits bitwise equal across rng streams: {same}"),
    )
}

fn class_weight_contract() -> Outcome {
    let mut labels = vec![true; 544];
    labels.extend(std::iter::repeat(false).take(4438));
    let w = class_weight(&labels).unwrap();
    // 4438/544 = 2219/272 in lowest terms; check w·272 against 2219
    let exact = 2219.0 / 272.0;
    check(
        (w - exact).abs() <= 1e-12 && (w * 272.0 - 2219.0).abs() <= 1e-9,
        format!("class weight {w:.15}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("full-dataset reproduction", full_dataset),
        ("fairness arithmetic", fairness_arithmetic),
        ("homophily property", homophily),
        ("gradient correctness", gradients),
        ("metric oracles", metric_oracles),
        ("sampler statistics", samplers),
        ("inductivity", inductivity),
        ("class-weight contract", class_weight_contract),
    ];
    let mut failed = Vec::new();
    writeln!(std::io::stdout().lock()).unwrap();
    for (name, run) in criteria {
        let line = match run() {
            Outcome::Pass(d) => format!("PASS     {name}: {d}"),
            Outcome::Skipped(d) => format!("SKIPPED  {name}: {d}"),
            Outcome::Fail(d) => {
                failed.push(name);
                format!("FAIL     {name}: {d}")
            }
        };
        // straight to the handle so the table shows without --nocapture
        writeln!(std::io::stdout().lock(), "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
