//! Stratified 5-fold training with per-fold checkpoints and a pooled
//! prediction file, the same artifacts `sagefair train` writes.

use sagefair::evaluation::{evaluate_predictions, write_predictions, Prediction};
use sagefair::graph::{Dataset, NodeTable};
use sagefair::models::{load_checkpoint, save_checkpoint, Aggregator, ModelConfig};
use sagefair::synth::{planted_partition, PlantedPartition};
use sagefair::training::{stratified_kfold, train, AdamConfig, TrainConfig};
use sagefair::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // roughly one hateful user in nine
    let cfg = PlantedPartition {
        block_size: 80,
        protected_fraction: 0.2,
        ..Default::default()
    };
    let base = planted_partition(&cfg, RngStream::new(8, 0))?;
    let t = &base.table;
    let labels = t
        .labels()
        .iter()
        .enumerate()
        .map(|(v, &l)| if l == Some(true) && v % 8 != 0 { None } else { l })
        .collect();
    let table = NodeTable::new(
        t.ids().to_vec(),
        t.features().to_vec(),
        t.feature_names().to_vec(),
        t.feature_kinds().to_vec(),
        labels,
        t.groups().to_vec(),
    )?;
    let data = Dataset::new(base.graph, table)?;
    let (pos, neg) = data.table.label_counts();
    println!("{pos} hateful, {neg} normal");

    let plan = stratified_kfold(data.table.labels(), 5, 0)?;
    for (i, f) in plan.folds.iter().enumerate() {
        println!("fold {i}: {} train, {} test", f.train.len(), f.test.len());
    }

    let mut model = ModelConfig::sage(Aggregator::Mean);
    model.hidden_dim = 16;
    let hyper = TrainConfig {
        adam: AdamConfig { lr: 0.01, ..Default::default() },
        epochs: 40,
        batch_size: 32,
    };
    let results = train(&model, &hyper, &data, &plan, RngStream::new(1, 0), 2)?;

    let out = std::env::temp_dir().join(format!("sagefair-cv-{}", std::process::id()));
    for r in &results {
        let dir = out.join(format!("fold{}", r.run.fold));
        save_checkpoint(&dir, &r.run.model, &[("pos_weight".into(), r.run.pos_weight.to_string())])?;
        let (restored, _) = load_checkpoint(&dir)?;
        assert_eq!(restored.params, r.run.model.params);
    }
    let preds: Vec<Prediction> = results.into_iter().flat_map(|r| r.predictions).collect();
    write_predictions(out.join("predictions.csv"), &preds)?;
    print!("{}", evaluate_predictions(&model.name(), &preds, 0.5)?.to_text());
    println!("artifacts in {}", out.display());
    Ok(())
}
