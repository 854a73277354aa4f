//! On a planted-partition graph whose features are pure noise, only a model
//! that reads the neighborhood can separate the classes.

use sagefair::evaluation::{auc, labeled_columns, Prediction};
use sagefair::models::{Aggregator, ModelConfig};
use sagefair::synth::{planted_partition, PlantedPartition};
use sagefair::training::{stratified_kfold, train, AdamConfig, TrainConfig};
use sagefair::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = planted_partition(&PlantedPartition::default(), RngStream::new(42, 0))?;
    let plan = stratified_kfold(data.table.labels(), 5, 0)?;
    let hyper = TrainConfig {
        adam: AdamConfig { lr: 0.01, ..Default::default() },
        epochs: 60,
        batch_size: 32,
    };

    let mut models = vec![ModelConfig::lr(), ModelConfig::mlp()];
    for agg in [Aggregator::Mean, Aggregator::MaxPool, Aggregator::Attention] {
        let mut c = ModelConfig::sage(agg);
        c.hidden_dim = 16;
        c.fanouts = vec![10, 10];
        models.push(c);
    }
    for cfg in &models {
        let results = train(cfg, &hyper, &data, &plan, RngStream::new(7, 0), 1)?;
        let preds: Vec<Prediction> = results.into_iter().flat_map(|r| r.predictions).collect();
        let (s, y, _) = labeled_columns(&preds);
        println!("{:<15} pooled auc {:.3}", cfg.name(), auc(&s, &y)?);
    }
    Ok(())
}
