//! Compare backprop gradients against central differences for every model.

use sagefair::models::{check_model_gradients, ModelConfig, ModelKind};
use sagefair::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["lr", "mlp", "sage-mean", "sage-maxpool", "sage-attention"] {
        let mut cfg = ModelConfig::from_name(name)?;
        if cfg.kind != ModelKind::Lr {
            cfg.hidden_dim = 4;
        }
        cfg.fanouts = vec![3; cfg.fanouts.len()];
        let mut worst: f64 = 0.0;
        let mut entries = 0;
        for point in 0..10 {
            let r = check_model_gradients(&cfg, 5, RngStream::new(7, point), 1e-5)?;
            worst = worst.max(r.max_rel_error);
            entries = r.entries;
        }
        println!("{name:<15} {entries:>4} parameters  max rel error {worst:.2e}");
    }
    Ok(())
}
