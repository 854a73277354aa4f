//! Per-group false positive rates for a set of models scored on the same
//! users, printed as a predictive-equality table.

use sagefair::evaluation::fairness_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 128 protected and 300 other normal users, 60 hateful users
    let fp_counts = [("lr", 26, 41), ("mlp", 13, 30), ("sage-mean", 1, 9), ("sage-attention", 0, 6)];
    println!("{:<16} {:>8} {:>8} {:>8}", "model", "aa fpr%", "rest%", "gap");
    for (name, fp_aa, fp_rest) in fp_counts {
        let mut scores = Vec::new();
        let mut labels = Vec::new();
        let mut groups = Vec::new();
        let mut push = |n: usize, fp: usize, group: &str| {
            for i in 0..n {
                scores.push(if i < fp { 0.8 } else { 0.1 });
                labels.push(false);
                groups.push(Some(group.to_string()));
            }
        };
        push(128, fp_aa, "aa");
        push(300, fp_rest, "other");
        for i in 0..60 {
            scores.push(if i % 4 == 0 { 0.3 } else { 0.9 });
            labels.push(true);
            groups.push(Some("other".to_string()));
        }
        let r = fairness_report(&scores, &labels, &groups, "aa", 0.5)?;
        println!(
            "{name:<16} {:>8.1} {:>8.1} {:>+8.1}",
            100.0 * r.protected_stats.fpr.unwrap_or(f64::NAN),
            100.0 * r.rest.fpr.unwrap_or(f64::NAN),
            100.0 * r.fpr_gap.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
