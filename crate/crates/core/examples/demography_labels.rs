//! Average per-message dialect posteriors into user-level group labels,
//! then apply manual corrections.

use sagefair::demography::{average_posteriors, label_group, parse_overrides, parse_posteriors, write_groups};
use std::path::Path;

const POSTERIORS: &str = "\
user_id,message_id,p_white,p_black,p_hispanic,p_asian
1,a,0.05,0.90,0.03,0.02
1,b,0.10,0.85,0.03,0.02
2,a,0.70,0.20,0.05,0.05
3,a,0.02,0.95,0.02,0.01
3,b,0.40,0.50,0.05,0.05
4,a,0.01,0.97,0.01,0.01
";

const OVERRIDES: &str = "\
# reviewed by hand
[removals]
4
[additions]
2
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = parse_posteriors(POSTERIORS.as_bytes(), Path::new("posteriors"))?;
    let means = average_posteriors(&rows, &[])?;
    for (user, m) in &means {
        println!("user {user}: mean p_black {:.3}", m[1]);
    }
    let overrides = parse_overrides(OVERRIDES, Path::new("overrides"))?;
    let assignment = label_group(&means, "black".parse()?, 0.8, &overrides)?;
    println!("{} users in the protected group", assignment.protected_count());
    write_groups(std::io::stdout(), &assignment, "aa", "other")?;
    Ok(())
}
