//! Join a retweet edge list with a node table and derive network features.

use sagefair::graph::{
    compute_network_features, parse_edge_list, parse_node_table, Dataset, Direction, FeatureKind, NodeSchema,
};
use std::path::Path;

const EDGES: &str = "\
# retweeter retweeted
10 20
10 30
20 30
30 10
40 30
40 40
50 20
";

const USERS: &str = "\
user_id,hate,statuses,followers,glove_0,glove_1
10,hateful,120,40,0.3,-0.1
20,normal,80,300,-0.2,0.4
30,hateful,500,12,0.5,0.0
40,other,10,3,0.0,0.1
50,normal,64,90,-0.4,0.2
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let edges = parse_edge_list(EDGES.as_bytes(), ' ', Path::new("edges"))?;
    println!(
        "edge rows {}, self loops dropped {}, duplicates {}",
        edges.report.raw_rows, edges.report.self_loops, edges.report.duplicates
    );

    let schema = NodeSchema::new("user_id")
        .label("hate")
        .feature("glove_*", FeatureKind::Text)
        .feature("statuses", FeatureKind::User)
        .feature("followers", FeatureKind::User);
    let table = parse_node_table(USERS.as_bytes(), &schema, Path::new("users"))?;
    let mut data = Dataset::join(edges, &table)?;

    let user_cols: Vec<usize> = (0..data.table.feature_dim())
        .filter(|&c| data.table.feature_kinds()[c] == FeatureKind::User)
        .collect();
    let net = compute_network_features(&data.graph, Some((&data.table, &user_cols, Direction::Both)))?;
    data.table.append_columns(&net.names, FeatureKind::Network, &net.columns)?;

    println!("{} nodes, {} edges", data.graph.node_count(), data.graph.edge_count());
    println!("columns: {}", data.table.feature_names().join(", "));
    for (v, raw) in data.ids.raw_ids().iter().enumerate() {
        let label = match data.table.labels()[v] {
            Some(true) => "hateful",
            Some(false) => "normal",
            None => "-",
        };
        println!(
            "user {raw:>3} {label:>7}  in {:.0} out {:.0} eigen {:.3}",
            net.get("in_degree").unwrap()[v],
            net.get("out_degree").unwrap()[v],
            net.get("eigenvector").unwrap()[v],
        );
    }
    Ok(())
}
