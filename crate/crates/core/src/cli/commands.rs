use super::{
    Cli, Command, DemographyArgs, DiffusionArgs, DurwArgs, EvaluateArgs, FairnessArgs, GradcheckArgs, GraphSource,
    IngestArgs, RunDir, SampleCommand, TrainArgs,
};
use crate::demography::{average_posteriors, label_group, read_groups, read_overrides, read_posteriors, write_groups, Overrides, Provenance};
use crate::error::{Error, Result};
use crate::evaluation::{
    error_cohort_stats, evaluate_predictions, fairness_report, labeled_columns, read_predictions, threshold_sweep,
    write_predictions, Cohort, CohortColumns, Prediction,
};
use crate::graph::{
    compute_network_features, load_edge_list, load_node_table, read_store, write_store, Dataset, DirectedGraph,
    Direction, FeatureKind, IdMap, NodeSchema,
};
use crate::models::{check_model_gradients, parse_kv, save_checkpoint, ModelConfig, ModelKind};
use crate::rng::RngStream;
use crate::samplers::{diffusion_scores, durw_sample, lexicon_seed_scores, select_candidates};
use crate::training::{stratified_kfold, train, TrainConfig};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Default cross-validation folds.
const DEFAULT_FOLDS: usize = 5;
/// Largest accepted gradient-check error.
const GRADCHECK_TOL: f64 = 1e-4;

type Kv = Vec<(String, String)>;

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn path_kv(k: &str, p: &Path) -> (String, String) {
    kv(k, p.display())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

pub(super) fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    if cli.threads == 0 {
        return Err(Error::Usage("--threads must be at least 1".into()));
    }
    match &cli.command {
        Command::Ingest(a) => ingest(cli, a, out),
        Command::Sample(SampleCommand::Durw(a)) => durw(cli, a, out),
        Command::Sample(SampleCommand::Diffusion(a)) => diffusion(cli, a, out),
        Command::Train(a) => train_cmd(cli, a, out),
        Command::Evaluate(a) => evaluate(cli, a, out),
        Command::Fairness(a) => fairness(cli, a, out),
        Command::Demography(a) => demography(cli, a, out),
        Command::Gradcheck(a) => gradcheck(cli, a, out),
    }
}

fn start_run(cli: &Cli, command: &str, seed: u64, mut config: Kv) -> Result<RunDir> {
    let run = RunDir::create(&cli.out_root, seed)?;
    config.insert(0, kv("command", command));
    config.push(kv("seed", seed));
    config.push(kv("threads", cli.threads));
    run.record_config(&config)?;
    Ok(run)
}

fn edge_delimiter(name: &str) -> Result<char> {
    match name {
        "space" | "whitespace" => Ok(' '),
        "tab" | "\\t" => Ok('\t'),
        "comma" => Ok(','),
        v if v.chars().count() == 1 => Ok(v.chars().next().unwrap()),
        v => Err(Error::Usage(format!("unsupported edge delimiter '{v}'"))),
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn selectors(schema: &mut NodeSchema, list: &Option<String>, kind: FeatureKind) {
    for pat in list.iter().flat_map(|l| l.split(',')).map(str::trim).filter(|p| !p.is_empty()) {
        *schema = std::mem::replace(schema, NodeSchema::new("")).feature(pat, kind);
    }
}

fn ingest(cli: &Cli, a: &IngestArgs, out: &mut dyn Write) -> Result<()> {
    let schema = match &a.schema {
        Some(p) => NodeSchema::parse(&read_text(p)?)?,
        None => {
            let mut s = NodeSchema::new(a.id.clone());
            if let Some(l) = &a.label {
                s = s.label(l.clone());
            }
            if let Some(g) = &a.group {
                s = s.group(g.clone());
            }
            selectors(&mut s, &a.text, FeatureKind::Text);
            selectors(&mut s, &a.user, FeatureKind::User);
            selectors(&mut s, &a.network, FeatureKind::Network);
            s
        }
    };
    let direction: Direction = a.direction.parse()?;
    if a.neighbor_means && !a.network_features {
        return Err(Error::Usage("--neighbor-means requires --network-features".into()));
    }
    let edges = load_edge_list(&a.edges, edge_delimiter(&a.edge_delimiter)?)?;
    let report = edges.report.clone();
    let table = load_node_table(&a.nodes, &schema)?;
    let mut data = Dataset::join(edges, &table)?;
    if a.network_features {
        let user_cols: Vec<usize> = (0..data.table.feature_dim())
            .filter(|&c| data.table.feature_kinds()[c] == FeatureKind::User)
            .collect();
        let agg = a
            .neighbor_means
            .then_some((&data.table, user_cols.as_slice(), direction));
        let cols = compute_network_features(&data.graph, agg)?;
        data.table.append_columns(&cols.names, FeatureKind::Network, &cols.columns)?;
    }
    let seed = cli.seed.unwrap_or(0);
    let run = start_run(
        cli,
        "ingest",
        seed,
        vec![
            path_kv("edges", &a.edges),
            path_kv("nodes", &a.nodes),
            kv("schema.id", &schema.id),
            kv("schema.label", schema.label.as_deref().unwrap_or("")),
            kv("schema.group", schema.group.as_deref().unwrap_or("")),
            kv("network_features", a.network_features),
            kv("neighbor_means", a.neighbor_means),
            kv("direction", direction),
        ],
    )?;
    let store = run.file("store");
    write_store(&store, &data)?;
    let (pos, neg) = data.table.label_counts();
    let mut s = String::new();
    let _ = writeln!(s, "nodes={}", data.graph.node_count());
    let _ = writeln!(s, "edges={}", data.graph.edge_count());
    let _ = writeln!(s, "edge_rows={}", report.raw_rows);
    let _ = writeln!(s, "self_loops={}", report.self_loops);
    let _ = writeln!(s, "duplicate_edges={}", report.duplicates);
    let _ = writeln!(s, "features={}", data.table.feature_dim());
    let _ = writeln!(s, "labeled_hateful={pos}");
    let _ = writeln!(s, "labeled_normal={neg}");
    let _ = writeln!(s, "store={}", store.display());
    emit(out, &s)
}

fn load_graph(src: &GraphSource) -> Result<(DirectedGraph, IdMap)> {
    match (&src.store, &src.edges) {
        (Some(dir), _) => {
            let d = read_store(dir)?;
            Ok((d.graph, d.ids))
        }
        (None, Some(path)) => {
            let el = load_edge_list(path, edge_delimiter(&src.edge_delimiter)?)?;
            Ok((el.graph, el.ids))
        }
        (None, None) => Err(Error::Usage("give a graph with --store or --edges".into())),
    }
}

fn graph_kv(src: &GraphSource) -> Kv {
    let mut c = Vec::new();
    if let Some(p) = &src.store {
        c.push(path_kv("store", p));
    }
    if let Some(p) = &src.edges {
        c.push(path_kv("edges", p));
        c.push(kv("edge_delimiter", &src.edge_delimiter));
    }
    c
}

fn durw(cli: &Cli, a: &DurwArgs, out: &mut dyn Write) -> Result<()> {
    let (graph, ids) = load_graph(&a.graph)?;
    let start = match a.start {
        Some(raw) => ids
            .dense(raw)
            .ok_or_else(|| Error::data(format!("start node {raw} is not in the graph")))?,
        None => (0..ids.len() as u32)
            .min_by_key(|&d| ids.raw(d))
            .ok_or_else(|| Error::data("graph has no nodes"))?,
    };
    let seed = cli.seed.unwrap_or(0);
    let mut config = graph_kv(&a.graph);
    config.extend([
        kv("sampler", "durw"),
        kv("start", ids.raw(start)),
        kv("jump_weight", a.jump_weight),
        kv("budget", a.budget),
    ]);
    let run = start_run(cli, "sample", seed, config)?;
    let sample = durw_sample(&graph, start, a.jump_weight, a.budget, RngStream::new(seed, 0))?;
    let mut ids_text = String::new();
    let mut visits = String::from("node_id,visits\n");
    for (&v, &c) in sample.nodes.iter().zip(&sample.visits) {
        let _ = writeln!(ids_text, "{}", ids.raw(v));
        let _ = writeln!(visits, "{},{c}", ids.raw(v));
    }
    let p = run.write("sample.txt", &ids_text)?;
    run.write("visits.csv", &visits)?;
    let mut s = String::new();
    let _ = writeln!(s, "sampled={}", sample.nodes.len());
    let _ = writeln!(s, "steps={}", sample.steps);
    let _ = writeln!(s, "complete={}", sample.complete);
    let _ = writeln!(s, "output={}", p.display());
    emit(out, &s)
}

/// Seed scores per dense node from `node_id,score` or
/// `node_id,lexicon_hits,messages`; absent nodes score 0.
fn read_seed_scores(path: &Path, ids: &IdMap) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    let delimiter = if text.lines().next().unwrap_or("").contains('\t') { b'\t' } else { b',' };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| crate::graph::csv_error(path, e))?.clone();
    let col = |n: &str| header.iter().position(|h| h == n);
    let id_col = col("node_id").ok_or_else(|| Error::Schema(format!("{}: seed file lacks 'node_id'", path.display())))?;
    let mode = match (col("score"), col("lexicon_hits"), col("messages")) {
        (Some(s), _, _) => Ok(s),
        (None, Some(h), Some(m)) => Err((h, m)),
        _ => {
            return Err(Error::Schema(format!(
                "{}: seed file needs 'score' or 'lexicon_hits' and 'messages' columns",
                path.display()
            )))
        }
    };
    let n = ids.len();
    let mut scores = vec![0.0; n];
    let (mut hits, mut msgs) = (vec![0u64; n], vec![0u64; n]);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| crate::graph::csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let bad = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let get = |i: usize| rec.get(i).unwrap_or("");
        let raw: u64 = get(id_col).parse().map_err(|_| bad(format!("invalid node_id '{}'", get(id_col))))?;
        let Some(d) = ids.dense(raw) else { continue };
        match mode {
            Ok(c) => {
                scores[d as usize] = get(c)
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite() && *x >= 0.0)
                    .ok_or_else(|| bad(format!("score '{}' must be a non-negative number", get(c))))?;
            }
            Err((h, m)) => {
                hits[d as usize] = get(h).parse().map_err(|_| bad(format!("invalid lexicon_hits '{}'", get(h))))?;
                msgs[d as usize] = get(m).parse().map_err(|_| bad(format!("invalid messages '{}'", get(m))))?;
            }
        }
    }
    match mode {
        Ok(_) => Ok(scores),
        Err(_) => lexicon_seed_scores(&hits, &msgs),
    }
}

fn diffusion(cli: &Cli, a: &DiffusionArgs, out: &mut dyn Write) -> Result<()> {
    let (graph, ids) = load_graph(&a.graph)?;
    let seeds = read_seed_scores(&a.seeds, &ids)?;
    let seed = cli.seed.unwrap_or(0);
    let mut config = graph_kv(&a.graph);
    config.extend([
        kv("sampler", "diffusion"),
        path_kv("seeds", &a.seeds),
        kv("alpha", a.alpha),
        kv("iterations", a.iterations),
        kv("strata", a.strata),
        kv("per_stratum", a.per_stratum.map(|p| p.to_string()).unwrap_or_default()),
    ]);
    let run = start_run(cli, "sample", seed, config)?;
    let scores = diffusion_scores(&graph, &seeds, a.alpha, a.iterations)?;
    let mut text = String::from("node_id,score\n");
    for (d, s) in scores.iter().enumerate() {
        let _ = writeln!(text, "{},{s}", ids.raw(d as u32));
    }
    let p = run.write("scores.csv", &text)?;
    let mut s = format!("scores={}\n", p.display());
    if let Some(per) = a.per_stratum {
        let picked = select_candidates(&scores, a.strata, per, RngStream::new(seed, 0))?;
        let list: String = picked.iter().map(|&d| format!("{}\n", ids.raw(d))).collect();
        let c = run.write("candidates.txt", &list)?;
        let _ = writeln!(s, "candidates={}", picked.len());
        let _ = writeln!(s, "candidates_file={}", c.display());
    }
    emit(out, &s)
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn train_cmd(cli: &Cli, a: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let mut map = match &a.config {
        Some(p) => parse_kv(&read_text(p)?)?,
        None => BTreeMap::new(),
    };
    if let Some(name) = &a.model {
        let defaults = ModelConfig::from_name(name)?;
        map.insert("model".into(), defaults.kind.to_string());
        map.insert("aggregator".into(), defaults.aggregator.to_string());
    }
    if let Some(e) = a.epochs {
        map.insert("epochs".into(), e.to_string());
    }
    if let Some(lr) = a.lr {
        map.insert("lr".into(), lr.to_string());
    }
    if let Some(b) = a.batch_size {
        map.insert("batch_size".into(), b.to_string());
    }
    let model = ModelConfig::from_kv(&mut map)?;
    let hyper = TrainConfig::from_kv(&mut map)?;
    let config_seed = map
        .remove("seed")
        .map(|s| s.trim().parse::<u64>().map_err(|_| Error::Usage(format!("invalid seed '{s}'"))))
        .transpose()?;
    let config_folds = map
        .remove("folds")
        .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Usage(format!("invalid folds '{s}'"))))
        .transpose()?;
    if let Some(k) = map.keys().next() {
        return Err(Error::Usage(format!("unknown config key '{k}'")));
    }
    let seed = cli.seed.or(config_seed).unwrap_or(0);
    let folds = a.folds.or(config_folds).unwrap_or(DEFAULT_FOLDS);

    let data = read_store(&a.store)?;
    let plan = stratified_kfold(data.table.labels(), folds, seed)?;
    let mut config: Kv = vec![path_kv("store", &a.store)];
    config.extend(model.to_kv());
    config.extend(hyper.to_kv());
    config.push(kv("folds", folds));
    config.push(kv("threshold", a.threshold));
    let run = start_run(cli, "train", seed, config)?;

    let results = train(&model, &hyper, &data, &plan, RngStream::new(seed, 0), cli.threads)?;
    let mut preds: Vec<Prediction> = Vec::new();
    let mut loss = String::from("fold,epoch,loss\n");
    for r in &results {
        let st = &r.run.standardizer;
        let extra = vec![
            kv("fold", r.run.fold),
            kv("pos_weight", r.run.pos_weight),
            kv("seed", seed),
            kv("columns", st.names.join(",")),
            kv("standardize.mean", list(&st.mean)),
            kv("standardize.std", list(&st.std)),
        ];
        let mut extra = extra;
        extra.extend(hyper.to_kv());
        save_checkpoint(run.file(&format!("fold{}", r.run.fold)), &r.run.model, &extra)?;
        for (e, l) in r.run.loss_trace.iter().enumerate() {
            let _ = writeln!(loss, "{},{e},{l}", r.run.fold);
        }
        preds.extend(r.predictions.iter().cloned());
    }
    run.write("loss.csv", &loss)?;
    let pred_path = run.file("predictions.csv");
    write_predictions(&pred_path, &preds)?;
    let report = evaluate_predictions(&model.name(), &preds, a.threshold)?;
    run.write("report.txt", &report.to_text())?;
    run.write("report.kv", &report.kv_text())?;
    let mut s = report.to_text();
    let _ = writeln!(s, "predictions={}", pred_path.display());
    let _ = writeln!(s, "run={}", run.path.display());
    emit(out, &s)
}

trait KvText {
    fn kv_text(&self) -> String;
}

impl KvText for crate::evaluation::EvalReport {
    fn kv_text(&self) -> String {
        self.to_kv().render()
    }
}

fn read_all_predictions(paths: &[PathBuf]) -> Result<Vec<Prediction>> {
    let mut all = Vec::new();
    for p in paths {
        let preds = read_predictions(p)?;
        if preds.is_empty() {
            return Err(Error::data(format!("{}: prediction file has no rows", p.display())));
        }
        if preds.iter().all(|x| x.label.is_none()) {
            return Err(Error::data(format!("{}: prediction file has no labeled rows", p.display())));
        }
        all.extend(preds);
    }
    Ok(all)
}

fn files_kv(paths: &[PathBuf]) -> (String, String) {
    kv(
        "pred",
        paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(","),
    )
}

fn parse_thresholds(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Usage(format!("invalid threshold '{t}'"))))
        .collect()
}

fn evaluate(cli: &Cli, a: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let preds = read_all_predictions(&a.preds)?;
    let mut config = vec![files_kv(&a.preds), kv("threshold", a.threshold), kv("name", &a.name)];
    if let Some(s) = &a.sweep {
        config.push(kv("sweep", s));
    }
    if let Some(p) = &a.store {
        config.push(path_kv("store", p));
    }
    let seed = cli.seed.unwrap_or(0);
    let report = evaluate_predictions(&a.name, &preds, a.threshold)?;
    let run = start_run(cli, "evaluate", seed, config)?;
    let mut text = report.to_text();
    let mut doc = report.to_kv();

    if let Some(sweep) = &a.sweep {
        let (scores, labels, _) = labeled_columns(&preds);
        let rows = threshold_sweep(&scores, &labels, &parse_thresholds(sweep)?)?;
        let _ = writeln!(text, "\n{:>9} {:>6} {:>6} {:>6} {:>6} {:>9} {:>7} {:>6}", "threshold", "tp", "fp", "tn", "fn", "precision", "recall", "f1");
        for (t, cm, m) in rows {
            let f = |x: crate::evaluation::Metric| if x.undefined { "NA".to_string() } else { format!("{:.1}", 100.0 * x.value) };
            let _ = writeln!(
                text,
                "{t:>9} {:>6} {:>6} {:>6} {:>6} {:>9} {:>7} {:>6}",
                cm.tp,
                cm.fp,
                cm.tn,
                cm.fn_,
                f(m.precision),
                f(m.recall),
                f(m.f1)
            );
            doc.confusion(&format!("sweep.{t}"), &cm);
        }
    }

    if let Some(store) = &a.store {
        let data = read_store(store)?;
        let column = |name: &Option<String>| -> Result<Option<Vec<f64>>> {
            name.as_ref()
                .map(|n| {
                    data.table
                        .column_index(n)
                        .map(|c| data.table.raw_column(c))
                        .ok_or_else(|| Error::Schema(format!("store has no column '{n}'")))
                })
                .transpose()
        };
        let lexicon = column(&a.lexicon_column)?;
        let feature = column(&a.feature_column)?;
        let mut nodes = Vec::new();
        let mut scores = Vec::new();
        for p in preds.iter().filter(|p| p.label.is_some()) {
            let d = data
                .ids
                .dense(p.node_id)
                .ok_or_else(|| Error::data(format!("predicted node {} is not in the store", p.node_id)))?;
            nodes.push(d);
            scores.push(p.score);
        }
        let table = error_cohort_stats(
            &data.graph,
            data.table.labels(),
            &nodes,
            &scores,
            a.threshold,
            CohortColumns {
                lexicon_counts: lexicon.as_deref(),
                feature: feature.as_deref(),
            },
        )?;
        let _ = writeln!(text, "\n{:<7} {:>6} {:>14} {:>12} {:>12}", "cohort", "size", "hateful_nbr%", "lexicon", "feature");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
        for c in Cohort::ALL {
            if let Some(st) = table.get(c) {
                let _ = writeln!(
                    text,
                    "{:<7} {:>6} {:>14.1} {:>12} {:>12}",
                    c.short(),
                    st.size,
                    100.0 * st.hateful_neighbor_fraction,
                    opt(st.mean_lexicon),
                    opt(st.mean_feature)
                );
                doc.int(format!("cohort.{c}.size"), st.size as u64);
                doc.float(format!("cohort.{c}.hateful_neighbor_fraction"), st.hateful_neighbor_fraction);
                if let Some(x) = st.mean_lexicon {
                    doc.float(format!("cohort.{c}.mean_lexicon"), x);
                }
                if let Some(x) = st.mean_feature {
                    doc.float(format!("cohort.{c}.mean_feature"), x);
                }
            }
        }
        if let Some(r) = table.lexicon_ratio(Cohort::FalsePositive, Cohort::TrueNegative) {
            let _ = writeln!(text, "lexicon fp/tn ratio: {r:.3}");
            doc.float("cohort.lexicon_ratio_fp_tn", r);
        }
    }
    run.write("report.txt", &text)?;
    run.write("report.kv", &doc.render())?;
    let _ = writeln!(text, "run={}", run.path.display());
    emit(out, &text)
}

fn fairness(cli: &Cli, a: &FairnessArgs, out: &mut dyn Write) -> Result<()> {
    let mut preds = read_all_predictions(&a.preds)?;
    if let Some(gpath) = &a.groups {
        let groups = read_groups(gpath)?;
        for p in preds.iter_mut() {
            p.group = groups.get(&p.node_id).cloned().filter(|g| !g.is_empty());
        }
    }
    let (scores, labels, groups) = labeled_columns(&preds);
    let report = fairness_report(&scores, &labels, &groups, &a.protected, a.threshold)?;
    let mut config = vec![files_kv(&a.preds), kv("protected", &a.protected), kv("threshold", a.threshold)];
    if let Some(g) = &a.groups {
        config.push(path_kv("groups", g));
    }
    let run = start_run(cli, "fairness", cli.seed.unwrap_or(0), config)?;
    let text = report.to_text();
    run.write("fairness.txt", &text)?;
    run.write("fairness.kv", &report.to_kv().render())?;
    emit(out, &format!("{text}run={}\n", run.path.display()))
}

fn demography(cli: &Cli, a: &DemographyArgs, out: &mut dyn Write) -> Result<()> {
    let rows = read_posteriors(&a.posteriors)?;
    let overrides = match &a.overrides {
        Some(p) => read_overrides(p)?,
        None => Overrides::default(),
    };
    let category = a.category.parse()?;
    let means = average_posteriors(&rows, &[])?;
    let assignment = label_group(&means, category, a.threshold, &overrides)?;
    let mut config = vec![
        path_kv("posteriors", &a.posteriors),
        kv("category", category),
        kv("threshold", a.threshold),
        kv("protected_name", &a.protected_name),
        kv("other_name", &a.other_name),
    ];
    if let Some(p) = &a.overrides {
        config.push(path_kv("overrides", p));
    }
    let run = start_run(cli, "demography", cli.seed.unwrap_or(0), config)?;
    let path = run.file("groups.csv");
    let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    write_groups(file, &assignment, &a.protected_name, &a.other_name)?;
    let model_protected = means.values().filter(|m| m[category.0] > a.threshold).count();
    let count = |p: Provenance| assignment.users.values().filter(|x| x.provenance == p).count();
    let mut s = String::new();
    let _ = writeln!(s, "users={}", assignment.users.len());
    let _ = writeln!(s, "model_protected={model_protected}");
    let _ = writeln!(s, "removed={}", count(Provenance::OverrideRemoved));
    let _ = writeln!(s, "added={}", count(Provenance::OverrideAdded));
    let _ = writeln!(s, "protected={}", assignment.protected_count());
    let _ = writeln!(s, "groups={}", path.display());
    emit(out, &s)
}

fn gradcheck(cli: &Cli, a: &GradcheckArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = ModelConfig::from_name(&a.model)?;
    if cfg.kind != ModelKind::Lr {
        cfg.hidden_dim = a.hidden;
    }
    cfg.fanouts = vec![a.fanout; cfg.fanouts.len()];
    cfg.validate()?;
    let seed = cli.seed.unwrap_or(0);
    let mut config: Kv = cfg.to_kv();
    config.extend([
        kv("points", a.points),
        kv("eps", a.eps),
        kv("input_dim", a.input_dim),
    ]);
    let run = start_run(cli, "gradcheck", seed, config)?;
    let mut worst: f64 = 0.0;
    let mut s = String::new();
    for i in 0..a.points {
        let r = check_model_gradients(&cfg, a.input_dim, RngStream::new(seed, i), a.eps)?;
        let _ = writeln!(s, "point={i} max_rel_error={:e} entries={}", r.max_rel_error, r.entries);
        worst = worst.max(r.max_rel_error);
    }
    let _ = writeln!(s, "model={}", cfg.name());
    let _ = writeln!(s, "max_rel_error={worst:e}");
    run.write("gradcheck.txt", &s)?;
    emit(out, &s)?;
    if worst < GRADCHECK_TOL {
        Ok(())
    } else {
        Err(Error::Numerical(format!(
            "max relative gradient error {worst:e} exceeds {GRADCHECK_TOL:e}"
        )))
    }
}
