//! Prediction files: delimited text with header
//! `node_id,label,group,score` and an optional trailing `fold` column.
//! Labels are `1`, `0` or empty; groups may be empty.

use crate::error::{Error, Result};
use crate::graph::csv_error;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub node_id: u64,
    pub label: Option<bool>,
    pub group: Option<String>,
    pub score: f64,
    pub fold: Option<usize>,
}

/// Scores, labels and groups of the labeled predictions.
pub fn labeled_columns(preds: &[Prediction]) -> (Vec<f64>, Vec<bool>, Vec<Option<String>>) {
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    for p in preds {
        if let Some(y) = p.label {
            scores.push(p.score);
            labels.push(y);
            groups.push(p.group.clone());
        }
    }
    (scores, labels, groups)
}

pub fn write_predictions_to<W: Write>(writer: W, preds: &[Prediction]) -> Result<()> {
    let with_fold = preds.iter().any(|p| p.fold.is_some());
    let mut w = csv::Writer::from_writer(writer);
    let origin = Path::new("<predictions>");
    let mut header = vec!["node_id", "label", "group", "score"];
    if with_fold {
        header.push("fold");
    }
    w.write_record(&header).map_err(|e| csv_error(origin, e))?;
    for p in preds {
        let mut rec = vec![
            p.node_id.to_string(),
            match p.label {
                Some(true) => "1".into(),
                Some(false) => "0".into(),
                None => String::new(),
            },
            p.group.clone().unwrap_or_default(),
            // shortest representation that parses back to the same value
            p.score.to_string(),
        ];
        if with_fold {
            rec.push(p.fold.map(|f| f.to_string()).unwrap_or_default());
        }
        w.write_record(&rec).map_err(|e| csv_error(origin, e))?;
    }
    w.flush().map_err(|e| Error::io(origin, e))
}

pub fn write_predictions(path: impl AsRef<Path>, preds: &[Prediction]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_predictions_to(file, preds).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<Vec<Prediction>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_predictions(file, path)
}

/// Parse a prediction file; the delimiter is a tab when the header contains
/// one, otherwise a comma.
pub fn parse_predictions<R: Read>(mut reader: R, origin: &Path) -> Result<Vec<Prediction>> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::io(origin, e))?;
    let first = text.lines().next().unwrap_or("");
    let delimiter = if first.contains('\t') { b'\t' } else { b',' };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| csv_error(origin, e))?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let missing = |name: &str| Error::Schema(format!("{}: prediction file lacks a '{name}' column", origin.display()));
    let id_col = col("node_id").ok_or_else(|| missing("node_id"))?;
    let label_col = col("label").ok_or_else(|| missing("label"))?;
    let group_col = col("group").ok_or_else(|| missing("group"))?;
    let score_col = col("score").ok_or_else(|| missing("score"))?;
    let fold_col = col("fold");

    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(origin, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let bad = |msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let field = |i: usize| rec.get(i).unwrap_or("");
        let node_id = field(id_col)
            .parse()
            .map_err(|_| bad(format!("invalid node_id '{}'", field(id_col))))?;
        let label = match field(label_col) {
            "" => None,
            "1" | "true" | "hateful" => Some(true),
            "0" | "false" | "normal" => Some(false),
            other => return Err(bad(format!("invalid label '{other}'"))),
        };
        let group = Some(field(group_col).to_string()).filter(|g| !g.is_empty());
        let score: f64 = field(score_col)
            .parse()
            .map_err(|_| bad(format!("invalid score '{}'", field(score_col))))?;
        if !score.is_finite() {
            return Err(bad(format!("non-finite score {score}")));
        }
        let fold = match fold_col.map(field) {
            None | Some("") => None,
            Some(f) => Some(f.parse().map_err(|_| bad(format!("invalid fold '{f}'")))?),
        };
        out.push(Prediction {
            node_id,
            label,
            group,
            score,
            fold,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let preds = vec![
            Prediction {
                node_id: 7,
                label: Some(true),
                group: Some("aa".into()),
                score: 0.1 + 0.2,
                fold: Some(0),
            },
            Prediction {
                node_id: 9,
                label: None,
                group: None,
                score: 1e-300,
                fold: Some(4),
            },
        ];
        let mut buf = Vec::new();
        write_predictions_to(&mut buf, &preds).unwrap();
        let back = parse_predictions(buf.as_slice(), Path::new("p.csv")).unwrap();
        assert_eq!(back, preds);
    }

    #[test]
    fn tab_delimited_and_errors() {
        let text = "node_id\tlabel\tgroup\tscore\n1\t0\t\t0.25\n";
        let p = parse_predictions(text.as_bytes(), Path::new("p.tsv")).unwrap();
        assert_eq!(p[0].score, 0.25);
        assert_eq!(p[0].fold, None);

        let e = parse_predictions("node_id,label,score\n".as_bytes(), Path::new("p")).unwrap_err();
        assert!(matches!(e, Error::Schema(_)));
        let e = parse_predictions("node_id,label,group,score\n1,0,,0.5\n2,0,,abc\n".as_bytes(), Path::new("p"))
            .unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
    }
}
