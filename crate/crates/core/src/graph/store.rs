//! On-disk store: binary CSR, id remap, standardization statistics, and the
//! aligned node table.
//!
//! Layout of `graph.csr` (all little-endian): `node_count: u64`,
//! `edge_count: u64`, `node_count + 1` offsets as `u64`, `edge_count`
//! targets as `u64`.

use super::table::{csv_error, parse_label};
use super::{Csr, DirectedGraph, EdgeList, FeatureKind, IdMap, NodeTable, Standardizer};
use crate::error::{Error, Result};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const GRAPH_FILE: &str = "graph.csr";
pub const IDS_FILE: &str = "ids.tsv";
pub const STATS_FILE: &str = "standardization.tsv";
pub const COLUMNS_FILE: &str = "columns.tsv";
pub const NODES_FILE: &str = "nodes.csv";

/// A graph with a node table whose rows are aligned to dense node ids.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: DirectedGraph,
    pub ids: IdMap,
    pub table: NodeTable,
}

impl Dataset {
    /// Align `table` to the graph's dense ids. Table ids absent from the edge
    /// list become isolated nodes; graph nodes absent from the table get a
    /// zero (mean) feature row and no label.
    pub fn join(edges: EdgeList, table: &NodeTable) -> Result<Self> {
        let EdgeList { graph, mut ids, .. } = edges;
        let mut source: Vec<Option<usize>> = vec![None; ids.len()];
        for (row, &raw) in table.ids().iter().enumerate() {
            let d = ids.get_or_insert(raw) as usize;
            if d >= source.len() {
                source.resize(d + 1, None);
            }
            if source[d].replace(row).is_some() {
                return Err(Error::data(format!("node id {raw} appears twice in node table")));
            }
        }
        let graph = graph.with_isolated_nodes(ids.len() - graph.node_count());
        let order: Vec<(u64, Option<usize>)> = source
            .iter()
            .enumerate()
            .map(|(d, &s)| (ids.raw(d as u32), s))
            .collect();
        let table = table.reorder(&order);
        Ok(Self { graph, ids, table })
    }

    /// Wrap an already-aligned table (row `i` is node `i`).
    pub fn new(graph: DirectedGraph, table: NodeTable) -> Result<Self> {
        if graph.node_count() != table.len() {
            return Err(Error::data(format!(
                "node table has {} rows but graph has {} nodes",
                table.len(),
                graph.node_count()
            )));
        }
        let ids = IdMap::from_ordered(table.ids().to_vec())?;
        Ok(Self { graph, ids, table })
    }
}

fn create(path: &Path) -> Result<BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub fn write_store(dir: impl AsRef<Path>, data: &Dataset) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let path = dir.join(GRAPH_FILE);
    let mut w = create(&path)?;
    let csr = data.graph.adjacency(super::Direction::Out);
    let mut buf = Vec::with_capacity(16 + 8 * (csr.offsets().len() + csr.nnz()));
    buf.extend_from_slice(&(csr.row_count() as u64).to_le_bytes());
    buf.extend_from_slice(&(csr.nnz() as u64).to_le_bytes());
    for &o in csr.offsets() {
        buf.extend_from_slice(&(o as u64).to_le_bytes());
    }
    for &t in csr.targets() {
        buf.extend_from_slice(&(t as u64).to_le_bytes());
    }
    w.write_all(&buf).map_err(|e| Error::io(&path, e))?;
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join(IDS_FILE);
    let mut w = create(&path)?;
    let mut text = String::from("dense\traw\n");
    for (d, raw) in data.ids.raw_ids().iter().enumerate() {
        text.push_str(&format!("{d}\t{raw}\n"));
    }
    w.write_all(text.as_bytes()).map_err(|e| Error::io(&path, e))?;

    let st = data.table.standardizer();
    let path = dir.join(STATS_FILE);
    let mut w = create(&path)?;
    let mut text = String::from("column\tmean\tstd\n");
    for i in 0..st.len() {
        let name = st.names.get(i).map(String::as_str).unwrap_or("");
        text.push_str(&format!("{name}\t{:?}\t{:?}\n", st.mean[i], st.std[i]));
    }
    w.write_all(text.as_bytes()).map_err(|e| Error::io(&path, e))?;

    let path = dir.join(COLUMNS_FILE);
    let mut w = create(&path)?;
    let mut text = String::from("column\tkind\n");
    for (n, k) in data.table.feature_names().iter().zip(data.table.feature_kinds()) {
        text.push_str(&format!("{n}\t{k}\n"));
    }
    w.write_all(text.as_bytes()).map_err(|e| Error::io(&path, e))?;

    let path = dir.join(NODES_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
    let mut header = vec!["node_id".to_string(), "label".into(), "group".into()];
    header.extend(data.table.feature_names().iter().cloned());
    w.write_record(&header).map_err(|e| csv_error(&path, e))?;
    let t = &data.table;
    for i in 0..t.len() {
        let mut rec = vec![
            t.ids()[i].to_string(),
            match t.labels()[i] {
                Some(true) => "1".into(),
                Some(false) => "0".into(),
                None => String::new(),
            },
            t.groups()[i].clone().unwrap_or_default(),
        ];
        rec.extend(t.row(i).iter().map(|v| format!("{v:?}")));
        w.write_record(&rec).map_err(|e| csv_error(&path, e))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(())
}

fn read_tsv(path: &Path, columns: usize) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<String> = line.split('\t').map(String::from).collect();
        if fields.len() != columns {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: i as u64 + 1,
                msg: format!("expected {columns} tab-separated fields"),
            });
        }
        rows.push(fields);
    }
    Ok(rows)
}

fn parse_num<T: std::str::FromStr>(path: &Path, line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line: line as u64 + 2,
        msg: format!("invalid number {s:?}"),
    })
}

pub fn read_store(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();

    let path = dir.join(GRAPH_FILE);
    let mut bytes = Vec::new();
    std::fs::File::open(&path)
        .map(BufReader::new)
        .and_then(|mut r| r.read_to_end(&mut bytes))
        .map_err(|e| Error::io(&path, e))?;
    let corrupt = || Error::data(format!("{}: truncated or corrupt CSR file", path.display()));
    let word = |i: usize| -> Result<u64> {
        bytes
            .get(i * 8..i * 8 + 8)
            .map(|b| u64::from_le_bytes(b.try_into().unwrap()))
            .ok_or_else(corrupt)
    };
    let n = word(0)? as usize;
    let m = word(1)? as usize;
    if bytes.len() != 8 * (2 + n + 1 + m) {
        return Err(corrupt());
    }
    let offsets = (0..=n).map(|i| word(2 + i).map(|v| v as usize)).collect::<Result<Vec<_>>>()?;
    let targets = (0..m)
        .map(|i| word(3 + n + i).and_then(|v| u32::try_from(v).map_err(|_| corrupt())))
        .collect::<Result<Vec<_>>>()?;
    let csr = Csr::from_parts(offsets, targets).ok_or_else(corrupt)?;
    let graph = DirectedGraph::from_out_csr(csr)?;

    let path = dir.join(IDS_FILE);
    let rows = read_tsv(&path, 2)?;
    let mut raw = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let d: usize = parse_num(&path, i, &r[0])?;
        if d != i {
            return Err(Error::data(format!("{}: dense ids must be listed in order", path.display())));
        }
        raw.push(parse_num::<u64>(&path, i, &r[1])?);
    }
    let ids = IdMap::from_ordered(raw)?;

    let path = dir.join(STATS_FILE);
    let mut st = Standardizer::default();
    for (i, r) in read_tsv(&path, 3)?.into_iter().enumerate() {
        st.mean.push(parse_num(&path, i, &r[1])?);
        st.std.push(parse_num(&path, i, &r[2])?);
        st.names.push(r[0].clone());
    }

    let path = dir.join(COLUMNS_FILE);
    let mut names = Vec::new();
    let mut kinds = Vec::new();
    for r in read_tsv(&path, 2)? {
        kinds.push(r[1].parse::<FeatureKind>()?);
        names.push(r[0].clone());
    }

    let path = dir.join(NODES_FILE);
    let mut rdr = csv::Reader::from_path(&path).map_err(|e| csv_error(&path, e))?;
    let mut node_ids = Vec::new();
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(&path, e))?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != 3 + names.len() {
            return Err(Error::Parse {
                path: path.clone(),
                line: line as u64,
                msg: format!("expected {} fields", 3 + names.len()),
            });
        }
        node_ids.push(parse_num::<u64>(&path, line.saturating_sub(2), &rec[0])?);
        labels.push(parse_label(&rec[1]));
        groups.push(Some(&rec[2]).filter(|g| !g.is_empty()).map(String::from));
        for cell in rec.iter().skip(3) {
            features.push(parse_num::<f64>(&path, line.saturating_sub(2), cell)?);
        }
    }
    let mut table = NodeTable::new(node_ids, features, names, kinds, labels, groups)?;
    table.set_standardizer(st);
    if table.ids() != ids.raw_ids() {
        return Err(Error::data(format!(
            "{}: node rows do not follow the id map order",
            dir.display()
        )));
    }
    if graph.node_count() != table.len() {
        return Err(Error::data(format!(
            "{}: graph has {} nodes but table has {} rows",
            dir.display(),
            graph.node_count(),
            table.len()
        )));
    }
    Ok(Dataset { graph, ids, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_edge_list, parse_node_table, NodeSchema};

    fn dataset() -> Dataset {
        let edges = parse_edge_list("10 20\n20 30\n30 30\n".as_bytes(), ' ', Path::new("e")).unwrap();
        let schema = NodeSchema::new("id")
            .label("y")
            .group("g")
            .feature("x*", FeatureKind::Text);
        let table = parse_node_table(
            "id,y,g,x0,x1\n20,hateful,AA,1.5,2\n99,normal,,3,4\n10,normal,other,0.25,8\n".as_bytes(),
            &schema,
            Path::new("n"),
        )
        .unwrap();
        Dataset::join(edges, &table).unwrap()
    }

    #[test]
    fn join_aligns_rows_and_adds_isolated_nodes() {
        let d = dataset();
        assert_eq!(d.ids.raw_ids(), &[10, 20, 30, 99]);
        assert_eq!(d.graph.node_count(), 4);
        assert_eq!(d.graph.edge_count(), 2);
        assert_eq!(d.table.ids(), &[10, 20, 30, 99]);
        assert_eq!(d.table.labels(), &[Some(false), Some(true), None, Some(false)]);
        assert_eq!(d.table.row(2), &[0.0, 0.0]);
    }

    #[test]
    fn store_round_trip() {
        let d = dataset();
        let dir = tempfile::tempdir().unwrap();
        write_store(dir.path(), &d).unwrap();
        let back = read_store(dir.path()).unwrap();
        assert_eq!(back.graph, d.graph);
        assert_eq!(back.ids, d.ids);
        assert_eq!(back.table, d.table);

        let bytes = std::fs::read(dir.path().join(GRAPH_FILE)).unwrap();
        assert_eq!(u64::from_le_bytes(bytes[0..8].try_into().unwrap()), 4);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 2);
        assert_eq!(bytes.len(), 8 * (2 + 5 + 2));
    }

    #[test]
    fn corrupt_csr_rejected() {
        let d = dataset();
        let dir = tempfile::tempdir().unwrap();
        write_store(dir.path(), &d).unwrap();
        let p = dir.path().join(GRAPH_FILE);
        let mut bytes = std::fs::read(&p).unwrap();
        bytes.truncate(bytes.len() - 3);
        std::fs::write(&p, bytes).unwrap();
        assert!(read_store(dir.path()).is_err());
    }
}
