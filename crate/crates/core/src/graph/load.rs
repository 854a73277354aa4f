use super::{DirectedGraph, NodeId};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

/// Mapping between external (file) ids and dense node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    raw: Vec<u64>,
    index: HashMap<u64, NodeId>,
}

impl IdMap {
    /// Dense ids assigned in ascending raw-id order.
    pub fn from_raw_ids(mut raw: Vec<u64>) -> Self {
        raw.sort_unstable();
        raw.dedup();
        Self::from_ordered(raw).expect("deduplicated ids")
    }

    /// Dense id `i` maps to `raw[i]`; fails on repeated raw ids.
    pub fn from_ordered(raw: Vec<u64>) -> Result<Self> {
        let mut index = HashMap::with_capacity(raw.len());
        for (i, &r) in raw.iter().enumerate() {
            if index.insert(r, i as NodeId).is_some() {
                return Err(Error::data(format!("raw id {r} appears twice in id map")));
            }
        }
        Ok(Self { raw, index })
    }

    /// Identity mapping over `0..n`.
    pub fn identity(n: usize) -> Self {
        Self::from_ordered((0..n as u64).collect()).expect("distinct")
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn dense(&self, raw: u64) -> Option<NodeId> {
        self.index.get(&raw).copied()
    }

    pub fn raw(&self, dense: NodeId) -> u64 {
        self.raw[dense as usize]
    }

    pub fn raw_ids(&self) -> &[u64] {
        &self.raw
    }

    /// Dense id for `raw`, appending a new id when unseen.
    pub fn get_or_insert(&mut self, raw: u64) -> NodeId {
        if let Some(&d) = self.index.get(&raw) {
            return d;
        }
        let d = self.raw.len() as NodeId;
        self.raw.push(raw);
        self.index.insert(raw, d);
        d
    }
}

/// Row accounting produced while cleaning an edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeListReport {
    /// Data rows read, before any cleaning.
    pub raw_rows: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: DirectedGraph,
    pub ids: IdMap,
    pub report: EdgeListReport,
}

/// Load a `src<delim>dst` edge file. Whitespace delimiters match runs of
/// blanks; a first row that does not parse as two integers is a header.
pub fn load_edge_list(path: impl AsRef<Path>, delimiter: char) -> Result<EdgeList> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(file, delimiter, path)
}

/// [`load_edge_list`] over any reader; `origin` names the source in errors.
pub fn parse_edge_list<R: Read>(reader: R, delimiter: char, origin: &Path) -> Result<EdgeList> {
    let reader = BufReader::new(reader);
    let mut rows: Vec<(u64, u64)> = Vec::new();
    let mut first = true;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i as u64 + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = if delimiter.is_whitespace() {
            trimmed.split_whitespace().collect()
        } else {
            trimmed.split(delimiter).map(str::trim).collect()
        };
        let header_allowed = first;
        first = false;
        let parsed = match fields.as_slice() {
            [a, b] => a.parse::<u64>().ok().zip(b.parse::<u64>().ok()),
            _ => None,
        };
        match parsed {
            Some(pair) => rows.push(pair),
            // header row
            None if header_allowed && fields.len() == 2 => {}
            None => {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line: lineno,
                    msg: format!("expected two integer ids separated by {delimiter:?}, got {trimmed:?}"),
                })
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::data(format!("{}: edge list has no rows", origin.display())));
    }
    let ids = IdMap::from_raw_ids(rows.iter().flat_map(|&(a, b)| [a, b]).collect());
    let dense = rows
        .iter()
        .map(|&(a, b)| (ids.dense(a).unwrap(), ids.dense(b).unwrap()));
    let (graph, self_loops, duplicates) = DirectedGraph::from_edges(ids.len(), dense)?;
    Ok(EdgeList {
        graph,
        ids,
        report: EdgeListReport {
            raw_rows: rows.len(),
            self_loops,
            duplicates,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, delim: char) -> Result<EdgeList> {
        parse_edge_list(text.as_bytes(), delim, Path::new("mem.edges"))
    }

    #[test]
    fn self_loop_removed() {
        let el = parse("0,1\n1,2\n2,2\n", ',').unwrap();
        assert_eq!(el.graph.edge_count(), 2);
        assert_eq!(el.report.raw_rows, 3);
        assert_eq!(el.report.self_loops, 1);
    }

    #[test]
    fn duplicates_collapse() {
        let el = parse("0 1\n0 1\n", ' ').unwrap();
        assert_eq!(el.graph.edge_count(), 1);
        assert_eq!(el.report.duplicates, 1);
    }

    #[test]
    fn header_and_sparse_ids() {
        let el = parse("src\tdst\n100\t7\n7\t5000\n", '\t').unwrap();
        assert_eq!(el.ids.raw_ids(), &[7, 100, 5000]);
        let a = el.ids.dense(100).unwrap();
        let b = el.ids.dense(7).unwrap();
        assert!(el.graph.has_edge(a, b));
    }

    #[test]
    fn malformed_row_names_line() {
        match parse("0,1\n1,x\n", ',') {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0,1,2\n", ','), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_file_errors() {
        assert!(matches!(parse("", ','), Err(Error::Data(_))));
        assert!(matches!(parse("a,b\n", ','), Err(Error::Data(_))));
    }

    #[test]
    fn id_map_insert() {
        let mut m = IdMap::from_raw_ids(vec![5, 3]);
        assert_eq!(m.dense(3), Some(0));
        assert_eq!(m.get_or_insert(9), 2);
        assert_eq!(m.get_or_insert(5), 1);
        assert_eq!(m.raw(2), 9);
    }
}
