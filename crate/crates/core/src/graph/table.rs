use crate::error::{Error, Result};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

/// Provenance class of a feature column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Text,
    User,
    Network,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Text => "text",
            FeatureKind::User => "user",
            FeatureKind::Network => "network",
        })
    }
}

impl FromStr for FeatureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(FeatureKind::Text),
            "user" => Ok(FeatureKind::User),
            "network" => Ok(FeatureKind::Network),
            other => Err(Error::Schema(format!("unknown feature kind '{other}'"))),
        }
    }
}

/// Which feature columns a model consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FeatureSet {
    #[default]
    TextUser,
    TextUserNetwork,
}

impl FeatureSet {
    pub fn includes(&self, kind: FeatureKind) -> bool {
        match self {
            FeatureSet::TextUser => kind != FeatureKind::Network,
            FeatureSet::TextUserNetwork => true,
        }
    }
}

impl FromStr for FeatureSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "text+user" => Ok(FeatureSet::TextUser),
            "text+user+network" => Ok(FeatureSet::TextUserNetwork),
            other => Err(Error::Usage(format!(
                "unknown feature set '{other}' (expected text+user or text+user+network)"
            ))),
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureSet::TextUser => "text+user",
            FeatureSet::TextUserNetwork => "text+user+network",
        })
    }
}

/// A column name or `*` glob tagged with its feature kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSelector {
    pub pattern: String,
    pub kind: FeatureKind,
}

impl ColumnSelector {
    pub fn new(pattern: impl Into<String>, kind: FeatureKind) -> Self {
        Self {
            pattern: pattern.into(),
            kind,
        }
    }

    pub fn matches(&self, name: &str) -> bool {
        glob_match(&self.pattern, name)
    }
}

fn glob_match(pattern: &str, name: &str) -> bool {
    let parts: Vec<&str> = pattern.split('*').collect();
    if parts.len() == 1 {
        return pattern == name;
    }
    let (first, last) = (parts[0], parts[parts.len() - 1]);
    if !name.starts_with(first) || name.len() < first.len() + last.len() || !name.ends_with(last) {
        return false;
    }
    let mut rest = &name[first.len()..name.len() - last.len()];
    for mid in &parts[1..parts.len() - 1] {
        match rest.find(mid) {
            Some(pos) => rest = &rest[pos + mid.len()..],
            None => return false,
        }
    }
    true
}

/// Column mapping for a node table file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSchema {
    pub id: String,
    pub label: Option<String>,
    pub group: Option<String>,
    pub features: Vec<ColumnSelector>,
    pub delimiter: u8,
}

impl NodeSchema {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            label: None,
            group: None,
            features: Vec::new(),
            delimiter: b',',
        }
    }

    pub fn label(mut self, column: impl Into<String>) -> Self {
        self.label = Some(column.into());
        self
    }

    pub fn group(mut self, column: impl Into<String>) -> Self {
        self.group = Some(column.into());
        self
    }

    pub fn feature(mut self, pattern: impl Into<String>, kind: FeatureKind) -> Self {
        self.features.push(ColumnSelector::new(pattern, kind));
        self
    }

    /// Parse `key=value` lines: `id`, `label`, `group`, `delimiter`, and
    /// comma-separated selector lists under `text`, `user`, `network`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut schema = NodeSchema::new("");
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Schema(format!("line {}: expected key=value", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "id" => schema.id = value.to_string(),
                "label" => schema.label = Some(value.to_string()),
                "group" => schema.group = Some(value.to_string()),
                "delimiter" => schema.delimiter = parse_delimiter(value)?,
                "text" | "user" | "network" => {
                    let kind: FeatureKind = key.parse()?;
                    for pat in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                        schema.features.push(ColumnSelector::new(pat, kind));
                    }
                }
                other => return Err(Error::Schema(format!("line {}: unknown key '{other}'", i + 1))),
            }
        }
        if schema.id.is_empty() {
            return Err(Error::Schema("schema does not name an id column".into()));
        }
        Ok(schema)
    }
}

pub(crate) fn parse_delimiter(value: &str) -> Result<u8> {
    match value {
        "tab" | "\\t" => Ok(b'\t'),
        "space" => Ok(b' '),
        "comma" => Ok(b','),
        v if v.len() == 1 => Ok(v.as_bytes()[0]),
        v => Err(Error::Usage(format!("unsupported delimiter '{v}'"))),
    }
}

/// Per-column affine standardization `(x - mean) / std`; constant columns map to 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Standardizer {
    pub names: Vec<String>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Fit population mean and standard deviation of the selected `columns`
    /// over `rows` of a row-major matrix with `dim` columns.
    pub fn fit(matrix: &[f64], dim: usize, columns: &[usize], rows: &[usize]) -> Self {
        let n = rows.len().max(1) as f64;
        let mut mean = vec![0.0; columns.len()];
        for &r in rows {
            let row = &matrix[r * dim..(r + 1) * dim];
            for (m, &c) in mean.iter_mut().zip(columns) {
                *m += row[c];
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; columns.len()];
        for &r in rows {
            let row = &matrix[r * dim..(r + 1) * dim];
            for ((v, &c), m) in var.iter_mut().zip(columns).zip(&mean) {
                let d = row[c] - m;
                *v += d * d;
            }
        }
        let std = var.iter().map(|v| (v / n).sqrt()).collect();
        Self {
            names: Vec::new(),
            mean,
            std,
        }
    }

    pub fn identity(names: Vec<String>) -> Self {
        let n = names.len();
        Self {
            names,
            mean: vec![0.0; n],
            std: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize, x: f64) -> f64 {
        let s = self.std[i];
        if s > 0.0 && s.is_finite() {
            (x - self.mean[i]) / s
        } else {
            0.0
        }
    }

    /// Apply to the selected `columns` of every row in place.
    pub fn apply_matrix(&self, matrix: &mut [f64], dim: usize, columns: &[usize]) {
        for row in matrix.chunks_mut(dim) {
            for (i, &c) in columns.iter().enumerate() {
                row[c] = self.apply(i, row[c]);
            }
        }
    }

    pub(crate) fn extend(&mut self, other: Standardizer) {
        self.names.extend(other.names);
        self.mean.extend(other.mean);
        self.std.extend(other.std);
    }
}

/// Per-node feature matrix with optional labels and group tags.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTable {
    ids: Vec<u64>,
    features: Vec<f64>,
    dim: usize,
    names: Vec<String>,
    kinds: Vec<FeatureKind>,
    labels: Vec<Option<bool>>,
    groups: Vec<Option<String>>,
    standardizer: Standardizer,
}

impl NodeTable {
    /// Assemble a table from raw parts. Features are taken as-is; call
    /// [`NodeTable::standardize`] to normalize them.
    pub fn new(
        ids: Vec<u64>,
        features: Vec<f64>,
        names: Vec<String>,
        kinds: Vec<FeatureKind>,
        labels: Vec<Option<bool>>,
        groups: Vec<Option<String>>,
    ) -> Result<Self> {
        let n = ids.len();
        let dim = names.len();
        if kinds.len() != dim {
            return Err(Error::Schema("one feature kind per feature name required".into()));
        }
        if features.len() != n * dim || labels.len() != n || groups.len() != n {
            return Err(Error::Schema(format!(
                "inconsistent table parts: {n} ids, {} feature values for {dim} columns, {} labels, {} groups",
                features.len(),
                labels.len(),
                groups.len()
            )));
        }
        if let Some(pos) = features.iter().position(|x| !x.is_finite()) {
            return Err(Error::data(format!(
                "non-finite feature at row {}, column '{}'",
                pos / dim.max(1),
                names[pos % dim.max(1)]
            )));
        }
        let standardizer = Standardizer::identity(names.clone());
        Ok(Self {
            ids,
            features,
            dim,
            names,
            kinds,
            labels,
            groups,
            standardizer,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn feature_dim(&self) -> usize {
        self.dim
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn feature_kinds(&self) -> &[FeatureKind] {
        &self.kinds
    }

    pub fn labels(&self) -> &[Option<bool>] {
        &self.labels
    }

    pub fn groups(&self) -> &[Option<String>] {
        &self.groups
    }

    pub fn standardizer(&self) -> &Standardizer {
        &self.standardizer
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Column `c` mapped back to its original (unstandardized) scale.
    pub fn raw_column(&self, c: usize) -> Vec<f64> {
        let st = &self.standardizer;
        (0..self.len())
            .map(|i| {
                let x = self.row(i)[c];
                match (st.mean.get(c), st.std.get(c)) {
                    (Some(&m), Some(&s)) if s > 0.0 && s.is_finite() => x * s + m,
                    (Some(&m), Some(_)) => m,
                    _ => x,
                }
            })
            .collect()
    }

    /// Column indices belonging to a feature set.
    pub fn columns_for(&self, set: FeatureSet) -> Vec<usize> {
        (0..self.dim).filter(|&c| set.includes(self.kinds[c])).collect()
    }

    /// Rows carrying a label.
    pub fn labeled_rows(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i].is_some()).collect()
    }

    /// `(hateful, normal)` counts over labeled rows.
    pub fn label_counts(&self) -> (usize, usize) {
        self.labels.iter().fold((0, 0), |(p, n), l| match l {
            Some(true) => (p + 1, n),
            Some(false) => (p, n + 1),
            None => (p, n),
        })
    }

    /// Rows used for standardization statistics: labeled rows, or every row
    /// when nothing is labeled.
    fn stat_rows(&self) -> Vec<usize> {
        let labeled = self.labeled_rows();
        if labeled.is_empty() {
            (0..self.len()).collect()
        } else {
            labeled
        }
    }

    /// Standardize every column over `rows` (labeled rows when `None`) and
    /// record the statistics.
    pub fn standardize(&mut self, rows: Option<&[usize]>) {
        let rows = rows.map(<[usize]>::to_vec).unwrap_or_else(|| self.stat_rows());
        let columns: Vec<usize> = (0..self.dim).collect();
        let mut st = Standardizer::fit(&self.features, self.dim, &columns, &rows);
        st.apply_matrix(&mut self.features, self.dim, &columns);
        st.names = self.names.clone();
        self.standardizer = st;
    }

    /// Append columns (given column-major), standardized over the same row set
    /// as [`NodeTable::standardize`] uses by default.
    pub fn append_columns(
        &mut self,
        names: &[String],
        kind: FeatureKind,
        columns: &[Vec<f64>],
    ) -> Result<()> {
        if names.len() != columns.len() || columns.iter().any(|c| c.len() != self.len()) {
            return Err(Error::Schema("appended columns must match table length".into()));
        }
        if columns.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::data("appended column contains non-finite values"));
        }
        let k = columns.len();
        let mut block = vec![0.0; self.len() * k];
        for (j, col) in columns.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                block[i * k + j] = x;
            }
        }
        let all: Vec<usize> = (0..k).collect();
        let mut st = Standardizer::fit(&block, k, &all, &self.stat_rows());
        st.apply_matrix(&mut block, k, &all);
        st.names = names.to_vec();

        let new_dim = self.dim + k;
        let mut merged = Vec::with_capacity(self.len() * new_dim);
        for i in 0..self.len() {
            merged.extend_from_slice(self.row(i));
            merged.extend_from_slice(&block[i * k..(i + 1) * k]);
        }
        self.features = merged;
        self.dim = new_dim;
        self.names.extend_from_slice(names);
        self.kinds.extend(std::iter::repeat(kind).take(k));
        self.standardizer.extend(st);
        Ok(())
    }

    pub(crate) fn set_standardizer(&mut self, st: Standardizer) {
        self.standardizer = st;
    }

    /// Reorder rows: `order[i]` is the source row for new row `i`, `None`
    /// producing an all-zero unlabeled row with the given id.
    pub(crate) fn reorder(&self, order: &[(u64, Option<usize>)]) -> NodeTable {
        let mut features = Vec::with_capacity(order.len() * self.dim);
        let mut labels = Vec::with_capacity(order.len());
        let mut groups = Vec::with_capacity(order.len());
        for &(_, src) in order {
            match src {
                Some(r) => {
                    features.extend_from_slice(self.row(r));
                    labels.push(self.labels[r]);
                    groups.push(self.groups[r].clone());
                }
                None => {
                    features.extend(std::iter::repeat(0.0).take(self.dim));
                    labels.push(None);
                    groups.push(None);
                }
            }
        }
        NodeTable {
            ids: order.iter().map(|&(id, _)| id).collect(),
            features,
            dim: self.dim,
            names: self.names.clone(),
            kinds: self.kinds.clone(),
            labels,
            groups,
            standardizer: self.standardizer.clone(),
        }
    }

    /// Append one row (raw values are standardized with the stored statistics).
    pub fn push_row(
        &mut self,
        id: u64,
        raw: &[f64],
        label: Option<bool>,
        group: Option<String>,
    ) -> Result<()> {
        if raw.len() != self.dim {
            return Err(Error::shape("push_row", format!("{} values for {} columns", raw.len(), self.dim)));
        }
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::data("non-finite feature in appended row"));
        }
        self.ids.push(id);
        self.features
            .extend(raw.iter().enumerate().map(|(i, &x)| self.standardizer.apply(i, x)));
        self.labels.push(label);
        self.groups.push(group);
        Ok(())
    }
}

/// Map a label cell to `Some(true)` (hateful), `Some(false)` (normal) or unlabeled.
pub(crate) fn parse_label(cell: &str) -> Option<bool> {
    match cell.trim().to_ascii_lowercase().as_str() {
        "hateful" | "hate" | "1" | "true" => Some(true),
        "normal" | "0" | "false" => Some(false),
        _ => None,
    }
}

/// Load a delimited node table with a header row and standardize its
/// features over the labeled rows.
pub fn load_node_table(path: impl AsRef<Path>, schema: &NodeSchema) -> Result<NodeTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_node_table(file, schema, path)
}

/// [`load_node_table`] over any reader; `origin` names the source in errors.
pub fn parse_node_table<R: Read>(reader: R, schema: &NodeSchema, origin: &Path) -> Result<NodeTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(true)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| csv_error(origin, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect::<Vec<_>>();
    let find = |name: &str| -> Result<usize> {
        header.iter().position(|h| h == name).ok_or_else(|| {
            Error::Schema(format!("{}: missing declared column '{name}'", origin.display()))
        })
    };
    let id_col = find(&schema.id)?;
    let label_col = schema.label.as_deref().map(find).transpose()?;
    let group_col = schema.group.as_deref().map(find).transpose()?;

    let reserved = [Some(id_col), label_col, group_col];
    let mut feature_cols = Vec::new();
    let mut kinds = Vec::new();
    for (c, name) in header.iter().enumerate() {
        if reserved.contains(&Some(c)) {
            continue;
        }
        if let Some(sel) = schema.features.iter().find(|s| s.matches(name)) {
            feature_cols.push(c);
            kinds.push(sel.kind);
        }
    }
    for sel in &schema.features {
        if !header.iter().any(|h| sel.matches(h)) {
            return Err(Error::Schema(format!(
                "{}: missing declared column '{}'",
                origin.display(),
                sel.pattern
            )));
        }
    }
    let names: Vec<String> = feature_cols.iter().map(|&c| header[c].clone()).collect();

    let mut ids = Vec::new();
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(origin, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let cell = |c: usize| rec.get(c).unwrap_or("").trim();
        let parse_err = |col: &str, msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg: format!("column '{col}': {msg}"),
        };
        let id = cell(id_col)
            .parse::<f64>()
            .ok()
            .filter(|v| v.fract() == 0.0 && *v >= 0.0)
            .map(|v| v as u64)
            .ok_or_else(|| parse_err(&schema.id, format!("invalid node id {:?}", cell(id_col))))?;
        ids.push(id);
        for &c in &feature_cols {
            let v: f64 = cell(c)
                .parse()
                .map_err(|_| parse_err(&header[c], format!("non-numeric value {:?}", cell(c))))?;
            if !v.is_finite() {
                return Err(parse_err(&header[c], format!("non-finite value {:?}", cell(c))));
            }
            features.push(v);
        }
        labels.push(label_col.and_then(|c| parse_label(cell(c))));
        groups.push(group_col.map(|c| cell(c)).filter(|g| !g.is_empty()).map(String::from));
    }
    if ids.is_empty() {
        return Err(Error::data(format!("{}: node table has no rows", origin.display())));
    }
    let mut table = NodeTable::new(ids, features, names, kinds, labels, groups)?;
    table.standardize(None);
    Ok(table)
}

pub(crate) fn csv_error(origin: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> NodeSchema {
        NodeSchema::new("user_id")
            .label("hate")
            .group("group")
            .feature("glove_*", FeatureKind::Text)
            .feature("followers", FeatureKind::User)
    }

    fn parse(text: &str, schema: &NodeSchema) -> Result<NodeTable> {
        parse_node_table(text.as_bytes(), schema, Path::new("nodes.csv"))
    }

    #[test]
    fn two_point_standardization() {
        let s = NodeSchema::new("id").feature("x", FeatureKind::User);
        let t = parse("id,x\n0,1\n1,3\n", &s).unwrap();
        assert_eq!(t.features(), &[-1.0, 1.0]);
        assert_eq!(t.standardizer().mean, vec![2.0]);
        assert_eq!(t.standardizer().std, vec![1.0]);
    }

    #[test]
    fn labels_and_groups() {
        let text = "user_id,hate,group,glove_0,glove_1,followers\n\
                    1,hateful,AA,0.1,0.2,10\n\
                    2,normal,,0.3,0.1,20\n\
                    3,other,other,0.5,0.5,30\n";
        let t = parse(text, &schema()).unwrap();
        assert_eq!(t.labels(), &[Some(true), Some(false), None]);
        assert_eq!(t.groups()[0].as_deref(), Some("AA"));
        assert_eq!(t.groups()[1], None);
        assert_eq!(t.label_counts(), (1, 1));
        assert_eq!(t.feature_names(), &["glove_0", "glove_1", "followers"]);
        assert_eq!(t.columns_for(FeatureSet::TextUser), vec![0, 1, 2]);
        // statistics over the two labeled rows only
        assert!((t.row(0)[2] + 1.0).abs() < 1e-12);
        assert!((t.row(2)[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn missing_id_column_is_schema_error() {
        let err = parse("uid,x\n1,2\n", &NodeSchema::new("id")).unwrap_err();
        assert!(matches!(err, Error::Schema(_)), "{err}");
        let err = parse("id,y\n1,2\n", &NodeSchema::new("id").feature("x", FeatureKind::User))
            .unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn non_numeric_cell_reports_position() {
        let s = NodeSchema::new("id").feature("x", FeatureKind::User);
        match parse("id,x\n1,2\n2,abc\n", &s) {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("'x'"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_column_maps_to_zero() {
        let s = NodeSchema::new("id").feature("x", FeatureKind::User);
        let t = parse("id,x\n1,5\n2,5\n3,5\n", &s).unwrap();
        assert!(t.features().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn schema_file_parse() {
        let s = NodeSchema::parse(
            "# hateful users\nid=user_id\nlabel=hate\ntext=glove_*, sentiment\nnetwork=betweenness\ndelimiter=tab\n",
        )
        .unwrap();
        assert_eq!(s.id, "user_id");
        assert_eq!(s.delimiter, b'\t');
        assert_eq!(s.features.len(), 3);
        assert_eq!(s.features[2].kind, FeatureKind::Network);
        assert!(NodeSchema::parse("label=x\n").is_err());
        assert!(NodeSchema::parse("id=x\ncolour=red\n").is_err());
    }

    #[test]
    fn glob() {
        assert!(glob_match("glove_*", "glove_12"));
        assert!(glob_match("*_mean", "followers_mean"));
        assert!(glob_match("c_*_x", "c_abc_x"));
        assert!(!glob_match("glove_*", "c_glove_1"));
        assert!(glob_match("exact", "exact"));
    }

    #[test]
    fn appended_columns_standardized() {
        let s = NodeSchema::new("id").label("y").feature("x", FeatureKind::User);
        let mut t = parse("id,y,x\n1,1,1\n2,0,2\n3,,9\n", &s).unwrap();
        t.append_columns(&["deg".into()], FeatureKind::Network, &[vec![2.0, 4.0, 100.0]])
            .unwrap();
        assert_eq!(t.feature_dim(), 2);
        assert_eq!(t.row(0)[1], -1.0);
        assert_eq!(t.row(1)[1], 1.0);
        assert_eq!(t.columns_for(FeatureSet::TextUser), vec![0]);
        assert_eq!(t.columns_for(FeatureSet::TextUserNetwork), vec![0, 1]);
    }
}
