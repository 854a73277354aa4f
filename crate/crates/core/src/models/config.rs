use crate::error::{Error, Result};
use crate::graph::{Direction, FeatureSet};
use crate::samplers::DEFAULT_FANOUTS;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Lr,
    Mlp,
    Sage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Aggregator {
    #[default]
    Mean,
    MaxPool,
    Attention,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Lr => "lr",
            ModelKind::Mlp => "mlp",
            ModelKind::Sage => "sage",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lr" => Ok(ModelKind::Lr),
            "mlp" | "ann" => Ok(ModelKind::Mlp),
            "sage" | "graphsage" => Ok(ModelKind::Sage),
            other => Err(Error::Usage(format!("unknown model kind '{other}'"))),
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregator::Mean => "mean",
            Aggregator::MaxPool => "maxpool",
            Aggregator::Attention => "attention",
        })
    }
}

impl FromStr for Aggregator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mean" => Ok(Aggregator::Mean),
            "maxpool" | "max" | "pool" => Ok(Aggregator::MaxPool),
            "attention" | "att" => Ok(Aggregator::Attention),
            other => Err(Error::Usage(format!("unknown aggregator '{other}'"))),
        }
    }
}

/// Architecture of one classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub kind: ModelKind,
    /// Only meaningful for [`ModelKind::Sage`].
    pub aggregator: Aggregator,
    pub feature_set: FeatureSet,
    pub hidden_dim: usize,
    /// Hidden layers for the MLP, message-passing layers for GraphSAGE, 0 for LR.
    pub layers: usize,
    pub direction: Direction,
    pub fanouts: Vec<usize>,
    pub dropout: f64,
}

impl ModelConfig {
    pub fn lr() -> Self {
        Self {
            kind: ModelKind::Lr,
            aggregator: Aggregator::Mean,
            feature_set: FeatureSet::TextUser,
            hidden_dim: 1,
            layers: 0,
            direction: Direction::Both,
            fanouts: Vec::new(),
            dropout: 0.0,
        }
    }

    /// Two hidden layers of 64 relu units with dropout 0.5.
    pub fn mlp() -> Self {
        Self {
            kind: ModelKind::Mlp,
            hidden_dim: 64,
            layers: 2,
            dropout: 0.5,
            ..Self::lr()
        }
    }

    /// Two layers of width 128 with fanouts 25 then 10.
    pub fn sage(aggregator: Aggregator) -> Self {
        Self {
            kind: ModelKind::Sage,
            aggregator,
            hidden_dim: 128,
            layers: 2,
            fanouts: DEFAULT_FANOUTS.to_vec(),
            ..Self::lr()
        }
    }

    /// Short name such as `lr`, `mlp` or `sage-attention`.
    pub fn name(&self) -> String {
        match self.kind {
            ModelKind::Sage => format!("sage-{}", self.aggregator),
            k => k.to_string(),
        }
    }

    /// Defaults for a short name (`lr`, `mlp`, `sage-mean`, `sage-maxpool`, `sage-attention`).
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().split_once('-') {
            Some(("sage" | "graphsage", agg)) => Ok(Self::sage(agg.parse()?)),
            None => match name.parse::<ModelKind>()? {
                ModelKind::Lr => Ok(Self::lr()),
                ModelKind::Mlp => Ok(Self::mlp()),
                ModelKind::Sage => Ok(Self::sage(Aggregator::Mean)),
            },
            _ => Err(Error::Usage(format!("unknown model '{name}'"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Usage(format!("invalid {} config: {m}", self.name())));
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout {} outside [0, 1)", self.dropout));
        }
        match self.kind {
            ModelKind::Lr if self.layers != 0 => bad("lr has no hidden layers".into()),
            ModelKind::Mlp | ModelKind::Sage if self.layers == 0 => bad("at least one layer required".into()),
            ModelKind::Mlp | ModelKind::Sage if self.hidden_dim == 0 => bad("hidden_dim must be positive".into()),
            ModelKind::Sage if self.fanouts.len() != self.layers => bad(format!(
                "{} fanouts for {} layers",
                self.fanouts.len(),
                self.layers
            )),
            ModelKind::Sage if self.fanouts.contains(&0) => bad("fanouts must be positive".into()),
            _ => Ok(()),
        }
    }

    /// `key=value` pairs describing this config.
    pub fn to_kv(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("model".to_string(), self.kind.to_string()),
            ("aggregator".into(), self.aggregator.to_string()),
            ("feature_set".into(), self.feature_set.to_string()),
            ("hidden_dim".into(), self.hidden_dim.to_string()),
            ("layers".into(), self.layers.to_string()),
            ("direction".into(), self.direction.to_string()),
            ("dropout".into(), format!("{:?}", self.dropout)),
        ];
        let fanouts: Vec<String> = self.fanouts.iter().map(usize::to_string).collect();
        kv.push(("fanouts".into(), fanouts.join(",")));
        kv
    }

    /// Build from `key=value` pairs; unknown keys are left in `map` for the caller.
    /// Missing keys take the defaults of the named model.
    pub fn from_kv(map: &mut BTreeMap<String, String>) -> Result<Self> {
        let kind: ModelKind = map.remove("model").as_deref().unwrap_or("sage").parse()?;
        let aggregator: Aggregator = map
            .remove("aggregator")
            .as_deref()
            .unwrap_or("mean")
            .parse()?;
        let mut cfg = match kind {
            ModelKind::Lr => Self::lr(),
            ModelKind::Mlp => Self::mlp(),
            ModelKind::Sage => Self::sage(aggregator),
        };
        cfg.aggregator = aggregator;
        if let Some(v) = map.remove("feature_set") {
            cfg.feature_set = v.parse()?;
        }
        if let Some(v) = map.remove("hidden_dim") {
            cfg.hidden_dim = parse_usize("hidden_dim", &v)?;
        }
        if let Some(v) = map.remove("layers") {
            cfg.layers = parse_usize("layers", &v)?;
        }
        if let Some(v) = map.remove("direction") {
            cfg.direction = v.parse()?;
        }
        if let Some(v) = map.remove("dropout") {
            cfg.dropout = v
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("invalid dropout '{v}'")))?;
        }
        if let Some(v) = map.remove("fanouts") {
            cfg.fanouts = v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_usize("fanouts", s))
                .collect::<Result<_>>()?;
        }
        if kind == ModelKind::Sage && cfg.fanouts.len() != cfg.layers && cfg.fanouts == DEFAULT_FANOUTS {
            cfg.fanouts = vec![DEFAULT_FANOUTS[0]; cfg.layers];
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub(crate) fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| Error::Usage(format!("{key}: expected a non-negative integer, got '{v}'")))
}

/// Parse `key=value` lines (blank lines and `#` comments skipped).
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("line {}: expected key=value, got '{line}'", i + 1)))?;
        if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Usage(format!("line {}: duplicate key '{}'", i + 1, k.trim())));
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in ["lr", "mlp", "sage-mean", "sage-maxpool", "sage-attention"] {
            assert_eq!(ModelConfig::from_name(name).unwrap().name(), name);
        }
        assert!(ModelConfig::from_name("svm").is_err());
        assert!(ModelConfig::from_name("sage-sum").is_err());
    }

    #[test]
    fn kv_round_trip() {
        let mut cfg = ModelConfig::sage(Aggregator::Attention);
        cfg.fanouts = vec![5, 3];
        cfg.direction = Direction::In;
        cfg.dropout = 0.25;
        let mut map: BTreeMap<_, _> = cfg.to_kv().into_iter().collect();
        map.insert("epochs".into(), "3".into());
        let back = ModelConfig::from_kv(&mut map).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(map.len(), 1);
    }

    #[test]
    fn validation() {
        let mut c = ModelConfig::sage(Aggregator::Mean);
        c.fanouts = vec![3];
        assert!(c.validate().is_err());
        let mut c = ModelConfig::lr();
        c.layers = 1;
        assert!(c.validate().is_err());
        let mut c = ModelConfig::mlp();
        c.dropout = 1.0;
        assert!(c.validate().is_err());
        assert!(ModelConfig::mlp().validate().is_ok());
    }

    #[test]
    fn kv_parse() {
        let m = parse_kv("# c\nmodel = lr\n\nlr=0.1\n").unwrap();
        assert_eq!(m["model"], "lr");
        assert!(parse_kv("a=1\na=2\n").is_err());
        assert!(parse_kv("nonsense\n").is_err());
    }
}
