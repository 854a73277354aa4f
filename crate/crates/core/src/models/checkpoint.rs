//! Checkpoint directory: `manifest.txt` (model config and metadata as
//! `key=value` lines) plus one `<name>.bin` per parameter holding
//! `name_len: u64`, the name bytes, `rank: u64`, `rank` dims as `u64`, then
//! the values as little-endian `f64`.

use super::config::{parse_kv, parse_usize};
use super::{Model, ModelConfig, ModelParams};
use crate::error::{Error, Result};
use crate::ndiff::{ParamMap, Tensor};
use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

pub const MANIFEST_FILE: &str = "manifest.txt";

/// Write `model` into `dir` (created if needed). `extra` lines are appended
/// to the manifest verbatim as `key=value`.
pub fn save_checkpoint(dir: impl AsRef<Path>, model: &Model, extra: &[(String, String)]) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut manifest = String::new();
    let mut kv = model.config.to_kv();
    kv.push(("input_dim".into(), model.params.input_dim.to_string()));
    kv.push(("init".into(), model.params.init.clone()));
    let names: Vec<&str> = model.params.tensors.keys().map(String::as_str).collect();
    kv.push(("params".into(), names.join(",")));
    kv.extend(extra.iter().cloned());
    for (k, v) in kv {
        manifest.push_str(&format!("{k}={v}\n"));
    }
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, manifest).map_err(|e| Error::io(&path, e))?;
    for (name, t) in &model.params.tensors {
        let path = dir.join(format!("{name}.bin"));
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = BufWriter::new(file);
        let mut buf = Vec::with_capacity(16 + name.len() + 8 * (t.len() + 2));
        buf.extend((name.len() as u64).to_le_bytes());
        buf.extend(name.as_bytes());
        buf.extend((t.shape().len() as u64).to_le_bytes());
        for &d in t.shape() {
            buf.extend((d as u64).to_le_bytes());
        }
        for &x in t.data() {
            buf.extend(x.to_le_bytes());
        }
        w.write_all(&buf)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn read_tensor(path: &Path, expect: &str) -> Result<Tensor> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    let bad = |msg: String| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        msg,
    };
    let mut pos = 0usize;
    let u64_at = |pos: &mut usize| -> Result<u64> {
        let b = bytes
            .get(*pos..*pos + 8)
            .ok_or_else(|| bad("truncated tensor blob".into()))?;
        *pos += 8;
        Ok(u64::from_le_bytes(b.try_into().unwrap()))
    };
    let name_len = u64_at(&mut pos)? as usize;
    let name = bytes
        .get(pos..pos + name_len)
        .and_then(|b| std::str::from_utf8(b).ok())
        .ok_or_else(|| bad("bad tensor name".into()))?
        .to_string();
    pos += name_len;
    if name != expect {
        return Err(bad(format!("blob holds '{name}', expected '{expect}'")));
    }
    let rank = u64_at(&mut pos)? as usize;
    if rank > 2 {
        return Err(bad(format!("rank {rank} tensor")));
    }
    let shape: Vec<usize> = (0..rank)
        .map(|_| u64_at(&mut pos).map(|d| d as usize))
        .collect::<Result<_>>()?;
    let n: usize = shape.iter().product();
    let rest = &bytes[pos..];
    if rest.len() != n * 8 {
        return Err(bad(format!("expected {n} values, found {} bytes", rest.len())));
    }
    let data = rest
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Tensor::new(shape, data)
}

/// Load a checkpoint; returns the model and any manifest keys it did not consume.
pub fn load_checkpoint(dir: impl AsRef<Path>) -> Result<(Model, BTreeMap<String, String>)> {
    let dir = dir.as_ref();
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut map = parse_kv(&text)?;
    let config = ModelConfig::from_kv(&mut map)?;
    let input_dim = parse_usize(
        "input_dim",
        &map.remove("input_dim")
            .ok_or_else(|| Error::Schema("checkpoint manifest lacks input_dim".into()))?,
    )?;
    let init = map.remove("init").unwrap_or_default();
    let names = map
        .remove("params")
        .ok_or_else(|| Error::Schema("checkpoint manifest lacks params".into()))?;
    let mut tensors = ParamMap::new();
    for name in names.split(',').filter(|s| !s.is_empty()) {
        let t = read_tensor(&dir.join(format!("{name}.bin")), name)?;
        tensors.insert(name.to_string(), t);
    }
    let params = ModelParams {
        tensors,
        input_dim,
        init,
    };
    params.check(&config)?;
    Ok((Model { config, params }, map))
}
