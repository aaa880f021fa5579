//! Output documents. Every file starts with metadata: library version,
//! a SHA-256 hash of the resolved configuration, and the configuration
//! itself (defaults included).

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub config: Value,
}

impl Metadata {
    pub fn of(config: &RunConfig) -> Self {
        let config = serde_json::to_value(config).expect("config serialises");
        let canonical = serde_json::to_string(&config).expect("config serialises");
        let hash = Sha256::digest(canonical.as_bytes());
        Metadata { tool: "bergman", version: env!("CARGO_PKG_VERSION"), config_hash: format!("{hash:x}"), config }
    }
}

/// Shortest representation that round-trips.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

/// CSV with `# key: value` metadata lines, then a header row.
pub fn csv(meta: &Metadata, extra: &[(&str, String)], header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# tool: {}\n# version: {}\n", meta.tool, meta.version));
    out.push_str(&format!("# config_hash: {}\n# config: {}\n", meta.config_hash, meta.config));
    for (k, v) in extra {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Pretty JSON object `{"metadata": ..., <key>: <value>, ...}`.
pub fn json_doc(meta: &Metadata, body: Vec<(&str, Value)>) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("metadata".into(), json!(meta));
    for (k, v) in body {
        obj.insert(k.into(), v);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("document serialises");
    s.push('\n');
    s
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// Sends a document to `--output`, or to stdout when none is set.
pub fn emit(config: &RunConfig, content: &str) -> std::io::Result<()> {
    match &config.output {
        Some(path) => write_atomic(path, content),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()
        }
    }
}
