use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Provenance embedded in every artifact. Wall time is only recorded on
/// request so that repeated runs stay byte-identical.
pub struct RunManifest {
    command: String,
    args: Vec<String>,
    inputs: Vec<(String, String)>,
    seed: u64,
    started: Instant,
    record_time: bool,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, record_time: bool) -> Self {
        Self {
            command: command.to_string(),
            args: std::env::args().collect(),
            inputs: Vec::new(),
            seed,
            started: Instant::now(),
            record_time,
        }
    }

    /// Reads an input file and records its SHA-256.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push((path.display().to_string(), hex::encode(Sha256::digest(&bytes))));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "args": self.args,
            "inputs": self.inputs.iter().map(|(p, h)| json!({"path": p, "sha256": h})).collect::<Vec<_>>(),
            "rng_seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        });
        if self.record_time {
            v["wall_time_s"] = json!(self.started.elapsed().as_secs_f64());
        }
        v
    }

    /// `doc` with the manifest as its first field.
    pub fn embed(&self, doc: Value) -> Value {
        let mut out = serde_json::Map::new();
        out.insert("manifest".into(), self.to_json());
        match doc {
            Value::Object(map) => out.extend(map),
            other => {
                out.insert("result".into(), other);
            }
        }
        Value::Object(out)
    }

    /// SVG with the manifest in a `<metadata>` element after the root tag.
    pub fn embed_svg(&self, svg: &str) -> String {
        let text = self.to_json().to_string().replace("--", "- -");
        match svg.split_once('\n') {
            Some((head, rest)) => format!("{head}\n<metadata><!-- {text} --></metadata>\n{rest}"),
            None => svg.to_string(),
        }
    }

    /// TSV with the manifest on a leading `#` line.
    pub fn embed_tsv(&self, tsv: &str) -> String {
        format!("# manifest {}\n{tsv}", self.to_json())
    }
}
