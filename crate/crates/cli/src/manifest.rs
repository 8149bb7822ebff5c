use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Record written next to every output: enough to re-run the command exactly.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub library_version: String,
    pub command: String,
    /// Arguments after the program name, as given.
    pub args: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub params: Value,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, args: &[String], params: Value) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            library_version: overfit_forge::VERSION.to_string(),
            command: command.to_string(),
            args: args.to_vec(),
            seed: None,
            params,
            outputs: Vec::new(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Writes `<output>.manifest.json` for the first output.
    pub fn write(mut self, outputs: &[&Path]) -> CliResult<PathBuf> {
        self.outputs = outputs.iter().map(|p| p.display().to_string()).collect();
        let first = outputs.first().ok_or_else(|| CliError::usage("manifest without outputs"))?;
        let path = manifest_path(first);
        fs::write(&path, serde_json::to_string_pretty(&self)? + "\n")?;
        Ok(path)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}
