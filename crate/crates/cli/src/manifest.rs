use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};

#[derive(Serialize)]
pub struct InputFile {
    pub path: PathBuf,
    pub sha256: String,
}

impl InputFile {
    pub fn hash(path: &Path) -> CliResult<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self { path: path.to_path_buf(), sha256: format!("{:x}", Sha256::digest(&bytes)) })
    }
}

/// Everything needed to repeat a run: the argument vector, the resolved
/// settings (loadable again with `--config`) and hashes of the inputs.
#[derive(Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub argv: Vec<String>,
    pub config: &'a ConfigFile,
    pub inputs: Vec<InputFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<serde_json::Value>,
    pub outputs: Vec<PathBuf>,
}

impl Manifest<'_> {
    pub fn write(&self, path: &Path) -> CliResult<()> {
        let f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        serde_json::to_writer_pretty(f, self)?;
        Ok(())
    }
}
