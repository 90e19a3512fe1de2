//! Plain-text `key\tvalue` run manifests.

use std::path::{Path, PathBuf};

use scriptnorm::checksum::sha256_hex;

use crate::error::{CliError, CliResult};

pub struct Manifest {
    command: String,
    lines: Vec<(String, String)>,
}

impl Manifest {
    /// `params` are the resolved option values, after config merging.
    pub fn new(command: &str, argv: &[String], params: &[(String, String)], config_sha: Option<&str>) -> Self {
        let mut lines = vec![
            ("command".to_string(), command.to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("argv".to_string(), argv.join(" ")),
            ("config_sha256".to_string(), config_sha.unwrap_or("none").to_string()),
        ];
        let joined: String = params.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        lines.push(("params_sha256".to_string(), sha256_hex(joined)));
        for (k, v) in params {
            lines.push((format!("param.{k}"), v.clone()));
        }
        Manifest {
            command: command.to_string(),
            lines,
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn input(&mut self, path: &Path) -> CliResult {
        let bytes = std::fs::read(path).map_err(|e| CliError::data(anyhow::anyhow!("{}: {e}", path.display())))?;
        self.lines
            .push((format!("input.{}", path.display()), sha256_hex(bytes)));
        Ok(())
    }

    pub fn output(&mut self, path: &Path) -> CliResult {
        let bytes = std::fs::read(path).map_err(|e| CliError::data(anyhow::anyhow!("{}: {e}", path.display())))?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        self.lines.push((format!("output.{name}"), sha256_hex(bytes)));
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> CliResult<PathBuf> {
        let path = dir.join(format!("{}.manifest", self.command));
        let text: String = self.lines.iter().map(|(k, v)| format!("{k}\t{v}\n")).collect();
        std::fs::write(&path, text)?;
        Ok(path)
    }
}
