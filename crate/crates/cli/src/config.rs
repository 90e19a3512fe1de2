//! `key = value` config files merged into the command line.
//!
//! Grammar: one `key = value` per line; blank lines and lines starting with
//! `#` are ignored. Keys are long option names (`min-freq` or `min_freq`).
//! Repeatable options take a comma-separated list. Switches take
//! `true`/`false`.

use std::collections::BTreeSet;
use std::path::Path;

use clap::{ArgAction, Command};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct ConfigFile {
    pub entries: Vec<(String, String)>,
    pub sha256: String,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = scriptnorm::error::read_utf8(path).map_err(CliError::data)?;
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| CliError::Usage(format!("{}:{}: {m}", path.display(), idx + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected `key = value`"))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
                return Err(bad(&format!("bad key `{key}`")));
            }
            if value.is_empty() {
                return Err(bad(&format!("empty value for `{key}`")));
            }
            if !seen.insert(key.clone()) {
                return Err(bad(&format!("duplicate key `{key}`")));
            }
            entries.push((key, value.to_string()));
        }
        Ok(ConfigFile {
            entries,
            sha256: scriptnorm::checksum::sha256_hex(text),
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn parse_switch(key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!("config key `{key}` expects true or false, got `{value}`"))),
    }
}

/// Inserts config values for `subcommand` right after its name in `argv`,
/// skipping options the user already passed. Keys that no subcommand
/// knows are rejected so typos do not go unnoticed.
pub fn merge(argv: &[String], root: &Command, subcommand: &str, cfg: &ConfigFile) -> Result<Vec<String>, CliError> {
    let sub = root
        .find_subcommand(subcommand)
        .ok_or_else(|| CliError::Usage(format!("unknown subcommand `{subcommand}`")))?;
    let pos = argv
        .iter()
        .skip(1)
        .position(|a| a == subcommand)
        .map(|p| p + 1)
        .ok_or_else(|| CliError::Usage(format!("subcommand `{subcommand}` not found in arguments")))?;
    let given = |long: &str| {
        let flag = format!("--{long}");
        argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
    };

    let mut injected = Vec::new();
    for (key, value) in &cfg.entries {
        if key == "threads" || key == "config" {
            continue;
        }
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            let known = root
                .get_subcommands()
                .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key.as_str())));
            if !known {
                return Err(CliError::Usage(format!("unknown config key `{key}`")));
            }
            continue;
        };
        if given(key) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => {
                if parse_switch(key, value)? {
                    injected.push(format!("--{key}"));
                }
            }
            ArgAction::Append => {
                for v in value.split(',').map(str::trim).filter(|v| !v.is_empty()) {
                    injected.push(format!("--{key}"));
                    injected.push(v.to_string());
                }
            }
            _ => {
                injected.push(format!("--{key}"));
                injected.push(value.clone());
            }
        }
    }
    let mut out = argv[..=pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}
