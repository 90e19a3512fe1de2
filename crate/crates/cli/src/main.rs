mod args;
mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches};

use crate::args::Cli;
use crate::commands::Ctx;
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};

fn parse(argv: &[String]) -> Result<ArgMatches, ExitCode> {
    Cli::command().try_get_matches_from(argv).map_err(|e| {
        let _ = e.print();
        ExitCode::from(if e.use_stderr() { 1 } else { 0 })
    })
}

/// Option values after config merging, keyed by long name, for the manifest.
fn resolved_params(m: &ArgMatches) -> Vec<(String, String)> {
    let Some((name, sub)) = m.subcommand() else {
        return Vec::new();
    };
    let root = Cli::command();
    let Some(cmd) = root.find_subcommand(name) else {
        return Vec::new();
    };
    // flattened argument structs also show up as group ids
    let is_arg = |id: &str| cmd.get_arguments().any(|a| a.get_id().as_str() == id);
    let mut out: Vec<(String, String)> = sub
        .ids()
        .filter(|id| is_arg(id.as_str()))
        .filter_map(|id| {
            let values = sub.try_get_raw(id.as_str()).ok()??;
            let joined: Vec<String> = values.map(|v| v.to_string_lossy().into_owned()).collect();
            Some((id.as_str().replace('_', "-"), joined.join(",")))
        })
        .collect();
    out.sort();
    out
}

fn config_path(m: &ArgMatches) -> Option<PathBuf> {
    m.get_one::<PathBuf>("config")
        .or_else(|| m.subcommand().and_then(|(_, s)| s.get_one::<PathBuf>("config")))
        .cloned()
}

fn run(argv: Vec<String>) -> Result<CliResult, ExitCode> {
    let first = parse(&argv)?;
    let config = match config_path(&first).map(|p| ConfigFile::load(&p)) {
        Some(Ok(c)) => Some(c),
        Some(Err(e)) => return Ok(Err(e)),
        None => None,
    };
    let matches = match &config {
        Some(cfg) => {
            let sub = first.subcommand_name().unwrap_or_default();
            match config::merge(&argv, &Cli::command(), sub, cfg) {
                Ok(merged) => parse(&merged)?,
                Err(e) => return Ok(Err(e)),
            }
        }
        None => first,
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| {
        let _ = e.print();
        ExitCode::from(1)
    })?;

    let threads = match (cli.threads, config.as_ref().and_then(|c| c.get("threads"))) {
        (Some(n), _) => Some(n),
        (None, Some(v)) => match v.parse::<usize>() {
            Ok(n) => Some(n),
            Err(_) => return Ok(Err(CliError::Usage(format!("config key `threads`: bad value `{v}`")))),
        },
        (None, None) => None,
    };
    if let Some(n) = threads {
        if n == 0 {
            return Ok(Err(CliError::Usage("--threads must be at least 1".into())));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }

    let ctx = Ctx {
        argv,
        params: resolved_params(&matches),
        config_sha: config.map(|c| c.sha256),
    };
    Ok(commands::dispatch(cli.command, &ctx))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args_os().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(argv) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            ExitCode::from(e.exit_code())
        }
        Err(code) => code,
    }
}
