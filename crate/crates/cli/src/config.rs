//! `--config FILE` support: flat `key = value` lines, `#` comments.
//!
//! Entries become `--key value` tokens inserted right after the subcommand
//! name, so anything typed on the command line later overrides them.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, String> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", k + 1))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", k + 1));
        }
        out.push(Entry {
            key,
            value: value.trim().trim_matches('"').to_string(),
            line: k + 1,
        });
    }
    Ok(out)
}

/// Value of `--config` in raw arguments, if present.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Returns `args` with the config file's entries spliced in after the subcommand.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path).to_path_buf();
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let entries = parse(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))?;

    let root = Cli::command();
    let names: Vec<String> = root.get_subcommands().map(|c| c.get_name().to_string()).collect();
    let Some(pos) = args.iter().position(|a| names.iter().any(|n| a == n.as_str())) else {
        return Ok(args);
    };
    let sub = root
        .find_subcommand(args[pos].to_string_lossy().as_ref())
        .expect("name came from the command list");

    let mut injected: Vec<OsString> = Vec::new();
    for e in entries {
        if e.key == "config" {
            continue;
        }
        let arg = sub
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(e.key.as_str()) || a.get_visible_aliases().is_some_and(|v| v.contains(&e.key.as_str())))
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{} line {}: `{}` is not a flag of `{}`",
                    path.display(),
                    e.line,
                    e.key,
                    sub.get_name()
                ))
            })?;
        if arg.get_action().takes_values() {
            injected.push(format!("--{}", e.key).into());
            injected.push(e.value.into());
        } else {
            match e.value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "" => injected.push(format!("--{}", e.key).into()),
                "false" | "no" | "0" => {}
                other => {
                    return Err(CliError::Usage(format!(
                        "{} line {}: `{}` expects true or false, got `{other}`",
                        path.display(),
                        e.line,
                        e.key
                    )))
                }
            }
        }
    }
    let mut out = args;
    out.splice(pos + 1..pos + 1, injected);
    Ok(out)
}
