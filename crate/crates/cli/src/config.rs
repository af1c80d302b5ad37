//! Plain `key = value` config files merged underneath the command line.
//!
//! Keys are long flag names (`lambda-min` or `lambda_min`). A key fills in its
//! flag only when neither that flag nor a flag conflicting with it is on the
//! command line, so flags always win.

use std::fs;

use clap::{ArgGroup, Command};
use qpt_core::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Parses config text; blank lines and `#` comments are skipped.
pub fn parse(text: &str) -> Result<Vec<Entry>, Error> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidArgument(format!(
                "config line {}: expected key = value",
                i + 1
            )));
        };
        let key = key.trim().to_ascii_lowercase().replace('_', "-");
        if key.is_empty() {
            return Err(Error::InvalidArgument(format!("config line {}: empty key", i + 1)));
        }
        out.push(Entry {
            key,
            value: value.trim().to_string(),
            line: i + 1,
        });
    }
    Ok(out)
}

/// Value of `--config` on the raw command line, if any.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn subcommand_name<'a>(cmd: &Command, args: &'a [String]) -> Option<&'a str> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            it.next();
        } else if !a.starts_with('-') {
            return cmd.find_subcommand(a).map(|_| a.as_str());
        }
    }
    None
}

fn flag_present(args: &[String], long: &str) -> bool {
    let eq = format!("--{long}=");
    args.iter()
        .take_while(|a| *a != "--")
        .any(|a| a.strip_prefix("--") == Some(long) || a.starts_with(&eq))
}

/// Appends config entries to `args` as flags of the chosen subcommand.
pub fn merge(mut cmd: Command, args: &[String], entries: &[Entry]) -> Result<Vec<String>, Error> {
    cmd.build();
    let cmd = &cmd;
    let mut out = args.to_vec();
    let Some(name) = subcommand_name(cmd, args) else {
        return Ok(out);
    };
    let sub = cmd.find_subcommand(name).expect("subcommand exists");
    let known = |key: &str| {
        cmd.get_subcommands()
            .flat_map(|s| s.get_arguments())
            .any(|a| a.get_long() == Some(key))
    };
    for e in entries {
        if e.key == "config" {
            return Err(Error::InvalidArgument(format!(
                "config line {}: nested config files are not supported",
                e.line
            )));
        }
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(e.key.as_str())) else {
            if known(&e.key) {
                continue;
            }
            return Err(Error::InvalidArgument(format!(
                "config line {}: unknown key `{}`",
                e.line, e.key
            )));
        };
        let id = arg.get_id();
        let conflicts: Vec<&str> = sub
            .get_groups()
            .filter(|g| !ArgGroup::clone(g).is_multiple() && g.get_args().any(|a| a == id))
            .flat_map(|g| g.get_args())
            .filter_map(|gid| sub.get_arguments().find(|a| a.get_id() == gid))
            .filter_map(|a| a.get_long())
            .collect();
        if flag_present(args, &e.key) || conflicts.iter().any(|c| flag_present(args, c)) {
            continue;
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{}={}", e.key, e.value));
        } else {
            match e.value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "on" | "1" => out.push(format!("--{}", e.key)),
                "false" | "no" | "off" | "0" => {}
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "config line {}: `{}` expects true or false, got `{other}`",
                        e.line, e.key
                    )))
                }
            }
        }
    }
    Ok(out)
}

pub fn load(path: &str) -> Result<Vec<Entry>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("config file {path}: {e}")))?;
    parse(&text)
}
