//! `key = value` option files. A key names a long option of the selected
//! subcommand (dashes or underscores); options already given on the
//! command line are left alone.

use std::ffi::OsString;
use std::path::Path;

use clap::error::ErrorKind;
use clap::parser::ValueSource;
use clap::{ArgMatches, Command};

fn parse_lines(text: &str, path: &Path) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected `key = value`", path.display(), i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("{}:{}: empty key", path.display(), i + 1));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Arguments to append to `argv` so the file fills every option the
/// command line left unset.
fn extra_args(
    root: &Command,
    matches: &ArgMatches,
    pairs: &[(String, String)],
) -> Result<Vec<OsString>, String> {
    let mut cmd = root.clone();
    cmd.build();
    let mut leaf = &cmd;
    let mut leaf_matches = matches;
    let mut path = vec![cmd.get_name().to_string()];
    while let Some((name, sub)) = leaf_matches.subcommand() {
        leaf = leaf.find_subcommand(name).expect("matched subcommand exists");
        leaf_matches = sub;
        path.push(name.to_string());
    }
    let mut extra = Vec::new();
    for (key, value) in pairs {
        if key == "config" {
            return Err("a config file cannot name another config file".into());
        }
        let arg = leaf
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| format!("config key `{key}` is not an option of `{}`", path.join(" ")))?;
        let id = arg.get_id().as_str();
        if leaf_matches.value_source(id) == Some(ValueSource::CommandLine) {
            continue;
        }
        if arg.get_action().takes_values() {
            extra.push(OsString::from(format!("--{key}={value}")));
        } else {
            match value.as_str() {
                "true" => extra.push(OsString::from(format!("--{key}"))),
                "false" => {}
                other => return Err(format!("config key `{key}` is a switch; expected true or false, got {other:?}")),
            }
        }
    }
    Ok(extra)
}

/// Parses `argv`, merging in the `--config` file when one is named. Errors
/// are clap errors so they print and exit like any other usage error.
pub fn parse_with_config(root: Command, argv: Vec<OsString>) -> Result<ArgMatches, clap::Error> {
    let matches = root.clone().try_get_matches_from(&argv)?;
    let Some(path) = matches.get_one::<std::path::PathBuf>("config").cloned() else {
        return Ok(matches);
    };
    let usage = |msg: String| root.clone().error(ErrorKind::InvalidValue, msg);
    let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let pairs = parse_lines(&text, &path).map_err(usage)?;
    let extra = extra_args(&root, &matches, &pairs).map_err(usage)?;
    if extra.is_empty() {
        return Ok(matches);
    }
    let mut full = argv;
    full.extend(extra);
    root.try_get_matches_from(full)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_and_comments() {
        let p = Path::new("c.txt");
        let got = parse_lines("# top\nn = 60\nout_dir = runs  # trailing\n\n", p).unwrap();
        assert_eq!(got, [("n".into(), "60".into()), ("out-dir".into(), "runs".into())]);
        assert!(parse_lines("n 60\n", p).is_err());
        assert!(parse_lines("= 3\n", p).is_err());
    }
}
