//! `key=value` config files spliced in front of the command-line flags.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};

const SUBCOMMANDS: [&str; 5] = ["certify", "gen", "sums", "constants", "replay"];

/// Returns the argument vector with config entries inserted right after the
/// subcommand, plus the entries themselves.
///
/// Every subcommand lets an argument override itself, so a flag repeated on
/// the command line wins over the file.
pub fn merge(argv: Vec<OsString>) -> Result<(Vec<OsString>, BTreeMap<String, String>)> {
    let Some(path) = config_path(&argv) else {
        return Ok((argv, BTreeMap::new()));
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path))?;
    let entries = parse(&text, Path::new(&path))?;
    let Some(at) = argv.iter().position(|a| a.to_str().is_some_and(|s| SUBCOMMANDS.contains(&s))) else {
        return Ok((argv, entries));
    };
    let mut spliced = Vec::new();
    for (k, v) in &entries {
        match v.as_str() {
            "true" => spliced.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => {
                spliced.push(OsString::from(format!("--{k}")));
                spliced.push(OsString::from(v));
            }
        }
    }
    let mut out = argv[..=at].to_vec();
    out.extend(spliced);
    out.extend_from_slice(&argv[at + 1..]);
    Ok((out, entries))
}

fn config_path(argv: &[OsString]) -> Option<String> {
    let mut it = argv.iter().filter_map(|a| a.to_str());
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(str::to_string);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str, path: &Path) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value, found `{line}`", path.display(), i + 1);
        };
        let (k, v) = (k.trim().trim_start_matches("--"), v.trim());
        if k.is_empty() || k == "config" {
            bail!("{}:{}: invalid key `{k}`", path.display(), i + 1);
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            bail!("{}:{}: duplicate key `{k}`", path.display(), i + 1);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_flags() {
        let m = parse("# run\ndelta = 0.5\n--tol=1e-9  # tight\n\nsupplementary=true\n", Path::new("c")).unwrap();
        assert_eq!(m["delta"], "0.5");
        assert_eq!(m["tol"], "1e-9");
        assert_eq!(m["supplementary"], "true");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse("delta 0.5", Path::new("c")).is_err());
        assert!(parse("a=1\na=2", Path::new("c")).is_err());
        assert!(parse("config=x", Path::new("c")).is_err());
    }

    #[test]
    fn no_config_leaves_argv_alone() {
        let argv = os(&["cuspavg", "certify", "--tol", "1e-6"]);
        assert_eq!(merge(argv.clone()).unwrap().0, argv);
    }

    #[test]
    fn entries_go_after_the_subcommand() {
        let dir = std::env::temp_dir().join(format!("cuspavg-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "delta=0.25\nsupplementary=true\nR=grid\n").unwrap();
        let p = path.to_str().unwrap();
        let (argv, _) = merge(os(&["cuspavg", "--config", p, "certify", "--delta", "0.5"])).unwrap();
        assert_eq!(
            argv,
            os(&["cuspavg", "--config", p, "certify", "--R", "grid", "--delta", "0.25", "--supplementary", "--delta", "0.5"])
        );
        std::fs::remove_dir_all(dir).unwrap();
    }
}
