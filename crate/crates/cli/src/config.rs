//! `--config` files are JSON objects keyed by flag names. They are spliced
//! into the argument list directly after the subcommand, so flags given on
//! the command line override them.

use serde_json::Value;

use crate::args::SUBCOMMANDS;

fn take_config_path(argv: &mut Vec<String>) -> Result<Option<String>, String> {
    let mut found = None;
    let mut i = 1;
    while i < argv.len() {
        if argv[i] == "--" {
            break;
        }
        if argv[i] == "--config" {
            if i + 1 >= argv.len() {
                return Err("--config needs a path".into());
            }
            found = Some(argv.remove(i + 1));
            argv.remove(i);
        } else if let Some(p) = argv[i].strip_prefix("--config=") {
            found = Some(p.to_string());
            argv.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

fn flag_tokens(key: &str, value: &Value) -> Result<Vec<String>, String> {
    let flag = format!("--{}", key.replace('_', "-"));
    Ok(match value {
        Value::Null | Value::Bool(false) => vec![],
        Value::Bool(true) => vec![flag],
        Value::Number(n) => vec![flag, n.to_string()],
        Value::String(s) => vec![flag, s.clone()],
        Value::Array(items) => {
            let parts: Result<Vec<String>, String> = items
                .iter()
                .map(|v| match v {
                    Value::Number(n) => Ok(n.to_string()),
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(format!("config key {key:?}: arrays may hold numbers or strings only")),
                })
                .collect();
            vec![flag, parts?.join(",")]
        }
        Value::Object(_) => return Err(format!("config key {key:?}: nested objects are not flags")),
    })
}

/// Reads the config file named by `--config`, if any, and returns the
/// argument list with its entries inserted.
pub fn expand_args(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = take_config_path(&mut argv)? else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let parsed: Value = serde_json::from_str(&text).map_err(|e| format!("config {path} is not valid JSON: {e}"))?;
    let Value::Object(mut map) = parsed else {
        return Err(format!("config {path} must be a JSON object"));
    };
    let experiment = match map.remove("experiment") {
        None => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => return Err("config key \"experiment\" must be a string".into()),
    };
    let position = argv.iter().skip(1).position(|a| SUBCOMMANDS.contains(&a.as_str())).map(|p| p + 1);
    let at = match (position, experiment) {
        (Some(p), Some(e)) if argv[p] != e => {
            return Err(format!("config selects {e} but the command line selects {}", argv[p]));
        }
        (Some(p), _) => p + 1,
        (None, Some(e)) => {
            if !SUBCOMMANDS.contains(&e.as_str()) {
                return Err(format!("unknown experiment {e:?} in config"));
            }
            argv.insert(1, e);
            2
        }
        (None, None) => return Err("no subcommand given on the command line or in the config".into()),
    };
    let mut injected = Vec::new();
    for (k, v) in &map {
        injected.extend(flag_tokens(k, v)?);
    }
    argv.splice(at..at, injected);
    Ok(argv)
}
