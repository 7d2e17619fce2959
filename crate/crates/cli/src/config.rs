//! `--config <path>`: a JSON object whose keys mirror the long flags.
//!
//! {"command": "moment", "s": 1, "h": [0.25, 1], "output": "json"} expands to
//! `moment --s=1 --h=0.25 --h=1 --output=json`, which then goes through the
//! ordinary parser, so validation and defaults are shared with the flags.

use serde_json::Value;

use crate::error::CliError;

pub fn expand(text: &str) -> Result<Vec<String>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))?;
    let Value::Object(map) = v else {
        return Err(CliError::usage("config: top level must be a JSON object"));
    };
    let command = match map.get("command") {
        Some(Value::String(c)) => c.clone(),
        _ => return Err(CliError::usage("config: missing string field \"command\"")),
    };
    let mut args = vec![command];
    for (key, value) in map.iter().filter(|(k, _)| k.as_str() != "command") {
        let flag = format!("--{}", key.replace('_', "-"));
        push(&mut args, &flag, value, key)?;
    }
    Ok(args)
}

fn push(args: &mut Vec<String>, flag: &str, value: &Value, key: &str) -> Result<(), CliError> {
    match value {
        Value::Null | Value::Bool(false) => {}
        Value::Bool(true) => args.push(flag.to_string()),
        Value::Number(n) => args.push(format!("{flag}={n}")),
        Value::String(s) => args.push(format!("{flag}={s}")),
        Value::Array(items) => {
            for item in items {
                if matches!(item, Value::Array(_) | Value::Object(_)) {
                    return Err(CliError::usage(format!("config: nested value under {key:?}")));
                }
                push(args, flag, item, key)?;
            }
        }
        Value::Object(_) => return Err(CliError::usage(format!("config: object value under {key:?}"))),
    }
    Ok(())
}

/// Removes `--config <path>` / `--config=<path>` and returns the path.
pub fn take_config(args: &mut Vec<String>) -> Result<Option<String>, CliError> {
    let Some(i) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(None);
    };
    let a = args.remove(i);
    if let Some(p) = a.strip_prefix("--config=") {
        return Ok(Some(p.to_string()));
    }
    if i < args.len() {
        Ok(Some(args.remove(i)))
    } else {
        Err(CliError::usage("--config needs a path"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_lists_and_flags() {
        let a = expand(r#"{"command": "charfn", "s": 1, "t": [0.5, 2], "tau": true, "finite_N": null}"#).unwrap();
        assert_eq!(a, ["charfn", "--s=1", "--t=0.5", "--t=2", "--tau"]);
        assert!(expand("[1]").is_err());
        assert!(expand(r#"{"s": 1}"#).is_err());
    }

    #[test]
    fn strips_config_flag() {
        let mut v: Vec<String> = ["xs", "--config", "a.json", "--output", "json"].map(String::from).to_vec();
        assert_eq!(take_config(&mut v).unwrap().as_deref(), Some("a.json"));
        assert_eq!(v, ["xs", "--output", "json"]);
    }
}
