//! Dot-path configuration overrides for the repeatable `--set key=value`
//! flag, applied to the JSON document before validation so every field of
//! the config file is reachable.

use anyhow::{bail, Context, Result};
use serde_json::Value;

/// Parse one `key=value` pair into (dot path, JSON value). The value is
/// interpreted as JSON when it parses (numbers, booleans, null, arrays);
/// anything else becomes a string.
pub fn parse_set(arg: &str) -> Result<(String, Value)> {
    let Some((key, raw)) = arg.split_once('=') else {
        bail!("--set expects key=value, got '{arg}'");
    };
    if key.is_empty() {
        bail!("--set: empty key in '{arg}'");
    }
    let value = serde_json::from_str(raw).unwrap_or(Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

/// Apply one override in place. Path segments are object keys or array
/// indices; every intermediate node must already exist so typos fail loudly
/// instead of silently growing the document.
pub fn apply(doc: &mut Value, path: &str, value: Value) -> Result<()> {
    let mut node = doc;
    let segments: Vec<&str> = path.split('.').collect();
    let (last, walk) = segments.split_last().unwrap();
    for seg in walk {
        node = descend(node, seg).with_context(|| format!("override path '{path}'"))?;
    }
    match node {
        Value::Object(map) => {
            if !map.contains_key(*last) {
                bail!("unknown key '{last}' in override path '{path}'");
            }
            map.insert(last.to_string(), value);
        }
        Value::Array(items) => {
            let idx: usize = last
                .parse()
                .with_context(|| format!("array index '{last}' in '{path}'"))?;
            if idx >= items.len() {
                bail!("index {idx} out of bounds in override path '{path}'");
            }
            items[idx] = value;
        }
        _ => bail!("path '{path}' does not address an object or array element"),
    }
    Ok(())
}

fn descend<'a>(node: &'a mut Value, seg: &str) -> Result<&'a mut Value> {
    match node {
        Value::Object(map) => map
            .get_mut(seg)
            .with_context(|| format!("unknown key '{seg}'")),
        Value::Array(items) => {
            let idx: usize = seg.parse().with_context(|| format!("array index '{seg}'"))?;
            items.get_mut(idx).with_context(|| format!("index {idx} out of bounds"))
        }
        _ => bail!("'{seg}' addresses into a scalar"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_typed_values() {
        assert_eq!(parse_set("a.b=3e5").unwrap().1, json!(3e5));
        assert_eq!(parse_set("a=true").unwrap().1, json!(true));
        assert_eq!(parse_set("a=null").unwrap().1, json!(null));
        assert_eq!(parse_set("a=exact").unwrap().1, json!("exact"));
        assert!(parse_set("no_equals").is_err());
    }

    #[test]
    fn applies_nested_paths() {
        let mut doc = json!({"trap": {"n_blue": 1.0, "window": [10.0, 1000.0]}});
        apply(&mut doc, "trap.n_blue", json!(2.4e5)).unwrap();
        apply(&mut doc, "trap.window.1", json!(500.0)).unwrap();
        assert_eq!(doc["trap"]["n_blue"], json!(2.4e5));
        assert_eq!(doc["trap"]["window"][1], json!(500.0));
    }

    #[test]
    fn rejects_unknown_keys() {
        let mut doc = json!({"trap": {"n_blue": 1.0}});
        assert!(apply(&mut doc, "trap.n_bleu", json!(1.0)).is_err());
        assert!(apply(&mut doc, "missing.key", json!(1.0)).is_err());
        assert!(apply(&mut doc, "trap.n_blue.deeper", json!(1.0)).is_err());
    }
}
