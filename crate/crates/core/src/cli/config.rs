use crate::error::{Error, Result};

/// Parse a `key = value` document. Blank lines and `#` comments are skipped;
/// a repeated key keeps its last value.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: i + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || !k.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
            return Err(Error::Parse {
                line: i + 1,
                reason: format!("keys are snake_case, got `{k}`"),
            });
        }
        pairs.retain(|(existing, _)| existing != k);
        pairs.push((k.to_string(), v.to_string()));
    }
    Ok(pairs)
}
