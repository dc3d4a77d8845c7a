//! Plain-text spec files: `key = value` lines with comma-separated
//! coefficient lists, lowest degree first.
//!
//! ```text
//! # 2,3-trees
//! P = 0,1
//! Q = 0,0,1,1
//! bracket = 0.1,0.9
//! ```

use funeq::Polynomial;

#[derive(Debug)]
pub struct SpecFile {
    pub p: Polynomial,
    pub q: Polynomial,
    pub bracket: (f64, f64),
}

const DEFAULT_BRACKET: (f64, f64) = (0.1, 0.9);

pub fn parse(text: &str) -> Result<SpecFile, String> {
    let mut p = None;
    let mut q = None;
    let mut bracket = DEFAULT_BRACKET;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
        let values: Vec<f64> = value
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        match key.trim() {
            "P" => {
                p = Some(Polynomial::new(values).map_err(|e| format!("line {}: {e}", lineno + 1))?)
            }
            "Q" => {
                q = Some(Polynomial::new(values).map_err(|e| format!("line {}: {e}", lineno + 1))?)
            }
            "bracket" => {
                if values.len() != 2 {
                    return Err(format!("line {}: bracket needs two endpoints", lineno + 1));
                }
                bracket = (values[0], values[1]);
            }
            other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
        }
    }
    Ok(SpecFile {
        p: p.ok_or("missing key `P`")?,
        q: q.ok_or("missing key `Q`")?,
        bracket,
    })
}
