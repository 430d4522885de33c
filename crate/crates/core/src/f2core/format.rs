//! Text format for sets: one element per line as a `0`/`1` string of
//! length `n`, most significant coordinate first. Blank lines and lines
//! starting with `#` are ignored, except a `# dim n` line, which fixes the
//! dimension (needed for the empty set).

use super::set::F2Set;
use super::vector::F2Vector;
use crate::error::{Error, Result};

pub fn parse_set(text: &str, dim_cap: usize) -> Result<F2Set> {
    let mut n = None;
    let mut words = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| Error::Parse { line: idx + 1, msg };
        if let Some(d) = line.strip_prefix("# dim ") {
            let d: usize = d
                .trim()
                .parse()
                .map_err(|e| err(format!("bad dimension: {e}")))?;
            if d > dim_cap {
                return Err(err(format!("dimension {d} exceeds cap {dim_cap}")));
            }
            if n.is_some_and(|n| n != d) {
                return Err(err(format!("dimension header {d} disagrees with elements")));
            }
            n = Some(d);
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match n {
            None => {
                if line.len() > dim_cap {
                    return Err(err(format!(
                        "dimension {} exceeds cap {dim_cap}",
                        line.len()
                    )));
                }
                n = Some(line.len());
            }
            Some(n) if n != line.len() => {
                return Err(err(format!(
                    "expected {n} characters, found {}",
                    line.len()
                )))
            }
            _ => {}
        }
        let v = F2Vector::parse(line).map_err(|e| match e {
            Error::Parse { msg, .. } => err(msg),
            other => err(other.to_string()),
        })?;
        words.push(v.bits());
    }
    let n = n.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "no elements; dimension unknown".into(),
    })?;
    F2Set::from_words(n, words)
}

pub fn write_set(set: &F2Set) -> String {
    let mut out = String::with_capacity(set.len() * (set.dim() + 1) + 8);
    out.push_str(&format!("# dim {}\n", set.dim()));
    for v in set.vectors() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}
