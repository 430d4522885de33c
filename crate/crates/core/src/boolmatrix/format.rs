//! Text format for matrices: a first line `k l`, then `k` lines of `l`
//! characters from `{0, 1}`. Blank lines and `#` comments are skipped.

use super::matrix::BoolMatrix;
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<BoolMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing `k l` header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: hline,
            msg: format!("bad header: {e}"),
        })?;
    let [k, l] = dims[..] else {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be `k l`".into(),
        });
    };
    let mut m = BoolMatrix::zeros(k, l).map_err(|e| Error::Parse {
        line: hline,
        msg: e.to_string(),
    })?;
    let mut seen = 0;
    for (line, row) in lines {
        if seen == k {
            return Err(Error::Parse {
                line,
                msg: format!("more than {k} rows"),
            });
        }
        if row.len() != l {
            return Err(Error::Parse {
                line,
                msg: format!("expected {l} entries, found {}", row.len()),
            });
        }
        for (j, ch) in row.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => m.set(seen, j, true),
                other => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        seen += 1;
    }
    if seen != k {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {k} rows, found {seen}"),
        });
    }
    Ok(m)
}

pub fn write_matrix(m: &BoolMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(if m.get(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}
