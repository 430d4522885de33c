use std::fs;
use std::path::Path;

use logrank_core::boolmatrix::format::parse_matrix;
use logrank_core::f2core::format::parse_set;
use logrank_core::{BoolMatrix, Error, F2Set, Limits, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

pub fn read_matrix(path: &Path) -> Result<BoolMatrix> {
    parse_matrix(&read_text(path)?)
}

pub fn read_set(path: &Path, limits: &Limits) -> Result<F2Set> {
    parse_set(&read_text(path)?, limits.dim_cap)
}

/// Writes to `out`, or stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
