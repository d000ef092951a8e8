//! File formats, reports and subcommands of the `gammoid` tool.

pub mod commands;
pub mod format;
pub mod fuzz;
pub mod report;

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
