use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// Input file contents with their digest.
pub struct Input {
    pub name: String,
    pub path: PathBuf,
    pub sha256: String,
    pub text: String,
}

pub fn read_input(name: &str, path: &Path) -> CliResult<Input> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| {
        CliError::new(
            crate::error::Kind::Format,
            format!("{}: not UTF-8 text", path.display()),
        )
    })?;
    Ok(Input {
        name: name.into(),
        path: path.to_path_buf(),
        sha256,
        text,
    })
}

/// Writes through a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
