//! Atomic file output.

use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Writes `contents` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::from(e.error))?;
    Ok(())
}

/// Sends `text` to `path` if given, otherwise returns it for stdout.
pub fn emit(path: Option<&Path>, text: String) -> Result<String, CliError> {
    match path {
        Some(p) => {
            write_atomic(p, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn json_text<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}
