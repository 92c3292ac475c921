use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::commands::CliError;
use crate::config::RunConfig;

/// An artifact body with the run configuration in front.
#[derive(Serialize)]
pub struct Artifact<'a, T: Serialize> {
    pub run_config: &'a RunConfig,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn to_json<T: Serialize>(config: &RunConfig, body: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(&Artifact { run_config: config, body })
        .map_err(|e| CliError::Runtime(format!("cannot encode output: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Writes through a temporary file in the target directory, then renames, so
/// readers never observe a partial artifact.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Runtime(format!("cannot write {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// To `out` when given, else stdout.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
