//! All-or-nothing output: write into a sibling staging directory, then move
//! the finished files into place.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

fn staging_path(dest: &Path) -> PathBuf {
    let name = dest
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let parent = dest.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    parent.join(format!(".{name}.partial-{}", std::process::id()))
}

/// Moves every entry of `from` into `to`, replacing what is there.
fn move_entries(from: &Path, to: &Path) -> std::io::Result<()> {
    fs::create_dir_all(to)?;
    for entry in fs::read_dir(from)? {
        let entry = entry?;
        let target = to.join(entry.file_name());
        if entry.file_type()?.is_dir() && target.is_dir() {
            move_entries(&entry.path(), &target)?;
            continue;
        }
        if target.is_dir() {
            fs::remove_dir_all(&target)?;
        }
        fs::rename(entry.path(), &target)?;
    }
    Ok(())
}

/// Runs `write` against a fresh staging directory and publishes its contents
/// into `dest` only if it succeeds. The staging directory is always removed.
pub fn write_staged<T>(dest: &Path, write: impl FnOnce(&Path) -> CliResult<T>) -> CliResult<T> {
    let stage = staging_path(dest);
    if stage.exists() {
        fs::remove_dir_all(&stage)?;
    }
    fs::create_dir_all(&stage)?;
    let result = write(&stage).and_then(|v| {
        move_entries(&stage, dest).map_err(CliError::from)?;
        Ok(v)
    });
    let _ = fs::remove_dir_all(&stage);
    result
}
