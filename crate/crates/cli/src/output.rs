//! Output files: atomic writes and change detection against what is
//! already on disk.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Writes through a sibling temporary file and a rename, so readers never
/// see a half-written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Change {
    Created,
    Updated,
    Unchanged,
}

impl Change {
    pub fn as_str(self) -> &'static str {
        match self {
            Change::Created => "created",
            Change::Updated => "updated",
            Change::Unchanged => "unchanged",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedFile {
    pub path: PathBuf,
    pub contents: Vec<u8>,
}

pub fn change_for(file: &PlannedFile) -> Change {
    match fs::read(&file.path) {
        Ok(existing) if existing == file.contents => Change::Unchanged,
        Ok(_) => Change::Updated,
        Err(_) => Change::Created,
    }
}

/// Writes the files whose contents differ from disk. Unchanged files are
/// left alone so their timestamps stay put.
pub fn commit(files: &[PlannedFile]) -> io::Result<Vec<(PathBuf, Change)>> {
    let changes: Vec<Change> = files.iter().map(change_for).collect();
    for (file, change) in files.iter().zip(&changes) {
        if *change != Change::Unchanged {
            write_atomic(&file.path, &file.contents)?;
        }
    }
    Ok(files.iter().map(|f| f.path.clone()).zip(changes).collect())
}
