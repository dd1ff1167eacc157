//! Workspace layout, exclusive lock and staged output writes.
//!
//! ```text
//! <root>/
//!   data/        encoded tables, dictionaries, prep audit
//!   models/      fitted networks
//!   strengths/   bootstrap arc strengths
//!   reports/<model>/
//! ```

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

pub const LOCK_FILE: &str = ".beliefnet.lock";

/// Open workspace holding the lock until dropped.
#[derive(Debug)]
pub struct Workspace {
    root: PathBuf,
    lock: PathBuf,
}

impl Workspace {
    /// Create the layout if needed and take the lock.
    pub fn open(root: &Path) -> CliResult<Self> {
        for dir in ["data", "models", "strengths", "reports"] {
            let p = root.join(dir);
            fs::create_dir_all(&p).map_err(|e| CliError::io(&p, e))?;
        }
        let lock = root.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                return Err(CliError::Workspace(format!(
                    "workspace {} is locked by another run; remove {} if no run is active",
                    root.display(),
                    lock.display()
                )));
            }
            Err(e) => return Err(CliError::io(&lock, e)),
        }
        Ok(Workspace {
            root: root.to_path_buf(),
            lock,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn data(&self, file: &str) -> PathBuf {
        self.root.join("data").join(file)
    }

    pub fn model(&self, file: &str) -> PathBuf {
        self.root.join("models").join(file)
    }

    pub fn strengths(&self, file: &str) -> PathBuf {
        self.root.join("strengths").join(file)
    }

    pub fn report(&self, model: &str, file: &str) -> PathBuf {
        self.root.join("reports").join(model).join(file)
    }

    /// Path relative to the root, with `/` separators.
    pub fn relative(&self, path: &Path) -> String {
        let rel = path.strip_prefix(&self.root).unwrap_or(path);
        rel.components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/")
    }
}

impl Drop for Workspace {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}

/// Artifact names become file stems; reject anything that could escape the
/// workspace.
pub fn check_name(kind: &str, name: &str) -> CliResult<()> {
    let ok = !name.is_empty()
        && name != "."
        && name != ".."
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "invalid {kind} name `{name}`: use letters, digits, `-`, `_` or `.`"
        )))
    }
}

/// Outputs collected in memory and written together once the command has
/// succeeded, in insertion order.
#[derive(Debug, Default)]
pub struct Staged {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Staged {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, path: PathBuf, bytes: impl Into<Vec<u8>>) {
        self.files.push((path, bytes.into()));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    /// Fails before writing anything if an output exists and `force` is off.
    pub fn check(&self, force: bool) -> CliResult<()> {
        if force {
            return Ok(());
        }
        for (p, _) in &self.files {
            if p.exists() {
                return Err(CliError::usage(format!(
                    "{} already exists; pass --force to overwrite",
                    p.display()
                )));
            }
        }
        Ok(())
    }

    /// Write each file through a temporary sibling and rename it into place.
    pub fn commit(self) -> CliResult<()> {
        for (path, bytes) in self.files {
            write_atomic(&path, &bytes)?;
        }
        Ok(())
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_open_fails_until_the_first_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace::open(dir.path()).unwrap();
        let err = Workspace::open(dir.path()).unwrap_err();
        assert!(matches!(err, CliError::Workspace(_)));
        assert_eq!(err.exit_code(), 2);
        drop(ws);
        Workspace::open(dir.path()).unwrap();
    }

    #[test]
    fn layout_is_created() {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace::open(dir.path()).unwrap();
        for d in ["data", "models", "strengths", "reports"] {
            assert!(dir.path().join(d).is_dir());
        }
        assert_eq!(ws.relative(&ws.report("m", "a.csv")), "reports/m/a.csv");
    }

    #[test]
    fn names_cannot_escape() {
        for bad in ["", "..", "a/b", "a\\b", "x y"] {
            assert!(check_name("model", bad).is_err(), "{bad}");
        }
        check_name("model", "risk-v2.1").unwrap();
    }

    #[test]
    fn existing_outputs_need_force() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        fs::write(&p, "old").unwrap();
        let mut s = Staged::new();
        s.add(p.clone(), "new");
        assert_eq!(s.check(false).unwrap_err().exit_code(), 1);
        s.check(true).unwrap();
        s.commit().unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "new");
    }
}
