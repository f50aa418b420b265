//! Artifacts are rendered in memory, then written atomically next to their
//! final path and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// CSV rows with a mandatory header.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Table { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn into_artifact(self, name: &str) -> Artifact {
        let bytes = self.writer.into_inner().expect("in-memory flush");
        Artifact { name: name.to_string(), bytes }
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn json_artifact<T: Serialize>(name: &str, value: &T) -> Artifact {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    Artifact { name: name.to_string(), bytes }
}

/// Hash of a git blob object with SHA-256: `sha256("blob <len>\0" + content)`.
pub fn blob_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    hex::encode(h.finalize())
}

pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let target = dir.join(name);
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", target.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    // temp files are created 0600; results should read like ordinary files
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
    }
    tmp.persist(&target).map_err(|e| io(e.error))?;
    Ok(target)
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct FileRecord {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Everything needed to reproduce a run. No timestamps or host details, so
/// identical runs give identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub parallel_build: bool,
    pub config_sha256: String,
    pub files: Vec<FileRecord>,
    pub config: String,
}

impl Manifest {
    pub fn new(command: &str, cfg: &RunConfig, artifacts: &[Artifact]) -> Self {
        let config = cfg.to_string();
        Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parallel_build: h2sim::exec::Execution::parallel_available(),
            config_sha256: blob_hash(config.as_bytes()),
            files: artifacts
                .iter()
                .map(|a| FileRecord { name: a.name.clone(), bytes: a.bytes.len(), sha256: blob_hash(&a.bytes) })
                .collect(),
            config,
        }
    }

    pub fn file_name(command: &str) -> String {
        format!("manifest-{command}.json")
    }
}

/// Write all artifacts, then the manifest that describes them.
pub fn persist(dir: &Path, command: &str, cfg: &RunConfig, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut paths = artifacts
        .iter()
        .map(|a| write_atomic(dir, &a.name, &a.bytes))
        .collect::<Result<Vec<_>, _>>()?;
    let manifest = json_artifact(&Manifest::file_name(command), &Manifest::new(command, cfg, artifacts));
    paths.push(write_atomic(dir, &manifest.name, &manifest.bytes)?);
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blob_hash_matches_git_sha256_objects() {
        // `git hash-object --object-format=sha256` of an empty file
        assert_eq!(blob_hash(b""), "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813");
    }

    #[test]
    fn csv_quotes_embedded_commas() {
        let mut t = Table::new(&["a", "b"]);
        t.row(["1", "[1,2]"]);
        let a = t.into_artifact("x.csv");
        assert_eq!(String::from_utf8(a.bytes).unwrap(), "a,b\n1,\"[1,2]\"\n");
    }
}
