//! Deterministic file output: 17-significant-digit CSV numerics, atomic
//! write-then-rename, and a checksummed manifest.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One float, 17 significant digits, `.` decimal separator. Scientific
/// form keeps the representation unique and diffable across platforms.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug)]
pub struct OutputError {
    pub path: PathBuf,
    pub source: io::Error,
}

impl std::fmt::Display for OutputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "i/o failure on {}: {}", self.path.display(), self.source)
    }
}

impl std::error::Error for OutputError {}

/// Manifest row for one emitted file.
#[derive(Debug, Clone, Serialize)]
pub struct ManifestFile {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub name: String,
    pub command: String,
    pub seed: u64,
    pub files: Vec<ManifestFile>,
}

/// Collects files for one scenario run and writes them atomically.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<ManifestFile>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, OutputError> {
        fs::create_dir_all(root).map_err(|source| OutputError {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes `name` under the output root via a temp file and rename, and
    /// records its checksum for the manifest.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), OutputError> {
        let bytes = contents.as_bytes();
        self.write_atomic(name, bytes)?;
        self.files.push(ManifestFile {
            name: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    fn write_atomic(&self, name: &str, bytes: &[u8]) -> Result<(), OutputError> {
        let final_path = self.root.join(name);
        let tmp_path = self.root.join(format!(".tmp.{name}"));
        let err = |path: &Path, source: io::Error| OutputError {
            path: path.to_path_buf(),
            source,
        };
        fs::write(&tmp_path, bytes).map_err(|e| err(&tmp_path, e))?;
        fs::rename(&tmp_path, &final_path).map_err(|e| err(&final_path, e))?;
        Ok(())
    }

    /// Writes `manifest.json` listing every file with its checksum, sorted
    /// by name so reruns are byte-identical.
    pub fn finish(mut self, name: &str, command: &str, seed: u64) -> Result<Manifest, OutputError> {
        self.files.sort_by(|a, b| a.name.cmp(&b.name));
        let manifest = Manifest {
            name: name.to_string(),
            command: command.to_string(),
            seed,
            files: self.files.clone(),
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        self.write_atomic("manifest.json", format!("{json}\n").as_bytes())?;
        Ok(manifest)
    }
}

/// CSV builder with a fixed header and `\n` line endings.
pub struct CsvBuilder {
    buffer: String,
    columns: usize,
}

impl CsvBuilder {
    pub fn new(header: &[&str]) -> Self {
        let mut buffer = header.join(",");
        buffer.push('\n');
        Self {
            buffer,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns, "row arity must match header");
        self.buffer.push_str(&fields.join(","));
        self.buffer.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buffer
    }
}
