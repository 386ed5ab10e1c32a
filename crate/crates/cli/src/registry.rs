//! Maps short dataset names to files, cluster counts, and pinned checksums.
//!
//! The registry root is `$POCS_DATA_DIR` when set, `./data` otherwise. A
//! `registry.toml` in that directory replaces the built-in entries, which
//! cover the six benchmark datasets.

use std::env;
use std::fs;
use std::path::PathBuf;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::cli_error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
pub struct DatasetEntry {
    pub name: String,
    pub file: String,
    /// Cluster count the benchmark protocol uses for this dataset.
    pub k: usize,
    pub sha256: Option<String>,
    /// Coordinate columns to keep, for files with trailing label columns.
    pub columns: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
struct RegistryFile {
    dataset: Vec<DatasetEntry>,
}

#[derive(Debug)]
pub struct Registry {
    root: PathBuf,
    entries: Vec<DatasetEntry>,
}

fn builtin_entries() -> Vec<DatasetEntry> {
    let table: [(&str, usize, &str); 6] = [
        (
            "a1",
            20,
            "437ddb1be867b3c0abdf4da6d860c37bc042e12e9ce2c5a39b3f1d7c40b4180f",
        ),
        (
            "a2",
            35,
            "81add60af4aeeca5b6531c6d6cf500faad8df1c44f7a73a9a8deec6556b2bf57",
        ),
        (
            "s1",
            15,
            "ecce2f01fcce8f26a6ab0235f8c89c27814c8170303b21368f5abaca4b68a8f4",
        ),
        (
            "s2",
            15,
            "20afcf41055503f7febbb7258c9a05a7773519110a8ba0eb2d9949276b00d831",
        ),
        (
            "r15",
            15,
            "3f58ac2b76f7b74183b753877156b53abe6ac8f52cf9acc51ebcc6f1aa4891c9",
        ),
        (
            "aggregation",
            7,
            "6093abfe517a37a057d99fc0da8b14c041c34a3ccdfbe5ebcecfae191351583f",
        ),
    ];
    table
        .into_iter()
        .map(|(name, k, sha)| DatasetEntry {
            name: name.to_string(),
            file: format!("{name}.txt"),
            k,
            sha256: Some(sha.to_string()),
            columns: None,
        })
        .collect()
}

impl Registry {
    /// Loads the registry from the resolved data directory.
    pub fn load() -> CliResult<Registry> {
        let root = match env::var_os("POCS_DATA_DIR") {
            Some(dir) => PathBuf::from(dir),
            None => PathBuf::from("data"),
        };
        let config_path = root.join("registry.toml");
        let entries = if config_path.is_file() {
            let text = fs::read_to_string(&config_path)?;
            let parsed: RegistryFile = toml::from_str(&text)
                .map_err(|e| CliError::runtime(format!("{}: {e}", config_path.display())))?;
            parsed.dataset
        } else {
            builtin_entries()
        };
        Ok(Registry { root, entries })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn entry(&self, name: &str) -> CliResult<&DatasetEntry> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| {
            CliError::runtime(format!(
                "unknown dataset {name:?}; registry knows: {}",
                self.names().join(", ")
            ))
        })
    }

    /// Absolute path of a registered dataset, verified to exist. A checksum
    /// mismatch warns on stderr but does not fail: the data may be a newer
    /// revision of the benchmark file.
    pub fn resolve(&self, name: &str) -> CliResult<(PathBuf, &DatasetEntry)> {
        let entry = self.entry(name)?;
        let path = self.root.join(&entry.file);
        if !path.is_file() {
            return Err(CliError::runtime(format!(
                "dataset {name:?} not found: missing file {} (run scripts/fetch_datasets.sh \
                 or set POCS_DATA_DIR)",
                path.display()
            )));
        }
        if let Some(expected) = &entry.sha256 {
            let bytes = fs::read(&path)?;
            let actual = hex_digest(&bytes);
            if &actual != expected {
                eprintln!(
                    "warning: {} checksum {actual} differs from the pinned {expected}; \
                     results may not match the published tables",
                    path.display()
                );
            }
        }
        Ok((path, entry))
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
