//! Report emission: deterministic JSON (and optional CSV), plus a manifest
//! binding the outputs to the inputs' content hashes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::tasks::{TaskError, TaskOptions};

#[derive(Serialize)]
pub struct ManifestInput {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct Manifest {
    pub command: String,
    pub inputs: Vec<ManifestInput>,
    pub field: String,
    pub max_degree: usize,
    pub valid_to: usize,
    pub budget: usize,
    pub outputs: Vec<String>,
}

pub struct Emitter {
    out_dir: PathBuf,
    command: String,
    opts_field: String,
    max_degree: usize,
    budget: usize,
    csv: bool,
    inputs: Vec<ManifestInput>,
    outputs: Vec<String>,
}

impl Emitter {
    pub fn new(opts: &TaskOptions, command: &str) -> Emitter {
        Emitter {
            out_dir: PathBuf::from(&opts.out_dir),
            command: command.to_string(),
            opts_field: opts.field.clone(),
            max_degree: opts.max_degree,
            budget: opts.budget,
            csv: opts.output == "csv",
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn read_input(&mut self, path: &str) -> Result<String, TaskError> {
        let text = fs::read_to_string(path)
            .map_err(|e| TaskError::Io(format!("cannot read {path}: {e}")))?;
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        self.inputs.push(ManifestInput {
            path: path.to_string(),
            sha256: format!("{:x}", hasher.finalize()),
        });
        Ok(text)
    }

    pub fn want_csv(&self) -> bool {
        self.csv
    }

    fn ensure_dir(&self) -> Result<(), TaskError> {
        fs::create_dir_all(&self.out_dir)
            .map_err(|e| TaskError::Io(format!("cannot create output directory: {e}")))
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), TaskError> {
        self.ensure_dir()?;
        let path = self.out_dir.join(name);
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| TaskError::Io(format!("serialization failed: {e}")))?;
        write_file(&path, text.as_bytes())?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, header: &str, rows: &[String]) -> Result<(), TaskError> {
        self.ensure_dir()?;
        let path = self.out_dir.join(name);
        let mut text = String::new();
        text.push_str(header);
        text.push('\n');
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        write_file(&path, text.as_bytes())?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    /// Writes the manifest; every emitted homology figure carries the
    /// window through `valid_to`.
    pub fn finish(mut self) -> Result<(), TaskError> {
        self.ensure_dir()?;
        let manifest = Manifest {
            command: self.command.clone(),
            inputs: std::mem::take(&mut self.inputs),
            field: self.opts_field.clone(),
            max_degree: self.max_degree,
            valid_to: self.max_degree - 2,
            budget: self.budget,
            outputs: std::mem::take(&mut self.outputs),
        };
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| TaskError::Io(format!("serialization failed: {e}")))?;
        write_file(&self.out_dir.join("manifest.json"), text.as_bytes())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), TaskError> {
    let mut f = fs::File::create(path)
        .map_err(|e| TaskError::Io(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(bytes)
        .map_err(|e| TaskError::Io(format!("cannot write {}: {e}", path.display())))
}
