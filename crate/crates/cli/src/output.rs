//! Content files and the run manifest.
//!
//! Everything written here is a pure function of the command and its
//! parameters; wall time and thread count go to a separate timing file so
//! content hashes stay reproducible.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::error::CliResult;

#[derive(Clone, Debug, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub format: &'static str,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<P: Serialize, C: Serialize> {
    pub command: &'static str,
    pub parameters: P,
    pub modulus: u32,
    pub orderings: Orderings,
    pub files: Vec<FileEntry>,
    pub certificate: C,
    pub timing: String,
}

#[derive(Debug, Serialize)]
pub struct Orderings {
    pub elements: &'static str,
    pub characters: &'static str,
}

impl Default for Orderings {
    fn default() -> Self {
        Orderings { elements: "lex-xy", characters: "gamma-asc" }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct Timing {
    wall_time_ms: u128,
    threads: usize,
}

/// Collects files written into one output directory.
pub struct OutputSet {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputSet {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutputSet { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_with<F>(&mut self, name: &str, format: &'static str, body: F) -> CliResult<()>
    where
        F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    {
        let mut w = BufWriter::new(File::create(self.path(name))?);
        body(&mut w)?;
        w.flush()?;
        self.files.push(FileEntry { name: name.to_string(), format });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        self.write_with(name, "json", |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)
        })
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    /// Writes the timing file; it is deliberately left out of `files`.
    pub fn write_timing(&self, name: &str, elapsed: Duration) -> CliResult<()> {
        let t = Timing { wall_time_ms: elapsed.as_millis(), threads: rayon::current_num_threads() };
        let mut s = serde_json::to_string_pretty(&t).expect("plain struct serializes");
        s.push('\n');
        fs::write(self.path(name), s)?;
        Ok(())
    }
}

pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("certificate serializes"));
}
