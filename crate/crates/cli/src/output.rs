use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Owns the output directory and remembers every file written to it.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root)?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let mut w = csv::Writer::from_path(self.root.join(name))?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut f = fs::File::create(self.root.join(name))?;
        serde_json::to_writer_pretty(&mut f, value)?;
        f.write_all(b"\n")?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

/// Shortest representation that reads back to the same double.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x == 0.0 {
        "0.0".into()
    } else {
        format!("{x:?}")
    }
}

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub kind: &'static str,
    pub time: f64,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: C,
    pub notes: Vec<String>,
    pub skipped: Vec<Skipped>,
    pub files: Vec<String>,
}

impl<C: Serialize> Manifest<C> {
    pub fn new(command: &'static str, config: C) -> Self {
        Manifest {
            tool: "qwalk",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            notes: Vec::new(),
            skipped: Vec::new(),
            files: Vec::new(),
        }
    }

    /// Writes `manifest.json` listing every file written so far.
    pub fn finish(mut self, out: &mut OutputDir) -> Result<(), CliError> {
        self.files = out.written().to_vec();
        out.json("manifest.json", &self)
    }
}
