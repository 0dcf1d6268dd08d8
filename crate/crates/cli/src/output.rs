//! CSV plot data and the run manifest. Floats are rendered with 12
//! significant digits, comma separators, LF endings.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

pub struct Csv {
    name: String,
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(name: &str, header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Csv { name: name.to_string(), buf, columns: header.len() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns, "row width mismatch in {}", self.name);
        let mut first = true;
        for c in cells {
            if !first {
                self.buf.push(',');
            }
            first = false;
            match c {
                Cell::Float(v) => {
                    let _ = write!(self.buf, "{v:.11e}");
                }
                Cell::Int(v) => {
                    let _ = write!(self.buf, "{v}");
                }
                Cell::Text(v) => self.buf.push_str(&v),
            }
        }
        self.buf.push('\n');
    }
}

/// Collects per-scenario CSV files and writes them with the manifest.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<Csv>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Self {
        Outputs { dir: dir.to_path_buf(), files: Vec::new() }
    }

    pub fn csv(&mut self, name: &str, header: &[&str]) -> &mut Csv {
        self.files.push(Csv::new(name, header));
        self.files.last_mut().unwrap()
    }

    pub fn write_all(&self, scenario: &str, seed: u64, wall_ms: u128) -> std::io::Result<Vec<String>> {
        fs::create_dir_all(&self.dir)?;
        let mut written = Vec::new();
        for f in &self.files {
            let path = self.dir.join(format!("{}.csv", f.name));
            fs::write(&path, &f.buf)?;
            written.push(format!("{}.csv", f.name));
        }
        let mut manifest = String::new();
        let _ = writeln!(manifest, "scenario = {scenario}");
        let _ = writeln!(manifest, "seed = {seed}");
        let _ = writeln!(manifest, "version = {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(manifest, "wall_ms = {wall_ms}");
        for w in &written {
            let _ = writeln!(manifest, "output = {w}");
        }
        fs::write(self.dir.join("manifest.txt"), manifest)?;
        Ok(written)
    }
}
