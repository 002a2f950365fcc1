//! CSV emission with a fixed, versioned schema line.
//!
//! Every result file starts with a `# schema: <name>` comment, then a header
//! row, then data rows; UTF-8, LF line endings, and a fixed column order.
//! Floats are printed in Rust's shortest round-trip form, so equal values
//! produce equal bytes and reruns diff clean.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// Builder for one CSV file.
pub struct CsvFile {
    name: String,
    buffer: String,
}

impl CsvFile {
    pub fn new(name: &str, schema: &str, header: &[&str]) -> Self {
        let mut buffer = String::new();
        let _ = writeln!(buffer, "# schema: {schema}");
        let _ = writeln!(buffer, "{}", header.join(","));
        CsvFile {
            name: name.to_string(),
            buffer,
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.buffer, "{}", fields.join(","));
    }

    /// Write the file into `dir` and return its name for the manifest.
    pub fn write(self, dir: &Path) -> std::io::Result<String> {
        let path: PathBuf = dir.join(&self.name);
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.buffer.as_bytes())?;
        Ok(self.name)
    }
}

/// Shortest-round-trip float formatting shared by all writers.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_schema_header_rows_with_lf() {
        let dir = std::env::temp_dir().join(format!("phlab-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let mut csv = CsvFile::new("t.csv", "t-v1", &["a", "b"]);
        csv.row(&["1".into(), fmt_f64(0.5)]);
        let name = csv.write(&dir).unwrap();
        let bytes = std::fs::read(dir.join(&name)).unwrap();
        assert_eq!(bytes, b"# schema: t-v1\na,b\n1,0.5\n");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
