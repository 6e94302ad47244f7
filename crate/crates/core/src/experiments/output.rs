use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{FitRecord, SeriesRecord};

pub const CSV_HEADER: &str = "experiment,p,k,n,sample,quantity,value,wall_ms";

/// `<stem>.fits.json` next to the CSV file.
pub fn fits_path(csv: &Path) -> PathBuf {
    csv.with_extension("fits.json")
}

fn output_error(path: &Path, source: std::io::Error) -> Error {
    Error::Output {
        path: path.to_path_buf(),
        source,
    }
}

/// Creates the batch output directory and its parents.
pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| output_error(dir, e))
}

/// Fails early if `path` cannot be created; leaves existing files untouched.
pub(crate) fn probe_writable(path: &Path) -> Result<()> {
    if path.is_dir() {
        return Err(output_error(path, std::io::Error::other("is a directory")));
    }
    let existed = path.exists();
    OpenOptions::new()
        .append(true)
        .create(true)
        .open(path)
        .map_err(|e| output_error(path, e))?;
    if !existed {
        fs::remove_file(path).map_err(|e| output_error(path, e))?;
    }
    Ok(())
}

pub fn csv_string(records: &[SeriesRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{:.16e},{},{},{},{},{:.16e},{:.3}",
            r.experiment, r.p, r.k, r.n, r.sample, r.quantity, r.value, r.wall_ms
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_csv(path: &Path, records: &[SeriesRecord]) -> Result<()> {
    fs::write(path, csv_string(records)).map_err(|e| output_error(path, e))
}

pub fn write_fits_json(path: &Path, fits: &[FitRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| output_error(path, e))?;
    serde_json::to_writer_pretty(file, fits).map_err(|e| output_error(path, e.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::ExperimentId;

    #[test]
    fn csv_layout() {
        let r = SeriesRecord {
            experiment: ExperimentId::E1,
            p: 0.5,
            k: 4,
            n: 16,
            sample: -1,
            quantity: "schatten",
            value: 1.0 / 3.0,
            wall_ms: 1.25,
        };
        let text = csv_string(&[r]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "E1,5.0000000000000000e-1,4,16,-1,schatten,3.3333333333333331e-1,1.250"
        );
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn fits_path_replaces_extension() {
        assert_eq!(
            fits_path(Path::new("out/e1.csv")),
            PathBuf::from("out/e1.fits.json")
        );
    }

    #[test]
    fn probe_rejects_missing_directory() {
        assert!(probe_writable(Path::new("/nonexistent-dir/x.csv")).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        probe_writable(&path).unwrap();
        assert!(!path.exists());
        assert!(probe_writable(dir.path()).is_err());
    }
}
