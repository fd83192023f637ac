//! Plain-text and image file formats for problem and result bundles.
//!
//! Reals are written with 17 significant digits so every `f64` round-trips
//! exactly.

mod csv;
mod matrix_market;
mod pgm;

pub use csv::{read_matrix_csv, read_vector_csv, write_matrix_csv, write_vector_csv};
pub use matrix_market::{read_matrix_market, write_matrix_market};
pub use pgm::{read_pgm, write_pgm, PGM_MAXVAL};

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Round-trip formatting of a real, 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn write_with<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn open_lines(
    path: &Path,
) -> Result<impl Iterator<Item = Result<(usize, String)>> + '_> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(BufReader::new(file)
        .lines()
        .enumerate()
        .map(move |(i, l)| l.map(|l| (i + 1, l)).map_err(|e| Error::io(path, e))))
}

pub(crate) fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub(crate) fn parse_real(path: &Path, line: usize, token: &str) -> Result<f64> {
    token.trim().parse::<f64>().map_err(|_| {
        parse_error(
            path,
            line,
            format!("expected a real number, found {token:?}"),
        )
    })
}
