use std::io::Write;
use std::path::Path;

use super::{fmt_real, open_lines, parse_error, parse_real, write_with};
use crate::error::Result;

/// One value per line, no header.
pub fn write_vector_csv(path: &Path, v: &[f64]) -> Result<()> {
    write_with(path, |w| {
        for x in v {
            writeln!(w, "{}", fmt_real(*x))?;
        }
        Ok(())
    })
}

/// Reads one value per line; blank lines and `#` comments are skipped.
pub fn read_vector_csv(path: &Path) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for line in open_lines(path)? {
        let (no, text) = line?;
        let t = text.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if t.contains(',') {
            return Err(parse_error(path, no, "expected a single value per line"));
        }
        out.push(parse_real(path, no, t)?);
    }
    Ok(out)
}

/// Comma-separated rows, no header.
pub fn write_matrix_csv<R: AsRef<[f64]>>(path: &Path, rows: &[R]) -> Result<()> {
    write_with(path, |w| {
        for row in rows {
            let line: Vec<String> = row.as_ref().iter().map(|x| fmt_real(*x)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    })
}

pub fn read_matrix_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in open_lines(path)? {
        let (no, text) = line?;
        let t = text.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let row = t
            .split(',')
            .map(|tok| parse_real(path, no, tok))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_error(
                    path,
                    no,
                    format!("row has {} fields, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn vector_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.csv");
        let v = vec![0.1, -1.0 / 3.0, 1e-300, f64::MAX, 0.0, -0.0, 12345.678];
        write_vector_csv(&p, &v).unwrap();
        let back = read_vector_csv(&p).unwrap();
        assert_eq!(back.len(), v.len());
        for (a, b) in v.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        let m = vec![vec![1.0, 2.5], vec![-3.0, 0.1]];
        write_matrix_csv(&p, &m).unwrap();
        assert_eq!(read_matrix_csv(&p).unwrap(), m);
    }

    #[test]
    fn parse_errors_carry_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "1.0\n\nabc\n").unwrap();
        match read_vector_csv(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        std::fs::write(&p, "1,2\n3\n").unwrap();
        assert!(read_matrix_csv(&p).is_err());
    }

    #[test]
    fn missing_file_names_path() {
        let err = read_vector_csv(Path::new("/nonexistent/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/x.csv"));
    }
}
