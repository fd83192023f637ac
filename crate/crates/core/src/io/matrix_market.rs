use std::io::Write;
use std::path::Path;

use super::{fmt_real, open_lines, parse_error, parse_real, write_with};
use crate::error::Result;
use crate::linop::{LinearOperator, SparseMatrix};

const HEADER: &str = "%%MatrixMarket matrix coordinate real general";

/// Coordinate format, 1-based indices, entries in row-major order.
pub fn write_matrix_market(path: &Path, m: &SparseMatrix) -> Result<()> {
    let s = m.shape();
    write_with(path, |w| {
        writeln!(w, "{HEADER}")?;
        writeln!(w, "{} {} {}", s.rows, s.cols, m.nnz())?;
        for (r, c, v) in m.triplets() {
            writeln!(w, "{} {} {}", r + 1, c + 1, fmt_real(v))?;
        }
        Ok(())
    })
}

/// Reads `coordinate real general` files; other variants are rejected.
pub fn read_matrix_market(path: &Path) -> Result<SparseMatrix> {
    let mut lines = open_lines(path)?;
    let (no, banner) = lines
        .next()
        .transpose()?
        .ok_or_else(|| parse_error(path, 1, "empty file"))?;
    let words: Vec<String> = banner
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_error(
            path,
            no,
            "missing %%MatrixMarket matrix banner",
        ));
    }
    if words[2..] != ["coordinate", "real", "general"] {
        return Err(parse_error(
            path,
            no,
            format!(
                "unsupported variant {:?}, need coordinate real general",
                words[2..].join(" ")
            ),
        ));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for line in lines {
        let (no, text) = line?;
        let t = text.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let tok: Vec<&str> = t.split_whitespace().collect();
        let index = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_error(path, no, format!("expected an index, found {s:?}")))
        };
        match size {
            None => {
                if tok.len() != 3 {
                    return Err(parse_error(path, no, "expected `rows cols nnz`"));
                }
                let dims = (index(tok[0])?, index(tok[1])?, index(tok[2])?);
                triplets.reserve(dims.2);
                size = Some(dims);
            }
            Some((rows, cols, _)) => {
                if tok.len() != 3 {
                    return Err(parse_error(path, no, "expected `row col value`"));
                }
                let (r, c) = (index(tok[0])?, index(tok[1])?);
                if r == 0 || c == 0 || r > rows || c > cols {
                    return Err(parse_error(
                        path,
                        no,
                        format!("entry ({r}, {c}) outside a {rows}x{cols} matrix"),
                    ));
                }
                triplets.push((r - 1, c - 1, parse_real(path, no, tok[2])?));
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or_else(|| parse_error(path, no, "missing size line"))?;
    if triplets.len() != nnz {
        return Err(parse_error(
            path,
            0,
            format!("size line declares {nnz} entries, found {}", triplets.len()),
        ));
    }
    SparseMatrix::from_triplets(rows, cols, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.mtx");
        let m = SparseMatrix::from_dense(&[
            vec![0.0, 0.1, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![-2.0, 0.0, 1.0 / 3.0],
        ])
        .unwrap();
        write_matrix_market(&p, &m).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n3 3 3\n"));
        assert_eq!(read_matrix_market(&p).unwrap(), m);
    }

    #[test]
    fn rejects_bad_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.mtx");
        for body in [
            "",
            "%%MatrixMarket matrix array real general\n1 1\n1\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n",
            "%%MatrixMarket matrix coordinate real general\n",
        ] {
            std::fs::write(&p, body).unwrap();
            assert!(read_matrix_market(&p).is_err(), "accepted {body:?}");
        }
    }

    #[test]
    fn comments_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.mtx");
        std::fs::write(
            &p,
            "%%MatrixMarket matrix coordinate real general\n% note\n2 3 1\n% x\n2 3 4.5\n",
        )
        .unwrap();
        let m = read_matrix_market(&p).unwrap();
        assert_eq!(m.to_dense(), vec![vec![0.0; 3], vec![0.0, 0.0, 4.5]]);
    }
}
