//! Plain-text file formats: 0/1 matrices, row weights and edge lists.

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

/// Parses one row per line of `'0'`/`'1'` characters. All lines must have
/// the same length; the trailing newline is optional.
pub fn parse_matrix_text(text: &str) -> Result<BinaryMatrix> {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let lines: Vec<&str> = text.split('\n').collect();
    let last = lines.len() - 1;
    for (k, raw) in lines.iter().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if k == last && line.is_empty() {
            break;
        }
        let mut row = Vec::with_capacity(line.len());
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '0' => row.push(0),
                '1' => row.push(1),
                other => {
                    return Err(Error::parse(
                        format!("line {}, column {}", k + 1, col + 1),
                        format!("unexpected character {other:?}"),
                    ))
                }
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::parse(
                    format!("line {}", k + 1),
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    BinaryMatrix::from_rows(&rows)
}

pub fn matrix_to_text(a: &BinaryMatrix) -> String {
    let mut out = String::with_capacity(a.rows() * (a.cols() + 1));
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.push(if a.get(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// One positive integer per line; blank lines are skipped.
pub fn parse_weights(text: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let w: u32 = line
            .parse()
            .map_err(|e| Error::parse(format!("line {}", k + 1), format!("{e}: {line:?}")))?;
        if w == 0 {
            return Err(Error::parse(
                format!("line {}", k + 1),
                "weights must be positive",
            ));
        }
        out.push(w);
    }
    Ok(out)
}

/// Edge list with one zero-based `u v` pair per line. Lines starting with
/// `#` are comments.
pub fn parse_edge_list(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ctx = || format!("line {}", k + 1);
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(ctx(), "expected two vertex indices"));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::parse(ctx(), format!("{e}: {s:?}")))
        };
        edges.push((parse(fields[0])?, parse(fields[1])?));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_text_example() {
        let a = parse_matrix_text("101\n110\n").unwrap();
        assert_eq!(a.to_rows(), vec![vec![1, 0, 1], vec![1, 1, 0]]);
        let b = parse_matrix_text("101\n110").unwrap();
        assert_eq!(a, b);
        assert_eq!(matrix_to_text(&a), "101\n110\n");
    }

    #[test]
    fn matrix_text_errors() {
        let err = parse_matrix_text("101\n11\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse_matrix_text("10x\n").unwrap_err().to_string();
        assert!(err.contains("column 3"), "{err}");
    }

    #[test]
    fn crlf_accepted() {
        let a = parse_matrix_text("10\r\n01\r\n").unwrap();
        assert_eq!(a.to_rows(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn empty_text_is_empty_matrix() {
        let a = parse_matrix_text("").unwrap();
        assert_eq!((a.rows(), a.cols()), (0, 0));
    }

    #[test]
    fn weights() {
        assert_eq!(parse_weights("3\n1\n\n7\n").unwrap(), vec![3, 1, 7]);
        assert!(parse_weights("0\n").is_err());
        assert!(parse_weights("x\n").is_err());
    }

    #[test]
    fn edge_list() {
        assert_eq!(
            parse_edge_list("# path\n0 1\n1 2\n").unwrap(),
            vec![(0, 1), (1, 2)]
        );
        assert!(parse_edge_list("0 1 2\n").is_err());
    }
}
