//! Plain-text mesh exchange and CSV matrix dumps.
//!
//! Mesh format:
//!
//! ```text
//! vertices N
//! x y            (N lines)
//! triangles M
//! i j k          (M lines, 0-based)
//! boundary L
//! b0 b1 ... bL-1
//! ```
//!
//! Coordinates are written in shortest round-trip form, so parsing a written
//! mesh reproduces every coordinate bit for bit.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    writeln!(out, "vertices {}", mesh.vertices.len()).unwrap();
    for [x, y] in &mesh.vertices {
        writeln!(out, "{x:?} {y:?}").unwrap();
    }
    writeln!(out, "triangles {}", mesh.triangles.len()).unwrap();
    for [i, j, k] in &mesh.triangles {
        writeln!(out, "{i} {j} {k}").unwrap();
    }
    writeln!(out, "boundary {}", mesh.boundary_loop.len()).unwrap();
    let loop_line: Vec<String> = mesh.boundary_loop.iter().map(|b| b.to_string()).collect();
    writeln!(out, "{}", loop_line.join(" ")).unwrap();
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            let t = line.trim();
            if !t.is_empty() {
                return Ok((i + 1, t));
            }
        }
        Err(Error::MeshFormat {
            line: 0,
            message: "unexpected end of input".into(),
        })
    }

    fn header(&mut self, keyword: &str) -> Result<usize> {
        let (line, text) = self.next_line()?;
        let mut parts = text.split_whitespace();
        if parts.next() != Some(keyword) {
            return Err(Error::MeshFormat {
                line,
                message: format!("expected '{keyword} <count>'"),
            });
        }
        let count = parts.next().and_then(|c| c.parse().ok()).ok_or(Error::MeshFormat {
            line,
            message: format!("missing count after '{keyword}'"),
        })?;
        if parts.next().is_some() {
            return Err(Error::MeshFormat {
                line,
                message: "trailing tokens".into(),
            });
        }
        Ok(count)
    }
}

fn parse_fields<T: std::str::FromStr>(line: usize, text: &str, expected: usize) -> Result<Vec<T>> {
    let fields: Vec<T> = text
        .split_whitespace()
        .map(|t| t.parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::MeshFormat {
            line,
            message: format!("cannot parse '{text}'"),
        })?;
    if fields.len() != expected {
        return Err(Error::MeshFormat {
            line,
            message: format!("expected {expected} fields, found {}", fields.len()),
        });
    }
    Ok(fields)
}

/// Parses and validates a mesh.
pub fn parse_mesh(text: &str) -> Result<Mesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let nv = lines.header("vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, t) = lines.next_line()?;
        let xy: Vec<f64> = parse_fields(line, t, 2)?;
        if !xy.iter().all(|v| v.is_finite()) {
            return Err(Error::MeshFormat {
                line,
                message: "non-finite coordinate".into(),
            });
        }
        vertices.push([xy[0], xy[1]]);
    }
    let nt = lines.header("triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (line, t) = lines.next_line()?;
        let ijk: Vec<usize> = parse_fields(line, t, 3)?;
        triangles.push([ijk[0], ijk[1], ijk[2]]);
    }
    let nb = lines.header("boundary")?;
    let (line, t) = lines.next_line()?;
    let boundary_loop: Vec<usize> = parse_fields(line, t, nb)?;
    if let Ok((line, _)) = lines.next_line() {
        return Err(Error::MeshFormat {
            line,
            message: "content after boundary line".into(),
        });
    }
    let mesh = Mesh {
        vertices,
        triangles,
        boundary_loop,
    };
    mesh.validate()?;
    Ok(mesh)
}

pub fn read_mesh(reader: impl BufRead) -> Result<Mesh> {
    let text = std::io::read_to_string(reader)?;
    parse_mesh(&text)
}

/// Dense entries, one CSV row per matrix row, 17 significant digits.
pub fn write_matrix_csv(matrix: &DenseMatrix, mut out: impl Write) -> Result<()> {
    for i in 0..matrix.rows() {
        let row: Vec<String> = matrix.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn parse_matrix_csv(text: &str) -> Result<DenseMatrix> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::MeshFormat {
                line: i + 1,
                message: "bad matrix entry".into(),
            })?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(Error::MeshFormat {
                    line: i + 1,
                    message: format!("expected {c} columns, found {}", row.len()),
                })
            }
            _ => {}
        }
        data.extend(row);
        rows += 1;
    }
    DenseMatrix::from_row_major(rows, cols.unwrap_or(0), data)
}
