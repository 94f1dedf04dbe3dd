use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{DpcdError, Result};
use crate::matrix::Matrix;

pub const MATRIX_MAGIC: &[u8; 8] = b"DPCDMAT1";

/// Dense matrix from comma-separated text, one sample per row.
///
/// A first record that does not parse as numbers is taken as a header.
pub fn read_matrix_csv<R: Read>(mut reader: R) -> Result<Matrix> {
    let mut text = Vec::new();
    reader.read_to_end(&mut text)?;
    // The csv reader does not count skipped blank lines, so derive line
    // numbers from byte offsets.
    let line_at = |pos: Option<&csv::Position>, fallback: usize| {
        pos.map_or(fallback, |p| {
            let mut b = p.byte() as usize;
            while b < text.len() && matches!(text[b], b'\n' | b'\r') {
                b += 1;
            }
            1 + text[..b].iter().filter(|&&c| c == b'\n').count()
        })
    };
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_slice());
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, record) in csv.records().enumerate() {
        let record = record.map_err(|e| {
            DpcdError::parse(line_at(e.position(), idx + 1), e.to_string())
        })?;
        let line = line_at(record.position(), idx + 1);
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if idx == 0 => continue,
            Err(e) => return Err(DpcdError::parse(line, format!("bad number: {e}"))),
        };
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(DpcdError::parse(line, format!("non-finite value {v}")));
        }
        match cols {
            Some(c) if c != values.len() => {
                return Err(DpcdError::parse(line, format!("expected {c} columns, found {}", values.len())))
            }
            _ => cols = Some(values.len()),
        }
        data.extend(values);
        rows += 1;
    }
    if rows == 0 {
        return Err(DpcdError::parse(0, "no data rows"));
    }
    Matrix::from_row_major(rows, cols.unwrap_or(0), data)
}

pub fn write_matrix_csv<W: Write>(m: &Matrix, mut out: W) -> Result<()> {
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// `DPCDMAT1`, then rows and cols as little-endian `u64`, then row-major
/// little-endian `f64`.
pub fn read_matrix_binary<R: Read>(mut reader: R) -> Result<Matrix> {
    let mut header = [0u8; 24];
    reader
        .read_exact(&mut header)
        .map_err(|_| DpcdError::parse(0, "truncated matrix header"))?;
    if &header[..8] != MATRIX_MAGIC {
        return Err(DpcdError::parse(0, "missing DPCDMAT1 magic"));
    }
    let rows = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
    let len = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| DpcdError::parse(0, "matrix size overflows"))?;
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() != len {
        return Err(DpcdError::parse(
            0,
            format!("expected {len} payload bytes for {rows}x{cols}, found {}", bytes.len()),
        ));
    }
    let data: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if data.iter().any(|v| !v.is_finite()) {
        return Err(DpcdError::NonFinite("matrix entry".into()));
    }
    Matrix::from_row_major(rows, cols, data)
}

pub fn write_matrix_binary<W: Write>(m: &Matrix, mut out: W) -> Result<()> {
    out.write_all(MATRIX_MAGIC)?;
    out.write_all(&(m.rows() as u64).to_le_bytes())?;
    out.write_all(&(m.cols() as u64).to_le_bytes())?;
    for v in m.as_slice() {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads either format, choosing by the magic bytes.
pub fn load_matrix(path: &Path) -> Result<Matrix> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(MATRIX_MAGIC) {
        read_matrix_binary(bytes.as_slice())
    } else {
        read_matrix_csv(bytes.as_slice())
    }
}
