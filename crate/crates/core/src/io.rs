//! Atomic file output: JSON, RFC-4180 CSV, and a binary container for
//! complex arrays.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

const MAGIC: &[u8; 8] = b"GDIAGBIN";
const FORMAT_VERSION: u32 = 1;

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    write_atomic(path, &bytes)
}

/// Shortest round-trip scientific form used in all tables.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Layout: 8-byte magic, `u32` format version, `u64` header length, JSON
/// header, then `re, im` pairs as little-endian `f64`.
pub fn write_container(path: &Path, header: &serde_json::Value, data: &[Complex64]) -> Result<()> {
    let head = serde_json::to_vec(header)?;
    let mut bytes = Vec::with_capacity(20 + head.len() + 16 * data.len());
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    bytes.extend_from_slice(&(head.len() as u64).to_le_bytes());
    bytes.extend_from_slice(&head);
    for v in data {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    write_atomic(path, &bytes)
}

pub fn read_container(path: &Path) -> Result<(serde_json::Value, Vec<Complex64>)> {
    let bytes = std::fs::read(path)?;
    let bad = |m: &str| Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, m.to_string()));
    if bytes.len() < 20 || &bytes[..8] != MAGIC {
        return Err(bad("not a container file"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return Err(bad("unsupported container version"));
    }
    let hlen = u64::from_le_bytes(bytes[12..20].try_into().expect("8 bytes")) as usize;
    let body = bytes.get(20..20 + hlen).ok_or_else(|| bad("truncated header"))?;
    let header: serde_json::Value = serde_json::from_slice(body)?;
    let payload = &bytes[20 + hlen..];
    if payload.len() % 16 != 0 {
        return Err(bad("payload is not a whole number of complex values"));
    }
    let data = payload
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
            )
        })
        .collect();
    Ok((header, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn container_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bin");
        let data = vec![Complex64::new(1.5, -2.0), Complex64::new(f64::MIN_POSITIVE, 3e300)];
        let head = serde_json::json!({"kind": "signal", "n": 2});
        write_container(&p, &head, &data).unwrap();
        let (h, d) = read_container(&p).unwrap();
        assert_eq!(h, head);
        assert_eq!(d, data);
    }

    #[test]
    fn csv_quotes_and_crlf() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_csv(&p, &["a", "b"], vec![vec!["1".to_string(), "x,y".to_string()]]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,b\r\n1,\"x,y\"\r\n");
    }
}
