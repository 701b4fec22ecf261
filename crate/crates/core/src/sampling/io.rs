//! Batch files.
//!
//! * CSV: header `u1,...,ud` (copula) or `x1,...,xd` (mixture), one row per
//!   draw, values with 17 significant digits.
//! * Binary: 16-byte header of a 4-byte magic, `d` as little-endian `u32`
//!   and `n` as little-endian `u64`, then `n * d` little-endian `f64` values
//!   in row-major order.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BatchKind, SampleBatch};
use crate::copula::MAX_DIM;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const BINARY_MAGIC_COPULA: [u8; 4] = *b"CTLU";
pub const BINARY_MAGIC_MIXTURE: [u8; 4] = *b"CTLX";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchFormat {
    Csv,
    Binary,
}

impl BatchFormat {
    /// `.bin` means binary, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("bin") => BatchFormat::Binary,
            _ => BatchFormat::Csv,
        }
    }
}

impl std::str::FromStr for BatchFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(BatchFormat::Csv),
            "bin" | "binary" => Ok(BatchFormat::Binary),
            _ => Err(Error::parse(s, "expected csv or binary")),
        }
    }
}

fn prefix(kind: BatchKind) -> char {
    match kind {
        BatchKind::Copula => 'u',
        BatchKind::Mixture => 'x',
    }
}

impl<T: Real> SampleBatch<T> {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let p = prefix(self.kind());
        w.write_record((1..=self.dim()).map(|j| format!("{p}{j}")))
            .map_err(csv_error)?;
        for row in self.rows() {
            w.write_record(row.iter().map(|x| format!("{:.16e}", x.as_f64())))
                .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers().map_err(csv_error)?.clone();
        let d = header.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::Format(format!("header has {d} columns")));
        }
        let kind = match header.get(0).and_then(|h| h.chars().next()) {
            Some('u') => BatchKind::Copula,
            Some('x') => BatchKind::Mixture,
            _ => {
                return Err(Error::Format(format!(
                    "unrecognized header `{}`",
                    header.as_slice()
                )))
            }
        };
        let p = prefix(kind);
        for (j, h) in header.iter().enumerate() {
            if h.trim() != format!("{p}{}", j + 1) {
                return Err(Error::Format(format!(
                    "column {} is named `{h}`, expected {p}{}",
                    j + 1,
                    j + 1
                )));
            }
        }
        let mut data = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(csv_error)?;
            if rec.len() != d {
                return Err(Error::Format(format!(
                    "row {} has {} fields, expected {d}",
                    i + 1,
                    rec.len()
                )));
            }
            for field in rec.iter() {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(field, format!("not a number (row {})", i + 1)))?;
                data.push(T::lit(v));
            }
        }
        SampleBatch::from_rows(kind, d, data)
    }

    pub fn write_binary<W: Write>(&self, out: W) -> Result<()> {
        let mut w = BufWriter::new(out);
        let magic = match self.kind() {
            BatchKind::Copula => BINARY_MAGIC_COPULA,
            BatchKind::Mixture => BINARY_MAGIC_MIXTURE,
        };
        w.write_all(&magic)?;
        w.write_all(&(self.dim() as u32).to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        for x in self.data() {
            w.write_all(&x.as_f64().to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(input: R) -> Result<Self> {
        let mut r = BufReader::new(input);
        let mut header = [0u8; 16];
        r.read_exact(&mut header)
            .map_err(|_| Error::Format("binary header shorter than 16 bytes".into()))?;
        let kind = match &header[..4] {
            m if m == BINARY_MAGIC_COPULA => BatchKind::Copula,
            m if m == BINARY_MAGIC_MIXTURE => BatchKind::Mixture,
            m => return Err(Error::Format(format!("bad magic {m:?}"))),
        };
        let d = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
        let n = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
        if d == 0 || d > MAX_DIM || n == 0 {
            return Err(Error::Format(format!("bad shape d = {d}, n = {n}")));
        }
        let len = n
            .checked_mul(d)
            .ok_or_else(|| Error::Format("shape overflows".into()))?;
        let mut data = Vec::with_capacity(len.min(1 << 24));
        let mut buf = [0u8; 8];
        for i in 0..len {
            r.read_exact(&mut buf)
                .map_err(|_| Error::Format(format!("truncated after {i} of {len} values")))?;
            data.push(T::lit(f64::from_le_bytes(buf)));
        }
        if r.read(&mut buf)? != 0 {
            return Err(Error::Format(
                "trailing bytes after the declared rows".into(),
            ));
        }
        SampleBatch::from_rows(kind, d, data)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// Writes a batch to `path` in the given format.
pub fn write_batch<T: Real>(
    batch: &SampleBatch<T>,
    path: &Path,
    format: BatchFormat,
) -> Result<()> {
    let file = std::fs::File::create(path)?;
    match format {
        BatchFormat::Csv => batch.write_csv(file),
        BatchFormat::Binary => batch.write_binary(file),
    }
}

/// Reads a batch, recognizing the binary format by its magic.
pub fn read_batch<T: Real>(path: &Path) -> Result<SampleBatch<T>> {
    let bytes = std::fs::read(path)?;
    if bytes.len() >= 4 && (bytes[..4] == BINARY_MAGIC_COPULA || bytes[..4] == BINARY_MAGIC_MIXTURE)
    {
        SampleBatch::read_binary(&bytes[..])
    } else {
        SampleBatch::read_csv(&bytes[..])
    }
}
