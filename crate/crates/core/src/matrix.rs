//! Feature matrices and their two on-disk formats.
//!
//! A [`FeatureMatrix`] is an N x d row-major matrix of finite sample feature
//! vectors. Two file formats are supported:
//!
//! * **csv** — headerless comma-separated decimal text, one sample per line.
//!   Values are written with shortest round-trip formatting, so
//!   `load(save(m))` reparses to exactly the same floats.
//! * **bin** — magic bytes `MKAF`, version `u16 = 1`, `n_samples: u64`,
//!   `n_features: u64`, then `n*d` little-endian IEEE-754 f64 values
//!   row-major. Bit-exact round trip.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Cap on element count accepted from a binary header, guarding against
/// absurd allocations from corrupt files.
const MAX_ELEMENTS: u64 = 1 << 28;

const MAGIC: &[u8; 4] = b"MKAF";
const VERSION: u16 = 1;

/// Row-major matrix of sample feature vectors.
///
/// Invariants: `n_samples >= 1`, `n_features >= 1`,
/// `data.len() == n_samples * n_features`, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n_samples: usize,
    n_features: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    /// Builds a matrix from row-major data, validating the invariants.
    pub fn new(n_samples: usize, n_features: usize, data: Vec<f64>) -> Result<Self> {
        if n_samples == 0 || n_features == 0 {
            return Err(Error::Empty(format!(
                "matrix must have at least one sample and one feature (got {n_samples}x{n_features})"
            )));
        }
        if data.len() != n_samples * n_features {
            return Err(Error::Dimension(format!(
                "data length {} does not match {n_samples}x{n_features}",
                data.len()
            )));
        }
        for (idx, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / n_features,
                    col: idx % n_features,
                });
            }
        }
        Ok(Self {
            n_samples,
            n_features,
            data,
        })
    }

    /// Builds a matrix from explicit rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("no rows".into()));
        }
        let width = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(Error::Malformed(format!(
                    "row {i} has {} columns, expected {width}",
                    r.len()
                )));
            }
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), width, data)
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Row-major backing storage.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Feature vector of sample `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_features + j]
    }
}

/// On-disk format selector. `Auto` sniffs by extension:
/// `.csv` -> csv, `.mkaf` -> bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Bin,
    Auto,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "bin" => Ok(Format::Bin),
            "auto" => Ok(Format::Auto),
            other => Err(Error::InvalidParameter(format!(
                "unknown format {other:?} (expected csv, bin, or auto)"
            ))),
        }
    }
}

fn sniff(path: &Path) -> Result<Format> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("csv") => Ok(Format::Csv),
        Some("mkaf") => Ok(Format::Bin),
        _ => Err(Error::InvalidParameter(format!(
            "cannot infer format from {}; pass csv or bin explicitly",
            path.display()
        ))),
    }
}

/// Loads a feature matrix from disk. CSV input is treated as headerless;
/// use [`load_csv`] to skip a header line.
pub fn load_matrix(path: impl AsRef<Path>, format: Format) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let format = match format {
        Format::Auto => sniff(path)?,
        f => f,
    };
    let file = File::open(path)?;
    match format {
        Format::Csv => load_csv(BufReader::new(file), false),
        Format::Bin => load_bin(BufReader::new(file)),
        Format::Auto => unreachable!(),
    }
}

/// Parses CSV rows into a matrix. Rejects ragged rows and non-finite
/// tokens outright; a partial matrix is never returned.
pub fn load_csv<R: BufRead>(reader: R, skip_header: bool) -> Result<FeatureMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if skip_header && lineno == 0 {
            continue;
        }
        let line = line.trim_end_matches('\r');
        if line.is_empty() && rows.is_empty() {
            continue;
        }
        if line.is_empty() {
            // allow trailing blank lines only
            continue;
        }
        let row = rows.len();
        let mut values = Vec::with_capacity(width.max(1));
        for (col, token) in line.split(',').enumerate() {
            let token = token.trim();
            let v: f64 = token.parse().map_err(|_| {
                Error::Malformed(format!(
                    "row {row}, column {col}: cannot parse {token:?} as a number"
                ))
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
            values.push(v);
        }
        if rows.is_empty() {
            width = values.len();
        } else if values.len() != width {
            return Err(Error::Malformed(format!(
                "row {row} has {} columns, expected {width}",
                values.len()
            )));
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(Error::Empty("csv contains no data rows".into()));
    }
    FeatureMatrix::from_rows(&rows)
}

/// Reads the binary `MKAF` format.
pub fn load_bin<R: Read>(mut reader: R) -> Result<FeatureMatrix> {
    let mut magic = [0u8; 4];
    reader
        .read_exact(&mut magic)
        .map_err(|_| Error::Empty("bin file truncated before magic".into()))?;
    if &magic != MAGIC {
        return Err(Error::Malformed("bad magic bytes (not an MKAF file)".into()));
    }
    let mut buf2 = [0u8; 2];
    reader
        .read_exact(&mut buf2)
        .map_err(|_| Error::Malformed("bin file truncated in header".into()))?;
    let version = u16::from_le_bytes(buf2);
    if version != VERSION {
        return Err(Error::Malformed(format!(
            "unsupported MKAF version {version}"
        )));
    }
    let mut buf8 = [0u8; 8];
    reader
        .read_exact(&mut buf8)
        .map_err(|_| Error::Malformed("bin file truncated in header".into()))?;
    let n = u64::from_le_bytes(buf8);
    reader
        .read_exact(&mut buf8)
        .map_err(|_| Error::Malformed("bin file truncated in header".into()))?;
    let d = u64::from_le_bytes(buf8);
    let count = n
        .checked_mul(d)
        .filter(|&c| c > 0 && c <= MAX_ELEMENTS)
        .ok_or_else(|| Error::Malformed(format!("implausible shape {n}x{d}")))?;
    let mut data = Vec::with_capacity(count as usize);
    for _ in 0..count {
        reader
            .read_exact(&mut buf8)
            .map_err(|_| Error::Malformed("bin file truncated in payload".into()))?;
        data.push(f64::from_le_bytes(buf8));
    }
    if reader.read(&mut [0u8; 1])? != 0 {
        return Err(Error::Malformed("trailing bytes after payload".into()));
    }
    FeatureMatrix::new(n as usize, d as usize, data)
}

/// Saves a feature matrix to disk. `Auto` sniffs the target extension.
pub fn save_matrix(m: &FeatureMatrix, path: impl AsRef<Path>, format: Format) -> Result<()> {
    let path = path.as_ref();
    let format = match format {
        Format::Auto => sniff(path)?,
        f => f,
    };
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    match format {
        Format::Csv => write_csv(m, &mut writer)?,
        Format::Bin => write_bin(m, &mut writer)?,
        Format::Auto => unreachable!(),
    }
    writer.flush()?;
    Ok(())
}

/// Writes headerless CSV with shortest round-trip decimal formatting.
pub fn write_csv<W: Write>(m: &FeatureMatrix, w: &mut W) -> Result<()> {
    for i in 0..m.n_samples() {
        let row = m.row(i);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                w.write_all(b",")?;
            }
            write!(w, "{v}")?;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes the binary `MKAF` layout.
pub fn write_bin<W: Write>(m: &FeatureMatrix, w: &mut W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(m.n_samples() as u64).to_le_bytes())?;
    w.write_all(&(m.n_features() as u64).to_le_bytes())?;
    for v in m.data() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}
