//! Batch tensor files exchanged with training code.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! offset  size        field
//! 0       4           magic b"XIRP"
//! 4       2           version (u16) = 1
//! 6       1           element type (u8), 0 = f64
//! 7       1           rank (u8)
//! 8       8 * rank    dims (u64 each)
//! ...     8 * prod    payload, f64, row-major
//! ```
//!
//! Each tensor file `<file>` is accompanied by a JSON sidecar
//! `<file>.meta.json` ([`Sidecar`]) recording how the images were made.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::representation::{RepresentationKind, RepresentationMatrix};
use crate::scaling::ScalingParams;

pub const MAGIC: [u8; 4] = *b"XIRP";
pub const VERSION: u16 = 1;
pub const ELEMENT_F64: u8 = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.len() > u8::MAX as usize {
            return Err(Error::Tensor(format!("unsupported rank {}", dims.len())));
        }
        let expected = element_count(&dims)?;
        if expected != data.len() {
            return Err(Error::Tensor(format!(
                "shape {dims:?} needs {expected} elements, got {}",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    /// Stacks equally sized matrices into an `(N, S, S)` tensor.
    pub fn from_matrices(matrices: &[RepresentationMatrix]) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::Tensor("cannot stack an empty batch".into()));
        };
        let side = first.side();
        let mut data = Vec::with_capacity(matrices.len() * side * side);
        for m in matrices {
            if m.side() != side {
                return Err(Error::Tensor(format!("mixed sides {side} and {}", m.side())));
            }
            data.extend_from_slice(m.as_slice());
        }
        Self::new(vec![matrices.len(), side, side], data)
    }

    /// Splits an `(N, S, S)` tensor into matrices tagged with `kind`.
    pub fn to_matrices(&self, kind: RepresentationKind) -> Result<Vec<RepresentationMatrix>> {
        let [_, rows, cols] = self.dims[..] else {
            return Err(Error::Tensor(format!("expected rank 3, got shape {:?}", self.dims)));
        };
        if rows != cols {
            return Err(Error::Tensor(format!("images are {rows}x{cols}, not square")));
        }
        self.data
            .chunks_exact(rows * cols)
            .map(|chunk| RepresentationMatrix::from_raw(kind, rows, chunk.to_vec()))
            .collect()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&[ELEMENT_F64, self.dims.len() as u8])?;
        for &d in &self.dims {
            w.write_all(&(d as u64).to_le_bytes())?;
        }
        let mut payload = Vec::with_capacity(self.data.len() * 8);
        for v in &self.data {
            payload.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&payload)?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(8 + 8 * self.dims.len() + 8 * self.data.len());
        self.write_to(&mut buf).expect("write to memory");
        buf
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let truncated = || Error::Tensor("file is truncated".into());
        if bytes.len() < 8 {
            return Err(truncated());
        }
        if bytes[..4] != MAGIC {
            return Err(Error::Tensor("bad magic, not an XIRP tensor file".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(Error::Tensor(format!("unsupported version {version}")));
        }
        if bytes[6] != ELEMENT_F64 {
            return Err(Error::Tensor(format!("unsupported element type {}", bytes[6])));
        }
        let rank = bytes[7] as usize;
        let header_len = 8 + 8 * rank;
        if bytes.len() < header_len {
            return Err(truncated());
        }
        let dims = bytes[8..header_len]
            .chunks_exact(8)
            .map(|c| {
                let d = u64::from_le_bytes(c.try_into().expect("8-byte chunk"));
                usize::try_from(d).map_err(|_| Error::Tensor(format!("dimension {d} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        let count = element_count(&dims)?;
        let payload = &bytes[header_len..];
        let expected = count
            .checked_mul(8)
            .ok_or_else(|| Error::Tensor("payload size overflows".into()))?;
        if payload.len() != expected {
            return Err(Error::Tensor(format!(
                "payload has {} bytes, shape {dims:?} needs {expected}",
                payload.len()
            )));
        }
        let data = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        Self::new(dims, data)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

fn element_count(dims: &[usize]) -> Result<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::Tensor(format!("shape {dims:?} overflows")))
}

/// Metadata written next to every tensor file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub kind: RepresentationKind,
    /// Affine map applied before encoding; inverted after decoding.
    pub scaling: ScalingParams,
    /// Window length `d`, equal to the image side.
    pub window: usize,
    #[serde(default)]
    pub stride: Option<usize>,
    #[serde(default)]
    pub series_name: String,
    /// Length of the series after truncation.
    #[serde(default)]
    pub source_length: Option<usize>,
    #[serde(default)]
    pub truncate_limit: Option<usize>,
}

/// `<file>.meta.json` for a tensor file.
pub fn sidecar_path(tensor_path: impl AsRef<Path>) -> PathBuf {
    let mut s = tensor_path.as_ref().as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

impl Sidecar {
    pub fn save(&self, tensor_path: impl AsRef<Path>) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        fs::write(sidecar_path(tensor_path), json + "\n")?;
        Ok(())
    }

    pub fn load(tensor_path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(sidecar_path(tensor_path))?;
        Ok(serde_json::from_str(&text)?)
    }
}
