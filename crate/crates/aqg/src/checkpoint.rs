//! Binary checkpoint files.
//!
//! Layout, all little-endian:
//!
//! ```text
//! "AQGS" | version u32 | n1 u32 | n2 u32 | α β μ ν s t (f64) | n1·n2 × (re f64, im f64)
//! ```
//!
//! Coefficients are stored in the k₁-major transform order of
//! [`SpectralField`].

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use aqg_core::solver::Checkpoint;
use aqg_core::{Complex64, DissipParams, GridSpec, SpectralField};
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"AQGS";
pub const VERSION: u32 = 1;
/// Bytes before the first coefficient.
pub const HEADER_LEN: usize = 4 + 4 + 2 * 4 + 6 * 8;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint I/O: {0}")]
    Io(#[from] io::Error),
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,
    #[error("unsupported version {0} (expected {VERSION})")]
    UnsupportedVersion(u32),
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
}

/// Serializes a checkpoint into its file image.
pub fn encode(c: &Checkpoint) -> Vec<u8> {
    let grid = c.field.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * grid.len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.n1() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.n2() as u32).to_le_bytes());
    let p = &c.params;
    for v in [p.alpha, p.beta, p.mu, p.nu, p.s, c.time] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for z in c.field.coeffs() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], CheckpointError> {
        if self.bytes.len() < N {
            return Err(CheckpointError::Corrupt(String::from("truncated file")));
        }
        let (head, rest) = self.bytes.split_at(N);
        self.bytes = rest;
        Ok(head.try_into().expect("split length"))
    }

    fn u32(&mut self) -> Result<u32, CheckpointError> {
        self.take::<4>().map(u32::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64, CheckpointError> {
        self.take::<8>().map(f64::from_le_bytes)
    }
}

/// Parses a file image.
pub fn decode(bytes: &[u8]) -> Result<Checkpoint, CheckpointError> {
    let mut r = Reader { bytes };
    if r.take::<4>().map_err(|_| CheckpointError::BadMagic)? != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(CheckpointError::UnsupportedVersion(version));
    }
    let (n1, n2) = (r.u32()? as usize, r.u32()? as usize);
    let grid = GridSpec::new(n1, n2).map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
    let mut head = [0.0; 6];
    for v in &mut head {
        *v = r.f64()?;
    }
    let [alpha, beta, mu, nu, s, time] = head;
    let params = DissipParams::new(alpha, beta, mu, nu, s)
        .map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
    if !time.is_finite() {
        return Err(CheckpointError::Corrupt(format!("time {time}")));
    }
    let expected = 16 * grid.len();
    if r.bytes.len() != expected {
        return Err(CheckpointError::Corrupt(if r.bytes.len() < expected {
            String::from("truncated file")
        } else {
            String::from("trailing bytes")
        }));
    }
    let mut coeffs = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = r.f64()?;
        let im = r.f64()?;
        coeffs.push(Complex64::new(re, im));
    }
    let field = SpectralField::from_coeffs(grid, coeffs)
        .map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
    Ok(Checkpoint {
        params,
        time,
        field,
    })
}

pub fn write(path: &Path, c: &Checkpoint) -> Result<(), CheckpointError> {
    let mut file = fs::File::create(path)?;
    file.write_all(&encode(c))?;
    file.sync_all()?;
    Ok(())
}

pub fn read(path: &Path) -> Result<Checkpoint, CheckpointError> {
    decode(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use aqg_core::lemmas::{random_band_limited_field, FieldEnsembleSpec};

    fn sample() -> Checkpoint {
        let grid = GridSpec::new(16, 8).unwrap();
        Checkpoint {
            params: DissipParams::new(0.7, 0.8, 1.5, 0.5, 1.2).unwrap(),
            time: 0.375,
            field: random_band_limited_field(grid, &FieldEnsembleSpec::with_seed(9), 3),
        }
    }

    #[test]
    fn round_trip_is_bitwise() {
        let c = sample();
        let back = decode(&encode(&c)).unwrap();
        assert_eq!(back.time.to_bits(), c.time.to_bits());
        assert_eq!(back.params, c.params);
        for (a, b) in back.field.coeffs().iter().zip(c.field.coeffs()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn header_layout() {
        let bytes = encode(&sample());
        assert_eq!(&bytes[..4], b"AQGS");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 16);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 8);
        assert_eq!(bytes.len(), HEADER_LEN + 16 * 16 * 8);
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let bytes = encode(&sample());
        for cut in [bytes.len() - 1, HEADER_LEN, 20] {
            let err = decode(&bytes[..cut]).unwrap_err();
            assert!(err.to_string().contains("corrupt checkpoint"), "{err}");
        }
    }

    #[test]
    fn version_bump_is_rejected() {
        let mut bytes = encode(&sample());
        bytes[4] = 2;
        let err = decode(&bytes).unwrap_err();
        assert!(matches!(err, CheckpointError::UnsupportedVersion(2)));
        assert!(err.to_string().contains("unsupported version"));
    }

    #[test]
    fn bad_magic_is_rejected() {
        let mut bytes = encode(&sample());
        bytes[0] = b'X';
        assert!(matches!(decode(&bytes), Err(CheckpointError::BadMagic)));
        assert!(matches!(decode(b"AQ"), Err(CheckpointError::BadMagic)));
    }

    #[test]
    fn trailing_bytes_are_corrupt() {
        let mut bytes = encode(&sample());
        bytes.push(0);
        assert!(matches!(decode(&bytes), Err(CheckpointError::Corrupt(_))));
    }
}
