//! Binary spinor checkpoints.
//!
//! Layout (little-endian):
//!
//! ```text
//! offset  size  field
//! 0       8     magic "DIRSCAT1"
//! 8       4     version (u32, currently 1)
//! 12      4     n_per_axis (u32)
//! 16      8     box_length (f64)
//! 24      8     time (f64)
//! 32      4     content flag (u32)
//! 36      4     payload layout descriptor (u32, 0 = interleaved re/im f64,
//!               component-major, x-fastest node order)
//! 40      4·n³·16  payload
//! ```
//!
//! The header fully determines the payload length; reads are bit-exact.

use std::path::Path;

use crate::error::Error;
use crate::field::{Representation, SpinorField};
use crate::grid::FourierGrid;
use crate::scalar::C;
use crate::Result;

pub const MAGIC: &[u8; 8] = b"DIRSCAT1";
pub const VERSION: u32 = 1;
const LAYOUT_INTERLEAVED: u32 = 0;
const HEADER_LEN: usize = 40;

/// What the payload holds: the full physical-space state or one branch's
/// spectral interaction profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckpointContent {
    PsiPhysical,
    ProfilePlusSpectral,
    ProfileMinusSpectral,
}

impl CheckpointContent {
    fn flag(self) -> u32 {
        match self {
            CheckpointContent::PsiPhysical => 0,
            CheckpointContent::ProfilePlusSpectral => 1,
            CheckpointContent::ProfileMinusSpectral => 2,
        }
    }

    fn from_flag(flag: u32) -> Result<Self> {
        match flag {
            0 => Ok(CheckpointContent::PsiPhysical),
            1 => Ok(CheckpointContent::ProfilePlusSpectral),
            2 => Ok(CheckpointContent::ProfileMinusSpectral),
            other => Err(Error::Format(format!("unknown content flag {other}"))),
        }
    }

    fn representation(self) -> Representation {
        match self {
            CheckpointContent::PsiPhysical => Representation::Physical,
            _ => Representation::Spectral,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckpointHeader {
    pub n_per_axis: u32,
    pub box_length: f64,
    pub time: f64,
    pub content: CheckpointContent,
}

pub fn write_checkpoint(
    field: &SpinorField<f64>,
    time: f64,
    content: CheckpointContent,
    path: &Path,
) -> Result<()> {
    if field.representation() != content.representation() {
        return Err(Error::RepresentationMismatch {
            expected: match content.representation() {
                Representation::Physical => "physical",
                Representation::Spectral => "spectral",
            },
            got: match field.representation() {
                Representation::Physical => "physical",
                Representation::Spectral => "spectral",
            },
        });
    }
    let n = field.grid.n_per_axis();
    let nodes = field.grid.node_count();
    let mut bytes = Vec::with_capacity(HEADER_LEN + 4 * nodes * 16);
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&VERSION.to_le_bytes());
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    bytes.extend_from_slice(&field.grid.box_length().to_le_bytes());
    bytes.extend_from_slice(&time.to_le_bytes());
    bytes.extend_from_slice(&content.flag().to_le_bytes());
    bytes.extend_from_slice(&LAYOUT_INTERLEAVED.to_le_bytes());
    for comp in &field.comps {
        for v in comp {
            bytes.extend_from_slice(&v.re.to_le_bytes());
            bytes.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    super::atomic_write(path, &bytes)
}

pub fn read_checkpoint(path: &Path) -> Result<(SpinorField<f64>, CheckpointHeader)> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format("file shorter than header".into()));
    }
    if &bytes[0..8] != MAGIC {
        return Err(Error::Format("bad magic tag".into()));
    }
    let u32_at = |off: usize| u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
    let f64_at = |off: usize| f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
    let version = u32_at(8);
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let n = u32_at(12) as usize;
    let box_length = f64_at(16);
    let time = f64_at(24);
    let content = CheckpointContent::from_flag(u32_at(32))?;
    let layout = u32_at(36);
    if layout != LAYOUT_INTERLEAVED {
        return Err(Error::Format(format!("unknown layout descriptor {layout}")));
    }
    let nodes = n * n * n;
    let expected = HEADER_LEN + 4 * nodes * 16;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "truncated payload: expected {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let grid = FourierGrid::make(n, box_length)?;
    let mut field = SpinorField::zeros(&grid, content.representation());
    let mut off = HEADER_LEN;
    for comp in &mut field.comps {
        for v in comp.iter_mut() {
            let re = f64_at(off);
            let im = f64_at(off + 8);
            *v = C::new(re, im);
            off += 16;
        }
    }
    Ok((
        field,
        CheckpointHeader {
            n_per_axis: n as u32,
            box_length,
            time,
            content,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn random_state() -> SpinorField<f64> {
        let grid = FourierGrid::make(8, 5.0).unwrap();
        SpinorField::random_smooth(&grid, 77, 2.0).physical()
    }

    #[test]
    fn round_trip_is_bitwise_exact() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("state.ckpt");
        let field = random_state();
        write_checkpoint(&field, 1.25, CheckpointContent::PsiPhysical, &path).unwrap();
        let (back, header) = read_checkpoint(&path).unwrap();
        assert_eq!(header.time, 1.25);
        assert_eq!(header.n_per_axis, 8);
        assert_eq!(header.content, CheckpointContent::PsiPhysical);
        for c in 0..4 {
            for (a, b) in field.comps[c].iter().zip(&back.comps[c]) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
        // No temp file left behind.
        let leftovers: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with('.'))
            .collect();
        assert!(leftovers.is_empty());
    }

    #[test]
    fn corrupted_magic_is_detected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("state.ckpt");
        write_checkpoint(&random_state(), 0.0, CheckpointContent::PsiPhysical, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[0] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_checkpoint(&path), Err(Error::Format(_))));
    }

    #[test]
    fn future_version_is_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("state.ckpt");
        write_checkpoint(&random_state(), 0.0, CheckpointContent::PsiPhysical, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[8..12].copy_from_slice(&(VERSION + 1).to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            read_checkpoint(&path),
            Err(Error::UnsupportedVersion(v)) if v == VERSION + 1
        ));
    }

    #[test]
    fn truncation_is_detected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("state.ckpt");
        write_checkpoint(&random_state(), 0.0, CheckpointContent::PsiPhysical, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 7]).unwrap();
        assert!(matches!(read_checkpoint(&path), Err(Error::Format(_))));
    }
}
