use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::dct::Block;

/// Example luminance table from Annex K of the JPEG standard, row-major.
pub const ANNEX_K_LUMA: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Example chrominance table from Annex K of the JPEG standard, row-major.
pub const ANNEX_K_CHROMA: [u16; 64] = [
    17, 18, 24, 47, 99, 99, 99, 99, //
    18, 21, 26, 66, 99, 99, 99, 99, //
    24, 26, 56, 99, 99, 99, 99, 99, //
    47, 66, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99,
];

pub const MIN_QUALITY: i32 = 1;
pub const MAX_QUALITY: i32 = 99;

/// An 8×8 table of quantiser step sizes in row-major order, every entry in `[1, 255]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u16>", into = "Vec<u16>")]
pub struct QuantTable([u16; 64]);

impl QuantTable {
    pub fn new(entries: [u16; 64]) -> Result<Self> {
        for (index, &v) in entries.iter().enumerate() {
            if !(1..=255).contains(&v) {
                return Err(Error::TableEntryOutOfRange { index, value: v as i32 });
            }
        }
        Ok(Self(entries))
    }

    pub fn from_i32(entries: &[i32]) -> Result<Self> {
        if entries.len() != 64 {
            return Err(Error::InvalidCandidate(format!("table needs 64 entries, got {}", entries.len())));
        }
        let mut out = [0u16; 64];
        for (index, (&v, o)) in entries.iter().zip(out.iter_mut()).enumerate() {
            if !(1..=255).contains(&v) {
                return Err(Error::TableEntryOutOfRange { index, value: v });
            }
            *o = v as u16;
        }
        Ok(Self(out))
    }

    /// Table with every entry equal to `value`.
    pub fn flat(value: u16) -> Result<Self> {
        Self::new([value; 64])
    }

    pub fn annex_k_luma() -> Self {
        Self(ANNEX_K_LUMA)
    }

    pub fn annex_k_chroma() -> Self {
        Self(ANNEX_K_CHROMA)
    }

    pub fn entries(&self) -> &[u16; 64] {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.0[row * 8 + col]
    }
}

impl TryFrom<Vec<u16>> for QuantTable {
    type Error = Error;

    fn try_from(v: Vec<u16>) -> Result<Self> {
        let arr: [u16; 64] = v
            .try_into()
            .map_err(|v: Vec<u16>| Error::InvalidCandidate(format!("table needs 64 entries, got {}", v.len())))?;
        Self::new(arr)
    }
}

impl From<QuantTable> for Vec<u16> {
    fn from(t: QuantTable) -> Self {
        t.0.to_vec()
    }
}

/// Scaling factor `S` of the IJG quality convention.
pub fn quality_scale(qf: i32) -> Result<i32> {
    if !(MIN_QUALITY..=MAX_QUALITY).contains(&qf) {
        return Err(Error::QualityOutOfRange(qf));
    }
    Ok(if qf >= 50 { 200 - 2 * qf } else { 5000 / qf })
}

/// Scales one table entry: `floor((S·Q + 50) / 100)` clamped to `[1, 255]`.
pub fn scale_entry(q: u16, scale: i32) -> u16 {
    ((scale as i64 * q as i64 + 50) / 100).clamp(1, 255) as u16
}

/// Applies the quality factor to both tables.
pub fn scale_tables(lqt: &QuantTable, cqt: &QuantTable, qf: i32) -> Result<(QuantTable, QuantTable)> {
    let s = quality_scale(qf)?;
    Ok((lqt.map(|q| scale_entry(q, s)), cqt.map(|q| scale_entry(q, s))))
}

impl QuantTable {
    fn map(&self, f: impl Fn(u16) -> u16) -> Self {
        let mut out = self.0;
        for v in out.iter_mut() {
            *v = f(*v);
        }
        Self(out)
    }
}

/// Quantised levels of one block, natural (row-major) order.
pub type Levels = [i32; 64];

/// `round(F / Q)` elementwise, halves rounded away from zero.
pub fn quantise<T: Real>(coeffs: &Block<T>, qt: &QuantTable) -> Levels {
    let mut out = [0i32; 64];
    for ((o, &f), &q) in out.iter_mut().zip(coeffs.0.iter()).zip(qt.0.iter()) {
        *o = (f / T::lit(q as f64)).round().to_i32().unwrap_or(0);
    }
    out
}

/// `L × Q` elementwise.
pub fn dequantise<T: Real>(levels: &Levels, qt: &QuantTable) -> Block<T> {
    let mut out = Block::zero();
    for ((o, &l), &q) in out.0.iter_mut().zip(levels.iter()).zip(qt.0.iter()) {
        *o = T::lit(l as f64 * q as f64);
    }
    out
}
