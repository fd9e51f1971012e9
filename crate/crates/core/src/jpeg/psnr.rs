use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::PixelImage;

use super::color::rgb_to_ycbcr;

/// PSNR reported for identical images, keeping `λ/PSNR` finite.
pub const PSNR_SENTINEL: f64 = 400.0;

/// Which samples enter the mean squared error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsnrChannels {
    /// Every stored sample (R, G and B pooled, or the gray plane).
    #[default]
    Pooled,
    /// BT.601 luma only.
    Luma,
}

/// Mean squared error over all samples.
pub fn mse(a: &PixelImage, b: &PixelImage) -> Result<f64> {
    check_shape(a, b)?;
    Ok(mse_slices(a.samples(), b.samples()))
}

fn check_shape(a: &PixelImage, b: &PixelImage) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels() {
        return Err(Error::ShapeMismatch { left: a.shape(), right: b.shape() });
    }
    Ok(())
}

fn mse_slices(a: &[u8], b: &[u8]) -> f64 {
    let sum: u64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    sum as f64 / a.len() as f64
}

fn from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        PSNR_SENTINEL
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    }
}

/// Peak signal-to-noise ratio in dB with all channels pooled.
pub fn psnr(original: &PixelImage, decoded: &PixelImage) -> Result<f64> {
    psnr_with(original, decoded, PsnrChannels::Pooled)
}

pub fn psnr_with(original: &PixelImage, decoded: &PixelImage, channels: PsnrChannels) -> Result<f64> {
    check_shape(original, decoded)?;
    let m = match channels {
        PsnrChannels::Pooled => mse_slices(original.samples(), decoded.samples()),
        PsnrChannels::Luma => {
            let [ya, ..] = rgb_to_ycbcr(original);
            let [yb, ..] = rgb_to_ycbcr(decoded);
            mse_slices(&ya, &yb)
        }
    };
    Ok(from_mse(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_sentinel() {
        let a = PixelImage::filled(4, 4, 3, 10).unwrap();
        assert_eq!(psnr(&a, &a).unwrap(), PSNR_SENTINEL);
    }

    #[test]
    fn off_by_one_everywhere() {
        let a = PixelImage::filled(4, 4, 3, 10).unwrap();
        let b = PixelImage::filled(4, 4, 3, 11).unwrap();
        let p = psnr(&a, &b).unwrap();
        assert!((p - 48.130_803_608_679_1).abs() < 1e-9, "{p}");
    }

    #[test]
    fn black_vs_white_is_zero() {
        let a = PixelImage::filled(2, 3, 1, 0).unwrap();
        let b = PixelImage::filled(2, 3, 1, 255).unwrap();
        assert_eq!(psnr(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn shape_mismatch() {
        let a = PixelImage::filled(2, 2, 3, 0).unwrap();
        let b = PixelImage::filled(2, 2, 1, 0).unwrap();
        assert!(matches!(psnr(&a, &b), Err(Error::ShapeMismatch { .. })));
    }
}
