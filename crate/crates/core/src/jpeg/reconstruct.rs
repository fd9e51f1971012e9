//! Levels → pixels. Shared by the decoder and by the encoder's reconstruction
//! shortcut, so both yield identical images for the same coefficients.

use crate::image::PixelImage;

use super::color::ycbcr_to_rgb_pixel;
use super::dct::{Block, DctPlan};
use super::quant::Levels;

/// Dequantises and inverse-transforms a grid of blocks into an 8-bit plane,
/// cropped to `plane_w × plane_h`.
pub(crate) fn reconstruct_plane(
    levels: &[Levels],
    steps: &[u16; 64],
    blocks_w: usize,
    plane_w: usize,
    plane_h: usize,
    plan: &DctPlan<f64>,
) -> Vec<u8> {
    let mut plane = vec![0u8; plane_w * plane_h];
    let blocks_h = plane_h.div_ceil(8);
    let used_w = plane_w.div_ceil(8);
    for by in 0..blocks_h {
        for bx in 0..used_w {
            let lv = &levels[by * blocks_w + bx];
            let mut pixels = [0u8; 64];
            if lv[1..].iter().all(|&l| l == 0) {
                let v = sample(lv[0] as f64 * steps[0] as f64 / 8.0);
                pixels = [v; 64];
            } else {
                let mut coeffs = Block::<f64>::zero();
                for ((c, &l), &q) in coeffs.0.iter_mut().zip(lv.iter()).zip(steps.iter()) {
                    *c = l as f64 * q as f64;
                }
                let spatial = plan.inverse(&coeffs);
                for (p, &s) in pixels.iter_mut().zip(spatial.0.iter()) {
                    *p = sample(s);
                }
            }
            let x0 = bx * 8;
            let y0 = by * 8;
            let w = (plane_w - x0).min(8);
            let h = (plane_h - y0).min(8);
            for r in 0..h {
                let dst = (y0 + r) * plane_w + x0;
                plane[dst..dst + w].copy_from_slice(&pixels[r * 8..r * 8 + w]);
            }
        }
    }
    plane
}

#[inline]
fn sample(v: f64) -> u8 {
    (v + 128.0).round().clamp(0.0, 255.0) as u8
}

/// Builds an RGB (three planes) or grayscale (one plane) image from
/// full-resolution component planes.
pub(crate) fn planes_to_image(planes: &[Vec<u8>], width: u32, height: u32) -> PixelImage {
    let n = width as usize * height as usize;
    let samples = if planes.len() == 1 {
        planes[0][..n].to_vec()
    } else {
        let (y, cb, cr) = (&planes[0], &planes[1], &planes[2]);
        let mut out = Vec::with_capacity(n * 3);
        for i in 0..n {
            out.extend_from_slice(&ycbcr_to_rgb_pixel(y[i], cb[i], cr[i]));
        }
        out
    };
    let channels = if planes.len() == 1 { 1 } else { 3 };
    PixelImage::new(width, height, channels, samples).expect("planes match dimensions")
}
