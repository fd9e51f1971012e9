//! Full-range BT.601 colour conversion as used by JFIF.

use crate::image::PixelImage;

#[inline]
fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

#[inline]
pub fn rgb_to_ycbcr_pixel(r: u8, g: u8, b: u8) -> [u8; 3] {
    let (r, g, b) = (r as f64, g as f64, b as f64);
    [
        to_u8(0.299 * r + 0.587 * g + 0.114 * b),
        to_u8(-0.168_736 * r - 0.331_264 * g + 0.5 * b + 128.0),
        to_u8(0.5 * r - 0.418_688 * g - 0.081_312 * b + 128.0),
    ]
}

#[inline]
pub fn ycbcr_to_rgb_pixel(y: u8, cb: u8, cr: u8) -> [u8; 3] {
    let (y, cb, cr) = (y as f64, cb as f64 - 128.0, cr as f64 - 128.0);
    [
        to_u8(y + 1.402 * cr),
        to_u8(y - 0.344_136 * cb - 0.714_136 * cr),
        to_u8(y + 1.772 * cb),
    ]
}

/// Splits an image into Y, Cb and Cr planes at full resolution (4:4:4).
///
/// A grayscale image yields its samples as Y and constant 128 chroma.
pub fn rgb_to_ycbcr(image: &PixelImage) -> [Vec<u8>; 3] {
    let n = image.width() as usize * image.height() as usize;
    let mut y = Vec::with_capacity(n);
    let mut cb = Vec::with_capacity(n);
    let mut cr = Vec::with_capacity(n);
    if image.channels() == 1 {
        y.extend_from_slice(image.samples());
        cb.resize(n, 128);
        cr.resize(n, 128);
    } else {
        for px in image.samples().chunks_exact(3) {
            let [a, b, c] = rgb_to_ycbcr_pixel(px[0], px[1], px[2]);
            y.push(a);
            cb.push(b);
            cr.push(c);
        }
    }
    [y, cb, cr]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_is_fixed_point() {
        assert_eq!(rgb_to_ycbcr_pixel(128, 128, 128), [128, 128, 128]);
        assert_eq!(ycbcr_to_rgb_pixel(128, 128, 128), [128, 128, 128]);
    }

    #[test]
    fn black() {
        assert_eq!(rgb_to_ycbcr_pixel(0, 0, 0), [0, 128, 128]);
    }

    #[test]
    fn pure_red() {
        // Y = 76.245, Cb = 84.97, Cr = 255.5 -> clamp
        assert_eq!(rgb_to_ycbcr_pixel(255, 0, 0), [76, 85, 255]);
    }

    #[test]
    fn grayscale_planes() {
        let img = PixelImage::new(2, 1, 1, vec![10, 200]).unwrap();
        let [y, cb, cr] = rgb_to_ycbcr(&img);
        assert_eq!(y, vec![10, 200]);
        assert_eq!(cb, vec![128, 128]);
        assert_eq!(cr, vec![128, 128]);
    }
}
