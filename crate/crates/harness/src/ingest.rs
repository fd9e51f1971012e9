//! PNG/BMP ingestion into [`PixelImage`].

use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};
use qtopt::PixelImage;

use crate::error::{HarnessError, Result};

/// Loads an 8-bit PNG or BMP. Gray images keep one channel; anything with
/// colour becomes RGB (alpha is dropped).
pub fn load_image(path: impl AsRef<Path>) -> Result<PixelImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    decode_image_bytes(&bytes).map_err(|e| match e {
        HarnessError::UnsupportedFormat { detail, .. } => {
            HarnessError::UnsupportedFormat { path: path.to_path_buf(), detail }
        }
        HarnessError::CorruptImage { detail, .. } => HarnessError::CorruptImage { path: path.to_path_buf(), detail },
        other => other,
    })
}

/// [`load_image`] on an in-memory file.
pub fn decode_image_bytes(bytes: &[u8]) -> Result<PixelImage> {
    let unsupported = |detail: String| HarnessError::UnsupportedFormat { path: "<memory>".into(), detail };
    let format = image::guess_format(bytes).map_err(|e| unsupported(e.to_string()))?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Bmp) {
        return Err(unsupported(format!("{format:?}; expected PNG or BMP")));
    }
    let reader = ImageReader::with_format(std::io::Cursor::new(bytes), format);
    let img = reader
        .decode()
        .map_err(|e| HarnessError::CorruptImage { path: "<memory>".into(), detail: e.to_string() })?;
    let (w, h) = (img.width(), img.height());
    let pixels = match img {
        DynamicImage::ImageLuma8(g) => PixelImage::new(w, h, 1, g.into_raw()),
        DynamicImage::ImageLumaA8(_) => PixelImage::new(w, h, 1, img.to_luma8().into_raw()),
        DynamicImage::ImageRgb8(rgb) => PixelImage::new(w, h, 3, rgb.into_raw()),
        DynamicImage::ImageRgba8(_) => PixelImage::new(w, h, 3, img.to_rgb8().into_raw()),
        other => return Err(unsupported(format!("{:?} samples; expected 8-bit", other.color()))),
    }?;
    Ok(pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn png(img: DynamicImage) -> Vec<u8> {
        let mut out = std::io::Cursor::new(Vec::new());
        img.write_to(&mut out, ImageFormat::Png).unwrap();
        out.into_inner()
    }

    #[test]
    fn white_pixel() {
        let bytes = png(DynamicImage::ImageRgb8(image::RgbImage::from_pixel(1, 1, image::Rgb([255, 255, 255]))));
        let img = decode_image_bytes(&bytes).unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (1, 1, 3));
        assert_eq!(img.samples(), &[255, 255, 255]);
    }

    #[test]
    fn gray_stays_single_channel() {
        let bytes = png(DynamicImage::ImageLuma8(image::GrayImage::from_pixel(3, 2, image::Luma([9]))));
        assert_eq!(decode_image_bytes(&bytes).unwrap().channels(), 1);
    }

    #[test]
    fn rejects_non_images_and_16_bit() {
        assert!(matches!(decode_image_bytes(b"hello, world"), Err(HarnessError::UnsupportedFormat { .. })));
        let deep = png(DynamicImage::ImageLuma16(image::ImageBuffer::from_pixel(2, 2, image::Luma([7u16]))));
        assert!(matches!(decode_image_bytes(&deep), Err(HarnessError::UnsupportedFormat { .. })));
        let mut cut = png(DynamicImage::ImageLuma8(image::GrayImage::from_pixel(8, 8, image::Luma([1]))));
        cut.truncate(cut.len() / 2);
        assert!(decode_image_bytes(&cut).is_err());
    }
}
