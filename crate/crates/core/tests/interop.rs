mod common;

use std::io::Cursor;

use qtopt::jpeg::{decode_image, decode_ycbcr, encode_image, EncodedJpeg, QuantTable};
use qtopt::PixelImage;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zune_core::colorspace::ColorSpace;
use zune_core::options::DecoderOptions;
use zune_jpeg::JpegDecoder;

fn reference_decode(jpeg: &EncodedJpeg, cs: ColorSpace) -> Vec<u8> {
    let opts = DecoderOptions::default().jpeg_set_out_colorspace(cs);
    let mut d = JpegDecoder::new_with_options(Cursor::new(jpeg.bytes()), opts);
    d.decode().expect("reference decoder accepts the stream")
}

fn max_diff(a: &[u8], b: &[u8]) -> u8 {
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y)).max().unwrap_or(0)
}

fn component_space(channels: u8) -> ColorSpace {
    if channels == 1 {
        ColorSpace::Luma
    } else {
        ColorSpace::YCbCr
    }
}

/// Worst per-sample difference in component space and in RGB.
fn check(img: &PixelImage, seed: u64, n: usize) -> (u8, u8) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0, 0);
    for _ in 0..n {
        let (g, qf) = common::random_genes(&mut rng);
        let l = QuantTable::from_i32(&g[..64]).unwrap();
        let c = QuantTable::from_i32(&g[64..]).unwrap();
        let jpeg = encode_image(img, &l, &c, qf).unwrap();
        let ours = decode_ycbcr(&jpeg).unwrap();
        let theirs = reference_decode(&jpeg, component_space(img.channels()));
        assert_eq!(theirs.len(), ours.samples().len());
        worst.0 = worst.0.max(max_diff(ours.samples(), &theirs));
        if img.channels() == 3 {
            let rgb = decode_image(&jpeg).unwrap();
            worst.1 = worst.1.max(max_diff(rgb.samples(), &reference_decode(&jpeg, ColorSpace::RGB)));
        }
    }
    worst
}

#[test]
fn reference_decoder_agrees_on_color() {
    let img = common::textured(48, 40, 3, 21);
    let (component, rgb) = check(&img, 1, 20);
    assert!(component <= 1, "max component difference {component}");
    // The reference converts to RGB in fixed point; allow its rounding on top.
    assert!(rgb <= 4, "max RGB difference {rgb}");
}

#[test]
fn reference_decoder_agrees_on_gray() {
    let img = common::textured(37, 19, 1, 22);
    let (component, _) = check(&img, 2, 10);
    assert!(component <= 1, "max sample difference {component}");
}

#[test]
fn annex_k_tables_agree() {
    let img = common::textured(64, 64, 3, 23);
    for qf in [10, 50, 75, 95] {
        let jpeg = encode_image(&img, &QuantTable::annex_k_luma(), &QuantTable::annex_k_chroma(), qf).unwrap();
        let ours = decode_ycbcr(&jpeg).unwrap();
        let theirs = reference_decode(&jpeg, ColorSpace::YCbCr);
        assert!(max_diff(ours.samples(), &theirs) <= 1, "qf {qf}");
    }
}
