mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use qtopt::jpeg::{
    decode_bytes, decode_image, dequantise, encode_image, forward_dct, inverse_dct, inverse_zigzag, psnr, quantise,
    zigzag, Block, EncodedJpeg, QuantTable,
};
use qtopt::{DecodeErrorKind, PixelImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct evaluation of the 2-D DCT-II double sum.
fn dct_oracle(f: &[f64; 64]) -> [f64; 64] {
    let c = |r: usize| if r == 0 { 1.0 / 2f64.sqrt() } else { 1.0 };
    let mut out = [0.0; 64];
    for u in 0..8 {
        for v in 0..8 {
            let mut s = 0.0;
            for x in 0..8 {
                for y in 0..8 {
                    s += f[x * 8 + y]
                        * (((2 * x + 1) as f64 * u as f64 * PI) / 16.0).cos()
                        * (((2 * y + 1) as f64 * v as f64 * PI) / 16.0).cos();
                }
            }
            out[u * 8 + v] = 0.25 * c(u) * c(v) * s;
        }
    }
    out
}

fn random_block(rng: &mut ChaCha8Rng) -> Block<f64> {
    let mut b = Block::zero();
    for v in b.0.iter_mut() {
        *v = rng.random_range(-128..=127) as f64;
    }
    b
}

#[test]
fn forward_dct_matches_double_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let b = random_block(&mut rng);
        let fast = forward_dct(&b);
        let slow = dct_oracle(&b.0);
        for (a, e) in fast.0.iter().zip(slow.iter()) {
            assert!((a - e).abs() < 1e-10, "{a} vs {e}");
        }
    }
}

#[test]
fn dct_round_trip_thousand_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let b = random_block(&mut rng);
        worst = worst.max(inverse_dct(&forward_dct(&b)).max_abs_diff(&b));
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn constant_block_dc() {
    let b = forward_dct(&Block::constant(-5.0f64));
    assert!((b.0[0] + 40.0).abs() < 1e-12);
    assert!(b.0[1..].iter().all(|v| v.abs() < 1e-12));
}

proptest! {
    #[test]
    fn quantisation_error_bound(f in prop::array::uniform32(-1024.0f64..1024.0), q in 1u16..=255) {
        let mut b = Block::zero();
        b.0[..32].copy_from_slice(&f);
        b.0[32..].copy_from_slice(&f);
        let qt = QuantTable::flat(q).unwrap();
        let back: Block<f64> = dequantise(&quantise(&b, &qt), &qt);
        for (x, y) in b.0.iter().zip(back.0.iter()) {
            prop_assert!((x - y).abs() <= q as f64 / 2.0 + 1e-9);
        }
    }

    #[test]
    fn zigzag_is_bijective(v in prop::collection::vec(any::<i32>(), 64)) {
        let mut a = [0i32; 64];
        a.copy_from_slice(&v);
        prop_assert_eq!(inverse_zigzag(&zigzag(&a)), a);
    }

    #[test]
    fn psnr_is_symmetric(a in prop::collection::vec(any::<u8>(), 48), b in prop::collection::vec(any::<u8>(), 48)) {
        let x = PixelImage::new(4, 4, 3, a).unwrap();
        let y = PixelImage::new(4, 4, 3, b).unwrap();
        prop_assert_eq!(psnr(&x, &y).unwrap(), psnr(&y, &x).unwrap());
    }
}

#[test]
fn uniform_gray_survives_exactly() {
    let img = PixelImage::filled(8, 8, 3, 128).unwrap();
    let t = QuantTable::flat(16).unwrap();
    let jpeg = encode_image(&img, &t, &t, 50).unwrap();
    assert_eq!(decode_image(&jpeg).unwrap(), img);
    let img = PixelImage::filled(13, 21, 3, 96).unwrap();
    assert_eq!(decode_image(&encode_image(&img, &t, &t, 50).unwrap()).unwrap(), img);
}

#[test]
fn streams_are_framed_and_deterministic() {
    let img = common::textured(40, 24, 3, 3);
    let (l, c) = (QuantTable::annex_k_luma(), QuantTable::annex_k_chroma());
    let a = encode_image(&img, &l, &c, 75).unwrap();
    let b = encode_image(&img, &l, &c, 75).unwrap();
    assert_eq!(a, b);
    assert_eq!(&a.bytes()[..2], &[0xFF, 0xD8]);
    assert_eq!(&a.bytes()[a.size_bytes() - 2..], &[0xFF, 0xD9]);
}

#[test]
fn dqt_carries_scaled_tables() {
    let img = PixelImage::filled(8, 8, 3, 10).unwrap();
    let t = QuantTable::flat(16).unwrap();
    let jpeg = encode_image(&img, &t, &t, 75).unwrap();
    let bytes = jpeg.bytes();
    let at = bytes.windows(2).position(|w| w == [0xFF, 0xDB]).unwrap();
    assert_eq!(bytes[at + 4], 0x00);
    assert!(bytes[at + 5..at + 69].iter().all(|&q| q == 8));
}

#[test]
fn higher_quality_is_larger() {
    let img = common::textured(64, 64, 3, 9);
    let (l, c) = (QuantTable::annex_k_luma(), QuantTable::annex_k_chroma());
    let hi = encode_image(&img, &l, &c, 90).unwrap().size_bytes();
    let lo = encode_image(&img, &l, &c, 10).unwrap().size_bytes();
    assert!(hi > lo, "{hi} <= {lo}");
}

#[test]
fn truncated_stream_is_an_error() {
    let img = common::textured(32, 32, 3, 5);
    let jpeg = encode_image(&img, &QuantTable::annex_k_luma(), &QuantTable::annex_k_chroma(), 50).unwrap();
    let bytes = jpeg.bytes();
    let no_eoi = &bytes[..bytes.len() - 2];
    let e = decode_bytes(no_eoi).unwrap_err();
    assert_eq!(e.kind, DecodeErrorKind::MissingEoi);
    for cut in [0, 1, 3, 20, 100, 300, bytes.len() / 2, bytes.len() - 3] {
        assert!(decode_bytes(&bytes[..cut]).is_err(), "cut at {cut}");
    }
    let e = decode_image(&EncodedJpeg::from_bytes(vec![0x00, 0x01])).unwrap_err();
    assert_eq!(e.kind, DecodeErrorKind::MissingSoi);
}

#[test]
fn corrupted_streams_never_panic() {
    let img = common::textured(24, 16, 3, 6);
    let jpeg = encode_image(&img, &QuantTable::annex_k_luma(), &QuantTable::annex_k_chroma(), 60).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let mut b = jpeg.bytes().to_vec();
        for _ in 0..rng.random_range(1..4) {
            let i = rng.random_range(0..b.len());
            b[i] = rng.random();
        }
        let _ = decode_bytes(&b);
    }
}

#[test]
fn grayscale_round_trip() {
    let img = common::textured(30, 17, 1, 8);
    let t = QuantTable::flat(1).unwrap();
    let jpeg = encode_image(&img, &t, &t, 50).unwrap();
    let out = decode_image(&jpeg).unwrap();
    assert_eq!(out.channels(), 1);
    assert!(psnr(&img, &out).unwrap() > 45.0);
}

#[test]
fn encoder_reconstruction_matches_decoder() {
    let img = common::textured(35, 29, 3, 10);
    let prepared = qtopt::jpeg::PreparedImage::new(&img);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let (g, qf) = common::random_genes(&mut rng);
        let l = QuantTable::from_i32(&g[..64]).unwrap();
        let c = QuantTable::from_i32(&g[64..]).unwrap();
        let (jpeg, recon) = prepared.encode_with_reconstruction(&l, &c, qf).unwrap();
        assert_eq!(decode_image(&jpeg).unwrap(), recon);
        assert_eq!(jpeg, encode_image(&img, &l, &c, qf).unwrap());
    }
}
