#![allow(dead_code)]

use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat};
use qtopt_harness::ExperimentConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth gradients plus noise, written as an 8-bit PNG or BMP.
pub fn write_image(dir: &Path, name: &str, width: u32, height: u32, channels: u8, seed: u64) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut px = Vec::with_capacity((width * height) as usize * channels as usize);
    for y in 0..height {
        for x in 0..width {
            for c in 0..channels as u32 {
                let base = (x * 3 + y * 2 + c * 40) as f64 + 30.0 * ((x + c) as f64 * 0.3).sin();
                px.push((base + rng.random_range(-12.0..12.0)).clamp(0.0, 255.0) as u8);
            }
        }
    }
    let img = if channels == 1 {
        DynamicImage::ImageLuma8(image::GrayImage::from_raw(width, height, px).unwrap())
    } else {
        DynamicImage::ImageRgb8(image::RgbImage::from_raw(width, height, px).unwrap())
    };
    let path = dir.join(name);
    let format = if name.ends_with(".bmp") { ImageFormat::Bmp } else { ImageFormat::Png };
    img.save_with_format(&path, format).unwrap();
    path
}

/// A tiny benchmark: 2 images, 2 target sizes, 3 algorithms, 3 runs.
pub fn small_config(dir: &Path, out: &str) -> ExperimentConfig {
    let a = write_image(dir, "alpha.png", 40, 32, 3, 1);
    let b = write_image(dir, "beta.png", 32, 32, 1, 2);
    ExperimentConfig {
        images: vec![a, b],
        algorithms: vec!["GA".parse().unwrap(), "HPSO".parse().unwrap(), "DE".parse().unwrap()],
        fs_us: vec![1200, 2500],
        runs: 3,
        population_size: 8,
        eval_budget: 40,
        seed: 9,
        output: dir.join(out),
        ..ExperimentConfig::default()
    }
}

/// Relative path and contents of every file below `root`, sorted.
pub fn tree(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(PathBuf, Vec<u8>)>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.push((p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    if root.exists() {
        walk(root, root, &mut out);
    }
    out.sort();
    out
}
