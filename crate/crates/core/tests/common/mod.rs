#![allow(dead_code)]

use qtopt::PixelImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth gradients plus noise: compresses like a photograph, not like noise.
pub fn textured(width: u32, height: u32, channels: u8, seed: u64) -> PixelImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase: [f64; 3] = [rng.random(), rng.random(), rng.random()];
    let mut samples = Vec::with_capacity((width * height) as usize * channels as usize);
    for y in 0..height {
        for x in 0..width {
            for &ph in &phase[..channels as usize] {
                let (fx, fy) = (x as f64 / width as f64, y as f64 / height as f64);
                let base = 128.0
                    + 70.0 * ((fx * 6.0 + ph * std::f64::consts::TAU).sin() * (fy * 4.0 + ph).cos())
                    + 30.0 * (((x / 16 + y / 16) % 2) as f64 - 0.5);
                let v = base + rng.random_range(-12.0..12.0);
                samples.push(v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    PixelImage::new(width, height, channels, samples).unwrap()
}

pub fn random_genes(rng: &mut ChaCha8Rng) -> (Vec<i32>, i32) {
    let tables = (0..128).map(|_| rng.random_range(1..=255)).collect();
    (tables, rng.random_range(1..=99))
}

/// Separable toy objective: squared distance to a fixed interior point.
pub fn toy_problem(dim: usize) -> qtopt::optim::SphereProblem {
    let target = (0..dim).map(|i| 20 + (i as i32 * 37) % 200).collect();
    qtopt::optim::SphereProblem::new(target, qtopt::Bounds::uniform(dim, 1, 255).unwrap()).unwrap()
}
