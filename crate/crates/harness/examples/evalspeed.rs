//! Objective evaluations per second on one image (default: the astronaut
//! corpus image at a 50000-byte target).
use std::time::Instant;

use qtopt::candidate::random_candidate;
use qtopt::{Bounds, JpegObjective, ObjectiveSpec};
use rand::SeedableRng;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "corpus/astronaut.png".into());
    let img = qtopt_harness::load_image(&path).unwrap();
    let obj = JpegObjective::new(&ObjectiveSpec::new(img, 50_000)).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let cands: Vec<_> = (0..200).map(|_| random_candidate(&mut rng, &Bounds::default()).unwrap()).collect();
    let t = Instant::now();
    for c in &cands {
        obj.evaluate(c).unwrap();
    }
    println!("{:.3} ms/eval", t.elapsed().as_secs_f64() * 1e3 / cands.len() as f64);
}
