//! The 8×8 type-II DCT and its inverse in the orthonormal JPEG scaling.

use crate::scalar::Real;

/// An 8×8 block of real values in natural (row-major) order.
///
/// Holds either level-shifted samples or DCT coefficients, indexed `[row * 8 + col]`;
/// for coefficients the row is the vertical frequency `u` and the column the
/// horizontal frequency `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block<T>(pub [T; 64]);

impl<T: Real> Block<T> {
    pub fn zero() -> Self {
        Self([T::zero(); 64])
    }

    pub fn constant(c: T) -> Self {
        Self([c; 64])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Precomputed basis for repeated transforms.
///
/// `basis[x * 8 + u] = c_u / 2 · cos((2x + 1) u π / 16)`, so that the forward
/// transform is `Bᵀ f B` and the inverse `B F Bᵀ`.
#[derive(Debug, Clone)]
pub struct DctPlan<T> {
    basis: [T; 64],
}

impl<T: Real> Default for DctPlan<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> DctPlan<T> {
    pub fn new() -> Self {
        let half = T::lit(0.5);
        let c0 = T::one() / T::lit(2.0).sqrt();
        let sixteenth = T::PI() / T::lit(16.0);
        let basis = std::array::from_fn(|i| {
            let (x, u) = (i / 8, i % 8);
            let cu = if u == 0 { c0 } else { T::one() };
            half * cu * (T::lit(((2 * x + 1) * u) as f64) * sixteenth).cos()
        });
        Self { basis }
    }

    pub fn forward(&self, block: &Block<T>) -> Block<T> {
        let b = &self.basis;
        let f = &block.0;
        // tmp[x][v] = sum_y f[x][y] B[y][v]
        let mut tmp = [T::zero(); 64];
        for x in 0..8 {
            for v in 0..8 {
                let mut acc = T::zero();
                for y in 0..8 {
                    acc = acc + f[x * 8 + y] * b[y * 8 + v];
                }
                tmp[x * 8 + v] = acc;
            }
        }
        let mut out = [T::zero(); 64];
        for u in 0..8 {
            for v in 0..8 {
                let mut acc = T::zero();
                for x in 0..8 {
                    acc = acc + b[x * 8 + u] * tmp[x * 8 + v];
                }
                out[u * 8 + v] = acc;
            }
        }
        Block(out)
    }

    pub fn inverse(&self, coeffs: &Block<T>) -> Block<T> {
        let b = &self.basis;
        let c = &coeffs.0;
        // tmp[u][y] = sum_v F[u][v] B[y][v]; all-zero rows of F are skipped.
        let mut tmp = [T::zero(); 64];
        let mut live = [false; 8];
        for u in 0..8 {
            let row = &c[u * 8..u * 8 + 8];
            if row.iter().all(|v| v.is_zero()) {
                continue;
            }
            live[u] = true;
            for y in 0..8 {
                let mut acc = T::zero();
                for v in 0..8 {
                    acc = acc + row[v] * b[y * 8 + v];
                }
                tmp[u * 8 + y] = acc;
            }
        }
        let mut out = [T::zero(); 64];
        for x in 0..8 {
            for y in 0..8 {
                let mut acc = T::zero();
                for u in 0..8 {
                    if live[u] {
                        acc = acc + b[x * 8 + u] * tmp[u * 8 + y];
                    }
                }
                out[x * 8 + y] = acc;
            }
        }
        Block(out)
    }
}

/// Forward DCT of level-shifted samples.
pub fn forward_dct<T: Real>(block: &Block<T>) -> Block<T> {
    DctPlan::new().forward(block)
}

/// Inverse DCT back to (level-shifted) samples.
pub fn inverse_dct<T: Real>(coeffs: &Block<T>) -> Block<T> {
    DctPlan::new().inverse(coeffs)
}
