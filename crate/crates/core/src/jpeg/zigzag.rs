/// `ZIGZAG[k]` is the natural (row-major) index of the k-th coefficient in scan order.
pub const ZIGZAG: [usize; 64] = [
    0, 1, 8, 16, 9, 2, 3, 10, //
    17, 24, 32, 25, 18, 11, 4, 5, //
    12, 19, 26, 33, 40, 48, 41, 34, //
    27, 20, 13, 6, 7, 14, 21, 28, //
    35, 42, 49, 56, 57, 50, 43, 36, //
    29, 22, 15, 23, 30, 37, 44, 51, //
    58, 59, 52, 45, 38, 31, 39, 46, //
    53, 60, 61, 54, 47, 55, 62, 63,
];

/// Reorders a natural-order block into zigzag scan order.
pub fn zigzag<T: Copy>(block: &[T; 64]) -> [T; 64] {
    std::array::from_fn(|k| block[ZIGZAG[k]])
}

/// Inverse of [`zigzag`].
pub fn inverse_zigzag<T: Copy + Default>(seq: &[T; 64]) -> [T; 64] {
    let mut out = [T::default(); 64];
    for (k, &v) in seq.iter().enumerate() {
        out[ZIGZAG[k]] = v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_begins_with_standard_order() {
        let idx: [(usize, usize); 64] = std::array::from_fn(|i| (i / 8, i % 8));
        let z = zigzag(&idx);
        assert_eq!(&z[..6], &[(0, 0), (0, 1), (1, 0), (2, 0), (1, 1), (0, 2)]);
        assert_eq!(z[63], (7, 7));
    }

    #[test]
    fn is_a_permutation() {
        let mut seen = [false; 64];
        for &i in &ZIGZAG {
            assert!(!seen[i]);
            seen[i] = true;
        }
    }

    #[test]
    fn zero_block() {
        assert_eq!(zigzag(&[0i32; 64]), [0; 64]);
    }
}
