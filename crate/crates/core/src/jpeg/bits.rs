/// MSB-first bit writer with JPEG byte stuffing.
pub struct BitWriter<'a> {
    out: &'a mut Vec<u8>,
    acc: u64,
    nbits: u32,
}

impl<'a> BitWriter<'a> {
    pub fn new(out: &'a mut Vec<u8>) -> Self {
        Self { out, acc: 0, nbits: 0 }
    }

    #[inline]
    pub fn put(&mut self, bits: u32, len: u8) {
        if len == 0 {
            return;
        }
        let len = len as u32;
        self.acc = (self.acc << len) | (bits as u64 & ((1u64 << len) - 1));
        self.nbits += len;
        while self.nbits >= 8 {
            self.nbits -= 8;
            let byte = (self.acc >> self.nbits) as u8;
            self.out.push(byte);
            if byte == 0xFF {
                self.out.push(0x00);
            }
        }
        self.acc &= (1u64 << self.nbits) - 1;
    }

    /// Pads the final partial byte with 1-bits.
    pub fn flush(mut self) {
        if self.nbits > 0 {
            let pad = 8 - self.nbits;
            self.put((1u32 << pad) - 1, pad as u8);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stuffs_ff_and_pads_with_ones() {
        let mut v = Vec::new();
        let mut w = BitWriter::new(&mut v);
        w.put(0xFF, 8);
        w.put(0b101, 3);
        w.flush();
        assert_eq!(v, vec![0xFF, 0x00, 0b1011_1111]);
    }
}
