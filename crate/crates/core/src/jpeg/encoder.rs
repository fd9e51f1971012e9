use crate::error::Result;
use crate::image::PixelImage;

use super::bits::BitWriter;
use super::color::rgb_to_ycbcr;
use super::dct::{Block, DctPlan};
use super::huffman::{category, EncodeTable, HuffmanSpec};
use super::markers;
use super::quant::{quantise, scale_tables, Levels, QuantTable};
use super::reconstruct::{planes_to_image, reconstruct_plane};
use super::zigzag::ZIGZAG;

/// A complete JFIF stream, SOI through EOI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedJpeg {
    bytes: Vec<u8>,
}

impl EncodedJpeg {
    /// Wraps raw bytes (for decoding streams produced elsewhere).
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self { bytes }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    /// Length of the whole stream including headers.
    pub fn size_bytes(&self) -> usize {
        self.bytes.len()
    }
}

struct Entropy {
    dc: [EncodeTable; 2],
    ac: [EncodeTable; 2],
}

impl Entropy {
    fn annex_k() -> Self {
        Self {
            dc: [EncodeTable::new(&HuffmanSpec::dc_luma()), EncodeTable::new(&HuffmanSpec::dc_chroma())],
            ac: [EncodeTable::new(&HuffmanSpec::ac_luma()), EncodeTable::new(&HuffmanSpec::ac_chroma())],
        }
    }
}

/// An image with its forward DCT already computed.
///
/// The transform does not depend on the tables or quality factor, so repeated
/// encodes of the same image (as an optimiser does) only pay for quantisation,
/// entropy coding and reconstruction.
pub struct PreparedImage {
    source: PixelImage,
    blocks_w: usize,
    blocks_h: usize,
    /// One coefficient grid per component (Y, or Y/Cb/Cr), row-major blocks.
    coeffs: Vec<Vec<Block<f64>>>,
    plan: DctPlan<f64>,
    entropy: Entropy,
}

impl PreparedImage {
    pub fn new(image: &PixelImage) -> Self {
        let plan = DctPlan::<f64>::new();
        let (w, h) = (image.width() as usize, image.height() as usize);
        let blocks_w = w.div_ceil(8);
        let blocks_h = h.div_ceil(8);
        let planes = rgb_to_ycbcr(image);
        let ncomp = if image.channels() == 1 { 1 } else { 3 };
        let coeffs = planes[..ncomp]
            .iter()
            .map(|plane| {
                let mut grid = Vec::with_capacity(blocks_w * blocks_h);
                for by in 0..blocks_h {
                    for bx in 0..blocks_w {
                        let mut b = Block::<f64>::zero();
                        for r in 0..8 {
                            // Partial edge blocks replicate the last row/column.
                            let y = (by * 8 + r).min(h - 1);
                            for c in 0..8 {
                                let x = (bx * 8 + c).min(w - 1);
                                b.0[r * 8 + c] = plane[y * w + x] as f64 - 128.0;
                            }
                        }
                        grid.push(plan.forward(&b));
                    }
                }
                grid
            })
            .collect();
        Self { source: image.clone(), blocks_w, blocks_h, coeffs, plan, entropy: Entropy::annex_k() }
    }

    pub fn source(&self) -> &PixelImage {
        &self.source
    }

    fn is_gray(&self) -> bool {
        self.coeffs.len() == 1
    }

    fn quantise_all(&self, tables: &[QuantTable; 2]) -> Vec<Vec<Levels>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(ci, grid)| {
                let qt = &tables[(ci > 0) as usize];
                grid.iter().map(|b| quantise(b, qt)).collect()
            })
            .collect()
    }

    /// Encodes with base tables scaled by `qf`; the scaled tables go into DQT.
    pub fn encode(&self, lqt: &QuantTable, cqt: &QuantTable, qf: i32) -> Result<EncodedJpeg> {
        let (l, c) = scale_tables(lqt, cqt, qf)?;
        let tables = [l, c];
        let levels = self.quantise_all(&tables);
        Ok(self.write(&tables, &levels))
    }

    /// Encodes and also returns the image a baseline decoder reconstructs from
    /// the stream, without re-parsing it.
    pub fn encode_with_reconstruction(
        &self,
        lqt: &QuantTable,
        cqt: &QuantTable,
        qf: i32,
    ) -> Result<(EncodedJpeg, PixelImage)> {
        let (l, c) = scale_tables(lqt, cqt, qf)?;
        let tables = [l, c];
        let levels = self.quantise_all(&tables);
        let jpeg = self.write(&tables, &levels);
        let (w, h) = (self.source.width() as usize, self.source.height() as usize);
        let planes: Vec<Vec<u8>> = levels
            .iter()
            .enumerate()
            .map(|(ci, grid)| {
                let steps = tables[(ci > 0) as usize].entries();
                reconstruct_plane(grid, steps, self.blocks_w, w, h, &self.plan)
            })
            .collect();
        Ok((jpeg, planes_to_image(&planes, self.source.width(), self.source.height())))
    }

    fn write(&self, tables: &[QuantTable; 2], levels: &[Vec<Levels>]) -> EncodedJpeg {
        let gray = self.is_gray();
        let mut out = Vec::with_capacity(1024 + self.blocks_w * self.blocks_h * 16);
        markers::write_soi(&mut out);
        markers::write_app0_jfif(&mut out);
        markers::write_dqt(&mut out, 0, &tables[0]);
        if !gray {
            markers::write_dqt(&mut out, 1, &tables[1]);
        }
        markers::write_sof0(&mut out, self.source.width() as u16, self.source.height() as u16, gray);
        markers::write_dht(&mut out, 0, 0, &HuffmanSpec::dc_luma());
        markers::write_dht(&mut out, 1, 0, &HuffmanSpec::ac_luma());
        if !gray {
            markers::write_dht(&mut out, 0, 1, &HuffmanSpec::dc_chroma());
            markers::write_dht(&mut out, 1, 1, &HuffmanSpec::ac_chroma());
        }
        markers::write_sos(&mut out, gray);
        {
            let mut bw = BitWriter::new(&mut out);
            let mut pred = [0i32; 3];
            for b in 0..self.blocks_w * self.blocks_h {
                for (ci, grid) in levels.iter().enumerate() {
                    let t = (ci > 0) as usize;
                    encode_block(&mut bw, &grid[b], &mut pred[ci], &self.entropy.dc[t], &self.entropy.ac[t]);
                }
            }
            bw.flush();
        }
        markers::write_eoi(&mut out);
        EncodedJpeg { bytes: out }
    }
}

#[inline]
fn put_value(bw: &mut BitWriter, v: i32, size: u8) {
    let bits = if v < 0 { v - 1 } else { v };
    bw.put(bits as u32, size);
}

/// DC difference against the running predictor, then run-length coded AC.
fn encode_block(bw: &mut BitWriter, levels: &Levels, pred: &mut i32, dc: &EncodeTable, ac: &EncodeTable) {
    let diff = levels[0] - *pred;
    *pred = levels[0];
    let size = category(diff);
    let (code, len) = dc.get(size);
    bw.put(code as u32, len);
    put_value(bw, diff, size);

    let mut run = 0u8;
    for &idx in &ZIGZAG[1..] {
        let v = levels[idx];
        if v == 0 {
            run += 1;
            continue;
        }
        while run >= 16 {
            let (code, len) = ac.get(0xF0);
            bw.put(code as u32, len);
            run -= 16;
        }
        let size = category(v);
        let (code, len) = ac.get((run << 4) | size);
        bw.put(code as u32, len);
        put_value(bw, v, size);
        run = 0;
    }
    if run > 0 {
        let (code, len) = ac.get(0x00);
        bw.put(code as u32, len);
    }
}

/// Full pipeline: colour conversion, level shift, DCT, quality scaling,
/// quantisation, zigzag, DPCM/run-length and Annex K Huffman coding.
pub fn encode_image(image: &PixelImage, lqt: &QuantTable, cqt: &QuantTable, qf: i32) -> Result<EncodedJpeg> {
    super::quant::quality_scale(qf)?;
    PreparedImage::new(image).encode(lqt, cqt, qf)
}
