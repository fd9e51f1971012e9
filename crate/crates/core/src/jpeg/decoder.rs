//! Baseline sequential (SOF0/SOF1, 8-bit, Huffman) decoder.

use crate::error::{DecodeError, DecodeErrorKind as Kind};
use crate::image::PixelImage;

use super::dct::DctPlan;
use super::encoder::EncodedJpeg;
use super::huffman::{DecodeTable, HuffmanSpec};
use super::markers::*;
use super::quant::Levels;
use super::reconstruct::{planes_to_image, reconstruct_plane};
use super::zigzag::ZIGZAG;

type DResult<T> = Result<T, DecodeError>;

fn err(kind: Kind, offset: usize, marker: Option<u8>) -> DecodeError {
    DecodeError { kind, offset, marker }
}

#[derive(Debug, Clone)]
struct Component {
    id: u8,
    h: usize,
    v: usize,
    tq: usize,
    /// Allocated block grid (covers whole MCUs).
    blocks_w: usize,
    blocks_h: usize,
    levels: Vec<Levels>,
}

#[derive(Debug)]
struct Frame {
    width: usize,
    height: usize,
    hmax: usize,
    vmax: usize,
    components: Vec<Component>,
}

impl Frame {
    fn mcus(&self) -> (usize, usize) {
        (self.width.div_ceil(8 * self.hmax), self.height.div_ceil(8 * self.vmax))
    }

    fn plane_size(&self, c: &Component) -> (usize, usize) {
        ((self.width * c.h).div_ceil(self.hmax), (self.height * c.v).div_ceil(self.vmax))
    }
}

struct Parser<'a> {
    data: &'a [u8],
    pos: usize,
    qtables: [Option<[u16; 64]>; 4],
    dc: [Option<DecodeTable>; 4],
    ac: [Option<DecodeTable>; 4],
    restart_interval: usize,
    frame: Option<Frame>,
}

/// Decodes a baseline JFIF stream into RGB (three components) or grayscale.
pub fn decode_image(jpeg: &EncodedJpeg) -> Result<PixelImage, DecodeError> {
    decode_bytes(jpeg.bytes())
}

pub fn decode_bytes(data: &[u8]) -> Result<PixelImage, DecodeError> {
    let (w, h, planes) = decode_planes(data)?;
    Ok(planes_to_image(&planes, w as u32, h as u32))
}

/// Decodes without colour conversion: samples are the upsampled component
/// planes (Y, Cb, Cr) interleaved, exactly as carried in the stream.
pub fn decode_ycbcr(jpeg: &EncodedJpeg) -> Result<PixelImage, DecodeError> {
    let (w, h, planes) = decode_planes(jpeg.bytes())?;
    let n = w * h;
    let mut samples = Vec::with_capacity(n * planes.len());
    for i in 0..n {
        samples.extend(planes.iter().map(|p| p[i]));
    }
    Ok(PixelImage::new(w as u32, h as u32, planes.len() as u8, samples).expect("planes match dimensions"))
}

fn decode_planes(data: &[u8]) -> DResult<(usize, usize, Vec<Vec<u8>>)> {
    let mut p = Parser {
        data,
        pos: 0,
        qtables: [None; 4],
        dc: Default::default(),
        ac: Default::default(),
        restart_interval: 0,
        frame: None,
    };
    p.run()
}

impl<'a> Parser<'a> {
    fn byte(&mut self, marker: Option<u8>) -> DResult<u8> {
        let b = *self.data.get(self.pos).ok_or_else(|| err(Kind::UnexpectedEof, self.pos, marker))?;
        self.pos += 1;
        Ok(b)
    }

    fn u16(&mut self, marker: Option<u8>) -> DResult<u16> {
        Ok(u16::from_be_bytes([self.byte(marker)?, self.byte(marker)?]))
    }

    /// Reads the segment length and returns the segment payload bounds.
    fn segment(&mut self, m: u8) -> DResult<(usize, usize)> {
        let start = self.pos;
        let len = self.u16(Some(m))? as usize;
        if len < 2 {
            return Err(err(Kind::BadSegmentLength, start, Some(m)));
        }
        let end = start + len;
        if end > self.data.len() {
            return Err(err(Kind::UnexpectedEof, start, Some(m)));
        }
        Ok((self.pos, end))
    }

    fn next_marker(&mut self) -> DResult<u8> {
        if self.pos >= self.data.len() {
            return Err(err(Kind::MissingEoi, self.pos, None));
        }
        if self.data[self.pos] != 0xFF {
            return Err(err(Kind::Malformed("expected marker".into()), self.pos, None));
        }
        while self.pos < self.data.len() && self.data[self.pos] == 0xFF {
            self.pos += 1;
        }
        if self.pos >= self.data.len() {
            return Err(err(Kind::MissingEoi, self.pos, None));
        }
        let m = self.data[self.pos];
        self.pos += 1;
        Ok(m)
    }

    fn run(&mut self) -> DResult<(usize, usize, Vec<Vec<u8>>)> {
        if self.data.len() < 2 || self.data[0] != 0xFF || self.data[1] != SOI {
            return Err(err(Kind::MissingSoi, 0, None));
        }
        self.pos = 2;
        let mut scanned = false;
        loop {
            let at = self.pos;
            let m = self.next_marker()?;
            match m {
                EOI => break,
                SOF0 | SOF1 => self.read_frame(m)?,
                0xC2 | 0xC3 | 0xC5..=0xC7 | 0xC9..=0xCB | 0xCD..=0xCF => {
                    return Err(err(Kind::Unsupported(format!("frame type 0xFF{m:02X}")), at, Some(m)));
                }
                DHT => self.read_dht()?,
                DQT => self.read_dqt()?,
                DRI => {
                    let (s, end) = self.segment(m)?;
                    if end - s != 2 {
                        return Err(err(Kind::BadSegmentLength, at, Some(m)));
                    }
                    self.restart_interval = self.u16(Some(m))? as usize;
                }
                SOS => {
                    self.read_scan()?;
                    scanned = true;
                }
                SOI => return Err(err(Kind::Malformed("nested SOI".into()), at, Some(m))),
                RST0..=RST7 => {}
                _ => {
                    let (_, end) = self.segment(m)?;
                    self.pos = end;
                }
            }
        }
        let frame = self.frame.take().ok_or_else(|| err(Kind::Malformed("no frame header".into()), self.pos, None))?;
        if !scanned {
            return Err(err(Kind::Malformed("no scan".into()), self.pos, None));
        }
        self.output(frame)
    }

    fn read_frame(&mut self, m: u8) -> DResult<()> {
        let at = self.pos;
        let (_, end) = self.segment(m)?;
        if self.frame.is_some() {
            return Err(err(Kind::Malformed("second frame header".into()), at, Some(m)));
        }
        let precision = self.byte(Some(m))?;
        if precision != 8 {
            return Err(err(Kind::Unsupported(format!("{precision}-bit precision")), at, Some(m)));
        }
        let height = self.u16(Some(m))? as usize;
        let width = self.u16(Some(m))? as usize;
        if height == 0 || width == 0 {
            return Err(err(Kind::Unsupported("zero or DNL-defined dimensions".into()), at, Some(m)));
        }
        let n = self.byte(Some(m))? as usize;
        if n != 1 && n != 3 {
            return Err(err(Kind::Unsupported(format!("{n} components")), at, Some(m)));
        }
        if end - at != 8 + 3 * n {
            return Err(err(Kind::BadSegmentLength, at, Some(m)));
        }
        let mut components = Vec::with_capacity(n);
        for _ in 0..n {
            let id = self.byte(Some(m))?;
            let hv = self.byte(Some(m))?;
            let tq = self.byte(Some(m))? as usize;
            let (h, v) = ((hv >> 4) as usize, (hv & 15) as usize);
            if !(1..=4).contains(&h) || !(1..=4).contains(&v) || tq > 3 {
                return Err(err(Kind::Malformed("bad component parameters".into()), at, Some(m)));
            }
            components.push(Component { id, h, v, tq, blocks_w: 0, blocks_h: 0, levels: Vec::new() });
        }
        let hmax = components.iter().map(|c| c.h).max().unwrap_or(1);
        let vmax = components.iter().map(|c| c.v).max().unwrap_or(1);
        let mut frame = Frame { width, height, hmax, vmax, components };
        let (mx, my) = frame.mcus();
        for c in frame.components.iter_mut() {
            c.blocks_w = mx * c.h;
            c.blocks_h = my * c.v;
            c.levels = vec![[0; 64]; c.blocks_w * c.blocks_h];
        }
        self.frame = Some(frame);
        Ok(())
    }

    fn read_dqt(&mut self) -> DResult<()> {
        let at = self.pos;
        let (_, end) = self.segment(DQT)?;
        while self.pos < end {
            let pq_tq = self.byte(Some(DQT))?;
            let (pq, tq) = (pq_tq >> 4, (pq_tq & 15) as usize);
            if pq > 1 || tq > 3 {
                return Err(err(Kind::Malformed("bad DQT table spec".into()), at, Some(DQT)));
            }
            let mut t = [0u16; 64];
            for &idx in ZIGZAG.iter() {
                t[idx] = if pq == 0 { self.byte(Some(DQT))? as u16 } else { self.u16(Some(DQT))? };
            }
            self.qtables[tq] = Some(t);
        }
        if self.pos != end {
            return Err(err(Kind::BadSegmentLength, at, Some(DQT)));
        }
        Ok(())
    }

    fn read_dht(&mut self) -> DResult<()> {
        let at = self.pos;
        let (_, end) = self.segment(DHT)?;
        while self.pos < end {
            let tc_th = self.byte(Some(DHT))?;
            let (tc, th) = (tc_th >> 4, (tc_th & 15) as usize);
            if tc > 1 || th > 3 {
                return Err(err(Kind::Malformed("bad DHT table spec".into()), at, Some(DHT)));
            }
            let mut counts = [0u8; 16];
            for c in counts.iter_mut() {
                *c = self.byte(Some(DHT))?;
            }
            let total: usize = counts.iter().map(|&c| c as usize).sum();
            if total > 256 {
                return Err(err(Kind::Malformed("too many Huffman symbols".into()), at, Some(DHT)));
            }
            let mut symbols = Vec::with_capacity(total);
            for _ in 0..total {
                symbols.push(self.byte(Some(DHT))?);
            }
            let table = DecodeTable::new(&HuffmanSpec { counts, symbols });
            if tc == 0 {
                self.dc[th] = Some(table);
            } else {
                self.ac[th] = Some(table);
            }
        }
        if self.pos != end {
            return Err(err(Kind::BadSegmentLength, at, Some(DHT)));
        }
        Ok(())
    }

    fn read_scan(&mut self) -> DResult<()> {
        let at = self.pos;
        let (_, end) = self.segment(SOS)?;
        let ns = self.byte(Some(SOS))? as usize;
        if ns == 0 || ns > 4 || end - at != 6 + 2 * ns {
            return Err(err(Kind::BadSegmentLength, at, Some(SOS)));
        }
        let mut frame = self.frame.take().ok_or_else(|| err(Kind::Malformed("scan before frame".into()), at, Some(SOS)))?;
        let mut sel = Vec::with_capacity(ns);
        for _ in 0..ns {
            let id = self.byte(Some(SOS))?;
            let tables = self.byte(Some(SOS))?;
            let ci = frame
                .components
                .iter()
                .position(|c| c.id == id)
                .ok_or_else(|| err(Kind::Malformed(format!("scan references unknown component {id}")), at, Some(SOS)))?;
            let (td, ta) = ((tables >> 4) as usize, (tables & 15) as usize);
            if td > 3 || ta > 3 {
                return Err(err(Kind::Malformed("bad table selector".into()), at, Some(SOS)));
            }
            if self.dc[td].is_none() {
                return Err(err(Kind::MissingTable(format!("DC table {td}")), at, Some(SOS)));
            }
            if self.ac[ta].is_none() {
                return Err(err(Kind::MissingTable(format!("AC table {ta}")), at, Some(SOS)));
            }
            sel.push((ci, td, ta));
        }
        let ss = self.byte(Some(SOS))?;
        let se = self.byte(Some(SOS))?;
        let a = self.byte(Some(SOS))?;
        if ss != 0 || se != 63 || a != 0 {
            return Err(err(Kind::Unsupported("spectral selection / successive approximation".into()), at, Some(SOS)));
        }

        let mut reader = BitReader { data: self.data, pos: self.pos, acc: 0, nbits: 0 };
        let mut pred = vec![0i32; ns];

        // Units are MCUs for interleaved scans, single blocks otherwise.
        let units: Vec<(usize, usize)> = if ns == 1 {
            let c = &frame.components[sel[0].0];
            let (pw, ph) = frame.plane_size(c);
            let (bw, bh) = (pw.div_ceil(8), ph.div_ceil(8));
            (0..bh).flat_map(|y| (0..bw).map(move |x| (x, y))).collect()
        } else {
            let (mx, my) = frame.mcus();
            (0..my).flat_map(|y| (0..mx).map(move |x| (x, y))).collect()
        };

        for (n, &(ux, uy)) in units.iter().enumerate() {
            if self.restart_interval > 0 && n > 0 && n % self.restart_interval == 0 {
                reader.restart()?;
                pred.iter_mut().for_each(|p| *p = 0);
            }
            for (k, &(ci, td, ta)) in sel.iter().enumerate() {
                let dc = self.dc[td].as_ref().expect("checked above");
                let ac = self.ac[ta].as_ref().expect("checked above");
                let comp = &mut frame.components[ci];
                let (bh, bv) = if ns == 1 { (1, 1) } else { (comp.h, comp.v) };
                for by in 0..bv {
                    for bx in 0..bh {
                        let (x, y) = if ns == 1 { (ux, uy) } else { (ux * comp.h + bx, uy * comp.v + by) };
                        let idx = y * comp.blocks_w + x;
                        decode_block(&mut reader, dc, ac, &mut pred[k], &mut comp.levels[idx])?;
                    }
                }
            }
        }
        self.pos = reader.skip_to_marker();
        self.frame = Some(frame);
        Ok(())
    }

    fn output(&self, frame: Frame) -> DResult<(usize, usize, Vec<Vec<u8>>)> {
        let plan = DctPlan::<f64>::new();
        let mut planes = Vec::with_capacity(frame.components.len());
        for c in &frame.components {
            let steps = self.qtables[c.tq]
                .as_ref()
                .ok_or_else(|| err(Kind::MissingTable(format!("quantisation table {}", c.tq)), self.pos, None))?;
            let (pw, ph) = frame.plane_size(c);
            let plane = reconstruct_plane(&c.levels, steps, c.blocks_w, pw, ph, &plan);
            planes.push(upsample(&plane, pw, frame.width, frame.height, frame.hmax / c.h, frame.vmax / c.v));
        }
        Ok((frame.width, frame.height, planes))
    }
}

/// Nearest-neighbour upsampling to full resolution.
fn upsample(plane: &[u8], pw: usize, width: usize, height: usize, fx: usize, fy: usize) -> Vec<u8> {
    if fx == 1 && fy == 1 && pw == width {
        return plane[..width * height].to_vec();
    }
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        let row = &plane[(y / fy) * pw..];
        out.extend((0..width).map(|x| row[x / fx]));
    }
    out
}

fn decode_block(r: &mut BitReader, dc: &DecodeTable, ac: &DecodeTable, pred: &mut i32, out: &mut Levels) -> DResult<()> {
    let t = r.symbol(dc)?;
    if t > 11 {
        return Err(err(Kind::Malformed(format!("DC category {t}")), r.pos, None));
    }
    let diff = r.receive_extend(t)?;
    *pred = pred.wrapping_add(diff);
    out[0] = *pred;
    let mut k = 1;
    while k < 64 {
        let rs = r.symbol(ac)?;
        let (run, size) = ((rs >> 4) as usize, rs & 15);
        if size == 0 {
            if run == 15 {
                k += 16;
                continue;
            }
            break;
        }
        k += run;
        if k > 63 {
            return Err(err(Kind::Malformed("AC run past end of block".into()), r.pos, None));
        }
        out[ZIGZAG[k]] = r.receive_extend(size)?;
        k += 1;
    }
    if k > 64 {
        return Err(err(Kind::Malformed("AC run past end of block".into()), r.pos, None));
    }
    Ok(())
}

struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    acc: u32,
    nbits: u32,
}

impl<'a> BitReader<'a> {
    fn fill_byte(&mut self) -> DResult<()> {
        let b = *self.data.get(self.pos).ok_or_else(|| err(Kind::UnexpectedEof, self.pos, Some(SOS)))?;
        if b == 0xFF {
            match self.data.get(self.pos + 1) {
                Some(0x00) => self.pos += 2,
                Some(&m) => return Err(err(Kind::Malformed("entropy data ended early".into()), self.pos, Some(m))),
                None => return Err(err(Kind::UnexpectedEof, self.pos, Some(SOS))),
            }
        } else {
            self.pos += 1;
        }
        self.acc = (self.acc << 8) | b as u32;
        self.nbits += 8;
        Ok(())
    }

    #[inline]
    fn bit(&mut self) -> DResult<u32> {
        if self.nbits == 0 {
            self.fill_byte()?;
        }
        self.nbits -= 1;
        Ok((self.acc >> self.nbits) & 1)
    }

    fn bits(&mut self, n: u8) -> DResult<u32> {
        let mut v = 0;
        for _ in 0..n {
            v = (v << 1) | self.bit()?;
        }
        Ok(v)
    }

    fn symbol(&mut self, t: &DecodeTable) -> DResult<u8> {
        let at = self.pos;
        t.decode(|| self.bit())?.ok_or_else(|| err(Kind::BadHuffmanCode, at, Some(SOS)))
    }

    fn receive_extend(&mut self, size: u8) -> DResult<i32> {
        if size == 0 {
            return Ok(0);
        }
        if size > 16 {
            return Err(err(Kind::Malformed(format!("coefficient size {size}")), self.pos, None));
        }
        let v = self.bits(size)? as i32;
        Ok(if v < (1 << (size - 1)) { v - (1 << size) + 1 } else { v })
    }

    fn restart(&mut self) -> DResult<()> {
        self.nbits = 0;
        self.acc = 0;
        match (self.data.get(self.pos), self.data.get(self.pos + 1)) {
            (Some(0xFF), Some(&m)) if (RST0..=RST7).contains(&m) => {
                self.pos += 2;
                Ok(())
            }
            (None, _) | (_, None) => Err(err(Kind::UnexpectedEof, self.pos, None)),
            _ => Err(err(Kind::Malformed("missing restart marker".into()), self.pos, None)),
        }
    }

    /// Position of the next marker after the scan (skipping any trailing fill).
    fn skip_to_marker(&self) -> usize {
        let mut p = self.pos;
        while p + 1 < self.data.len() {
            if self.data[p] == 0xFF && self.data[p + 1] != 0x00 && !(RST0..=RST7).contains(&self.data[p + 1]) {
                return p;
            }
            p += 1;
        }
        self.data.len()
    }
}
