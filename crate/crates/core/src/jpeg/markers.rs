//! Segment writers. Layout: SOI, APP0 (JFIF 1.01), DQT per table, SOF0,
//! DHT per table, SOS, entropy-coded data, EOI.

use super::huffman::HuffmanSpec;
use super::quant::QuantTable;
use super::zigzag::ZIGZAG;

pub const SOI: u8 = 0xD8;
pub const EOI: u8 = 0xD9;
pub const SOF0: u8 = 0xC0;
pub const SOF1: u8 = 0xC1;
pub const DHT: u8 = 0xC4;
pub const DQT: u8 = 0xDB;
pub const DRI: u8 = 0xDD;
pub const SOS: u8 = 0xDA;
pub const APP0: u8 = 0xE0;
pub const RST0: u8 = 0xD0;
pub const RST7: u8 = 0xD7;

fn marker(out: &mut Vec<u8>, m: u8) {
    out.extend_from_slice(&[0xFF, m]);
}

fn u16be(out: &mut Vec<u8>, v: u16) {
    out.extend_from_slice(&v.to_be_bytes());
}

pub fn write_soi(out: &mut Vec<u8>) {
    marker(out, SOI);
}

pub fn write_eoi(out: &mut Vec<u8>) {
    marker(out, EOI);
}

pub fn write_app0_jfif(out: &mut Vec<u8>) {
    marker(out, APP0);
    u16be(out, 16);
    out.extend_from_slice(b"JFIF\0");
    out.extend_from_slice(&[1, 1, 0]); // version 1.01, aspect-ratio units
    u16be(out, 1);
    u16be(out, 1);
    out.extend_from_slice(&[0, 0]); // no thumbnail
}

/// 8-bit precision table, entries in zigzag order.
pub fn write_dqt(out: &mut Vec<u8>, id: u8, table: &QuantTable) {
    marker(out, DQT);
    u16be(out, 67);
    out.push(id);
    let e = table.entries();
    out.extend(ZIGZAG.iter().map(|&i| e[i] as u8));
}

pub fn write_sof0(out: &mut Vec<u8>, width: u16, height: u16, gray: bool) {
    let n: u8 = if gray { 1 } else { 3 };
    marker(out, SOF0);
    u16be(out, 8 + 3 * n as u16);
    out.push(8);
    u16be(out, height);
    u16be(out, width);
    out.push(n);
    for c in 0..n {
        out.extend_from_slice(&[c + 1, 0x11, (c > 0) as u8]);
    }
}

pub fn write_dht(out: &mut Vec<u8>, class: u8, id: u8, spec: &HuffmanSpec) {
    marker(out, DHT);
    u16be(out, (2 + 1 + 16 + spec.symbols.len()) as u16);
    out.push((class << 4) | id);
    out.extend_from_slice(&spec.counts);
    out.extend_from_slice(&spec.symbols);
}

pub fn write_sos(out: &mut Vec<u8>, gray: bool) {
    let n: u8 = if gray { 1 } else { 3 };
    marker(out, SOS);
    u16be(out, 6 + 2 * n as u16);
    out.push(n);
    for c in 0..n {
        let t = (c > 0) as u8;
        out.extend_from_slice(&[c + 1, (t << 4) | t]);
    }
    out.extend_from_slice(&[0, 63, 0]);
}
