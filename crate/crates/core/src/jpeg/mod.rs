//! Baseline JFIF codec: 4:4:4 sampling, Annex K Huffman tables, caller-supplied
//! quantisation tables and quality factor.

mod bits;
pub mod color;
pub mod dct;
mod decoder;
mod encoder;
pub mod huffman;
pub mod markers;
mod psnr;
pub mod quant;
mod reconstruct;
pub mod zigzag;

pub use color::rgb_to_ycbcr;
pub use dct::{forward_dct, inverse_dct, Block, DctPlan};
pub use decoder::{decode_bytes, decode_image, decode_ycbcr};
pub use encoder::{encode_image, EncodedJpeg, PreparedImage};
pub use psnr::{mse, psnr, psnr_with, PsnrChannels, PSNR_SENTINEL};
pub use quant::{dequantise, quality_scale, quantise, scale_tables, Levels, QuantTable, MAX_QUALITY, MIN_QUALITY};
pub use zigzag::{inverse_zigzag, zigzag, ZIGZAG};
