use std::fmt;

use thiserror::Error;

/// Errors raised by the codec, the objective and the optimisers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("quality factor {0} outside [1, 99]")]
    QualityOutOfRange(i32),
    #[error("quantisation table entry {value} at index {index} outside [1, 255]")]
    TableEntryOutOfRange { index: usize, value: i32 },
    #[error("image shapes differ: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },
    #[error("non-finite value at gene {0}")]
    NonFinite(usize),
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),
    #[error("invalid objective: {0}")]
    InvalidObjective(String),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("invalid optimiser configuration: {0}")]
    InvalidConfig(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A malformed or unsupported JPEG stream.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct DecodeError {
    pub kind: DecodeErrorKind,
    /// Byte offset into the stream where the problem was detected.
    pub offset: usize,
    /// Marker code of the segment being parsed, if any.
    pub marker: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeErrorKind {
    MissingSoi,
    UnexpectedEof,
    MissingEoi,
    BadSegmentLength,
    Unsupported(String),
    Malformed(String),
    MissingTable(String),
    BadHuffmanCode,
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            DecodeErrorKind::MissingSoi => "stream does not start with SOI".to_string(),
            DecodeErrorKind::UnexpectedEof => "unexpected end of stream".to_string(),
            DecodeErrorKind::MissingEoi => "stream ends without EOI".to_string(),
            DecodeErrorKind::BadSegmentLength => "bad segment length".to_string(),
            DecodeErrorKind::Unsupported(s) => format!("unsupported feature: {s}"),
            DecodeErrorKind::Malformed(s) => format!("malformed data: {s}"),
            DecodeErrorKind::MissingTable(s) => format!("missing table: {s}"),
            DecodeErrorKind::BadHuffmanCode => "invalid Huffman code".to_string(),
        };
        match self.marker {
            Some(m) => write!(f, "{what} (marker 0xFF{m:02X}, offset {})", self.offset),
            None => write!(f, "{what} (offset {})", self.offset),
        }
    }
}
