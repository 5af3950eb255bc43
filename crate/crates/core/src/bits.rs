//! Bit sequences and their two on-disk encodings.
//!
//! Packed form stores eight bits per byte with the first bit of the stream in
//! the least-significant position of the first byte. A trailing partial byte
//! is zero-padded. The packed file prepends the true bit length as an 8-byte
//! little-endian integer. ASCII form is one `'0'`/`'1'` character per bit.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Size of the bit-count header of a packed keystream file.
pub const PACKED_HEADER_LEN: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitStream {
    bits: Vec<bool>,
}

impl BitStream {
    pub fn new() -> Self {
        BitStream::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        BitStream {
            bits: Vec::with_capacity(n),
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitStream { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// The first `n` bits (or the whole stream if shorter).
    pub fn prefix(&self, n: usize) -> BitStream {
        BitStream::from_bits(self.bits[..n.min(self.len())].to_vec())
    }

    /// Maps 0 to -1.0 and 1 to +1.0.
    pub fn to_bipolar(&self) -> Vec<f64> {
        self.iter().map(|b| if b { 1.0 } else { -1.0 }).collect()
    }

    pub fn to_packed_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        for (i, bit) in self.iter().enumerate() {
            if bit {
                out[i / 8] |= 1 << (i % 8);
            }
        }
        out
    }

    /// Unpacks `bit_len` bits; padding bits past `bit_len` are ignored.
    pub fn from_packed_bytes(bytes: &[u8], bit_len: usize) -> Result<Self> {
        if bytes.len() != bit_len.div_ceil(8) {
            return Err(Error::format(
                "payload",
                format!(
                    "{} payload bytes cannot hold exactly {bit_len} bits",
                    bytes.len()
                ),
            ));
        }
        Ok((0..bit_len)
            .map(|i| bytes[i / 8] >> (i % 8) & 1 == 1)
            .collect())
    }

    pub fn write_packed<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        w.write_all(&self.to_packed_bytes())?;
        Ok(())
    }

    pub fn read_packed<R: Read>(mut r: R) -> Result<Self> {
        let mut data = Vec::new();
        r.read_to_end(&mut data)?;
        Self::from_packed_file_bytes(&data)
    }

    pub fn from_packed_file_bytes(data: &[u8]) -> Result<Self> {
        if data.len() < PACKED_HEADER_LEN {
            return Err(Error::format(
                "header",
                format!(
                    "need {PACKED_HEADER_LEN} header bytes, file has {}",
                    data.len()
                ),
            ));
        }
        let (header, payload) = data.split_at(PACKED_HEADER_LEN);
        let bit_len = u64::from_le_bytes(header.try_into().expect("8-byte header"));
        let bit_len = usize::try_from(bit_len)
            .map_err(|_| Error::format("header", format!("bit count {bit_len} too large")))?;
        Self::from_packed_bytes(payload, bit_len)
    }

    pub fn to_ascii(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Parses a `'0'`/`'1'` string. A single trailing newline (LF or CRLF)
    /// is accepted.
    pub fn from_ascii(text: &str) -> Result<Self> {
        let body = text
            .strip_suffix("\r\n")
            .or_else(|| text.strip_suffix('\n'))
            .unwrap_or(text);
        body.chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::format(
                    "ascii bitstream",
                    format!("unexpected character {other:?} at position {i}"),
                )),
            })
            .collect()
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitStream {
            bits: iter.into_iter().collect(),
        }
    }
}

impl From<Vec<bool>> for BitStream {
    fn from(bits: Vec<bool>) -> Self {
        BitStream { bits }
    }
}
