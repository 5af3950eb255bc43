//! Minimal RIFF/WAVE codec for 16-bit mono PCM.
//!
//! Reading walks every chunk; `fmt ` and `data` are interpreted and all
//! other chunks are returned untouched in [`WavContents::extra_chunks`].
//! Writing always produces the canonical 44-byte header followed by the
//! sample data.

use std::fs;
use std::path::Path;

use crate::cipher::VoiceSignal;
use crate::error::{Error, Result};

const PCM_FORMAT: u16 = 1;
pub const CANONICAL_HEADER_LEN: usize = 44;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chunk {
    pub id: [u8; 4],
    pub data: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WavContents {
    pub signal: VoiceSignal,
    pub extra_chunks: Vec<Chunk>,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

struct Format {
    sample_rate: u32,
}

fn parse_fmt(body: &[u8]) -> Result<Format> {
    if body.len() < 16 {
        return Err(Error::format(
            "fmt chunk",
            format!("fmt chunk is {} bytes, need 16", body.len()),
        ));
    }
    let format_code = u16_at(body, 0);
    let channels = u16_at(body, 2);
    let sample_rate = u32_at(body, 4);
    let block_align = u16_at(body, 12);
    let bits = u16_at(body, 14);

    if format_code != PCM_FORMAT {
        return Err(Error::format(
            "format code",
            format!("format code {format_code:#06x} is not uncompressed PCM (1)"),
        ));
    }
    if channels != 1 {
        return Err(Error::format(
            "channels",
            format!("{channels} channels; only mono is supported"),
        ));
    }
    if bits != 16 {
        return Err(Error::format(
            "bit depth",
            format!("{bits} bits per sample; only 16-bit is supported"),
        ));
    }
    if sample_rate == 0 {
        return Err(Error::format("sample rate", "sample rate is zero"));
    }
    if block_align != 2 {
        return Err(Error::format(
            "block align",
            format!("block align {block_align}, expected 2"),
        ));
    }
    Ok(Format { sample_rate })
}

pub fn parse_wav(bytes: &[u8]) -> Result<WavContents> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" {
        return Err(Error::format("RIFF header", "missing RIFF signature"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(Error::format("RIFF header", "RIFF form type is not WAVE"));
    }

    let mut format = None;
    let mut samples = None;
    let mut extra_chunks = Vec::new();
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id: [u8; 4] = bytes[pos..pos + 4].try_into().expect("4 bytes");
        let size = u32_at(bytes, pos + 4) as usize;
        let start = pos + 8;
        let end = start
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| {
                Error::format(
                    "chunk size",
                    format!(
                        "chunk {:?} claims {size} bytes past end of file",
                        String::from_utf8_lossy(&id)
                    ),
                )
            })?;
        let body = &bytes[start..end];
        match &id {
            b"fmt " => format = Some(parse_fmt(body)?),
            b"data" => {
                if !size.is_multiple_of(2) {
                    return Err(Error::format(
                        "data chunk",
                        format!("{size} data bytes is not a whole number of 16-bit samples"),
                    ));
                }
                samples = Some(
                    body.chunks_exact(2)
                        .map(|c| i16::from_le_bytes([c[0], c[1]]))
                        .collect::<Vec<_>>(),
                );
            }
            _ => extra_chunks.push(Chunk {
                id,
                data: body.to_vec(),
            }),
        }
        // Chunks are word-aligned.
        pos = end + (size & 1);
    }

    let format = format.ok_or_else(|| Error::format("fmt chunk", "no fmt chunk"))?;
    let samples = samples.ok_or_else(|| Error::format("data chunk", "no data chunk"))?;
    Ok(WavContents {
        signal: VoiceSignal {
            samples,
            sample_rate: format.sample_rate,
        },
        extra_chunks,
    })
}

pub fn encode_wav(sig: &VoiceSignal) -> Vec<u8> {
    let data_len = (sig.samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(CANONICAL_HEADER_LEN + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&sig.sample_rate.to_le_bytes());
    out.extend_from_slice(&(sig.sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for s in &sig.samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<VoiceSignal> {
    read_wav_contents(path).map(|c| c.signal)
}

pub fn read_wav_contents(path: impl AsRef<Path>) -> Result<WavContents> {
    parse_wav(&fs::read(path)?)
}

pub fn write_wav(path: impl AsRef<Path>, sig: &VoiceSignal) -> Result<()> {
    fs::write(path, encode_wav(sig))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signal() -> VoiceSignal {
        VoiceSignal::new(vec![0, 1, -1, i16::MAX, i16::MIN, 1234], 16_000).unwrap()
    }

    /// Builds a WAV by hand with arbitrary fmt fields and extra chunks.
    fn build(
        format: u16,
        channels: u16,
        bits: u16,
        extra: &[(&[u8; 4], &[u8])],
        data: &[u8],
    ) -> Vec<u8> {
        let mut body = Vec::new();
        body.extend_from_slice(b"WAVE");
        body.extend_from_slice(b"fmt ");
        body.extend_from_slice(&16u32.to_le_bytes());
        body.extend_from_slice(&format.to_le_bytes());
        body.extend_from_slice(&channels.to_le_bytes());
        body.extend_from_slice(&8000u32.to_le_bytes());
        let align = channels * bits / 8;
        body.extend_from_slice(&(8000 * u32::from(align)).to_le_bytes());
        body.extend_from_slice(&align.to_le_bytes());
        body.extend_from_slice(&bits.to_le_bytes());
        for (id, payload) in extra {
            body.extend_from_slice(*id);
            body.extend_from_slice(&(payload.len() as u32).to_le_bytes());
            body.extend_from_slice(payload);
            if payload.len() % 2 == 1 {
                body.push(0);
            }
        }
        body.extend_from_slice(b"data");
        body.extend_from_slice(&(data.len() as u32).to_le_bytes());
        body.extend_from_slice(data);
        let mut out = b"RIFF".to_vec();
        out.extend_from_slice(&(body.len() as u32).to_le_bytes());
        out.extend_from_slice(&body);
        out
    }

    #[test]
    fn canonical_round_trip() {
        let bytes = encode_wav(&signal());
        assert_eq!(bytes.len(), CANONICAL_HEADER_LEN + 12);
        let back = parse_wav(&bytes).unwrap();
        assert_eq!(back.signal, signal());
        assert!(back.extra_chunks.is_empty());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.wav");
        write_wav(&path, &signal()).unwrap();
        assert_eq!(read_wav(&path).unwrap(), signal());
    }

    #[test]
    fn extra_chunks_preserved() {
        let bytes = build(
            1,
            1,
            16,
            &[(b"LIST", b"abc"), (b"fact", b"1234")],
            &[1, 0, 255, 255],
        );
        let c = parse_wav(&bytes).unwrap();
        assert_eq!(c.signal.samples, vec![1, -1]);
        assert_eq!(c.extra_chunks.len(), 2);
        assert_eq!(&c.extra_chunks[0].id, b"LIST");
        assert_eq!(c.extra_chunks[0].data, b"abc");
        assert_eq!(c.extra_chunks[1].data, b"1234");
    }

    fn field_of(bytes: &[u8]) -> &'static str {
        match parse_wav(bytes) {
            Err(Error::Format { field, .. }) => field,
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn unsupported_formats_name_the_field() {
        assert_eq!(field_of(&build(1, 2, 16, &[], &[0; 8])), "channels");
        assert_eq!(field_of(&build(1, 1, 8, &[], &[0; 8])), "bit depth");
        assert_eq!(field_of(&build(3, 1, 16, &[], &[0; 8])), "format code");
        assert_eq!(field_of(&build(1, 1, 16, &[], &[0; 3])), "data chunk");
        assert_eq!(field_of(b"RIFX\0\0\0\0WAVE"), "RIFF header");
        assert_eq!(field_of(b"RIFF\0\0\0\0AVI "), "RIFF header");
    }

    #[test]
    fn truncated_files() {
        let mut bytes = encode_wav(&signal());
        bytes.truncate(bytes.len() - 1);
        assert_eq!(field_of(&bytes), "chunk size");
        assert_eq!(field_of(&encode_wav(&signal())[..36]), "data chunk");
    }
}
