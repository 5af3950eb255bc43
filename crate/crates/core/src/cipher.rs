//! XOR stream cipher over 16-bit PCM voice signals.
//!
//! A signal becomes a bitstream by reinterpreting each sample as an
//! unsigned 16-bit word (two's complement) and emitting its bits LSB first.
//! Encryption XORs that stream with the keystream; decryption is the same
//! operation.

use crate::bits::BitStream;
use crate::chaos::DEFAULT_STEP;
use crate::error::{Error, Result};
use crate::key::SecretKey;
use crate::keystream::generate_with_step;

pub const BITS_PER_SAMPLE: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoiceSignal {
    pub samples: Vec<i16>,
    pub sample_rate: u32,
}

impl VoiceSignal {
    pub fn new(samples: Vec<i16>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::Param("sample rate must be positive".into()));
        }
        Ok(VoiceSignal {
            samples,
            sample_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.samples.iter().map(|&s| f64::from(s)).collect()
    }
}

/// Encrypted payload. Its length is always `16 * sample_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherText {
    payload: BitStream,
    sample_count: usize,
    sample_rate: u32,
}

impl CipherText {
    pub fn new(payload: BitStream, sample_count: usize, sample_rate: u32) -> Result<Self> {
        if payload.len() != BITS_PER_SAMPLE * sample_count {
            return Err(Error::format(
                "payload",
                format!(
                    "{} payload bits do not match {sample_count} samples",
                    payload.len()
                ),
            ));
        }
        Ok(CipherText {
            payload,
            sample_count,
            sample_rate,
        })
    }

    pub fn payload(&self) -> &BitStream {
        &self.payload
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    /// The ciphertext read as PCM, which is how it is stored in a WAV
    /// container.
    pub fn to_signal(&self) -> VoiceSignal {
        bits_to_samples(&self.payload, self.sample_rate)
            .expect("payload length is a multiple of 16")
    }

    pub fn from_signal(sig: &VoiceSignal) -> Self {
        CipherText {
            payload: samples_to_bits(sig),
            sample_count: sig.len(),
            sample_rate: sig.sample_rate,
        }
    }
}

pub fn samples_to_bits(sig: &VoiceSignal) -> BitStream {
    let mut out = BitStream::with_capacity(sig.len() * BITS_PER_SAMPLE);
    for &s in &sig.samples {
        let word = s as u16;
        for bit in 0..BITS_PER_SAMPLE {
            out.push(word >> bit & 1 == 1);
        }
    }
    out
}

pub fn bits_to_samples(bits: &BitStream, sample_rate: u32) -> Result<VoiceSignal> {
    if !bits.len().is_multiple_of(BITS_PER_SAMPLE) {
        return Err(Error::format(
            "payload",
            format!(
                "{} bits is not a whole number of 16-bit samples",
                bits.len()
            ),
        ));
    }
    let samples = bits
        .as_slice()
        .chunks_exact(BITS_PER_SAMPLE)
        .map(|chunk| {
            let word = chunk
                .iter()
                .enumerate()
                .fold(0u16, |acc, (i, &b)| acc | (u16::from(b) << i));
            word as i16
        })
        .collect();
    Ok(VoiceSignal {
        samples,
        sample_rate,
    })
}

/// XORs `data` with the first `data.len()` bits of `keystream`.
pub fn xor_bits(data: &BitStream, keystream: &BitStream) -> Result<BitStream> {
    if keystream.len() < data.len() {
        return Err(Error::Length(format!(
            "keystream has {} bits, data needs {}",
            keystream.len(),
            data.len()
        )));
    }
    Ok(data
        .iter()
        .zip(keystream.iter())
        .map(|(d, k)| d ^ k)
        .collect())
}

pub fn encrypt(key: &SecretKey, sig: &VoiceSignal) -> Result<CipherText> {
    encrypt_with_step(key, sig, DEFAULT_STEP)
}

pub fn encrypt_with_step(key: &SecretKey, sig: &VoiceSignal, step: f64) -> Result<CipherText> {
    let plain = samples_to_bits(sig);
    let ks = generate_with_step(key, plain.len(), step)?;
    CipherText::new(xor_bits(&plain, &ks)?, sig.len(), sig.sample_rate)
}

pub fn decrypt(key: &SecretKey, ct: &CipherText) -> Result<VoiceSignal> {
    decrypt_with_step(key, ct, DEFAULT_STEP)
}

pub fn decrypt_with_step(key: &SecretKey, ct: &CipherText, step: f64) -> Result<VoiceSignal> {
    if ct.payload.len() != BITS_PER_SAMPLE * ct.sample_count {
        return Err(Error::format(
            "payload",
            "payload length does not match sample count",
        ));
    }
    let ks = generate_with_step(key, ct.payload.len(), step)?;
    bits_to_samples(&xor_bits(&ct.payload, &ks)?, ct.sample_rate)
}
