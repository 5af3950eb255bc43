//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::f64::consts::PI;

use chaos_voice::{SecretKey, VoiceSignal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Length and rate of the test recording used for the sensitivity table.
pub const VOICE_SAMPLES: usize = 59_114;
pub const VOICE_RATE: u32 = 16_000;

/// splitmix64 with each 64-bit output unpacked LSB first. Mirrors
/// `tests/oracle/nist_reference.py`.
pub fn splitmix64_bits(seed: u64, n: usize) -> Vec<bool> {
    let mut state = seed;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        out.extend((0..64).map(|i| (z >> i) & 1 == 1));
    }
    out.truncate(n);
    out
}

/// A voiced, speech-like test signal: a glottal pulse train with vibrato,
/// three formant-weighted harmonics bands, a 4 Hz syllable envelope with
/// pauses, and a little breath noise.
pub fn synthetic_voice(seed: u64, samples: usize, rate: u32) -> VoiceSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = rate as f64;
    let formants = [(700.0, 1.0), (1220.0, 0.5), (2600.0, 0.25)];
    let mut phase = 0.0f64;
    let out = (0..samples)
        .map(|i| {
            let t = i as f64 / fs;
            let f0 = 140.0 + 25.0 * (2.0 * PI * 0.7 * t).sin() + 6.0 * (2.0 * PI * 5.5 * t).sin();
            phase += 2.0 * PI * f0 / fs;
            let mut v = 0.0;
            for h in 1..=20 {
                let fh = f0 * h as f64;
                let gain: f64 = formants
                    .iter()
                    .map(|&(fc, a)| a / (1.0 + ((fh - fc) / 150.0).powi(2)))
                    .sum();
                v += gain * (phase * h as f64).sin() / h as f64;
            }
            let syllable = (2.0 * PI * 4.0 * t).sin().max(0.0).powf(0.6);
            let pause = if (t % 1.1) > 0.9 { 0.05 } else { 1.0 };
            let noise = rng.gen_range(-1.0..1.0) * 0.02;
            let s = 9000.0 * (syllable * pause * v + noise);
            s.round().clamp(i16::MIN as f64, i16::MAX as f64) as i16
        })
        .collect();
    VoiceSignal::new(out, rate).unwrap()
}

pub fn test_voice() -> VoiceSignal {
    synthetic_voice(7, VOICE_SAMPLES, VOICE_RATE)
}

/// Uniformly random 16-bit samples.
pub fn random_signal(rng: &mut ChaCha8Rng, samples: usize) -> VoiceSignal {
    let s = (0..samples).map(|_| rng.gen::<i16>()).collect();
    VoiceSignal::new(s, 8000).unwrap()
}

/// A random key with both systems in their chaotic regimes.
pub fn random_key(rng: &mut ChaCha8Rng) -> SecretKey {
    SecretKey {
        x1_0: rng.gen_range(-15.0..15.0),
        x2_0: rng.gen_range(-15.0..15.0),
        x3_0: rng.gen_range(5.0..40.0),
        sigma: rng.gen_range(9.0..11.0),
        rho: rng.gen_range(2.4..2.9),
        r: rng.gen_range(26.0..35.0),
        y1_0: rng.gen_range(-15.0..15.0),
        y2_0: rng.gen_range(-15.0..15.0),
        y3_0: rng.gen_range(10.0..40.0),
        a: 35.0,
        b: 3.0,
        c: rng.gen_range(27.0..28.4),
        t: rng.gen_range(1000..5000),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Path of the shipped reference key.
pub fn reference_key_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/reference.key")
}
