//! Chaos-based mixed keystream generation for 16-bit voice encryption.
//!
//! A Lorenz and a Chen system are integrated side by side with fixed-step
//! RK4. Every iteration turns their six coordinates into one keystream bit
//! (pre-processing, quantization, XOR mixing, 4-to-1 multiplexing). The
//! keystream is XORed with PCM voice data, and [`analysis`] provides the
//! randomness battery, autocorrelation, residual deviation and
//! key-sensitivity measurements used to evaluate it.
//!
//! ```
//! use chaos_voice::cipher::{decrypt, encrypt, VoiceSignal};
//! use chaos_voice::key::SecretKey;
//!
//! let key = SecretKey { t: 100, ..SecretKey::reference() };
//! let voice = VoiceSignal::new(vec![0, 120, -340, 560], 16_000).unwrap();
//! let ct = encrypt(&key, &voice).unwrap();
//! assert_eq!(decrypt(&key, &ct).unwrap(), voice);
//! ```

pub mod analysis;
pub mod bits;
pub mod chaos;
pub mod cipher;
pub mod cli;
pub mod error;
pub mod key;
pub mod keystream;
pub mod wav;

pub use bits::BitStream;
pub use cipher::{decrypt, encrypt, CipherText, VoiceSignal};
pub use error::{Error, Result};
pub use key::SecretKey;
pub use keystream::{generate, KeystreamGenerator};
