//! Mixed keystream generation.
//!
//! Each iteration advances the Lorenz and Chen systems by one RK4 step and
//! turns the six new coordinates into one output bit:
//!
//! 1. fractional part of `x * 10^5` (Lorenz) and `y * 10^6` (Chen);
//! 2. threshold to bits: `omega_k = [x_hat >= 0.5]`, `phi_k = [y_hat <= 0.5]`;
//! 3. XOR-mix into four candidate bits;
//! 4. a 4-to-1 multiplexer picks one candidate, with select lines
//!    `S1 = phi_1 ^ phi_2 ^ phi_3` (most significant) and
//!    `S0 = omega_1 ^ omega_2 ^ omega_3`.

use crate::bits::BitStream;
use crate::chaos::{advance, chen_deriv, lorenz_deriv};
use crate::chaos::{rk4_step, ChenParams, LorenzParams, SystemState, DEFAULT_STEP};
use crate::error::{Error, Result};
use crate::key::SecretKey;

const LORENZ_SCALE: f64 = 1e5;
const CHEN_SCALE: f64 = 1e6;

/// Largest double strictly below 1.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

fn fractional_part(value: f64, scale: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Domain(format!(
            "cannot pre-process non-finite value {value}"
        )));
    }
    let scaled = value * scale;
    let frac = scaled - scaled.floor();
    // A tiny negative `scaled` rounds `scaled - floor(scaled)` up to 1.0.
    Ok(if frac >= 1.0 { BELOW_ONE } else { frac })
}

/// `x * 10^5 - floor(x * 10^5)`, in `[0, 1)`.
pub fn preprocess_lorenz(x: f64) -> Result<f64> {
    fractional_part(x, LORENZ_SCALE)
}

/// `y * 10^6 - floor(y * 10^6)`, in `[0, 1)`.
pub fn preprocess_chen(y: f64) -> Result<f64> {
    fractional_part(y, CHEN_SCALE)
}

fn require_unit(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "quantizer input {v} is outside [0, 1]"
        )))
    }
}

/// Lorenz quantizer: 1 iff `x_hat >= 0.5`.
pub fn quantize_omega(x_hat: f64) -> Result<bool> {
    require_unit(x_hat)?;
    Ok(x_hat >= 0.5)
}

/// Chen quantizer: 1 iff `y_hat <= 0.5`. The comparison is deliberately
/// the mirror image of [`quantize_omega`].
pub fn quantize_phi(y_hat: f64) -> Result<bool> {
    require_unit(y_hat)?;
    Ok(y_hat <= 0.5)
}

/// XOR mixing of the six quantized bits into four candidates.
pub fn mix(omega: [bool; 3], phi: [bool; 3]) -> [bool; 4] {
    let [w1, w2, w3] = omega;
    let [p1, p2, p3] = phi;
    [w1 ^ p2 ^ w3, p3 ^ w1 ^ p1, w2 ^ p1 ^ p2, w3 ^ w2 ^ p3]
}

/// Returns `(S1, S0)`.
pub fn select_lines(omega: [bool; 3], phi: [bool; 3]) -> (bool, bool) {
    (phi[0] ^ phi[1] ^ phi[2], omega[0] ^ omega[1] ^ omega[2])
}

/// 4-to-1 multiplexer: index `2 * S1 + S0` into `candidates`.
pub fn mux_select(candidates: [bool; 4], s1: bool, s0: bool) -> bool {
    candidates[usize::from(s1) * 2 + usize::from(s0)]
}

/// All intermediate values of one generator iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationTrace {
    pub lorenz: SystemState,
    pub chen: SystemState,
    pub x_hat: [f64; 3],
    pub y_hat: [f64; 3],
    pub omega: [bool; 3],
    pub phi: [bool; 3],
    pub mixed: [bool; 4],
    pub s1: bool,
    pub s0: bool,
    pub bit: bool,
}

/// A running keystream. Construction discards the key's `t` transient
/// iterations; every call to [`next_bit`](Self::next_bit) consumes one more.
#[derive(Clone, Debug)]
pub struct KeystreamGenerator {
    key: SecretKey,
    lorenz_params: LorenzParams,
    chen_params: ChenParams,
    lorenz: SystemState,
    chen: SystemState,
    step: f64,
    iteration: u64,
}

impl KeystreamGenerator {
    pub fn new(key: &SecretKey) -> Result<Self> {
        Self::with_step(key, DEFAULT_STEP)
    }

    pub fn with_step(key: &SecretKey, step: f64) -> Result<Self> {
        key.validate()?;
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Param(format!(
                "step size must be positive, got {step}"
            )));
        }
        let lorenz_params = key.lorenz_params()?;
        let chen_params = key.chen_params()?;
        let lorenz = advance(&lorenz_params, &key.lorenz_initial(), key.t, step)?;
        let chen = advance(&chen_params, &key.chen_initial(), key.t, step)?;
        Ok(KeystreamGenerator {
            key: *key,
            lorenz_params,
            chen_params,
            lorenz,
            chen,
            step,
            iteration: 0,
        })
    }

    pub fn key(&self) -> &SecretKey {
        &self.key
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Output bits produced so far.
    pub fn iteration_count(&self) -> u64 {
        self.iteration
    }

    pub fn lorenz_state(&self) -> SystemState {
        self.lorenz
    }

    pub fn chen_state(&self) -> SystemState {
        self.chen
    }

    pub fn next_bit(&mut self) -> Result<bool> {
        self.next_traced().map(|t| t.bit)
    }

    /// Advances one iteration and returns every intermediate value.
    pub fn next_traced(&mut self) -> Result<IterationTrace> {
        let (lp, cp) = (self.lorenz_params, self.chen_params);
        let lorenz = rk4_step(|s| lorenz_deriv(s, &lp), &self.lorenz, self.step)
            .map_err(|e| self.diverged("Lorenz", e))?;
        let chen = rk4_step(|s| chen_deriv(s, &cp), &self.chen, self.step)
            .map_err(|e| self.diverged("Chen", e))?;

        let x = lorenz.to_array();
        let y = chen.to_array();
        let x_hat = [
            preprocess_lorenz(x[0])?,
            preprocess_lorenz(x[1])?,
            preprocess_lorenz(x[2])?,
        ];
        let y_hat = [
            preprocess_chen(y[0])?,
            preprocess_chen(y[1])?,
            preprocess_chen(y[2])?,
        ];
        let omega = [
            quantize_omega(x_hat[0])?,
            quantize_omega(x_hat[1])?,
            quantize_omega(x_hat[2])?,
        ];
        let phi = [
            quantize_phi(y_hat[0])?,
            quantize_phi(y_hat[1])?,
            quantize_phi(y_hat[2])?,
        ];
        let mixed = mix(omega, phi);
        let (s1, s0) = select_lines(omega, phi);
        let bit = mux_select(mixed, s1, s0);

        self.lorenz = lorenz;
        self.chen = chen;
        self.iteration += 1;
        Ok(IterationTrace {
            lorenz,
            chen,
            x_hat,
            y_hat,
            omega,
            phi,
            mixed,
            s1,
            s0,
            bit,
        })
    }

    fn diverged(&self, system: &str, e: Error) -> Error {
        match e {
            Error::IntegrationDiverged(msg) => Error::IntegrationDiverged(format!(
                "{system} system at output bit {}: {msg}",
                self.iteration
            )),
            other => other,
        }
    }

    pub fn take_bits(&mut self, n: usize) -> Result<BitStream> {
        let mut out = BitStream::with_capacity(n);
        for _ in 0..n {
            out.push(self.next_bit()?);
        }
        Ok(out)
    }
}

/// The first `n` keystream bits for `key` at the default step.
pub fn generate(key: &SecretKey, n: usize) -> Result<BitStream> {
    generate_with_step(key, n, DEFAULT_STEP)
}

pub fn generate_with_step(key: &SecretKey, n: usize, step: f64) -> Result<BitStream> {
    KeystreamGenerator::with_step(key, step)?.take_bits(n)
}
