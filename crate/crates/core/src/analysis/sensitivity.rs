//! Key-sensitivity sweep: encrypt with the true key, decrypt with a key
//! that differs in exactly one component, and measure how much of the
//! signal is lost.

use std::thread;

use serde::Serialize;

use super::stats::percent_difference;
use crate::chaos::DEFAULT_STEP;
use crate::cipher::{decrypt_with_step, encrypt_with_step, VoiceSignal};
use crate::error::{Error, Result};
use crate::key::{KeyComponent, SecretKey};

/// Which key the decryption used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    /// `component + delta` for a real component, `t + 1` for the transient.
    Component {
        #[serde(serialize_with = "component_name")]
        component: KeyComponent,
    },
    /// The unmodified key.
    Control,
}

fn component_name<S: serde::Serializer>(
    c: &KeyComponent,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(c.name())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub label: String,
    pub perturbation: Perturbation,
    pub percent_difference: f64,
    /// Adding `delta` did not change the component's double value.
    pub sub_ulp: bool,
}

/// Fourteen rows: each real component `+ delta` and `t + 1` in key-file
/// order, then the unperturbed control.
pub fn perturbation_plan() -> Vec<Perturbation> {
    // Table order puts t after the Lorenz block.
    use KeyComponent::*;
    [X1, X2, X3, Sigma, Rho, R, Transient, Y1, Y2, Y3, A, B, C]
        .into_iter()
        .map(|component| Perturbation::Component { component })
        .chain(std::iter::once(Perturbation::Control))
        .collect()
}

pub fn sensitivity_sweep(
    key: &SecretKey,
    sig: &VoiceSignal,
    delta: f64,
) -> Result<Vec<SensitivityRow>> {
    sensitivity_sweep_with_step(key, sig, delta, DEFAULT_STEP)
}

/// Rows are evaluated on separate threads; the output order is fixed by
/// [`perturbation_plan`].
pub fn sensitivity_sweep_with_step(
    key: &SecretKey,
    sig: &VoiceSignal,
    delta: f64,
    step: f64,
) -> Result<Vec<SensitivityRow>> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Param(format!("delta must be positive, got {delta}")));
    }
    let ciphertext = encrypt_with_step(key, sig, step)?;

    let plan = perturbation_plan();
    let results: Vec<Result<SensitivityRow>> = thread::scope(|scope| {
        let handles: Vec<_> = plan
            .iter()
            .map(|&p| {
                let ciphertext = &ciphertext;
                scope.spawn(move || {
                    let (trial_key, label, sub_ulp) = match p {
                        Perturbation::Control => (*key, "delta = 0".to_string(), false),
                        Perturbation::Component { component } => {
                            let k = key.perturbed(component, delta);
                            let label = match component {
                                KeyComponent::Transient => "t + 1".to_string(),
                                c => format!("{c} + {delta:e}"),
                            };
                            let sub_ulp = component != KeyComponent::Transient && k == *key;
                            (k, label, sub_ulp)
                        }
                    };
                    let recovered = decrypt_with_step(&trial_key, ciphertext, step)?;
                    Ok(SensitivityRow {
                        label,
                        perturbation: p,
                        percent_difference: percent_difference(sig, &recovered)?,
                        sub_ulp,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sensitivity worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}
