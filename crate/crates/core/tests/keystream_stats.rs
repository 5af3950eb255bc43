mod common;

use chaos_voice::chaos::{advance, SystemState, DEFAULT_STEP};
use chaos_voice::key::KeyComponent;
use chaos_voice::{generate, KeystreamGenerator, SecretKey};

const N: usize = 100_000;

#[test]
fn ones_fraction_near_half() {
    let bits = generate(&SecretKey::reference(), N).unwrap();
    let frac = bits.count_ones() as f64 / N as f64;
    assert!((0.49..=0.51).contains(&frac), "ones fraction {frac}");
}

#[test]
fn each_mixed_candidate_is_balanced() {
    let mut generator = KeystreamGenerator::new(&SecretKey::reference()).unwrap();
    let mut ones = [0usize; 4];
    for _ in 0..N {
        let trace = generator.next_traced().unwrap();
        for (count, &bit) in ones.iter_mut().zip(&trace.mixed) {
            *count += usize::from(bit);
        }
    }
    for (k, &count) in ones.iter().enumerate() {
        let frac = count as f64 / N as f64;
        assert!(
            (0.48..=0.52).contains(&frac),
            "candidate {} ones fraction {frac}",
            k + 1
        );
    }
}

#[test]
fn repeated_generation_is_identical() {
    let key = SecretKey::reference();
    assert_eq!(
        generate(&key, 20_000).unwrap(),
        generate(&key, 20_000).unwrap()
    );
}

#[test]
fn random_keys_stay_balanced() {
    let mut rng = common::rng(11);
    for _ in 0..5 {
        let key = common::random_key(&mut rng);
        let bits = generate(&key, 20_000).unwrap();
        let frac = bits.count_ones() as f64 / 20_000.0;
        assert!((0.48..=0.52).contains(&frac), "{frac} for\n{key}");
    }
}

#[test]
fn million_steps_stay_finite_and_bounded() {
    let key = SecretKey::reference();
    let lorenz = advance(
        &key.lorenz_params().unwrap(),
        &key.lorenz_initial(),
        1_000_000,
        DEFAULT_STEP,
    )
    .unwrap();
    let chen = advance(
        &key.chen_params().unwrap(),
        &key.chen_initial(),
        1_000_000,
        DEFAULT_STEP,
    )
    .unwrap();
    for s in [lorenz, chen] {
        assert!(s.is_finite());
        assert!(s.to_array().iter().all(|v| v.abs() < 100.0), "{s}");
    }
    assert_ne!(lorenz, SystemState::ORIGIN);
}

/// Two keys 1e-10 apart in x1_0 should give unrelated keystreams from the
/// start. The Lorenz side diverges slowly at this scale, so this is
/// expected to fail; see the README.
#[test]
fn x1_perturbation_decorrelates_first_10000_bits() {
    let key = SecretKey::reference();
    let a = generate(&key, 10_000).unwrap();
    let b = generate(&key.perturbed(KeyComponent::X1, 1e-10), 10_000).unwrap();
    let differing = a.iter().zip(b.iter()).filter(|(x, y)| x != y).count();
    let pct = 100.0 * differing as f64 / 10_000.0;
    assert!(pct >= 45.0, "only {pct}% of the first 10,000 bits differ");
}

#[test]
fn chen_perturbation_decorrelates_first_10000_bits() {
    let key = SecretKey::reference();
    let a = generate(&key, 10_000).unwrap();
    let b = generate(&key.perturbed(KeyComponent::Y1, 1e-10), 10_000).unwrap();
    let differing = a.iter().zip(b.iter()).filter(|(x, y)| x != y).count();
    assert!(differing >= 4_500, "{differing}");
}
