//! The implemented subset of the NIST SP 800-22 rev. 1a battery.
//!
//! Each test takes the sequence as a `&[bool]` and returns the test
//! statistic with its p-value. Minimum input lengths follow the suite's
//! recommendations; pass [`Minimums::Relaxed`] to run the short worked
//! examples from the suite documentation.

use std::f64::consts::{LN_2, SQRT_2};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::special::{erfc, igamc, normal_cdf};
use crate::error::{Error, Result};

pub const DEFAULT_BLOCK_LEN: usize = 128;
pub const DEFAULT_SERIAL_M: usize = 2;
pub const DEFAULT_APEN_M: usize = 2;

/// Whether to enforce the recommended minimum sequence lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Minimums {
    Enforce,
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

impl TestResult {
    pub fn passed(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// The serial test yields two statistics and two p-values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SerialResult {
    pub del1: f64,
    pub del2: f64,
    pub p_value1: f64,
    pub p_value2: f64,
}

impl SerialResult {
    pub fn min_p(&self) -> f64 {
        self.p_value1.min(self.p_value2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CusumMode {
    Forward,
    Reverse,
}

fn require_len(test: &str, bits: &[bool], min: usize, minimums: Minimums) -> Result<()> {
    let floor = match minimums {
        Minimums::Enforce => min,
        Minimums::Relaxed => 1,
    };
    if bits.len() < floor {
        Err(Error::Length(format!(
            "{test} test needs at least {floor} bits, got {}",
            bits.len()
        )))
    } else {
        Ok(())
    }
}

fn ones(bits: &[bool]) -> usize {
    bits.iter().filter(|&&b| b).count()
}

fn checked(p: f64, test: &str) -> Result<f64> {
    if p.is_finite() {
        Ok(p.clamp(0.0, 1.0))
    } else {
        Err(Error::DegenerateInput(format!(
            "{test} test produced p-value {p}"
        )))
    }
}

pub fn frequency(bits: &[bool], minimums: Minimums) -> Result<TestResult> {
    require_len("frequency", bits, 100, minimums)?;
    let n = bits.len() as f64;
    let sum = 2.0 * ones(bits) as f64 - n;
    let s_obs = sum.abs() / n.sqrt();
    Ok(TestResult {
        statistic: s_obs,
        p_value: checked(erfc(s_obs / SQRT_2), "frequency")?,
    })
}

pub fn block_frequency(bits: &[bool], block_len: usize, minimums: Minimums) -> Result<TestResult> {
    require_len("block frequency", bits, 100, minimums)?;
    if block_len == 0 {
        return Err(Error::Param("block length must be positive".into()));
    }
    if block_len > bits.len() {
        return Err(Error::Length(format!(
            "block length {block_len} exceeds sequence length {}",
            bits.len()
        )));
    }
    if minimums == Minimums::Enforce && block_len < 20 {
        return Err(Error::Param(format!(
            "block length {block_len} is below 20"
        )));
    }
    let blocks = bits.len() / block_len;
    let m = block_len as f64;
    let sum: f64 = bits
        .chunks_exact(block_len)
        .map(|block| {
            let pi = ones(block) as f64 / m - 0.5;
            pi * pi
        })
        .sum();
    let chi2 = 4.0 * m * sum;
    Ok(TestResult {
        statistic: chi2,
        p_value: checked(igamc(blocks as f64 / 2.0, chi2 / 2.0), "block frequency")?,
    })
}

pub fn runs(bits: &[bool], minimums: Minimums) -> Result<TestResult> {
    require_len("runs", bits, 100, minimums)?;
    let n = bits.len() as f64;
    let pi = ones(bits) as f64 / n;
    let runs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    // Frequency prerequisite.
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return Ok(TestResult {
            statistic: runs as f64,
            p_value: 0.0,
        });
    }
    let expected = 2.0 * n * pi * (1.0 - pi);
    let p = erfc((runs as f64 - expected).abs() / (2.0 * (2.0 * n).sqrt() * pi * (1.0 - pi)));
    Ok(TestResult {
        statistic: runs as f64,
        p_value: checked(p, "runs")?,
    })
}

// Class probabilities as used by the reference implementation (more digits
// than the published tables for the 8- and 128-bit block sizes).
struct LongestRunTable {
    block_len: usize,
    /// Run lengths at or below `min_class` fall into class 0, at or above
    /// `min_class + probs.len() - 1` into the last class.
    min_class: usize,
    probs: &'static [f64],
}

const LONGEST_RUN_TABLES: [LongestRunTable; 3] = [
    LongestRunTable {
        block_len: 8,
        min_class: 1,
        probs: &[0.21484375, 0.3671875, 0.23046875, 0.1875],
    },
    LongestRunTable {
        block_len: 128,
        min_class: 4,
        probs: &[
            0.1174035788,
            0.242955959,
            0.249363483,
            0.17517706,
            0.102701071,
            0.112398847,
        ],
    },
    LongestRunTable {
        block_len: 10_000,
        min_class: 10,
        probs: &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
    },
];

/// Longest run of ones in a block. There is no tabulated block size below
/// 128 bits, so that minimum always applies.
pub fn longest_run(bits: &[bool]) -> Result<TestResult> {
    let n = bits.len();
    if n < 128 {
        return Err(Error::Length(format!(
            "longest run test needs at least 128 bits, got {n}"
        )));
    }
    let table = match n {
        0..=6271 => &LONGEST_RUN_TABLES[0],
        6272..=749_999 => &LONGEST_RUN_TABLES[1],
        _ => &LONGEST_RUN_TABLES[2],
    };
    let k = table.probs.len() - 1;
    let mut counts = vec![0usize; table.probs.len()];
    for block in bits.chunks_exact(table.block_len) {
        let mut longest = 0;
        let mut current = 0;
        for &b in block {
            if b {
                current += 1;
                longest = longest.max(current);
            } else {
                current = 0;
            }
        }
        let class = longest.clamp(table.min_class, table.min_class + k) - table.min_class;
        counts[class] += 1;
    }
    let blocks = (n / table.block_len) as f64;
    let chi2: f64 = counts
        .iter()
        .zip(table.probs)
        .map(|(&c, &p)| {
            let e = blocks * p;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    Ok(TestResult {
        statistic: chi2,
        p_value: checked(igamc(k as f64 / 2.0, chi2 / 2.0), "longest run")?,
    })
}

pub fn cusum(bits: &[bool], mode: CusumMode, minimums: Minimums) -> Result<TestResult> {
    require_len("cumulative sums", bits, 100, minimums)?;
    let step = |b: bool| if b { 1i64 } else { -1 };
    let mut sum = 0i64;
    let mut z = 0i64;
    let mut track = |b: bool| {
        sum += step(b);
        z = z.max(sum.abs());
    };
    match mode {
        CusumMode::Forward => bits.iter().for_each(|&b| track(b)),
        CusumMode::Reverse => bits.iter().rev().for_each(|&b| track(b)),
    }

    let n = bits.len() as i64;
    let sqrt_n = (n as f64).sqrt();
    let zf = z as f64;
    // Integer bounds truncate toward zero, as in the reference code.
    let mut sum1 = 0.0;
    for k in (-n / z + 1) / 4..=(n / z - 1) / 4 {
        let k = k as f64;
        sum1 += normal_cdf((4.0 * k + 1.0) * zf / sqrt_n);
        sum1 -= normal_cdf((4.0 * k - 1.0) * zf / sqrt_n);
    }
    let mut sum2 = 0.0;
    for k in (-n / z - 3) / 4..=(n / z - 1) / 4 {
        let k = k as f64;
        sum2 += normal_cdf((4.0 * k + 3.0) * zf / sqrt_n);
        sum2 -= normal_cdf((4.0 * k + 1.0) * zf / sqrt_n);
    }
    Ok(TestResult {
        statistic: zf,
        p_value: checked(1.0 - sum1 + sum2, "cumulative sums")?,
    })
}

/// Discrete Fourier transform (spectral) test.
pub fn spectral(bits: &[bool], minimums: Minimums) -> Result<TestResult> {
    require_len("spectral", bits, 1000, minimums)?;
    let n = bits.len();
    let mut buf: Vec<Complex<f64>> = bits
        .iter()
        .map(|&b| Complex::new(if b { 1.0 } else { -1.0 }, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let nf = n as f64;
    let threshold = ((1.0f64 / 0.05).ln() * nf).sqrt();
    let expected = 0.95 * nf / 2.0;
    let below = buf[..n / 2].iter().filter(|c| c.norm() < threshold).count() as f64;
    let d = (below - expected) / (nf * 0.95 * 0.05 / 4.0).sqrt();
    Ok(TestResult {
        statistic: d,
        p_value: checked(erfc(d.abs() / SQRT_2), "spectral")?,
    })
}

/// Frequency of every overlapping `m`-bit pattern, with the sequence
/// wrapped around by `m - 1` bits.
fn pattern_counts(bits: &[bool], m: usize) -> Vec<u64> {
    let mut counts = vec![0u64; 1 << m];
    if m == 0 {
        return counts;
    }
    let n = bits.len();
    let mask = (1usize << m) - 1;
    let mut window = 0usize;
    for &b in bits.iter().take(m - 1) {
        window = (window << 1 | usize::from(b)) & mask;
    }
    for i in 0..n {
        let b = bits[(i + m - 1) % n];
        window = (window << 1 | usize::from(b)) & mask;
        counts[window] += 1;
    }
    counts
}

fn psi_squared(bits: &[bool], m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as f64;
    let sum: f64 = pattern_counts(bits, m)
        .iter()
        .map(|&c| (c as f64) * (c as f64))
        .sum();
    sum * (1u64 << m) as f64 / n - n
}

fn max_pattern_len(n: usize) -> usize {
    (n.max(1).ilog2() as usize).saturating_sub(2)
}

pub fn serial(bits: &[bool], m: usize, minimums: Minimums) -> Result<SerialResult> {
    require_len("serial", bits, 100, minimums)?;
    if m < 2 {
        return Err(Error::Param(format!("serial test needs m >= 2, got {m}")));
    }
    if minimums == Minimums::Enforce && m > max_pattern_len(bits.len()) {
        return Err(Error::Param(format!(
            "serial m = {m} exceeds floor(log2 n) - 2 = {}",
            max_pattern_len(bits.len())
        )));
    }
    let psi_m = psi_squared(bits, m);
    let psi_m1 = psi_squared(bits, m - 1);
    let psi_m2 = psi_squared(bits, m - 2);
    let del1 = psi_m - psi_m1;
    let del2 = psi_m - 2.0 * psi_m1 + psi_m2;
    let p1 = igamc((1u64 << (m - 1)) as f64 / 2.0, del1 / 2.0);
    let p2 = igamc((1u64 << (m - 1)) as f64 / 4.0, del2 / 2.0);
    Ok(SerialResult {
        del1,
        del2,
        p_value1: checked(p1, "serial")?,
        p_value2: checked(p2, "serial")?,
    })
}

fn phi(bits: &[bool], m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as f64;
    pattern_counts(bits, m)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum()
}

pub fn approximate_entropy(bits: &[bool], m: usize, minimums: Minimums) -> Result<TestResult> {
    require_len("approximate entropy", bits, 100, minimums)?;
    if m < 1 {
        return Err(Error::Param("approximate entropy needs m >= 1".into()));
    }
    if minimums == Minimums::Enforce && m > max_pattern_len(bits.len()) {
        return Err(Error::Param(format!(
            "approximate entropy m = {m} exceeds floor(log2 n) - 2 = {}",
            max_pattern_len(bits.len())
        )));
    }
    let n = bits.len() as f64;
    let apen = phi(bits, m) - phi(bits, m + 1);
    let chi2 = 2.0 * n * (LN_2 - apen);
    let p = igamc((1u64 << (m - 1)) as f64, chi2 / 2.0);
    Ok(TestResult {
        statistic: chi2,
        p_value: checked(p, "approximate entropy")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    /// 100-bit sequence used throughout the suite documentation.
    const EPSILON_100: &str = "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";

    fn round6(v: f64) -> f64 {
        (v * 1e6).round() / 1e6
    }

    #[test]
    fn frequency_worked_examples() {
        let r = frequency(&parse("1011010101"), Minimums::Relaxed).unwrap();
        assert_eq!(round6(r.p_value), 0.527089);
        let r = frequency(&parse(EPSILON_100), Minimums::Enforce).unwrap();
        assert_eq!(round6(r.p_value), 0.109599);
    }

    #[test]
    fn frequency_edge_cases() {
        let balanced: Vec<bool> = (0..100).map(|i| i % 2 == 0).collect();
        assert_eq!(
            frequency(&balanced, Minimums::Enforce).unwrap().p_value,
            1.0
        );
        let zeros = vec![false; 100];
        let r = frequency(&zeros, Minimums::Enforce).unwrap();
        assert!(r.p_value < 1e-20 && !r.passed(0.01));
        assert!(matches!(
            frequency(&zeros[..99], Minimums::Enforce),
            Err(Error::Length(_))
        ));
    }

    #[test]
    fn block_frequency_worked_examples() {
        let r = block_frequency(&parse("0110011010"), 3, Minimums::Relaxed).unwrap();
        assert_eq!(round6(r.p_value), 0.801252);
        let r = block_frequency(&parse(EPSILON_100), 10, Minimums::Relaxed).unwrap();
        assert_eq!(round6(r.p_value), 0.706438);
    }

    #[test]
    fn block_frequency_edge_cases() {
        let halves: Vec<bool> = (0..1280).map(|i| i % 2 == 1).collect();
        assert_eq!(
            block_frequency(&halves, 128, Minimums::Enforce)
                .unwrap()
                .p_value,
            1.0
        );
        let all_ones = vec![true; 1280];
        assert!(
            block_frequency(&all_ones, 128, Minimums::Enforce)
                .unwrap()
                .p_value
                < 1e-100
        );
        assert!(matches!(
            block_frequency(&halves, 2000, Minimums::Enforce),
            Err(Error::Length(_))
        ));
    }

    #[test]
    fn runs_worked_examples() {
        let r = runs(&parse("1001101011"), Minimums::Relaxed).unwrap();
        assert_eq!(round6(r.p_value), 0.147232);
        let r = runs(&parse(EPSILON_100), Minimums::Enforce).unwrap();
        assert_eq!(round6(r.p_value), 0.500798);
    }

    #[test]
    fn runs_fails_prerequisite() {
        assert_eq!(runs(&[true; 200], Minimums::Enforce).unwrap().p_value, 0.0);
    }

    #[test]
    fn longest_run_worked_example() {
        let eps = "11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001101011111001100111001101101100010110010";
        let r = longest_run(&parse(eps)).unwrap();
        assert_eq!(round6(r.p_value), 0.180609);
        assert!(longest_run(&parse(EPSILON_100)).is_err());
    }

    #[test]
    fn cusum_worked_examples() {
        let r = cusum(&parse("1011010111"), CusumMode::Forward, Minimums::Relaxed).unwrap();
        assert_eq!(round6(r.p_value), 0.411659);
        let r = cusum(&parse(EPSILON_100), CusumMode::Forward, Minimums::Enforce).unwrap();
        assert_eq!(round6(r.p_value), 0.219194);
        let r = cusum(&parse(EPSILON_100), CusumMode::Reverse, Minimums::Enforce).unwrap();
        assert_eq!(round6(r.p_value), 0.114866);
    }

    #[test]
    fn cusum_alternating() {
        let alt: Vec<bool> = (0..1000).map(|i| i % 2 == 0).collect();
        let r = cusum(&alt, CusumMode::Forward, Minimums::Enforce).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(r.p_value > 0.999_999, "{}", r.p_value);
    }

    #[test]
    fn spectral_small_example() {
        // 1001010011: |S_0..S_4| = 0, 2, 4.472, 2, 4.472, all below
        // T = sqrt(10 ln 20) = 5.473, so N1 = 5, N0 = 4.75,
        // d = 0.25 / sqrt(10 * 0.95 * 0.05 / 4) = 0.725476.
        let r = spectral(&parse("1001010011"), Minimums::Relaxed).unwrap();
        assert!((r.statistic - 0.725476).abs() < 1e-6);
        assert_eq!(round6(r.p_value), 0.468160);
        assert!(spectral(&parse(EPSILON_100), Minimums::Enforce).is_err());
    }

    #[test]
    fn serial_worked_example() {
        let r = serial(&parse("0011011101"), 3, Minimums::Relaxed).unwrap();
        assert_eq!(round6(r.p_value1), 0.808792);
        assert_eq!(round6(r.p_value2), 0.670320);
        assert!(serial(&parse(EPSILON_100), 1, Minimums::Relaxed).is_err());
        // floor(log2 100) - 2 = 4
        assert!(serial(&parse(EPSILON_100), 4, Minimums::Enforce).is_ok());
        assert!(serial(&parse(EPSILON_100), 5, Minimums::Enforce).is_err());
    }

    #[test]
    fn approximate_entropy_worked_examples() {
        let r = approximate_entropy(&parse("0100110101"), 3, Minimums::Relaxed).unwrap();
        assert_eq!(round6(r.p_value), 0.261961);
        let r = approximate_entropy(&parse(EPSILON_100), 2, Minimums::Enforce).unwrap();
        assert_eq!(round6(r.p_value), 0.235301);
    }

    #[test]
    fn approximate_entropy_of_constant_sequence() {
        let r = approximate_entropy(&vec![false; 1000], 2, Minimums::Enforce).unwrap();
        assert!(r.p_value < 1e-100);
    }

    #[test]
    fn pattern_counts_wrap() {
        // 0011 wrapped by one bit: 00 01 11 10
        assert_eq!(pattern_counts(&parse("0011"), 2), vec![1, 1, 1, 1]);
        assert_eq!(pattern_counts(&parse("0011"), 1), vec![2, 2]);
    }
}
