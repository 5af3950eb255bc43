#!/usr/bin/env python3
"""Independent SP 800-22 reference values for the Rust test suite.

Generates 20 pseudo-random 100,000-bit sequences with splitmix64 (seed k,
each 64-bit output unpacked LSB first), evaluates the nine implemented
tests with numpy/scipy and writes tests/data/nist_reference.json.

    python3 tests/oracle/nist_reference.py > tests/data/nist_reference.json
"""

import json
import math

import numpy as np
from scipy.special import erfc, gammaincc
from scipy.stats import norm

N_BITS = 100_000
N_SEQUENCES = 20
MASK = (1 << 64) - 1


def splitmix64_bits(seed, n):
    state = seed & MASK
    out = []
    while len(out) < n:
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        z ^= z >> 31
        out.extend((z >> i) & 1 for i in range(64))
    return np.array(out[:n], dtype=np.int64)


def frequency(e):
    n = len(e)
    s = abs(np.sum(2 * e - 1)) / math.sqrt(n)
    return erfc(s / math.sqrt(2))


def block_frequency(e, m=128):
    n_blocks = len(e) // m
    blocks = e[: n_blocks * m].reshape(n_blocks, m)
    pi = blocks.sum(axis=1) / m
    chi2 = 4 * m * np.sum((pi - 0.5) ** 2)
    return gammaincc(n_blocks / 2, chi2 / 2)


def cusum(e, reverse=False):
    x = 2 * e - 1
    if reverse:
        x = x[::-1]
    z = int(np.max(np.abs(np.cumsum(x))))
    n = len(e)
    sn = math.sqrt(n)
    total = 1.0
    for k in range(math.floor((-n / z + 1) / 4), math.floor((n / z - 1) / 4) + 1):
        total -= norm.cdf((4 * k + 1) * z / sn) - norm.cdf((4 * k - 1) * z / sn)
    for k in range(math.floor((-n / z - 3) / 4), math.floor((n / z - 1) / 4) + 1):
        total += norm.cdf((4 * k + 3) * z / sn) - norm.cdf((4 * k + 1) * z / sn)
    return total


def runs(e):
    n = len(e)
    pi = e.sum() / n
    if abs(pi - 0.5) >= 2 / math.sqrt(n):
        return 0.0
    v = 1 + int(np.sum(e[1:] != e[:-1]))
    return erfc(abs(v - 2 * n * pi * (1 - pi)) / (2 * math.sqrt(2 * n) * pi * (1 - pi)))


def longest_run(e):
    # 6272 <= n < 750,000: M = 128, classes <=4, 5, 6, 7, 8, >=9.
    m, lo, hi = 128, 4, 9
    probs = [0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847]
    n_blocks = len(e) // m
    counts = [0] * len(probs)
    for b in range(n_blocks):
        block = e[b * m:(b + 1) * m]
        best = cur = 0
        for bit in block:
            cur = cur + 1 if bit else 0
            best = max(best, cur)
        counts[min(max(best, lo), hi) - lo] += 1
    chi2 = sum((c - n_blocks * p) ** 2 / (n_blocks * p) for c, p in zip(counts, probs))
    return gammaincc((len(probs) - 1) / 2, chi2 / 2)


def spectral(e):
    n = len(e)
    s = np.fft.fft(2.0 * e - 1.0)
    mod = np.abs(s[: n // 2])
    t = math.sqrt(math.log(1 / 0.05) * n)
    n0 = 0.95 * n / 2
    n1 = np.sum(mod < t)
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4)
    return erfc(abs(d) / math.sqrt(2))


def psi2(e, m):
    if m == 0:
        return 0.0
    n = len(e)
    ext = np.concatenate([e, e[: m - 1]])
    idx = np.zeros(n, dtype=np.int64)
    for j in range(m):
        idx = idx * 2 + ext[j:j + n]
    counts = np.bincount(idx, minlength=1 << m)
    return (1 << m) / n * np.sum(counts.astype(float) ** 2) - n


def serial(e, m=2):
    p0, p1, p2 = psi2(e, m), psi2(e, m - 1), psi2(e, m - 2)
    d1 = p0 - p1
    d2 = p0 - 2 * p1 + p2
    return gammaincc(2 ** (m - 2), d1 / 2), gammaincc(2 ** (m - 3), d2 / 2)


def phi(e, m):
    n = len(e)
    ext = np.concatenate([e, e[: m - 1]])
    idx = np.zeros(n, dtype=np.int64)
    for j in range(m):
        idx = idx * 2 + ext[j:j + n]
    c = np.bincount(idx, minlength=1 << m)
    c = c[c > 0] / n
    return float(np.sum(c * np.log(c)))


def approximate_entropy(e, m=2):
    n = len(e)
    apen = phi(e, m) - phi(e, m + 1)
    chi2 = 2 * n * (math.log(2) - apen)
    return gammaincc(2 ** (m - 1), chi2 / 2)


def main():
    rows = []
    for seed in range(N_SEQUENCES):
        e = splitmix64_bits(seed, N_BITS)
        s1, s2 = serial(e)
        rows.append({
            "seed": seed,
            "ones": int(e.sum()),
            "frequency": float(frequency(e)),
            "block_frequency": float(block_frequency(e)),
            "cusum_forward": float(cusum(e)),
            "cusum_reverse": float(cusum(e, reverse=True)),
            "runs": float(runs(e)),
            "longest_run": float(longest_run(e)),
            "spectral": float(spectral(e)),
            "serial_p1": float(s1),
            "serial_p2": float(s2),
            "approximate_entropy": float(approximate_entropy(e)),
        })
    print(json.dumps({"generator": "splitmix64", "bits": N_BITS, "sequences": rows}, indent=1))


if __name__ == "__main__":
    main()
