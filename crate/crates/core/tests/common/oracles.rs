//! Reference computations written independently of the library.
//!
//! Nothing here calls into `quon_thermo` except for plain data access; each
//! oracle uses a different algorithm from the code it checks.

#![allow(dead_code)]

/// `B_{2j} / (2j)!` for `j = 1..=8`.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// `zeta(s)` for `s > 1` by Euler–Maclaurin with 100 explicit terms and
/// eight Bernoulli corrections, summed smallest term first.
pub fn zeta_em(s: f64) -> f64 {
    const N: usize = 100;
    let n = N as f64;
    let mut sum = 0.0;
    for k in (1..N).rev() {
        sum += (k as f64).powf(-s);
    }
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // s (s+1) ... (s + 2j - 2) n^{-s-2j+1}
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let a = s + (2 * j - 1) as f64;
            let b = s + (2 * j) as f64;
            rising *= a * b;
            power /= n * n;
        }
        tail += c * rising * power;
    }
    sum + tail
}

/// Dirichlet eta `sum_{k>=1} (-1)^{k+1} k^{-s}`: the first 29 terms
/// directly, the remainder by Euler's transform of the forward differences.
pub fn eta_euler(s: f64) -> f64 {
    const M: usize = 30;
    const DEPTH: usize = 48;
    let mut head = 0.0;
    for k in (1..M).rev() {
        let t = (k as f64).powf(-s);
        head += if k % 2 == 1 { t } else { -t };
    }
    // remainder sum_{j>=0} (-1)^j a_{M+j} with a_k = k^{-s}, sign (-1)^{M+1}
    let mut diffs: Vec<f64> = (0..=DEPTH).map(|j| ((M + j) as f64).powf(-s)).collect();
    let mut rem = 0.0;
    let mut scale = 0.5;
    for n in 0..=DEPTH {
        let d = diffs[0];
        rem += if n % 2 == 0 { d } else { -d } * scale;
        scale *= 0.5;
        for i in 0..diffs.len() - 1 - n {
            diffs[i] = diffs[i + 1] - diffs[i];
        }
    }
    // Euler's transform: sum (-1)^j a_j = sum_n (-1)^n (Delta^n a)_0 / 2^{n+1}
    let sign = if M % 2 == 1 { 1.0 } else { -1.0 };
    head + sign * rem
}

/// `zeta(s)` from `eta(s) / (1 - 2^{1-s})`.
pub fn zeta_from_eta(s: f64) -> f64 {
    eta_euler(s) / (1.0 - 2f64.powf(1.0 - s))
}

/// `sum_k x^k / k^nu` summed until the terms fall below `1e-22`, `x < 1`.
pub fn bose_direct(nu: f64, x: f64) -> f64 {
    let mut terms = Vec::new();
    let mut p = 1.0;
    for k in 1..200_000 {
        p *= x;
        let t = p / (k as f64).powf(nu);
        terms.push(t);
        if t < 1e-22 {
            break;
        }
    }
    terms.iter().rev().sum()
}

/// `sum_k (-1)^{k+1} x^k / k^nu` for `x <= 0.9`, summed pairwise from the tail.
pub fn fermi_direct(nu: f64, x: f64) -> f64 {
    assert!(x <= 0.9, "plain alternating sum is only used well inside the disc");
    let mut terms = Vec::new();
    let mut p = 1.0;
    for k in 1..2000 {
        p *= x;
        let t = p / (k as f64).powf(nu);
        terms.push(if k % 2 == 1 { t } else { -t });
        if t < 1e-22 {
            break;
        }
    }
    terms.iter().rev().sum()
}

/// `ln Z` of bosons (`sign = 1`) or fermions (`sign = -1`) from the product
/// formula `prod_i (1 -+ z e^{-beta e_i})^{-+g_i}`, taken level by level.
pub fn ln_z_product(levels: &[(f64, f64)], beta: f64, z: f64, sign: f64) -> f64 {
    levels
        .iter()
        .map(|&(e, g)| {
            let x = z * (-beta * e).exp();
            if sign > 0.0 {
                -g * (-x).ln_1p()
            } else {
                g * x.ln_1p()
            }
        })
        .sum()
}

/// Occupation from the Planck-type formula `g / (e^{beta e} / z - q)`.
pub fn occupation(e: f64, g: f64, beta: f64, z: f64, q: f64) -> f64 {
    g / ((beta * e).exp() / z - q)
}

/// Central difference `(f(x + h) - f(x - h)) / 2h`.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `ln Z_q` summed directly from the defining series over levels, for
/// finite-difference use: `-(1/q) sum g ln(1 - z q e^{-beta e})`, or `z zeta`.
pub fn ln_z_q(levels: &[(f64, f64)], beta: f64, z: f64, q: f64) -> f64 {
    if q == 0.0 {
        return z * levels.iter().map(|&(e, g)| g * (-beta * e).exp()).sum::<f64>();
    }
    -levels.iter().map(|&(e, g)| g * (-z * q * (-beta * e).exp()).ln_1p()).sum::<f64>() / q
}

/// The eight-level reference spectrum, restated.
pub fn reference_levels() -> Vec<(f64, f64)> {
    [2.0, 3.0, 3.0, 5.0, 4.0, 6.0, 5.0, 7.0]
        .iter()
        .enumerate()
        .map(|(i, &g)| (0.5 * i as f64, g))
        .collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}
