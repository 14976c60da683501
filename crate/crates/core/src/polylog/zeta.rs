//! Riemann zeta function on the real line.

/// `B_{2j}` for `j = 1..=12` as exact rationals.
const BERNOULLI_2J: [(f64, f64); 12] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
];

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of absolute values of everything added.
    pub(crate) fn magnitude(&self) -> f64 {
        self.abs
    }
}

/// Euler–Maclaurin evaluation of `zeta(s)` for real `s != 1`, `s > 1 - 2m`:
/// `n - 1` explicit terms, the integral and midpoint corrections, and `m`
/// Bernoulli corrections. Returns the value and an error bound (twice the
/// first omitted correction plus rounding).
pub fn zeta_euler_maclaurin(s: f64, n: usize, m: usize) -> (f64, f64) {
    assert!(n >= 2 && (1..BERNOULLI_2J.len()).contains(&m), "unsupported Euler-Maclaurin order");
    let mut acc = CompensatedSum::default();
    for k in (1..n).rev() {
        acc.add((k as f64).powf(-s));
    }
    let nf = n as f64;
    acc.add(nf.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * nf.powf(-s));

    // rising factorial s (s+1) ... (s + 2j - 2), divided by (2j)!
    let mut coeff = s / 2.0;
    let mut next = 0.0;
    for (j, &(num, den)) in BERNOULLI_2J.iter().enumerate().take(m + 1) {
        let j = j + 1;
        if j > 1 {
            let a = s + (2 * j - 3) as f64;
            let b = s + (2 * j - 2) as f64;
            coeff *= a * b / (((2 * j - 1) * (2 * j)) as f64);
        }
        let term = num / den * coeff * nf.powf(-s - (2 * j - 1) as f64);
        if j <= m {
            acc.add(term);
        } else {
            next = term;
        }
    }
    let value = acc.value();
    let bound = 2.0 * next.abs() + 4.0 * f64::EPSILON * acc.magnitude();
    (value, bound)
}

/// `zeta(s)` for real `s != 1`. Negative arguments go through the
/// functional equation.
pub fn riemann_zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s == 0.0 {
        return -0.5;
    }
    if s > 0.0 {
        return zeta_euler_maclaurin(s, 20, 10).0;
    }
    if s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return 0.0;
    }
    let t = 1.0 - s;
    let half_sin = (std::f64::consts::FRAC_PI_2 * s).sin();
    2f64.powf(s) * std::f64::consts::PI.powf(s - 1.0) * half_sin * libm::tgamma(t) * zeta_euler_maclaurin(t, 20, 10).0
}
