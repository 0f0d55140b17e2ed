use crate::error::{domain, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Low-order word of γ for double-double arithmetic.
const EULER_GAMMA_LO: f64 = -4.942_915_152_430_645e-18;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) without argument checks; `x > 0`.
pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("log_gamma", "x > 0", x));
    }
    Ok(ln_gamma_unchecked(x))
}

/// ln(1/Γ(x)) for `x >= 0`; `-∞` at zero.
pub(crate) fn ln_recip_gamma(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else if x < 1.0 {
        x.ln() - ln_gamma_unchecked(x + 1.0)
    } else {
        -ln_gamma_unchecked(x)
    }
}

/// 1/Γ(x) for `x >= 0`.
pub fn recip_gamma(x: f64) -> f64 {
    ln_recip_gamma(x).exp()
}

/// Minimal double-double arithmetic, enough for the ζ-recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    pub(crate) const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub(crate) fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub(crate) fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn add(self, other: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }

    pub(crate) fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub(crate) fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub(crate) fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub(crate) fn div(self, other: Self) -> Self {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul(Self::from_f64(q1)));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul(Self::from_f64(q2)));
        let q3 = r.hi / other.hi;
        Self::new(q1, q2).add(Self::from_f64(q3))
    }

    pub(crate) fn powi(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }
}

/// Bernoulli numbers B_2, B_4, …, B_24 as (numerator, denominator).
const BERNOULLI: [(f64, f64); 12] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174_611.0, 330.0),
    (854_513.0, 138.0),
    (-236_364_091.0, 2730.0),
];

/// ζ(s) for integer `s >= 2` in double-double precision (Euler–Maclaurin with
/// 40 direct terms and 12 Bernoulli corrections).
pub(crate) fn zeta_dd(s: u32) -> DoubleDouble {
    debug_assert!(s >= 2);
    const N: u32 = 40;
    let mut sum = DoubleDouble::ZERO;
    for n in 1..N {
        let inv = DoubleDouble::ONE.div(DoubleDouble::from_f64(n as f64));
        sum = sum.add(inv.powi(s));
    }
    let big_n = DoubleDouble::from_f64(N as f64);
    let inv_n = DoubleDouble::ONE.div(big_n);
    let n_pow = inv_n.powi(s); // N^{-s}
    sum = sum.add(n_pow.mul(big_n).div(DoubleDouble::from_f64((s - 1) as f64)));
    sum = sum.add(n_pow.mul(DoubleDouble::from_f64(0.5)));
    // Correction m: B_{2m}/(2m)! · s(s+1)…(s+2m−2) · N^{−s−2m+1}.
    let mut rising = DoubleDouble::from_f64(s as f64); // s(s+1)…(s+2m−2)
    let mut factorial = DoubleDouble::from_f64(2.0); // (2m)!
    let mut power = n_pow.mul(inv_n); // N^{−s−2m+1}
    let inv_n2 = inv_n.mul(inv_n);
    for (m, &(num, den)) in BERNOULLI.iter().enumerate() {
        let m = m as u32 + 1;
        if m > 1 {
            let k = (s + 2 * m - 3) as f64;
            rising = rising
                .mul(DoubleDouble::from_f64(k))
                .mul(DoubleDouble::from_f64(k + 1.0));
            factorial = factorial
                .mul(DoubleDouble::from_f64((2 * m - 1) as f64))
                .mul(DoubleDouble::from_f64((2 * m) as f64));
            power = power.mul(inv_n2);
        }
        let bern = DoubleDouble::from_f64(num).div(DoubleDouble::from_f64(den));
        sum = sum.add(bern.div(factorial).mul(rising).mul(power));
    }
    sum
}

/// Taylor coefficients a_0..a_N of 1/Γ(1+x) at x = 0.
///
/// Computed from `n·a_n = γ·a_{n−1} + Σ_{k=2}^{n} (−1)^{k+1} ζ(k)·a_{n−k}`
/// (the exponential of the log-gamma series) in double-double arithmetic; the
/// forward recurrence cancels heavily, so plain `f64` loses all accuracy past
/// n ≈ 25.
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalGammaCoeffs {
    coeffs: Vec<f64>,
}

impl ReciprocalGammaCoeffs {
    pub const MAX_ORDER: usize = 80;

    pub fn new(order: usize) -> Result<Self> {
        Self::with_euler_gamma(order, EULER_GAMMA)
    }

    /// Same recurrence with a caller-supplied value of γ (used to probe the
    /// sensitivity of downstream checks).
    pub fn with_euler_gamma(order: usize, gamma: f64) -> Result<Self> {
        if order == 0 || order > Self::MAX_ORDER {
            return Err(Error::InvalidConfig(format!(
                "reciprocal-gamma order must be in 1..={}, got {order}",
                Self::MAX_ORDER
            )));
        }
        let gamma_dd = if gamma == EULER_GAMMA {
            DoubleDouble::new(EULER_GAMMA, EULER_GAMMA_LO)
        } else {
            DoubleDouble::from_f64(gamma)
        };
        let zetas: Vec<DoubleDouble> = (0..=order as u32)
            .map(|k| {
                if k >= 2 {
                    zeta_dd(k)
                } else {
                    DoubleDouble::ZERO
                }
            })
            .collect();
        let mut a = vec![DoubleDouble::ONE];
        for n in 1..=order {
            let mut acc = gamma_dd.mul(a[n - 1]);
            for k in 2..=n {
                let term = zetas[k].mul(a[n - k]);
                acc = if k % 2 == 1 {
                    acc.add(term)
                } else {
                    acc.sub(term)
                };
            }
            a.push(acc.div(DoubleDouble::from_f64(n as f64)));
        }
        Ok(Self {
            coeffs: a.into_iter().map(DoubleDouble::to_f64).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Σ a_j x^j (Horner).
    pub fn evaluate(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Convenience wrapper matching the operation name used elsewhere.
pub fn reciprocal_gamma_coeffs(order: usize) -> Result<ReciprocalGammaCoeffs> {
    ReciprocalGammaCoeffs::new(order)
}
