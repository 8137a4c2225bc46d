#![allow(dead_code)]

//! Test-only oracles, independent of the library's numerical routes.

use num_bigint::BigUint;

/// Exact `P(Z <= k)` for every `k`, `Z ~ Binomial(n, m / 2^bits)`, by
/// big-integer summation of `C(n,i) m^i (2^bits - m)^(n-i)` over `2^(bits n)`.
pub struct ExactBinomial {
    n: usize,
    log2_denom: i64,
    cumulative: Vec<BigUint>,
}

impl ExactBinomial {
    pub fn new(n: usize, m: u64, bits: u32) -> Self {
        let denom = 1u64 << bits;
        assert!(m <= denom);
        let a = BigUint::from(m);
        let b = BigUint::from(denom - m);
        let mut pow_a = vec![BigUint::from(1u32)];
        let mut pow_b = vec![BigUint::from(1u32)];
        for i in 1..=n {
            pow_a.push(&pow_a[i - 1] * &a);
            pow_b.push(&pow_b[i - 1] * &b);
        }
        let mut binom = BigUint::from(1u32);
        let mut acc = BigUint::from(0u32);
        let mut cumulative = Vec::with_capacity(n + 1);
        for i in 0..=n {
            acc += &binom * &pow_a[i] * &pow_b[n - i];
            cumulative.push(acc.clone());
            binom = binom * BigUint::from((n - i) as u64) / BigUint::from((i + 1) as u64);
        }
        ExactBinomial { n, log2_denom: bits as i64 * n as i64, cumulative }
    }

    pub fn p(m: u64, bits: u32) -> f64 {
        m as f64 / (1u64 << bits) as f64
    }

    /// `P(Z <= k)` rounded to f64 (0 when below the subnormal range).
    pub fn cdf(&self, k: usize) -> f64 {
        to_f64(&self.cumulative[k.min(self.n)], self.log2_denom)
    }

    /// `P(Z >= k)`.
    pub fn sf(&self, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        if k > self.n {
            return 0.0;
        }
        let total = &self.cumulative[self.n];
        to_f64(&(total - &self.cumulative[k - 1]), self.log2_denom)
    }
}

fn to_f64(num: &BigUint, log2_denom: i64) -> f64 {
    let bits = num.bits() as i64;
    if bits == 0 {
        return 0.0;
    }
    let shift = (bits - 64).max(0);
    let top: u64 = (num >> shift as usize).try_into().expect("fits in 64 bits");
    ldexp(top as f64, shift - log2_denom)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// Standard normal cdf from `1/2 + phi(x) (x + x^3/3 + x^5/(3*5) + ...)`;
/// below -3 the lower tail comes from the continued fraction
/// `phi(x) / (t + 1/(t + 2/(t + 3/(t + ...))))` with `t = -x`.
pub fn normal_cdf_series(x: f64) -> f64 {
    let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if x < -3.0 {
        let t = -x;
        let mut frac = t;
        for j in (1..=200).rev() {
            frac = t + j as f64 / frac;
        }
        return density / frac;
    }
    let mut term = x;
    let mut sum = x;
    let mut j = 1.0;
    while term.abs() > 1e-300 && (term / sum).abs() > 1e-18 {
        j += 2.0;
        term *= x * x / j;
        sum += term;
    }
    0.5 + density * sum
}

/// `Phi^{-1}(u)` by bisection on [`normal_cdf_series`].
pub fn normal_quantile_oracle(u: f64) -> f64 {
    let (mut lo, mut hi) = (-9.0f64, 9.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf_series(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact `P(lo < X < hi)` for `X ~ Binomial(n, p)` by direct summation in f64
/// of log-gamma-free recursive terms, for small n only.
pub fn interior_prob_small(n: usize, p: f64, k: usize) -> f64 {
    let q = 1.0 - p;
    let mut term = q.powi(n as i32);
    let mut total = 0.0;
    for i in 0..=n {
        if i > k && i < n - k {
            total += term;
        }
        if i < n {
            term *= (n - i) as f64 / (i + 1) as f64 * p / q;
        }
    }
    total
}
