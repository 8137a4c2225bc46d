//! Exact binomial tail machinery.
//!
//! Point probabilities use Loader's saddle-point expansion (Stirling error
//! plus the deviance term `bd0`), which keeps full relative precision for
//! large `n` where products of `p^i (1-p)^(n-i)` underflow. Tails are summed
//! from the nearest point outward with a ratio recurrence, scaled by the
//! leading term, so every tail is accurate relative to its own size.

use crate::error::{check_eps, domain, Result};

/// `Binomial(n, p)` with `n >= 1` and `0 <= p <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binomial {
    n: u64,
    p: f64,
}

impl Binomial {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if n < 1 {
            return domain("binomial trial count must be at least 1");
        }
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("success probability {p} not in [0, 1]"));
        }
        Ok(Binomial { n, p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn q(&self) -> f64 {
        1.0 - self.p
    }

    fn mean(&self) -> f64 {
        self.n as f64 * self.p
    }

    pub fn pmf(&self, k: i64) -> f64 {
        if k < 0 || k as u64 > self.n {
            return 0.0;
        }
        ln_pmf(k as u64, self.n, self.p, self.q()).exp()
    }

    /// `P(Z <= k)`. Arguments below 0 give 0 and arguments at or above `n` give 1.
    pub fn cdf(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        if k as u64 >= self.n {
            return 1.0;
        }
        let k = k as u64;
        if (k as f64) < self.mean() {
            self.ln_sum_down(k).exp()
        } else {
            1.0 - self.ln_sum_up(k + 1).exp()
        }
    }

    /// `P(Z >= k)`.
    pub fn sf(&self, k: i64) -> f64 {
        if k <= 0 {
            return 1.0;
        }
        if k as u64 > self.n {
            return 0.0;
        }
        let k = k as u64;
        if (k as f64) > self.mean() {
            self.ln_sum_up(k).exp()
        } else {
            1.0 - self.ln_sum_down(k - 1).exp()
        }
    }

    /// Natural log of `P(Z <= k)`; finite even where the probability underflows.
    pub fn ln_cdf(&self, k: i64) -> f64 {
        if k < 0 {
            return f64::NEG_INFINITY;
        }
        if k as u64 >= self.n {
            return 0.0;
        }
        let k = k as u64;
        if (k as f64) < self.mean() {
            self.ln_sum_down(k)
        } else {
            ln_one_minus_exp(self.ln_sum_up(k + 1))
        }
    }

    /// Natural log of `P(Z >= k)`.
    pub fn ln_sf(&self, k: i64) -> f64 {
        if k <= 0 {
            return 0.0;
        }
        if k as u64 > self.n {
            return f64::NEG_INFINITY;
        }
        let k = k as u64;
        if (k as f64) > self.mean() {
            self.ln_sum_up(k)
        } else {
            ln_one_minus_exp(self.ln_sum_down(k - 1))
        }
    }

    /// `P(lo <= Z <= hi)`, choosing the difference that avoids cancellation.
    pub fn prob_between(&self, lo: i64, hi: i64) -> f64 {
        let lo = lo.max(0);
        let hi = hi.min(self.n as i64);
        if lo > hi {
            return 0.0;
        }
        let mean = self.mean();
        if (lo as f64) > mean {
            (self.sf(lo) - self.sf(hi + 1)).max(0.0)
        } else if (hi as f64) < mean {
            (self.cdf(hi) - self.cdf(lo - 1)).max(0.0)
        } else {
            (1.0 - self.cdf(lo - 1) - self.sf(hi + 1)).max(0.0)
        }
    }

    /// `ln sum_{i=0}^{k} pmf(i)`, requiring `k` at or below the mode.
    fn ln_sum_down(&self, k: u64) -> f64 {
        let (n, p, q) = (self.n, self.p, self.q());
        if p == 0.0 {
            return 0.0;
        }
        if q == 0.0 {
            return if k >= n { 0.0 } else { f64::NEG_INFINITY };
        }
        let lead = ln_pmf(k, n, p, q);
        let odds = q / p;
        let mut acc = Neumaier::new(1.0);
        let mut term = 1.0;
        let mut i = k;
        while i > 0 {
            term *= i as f64 / (n - i + 1) as f64 * odds;
            i -= 1;
            acc.add(term);
            if term < acc.value() * 1e-17 {
                break;
            }
        }
        lead + acc.value().ln()
    }

    /// `ln sum_{i=k}^{n} pmf(i)`, requiring `k` at or above the mode.
    fn ln_sum_up(&self, k: u64) -> f64 {
        let (n, p, q) = (self.n, self.p, self.q());
        if q == 0.0 {
            return 0.0;
        }
        if p == 0.0 {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        let lead = ln_pmf(k, n, p, q);
        let odds = p / q;
        let mut acc = Neumaier::new(1.0);
        let mut term = 1.0;
        let mut i = k;
        while i < n {
            term *= (n - i) as f64 / (i + 1) as f64 * odds;
            i += 1;
            acc.add(term);
            if term < acc.value() * 1e-17 {
                break;
            }
        }
        lead + acc.value().ln()
    }
}

/// `P(Z <= k)` for `Z ~ Binomial(n, p)`.
pub fn binom_cdf(n: u64, p: f64, k: i64) -> Result<f64> {
    Ok(Binomial::new(n, p)?.cdf(k))
}

fn check_region(n: u64, k: u64) -> Result<()> {
    if 2 * k + 2 > n {
        return domain(format!("acceptance region {k} < T < {} is empty for n = {n}", n as i64 - k as i64));
    }
    Ok(())
}

/// Level of the classical sign-test interval, `2 P(Z <= k)` with `Z ~ Binomial(n, 1/2)`.
pub fn classical_alpha(n: u64, k: u64) -> Result<f64> {
    check_region(n, k)?;
    Ok(2.0 * Binomial::new(n, 0.5)?.cdf(k as i64))
}

/// `sum_{i=k}^{n-k} C(n,i) p^i (1-p)^(n-i)`, inclusive on both ends.
pub fn h_interior(n: u64, k: u64, p: f64) -> Result<f64> {
    if 2 * k > n {
        return domain(format!("k = {k} exceeds n - k for n = {n}"));
    }
    let b = Binomial::new(n, p)?;
    Ok(b.prob_between(k as i64, (n - k) as i64))
}

/// Worst-case two-sided level of the `k`-interval over the `eps`-neighborhood:
/// `1 - P(k < Z < n - k)` with `Z ~ Binomial(n, (1 - eps)/2)`.
pub fn alpha_star(n: u64, k: u64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    check_region(n, k)?;
    Ok(worst_case_level(n, k, eps))
}

/// `alpha_star` without argument checks; `eps` may be anywhere in `[0, 1]`.
pub(crate) fn worst_case_level(n: u64, k: u64, eps: f64) -> f64 {
    let b = Binomial { n, p: (1.0 - eps) / 2.0 };
    (b.cdf(k as i64) + b.sf((n - k) as i64)).min(1.0)
}

fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn new(first: f64) -> Self {
        Neumaier { sum: first, comp: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// ln Gamma(n + 1) - (n + 1/2) ln n + n - ln sqrt(2 pi), for n = 0..=15.
#[allow(clippy::excessive_precision)]
const STIRLING_ERR: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_258_219_670_26,
    0.041_340_695_955_409_294_093_822_08,
    0.027_677_925_684_998_339_148_789_29,
    0.020_790_672_103_765_093_111_522_77,
    0.016_644_691_189_821_192_163_194_87,
    0.013_876_128_823_070_747_998_745_73,
    0.011_896_709_945_891_770_095_055_72,
    0.010_411_265_261_972_096_497_478_57,
    0.009_255_462_182_712_732_917_728_637,
    0.008_330_563_433_362_871_256_469_319,
    0.007_573_675_487_951_840_794_972_024,
    0.006_942_840_107_209_529_865_664_153,
    0.006_408_994_188_004_207_068_439_631,
    0.005_951_370_112_758_847_735_624_416,
    0.005_554_733_551_962_801_371_038_69,
];

fn stirling_err(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15 {
        return STIRLING_ERR[n as usize];
    }
    let x = n as f64;
    let xx = x * x;
    if n > 500 {
        (S0 - S1 / xx) / x
    } else if n > 80 {
        (S0 - (S1 - S2 / xx) / xx) / x
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / xx) / xx) / xx) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / xx) / xx) / xx) / xx) / x
    }
}

/// Deviance term `x ln(x / np) + np - x`, evaluated without cancellation near `x = np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `ln P(Z = x)` for `Z ~ Binomial(n, p)`, `q = 1 - p`.
fn ln_pmf(x: u64, n: u64, p: f64, q: f64) -> f64 {
    // Mirror so that p = q gives bitwise-symmetric results.
    if 2 * x > n {
        return ln_pmf(n - x, n, q, p);
    }
    if p == 0.0 {
        return if x == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    if x == 0 {
        return if p < 0.1 { -bd0(nf, nf * q) - nf * p } else { nf * q.ln() };
    }
    let xf = x as f64;
    let lc = stirling_err(n) - stirling_err(x) - stirling_err(n - x) - bd0(xf, nf * p) - bd0(nf - xf, nf * q);
    let lf = 2.0 * LN_SQRT_2PI + xf.ln() + (-xf / nf).ln_1p();
    lc - 0.5 * lf
}
