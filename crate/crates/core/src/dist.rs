//! Symmetric unimodal target distributions.

use rand::Rng;
use rand_distr::{Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A continuous target law with a density symmetric and unimodal about its
/// location parameter, so the median is the location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum TargetDistribution {
    Normal {
        mu: f64,
        sigma: f64,
    },
    Laplace {
        mu: f64,
        b: f64,
    },
    Cauchy {
        mu: f64,
        gamma: f64,
    },
    Logistic {
        mu: f64,
        s: f64,
    },
    /// Uniform on `[mu - w, mu + w]`.
    Uniform {
        mu: f64,
        w: f64,
    },
}

impl TargetDistribution {
    pub const STANDARD_NORMAL: TargetDistribution = TargetDistribution::Normal { mu: 0.0, sigma: 1.0 };

    /// Builds a family member from its name, location and scale.
    pub fn from_name(family: &str, loc: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !loc.is_finite() {
            return domain(format!("invalid location/scale ({loc}, {scale})"));
        }
        Ok(match family.to_ascii_lowercase().as_str() {
            "normal" | "gaussian" => TargetDistribution::Normal { mu: loc, sigma: scale },
            "laplace" => TargetDistribution::Laplace { mu: loc, b: scale },
            "cauchy" => TargetDistribution::Cauchy { mu: loc, gamma: scale },
            "logistic" => TargetDistribution::Logistic { mu: loc, s: scale },
            "uniform" => TargetDistribution::Uniform { mu: loc, w: scale },
            other => return domain(format!("unknown distribution family {other:?}")),
        })
    }

    pub fn median(&self) -> f64 {
        self.location_scale().0
    }

    /// The scale parameter of the family.
    pub fn scale(&self) -> f64 {
        self.location_scale().1
    }

    fn location_scale(&self) -> (f64, f64) {
        match *self {
            TargetDistribution::Normal { mu, sigma } => (mu, sigma),
            TargetDistribution::Laplace { mu, b } => (mu, b),
            TargetDistribution::Cauchy { mu, gamma } => (mu, gamma),
            TargetDistribution::Logistic { mu, s } => (mu, s),
            TargetDistribution::Uniform { mu, w } => (mu, w),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (mu, scale) = self.location_scale();
        let z = (x - mu) / scale;
        match self {
            TargetDistribution::Normal { .. } => std_normal_cdf(z),
            TargetDistribution::Laplace { .. } => {
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            TargetDistribution::Cauchy { .. } => 0.5 + z.atan() / std::f64::consts::PI,
            TargetDistribution::Logistic { .. } => 1.0 / (1.0 + (-z).exp()),
            TargetDistribution::Uniform { .. } => ((z + 1.0) / 2.0).clamp(0.0, 1.0),
        }
    }

    /// `F^{-1}(u)` for `0 < u < 1`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return domain(format!("quantile argument {u} not in (0, 1)"));
        }
        let (mu, scale) = self.location_scale();
        let z = match self {
            TargetDistribution::Normal { .. } => std_normal_quantile(u),
            TargetDistribution::Laplace { .. } => {
                let d = u - 0.5;
                -d.signum() * (-2.0 * d.abs()).ln_1p()
            }
            TargetDistribution::Cauchy { .. } => (std::f64::consts::PI * (u - 0.5)).tan(),
            TargetDistribution::Logistic { .. } => (u / (1.0 - u)).ln(),
            TargetDistribution::Uniform { .. } => 2.0 * u - 1.0,
        };
        Ok(mu + scale * z)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            TargetDistribution::Normal { mu, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                mu + sigma * z
            }
            _ => {
                let u: f64 = rng.sample(Open01);
                self.quantile(u).expect("Open01 draws lie in (0, 1)")
            }
        }
    }
}

/// Standard normal distribution function.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal quantile, Wichura's AS241 (PPND16), relative accuracy about 1e-16.
#[allow(clippy::excessive_precision)]
pub fn std_normal_quantile(u: f64) -> f64 {
    const A: [f64; 8] = [
        3.387_132_872_796_366_608,
        1.331_416_678_917_843_774_5e2,
        1.971_590_950_306_551_442_7e3,
        1.373_169_376_550_946_112_5e4,
        4.592_195_393_154_987_145_7e4,
        6.726_577_092_700_870_085_3e4,
        3.343_057_558_358_812_810_5e4,
        2.509_080_928_730_122_672_7e3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.231_333_070_160_091_125_2e1,
        6.871_870_074_920_579_083e2,
        5.394_196_021_424_751_107_7e3,
        2.121_379_430_158_659_586_7e4,
        3.930_789_580_009_271_061e4,
        2.872_908_573_572_194_267_4e4,
        5.226_495_278_852_854_561e3,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_577_34,
        4.630_337_846_156_545_295_9,
        5.769_497_221_460_691_405_5,
        3.647_848_324_763_204_605_04,
        1.270_458_252_452_368_382_58,
        2.417_807_251_774_506_117_7e-1,
        2.272_384_498_926_918_458_33e-2,
        7.745_450_142_783_414_076_4e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.053_191_626_637_758_821_87,
        1.676_384_830_183_803_849_4,
        6.897_673_349_851_000_045_5e-1,
        1.481_039_764_274_800_745_9e-1,
        1.519_866_656_361_645_719_66e-2,
        5.475_938_084_995_344_946e-4,
        1.050_750_071_644_416_843_24e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103_777_2,
        5.463_784_911_164_114_369_9,
        1.784_826_539_917_291_335_8,
        2.965_605_718_285_048_912_3e-1,
        2.653_218_952_657_612_309_3e-2,
        1.242_660_947_388_078_438_6e-3,
        2.711_555_568_743_487_578_15e-5,
        2.010_334_399_292_288_132_65e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.998_322_065_558_879_376_9e-1,
        1.369_298_809_227_358_053_1e-1,
        1.487_536_129_085_061_485_25e-2,
        7.868_691_311_456_132_591e-4,
        1.846_318_317_510_054_681_8e-5,
        1.421_511_758_316_445_888_7e-7,
        2.044_263_103_389_939_785_64e-15,
    ];

    fn poly(c: &[f64; 8], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
    }

    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    let q = u - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let tail = if q < 0.0 { u } else { 1.0 - u };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        r -= 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}
