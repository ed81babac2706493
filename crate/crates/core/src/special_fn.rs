//! Special functions behind every analytic formula in the crate.
//!
//! Everything that ends up as a probability mass or density is assembled in
//! log-space and exponentiated last, so populations far beyond the factorial
//! overflow threshold (n ≈ 170) stay representable.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::domain(format!("probability {value} outside [0, 1]")))
        }
    }

    /// Clamps rounding spill-over (e.g. `1 + 1e-17`) back into `[0, 1]`.
    pub(crate) fn saturating(value: f64) -> Self {
        debug_assert!(!value.is_nan());
        Probability(value.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// Strengths `(α, β)` of the external influence toward the correct and the
/// incorrect alternative. Real-valued; integer zealot counts are a special case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapePair {
    alpha: f64,
    beta: f64,
}

impl ShapePair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(alpha) && ok(beta) {
            Ok(ShapePair { alpha, beta })
        } else {
            Err(Error::domain(format!(
                "shape parameters must be finite and positive, got alpha={alpha}, beta={beta}"
            )))
        }
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The pair with the two alternatives relabelled.
    pub fn swapped(&self) -> Self {
        ShapePair {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// `α / (α + β)`: the chance that a voter copying only zealots is correct.
    pub fn signal_probability(&self) -> Probability {
        Probability::saturating(self.alpha / (self.alpha + self.beta))
    }
}

#[allow(clippy::excessive_precision)]
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ζ(k) − 1` for `k = 2, 3, …, 41`.
#[allow(clippy::excessive_precision)]
const ZETA_MINUS_ONE: [f64; 40] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_943e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
    2.328_311_833_676_505e-10,
    1.164_155_017_270_052e-10,
    5.820_772_087_902_701e-11,
    2.910_385_044_497_1e-11,
    1.455_192_189_104_198e-11,
    7.275_959_835_057_482e-12,
    3.637_979_547_378_651e-12,
    1.818_989_650_307_066e-12,
    9.094_947_840_263_888e-13,
    4.547_473_783_042_154e-13,
];

/// Coefficients `B₂ₖ / (2k(2k−1))` of the Stirling series for `ln Γ`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(2 + z)` for `|z| ≤ 1/2`, from the Taylor expansion about 2:
///
/// ```text
/// ln Γ(2 + z) = (1 − γ) z + Σ_{k≥2} (−1)^k (ζ(k) − 1) z^k / k
/// ```
///
/// The series has no constant term, so relative accuracy survives at the
/// zeros of `ln Γ` at 1 and 2.
fn ln_gamma_near_two(z: f64) -> f64 {
    let w = -z;
    let mut acc = 0.0;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        acc = acc * w + c / k;
    }
    (1.0 - EULER_GAMMA) * z + acc * w * w
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series * inv
}

/// Natural log of the gamma function for `x > 0`.
///
/// Piecewise: Taylor series about 2 on `[0.5, 2.5)` (shifted to reach
/// `(0, 0.5)`), downward recurrence onto that window for `[2.5, 10)`, and
/// the Stirling series with eight Bernoulli terms from 10 upward. Relative
/// error stays near a few ulp on `(0, 1e6)`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(format!(
            "log_gamma requires a finite positive argument, got {x}"
        )));
    }
    Ok(if x < 0.5 {
        // Γ(x) = Γ(1 + x) / x and ln Γ(1 + x) = ln Γ(2 + x) − ln(1 + x)
        ln_gamma_near_two(x) - x.ln_1p() - x.ln()
    } else if x < 1.5 {
        let z = x - 1.0;
        ln_gamma_near_two(z) - z.ln_1p()
    } else if x < 2.5 {
        ln_gamma_near_two(x - 2.0)
    } else if x < 10.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y >= 2.5 {
            y -= 1.0;
            prod *= y;
        }
        prod.ln() + ln_gamma_near_two(y - 2.0)
    } else {
        ln_gamma_stirling(x)
    })
}

/// `ln B(α, β) = ln Γ(α) + ln Γ(β) − ln Γ(α + β)`.
pub fn log_beta(shape: ShapePair) -> Result<f64> {
    let (a, b) = (shape.alpha, shape.beta);
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

const CF_TOLERANCE: f64 = 1e-14;
const CF_MAX_ITER: usize = 500;
const CF_TINY: f64 = 1e-300;

/// Modified Lentz evaluation of the continued fraction for `I_x(a, b)`.
/// Converges quickly for `x < (a + 1) / (a + b + 2)`.
fn inc_beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    let guard = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;

    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        // even step
        let num = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + num * d);
        c = guard(1.0 + num / c);
        h *= d * c;

        // odd step
        let num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + num * d);
        c = guard(1.0 + num / c);
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < CF_TOLERANCE {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence {
        routine: "incomplete beta continued fraction",
        iterations: CF_MAX_ITER,
    })
}

/// Regularized incomplete beta function `I_x(α, β)`, the Beta(α, β) cdf.
///
/// Uses the continued fraction directly below the mean-like switch point
/// `(α + 1) / (α + β + 2)` and the reflection `1 − I_{1−x}(β, α)` above it.
/// `I_0 = 0` and `I_1 = 1` exactly, as is `I_{1/2}(c, c) = 1/2`.
pub fn reg_inc_beta(x: f64, shape: ShapePair) -> Result<Probability> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("incomplete beta argument {x} outside [0, 1]")));
    }
    let (a, b) = (shape.alpha, shape.beta);
    if x == 0.0 {
        return Ok(Probability(0.0));
    }
    if x == 1.0 {
        return Ok(Probability(1.0));
    }
    if x == 0.5 && a == b {
        return Ok(Probability(0.5));
    }

    let ln_front = a * x.ln() + b * (-x).ln_1p() - log_beta(shape)?;
    let front = ln_front.exp();
    let value = if x < (a + 1.0) / (a + b + 2.0) {
        front * inc_beta_cf(x, a, b)? / a
    } else {
        1.0 - front * inc_beta_cf(1.0 - x, b, a)? / b
    };
    Ok(Probability::saturating(value))
}

/// Beta(α, β) density on the open unit interval.
pub fn beta_pdf(v: f64, shape: ShapePair) -> Result<f64> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::domain(format!("beta density argument {v} outside (0, 1)")));
    }
    let (a, b) = (shape.alpha, shape.beta);
    let ln_density = (a - 1.0) * v.ln() + (b - 1.0) * (-v).ln_1p() - log_beta(shape)?;
    Ok(ln_density.exp())
}

/// Standard normal cdf `Φ(z) = erfc(−z/√2) / 2`.
pub fn normal_cdf(z: f64) -> Result<Probability> {
    if !z.is_finite() {
        return Err(Error::domain(format!("normal cdf requires a finite argument, got {z}")));
    }
    Ok(Probability::saturating(0.5 * libm::erfc(-z / SQRT_2)))
}

/// Standard normal density; used by the quadrature cross-checks.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(a: f64, b: f64) -> ShapePair {
        ShapePair::new(a, b).unwrap()
    }

    /// ln Γ(x) evaluated with mpmath at 50 digits.
    #[allow(clippy::excessive_precision, clippy::approx_constant)]
    const LN_GAMMA_REFERENCE: [(f64, f64); 33] = [
        (1e-08, 1.842_068_073_818_020_9e1),
        (0.001, 6.907_178_885_383_853_4),
        (0.1, 2.252_712_651_734_206),
        (0.3, 1.095_797_994_818_075_6),
        (0.5, 5.723_649_429_247_001e-1),
        (0.75, 2.032_809_514_312_953_8e-1),
        (0.999, 5.780_385_328_913_802e-4),
        (1.0, 0.0),
        (1.001, -5.763_935_982_833_062e-4),
        (1.25, -9.827_183_642_181_316e-2),
        (1.4999, -1.207_858_819_584_939_4e-1),
        (1.5, -1.207_822_376_352_452_2e-1),
        (1.75, -8.440_112_102_048_555e-2),
        (1.9999, -4.227_520_877_215_346e-5),
        (2.0, 0.0),
        (2.0001, 4.228_165_811_291_994_5e-5),
        (2.25, 1.248_717_148_923_966e-1),
        (2.4999, 2.846_125_572_606_826_3e-1),
        (2.5, 2.846_828_704_729_192e-1),
        (3.0, 6.931_471_805_599_453e-1),
        (3.7, 1.428_072_326_665_388),
        (5.0, 3.178_053_830_347_945_8),
        (7.5, 7.534_364_236_758_733),
        (9.99, 1.277_931_521_435_019_3e1),
        (10.0, 1.280_182_748_008_146_9e1),
        (10.5, 1.394_062_521_940_376_3e1),
        (33.3, 8.260_372_358_165_495e1),
        (100.0, 3.591_342_053_695_754e2),
        (171.5, 7.091_431_630_309_282e2),
        (1000.0, 5.905_220_423_209_181e3),
        (12345.678, 1.039_599_199_055_460_6e5),
        (100000.0, 1.051_287_708_973_656_9e6),
        (999999.5, 1.281_549_766_139_270_7e7),
    ];

    #[test]
    fn log_gamma_matches_high_precision_reference() {
        for &(x, want) in &LN_GAMMA_REFERENCE {
            let got = log_gamma(x).unwrap();
            if want == 0.0 {
                assert_eq!(got, 0.0, "x = {x}");
            } else {
                let rel = ((got - want) / want).abs();
                assert!(rel <= 1e-13, "x = {x}: got {got}, want {want}, rel {rel:e}");
            }
        }
    }

    #[test]
    fn log_gamma_small_integers() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-15);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-15);
    }

    #[test]
    fn log_gamma_rejects_bad_arguments() {
        for x in [0.0, -1.0, -0.5, f64::NAN, f64::INFINITY] {
            assert!(matches!(log_gamma(x), Err(Error::Domain(_))), "x = {x}");
        }
    }

    #[test]
    fn log_gamma_recurrence_across_branch_boundaries() {
        // ln Γ(x + 1) = ln Γ(x) + ln x
        for x in [0.4999, 0.5, 1.4999, 1.5, 2.4999, 2.5, 9.9999, 10.0, 10.0001] {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn log_beta_examples() {
        assert_eq!(log_beta(shape(1.0, 1.0)).unwrap(), 0.0);
        assert!((log_beta(shape(2.0, 1.0)).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        for (a, b) in [(0.3, 7.1), (2.5, 40.0), (123.4, 0.9)] {
            assert_eq!(log_beta(shape(a, b)).unwrap(), log_beta(shape(b, a)).unwrap());
        }
    }

    #[test]
    fn log_beta_recurrence_in_beta() {
        // B(α, β + 1) = β / (α + β) · B(α, β)
        for (a, b) in [(0.1, 0.1), (2.0, 1.0), (3.7, 0.4), (9.9, 9.8), (45.0, 12.5)] {
            let lhs = log_beta(shape(a, b + 1.0)).unwrap();
            let rhs = (b / (a + b)).ln() + log_beta(shape(a, b)).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                "({a}, {b}): {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn reg_inc_beta_examples() {
        let i = |x, a, b| reg_inc_beta(x, shape(a, b)).unwrap().value();
        assert!((i(0.5, 1.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((i(0.5, 2.0, 1.0) - 0.25).abs() < 1e-14);
        assert_eq!(i(0.0, 3.0, 0.2), 0.0);
        assert_eq!(i(1.0, 3.0, 0.2), 1.0);
        // for β = 1, I_x(α, 1) = x^α
        for (x, a) in [(0.1, 0.3), (0.7, 2.5), (0.99, 17.0)] {
            let want: f64 = f64::powf(x, a);
            assert!((i(x, a, 1.0) - want).abs() < 1e-13, "x={x} a={a}");
        }
    }

    #[test]
    fn reg_inc_beta_reflection() {
        for (a, b) in [(0.2, 0.7), (2.0, 3.0), (10.0, 0.1), (200.0, 100.0)] {
            for x in [0.01, 0.2, 0.5, 0.63, 0.999] {
                let s =
                    reg_inc_beta(x, shape(a, b)).unwrap().value() + reg_inc_beta(1.0 - x, shape(b, a)).unwrap().value();
                assert!((s - 1.0).abs() < 1e-12, "({a},{b}) x={x}: {s}");
            }
        }
    }

    #[test]
    fn reg_inc_beta_rejects_out_of_range() {
        for x in [-1e-9, 1.0 + 1e-9, f64::NAN] {
            assert!(matches!(reg_inc_beta(x, shape(1.0, 1.0)), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn reg_inc_beta_derivative_is_density() {
        let h = 1e-6;
        for (a, b) in [(0.5, 0.5), (1.0, 3.0), (2.0, 2.0), (4.5, 1.3), (9.0, 7.0)] {
            let s = shape(a, b);
            for i in 1..20 {
                let x = i as f64 / 20.0;
                let fd =
                    (reg_inc_beta(x + h, s).unwrap().value() - reg_inc_beta(x - h, s).unwrap().value()) / (2.0 * h);
                let pdf = beta_pdf(x, s).unwrap();
                assert!((fd - pdf).abs() < 1e-6, "({a},{b}) x={x}: {fd} vs {pdf}");
            }
        }
    }

    #[test]
    fn beta_pdf_examples() {
        assert!((beta_pdf(0.3, shape(1.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((beta_pdf(0.5, shape(2.0, 2.0)).unwrap() - 1.5).abs() < 1e-14);
        assert!((beta_pdf(0.25, shape(2.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
        for v in [0.0, 1.0, -0.1, 1.5] {
            assert!(beta_pdf(v, shape(0.5, 0.5)).is_err());
        }
    }

    #[test]
    fn normal_cdf_examples() {
        assert_eq!(normal_cdf(0.0).unwrap().value(), 0.5);
        for z in [0.3, 1.0, 2.5, 7.0] {
            let s = normal_cdf(z).unwrap().value() + normal_cdf(-z).unwrap().value();
            assert!((s - 1.0).abs() < 1e-15);
        }
        // Simpson's rule on the density from 0 to the 97.5% quantile.
        let q = 1.959_963_985;
        let m = 2000;
        let h = q / m as f64;
        let mut simpson = normal_pdf(0.0) + normal_pdf(q);
        for j in 1..m {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            simpson += w * normal_pdf(j as f64 * h);
        }
        let oracle = 0.5 + simpson * h / 3.0;
        let got = normal_cdf(q).unwrap().value();
        assert!((got - oracle).abs() < 1e-12, "{got} vs {oracle}");
        assert!((got - 0.975).abs() < 1e-9);
        assert!(normal_cdf(f64::NAN).is_err());
        assert!(normal_cdf(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn shape_pair_validation() {
        assert!(ShapePair::new(0.0, 1.0).is_err());
        assert!(ShapePair::new(1.0, -2.0).is_err());
        assert!(ShapePair::new(f64::INFINITY, 1.0).is_err());
        let s = shape(2.0, 1.0);
        assert_eq!(s.swapped(), shape(1.0, 2.0));
        assert!((s.signal_probability().value() - 2.0 / 3.0).abs() < 1e-16);
        assert!(Probability::new(1.01).is_err());
    }
}
