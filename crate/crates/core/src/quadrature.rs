//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.
//!
//! Only interior nodes are evaluated, so integrands with integrable endpoint
//! singularities such as `t^{α−1}` for `α < 1` are accepted: the interval
//! touching the singularity is bisected until its share of the error budget
//! is small enough. Nodes near an endpoint `b` are only resolved to the
//! spacing of floats near `b`, so singularities at a nonzero endpoint should
//! be moved to the origin by substitution first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default absolute tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const MAX_INTERVALS: usize = 20_000;

// Kronrod abscissae on [-1, 1]; odd indices are the Gauss points.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the per-interval `|K15 − G7|` estimates.
    pub error_estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Integral> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::domain(format!("bad integration range [{lo}, {hi}]")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if lo == hi {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            intervals: 0,
        });
    }

    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod(&f, lo, hi);
    let mut total_error = first.error;
    if !first.value.is_finite() {
        return Err(Error::Quadrature {
            achieved: f64::INFINITY,
            requested: tol,
        });
    }
    heap.push(first);

    while total_error > tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                achieved: total_error,
                requested: tol,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        if !worst.error.is_finite() {
            return Err(Error::Quadrature {
                achieved: f64::INFINITY,
                requested: tol,
            });
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            // interval exhausted at machine resolution
            return Err(Error::Quadrature {
                achieved: total_error,
                requested: tol,
            });
        }
        let left = gauss_kronrod(&f, worst.lo, mid);
        let right = gauss_kronrod(&f, mid, worst.hi);
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::Quadrature {
                achieved: f64::INFINITY,
                requested: tol,
            });
        }
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        // the running sum drifts; refresh it when it claims convergence
        if total_error <= tol {
            total_error = heap.iter().map(|s| s.error).sum();
        }
    }

    let mut segments = heap.into_vec();
    segments.sort_by(|a, b| a.value.abs().total_cmp(&b.value.abs()));
    let value = segments.iter().map(|s| s.value).sum();
    Ok(Integral {
        value,
        error_estimate: total_error,
        intervals: segments.len(),
    })
}
