//! Numerical evidence for the large-population results: the networked
//! majority beats a single voter (`1 − I_{1/2}(α, β) > α/(α+β)` for
//! `α > β`), each rearrangement in the integral argument behind that bound,
//! and the approach of finite-`n` accuracy to its Beta limit.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::special_fn::{log_beta, Probability, ShapePair};
use crate::stationary::{asymptotic_accuracy, majority_accuracy_networked, PopulationSize};

/// Which side of the `α = β` boundary a shape falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `α > β`: the strict inequality is claimed.
    Strict,
    /// `α = β`: both sides are 1/2.
    Boundary,
    /// `α < β`: the mirrored claim; margin is negative.
    Reversed,
}

impl Regime {
    fn of(shape: ShapePair) -> Self {
        match shape.alpha().partial_cmp(&shape.beta()) {
            Some(std::cmp::Ordering::Greater) => Regime::Strict,
            Some(std::cmp::Ordering::Less) => Regime::Reversed,
            _ => Regime::Boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropositionReport {
    pub shape: ShapePair,
    /// `1 − I_{1/2}(α, β)`.
    pub lhs: Probability,
    /// `α / (α + β)`.
    pub rhs: Probability,
    pub margin: f64,
    pub holds: bool,
    pub regime: Regime,
}

/// Compares the limiting majority accuracy with the individual accuracy.
///
/// `holds` is `margin > 0`. At `α = β` both sides are exactly 1/2, so the
/// margin is 0 and `holds` is false; for `α < β` the margin comes out
/// negative, mirroring the `(β, α)` report.
pub fn check_proposition(shape: ShapePair) -> Result<PropositionReport> {
    let lhs = asymptotic_accuracy(shape)?;
    let rhs = shape.signal_probability();
    let margin = lhs.value() - rhs.value();
    Ok(PropositionReport {
        shape,
        lhs,
        rhs,
        margin,
        holds: margin > 0.0,
        regime: Regime::of(shape),
    })
}

/// One rearrangement in the chain of integral inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityStep {
    /// `∫₀^½ t^{α−1}(1−t)^{β−1} < ∫₀¹ t^{α−1}(1−t)^β`, the bound with
    /// `B(α, β+1) = β/(α+β) · B(α, β)` cleared.
    Reformulated,
    /// The right side split at `t = 1/2` and its lower half moved left.
    Split,
    /// Left integrand collapsed to `t^α (1−t)^{β−1}`.
    Simplified,
    /// Right side mapped onto `(0, 1/2)` by `s = 1 − t`.
    Reflected,
}

impl IdentityStep {
    pub const ALL: [IdentityStep; 4] = [
        IdentityStep::Reformulated,
        IdentityStep::Split,
        IdentityStep::Simplified,
        IdentityStep::Reflected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityStep::Reformulated => "reformulated",
            IdentityStep::Split => "split",
            IdentityStep::Simplified => "simplified",
            IdentityStep::Reflected => "reflected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub shape: ShapePair,
    pub step: IdentityStep,
    pub lhs_integral: f64,
    pub rhs_integral: f64,
    /// `lhs_integral < rhs_integral`.
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityChain {
    pub reports: Vec<IdentityReport>,
    /// Largest relative residual of
    /// `t^{α−1}(1−t)^{β−1} − t^{α−1}(1−t)^β = t^α(1−t)^{β−1}` on the grid.
    pub reduction_residual: f64,
}

impl IdentityChain {
    pub fn all_satisfied(&self) -> bool {
        self.reports.iter().all(|r| r.satisfied)
    }
}

/// The four integrands appearing in the chain.
struct Integrands {
    a: f64,
    b: f64,
}

impl Integrands {
    /// `t^{α−1} (1−t)^{β−1}`
    fn base(&self, t: f64) -> f64 {
        t.powf(self.a - 1.0) * (1.0 - t).powf(self.b - 1.0)
    }
    /// `t^{α−1} (1−t)^β`
    fn shifted(&self, t: f64) -> f64 {
        t.powf(self.a - 1.0) * (1.0 - t).powf(self.b)
    }
    /// `t^α (1−t)^{β−1}`
    fn reduced(&self, t: f64) -> f64 {
        t.powf(self.a) * (1.0 - t).powf(self.b - 1.0)
    }
    /// `base(1 − s)` evaluated without cancellation
    fn mirrored(&self, s: f64) -> f64 {
        (1.0 - s).powf(self.a - 1.0) * s.powf(self.b - 1.0)
    }
    /// `(1−s)^{α−1} s^β`
    fn reflected(&self, s: f64) -> f64 {
        (1.0 - s).powf(self.a - 1.0) * s.powf(self.b)
    }
}

/// Integrands of the final step at `s`: `(s^α (1−s)^{β−1}, (1−s)^{α−1} s^β)`.
/// For `s ∈ (0, 1/2)` and `α > β` the second exceeds the first.
pub fn pointwise_dominance(s: f64, shape: ShapePair) -> (f64, f64) {
    let f = Integrands {
        a: shape.alpha(),
        b: shape.beta(),
    };
    (f.reduced(s), f.reflected(s))
}

/// Evaluates both sides of every step by adaptive quadrature at absolute
/// tolerance `tol`, plus the pointwise integrand reduction on a grid.
/// Requires `α ≥ β`; at `α = β` the sides coincide and nothing is strict.
pub fn check_integral_identities(shape: ShapePair, tol: f64) -> Result<IdentityChain> {
    if shape.alpha() < shape.beta() {
        return Err(Error::domain(format!(
            "integral chain needs alpha >= beta, got ({}, {})",
            shape.alpha(),
            shape.beta()
        )));
    }
    let f = Integrands {
        a: shape.alpha(),
        b: shape.beta(),
    };
    let quad = |g: &dyn Fn(f64) -> f64, lo, hi| integrate(g, lo, hi, tol).map(|r| r.value);

    let base_lower = quad(&|t| f.base(t), 0.0, 0.5)?;
    let shifted_lower = quad(&|t| f.shifted(t), 0.0, 0.5)?;
    let shifted_upper = quad(&|t| f.shifted(t), 0.5, 1.0)?;
    let shifted_full = quad(&|t| f.shifted(t), 0.0, 1.0)?;
    let reduced_lower = quad(&|t| f.reduced(t), 0.0, 0.5)?;
    let reflected_lower = quad(&|s| f.reflected(s), 0.0, 0.5)?;

    let sides = [
        (IdentityStep::Reformulated, base_lower, shifted_full),
        (IdentityStep::Split, base_lower - shifted_lower, shifted_upper),
        (IdentityStep::Simplified, reduced_lower, shifted_upper),
        (IdentityStep::Reflected, reduced_lower, reflected_lower),
    ];
    let reports = sides
        .into_iter()
        .map(|(step, lhs, rhs)| IdentityReport {
            shape,
            step,
            lhs_integral: lhs,
            rhs_integral: rhs,
            satisfied: lhs < rhs,
        })
        .collect();

    let reduction_residual = (1..200)
        .map(|i| {
            let t = i as f64 / 200.0;
            let want = f.reduced(t);
            ((f.base(t) - f.shifted(t)) - want).abs() / want
        })
        .fold(0.0, f64::max);

    Ok(IdentityChain {
        reports,
        reduction_residual,
    })
}

/// `I_x(α, β)` by direct quadrature of the Beta density; independent of the
/// continued fraction in [`crate::special_fn::reg_inc_beta`].
pub fn quadrature_inc_beta(x: f64, shape: ShapePair, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("argument {x} outside [0, 1]")));
    }
    let f = Integrands {
        a: shape.alpha(),
        b: shape.beta(),
    };
    let b = log_beta(shape)?.exp();
    if x <= 0.5 {
        Ok(integrate(|t| f.base(t), 0.0, x, tol * b)?.value / b)
    } else {
        // keep a possible singularity at t = 1 at the origin: s = 1 − t
        let upper = integrate(|s| f.mirrored(s), 0.0, 1.0 - x, tol * b)?.value / b;
        Ok(1.0 - upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub finite_accuracy: Probability,
    pub limit_accuracy: Probability,
    /// `|finite − limit|`.
    pub gap: f64,
}

/// Exact finite-`n` majority accuracy next to its large-`n` limit for each
/// `n` in a strictly ascending list.
pub fn convergence_sweep(shape: ShapePair, n_list: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if n_list.is_empty() {
        return Err(Error::domain("empty population list"));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("population sizes must be strictly ascending"));
    }
    let limit = asymptotic_accuracy(shape)?;
    n_list
        .iter()
        .map(|&n| {
            let finite = majority_accuracy_networked(PopulationSize::new(n)?, shape)?;
            Ok(ConvergenceRow {
                n,
                finite_accuracy: finite,
                limit_accuracy: limit,
                gap: (finite.value() - limit.value()).abs(),
            })
        })
        .collect()
}

/// Evenly spaced values `min, min + step, …` up to `max` (inclusive, with a
/// small allowance for accumulated rounding in `(max − min) / step`).
fn grid_values(min: f64, max: f64, step: f64) -> Vec<f64> {
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    // snap to 12 decimals so 0.1 + 2·0.1 prints as 0.3
    (0..count)
        .map(|i| ((min + i as f64 * step) * 1e12).round() / 1e12)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridScan {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    pub step: f64,
}

impl GridScan {
    /// Same range for both shapes.
    pub fn square(min: f64, max: f64, step: f64) -> Self {
        GridScan {
            alpha_min: min,
            alpha_max: max,
            beta_min: min,
            beta_max: max,
            step,
        }
    }

    fn validate(&self) -> Result<()> {
        let in_range = |lo: f64, hi: f64| lo > 0.0 && lo <= hi && hi <= 50.0;
        if !(in_range(self.alpha_min, self.alpha_max) && in_range(self.beta_min, self.beta_max)) {
            return Err(Error::domain(format!(
                "grid ranges must lie within (0, 50], got {self:?}"
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::domain(format!("grid step must be positive, got {}", self.step)));
        }
        Ok(())
    }

    pub fn alphas(&self) -> Vec<f64> {
        grid_values(self.alpha_min, self.alpha_max, self.step)
    }

    pub fn betas(&self) -> Vec<f64> {
        grid_values(self.beta_min, self.beta_max, self.step)
    }

    /// Grid pairs with `α > β`.
    pub fn strict_pairs(&self) -> Vec<ShapePair> {
        let betas = self.betas();
        self.alphas()
            .into_iter()
            .flat_map(|a| {
                betas
                    .iter()
                    .filter(move |&&b| a > b)
                    .map(move |&b| ShapePair::new(a, b).expect("grid values are positive"))
            })
            .collect()
    }
}

impl Default for GridScan {
    fn default() -> Self {
        GridScan::square(0.1, 10.0, 0.1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSummary {
    pub checked: usize,
    pub holding: usize,
    /// Report with the smallest margin.
    pub worst: Option<PropositionReport>,
    pub violations: Vec<PropositionReport>,
    pub reports: Vec<PropositionReport>,
}

/// Checks the strict inequality at every grid pair with `α > β`.
pub fn proposition_grid_scan(grid: &GridScan) -> Result<GridSummary> {
    grid.validate()?;
    let reports = grid
        .strict_pairs()
        .into_par_iter()
        .map(check_proposition)
        .collect::<Result<Vec<_>>>()?;
    let violations: Vec<_> = reports.iter().filter(|r| !r.holds).copied().collect();
    let worst = reports.iter().min_by(|a, b| a.margin.total_cmp(&b.margin)).copied();
    Ok(GridSummary {
        checked: reports.len(),
        holding: reports.len() - violations.len(),
        worst,
        violations,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(a: f64, b: f64) -> ShapePair {
        ShapePair::new(a, b).unwrap()
    }

    #[test]
    fn proposition_closed_form_case() {
        let r = check_proposition(shape(2.0, 1.0)).unwrap();
        assert!((r.lhs.value() - 0.75).abs() < 1e-14);
        assert!((r.rhs.value() - 2.0 / 3.0).abs() < 1e-15);
        assert!(r.holds);
        assert_eq!(r.regime, Regime::Strict);
    }

    #[test]
    fn proposition_boundary_and_reversed() {
        let r = check_proposition(shape(2.7, 2.7)).unwrap();
        assert_eq!(r.margin, 0.0);
        assert!(!r.holds);
        assert_eq!(r.regime, Regime::Boundary);

        let fwd = check_proposition(shape(5.0, 3.0)).unwrap();
        let rev = check_proposition(shape(3.0, 5.0)).unwrap();
        assert_eq!(rev.regime, Regime::Reversed);
        assert!(!rev.holds);
        assert!((fwd.margin + rev.margin).abs() < 1e-12);
    }

    #[test]
    fn proposition_margin_matches_quadrature() {
        let s = shape(5.0, 3.0);
        let r = check_proposition(s).unwrap();
        let i_half = quadrature_inc_beta(0.5, s, 1e-13).unwrap();
        let oracle = 1.0 - i_half - 5.0 / 8.0;
        assert!(r.holds);
        assert!((r.margin - oracle).abs() < 1e-11, "{} vs {oracle}", r.margin);
    }

    #[test]
    fn extreme_pair_margin_near_headroom() {
        let s = shape(10.0, 0.1);
        let r = check_proposition(s).unwrap();
        let headroom = 1.0 - 10.0 / 10.1;
        let oracle = headroom - quadrature_inc_beta(0.5, s, 1e-13).unwrap();
        assert!((r.margin - oracle).abs() < 1e-10);
        assert!(r.margin > 0.5 * headroom && r.margin < headroom, "{}", r.margin);
    }

    #[test]
    fn integral_chain_for_two_one() {
        let chain = check_integral_identities(shape(2.0, 1.0), 1e-12).unwrap();
        let first = chain.reports[0];
        assert_eq!(first.step, IdentityStep::Reformulated);
        assert!((first.lhs_integral - 0.125).abs() < 1e-10);
        assert!((first.rhs_integral - 1.0 / 6.0).abs() < 1e-10);
        assert!(chain.all_satisfied());
        assert!(chain.reduction_residual < 1e-12);
    }

    #[test]
    fn final_step_integrands_dominate() {
        let (lhs, rhs) = pointwise_dominance(0.25, shape(3.0, 1.0));
        assert!((lhs - 0.015_625).abs() < 1e-16);
        assert!((rhs - 0.140_625).abs() < 1e-16);
        assert!(rhs > lhs);
    }

    #[test]
    fn integral_chain_degenerates_on_boundary() {
        let chain = check_integral_identities(shape(1.7, 1.7), 1e-12).unwrap();
        let last = chain.reports[3];
        assert!((last.lhs_integral - last.rhs_integral).abs() < 1e-10);
        for r in &chain.reports {
            assert!((r.lhs_integral - r.rhs_integral).abs() < 1e-9, "{r:?}");
        }
        assert!(check_integral_identities(shape(1.0, 2.0), 1e-10).is_err());
    }

    #[test]
    fn sweep_examples() {
        let rows = convergence_sweep(shape(2.0, 1.0), &[1]).unwrap();
        assert!((rows[0].finite_accuracy.value() - 2.0 / 3.0).abs() < 1e-14);
        assert!((rows[0].limit_accuracy.value() - 0.75).abs() < 1e-14);
        assert!((rows[0].gap - 1.0 / 12.0).abs() < 1e-14);

        for row in convergence_sweep(shape(4.0, 4.0), &[1, 11, 101, 1001]).unwrap() {
            assert!((row.finite_accuracy.value() - 0.5).abs() < 1e-12);
            assert_eq!(row.limit_accuracy.value(), 0.5);
        }
        assert!(convergence_sweep(shape(1.0, 1.0), &[10, 5]).is_err());
        assert!(convergence_sweep(shape(1.0, 1.0), &[]).is_err());
        assert!(convergence_sweep(shape(1.0, 1.0), &[0, 5]).is_err());
    }

    #[test]
    fn grid_values_hit_endpoints() {
        let g = GridScan::default();
        let a = g.alphas();
        assert_eq!(a.len(), 100);
        assert_eq!((a[0], a[2], a[99]), (0.1, 0.3, 10.0));
        assert_eq!(g.strict_pairs().len(), 100 * 99 / 2);
    }

    #[test]
    fn grid_scan_rejects_bad_ranges() {
        assert!(proposition_grid_scan(&GridScan::square(0.0, 1.0, 0.1)).is_err());
        assert!(proposition_grid_scan(&GridScan::square(1.0, 60.0, 0.1)).is_err());
        assert!(proposition_grid_scan(&GridScan::square(1.0, 2.0, 0.0)).is_err());
    }

    #[test]
    fn small_grid_scan() {
        let s = proposition_grid_scan(&GridScan::square(0.5, 3.0, 0.5)).unwrap();
        assert_eq!(s.checked, 15);
        assert_eq!(s.holding, 15);
        assert!(s.violations.is_empty());
    }
}
