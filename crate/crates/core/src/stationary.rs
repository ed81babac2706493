//! Exact stationary law of the number of correct free voters on the complete
//! graph, and the majority accuracies built from it.
//!
//! The law is beta-binomial:
//!
//! ```text
//!            Γ(α+k) Γ(n+β−k) Γ(n+1) Γ(α+β)
//! P(X = k) = ─────────────────────────────────────
//!            Γ(k+1) Γ(α) Γ(n−k+1) Γ(β) Γ(n+α+β)
//! ```
//!
//! [`transition_matrix`] and [`stationary_from_matrix`] rebuild it from the
//! copying dynamics alone, which makes them an oracle for the closed form.

use crate::error::{Error, Result};
use crate::special_fn::{log_gamma, normal_cdf, reg_inc_beta, Probability, ShapePair};

/// Number of free voters, at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PopulationSize(usize);

impl PopulationSize {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            Err(Error::domain("population must contain at least one free voter"))
        } else {
            Ok(PopulationSize(n))
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Smallest count forming a strict majority, `⌊n/2⌋ + 1`.
    #[inline]
    pub fn majority_threshold(self) -> usize {
        self.0 / 2 + 1
    }
}

/// Log-space probability mass function over `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaBinomialPmf {
    n: PopulationSize,
    shape: ShapePair,
    log_probs: Vec<f64>,
}

impl BetaBinomialPmf {
    pub fn n(&self) -> PopulationSize {
        self.n
    }

    pub fn shape(&self) -> ShapePair {
        self.shape
    }

    pub fn log_probs(&self) -> &[f64] {
        &self.log_probs
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.log_probs[k].exp()
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_probs.iter().map(|l| l.exp()).collect()
    }

    /// `P(X ≥ k_min)`, accumulated from the smallest term upward.
    pub fn upper_tail(&self, k_min: usize) -> Probability {
        let split = k_min.min(self.log_probs.len());
        let (head, tail) = self.log_probs.split_at(split);
        tail_from_terms(
            head.iter().map(|l| l.exp()).collect(),
            tail.iter().map(|l| l.exp()).collect(),
        )
    }

    /// Shifts every entry by the log of the total mass so the exponentials
    /// sum to one; absorbs the common rounding of the `ln Γ(n + …)` terms.
    fn normalized(n: PopulationSize, shape: ShapePair, mut log_probs: Vec<f64>) -> Self {
        let shift = log_sum_exp(&log_probs);
        for l in &mut log_probs {
            *l -= shift;
        }
        BetaBinomialPmf { n, shape, log_probs }
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + sum_ascending(xs.iter().map(|x| (x - max).exp())).ln()
}

/// Upper-tail mass from the terms on either side of the threshold. When the
/// upper side is the bulk it is taken as the complement of the lower side, so
/// values near one keep the relative accuracy of the small tail.
fn tail_from_terms(lower: Vec<f64>, upper: Vec<f64>) -> Probability {
    let upper_sum = sum_ascending(upper.into_iter());
    if upper_sum <= 0.5 {
        return Probability::saturating(upper_sum);
    }
    Probability::saturating(1.0 - sum_ascending(lower.into_iter()))
}

fn sum_ascending(terms: impl Iterator<Item = f64>) -> f64 {
    let mut terms: Vec<f64> = terms.collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Stationary law of `X` on the complete graph with `n` free voters.
pub fn beta_binomial_pmf(n: PopulationSize, shape: ShapePair) -> Result<BetaBinomialPmf> {
    let (a, b) = (shape.alpha(), shape.beta());
    let nf = n.get() as f64;
    let common = log_gamma(nf + 1.0)? + log_gamma(a + b)? - log_gamma(a)? - log_gamma(b)? - log_gamma(nf + a + b)?;

    let log_probs = (0..=n.get())
        .map(|k| {
            let k = k as f64;
            Ok(common + log_gamma(a + k)? + log_gamma(nf + b - k)? - log_gamma(k + 1.0)? - log_gamma(nf - k + 1.0)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BetaBinomialPmf::normalized(n, shape, log_probs))
}

/// Finite-`n` probability that a strict majority of networked voters is
/// correct. Even-`n` ties count as incorrect.
pub fn majority_accuracy_networked(n: PopulationSize, shape: ShapePair) -> Result<Probability> {
    Ok(beta_binomial_pmf(n, shape)?.upper_tail(n.majority_threshold()))
}

fn ln_binomial(n: usize, k: usize) -> Result<f64> {
    Ok(log_gamma(n as f64 + 1.0)? - log_gamma(k as f64 + 1.0)? - log_gamma((n - k) as f64 + 1.0)?)
}

/// Majority accuracy of `n` independent voters, each correct with
/// probability `p` (binomial upper tail).
pub fn majority_accuracy_independent(n: PopulationSize, p: f64) -> Result<Probability> {
    let p = Probability::new(p)?.value();
    let n = n.get();
    let threshold = n / 2 + 1;
    if p == 0.0 {
        return Ok(Probability::saturating(0.0));
    }
    if p == 1.0 {
        return Ok(Probability::saturating(1.0));
    }
    let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
    let term = |k: usize| Ok((ln_binomial(n, k)? + k as f64 * ln_p + (n - k) as f64 * ln_q).exp());
    let lower = (0..threshold).map(term).collect::<Result<Vec<_>>>()?;
    let upper = (threshold..=n).map(term).collect::<Result<Vec<_>>>()?;
    Ok(tail_from_terms(lower, upper))
}

/// Large-population majority accuracy, `P(V ≥ 1/2) = 1 − I_{1/2}(α, β)`.
pub fn asymptotic_accuracy(shape: ShapePair) -> Result<Probability> {
    Ok(reg_inc_beta(0.5, shape)?.complement())
}

/// Mean and variance of Beta(α, β).
pub fn beta_moments(shape: ShapePair) -> (f64, f64) {
    let (a, b) = (shape.alpha(), shape.beta());
    let s = a + b;
    (a / s, a * b / (s * s * (s + 1.0)))
}

/// Normal approximation `1 − Φ((1/2 − μ)/σ)` to the asymptotic accuracy,
/// intended for `α, β ≫ 1`.
pub fn normal_approx_accuracy(shape: ShapePair) -> Result<Probability> {
    let (mu, var) = beta_moments(shape);
    Ok(normal_cdf((0.5 - mu) / var.sqrt())?.complement())
}

/// Population size, or the large-population limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Population {
    Finite(PopulationSize),
    Infinite,
}

/// Networked and independent majority accuracy side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyResult {
    pub n: Population,
    pub networked: Probability,
    pub independent: Probability,
    /// `α / (α + β)`, the accuracy of one voter.
    pub signal_p: Probability,
}

/// Both accuracies for the same shape. In the limit the independent
/// majority is certain to be right when `p > 1/2` and certain to be wrong
/// when `p < 1/2`.
pub fn accuracy_result(n: Population, shape: ShapePair) -> Result<AccuracyResult> {
    let signal_p = shape.signal_probability();
    let (networked, independent) = match n {
        Population::Finite(n) => (
            majority_accuracy_networked(n, shape)?,
            majority_accuracy_independent(n, signal_p.value())?,
        ),
        Population::Infinite => {
            let p = signal_p.value();
            let limit = if p > 0.5 {
                1.0
            } else if p < 0.5 {
                0.0
            } else {
                0.5
            };
            (asymptotic_accuracy(shape)?, Probability::saturating(limit))
        }
    };
    Ok(AccuracyResult {
        n,
        networked,
        independent,
        signal_p,
    })
}

/// One-step kernel of the copying dynamics on the complete graph over
/// `N = n + α + β` nodes, projected onto `X`. Tridiagonal; stored as bands.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: PopulationSize,
    alpha_count: usize,
    beta_count: usize,
    up: Vec<f64>,
    down: Vec<f64>,
    stay: Vec<f64>,
}

impl TransitionMatrix {
    pub fn n(&self) -> PopulationSize {
        self.n
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.alpha_count, self.beta_count)
    }

    /// `P(X → k + 1 | X = k)`.
    pub fn up(&self, k: usize) -> f64 {
        self.up[k]
    }

    /// `P(X → k − 1 | X = k)`.
    pub fn down(&self, k: usize) -> f64 {
        self.down[k]
    }

    pub fn stay(&self, k: usize) -> f64 {
        self.stay[k]
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        match to as isize - from as isize {
            0 => self.stay[from],
            1 => self.up[from],
            -1 => self.down[from],
            _ => 0.0,
        }
    }

    pub fn row(&self, k: usize) -> Vec<f64> {
        (0..=self.n.get()).map(|j| self.get(k, j)).collect()
    }

    /// `‖πM − π‖∞` for a row vector `π`.
    pub fn residual(&self, pi: &[f64]) -> f64 {
        let n = self.n.get();
        (0..=n)
            .map(|j| {
                let mut flow = pi[j] * self.stay[j];
                if j > 0 {
                    flow += pi[j - 1] * self.up[j - 1];
                }
                if j < n {
                    flow += pi[j + 1] * self.down[j + 1];
                }
                (flow - pi[j]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Kernel for `n` free voters and integer zealot counts. A voter never
/// picks itself as the neighbour to copy.
pub fn transition_matrix(n: PopulationSize, alpha_count: usize, beta_count: usize) -> Result<TransitionMatrix> {
    if alpha_count == 0 || beta_count == 0 {
        return Err(Error::domain(
            "both zealot counts must be at least one; otherwise the chain absorbs",
        ));
    }
    let nf = n.get() as f64;
    let others = (n.get() + alpha_count + beta_count - 1) as f64;
    let (a, b) = (alpha_count as f64, beta_count as f64);

    let mut up = Vec::with_capacity(n.get() + 1);
    let mut down = Vec::with_capacity(n.get() + 1);
    let mut stay = Vec::with_capacity(n.get() + 1);
    for k in 0..=n.get() {
        let kf = k as f64;
        let u = (nf - kf) / nf * ((a + kf) / others);
        let d = kf / nf * ((b + nf - kf) / others);
        up.push(u);
        down.push(d);
        stay.push(1.0 - u - d);
    }
    Ok(TransitionMatrix {
        n,
        alpha_count,
        beta_count,
        up,
        down,
        stay,
    })
}

/// Stationary law of a birth–death kernel by detailed balance,
/// `π_{k+1} = π_k · u_k / d_{k+1}`, carried out in log-space.
pub fn stationary_from_matrix(m: &TransitionMatrix) -> Result<BetaBinomialPmf> {
    let n = m.n.get();
    let mut log_pi = Vec::with_capacity(n + 1);
    log_pi.push(0.0);
    for k in 0..n {
        let (u, d) = (m.up[k], m.down[k + 1]);
        if d.is_nan() || d <= 0.0 {
            return Err(Error::Structural(format!(
                "zero down-move probability at k = {}",
                k + 1
            )));
        }
        if u.is_nan() || u <= 0.0 {
            return Err(Error::Structural(format!("zero up-move probability at k = {k}")));
        }
        log_pi.push(log_pi[k] + u.ln() - d.ln());
    }
    let shape = ShapePair::new(m.alpha_count as f64, m.beta_count as f64)?;
    Ok(BetaBinomialPmf::normalized(m.n, shape, log_pi))
}
