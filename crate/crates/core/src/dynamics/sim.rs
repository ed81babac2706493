use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use rand::distr::{Distribution, Uniform};

use super::graph::{build_network, Graph, NetworkSpec, NodeKind, SparseGraph, Topology};
use crate::error::{Error, Result};
use crate::special_fn::{Probability, ShapePair};
use crate::stationary::{majority_accuracy_networked, PopulationSize};

/// Generator behind every simulation: xoshiro256++, a fixed algorithm with
/// a portable, version-stable output stream.
pub type SimRng = Xoshiro256PlusPlus;

/// Generator for replica `replica` of a run seeded with `seed`.
///
/// Stream-splitting rule: the base state is `seed_from_u64(seed)` (SplitMix64
/// expansion), and replica `r` starts `r` jumps of 2^128 steps further along
/// the same sequence. Replica 0 is the generator a single-chain run uses, and
/// no two replicas can overlap within 2^128 draws.
pub fn replica_rng(seed: u64, replica: u64) -> SimRng {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..replica {
        rng.jump();
    }
    rng
}

/// Opinions of the free voters (bit set = correct) with a cached count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    words: Vec<u64>,
    len: usize,
    correct_count: usize,
}

impl SimState {
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut state = SimState {
            words: vec![0; bits.len().div_ceil(64)],
            len: bits.len(),
            correct_count: 0,
        };
        for (i, &b) in bits.iter().enumerate() {
            state.set(i, b);
        }
        state
    }

    /// Independent fair-coin opinions.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let bits: Vec<bool> = (0..len).map(|_| rng.random()).collect();
        SimState::from_bits(&bits)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `X`, the number of free voters holding the correct opinion.
    #[inline]
    pub fn correct_count(&self) -> usize {
        self.correct_count
    }

    #[inline]
    pub fn get(&self, slot: usize) -> bool {
        self.words[slot / 64] >> (slot % 64) & 1 == 1
    }

    /// Writes one opinion and returns the change in `X`. Branch-free: the
    /// written bit is a coin flip from the branch predictor's point of view.
    #[inline]
    fn set(&mut self, slot: usize, value: bool) -> i8 {
        let shift = slot % 64;
        let word = &mut self.words[slot / 64];
        let old = (*word >> shift) & 1;
        let new = value as u64;
        *word ^= (old ^ new) << shift;
        let delta = new as i8 - old as i8;
        self.correct_count = self.correct_count.wrapping_add_signed(delta as isize);
        delta
    }

    /// Opinion held by any node: free voters read the state, zealots their pin.
    pub fn node_state(&self, graph: &Graph, node: usize) -> bool {
        match graph.kind(node) {
            NodeKind::Free(slot) => self.get(slot),
            NodeKind::Correct => true,
            NodeKind::Incorrect => false,
        }
    }
}

/// One update: a uniformly chosen free voter copies a uniformly chosen
/// neighbour (never itself). Returns the change in `X`, one of -1, 0, 1.
#[inline]
pub fn step<R: Rng + ?Sized>(state: &mut SimState, graph: &Graph, rng: &mut R) -> i8 {
    match (&graph.topology, &graph.pick_other) {
        (
            &Topology::Complete {
                n_free,
                zealots_correct,
                ..
            },
            Some(pick_other),
        ) => complete_step(state, n_free, zealots_correct, &graph.pick_free, pick_other, rng),
        (Topology::Sparse(g), _) => sparse_step(state, graph, g, rng),
        (Topology::Complete { .. }, None) => unreachable!("complete graph without sampler"),
    }
}

/// `steps` consecutive updates, dispatching on the topology once.
pub fn advance<R: Rng + ?Sized>(state: &mut SimState, graph: &Graph, rng: &mut R, steps: u64) {
    match (&graph.topology, &graph.pick_other) {
        (
            &Topology::Complete {
                n_free,
                zealots_correct,
                ..
            },
            Some(pick_other),
        ) => {
            for _ in 0..steps {
                complete_step(state, n_free, zealots_correct, &graph.pick_free, pick_other, rng);
            }
        }
        _ => {
            for _ in 0..steps {
                step(state, graph, rng);
            }
        }
    }
}

/// Neighbour drawn among the other `N − 1` nodes by index: draws `r` and
/// skips the voter's own slot.
#[inline(always)]
fn complete_step<R: Rng + ?Sized>(
    state: &mut SimState,
    n_free: usize,
    zealots_correct: usize,
    pick_free: &Uniform<u32>,
    pick_other: &Uniform<u32>,
    rng: &mut R,
) -> i8 {
    let slot = pick_free.sample(rng) as usize;
    let r = pick_other.sample(rng) as usize;
    let node = r + (r >= slot) as usize;
    let copied = if node < n_free {
        state.get(node)
    } else {
        node < n_free + zealots_correct
    };
    state.set(slot, copied)
}

#[inline(always)]
fn sparse_step<R: Rng + ?Sized>(state: &mut SimState, graph: &Graph, g: &SparseGraph, rng: &mut R) -> i8 {
    let slot = graph.pick_free.sample(rng) as usize;
    let nbrs = g.neighbors(g.free_node(slot));
    let node = nbrs[rng.random_range(0..nbrs.len() as u32) as usize];
    let copied = state.node_state(graph, node);
    state.set(slot, copied)
}

/// Burn-in, number of recorded observations, and steps between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingPlan {
    pub burn_in: u64,
    pub samples: u64,
    pub thinning: u64,
}

impl SamplingPlan {
    pub const DEFAULT_SAMPLES: u64 = 100_000;

    /// Burn-in `50·n·N` and thinning `n`, for `n` free voters and `N` nodes.
    pub fn default_for(spec: &NetworkSpec) -> Self {
        let n = spec.n_free() as u64;
        let (a, b) = spec.zealot_counts();
        let total = n + (a + b) as u64;
        SamplingPlan {
            burn_in: 50 * n * total,
            samples: Self::DEFAULT_SAMPLES,
            thinning: n.max(1),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.burn_in == 0 || self.samples == 0 || self.thinning == 0 {
            return Err(Error::domain(format!(
                "burn-in, samples and thinning must all be at least 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Mean-reversion time, in steps, of `X` on the complete graph:
/// `n (N − 1) / (α + β)`. The expected drift per step is
/// `(α (n − X) − β X) / (n (N − 1))`.
pub fn relaxation_steps(n_free: usize, zealots_correct: usize, zealots_incorrect: usize) -> f64 {
    let n = n_free as f64;
    let z = (zealots_correct + zealots_incorrect) as f64;
    n * (n + z - 1.0) / z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    pub plan: SamplingPlan,
    pub seed: u64,
    /// Independent chains; each runs the full plan on its own stream.
    pub replicas: u64,
}

impl SimulationConfig {
    pub fn new(plan: SamplingPlan, seed: u64) -> Self {
        SimulationConfig {
            plan,
            seed,
            replicas: 1,
        }
    }

    pub fn with_replicas(mut self, replicas: u64) -> Self {
        self.replicas = replicas;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub n_free: usize,
    /// Observations of each `X = k`, pooled over replicas.
    pub counts: Vec<u64>,
    pub empirical_pmf: Vec<f64>,
    pub accuracy_estimate: Probability,
    /// Binomial standard error `sqrt(â (1 − â) / samples)`.
    pub std_error: f64,
    pub seed: u64,
    pub replicas: u64,
    pub burn_in: u64,
    /// Observations per replica.
    pub samples_per_replica: u64,
    pub thinning: u64,
    /// Total number of observations.
    pub samples: u64,
    /// Total chain steps executed.
    pub steps: u64,
}

impl SimulationReport {
    fn from_counts(n_free: usize, counts: Vec<u64>, config: &SimulationConfig, replicas: u64, steps: u64) -> Self {
        let samples: u64 = counts.iter().sum();
        let threshold = n_free / 2 + 1;
        let hits: u64 = counts[threshold..].iter().sum();
        let total = samples as f64;
        let accuracy = hits as f64 / total;
        SimulationReport {
            n_free,
            empirical_pmf: counts.iter().map(|&c| c as f64 / total).collect(),
            counts,
            accuracy_estimate: Probability::saturating(accuracy),
            std_error: (accuracy * (1.0 - accuracy) / total).sqrt(),
            seed: config.seed,
            replicas,
            burn_in: config.plan.burn_in,
            samples_per_replica: config.plan.samples,
            thinning: config.plan.thinning,
            samples,
            steps,
        }
    }

    /// Pools two reports of the same run configuration.
    fn merge(self, other: Self, config: &SimulationConfig) -> Self {
        let counts = self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect();
        SimulationReport::from_counts(
            self.n_free,
            counts,
            config,
            self.replicas + other.replicas,
            self.steps + other.steps,
        )
    }

    /// Total-variation distance from the empirical pmf to `exact`.
    pub fn total_variation(&self, exact: &[f64]) -> f64 {
        0.5 * self
            .empirical_pmf
            .iter()
            .zip(exact)
            .map(|(e, p)| (e - p).abs())
            .sum::<f64>()
    }
}

fn run_chain(graph: &Graph, config: &SimulationConfig, replica: u64) -> SimulationReport {
    let plan = config.plan;
    let mut rng = replica_rng(config.seed, replica);
    let n_free = graph.n_free();
    let mut state = SimState::random(n_free, &mut rng);
    advance(&mut state, graph, &mut rng, plan.burn_in);
    let mut counts = vec![0u64; n_free + 1];
    for _ in 0..plan.samples {
        advance(&mut state, graph, &mut rng, plan.thinning);
        counts[state.correct_count()] += 1;
    }
    let steps = plan.burn_in + plan.samples * plan.thinning;
    SimulationReport::from_counts(n_free, counts, config, 1, steps)
}

fn prepare(spec: &NetworkSpec, config: &SimulationConfig) -> Result<Graph> {
    config.plan.validate()?;
    if config.replicas == 0 {
        return Err(Error::domain("at least one replica is required"));
    }
    if let NetworkSpec::Complete {
        zealots_correct,
        zealots_incorrect,
        ..
    } = spec
    {
        if *zealots_correct == 0 || *zealots_incorrect == 0 {
            return Err(Error::domain(
                "complete topology needs at least one zealot on each side; otherwise the chain absorbs",
            ));
        }
    }
    build_network(spec)
}

/// Runs `config.replicas` independent chains from random initial opinions
/// and pools their observations of `X`. Replicas run in parallel; the
/// result depends only on `(spec, config)`.
pub fn run_to_stationarity(spec: &NetworkSpec, config: &SimulationConfig) -> Result<SimulationReport> {
    let graph = prepare(spec, config)?;
    let report = (0..config.replicas)
        .into_par_iter()
        .map(|r| run_chain(&graph, config, r))
        .reduce_with(|a, b| a.merge(b, config))
        .expect("at least one replica");
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyEstimate {
    pub n_free: usize,
    pub estimate: Probability,
    pub std_error: f64,
    /// Exact finite-n value; only defined on the complete graph.
    pub analytic: Option<Probability>,
    pub report: SimulationReport,
}

/// Monte Carlo majority accuracy with the exact value alongside when the
/// topology is complete.
pub fn estimate_accuracy(spec: &NetworkSpec, config: &SimulationConfig) -> Result<AccuracyEstimate> {
    let report = run_to_stationarity(spec, config)?;
    let analytic = match spec {
        &NetworkSpec::Complete {
            n_free,
            zealots_correct,
            zealots_incorrect,
        } => Some(majority_accuracy_networked(
            PopulationSize::new(n_free)?,
            ShapePair::new(zealots_correct as f64, zealots_incorrect as f64)?,
        )?),
        NetworkSpec::EdgeList(_) => None,
    };
    Ok(AccuracyEstimate {
        n_free: report.n_free,
        estimate: report.accuracy_estimate,
        std_error: report.std_error,
        analytic,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::EdgeList;

    fn plan(burn_in: u64, samples: u64, thinning: u64) -> SimulationConfig {
        SimulationConfig::new(
            SamplingPlan {
                burn_in,
                samples,
                thinning,
            },
            42,
        )
    }

    #[test]
    fn state_counts_track_bits() {
        let mut s = SimState::from_bits(&[true, false, true, true]);
        assert_eq!(s.correct_count(), 3);
        s.set(0, false);
        s.set(1, true);
        s.set(1, true);
        assert_eq!(s.correct_count(), 3);
        assert!(!s.get(0) && s.get(1));
    }

    #[test]
    fn top_state_can_only_move_down() {
        let g = build_network(&NetworkSpec::complete(5, 2, 1)).unwrap();
        let mut rng = replica_rng(1, 0);
        for _ in 0..200 {
            let mut s = SimState::from_bits(&[true; 5]);
            let d = step(&mut s, &g, &mut rng);
            assert!(d == 0 || d == -1);
        }
    }

    #[test]
    fn two_node_chain_flips_half_the_time() {
        // n = 1 with one zealot of each kind: the voter copies either with
        // probability 1/2, so X changes with probability 1/2 per step.
        let g = build_network(&NetworkSpec::complete(1, 1, 1)).unwrap();
        let mut rng = replica_rng(9, 0);
        let mut s = SimState::from_bits(&[false]);
        let trials = 200_000;
        let mut flips = 0;
        for _ in 0..trials {
            flips += (step(&mut s, &g, &mut rng) != 0) as u32;
        }
        let frac = flips as f64 / trials as f64;
        let se = (0.25 / trials as f64).sqrt();
        assert!((frac - 0.5).abs() < 5.0 * se, "{frac}");
    }

    #[test]
    fn copying_own_opinion_is_idempotent() {
        // every neighbour is a correct zealot or a correct voter
        let g = build_network(&NetworkSpec::complete(3, 2, 0)).unwrap();
        let mut rng = replica_rng(3, 0);
        let mut s = SimState::from_bits(&[true; 3]);
        for _ in 0..100 {
            assert_eq!(step(&mut s, &g, &mut rng), 0);
        }
        assert_eq!(s.correct_count(), 3);
    }

    #[test]
    fn zero_zealots_rejected_on_complete_graph() {
        let err = run_to_stationarity(&NetworkSpec::complete(4, 0, 2), &plan(1, 1, 1)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(run_to_stationarity(&NetworkSpec::complete(4, 1, 1), &plan(0, 1, 1)).is_err());
        assert!(run_to_stationarity(&NetworkSpec::complete(4, 1, 1), &plan(1, 0, 1)).is_err());
        assert!(run_to_stationarity(&NetworkSpec::complete(4, 1, 1), &plan(1, 1, 0)).is_err());
    }

    #[test]
    fn same_seed_same_report() {
        let spec = NetworkSpec::complete(10, 2, 3);
        let cfg = plan(500, 2000, 10).with_replicas(3);
        let a = run_to_stationarity(&spec, &cfg).unwrap();
        let b = run_to_stationarity(&spec, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 6000);
        assert_eq!(a.counts.iter().sum::<u64>(), 6000);
        let c = run_to_stationarity(&spec, &SimulationConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn report_fields_are_consistent() {
        let r = run_to_stationarity(&NetworkSpec::complete(6, 1, 1), &plan(100, 5000, 6)).unwrap();
        assert!((r.empirical_pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let a = r.accuracy_estimate.value();
        assert_eq!(r.std_error, (a * (1.0 - a) / 5000.0).sqrt());
        assert_eq!(r.steps, 100 + 5000 * 6);
    }

    #[test]
    fn single_voter_estimate() {
        let cfg = plan(100, 200_000, 3);
        let est = estimate_accuracy(&NetworkSpec::complete(1, 2, 1), &cfg).unwrap();
        let exact = est.analytic.unwrap().value();
        assert!((exact - 2.0 / 3.0).abs() < 1e-14);
        // with n = 1 each step redraws X from the zealots, so samples are iid
        assert!((est.estimate.value() - exact).abs() < 4.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn ring_has_no_analytic_companion() {
        // 24-node ring: zealots at 0, 6 (correct) and 12, 18 (incorrect)
        let list = EdgeList::ring(24, vec![0, 6], vec![12, 18]);
        let spec = NetworkSpec::EdgeList(list);
        assert_eq!(spec.n_free(), 20);
        let est = estimate_accuracy(&spec, &plan(20_000, 5_000, 20)).unwrap();
        assert!(est.analytic.is_none());
        assert!(est.std_error > 0.0);
        assert_eq!(est.report.empirical_pmf.len(), 21);
    }
}
