use std::collections::hash_map::RandomState;
use std::hash::BuildHasher;

use zealot_core::dynamics::{estimate_accuracy, EdgeList, NetworkSpec, SamplingPlan, SimulationConfig};
use zealot_core::stationary::{
    accuracy_result, asymptotic_accuracy, beta_binomial_pmf, beta_moments, majority_accuracy_independent,
    normal_approx_accuracy,
};
use zealot_core::verify::{
    check_integral_identities, check_proposition, convergence_sweep, proposition_grid_scan, GridScan,
};
use zealot_core::{Population, PopulationSize, Probability, ShapePair};

use crate::args::{
    AccuracyArgs, Command, PmfArgs, PopulationArg, PropositionArgs, ShapeArgs, ShapeCommand, SimulateArgs, SweepArgs,
};
use crate::envelope::{Cell, Envelope};
use crate::CliError;

/// Absolute quadrature tolerance for `verify-identities`.
const IDENTITY_TOLERANCE: f64 = 1e-12;

pub fn execute(command: &Command) -> Result<Envelope, CliError> {
    let mut env = match command {
        Command::Pmf(a) => pmf(a),
        Command::Accuracy(a) => accuracy(a),
        Command::Limit(a) => limit(a),
        Command::NormalApprox(a) => normal_approx(a),
        Command::Simulate(a) => simulate(a),
        Command::VerifyProposition(a) => verify_proposition(a),
        Command::VerifyIdentities(a) => verify_identities(a),
        Command::Sweep(a) => sweep(a),
    }?;
    env.param("format", command.output().format);
    Ok(env)
}

fn shape_of(args: &ShapeArgs) -> Result<ShapePair, CliError> {
    Ok(ShapePair::new(args.alpha, args.beta)?)
}

fn shape_params(env: &mut Envelope, args: &ShapeArgs) {
    env.param("alpha", args.alpha).param("beta", args.beta);
}

fn pmf(args: &PmfArgs) -> Result<Envelope, CliError> {
    let n = PopulationSize::new(args.n)?;
    let pmf = beta_binomial_pmf(n, shape_of(&args.shape)?)?;
    let mut env = Envelope::new("pmf", &["k", "probability"]);
    env.param("n", args.n);
    shape_params(&mut env, &args.shape);
    for (k, p) in pmf.probs().into_iter().enumerate() {
        env.row(vec![k.into(), p.into()]);
    }
    env.summary("majority_accuracy", pmf.upper_tail(n.majority_threshold()).value());
    Ok(env)
}

fn accuracy(args: &AccuracyArgs) -> Result<Envelope, CliError> {
    let mut env = Envelope::new("accuracy", &["n", "networked", "independent", "signal_p"]);
    let list: Vec<String> = args.n.iter().map(ToString::to_string).collect();
    env.param("n", list.join(","));

    match (args.p, args.alpha, args.beta) {
        (Some(p), _, _) => {
            env.param("p", p);
            let signal = Probability::new(p)?;
            for &n in &args.n {
                let independent = match n {
                    PopulationArg::Finite(n) => majority_accuracy_independent(PopulationSize::new(n)?, p)?.value(),
                    PopulationArg::Infinite => independent_limit(signal.value()),
                };
                env.row(vec![n_cell(n), Cell::Empty, independent.into(), signal.value().into()]);
            }
        }
        (None, Some(alpha), Some(beta)) => {
            env.param("alpha", alpha).param("beta", beta);
            let shape = ShapePair::new(alpha, beta)?;
            for &n in &args.n {
                let population = match n {
                    PopulationArg::Finite(n) => Population::Finite(PopulationSize::new(n)?),
                    PopulationArg::Infinite => Population::Infinite,
                };
                let r = accuracy_result(population, shape)?;
                env.row(vec![
                    n_cell(n),
                    r.networked.value().into(),
                    r.independent.value().into(),
                    r.signal_p.value().into(),
                ]);
            }
        }
        _ => return Err(CliError::Usage("accuracy needs --p or both --alpha and --beta".into())),
    }
    Ok(env)
}

fn independent_limit(p: f64) -> f64 {
    if p > 0.5 {
        1.0
    } else if p < 0.5 {
        0.0
    } else {
        0.5
    }
}

fn n_cell(n: PopulationArg) -> Cell {
    match n {
        PopulationArg::Finite(n) => n.into(),
        PopulationArg::Infinite => Cell::Text("inf".into()),
    }
}

fn limit(args: &ShapeCommand) -> Result<Envelope, CliError> {
    let shape = shape_of(&args.shape)?;
    let mut env = Envelope::new("limit", &["alpha", "beta", "accuracy", "signal_p"]);
    shape_params(&mut env, &args.shape);
    env.row(vec![
        shape.alpha().into(),
        shape.beta().into(),
        asymptotic_accuracy(shape)?.value().into(),
        shape.signal_probability().value().into(),
    ]);
    Ok(env)
}

fn normal_approx(args: &ShapeCommand) -> Result<Envelope, CliError> {
    let shape = shape_of(&args.shape)?;
    let (mu, var) = beta_moments(shape);
    let approx = normal_approx_accuracy(shape)?.value();
    let exact = asymptotic_accuracy(shape)?.value();
    let mut env = Envelope::new(
        "normal-approx",
        &["alpha", "beta", "mu", "sigma", "approx_accuracy", "exact_limit"],
    );
    shape_params(&mut env, &args.shape);
    env.row(vec![
        shape.alpha().into(),
        shape.beta().into(),
        mu.into(),
        var.sqrt().into(),
        approx.into(),
        exact.into(),
    ]);
    env.summary("abs_error", (approx - exact).abs());
    Ok(env)
}

fn simulate(args: &SimulateArgs) -> Result<Envelope, CliError> {
    let mut env = Envelope::new("simulate", &["k", "empirical", "exact"]);
    let spec = match (&args.edges, args.n, args.alpha, args.beta) {
        (Some(path), ..) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let list = EdgeList::parse(&text).map_err(|e| CliError::Input {
                path: path.display().to_string(),
                source: e,
            })?;
            env.param("edges", path.display());
            NetworkSpec::EdgeList(list)
        }
        (None, Some(n), Some(alpha), Some(beta)) => {
            env.param("n", n).param("alpha", alpha).param("beta", beta);
            NetworkSpec::complete(n, alpha, beta)
        }
        _ => {
            return Err(CliError::Usage(
                "simulate needs --edges or all of --n, --alpha, --beta".into(),
            ))
        }
    };

    let defaults = SamplingPlan::default_for(&spec);
    let plan = SamplingPlan {
        burn_in: args.burn_in.unwrap_or(defaults.burn_in),
        samples: args.samples.unwrap_or(defaults.samples),
        thinning: args.thinning.unwrap_or(defaults.thinning),
    };
    let seed = args.seed.unwrap_or_else(fresh_seed);
    env.param("seed", seed)
        .param("samples", plan.samples)
        .param("burn-in", plan.burn_in)
        .param("thinning", plan.thinning)
        .param("replicas", args.replicas);
    env.seed = Some(seed);

    let config = SimulationConfig::new(plan, seed).with_replicas(args.replicas);
    let est = estimate_accuracy(&spec, &config)?;
    let report = &est.report;
    let exact = match &spec {
        &NetworkSpec::Complete {
            n_free,
            zealots_correct,
            zealots_incorrect,
        } => {
            let shape = ShapePair::new(zealots_correct as f64, zealots_incorrect as f64)?;
            Some(beta_binomial_pmf(PopulationSize::new(n_free)?, shape)?.probs())
        }
        NetworkSpec::EdgeList(_) => None,
    };
    for (k, &p) in report.empirical_pmf.iter().enumerate() {
        let exact_k = exact.as_ref().map(|e| e[k]);
        env.row(vec![k.into(), p.into(), exact_k.into()]);
    }

    env.summary("n_free", report.n_free);
    env.summary("accuracy_estimate", est.estimate.value());
    env.summary("std_error", est.std_error);
    env.summary("analytic_accuracy", est.analytic.map(Probability::value));
    env.summary("total_variation", exact.as_ref().map(|e| report.total_variation(e)));
    env.summary("samples", report.samples);
    env.summary("steps", report.steps);
    Ok(env)
}

fn fresh_seed() -> u64 {
    RandomState::new().hash_one(std::time::SystemTime::now())
}

fn verify_proposition(args: &PropositionArgs) -> Result<Envelope, CliError> {
    let mut env = Envelope::new(
        "verify-proposition",
        &["alpha", "beta", "lhs", "rhs", "margin", "holds"],
    );
    let reports = match (args.alpha, args.beta) {
        (Some(alpha), Some(beta)) => {
            env.param("alpha", alpha).param("beta", beta);
            vec![check_proposition(ShapePair::new(alpha, beta)?)?]
        }
        _ => {
            env.param("grid-min", args.grid_min)
                .param("grid-max", args.grid_max)
                .param("grid-step", args.grid_step);
            let scan = proposition_grid_scan(&GridScan::square(args.grid_min, args.grid_max, args.grid_step))?;
            env.summary("checked", scan.checked);
            env.summary("holding", scan.holding);
            env.summary("violations", scan.violations.len());
            env.summary("worst_margin", scan.worst.map(|w| w.margin));
            scan.reports
        }
    };
    for r in &reports {
        env.row(vec![
            r.shape.alpha().into(),
            r.shape.beta().into(),
            r.lhs.value().into(),
            r.rhs.value().into(),
            r.margin.into(),
            r.holds.into(),
        ]);
    }
    Ok(env)
}

fn verify_identities(args: &ShapeCommand) -> Result<Envelope, CliError> {
    let chain = check_integral_identities(shape_of(&args.shape)?, IDENTITY_TOLERANCE)?;
    let mut env = Envelope::new("verify-identities", &["step", "lhs", "rhs", "satisfied"]);
    shape_params(&mut env, &args.shape);
    for r in &chain.reports {
        env.row(vec![
            Cell::Text(r.step.name().into()),
            r.lhs_integral.into(),
            r.rhs_integral.into(),
            r.satisfied.into(),
        ]);
    }
    env.summary("all_satisfied", chain.all_satisfied());
    env.summary("reduction_residual", chain.reduction_residual);
    Ok(env)
}

fn sweep(args: &SweepArgs) -> Result<Envelope, CliError> {
    let shape = shape_of(&args.shape)?;
    let rows = convergence_sweep(shape, &args.n)?;
    let mut env = Envelope::new("sweep", &["n", "finite", "limit", "gap"]);
    let list: Vec<String> = args.n.iter().map(ToString::to_string).collect();
    env.param("n", list.join(","));
    shape_params(&mut env, &args.shape);
    for r in &rows {
        env.row(vec![
            r.n.into(),
            r.finite_accuracy.value().into(),
            r.limit_accuracy.value().into(),
            r.gap.into(),
        ]);
    }
    Ok(env)
}
