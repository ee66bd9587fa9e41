use crate::args::{probs_label, value_name, SamplerArg, StopArgs, Target};
use crate::error::Result;
use crate::format::{num, prob_label, NA};
use crate::io::{ensure_dir, Manifest, Table};
use mcmc_confidence_core::dist::{normal_quantile, t_quantile};
use mcmc_confidence_core::mcse::quantile_type1;
use mcmc_confidence_core::rng::Rng;
use mcmc_confidence_core::samplers::{Ar1Params, NormalPosteriorParams, NvState, TdaState};
use mcmc_confidence_core::stopping::{
    fixed_width_mean, fixed_width_quantiles, Ar1Source, ChainSource, NormalPosteriorSource, StoppingConfig,
    StoppingResult, TdaSource,
};
use rayon::prelude::*;

/// Exact value of each tracked functional, where known.
fn truths(a: &StopArgs) -> Result<Vec<f64>> {
    let (center, scale, quantile): (f64, f64, Box<dyn Fn(f64) -> _>) = match a.sampler {
        SamplerArg::Ar1 => {
            let p = Ar1Params::new(a.rho, a.tau)?;
            (0.0, p.stationary_variance().sqrt(), Box::new(normal_quantile))
        }
        SamplerArg::Tda => (0.0, 1.0, Box::new(|p| t_quantile(p, 4.0))),
        SamplerArg::GibbsNormal => {
            let params = NormalPosteriorParams::new(a.m, a.y_bar, a.s2)?;
            let (df, scale) = params.mu_marginal();
            (a.y_bar, scale, Box::new(move |p| t_quantile(p, df)))
        }
    };
    Ok(match a.target {
        Target::Mean => vec![center],
        Target::Quantiles => a
            .probs
            .iter()
            .map(|&p| quantile(p).map(|z| center + scale * z))
            .collect::<std::result::Result<_, _>>()?,
    })
}

fn functionals(a: &StopArgs) -> Vec<String> {
    match a.target {
        Target::Mean => vec!["mean".into()],
        Target::Quantiles => a.probs.iter().map(|&p| format!("q_{}", prob_label(p))).collect(),
    }
}

fn run_source<S: ChainSource>(source: &mut S, a: &StopArgs, config: &StoppingConfig) -> Result<StoppingResult> {
    Ok(match a.target {
        Target::Mean => fixed_width_mean(source, config)?,
        Target::Quantiles => fixed_width_quantiles(source, &a.probs, config, a.bonferroni)?,
    })
}

fn replicate(a: &StopArgs, config: &StoppingConfig, seed: u64) -> Result<StoppingResult> {
    let rng = Rng::new(seed);
    match a.sampler {
        SamplerArg::Ar1 => {
            let mut source = Ar1Source::new(a.init, Ar1Params::new(a.rho, a.tau)?, rng);
            run_source(&mut source, a, config)
        }
        SamplerArg::Tda => {
            let mut source = TdaSource::new(TdaState::new(a.init, 1.0)?, rng)?;
            run_source(&mut source, a, config)
        }
        SamplerArg::GibbsNormal => {
            let params = NormalPosteriorParams::new(a.m, a.y_bar, a.s2)?;
            let mut source =
                NormalPosteriorSource::new(NvState::new(a.init, 1.0)?, params, a.order.into(), rng)?;
            run_source(&mut source, a, config)
        }
    }
}

fn default_step(target: Target) -> usize {
    match target {
        Target::Mean => 1000,
        Target::Quantiles => 2000,
    }
}

pub fn stop(a: &StopArgs) -> Result<String> {
    let step = a.step.unwrap_or_else(|| default_step(a.target));
    let config = StoppingConfig::new(a.epsilon, a.level, step, a.pilot, a.max_n)?;
    let truth = truths(a)?;
    let names = functionals(a);
    let results: Vec<StoppingResult> = (0..a.replications)
        .into_par_iter()
        .map(|r| replicate(a, &config, a.seed.wrapping_add(r as u64)))
        .collect::<Result<_>>()?;

    let quantile_target = a.target == Target::Quantiles;
    let mut header = vec!["replicate"];
    if quantile_target {
        header.push("functional");
    }
    header.extend(["terminal_n", "half", "estimate", "converged", "covered"]);
    let mut table = Table::new(header);
    let mut trace = Table::new(["replicate", "n", "half"]);
    for (r, res) in results.iter().enumerate() {
        for (j, iv) in res.intervals.iter().enumerate() {
            let mut row = vec![r.to_string()];
            if quantile_target {
                row.push(names[j].clone());
            }
            row.extend([
                res.terminal_n.to_string(),
                num(iv.half_width),
                num(iv.center),
                res.converged.to_string(),
                iv.contains(truth[j]).to_string(),
            ]);
            table.push(row);
        }
        for c in &res.trace {
            trace.push(vec![r.to_string(), c.n.to_string(), num(c.half)]);
        }
    }

    ensure_dir(&a.out)?;
    table.write(&a.out.join("results.csv"))?;
    trace.write(&a.out.join("trace.csv"))?;
    let mut files = vec!["results.csv", "trace.csv"];

    let terminal: Vec<f64> = results.iter().map(|r| r.terminal_n as f64).collect();
    let converged = results.iter().filter(|r| r.converged).count();
    let mut text = format!(
        "replications={}\nconverged={converged}\nmedian_terminal_n={}\n",
        a.replications,
        quantile_type1(&terminal, 0.5).map_or_else(|_| NA.to_string(), num)
    );
    if a.replications > 1 {
        let mut summary = Table::new([
            "functional",
            "replications",
            "converged",
            "coverage",
            "n_min",
            "n_q25",
            "n_median",
            "n_q75",
            "n_max",
        ]);
        let n = results.len() as f64;
        for (j, name) in names.iter().enumerate() {
            let covered = results.iter().filter(|r| r.intervals[j].contains(truth[j])).count();
            let coverage = covered as f64 / n;
            text.push_str(&format!("coverage_{name}={}\n", num(coverage)));
            let mut row = vec![name.clone(), a.replications.to_string(), converged.to_string(), num(coverage)];
            for p in [f64::MIN_POSITIVE, 0.25, 0.5, 0.75, 1.0] {
                row.push(num(quantile_type1(&terminal, p)?));
            }
            summary.push(row);
        }
        summary.write(&a.out.join("summary.csv"))?;
        files.push("summary.csv");
    }

    let mut manifest = Manifest::new("stop")
        .flag("target", value_name(a.target))
        .flag("sampler", value_name(a.sampler));
    manifest = match a.sampler {
        SamplerArg::Ar1 => manifest.flag("rho", a.rho).flag("tau", a.tau),
        SamplerArg::Tda => manifest,
        SamplerArg::GibbsNormal => manifest
            .flag("m", a.m)
            .flag("y-bar", a.y_bar)
            .flag("s2", a.s2)
            .flag("order", value_name(a.order)),
    };
    manifest = manifest
        .flag("init", a.init)
        .flag("epsilon", a.epsilon)
        .flag("level", a.level)
        .flag("step", step)
        .flag("pilot", a.pilot)
        .flag("max-n", a.max_n);
    if quantile_target {
        manifest = manifest.flag("probs", probs_label(&a.probs));
        if a.bonferroni {
            manifest = manifest.flag("bonferroni", "");
        }
    }
    manifest
        .flag("replications", a.replications)
        .flag("seed", a.seed)
        .write(&a.out)?;
    files.push("manifest.txt");
    text.push_str(&super::wrote(&a.out, &files));
    Ok(text)
}
