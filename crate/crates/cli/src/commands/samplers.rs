use super::{iter_table, series_column, wrote};
use crate::args::{probs_label, Ar1Args, TdaArgs};
use crate::error::Result;
use crate::format::{num, opt, prob_label};
use crate::io::{ensure_dir, Manifest, Table};
use mcmc_confidence_core::diagnostics::{
    acf, running_mcse, running_mean, running_quantile_se, running_quantiles, rb_second_moment,
};
use mcmc_confidence_core::dist::{t_quantile, TailProbability};
use mcmc_confidence_core::mcse::{batch_layout, BatchPolicy, Method};
use mcmc_confidence_core::rng::Rng;
use mcmc_confidence_core::samplers::{ar1_run, tda_run, Ar1Params, TdaState};

pub fn ar1(a: &Ar1Args) -> Result<String> {
    let params = Ar1Params::new(a.rho, a.tau)?;
    let level = TailProbability::new(a.level)?;
    let mut rng = Rng::new(a.seed);
    let chain = ar1_run(a.init, a.n, params, &mut rng)?;
    let x = chain.values();
    let acf_values = acf(x, a.max_lag)?;

    let mean = running_mean(x)?;
    let se_bm = running_mcse(x, Method::Bm, |v| v)?;
    let se_obm = running_mcse(x, Method::Obm, |v| v)?;
    let q = running_quantiles(x, &a.probs)?;
    let se_q = running_quantile_se(x, &a.probs)?;

    let mut lcl = Vec::with_capacity(x.len());
    let mut ucl = Vec::with_capacity(x.len());
    for k in 1..=x.len() {
        match (mean.get(k), se_obm.get(k)) {
            (Some(m), Some(se)) => {
                let b = batch_layout(k, BatchPolicy::SquareRoot)?.b;
                let half = t_quantile(level.get(), (k - b + 1) as f64)? * se[0];
                lcl.push(num(m[0] - half));
                ucl.push(num(m[0] + half));
            }
            _ => {
                lcl.push(opt(None));
                ucl.push(opt(None));
            }
        }
    }

    let labels: Vec<String> = a.probs.iter().map(|&p| prob_label(p)).collect();
    let mut header: Vec<String> = vec!["mean".into(), "se_bm".into(), "se_obm".into()];
    header.extend(labels.iter().map(|l| format!("q_{l}")));
    header.extend(labels.iter().map(|l| format!("se_q_{l}")));
    header.extend(["mean_lcl_obm".into(), "mean_ucl_obm".into()]);
    let mut columns = vec![
        series_column(&mean, 0),
        series_column(&se_bm, 0),
        series_column(&se_obm, 0),
    ];
    columns.extend((0..a.probs.len()).map(|j| series_column(&q, j)));
    columns.extend((0..a.probs.len()).map(|j| series_column(&se_q, j)));
    columns.push(lcl);
    columns.push(ucl);

    ensure_dir(&a.out)?;
    iter_table(vec!["value".into()], &[x.iter().map(|&v| num(v)).collect()]).write(&a.out.join("chain.csv"))?;
    iter_table(header, &columns).write(&a.out.join("running.csv"))?;
    let mut acf_table = Table::new(["lag", "r"]);
    for (lag, r) in acf_values.iter().enumerate() {
        acf_table.push(vec![lag.to_string(), num(*r)]);
    }
    acf_table.write(&a.out.join("acf.csv"))?;

    let mut manifest = Manifest::new("ar1")
        .flag("rho", a.rho)
        .flag("tau", a.tau)
        .flag("n", a.n)
        .flag("init", a.init)
        .flag("probs", probs_label(&a.probs))
        .flag("level", a.level);
    if let Some(lag) = a.max_lag {
        manifest = manifest.flag("max-lag", lag);
    }
    manifest.flag("seed", a.seed).write(&a.out)?;
    Ok(wrote(&a.out, &["chain.csv", "running.csv", "acf.csv", "manifest.txt"]))
}

pub fn tda(a: &TdaArgs) -> Result<String> {
    let mut rng = Rng::new(a.seed);
    let chain = tda_run(a.n, TdaState::new(a.init_x, a.init_y)?, &mut rng)?;
    let (x, y) = (chain.first(), chain.second());
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();

    let columns = vec![
        series_column(&running_mean(x)?, 0),
        series_column(&running_mean(&x2)?, 0),
        series_column(&rb_second_moment(y)?, 0),
        series_column(&running_mcse(x, Method::Obm, |v| v)?, 0),
        series_column(&running_mcse(x, Method::Obm, |v| v * v)?, 0),
        series_column(&running_mcse(y, Method::Obm, |v| 1.0 / v)?, 0),
    ];
    let header = ["x_mean", "x2_mean", "rb_mean", "se_obm_x", "se_obm_x2", "se_obm_rb"]
        .map(String::from)
        .to_vec();

    ensure_dir(&a.out)?;
    iter_table(
        vec!["x".into(), "y".into()],
        &[x.iter().map(|&v| num(v)).collect(), y.iter().map(|&v| num(v)).collect()],
    )
    .write(&a.out.join("chain.csv"))?;
    iter_table(header, &columns).write(&a.out.join("moments.csv"))?;
    Manifest::new("tda")
        .flag("n", a.n)
        .flag("init-x", a.init_x)
        .flag("init-y", a.init_y)
        .flag("seed", a.seed)
        .write(&a.out)?;
    Ok(wrote(&a.out, &["chain.csv", "moments.csv", "manifest.txt"]))
}
