use crate::args::{batch_label, probs_label, value_name, McseArgs};
use crate::error::{CliError, Result};
use crate::format::{num, prob_label};
use crate::io::{ensure_dir, read_column, Manifest, Table};
use mcmc_confidence_core::dist::TailProbability;
use mcmc_confidence_core::mcse::{self as est, ci_quantiles, BatchPolicy, Interval, MIN_SAMPLES};

pub fn mcse(a: &McseArgs) -> Result<String> {
    let level = TailProbability::new(a.level)?;
    let raw = read_column(&a.input)?;
    if raw.len() < MIN_SAMPLES {
        return Err(CliError::Data(format!(
            "insufficient samples: n={} (at least {MIN_SAMPLES} required)",
            raw.len()
        )));
    }
    let values: Vec<f64> = raw.iter().map(|&x| a.transform.apply(x)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(CliError::Data(format!(
            "transform {} is not finite at value {} (row {})",
            value_name(a.transform),
            raw[i],
            i + 1
        )));
    }
    let policy: BatchPolicy = a.batch;
    let fit = est::mcse(&values, a.method.into(), policy, |x| x)?
        .into_value()
        .expect("length checked above");
    let center = values.iter().sum::<f64>() / values.len() as f64;
    let interval = Interval::from_se(center, fit.se, level, fit.df())?;

    let mut report: Vec<(String, String)> = vec![
        ("n".into(), fit.n.to_string()),
        ("method".into(), value_name(a.method)),
        ("batch".into(), batch_label(policy)),
        ("b".into(), fit.b.to_string()),
        ("a".into(), fit.a.to_string()),
        ("transform".into(), value_name(a.transform)),
        ("estimate".into(), num(center)),
        ("se".into(), num(fit.se)),
        ("sigma2_hat".into(), num(fit.sigma2_hat)),
        ("df".into(), num(fit.df())),
        ("level".into(), num(a.level)),
        ("critical".into(), num(interval.critical)),
        ("lower".into(), num(interval.lower)),
        ("upper".into(), num(interval.upper)),
        ("half_width".into(), num(interval.half_width)),
    ];
    if let Some(probs) = &a.probs {
        let intervals = ci_quantiles(&values, probs, level, false)?
            .into_value()
            .expect("length checked above");
        for (&p, iv) in probs.iter().zip(&intervals) {
            let l = prob_label(p);
            report.push((format!("q_{l}"), num(iv.center)));
            report.push((format!("se_q_{l}"), num(iv.se)));
            report.push((format!("lower_q_{l}"), num(iv.lower)));
            report.push((format!("upper_q_{l}"), num(iv.upper)));
        }
    }

    let mut text: String = report.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
    if fit.small_sample {
        text.push_str(&format!(
            "warning=fewer than {} samples; the standard error may be unreliable\n",
            est::WARN_SAMPLES
        ));
    }

    if let Some(out) = &a.out {
        ensure_dir(out)?;
        let mut table = Table::new(["key", "value"]);
        for (k, v) in report {
            table.push(vec![k, v]);
        }
        table.write(&out.join("estimate.csv"))?;
        let mut manifest = Manifest::new("mcse")
            .flag("input", a.input.display())
            .flag("method", value_name(a.method))
            .flag("batch", batch_label(policy))
            .flag("transform", value_name(a.transform));
        if let Some(probs) = &a.probs {
            manifest = manifest.flag("probs", probs_label(probs));
        }
        manifest.flag("level", a.level).flag("seed", a.seed).write(out)?;
    }
    Ok(text)
}
