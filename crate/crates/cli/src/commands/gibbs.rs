use super::{iter_table, wrote};
use crate::args::{value_name, GibbsArgs};
use crate::error::{CliError, Result};
use crate::format::num;
use crate::io::{ensure_dir, Manifest, Table};
use mcmc_confidence_core::diagnostics::{kde_1d, kde_2d, rb_marginal_mu, Density1d};
use mcmc_confidence_core::rng::Rng;
use mcmc_confidence_core::samplers::{nv_gibbs_run, NormalPosteriorParams, NvState};
use std::path::Path;

fn write_density(d: &Density1d, path: &Path) -> Result<()> {
    let mut table = Table::new(["x", "density"]);
    for (x, f) in d.x.iter().zip(&d.density) {
        table.push(vec![num(*x), num(*f)]);
    }
    table.write(path)
}

/// `lo, lo + step, ...` up to `hi`, computed by multiplication to avoid drift.
fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    let count = ((hi - lo) / step + 1e-9).floor() + 1.0;
    if !(1.0..=1e7).contains(&count) {
        return Err(CliError::Usage(format!("grid {lo},{hi},{step} has too many points")));
    }
    Ok((0..count as usize).map(|i| lo + i as f64 * step).collect())
}

pub fn gibbs_normal(a: &GibbsArgs) -> Result<String> {
    let params = NormalPosteriorParams::new(a.m, a.y_bar, a.s2)?;
    let mut rng = Rng::new(a.seed);
    let chain = nv_gibbs_run(
        a.n,
        params,
        a.order.into(),
        NvState::new(a.init_mu, a.init_theta)?,
        &mut rng,
    )?;
    let (mu, theta) = (chain.first(), chain.second());
    let (lo, hi, step) = a.rb_grid;

    let kde_mu = kde_1d(mu, a.kde_points)?;
    let kde_theta = kde_1d(theta, a.kde_points)?;
    let joint = kde_2d(mu, theta, a.grid2d, a.lims)?;
    let rb = rb_marginal_mu(theta, &grid(lo, hi, step)?, params, a.rb_variant.into())?;

    ensure_dir(&a.out)?;
    iter_table(
        vec!["mu".into(), "theta".into()],
        &[mu.iter().map(|&v| num(v)).collect(), theta.iter().map(|&v| num(v)).collect()],
    )
    .write(&a.out.join("chain.csv"))?;
    write_density(&kde_mu, &a.out.join("kde_mu.csv"))?;
    write_density(&kde_theta, &a.out.join("kde_theta.csv"))?;
    write_density(&rb, &a.out.join("rb_mu.csv"))?;
    let mut table = Table::new(["x", "y", "density"]);
    for (i, x) in joint.x.iter().enumerate() {
        for (j, y) in joint.y.iter().enumerate() {
            table.push(vec![num(*x), num(*y), num(joint.at(i, j))]);
        }
    }
    table.write(&a.out.join("kde2d.csv"))?;

    let l = a.lims;
    Manifest::new("gibbs-normal")
        .flag("m", a.m)
        .flag("y-bar", a.y_bar)
        .flag("s2", a.s2)
        .flag("n", a.n)
        .flag("init-mu", a.init_mu)
        .flag("init-theta", a.init_theta)
        .flag("order", value_name(a.order))
        .flag("rb-variant", value_name(a.rb_variant))
        .flag("rb-grid", format!("{lo},{hi},{step}"))
        .flag("kde-points", a.kde_points)
        .flag("grid2d", a.grid2d)
        .flag("lims", format!("{},{},{},{}", l.x_lo, l.x_hi, l.y_lo, l.y_hi))
        .flag("seed", a.seed)
        .write(&a.out)?;
    Ok(wrote(
        &a.out,
        &["chain.csv", "kde_mu.csv", "kde_theta.csv", "kde2d.csv", "rb_mu.csv", "manifest.txt"],
    ))
}

#[cfg(test)]
mod tests {
    use super::grid;

    #[test]
    fn grid_endpoints() {
        let g = grid(-3.0, 4.0, 0.01).unwrap();
        assert_eq!(g.len(), 701);
        assert_eq!(g[0], -3.0);
        assert!((g[700] - 4.0).abs() < 1e-12);
    }
}
