//! One function per subcommand. Each returns the text to print on stdout.

mod gibbs;
mod mcse;
mod samplers;
mod stop;

pub use gibbs::gibbs_normal;
pub use mcse::mcse;
pub use samplers::{ar1, tda};
pub use stop::stop;

use crate::args::{Cli, Command};
use crate::error::Result;
use crate::format::opt;
use crate::io::Table;
use mcmc_confidence_core::diagnostics::RunningSeries;

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Ar1(a) => ar1(a),
        Command::Tda(a) => tda(a),
        Command::GibbsNormal(a) => gibbs_normal(a),
        Command::Mcse(a) => mcse(a),
        Command::Stop(a) => stop(a),
    }
}

/// Column `j` of a running series, `NA` where absent.
fn series_column(s: &RunningSeries, j: usize) -> Vec<String> {
    s.column(j).into_iter().map(opt).collect()
}

/// A table with an `iter` column followed by the given columns.
fn iter_table(header: Vec<String>, columns: &[Vec<String>]) -> Table {
    let mut table = Table::new(std::iter::once("iter".to_string()).chain(header));
    let n = columns.first().map_or(0, Vec::len);
    for i in 0..n {
        let mut row = Vec::with_capacity(columns.len() + 1);
        row.push((i + 1).to_string());
        row.extend(columns.iter().map(|c| c[i].clone()));
        table.push(row);
    }
    table
}

fn wrote(dir: &std::path::Path, files: &[&str]) -> String {
    format!("wrote {} to {}\n", files.join(", "), dir.display())
}
