use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, ValueEnum};
use resolvent::{BigComplex, ToleranceConfig};

use crate::cache::CACHE_ENV;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    Quintic,
    Sextic,
    IcosaSolve,
    NormalproblemSolve,
    Verify,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Quintic => "quintic",
            Pipeline::Sextic => "sextic",
            Pipeline::IcosaSolve => "icosa-solve",
            Pipeline::NormalproblemSolve => "normalproblem-solve",
            Pipeline::Verify => "verify",
        }
    }
}

/// Reduce quintics and sextics to their group normal forms and verify every step.
#[derive(Clone, Debug, Parser)]
#[command(name = "resolvent", version)]
pub struct Args {
    #[arg(long, value_enum)]
    pub pipeline: Pipeline,

    /// Comma-separated complex roots, e.g. `1,2+i,-0.5i`.
    #[arg(long, conflicts_with = "coeffs", allow_hyphen_values = true)]
    pub roots: Option<String>,

    /// Comma-separated complex coefficients, leading first.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,

    /// `X` (or `inf`) for icosa-solve; `v,w` for normalproblem-solve.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,

    /// Working precision in bits.
    #[arg(long, default_value_t = 256)]
    pub precision: u32,

    /// Relative tolerance; defaults to `2^(-precision/2)`.
    #[arg(long)]
    pub tolerance: Option<f64>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Directory for verified group caches.
    #[arg(long, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub enum Instance {
    Roots(Vec<BigComplex>),
    Coefficients(Vec<BigComplex>),
}

#[derive(Clone, Debug)]
pub enum Params {
    None,
    Icosa(Option<BigComplex>),
    Normal(BigComplex, BigComplex),
}

#[derive(Clone, Debug)]
pub struct RunRequest {
    pub pipeline: Pipeline,
    pub instance: Option<Instance>,
    pub params: Params,
    pub config: ToleranceConfig,
    pub seed: u64,
}

pub const ROOT_ITERATIONS: u32 = 1000;

fn parse_list(text: &str, prec: u32) -> Result<Vec<BigComplex>> {
    text.split(',')
        .map(|t| BigComplex::parse_literal(prec, t).map_err(anyhow::Error::from))
        .collect()
}

impl RunRequest {
    pub fn from_args(args: &Args) -> Result<Self> {
        let tolerance = args
            .tolerance
            .unwrap_or_else(|| 2f64.powi(-(args.precision.min(2000) as i32) / 2));
        let config = ToleranceConfig::new(args.precision, tolerance, ROOT_ITERATIONS)?.with_seed(args.seed);
        let prec = config.prec();
        let instance = match (&args.roots, &args.coeffs) {
            (Some(_), Some(_)) => bail!("--roots and --coeffs are mutually exclusive"),
            (Some(r), None) => Some(Instance::Roots(parse_list(r, prec).context("--roots")?)),
            (None, Some(c)) => Some(Instance::Coefficients(parse_list(c, prec).context("--coeffs")?)),
            (None, None) => None,
        };
        let params = match (args.pipeline, &args.params) {
            (Pipeline::IcosaSolve, Some(p)) if p.trim().eq_ignore_ascii_case("inf") => Params::Icosa(None),
            (Pipeline::IcosaSolve, Some(p)) => Params::Icosa(Some(BigComplex::parse_literal(prec, p).context("--params")?)),
            (Pipeline::NormalproblemSolve, Some(p)) => {
                let vw = parse_list(p, prec).context("--params")?;
                ensure!(vw.len() == 2, "--params takes `v,w`, got {} values", vw.len());
                Params::Normal(vw[0].clone(), vw[1].clone())
            }
            (_, Some(_)) => bail!("--params is only used by icosa-solve and normalproblem-solve"),
            (_, None) => Params::None,
        };

        let degree = match &instance {
            Some(Instance::Roots(r)) => Some(r.len()),
            Some(Instance::Coefficients(c)) => Some(c.len().saturating_sub(1)),
            None => None,
        };
        match args.pipeline {
            Pipeline::Quintic => ensure!(degree == Some(5), "quintic needs 5 roots or 6 coefficients"),
            Pipeline::Sextic => ensure!(degree == Some(6), "sextic needs 6 roots or 7 coefficients"),
            Pipeline::IcosaSolve => {
                ensure!(instance.is_none(), "icosa-solve takes --params, not an instance");
                ensure!(matches!(params, Params::Icosa(_)), "icosa-solve needs --params X");
            }
            Pipeline::NormalproblemSolve => ensure!(
                matches!(params, Params::Normal(..)) != (degree == Some(6)),
                "normalproblem-solve needs either --params v,w or a sextic instance"
            ),
            Pipeline::Verify => ensure!(instance.is_none(), "verify takes no instance"),
        }
        Ok(Self {
            pipeline: args.pipeline,
            instance,
            params,
            config,
            seed: args.seed,
        })
    }
}
