use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConstraintChoice, MethodChoice, PolicyChoice, RunConfig, TvChoice};

#[derive(Debug, Parser)]
#[command(
    name = "spdp",
    version,
    about = "Primal-dual CT reconstruction toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render the modified Shepp-Logan phantom as a 16-bit PGM.
    Phantom {
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Build a parallel-beam problem and write it as a bundle directory.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reconstruct from a bundle, or from a problem simulated in memory.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Problem bundle written by `simulate`.
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// Exit 0 even if `max_iter` is reached before convergence.
        #[arg(long)]
        allow_max_iter: bool,
    },
    /// Compare a reconstruction with the ground truth.
    Eval {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        rec: PathBuf,
        /// Report `log10` of the energy ratio instead of decibels.
        #[arg(long)]
        snr_literal: bool,
    },
}

/// Config file plus overrides; flags win over the file.
#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// TOML run config; missing keys take defaults.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,

    /// Image side in pixels.
    #[arg(long, help_heading = "Geometry")]
    pub n: Option<usize>,
    /// `start:step:stop` (inclusive) or a comma-separated list, in degrees.
    #[arg(long, help_heading = "Geometry", allow_hyphen_values = true)]
    pub angles: Option<String>,
    /// Rays per angle [default: round(sqrt(2) n)].
    #[arg(long, help_heading = "Geometry")]
    pub p: Option<usize>,

    /// Squared-l2 data weight; alone, it also sets `w2 = 1 - w1`.
    #[arg(long, help_heading = "Model")]
    pub w1: Option<f64>,
    #[arg(long, help_heading = "Model")]
    pub w2: Option<f64>,
    /// Total-variation weight.
    #[arg(long, help_heading = "Model")]
    pub lambda: Option<f64>,
    #[arg(long, value_enum, help_heading = "Model")]
    pub tv: Option<TvChoice>,
    #[arg(long, value_enum, help_heading = "Model")]
    pub constraint: Option<ConstraintChoice>,
    #[arg(long, help_heading = "Model", allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, help_heading = "Model", allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long, value_enum, help_heading = "Model")]
    pub method: Option<MethodChoice>,

    #[arg(long, value_enum, help_heading = "Solver")]
    pub policy: Option<PolicyChoice>,
    /// Preconditioner exponent in [0, 2].
    #[arg(long, help_heading = "Solver")]
    pub alpha: Option<f64>,
    /// Fixed primal step; needs `tau sigma |K|^2 <= 1`.
    #[arg(long, help_heading = "Solver")]
    pub tau: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub sigma: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub theta: Option<f64>,
    /// Stop when the relative change of x falls to this.
    #[arg(long, help_heading = "Solver")]
    pub epsilon: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub max_iter: Option<usize>,
    #[arg(long, help_heading = "Solver")]
    pub log_every: Option<usize>,
    /// Seed of the operator-norm estimate.
    #[arg(long, help_heading = "Solver")]
    pub power_seed: Option<u64>,

    /// Gaussian noise level [default: 0.01 mean|b|].
    #[arg(long, help_heading = "Noise")]
    pub gaussian_sigma: Option<f64>,
    /// Share of entries replaced by uniform impulses.
    #[arg(long, help_heading = "Noise")]
    pub impulse_fraction: Option<f64>,
    #[arg(long, help_heading = "Noise")]
    pub impulse_scale: Option<f64>,
    #[arg(long, help_heading = "Noise")]
    pub seed: Option<u64>,

    /// Log `log10` of the energy ratio instead of decibels.
    #[arg(long)]
    pub snr_literal: bool,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl RunArgs {
    /// The config file (or defaults) with every given flag applied.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        set(&mut c.geometry.n, self.n);
        if let Some(a) = &self.angles {
            c.geometry.angles = crate::config::Angles::Range(a.clone());
        }
        if self.p.is_some() {
            c.geometry.p = self.p;
        }
        let m = &mut c.model;
        set(&mut m.w1, self.w1);
        set(&mut m.w2, self.w2);
        set(&mut m.lambda, self.lambda);
        set(&mut m.tv, self.tv);
        set(&mut m.constraint, self.constraint);
        set(&mut m.lo, self.lo);
        set(&mut m.hi, self.hi);
        set(&mut m.method, self.method);
        // a single weight on the command line fixes the other through w1 + w2 = 1
        match (self.w1, self.w2) {
            (Some(w1), None) => m.w2 = 1.0 - w1,
            (None, Some(w2)) => m.w1 = 1.0 - w2,
            _ => {}
        }
        let s = &mut c.solver;
        set(&mut s.policy, self.policy);
        set(&mut s.alpha, self.alpha);
        if self.tau.is_some() {
            s.tau = self.tau;
        }
        if self.sigma.is_some() {
            s.sigma = self.sigma;
        }
        set(&mut s.theta, self.theta);
        set(&mut s.epsilon, self.epsilon);
        set(&mut s.max_iter, self.max_iter);
        set(&mut s.log_every, self.log_every);
        set(&mut s.power_seed, self.power_seed);
        let z = &mut c.noise;
        if self.gaussian_sigma.is_some() {
            z.gaussian_sigma = self.gaussian_sigma;
        }
        set(&mut z.impulse_fraction, self.impulse_fraction);
        set(&mut z.impulse_scale, self.impulse_scale);
        set(&mut z.seed, self.seed);
        if self.snr_literal {
            c.io.snr_literal = true;
        }
        Ok(c)
    }
}
