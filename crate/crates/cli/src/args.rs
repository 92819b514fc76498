use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub const THREADS_ENV: &str = "ZSWEIGHT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "zsweight", version, about = "Weighted zero-sum workbench")]
pub struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    pub threads: usize,

    /// Append one JSON record per invocation to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub log: Option<PathBuf>,

    /// Human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact D_A(G) with a maximal zero-sum-free witness.
    Davenport(DavenportArgs),
    /// max D_A(Z_p) over |A| = k.
    DavenportMax(DavMaxArgs),
    /// Minimum |A| with D_A(G) <= k.
    Fd(FdArgs),
    /// Explicit weight-set constructions.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Random-density threshold sweep over Z_p.
    Sweep(SweepArgs),
    /// Run a bundled verification suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug)]
pub struct DavenportArgs {
    /// Group as invariant factors or any factor list, e.g. 12 or 2x4.
    #[arg(long)]
    pub group: String,
    /// Weights mod exp(G), e.g. 1,7 or 1-3,-1.
    #[arg(long, allow_hyphen_values = true)]
    pub weights: String,
    /// Largest k tried.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
}

#[derive(Args, Debug)]
pub struct DavMaxArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub k: u64,
}

#[derive(Args, Debug)]
pub struct FdArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub budget_nodes: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// Singer perfect difference set in Z_{q^2+q+1}.
    Singer {
        #[arg(long)]
        q: u64,
    },
    /// Weights from a Singer set, p = q^2+q+1.
    SingerWeights {
        #[arg(long)]
        p: u64,
    },
    /// [-sqrt p, sqrt p] without zero.
    Interval {
        #[arg(long)]
        p: u64,
    },
    /// {±1, ..., ±r} in Z_n.
    Symmetric {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// Z_p minus {0, ±1, ..., ±r}.
    Complement {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
    },
    /// Interval union with D_A <= 4.
    Quartic {
        #[arg(long)]
        p: u64,
        /// Rational, e.g. 1.5 or 3/2.
        #[arg(long, default_value = "3/2")]
        c0: String,
        /// Fraction A/B setting eta = floor(L*A/B).
        #[arg(long, default_value = "1/10")]
        s: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        budget_nodes: Option<u64>,
    },
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub k: u64,
    /// A:B:STEPS, evenly spaced and inclusive.
    #[arg(long)]
    pub theta: String,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10.0)]
    pub omega: f64,
    #[arg(long, value_name = "FILE.csv")]
    pub out: Option<PathBuf>,
    /// Per-check node budget.
    #[arg(long)]
    pub budget_nodes: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    KnownFormulas {
        #[arg(long, default_value_t = 64)]
        max_n: u64,
    },
    Singer {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,17")]
        q: Vec<u64>,
    },
    Intervals {
        /// Exclusive upper bound on p.
        #[arg(long, default_value_t = 2000)]
        p_max: u64,
    },
    /// Without arguments: the fixed instance list.
    Relations {
        #[arg(long, requires_all = ["m", "k"])]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        m: Option<u32>,
        #[arg(long, requires = "p")]
        k: Option<u64>,
    },
    DualMax {
        #[arg(long, requires = "k")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        k: Option<u64>,
    },
    PairLemma {
        #[arg(long, default_value_t = 40)]
        n_max: u64,
    },
    Complement {
        #[arg(long, value_delimiter = ',', default_value = "13,17,29")]
        p: Vec<u64>,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_consistent() {
        Cli::command().debug_assert();
    }
}
