use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holonomy_lab::commands::{self, RunConfig};

#[derive(Parser)]
#[command(name = "holonomy-lab", version, about = "Holonomy and cylindrical-function experiments on finite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Directory for <command>.json, .csv and .dat outputs; stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with status 1 on a not-member verdict or an unmet tolerance.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Args, Clone, Default)]
struct Inputs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    connection: Option<PathBuf>,
    /// Short group name (su2, u3, t2, u2q); overrides the connection file.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Holonomy matrix and trace along a path.
    Holonomy {
        #[command(flatten)]
        inputs: Inputs,
        /// Signed edge ids in traversal order, e.g. "e1,e2" or "1,-2".
        #[arg(long)]
        path: String,
    },
    /// Normalized trace along a loop at the basepoint.
    Wilson {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        path: String,
    },
    /// Gauge invariance and orbit normal form spread.
    GaugeOrbit {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        function: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Monte Carlo Haar mean of a cylindrical function.
    HaarMean {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Loop generators, frame and roundtrip of the spanning-tree factorization.
    Theta {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Smooth connection matching Haar-random holonomies on a family.
    Approx {
        #[arg(long)]
        group: String,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Loops invisible to smooth Abelian holonomy.
    Obstruction {
        #[arg(long)]
        graph: PathBuf,
        /// "generators", "commutator", or ';'-separated signed edge lists.
        #[arg(long, default_value = "generators")]
        loops: String,
    },
    /// Closure membership of a generalized connection.
    Closure {
        #[command(flatten)]
        inputs: Inputs,
        /// semisimple, torus, product or quotient; inferred by default.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        bound: Option<usize>,
    },
}

fn with_inputs(i: Inputs) -> RunConfig {
    RunConfig { graph: i.graph, connection: i.connection, group: i.group, steps: i.steps, ..RunConfig::default() }
}

fn config(c: Command) -> (&'static str, RunConfig) {
    match c {
        Command::Holonomy { inputs, path } => ("holonomy", RunConfig { path: Some(path), ..with_inputs(inputs) }),
        Command::Wilson { inputs, path } => ("wilson", RunConfig { path: Some(path), ..with_inputs(inputs) }),
        Command::GaugeOrbit { inputs, function, seed, trials } => {
            ("gauge-orbit", RunConfig { function, seed: Some(seed), trials, ..with_inputs(inputs) })
        }
        Command::HaarMean { inputs, function, seed, samples } => {
            ("haar-mean", RunConfig { function: Some(function), seed: Some(seed), samples, ..with_inputs(inputs) })
        }
        Command::Theta { inputs } => ("theta", with_inputs(inputs)),
        Command::Approx { group, family, graph, seed, tolerance, steps } => (
            "approx",
            RunConfig { group: Some(group), family: Some(family), graph, seed: Some(seed), tolerance, steps, ..RunConfig::default() },
        ),
        Command::Obstruction { graph, loops } => ("obstruction", RunConfig { graph: Some(graph), loops: Some(loops), ..RunConfig::default() }),
        Command::Closure { inputs, mode, bound } => ("closure", RunConfig { mode, bound, ..with_inputs(inputs) }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, cfg) = config(cli.command);
    let report = match commands::run(name, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("holonomy-lab {name}: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.common.out {
        Some(dir) => report.write_to(dir),
        None => {
            print!("{}", report.rendered());
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("holonomy-lab {name}: {e}");
        return ExitCode::from(2);
    }
    if cli.common.strict && report.failed {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
