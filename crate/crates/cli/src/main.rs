//! `matchstick`: validate matchstick graphs and check the discharging argument
//! against them.

mod commands;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use matchstick_core::geometry::DEFAULT_EPS;

#[derive(Parser, Debug)]
#[command(name = "matchstick", version, about = "Matchstick graph checks and 5-regular discharging audits")]
struct Cli {
    /// Structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Distance tolerance in matchstick lengths.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS)]
    eps: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check unit edges, distinct points, crossings and simplicity.
    Validate {
        file: PathBuf,
        /// Also require every degree to be at most this.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Also require every degree to equal this.
        #[arg(long)]
        regular: Option<usize>,
    },
    /// Face counts by size, outer face included.
    Faces {
        file: PathBuf,
        /// Read a rotation-system file.
        #[arg(long = "abstract")]
        abstract_: bool,
    },
    /// Per-vertex contributions and their total.
    Contribution {
        file: PathBuf,
        #[arg(long = "abstract")]
        abstract_: bool,
    },
    /// Face sets of a degree-5 vertex with non-negative contribution.
    Facesets {
        /// Keep only strictly positive contributions.
        #[arg(long)]
        strict: bool,
        /// Skip the requirement of one face with at least 4 corners.
        #[arg(long)]
        no_angle_filter: bool,
    },
    /// Triangle/rhombus classes and their parameters.
    Tq { file: PathBuf },
    /// Parameters of a lattice class given as face descriptors.
    Tr { file: PathBuf },
    /// Discharging weights and booking audit per class.
    Weights { file: PathBuf },
    /// Run the full pipeline on a candidate 5-regular graph.
    Refute { file: PathBuf },
    /// All lattice classes up to a number of faces.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        max_faces: usize,
        /// Print every class.
        #[arg(long)]
        list: bool,
    },
    /// Random face-by-face growth with parameter deltas.
    Random {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        faces: usize,
        /// Consecutive seeds to run; more than one prints a summary.
        #[arg(long, default_value_t = 1)]
        runs: u64,
    },
    /// Closed simple lattice walks and their largest angle.
    Pentagon {
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
    /// Exhaustive weight audit on generated graphs around small classes.
    Sweep {
        #[arg(long, default_value_t = 2)]
        max_faces: usize,
        #[arg(long)]
        max_vertices: Option<usize>,
    },
    /// Window of the infinite triangle/square strip pattern.
    Patch {
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 5)]
        cols: usize,
        /// Per-strip shifts in quarter units, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        shift: Vec<i32>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Draw a graph as SVG with classes coloured.
    Render {
        file: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if !(cli.eps > 0.0 && cli.eps.is_finite()) {
        eprintln!("error: --eps must be positive");
        return ExitCode::from(1);
    }
    match commands::run(&cli.command, cli.eps) {
        Ok(out) => {
            let body = if cli.json { out.json() + "\n" } else { out.text() };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
