//! The `equicube` command: argument parsing, file formats, rendering and
//! exit codes (0 success, 1 domain error, 2 usage error).

mod commands;
mod input;
mod manifest;
mod render;

pub use manifest::{sha256_hex, RunManifest};
pub use render::{render_table, RenderedTable, TableRow};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Searches at or above this dimension need `--long`.
pub const LONG_SEARCH_N: u32 = 8;
/// Classifications at or above this dimension need `--long`.
pub const LONG_CLASSIFY_N: u32 = 7;

#[derive(Parser, Debug)]
#[command(name = "equicube", version, about = "Perfect colorings of the Boolean hypercube")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "EQUICUBE_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Allow long-running searches and classifications.
    #[arg(long, global = true)]
    pub long: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Write a JSON run manifest here.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Hex,
}

#[derive(Args, Debug)]
pub struct ColoringArg {
    /// JSON coloring, or hex fiber lines together with --n; `-` reads stdin.
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a coloring is perfect and print its quotient matrix.
    Verify(ColoringArg),
    /// Eigenvalues of a quotient matrix or of a coloring.
    Spectrum {
        #[arg(long, conflicts_with = "coloring")]
        matrix: Option<String>,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Coarsest perfect coloring refining the input.
    Refine(ColoringArg),
    /// Canonical representative and stabilizer order.
    Canon(ColoringArg),
    /// Whether two colorings are equivalent, with a witness.
    Equiv {
        #[command(flatten)]
        first: ColoringArg,
        #[arg(long)]
        other: PathBuf,
    },
    /// Order and generators of the stabilizer of a coloring or a fiber.
    Autorder {
        #[arg(long, conflicts_with = "fiber")]
        coloring: Option<PathBuf>,
        /// Hex truth table; the stabilizer is the set stabilizer.
        #[arg(long)]
        fiber: Option<String>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// All classes of perfect colorings with a given quotient matrix.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        matrix: String,
        /// Resumable state file; created if missing, resumed if present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Classes of μ-fold 1-perfect codes.
    Codes {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        mu: u32,
    },
    /// Classes of partitions into multifold 1-perfect codes.
    Partitions {
        #[arg(long)]
        n: u32,
        /// Multiplicities summing to n + 1, e.g. `5,3`.
        #[arg(long)]
        spectrum: String,
    },
    /// Exhaustive classification under a degree or correlation-immunity bound.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "ci_min", required_unless_present = "ci_min")]
        degree_max: Option<u32>,
        #[arg(long)]
        ci_min: Option<u32>,
        /// Fiber dataset (hex lines) instead of exhaustive generation.
        #[arg(long)]
        library: Option<PathBuf>,
    },
    /// Build a coloring from one of the constructions and verify it.
    Construct {
        #[command(subcommand)]
        which: Construct,
    },
    /// Time a fixed set of tasks.
    Bench,
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Distance from the zero vertex.
    Distance {
        #[arg(long)]
        n: u32,
    },
    /// `(x_{n-1}, f(x))` from a coloring `f`.
    Constr0(ColoringArg),
    /// Quadrant construction from two colorings of the same cube.
    Constr1 {
        #[command(flatten)]
        f: ColoringArg,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        c: u32,
    },
    /// The 3-coloring `g` of `Q_n`.
    G {
        #[arg(long)]
        n: u32,
    },
    /// The 3-coloring `g_{i,j}` of `Q_n`.
    Gij {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
    /// Twin-pair 4-coloring splitting both colors of the merged `(n-2, 2; 2, n-2)` coloring.
    Constr3 {
        #[arg(long)]
        n: u32,
        /// `plain` or `i,j`.
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        #[arg(long, default_value_t = 0)]
        swap: usize,
    },
    /// The 8-coloring of `Q_6` with six essential arguments.
    SixArgument,
    /// Solutions of a group equation on `Q_9`.
    StarEquation {
        #[arg(long, value_enum)]
        group: GroupArg,
    },
    /// 4-coloring of `Q_9` from a quasigroup.
    Quasigroup,
    /// 4-coloring of `Q_9` from a `(3,3;3,3)` coloring of `Q_6`.
    GBased(ColoringArg),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Klein,
    Cyclic,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(equicube::Error),
}

impl From<equicube::Error> for CliError {
    fn from(e: equicube::Error) -> Self {
        CliError::Domain(e)
    }
}

/// What a command produced, in each output format.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub hex: Option<String>,
}

/// Per-run state shared by the commands.
pub struct Context {
    pub long: bool,
    pub inputs: Vec<(String, String)>,
    pub outputs: Vec<String>,
}

impl Context {
    fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push((path.display().to_string(), sha256_hex(bytes)));
    }
}

fn error_object(e: &CliError) -> Value {
    match e {
        CliError::Usage(m) => json!({ "error": "usage", "message": m }),
        CliError::Domain(err) => {
            let mut v = json!({ "error": err.kind(), "message": err.to_string() });
            if let equicube::Error::NotPerfect { first, second, color } = err {
                v["witness"] = json!({ "first": first, "second": second, "color": color });
            }
            if let equicube::Error::CapExceeded { cap, n, .. } = err {
                v["cap"] = json!(cap);
                v["n"] = json!(n);
            }
            v
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify(_) => "verify",
        Command::Spectrum { .. } => "spectrum",
        Command::Refine(_) => "refine",
        Command::Canon(_) => "canon",
        Command::Equiv { .. } => "equiv",
        Command::Autorder { .. } => "autorder",
        Command::Search { .. } => "search",
        Command::Codes { .. } => "codes",
        Command::Partitions { .. } => "partitions",
        Command::Classify { .. } => "classify",
        Command::Construct { .. } => "construct",
        Command::Bench => "bench",
    }
}

fn emit(cli: &Cli, out: Output, ctx: &mut Context) -> Result<(), CliError> {
    let body = match cli.global.format {
        Format::Text => out.text,
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
        Format::Hex => out.hex.ok_or_else(|| CliError::Usage("this command has no hex output".into()))?,
    };
    match &cli.global.output {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| equicube::Error::Io(format!("{}: {e}", p.display())))?;
            ctx.outputs.push(p.display().to_string());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error of ours
            let _ = stdout.write_all(body.as_bytes());
        }
    }
    Ok(())
}

fn run(cli: &Cli, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let threads = match cli.global.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => t,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let mut ctx = Context { long: cli.global.long, inputs: Vec::new(), outputs: Vec::new() };
    let out = pool.install(|| commands::dispatch(&cli.command, &mut ctx))?;
    emit(cli, out, &mut ctx)?;
    if let Some(path) = &cli.global.manifest {
        let m = RunManifest {
            command: command_name(&cli.command).into(),
            parameters: argv.iter().skip(1).cloned().collect(),
            input_digests: ctx.inputs.iter().cloned().collect(),
            output_paths: ctx.outputs.clone(),
            wall_time_ms: start.elapsed().as_millis() as u64,
            threads,
        };
        let text = serde_json::to_string_pretty(&m).expect("serializable") + "\n";
        std::fs::write(path, text).map_err(|e| equicube::Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Run the command line `argv` (program name first) and return the exit code.
pub fn cli_main(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli, &argv) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", error_object(&e));
            match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Domain(_) => EXIT_DOMAIN,
            }
        }
    }
}
