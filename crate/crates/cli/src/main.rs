mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use lcstab::scenario::{registry, run_scenario, run_spec, Overrides, Run, RunStatus};
use lcstab::Error;
use rayon::prelude::*;

/// `println!` that ignores a closed stdout (e.g. piped into `head`).
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

const EXIT_CONFIG: u8 = 4;
const EXIT_RUNTIME: u8 = 1;

#[derive(Parser)]
#[command(name = "lcstab", version, about = "Stability classification of C0-semigroups on locally convex spaces at finite truncation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
    /// Classify a scenario described by a JSON document.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every registered scenario.
    Sweep {
        #[arg(long, required = true)]
        all: bool,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    List,
    Run {
        name: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Directory for `<scenario>.json` and `<scenario>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides { truncation: self.truncation, t_max: self.t_max }
    }
}

fn write_outputs(run: &Run, dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = &run.report.scenario;
    fs::write(dir.join(format!("{name}.json")), run.report.to_json()?)?;
    let csv = fs::File::create(dir.join(format!("{name}.csv")))?;
    run.write_csv(std::io::BufWriter::new(csv))?;
    Ok(())
}

fn summary(run: &Run) -> String {
    let r = &run.report;
    let expected = r.expected.map(|e| e.code()).unwrap_or_else(|| "-------".into());
    let status = match r.status() {
        RunStatus::Match => "match",
        RunStatus::Mismatch => "MISMATCH",
        RunStatus::TruncationSensitive => "TRUNCATION-SENSITIVE",
        RunStatus::Unchecked => "unchecked",
    };
    format!("{:<28} J={:<4} got {} expected {} {}", r.scenario, r.truncation, r.code, expected, status)
}

fn report_one(run: &Run, out: Option<&Path>) -> anyhow::Result<u8> {
    outln!("{}", summary(run));
    let r = &run.report;
    for w in &r.witnesses {
        outln!("  witness ({}) {} on {}: {}", w.property, w.seminorm, w.target, w.reason);
    }
    for n in &r.notes {
        outln!("  note: {n}");
    }
    if !r.hierarchy.consistent {
        outln!("  hierarchy violations: {}", r.hierarchy.violations.join("; "));
    }
    if let Some(dir) = out {
        write_outputs(run, dir)?;
    }
    Ok(r.status().exit_code() as u8)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Unknown { .. } | Error::Incompatible(_) => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

fn sweep(jobs: Option<usize>, out: Option<&Path>) -> anyhow::Result<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build()?;
    let start = Instant::now();
    let specs = registry();
    let runs: Vec<_> = pool.install(|| specs.par_iter().map(|s| run_spec(s, Overrides::default())).collect());
    let mut code = 0u8;
    for (spec, run) in specs.iter().zip(runs) {
        match run {
            Ok(run) => {
                outln!("{}", summary(&run));
                if let Some(dir) = out {
                    write_outputs(&run, dir)?;
                }
                let c = run.report.status().exit_code() as u8;
                // A mismatch outranks truncation sensitivity.
                code = match (code, c) {
                    (2, _) | (_, 2) => 2,
                    (a, b) => a.max(b),
                };
            }
            Err(e) => {
                outln!("{:<28} ERROR {e}", spec.name);
                code = code.max(EXIT_RUNTIME);
            }
        }
    }
    outln!("swept {} scenarios in {:.1} s", specs.len(), start.elapsed().as_secs_f64());
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: anyhow::Result<u8> = match &cli.command {
        Command::Scenario(ScenarioCmd::List) => {
            for s in registry() {
                let code = s.expected.map(|e| e.code()).unwrap_or_default();
                outln!("{:<28} {:<22} {}  {}", s.name, s.reference.as_deref().unwrap_or("-"), code, s.description);
            }
            Ok(0)
        }
        Command::Scenario(ScenarioCmd::Run { name, run }) => match run_scenario(name, run.overrides()) {
            Ok(r) => report_one(&r, run.out.as_deref()),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(error_code(&e));
            }
        },
        Command::Classify { config: path, run } => match config::load(path).and_then(|s| run_spec(&s, run.overrides())) {
            Ok(r) => report_one(&r, run.out.as_deref()),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(error_code(&e));
            }
        },
        Command::Sweep { all: _, jobs, out } => sweep(*jobs, out.as_deref()),
    };
    match result {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
