//! Config-driven command-line front end: run sweeps and presets, inspect
//! states, tune the revival gain, list presets.
//!
//! Exit codes: 0 success, 2 configuration errors, 3 scenario errors,
//! 4 I/O errors.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use cvghz::{
    ghz_state, measured_state, sweep, tuned_gb, CovMatrix, Dataset, NetworkSpec, Orientation,
    SqueezedModeSpec,
};

use config::{resolve, OutputFormat, RunInputs};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Scenario(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Scenario(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Scenario(msg) => write!(f, "scenario error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cvghz",
    version,
    about = "Tripartite entangled optical beams in lossy and noisy channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a configured scenario and write datasets.
    Run(RunArgs),
    /// Print covariance, symplectic spectrum, PPT triple and class of a state.
    Inspect(InspectArgs),
    /// Compute the tuned revival gain and a residual-noise table.
    Tune(TuneArgs),
    /// List the available presets.
    Presets,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("what").args(["preset", "config"])))]
struct RunArgs {
    /// Preset name (see `cvghz presets`).
    #[arg(long)]
    preset: Option<String>,
    /// TOML config file with a preset name or an inline scenario.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: $CVGHZ_OUTPUT_DIR, then ./out).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Dataset formats to write.
    #[arg(long, value_delimiter = ',')]
    format: Vec<OutputFormat>,
    /// Seed recorded with the run (tomography perturbation runs).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the sweep (default: all processors).
    #[arg(long)]
    jobs: Option<usize>,
    /// Override the grid resolution of the scenario.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Print the dataset summary only, without the per-point table.
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(clap::Args)]
struct InspectArgs {
    /// The measured tripartite reference state.
    #[arg(long)]
    measured: bool,
    /// Vacuum state of N modes.
    #[arg(long, value_name = "N")]
    vacuum: Option<usize>,
    /// Source state, e.g. --ghz r=0.4 or --ghz squeeze_db=-3.5,antisqueeze_db=8.5.
    #[arg(long, value_name = "PARAMS", num_args = 0..=1, default_missing_value = "")]
    ghz: Option<String>,
    /// With --ghz: force pure inputs (anti-squeezing mirrors squeezing).
    #[arg(long)]
    pure: bool,
    /// Balanced state: --symmetric s=2.74,t=4.89,c=2.25.
    #[arg(long, value_name = "PARAMS")]
    symmetric: Option<String>,
    /// Unbalanced state: --asymmetric s=2.74,t=4.89,c=2.25,c_x=1.8.
    #[arg(long, value_name = "PARAMS")]
    asymmetric: Option<String>,
    /// Load a covariance record (JSON) from a file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TuneArgs {
    /// Channel transmissivity.
    #[arg(long)]
    eta: f64,
    /// Revival splitter transmissivity.
    #[arg(long = "T", default_value_t = 0.9)]
    t: f64,
    /// Channel noise magnitude.
    #[arg(long = "g-a", default_value_t = 1.0)]
    g_a: f64,
    /// Excess-noise variance used for the residual table.
    #[arg(long, default_value_t = 5.0)]
    noise_var: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Inspect(args) => inspect(args),
        Command::Tune(args) => tune(args),
        Command::Presets => presets(),
    }
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let plan = resolve(RunInputs {
        preset: args.preset,
        config: args.config,
        out_dir: args.out_dir,
        formats: args.format,
        seed: args.seed,
        jobs: args.jobs,
        grid_points: args.grid_points,
    })?;

    let records = match plan.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::Scenario(format!("worker pool: {e}")))?;
            pool.install(|| sweep(&plan.scenario))
        }
        None => sweep(&plan.scenario),
    }
    .map_err(|e| CliError::Scenario(e.to_string()))?;

    let dataset = Dataset {
        preset: plan.preset.clone(),
        scenario: plan.scenario.clone(),
        metadata: plan.metadata.clone(),
        records,
    };

    std::fs::create_dir_all(&plan.out_dir).map_err(|e| {
        CliError::Io(format!(
            "cannot create output directory {}: {e}",
            plan.out_dir.display()
        ))
    })?;
    let write = |name: String, contents: String| -> Result<PathBuf, CliError> {
        let path = plan.out_dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    };

    let mut written = Vec::new();
    for format in &plan.formats {
        let path = match format {
            OutputFormat::Csv => write(
                format!("{}.csv", dataset.scenario.id),
                dataset.to_csv_string(),
            )?,
            OutputFormat::Json => write(
                format!("{}.json", dataset.scenario.id),
                dataset.to_json_string(),
            )?,
        };
        written.push(path);
    }
    let summary = report::summary_text(&dataset);
    let summary_path = write(
        format!("{}_summary.txt", dataset.scenario.id),
        summary.clone(),
    )?;
    written.push(summary_path);

    print!("{summary}");
    println!("files:");
    for path in written {
        println!("  {}", path.display());
    }
    if args.verbose > 0 {
        println!("records: {}", dataset.records.len());
    }
    Ok(())
}

fn parse_params(text: &str, allowed: &[&str]) -> Result<Vec<(String, f64)>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.is_empty()) {
        let Some((key, value)) = part.split_once('=') else {
            return Err(CliError::Scenario(format!(
                "malformed parameter '{part}' (expected key=value)"
            )));
        };
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(CliError::Scenario(format!(
                "unknown parameter '{key}' (expected one of {})",
                allowed.join(", ")
            )));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| CliError::Scenario(format!("parameter '{key}': {e}")))?;
        out.push((key.to_string(), value));
    }
    Ok(out)
}

fn lookup(params: &[(String, f64)], key: &str) -> Option<f64> {
    params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
}

fn inspect(args: InspectArgs) -> Result<(), CliError> {
    let selected = [
        args.measured,
        args.vacuum.is_some(),
        args.ghz.is_some(),
        args.symmetric.is_some(),
        args.asymmetric.is_some(),
        args.file.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if selected != 1 {
        return Err(CliError::Scenario(
            "pick exactly one state source: --measured, --vacuum N, --ghz, --symmetric, \
             --asymmetric or --file"
                .into(),
        ));
    }

    let sigma: CovMatrix = if args.measured {
        measured_state()
    } else if let Some(n) = args.vacuum {
        if n == 0 {
            return Err(CliError::Scenario("vacuum needs at least one mode".into()));
        }
        CovMatrix::identity(n)
    } else if let Some(params) = &args.ghz {
        build_ghz(params, args.pure)?
    } else if let Some(params) = &args.symmetric {
        let params = parse_params(params, &["s", "t", "c"])?;
        let (s, t, c) = required_stc(&params)?;
        cvghz::symmetric_state(s, t, c).map_err(|e| CliError::Scenario(e.to_string()))?
    } else if let Some(params) = &args.asymmetric {
        let params = parse_params(params, &["s", "t", "c", "c_x"])?;
        let (s, t, c) = required_stc(&params)?;
        let c_x = lookup(&params, "c_x")
            .ok_or_else(|| CliError::Scenario("asymmetric state needs c_x".into()))?;
        cvghz::asymmetric_state(s, t, c, c_x).map_err(|e| CliError::Scenario(e.to_string()))?
    } else {
        let path = args.file.expect("file source selected");
        let text = std::fs::read_to_string(&path).map_err(|e| {
            CliError::Scenario(format!("cannot read state file {}: {e}", path.display()))
        })?;
        CovMatrix::from_json(&text).map_err(|e| CliError::Scenario(e.to_string()))?
    };

    print!("{}", report::state_report(&sigma));
    Ok(())
}

fn required_stc(params: &[(String, f64)]) -> Result<(f64, f64, f64), CliError> {
    match (
        lookup(params, "s"),
        lookup(params, "t"),
        lookup(params, "c"),
    ) {
        (Some(s), Some(t), Some(c)) => Ok((s, t, c)),
        _ => Err(CliError::Scenario("state needs s, t and c values".into())),
    }
}

fn build_ghz(params: &str, pure: bool) -> Result<CovMatrix, CliError> {
    let params = parse_params(params, &["r", "squeeze_db", "antisqueeze_db"])?;
    let scenario_err = |e: cvghz::Error| CliError::Scenario(e.to_string());
    if let Some(r) = lookup(&params, "r") {
        // r defines a pure squeezer; --pure just makes the intent explicit
        let inputs = [
            SqueezedModeSpec::pure_from_r(r, Orientation::XSqueezed).map_err(scenario_err)?,
            SqueezedModeSpec::pure_from_r(r, Orientation::PSqueezed).map_err(scenario_err)?,
            SqueezedModeSpec::pure_from_r(r, Orientation::XSqueezed).map_err(scenario_err)?,
        ];
        return ghz_state(&inputs, &NetworkSpec::default()).map_err(scenario_err);
    }
    let squeeze_db = lookup(&params, "squeeze_db").unwrap_or(-3.5);
    let antisqueeze_db = if pure {
        -squeeze_db
    } else {
        lookup(&params, "antisqueeze_db").unwrap_or(8.5)
    };
    cvghz::ghz_state_uniform(squeeze_db, antisqueeze_db).map_err(scenario_err)
}

fn tune(args: TuneArgs) -> Result<(), CliError> {
    if args.eta == 1.0 {
        print!(
            "{}",
            report::tune_report(args.eta, args.t, args.g_a, args.noise_var, 0.0)
        );
        return Ok(());
    }
    let g_b =
        tuned_gb(args.eta, args.t, args.g_a).map_err(|e| CliError::Scenario(e.to_string()))?;
    print!(
        "{}",
        report::tune_report(args.eta, args.t, args.g_a, args.noise_var, g_b)
    );
    Ok(())
}

fn presets() -> Result<(), CliError> {
    for name in cvghz::preset_names() {
        let (_, meta) =
            cvghz::preset_scenario(name).map_err(|e| CliError::Scenario(e.to_string()))?;
        let description = meta
            .get("description")
            .map(String::as_str)
            .unwrap_or_default();
        println!("{name:<16} {description}");
    }
    Ok(())
}
