//! Run configuration: TOML file schema and flag merging. Flags win over the
//! config file; the config file wins over environment defaults.

use std::path::{Path, PathBuf};

use cvghz::ScenarioSpec;
use serde::Deserialize;

use crate::CliError;

/// Environment variable providing the default output directory.
pub const OUTPUT_DIR_ENV: &str = "CVGHZ_OUTPUT_DIR";

const DEFAULT_OUTPUT_DIR: &str = "out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Top-level config file: either a preset name or an inline scenario,
/// plus output settings.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub scenario: Option<ScenarioSpec>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let config: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("config file {}: {e}", path.display())))?;
        if config.preset.is_some() == config.scenario.is_some() {
            return Err(CliError::Config(format!(
                "config file {} must set exactly one of `preset` or `[scenario]`",
                path.display()
            )));
        }
        Ok(config)
    }

    pub fn parse_formats(&self) -> Result<Option<Vec<OutputFormat>>, CliError> {
        let Some(names) = &self.output.formats else {
            return Ok(None);
        };
        if names.is_empty() {
            return Err(CliError::Config("config selects no output format".into()));
        }
        names
            .iter()
            .map(|name| match name.as_str() {
                "csv" => Ok(OutputFormat::Csv),
                "json" => Ok(OutputFormat::Json),
                other => Err(CliError::Config(format!(
                    "unknown output format '{other}' (expected csv or json)"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

/// Fully resolved run settings.
#[derive(Debug)]
pub struct RunPlan {
    pub preset: Option<String>,
    pub scenario: ScenarioSpec,
    pub metadata: std::collections::BTreeMap<String, String>,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub jobs: Option<usize>,
}

pub struct RunInputs {
    pub preset: Option<String>,
    pub config: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub formats: Vec<OutputFormat>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub grid_points: Option<usize>,
}

pub fn resolve(inputs: RunInputs) -> Result<RunPlan, CliError> {
    let mut preset = inputs.preset;
    let mut scenario: Option<ScenarioSpec> = None;
    let mut metadata = std::collections::BTreeMap::new();
    let mut out_dir = inputs.out_dir;
    let mut formats = inputs.formats;
    let mut seed = inputs.seed;
    let mut jobs = inputs.jobs;

    if let Some(path) = &inputs.config {
        let file = FileConfig::load(path)?;
        if preset.is_none() {
            preset = file.preset.clone();
        }
        scenario = file.scenario.clone();
        if out_dir.is_none() {
            out_dir = file.output.directory.clone();
        }
        if formats.is_empty() {
            if let Some(parsed) = file.parse_formats()? {
                formats = parsed;
            }
        }
        if seed.is_none() {
            seed = file.output.seed;
        }
        if jobs.is_none() {
            jobs = file.output.jobs;
        }
    }

    let mut scenario = match (&preset, scenario) {
        (Some(name), None) => {
            let (spec, meta) =
                cvghz::preset_scenario(name).map_err(|e| CliError::Scenario(e.to_string()))?;
            metadata = meta;
            spec
        }
        (None, Some(spec)) => spec,
        (None, None) => {
            return Err(CliError::Config(
                "nothing to run: pass --preset NAME or --config FILE".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "both a preset and an inline scenario were given".into(),
            ))
        }
    };

    if let Some(points) = inputs.grid_points {
        scenario.grid.points = points;
    }
    scenario
        .validate()
        .map_err(|e| CliError::Scenario(e.to_string()))?;

    let out_dir = out_dir
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    if formats.is_empty() {
        formats = vec![OutputFormat::Csv];
    }
    metadata.insert("seed".into(), seed.unwrap_or(0).to_string());

    Ok(RunPlan {
        preset,
        scenario,
        metadata,
        out_dir,
        formats,
        jobs,
    })
}
