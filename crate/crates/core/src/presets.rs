//! Named sweep scenarios covering the standard loss, noise and revival
//! studies, plus measured/ideal source variants for comparison.

use std::collections::BTreeMap;

use crate::channels::ChannelSpec;
use crate::error::{Error, Result};
use crate::states::{measured_state, symmetrized_params, SymmetrizedParams};
use crate::sweep::{
    Dataset, GbSetting, Grid, RevivalSetting, ScenarioSpec, StateSource, SweepAxis,
};

/// Default grid resolution: resolves features at the 0.01 scale.
const GRID_POINTS: usize = 201;

/// Squeezing parameter of the ideal-source variants.
const IDEAL_R: f64 = 0.4;

/// Excess-noise defaults of the noisy-channel studies.
const NOISE_GA: f64 = 1.0;
const NOISE_VAR: f64 = 5.0;

/// Revival splitter transmissivity used by the revival presets.
const REVIVAL_T: f64 = 0.9;

/// Channel transmissivity of the noise sweeps.
const NOISE_SWEEP_ETA: f64 = 0.6;

pub const PRESET_NAMES: [&str; 18] = [
    "fig2a",
    "fig2b",
    "fig2a-measured",
    "fig2b-measured",
    "fig3a",
    "fig3b",
    "fig3c",
    "fig3d",
    "fig3e",
    "fig3f",
    "fig4a",
    "fig4b",
    "fig4a-ideal",
    "fig4b-ideal",
    "fig5a",
    "fig5b",
    "fig5a-ideal",
    "fig5b-ideal",
];

pub fn preset_names() -> &'static [&'static str] {
    &PRESET_NAMES
}

fn balanced_params() -> SymmetrizedParams {
    symmetrized_params(&measured_state()).expect("measured state symmetrizes")
}

fn balanced_metadata(meta: &mut BTreeMap<String, String>, p: &SymmetrizedParams) {
    meta.insert("s".into(), format!("{:.15}", p.s));
    meta.insert("t".into(), format!("{:.15}", p.t));
    meta.insert("c_pooled".into(), format!("{:.15}", p.c));
    meta.insert("c_x_mean".into(), format!("{:.15}", p.c_x_mean));
    meta.insert("c_p_mean".into(), format!("{:.15}", p.c_p_mean));
    meta.insert(
        "correlation_choice".into(),
        "pooled mean of |x| and |p| correlations; per-quadrature means listed alongside".into(),
    );
}

fn eta_grid() -> Grid {
    Grid::new(0.0, 1.0, GRID_POINTS).expect("static grid")
}

fn noise_grid() -> Grid {
    Grid::new(0.0, NOISE_VAR, GRID_POINTS).expect("static grid")
}

fn loss_channels() -> Vec<ChannelSpec> {
    vec![ChannelSpec::identity(); 3]
}

fn noisy_channels() -> Vec<ChannelSpec> {
    let mut channels = vec![ChannelSpec::identity(); 3];
    channels[0] = ChannelSpec {
        eta: 1.0,
        g_a: NOISE_GA,
        noise_var: NOISE_VAR,
    };
    channels
}

fn noise_sweep_channels() -> Vec<ChannelSpec> {
    let mut channels = vec![ChannelSpec::identity(); 3];
    channels[0] = ChannelSpec {
        eta: NOISE_SWEEP_ETA,
        g_a: NOISE_GA,
        noise_var: 0.0,
    };
    channels
}

fn tuned_revival() -> RevivalSetting {
    RevivalSetting {
        mode: 0,
        transmissivity: REVIVAL_T,
        g_b: GbSetting::Tuned,
    }
}

/// Scenario and metadata for a preset name.
pub fn preset_scenario(name: &str) -> Result<(ScenarioSpec, BTreeMap<String, String>)> {
    let p = balanced_params();
    let balanced = StateSource::Symmetric {
        s: p.s,
        t: p.t,
        c: p.c,
    };
    let ideal = StateSource::GhzPure { r: IDEAL_R };
    let mut meta = BTreeMap::new();

    let spec = match name {
        "fig2a" | "fig2b" => {
            let two = name == "fig2b";
            meta.insert(
                "description".into(),
                format!(
                    "balanced state, {}, transmissivity sweep",
                    if two {
                        "two equal lossy channels"
                    } else {
                        "one lossy channel"
                    }
                ),
            );
            meta.insert(
                "channel_config".into(),
                if two {
                    "loss on A and C, equal eta".into()
                } else {
                    "loss on A only".into()
                },
            );
            balanced_metadata(&mut meta, &p);
            ScenarioSpec {
                id: name.into(),
                source: balanced,
                channels: loss_channels(),
                swept_modes: if two { vec![0, 2] } else { vec![0] },
                revival: None,
                axis: SweepAxis::Eta,
                grid: eta_grid(),
            }
        }
        "fig2a-measured" | "fig2b-measured" => {
            let two = name == "fig2b-measured";
            meta.insert(
                "description".into(),
                format!(
                    "measured state, {}, transmissivity sweep",
                    if two {
                        "two equal lossy channels"
                    } else {
                        "one lossy channel"
                    }
                ),
            );
            ScenarioSpec {
                id: name.into(),
                source: StateSource::Measured,
                channels: loss_channels(),
                swept_modes: if two { vec![0, 2] } else { vec![0] },
                revival: None,
                axis: SweepAxis::Eta,
                grid: eta_grid(),
            }
        }
        "fig3a" | "fig3b" | "fig3c" | "fig3d" | "fig3e" | "fig3f" => {
            let (ratio, two) = match name {
                "fig3a" => (0.8, false),
                "fig3b" => (0.8, true),
                "fig3c" => (0.5, false),
                "fig3d" => (0.5, true),
                "fig3e" => (0.3, false),
                _ => (0.3, true),
            };
            meta.insert(
                "description".into(),
                format!(
                    "unbalanced state c_x/c = {ratio}, {}",
                    if two {
                        "two equal lossy channels"
                    } else {
                        "one lossy channel"
                    }
                ),
            );
            meta.insert(
                "channel_config".into(),
                if two {
                    "loss on A and C, equal eta".into()
                } else {
                    "loss on A only".into()
                },
            );
            meta.insert("cx_ratio".into(), format!("{ratio}"));
            balanced_metadata(&mut meta, &p);
            ScenarioSpec {
                id: name.into(),
                source: StateSource::Asymmetric {
                    s: p.s,
                    t: p.t,
                    c: p.c,
                    c_x: ratio * p.c,
                },
                channels: loss_channels(),
                swept_modes: if two { vec![0, 2] } else { vec![0] },
                revival: None,
                axis: SweepAxis::Eta,
                grid: eta_grid(),
            }
        }
        "fig4a" | "fig4a-ideal" => {
            meta.insert(
                "description".into(),
                format!(
                    "noisy channel on A (g_a = {NOISE_GA}, N = {NOISE_VAR}), transmissivity sweep"
                ),
            );
            ScenarioSpec {
                id: name.into(),
                source: if name.ends_with("ideal") {
                    ideal
                } else {
                    StateSource::Measured
                },
                channels: noisy_channels(),
                swept_modes: vec![0],
                revival: None,
                axis: SweepAxis::Eta,
                grid: eta_grid(),
            }
        }
        "fig4b" | "fig4b-ideal" => {
            meta.insert(
                "description".into(),
                format!(
                    "noisy channel on A with tuned revival (T = {REVIVAL_T}), transmissivity sweep"
                ),
            );
            meta.insert(
                "revival".into(),
                format!("mode A, T = {REVIVAL_T}, g_b tuned per grid point"),
            );
            ScenarioSpec {
                id: name.into(),
                source: if name.ends_with("ideal") {
                    ideal
                } else {
                    StateSource::Measured
                },
                channels: noisy_channels(),
                swept_modes: vec![0],
                revival: Some(tuned_revival()),
                axis: SweepAxis::Eta,
                grid: eta_grid(),
            }
        }
        "fig5a" | "fig5a-ideal" => {
            meta.insert(
                "description".into(),
                format!("noisy channel on A at eta = {NOISE_SWEEP_ETA}, excess-noise sweep"),
            );
            ScenarioSpec {
                id: name.into(),
                source: if name.ends_with("ideal") {
                    ideal
                } else {
                    StateSource::Measured
                },
                channels: noise_sweep_channels(),
                swept_modes: vec![0],
                revival: None,
                axis: SweepAxis::NoiseVar,
                grid: noise_grid(),
            }
        }
        "fig5b" | "fig5b-ideal" => {
            meta.insert(
                "description".into(),
                format!(
                    "noisy channel on A at eta = {NOISE_SWEEP_ETA} with tuned revival, \
                     excess-noise sweep"
                ),
            );
            meta.insert(
                "revival".into(),
                format!("mode A, T = {REVIVAL_T}, g_b tuned"),
            );
            ScenarioSpec {
                id: name.into(),
                source: if name.ends_with("ideal") {
                    ideal
                } else {
                    StateSource::Measured
                },
                channels: noise_sweep_channels(),
                swept_modes: vec![0],
                revival: Some(tuned_revival()),
                axis: SweepAxis::NoiseVar,
                grid: noise_grid(),
            }
        }
        _ => {
            return Err(Error::UnknownPreset {
                name: name.into(),
                valid: PRESET_NAMES.join(", "),
            })
        }
    };
    Ok((spec, meta))
}

/// Run a named preset to a full dataset.
pub fn run_preset(name: &str) -> Result<Dataset> {
    let (scenario, metadata) = preset_scenario(name)?;
    let records = crate::sweep::sweep(&scenario)?;
    Ok(Dataset {
        preset: Some(name.to_string()),
        scenario,
        metadata,
        records,
    })
}
