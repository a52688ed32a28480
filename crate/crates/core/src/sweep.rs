//! Parameter sweeps, separability-region classification and threshold
//! root-finding.
//!
//! A [`ScenarioSpec`] names a source state, one channel per mode, an optional
//! revival stage and a swept axis with its grid. Every grid point is an
//! independent pure evaluation, so sweeps run in parallel and merge in grid
//! order; identical specs produce bit-identical datasets.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::channels::{
    distribute, noisy_channel, residual_noise, revive, tuned_gb, ChannelSpec, RevivalSpec,
};
use crate::cov::{Classification, CovMatrix, PptTriple};
use crate::error::{Error, Result};
use crate::states::{
    asymmetric_state, ghz_state, ghz_state_pure, ghz_state_uniform, measured_state,
    symmetric_state, NetworkSpec, SqueezedModeSpec,
};

/// Where the initial three-mode state comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSource {
    /// The measured reference covariance matrix.
    Measured,
    /// Pure GHZ state at common squeezing parameter `r`.
    GhzPure { r: f64 },
    /// GHZ state from three equal impure squeezers given in dB.
    GhzDb {
        squeeze_db: f64,
        antisqueeze_db: f64,
    },
    /// GHZ state with per-mode squeezer specs and an explicit network.
    GhzCustom {
        inputs: [SqueezedModeSpec; 3],
        #[serde(default)]
        network: NetworkSpec,
    },
    /// Balanced analytic state.
    Symmetric { s: f64, t: f64, c: f64 },
    /// Unbalanced analytic state.
    Asymmetric { s: f64, t: f64, c: f64, c_x: f64 },
}

impl StateSource {
    pub fn build(&self) -> Result<CovMatrix> {
        match *self {
            StateSource::Measured => Ok(measured_state()),
            StateSource::GhzPure { r } => ghz_state_pure(r),
            StateSource::GhzDb {
                squeeze_db,
                antisqueeze_db,
            } => ghz_state_uniform(squeeze_db, antisqueeze_db),
            StateSource::GhzCustom { inputs, network } => {
                for spec in &inputs {
                    spec.validate()?;
                }
                NetworkSpec::new(network.t1, network.t2)?;
                ghz_state(&inputs, &network)
            }
            StateSource::Symmetric { s, t, c } => symmetric_state(s, t, c),
            StateSource::Asymmetric { s, t, c, c_x } => asymmetric_state(s, t, c, c_x),
        }
    }

    /// Rebuild with the x-correlation of mode A set to `ratio`·c. Only the
    /// analytic states support this.
    fn build_with_cx_ratio(&self, ratio: f64) -> Result<CovMatrix> {
        match *self {
            StateSource::Symmetric { s, t, c } | StateSource::Asymmetric { s, t, c, .. } => {
                asymmetric_state(s, t, c, ratio * c)
            }
            _ => Err(Error::InvalidParam(
                "the cx_ratio axis needs a symmetric or asymmetric source state".into(),
            )),
        }
    }
}

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Channel transmissivity on the swept modes.
    Eta,
    /// Excess-noise variance on the swept modes.
    NoiseVar,
    /// Ratio c_x/c of the source state.
    CxRatio,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Eta => "eta",
            SweepAxis::NoiseVar => "noise_var",
            SweepAxis::CxRatio => "cx_ratio",
        }
    }
}

/// Uniform grid with at least two points, strictly monotone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        let grid = Self {
            start,
            stop,
            points,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidParam(format!(
                "grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start == self.stop {
            return Err(Error::InvalidParam(format!(
                "grid must be strictly monotone, got start = {}, stop = {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let step = (self.stop - self.start) / (n as f64 - 1.0);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

/// How the revival gain is chosen at each grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GbSetting {
    /// g_b from the cancellation condition at the point's channel η.
    Tuned,
    Fixed(f64),
}

impl Serialize for GbSetting {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GbSetting::Tuned => serializer.serialize_str("tuned"),
            GbSetting::Fixed(v) => serializer.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for GbSetting {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = GbSetting;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(f, "the string \"tuned\" or a non-negative number")
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<GbSetting, E> {
                if v == "tuned" {
                    Ok(GbSetting::Tuned)
                } else {
                    Err(E::custom(format!("unknown g_b setting '{v}'")))
                }
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<GbSetting, E> {
                Ok(GbSetting::Fixed(v))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<GbSetting, E> {
                Ok(GbSetting::Fixed(v as f64))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<GbSetting, E> {
                Ok(GbSetting::Fixed(v as f64))
            }
        }
        deserializer.deserialize_any(Visitor)
    }
}

/// Revival stage attached to one mode's channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevivalSetting {
    pub mode: usize,
    pub transmissivity: f64,
    pub g_b: GbSetting,
}

/// Full description of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub id: String,
    pub source: StateSource,
    /// One channel per mode; identity entries mean no channel.
    pub channels: Vec<ChannelSpec>,
    /// Modes whose axis parameter is replaced at each grid point
    /// (used by the `eta` and `noise_var` axes).
    #[serde(default)]
    pub swept_modes: Vec<usize>,
    #[serde(default)]
    pub revival: Option<RevivalSetting>,
    pub axis: SweepAxis,
    pub grid: Grid,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.channels.len() != 3 {
            return Err(Error::Shape(format!(
                "scenario needs one channel per mode (3), got {}",
                self.channels.len()
            )));
        }
        for ch in &self.channels {
            ch.validate()?;
        }
        self.grid.validate()?;
        for &m in &self.swept_modes {
            if m >= 3 {
                return Err(Error::ModeIndex {
                    index: m,
                    n_modes: 3,
                });
            }
        }
        match self.axis {
            SweepAxis::Eta | SweepAxis::NoiseVar => {
                if self.swept_modes.is_empty() {
                    return Err(Error::InvalidParam(format!(
                        "the {} axis needs at least one swept mode",
                        self.axis.name()
                    )));
                }
            }
            SweepAxis::CxRatio => {
                if !matches!(
                    self.source,
                    StateSource::Symmetric { .. } | StateSource::Asymmetric { .. }
                ) {
                    return Err(Error::InvalidParam(
                        "the cx_ratio axis needs a symmetric or asymmetric source state".into(),
                    ));
                }
            }
        }
        if let Some(rv) = &self.revival {
            if rv.mode >= 3 {
                return Err(Error::ModeIndex {
                    index: rv.mode,
                    n_modes: 3,
                });
            }
            if !(rv.transmissivity > 0.0 && rv.transmissivity <= 1.0) {
                return Err(Error::InvalidParam(format!(
                    "revival transmissivity must lie in (0, 1], got {}",
                    rv.transmissivity
                )));
            }
            if let GbSetting::Fixed(g_b) = rv.g_b {
                if g_b < 0.0 || !g_b.is_finite() {
                    return Err(Error::InvalidParam(format!(
                        "revival gain g_b must be >= 0, got {g_b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Source state at a given axis value (only the cx_ratio axis changes it).
    fn source_state_at(&self, value: f64) -> Result<CovMatrix> {
        match self.axis {
            SweepAxis::CxRatio => self.source.build_with_cx_ratio(value),
            _ => self.source.build(),
        }
    }

    /// Channel list at a given axis value.
    fn channels_at(&self, value: f64) -> Result<Vec<ChannelSpec>> {
        let mut channels = self.channels.clone();
        match self.axis {
            SweepAxis::Eta => {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::InvalidParam(format!(
                        "swept transmissivity must lie in [0, 1], got {value}"
                    )));
                }
                for &m in &self.swept_modes {
                    channels[m].eta = value;
                }
            }
            SweepAxis::NoiseVar => {
                if value < 0.0 {
                    return Err(Error::InvalidParam(format!(
                        "swept noise variance must be >= 0, got {value}"
                    )));
                }
                for &m in &self.swept_modes {
                    channels[m].noise_var = value;
                }
            }
            SweepAxis::CxRatio => {}
        }
        Ok(channels)
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub axis: SweepAxis,
    pub value: f64,
    pub classification: Classification,
    /// Excess-noise variance left on the monitored mode: the revived mode
    /// when a revival stage is configured, otherwise the first mode whose
    /// channel carries excess noise.
    pub residual_noise: f64,
    pub scenario_id: String,
    /// Short hash of the source covariance matrix at this point.
    pub fingerprint: String,
}

impl SweepRecord {
    pub fn ppt(&self) -> &PptTriple {
        &self.classification.ppt
    }
}

fn fingerprint(sigma: &CovMatrix) -> String {
    let mut hasher = Sha256::new();
    for i in 0..sigma.dim() {
        for j in 0..sigma.dim() {
            hasher.update(format!("{:.17e},", sigma.element(i, j)).as_bytes());
        }
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Evaluate one grid point of a scenario.
pub fn evaluate_point(spec: &ScenarioSpec, value: f64) -> Result<SweepRecord> {
    spec.validate()?;
    let wrap = |e: Error| Error::at_grid_point(spec.axis.name(), value, e);
    let source = spec.source_state_at(value).map_err(wrap)?;
    let channels = spec.channels_at(value).map_err(wrap)?;

    let mut state = source.clone();
    let mut residual = 0.0;
    match &spec.revival {
        Some(rv) => {
            let ch = channels[rv.mode];
            let g_b = match rv.g_b {
                GbSetting::Fixed(v) => v,
                GbSetting::Tuned => tuned_gb(ch.eta, rv.transmissivity, ch.g_a).map_err(wrap)?,
            };
            let revival = RevivalSpec::new(rv.transmissivity, g_b).map_err(wrap)?;
            for (m, ch_m) in channels.iter().enumerate() {
                state = if m == rv.mode {
                    revive(&state, m, ch_m, &revival).map_err(wrap)?
                } else {
                    noisy_channel(&state, m, ch_m).map_err(wrap)?
                };
            }
            residual = residual_noise(&ch, &revival);
        }
        None => {
            state = distribute(&state, &channels).map_err(wrap)?;
            if let Some(ch) = channels.iter().find(|c| c.g_a * c.noise_var > 0.0) {
                residual = (1.0 - ch.eta) * ch.g_a * ch.noise_var;
            }
        }
    }

    let classification = state.classify().map_err(wrap)?;
    Ok(SweepRecord {
        axis: spec.axis,
        value,
        classification,
        residual_noise: residual,
        scenario_id: spec.id.clone(),
        fingerprint: fingerprint(&source),
    })
}

/// Run the full grid. Points are evaluated in parallel and returned in grid
/// order; the result is deterministic.
pub fn sweep(spec: &ScenarioSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    spec.grid
        .values()
        .par_iter()
        .map(|&v| evaluate_point(spec, v))
        .collect()
}

/// Interval-halving tolerance of [`find_eta_threshold`].
pub const ETA_THRESHOLD_TOL: f64 = 1e-4;
/// Interval-halving tolerance of [`find_noise_threshold`].
pub const NOISE_THRESHOLD_TOL: f64 = 1e-3;

fn bisect_ppt_crossing(
    spec: &ScenarioSpec,
    cut: usize,
    bracket: (f64, f64),
    xtol: f64,
) -> Result<f64> {
    if cut >= 3 {
        return Err(Error::ModeIndex {
            index: cut,
            n_modes: 3,
        });
    }
    let f = |x: f64| -> Result<f64> {
        let record = evaluate_point(spec, x)?;
        Ok(record.ppt().get(cut).unwrap() - 1.0)
    };
    let (mut lo, mut hi) = bracket;
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Transmissivity at which the PPT value of the given cut crosses 1,
/// located by bisection to |Δη| ≤ 1e-4. The scenario's axis must be `eta`;
/// the bracket endpoints must straddle the crossing.
pub fn find_eta_threshold(spec: &ScenarioSpec, cut: usize, bracket: (f64, f64)) -> Result<f64> {
    if spec.axis != SweepAxis::Eta {
        return Err(Error::InvalidParam(
            "eta threshold search needs a scenario with the eta axis".into(),
        ));
    }
    bisect_ppt_crossing(spec, cut, bracket, ETA_THRESHOLD_TOL)
}

/// Excess-noise variance at which the PPT value of the given cut crosses 1,
/// to |ΔN| ≤ 1e-3. The scenario's axis must be `noise_var`.
pub fn find_noise_threshold(spec: &ScenarioSpec, cut: usize, bracket: (f64, f64)) -> Result<f64> {
    if spec.axis != SweepAxis::NoiseVar {
        return Err(Error::InvalidParam(
            "noise threshold search needs a scenario with the noise_var axis".into(),
        ));
    }
    bisect_ppt_crossing(spec, cut, bracket, NOISE_THRESHOLD_TOL)
}

/// A finished sweep with its resolved scenario and metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub preset: Option<String>,
    pub scenario: ScenarioSpec,
    pub metadata: BTreeMap<String, String>,
    pub records: Vec<SweepRecord>,
}

/// Fixed-width significand formatting used in CSV output: 12 significant
/// digits, locale-independent.
pub fn format_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

impl Dataset {
    pub fn from_scenario(spec: ScenarioSpec) -> Result<Self> {
        let records = sweep(&spec)?;
        Ok(Dataset {
            preset: None,
            scenario: spec,
            metadata: BTreeMap::new(),
            records,
        })
    }

    /// CSV with the resolved configuration embedded as `#` comment lines,
    /// a mandatory header row and 12-significant-digit numbers.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        if let Some(preset) = &self.preset {
            out.push_str(&format!("# preset = {preset}\n"));
        }
        out.push_str(&format!(
            "# scenario = {}\n",
            serde_json::to_string(&self.scenario).expect("scenario serializes")
        ));
        for (key, value) in &self.metadata {
            out.push_str(&format!("# {key} = {value}\n"));
        }
        out.push_str(&format!(
            "{},ppt_a,ppt_b,ppt_c,class,residual_noise\n",
            self.scenario.axis.name()
        ));
        for rec in &self.records {
            let ppt = rec.ppt();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                format_sig12(rec.value),
                format_sig12(ppt.a),
                format_sig12(ppt.b),
                format_sig12(ppt.c),
                rec.classification.tag(),
                format_sig12(rec.residual_noise),
            ));
        }
        out
    }

    /// Full structured bundle (JSON) with scenario, metadata and records.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serializes")
    }

    /// Contiguous runs of one classification along the axis.
    pub fn class_regions(&self) -> Vec<(String, f64, f64)> {
        let mut regions: Vec<(String, f64, f64)> = Vec::new();
        for rec in &self.records {
            let tag = rec.classification.tag();
            match regions.last_mut() {
                Some((last, _, hi)) if *last == tag => *hi = rec.value,
                _ => regions.push((tag, rec.value, rec.value)),
            }
        }
        regions
    }

    /// Bisection thresholds for every cut that changes side across the grid.
    /// Returns (cut index, axis value of the crossing).
    pub fn thresholds(&self) -> Result<Vec<(usize, f64)>> {
        if self.scenario.axis == SweepAxis::CxRatio {
            return Ok(Vec::new());
        }
        let xtol = match self.scenario.axis {
            SweepAxis::Eta => ETA_THRESHOLD_TOL,
            _ => NOISE_THRESHOLD_TOL,
        };
        let mut out = Vec::new();
        for cut in 0..3 {
            for pair in self.records.windows(2) {
                let lo = pair[0].ppt().get(cut).unwrap() - 1.0;
                let hi = pair[1].ppt().get(cut).unwrap() - 1.0;
                if lo == 0.0 || lo.signum() != hi.signum() {
                    let root = bisect_ppt_crossing(
                        &self.scenario,
                        cut,
                        (pair[0].value, pair[1].value),
                        xtol,
                    )?;
                    out.push((cut, root));
                    break;
                }
            }
        }
        Ok(out)
    }
}
