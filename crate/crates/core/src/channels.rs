//! Lossy and noisy single-mode Gaussian channels, and the correlated-noise
//! revival operation.
//!
//! A channel of transmissivity η acting on mode k maps the covariance blocks
//! as σ_k → η σ_k + (1−η)(g_a·N + 1)·I, scales every correlation block that
//! touches k by √η and leaves the rest alone. Pure loss is the g_a·N = 0
//! case. The excess noise is phase-insensitive: both quadratures receive the
//! same variance g_a·N.
//!
//! Revival interferes the noisy mode with an ancilla that carries a scaled
//! copy of the same channel noise (variance g_b·N on top of vacuum) on a
//! splitter of transmissivity T. The transmitted mode keeps the noise term
//! (√((1−η)·g_a·T) − √((1−T)·g_b))²·N, which cancels exactly when
//! g_a/g_b = (1−T)/((1−η)·T); the residual excess is dumped on the reflected
//! beam, which is traced out.

use serde::{Deserialize, Serialize};

use crate::cov::CovMatrix;
use crate::error::{Error, Result};

/// One single-mode channel: transmissivity plus excess-noise parameters.
///
/// `g_a` and `noise_var` enter the covariance only through their product,
/// but stay separate fields because the revival tuning condition constrains
/// g_a/g_b independently of the noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    /// Transmissivity η ∈ [0, 1].
    pub eta: f64,
    /// Noise magnitude g_a ≥ 0.
    #[serde(default)]
    pub g_a: f64,
    /// Excess-noise variance N in shot-noise units, ≥ 0.
    #[serde(default)]
    pub noise_var: f64,
}

impl ChannelSpec {
    /// The do-nothing channel (η = 1, no noise).
    pub fn identity() -> Self {
        Self {
            eta: 1.0,
            g_a: 0.0,
            noise_var: 0.0,
        }
    }

    pub fn lossy(eta: f64) -> Result<Self> {
        Self::noisy(eta, 0.0, 0.0)
    }

    pub fn noisy(eta: f64, g_a: f64, noise_var: f64) -> Result<Self> {
        let spec = Self {
            eta,
            g_a,
            noise_var,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidParam(format!(
                "channel transmissivity must lie in [0, 1], got {}",
                self.eta
            )));
        }
        if self.g_a < 0.0 || !self.g_a.is_finite() {
            return Err(Error::InvalidParam(format!(
                "noise magnitude g_a must be >= 0, got {}",
                self.g_a
            )));
        }
        if self.noise_var < 0.0 || !self.noise_var.is_finite() {
            return Err(Error::InvalidParam(format!(
                "excess-noise variance must be >= 0, got {}",
                self.noise_var
            )));
        }
        Ok(())
    }

    /// True when no excess noise enters (g_a·N = 0).
    pub fn is_pure_loss(&self) -> bool {
        self.g_a * self.noise_var == 0.0
    }

    /// True when the channel leaves any state unchanged.
    pub fn is_identity(&self) -> bool {
        self.eta == 1.0
    }
}

/// Revival splitter settings: transmissivity T and the correlated-noise gain
/// g_b on the ancilla.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevivalSpec {
    /// Splitter transmissivity T ∈ (0, 1]. T = 1 is the transparent limit.
    pub transmissivity: f64,
    /// Ancilla correlated-noise gain g_b ≥ 0.
    pub g_b: f64,
}

impl RevivalSpec {
    pub fn new(transmissivity: f64, g_b: f64) -> Result<Self> {
        if !(transmissivity > 0.0 && transmissivity <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "revival transmissivity must lie in (0, 1], got {transmissivity}"
            )));
        }
        if g_b < 0.0 || !g_b.is_finite() {
            return Err(Error::InvalidParam(format!(
                "correlated-noise gain g_b must be >= 0, got {g_b}"
            )));
        }
        Ok(Self {
            transmissivity,
            g_b,
        })
    }

    /// Spec with g_b chosen by [`tuned_gb`] for the given channel.
    pub fn tuned(eta: f64, transmissivity: f64, g_a: f64) -> Result<Self> {
        let g_b = tuned_gb(eta, transmissivity, g_a)?;
        Self::new(transmissivity, g_b)
    }

    /// Whether the cancellation condition g_a/g_b = (1−T)/((1−η)·T) holds,
    /// compared cross-multiplied to within 1e-12.
    pub fn is_tuned(&self, eta: f64, g_a: f64) -> bool {
        let lhs = g_a * (1.0 - eta) * self.transmissivity;
        let rhs = self.g_b * (1.0 - self.transmissivity);
        (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0)
    }
}

/// Block update shared by every single-mode channel: scale the mode-k
/// diagonal block, add `diag_add` on its diagonal, scale k-touching
/// correlations by `corr_scale`.
fn apply_mode_map(
    sigma: &CovMatrix,
    k: usize,
    diag_scale: f64,
    diag_add: f64,
    corr_scale: f64,
) -> Result<CovMatrix> {
    let n = sigma.n_modes();
    if k >= n {
        return Err(Error::ModeIndex {
            index: k,
            n_modes: n,
        });
    }
    let mut data = sigma.matrix().clone();
    let dim = sigma.dim();
    for i in 0..dim {
        for j in 0..dim {
            let ik = i / 2 == k;
            let jk = j / 2 == k;
            if ik && jk {
                data[(i, j)] =
                    diag_scale * sigma.element(i, j) + if i == j { diag_add } else { 0.0 };
            } else if ik || jk {
                data[(i, j)] = corr_scale * sigma.element(i, j);
            }
        }
    }
    Ok(CovMatrix::from_symmetric_parts(n, data))
}

/// Pure-loss channel on mode `k`: mix with vacuum at transmissivity `eta`.
pub fn lossy_channel(sigma: &CovMatrix, k: usize, eta: f64) -> Result<CovMatrix> {
    noisy_channel(sigma, k, &ChannelSpec::lossy(eta)?)
}

/// Noisy channel on mode `k`:
/// σ_k → η σ_k + (1−η)(g_a·N + 1)·I, k-correlations scaled by √η.
pub fn noisy_channel(sigma: &CovMatrix, k: usize, spec: &ChannelSpec) -> Result<CovMatrix> {
    spec.validate()?;
    let eta = spec.eta;
    apply_mode_map(
        sigma,
        k,
        eta,
        (1.0 - eta) * (spec.g_a * spec.noise_var + 1.0),
        eta.sqrt(),
    )
}

/// Apply one channel per mode, in a single closed-form pass: diagonal block
/// m gets η_m σ + (1−η_m)(g_a N + 1) I, the (m, n) correlation block gets
/// √η_m·√η_n σ. Channels act on disjoint modes, so this equals sequential
/// application, and the closed form makes the order independence exact.
pub fn distribute(sigma: &CovMatrix, specs: &[ChannelSpec]) -> Result<CovMatrix> {
    if specs.len() != sigma.n_modes() {
        return Err(Error::Shape(format!(
            "need one channel spec per mode: {} modes, {} specs",
            sigma.n_modes(),
            specs.len()
        )));
    }
    for spec in specs {
        spec.validate()?;
    }
    let dim = sigma.dim();
    let roots: Vec<f64> = specs.iter().map(|s| s.eta.sqrt()).collect();
    let mut data = sigma.matrix().clone();
    for i in 0..dim {
        for j in 0..dim {
            let (mi, mj) = (i / 2, j / 2);
            if mi == mj {
                let ch = &specs[mi];
                data[(i, j)] = ch.eta * sigma.element(i, j)
                    + if i == j {
                        (1.0 - ch.eta) * (ch.g_a * ch.noise_var + 1.0)
                    } else {
                        0.0
                    };
            } else {
                data[(i, j)] = roots[mi] * roots[mj] * sigma.element(i, j);
            }
        }
    }
    Ok(CovMatrix::from_symmetric_parts(sigma.n_modes(), data))
}

/// The ancilla gain that cancels the channel noise on the transmitted mode:
/// g_b = g_a·(1−η)·T/(1−T).
///
/// T = 1 leaves no reflection path to inject the correlated noise and is an
/// error; η = 1 needs no correction and returns 0.
pub fn tuned_gb(eta: f64, transmissivity: f64, g_a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParam(format!(
            "channel transmissivity must lie in [0, 1], got {eta}"
        )));
    }
    if g_a < 0.0 || !g_a.is_finite() {
        return Err(Error::InvalidParam(format!(
            "noise magnitude g_a must be >= 0, got {g_a}"
        )));
    }
    if !(transmissivity > 0.0 && transmissivity < 1.0) {
        return Err(Error::InvalidParam(format!(
            "tuning needs a revival transmissivity in (0, 1): T = {transmissivity} \
             has no reflection path for the correlated noise"
        )));
    }
    if eta == 1.0 {
        return Ok(0.0);
    }
    Ok(g_a * (1.0 - eta) * transmissivity / (1.0 - transmissivity))
}

/// Excess-noise variance surviving on the revived mode:
/// (√((1−η)·g_a·T) − √((1−T)·g_b))²·N. Zero exactly when tuned.
pub fn residual_noise(ch: &ChannelSpec, rv: &RevivalSpec) -> f64 {
    let t = rv.transmissivity;
    let d = ((1.0 - ch.eta) * ch.g_a * t).sqrt() - ((1.0 - t) * rv.g_b).sqrt();
    d * d * ch.noise_var
}

/// Noisy channel followed by the revival splitter on mode `k`.
///
/// Mode-k block: η·T·σ_k + [(1−η)·T + (1−T) + residual]·I with residual from
/// [`residual_noise`]; k-correlations scaled by √(η·T). With tuned g_b the
/// residual vanishes and the output equals a pure-loss channel at η·T, so it
/// no longer depends on the excess noise at all. T = 1 is the transparent
/// splitter and reduces to the plain noisy channel.
pub fn revive(
    sigma: &CovMatrix,
    k: usize,
    ch: &ChannelSpec,
    rv: &RevivalSpec,
) -> Result<CovMatrix> {
    ch.validate()?;
    RevivalSpec::new(rv.transmissivity, rv.g_b)?;
    if rv.transmissivity == 1.0 {
        // no reflected port: the ancilla never couples in
        return noisy_channel(sigma, k, ch);
    }
    let eta = ch.eta;
    let t = rv.transmissivity;
    let diag_add = (1.0 - eta) * t + (1.0 - t) + residual_noise(ch, rv);
    apply_mode_map(sigma, k, eta * t, diag_add, (eta * t).sqrt())
}

/// Variance of one quadrature of the abandoned reflected beam, given the
/// corresponding input-mode variance. Diagnostic only; the beam itself is
/// traced out by [`revive`].
pub fn reflected_variance(input_var: f64, ch: &ChannelSpec, rv: &RevivalSpec) -> f64 {
    let eta = ch.eta;
    let t = rv.transmissivity;
    let noise_coef = ((1.0 - eta) * (1.0 - t) * ch.g_a).sqrt() + (t * rv.g_b).sqrt();
    eta * (1.0 - t) * input_var
        + noise_coef * noise_coef * ch.noise_var
        + (1.0 - eta) * (1.0 - t)
        + t
}
