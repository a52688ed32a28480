//! Homodyne tomography of the tripartite state: the 12-measurement protocol,
//! covariance reconstruction and a finite-statistics perturbation model.
//!
//! The protocol measures the six single-quadrature variances plus the three
//! amplitude differences Δ²(x_i − x_j) and the three phase sums
//! Δ²(p_i + p_j). Correlations follow from the variance identities
//! Cov(x_i, x_j) = −½[Δ²(x_i−x_j) − Δ²x_i − Δ²x_j] and
//! Cov(p_i, p_j) = +½[Δ²(p_i+p_j) − Δ²p_i − Δ²p_j]; cross terms between
//! different quadratures are taken as zero.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cov::CovMatrix;
use crate::error::{Error, Result};
use crate::states::{correlation_variance, QuadTerm};

/// Positivity floor for perturbed variances. Only reachable at very small
/// sample counts, where the normal approximation can dip below zero.
const VARIANCE_FLOOR: f64 = 1e-12;

/// The twelve measured variances, in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    #[serde(rename = "var_xA")]
    pub var_x_a: f64,
    #[serde(rename = "var_pA")]
    pub var_p_a: f64,
    #[serde(rename = "var_xB")]
    pub var_x_b: f64,
    #[serde(rename = "var_pB")]
    pub var_p_b: f64,
    #[serde(rename = "var_xC")]
    pub var_x_c: f64,
    #[serde(rename = "var_pC")]
    pub var_p_c: f64,
    #[serde(rename = "var_xA_minus_xB")]
    pub var_x_a_minus_x_b: f64,
    #[serde(rename = "var_xA_minus_xC")]
    pub var_x_a_minus_x_c: f64,
    #[serde(rename = "var_xB_minus_xC")]
    pub var_x_b_minus_x_c: f64,
    #[serde(rename = "var_pA_plus_pB")]
    pub var_p_a_plus_p_b: f64,
    #[serde(rename = "var_pA_plus_pC")]
    pub var_p_a_plus_p_c: f64,
    #[serde(rename = "var_pB_plus_pC")]
    pub var_p_b_plus_p_c: f64,
}

impl MeasurementRecord {
    pub fn values(&self) -> [f64; 12] {
        [
            self.var_x_a,
            self.var_p_a,
            self.var_x_b,
            self.var_p_b,
            self.var_x_c,
            self.var_p_c,
            self.var_x_a_minus_x_b,
            self.var_x_a_minus_x_c,
            self.var_x_b_minus_x_c,
            self.var_p_a_plus_p_b,
            self.var_p_a_plus_p_c,
            self.var_p_b_plus_p_c,
        ]
    }

    pub fn from_values(v: [f64; 12]) -> Self {
        Self {
            var_x_a: v[0],
            var_p_a: v[1],
            var_x_b: v[2],
            var_p_b: v[3],
            var_x_c: v[4],
            var_p_c: v[5],
            var_x_a_minus_x_b: v[6],
            var_x_a_minus_x_c: v[7],
            var_x_b_minus_x_c: v[8],
            var_p_a_plus_p_b: v[9],
            var_p_a_plus_p_c: v[10],
            var_p_b_plus_p_c: v[11],
        }
    }

    /// Every variance must be positive and finite.
    pub fn validate(&self) -> Result<()> {
        for (idx, v) in self.values().iter().enumerate() {
            if !v.is_finite() || *v <= 0.0 {
                return Err(Error::Data(format!(
                    "measurement record entry {idx} must be a positive variance, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Keyed structured-text form (JSON) with the measurement names verbatim.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measurement record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: MeasurementRecord = serde_json::from_str(text)
            .map_err(|e| Error::Data(format!("incomplete or malformed measurement record: {e}")))?;
        record.validate()?;
        Ok(record)
    }
}

/// Evaluate the twelve protocol variances on a known three-mode state.
pub fn simulate_measurements(sigma: &CovMatrix) -> Result<MeasurementRecord> {
    if sigma.n_modes() != 3 {
        return Err(Error::Shape(format!(
            "the measurement protocol addresses 3 modes, got {}",
            sigma.n_modes()
        )));
    }
    let single = |term: QuadTerm| correlation_variance(sigma, &[term]);
    let pair = |a: QuadTerm, b: QuadTerm| correlation_variance(sigma, &[a, b]);
    Ok(MeasurementRecord {
        var_x_a: single(QuadTerm::x(0, 1.0))?,
        var_p_a: single(QuadTerm::p(0, 1.0))?,
        var_x_b: single(QuadTerm::x(1, 1.0))?,
        var_p_b: single(QuadTerm::p(1, 1.0))?,
        var_x_c: single(QuadTerm::x(2, 1.0))?,
        var_p_c: single(QuadTerm::p(2, 1.0))?,
        var_x_a_minus_x_b: pair(QuadTerm::x(0, 1.0), QuadTerm::x(1, -1.0))?,
        var_x_a_minus_x_c: pair(QuadTerm::x(0, 1.0), QuadTerm::x(2, -1.0))?,
        var_x_b_minus_x_c: pair(QuadTerm::x(1, 1.0), QuadTerm::x(2, -1.0))?,
        var_p_a_plus_p_b: pair(QuadTerm::p(0, 1.0), QuadTerm::p(1, 1.0))?,
        var_p_a_plus_p_c: pair(QuadTerm::p(0, 1.0), QuadTerm::p(2, 1.0))?,
        var_p_b_plus_p_c: pair(QuadTerm::p(1, 1.0), QuadTerm::p(2, 1.0))?,
    })
}

/// Rebuild the covariance matrix from a complete record.
///
/// Diagonal blocks come from the single-quadrature variances; x-correlations
/// from the difference identities, p-correlations from the sum identities;
/// every cross x-p element is zero. The result is flagged (not rejected)
/// when finite statistics push it slightly below the physicality bound.
pub fn reconstruct(record: &MeasurementRecord) -> Result<CovMatrix> {
    record.validate()?;
    let mut m = nalgebra::DMatrix::zeros(6, 6);
    let singles = [
        record.var_x_a,
        record.var_p_a,
        record.var_x_b,
        record.var_p_b,
        record.var_x_c,
        record.var_p_c,
    ];
    for (i, v) in singles.iter().enumerate() {
        m[(i, i)] = *v;
    }
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let x_diffs = [
        record.var_x_a_minus_x_b,
        record.var_x_a_minus_x_c,
        record.var_x_b_minus_x_c,
    ];
    let p_sums = [
        record.var_p_a_plus_p_b,
        record.var_p_a_plus_p_c,
        record.var_p_b_plus_p_c,
    ];
    for (idx, (a, b)) in pairs.iter().enumerate() {
        let cov_x = -0.5 * (x_diffs[idx] - singles[2 * a] - singles[2 * b]);
        let cov_p = 0.5 * (p_sums[idx] - singles[2 * a + 1] - singles[2 * b + 1]);
        m[(2 * a, 2 * b)] = cov_x;
        m[(2 * b, 2 * a)] = cov_x;
        m[(2 * a + 1, 2 * b + 1)] = cov_p;
        m[(2 * b + 1, 2 * a + 1)] = cov_p;
    }
    Ok(CovMatrix::from_symmetric_parts(3, m))
}

/// Replace each variance by a draw from the sampling distribution of a
/// variance estimator over `samples` points: the normal approximation to the
/// scaled chi-square, v̂ = v·(1 + √(2/(samples−1))·z). Deterministic for a
/// given seed; entries are floored to stay positive.
pub fn perturb_record(
    record: &MeasurementRecord,
    samples: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if samples < 2 {
        return Err(Error::InvalidParam(format!(
            "variance estimation needs at least 2 samples, got {samples}"
        )));
    }
    record.validate()?;
    let rel_sd = (2.0 / (samples as f64 - 1.0)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = record.values();
    for v in values.iter_mut() {
        let z: f64 = StandardNormal.sample(&mut rng);
        *v = (*v * (1.0 + rel_sd * z)).max(VARIANCE_FLOOR);
    }
    Ok(MeasurementRecord::from_values(values))
}
