//! State preparation: squeezed inputs, the beam-splitter network, analytic
//! balanced/unbalanced tripartite states and the measured reference state.
//!
//! The tripartite source interferes one p-squeezed and two x-squeezed beams
//! on two beam-splitters (transmissivities 1/3 and 1/2). With quadrature
//! convention vacuum = 1, a squeezed input is diag(v_sq, v_anti) with
//! v = 10^(dB/10); a pure squeezer at parameter r has v_sq = e^(−2r).

use nalgebra::{DMatrix, Matrix3};
use serde::{Deserialize, Serialize};

use crate::cov::CovMatrix;
use crate::error::{Error, Result};

/// Which quadrature of the input mode is squeezed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    XSqueezed,
    PSqueezed,
}

/// One squeezed input mode, described by its measured noise levels.
///
/// `squeeze_db` ≤ 0 is the squeezed-quadrature variance in dB relative to
/// shot noise, `antisqueeze_db` ≥ 0 the anti-squeezed one. The pair is pure
/// when they balance (`squeeze_db == -antisqueeze_db`); real sources are
/// impure, e.g. −3.5 dB / +8.5 dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedModeSpec {
    pub squeeze_db: f64,
    pub antisqueeze_db: f64,
    pub orientation: Orientation,
}

impl SqueezedModeSpec {
    pub fn new(squeeze_db: f64, antisqueeze_db: f64, orientation: Orientation) -> Result<Self> {
        if squeeze_db > 0.0 || !squeeze_db.is_finite() {
            return Err(Error::InvalidParam(format!(
                "squeeze_db must be <= 0 dB, got {squeeze_db}"
            )));
        }
        if antisqueeze_db < 0.0 || !antisqueeze_db.is_finite() {
            return Err(Error::InvalidParam(format!(
                "antisqueeze_db must be >= 0 dB, got {antisqueeze_db}"
            )));
        }
        Ok(Self {
            squeeze_db,
            antisqueeze_db,
            orientation,
        })
    }

    /// Pure squeezer at parameter `r` ≥ 0: variances e^(∓2r).
    pub fn pure_from_r(r: f64, orientation: Orientation) -> Result<Self> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::InvalidParam(format!(
                "squeezing parameter must be >= 0, got {r}"
            )));
        }
        let db = -20.0 * r * std::f64::consts::LOG10_E;
        Self::new(db, -db, orientation)
    }

    pub fn vacuum(orientation: Orientation) -> Self {
        Self {
            squeeze_db: 0.0,
            antisqueeze_db: 0.0,
            orientation,
        }
    }

    /// Variance of the squeezed quadrature, 10^(dB/10) ∈ (0, 1].
    pub fn squeezed_variance(&self) -> f64 {
        10f64.powf(self.squeeze_db / 10.0)
    }

    /// Variance of the anti-squeezed quadrature, ≥ 1.
    pub fn anti_variance(&self) -> f64 {
        10f64.powf(self.antisqueeze_db / 10.0)
    }

    pub fn is_pure(&self, tol_db: f64) -> bool {
        (self.squeeze_db + self.antisqueeze_db).abs() <= tol_db
    }

    /// Re-check the dB sign constraints (useful after deserialization, which
    /// fills the public fields directly).
    pub fn validate(&self) -> Result<()> {
        Self::new(self.squeeze_db, self.antisqueeze_db, self.orientation).map(|_| ())
    }
}

/// Single-mode covariance of a squeezed input.
pub fn squeezed_cov(spec: &SqueezedModeSpec) -> CovMatrix {
    let (vx, vp) = match spec.orientation {
        Orientation::XSqueezed => (spec.squeezed_variance(), spec.anti_variance()),
        Orientation::PSqueezed => (spec.anti_variance(), spec.squeezed_variance()),
    };
    CovMatrix::from_symmetric_parts(1, DMatrix::from_diagonal(&nalgebra::dvector![vx, vp]))
}

/// The two-splitter network that turns three squeezed beams into the
/// tripartite source. Defaults are transmissivities 1/3 and 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub t1: f64,
    pub t2: f64,
}

impl Default for NetworkSpec {
    fn default() -> Self {
        Self {
            t1: 1.0 / 3.0,
            t2: 0.5,
        }
    }
}

impl NetworkSpec {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        for (name, t) in [("t1", t1), ("t2", t2)] {
            if !(0.0..=1.0).contains(&t) || t == 0.0 || t == 1.0 {
                return Err(Error::InvalidParam(format!(
                    "network transmissivity {name} must lie in (0, 1), got {t}"
                )));
            }
        }
        Ok(Self { t1, t2 })
    }

    /// The 3×3 mode-space transformation: splitter (1,2) at `t1`, a 180°
    /// rotation of mode 2, then splitter (2,3) at `t2`. With the default
    /// transmissivities this is the standard tripartite network
    ///
    /// ```text
    ///  [  √(2/3)  √(1/3)   0     ]
    ///  [ −√(1/6)  √(1/3)   √(1/2)]
    ///  [ −√(1/6)  √(1/3)  −√(1/2)]
    /// ```
    pub fn matrix(&self) -> Matrix3<f64> {
        let b12 = splitter_matrix3(0, 1, self.t1);
        let b23 = splitter_matrix3(1, 2, self.t2);
        let flip2 = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0));
        b23 * flip2 * b12
    }
}

/// 3×3 mode-space splitter on modes (k, l):
/// entries √(1−T) at (k,k), √T at (k,l) and (l,k), −√(1−T) at (l,l).
fn splitter_matrix3(k: usize, l: usize, t: f64) -> Matrix3<f64> {
    let mut m = Matrix3::identity();
    let r = (1.0 - t).sqrt();
    let s = t.sqrt();
    m[(k, k)] = r;
    m[(k, l)] = s;
    m[(l, k)] = s;
    m[(l, l)] = -r;
    m
}

/// Expand a mode-space matrix to the quadrature space, acting identically on
/// x and p.
fn expand_to_quadratures(u: &Matrix3<f64>) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            s[(2 * i, 2 * j)] = u[(i, j)];
            s[(2 * i + 1, 2 * j + 1)] = u[(i, j)];
        }
    }
    s
}

/// Mix modes (k, l) of a state on a beam-splitter of transmissivity `t_bs`.
///
/// The symplectic map acts as [[√(1−T), √T], [√T, −√(1−T)]] on the (k, l)
/// pair, identically for x and p. Passive, so the symplectic spectrum is
/// unchanged.
pub fn apply_beamsplitter(sigma: &CovMatrix, k: usize, l: usize, t_bs: f64) -> Result<CovMatrix> {
    let n = sigma.n_modes();
    for idx in [k, l] {
        if idx >= n {
            return Err(Error::ModeIndex {
                index: idx,
                n_modes: n,
            });
        }
    }
    if k == l {
        return Err(Error::InvalidParam(
            "beam-splitter needs two distinct modes".into(),
        ));
    }
    if !(0.0..=1.0).contains(&t_bs) {
        return Err(Error::InvalidParam(format!(
            "beam-splitter transmissivity must lie in [0, 1], got {t_bs}"
        )));
    }
    let dim = sigma.dim();
    let mut s = DMatrix::identity(dim, dim);
    let r = (1.0 - t_bs).sqrt();
    let t = t_bs.sqrt();
    for q in 0..2 {
        let (ik, il) = (2 * k + q, 2 * l + q);
        s[(ik, ik)] = r;
        s[(ik, il)] = t;
        s[(il, ik)] = t;
        s[(il, il)] = -r;
    }
    let data = &s * sigma.matrix() * s.transpose();
    // S sigma S^T of a symmetric matrix can pick up rounding-level asymmetry
    let data = (&data + data.transpose()) * 0.5;
    Ok(CovMatrix::from_symmetric_parts(n, data))
}

/// Whether the inputs follow the standard source configuration
/// (x-squeezed, p-squeezed, x-squeezed).
pub fn is_standard_ghz_inputs(inputs: &[SqueezedModeSpec; 3]) -> bool {
    inputs[0].orientation == Orientation::XSqueezed
        && inputs[1].orientation == Orientation::PSqueezed
        && inputs[2].orientation == Orientation::XSqueezed
}

/// Covariance of the three output modes (A, B, C) of the splitter network
/// fed with three squeezed inputs.
///
/// The standard configuration squeezes x on inputs 1 and 3 and p on input 2;
/// other configurations are accepted (check [`is_standard_ghz_inputs`] when
/// it matters).
pub fn ghz_state(inputs: &[SqueezedModeSpec; 3], net: &NetworkSpec) -> Result<CovMatrix> {
    let mut diag = DMatrix::zeros(6, 6);
    for (m, spec) in inputs.iter().enumerate() {
        let cov = squeezed_cov(spec);
        diag[(2 * m, 2 * m)] = cov.element(0, 0);
        diag[(2 * m + 1, 2 * m + 1)] = cov.element(1, 1);
    }
    let s = expand_to_quadratures(&net.matrix());
    let data = &s * diag * s.transpose();
    let data = (&data + data.transpose()) * 0.5;
    Ok(CovMatrix::from_symmetric_parts(3, data))
}

/// GHZ state from three equally squeezed inputs in the standard
/// configuration and the default network.
pub fn ghz_state_uniform(squeeze_db: f64, antisqueeze_db: f64) -> Result<CovMatrix> {
    let inputs = [
        SqueezedModeSpec::new(squeeze_db, antisqueeze_db, Orientation::XSqueezed)?,
        SqueezedModeSpec::new(squeeze_db, antisqueeze_db, Orientation::PSqueezed)?,
        SqueezedModeSpec::new(squeeze_db, antisqueeze_db, Orientation::XSqueezed)?,
    ];
    ghz_state(&inputs, &NetworkSpec::default())
}

/// Pure GHZ state at common squeezing parameter `r`.
pub fn ghz_state_pure(r: f64) -> Result<CovMatrix> {
    let inputs = [
        SqueezedModeSpec::pure_from_r(r, Orientation::XSqueezed)?,
        SqueezedModeSpec::pure_from_r(r, Orientation::PSqueezed)?,
        SqueezedModeSpec::pure_from_r(r, Orientation::XSqueezed)?,
    ];
    ghz_state(&inputs, &NetworkSpec::default())
}

/// Balanced tripartite state: mode variances (s, t), x-correlations +c,
/// p-correlations −c, no cross x-p terms.
pub fn symmetric_state(s: f64, t: f64, c: f64) -> Result<CovMatrix> {
    asymmetric_state(s, t, c, c)
}

/// Unbalanced tripartite state: like [`symmetric_state`] but the
/// x-correlations of mode A to both partners are `c_x` instead of `c`
/// (the B–C block keeps `c`).
pub fn asymmetric_state(s: f64, t: f64, c: f64, c_x: f64) -> Result<CovMatrix> {
    if s <= 0.0 || t <= 0.0 || !s.is_finite() || !t.is_finite() {
        return Err(Error::InvalidParam(format!(
            "mode variances must be positive, got s = {s}, t = {t}"
        )));
    }
    let mut m = DMatrix::zeros(6, 6);
    for k in 0..3 {
        m[(2 * k, 2 * k)] = s;
        m[(2 * k + 1, 2 * k + 1)] = t;
    }
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let xc = if a == 0 { c_x } else { c };
        m[(2 * a, 2 * b)] = xc;
        m[(2 * b, 2 * a)] = xc;
        m[(2 * a + 1, 2 * b + 1)] = -c;
        m[(2 * b + 1, 2 * a + 1)] = -c;
    }
    Ok(CovMatrix::from_symmetric_parts(3, m))
}

/// Partially reconstructed covariance matrix of the tripartite source, as
/// measured by homodyne tomography. Cross correlations between different
/// quadratures are taken as zero.
pub const MEASURED_COVARIANCE: [[f64; 6]; 6] = [
    [2.76, 0.0, 2.32, 0.0, 2.27, 0.0],
    [0.0, 5.05, 0.0, -2.23, 0.0, -2.27],
    [2.32, 0.0, 2.78, 0.0, 2.29, 0.0],
    [0.0, -2.23, 0.0, 4.81, 0.0, -2.14],
    [2.27, 0.0, 2.29, 0.0, 2.69, 0.0],
    [0.0, -2.27, 0.0, -2.14, 0.0, 4.80],
];

/// The measured tripartite covariance matrix, verbatim.
pub fn measured_state() -> CovMatrix {
    let flat: Vec<f64> = MEASURED_COVARIANCE.iter().flatten().copied().collect();
    CovMatrix::from_matrix(DMatrix::from_row_slice(6, 6, &flat))
        .expect("measured covariance fixture is valid")
}

/// Projection of a (near-)balanced state onto the symmetric pattern, by
/// averaging: `s` over x variances, `t` over p variances, `c` over the
/// magnitudes of all six quadrature correlations pooled. The per-quadrature
/// means are reported alongside so the pooling choice stays visible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizedParams {
    pub s: f64,
    pub t: f64,
    /// Pooled mean of |x-correlations| and |p-correlations|.
    pub c: f64,
    /// Mean of the three x-correlations only.
    pub c_x_mean: f64,
    /// Mean of the three |p-correlation| magnitudes only.
    pub c_p_mean: f64,
}

pub fn symmetrized_params(sigma: &CovMatrix) -> Result<SymmetrizedParams> {
    if sigma.n_modes() != 3 {
        return Err(Error::Shape(format!(
            "symmetrization is defined for 3-mode states, got {} modes",
            sigma.n_modes()
        )));
    }
    let s = (sigma.element(0, 0) + sigma.element(2, 2) + sigma.element(4, 4)) / 3.0;
    let t = (sigma.element(1, 1) + sigma.element(3, 3) + sigma.element(5, 5)) / 3.0;
    let xs = [
        sigma.element(0, 2),
        sigma.element(0, 4),
        sigma.element(2, 4),
    ];
    let ps = [
        sigma.element(1, 3),
        sigma.element(1, 5),
        sigma.element(3, 5),
    ];
    let c_x_mean = xs.iter().map(|v| v.abs()).sum::<f64>() / 3.0;
    let c_p_mean = ps.iter().map(|v| v.abs()).sum::<f64>() / 3.0;
    let c = (3.0 * c_x_mean + 3.0 * c_p_mean) / 6.0;
    Ok(SymmetrizedParams {
        s,
        t,
        c,
        c_x_mean,
        c_p_mean,
    })
}

/// One term of a signed quadrature combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadTerm {
    pub mode: usize,
    pub quad: Quadrature,
    pub coeff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    X,
    P,
}

impl QuadTerm {
    pub fn x(mode: usize, coeff: f64) -> Self {
        Self {
            mode,
            quad: Quadrature::X,
            coeff,
        }
    }

    pub fn p(mode: usize, coeff: f64) -> Self {
        Self {
            mode,
            quad: Quadrature::P,
            coeff,
        }
    }

    fn index(&self) -> usize {
        2 * self.mode
            + match self.quad {
                Quadrature::X => 0,
                Quadrature::P => 1,
            }
    }
}

/// Variance of a signed quadrature combination, coefᵀ σ coef.
pub fn correlation_variance(sigma: &CovMatrix, combo: &[QuadTerm]) -> Result<f64> {
    if combo.is_empty() {
        return Err(Error::InvalidParam(
            "correlation variance needs at least one quadrature term".into(),
        ));
    }
    let dim = sigma.dim();
    let mut coef = vec![0.0; dim];
    for term in combo {
        if term.mode >= sigma.n_modes() {
            return Err(Error::ModeIndex {
                index: term.mode,
                n_modes: sigma.n_modes(),
            });
        }
        coef[term.index()] += term.coeff;
    }
    let mut acc = 0.0;
    for i in 0..dim {
        if coef[i] == 0.0 {
            continue;
        }
        for j in 0..dim {
            if coef[j] != 0.0 {
                acc += coef[i] * coef[j] * sigma.element(i, j);
            }
        }
    }
    Ok(acc)
}

/// Δ²(x_i − x_j).
pub fn x_difference_variance(sigma: &CovMatrix, i: usize, j: usize) -> Result<f64> {
    correlation_variance(sigma, &[QuadTerm::x(i, 1.0), QuadTerm::x(j, -1.0)])
}

/// Δ²(Σ p over the given modes).
pub fn p_sum_variance(sigma: &CovMatrix, modes: &[usize]) -> Result<f64> {
    let combo: Vec<QuadTerm> = modes.iter().map(|&m| QuadTerm::p(m, 1.0)).collect();
    correlation_variance(sigma, &combo)
}
