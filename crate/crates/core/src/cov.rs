//! Covariance matrices, symplectic spectra and the PPT entanglement test.
//!
//! A Gaussian state of N optical modes is fully characterised by the 2N×2N
//! real symmetric matrix of quadrature (co)variances. Everything in this
//! crate works on that representation, with quadratures interleaved as
//! (x₁, p₁, x₂, p₂, …) and variances in shot-noise units: the vacuum state
//! has variance 1 per quadrature.
//!
//! Entanglement across a 1|(N−1) cut is certified by partial transposition:
//! flip the sign of one mode's p quadrature and check whether the smallest
//! symplectic eigenvalue of the transposed matrix drops below 1. The
//! symplectic eigenvalues of σ are the moduli of the (purely imaginary)
//! eigenvalues of Ω·σ, where Ω is the standard symplectic form.

use nalgebra::{DMatrix, Schur};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on |σ − σᵀ| accepted by [`CovMatrix::from_matrix`].
pub const SYMMETRY_REL_TOL: f64 = 1e-10;

/// A state is flagged physical when its smallest symplectic eigenvalue is
/// ≥ 1 − `PHYSICALITY_TOL`. Measured matrices may sit slightly below 1.
pub const PHYSICALITY_TOL: f64 = 1e-6;

/// Classification margin: a PPT value counts as separable when it is
/// ≥ 1 − `CLASS_TOL`.
pub const CLASS_TOL: f64 = 1e-9;

/// Eigenvalues of Ω·σ must pair up (λ, −λ*) within
/// `PAIRING_TOL_FACTOR · ‖σ‖_F`; larger gaps are reported as numerical
/// errors.
pub const PAIRING_TOL_FACTOR: f64 = 1e-7;

/// Iteration cap handed to the Schur decomposition. Generous for the small
/// dense matrices this crate works with.
const SCHUR_MAX_ITER: usize = 10_000;

/// Display label for a mode index: A, B, C, then numbered.
pub fn mode_label(k: usize) -> String {
    match k {
        0 => "A".into(),
        1 => "B".into(),
        2 => "C".into(),
        n => format!("mode{}", n + 1),
    }
}

/// The standard symplectic form Ω = ⊕ₖ [[0, 1], [−1, 0]].
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Shape(
                "symplectic form needs at least one mode".into(),
            ));
        }
        let dim = 2 * n_modes;
        let mut matrix = DMatrix::zeros(dim, dim);
        for k in 0..n_modes {
            matrix[(2 * k, 2 * k + 1)] = 1.0;
            matrix[(2 * k + 1, 2 * k)] = -1.0;
        }
        Ok(Self { n_modes, matrix })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Quadrature ordering of a serialized covariance record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureOrdering {
    /// (x₁, p₁, x₂, p₂, …) — the in-memory convention.
    Interleaved,
    /// (x₁, …, x_N, p₁, …, p_N); re-interleaved on load.
    Block,
}

#[derive(Serialize, Deserialize)]
struct CovRecord {
    n_modes: usize,
    ordering: QuadratureOrdering,
    data: Vec<f64>,
}

/// Covariance matrix of an N-mode Gaussian state.
///
/// Immutable after construction; all channel and network operations return
/// new values. Construction symmetrizes the input (average with its
/// transpose) and records whether the state satisfies the uncertainty bound
/// (smallest symplectic eigenvalue ≥ 1 − [`PHYSICALITY_TOL`]). Unphysical
/// matrices are accepted and flagged, not rejected: reconstructions from
/// noisy measurements routinely dip below the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    n_modes: usize,
    data: DMatrix<f64>,
    physical: bool,
}

impl CovMatrix {
    /// Validating constructor.
    ///
    /// Errors on non-square or odd-dimension input ([`Error::Shape`]) and on
    /// asymmetry beyond [`SYMMETRY_REL_TOL`] relative to the largest element
    /// ([`Error::Data`]).
    pub fn from_matrix(raw: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = raw.shape();
        if rows != cols {
            return Err(Error::Shape(format!(
                "covariance matrix must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 || rows % 2 != 0 {
            return Err(Error::Shape(format!(
                "covariance dimension must be a positive even number, got {rows}"
            )));
        }
        let scale = raw.amax();
        let asym = (&raw - raw.transpose()).amax();
        if asym > SYMMETRY_REL_TOL * scale {
            return Err(Error::Data(format!(
                "matrix asymmetry {asym:.3e} exceeds {SYMMETRY_REL_TOL:.1e} relative tolerance \
                 (scale {scale:.3e})"
            )));
        }
        let data = (&raw + raw.transpose()) * 0.5;
        let n_modes = rows / 2;
        let physical = min_symplectic_eigenvalue(&data)
            .map(|mu| mu >= 1.0 - PHYSICALITY_TOL)
            .unwrap_or(false);
        Ok(Self {
            n_modes,
            data,
            physical,
        })
    }

    /// Like [`CovMatrix::from_matrix`] but the input is in block ordering
    /// (all x first, then all p); it is re-interleaved before validation.
    pub fn from_matrix_block_ordered(raw: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = raw.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::Shape(format!(
                "covariance matrix must be square with even dimension, got {rows}x{cols}"
            )));
        }
        let n = rows / 2;
        // interleaved index 2m   <- block index m     (x of mode m)
        // interleaved index 2m+1 <- block index n + m (p of mode m)
        let perm: Vec<usize> = (0..rows)
            .map(|i| if i % 2 == 0 { i / 2 } else { n + i / 2 })
            .collect();
        let mut out = DMatrix::zeros(rows, rows);
        for i in 0..rows {
            for j in 0..rows {
                out[(i, j)] = raw[(perm[i], perm[j])];
            }
        }
        Self::from_matrix(out)
    }

    /// Vacuum state of `n_modes` modes.
    pub fn identity(n_modes: usize) -> Self {
        Self {
            n_modes,
            data: DMatrix::identity(2 * n_modes, 2 * n_modes),
            physical: true,
        }
    }

    /// Internal constructor for outputs that are symmetric by construction.
    /// Still recomputes the physicality flag.
    pub(crate) fn from_symmetric_parts(n_modes: usize, data: DMatrix<f64>) -> Self {
        let physical = min_symplectic_eigenvalue(&data)
            .map(|mu| mu >= 1.0 - PHYSICALITY_TOL)
            .unwrap_or(false);
        Self {
            n_modes,
            data,
            physical,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Full matrix dimension 2N.
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn element(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    /// Whether the smallest symplectic eigenvalue was ≥ 1 − [`PHYSICALITY_TOL`]
    /// at construction time.
    pub fn is_physical(&self) -> bool {
        self.physical
    }

    /// Largest absolute element-wise difference to another matrix.
    pub fn max_abs_diff(&self, other: &CovMatrix) -> f64 {
        (&self.data - &other.data).amax()
    }

    /// Symplectic eigenvalues, descending, one per mode.
    ///
    /// Computed as the moduli of the eigenvalues of Ω·σ, which come in
    /// (λ, −λ*) pairs. Each sorted adjacent pair must agree within
    /// [`PAIRING_TOL_FACTOR`]·‖σ‖_F; the paired mean is reported once.
    /// For an unphysical σ the moduli are still returned (the matrix stays
    /// analyzable), but they need not all sit above 1.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues_of(&self.data)
    }

    /// Partial transposition with respect to mode `k` (0-based):
    /// the sign flip p_k → −p_k, i.e. T_k σ T_k with T_k diagonal, all ones
    /// except −1 at the p quadrature of mode `k`.
    pub fn partial_transpose(&self, k: usize) -> Result<CovMatrix> {
        if k >= self.n_modes {
            return Err(Error::ModeIndex {
                index: k,
                n_modes: self.n_modes,
            });
        }
        let mut data = self.data.clone();
        let p = 2 * k + 1;
        for i in 0..self.dim() {
            if i != p {
                data[(p, i)] = -data[(p, i)];
                data[(i, p)] = -data[(i, p)];
            }
        }
        Ok(CovMatrix::from_symmetric_parts(self.n_modes, data))
    }

    /// Smallest symplectic eigenvalue of the partial transpose with respect
    /// to mode `k`. A value < 1 certifies inseparability of the k|rest cut.
    pub fn ppt_value(&self, k: usize) -> Result<f64> {
        let pt = self.partial_transpose(k)?;
        let eig = pt.symplectic_eigenvalues()?;
        Ok(eig.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// The three PPT values of a three-mode state, in mode order
    /// (A|BC, B|AC, C|AB).
    pub fn ppt_triple(&self) -> Result<PptTriple> {
        if self.n_modes != 3 {
            return Err(Error::Shape(format!(
                "PPT triple needs a 3-mode state, got {} modes",
                self.n_modes
            )));
        }
        Ok(PptTriple {
            a: self.ppt_value(0)?,
            b: self.ppt_value(1)?,
            c: self.ppt_value(2)?,
        })
    }

    /// Separability classification of a three-mode state from its PPT triple.
    ///
    /// A cut counts as separable when its PPT value is ≥ 1 − [`CLASS_TOL`].
    /// Zero separable cuts → fully inseparable; exactly one → one-mode
    /// biseparable; all three → PPT separable on every cut. The ambiguous
    /// two-cut pattern is reported as biseparable at the largest PPT value
    /// with `multi_cut` set, never as an error.
    pub fn classify(&self) -> Result<Classification> {
        let ppt = self.ppt_triple()?;
        Ok(Classification::from_triple(ppt))
    }

    /// Serialize to the structured-text covariance record (JSON), row-major
    /// interleaved ordering. Floats round-trip bit-exactly.
    pub fn to_json(&self) -> String {
        let record = CovRecord {
            n_modes: self.n_modes,
            ordering: QuadratureOrdering::Interleaved,
            data: self.data.transpose().as_slice().to_vec(),
        };
        serde_json::to_string(&record).expect("covariance record serializes")
    }

    /// Parse a covariance record produced by [`CovMatrix::to_json`] or by an
    /// external tool using block ordering.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: CovRecord =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let dim = 2 * record.n_modes;
        if record.data.len() != dim * dim {
            return Err(Error::Shape(format!(
                "covariance record claims {} modes but carries {} elements",
                record.n_modes,
                record.data.len()
            )));
        }
        let raw = DMatrix::from_row_slice(dim, dim, &record.data);
        match record.ordering {
            QuadratureOrdering::Interleaved => Self::from_matrix(raw),
            QuadratureOrdering::Block => Self::from_matrix_block_ordered(raw),
        }
    }
}

/// Smallest symplectic eigenvalue, or an error from the eigen-solver.
fn min_symplectic_eigenvalue(data: &DMatrix<f64>) -> Result<f64> {
    Ok(symplectic_eigenvalues_of(data)?
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

fn symplectic_eigenvalues_of(data: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = data.nrows();
    let n_modes = dim / 2;
    let omega = SymplecticForm::new(n_modes)?;
    let m = omega.matrix() * data;
    let schur = Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER).ok_or_else(|| {
        Error::Numerical("Schur decomposition of Omega*sigma did not converge".into())
    })?;
    let mut moduli: Vec<f64> = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    if moduli.iter().any(|m| !m.is_finite()) {
        return Err(Error::Numerical(
            "non-finite eigenvalue in symplectic spectrum".into(),
        ));
    }
    moduli.sort_by(|a, b| b.partial_cmp(a).expect("finite moduli"));
    let pairing_tol = PAIRING_TOL_FACTOR * data.norm();
    let mut out = Vec::with_capacity(n_modes);
    for pair in moduli.chunks_exact(2) {
        let gap = pair[0] - pair[1];
        if gap > pairing_tol {
            return Err(Error::Numerical(format!(
                "eigenvalue pairing failed: |{:.12e}| vs |{:.12e}| differ by {:.3e} \
                 (tolerance {:.3e}); spectrum {:?}",
                pair[0], pair[1], gap, pairing_tol, moduli
            )));
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}

/// Smallest symplectic eigenvalues of the partial transposes across the three
/// 1|2 cuts of a tripartite state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptTriple {
    /// A|BC cut.
    pub a: f64,
    /// B|AC cut.
    pub b: f64,
    /// C|AB cut.
    pub c: f64,
}

impl PptTriple {
    pub fn get(&self, k: usize) -> Option<f64> {
        match k {
            0 => Some(self.a),
            1 => Some(self.b),
            2 => Some(self.c),
            _ => None,
        }
    }

    pub fn values(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn min(&self) -> f64 {
        self.a.min(self.b).min(self.c)
    }

    pub fn max(&self) -> f64 {
        self.a.max(self.b).max(self.c)
    }
}

/// Separability pattern of a tripartite state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntanglementClass {
    /// All three PPT values below 1: entanglement certified across every cut.
    FullyInseparable,
    /// Exactly one cut is PPT; the carried index names the separated mode.
    OneModeBiseparable(usize),
    /// All three cuts are PPT.
    FullyPptSeparable,
}

impl EntanglementClass {
    /// Short machine-readable tag used in CSV output.
    pub fn tag(&self) -> String {
        match self {
            EntanglementClass::FullyInseparable => "fully_inseparable".into(),
            EntanglementClass::OneModeBiseparable(k) => {
                format!("biseparable_{}", mode_label(*k).to_lowercase())
            }
            EntanglementClass::FullyPptSeparable => "fully_ppt_separable".into(),
        }
    }
}

impl std::fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntanglementClass::FullyInseparable => write!(f, "fully inseparable (I)"),
            EntanglementClass::OneModeBiseparable(k) => {
                write!(f, "one-mode biseparable, mode {} (II)", mode_label(*k))
            }
            EntanglementClass::FullyPptSeparable => write!(f, "fully PPT separable (III)"),
        }
    }
}

/// An [`EntanglementClass`] together with the PPT triple that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: EntanglementClass,
    pub ppt: PptTriple,
    /// Set when two (but not three) cuts were PPT: the class falls back to
    /// biseparable at the largest value.
    pub multi_cut: bool,
}

impl Classification {
    pub fn from_triple(ppt: PptTriple) -> Self {
        let separable: Vec<usize> = (0..3)
            .filter(|&k| ppt.get(k).unwrap() >= 1.0 - CLASS_TOL)
            .collect();
        let (class, multi_cut) = match separable.len() {
            0 => (EntanglementClass::FullyInseparable, false),
            1 => (EntanglementClass::OneModeBiseparable(separable[0]), false),
            3 => (EntanglementClass::FullyPptSeparable, false),
            _ => {
                let largest = (0..3)
                    .max_by(|&i, &j| {
                        ppt.get(i)
                            .unwrap()
                            .partial_cmp(&ppt.get(j).unwrap())
                            .expect("finite PPT values")
                    })
                    .unwrap();
                (EntanglementClass::OneModeBiseparable(largest), true)
            }
        };
        Classification {
            class,
            ppt,
            multi_cut,
        }
    }

    /// CSV tag, with a `+multi_cut` marker for the ambiguous pattern.
    pub fn tag(&self) -> String {
        if self.multi_cut {
            format!("{}+multi_cut", self.class.tag())
        } else {
            self.class.tag()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with a 50-digit script diagonalizing
    // i*Omega*sigma directly, written before this module.
    const MEASURED_SYMPLECTIC: [f64; 3] = [
        1.8773433203137035,
        1.7920821327803548,
        1.741155848005264,
    ];
    const MEASURED_PPT: [f64; 3] = [
        0.4824526735268102,
        0.4746547568654741,
        0.4784861574877367,
    ];

    fn measured() -> CovMatrix {
        crate::states::measured_state()
    }

    #[test]
    fn identity_is_valid_and_physical() {
        let sigma = CovMatrix::from_matrix(DMatrix::identity(6, 6)).unwrap();
        assert_eq!(sigma.n_modes(), 3);
        assert!(sigma.is_physical());
    }

    #[test]
    fn measured_matrix_is_valid_and_physical() {
        let sigma = measured();
        assert_eq!(sigma.n_modes(), 3);
        assert!(sigma.is_physical());
    }

    #[test]
    fn zero_matrix_accepted_but_flagged_unphysical() {
        let sigma = CovMatrix::from_matrix(DMatrix::zeros(6, 6)).unwrap();
        assert!(!sigma.is_physical());
        let eig = sigma.symplectic_eigenvalues().unwrap();
        assert_eq!(eig, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn odd_dimension_rejected() {
        let err = CovMatrix::from_matrix(DMatrix::identity(5, 5)).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn non_square_rejected() {
        let err = CovMatrix::from_matrix(DMatrix::zeros(4, 6)).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let mut raw = DMatrix::identity(4, 4);
        raw[(0, 1)] = 0.5;
        let err = CovMatrix::from_matrix(raw).unwrap_err();
        assert!(matches!(err, Error::Data(_)));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized_away() {
        let mut raw = DMatrix::identity(4, 4);
        raw[(0, 1)] = 1e-12;
        let sigma = CovMatrix::from_matrix(raw).unwrap();
        assert_eq!(sigma.element(0, 1), sigma.element(1, 0));
        assert!((sigma.element(0, 1) - 5e-13).abs() < 1e-20);
    }

    #[test]
    fn vacuum_symplectic_spectrum() {
        let sigma = CovMatrix::identity(3);
        let eig = sigma.symplectic_eigenvalues().unwrap();
        assert_eq!(eig.len(), 3);
        for mu in eig {
            assert!((mu - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_squeezed_mode_has_unit_symplectic_eigenvalue() {
        let sigma =
            CovMatrix::from_matrix(DMatrix::from_diagonal(&nalgebra::dvector![4.0, 0.25])).unwrap();
        let eig = sigma.symplectic_eigenvalues().unwrap();
        assert_eq!(eig.len(), 1);
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!(sigma.is_physical());
    }

    #[test]
    fn measured_symplectic_spectrum_matches_oracle() {
        let eig = measured().symplectic_eigenvalues().unwrap();
        for (got, want) in eig.iter().zip(MEASURED_SYMPLECTIC) {
            assert!(
                (got - want).abs() < 1e-8,
                "symplectic eigenvalue {got} vs oracle {want}"
            );
        }
    }

    #[test]
    fn partial_transpose_of_identity_is_identity() {
        let sigma = CovMatrix::identity(3);
        for k in 0..3 {
            let pt = sigma.partial_transpose(k).unwrap();
            assert_eq!(pt.max_abs_diff(&sigma), 0.0);
        }
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let sigma = measured();
        for k in 0..3 {
            let back = sigma
                .partial_transpose(k)
                .unwrap()
                .partial_transpose(k)
                .unwrap();
            assert_eq!(back.max_abs_diff(&sigma), 0.0, "exact involution, mode {k}");
        }
    }

    #[test]
    fn partial_transpose_flips_expected_entries() {
        let sigma = measured();
        let pt = sigma.partial_transpose(0).unwrap();
        // direct index manipulation: p_A row/column negated off the diagonal
        for i in 0..6 {
            for j in 0..6 {
                let flip = (i == 1) ^ (j == 1);
                let want = if flip {
                    -sigma.element(i, j)
                } else {
                    sigma.element(i, j)
                };
                assert_eq!(pt.element(i, j), want, "element ({i},{j})");
            }
        }
    }

    #[test]
    fn partial_transpose_mode_out_of_range() {
        let err = measured().partial_transpose(3).unwrap_err();
        assert!(matches!(
            err,
            Error::ModeIndex {
                index: 3,
                n_modes: 3
            }
        ));
    }

    #[test]
    fn vacuum_ppt_is_boundary_value() {
        let sigma = CovMatrix::identity(3);
        for k in 0..3 {
            assert!((sigma.ppt_value(k).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn measured_ppt_triple_matches_reported_values() {
        let triple = measured().ppt_triple().unwrap();
        assert!((triple.a - 0.48).abs() < 0.005);
        assert!((triple.b - 0.47).abs() < 0.005);
        assert!((triple.c - 0.48).abs() < 0.005);
        for (got, want) in triple.values().iter().zip(MEASURED_PPT) {
            assert!((got - want).abs() < 1e-8, "ppt {got} vs oracle {want}");
        }
    }

    #[test]
    fn ideal_ghz_ppt_matches_oracle() {
        // high-precision oracle value for the pure r = 0.4 source; identical
        // on all three cuts by symmetry
        let triple = crate::states::ghz_state_pure(0.4)
            .unwrap()
            .ppt_triple()
            .unwrap();
        for v in triple.values() {
            assert!(v < 1.0);
            assert!((v - 0.4669460997641623).abs() < 1e-8, "ppt {v}");
        }
    }

    #[test]
    fn thermal_product_state_ppt_equals_mode_variance() {
        // s = t, c = 0: three identical thermal modes. Partial transposition
        // leaves the state invariant, so every PPT value is the thermal
        // variance itself.
        let s = 1.7;
        let sigma = crate::states::symmetric_state(s, s, 0.0).unwrap();
        let triple = sigma.ppt_triple().unwrap();
        for v in triple.values() {
            assert!((v - s).abs() < 1e-10);
        }
    }

    #[test]
    fn ppt_triple_requires_three_modes() {
        let sigma = CovMatrix::identity(2);
        assert!(matches!(sigma.ppt_triple().unwrap_err(), Error::Shape(_)));
    }

    #[test]
    fn classify_measured_state_fully_inseparable() {
        let cls = measured().classify().unwrap();
        assert_eq!(cls.class, EntanglementClass::FullyInseparable);
        assert!(!cls.multi_cut);
    }

    #[test]
    fn classify_boundary_vacuum_as_separable() {
        let cls = CovMatrix::identity(3).classify().unwrap();
        assert_eq!(cls.class, EntanglementClass::FullyPptSeparable);
    }

    #[test]
    fn classify_two_cut_pattern_sets_multi_cut_flag() {
        let cls = Classification::from_triple(PptTriple {
            a: 1.4,
            b: 1.2,
            c: 0.7,
        });
        assert_eq!(cls.class, EntanglementClass::OneModeBiseparable(0));
        assert!(cls.multi_cut);
        assert!(cls.tag().contains("multi_cut"));
    }

    #[test]
    fn classify_single_cut_pattern() {
        let cls = Classification::from_triple(PptTriple {
            a: 1.1,
            b: 0.9,
            c: 0.8,
        });
        assert_eq!(cls.class, EntanglementClass::OneModeBiseparable(0));
        assert!(!cls.multi_cut);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let sigma = measured();
        let text = sigma.to_json();
        let back = CovMatrix::from_json(&text).unwrap();
        assert_eq!(back.max_abs_diff(&sigma), 0.0);
        assert_eq!(back.n_modes(), 3);
    }

    #[test]
    fn block_ordered_record_is_reinterleaved() {
        let sigma = measured();
        let dim = sigma.dim();
        let n = sigma.n_modes();
        // build the block-ordered copy: index m -> x_m, index n+m -> p_m
        let block_of = |i: usize| if i < n { 2 * i } else { 2 * (i - n) + 1 };
        let mut block = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                block[(i, j)] = sigma.element(block_of(i), block_of(j));
            }
        }
        let record = serde_json::json!({
            "n_modes": n,
            "ordering": "block",
            "data": block.transpose().as_slice(),
        });
        let parsed = CovMatrix::from_json(&record.to_string()).unwrap();
        assert_eq!(parsed.max_abs_diff(&sigma), 0.0);
    }

    #[test]
    fn symplectic_form_invariants() {
        let omega = SymplecticForm::new(3).unwrap();
        let m = omega.matrix();
        assert_eq!((m + m.transpose()).amax(), 0.0);
        let sq = m * m;
        assert_eq!((sq + DMatrix::identity(6, 6)).amax(), 0.0);
    }
}
