//! Independent oracles used by the integration suites.
//!
//! Nothing here may call back into the code paths under test: the
//! eigen-solver is a hand-rolled cyclic Jacobi iteration, and the channel
//! oracle propagates the mode-operator expressions through variance algebra
//! term by term.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use cvghz::{ChannelSpec, CovMatrix, RevivalSpec};
use rand::Rng;

pub type Mat = Vec<Vec<f64>>;

pub fn mat_zeros(n: usize) -> Mat {
    vec![vec![0.0; n]; n]
}

pub fn mat_from_cov(sigma: &CovMatrix) -> Mat {
    let n = sigma.dim();
    (0..n)
        .map(|i| (0..n).map(|j| sigma.element(i, j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = mat_zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_transpose(a: &Mat) -> Mat {
    let n = a.len();
    let mut out = mat_zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[j][i] = a[i][j];
        }
    }
    out
}

/// Cyclic Jacobi diagonalization of a symmetric matrix. Returns eigenvalues
/// and the orthogonal matrix of column eigenvectors. Plenty accurate for the
/// small dense matrices in this suite.
pub fn jacobi_eigen(mat: &Mat) -> (Vec<f64>, Mat) {
    let n = mat.len();
    let mut a: Mat = mat.to_vec();
    let mut v = mat_zeros(n);
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-300 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[i][i]).collect();
    (vals, v)
}

/// Symplectic eigenvalues by a route disjoint from the library's: take the
/// symmetric square root of σ, form the antisymmetric K = √σ · Ω · √σ, and
/// diagonalize the symmetric KᵀK, whose eigenvalues are the squared
/// symplectic eigenvalues, each doubled. Requires σ ⪰ 0.
pub fn oracle_symplectic_eigenvalues(sigma: &CovMatrix) -> Vec<f64> {
    let n = sigma.dim();
    let m = mat_from_cov(sigma);
    let (vals, vecs) = jacobi_eigen(&m);
    let mut sqrt_m = mat_zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for (k, lam) in vals.iter().enumerate() {
                acc += vecs[i][k] * lam.max(0.0).sqrt() * vecs[j][k];
            }
            sqrt_m[i][j] = acc;
        }
    }
    let mut omega = mat_zeros(n);
    for k in 0..n / 2 {
        omega[2 * k][2 * k + 1] = 1.0;
        omega[2 * k + 1][2 * k] = -1.0;
    }
    let k_mat = mat_mul(&mat_mul(&sqrt_m, &omega), &sqrt_m);
    let g = mat_mul(&mat_transpose(&k_mat), &k_mat);
    let (mut g_vals, _) = jacobi_eigen(&g);
    g_vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    g_vals
        .chunks_exact(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect()
}

/// Brute-force variance propagation of the noisy-channel mode operator:
/// out_k = √η·in_k + √(1−η)·vacuum + √((1−η)·g_a)·noise, with independent
/// vacuum/noise components per quadrature and noise variance N.
pub fn oracle_noisy_channel(sigma: &CovMatrix, k: usize, ch: &ChannelSpec) -> Mat {
    let coef_in = ch.eta.sqrt();
    let extras = vec![
        // (variance, x-coefficient, p-coefficient)
        (1.0, (1.0 - ch.eta).sqrt()),
        (ch.noise_var, ((1.0 - ch.eta) * ch.g_a).sqrt()),
    ];
    propagate_single_mode(sigma, k, coef_in, &extras)
}

/// Brute-force variance propagation of the revived mode operator:
/// out_k = √(ηT)·in_k + √((1−η)T)·vacuum − √(1−T)·ancilla
///       + (√((1−η)·g_a·T) − √((1−T)·g_b))·noise.
/// The shared noise term carries the channel/ancilla correlation.
pub fn oracle_revive(sigma: &CovMatrix, k: usize, ch: &ChannelSpec, rv: &RevivalSpec) -> Mat {
    let t = rv.transmissivity;
    let coef_in = (ch.eta * t).sqrt();
    let noise_coef = ((1.0 - ch.eta) * ch.g_a * t).sqrt() - ((1.0 - t) * rv.g_b).sqrt();
    let extras = vec![
        (1.0, ((1.0 - ch.eta) * t).sqrt()), // channel vacuum
        (1.0, -(1.0 - t).sqrt()),           // ancilla vacuum
        (ch.noise_var, noise_coef),         // correlated noise, already combined
    ];
    propagate_single_mode(sigma, k, coef_in, &extras)
}

/// σ_out = A σ Aᵀ + Σ_e var_e · c_e c_eᵀ with A the identity except for a
/// factor `coef_in` on both quadratures of mode k, and each extra source
/// feeding both quadratures of mode k independently.
fn propagate_single_mode(sigma: &CovMatrix, k: usize, coef_in: f64, extras: &[(f64, f64)]) -> Mat {
    let n = sigma.dim();
    let mut a = mat_zeros(n);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = if i / 2 == k { coef_in } else { 1.0 };
    }
    let mut out = mat_mul(&mat_mul(&a, &mat_from_cov(sigma)), &mat_transpose(&a));
    for &(variance, coef) in extras {
        // independent x and p components of the source
        out[2 * k][2 * k] += variance * coef * coef;
        out[2 * k + 1][2 * k + 1] += variance * coef * coef;
    }
    out
}

pub fn max_abs_diff_mat(a: &Mat, b: &CovMatrix) -> f64 {
    let n = a.len();
    let mut worst: f64 = 0.0;
    for (i, row) in a.iter().enumerate().take(n) {
        for (j, value) in row.iter().enumerate().take(n) {
            worst = worst.max((value - b.element(i, j)).abs());
        }
    }
    worst
}

/// Random physical 3-mode state: three random squeezers through a random
/// two-splitter network, plus optional classical diagonal noise (keeps the
/// state physical, makes it impure).
pub fn random_physical_state(rng: &mut impl Rng) -> CovMatrix {
    use cvghz::{apply_beamsplitter, ghz_state, NetworkSpec, Orientation, SqueezedModeSpec};
    let orient = |flip: bool| {
        if flip {
            Orientation::PSqueezed
        } else {
            Orientation::XSqueezed
        }
    };
    let inputs = [
        SqueezedModeSpec::pure_from_r(rng.random_range(0.0..0.8), orient(rng.random_bool(0.5)))
            .unwrap(),
        SqueezedModeSpec::pure_from_r(rng.random_range(0.0..0.8), orient(rng.random_bool(0.5)))
            .unwrap(),
        SqueezedModeSpec::pure_from_r(rng.random_range(0.0..0.8), orient(rng.random_bool(0.5)))
            .unwrap(),
    ];
    let net = NetworkSpec::new(rng.random_range(0.1..0.9), rng.random_range(0.1..0.9)).unwrap();
    let mut sigma = ghz_state(&inputs, &net).unwrap();
    sigma = apply_beamsplitter(&sigma, 0, 2, rng.random_range(0.1..0.9)).unwrap();
    if rng.random_bool(0.7) {
        let mut m = sigma.matrix().clone();
        for i in 0..6 {
            m[(i, i)] += rng.random_range(0.0..0.6);
        }
        sigma = CovMatrix::from_matrix(m).unwrap();
    }
    sigma
}

/// Random channel parameters for the oracle-equivalence draws.
pub fn random_channel(rng: &mut impl Rng) -> ChannelSpec {
    ChannelSpec {
        eta: rng.random_range(0.0..=1.0),
        g_a: rng.random_range(0.0..2.0),
        noise_var: rng.random_range(0.0..10.0),
    }
}

pub fn random_revival(rng: &mut impl Rng) -> RevivalSpec {
    RevivalSpec::new(rng.random_range(0.5..1.0), rng.random_range(0.0..5.0)).unwrap()
}
