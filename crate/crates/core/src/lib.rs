//! Simulation and certification of tripartite entangled optical beams in
//! lossy and noisy channels, in the covariance-matrix picture.
//!
//! The crate covers the full desk-scale pipeline:
//!
//! - build the tripartite source from squeezed inputs on a beam-splitter
//!   network, or use the measured reference matrix ([`states`]);
//! - push modes through lossy/noisy Gaussian channels and revive noisy modes
//!   with a correlated-noise ancilla ([`channels`]);
//! - certify entanglement through symplectic eigenvalues of partial
//!   transposes ([`cov`]);
//! - reconstruct states from the 12-measurement homodyne protocol
//!   ([`tomography`]);
//! - sweep parameters, classify separability regions and locate thresholds
//!   ([`sweep`], [`presets`]).
//!
//! Conventions: quadratures interleaved (x₁, p₁, x₂, p₂, …), vacuum variance
//! 1 per quadrature, PPT boundary at 1.

pub mod channels;
pub mod cov;
pub mod error;
pub mod presets;
pub mod states;
pub mod sweep;
pub mod tomography;

pub use channels::{
    distribute, lossy_channel, noisy_channel, residual_noise, revive, tuned_gb, ChannelSpec,
    RevivalSpec,
};
pub use cov::{
    mode_label, Classification, CovMatrix, EntanglementClass, PptTriple, SymplecticForm, CLASS_TOL,
    PHYSICALITY_TOL,
};
pub use error::{Error, Result};
pub use presets::{preset_names, preset_scenario, run_preset};
pub use states::{
    apply_beamsplitter, asymmetric_state, correlation_variance, ghz_state, ghz_state_pure,
    ghz_state_uniform, measured_state, symmetric_state, symmetrized_params, NetworkSpec,
    Orientation, QuadTerm, Quadrature, SqueezedModeSpec,
};
pub use sweep::{
    evaluate_point, find_eta_threshold, find_noise_threshold, sweep, Dataset, GbSetting, Grid,
    RevivalSetting, ScenarioSpec, StateSource, SweepAxis, SweepRecord,
};
pub use tomography::{perturb_record, reconstruct, simulate_measurements, MeasurementRecord};
