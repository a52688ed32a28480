//! Human-readable reports: state inspection, tuning tables and run summaries.

use std::fmt::Write as _;

use cvghz::{
    correlation_variance, mode_label, residual_noise, ChannelSpec, CovMatrix, Dataset, QuadTerm,
    RevivalSpec, SweepAxis,
};

pub fn state_report(sigma: &CovMatrix) -> String {
    let mut out = String::new();
    let n = sigma.n_modes();
    let _ = writeln!(out, "covariance matrix ({n} modes, shot-noise units):");
    for i in 0..sigma.dim() {
        let row: Vec<String> = (0..sigma.dim())
            .map(|j| format!("{:>9.4}", sigma.element(i, j)))
            .collect();
        let _ = writeln!(out, "  [{}]", row.join(" "));
    }
    let _ = writeln!(
        out,
        "physical (uncertainty bound): {}",
        if sigma.is_physical() { "yes" } else { "no" }
    );
    match sigma.symplectic_eigenvalues() {
        Ok(eig) => {
            let list: Vec<String> = eig.iter().map(|mu| format!("{mu:.6}")).collect();
            let _ = writeln!(out, "symplectic eigenvalues: {}", list.join(", "));
        }
        Err(e) => {
            let _ = writeln!(out, "symplectic eigenvalues: {e}");
        }
    }
    if n == 3 {
        match sigma.classify() {
            Ok(cls) => {
                let _ = writeln!(
                    out,
                    "PPT triple (A|BC, B|AC, C|AB): ({:.6}, {:.6}, {:.6})",
                    cls.ppt.a, cls.ppt.b, cls.ppt.c
                );
                let _ = writeln!(out, "class: {}", cls.class);
                if cls.multi_cut {
                    let _ = writeln!(out, "note: two cuts are PPT (multi-cut pattern)");
                }
                if cls.ppt.values().iter().all(|v| (v - 1.0).abs() < 1e-9) {
                    let _ = writeln!(out, "note: all PPT values sit on the separability boundary");
                }
            }
            Err(e) => {
                let _ = writeln!(out, "PPT analysis failed: {e}");
            }
        }
        let _ = writeln!(out, "correlation variances:");
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if let Ok(v) = correlation_variance(sigma, &[QuadTerm::x(i, 1.0), QuadTerm::x(j, -1.0)])
            {
                let _ = writeln!(
                    out,
                    "  var(x_{} - x_{}) = {v:.6}",
                    mode_label(i),
                    mode_label(j)
                );
            }
        }
        if let Ok(v) = correlation_variance(
            sigma,
            &[
                QuadTerm::p(0, 1.0),
                QuadTerm::p(1, 1.0),
                QuadTerm::p(2, 1.0),
            ],
        ) {
            let _ = writeln!(out, "  var(p_A + p_B + p_C) = {v:.6}");
        }
    }
    out
}

pub fn tune_report(eta: f64, t: f64, g_a: f64, noise_var: f64, g_b: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "channel: eta = {eta}, g_a = {g_a}, excess-noise variance N = {noise_var}"
    );
    let _ = writeln!(out, "revival splitter: T = {t}");
    let _ = writeln!(out, "tuned g_b = {g_b:.6}");
    if g_b == 0.0 {
        let _ = writeln!(
            out,
            "note: lossless channel (eta = 1) carries no excess noise; revival is a no-op"
        );
        return out;
    }
    let _ = writeln!(out, "g_a/g_b = {:.6}", g_a / g_b);
    let _ = writeln!(out, "residual noise vs g_b detuning:");
    let _ = writeln!(out, "  {:>6} {:>12} {:>14}", "factor", "g_b", "residual");
    let ch = ChannelSpec {
        eta,
        g_a,
        noise_var,
    };
    for factor in [0.5, 0.8, 0.9, 1.0, 1.1, 1.2, 1.5] {
        let rv = RevivalSpec::new(t, factor * g_b).expect("valid detuned spec");
        let res = residual_noise(&ch, &rv);
        let _ = writeln!(out, "  {factor:>6.2} {:>12.6} {res:>14.8}", factor * g_b);
    }
    out
}

pub fn summary_text(dataset: &Dataset) -> String {
    let mut out = String::new();
    if let Some(preset) = &dataset.preset {
        let _ = writeln!(out, "preset: {preset}");
    }
    let _ = writeln!(out, "scenario: {}", dataset.scenario.id);
    if let Some(desc) = dataset.metadata.get("description") {
        let _ = writeln!(out, "description: {desc}");
    }
    let axis = dataset.scenario.axis;
    let grid = dataset.scenario.grid;
    let _ = writeln!(
        out,
        "axis: {} over [{}, {}], {} points",
        axis.name(),
        grid.start,
        grid.stop,
        grid.points
    );

    if let Ok(source) = dataset.scenario.source.build() {
        if let Ok(cls) = source.classify() {
            let _ = writeln!(
                out,
                "source state PPT triple: ({:.6}, {:.6}, {:.6})  class: {}",
                cls.ppt.a, cls.ppt.b, cls.ppt.c, cls.class
            );
        }
    }
    if let cvghz::StateSource::GhzCustom { inputs, .. } = &dataset.scenario.source {
        if !cvghz::states::is_standard_ghz_inputs(inputs) {
            let _ = writeln!(
                out,
                "note: non-standard squeezing configuration (expected x, p, x)"
            );
        }
    }

    let _ = writeln!(out, "class regions ({}):", axis.name());
    for (tag, lo, hi) in dataset.class_regions() {
        let _ = writeln!(out, "  {tag:<24} [{lo:.6}, {hi:.6}]");
    }

    match dataset.thresholds() {
        Ok(thresholds) if !thresholds.is_empty() => {
            let _ = writeln!(out, "PPT = 1 crossings (bisection):");
            for (cut, value) in thresholds {
                let _ = writeln!(
                    out,
                    "  {}|rest: {} = {value:.6}",
                    mode_label(cut),
                    axis.name()
                );
            }
        }
        Ok(_) => {
            let _ = writeln!(out, "PPT = 1 crossings: none on this grid");
        }
        Err(e) => {
            let _ = writeln!(out, "threshold search failed: {e}");
        }
    }

    if dataset.scenario.revival.is_some() {
        let worst = dataset
            .records
            .iter()
            .map(|r| r.residual_noise)
            .fold(0.0f64, f64::max);
        let _ = writeln!(out, "largest residual revival noise on grid: {worst:.3e}");
    }
    if axis == SweepAxis::Eta {
        if let (Some(first), Some(last)) = (dataset.records.first(), dataset.records.last()) {
            let _ = writeln!(
                out,
                "PPT_A range across grid: {:.6} (at {} = {}) to {:.6} (at {} = {})",
                first.ppt().a,
                axis.name(),
                first.value,
                last.ppt().a,
                axis.name(),
                last.value
            );
        }
    }
    out
}
