use serde::{Deserialize, Serialize};

use super::evolve::{evolve_continuous, loschmidt_field};
use super::MomentumField;
use crate::floquet::WalkParams;

/// Floor applied to each `ln|𝒢_k|` term, `ln(1e−15)`.
pub const LN_CLAMP: f64 = -34.538_776_394_910_684;

/// Cusps must be this many times deeper than the median `|λ''|`.
const CUSP_FACTOR: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    pub t: f64,
    pub lambda: f64,
    /// Number of momenta whose log term hit the clamp.
    pub clamped: usize,
}

impl RateSample {
    pub fn near_critical(&self) -> bool {
        self.clamped > 0
    }
}

/// `−(2/M) Σ_k ln|𝒢_k|` from moduli over a full grid, in grid order.
pub(crate) fn rate_from_moduli(t: f64, moduli: impl Iterator<Item = f64>) -> RateSample {
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut clamped = 0usize;
    for r in moduli {
        let l = r.ln();
        if l < LN_CLAMP || !l.is_finite() {
            clamped += 1;
            sum += LN_CLAMP;
        } else {
            sum += l;
        }
        count += 1;
    }
    RateSample {
        t,
        lambda: -2.0 * sum / count as f64,
        clamped,
    }
}

/// Rate function `λ(t)` of the quench `psi0 → p` on the field's grid.
pub fn rate_function(psi0: &MomentumField, p: &WalkParams, t: f64) -> RateSample {
    let psit = evolve_continuous(psi0, p, t);
    let samples = loschmidt_field(psi0, &psit).expect("same grid");
    rate_from_moduli(t, samples.iter().map(|s| s.r))
}

/// Trapezoid approximation of `−(1/π) ∫_{−π}^{π} ln|𝒢_k| dk`, closing the
/// interval with the `k = π` endpoint.
pub fn rate_function_continuum(psi0: &MomentumField, p: &WalkParams, t: f64) -> RateSample {
    let psit = evolve_continuous(psi0, p, t);
    let samples = loschmidt_field(psi0, &psit).expect("same grid");
    let h = psi0.grid.spacing();
    let mut clamped = 0usize;
    let term = |r: f64, clamped: &mut usize| {
        let l = r.ln();
        if l < LN_CLAMP || !l.is_finite() {
            *clamped += 1;
            LN_CLAMP
        } else {
            l
        }
    };
    let mut integral = 0.0;
    for (j, s) in samples.iter().enumerate() {
        let w = if j == 0 { 0.5 } else { 1.0 };
        integral += w * term(s.r, &mut clamped);
    }
    // k = π is the periodic image of k = −π.
    integral += 0.5 * term(samples[0].r, &mut clamped);
    RateSample {
        t,
        lambda: -integral * h / std::f64::consts::PI,
        clamped,
    }
}

/// Times of kinks in a uniformly sampled `λ(t)`.
///
/// A kink shows up as a sharply negative second difference; samples that are
/// local minima of `λ''` and exceed twenty times its median magnitude count.
pub fn detect_cusps(times: &[f64], lambda: &[f64]) -> Vec<f64> {
    assert_eq!(times.len(), lambda.len());
    if times.len() < 5 {
        return Vec::new();
    }
    let dt = times[1] - times[0];
    let d: Vec<f64> = lambda
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]) / (dt * dt))
        .collect();
    let mut mags: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let median = mags[mags.len() / 2];
    let threshold = (CUSP_FACTOR * median).max(1e-9);
    (1..d.len() - 1)
        .filter(|&i| d[i] < d[i - 1] && d[i] <= d[i + 1] && -d[i] >= threshold)
        .map(|i| times[i + 1])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::MomentumGrid;
    use crate::quench::{prepare_initial, InitialSpec};
    use std::f64::consts::PI;

    #[test]
    fn rate_vanishes_at_zero_and_for_stationary_states() {
        let g = MomentumGrid::new(256).unwrap();
        let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
        let psi0 = prepare_initial(&InitialSpec::flat_trivial(8.0 * PI / 9.0), g).unwrap();
        assert!(rate_function(&psi0, &p, 0.0).lambda.abs() < 1e-14);
        let band = prepare_initial(&InitialSpec::ExactLowerBand(p), g).unwrap();
        for &t in &[0.5, 3.0, 9.0] {
            assert!(rate_function(&band, &p, t).lambda.abs() < 1e-12);
        }
    }

    #[test]
    fn trapezoid_matches_grid_sum() {
        let g = MomentumGrid::new(512).unwrap();
        let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
        let psi0 = prepare_initial(&InitialSpec::flat_trivial(8.0 * PI / 9.0), g).unwrap();
        for &t in &[0.4, 2.2, 6.0] {
            let a = rate_function(&psi0, &p, t).lambda;
            let b = rate_function_continuum(&psi0, &p, t).lambda;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn clamp_flags_exact_zeros() {
        let s = rate_from_moduli(1.0, [1.0, 0.0, 1.0, 1.0].into_iter());
        assert!(s.near_critical());
        assert!((s.lambda - (-2.0 * LN_CLAMP / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn kink_is_detected() {
        let times: Vec<f64> = (0..400).map(|i| i as f64 * 0.01).collect();
        let lambda: Vec<f64> = times.iter().map(|t| 0.1 * t * t - (t - 2.005).abs()).collect();
        let cusps = detect_cusps(&times, &lambda);
        assert_eq!(cusps.len(), 1);
        assert!((cusps[0] - 2.005).abs() < 0.01);
    }

    #[test]
    fn clamp_constant() {
        assert!((LN_CLAMP - 1e-15f64.ln()).abs() < 1e-12);
    }
}
