use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evolve::overlap_at;
use super::{InitialSpec, QuenchError};
use crate::floquet::{floquet_mode, WalkParams};

const BRACKET_POINTS: usize = 4096;
const BISECTION_TOL: f64 = 1e-10;

/// One critical momentum and the times at which `𝒢_{k*}(t)` vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalFamily {
    pub k: f64,
    pub epsilon: f64,
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CriticalStructure {
    pub families: Vec<CriticalFamily>,
}

impl CriticalStructure {
    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn momenta(&self) -> Vec<f64> {
        self.families.iter().map(|f| f.k).collect()
    }

    /// All critical times, ascending.
    pub fn times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.families.iter().flat_map(|f| f.times.iter().copied()).collect();
        t.sort_by(f64::total_cmp);
        t
    }

    /// Distance from `t` to the nearest critical time.
    pub fn distance_to(&self, t: f64) -> f64 {
        self.times()
            .iter()
            .map(|tn| (tn - t).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

fn excess_population(spec: &InitialSpec, p: &WalkParams, k: f64) -> f64 {
    overlap_at(k, &spec.spinor_at(k), &floquet_mode(p, k)).e_amp2 - 0.5
}

/// Momenta in `(0, π)` with `|e_k|² = ½` and their critical times
/// `t_n = (π/ε)(n + ½) ≤ horizon`.
pub fn critical_structure(
    spec: &InitialSpec,
    p: &WalkParams,
    horizon: f64,
) -> Result<CriticalStructure, QuenchError> {
    spec.validate()?;
    let gap = p.spectral_gap();
    if gap < crate::topology::GAP_TOL {
        return Err(QuenchError::Gapless { gap });
    }
    let ks: Vec<f64> = (1..BRACKET_POINTS).map(|j| PI * j as f64 / BRACKET_POINTS as f64).collect();
    let f: Vec<f64> = ks.par_iter().map(|&k| excess_population(spec, p, k)).collect();

    let mut roots = Vec::new();
    for j in 0..ks.len() {
        if f[j] == 0.0 {
            roots.push(ks[j]);
        } else if j + 1 < ks.len() && f[j] * f[j + 1] < 0.0 {
            let (mut lo, mut hi, mut flo) = (ks[j], ks[j + 1], f[j]);
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                let fm = excess_population(spec, p, mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }

    let families = roots
        .into_iter()
        .map(|k| {
            let epsilon = floquet_mode(p, k).epsilon;
            let times = (0..)
                .map(|n| PI / epsilon * (n as f64 + 0.5))
                .take_while(|&t| t <= horizon)
                .collect();
            CriticalFamily { k, epsilon, times }
        })
        .collect();
    Ok(CriticalStructure { families })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseFit {
    pub amplitude: f64,
    pub omega: f64,
    pub rms_residual: f64,
}

/// Least-squares fit of `Im 𝒢_k(t)` to `A sin(ωt)` with `ω ∈ (0, π]`.
pub fn fit_dynamical_phase(times: &[f64], g: &[Complex64]) -> Result<PhaseFit, QuenchError> {
    if times.len() != g.len() || times.len() < 6 {
        return Err(QuenchError::BadInput("fit needs at least 6 paired samples".into()));
    }
    let y: Vec<f64> = g.iter().map(|z| z.im).collect();
    let scale = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale < 1e-9 {
        return Err(QuenchError::FitDegenerate { amplitude: scale });
    }

    // Best amplitude for fixed ω and the remaining squared error.
    let solve = |omega: f64| {
        let (mut sy, mut ss) = (0.0, 0.0);
        for (&t, &v) in times.iter().zip(&y) {
            let s = (omega * t).sin();
            sy += s * v;
            ss += s * s;
        }
        let a = if ss > 0.0 { sy / ss } else { 0.0 };
        let sse: f64 = times
            .iter()
            .zip(&y)
            .map(|(&t, &v)| (v - a * (omega * t).sin()).powi(2))
            .sum();
        (a, sse)
    };

    let scan = 4000;
    let omegas: Vec<f64> = (1..=scan).map(|i| PI * i as f64 / scan as f64).collect();
    let best = omegas
        .iter()
        .enumerate()
        .min_by(|a, b| solve(*a.1).1.total_cmp(&solve(*b.1).1))
        .map(|(i, _)| i)
        .expect("nonempty scan");

    let mut lo = omegas[best.saturating_sub(1)];
    let mut hi = omegas[(best + 1).min(scan - 1)];
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (solve(x1).1, solve(x2).1);
    while hi - lo > 1e-13 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = solve(x1).1;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = solve(x2).1;
        }
    }
    let omega = 0.5 * (lo + hi);
    let (amplitude, sse) = solve(omega);
    Ok(PhaseFit {
        amplitude,
        omega,
        rms_residual: (sse / times.len() as f64).sqrt(),
    })
}
