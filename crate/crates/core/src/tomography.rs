//! Sitewise projective count sets and maximum-likelihood reconstruction of
//! a lattice wave function by simulated annealing.
//!
//! Two families of settings are recorded. The direct family measures each
//! site's coin in four projectors; the shifted family first moves every `↑`
//! amplitude one site back, so the same projectors also fix the phase
//! between `ψ(x+1, ↑)` and `ψ(x, ↓)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::LatticeState;
use crate::su2::Spinor;

const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TomographyError {
    #[error("annealing stalled {excess:.3e} per shot above the likelihood floor")]
    NonConvergence {
        excess: f64,
        best: Box<Reconstruction>,
    },
    #[error("{0}")]
    BadInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Direct,
    Shifted,
}

/// The four coin projectors used at every site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementModel {
    pub projectors: [Spinor; 4],
}

impl Default for MeasurementModel {
    fn default() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        MeasurementModel {
            projectors: [
                Spinor::up(),
                Spinor::down(),
                Spinor::new(h, h),
                Spinor::new(h, Complex64::new(0.0, FRAC_1_SQRT_2)),
            ],
        }
    }
}

impl MeasurementModel {
    /// Click probabilities `|⟨π_j|ψ(x)⟩|²` per site of `sites` and projector.
    pub fn probabilities(&self, state: &LatticeState, family: Family, sites: Range<i64>) -> Vec<[f64; 4]> {
        let measured = match family {
            Family::Direct => state.clone(),
            Family::Shifted => state.shift_up_back(),
        };
        sites
            .map(|x| {
                let s = measured.at(x);
                let mut row = [0.0; 4];
                for (r, pj) in row.iter_mut().zip(&self.projectors) {
                    *r = pj.inner(&s).norm_sqr();
                }
                row
            })
            .collect()
    }
}

/// Click tallies per (site, projector) for both families.
///
/// Each setting is repeated `shots` times; clicks plus misses equal
/// `shots`. In exact mode tallies are the probabilities and `shots = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSets {
    pub offset: i64,
    pub shots: f64,
    pub exact: bool,
    pub direct: Vec<[f64; 4]>,
    pub shifted: Vec<[f64; 4]>,
    pub model: MeasurementModel,
}

impl CountSets {
    pub fn sites(&self) -> Range<i64> {
        self.offset..self.offset + self.direct.len() as i64
    }

    /// Settings per family, `4 × sites`.
    pub fn settings_per_family(&self) -> usize {
        4 * self.direct.len()
    }

    fn tallies(&self) -> impl Iterator<Item = f64> + '_ {
        self.direct.iter().chain(&self.shifted).flat_map(|r| r.iter().copied())
    }

    /// Likelihood floor: the objective of the empirical frequencies.
    pub fn objective_floor(&self) -> f64 {
        self.tallies()
            .map(|n| binary_nll(n, self.shots, n / self.shots, false))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.shots * 2.0 * self.settings_per_family() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Shots {
    Exact,
    Finite(u64),
}

pub fn synthesize_counts(truth: &LatticeState, shots: Shots, seed: u64) -> CountSets {
    let model = MeasurementModel::default();
    let sites = truth.sites();
    let direct = model.probabilities(truth, Family::Direct, sites.clone());
    let shifted = model.probabilities(truth, Family::Shifted, sites);
    let (direct, shifted, n, exact) = match shots {
        Shots::Exact => (direct, shifted, 1.0, true),
        Shots::Finite(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sample = |rows: Vec<[f64; 4]>| -> Vec<[f64; 4]> {
                rows.into_iter()
                    .map(|row| {
                        row.map(|p| {
                            Binomial::new(n, p.clamp(0.0, 1.0))
                                .expect("valid probability")
                                .sample(&mut rng) as f64
                        })
                    })
                    .collect()
            };
            let d = sample(direct);
            let s = sample(shifted);
            (d, s, n as f64, false)
        }
    };
    CountSets {
        offset: truth.offset,
        shots: n,
        exact,
        direct,
        shifted,
        model,
    }
}

fn binary_nll(clicks: f64, shots: f64, p: f64, floor: bool) -> f64 {
    let misses = shots - clicks;
    let term = |n: f64, q: f64| {
        if n <= 0.0 {
            0.0
        } else {
            let q = if floor { q.max(PROB_FLOOR) } else { q };
            -n * q.ln()
        }
    };
    term(clicks, p) + term(misses, 1.0 - p)
}

/// Negative log-likelihood of both count sets; the candidate is normalized
/// internally.
pub fn negative_log_likelihood(candidate: &LatticeState, counts: &CountSets) -> f64 {
    let norm = candidate.norm_sqr();
    let sites = counts.sites();
    let d = counts.model.probabilities(candidate, Family::Direct, sites.clone());
    let s = counts.model.probabilities(candidate, Family::Shifted, sites);
    d.iter()
        .zip(&counts.direct)
        .chain(s.iter().zip(&counts.shifted))
        .flat_map(|(pr, tr)| pr.iter().zip(tr.iter()))
        .map(|(&p, &n)| binary_nll(n, counts.shots, (p / norm).min(1.0), true))
        .sum()
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &LatticeState, b: &LatticeState) -> f64 {
    a.inner(b).norm_sqr().min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    /// Starting temperature; taken from the objective spread of random
    /// candidates when `None`.
    pub initial_temperature: Option<f64>,
    pub cooling: f64,
    pub sweeps: usize,
    pub amplitude_scale: f64,
    pub phase_scale: f64,
    pub seed: u64,
    /// Independent chains; the lowest objective wins, earlier chains on ties.
    pub chains: usize,
    /// Allowed objective excess over the floor, per unit of tally weight.
    /// Sampled counts get an extra `2.5 × free parameters / weight`, about
    /// five times the excess expected from shot noise alone.
    pub margin: f64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            initial_temperature: None,
            cooling: 0.97,
            sweeps: 400,
            amplitude_scale: 0.1,
            phase_scale: 1.0,
            seed: 0,
            chains: 4,
            margin: 1e-6,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<(), TomographyError> {
        if !(self.cooling > 0.0 && self.cooling < 1.0) || self.sweeps == 0 || self.chains == 0 {
            return Err(TomographyError::BadInput(
                "cooling must lie in (0, 1) and sweeps, chains must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub state: LatticeState,
    pub objective: f64,
    pub floor: f64,
    pub accepted: usize,
    pub proposed: usize,
    pub chain: usize,
    pub initial_temperature: f64,
}

impl Reconstruction {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposed.max(1) as f64
    }
}

/// Amplitude and phase per (site, spin); index `2i` is `↑`, `2i + 1` is `↓`.
#[derive(Debug, Clone)]
struct Params {
    offset: i64,
    amp: Vec<f64>,
    phase: Vec<f64>,
    /// Component whose phase stays pinned at zero.
    pinned: usize,
}

impl Params {
    fn state(&self) -> LatticeState {
        let amps = (0..self.amp.len() / 2)
            .map(|i| {
                Spinor::new(
                    Complex64::from_polar(self.amp[2 * i], self.phase[2 * i]),
                    Complex64::from_polar(self.amp[2 * i + 1], self.phase[2 * i + 1]),
                )
            })
            .collect();
        LatticeState::new(self.offset, amps)
    }
}

/// Same value as [`negative_log_likelihood`] on `p.state()`, without
/// building the lattice state.
fn params_nll(p: &Params, counts: &CountSets) -> f64 {
    let comps: Vec<Complex64> = p
        .amp
        .iter()
        .zip(&p.phase)
        .map(|(&r, &ph)| Complex64::from_polar(r, ph))
        .collect();
    let norm: f64 = p.amp.iter().map(|r| r * r).sum();
    let zero = Complex64::new(0.0, 0.0);
    let get = |x: i64, spin: usize| {
        let i = x - p.offset;
        if i >= 0 && (2 * i as usize) < comps.len() {
            comps[2 * i as usize + spin]
        } else {
            zero
        }
    };
    let mut total = 0.0;
    for (x, (d, sh)) in counts.sites().zip(counts.direct.iter().zip(&counts.shifted)) {
        for (pair, tally) in [((get(x, 0), get(x, 1)), d), ((get(x + 1, 0), get(x, 1)), sh)] {
            for (pj, &n) in counts.model.projectors.iter().zip(tally.iter()) {
                let amp = pj.up.conj() * pair.0 + pj.down.conj() * pair.1;
                total += binary_nll(n, counts.shots, (amp.norm_sqr() / norm).min(1.0), true);
            }
        }
    }
    total
}

/// Normalizes `s` and makes its largest component real and positive.
pub fn canonical_gauge(s: &LatticeState) -> LatticeState {
    let n = s.norm_sqr().sqrt();
    let (mut best, mut pick) = (-1.0, Complex64::new(1.0, 0.0));
    for a in &s.amps {
        for c in [a.up, a.down] {
            if c.norm() > best + 1e-12 {
                best = c.norm();
                pick = c;
            }
        }
    }
    let phase = if best > 0.0 { pick.conj() / pick.norm() } else { Complex64::new(1.0, 0.0) };
    s.scale(phase / n)
}

fn initial_params(counts: &CountSets, support: &Range<i64>, rng: &mut ChaCha8Rng) -> Params {
    let mut amp = Vec::new();
    for x in support.clone() {
        let i = x - counts.offset;
        let row = if i >= 0 && (i as usize) < counts.direct.len() {
            counts.direct[i as usize]
        } else {
            [0.0; 4]
        };
        amp.push((row[0] / counts.shots).max(0.0).sqrt());
        amp.push((row[1] / counts.shots).max(0.0).sqrt());
    }
    let pinned = amp
        .iter()
        .enumerate()
        .fold((0, -1.0), |(bi, bv), (i, &v)| if v > bv + 1e-12 { (i, v) } else { (bi, bv) })
        .0;
    let phase = (0..amp.len())
        .map(|i| if i == pinned { 0.0 } else { rng.random_range(-PI..PI) })
        .collect();
    Params {
        offset: support.start,
        amp,
        phase,
        pinned,
    }
}

fn run_chain(
    counts: &CountSets,
    support: &Range<i64>,
    cfg: &AnnealConfig,
    chain: usize,
) -> Reconstruction {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(chain as u64));
    let mut cur = initial_params(counts, support, &mut rng);
    let objective = |p: &Params| params_nll(p, counts);

    let t0 = cfg.initial_temperature.unwrap_or_else(|| {
        let samples: Vec<f64> = (0..50)
            .map(|_| {
                let mut p = cur.clone();
                for (i, ph) in p.phase.iter_mut().enumerate() {
                    if i != p.pinned {
                        *ph = rng.random_range(-PI..PI);
                    }
                }
                objective(&p)
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / samples.len() as f64;
        var.sqrt().max(1e-6)
    });

    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut f_cur = objective(&cur);
    let mut best = (cur.clone(), f_cur);
    let (mut accepted, mut proposed) = (0usize, 0usize);
    let mut temp = t0;
    let n = cur.amp.len();
    // Proposal widths adapt toward a moderate acceptance rate as the
    // temperature drops; index 0 is amplitude, 1 is phase.
    let mut width = [cfg.amplitude_scale, cfg.phase_scale];
    for _ in 0..cfg.sweeps {
        let mut sweep = [[0usize; 2]; 2];
        for i in 0..2 * n {
            let kind = usize::from(i >= n);
            let mut next = cur.clone();
            let step = width[kind] * unit.sample(&mut rng);
            if kind == 0 {
                next.amp[i] = (next.amp[i] + step).abs();
            } else {
                let j = i - n;
                if j == cur.pinned {
                    continue;
                }
                next.phase[j] = crate::grid::wrap_phase(next.phase[j] + step);
            }
            proposed += 1;
            sweep[kind][1] += 1;
            let f_next = objective(&next);
            let delta = f_next - f_cur;
            if delta <= 0.0 || rng.random::<f64>() < (-delta / temp).exp() {
                cur = next;
                f_cur = f_next;
                accepted += 1;
                sweep[kind][0] += 1;
                if f_cur < best.1 {
                    best = (cur.clone(), f_cur);
                }
            }
        }
        for (kind, [acc, tot]) in sweep.into_iter().enumerate() {
            let cap = [cfg.amplitude_scale, cfg.phase_scale][kind];
            let rate = acc as f64 / tot.max(1) as f64;
            if rate > 0.5 {
                width[kind] = (width[kind] * 1.25).min(cap);
            } else if rate < 0.3 {
                width[kind] = (width[kind] * 0.8).max(1e-12);
            }
        }
        temp *= cfg.cooling;
    }

    let (polished, f_best) = polish(best.0, best.1, objective);

    Reconstruction {
        state: canonical_gauge(&polished.state()),
        objective: f_best,
        floor: counts.objective_floor(),
        accepted,
        proposed,
        chain,
        initial_temperature: t0,
    }
}

/// Hooke-Jeeves pattern search run after annealing.
fn polish(p: Params, f: f64, objective: impl Fn(&Params) -> f64) -> (Params, f64) {
    let n = p.amp.len();
    let eps = |f: f64| 1e-13 * (1.0 + f.abs());
    let explore = |mut q: Params, mut fq: f64, step: f64| {
        for i in 0..2 * n {
            if i >= n && i - n == q.pinned {
                continue;
            }
            for dir in [1.0, -1.0] {
                let mut t = q.clone();
                if i < n {
                    t.amp[i] = (t.amp[i] + dir * step).abs();
                } else {
                    t.phase[i - n] += dir * step;
                }
                let ft = objective(&t);
                if ft < fq - eps(fq) {
                    q = t;
                    fq = ft;
                    break;
                }
            }
        }
        (q, fq)
    };
    let (mut base, mut fb) = (p, f);
    let mut step = 1e-2;
    let mut rounds = 0;
    while step > 1e-9 && rounds < 2000 {
        rounds += 1;
        let (x, fx) = explore(base.clone(), fb, step);
        if fx < fb - eps(fb) {
            // Keep stepping along x - base while that pays off.
            let (mut prev, mut cur, mut fc) = (base, x, fx);
            loop {
                let mut jump = cur.clone();
                for i in 0..n {
                    jump.amp[i] = (2.0 * cur.amp[i] - prev.amp[i]).abs();
                    jump.phase[i] = 2.0 * cur.phase[i] - prev.phase[i];
                }
                let fj = objective(&jump);
                let (y, fy) = explore(jump, fj, step);
                if fy < fc - eps(fc) {
                    prev = cur;
                    cur = y;
                    fc = fy;
                } else {
                    break;
                }
            }
            base = cur;
            fb = fc;
        } else {
            step *= 0.5;
        }
    }
    (base, fb)
}

/// Best-likelihood state on `support` for the given count sets.
pub fn reconstruct(
    counts: &CountSets,
    support: Range<i64>,
    cfg: &AnnealConfig,
) -> Result<Reconstruction, TomographyError> {
    cfg.validate()?;
    if support.is_empty() {
        return Err(TomographyError::BadInput("empty reconstruction support".into()));
    }
    let covered = counts.sites();
    let outside = covered
        .clone()
        .zip(&counts.direct)
        .any(|(x, row)| !support.contains(&x) && row.iter().any(|&n| n > 0.0));
    if outside {
        return Err(TomographyError::BadInput("support misses sites with counts".into()));
    }
    let results: Vec<Reconstruction> = (0..cfg.chains)
        .into_par_iter()
        .map(|c| run_chain(counts, &support, cfg, c))
        .collect();
    let best = results
        .into_iter()
        .reduce(|a, b| if b.objective < a.objective { b } else { a })
        .expect("at least one chain");
    let weight = counts.total_weight();
    let excess = (best.objective - best.floor) / weight;
    let noise = if counts.exact {
        0.0
    } else {
        2.5 * (4 * (support.end - support.start) - 1) as f64 / weight
    };
    if excess > cfg.margin + noise {
        return Err(TomographyError::NonConvergence {
            excess,
            best: Box::new(best),
        });
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::WalkParams;
    use crate::lattice::run;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_site() -> LatticeState {
        // ψ(0, ↑) and ψ(−1, ↓) are tied together by the shifted family.
        LatticeState::new(-1, vec![Spinor::new(c(0.0, 0.0), c(0.6, 0.0)), Spinor::new(c(0.0, -0.8), c(0.0, 0.0))])
    }

    #[test]
    fn single_up_exact_counts() {
        let counts = synthesize_counts(&LatticeState::single_site(0, Spinor::up()), Shots::Exact, 0);
        for (got, want) in counts.direct[0].iter().zip([1.0, 0.0, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(counts.settings_per_family(), 4);
    }

    #[test]
    fn shifted_circular_tally_sees_relative_phase() {
        let h = FRAC_1_SQRT_2;
        let s = LatticeState::new(-1, vec![Spinor::new(c(0.0, 0.0), c(h, 0.0)), Spinor::new(c(0.0, -h), c(0.0, 0.0))]);
        let counts = synthesize_counts(&s, Shots::Exact, 0);
        // ψ̃(−1) = (−i h, h): |⟨(1, i)/√2|ψ̃⟩|² = |(−i h − i h)/√2|² = 1.
        assert!((counts.shifted[0][3] - 1.0).abs() < 1e-12);
        assert!((counts.shifted[0][2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn tallies_bounded_by_shots() {
        let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
        let truth = run(&LatticeState::single_site(0, Spinor::down_y()), &p, 3).pop().unwrap();
        let counts = synthesize_counts(&truth, Shots::Finite(1000), 7);
        assert!(counts.tallies().all(|n| (0.0..=1000.0).contains(&n) && n.fract() == 0.0));
        assert_eq!(counts, synthesize_counts(&truth, Shots::Finite(1000), 7));
        assert_eq!(counts.settings_per_family(), 4 * truth.len());
    }

    #[test]
    fn likelihood_is_phase_invariant_and_minimal_at_truth() {
        let truth = two_site();
        let counts = synthesize_counts(&truth, Shots::Exact, 0);
        let f0 = negative_log_likelihood(&truth, &counts);
        let rotated = truth.scale(Complex64::from_polar(1.0, 0.7));
        assert!((negative_log_likelihood(&rotated, &counts) - f0).abs() < 1e-12);
        assert!((f0 - counts.objective_floor()).abs() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let amps = (0..2)
                .map(|_| {
                    Spinor::new(
                        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    )
                })
                .collect();
            let cand = canonical_gauge(&LatticeState::new(-1, amps));
            assert!(negative_log_likelihood(&cand, &counts) >= f0 - 1e-12);
        }
    }

    #[test]
    fn relative_phase_between_sites_is_identified() {
        let truth = two_site();
        let counts = synthesize_counts(&truth, Shots::Exact, 0);
        let f0 = negative_log_likelihood(&truth, &counts);
        for i in 1..40 {
            let err = -PI + 2.0 * PI * i as f64 / 40.0;
            if err.abs() < 1e-9 {
                continue;
            }
            let mut cand = truth.clone();
            cand.amps[1].up *= Complex64::from_polar(1.0, err);
            assert!(negative_log_likelihood(&cand, &counts) > f0 + 1e-3 * err * err);
        }
    }

    #[test]
    fn flat_objective_matches_lattice_objective() {
        let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
        let truth = run(&LatticeState::single_site(0, Spinor::down_y()), &p, 3).pop().unwrap();
        let counts = synthesize_counts(&truth, Shots::Finite(500), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let support = -4..5;
        let mut params = initial_params(&counts, &support, &mut rng);
        params.amp[3] = 0.2;
        let a = params_nll(&params, &counts);
        let b = negative_log_likelihood(&params.state(), &counts);
        assert!((a - b).abs() < 1e-9 * b.abs());
    }

    #[test]
    fn fidelity_properties() {
        let a = two_site();
        assert!((fidelity(&a, &a) - 1.0).abs() < 1e-15);
        let up = LatticeState::single_site(0, Spinor::up());
        let down = LatticeState::single_site(0, Spinor::down());
        assert_eq!(fidelity(&up, &down), 0.0);
        let ph = Complex64::from_polar(1.0, 1.1);
        assert!((fidelity(&a.scale(ph), &a.scale(ph)) - fidelity(&a, &a)).abs() < 1e-15);
    }

    #[test]
    fn single_site_recovery() {
        let truth = LatticeState::single_site(0, Spinor::down_y());
        let counts = synthesize_counts(&truth, Shots::Exact, 0);
        let rec = reconstruct(&counts, truth.sites(), &AnnealConfig::default()).unwrap();
        assert!(1.0 - fidelity(&truth, &rec.state) < 1e-6);
    }

    #[test]
    fn reconstruction_is_reproducible() {
        let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
        let truth = run(&LatticeState::single_site(0, Spinor::down_y()), &p, 2).pop().unwrap();
        let counts = synthesize_counts(&truth, Shots::Exact, 0);
        let cfg = AnnealConfig { seed: 11, ..AnnealConfig::default() };
        let a = reconstruct(&counts, truth.sites(), &cfg).unwrap();
        let b = reconstruct(&counts, truth.sites(), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn starved_annealing_reports_nonconvergence() {
        let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
        let truth = run(&LatticeState::single_site(0, Spinor::down_y()), &p, 4).pop().unwrap();
        let counts = synthesize_counts(&truth, Shots::Exact, 0);
        let cfg = AnnealConfig { sweeps: 1, chains: 1, ..AnnealConfig::default() };
        // A single sweep may or may not be enough; either outcome must be
        // honest about the fit.
        match reconstruct(&counts, truth.sites(), &cfg) {
            Err(TomographyError::NonConvergence { excess, best }) => {
                assert!(excess > cfg.margin);
                assert_eq!(best.state.len(), truth.len());
            }
            Ok(rec) => assert!(fidelity(&truth, &rec.state) > 0.999),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn bad_config_is_rejected() {
        let counts = synthesize_counts(&two_site(), Shots::Exact, 0);
        let cfg = AnnealConfig { cooling: 1.0, ..AnnealConfig::default() };
        assert!(reconstruct(&counts, -1..1, &cfg).is_err());
        assert!(reconstruct(&counts, 0..1, &AnnealConfig::default()).is_err());
    }
}
