//! Real-space walker on the infinite line with an exactly growing support
//! window, and the Fourier bridge to momentum space.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floquet::{Op, WalkParams};
use crate::grid::MomentumGrid;
use crate::quench::{evolve_stroboscopic, MomentumField};
use crate::su2::{rotation_raw, z_rotation, Spinor, Unitary2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("momentum {k:.6} carries no weight")]
    ZeroWeight { k: f64 },
}

/// `Σ_x ψ(x, μ) |x μ⟩` on sites `offset .. offset + amps.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    pub offset: i64,
    pub amps: Vec<Spinor>,
}

impl LatticeState {
    pub fn new(offset: i64, amps: Vec<Spinor>) -> Self {
        LatticeState { offset, amps }
    }

    pub fn single_site(x: i64, s: Spinor) -> Self {
        LatticeState::new(x, vec![s])
    }

    /// Positions covered by the window, including empty edge sites.
    pub fn sites(&self) -> std::ops::Range<i64> {
        self.offset..self.offset + self.amps.len() as i64
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn at(&self, x: i64) -> Spinor {
        let i = x - self.offset;
        if i < 0 || i >= self.amps.len() as i64 {
            Spinor::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            self.amps[i as usize]
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|s| s.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &LatticeState) -> Complex64 {
        let lo = self.offset.max(other.offset);
        let hi = (self.offset + self.len() as i64).min(other.offset + other.len() as i64);
        (lo..hi).map(|x| self.at(x).inner(&other.at(x))).sum()
    }

    pub fn scale(&self, c: Complex64) -> LatticeState {
        LatticeState::new(self.offset, self.amps.iter().map(|s| s.scale(c)).collect())
    }

    /// Sites whose probability is at least `tol`, as a closed range.
    pub fn occupied_range(&self, tol: f64) -> Option<(i64, i64)> {
        let occupied: Vec<i64> = self
            .sites()
            .zip(&self.amps)
            .filter(|(_, s)| s.norm_sqr() >= tol)
            .map(|(x, _)| x)
            .collect();
        Some((*occupied.first()?, *occupied.last()?))
    }

    /// Largest `|x|` with probability above `tol`.
    pub fn max_extent(&self, tol: f64) -> i64 {
        self.occupied_range(tol).map_or(0, |(a, b)| a.abs().max(b.abs()))
    }

    /// Position distribution `Σ_μ |ψ(x, μ)|²`.
    pub fn distribution(&self) -> Vec<(i64, f64)> {
        self.sites().zip(&self.amps).map(|(x, s)| (x, s.norm_sqr())).collect()
    }

    pub fn apply_sitewise(&self, u: &Unitary2) -> LatticeState {
        LatticeState::new(self.offset, self.amps.iter().map(|s| *u * *s).collect())
    }

    /// Moves the `↑` (`up = true`) or `↓` component by `delta` sites, growing
    /// the window on the side it moves into.
    fn shift_component(&self, up: bool, delta: i64) -> LatticeState {
        if delta == 0 {
            return self.clone();
        }
        let n = self.amps.len();
        let grow = delta.unsigned_abs() as usize;
        let zero = Complex64::new(0.0, 0.0);
        let mut amps = vec![Spinor::new(zero, zero); n + grow];
        let (offset, base_static, base_moving) = if delta > 0 {
            (self.offset, 0usize, grow)
        } else {
            (self.offset - grow as i64, grow, 0usize)
        };
        for (i, s) in self.amps.iter().enumerate() {
            if up {
                amps[base_moving + i].up = s.up;
                amps[base_static + i].down = s.down;
            } else {
                amps[base_moving + i].down = s.down;
                amps[base_static + i].up = s.up;
            }
        }
        LatticeState::new(offset, amps)
    }

    pub fn apply_op(&self, op: &Op) -> LatticeState {
        match *op {
            Op::Rotate(theta) => self.apply_sitewise(&rotation_raw(theta)),
            Op::ShiftUp(s) => self.shift_component(true, s),
            Op::ShiftDown(s) => self.shift_component(false, -s),
        }
    }

    /// `|ψ|` with every `↑` amplitude moved one site back.
    pub fn shift_up_back(&self) -> LatticeState {
        self.apply_op(&Op::ShiftUp(-1))
    }
}

/// One full period of the frame's operator sequence.
pub fn step(s: &LatticeState, p: &WalkParams) -> LatticeState {
    p.step_ops().iter().fold(s.clone(), |acc, op| acc.apply_op(op))
}

/// Trajectory `[init, U init, …, U^steps init]`.
pub fn run(init: &LatticeState, p: &WalkParams, steps: usize) -> Vec<LatticeState> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(init.clone());
    for _ in 0..steps {
        let next = step(out.last().expect("nonempty"), p);
        out.push(next);
    }
    out
}

/// One step per entry of `schedule`, returning only the final state.
pub fn ramp(init: &LatticeState, schedule: &[WalkParams]) -> LatticeState {
    schedule.iter().fold(init.clone(), |s, p| step(&s, p))
}

/// `ψ(k, μ) = Σ_x e^{−ikx} ψ(x, μ)`, renormalized per `k`.
pub fn to_momentum(s: &LatticeState, g: MomentumGrid) -> Result<MomentumField, LatticeError> {
    let rows: Vec<(Spinor, f64)> = (0..g.count())
        .into_par_iter()
        .map(|j| {
            let k = g.point(j);
            let mut acc = Spinor::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for (x, a) in s.sites().zip(&s.amps) {
                let ph = Complex64::from_polar(1.0, -k * x as f64);
                acc.up += ph * a.up;
                acc.down += ph * a.down;
            }
            let w = acc.norm();
            (acc, w)
        })
        .collect();
    let mut spinors = Vec::with_capacity(rows.len());
    let mut weights = Vec::with_capacity(rows.len());
    for (j, (acc, w)) in rows.into_iter().enumerate() {
        if w < 1e-12 {
            return Err(LatticeError::ZeroWeight { k: g.point(j) });
        }
        spinors.push(acc.scale(Complex64::new(1.0 / w, 0.0)));
        weights.push(w);
    }
    let mut field = MomentumField::new(g, spinors);
    field.weights = Some(weights);
    Ok(field)
}

/// `|0, ↑⟩` after one `(π, π/2)` standard step and the sitewise
/// `σ_z` rotation by `π/2`.
pub fn prep_b_state() -> LatticeState {
    let start = LatticeState::single_site(0, Spinor::up());
    let walked = step(&start, &WalkParams::standard(std::f64::consts::PI, std::f64::consts::FRAC_PI_2));
    walked.apply_sitewise(&z_rotation(std::f64::consts::FRAC_PI_2))
}

/// `1 − |⟨a|b⟩|²` for normalized states.
pub fn state_deficit(a: &LatticeState, b: &LatticeState) -> f64 {
    1.0 - a.inner(b).norm_sqr()
}

/// Largest entrywise difference between the Fourier image of the lattice
/// trajectory and the momentum-space evolution of the Fourier image of
/// `init`, over all steps and momenta.
pub fn consistency_report(
    p: &WalkParams,
    init: &LatticeState,
    steps: usize,
    grid: MomentumGrid,
) -> Result<f64, LatticeError> {
    let psi0 = to_momentum(init, grid)?;
    let traj = run(init, p, steps);
    let mut worst: f64 = 0.0;
    for (n, s) in traj.iter().enumerate() {
        let lattice = to_momentum(s, grid)?;
        let momentum = evolve_stroboscopic(&psi0, p, n);
        worst = worst.max(lattice.max_abs_diff(&momentum));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::TimeFrame;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_walk_moves_up_right() {
        let s = step(&LatticeState::single_site(0, Spinor::up()), &WalkParams::standard(0.0, 0.0));
        assert!((s.at(1).up.norm() - 1.0).abs() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        let s = step(&LatticeState::single_site(0, Spinor::down()), &WalkParams::standard(0.0, 0.0));
        assert!((s.at(-1).down.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn prep_b_sequence_output() {
        // Actual output of the gate sequence: (|0,↑⟩ − i|−1,↓⟩)/√2 up to phase.
        let s = prep_b_state();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = LatticeState::new(
            -1,
            vec![Spinor::new(c(0.0, 0.0), c(0.0, -h)), Spinor::new(c(h, 0.0), c(0.0, 0.0))],
        );
        assert!(state_deficit(&s, &expected) < 1e-12);
    }

    #[test]
    fn prep_b_fourier_image_is_flat_band_state() {
        let f = to_momentum(&prep_b_state(), MomentumGrid::new(64).unwrap()).unwrap();
        for (j, s) in f.spinors.iter().enumerate() {
            let k = f.grid.point(j);
            let target = crate::quench::flat_nontrivial_spinor(k);
            assert!((s.inner(&target).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_and_light_cone() {
        let p = WalkParams::standard(1.234, -2.1);
        let init = LatticeState::single_site(0, Spinor::down_y());
        for (t, s) in run(&init, &p, 10).iter().enumerate() {
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            assert!(s.offset >= -(t as i64));
            assert!(s.offset + s.len() as i64 - 1 <= t as i64);
        }
    }

    #[test]
    fn trajectory_lengths() {
        let p = WalkParams::standard(8.0 * PI / 9.0, -PI / 3.0);
        let init = LatticeState::single_site(0, Spinor::down_y());
        assert_eq!(run(&init, &p, 0), vec![init.clone()]);
        let traj = run(&init, &p, 10);
        assert_eq!(traj.len(), 11);
        assert!(traj[10].max_extent(0.0) <= 10);
    }

    #[test]
    fn fourier_of_single_site() {
        let f = to_momentum(&LatticeState::single_site(0, Spinor::down_y()), MomentumGrid::new(32).unwrap()).unwrap();
        assert!(f.spinors.iter().all(|s| s.max_abs_diff(&Spinor::down_y()) < 1e-15));
        assert!(f.weights.unwrap().iter().all(|w| (w - 1.0).abs() < 1e-15));
    }

    #[test]
    fn fourier_of_two_site_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = LatticeState::new(
            -1,
            vec![Spinor::new(c(h, 0.0), c(0.0, 0.0)), Spinor::new(c(0.0, 0.0), c(0.0, -h))],
        );
        let f = to_momentum(&s, MomentumGrid::new(32).unwrap()).unwrap();
        for (j, sp) in f.spinors.iter().enumerate() {
            let k = f.grid.point(j);
            let expected = Spinor::new(Complex64::from_polar(h, k), c(0.0, -h));
            assert!(sp.max_abs_diff(&expected) < 1e-14);
        }
    }

    #[test]
    fn zero_weight_is_reported() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // ↑ on sites 0 and 1 with opposite sign cancels at k = 0.
        let s = LatticeState::new(0, vec![Spinor::new(c(h, 0.0), c(0.0, 0.0)), Spinor::new(c(-h, 0.0), c(0.0, 0.0))]);
        assert!(matches!(
            to_momentum(&s, MomentumGrid::new(8).unwrap()),
            Err(LatticeError::ZeroWeight { .. })
        ));
    }

    #[test]
    fn engines_agree() {
        let init = LatticeState::single_site(0, Spinor::down_y());
        for frame in TimeFrame::ALL {
            let p = WalkParams::new(8.0 * PI / 9.0, -PI / 3.0, frame);
            assert!(consistency_report(&p, &init, 10, MomentumGrid::new(256).unwrap()).unwrap() < 1e-10);
        }
        let free = consistency_report(&WalkParams::standard(0.0, 0.0), &init, 10, MomentumGrid::new(256).unwrap());
        assert!(free.unwrap() < 1e-13);
        let p = WalkParams::standard(0.3, 2.2);
        let a = consistency_report(&p, &init, 10, MomentumGrid::new(256).unwrap()).unwrap();
        let b = consistency_report(&p, &init, 10, MomentumGrid::new(1024).unwrap()).unwrap();
        assert!(a < 1e-10 && b < 1e-10);
    }
}
