//! Momentum-space walk operators for each time frame and the Floquet band
//! structure `H_F(k) = ε(k) n(k)·σ` extracted from them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::{Angle, MomentumGrid};
use crate::su2::{
    make_rotation, make_shift_down, make_shift_up, rotation_raw, su2_decompose, BlochVector,
    Su2Decomposition, Unitary2,
};

/// Where the stroboscopic period starts inside the four-operation cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TimeFrame {
    /// `T↓ R(θ2) T↑ R(θ1)`.
    Standard,
    /// Operator string of `Standard` rotated left by one factor.
    Shift1,
    Shift2,
    Shift3,
    /// `R(θ1/2) T↓ R(θ2) T↑ R(θ1/2)`.
    SymmetricA,
    /// `R(θ2/2) T↑ R(θ1) T↓ R(θ2/2)`.
    SymmetricB,
}

impl TimeFrame {
    pub const ALL: [TimeFrame; 6] = [
        TimeFrame::Standard,
        TimeFrame::Shift1,
        TimeFrame::Shift2,
        TimeFrame::Shift3,
        TimeFrame::SymmetricA,
        TimeFrame::SymmetricB,
    ];

    pub fn is_symmetric(self) -> bool {
        matches!(self, TimeFrame::SymmetricA | TimeFrame::SymmetricB)
    }

    pub fn name(self) -> &'static str {
        match self {
            TimeFrame::Standard => "standard",
            TimeFrame::Shift1 => "shift1",
            TimeFrame::Shift2 => "shift2",
            TimeFrame::Shift3 => "shift3",
            TimeFrame::SymmetricA => "symmetric-a",
            TimeFrame::SymmetricB => "symmetric-b",
        }
    }
}

impl fmt::Display for TimeFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TimeFrame {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        TimeFrame::ALL
            .into_iter()
            .find(|f| f.name() == norm || f.name().replace('-', "") == norm)
            .ok_or_else(|| format!("unknown time frame `{s}`"))
    }
}

/// One elementary sub-operation of a walk step, in real or momentum space.
///
/// Shifts carry a signed step count so that inverse shifts (needed by the
/// frame conjugators) are representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    /// Coin rotation `exp(−iθσ_y/2)` by a raw (non-canonicalized) angle.
    Rotate(f64),
    /// `↑` component moves from `x` to `x + s`.
    ShiftUp(i64),
    /// `↓` component moves from `x` to `x − s`.
    ShiftDown(i64),
}

impl Op {
    pub fn matrix(&self, k: f64) -> Unitary2 {
        match *self {
            Op::Rotate(theta) => rotation_raw(theta),
            Op::ShiftUp(s) => make_shift_up(k * s as f64),
            Op::ShiftDown(s) => make_shift_down(k * s as f64),
        }
    }

    pub fn inverse(&self) -> Op {
        match *self {
            Op::Rotate(theta) => Op::Rotate(-theta),
            Op::ShiftUp(s) => Op::ShiftUp(-s),
            Op::ShiftDown(s) => Op::ShiftDown(-s),
        }
    }
}

/// Product of ops given in application (time) order.
pub fn ops_matrix(ops: &[Op], k: f64) -> Unitary2 {
    ops.iter()
        .fold(Unitary2::identity(), |acc, op| op.matrix(k) * acc)
}

/// Coin angles and time frame identifying one Floquet system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub theta1: Angle,
    pub theta2: Angle,
    pub frame: TimeFrame,
}

impl WalkParams {
    pub fn new(theta1: impl Into<Angle>, theta2: impl Into<Angle>, frame: TimeFrame) -> Self {
        WalkParams {
            theta1: theta1.into(),
            theta2: theta2.into(),
            frame,
        }
    }

    pub fn standard(theta1: impl Into<Angle>, theta2: impl Into<Angle>) -> Self {
        WalkParams::new(theta1, theta2, TimeFrame::Standard)
    }

    pub fn with_frame(&self, frame: TimeFrame) -> Self {
        WalkParams { frame, ..*self }
    }

    /// Sub-operations of one period in the order they act on the state.
    pub fn step_ops(&self) -> Vec<Op> {
        let t1 = self.theta1.radians();
        let t2 = self.theta2.radians();
        let (r1, r2, up, down) = (Op::Rotate(t1), Op::Rotate(t2), Op::ShiftUp(1), Op::ShiftDown(1));
        match self.frame {
            TimeFrame::Standard => vec![r1, up, r2, down],
            TimeFrame::Shift1 => vec![down, r1, up, r2],
            TimeFrame::Shift2 => vec![r2, down, r1, up],
            TimeFrame::Shift3 => vec![up, r2, down, r1],
            TimeFrame::SymmetricA => vec![Op::Rotate(t1 / 2.0), up, r2, down, Op::Rotate(t1 / 2.0)],
            TimeFrame::SymmetricB => vec![Op::Rotate(t2 / 2.0), down, r1, up, Op::Rotate(t2 / 2.0)],
        }
    }

    /// Ops of `P` (time order) with `U_frame(k) = P(k) U_standard(k) P(k)†`.
    ///
    /// Band eigenstates of the standard frame map to those of this frame
    /// under `P`.
    pub fn frame_conjugator(&self) -> Vec<Op> {
        let t1 = self.theta1.radians();
        let t2 = self.theta2.radians();
        let down_inv = Op::ShiftDown(-1);
        match self.frame {
            TimeFrame::Standard => vec![],
            TimeFrame::Shift1 => vec![down_inv],
            TimeFrame::Shift2 => vec![down_inv, Op::Rotate(-t2)],
            TimeFrame::Shift3 => vec![down_inv, Op::Rotate(-t2), Op::ShiftUp(-1)],
            TimeFrame::SymmetricA => vec![Op::Rotate(t1 / 2.0)],
            TimeFrame::SymmetricB => vec![down_inv, Op::Rotate(-t2 / 2.0)],
        }
    }

    /// Linear interpolation of the raw angles, keeping this frame.
    pub fn lerp(&self, other: &WalkParams, s: f64) -> WalkParams {
        let a1 = self.theta1.radians();
        let a2 = self.theta2.radians();
        WalkParams {
            theta1: Angle::new(a1 + (other.theta1.radians() - a1) * s),
            theta2: Angle::new(a2 + (other.theta2.radians() - a2) * s),
            frame: self.frame,
        }
    }

    /// Smallest distance of the quasienergy from `0` or `π` over the zone.
    ///
    /// `cos ε(k)` is affine in `cos k` for every frame, so the extremes sit
    /// at `k = 0` and `k = π`.
    pub fn spectral_gap(&self) -> f64 {
        [0.0, PI]
            .into_iter()
            .map(|k| {
                let e = quasienergy(self, k);
                e.min(PI - e)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for WalkParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(θ1={:.6}, θ2={:.6}, {})",
            self.theta1.radians(),
            self.theta2.radians(),
            self.frame
        )
    }
}

/// The one-period walk operator at momentum `k`.
pub fn walk_unitary(p: &WalkParams, k: f64) -> Unitary2 {
    match p.frame {
        // Fast path for the common frame.
        TimeFrame::Standard => {
            make_shift_down(k)
                * make_rotation(p.theta2)
                * make_shift_up(k)
                * make_rotation(p.theta1)
        }
        _ => ops_matrix(&p.step_ops(), k),
    }
}

/// Closed form `cos ε(k) = cos(θ1/2)cos(θ2/2)cos k − sin(θ1/2)sin(θ2/2)`.
pub fn quasienergy_trace_identity(p: &WalkParams, k: f64) -> f64 {
    p.theta1.half_cos() * p.theta2.half_cos() * k.cos() - p.theta1.half_sin() * p.theta2.half_sin()
}

fn quasienergy(p: &WalkParams, k: f64) -> f64 {
    quasienergy_trace_identity(p, k).clamp(-1.0, 1.0).acos()
}

/// Quasienergy `ε ∈ [0, π]` and axis `n` of the upper band at one momentum.
pub type FloquetMode = Su2Decomposition;

pub fn floquet_mode(p: &WalkParams, k: f64) -> FloquetMode {
    su2_decompose(&walk_unitary(p, k)).expect("walk unitaries lie in SU(2)")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandStructure {
    pub grid: MomentumGrid,
    pub modes: Vec<FloquetMode>,
}

impl BandStructure {
    pub fn momenta(&self) -> Vec<f64> {
        self.grid.points().collect()
    }

    pub fn min_gap(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| m.epsilon.min(PI - m.epsilon))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn band_structure(p: &WalkParams, grid: MomentumGrid) -> BandStructure {
    let modes = (0..grid.count())
        .into_par_iter()
        .map(|j| floquet_mode(p, grid.point(j)))
        .collect();
    BandStructure { grid, modes }
}

/// Angle test for a `k`-independent quasienergy: `θ1 ≡ π` or `θ2 ≡ π`.
pub fn is_flat_band(p: &WalkParams) -> bool {
    p.theta1.is_pi() || p.theta2.is_pi()
}

/// Variance of `ε(k)` over an `m`-point grid; the numerical flat-band test.
pub fn quasienergy_variance(p: &WalkParams, m: usize) -> f64 {
    let grid = MomentumGrid::new(m).expect("even grid");
    let eps: Vec<f64> = grid.points().map(|k| floquet_mode(p, k).epsilon).collect();
    let mean = eps.iter().sum::<f64>() / m as f64;
    eps.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / m as f64
}

/// Axis `n(k)` of the lower/upper band pair, `None` on degenerate points.
pub fn bloch_axis(p: &WalkParams, k: f64) -> Option<BlochVector> {
    floquet_mode(p, k).direction().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn p(t1: f64, t2: f64) -> WalkParams {
        WalkParams::standard(t1, t2)
    }

    #[test]
    fn trivial_angles_give_pure_shift() {
        for &k in &[-2.0, 0.3, 1.7] {
            let u = walk_unitary(&p(0.0, 0.0), k);
            let expected = Unitary2::diag(Complex64::from_polar(1.0, -k), Complex64::from_polar(1.0, k));
            assert!(u.max_abs_diff(&expected) < 1e-14);
        }
    }

    #[test]
    fn flat_band_unitary_is_k_independent() {
        let s1 = (4.0 * PI / 9.0).sin();
        let c1 = (4.0 * PI / 9.0).cos();
        let expected = Unitary2::new([
            [Complex64::new(-s1, 0.0), Complex64::new(-c1, 0.0)],
            [Complex64::new(c1, 0.0), Complex64::new(-s1, 0.0)],
        ]);
        let params = p(8.0 * PI / 9.0, PI);
        for i in 0..100 {
            let k = -PI + 2.0 * PI * (i as f64 * 0.618_033_988_7).fract();
            assert!(walk_unitary(&params, k).max_abs_diff(&expected) < 1e-14);
            let m = floquet_mode(&params, k);
            assert!((m.epsilon - (-s1).acos()).abs() < 1e-12);
            assert!((m.epsilon - 2.9671).abs() < 1e-4);
            assert!(m.n.sub(&BlochVector::Y).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_at_zero_momentum() {
        let params = p(8.0 * PI / 9.0, -PI / 3.0);
        let tr = walk_unitary(&params, 0.0).trace();
        assert!((tr.re - 2.0 * (5.0 * PI / 18.0).cos()).abs() < 1e-14);
        assert!(tr.im.abs() < 1e-14);
    }

    #[test]
    fn trace_identity_examples() {
        let flat = p(1.1, PI);
        assert!((quasienergy_trace_identity(&flat, 0.4) + (1.1f64 / 2.0).sin()).abs() < 1e-15);
        assert!((quasienergy_trace_identity(&p(0.0, 0.0), 0.9) - 0.9f64.cos()).abs() < 1e-15);
        let fig1 = p(8.0 * PI / 9.0, -PI / 3.0);
        let k = 0.101803f64.acos();
        let c = quasienergy_trace_identity(&fig1, k);
        assert!((c - 0.50771).abs() < 1e-5);
        assert!((c.acos() - 1.0384).abs() < 2e-4);
    }

    #[test]
    fn mode_examples() {
        let m = floquet_mode(&p(0.0, 0.0), PI / 2.0);
        assert!((m.epsilon - PI / 2.0).abs() < 1e-14);
        assert!(m.n.sub(&BlochVector::Z).norm() < 1e-14);
        // θ1 + θ2 = 2π closes the gap at k = 0 with ε = π
        let closing = floquet_mode(&p(1.2 * PI / 2.0 + 0.4 * PI, 2.0 * PI - (1.2 * PI / 2.0 + 0.4 * PI)), 0.0);
        assert!(closing.degenerate);
        assert!((closing.epsilon - PI).abs() < 1e-6);
    }

    #[test]
    fn band_structure_examples() {
        let g = MomentumGrid::new(256).unwrap();
        let flat = band_structure(&p(8.0 * PI / 9.0, PI), g);
        let e0 = flat.modes[0].epsilon;
        assert!(flat.modes.iter().all(|m| (m.epsilon - e0).abs() < 1e-12));

        let free = band_structure(&p(0.0, 0.0), g);
        for (k, m) in free.momenta().iter().zip(&free.modes) {
            assert!((m.epsilon - k.abs()).abs() < 1e-12);
        }

        let fig1 = band_structure(&p(8.0 * PI / 9.0, -PI / 3.0), MomentumGrid::new(1024).unwrap());
        assert!(fig1.min_gap() > 0.0);
        assert!(fig1.modes.iter().all(|m| !m.degenerate));
    }

    #[test]
    fn flat_band_examples() {
        assert!(is_flat_band(&p(8.0 * PI / 9.0, PI)));
        assert!(is_flat_band(&p(PI, PI / 3.0)));
        assert!(!is_flat_band(&p(8.0 * PI / 9.0, -PI / 3.0)));
        assert!(is_flat_band(&p(0.2, -PI)));
    }

    #[test]
    fn flat_band_angle_and_variance_tests_agree() {
        let n = 101;
        for i in 0..n {
            for j in 0..n {
                let t1 = -PI + 2.0 * PI * (i as f64 + 1.0) / n as f64;
                let t2 = -PI + 2.0 * PI * (j as f64 + 1.0) / n as f64;
                let params = p(t1, t2);
                if params.spectral_gap() < 1e-6 {
                    continue;
                }
                let numeric = quasienergy_variance(&params, 256) < 1e-18;
                assert_eq!(numeric, is_flat_band(&params), "({t1}, {t2})");
            }
        }
    }

    #[test]
    fn conjugators_relate_frames() {
        let base = p(0.7, -2.1);
        for frame in TimeFrame::ALL {
            let fp = base.with_frame(frame);
            for &k in &[-3.0, -0.4, 0.0, 1.3, 2.9] {
                let pm = ops_matrix(&fp.frame_conjugator(), k);
                let lhs = walk_unitary(&fp, k);
                let rhs = pm * walk_unitary(&base, k) * pm.adjoint();
                assert!(lhs.max_abs_diff(&rhs) < 1e-13, "{frame} at k={k}");
            }
        }
    }

    #[test]
    fn frame_names_roundtrip() {
        for f in TimeFrame::ALL {
            assert_eq!(f.name().parse::<TimeFrame>().unwrap(), f);
        }
        assert_eq!("SymmetricA".parse::<TimeFrame>().unwrap(), TimeFrame::SymmetricA);
        assert!("diagonal".parse::<TimeFrame>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn trace_identity_matches_unitary(t1 in -PI..PI, t2 in -PI..PI, k in -PI..PI) {
            let params = p(t1, t2);
            let u = walk_unitary(&params, k);
            prop_assert!((u.trace().re / 2.0 - quasienergy_trace_identity(&params, k)).abs() < 1e-12);
            prop_assert!(u.trace().im.abs() < 1e-12);
            prop_assert!(u.unitarity_defect() < 1e-12);
            prop_assert!((u.det() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }

        #[test]
        fn all_frames_share_spectrum(t1 in -PI..PI, t2 in -PI..PI, k in -PI..PI) {
            let base = p(t1, t2);
            let e0 = floquet_mode(&base, k).epsilon;
            for frame in TimeFrame::ALL {
                let u = walk_unitary(&base.with_frame(frame), k);
                prop_assert!(u.trace().im.abs() < 1e-12);
                prop_assert!((floquet_mode(&base.with_frame(frame), k).epsilon - e0).abs() < 1e-7);
                prop_assert!((u.trace().re / 2.0 - e0.cos()).abs() < 1e-10);
            }
        }

        #[test]
        fn standard_band_is_even_in_k(t1 in -PI..PI, t2 in -PI..PI, k in 0.0..PI) {
            let params = p(t1, t2);
            prop_assert!((floquet_mode(&params, k).epsilon - floquet_mode(&params, -k).epsilon).abs() < 1e-10);
        }
    }
}
