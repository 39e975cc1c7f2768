//! Chiral winding numbers in the two symmetric time frames, the invariant
//! doublet `(ν0, νπ)` built from them, and static phase diagrams.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floquet::{floquet_mode, TimeFrame, WalkParams};
use crate::grid::{Angle, MomentumGrid};
use crate::su2::BlochVector;

/// Quasienergy gap below which a system counts as gapless.
pub const GAP_TOL: f64 = 1e-6;

const AXIS_CHECK_POINTS: usize = 256;
const AXIS_TOL: f64 = 1e-8;
const BASE_POINTS: usize = 256;
const MAX_POINTS: usize = 1 << 16;
const WINDING_RESIDUAL: f64 = 0.01;

/// Orientation constants of the frame-A and frame-B windings.
const SIGN_A: i32 = 1;
const SIGN_B: i32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("no chiral axis: n(k) leaves the plane by {deviation:.3e}")]
    NoChiralAxis { deviation: f64 },
    #[error("winding did not quantize up to {points} momenta (residual {residual:.3e}, step {max_step:.3})")]
    UnwrapFailure {
        points: usize,
        residual: f64,
        max_step: f64,
    },
    #[error("system is gapless (gap {gap:.3e})")]
    Gapless { gap: f64 },
}

/// Stores `2ν0` and `2νπ` as integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantDoublet {
    pub nu0_x2: i32,
    pub nu_pi_x2: i32,
}

impl InvariantDoublet {
    pub fn new(nu0_x2: i32, nu_pi_x2: i32) -> Self {
        InvariantDoublet { nu0_x2, nu_pi_x2 }
    }

    pub fn nu0(&self) -> f64 {
        self.nu0_x2 as f64 / 2.0
    }

    pub fn nu_pi(&self) -> f64 {
        self.nu_pi_x2 as f64 / 2.0
    }
}

impl std::fmt::Display for InvariantDoublet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}/2, {}/2)", self.nu0_x2, self.nu_pi_x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Z2Class {
    Trivial,
    Nontrivial,
}

pub fn z2_class(d: InvariantDoublet) -> Z2Class {
    if d.nu0_x2 * d.nu_pi_x2 < 0 {
        Z2Class::Trivial
    } else {
        Z2Class::Nontrivial
    }
}

/// Unit vector orthogonal to every `n(k)` of a symmetric-frame system.
///
/// When `n(k)` is constant any perpendicular vector qualifies; the returned
/// axis is then the one nearest `x̂`.
pub fn chiral_axis(p: &WalkParams) -> Result<BlochVector, TopologyError> {
    let gap = p.spectral_gap();
    if gap < GAP_TOL {
        return Err(TopologyError::NoChiralAxis { deviation: f64::NAN });
    }
    let grid = MomentumGrid::new(AXIS_CHECK_POINTS).expect("even grid");
    let ns: Vec<BlochVector> = grid.points().map(|k| floquet_mode(p, k).n).collect();

    // Best-conditioned cross product among a few fixed generic pairs.
    let picks = [3usize, 37, 91, 150, 211];
    let mut best = BlochVector::new(0.0, 0.0, 0.0);
    for (i, &a) in picks.iter().enumerate() {
        for &b in &picks[i + 1..] {
            let c = ns[a].cross(&ns[b]);
            if c.norm() > best.norm() {
                best = c;
            }
        }
    }
    let axis = if best.norm() < 1e-6 {
        perpendicular_to(&ns[0])
    } else {
        orient(best.normalized().expect("nonzero"))
    };

    let deviation = ns.iter().map(|n| n.dot(&axis).abs()).fold(0.0, f64::max);
    if deviation >= AXIS_TOL {
        return Err(TopologyError::NoChiralAxis { deviation });
    }
    Ok(axis)
}

fn perpendicular_to(n: &BlochVector) -> BlochVector {
    let a = BlochVector::X.sub(&n.scaled(n.dot(&BlochVector::X)));
    let a = if a.norm() > 1e-3 {
        a
    } else {
        BlochVector::Z.sub(&n.scaled(n.dot(&BlochVector::Z)))
    };
    orient(a.normalized().expect("nonzero"))
}

/// Flip so that the largest-magnitude component is positive.
fn orient(a: BlochVector) -> BlochVector {
    let c = a.components();
    let big = c
        .iter()
        .copied()
        .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if big < 0.0 {
        a.scaled(-1.0)
    } else {
        a
    }
}

/// Right-handed basis `(e1, e2)` of the plane orthogonal to `axis`.
fn plane_basis(axis: &BlochVector) -> (BlochVector, BlochVector) {
    let seed = if axis.nx.abs() < 0.9 {
        BlochVector::X
    } else {
        BlochVector::Y
    };
    let e1 = seed
        .sub(&axis.scaled(axis.dot(&seed)))
        .normalized()
        .expect("seed not parallel to axis");
    let e2 = axis.cross(&e1);
    (e1, e2)
}

/// Unquantized winding over a closed loop of `m` momenta and the largest
/// single unwrap step.
fn raw_winding(p: &WalkParams, axis: &BlochVector, m: usize) -> (f64, f64) {
    let grid = MomentumGrid::new(m).expect("even grid");
    let (e1, e2) = plane_basis(axis);
    let phases: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let n = floquet_mode(p, grid.point(j)).n;
            n.dot(&e2).atan2(n.dot(&e1))
        })
        .collect();
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    for j in 0..m {
        let d = crate::grid::wrap_phase(phases[(j + 1) % m] - phases[j]);
        max_step = max_step.max(d.abs());
        total += d;
    }
    (total / (2.0 * PI), max_step)
}

/// Integer winding of `n(k)` about the chiral axis over the Brillouin zone.
pub fn winding_number(p: &WalkParams) -> Result<i32, TopologyError> {
    let axis = chiral_axis(p)?;
    let mut m = BASE_POINTS;
    loop {
        let (raw, max_step) = raw_winding(p, &axis, m);
        let residual = (raw - raw.round()).abs();
        if max_step < PI / 2.0 && residual < WINDING_RESIDUAL {
            return Ok(raw.round() as i32);
        }
        if m >= MAX_POINTS {
            return Err(TopologyError::UnwrapFailure {
                points: m,
                residual,
                max_step,
            });
        }
        m *= 2;
    }
}

/// `(ν0, νπ)` from the windings `W_A`, `W_B` of the two symmetric frames.
///
/// The frame tag of `p` is ignored.
pub fn invariant_doublet(p: &WalkParams) -> Result<InvariantDoublet, TopologyError> {
    let gap = p.spectral_gap();
    if gap < GAP_TOL {
        return Err(TopologyError::Gapless { gap });
    }
    let wa = SIGN_A * winding_number(&p.with_frame(TimeFrame::SymmetricA))?;
    let wb = SIGN_B * winding_number(&p.with_frame(TimeFrame::SymmetricB))?;
    Ok(InvariantDoublet::new(wa + wb, wa - wb))
}

/// Which gap a boundary line closes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosingGap {
    Zero,
    Pi,
}

/// The line `θ1 + sign·θ2 = offset` along which the gap at momentum `k`
/// closes at quasienergy `gap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLine {
    pub sign: i8,
    pub offset: f64,
    pub momentum: f64,
    pub gap: ClosingGap,
}

impl BoundaryLine {
    pub fn contains(&self, theta1: f64, theta2: f64, tol: f64) -> bool {
        self.distance(theta1, theta2) < tol
    }

    /// Euclidean distance in the `(θ1, θ2)` plane.
    pub fn distance(&self, theta1: f64, theta2: f64) -> f64 {
        (theta1 + self.sign as f64 * theta2 - self.offset).abs() / 2f64.sqrt()
    }
}

/// All gap-closing lines meeting the square `(−π, π]²`.
///
/// From `cos ε(0) = cos((θ1+θ2)/2)` and `cos ε(π) = −cos((θ1−θ2)/2)`.
pub fn gap_closing_boundaries() -> Vec<BoundaryLine> {
    vec![
        BoundaryLine { sign: 1, offset: 0.0, momentum: 0.0, gap: ClosingGap::Zero },
        BoundaryLine { sign: 1, offset: 2.0 * PI, momentum: 0.0, gap: ClosingGap::Pi },
        BoundaryLine { sign: 1, offset: -2.0 * PI, momentum: 0.0, gap: ClosingGap::Pi },
        BoundaryLine { sign: -1, offset: 0.0, momentum: PI, gap: ClosingGap::Pi },
        BoundaryLine { sign: -1, offset: 2.0 * PI, momentum: PI, gap: ClosingGap::Zero },
        BoundaryLine { sign: -1, offset: -2.0 * PI, momentum: PI, gap: ClosingGap::Zero },
    ]
}

/// Distance of canonical angles to the nearest boundary line.
pub fn boundary_distance(theta1: Angle, theta2: Angle) -> f64 {
    gap_closing_boundaries()
        .iter()
        .map(|b| b.distance(theta1.radians(), theta2.radians()))
        .fold(f64::INFINITY, f64::min)
}

/// Label of the open region of the square cut out by the boundary lines,
/// as signs of `(θ1 − θ2, θ1 + θ2)`. `None` on a line.
pub fn analytic_region(theta1: Angle, theta2: Angle) -> Option<(i8, i8)> {
    let d = theta1.radians() - theta2.radians();
    let s = theta1.radians() + theta2.radians();
    if d.abs() < 1e-12 || s.abs() < 1e-12 || (s.abs() - 2.0 * PI).abs() < 1e-12 {
        return None;
    }
    Some((d.signum() as i8, s.signum() as i8))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub theta1: f64,
    pub theta2: f64,
    pub doublet: Option<InvariantDoublet>,
    pub gapless: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub resolution: usize,
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
    /// Row-major in `θ1`: cell `(i, j)` sits at `i * resolution + j`.
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn cell(&self, i: usize, j: usize) -> &PhaseCell {
        &self.cells[i * self.resolution + j]
    }
}

/// Axis values `−π + 2π(i+1)/res`, which end exactly at `π`.
pub fn diagram_axis(res: usize) -> Vec<f64> {
    (0..res)
        .map(|i| {
            if i + 1 == res {
                PI
            } else {
                -PI + 2.0 * PI * (i + 1) as f64 / res as f64
            }
        })
        .collect()
}

pub fn phase_diagram(res: usize) -> PhaseDiagram {
    assert!(res >= 32, "phase diagram resolution must be at least 32");
    let axis = diagram_axis(res);
    let cells = (0..res * res)
        .into_par_iter()
        .map(|idx| {
            let (t1, t2) = (axis[idx / res], axis[idx % res]);
            let p = WalkParams::standard(t1, t2);
            let gapless = p.spectral_gap() < GAP_TOL;
            let doublet = if gapless {
                None
            } else {
                invariant_doublet(&p).ok()
            };
            PhaseCell {
                theta1: t1,
                theta2: t2,
                doublet,
                gapless,
            }
        })
        .collect();
    PhaseDiagram {
        resolution: res,
        theta1: axis.clone(),
        theta2: axis,
        cells,
    }
}
