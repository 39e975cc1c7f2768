//! Named quench scenarios.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::floquet::{TimeFrame, WalkParams};
use crate::grid::Angle;
use crate::lattice::{ramp, run, LatticeState};
use crate::quench::{InitialSpec, Quench, QuenchError};
use crate::su2::Spinor;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub initial: InitialSpec,
    pub post: WalkParams,
    /// Known ambiguity in how the scenario was specified, if any.
    pub note: Option<&'static str>,
}

fn pi9(num: f64) -> Angle {
    Angle::pi_frac(num, 9.0)
}

fn fig2(name: &'static str, summary: &'static str, t1: f64, t2: f64) -> Preset {
    Preset {
        name,
        summary,
        initial: InitialSpec::flat_trivial(pi9(8.0)),
        post: WalkParams::standard(pi9(t1), pi9(t2)),
        note: Some("initial flat-band theta1 is not fixed by the scenario; the lower band is the same for any theta1 in (-pi, pi)"),
    }
}

pub const PRESET_NAMES: [&str; 7] = [
    "fig1",
    "fig2-star",
    "fig2-square",
    "fig2-diamond",
    "fig2-circle",
    "fig3",
    "fig4",
];

impl Preset {
    pub fn all() -> Vec<Preset> {
        PRESET_NAMES.iter().map(|n| Preset::by_name(n).expect("known preset")).collect()
    }

    pub fn by_name(name: &str) -> Option<Preset> {
        let p = match name {
            "fig1" => Preset {
                name: "fig1",
                summary: "flat trivial band (8pi/9, pi) quenched to (8pi/9, -pi/3)",
                initial: InitialSpec::flat_trivial(pi9(8.0)),
                post: WalkParams::standard(pi9(8.0), Angle::new(-PI / 3.0)),
                note: None,
            },
            "fig2-star" => fig2("fig2-star", "same-phase quench to (5pi/9, 8pi/9)", 5.0, 8.0),
            "fig2-square" => fig2("fig2-square", "same-phase quench to (6pi/9, 7pi/9)", 6.0, 7.0),
            "fig2-diamond" | "fig2-triangle" => {
                fig2("fig2-diamond", "cross-boundary quench to (7pi/9, 6pi/9)", 7.0, 6.0)
            }
            "fig2-circle" => fig2("fig2-circle", "cross-boundary quench to (8pi/9, 5pi/9)", 8.0, 5.0),
            "fig3" => {
                let a = |t1: f64, t2: f64| WalkParams::new(t1, t2, TimeFrame::SymmetricA);
                Preset {
                    name: "fig3",
                    summary: "ramp (pi, pi/3) -> (8.6pi/9, pi/3), quench to (-7pi/9, pi/2), symmetric frame A",
                    initial: InitialSpec::adiabatic(vec![a(PI, PI / 3.0), a(8.6 * PI / 9.0, PI / 3.0)]),
                    post: a(-7.0 * PI / 9.0, PI / 2.0),
                    note: Some("evaluated in symmetric frame A; the standard frame shows no critical momenta for these angles"),
                }
            }
            "fig4" => Preset {
                name: "fig4",
                summary: "ramp (-pi/3, pi) -> (-pi/3, 8.8pi/9), then switch time frame standard -> shift1",
                initial: InitialSpec::adiabatic(vec![
                    WalkParams::standard(-PI / 3.0, PI),
                    WalkParams::standard(-PI / 3.0, 8.8 * PI / 9.0),
                ]),
                post: WalkParams::new(-PI / 3.0, 8.8 * PI / 9.0, TimeFrame::Shift1),
                note: Some("angles follow (theta1, theta2) = (-pi/3, 8.8pi/9); an alternative reading lists theta1 twice as -pi/3 and -8.8pi/9"),
            },
            _ => return None,
        };
        Some(p)
    }

    pub fn quench(&self) -> Result<Quench, QuenchError> {
        Quench::new(self.initial.clone(), self.post)
    }

    /// Real-space state whose Fourier image is the unramped seed.
    pub fn lattice_seed(&self) -> LatticeState {
        lattice_seed(&self.initial.seed()).expect("presets start from flat bands")
    }

    /// Real-space pre-quench state, ramp included.
    pub fn lattice_initial(&self) -> LatticeState {
        ramp(&self.lattice_seed(), &self.initial.ramp_schedule())
    }

    /// Seed walked `0..=steps` times under the post-quench system.
    pub fn short_trajectory(&self, steps: usize) -> Vec<LatticeState> {
        run(&self.lattice_seed(), &self.post, steps)
    }
}

/// Finite lattice state for a flat-band initial spec; `None` otherwise.
pub fn lattice_seed(spec: &InitialSpec) -> Option<LatticeState> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let std = match spec {
        InitialSpec::FlatTrivial { .. } => LatticeState::single_site(0, Spinor::down_y()),
        InitialSpec::FlatNontrivial { .. } => LatticeState::new(
            -1,
            vec![
                Spinor::new(zero, Complex64::new(0.0, -FRAC_1_SQRT_2)),
                Spinor::new(h, zero),
            ],
        ),
        _ => return None,
    };
    let conj = spec.target().frame_conjugator();
    Some(conj.iter().fold(std, |s, op| s.apply_op(op)))
}
