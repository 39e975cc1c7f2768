use std::collections::VecDeque;
use std::f64::consts::PI;

use proptest::prelude::*;
use qwalk_core::lattice::{run, LatticeState};
use qwalk_core::quench::{rate_function, time_grid};
use qwalk_core::scenario::Preset;
use qwalk_core::topology::{analytic_region, boundary_distance, diagram_axis, invariant_doublet};
use qwalk_core::{
    band_structure, phase_diagram, Angle, InitialSpec, MomentumGrid, Quench, Spinor, TimeFrame, WalkParams,
};

#[test]
fn rate_function_converges_in_grid_size() {
    let q = Preset::by_name("fig1").unwrap().quench().unwrap();
    let tn = q.critical_structure(10.0).times();
    let mut worst: f64 = 0.0;
    for t in time_grid(0.05, 10.0) {
        if tn.iter().any(|c| (t - c).abs() < 0.1) {
            continue;
        }
        worst = worst.max((q.rate_at(t, 1024).lambda - q.rate_at(t, 4096).lambda).abs());
    }
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn diagram_refines_consistently() {
    let coarse = phase_diagram(64);
    let fine = phase_diagram(128);
    let (a64, a128) = (diagram_axis(64), diagram_axis(128));
    let mut compared = 0;
    for i in 0..64 {
        for j in 0..64 {
            let c = coarse.cell(i, j);
            let f = fine.cell(2 * i + 1, 2 * j + 1);
            assert!((a64[i] - a128[2 * i + 1]).abs() < 1e-12);
            if let (Some(x), Some(y)) = (c.doublet, f.doublet) {
                assert_eq!(x, y, "{} {}", c.theta1, c.theta2);
                compared += 1;
            }
        }
    }
    assert!(compared > 3500);
}

#[test]
fn diagram_regions_are_four_connected_patches() {
    let d = phase_diagram(64);
    let n = d.resolution;
    let mut label = vec![usize::MAX; n * n];
    let mut patches = Vec::new();
    for start in 0..n * n {
        let Some(doublet) = d.cells[start].doublet else { continue };
        if label[start] != usize::MAX {
            continue;
        }
        let id = patches.len();
        patches.push((doublet, 0usize));
        let mut queue = VecDeque::from([start]);
        label[start] = id;
        while let Some(c) = queue.pop_front() {
            patches[id].1 += 1;
            let (i, j) = (c / n, c % n);
            let mut next = Vec::new();
            if i > 0 { next.push(c - n) }
            if i + 1 < n { next.push(c + n) }
            if j > 0 { next.push(c - 1) }
            if j + 1 < n { next.push(c + 1) }
            for m in next {
                if label[m] == usize::MAX && d.cells[m].doublet == Some(doublet) {
                    label[m] = id;
                    queue.push_back(m);
                }
            }
        }
    }
    let big: Vec<_> = patches.iter().filter(|p| p.1 > 10).collect();
    assert_eq!(big.len(), 4, "{patches:?}");
    let mut values: Vec<_> = big.iter().map(|p| (p.0.nu0_x2, p.0.nu_pi_x2)).collect();
    values.sort();
    assert_eq!(values, [(-1, -1), (-1, 1), (1, -1), (1, 1)]);
}

#[test]
fn gapless_cells_sit_on_boundaries() {
    let d = phase_diagram(64);
    for c in &d.cells {
        let dist = boundary_distance(Angle::new(c.theta1), Angle::new(c.theta2));
        if c.gapless {
            assert!(dist < 1e-6, "{} {}", c.theta1, c.theta2);
        } else {
            assert!(c.doublet.is_some());
        }
    }
}

#[test]
fn presets_conserve_lattice_norm() {
    for p in Preset::all() {
        for s in run(&p.lattice_initial(), &p.post, 10) {
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12, "{}", p.name);
        }
    }
}

fn angle() -> impl Strategy<Value = f64> {
    -PI + 1e-3..PI - 1e-3
}

fn frame() -> impl Strategy<Value = TimeFrame> {
    prop::sample::select(TimeFrame::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn doublet_depends_on_region_only(a in angle(), b in angle(), c in angle(), d in angle()) {
        let (ra, rb) = (analytic_region(Angle::new(a), Angle::new(b)), analytic_region(Angle::new(c), Angle::new(d)));
        prop_assume!(ra.is_some() && ra == rb);
        prop_assume!(boundary_distance(Angle::new(a), Angle::new(b)) > 0.02);
        prop_assume!(boundary_distance(Angle::new(c), Angle::new(d)) > 0.02);
        let x = invariant_doublet(&WalkParams::standard(a, b)).unwrap();
        let y = invariant_doublet(&WalkParams::standard(c, d)).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn quasienergies_do_not_depend_on_frame(a in angle(), b in angle(), f in frame()) {
        let g = MomentumGrid::new(64).unwrap();
        let std = band_structure(&WalkParams::standard(a, b), g);
        let other = band_structure(&WalkParams::new(a, b, f), g);
        for (x, y) in std.modes.iter().zip(&other.modes) {
            prop_assert!((x.epsilon - y.epsilon).abs() < 1e-10);
        }
    }

    #[test]
    fn rate_function_ignores_global_phase(t1 in angle(), a in angle(), b in angle(), t in 0.0..10.0f64, phase in -PI..PI) {
        let post = WalkParams::standard(a, b);
        prop_assume!(post.spectral_gap() > 1e-3);
        let Ok(q) = Quench::new(InitialSpec::flat_trivial(t1), post) else { return Ok(()) };
        let psi0 = q.initial_field(256);
        let x = rate_function(&psi0, &post, t).lambda;
        let y = rate_function(&psi0.with_global_phase(phase), &post, t).lambda;
        prop_assert!((x - y).abs() < 1e-10);
    }

    #[test]
    fn lattice_walk_is_unitary(a in angle(), b in angle(), f in frame(), steps in 1usize..30) {
        let init = LatticeState::single_site(0, Spinor::down_y());
        let traj = run(&init, &WalkParams::new(a, b, f), steps);
        for s in &traj {
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
        prop_assert!(traj.last().unwrap().max_extent(1e-14) <= steps as i64 + 1);
    }
}
