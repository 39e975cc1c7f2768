use qwalk_core::scenario::Preset;
use qwalk_core::tomography::{fidelity, reconstruct, synthesize_counts, AnnealConfig, Shots, TomographyError};

#[test]
fn exact_counts_recover_short_trajectories() {
    let cfg = AnnealConfig::default();
    for p in Preset::all() {
        for (n, truth) in p.short_trajectory(5).iter().enumerate() {
            let counts = synthesize_counts(truth, Shots::Exact, 0);
            let rec = reconstruct(&counts, truth.sites(), &cfg)
                .unwrap_or_else(|e| panic!("{} step {n}: {e}", p.name));
            let f = fidelity(truth, &rec.state);
            assert!(f >= 0.999, "{} step {n}: fidelity {f}", p.name);
            assert_eq!(counts.settings_per_family(), 4 * (2 * n + 1 + usize::from(p.name == "fig3")));
        }
    }
}

#[test]
fn sampled_counts_recover_five_step_state() {
    let p = Preset::by_name("fig1").unwrap();
    let truth = p.short_trajectory(5).pop().unwrap();
    let counts = synthesize_counts(&truth, Shots::Finite(100_000), 2024);
    let cfg = AnnealConfig { seed: 5, ..AnnealConfig::default() };
    let rec = reconstruct(&counts, truth.sites(), &cfg).unwrap();
    assert!(fidelity(&truth, &rec.state) >= 0.99);
    assert_eq!(rec, reconstruct(&counts, truth.sites(), &cfg).unwrap());
}

#[test]
fn wider_support_leaves_empty_sites_empty() {
    let truth = Preset::by_name("fig3").unwrap().short_trajectory(2).pop().unwrap();
    let counts = synthesize_counts(&truth, Shots::Exact, 0);
    let wide = truth.sites().start - 2..truth.sites().end + 2;
    let rec = reconstruct(&counts, wide, &AnnealConfig::default()).unwrap();
    assert!(fidelity(&truth, &rec.state) >= 0.999);
    for x in [rec.state.offset, rec.state.offset + rec.state.len() as i64 - 1] {
        assert!(rec.state.at(x).norm_sqr() < 1e-6);
    }
}

#[test]
fn few_shots_still_fit_within_noise() {
    let truth = Preset::by_name("fig2-circle").unwrap().short_trajectory(3).pop().unwrap();
    let counts = synthesize_counts(&truth, Shots::Finite(2000), 3);
    match reconstruct(&counts, truth.sites(), &AnnealConfig::default()) {
        Ok(rec) => assert!(fidelity(&truth, &rec.state) > 0.9),
        Err(TomographyError::NonConvergence { excess, .. }) => panic!("excess {excess}"),
        Err(e) => panic!("{e}"),
    }
}
