use qwalk_core::quench::{time_grid, DtopSample};
use qwalk_core::scenario::{Preset, PRESET_NAMES};
use qwalk_core::tomography::{canonical_gauge, TomographyError};
use qwalk_core::{
    band_structure, fidelity, phase_diagram as diagram, reconstruct as anneal, synthesize_counts,
    AnnealConfig, InitialSpec, LatticeState, MomentumGrid, Quench, QuenchError, Shots, TimeFrame,
    WalkParams,
};
use serde::Serialize;

use crate::output::{num, Manifest, OutputDir, Skipped};
use crate::{CliError, InitArgs, InitBand, OutArgs, WalkArgs};

fn preset(name: &str) -> Result<Preset, CliError> {
    Preset::by_name(name).ok_or_else(|| {
        CliError::Usage(format!("unknown preset '{name}'; known: {}", PRESET_NAMES.join(", ")))
    })
}

fn walk_params(w: &WalkArgs) -> Result<WalkParams, CliError> {
    if let Some(name) = &w.preset {
        return Ok(preset(name)?.post);
    }
    match (w.theta1, w.theta2) {
        (Some(t1), Some(t2)) => Ok(WalkParams::new(t1, t2, w.frame.unwrap_or(TimeFrame::Standard))),
        _ => Err(CliError::Usage("give --preset or both --theta1 and --theta2".into())),
    }
}

fn quench_error(e: QuenchError) -> CliError {
    match e {
        QuenchError::InvalidSpec(_)
        | QuenchError::PathCrossesBoundary { .. }
        | QuenchError::Gapless { .. }
        | QuenchError::BadInput(_) => CliError::Usage(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

pub fn presets() {
    for p in Preset::all() {
        println!("{:<14} {}", p.name, p.summary);
    }
}

#[derive(Serialize)]
struct BandConfig {
    preset: Option<String>,
    params: WalkParams,
    kgrid: usize,
}

pub fn band(walk: &WalkArgs, kgrid: usize, out: &OutArgs) -> Result<(), CliError> {
    let p = walk_params(walk)?;
    let grid = MomentumGrid::new(kgrid).map_err(|e| CliError::Usage(e.to_string()))?;
    let bands = band_structure(&p, grid);
    let mut dir = OutputDir::create(&out.out)?;
    dir.csv(
        "band.csv",
        &["k", "epsilon", "nx", "ny", "nz"],
        bands.momenta().into_iter().zip(&bands.modes).map(|(k, m)| {
            let [nx, ny, nz] = m.n.components();
            [k, m.epsilon, nx, ny, nz].map(num)
        }),
    )?;
    let mut manifest = Manifest::new(
        "band",
        BandConfig {
            preset: walk.preset.clone(),
            params: p,
            kgrid,
        },
    );
    if bands.min_gap() < 1e-6 {
        manifest.notes.push(format!("gap closes (minimum {:.3e})", bands.min_gap()));
    }
    manifest.finish(&mut dir)
}

#[derive(Serialize)]
struct DiagramConfig {
    resolution: usize,
}

pub fn phase_diagram(res: usize, out: &OutArgs) -> Result<(), CliError> {
    let d = diagram(res);
    let mut dir = OutputDir::create(&out.out)?;
    dir.csv(
        "phase_diagram.csv",
        &["theta1", "theta2", "2nu0", "2nuPi", "gapless"],
        d.cells.iter().map(|c| {
            let (a, b) = match c.doublet {
                Some(v) => (v.nu0_x2.to_string(), v.nu_pi_x2.to_string()),
                None => (String::new(), String::new()),
            };
            [num(c.theta1), num(c.theta2), a, b, u8::from(c.gapless).to_string()]
        }),
    )?;
    let mut manifest = Manifest::new("phase-diagram", DiagramConfig { resolution: res });
    manifest
        .notes
        .push("doublets are 2nu0, 2nuPi; gapless cells leave them empty".into());
    manifest.finish(&mut dir)
}

#[derive(Debug, Clone)]
pub struct QuenchConfig {
    pub walk: WalkArgs,
    pub init: InitArgs,
    pub steps: usize,
    pub dt: f64,
    pub kgrid: usize,
    pub seed: u64,
    pub out: OutArgs,
}

#[derive(Serialize)]
struct ResolvedQuench<'a> {
    preset: Option<&'a str>,
    initial: &'a InitialSpec,
    post: WalkParams,
    frame_quench: bool,
    steps: usize,
    dt: f64,
    kgrid: usize,
    seed: u64,
}

fn custom_initial(post: &WalkParams, init: &InitArgs) -> InitialSpec {
    let frame = init.init_frame.unwrap_or(post.frame);
    match init.init_band {
        InitBand::Trivial => InitialSpec::FlatTrivial {
            theta1: init.init_theta.unwrap_or(post.theta1.radians()).into(),
            frame,
        },
        InitBand::Nontrivial => InitialSpec::FlatNontrivial {
            theta2: init.init_theta.unwrap_or(post.theta2.radians()).into(),
            frame,
        },
    }
}

fn skipped(kind: &'static str, samples: &[DtopSample]) -> Vec<Skipped> {
    samples
        .iter()
        .filter_map(|s| {
            s.skipped.as_ref().map(|r| Skipped {
                kind,
                time: s.t,
                reason: r.clone(),
            })
        })
        .collect()
}

pub fn quench(cfg: &QuenchConfig) -> Result<(), CliError> {
    let (initial, post, note) = match &cfg.walk.preset {
        Some(name) => {
            let p = preset(name)?;
            (p.initial, p.post, p.note)
        }
        None => {
            let post = walk_params(&cfg.walk)?;
            (custom_initial(&post, &cfg.init), post, None)
        }
    };
    let frame_quench = initial.target().frame != post.frame;
    let q = Quench::new(initial.clone(), post)
        .and_then(|q| q.with_base_points(cfg.kgrid))
        .map_err(quench_error)?;

    let horizon = cfg.steps as f64;
    let times = time_grid(cfg.dt, horizon);
    let trace = q.trace(&times);
    let strobe = q.dtop_steps(cfg.steps);

    let mut dir = OutputDir::create(&cfg.out.out)?;
    dir.csv(
        "pgp.csv",
        &["t", "k", "phiG"],
        trace.times.iter().zip(&trace.pgp).flat_map(|(&t, row)| {
            trace
                .momenta
                .iter()
                .zip(row)
                .map(move |(&k, v)| [num(t), num(k), num(v.unwrap_or(f64::NAN))])
        }),
    )?;
    let rows = |kind: &'static str, samples: &[DtopSample]| -> Vec<[String; 3]> {
        samples
            .iter()
            .filter_map(|s| {
                let time = if kind == "stroboscopic" { format!("{}", s.t as usize) } else { num(s.t) };
                s.omega().map(|w| [kind.to_string(), time, w.to_string()])
            })
            .collect()
    };
    let mut dtop_rows = rows("continuous", &trace.dtop);
    dtop_rows.extend(rows("stroboscopic", &strobe));
    dir.csv("dtop.csv", &["kind", "time", "omega_d"], dtop_rows)?;
    dir.csv(
        "lambda.csv",
        &["t", "lambda"],
        trace.lambda.iter().map(|r| [num(r.t), num(r.lambda)]),
    )?;

    #[derive(Serialize)]
    struct Critical<'a> {
        horizon: f64,
        families: &'a [qwalk_core::quench::CriticalFamily],
        times: Vec<f64>,
    }
    dir.json(
        "critical.json",
        &Critical {
            horizon,
            families: &trace.critical.families,
            times: trace.critical.times(),
        },
    )?;

    let mut manifest = Manifest::new(
        "quench",
        ResolvedQuench {
            preset: cfg.walk.preset.as_deref(),
            initial: &initial,
            post,
            frame_quench,
            steps: cfg.steps,
            dt: cfg.dt,
            kgrid: cfg.kgrid,
            seed: cfg.seed,
        },
    );
    if let Some(n) = note {
        manifest.notes.push(n.to_string());
    }
    manifest.notes.push(
        "pgp.csv covers the half zone k in [0, pi]; NaN marks |G| < 1e-9; dtop.csv omits skipped samples".into(),
    );
    manifest.skipped = skipped("continuous", &trace.dtop);
    manifest.skipped.extend(skipped("stroboscopic", &strobe));
    manifest.finish(&mut dir)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructConfig {
    pub preset: String,
    pub steps: usize,
    /// `None` selects exact counts.
    pub shots: Option<u64>,
    pub seed: u64,
    /// Left out of manifests so reruns elsewhere stay byte-identical.
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Serialize)]
struct Report {
    preset: String,
    step: usize,
    exact_counts: bool,
    shots: Option<u64>,
    seed: u64,
    sites: usize,
    settings_per_family: usize,
    free_parameters: usize,
    converged: bool,
    fidelity: f64,
    objective: f64,
    floor: f64,
    excess_per_shot: f64,
    acceptance_rate: f64,
    chain: usize,
    initial_temperature: f64,
}

fn amplitude_rows(s: &LatticeState) -> Vec<[String; 5]> {
    s.sites()
        .map(|x| {
            let a = s.at(x);
            [x.to_string(), num(a.up.re), num(a.up.im), num(a.down.re), num(a.down.im)]
        })
        .collect()
}

pub fn reconstruct(cfg: &ReconstructConfig) -> Result<(), CliError> {
    let p = preset(&cfg.preset)?;
    let truth = canonical_gauge(&p.short_trajectory(cfg.steps).pop().expect("step 0 always present"));
    let shots = cfg.shots.map_or(Shots::Exact, Shots::Finite);
    let counts = synthesize_counts(&truth, shots, cfg.seed);
    let anneal_cfg = AnnealConfig {
        seed: cfg.seed,
        ..AnnealConfig::default()
    };
    let (rec, failure) = match anneal(&counts, truth.sites(), &anneal_cfg) {
        Ok(r) => (r, None),
        Err(TomographyError::NonConvergence { excess, best }) => (
            *best,
            Some(format!("annealing stalled {excess:.3e} per shot above the likelihood floor")),
        ),
        Err(e) => return Err(CliError::Numerical(e.to_string())),
    };

    let mut dir = OutputDir::create(&cfg.out.out)?;
    let header = ["site", "up_re", "up_im", "down_re", "down_im"];
    dir.csv("truth.csv", &header, amplitude_rows(&truth))?;
    dir.csv("reconstruction.csv", &header, amplitude_rows(&rec.state))?;
    let report = Report {
        preset: p.name.to_string(),
        step: cfg.steps,
        exact_counts: cfg.shots.is_none(),
        shots: cfg.shots,
        seed: cfg.seed,
        sites: truth.len(),
        settings_per_family: counts.settings_per_family(),
        free_parameters: 4 * truth.len() - 1,
        converged: failure.is_none(),
        fidelity: fidelity(&truth, &rec.state),
        objective: rec.objective,
        floor: rec.floor,
        excess_per_shot: (rec.objective - rec.floor) / counts.total_weight(),
        acceptance_rate: rec.acceptance_rate(),
        chain: rec.chain,
        initial_temperature: rec.initial_temperature,
    };
    dir.json("report.json", &report)?;

    #[derive(Serialize)]
    struct Config<'a> {
        request: &'a ReconstructConfig,
        anneal: &'a AnnealConfig,
    }
    let mut manifest = Manifest::new(
        "reconstruct",
        Config {
            request: cfg,
            anneal: &anneal_cfg,
        },
    );
    manifest.notes.push(format!(
        "truth is the step-{} state of the unramped {} seed; amplitudes are normalized with the largest component real and positive",
        cfg.steps, p.name
    ));
    manifest.notes.push(
        "4 projectors per site in each of two families (direct and with spin-up shifted back one site)".into(),
    );
    if let Some(f) = &failure {
        manifest.notes.push(f.clone());
    }
    manifest.finish(&mut dir)?;
    match failure {
        Some(f) => Err(CliError::Numerical(format!("{f}; report kept in {}", dir.root().display()))),
        None => {
            println!("fidelity {:.8}", report.fidelity);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn custom_initial_defaults_follow_post() {
        let post = WalkParams::new(8.0 * PI / 9.0, -PI / 3.0, TimeFrame::Shift1);
        let init = InitArgs {
            init_band: InitBand::Trivial,
            init_theta: None,
            init_frame: Some(TimeFrame::Standard),
        };
        match custom_initial(&post, &init) {
            InitialSpec::FlatTrivial { theta1, frame } => {
                assert!((theta1.radians() - 8.0 * PI / 9.0).abs() < 1e-15);
                assert_eq!(frame, TimeFrame::Standard);
            }
            other => panic!("{other:?}"),
        }
    }
}
