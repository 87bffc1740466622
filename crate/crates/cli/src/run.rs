//! Command orchestration: each command calls the model operations, collects
//! artifacts and checks, and leaves file writing to the caller.

use bhclock_core::checks::{
    algebra_check, cross_representation, disk_grid, energy_identity_error, geometric_deviation,
    overlap_series_deviation,
};
use bhclock_core::crossover::{
    default_probes, energy_fluctuation_scan, identity_resolution_residual, overlap_decay_scan,
    QuadSpec,
};
use bhclock_core::horizon::{compare_near_horizon, SchwarzschildParams};
use bhclock_core::paw::{
    kronecker_difference, resonant_demo, spacetime_support, spectrum, support_table, DemoConfig,
    SupportGeometry,
};
use bhclock_core::table::{fmt_f64, Table};
use bhclock_core::two_mode::{
    boltzmann_residual, energy_split_residual, isotherm_table, microstate_isotherm, real_axis_root,
    required_n_cut, thermal_report, thermal_state, two_mode_energy_check, TwoModeConfig,
};
use bhclock_core::{DiskPoint, Error, Execution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::config::{Command, ConfigError, RunConfig};
use crate::report::{Artifact, Check, Outcome};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("cannot serialise report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write artifacts: {0}")]
    Io(#[from] std::io::Error),
}

/// Exit status for all-pass runs.
pub const EXIT_OK: i32 = 0;
/// Exit status for configuration errors.
pub const EXIT_CONFIG: i32 = 1;
/// Exit status for numerical failures and failed checks.
pub const EXIT_NUMERICAL: i32 = 2;

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_)
            | RunError::Model(
                Error::Parameter { .. } | Error::Domain(_) | Error::UnsupportedMeasure(_),
            ) => EXIT_CONFIG,
            _ => EXIT_NUMERICAL,
        }
    }
}

/// Disk points with `|xi| <= r_max`, uniform in area.
pub fn random_disk_points(rng: &mut ChaCha8Rng, n: usize, r_max: f64) -> Vec<DiskPoint> {
    (0..n)
        .map(|_| {
            let r = r_max * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            DiskPoint::from_polar(r, theta).expect("r_max < 1")
        })
        .collect()
}

fn json<T: Serialize>(value: &T) -> Result<String, RunError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn run(cfg: &RunConfig, exec: Execution) -> Result<Outcome, RunError> {
    match cfg.command {
        Command::AlgebraCheck => algebra(cfg, exec),
        Command::CrossoverScan => crossover(cfg, exec),
        Command::Thermal => thermal(cfg, exec),
        Command::Isotherm => isotherm(cfg, exec),
        Command::GeodesicCompare => geodesic(cfg),
        Command::PawDemo => paw(cfg, exec),
    }
}

fn algebra(cfg: &RunConfig, exec: Execution) -> Result<Outcome, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xi_max = cfg.real("xi_max");
    let pairs: Vec<(DiskPoint, DiskPoint)> = (0..cfg.count("pairs"))
        .map(|_| {
            let p = random_disk_points(&mut rng, 2, xi_max);
            (p[0], p[1])
        })
        .collect();
    let grid = disk_grid(cfg.count("grid"), cfg.real("r_max"))?;
    let tail_tol = cfg.real("tail_tol");
    let mut table = Table::new([
        "K",
        "cutoff",
        "commutator_residual",
        "casimir_residual",
        "max_overlap_dev",
        "max_energy_rel_err",
    ]);
    let mut checks = Vec::new();
    for &k in cfg.list("K") {
        let a = algebra_check(k, cfg.count("cutoff"))?;
        let devs = exec.try_map(&pairs, |&(x, y)| {
            overlap_series_deviation(k, x, y, tail_tol)
        })?;
        let overlap_dev = devs.into_iter().fold(0.0, f64::max);
        let energy = energy_identity_error(k, cfg.real("J"), &grid, tail_tol, exec)?;
        table.push(vec![
            fmt_f64(k),
            a.cutoff.to_string(),
            fmt_f64(a.commutator_residual),
            fmt_f64(a.casimir_residual),
            fmt_f64(overlap_dev),
            fmt_f64(energy),
        ]);
        checks.push(Check::at_most(
            format!("commutator K={k}"),
            a.commutator_residual,
            cfg.real("tol_algebra"),
        ));
        checks.push(Check::at_most(
            format!("casimir K={k}"),
            a.casimir_residual,
            cfg.real("tol_algebra"),
        ));
        checks.push(Check::at_most(
            format!("overlap series K={k}"),
            overlap_dev,
            cfg.real("tol_overlap"),
        ));
        checks.push(Check::at_most(
            format!("energy identity K={k}"),
            energy,
            cfg.real("tol_energy"),
        ));
    }
    Ok(Outcome {
        artifacts: vec![Artifact::new("algebra.csv", table.to_csv())],
        checks,
    })
}

fn crossover(cfg: &RunConfig, exec: Execution) -> Result<Outcome, RunError> {
    let decay = overlap_decay_scan(cfg.xi("xi1"), cfg.xi("xi2"), cfg.list("K"), exec)?;
    let fluct = energy_fluctuation_scan(
        cfg.xi("xi"),
        cfg.real("J"),
        cfg.list("K_fluct"),
        cfg.real("tail_tol"),
        exec,
    )?;
    let mut checks = vec![Check::at_most(
        "overlap log-slope",
        (decay.fit.slope - decay.predicted_slope).abs(),
        cfg.real("tol_slope"),
    )];
    let tol = cfg.real("tol_ratio");
    for (i, a) in fluct.rows.iter().enumerate() {
        for b in &fluct.rows[i + 1..] {
            if (b.k - 4.0 * a.k).abs() <= 1e-12 * b.k {
                checks.push(Check::within(
                    format!("fluctuation ratio K={}->{}", a.k, b.k),
                    b.ratio / a.ratio,
                    0.5 * (1.0 - tol),
                    0.5 * (1.0 + tol),
                ));
            }
        }
    }
    let spec = QuadSpec {
        target: cfg.real("tol_identity"),
        ..QuadSpec::default()
    };
    let mut identity = Table::new([
        "K",
        "residual",
        "radial_order",
        "angular_order",
        "converged",
    ]);
    for &k in cfg.list("K_identity") {
        let r = identity_resolution_residual(k, &default_probes(), &spec, exec)?;
        identity.push(vec![
            fmt_f64(k),
            fmt_f64(r.residual),
            r.radial_order.to_string(),
            r.angular_order.to_string(),
            r.converged.to_string(),
        ]);
        checks.push(Check::at_most(
            format!("identity resolution K={k}"),
            r.residual,
            spec.target,
        ));
    }
    Ok(Outcome {
        artifacts: vec![
            Artifact::new("overlap.csv", decay.table().to_csv()),
            Artifact::new("fluctuation.csv", fluct.table().to_csv()),
            Artifact::new("identity.csv", identity.to_csv()),
        ],
        checks,
    })
}

fn pair_config(
    n: usize,
    coupling: f64,
    xi: DiskPoint,
    tail_tol: f64,
) -> Result<TwoModeConfig, Error> {
    TwoModeConfig::new(n, coupling, required_n_cut(xi.abs(), tail_tol)?)
}

fn thermal(cfg: &RunConfig, exec: Execution) -> Result<Outcome, RunError> {
    let (n, j, tail_tol) = (cfg.count("N"), cfg.real("J"), cfg.real("tail_tol"));
    let xi = cfg.xi("xi");
    let report = thermal_report(xi, &pair_config(n, j, xi, tail_tol)?, tail_tol)?;

    let grid: Vec<DiskPoint> = disk_grid(cfg.count("grid"), cfg.real("r_max"))?
        .into_iter()
        .filter(|p| p.abs() > 0.0)
        .collect();
    let rows = exec.try_map(&grid, |&p| -> Result<[f64; 4], Error> {
        let pc = pair_config(n, j, p, tail_tol)?;
        Ok([
            geometric_deviation(&thermal_state(p, &pc, tail_tol)?, p),
            boltzmann_residual(p, &pc)?,
            energy_split_residual(p, &pc)?,
            two_mode_energy_check(p, &pc, tail_tol)?
                / bhclock_core::coherent::classical_energy(p, j),
        ])
    })?;
    let worst = |i: usize| rows.iter().map(|r| r[i]).fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = random_disk_points(&mut rng, cfg.count("samples"), cfg.real("xi_max"));
    let cross = exec
        .try_map(&samples, |&p| {
            cross_representation(p, j, tail_tol).map(|c| c.deviation())
        })?
        .into_iter()
        .fold(0.0, f64::max);

    let tol = cfg.real("tol_thermal");
    Ok(Outcome {
        artifacts: vec![Artifact::new("thermal.json", json(&report)?)],
        checks: vec![
            Check::at_most("reduced state geometric", worst(0), tol),
            Check::at_most("boltzmann factor", worst(1), tol),
            Check::at_most("energy split", worst(2), tol),
            Check::at_most(
                "pair energy vs J w (relative)",
                worst(3),
                cfg.real("tol_cross"),
            ),
            Check::at_most("cross-representation", cross, cfg.real("tol_cross")),
        ],
    })
}

#[derive(Serialize)]
struct HawkingSummary {
    units: String,
    #[serde(rename = "M")]
    mass: f64,
    r_s: f64,
    kappa: f64,
    #[serde(rename = "T_H")]
    hawking_temperature: f64,
    #[serde(rename = "T_H_kelvin")]
    hawking_temperature_kelvin: f64,
    real_axis_root: f64,
}

fn isotherm(cfg: &RunConfig, exec: Execution) -> Result<Outcome, RunError> {
    let params = SchwarzschildParams::new(cfg.real("M"), cfg.units)?;
    let t_h = params.hawking_temperature();
    let tm = TwoModeConfig::new(cfg.count("N"), cfg.real("J"), 2)?;
    let points = microstate_isotherm(t_h, &tm, cfg.list("angles"), exec)?;
    let expected = real_axis_root(t_h, &tm);
    let mut checks = Vec::new();
    for p in points
        .iter()
        .filter(|p| p.angle_deg.rem_euclid(180.0) == 0.0)
    {
        let got = p.xi.map_or(f64::NAN, |z| z.abs());
        checks.push(Check::at_most(
            format!("real-axis root angle={}", p.angle_deg),
            (got - expected).abs() / expected,
            cfg.real("tol_root"),
        ));
    }
    let summary = HawkingSummary {
        units: cfg.units.to_string(),
        mass: params.mass(),
        r_s: params.schwarzschild_radius(),
        kappa: params.kappa(),
        hawking_temperature: t_h,
        hawking_temperature_kelvin: params.hawking_temperature_kelvin(),
        real_axis_root: expected,
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact::new("isotherm.csv", isotherm_table(&points).to_csv()),
            Artifact::new("hawking.json", json(&summary)?),
        ],
        checks,
    })
}

#[derive(Serialize)]
struct GeodesicSummary {
    r_s: f64,
    kappa: f64,
    q0: f64,
    max_rel_err: f64,
    max_rel_err_half_q0: f64,
    energy_drift: f64,
    near_horizon_warning: bool,
}

fn geodesic(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let params = SchwarzschildParams::new(cfg.real("M"), cfg.units)?;
    let q0 = cfg.real("q0_rel") * params.schwarzschild_radius();
    let (m, p0, stop, steps) = (
        cfg.real("m"),
        cfg.real("p0"),
        cfg.real("stop_fraction"),
        cfg.count("steps"),
    );
    let full = compare_near_horizon(&params, m, q0, p0, stop, steps)?;
    let half = compare_near_horizon(&params, m, 0.5 * q0, p0, stop, steps)?;
    let summary = GeodesicSummary {
        r_s: params.schwarzschild_radius(),
        kappa: params.kappa(),
        q0,
        max_rel_err: full.max_rel_err(),
        max_rel_err_half_q0: half.max_rel_err(),
        energy_drift: full.trajectory.max_relative_drift(),
        near_horizon_warning: full.near_horizon_warning,
    };
    let checks = vec![
        Check::at_most(
            "near-horizon relative error",
            summary.max_rel_err,
            cfg.real("tol_rel_err"),
        ),
        Check::at_most("energy drift", summary.energy_drift, cfg.real("tol_drift")),
        Check::within(
            "error ratio at q0/2",
            summary.max_rel_err_half_q0 / summary.max_rel_err,
            cfg.real("ratio_min"),
            cfg.real("ratio_max"),
        ),
    ];
    Ok(Outcome {
        artifacts: vec![
            Artifact::new("geodesic.csv", full.table().to_csv()),
            Artifact::new("trajectory.csv", full.trajectory.table().to_csv()),
            Artifact::new("geodesic.json", json(&summary)?),
        ],
        checks,
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn paw(cfg: &RunConfig, exec: Execution) -> Result<Outcome, RunError> {
    let j = cfg.real("J");
    let demo_cfg = DemoConfig {
        k: cfg.real("K"),
        d_xi: cfg.count("d_xi"),
        d_gamma: cfg.count("d_gamma"),
        coupling: j,
        kernel_tol: cfg.real("kernel_tol"),
        t_window: cfg.real("t_window") / j,
        n_times: cfg.count("n_times"),
        tail_tol: cfg.real("tail_tol"),
    };
    let demo = resonant_demo(&demo_cfg, exec)?;
    let dense = spectrum(&demo.system)?;
    let kd = kronecker_difference(&demo.system)?;
    let spectrum_dev = dense
        .iter()
        .zip(&kd)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let geom = SupportGeometry {
        energy: j,
        m: cfg.real("m"),
        a: cfg.real("a"),
        coupling: j,
    };
    let q0 = geom.apex()?;
    let t_max = cfg.real("support_t_max") / j;
    let ts = linspace(-t_max, t_max, cfg.count("support_n_t"));
    let n_q = cfg.count("support_n_q");
    let qs: Vec<f64> = (1..=n_q)
        .map(|i| 1.25 * q0 * i as f64 / n_q as f64)
        .collect();
    let cells = spacetime_support(
        &demo.state,
        &demo.rep,
        &ts,
        &qs,
        cfg.real("support_threshold"),
        &geom,
        cfg.real("tail_tol"),
        exec,
    )?;

    let report = demo.report();
    let checks = vec![
        Check::at_most(
            "kernel residual",
            report.max_residual,
            cfg.real("tol_residual"),
        ),
        Check::equals("kernel dimension", report.kernel_dim, demo.matched),
        Check::at_least(
            "conditional fidelity",
            demo.min_fidelity().unwrap_or(f64::NAN),
            cfg.real("fidelity_min"),
        ),
        Check::at_most(
            "spectrum vs Kronecker difference",
            spectrum_dev,
            cfg.real("tol_spectrum"),
        ),
    ];
    Ok(Outcome {
        artifacts: vec![
            Artifact::new("paw.json", json(&report)?),
            Artifact::new("support.csv", support_table(&cells).to_csv()),
        ],
        checks,
    })
}
