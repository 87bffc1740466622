//! Radial Schwarzschild dynamics in proper time, its near-horizon limit,
//! and the half-plane to particle phase-space map.
//!
//! With `L = 0` and height `q = r - r_s` above the horizon the proper-time
//! Hamiltonian
//!
//! ```text
//! h(p, r) = p^2/(2m) + (m/2)(L^2/r^2 + c^2)(1 - r_s/r)
//! ```
//!
//! reduces at first order in `q/r_s` to `p^2/(2m) + m kappa q`, a uniformly
//! accelerated particle with `kappa = c^4/(4GM)`.

use crate::coherent::HalfPlanePoint;
use crate::error::{param, Error, Result};
use crate::table::{fmt_f64, Table};
use crate::units::{Constants, UnitSystem};

/// Ratio `q/r_s` above which the near-horizon form is flagged.
pub const NEAR_HORIZON_WARN_RATIO: f64 = 0.1;

/// Mass and constants with the derived horizon quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzschildParams {
    mass: f64,
    constants: Constants,
    r_s: f64,
    kappa: f64,
    t_h: f64,
}

impl SchwarzschildParams {
    pub fn new(mass: f64, units: UnitSystem) -> Result<Self> {
        Self::with_constants(mass, units.constants())
    }

    pub fn with_constants(mass: f64, constants: Constants) -> Result<Self> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::Domain(format!(
                "mass M = {mass} must be finite and > 0"
            )));
        }
        let Constants {
            gravitational: g,
            light_speed: c,
            hbar,
            ..
        } = constants;
        if [g, c, hbar].iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(param("constants", "G, c and hbar must be finite and > 0"));
        }
        let gm = g * mass;
        Ok(Self {
            mass,
            constants,
            r_s: 2.0 * gm / (c * c),
            kappa: c.powi(4) / (4.0 * gm),
            t_h: c.powi(3) * hbar / (8.0 * std::f64::consts::PI * gm),
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    /// `2GM/c^2`.
    pub fn schwarzschild_radius(&self) -> f64 {
        self.r_s
    }

    /// Surface gravity `c^4/(4GM)`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Hawking temperature as an energy.
    pub fn hawking_temperature(&self) -> f64 {
        self.t_h
    }

    pub fn hawking_temperature_kelvin(&self) -> f64 {
        self.t_h / self.constants.boltzmann
    }
}

/// `c^3 hbar / (8 pi G M)` with `k_B = 1`.
pub fn hawking_temperature(params: &SchwarzschildParams) -> f64 {
    params.hawking_temperature()
}

fn check_mass(m: f64) -> Result<()> {
    if !m.is_finite() || m <= 0.0 {
        return Err(param(
            "m",
            format!("test mass must be finite and > 0, got {m}"),
        ));
    }
    Ok(())
}

/// Full proper-time Hamiltonian outside the horizon.
pub fn full_radial_hamiltonian(
    p: f64,
    r: f64,
    m: f64,
    l: f64,
    params: &SchwarzschildParams,
) -> Result<f64> {
    check_mass(m)?;
    let r_s = params.schwarzschild_radius();
    if !(r > r_s) {
        return Err(Error::Domain(format!("r = {r} is not outside r_s = {r_s}")));
    }
    let c = params.constants().light_speed;
    let lapse = (r - r_s) / r;
    Ok(p * p / (2.0 * m) + 0.5 * m * (l * l / (r * r) + c * c) * lapse)
}

/// `p^2/(2m) + m kappa q`.
pub fn near_horizon_hamiltonian(p: f64, q: f64, m: f64, kappa: f64) -> Result<f64> {
    check_mass(m)?;
    if !(q > 0.0) {
        return Err(Error::Domain(format!("height q = {q} must be > 0")));
    }
    Ok(p * p / (2.0 * m) + m * kappa * q)
}

/// True when `q/r_s` exceeds the near-horizon validity threshold.
pub fn near_horizon_warning(q: f64, params: &SchwarzschildParams) -> bool {
    q / params.schwarzschild_radius() > NEAR_HORIZON_WARN_RATIO
}

/// A one-dimensional radial Hamiltonian in `(q, p)`.
pub trait RadialModel {
    fn energy(&self, q: f64, p: f64) -> f64;
    /// `(dq/dtau, dp/dtau) = (dh/dp, -dh/dq)`.
    fn flow(&self, q: f64, p: f64) -> (f64, f64);
}

/// Full `L = 0` Schwarzschild model in the height variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullRadial {
    pub m: f64,
    pub r_s: f64,
    pub c: f64,
}

impl FullRadial {
    pub fn new(params: &SchwarzschildParams, m: f64) -> Self {
        Self {
            m,
            r_s: params.schwarzschild_radius(),
            c: params.constants().light_speed,
        }
    }
}

impl RadialModel for FullRadial {
    fn energy(&self, q: f64, p: f64) -> f64 {
        p * p / (2.0 * self.m) + 0.5 * self.m * self.c * self.c * q / (self.r_s + q)
    }

    fn flow(&self, q: f64, p: f64) -> (f64, f64) {
        let r = self.r_s + q;
        (
            p / self.m,
            -0.5 * self.m * self.c * self.c * self.r_s / (r * r),
        )
    }
}

/// Uniform-acceleration model `p^2/(2m) + m kappa q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearHorizon {
    pub m: f64,
    pub kappa: f64,
}

impl RadialModel for NearHorizon {
    fn energy(&self, q: f64, p: f64) -> f64 {
        p * p / (2.0 * self.m) + self.m * self.kappa * q
    }

    fn flow(&self, _q: f64, p: f64) -> (f64, f64) {
        (p / self.m, -self.m * self.kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub tau: f64,
    pub q: f64,
    pub p: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Reached `tau_end`.
    Completed,
    /// Stopped at the horizon floor `q <= q_floor`.
    HorizonFloor,
    /// Stopped by a caller-supplied height threshold.
    HeightReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub termination: Termination,
}

impl Trajectory {
    /// `max |h(tau) - h(0)| / |h(0)|`.
    pub fn max_relative_drift(&self) -> f64 {
        let h0 = self.samples[0].h;
        let scale = if h0 != 0.0 { h0.abs() } else { 1.0 };
        self.samples
            .iter()
            .map(|s| (s.h - h0).abs() / scale)
            .fold(0.0, f64::max)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["tau", "q", "p", "h"]);
        for s in &self.samples {
            t.push(vec![
                fmt_f64(s.tau),
                fmt_f64(s.q),
                fmt_f64(s.p),
                fmt_f64(s.h),
            ]);
        }
        t
    }
}

/// Fixed-step integration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integration {
    pub tau_end: f64,
    pub step: f64,
    /// Horizon floor; `None` selects `r_s * 1e-12`.
    pub q_floor: Option<f64>,
    /// Optional early stop once `q <= stop_height`.
    pub stop_height: Option<f64>,
}

impl Integration {
    pub fn new(tau_end: f64, step: f64) -> Self {
        Self {
            tau_end,
            step,
            q_floor: None,
            stop_height: None,
        }
    }
}

/// Classic fixed-step RK4 on `(q, p)`.
pub fn integrate<M: RadialModel>(
    model: &M,
    q0: f64,
    p0: f64,
    ctl: &Integration,
    default_floor: f64,
) -> Result<Trajectory> {
    if !(ctl.step > 0.0) || !ctl.step.is_finite() {
        return Err(Error::Numerical(format!(
            "step must be finite and > 0, got {}",
            ctl.step
        )));
    }
    if !(ctl.tau_end > 0.0) || !ctl.tau_end.is_finite() {
        return Err(param(
            "tau_end",
            format!("must be finite and > 0, got {}", ctl.tau_end),
        ));
    }
    if !(q0 > 0.0) || !q0.is_finite() || !p0.is_finite() {
        return Err(Error::Domain(format!(
            "initial state (q0, p0) = ({q0}, {p0}) is invalid"
        )));
    }
    let floor = ctl.q_floor.unwrap_or(default_floor);
    let n_steps = (ctl.tau_end / ctl.step).ceil() as usize;
    let mut samples = Vec::with_capacity(n_steps + 1);
    let (mut q, mut p) = (q0, p0);
    samples.push(Sample {
        tau: 0.0,
        q,
        p,
        h: model.energy(q, p),
    });
    let mut termination = Termination::Completed;
    for i in 1..=n_steps {
        let tau = (i as f64 * ctl.step).min(ctl.tau_end);
        let h = tau - samples[i - 1].tau;
        let (k1q, k1p) = model.flow(q, p);
        let (k2q, k2p) = model.flow(q + 0.5 * h * k1q, p + 0.5 * h * k1p);
        let (k3q, k3p) = model.flow(q + 0.5 * h * k2q, p + 0.5 * h * k2p);
        let (k4q, k4p) = model.flow(q + h * k3q, p + h * k3p);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if !q.is_finite() || !p.is_finite() {
            return Err(Error::Numerical(format!("non-finite state at tau = {tau}")));
        }
        samples.push(Sample {
            tau,
            q,
            p,
            h: model.energy(q, p),
        });
        if q <= floor {
            termination = Termination::HorizonFloor;
            break;
        }
        if ctl.stop_height.is_some_and(|stop| q <= stop) {
            termination = Termination::HeightReached;
            break;
        }
    }
    Ok(Trajectory {
        samples,
        termination,
    })
}

/// RK4 integration of the full `L = 0` radial geodesic.
pub fn integrate_radial_geodesic(
    params: &SchwarzschildParams,
    m: f64,
    q0: f64,
    p0: f64,
    ctl: &Integration,
) -> Result<Trajectory> {
    check_mass(m)?;
    let model = FullRadial::new(params, m);
    integrate(&model, q0, p0, ctl, params.schwarzschild_radius() * 1e-12)
}

/// Largest height difference between runs at `step` and `step/2`, sampled
/// at the coarse grid.
pub fn step_halving_error(
    params: &SchwarzschildParams,
    m: f64,
    q0: f64,
    p0: f64,
    ctl: &Integration,
) -> Result<f64> {
    let coarse = integrate_radial_geodesic(params, m, q0, p0, ctl)?;
    let fine_ctl = Integration {
        step: ctl.step / 2.0,
        ..*ctl
    };
    let fine = integrate_radial_geodesic(params, m, q0, p0, &fine_ctl)?;
    Ok(coarse
        .samples
        .iter()
        .zip(fine.samples.iter().step_by(2))
        .map(|(a, b)| (a.q - b.q).abs())
        .fold(0.0, f64::max))
}

/// Closed-form near-horizon height `q0 + p0 tau/m - kappa tau^2/2`.
pub fn near_horizon_height(q0: f64, p0: f64, m: f64, kappa: f64, tau: f64) -> f64 {
    q0 + p0 * tau / m - 0.5 * kappa * tau * tau
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub tau: f64,
    pub q_full: f64,
    pub q_approx: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicComparison {
    pub rows: Vec<ComparisonRow>,
    pub trajectory: Trajectory,
    pub near_horizon_warning: bool,
}

impl GeodesicComparison {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_err).fold(0.0, f64::max)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["tau", "q_full", "q_approx", "rel_err"]);
        for r in &self.rows {
            t.push(vec![
                fmt_f64(r.tau),
                fmt_f64(r.q_full),
                fmt_f64(r.q_approx),
                fmt_f64(r.rel_err),
            ]);
        }
        t
    }
}

/// Integrates the full geodesic from `q0` until the height has dropped to
/// `stop_fraction * q0` and compares it with the near-horizon closed form.
/// The step is `t_stop / steps` where `t_stop` is the near-horizon time to
/// reach the stop height.
pub fn compare_near_horizon(
    params: &SchwarzschildParams,
    m: f64,
    q0: f64,
    p0: f64,
    stop_fraction: f64,
    steps: usize,
) -> Result<GeodesicComparison> {
    if !(0.0..1.0).contains(&stop_fraction) {
        return Err(param(
            "stop_fraction",
            format!("must lie in [0, 1), got {stop_fraction}"),
        ));
    }
    if steps == 0 {
        return Err(param("steps", "must be positive"));
    }
    let kappa = params.kappa();
    let stop = stop_fraction * q0;
    // near-horizon time to fall from q0 to stop
    let v0 = p0 / m;
    let t_stop = (v0 + (v0 * v0 + 2.0 * kappa * (q0 - stop)).sqrt()) / kappa;
    let ctl = Integration {
        tau_end: 2.0 * t_stop,
        step: t_stop / steps as f64,
        q_floor: None,
        stop_height: Some(stop),
    };
    let trajectory = integrate_radial_geodesic(params, m, q0, p0, &ctl)?;
    let rows = trajectory
        .samples
        .iter()
        .filter(|s| s.q >= stop)
        .map(|s| {
            let q_approx = near_horizon_height(q0, p0, m, kappa, s.tau);
            ComparisonRow {
                tau: s.tau,
                q_full: s.q,
                q_approx,
                rel_err: (s.q - q_approx).abs() / s.q,
            }
        })
        .collect();
    Ok(GeodesicComparison {
        rows,
        trajectory,
        near_horizon_warning: near_horizon_warning(q0, params),
    })
}

/// Image `(p, q)` of a half-plane point under the energy-preserving map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub p: f64,
    pub q: f64,
    /// False when `q <= 0`, outside the near-horizon chart.
    pub valid: bool,
}

fn check_map_params(m: f64, a: f64, j: f64) -> Result<()> {
    check_mass(m)?;
    if !a.is_finite() || a <= 0.0 {
        return Err(param(
            "a",
            format!("acceleration must be finite and > 0, got {a}"),
        ));
    }
    if !j.is_finite() || j <= 0.0 {
        return Err(param(
            "J",
            format!("coupling must be finite and > 0, got {j}"),
        ));
    }
    Ok(())
}

/// `p = m a v/J`, `q = J w/(m a) - a v^2/(2 J^2)`, so that
/// `p^2/(2m) + m a q = J w`.
pub fn halfplane_to_phase_space(pt: HalfPlanePoint, m: f64, a: f64, j: f64) -> Result<PhasePoint> {
    check_map_params(m, a, j)?;
    let (v, w) = (pt.v(), pt.w());
    let p = m * a * v / j;
    let q = j * w / (m * a) - a * v * v / (2.0 * j * j);
    Ok(PhasePoint {
        p,
        q,
        valid: q > 0.0,
    })
}

/// Inverse map on the chart `q > 0`.
pub fn phase_space_to_halfplane(p: f64, q: f64, m: f64, a: f64, j: f64) -> Result<HalfPlanePoint> {
    check_map_params(m, a, j)?;
    let v = j * p / (m * a);
    let w = (p * p / (2.0 * m) + m * a * q) / j;
    HalfPlanePoint::new(v, w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmergentSample {
    pub t: f64,
    pub p: f64,
    pub q: f64,
    /// `t` is past the horizon crossing `sqrt(2 q0/a)`.
    pub beyond_horizon: bool,
}

/// `p(t) = m a t`, `q(t) = q0 - a t^2/2` with `q0 = E/(m a)`.
pub fn emergent_trajectory(energy: f64, m: f64, a: f64, ts: &[f64]) -> Result<Vec<EmergentSample>> {
    check_mass(m)?;
    if !energy.is_finite() || energy <= 0.0 {
        return Err(param(
            "E",
            format!("energy must be finite and > 0, got {energy}"),
        ));
    }
    if !a.is_finite() || a <= 0.0 {
        return Err(param(
            "a",
            format!("acceleration must be finite and > 0, got {a}"),
        ));
    }
    let q0 = energy / (m * a);
    let t_star = horizon_crossing_time(energy, m, a);
    Ok(ts
        .iter()
        .map(|&t| EmergentSample {
            t,
            p: m * a * t,
            q: q0 - 0.5 * a * t * t,
            beyond_horizon: t.abs() > t_star,
        })
        .collect())
}

/// `sqrt(2 q0 / a)` with `q0 = E/(m a)`.
pub fn horizon_crossing_time(energy: f64, m: f64, a: f64) -> f64 {
    (2.0 * energy / (m * a * a)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::SOLAR_MASS_KG;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn natural(m: f64) -> SchwarzschildParams {
        SchwarzschildParams::new(m, UnitSystem::Natural).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let p = natural(1.0);
        assert_eq!(p.schwarzschild_radius(), 2.0);
        assert_eq!(p.kappa(), 0.25);
        assert_abs_diff_eq!(hawking_temperature(&p), 1.0 / (8.0 * PI), epsilon = 1e-16);
        assert_eq!(format!("{:.6}", hawking_temperature(&p)), "0.039789");
        assert_abs_diff_eq!(
            hawking_temperature(&natural(2.0)) / hawking_temperature(&p),
            0.5,
            epsilon = 1e-15
        );
        assert!(SchwarzschildParams::new(0.0, UnitSystem::Natural).is_err());
        assert!(SchwarzschildParams::new(-1.0, UnitSystem::Si).is_err());
    }

    #[test]
    fn solar_mass_hawking_temperature() {
        let p = SchwarzschildParams::new(SOLAR_MASS_KG, UnitSystem::Si).unwrap();
        let t = p.hawking_temperature_kelvin();
        assert_eq!(format!("{t:.2e}"), "6.17e-8");
        let c = p.constants().light_speed;
        let rel = (p.schwarzschild_radius() * p.kappa() - c * c / 2.0).abs() / (c * c / 2.0);
        assert!(rel <= 1e-12);
    }

    #[test]
    fn full_hamiltonian_limits() {
        let par = natural(1.0);
        let far = full_radial_hamiltonian(0.0, 1e12, 1.0, 0.0, &par).unwrap();
        assert_abs_diff_eq!(far, 0.5, epsilon = 1e-11);
        let twice = full_radial_hamiltonian(0.0, 4.0, 3.0, 0.0, &par).unwrap();
        assert_abs_diff_eq!(twice, 3.0 / 4.0, epsilon = 1e-15);
        let near = full_radial_hamiltonian(0.0, 2.0 * (1.0 + 1e-14), 1.0, 0.0, &par).unwrap();
        assert!(near.abs() < 1e-13);
        assert!(full_radial_hamiltonian(0.0, 2.0, 1.0, 0.0, &par).is_err());
        assert!(full_radial_hamiltonian(0.0, 3.0, 0.0, 0.0, &par).is_err());
    }

    #[test]
    fn near_horizon_form() {
        assert_abs_diff_eq!(
            near_horizon_hamiltonian(1.0, 1.0, 1.0, 0.25).unwrap(),
            0.75,
            epsilon = 1e-15
        );
        assert!(near_horizon_hamiltonian(0.0, 1e-300, 1.0, 0.25).unwrap() < 1e-299);
        assert!(near_horizon_hamiltonian(0.0, 0.0, 1.0, 0.25).is_err());
        let par = natural(1.0);
        for q in [1e-6, 1e-4, 2e-2] {
            let full = full_radial_hamiltonian(0.3, 2.0 + q, 1.0, 0.0, &par).unwrap();
            let near = near_horizon_hamiltonian(0.3, q, 1.0, par.kappa()).unwrap();
            let bound = par.kappa() * q * (q / 2.0) * 1.01;
            assert!((full - near).abs() <= bound, "q={q}");
        }
        assert!(near_horizon_warning(0.3, &par));
        assert!(!near_horizon_warning(0.1, &par));
    }

    #[test]
    fn integrator_rejects_bad_controls() {
        let par = natural(1.0);
        assert!(matches!(
            integrate_radial_geodesic(&par, 1.0, 1e-3, 0.0, &Integration::new(1.0, 0.0)),
            Err(Error::Numerical(_))
        ));
        assert!(
            integrate_radial_geodesic(&par, 1.0, -1e-3, 0.0, &Integration::new(1.0, 1e-3)).is_err()
        );
    }

    #[test]
    fn infall_conserves_energy_and_accelerates_inward() {
        let par = natural(1.0);
        let q0 = 2e-3;
        let traj =
            integrate_radial_geodesic(&par, 1.0, q0, 0.0, &Integration::new(0.12, 1e-4)).unwrap();
        assert!(
            traj.max_relative_drift() <= 1e-9,
            "{}",
            traj.max_relative_drift()
        );
        assert!(traj.samples.windows(2).all(|w| w[1].p < w[0].p));
        assert!(traj.samples.windows(2).all(|w| w[1].tau > w[0].tau));
        let err = step_halving_error(&par, 1.0, q0, 0.0, &Integration::new(0.08, 1e-3)).unwrap();
        assert!(err < 1e-12);
    }

    #[test]
    fn horizon_floor_stops_integration() {
        let par = natural(1.0);
        let ctl = Integration {
            q_floor: Some(1e-4),
            ..Integration::new(10.0, 1e-3)
        };
        let traj = integrate_radial_geodesic(&par, 1.0, 1e-3, 0.0, &ctl).unwrap();
        assert_eq!(traj.termination, Termination::HorizonFloor);
        assert!(traj.samples.last().unwrap().q <= 1e-4);
    }

    #[test]
    fn near_horizon_limit_matches_closed_form() {
        let par = natural(1.0);
        let cmp =
            compare_near_horizon(&par, 1.0, 1e-3 * par.schwarzschild_radius(), 0.0, 0.5, 4000)
                .unwrap();
        assert!(cmp.max_rel_err() <= 0.01);
        assert!(cmp.max_rel_err() > 0.0);
        assert!(!cmp.near_horizon_warning);
        assert_eq!(cmp.trajectory.termination, Termination::HeightReached);
        let half = compare_near_horizon(
            &par,
            1.0,
            0.5e-3 * par.schwarzschild_radius(),
            0.0,
            0.5,
            4000,
        )
        .unwrap();
        let ratio = half.max_rel_err() / cmp.max_rel_err();
        assert!((0.4..=0.6).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn map_pullback_spot_values() {
        let pt = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let ph = halfplane_to_phase_space(pt, 2.0, 0.5, 3.0).unwrap();
        assert_eq!(ph.p, 0.0);
        assert_abs_diff_eq!(ph.q, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            near_horizon_hamiltonian(ph.p, ph.q, 2.0, 0.5).unwrap(),
            3.0,
            epsilon = 1e-15
        );
        let far = halfplane_to_phase_space(HalfPlanePoint::new(100.0, 1.0).unwrap(), 1.0, 1.0, 1.0)
            .unwrap();
        assert!(!far.valid);
        assert!(halfplane_to_phase_space(pt, 1.0, 0.0, 1.0).is_err());
        let back = phase_space_to_halfplane(ph.p, ph.q, 2.0, 0.5, 3.0).unwrap();
        assert_abs_diff_eq!(back.w(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn emergent_trajectory_spot_values() {
        let (e, m, a) = (2.0, 1.5, 0.25);
        let q0 = e / (m * a);
        let t_star = horizon_crossing_time(e, m, a);
        let pts = emergent_trajectory(e, m, a, &[0.0, 0.5 * t_star, t_star, 1.5 * t_star]).unwrap();
        assert_eq!((pts[0].p, pts[0].q), (0.0, q0));
        assert_abs_diff_eq!(pts[2].q, 0.0, epsilon = 1e-14);
        assert!(!pts[2].beyond_horizon);
        assert!(pts[3].beyond_horizon);
        for s in &pts {
            let h = s.p * s.p / (2.0 * m) + m * a * s.q;
            assert!((h - e).abs() <= 1e-12 * e);
        }
    }
}
