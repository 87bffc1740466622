//! Two-mode bosonic realisation of the source.
//!
//! With `N` pairs `(a_i, b_i)` and no unpaired excitations the Bargmann
//! index is `K = N/2` and the source Hamiltonian splits into independent
//! pair terms
//!
//! ```text
//! H_i = (J/N) [1 + a†a + b†b - i (a†b† - a b)]
//! ```
//!
//! A coherent state is a product of identical two-mode squeezed states
//! `sqrt(1-|xi|^2) sum_n xi^n |n>|n>`. Tracing out one boson leaves a
//! geometric (thermal) state for the escaping mode R, whose effective
//! frequency and temperature are fixed by `exp(-omega/T) = |xi|^2` and the
//! energy-split condition `omega N coth(omega/2T) = J w`.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::coherent::{classical_energy, DiskPoint};
use crate::error::{param, Error, Result};
use crate::exec::Execution;
use crate::linalg::{CMatrix, CVector};
use crate::table::{fmt_f64, Table};

/// Pair count, coupling and per-mode Fock cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeConfig {
    n_pairs: usize,
    coupling: f64,
    n_cut: usize,
}

impl TwoModeConfig {
    pub fn new(n_pairs: usize, coupling: f64, n_cut: usize) -> Result<Self> {
        if n_pairs == 0 {
            return Err(param("N_xi", "at least one pair is required"));
        }
        if !coupling.is_finite() || coupling <= 0.0 {
            return Err(param(
                "J",
                format!("coupling must be finite and > 0, got {coupling}"),
            ));
        }
        if n_cut < 2 {
            return Err(param("n_cut", format!("must be >= 2, got {n_cut}")));
        }
        Ok(Self {
            n_pairs,
            coupling,
            n_cut,
        })
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    /// Unpaired excitations; fixed at zero.
    pub fn delta_n(&self) -> usize {
        0
    }

    /// `K = N/2`.
    pub fn k(&self) -> f64 {
        self.n_pairs as f64 / 2.0
    }

    /// Per-pair energy scale `J/N`.
    pub fn pair_scale(&self) -> f64 {
        self.coupling / self.n_pairs as f64
    }

    /// Dimension of one pair's truncated space, `(n_cut+1)^2`.
    pub fn pair_dim(&self) -> usize {
        (self.n_cut + 1) * (self.n_cut + 1)
    }

    fn index(&self, na: usize, nb: usize) -> usize {
        na * (self.n_cut + 1) + nb
    }
}

/// Dense matrix of one pair Hamiltonian on `|n_a> (x) |n_b>`, basis index
/// `n_a (n_cut+1) + n_b`.
pub fn pair_hamiltonian(cfg: &TwoModeConfig) -> CMatrix {
    let dim = cfg.pair_dim();
    let s = cfg.pair_scale();
    let mut h = CMatrix::zeros(dim, dim);
    for na in 0..=cfg.n_cut {
        for nb in 0..=cfg.n_cut {
            let col = cfg.index(na, nb);
            h[(col, col)] = Complex64::new(s * (1.0 + na as f64 + nb as f64), 0.0);
            if na < cfg.n_cut && nb < cfg.n_cut {
                let amp = (((na + 1) * (nb + 1)) as f64).sqrt();
                let row = cfg.index(na + 1, nb + 1);
                // -i a†b† and its adjoint +i a b
                h[(row, col)] = Complex64::new(0.0, -s * amp);
                h[(col, row)] = Complex64::new(0.0, s * amp);
            }
        }
    }
    h
}

/// Matrix-free action of one pair Hamiltonian.
pub fn apply_pair_hamiltonian(cfg: &TwoModeConfig, psi: &CVector) -> CVector {
    let s = cfg.pair_scale();
    let mut out = DVector::from_element(psi.len(), Complex64::new(0.0, 0.0));
    for na in 0..=cfg.n_cut {
        for nb in 0..=cfg.n_cut {
            let col = cfg.index(na, nb);
            let x = psi[col];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            out[col] += x * s * (1.0 + na as f64 + nb as f64);
            if na < cfg.n_cut && nb < cfg.n_cut {
                let amp = (((na + 1) * (nb + 1)) as f64).sqrt();
                out[cfg.index(na + 1, nb + 1)] += x * Complex64::new(0.0, -s * amp);
            }
            if na > 0 && nb > 0 {
                let amp = ((na * nb) as f64).sqrt();
                out[cfg.index(na - 1, nb - 1)] += x * Complex64::new(0.0, s * amp);
            }
        }
    }
    out
}

/// Smallest per-mode cutoff with `|xi|^{2(n_cut+1)} <= tail_tol`.
pub fn required_n_cut(abs_xi: f64, tail_tol: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&abs_xi) {
        return Err(Error::Domain(format!("|xi| = {abs_xi} is not < 1")));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(param(
            "tail_tol",
            format!("must lie in (0, 1), got {tail_tol}"),
        ));
    }
    if abs_xi == 0.0 {
        return Ok(2);
    }
    let lambda = abs_xi * abs_xi;
    let n = (tail_tol.ln() / lambda.ln()).ceil() as usize;
    Ok(n.saturating_sub(1).max(2))
}

/// Two-mode squeezed state of one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModePairState {
    xi: DiskPoint,
    n_cut: usize,
    joint: CVector,
}

impl TwoModePairState {
    pub fn xi(&self) -> DiskPoint {
        self.xi
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn joint(&self) -> &CVector {
        &self.joint
    }

    /// Amplitude on `|na> (x) |nb>`.
    pub fn amplitude(&self, na: usize, nb: usize) -> Complex64 {
        self.joint[na * (self.n_cut + 1) + nb]
    }
}

/// `sqrt(1-|xi|^2) sum_{n <= n_cut} xi^n |n>|n>`.
pub fn two_mode_squeezed(
    xi: DiskPoint,
    cfg: &TwoModeConfig,
    tail_tol: f64,
) -> Result<TwoModePairState> {
    let required = required_n_cut(xi.abs(), tail_tol)?;
    let lambda = xi.abs2();
    if lambda > 0.0 && lambda.powi(cfg.n_cut as i32 + 1) > tail_tol {
        return Err(Error::Truncation {
            cutoff: cfg.n_cut,
            required,
            tail_tol,
        });
    }
    let mut joint = DVector::from_element(cfg.pair_dim(), Complex64::new(0.0, 0.0));
    let norm = xi.deficit().sqrt();
    let mut amp = Complex64::new(norm, 0.0);
    for n in 0..=cfg.n_cut {
        joint[cfg.index(n, n)] = amp;
        amp *= xi.value();
    }
    Ok(TwoModePairState {
        xi,
        n_cut: cfg.n_cut,
        joint,
    })
}

/// `<xi| sum_i H_i |xi>` for the N-pair product state, by additivity over
/// identical pairs.
pub fn two_mode_energy(state: &TwoModePairState, cfg: &TwoModeConfig) -> f64 {
    let psi = state.joint();
    let per_pair = psi.dotc(&apply_pair_hamiltonian(cfg, psi)).re / psi.norm_squared();
    per_pair * cfg.n_pairs as f64
}

/// `|<xi| sum_i H_i |xi> - J w(xi)|`.
pub fn two_mode_energy_check(xi: DiskPoint, cfg: &TwoModeConfig, tail_tol: f64) -> Result<f64> {
    let state = two_mode_squeezed(xi, cfg, tail_tol)?;
    Ok((two_mode_energy(&state, cfg) - classical_energy(xi, cfg.coupling)).abs())
}

/// Partial trace over the partner mode B.
pub fn reduced_density_matrix(state: &TwoModePairState) -> CMatrix {
    let d = state.n_cut + 1;
    let psi = &state.joint;
    CMatrix::from_fn(d, d, |n, m| {
        (0..d).map(|k| psi[n * d + k] * psi[m * d + k].conj()).sum()
    })
}

/// Reduced state of the escaping mode R.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    pub probs: Vec<f64>,
    /// Largest off-diagonal modulus of the reduced density matrix.
    pub max_offdiag: f64,
    pub omega: Option<f64>,
    pub temperature: Option<f64>,
    /// `1/p_0`.
    pub z0: f64,
}

impl ThermalState {
    pub fn trace(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn purity(&self) -> f64 {
        self.probs.iter().map(|p| p * p).sum()
    }

    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    }
}

/// Traces out B; the result is diagonal with `p_n = (1-|xi|^2)|xi|^{2n}`.
pub fn reduce_to_r(state: &TwoModePairState) -> ThermalState {
    let rho = reduced_density_matrix(state);
    let d = rho.nrows();
    let mut max_offdiag = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                max_offdiag = max_offdiag.max(rho[(i, j)].norm());
            }
        }
    }
    let probs: Vec<f64> = (0..d).map(|n| rho[(n, n)].re).collect();
    ThermalState {
        z0: 1.0 / probs[0],
        probs,
        max_offdiag,
        omega: None,
        temperature: None,
    }
}

/// `omega = (J/N)(1 - 2 Im xi/(1+|xi|^2))`.
pub fn effective_frequency(xi: DiskPoint, cfg: &TwoModeConfig) -> Result<f64> {
    let (x, y) = (xi.re(), xi.im());
    // 1 + |xi|^2 - 2 Im xi as a sum of squares
    let omega = cfg.pair_scale() * (x * x + (1.0 - y) * (1.0 - y)) / (1.0 + xi.abs2());
    if omega > 0.0 {
        Ok(omega)
    } else {
        Err(Error::OutOfModel(format!(
            "omega = {omega} <= 0 at xi = {}",
            xi.value()
        )))
    }
}

/// `T = omega / ln |xi|^-2`.
pub fn effective_temperature(xi: DiskPoint, cfg: &TwoModeConfig) -> Result<f64> {
    if xi.abs2() == 0.0 {
        return Err(Error::ZeroTemperature);
    }
    let omega = effective_frequency(xi, cfg)?;
    Ok(omega / (-xi.abs2().ln()))
}

/// Fully populated thermal description of R.
pub fn thermal_state(xi: DiskPoint, cfg: &TwoModeConfig, tail_tol: f64) -> Result<ThermalState> {
    let state = two_mode_squeezed(xi, cfg, tail_tol)?;
    let mut th = reduce_to_r(&state);
    th.omega = Some(effective_frequency(xi, cfg)?);
    th.temperature = Some(effective_temperature(xi, cfg)?);
    Ok(th)
}

/// `|exp(-omega/T) - |xi|^2|`.
pub fn boltzmann_residual(xi: DiskPoint, cfg: &TwoModeConfig) -> Result<f64> {
    let omega = effective_frequency(xi, cfg)?;
    let t = effective_temperature(xi, cfg)?;
    Ok(((-omega / t).exp() - xi.abs2()).abs())
}

/// `|omega N coth(omega/2T) - J w|`.
pub fn energy_split_residual(xi: DiskPoint, cfg: &TwoModeConfig) -> Result<f64> {
    let omega = effective_frequency(xi, cfg)?;
    let t = effective_temperature(xi, cfg)?;
    let lhs = omega * cfg.n_pairs as f64 / (omega / (2.0 * t)).tanh();
    Ok((lhs - classical_energy(xi, cfg.coupling)).abs())
}

/// Mean energy of R including zero point, `omega (nbar + 1/2)`.
pub fn escaping_mode_energy(xi: DiskPoint, cfg: &TwoModeConfig) -> Result<f64> {
    let omega = effective_frequency(xi, cfg)?;
    let lambda = xi.abs2();
    Ok(omega * (lambda / (1.0 - lambda) + 0.5))
}

/// Von Neumann entropy of R,
/// `-ln(1-l) - l/(1-l) ln l` with `l = |xi|^2`.
pub fn entropy_of_r(xi: DiskPoint) -> f64 {
    let l = xi.abs2();
    if l == 0.0 {
        return 0.0;
    }
    -(-l).ln_1p() - l / (1.0 - l) * l.ln()
}

/// JSON summary of the thermal identification at one disk point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalReport {
    pub xi: [f64; 2],
    pub omega: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    #[serde(rename = "Z0")]
    pub z0: f64,
    pub purity: f64,
    pub entropy: f64,
}

pub fn thermal_report(xi: DiskPoint, cfg: &TwoModeConfig, tail_tol: f64) -> Result<ThermalReport> {
    let th = thermal_state(xi, cfg, tail_tol)?;
    Ok(ThermalReport {
        xi: [xi.re(), xi.im()],
        omega: th.omega.unwrap_or(f64::NAN),
        temperature: th.temperature.unwrap_or(f64::NAN),
        z0: 1.0 / xi.deficit(),
        purity: xi.deficit() / (1.0 + xi.abs2()),
        entropy: entropy_of_r(xi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsothermStatus {
    Solved,
    NoSolution,
}

impl IsothermStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            IsothermStatus::Solved => "solved",
            IsothermStatus::NoSolution => "no_solution",
        }
    }
}

/// Root of `T(xi) = T_target` on one ray from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsothermPoint {
    pub angle_deg: f64,
    /// `-ln |xi|` of the root; `|xi|` itself may underflow for tiny targets.
    pub log_radius: f64,
    pub xi: Option<DiskPoint>,
    pub temperature: f64,
    pub residual: f64,
    pub status: IsothermStatus,
}

/// Closed-form real-axis isotherm root `exp(-(J/N)/(2 T))`, where
/// `omega = J/N`.
pub fn real_axis_root(t_target: f64, cfg: &TwoModeConfig) -> f64 {
    (-cfg.pair_scale() / (2.0 * t_target)).exp()
}

/// Isotherm CSV, one row per ray.
pub fn isotherm_table(points: &[IsothermPoint]) -> Table {
    let mut t = Table::new(["angle_deg", "re_xi", "im_xi", "T", "residual", "status"]);
    for p in points {
        let (re, im) = p.xi.map_or((f64::NAN, f64::NAN), |x| (x.re(), x.im()));
        t.push(vec![
            fmt_f64(p.angle_deg),
            fmt_f64(re),
            fmt_f64(im),
            fmt_f64(p.temperature),
            fmt_f64(p.residual),
            p.status.as_str().to_string(),
        ]);
    }
    t
}

const BRACKET_POINTS: usize = 4000;
const MAX_BISECTIONS: usize = 200;

/// Temperature on the ray at angle `theta` as a function of `s = -ln r`.
fn ray_temperature(cfg: &TwoModeConfig, theta: f64, s: f64) -> f64 {
    let r = (-s).exp();
    let (x, y) = (r * theta.cos(), r * theta.sin());
    let omega = cfg.pair_scale() * (x * x + (1.0 - y) * (1.0 - y)) / (1.0 + r * r);
    omega / (2.0 * s)
}

/// Solves `T(xi) = T_target` along each ray, reporting the innermost root.
/// Rays are independent and solved concurrently; output follows input order.
pub fn microstate_isotherm(
    t_target: f64,
    cfg: &TwoModeConfig,
    angles_deg: &[f64],
    exec: Execution,
) -> Result<Vec<IsothermPoint>> {
    if !t_target.is_finite() || t_target <= 0.0 {
        return Err(param(
            "T_target",
            format!("must be finite and > 0, got {t_target}"),
        ));
    }
    exec.try_map(angles_deg, |&angle| solve_ray(t_target, cfg, angle))
}

fn solve_ray(t_target: f64, cfg: &TwoModeConfig, angle_deg: f64) -> Result<IsothermPoint> {
    let theta = angle_deg.to_radians();
    let f = |s: f64| ray_temperature(cfg, theta, s) - t_target;

    // omega <= 2J/N bounds T(s) by J/(N s), so beyond this s the ray is colder than the target
    let s_max = (2.0 * cfg.pair_scale() / t_target).max(1.0) * 2.0;
    let s_min = 1e-12_f64;
    let ratio = (s_min / s_max).ln() / (BRACKET_POINTS - 1) as f64;

    let mut bracket = None;
    let mut prev_s = s_max;
    let mut prev_f = f(s_max);
    for i in 1..BRACKET_POINTS {
        let s = s_max * (ratio * i as f64).exp();
        let fs = f(s);
        if prev_f < 0.0 && fs >= 0.0 {
            bracket = Some((prev_s, s));
            break;
        }
        prev_s = s;
        prev_f = fs;
    }
    let Some((mut cold, mut hot)) = bracket else {
        return Ok(IsothermPoint {
            angle_deg,
            log_radius: f64::NAN,
            xi: None,
            temperature: f64::NAN,
            residual: f64::NAN,
            status: IsothermStatus::NoSolution,
        });
    };

    let mut s = 0.5 * (cold + hot);
    for _ in 0..MAX_BISECTIONS {
        s = 0.5 * (cold + hot);
        let fs = f(s);
        if fs.abs() <= 1e-12 * t_target || (cold - hot) <= 1e-16 * s {
            break;
        }
        if fs < 0.0 {
            cold = s;
        } else {
            hot = s;
        }
    }
    let temperature = ray_temperature(cfg, theta, s);
    let residual = (temperature - t_target).abs();
    if residual > 1e-10 * t_target {
        return Err(Error::Numerical(format!(
            "isotherm ray at {angle_deg} deg did not converge (residual {residual:e})"
        )));
    }
    Ok(IsothermPoint {
        angle_deg,
        log_radius: s,
        xi: DiskPoint::from_polar((-s).exp(), theta).ok(),
        temperature,
        residual,
        status: IsothermStatus::Solved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_residual, kron};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_parts(re, im).unwrap()
    }

    fn cfg(n: usize, n_cut: usize) -> TwoModeConfig {
        TwoModeConfig::new(n, 1.0, n_cut).unwrap()
    }

    /// Builds the pair Hamiltonian from ladder-operator products.
    fn ladder_hamiltonian(c: &TwoModeConfig) -> CMatrix {
        let d = c.n_cut() + 1;
        let a1 = CMatrix::from_fn(d, d, |i, j| {
            if j == i + 1 {
                Complex64::new((j as f64).sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let id = CMatrix::identity(d, d);
        let a = kron(&a1, &id);
        let b = kron(&id, &a1);
        let ad = a.adjoint();
        let bd = b.adjoint();
        let one = CMatrix::identity(d * d, d * d);
        let i = Complex64::i();
        let inner = one + &ad * &a + &bd * &b - (&ad * &bd - &a * &b) * i;
        // a†a etc. on the truncated space differ from the exact operators only at n = n_cut
        inner * Complex64::new(c.pair_scale(), 0.0)
    }

    #[test]
    fn config_validation() {
        assert!(TwoModeConfig::new(0, 1.0, 4).is_err());
        assert!(TwoModeConfig::new(1, -1.0, 4).is_err());
        assert!(TwoModeConfig::new(1, 1.0, 1).is_err());
        let c = cfg(6, 4);
        assert_eq!(c.k(), 3.0);
        assert_eq!(c.delta_n(), 0);
    }

    #[test]
    fn pair_hamiltonian_elements() {
        for n in [1, 3] {
            let c = cfg(n, 6);
            let h = pair_hamiltonian(&c);
            let s = 1.0 / n as f64;
            assert_abs_diff_eq!(h[(0, 0)].re, s, epsilon = 1e-15);
            let idx11 = c.index(1, 1);
            assert_eq!(h[(idx11, 0)], Complex64::new(0.0, -s));
            assert!(hermiticity_residual(&h) <= 1e-14);
        }
    }

    #[test]
    fn pair_hamiltonian_matches_ladder_construction() {
        let c = TwoModeConfig::new(2, 1.3, 5).unwrap();
        let h = pair_hamiltonian(&c);
        let l = ladder_hamiltonian(&c);
        let d = c.n_cut() + 1;
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                // skip the truncation boundary of the ladder product
                let (ia, ib, ja, jb) = (i / d, i % d, j / d, j % d);
                if [ia, ib, ja, jb].contains(&c.n_cut()) {
                    continue;
                }
                assert_abs_diff_eq!((h[(i, j)] - l[(i, j)]).norm(), 0.0, epsilon = 1e-14);
            }
        }
        let psi = CVector::from_fn(h.nrows(), |i, _| {
            Complex64::new(i as f64, 1.0 / (i as f64 + 1.0))
        });
        let diff = &h * &psi - apply_pair_hamiltonian(&c, &psi);
        assert!(diff.norm() <= 1e-12);
    }

    #[test]
    fn squeezed_state_amplitudes() {
        let c = cfg(1, 60);
        let vac = two_mode_squeezed(DiskPoint::origin(), &c, 1e-12).unwrap();
        assert_eq!(vac.amplitude(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(vac.joint().iter().filter(|z| z.norm() != 0.0).count(), 1);
        let st = two_mode_squeezed(dp(0.5, 0.0), &c, 1e-12).unwrap();
        for n in 0..=c.n_cut() {
            assert_abs_diff_eq!(
                st.amplitude(n, n).re,
                0.75_f64.sqrt() * 0.5_f64.powi(n as i32),
                epsilon = 1e-16
            );
            if n > 0 {
                assert_eq!(st.amplitude(n, n - 1), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn squeezed_state_normalised_with_bound_cutoff() {
        for r in [0.1, 0.5, 0.8, 0.9] {
            let n_cut = required_n_cut(r, 1e-13).unwrap();
            let c = cfg(1, n_cut);
            let st = two_mode_squeezed(DiskPoint::from_polar(r, 0.3).unwrap(), &c, 1e-13).unwrap();
            assert_abs_diff_eq!(st.joint().norm(), 1.0, epsilon = 1e-12);
        }
        let err = two_mode_squeezed(dp(0.9, 0.0), &cfg(1, 10), 1e-12).unwrap_err();
        assert!(matches!(err, Error::Truncation { required, .. } if required > 10));
    }

    #[test]
    fn energy_spot_values() {
        let c1 = TwoModeConfig::new(1, 1.0, 80).unwrap();
        let st = two_mode_squeezed(dp(0.5, 0.0), &c1, 1e-14).unwrap();
        assert_abs_diff_eq!(two_mode_energy(&st, &c1), 5.0 / 3.0, epsilon = 1e-12);
        for n in [1, 2, 7] {
            let c = TwoModeConfig::new(n, 1.0, 10).unwrap();
            let vac = two_mode_squeezed(DiskPoint::origin(), &c, 1e-14).unwrap();
            assert_abs_diff_eq!(two_mode_energy(&vac, &c), 1.0, epsilon = 1e-14);
        }
        let c2 = TwoModeConfig::new(2, 1.0, 80).unwrap();
        let st = two_mode_squeezed(dp(0.0, 0.5), &c2, 1e-14).unwrap();
        assert_abs_diff_eq!(two_mode_energy(&st, &c2), 1.0 / 3.0, epsilon = 1e-12);
        assert!(two_mode_energy_check(dp(0.3, -0.6), &c2, 1e-14).unwrap() <= 1e-10);
    }

    #[test]
    fn reduced_state_is_geometric() {
        let c = cfg(1, 60);
        let st = two_mode_squeezed(dp(0.5, 0.0), &c, 1e-12).unwrap();
        let th = reduce_to_r(&st);
        assert_eq!(th.max_offdiag, 0.0);
        for (n, p) in th.probs.iter().enumerate() {
            assert_abs_diff_eq!(*p, 0.75 * 0.25_f64.powi(n as i32), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(th.purity(), 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(th.trace(), 1.0, epsilon = 1e-12);
        let vac = reduce_to_r(&two_mode_squeezed(DiskPoint::origin(), &c, 1e-12).unwrap());
        assert_eq!(vac.purity(), 1.0);
        assert_eq!(vac.entropy(), 0.0);
    }

    #[test]
    fn frequency_and_temperature_spot_values() {
        for n in [1, 4] {
            let c = cfg(n, 10);
            let s = 1.0 / n as f64;
            assert_abs_diff_eq!(
                effective_frequency(dp(0.5, 0.0), &c).unwrap(),
                s,
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                effective_frequency(dp(0.0, 0.5), &c).unwrap(),
                0.2 * s,
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                effective_frequency(DiskPoint::origin(), &c).unwrap(),
                s,
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                effective_temperature(dp(0.5, 0.0), &c).unwrap(),
                s / 4.0_f64.ln(),
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(1.0 / 4.0_f64.ln(), 0.721348, epsilon = 1e-6);
        assert_eq!(
            effective_temperature(DiskPoint::origin(), &cfg(1, 4)),
            Err(Error::ZeroTemperature)
        );
    }

    #[test]
    fn temperature_grows_towards_the_rim() {
        let c = cfg(3, 4);
        let mut last = 0.0;
        for i in 1..200 {
            let r = i as f64 / 200.0;
            let t = effective_temperature(dp(r, 0.0), &c).unwrap();
            assert!(t > last);
            last = t;
        }
        assert!(effective_temperature(dp(1.0 - 1e-12, 0.0), &c).unwrap() > 1e10);
    }

    #[test]
    fn energy_split_spot_values() {
        let c = cfg(1, 4);
        assert!(energy_split_residual(dp(0.5, 0.0), &c).unwrap() <= 1e-14);
        let t = effective_temperature(dp(0.5, 0.0), &c).unwrap();
        assert_abs_diff_eq!(1.0 / (1.0 / (2.0 * t)).tanh(), 5.0 / 3.0, epsilon = 1e-14);
        for n in [1, 5] {
            let c = cfg(n, 4);
            let e = escaping_mode_energy(dp(0.0, 0.5), &c).unwrap();
            assert_abs_diff_eq!(e, 1.0 / (6.0 * n as f64), epsilon = 1e-15);
            assert_abs_diff_eq!(
                e,
                classical_energy(dp(0.0, 0.5), 1.0) / (2.0 * n as f64),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn entropy_spot_values() {
        assert_eq!(entropy_of_r(DiskPoint::origin()), 0.0);
        assert_abs_diff_eq!(entropy_of_r(dp(0.5, 0.0)), 0.749780, epsilon = 1e-6);
        let st = two_mode_squeezed(dp(0.5, 0.0), &cfg(1, 60), 1e-16).unwrap();
        assert_abs_diff_eq!(
            reduce_to_r(&st).entropy(),
            entropy_of_r(dp(0.5, 0.0)),
            epsilon = 1e-12
        );
        let mut last = 0.0;
        for i in 1..100 {
            let s = entropy_of_r(dp(i as f64 / 100.0, 0.0));
            assert!(s > last);
            last = s;
        }
    }

    #[test]
    fn isotherm_real_axis_and_hawking_value() {
        for (n, t) in [(1, 0.05), (3, 0.7), (10, 2.0)] {
            let c = cfg(n, 4);
            let pts = microstate_isotherm(t, &c, &[0.0, 180.0], Execution::Sequential).unwrap();
            let want = (-1.0 / (2.0 * n as f64 * t)).exp();
            assert_abs_diff_eq!(real_axis_root(t, &c), want, epsilon = 1e-15);
            for p in pts {
                assert_eq!(p.status, IsothermStatus::Solved);
                assert!(p.residual <= 1e-10 * t);
                assert_abs_diff_eq!(p.xi.unwrap().abs(), want, epsilon = 1e-10 * want);
            }
        }
        let t_h = 1.0 / (8.0 * PI);
        let p = microstate_isotherm(t_h, &cfg(1, 4), &[0.0], Execution::Sequential).unwrap()[0];
        assert_abs_diff_eq!(
            p.xi.unwrap().re(),
            (-4.0 * PI).exp(),
            epsilon = 1e-10 * (-4.0 * PI).exp()
        );
        assert_abs_diff_eq!((-4.0 * PI).exp(), 3.4873e-6, epsilon = 1e-9);
    }

    #[test]
    fn isotherm_upper_ray_is_bounded() {
        let c = cfg(1, 4);
        let pts = microstate_isotherm(1.0, &c, &[90.0, 45.0], Execution::Parallel).unwrap();
        assert_eq!(pts[0].status, IsothermStatus::NoSolution);
        assert_eq!(pts[1].status, IsothermStatus::Solved);
        let low = microstate_isotherm(0.1, &c, &[90.0], Execution::Parallel).unwrap();
        assert_eq!(low[0].status, IsothermStatus::Solved);
        assert!(microstate_isotherm(0.0, &c, &[0.0], Execution::Parallel).is_err());
    }

    #[test]
    fn isotherm_solutions_lie_inside_disk() {
        let c = TwoModeConfig::new(4, 2.0, 4).unwrap();
        let angles: Vec<f64> = (0..36).map(|i| i as f64 * 10.0).collect();
        let pts = microstate_isotherm(0.3, &c, &angles, Execution::Parallel).unwrap();
        for p in pts.iter().filter(|p| p.status == IsothermStatus::Solved) {
            let xi = p.xi.unwrap();
            assert!(xi.abs() < 1.0);
            assert!((effective_temperature(xi, &c).unwrap() - 0.3).abs() <= 1e-10 * 0.3);
        }
        let seq = microstate_isotherm(0.3, &c, &angles, Execution::Sequential).unwrap();
        assert_eq!(format!("{pts:?}"), format!("{seq:?}"));
    }
}
