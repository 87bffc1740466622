//! Oracle comparisons shared by the command-line front end and the
//! acceptance suite. Each returns the measured deviation; tolerances are
//! applied by the caller.

use num_complex::Complex64;

use crate::coherent::{
    classical_energy, coherent_coefficients, coherent_state, overlap, required_cutoff, DiskPoint,
};
use crate::error::{param, Result};
use crate::exec::Execution;
use crate::linalg::{leading_block, max_abs, CMatrix};
use crate::su11::{HamiltonianXi, Su11Rep};
use crate::two_mode::{two_mode_energy, two_mode_squeezed, ThermalState, TwoModeConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraCheck {
    pub k: f64,
    pub cutoff: usize,
    pub commutator_residual: f64,
    /// Interior deviation of the Casimir from `(K-1)/K`.
    pub casimir_residual: f64,
}

pub fn algebra_check(k: f64, cutoff: usize) -> Result<AlgebraCheck> {
    let rep = Su11Rep::new(k, cutoff)?;
    let n = rep.interior_dim();
    let target = CMatrix::identity(n, n) * Complex64::from((k - 1.0) / k);
    Ok(AlgebraCheck {
        k,
        cutoff,
        commutator_residual: rep.commutator_residual(),
        casimir_residual: max_abs(&(leading_block(&rep.casimir_matrix(), n) - target)),
    })
}

/// `|<xi1|xi2>_series - <xi1|xi2>_closed|` with both Fock vectors carried
/// until their tails fall below `tail_tol`.
pub fn overlap_series_deviation(
    k: f64,
    xi1: DiskPoint,
    xi2: DiskPoint,
    tail_tol: f64,
) -> Result<f64> {
    let dim = required_cutoff(k, xi1.abs().max(xi2.abs()), tail_tol)? + 1;
    let a = coherent_coefficients(k, xi1, dim);
    let b = coherent_coefficients(k, xi2, dim);
    Ok((a.dotc(&b) - overlap(xi1, xi2, k)).norm())
}

/// Polar grid of `n x n` disk points: radii `r_max * i/(n-1)`, angles `2 pi j/n`.
pub fn disk_grid(n: usize, r_max: f64) -> Result<Vec<DiskPoint>> {
    if n < 2 {
        return Err(param(
            "grid",
            format!("needs at least 2 points per axis, got {n}"),
        ));
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let r = r_max * i as f64 / (n - 1) as f64;
        for j in 0..n {
            out.push(DiskPoint::from_polar(
                r,
                std::f64::consts::TAU * j as f64 / n as f64,
            )?);
        }
    }
    Ok(out)
}

/// Largest `|<xi|H_xi|xi> - J w| / (J w)` over `points`; one truncation
/// sized for the outermost point serves the whole set.
pub fn energy_identity_error(
    k: f64,
    coupling: f64,
    points: &[DiskPoint],
    tail_tol: f64,
    exec: Execution,
) -> Result<f64> {
    let r_max = points.iter().map(|p| p.abs()).fold(0.0, f64::max);
    let cutoff = required_cutoff(k, r_max, tail_tol)?.max(2) + 2;
    let rep = Su11Rep::new(k, cutoff)?;
    let h = HamiltonianXi::new(&rep, coupling)?;
    let errs = exec.try_map(points, |&xi| -> Result<f64> {
        let e = coherent_state(&rep, xi, tail_tol)?.expect(h.matrix()).re;
        let w = classical_energy(xi, coupling);
        Ok((e - w).abs() / w)
    })?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// Deviation of a reduced state from `p_n = (1-|xi|^2)|xi|^{2n}` with zero
/// coherences.
pub fn geometric_deviation(state: &ThermalState, xi: DiskPoint) -> f64 {
    let r = xi.abs2();
    state
        .probs
        .iter()
        .enumerate()
        .map(|(n, p)| (p - (1.0 - r) * r.powi(n as i32)).abs())
        .fold(state.max_offdiag, f64::max)
}

/// Single-pair energy and number expectations against the `K = 1/2`
/// generator matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossRepresentation {
    pub energy_two_mode: f64,
    pub energy_su11: f64,
    pub k0_two_mode: f64,
    pub k0_su11: f64,
}

impl CrossRepresentation {
    pub fn deviation(&self) -> f64 {
        (self.energy_two_mode - self.energy_su11)
            .abs()
            .max((self.k0_two_mode - self.k0_su11).abs())
    }
}

pub fn cross_representation(
    xi: DiskPoint,
    coupling: f64,
    tail_tol: f64,
) -> Result<CrossRepresentation> {
    let cutoff = required_cutoff(0.5, xi.abs(), tail_tol)?.max(2) + 2;
    let cfg = TwoModeConfig::new(1, coupling, cutoff)?;
    let pair = two_mode_squeezed(xi, &cfg, tail_tol)?;
    let norm2 = pair.joint().norm_squared();
    let k0_two_mode = (0..=cutoff)
        .map(|n| pair.amplitude(n, n).norm_sqr() * (1.0 + 2.0 * n as f64))
        .sum::<f64>()
        / norm2;
    let rep = Su11Rep::new(0.5, cutoff)?;
    let h = HamiltonianXi::new(&rep, coupling)?;
    let cs = coherent_state(&rep, xi, tail_tol)?;
    Ok(CrossRepresentation {
        energy_two_mode: two_mode_energy(&pair, &cfg),
        energy_su11: cs.expect(h.matrix()).re,
        k0_two_mode,
        k0_su11: cs.expect(rep.k0()).re,
    })
}
