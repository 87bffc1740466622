//! Quantum-to-classical crossover diagnostics: resolution of the identity,
//! overlap concentration with growing K, and relative energy fluctuations.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coherent::{
    classical_energy, coherent_state, overlap, overlap_log_slope, required_cutoff, DiskPoint,
};
use crate::error::{param, Error, Result};
use crate::exec::Execution;
use crate::quadrature::Rule;
use crate::su11::{HamiltonianXi, Su11Rep};
use crate::table::{fmt_f64, Table};

/// Tensor Gauss–Legendre specification over `(u = |xi|^2, arg xi)`.
///
/// The radial interval is split into `radial_panels` panels graded
/// geometrically towards `u = 1`; the last sliver `[1 - 2^-P, 1]` is added
/// from the boundary asymptotics of the integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub radial_order: usize,
    pub angular_order: usize,
    pub radial_panels: usize,
    pub adaptive: bool,
    pub target: f64,
    pub max_order: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            radial_order: 8,
            angular_order: 32,
            radial_panels: 48,
            adaptive: true,
            target: 1e-6,
            max_order: 1024,
        }
    }
}

impl QuadSpec {
    /// Single-panel, non-adaptive rule.
    pub fn fixed(radial_order: usize, angular_order: usize) -> Self {
        Self {
            radial_order,
            angular_order,
            radial_panels: 1,
            adaptive: false,
            ..Self::default()
        }
    }
}

/// Probe states used when none are supplied.
pub fn default_probes() -> Vec<DiskPoint> {
    [(0.0, 0.0), (0.3, 0.2), (0.6, 0.0), (0.0, -0.5)]
        .iter()
        .map(|&(re, im)| DiskPoint::from_parts(re, im).expect("probe inside disk"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResolution {
    /// `max_probe |integral - 1|`.
    pub residual: f64,
    pub integrals: Vec<f64>,
    pub radial_order: usize,
    pub angular_order: usize,
    /// False when adaptive refinement hit `max_order` first.
    pub converged: bool,
    pub target: f64,
}

impl IdentityResolution {
    /// Residual meets the target; coarse rules are flagged by returning false.
    pub fn resolved(&self) -> bool {
        self.residual <= self.target
    }
}

/// Integrates `dmu(xi) |<xi0|xi>|^2` over the disk for every probe and
/// reports the worst deviation from 1.
pub fn identity_resolution_residual(
    k: f64,
    probes: &[DiskPoint],
    spec: &QuadSpec,
    exec: Execution,
) -> Result<IdentityResolution> {
    if !(k > 0.5) || !k.is_finite() {
        return Err(Error::UnsupportedMeasure(k));
    }
    if probes.is_empty() {
        return Err(param("probes", "at least one probe state is required"));
    }
    if spec.radial_order == 0 || spec.angular_order == 0 || spec.radial_panels == 0 {
        return Err(param(
            "quad_spec",
            "orders and panel count must be positive",
        ));
    }
    let mut nr = spec.radial_order;
    let mut nt = spec.angular_order;
    let mut current = integrate_probes(k, probes, spec.radial_panels, nr, nt, exec);
    let mut converged = true;
    if spec.adaptive {
        converged = false;
        while 2 * nr.max(nt) <= spec.max_order {
            nr *= 2;
            nt *= 2;
            let next = integrate_probes(k, probes, spec.radial_panels, nr, nt, exec);
            let change = current
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            current = next;
            if change <= 0.1 * spec.target {
                converged = true;
                break;
            }
        }
    }
    let residual = current.iter().map(|i| (i - 1.0).abs()).fold(0.0, f64::max);
    Ok(IdentityResolution {
        residual,
        integrals: current,
        radial_order: nr,
        angular_order: nt,
        converged,
        target: spec.target,
    })
}

fn integrate_probes(
    k: f64,
    probes: &[DiskPoint],
    panels: usize,
    nr: usize,
    nt: usize,
    exec: Execution,
) -> Vec<f64> {
    let angular = Rule::on_interval(nt, 0.0, 2.0 * PI);
    let mut radial_nodes = Vec::with_capacity(panels * nr);
    let mut radial_weights = Vec::with_capacity(panels * nr);
    for j in 0..panels {
        let a = 1.0 - 0.5_f64.powi(j as i32);
        let b = 1.0 - 0.5_f64.powi(j as i32 + 1);
        let rule = Rule::on_interval(nr, a, b);
        radial_nodes.extend(rule.nodes);
        radial_weights.extend(rule.weights);
    }
    let sliver = 0.5_f64.powi(panels as i32);
    let exponent = 2.0 * k - 2.0;
    let prefactor = (2.0 * k - 1.0) / PI * 0.5;

    probes
        .iter()
        .map(|&xi0| {
            let x0c = xi0.value().conj();
            let log_norm = 2.0 * k * xi0.deficit().ln();
            // |<xi0|xi>|^2 / (1-u)^2 without the (1-u)^{2K-2} factor
            let kernel = |xi: Complex64| -> f64 {
                let d = (Complex64::new(1.0, 0.0) - x0c * xi).norm_sqr();
                (log_norm - 2.0 * k * d.ln()).exp()
            };
            let bulk = exec.sum_range(radial_nodes.len(), |i| {
                let u = radial_nodes[i];
                let r = u.sqrt();
                let radial = (1.0 - u).powf(exponent);
                let ang: f64 = angular
                    .nodes
                    .iter()
                    .zip(&angular.weights)
                    .map(|(&t, &w)| w * kernel(Complex64::from_polar(r, t)))
                    .sum();
                radial_weights[i] * radial * ang
            });
            let boundary: f64 = angular
                .nodes
                .iter()
                .zip(&angular.weights)
                .map(|(&t, &w)| w * kernel(Complex64::from_polar(1.0, t)))
                .sum();
            prefactor * bulk + sliver.powf(2.0 * k - 1.0) / (2.0 * PI) * boundary
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapRow {
    pub k: f64,
    pub abs_overlap: f64,
    pub log_abs_overlap: f64,
}

/// Least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(param(
            "Ks",
            "need matching, nonempty abscissae and ordinates",
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(LinearFit {
        slope,
        intercept,
        max_residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapDecay {
    pub xi1: DiskPoint,
    pub xi2: DiskPoint,
    pub rows: Vec<OverlapRow>,
    /// `ln[(1-|xi1|^2)(1-|xi2|^2)/|1-conj(xi1) xi2|^2]`.
    pub predicted_slope: f64,
    pub fit: LinearFit,
}

impl OverlapDecay {
    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "K",
            "re_xi1",
            "im_xi1",
            "re_xi2",
            "im_xi2",
            "abs_overlap",
            "log_abs_overlap",
        ]);
        for r in &self.rows {
            t.push(vec![
                fmt_f64(r.k),
                fmt_f64(self.xi1.re()),
                fmt_f64(self.xi1.im()),
                fmt_f64(self.xi2.re()),
                fmt_f64(self.xi2.im()),
                fmt_f64(r.abs_overlap),
                fmt_f64(r.log_abs_overlap),
            ]);
        }
        t
    }
}

fn check_ks(ks: &[f64]) -> Result<()> {
    if ks.is_empty() {
        return Err(param("Ks", "list must be nonempty"));
    }
    if ks.iter().any(|&k| !(k >= 0.5) || !k.is_finite()) {
        return Err(param(
            "Ks",
            "every Bargmann index must be finite and >= 1/2",
        ));
    }
    if ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(param("Ks", "list must be strictly ascending"));
    }
    Ok(())
}

/// `|<xi1|xi2>|` across `ks`, with a linear fit of its logarithm in K.
pub fn overlap_decay_scan(
    xi1: DiskPoint,
    xi2: DiskPoint,
    ks: &[f64],
    exec: Execution,
) -> Result<OverlapDecay> {
    check_ks(ks)?;
    let rows = exec.map(ks, |&k| {
        let o = overlap(xi1, xi2, k).norm();
        OverlapRow {
            k,
            abs_overlap: o,
            log_abs_overlap: o.ln(),
        }
    });
    let ys: Vec<f64> = rows.iter().map(|r| r.log_abs_overlap).collect();
    let fit = linear_fit(ks, &ys)?;
    Ok(OverlapDecay {
        xi1,
        xi2,
        rows,
        predicted_slope: overlap_log_slope(xi1, xi2),
        fit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationRow {
    pub k: f64,
    pub cutoff: usize,
    pub mean: f64,
    pub stddev: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationScan {
    pub xi: DiskPoint,
    pub coupling: f64,
    /// Classical value `J w(xi)` the means should reproduce.
    pub classical: f64,
    pub rows: Vec<FluctuationRow>,
}

impl FluctuationScan {
    pub fn table(&self) -> Table {
        let mut t = Table::new(["K", "mean", "stddev", "ratio"]);
        for r in &self.rows {
            t.push(vec![
                fmt_f64(r.k),
                fmt_f64(r.mean),
                fmt_f64(r.stddev),
                fmt_f64(r.ratio),
            ]);
        }
        t
    }

    /// Largest `|mean - J w|` across rows.
    pub fn mean_spread(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.mean - self.classical).abs())
            .fold(0.0, f64::max)
    }
}

/// Mean and spread of the truncated `H_xi` in `|xi>` for each K. The cutoff
/// per K comes from [`required_cutoff`] plus a two-level margin so `H|xi>`
/// stays inside the stored block.
pub fn energy_fluctuation_scan(
    xi: DiskPoint,
    coupling: f64,
    ks: &[f64],
    tail_tol: f64,
    exec: Execution,
) -> Result<FluctuationScan> {
    check_ks(ks)?;
    let rows = exec.try_map(ks, |&k| -> Result<FluctuationRow> {
        let cutoff = required_cutoff(k, xi.abs(), tail_tol)?.max(2) + 2;
        let rep = Su11Rep::new(k, cutoff)?;
        let h = HamiltonianXi::new(&rep, coupling)?;
        let cs = coherent_state(&rep, xi, tail_tol)?;
        let c = cs.coeffs();
        let hc = h.matrix() * c;
        let norm2 = c.norm_squared();
        let mean = c.dotc(&hc).re / norm2;
        let second = hc.norm_squared() / norm2;
        let stddev = (second - mean * mean).max(0.0).sqrt();
        Ok(FluctuationRow {
            k,
            cutoff,
            mean,
            stddev,
            ratio: stddev / mean,
        })
    })?;
    Ok(FluctuationScan {
        xi,
        coupling,
        classical: classical_energy(xi, coupling),
        rows,
    })
}
