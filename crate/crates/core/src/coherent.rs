//! Pseudo-spin coherent states on the Poincaré disk and the half-plane chart.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::su11::Su11Rep;

/// Point `xi` of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(xi: Complex64) -> Result<Self> {
        if !(xi.re.is_finite() && xi.im.is_finite()) {
            return Err(Error::Domain(format!("xi = {xi} is not finite")));
        }
        if xi.norm_sqr() >= 1.0 {
            return Err(Error::Domain(format!("|xi| = {} is not < 1", xi.norm())));
        }
        Ok(Self(xi))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn origin() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn abs(self) -> f64 {
        self.0.norm()
    }

    /// `|xi|^2`.
    pub fn abs2(self) -> f64 {
        self.0.norm_sqr()
    }

    /// `1 - |xi|^2`, always in `(0, 1]`.
    pub fn deficit(self) -> f64 {
        1.0 - self.abs2()
    }
}

/// Point `(v, w)` of the upper half-plane, `w > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    v: f64,
    w: f64,
}

impl HalfPlanePoint {
    pub fn new(v: f64, w: f64) -> Result<Self> {
        if !v.is_finite() || !w.is_finite() {
            return Err(Error::Domain(format!("(v, w) = ({v}, {w}) is not finite")));
        }
        if w <= 0.0 {
            return Err(Error::Domain(format!("w = {w} is not > 0")));
        }
        Ok(Self { v, w })
    }

    pub fn v(self) -> f64 {
        self.v
    }

    pub fn w(self) -> f64 {
        self.w
    }
}

/// Conformal map `1/w - i v = (i + xi)/(i - xi)`.
pub fn disk_to_halfplane(xi: DiskPoint) -> HalfPlanePoint {
    let (x, y) = (xi.re(), xi.im());
    let d = x * x + (1.0 - y) * (1.0 - y);
    HalfPlanePoint {
        v: 2.0 * x / d,
        w: d / xi.deficit(),
    }
}

/// Inverse of [`disk_to_halfplane`]: `xi = i (zeta - 1)/(zeta + 1)` with
/// `zeta = 1/w - i v`.
pub fn halfplane_to_disk(p: HalfPlanePoint) -> DiskPoint {
    let zeta = Complex64::new(1.0 / p.w, -p.v);
    let xi = Complex64::i() * (zeta - 1.0) / (zeta + 1.0);
    // Re(zeta) > 0 keeps |xi| < 1 up to rounding
    DiskPoint::new(xi).unwrap_or_else(|_| DiskPoint(xi / (xi.norm() * (1.0 + f64::EPSILON))))
}

/// Truncated Fock expansion of a coherent state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    k: f64,
    xi: DiskPoint,
    coeffs: CVector,
}

impl CoherentState {
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn xi(&self) -> DiskPoint {
        self.xi
    }

    pub fn coeffs(&self) -> &CVector {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Probability mass beyond the cutoff, `1 - sum |c_m|^2`.
    pub fn tail_mass(&self) -> f64 {
        (1.0 - self.coeffs.norm_squared()).max(0.0)
    }

    /// `<xi|M|xi> / <xi|xi>`.
    pub fn expect(&self, op: &CMatrix) -> Complex64 {
        self.coeffs.dotc(&(op * &self.coeffs)) / self.coeffs.norm_squared()
    }

    /// Fock-series inner product `<self|other>` over the common truncation.
    pub fn inner(&self, other: &CoherentState) -> Complex64 {
        let n = self.coeffs.len().min(other.coeffs.len());
        self.coeffs.rows(0, n).dotc(&other.coeffs.rows(0, n))
    }
}

/// First `dim` Fock amplitudes
/// `c_m = (1-|xi|^2)^K sqrt(Gamma(2K+m)/(m! Gamma(2K))) xi^m`.
///
/// Magnitudes are accumulated in log space through the ratio
/// `|c_{m+1}/c_m| = |xi| sqrt((2K+m)/(m+1))`, which stays finite for large K.
pub fn coherent_coefficients(k: f64, xi: DiskPoint, dim: usize) -> CVector {
    let mut out = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    if dim == 0 {
        return out;
    }
    let r = xi.abs();
    let base = k * (-xi.abs2()).ln_1p();
    if r == 0.0 {
        out[0] = Complex64::new(base.exp(), 0.0);
        return out;
    }
    let phase = xi.value().arg();
    let ln_r = r.ln();
    let mut log_mag = base;
    for m in 0..dim {
        out[m] = Complex64::from_polar(log_mag.exp(), phase * m as f64);
        let mf = m as f64;
        log_mag += ln_r + 0.5 * ((2.0 * k + mf) / (mf + 1.0)).ln();
    }
    out
}

/// Smallest cutoff whose discarded tail mass is provably `<= tail_tol`.
///
/// The terms `t_m = |c_m|^2` form a negative-binomial sequence whose ratio
/// `t_{m+1}/t_m = |xi|^2 (2K+m)/(m+1)` never increases for `2K >= 1`, so the
/// tail after `M` is bounded by `t_{M+1} / (1 - ratio_{M+1})` once the ratio
/// drops below one.
pub fn required_cutoff(k: f64, abs_xi: f64, tail_tol: f64) -> Result<usize> {
    const MAX_CUTOFF: usize = 1 << 20;
    if !(0.0..1.0).contains(&abs_xi) {
        return Err(Error::Domain(format!("|xi| = {abs_xi} is not < 1")));
    }
    if k < 0.5 {
        return Err(param(
            "K",
            format!("Bargmann index must be >= 1/2, got {k}"),
        ));
    }
    if !(tail_tol > 0.0) {
        return Err(param("tail_tol", format!("must be > 0, got {tail_tol}")));
    }
    let lambda = abs_xi * abs_xi;
    if lambda == 0.0 {
        return Ok(0);
    }
    let ln_tol = tail_tol.ln();
    let ln_lambda = lambda.ln();
    // log t_{M+1}, starting at M = 0
    let mut log_next = 2.0 * k * (-lambda).ln_1p() + ln_lambda + (2.0 * k).ln();
    for m in 0..MAX_CUTOFF {
        let mf = m as f64;
        let ratio = lambda * (2.0 * k + mf + 1.0) / (mf + 2.0);
        if ratio < 1.0 && log_next - (1.0 - ratio).ln() <= ln_tol {
            return Ok(m);
        }
        log_next += ln_lambda + ((2.0 * k + mf + 1.0) / (mf + 2.0)).ln();
    }
    Err(Error::Numerical(format!(
        "no cutoff below {MAX_CUTOFF} reaches tail {tail_tol:e} at K = {k}, |xi| = {abs_xi}"
    )))
}

/// Coherent state `|xi>` in the Fock basis of `rep`.
pub fn coherent_state(rep: &Su11Rep, xi: DiskPoint, tail_tol: f64) -> Result<CoherentState> {
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(param(
            "tail_tol",
            format!("must lie in (0, 1e-6], got {tail_tol}"),
        ));
    }
    let required = required_cutoff(rep.k(), xi.abs(), tail_tol)?;
    if required > rep.cutoff() {
        return Err(Error::Truncation {
            cutoff: rep.cutoff(),
            required,
            tail_tol,
        });
    }
    Ok(CoherentState {
        k: rep.k(),
        xi,
        coeffs: coherent_coefficients(rep.k(), xi, rep.dim()),
    })
}

/// Closed-form overlap
/// `<xi1|xi2> = [(1-|xi1|^2)(1-|xi2|^2)]^K / (1 - conj(xi1) xi2)^{2K}`
/// on the principal branch.
pub fn overlap(xi1: DiskPoint, xi2: DiskPoint, k: f64) -> Complex64 {
    let denom = Complex64::new(1.0, 0.0) - xi1.value().conj() * xi2.value();
    let log = k * ((-xi1.abs2()).ln_1p() + (-xi2.abs2()).ln_1p()) - 2.0 * k * denom.ln();
    log.exp()
}

/// `ln |<xi1|xi2>| / K`, the per-unit-K decay rate of the overlap.
pub fn overlap_log_slope(xi1: DiskPoint, xi2: DiskPoint) -> f64 {
    let denom = Complex64::new(1.0, 0.0) - xi1.value().conj() * xi2.value();
    (-xi1.abs2()).ln_1p() + (-xi2.abs2()).ln_1p() - denom.norm_sqr().ln()
}

/// Coherent-state means of the rescaled generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorMeans {
    pub k0: f64,
    pub kplus: Complex64,
    pub kminus: Complex64,
}

/// `k0 = (1+|xi|^2)/(1-|xi|^2)`, `k- = 2 xi/(1-|xi|^2)`, `k+ = conj(k-)`.
/// Independent of K.
pub fn expect_generators(xi: DiskPoint) -> GeneratorMeans {
    let d = xi.deficit();
    let kminus = xi.value() * (2.0 / d);
    GeneratorMeans {
        k0: (1.0 + xi.abs2()) / d,
        kplus: kminus.conj(),
        kminus,
    }
}

/// Classical energy `J (1 + |xi|^2 - 2 Im xi)/(1 - |xi|^2)`, equal to `J w`.
pub fn classical_energy(xi: DiskPoint, coupling: f64) -> f64 {
    let (x, y) = (xi.re(), xi.im());
    // 1 + |xi|^2 - 2y written as a sum of squares
    coupling * (x * x + (1.0 - y) * (1.0 - y)) / xi.deficit()
}

/// Invariant measure density `((2K-1)/pi) / (1-|xi|^2)^2` for `K > 1/2`.
pub fn measure_density(k: f64, xi: DiskPoint) -> Result<f64> {
    if !(k > 0.5) {
        return Err(Error::UnsupportedMeasure(k));
    }
    let d = xi.deficit();
    Ok((2.0 * k - 1.0) / PI / (d * d))
}
