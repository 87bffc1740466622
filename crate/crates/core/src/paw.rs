//! Finite Page–Wootters constraint: a probe system `Gamma` and the truncated
//! source `Xi` with `H_psi = 1 (x) H_xi - H_gamma (x) 1`, whose kernel states
//! carry relational time through the coherent-state amplitude
//! `z(gamma, xi) = (<xi| (x) <gamma|) |Psi>>`.
//!
//! Composite index is `g * d_xi + x`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::coherent::{
    coherent_state, disk_to_halfplane, halfplane_to_disk, DiskPoint, HalfPlanePoint,
};
use crate::error::{param, Error, Result};
use crate::exec::Execution;
use crate::horizon::halfplane_to_phase_space;
use crate::linalg::{hermiticity_residual, kron, max_abs, CMatrix, CVector};
use crate::su11::{HamiltonianXi, Su11Rep};
use crate::table::{fmt_f64, Table};

/// Default `|z|^2` threshold for spacetime support.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-8;
/// Conditional norms below this are reported as undefined.
pub const CONDITIONAL_NORM_FLOOR: f64 = 1e-10;
/// Singular values at or below this are dropped from the Schmidt list.
pub const SCHMIDT_FLOOR: f64 = 1e-13;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Eigenpairs sorted by ascending eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Dense Hermitian eigendecomposition with ascending eigenvalues.
pub fn hermitian_eigen(m: &CMatrix) -> Result<Eigen> {
    let eig = m
        .clone()
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| {
            Error::Numerical(format!(
                "eigensolver did not converge on {}x{} matrix",
                m.nrows(),
                m.ncols()
            ))
        })?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok(Eigen { values, vectors })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteSystem {
    h_gamma: CMatrix,
    h_xi: CMatrix,
    h_psi: CMatrix,
}

fn check_hermitian(name: &str, m: &CMatrix) -> Result<()> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::Validation(format!(
            "{name} must be a non-empty square matrix"
        )));
    }
    let res = hermiticity_residual(m);
    if res > 1e-12 * max_abs(m).max(1.0) {
        return Err(Error::Validation(format!(
            "{name} is not Hermitian (residual {res:e})"
        )));
    }
    Ok(())
}

/// Assembles `1 (x) H_xi - H_gamma (x) 1`.
pub fn build_composite(h_gamma: CMatrix, h_xi: CMatrix) -> Result<BipartiteSystem> {
    check_hermitian("H_gamma", &h_gamma)?;
    check_hermitian("H_xi", &h_xi)?;
    let (dg, dx) = (h_gamma.nrows(), h_xi.nrows());
    if dg >= dx {
        return Err(Error::Validation(format!(
            "clock dimension {dx} must exceed probe dimension {dg}"
        )));
    }
    let h_psi =
        kron(&CMatrix::identity(dg, dg), &h_xi) - kron(&h_gamma, &CMatrix::identity(dx, dx));
    Ok(BipartiteSystem {
        h_gamma,
        h_xi,
        h_psi,
    })
}

impl BipartiteSystem {
    pub fn h_gamma(&self) -> &CMatrix {
        &self.h_gamma
    }

    pub fn h_xi(&self) -> &CMatrix {
        &self.h_xi
    }

    pub fn h_psi(&self) -> &CMatrix {
        &self.h_psi
    }

    pub fn d_gamma(&self) -> usize {
        self.h_gamma.nrows()
    }

    pub fn d_xi(&self) -> usize {
        self.h_xi.nrows()
    }

    /// Global energy of admissible states.
    pub fn epsilon(&self) -> f64 {
        0.0
    }

    /// `||H_psi psi||`.
    pub fn residual(&self, psi: &CVector) -> f64 {
        (&self.h_psi * psi).norm()
    }
}

/// Ascending spectrum of `H_psi` from a dense eigendecomposition.
pub fn spectrum(sys: &BipartiteSystem) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(&sys.h_psi)?.values)
}

/// Ascending multiset `{l_xi - l_gamma}` from the factor spectra.
pub fn kronecker_difference(sys: &BipartiteSystem) -> Result<Vec<f64>> {
    let lg = hermitian_eigen(&sys.h_gamma)?.values;
    let lx = hermitian_eigen(&sys.h_xi)?.values;
    let mut out: Vec<f64> = lg
        .iter()
        .flat_map(|g| lx.iter().map(move |x| x - g))
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// A normalised vector on the composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalState {
    amplitudes: CVector,
    d_gamma: usize,
    d_xi: usize,
}

impl GlobalState {
    pub fn new(amplitudes: CVector, d_gamma: usize, d_xi: usize) -> Result<Self> {
        if d_gamma == 0 || d_xi == 0 || amplitudes.len() != d_gamma * d_xi {
            return Err(param(
                "amplitudes",
                format!(
                    "length {} does not match {d_gamma}x{d_xi}",
                    amplitudes.len()
                ),
            ));
        }
        let n = amplitudes.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(param("amplitudes", "state must have finite non-zero norm"));
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::from(n),
            d_gamma,
            d_xi,
        })
    }

    /// `|gamma> (x) |xi>`.
    pub fn product(gamma: &CVector, xi: &CVector) -> Result<Self> {
        let amps = CVector::from_fn(gamma.len() * xi.len(), |i, _| {
            gamma[i / xi.len()] * xi[i % xi.len()]
        });
        Self::new(amps, gamma.len(), xi.len())
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn d_gamma(&self) -> usize {
        self.d_gamma
    }

    pub fn d_xi(&self) -> usize {
        self.d_xi
    }

    /// `d_gamma x d_xi` amplitude matrix.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.d_gamma, self.d_xi, |g, x| {
            self.amplitudes[g * self.d_xi + x]
        })
    }

    pub fn schmidt(&self) -> Vec<SchmidtTerm> {
        schmidt_decompose(self)
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        Self {
            amplitudes: &self.amplitudes * Complex64::from_polar(1.0, phase),
            ..self.clone()
        }
    }
}

/// Orthonormal kernel basis from the factor eigenbases: every product
/// `u_g (x) v_x` with `|l_x - l_g| <= tol`. Empty when the spectra do not
/// intersect.
pub fn kernel_states(sys: &BipartiteSystem, tol: f64) -> Result<Vec<GlobalState>> {
    if !(tol > 0.0) {
        return Err(param("tol", format!("must be > 0, got {tol}")));
    }
    let eg = hermitian_eigen(&sys.h_gamma)?;
    let ex = hermitian_eigen(&sys.h_xi)?;
    let mut out = Vec::new();
    for (g, lg) in eg.values.iter().enumerate() {
        for (x, lx) in ex.values.iter().enumerate() {
            if (lx - lg).abs() <= tol {
                let u = eg.vectors.column(g).into_owned();
                let v = ex.vectors.column(x).into_owned();
                out.push(GlobalState::product(&u, &v)?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtTerm {
    pub coeff: f64,
    pub gamma: CVector,
    pub xi: CVector,
}

/// Schmidt terms with descending coefficients; only coefficients above
/// [`SCHMIDT_FLOOR`] are kept.
pub fn schmidt_decompose(state: &GlobalState) -> Vec<SchmidtTerm> {
    let svd = state.matrix().svd(true, true);
    let (u, v_t) = (
        svd.u.expect("left vectors"),
        svd.v_t.expect("right vectors"),
    );
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    order
        .into_iter()
        .filter(|&i| svd.singular_values[i] > SCHMIDT_FLOOR)
        .map(|i| SchmidtTerm {
            coeff: svd.singular_values[i],
            gamma: u.column(i).into_owned(),
            xi: v_t.row(i).transpose(),
        })
        .collect()
}

pub fn schmidt_rank(state: &GlobalState) -> usize {
    schmidt_decompose(state).len()
}

fn coherent_vector(rep: &Su11Rep, xi: DiskPoint, tail_tol: f64) -> Result<CVector> {
    Ok(coherent_state(rep, xi, tail_tol)?.coeffs().clone())
}

fn check_rep(state: &GlobalState, rep: &Su11Rep) -> Result<()> {
    if rep.dim() != state.d_xi {
        return Err(param(
            "rep",
            format!(
                "dimension {} does not match clock factor {}",
                rep.dim(),
                state.d_xi
            ),
        ));
    }
    Ok(())
}

/// Partial inner product `<xi|Psi>>`, a vector on `Gamma`.
pub fn conditional_state(
    state: &GlobalState,
    rep: &Su11Rep,
    xi: DiskPoint,
    tail_tol: f64,
) -> Result<CVector> {
    check_rep(state, rep)?;
    let c = coherent_vector(rep, xi, tail_tol)?;
    Ok(state.matrix() * c.conjugate())
}

/// `z(gamma, xi) = (<xi| (x) <gamma|) |Psi>>`.
pub fn amplitude_z(
    state: &GlobalState,
    gamma: &CVector,
    rep: &Su11Rep,
    xi: DiskPoint,
    tail_tol: f64,
) -> Result<Complex64> {
    if gamma.len() != state.d_gamma {
        return Err(param(
            "gamma",
            format!(
                "length {} does not match probe factor {}",
                gamma.len(),
                state.d_gamma
            ),
        ));
    }
    let phi = conditional_state(state, rep, xi, tail_tol)?;
    Ok(gamma.dotc(&phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClockPoint {
    pub t: f64,
    #[serde(rename = "E")]
    pub energy: f64,
}

/// `(t, E) = (v/J, J w)`.
pub fn clock_coordinates(xi: DiskPoint, coupling: f64) -> Result<ClockPoint> {
    if !coupling.is_finite() || coupling <= 0.0 {
        return Err(param(
            "J",
            format!("coupling must be finite and > 0, got {coupling}"),
        ));
    }
    let hp = disk_to_halfplane(xi);
    Ok(ClockPoint {
        t: hp.v() / coupling,
        energy: coupling * hp.w(),
    })
}

/// Disk point with clock coordinates `(t, E)`.
pub fn clock_point_to_disk(t: f64, energy: f64, coupling: f64) -> Result<DiskPoint> {
    if !coupling.is_finite() || coupling <= 0.0 {
        return Err(param(
            "J",
            format!("coupling must be finite and > 0, got {coupling}"),
        ));
    }
    Ok(halfplane_to_disk(HalfPlanePoint::new(
        coupling * t,
        energy / coupling,
    )?))
}

/// Constant-energy family `xi(t)`.
pub fn clock_family(energy: f64, coupling: f64, ts: &[f64]) -> Result<Vec<(f64, DiskPoint)>> {
    ts.iter()
        .map(|&t| Ok((t, clock_point_to_disk(t, energy, coupling)?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalRow {
    pub t: f64,
    pub norm: f64,
    /// `None` when the conditional norm vanishes.
    pub fidelity: Option<f64>,
}

fn unitary(h: &CMatrix, s: f64) -> Result<CMatrix> {
    let e = hermitian_eigen(h)?;
    let phases = DVector::from_iterator(
        e.values.len(),
        e.values.iter().map(|l| Complex64::from_polar(1.0, -l * s)),
    );
    Ok(&e.vectors * DMatrix::from_diagonal(&phases) * e.vectors.adjoint())
}

/// Fidelity of the normalised conditional probe state along the clock family
/// against `exp(-i H_gamma t)` applied to the conditional state at the family
/// member closest to `t = 0`.
pub fn conditional_evolution(
    sys: &BipartiteSystem,
    state: &GlobalState,
    family: &[(f64, DiskPoint)],
    rep: &Su11Rep,
    tail_tol: f64,
    exec: Execution,
) -> Result<Vec<ConditionalRow>> {
    if family.is_empty() {
        return Err(param("clock_family", "must be non-empty"));
    }
    if state.d_gamma != sys.d_gamma() || state.d_xi != sys.d_xi() {
        return Err(param(
            "state",
            "dimensions do not match the composite system",
        ));
    }
    let phis = exec.try_map(family, |&(_, xi)| {
        conditional_state(state, rep, xi, tail_tol)
    })?;
    let r = (0..family.len())
        .min_by(|&a, &b| family[a].0.abs().total_cmp(&family[b].0.abs()))
        .unwrap_or(0);
    let t_ref = family[r].0;
    let phi_ref = &phis[r];
    let ref_norm = phi_ref.norm();
    let e = hermitian_eigen(&sys.h_gamma)?;
    let mut rows = Vec::with_capacity(family.len());
    for (&(t, _), phi) in family.iter().zip(&phis) {
        let norm = phi.norm();
        let fidelity = if norm <= CONDITIONAL_NORM_FLOOR || ref_norm <= CONDITIONAL_NORM_FLOOR {
            None
        } else {
            let phases = DVector::from_iterator(
                e.values.len(),
                e.values
                    .iter()
                    .map(|l| Complex64::from_polar(1.0, -l * (t - t_ref))),
            );
            let evolved = &e.vectors * phases.component_mul(&(e.vectors.adjoint() * phi_ref));
            Some((evolved.dotc(phi).norm() / (norm * ref_norm)).powi(2))
        };
        rows.push(ConditionalRow { t, norm, fidelity });
    }
    Ok(rows)
}

/// `exp(-i H s)` for Hermitian `H`.
pub fn evolution_operator(h: &CMatrix, s: f64) -> Result<CMatrix> {
    check_hermitian("H", h)?;
    unitary(h, s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportCell {
    pub t: f64,
    pub q: f64,
    pub abs_z2: f64,
    pub marked: bool,
}

/// Geometry used to place `(t, q)` grid points on `(gamma, xi)` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportGeometry {
    pub energy: f64,
    pub m: f64,
    pub a: f64,
    pub coupling: f64,
}

impl SupportGeometry {
    /// Apex height `q0`, the image of `(v, w) = (0, E/J)`.
    pub fn apex(&self) -> Result<f64> {
        let hp = HalfPlanePoint::new(0.0, self.energy / self.coupling)?;
        Ok(halfplane_to_phase_space(hp, self.m, self.a, self.coupling)?.q)
    }

    /// Probe basis index of the height band containing `q`; `(0, q0]` is cut
    /// into `d_gamma` equal bands.
    pub fn band(&self, q: f64, d_gamma: usize) -> Result<Option<usize>> {
        let q0 = self.apex()?;
        if !(q > 0.0 && q <= q0) {
            return Ok(None);
        }
        Ok(Some(
            (((q / q0) * d_gamma as f64).ceil() as usize).clamp(1, d_gamma) - 1,
        ))
    }
}

/// Marks `(t, q)` with `|z(gamma(q), xi(t))|^2 > threshold`. `xi(t)` has
/// clock coordinates `(t, E)` and `gamma(q)` is the probe basis state of the
/// height band holding `q`; heights outside `(0, q0]` get `z = 0`.
/// Rows are ordered by `t`, then `q`.
#[allow(clippy::too_many_arguments)]
pub fn spacetime_support(
    state: &GlobalState,
    rep: &Su11Rep,
    t_grid: &[f64],
    q_grid: &[f64],
    threshold: f64,
    geom: &SupportGeometry,
    tail_tol: f64,
    exec: Execution,
) -> Result<Vec<SupportCell>> {
    if !(threshold > 0.0) {
        return Err(param("threshold", format!("must be > 0, got {threshold}")));
    }
    if t_grid.iter().chain(q_grid).any(|x| !x.is_finite()) {
        return Err(param("grid", "grid values must be finite"));
    }
    let bands = q_grid
        .iter()
        .map(|&q| geom.band(q, state.d_gamma))
        .collect::<Result<Vec<_>>>()?;
    let family = clock_family(geom.energy, geom.coupling, t_grid)?;
    let phis = exec.try_map(&family, |&(_, xi)| {
        conditional_state(state, rep, xi, tail_tol)
    })?;
    let mut cells = Vec::with_capacity(t_grid.len() * q_grid.len());
    for (&t, phi) in t_grid.iter().zip(&phis) {
        for (&q, band) in q_grid.iter().zip(&bands) {
            let abs_z2 = band.map_or(0.0, |g| phi[g].norm_sqr());
            cells.push(SupportCell {
                t,
                q,
                abs_z2,
                marked: abs_z2 > threshold,
            });
        }
    }
    Ok(cells)
}

pub fn support_table(cells: &[SupportCell]) -> Table {
    let mut t = Table::new(["t", "q", "abs_z2", "marked"]);
    for c in cells {
        t.push(vec![
            fmt_f64(c.t),
            fmt_f64(c.q),
            fmt_f64(c.abs_z2),
            u8::from(c.marked).to_string(),
        ]);
    }
    t
}

/// Parameters of the resonant demo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoConfig {
    pub k: f64,
    pub d_xi: usize,
    pub d_gamma: usize,
    pub coupling: f64,
    pub kernel_tol: f64,
    /// Times are `n_times` points on `[-t_window, t_window]`.
    pub t_window: f64,
    pub n_times: usize,
    pub tail_tol: f64,
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            d_xi: 80,
            d_gamma: 2,
            coupling: 1.0,
            kernel_tol: 1e-12,
            t_window: 0.5,
            n_times: 21,
            tail_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PawReport {
    pub d_gamma: usize,
    pub d_xi: usize,
    pub kernel_dim: usize,
    pub max_residual: f64,
    pub fidelity_trace: Vec<(f64, Option<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PawDemo {
    pub rep: Su11Rep,
    pub system: BipartiteSystem,
    pub kernel: Vec<GlobalState>,
    /// Equal-weight superposition of the kernel basis.
    pub state: GlobalState,
    /// Number of engineered resonances.
    pub matched: usize,
    pub trace: Vec<ConditionalRow>,
}

impl PawDemo {
    pub fn max_residual(&self) -> f64 {
        self.kernel
            .iter()
            .map(|s| self.system.residual(s.amplitudes()))
            .fold(0.0, f64::max)
    }

    pub fn min_fidelity(&self) -> Option<f64> {
        self.trace
            .iter()
            .map(|r| r.fidelity)
            .try_fold(1.0f64, |m, f| f.map(|f| m.min(f)))
    }

    pub fn report(&self) -> PawReport {
        PawReport {
            d_gamma: self.system.d_gamma(),
            d_xi: self.system.d_xi(),
            kernel_dim: self.kernel.len(),
            max_residual: self.max_residual(),
            fidelity_trace: self.trace.iter().map(|r| (r.t, r.fidelity)).collect(),
        }
    }
}

/// Probe Hamiltonian `diag(l_1, ..., l_d)` built from the `H_xi` eigenvalues
/// whose eigenvectors overlap most with `|xi = 0>`; the kernel state is the
/// equal-weight sum of the resulting product kernel basis, read on the clock
/// family at energy `E = J`.
pub fn resonant_demo(cfg: &DemoConfig, exec: Execution) -> Result<PawDemo> {
    if cfg.d_gamma == 0 || cfg.d_gamma >= cfg.d_xi {
        return Err(param(
            "d_gamma",
            format!("must lie in [1, d_xi), got {}", cfg.d_gamma),
        ));
    }
    if cfg.n_times == 0 || !(cfg.t_window >= 0.0) {
        return Err(param(
            "t_window",
            "window must be >= 0 with at least one time",
        ));
    }
    if cfg.d_xi < 3 {
        return Err(param(
            "d_xi",
            format!("must be at least 3, got {}", cfg.d_xi),
        ));
    }
    let rep = Su11Rep::new(cfg.k, cfg.d_xi - 1)?;
    let h_xi = HamiltonianXi::new(&rep, cfg.coupling)?;
    let ex = hermitian_eigen(h_xi.matrix())?;
    let mut idx: Vec<usize> = (0..ex.values.len()).collect();
    idx.sort_by(|&a, &b| {
        ex.vectors[(0, b)]
            .norm()
            .total_cmp(&ex.vectors[(0, a)].norm())
            .then(a.cmp(&b))
    });
    let mut picked: Vec<f64> = idx[..cfg.d_gamma].iter().map(|&i| ex.values[i]).collect();
    picked.sort_by(f64::total_cmp);
    let h_gamma = CMatrix::from_diagonal(&CVector::from_iterator(
        cfg.d_gamma,
        picked.iter().map(|&l| Complex64::from(l)),
    ));
    let system = build_composite(h_gamma, h_xi.matrix().clone())?;
    let kernel = kernel_states(&system, cfg.kernel_tol)?;
    if kernel.is_empty() {
        return Err(Error::Numerical(
            "resonant construction produced an empty kernel".into(),
        ));
    }
    let sum = kernel.iter().fold(
        CVector::zeros(system.d_gamma() * system.d_xi()),
        |acc, s| acc + s.amplitudes(),
    );
    let state = GlobalState::new(sum, system.d_gamma(), system.d_xi())?;
    let ts: Vec<f64> = if cfg.n_times == 1 {
        vec![0.0]
    } else {
        (0..cfg.n_times)
            .map(|i| -cfg.t_window + 2.0 * cfg.t_window * i as f64 / (cfg.n_times - 1) as f64)
            .collect()
    };
    let family = clock_family(cfg.coupling, cfg.coupling, &ts)?;
    let trace = conditional_evolution(&system, &state, &family, &rep, cfg.tail_tol, exec)?;
    Ok(PawDemo {
        rep,
        system,
        kernel,
        state,
        matched: cfg.d_gamma,
        trace,
    })
}
