//! Truncated matrix representation of the rescaled su(1,1) algebra.
//!
//! The generators act on the positive discrete series with Bargmann index
//! `K` and are rescaled by `1/K`:
//!
//! ```text
//! k0 |K,m> = (1 + m/K) |K,m>
//! k+ |K,m> = (1/K) sqrt((m+1)(2K+m)) |K,m+1>
//! k- |K,m> = (1/K) sqrt(m(2K+m-1))   |K,m-1>
//! ```
//!
//! so that `[k+, k-] = -(2/K) k0` and `[k0, k±] = ±(1/K) k±`. Matrices are
//! stored at dimension `cutoff + 1`; identities are exact only on the
//! interior block `m <= cutoff - 2`.

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::linalg::{commutator, hermiticity_residual, leading_block, max_abs, CMatrix};

/// Rescaled generators `(k0, k+, k-)` truncated at Fock label `cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct Su11Rep {
    k: f64,
    cutoff: usize,
    k0: CMatrix,
    kplus: CMatrix,
    kminus: CMatrix,
}

impl Su11Rep {
    pub fn new(k: f64, cutoff: usize) -> Result<Self> {
        if !k.is_finite() || k < 0.5 {
            return Err(param(
                "K",
                format!("Bargmann index must be >= 1/2, got {k}"),
            ));
        }
        if cutoff < 2 {
            return Err(param("cutoff", format!("must be >= 2, got {cutoff}")));
        }
        let dim = cutoff + 1;
        let mut k0 = CMatrix::zeros(dim, dim);
        let mut kplus = CMatrix::zeros(dim, dim);
        for m in 0..dim {
            let mf = m as f64;
            k0[(m, m)] = Complex64::new(1.0 + mf / k, 0.0);
            if m + 1 < dim {
                kplus[(m + 1, m)] = Complex64::new(raising_element(k, m), 0.0);
            }
        }
        let kminus = kplus.adjoint();
        Ok(Self {
            k,
            cutoff,
            k0,
            kplus,
            kminus,
        })
    }

    /// Bargmann index.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Quantumness parameter `1/K`.
    pub fn quantumness(&self) -> f64 {
        1.0 / self.k
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn k0(&self) -> &CMatrix {
        &self.k0
    }

    pub fn kplus(&self) -> &CMatrix {
        &self.kplus
    }

    pub fn kminus(&self) -> &CMatrix {
        &self.kminus
    }

    /// Size of the block `m <= cutoff - 2` on which the algebra is exact.
    pub fn interior_dim(&self) -> usize {
        self.cutoff - 1
    }

    /// Casimir `k0^2 - (k+ k- + k- k+)/2`, equal to `(K-1)/K` on the interior.
    pub fn casimir_matrix(&self) -> CMatrix {
        let half = Complex64::new(0.5, 0.0);
        &self.k0 * &self.k0 - (&self.kplus * &self.kminus + &self.kminus * &self.kplus) * half
    }

    /// Largest interior residual of the three defining commutators.
    pub fn commutator_residual(&self) -> f64 {
        commutator_residual_of(self.k, &self.k0, &self.kplus, &self.kminus)
            .expect("a constructed representation has cutoff >= 2")
    }
}

/// `<K,m+1| k+ |K,m>`.
pub fn raising_element(k: f64, m: usize) -> f64 {
    let mf = m as f64;
    ((mf + 1.0) * (2.0 * k + mf)).sqrt() / k
}

/// Commutator residual for arbitrary generator matrices, restricted to the
/// block `m <= dim - 3`.
pub fn commutator_residual_of(
    k: f64,
    k0: &CMatrix,
    kplus: &CMatrix,
    kminus: &CMatrix,
) -> Result<f64> {
    let dim = k0.nrows();
    if dim < 3 {
        return Err(param(
            "cutoff",
            format!("must be >= 2, got {}", dim.saturating_sub(1)),
        ));
    }
    if kplus.shape() != (dim, dim) || kminus.shape() != (dim, dim) || k0.ncols() != dim {
        return Err(Error::Validation(
            "generator matrices differ in shape".into(),
        ));
    }
    let n = dim - 2;
    let inv_k = Complex64::new(1.0 / k, 0.0);
    let two_inv_k = Complex64::new(2.0 / k, 0.0);

    let r1 = commutator(kplus, kminus) + k0 * two_inv_k;
    let r2 = commutator(k0, kplus) - kplus * inv_k;
    let r3 = commutator(k0, kminus) + kminus * inv_k;
    Ok([r1, r2, r3]
        .iter()
        .map(|r| max_abs(&leading_block(r, n)))
        .fold(0.0, f64::max))
}

/// Truncated Hamiltonian `J [k0 - (i/2)(k+ - k-)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianXi {
    matrix: CMatrix,
    coupling: f64,
}

impl HamiltonianXi {
    pub fn new(rep: &Su11Rep, coupling: f64) -> Result<Self> {
        if !coupling.is_finite() || coupling <= 0.0 {
            return Err(param(
                "J",
                format!("coupling must be finite and > 0, got {coupling}"),
            ));
        }
        let j = Complex64::new(coupling, 0.0);
        let minus_half_i = Complex64::new(0.0, -0.5);
        let matrix = (rep.k0() + (rep.kplus() - rep.kminus()) * minus_half_i) * j;
        Ok(Self { matrix, coupling })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.matrix)
    }
}
