//! Brute-force reference: dense Hamiltonians assembled from Pauli and
//! Jordan-Wigner operator matrices, and a dense symmetric eigensolver.

mod eigen;
pub mod jw;
pub mod ops;
pub mod sectors;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis;
use crate::error::{check_size, Error, Result};
use crate::statevector::StateVector;

pub use eigen::{
    eigenvalues, ground_eigenpair, symmetric_eigen, GroundEigenpair, SymmetricEigen, DEGENERACY_GAP,
};
pub use jw::build_jw_hamiltonian;
pub use ops::{BasisMap, SparseOperator};
pub use sectors::{verify_sector_hamiltonians, SectorAudit};

pub const MAX_SPIN_SITES: usize = 12;
pub const MAX_JW_SITES: usize = 10;
pub const MAX_SECTOR_AUDIT_SITES: usize = 8;

/// Entries with imaginary part above this are rejected when converting a
/// complex operator to a real symmetric one.
const REAL_TOLERANCE: f64 = 1e-12;

/// A dense real symmetric operator on the `2^N` product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    sites: usize,
    matrix: DMatrix<f64>,
}

impl DenseOperator {
    /// Wraps a square matrix whose dimension is a power of two.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not a square qubit-register operator",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            sites: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    /// Real part of a sparse operator; fails if any imaginary part survives.
    pub fn from_sparse(sites: usize, op: &SparseOperator) -> Result<Self> {
        let dim = basis::dimension(sites);
        if op.dimension() != dim {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {} on {sites} sites",
                op.dimension()
            )));
        }
        let mut matrix = DMatrix::zeros(dim, dim);
        for (r, c, v) in op.entries() {
            if v.im.abs() > REAL_TOLERANCE {
                return Err(Error::Mismatch {
                    row: r,
                    col: c,
                    deviation: v.im.abs(),
                });
            }
            matrix[(r, c)] = v.re;
        }
        Ok(Self { sites, matrix })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// `max |A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.matrix;
        let n = m.nrows();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] - m[(j, i)]).abs())
            .fold(0.0, f64::max)
    }

    /// `max |A_ij - B_ij|`.
    pub fn max_deviation(&self, other: &DenseOperator) -> Result<f64> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(Error::DimensionMismatch("operator shapes differ".into()));
        }
        Ok((&self.matrix - &other.matrix).amax())
    }

    /// `<psi| A |psi>` for a normalized state.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.sites() != self.sites {
            return Err(Error::DimensionMismatch(format!(
                "{}-site state against {}-site operator",
                state.sites(),
                self.sites
            )));
        }
        let amps = state.amplitudes();
        let mut total = Complex64::new(0.0, 0.0);
        for (i, ai) in amps.iter().enumerate() {
            if ai.norm_sqr() == 0.0 {
                continue;
            }
            let row: Complex64 = self
                .matrix
                .row(i)
                .iter()
                .zip(amps)
                .map(|(h, a)| *a * *h)
                .sum();
            total += ai.conj() * row;
        }
        Ok(total.re)
    }

    /// Max-entry norm of `[self, diag]` for a diagonal `diag` given by its
    /// entries.
    pub fn commutator_with_diagonal(&self, diag: &[f64]) -> f64 {
        let n = self.dimension();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let h = self.matrix[(i, j)];
                if h != 0.0 {
                    worst = worst.max(((diag[j] - diag[i]) * h).abs());
                }
            }
        }
        worst
    }
}

/// `H = -sum_i (g sigma^z_i + sigma^x_i sigma^x_{i+1} / 2 + sigma^y_i sigma^y_{i+1} / 2)`
/// with `sigma_N = sigma_0`, assembled as a sparse Pauli sum.
pub fn spin_hamiltonian_sparse(sites: usize, g: f64) -> SparseOperator {
    let dim = basis::dimension(sites);
    let mut h = SparseOperator::zeros(dim);
    let half = Complex64::new(-0.5, 0.0);
    for i in 0..sites {
        let next = (i + 1) % sites;
        h.add_map(Complex64::new(-g, 0.0), &BasisMap::sigma_z(sites, i));
        h.add_map(
            half,
            &BasisMap::sigma_x(sites, i).compose(&BasisMap::sigma_x(sites, next)),
        );
        h.add_map(
            half,
            &BasisMap::sigma_y(sites, i).compose(&BasisMap::sigma_y(sites, next)),
        );
    }
    h
}

pub fn build_spin_hamiltonian(sites: usize, g: f64) -> Result<DenseOperator> {
    check_size("spin Hamiltonian", sites, MAX_SPIN_SITES)?;
    DenseOperator::from_sparse(sites, &spin_hamiltonian_sparse(sites, g))
}

/// Diagonal of `P = exp(i pi (n_down + 1))`: `+1` for an odd number of down
/// spins, `-1` for an even number.
pub fn parity_diagonal(sites: usize) -> Vec<f64> {
    (0..basis::dimension(sites))
        .map(|b| {
            if basis::downs(b, sites) % 2 == 1 {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

pub fn build_parity_operator(sites: usize) -> Result<DenseOperator> {
    check_size("parity operator", sites, MAX_SPIN_SITES)?;
    let diag = parity_diagonal(sites);
    Ok(DenseOperator {
        sites,
        matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
    })
}
