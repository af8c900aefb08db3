//! Jordan-Wigner operators `c_i = (prod_{j<i} sigma^z_j) sigma^-_i` as explicit
//! matrices, and the fermionic form of the ring Hamiltonian.

use num_complex::Complex64;

use super::ops::{anticommutator, commutator, BasisMap, SparseOperator};
use super::{spin_hamiltonian_sparse, DenseOperator, MAX_JW_SITES};
use crate::basis;
use crate::error::{check_size, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `c_i` for `i` in `0..=N`; site `N` is identified with site `0`, so `c_N`
/// carries the full string `exp(i pi n_down)`.
pub fn annihilator(sites: usize, i: usize) -> BasisMap {
    assert!(i <= sites);
    let dim = basis::dimension(sites);
    let string: Vec<BasisMap> = (0..i).map(|j| BasisMap::sigma_z(sites, j)).collect();
    let lowering = BasisMap::sigma_minus(sites, i % sites);
    BasisMap::product(dim, string.iter().chain(std::iter::once(&lowering)))
}

pub fn creator(sites: usize, i: usize) -> BasisMap {
    annihilator(sites, i).adjoint()
}

/// `exp(i pi n_down)` as a diagonal map.
pub fn down_parity(sites: usize) -> BasisMap {
    BasisMap::diagonal(basis::dimension(sites), |b| {
        if basis::downs(b, sites).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    })
}

/// `P = exp(i pi (n_down + 1))` as a diagonal map.
pub fn parity(sites: usize) -> BasisMap {
    BasisMap::diagonal(basis::dimension(sites), |b| {
        if basis::downs(b, sites) % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    })
}

/// Fermionic Hamiltonian
///
/// ```text
/// H = -[ sum_j g (1 - 2 c_j c_j^dag)
///        + sum_{j=0}^{N-1} (c_j c_{j+1}^dag + c_{j+1} c_j^dag)      (c_N := c_0)
///        + (P - 1)(c_{N-1} c_0^dag + c_0 c_{N-1}^dag) ]
/// ```
///
/// The periodic hopping sum treats the closing bond like any other; the
/// `(P - 1)` term corrects it to the parity-dependent boundary sign.
pub fn jw_hamiltonian_sparse(sites: usize, g: f64) -> SparseOperator {
    let dim = basis::dimension(sites);
    let c: Vec<BasisMap> = (0..sites).map(|i| annihilator(sites, i)).collect();
    let cd: Vec<BasisMap> = c.iter().map(BasisMap::adjoint).collect();
    let mut inner = SparseOperator::zeros(dim);
    for j in 0..sites {
        inner.add_map(Complex64::new(g, 0.0), &BasisMap::identity(dim));
        inner.add_map(Complex64::new(-2.0 * g, 0.0), &c[j].compose(&cd[j]));
        let next = (j + 1) % sites;
        inner.add_map(ONE, &c[j].compose(&cd[next]));
        inner.add_map(ONE, &c[next].compose(&cd[j]));
    }
    let last = sites - 1;
    let p = parity(sites);
    for bond in [c[last].compose(&cd[0]), c[0].compose(&cd[last])] {
        inner.add_map(ONE, &p.compose(&bond));
        inner.add_map(-ONE, &bond);
    }
    let mut h = SparseOperator::zeros(dim);
    h.add(-ONE, &inner);
    h
}

pub fn build_jw_hamiltonian(sites: usize, g: f64) -> Result<DenseOperator> {
    check_size("Jordan-Wigner Hamiltonian", sites, MAX_JW_SITES)?;
    DenseOperator::from_sparse(sites, &jw_hamiltonian_sparse(sites, g))
}

/// `max |H_JW - H_Pauli|` entrywise.
pub fn jw_hamiltonian_deviation(sites: usize, g: f64) -> Result<f64> {
    check_size("Jordan-Wigner Hamiltonian", sites, MAX_JW_SITES)?;
    Ok(jw_hamiltonian_sparse(sites, g)
        .max_deviation(&spin_hamiltonian_sparse(sites, g))
        .0)
}

/// Largest entry of `{c_i, c_j}`, `{c_i^dag, c_j^dag}` and
/// `{c_i, c_j^dag} - delta_ij` over all site pairs.
pub fn jw_anticommutation_deviation(sites: usize) -> Result<f64> {
    check_size("Jordan-Wigner audit", sites, MAX_JW_SITES)?;
    let dim = basis::dimension(sites);
    let c: Vec<BasisMap> = (0..sites).map(|i| annihilator(sites, i)).collect();
    let cd: Vec<BasisMap> = c.iter().map(BasisMap::adjoint).collect();
    let identity = SparseOperator::identity(dim);
    let zero = SparseOperator::zeros(dim);
    let mut worst = 0.0f64;
    for i in 0..sites {
        for j in 0..sites {
            worst = worst.max(anticommutator(&c[i], &c[j]).max_abs());
            worst = worst.max(anticommutator(&cd[i], &cd[j]).max_abs());
            let target = if i == j { &identity } else { &zero };
            worst = worst.max(anticommutator(&c[i], &cd[j]).max_deviation(target).0);
        }
    }
    Ok(worst)
}

/// Largest entry of `{s_i, s'_i}` with `s, s'` both raising or both lowering,
/// and of `[s_i, s'_j]` for `i != j` with any ladder combination.
pub fn pauli_ladder_deviation(sites: usize) -> Result<f64> {
    check_size("Pauli audit", sites, MAX_JW_SITES)?;
    let plus: Vec<BasisMap> = (0..sites).map(|i| BasisMap::sigma_plus(sites, i)).collect();
    let minus: Vec<BasisMap> = (0..sites)
        .map(|i| BasisMap::sigma_minus(sites, i))
        .collect();
    let mut worst = 0.0f64;
    for i in 0..sites {
        worst = worst.max(anticommutator(&plus[i], &plus[i]).max_abs());
        worst = worst.max(anticommutator(&minus[i], &minus[i]).max_abs());
        for j in (0..sites).filter(|&j| j != i) {
            for a in [&plus[i], &minus[i]] {
                for b in [&plus[j], &minus[j]] {
                    worst = worst.max(commutator(a, b).max_abs());
                }
            }
        }
    }
    Ok(worst)
}

/// `max |c_N - exp(i pi n_down) c_0|`.
pub fn boundary_relation_deviation(sites: usize) -> Result<f64> {
    check_size("Jordan-Wigner audit", sites, MAX_JW_SITES)?;
    let dim = basis::dimension(sites);
    let mut lhs = SparseOperator::zeros(dim);
    lhs.add_map(ONE, &annihilator(sites, sites));
    let mut rhs = SparseOperator::zeros(dim);
    rhs.add_map(ONE, &down_parity(sites).compose(&annihilator(sites, 0)));
    Ok(lhs.max_deviation(&rhs).0)
}
