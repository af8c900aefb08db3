//! Operator-level audit of the parity-sector diagonalization.
//!
//! In each parity sector the shifted modes
//! `chat_k = N^{-1/2} sum_j exp(-2 pi i (k + alpha) j / N) c_j` turn the
//! Hamiltonian into `-2 sum_k (chat_k^dag chat_k - 1/2)(g - cos theta_k)`.
//! The audit builds both projected sector operators from explicit matrices,
//! adds them, and compares with the Pauli-form Hamiltonian.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::eigen::{eigenvalues, symmetric_eigen};
use super::jw::annihilator;
use super::ops::{BasisMap, SparseOperator};
use super::{parity_diagonal, spin_hamiltonian_sparse, DenseOperator, MAX_SECTOR_AUDIT_SITES};
use crate::analytic::{mode_cosine, SectorAlpha};
use crate::basis;
use crate::error::{check_size, Error, Result};

/// Entrywise tolerance for the reassembled Hamiltonian.
pub const SECTOR_TOLERANCE: f64 = 1e-11;

#[derive(Debug, Clone, Serialize)]
pub struct SectorAudit {
    pub sites: usize,
    pub g: f64,
    /// `max |H^(+) + H^(-) - H|`.
    pub operator_deviation: f64,
    /// Spectrum of `H^(+) + H^(-)` against the per-sector spectra of `H`.
    pub spectrum_deviation: f64,
    /// Per-sector spectra of `H` against the occupation-number energies.
    pub mode_spectrum_deviation: f64,
}

/// Number operator `chat_k^dag chat_k` for the offset `alpha`.
#[allow(clippy::needless_range_loop)]
pub fn mode_number_operator(sites: usize, alpha: SectorAlpha, k: usize) -> SparseOperator {
    let dim = basis::dimension(sites);
    let c: Vec<BasisMap> = (0..sites).map(|i| annihilator(sites, i)).collect();
    let cd: Vec<BasisMap> = c.iter().map(BasisMap::adjoint).collect();
    let q = 2.0 * PI * (k as f64 + alpha.value()) / sites as f64;
    let mut out = SparseOperator::zeros(dim);
    for j in 0..sites {
        for l in 0..sites {
            let w = Complex64::from_polar(1.0 / sites as f64, q * (j as f64 - l as f64));
            out.add_map(w, &cd[j].compose(&c[l]));
        }
    }
    out
}

/// `P_s [-2 sum_k (n_k - 1/2)(g - cos theta_k)] P_s` for the sector with the
/// given offset (`alpha = 0` on `P = +1`, `alpha = 1/2` on `P = -1`).
pub fn sector_hamiltonian(sites: usize, alpha: SectorAlpha, g: f64) -> SparseOperator {
    let sign = match alpha {
        SectorAlpha::Zero => 1.0,
        SectorAlpha::Half => -1.0,
    };
    projected_mode_hamiltonian(sites, alpha, sign, g)
}

fn projected_mode_hamiltonian(
    sites: usize,
    alpha: SectorAlpha,
    sign: f64,
    g: f64,
) -> SparseOperator {
    let dim = basis::dimension(sites);
    let identity = SparseOperator::identity(dim);
    let mut h = SparseOperator::zeros(dim);
    for k in 0..sites {
        let weight = -2.0 * (g - mode_cosine(sites, alpha, k));
        h.add(
            Complex64::new(weight, 0.0),
            &mode_number_operator(sites, alpha, k),
        );
        h.add(Complex64::new(-0.5 * weight, 0.0), &identity);
    }
    let parity = parity_diagonal(sites);
    h.project(|b| parity[b] == sign)
}

/// Energies `-2 sum_k (n_k - 1/2)(g - cos theta_k)` of every occupation
/// pattern allowed in the sector, ascending.
fn occupation_spectrum(sites: usize, alpha: SectorAlpha, g: f64) -> Vec<f64> {
    let holes_odd = matches!(alpha, SectorAlpha::Zero);
    let mut out: Vec<f64> = (0..basis::dimension(sites))
        .filter(|&occ| ((sites - basis::ups(occ)) % 2 == 1) == holes_odd)
        .map(|occ| {
            (0..sites)
                .map(|k| {
                    let n_k = if basis::is_up(occ, k) { 1.0 } else { 0.0 };
                    -2.0 * (n_k - 0.5) * (g - mode_cosine(sites, alpha, k))
                })
                .sum()
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

fn restricted_spectrum(h: &DenseOperator, keep: &[usize]) -> Result<Vec<f64>> {
    let m = h.matrix();
    let k = keep.len();
    Ok(symmetric_eigen(&DMatrix::from_fn(k, k, |r, c| m[(keep[r], keep[c])]))?.values)
}

fn max_pairwise(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn verify_sector_hamiltonians(sites: usize, g: f64) -> Result<SectorAudit> {
    check_size("sector audit", sites, MAX_SECTOR_AUDIT_SITES)?;
    let mut reassembled = sector_hamiltonian(sites, SectorAlpha::Zero, g);
    reassembled.add(
        Complex64::new(1.0, 0.0),
        &sector_hamiltonian(sites, SectorAlpha::Half, g),
    );
    let spin = spin_hamiltonian_sparse(sites, g);
    let (operator_deviation, row, col) = reassembled.max_deviation(&spin);
    if operator_deviation > SECTOR_TOLERANCE {
        return Err(Error::Mismatch {
            row,
            col,
            deviation: operator_deviation,
        });
    }

    let summed = DenseOperator::from_sparse(sites, &reassembled)?;
    let spin = DenseOperator::from_sparse(sites, &spin)?;
    let parity = parity_diagonal(sites);
    let even: Vec<usize> = (0..parity.len()).filter(|&b| parity[b] > 0.0).collect();
    let odd: Vec<usize> = (0..parity.len()).filter(|&b| parity[b] < 0.0).collect();
    let plus = restricted_spectrum(&spin, &even)?;
    let minus = restricted_spectrum(&spin, &odd)?;
    let mut both: Vec<f64> = plus.iter().chain(&minus).copied().collect();
    both.sort_by(f64::total_cmp);
    let spectrum_deviation = max_pairwise(&eigenvalues(&summed)?, &both);
    let mode_spectrum_deviation =
        max_pairwise(&plus, &occupation_spectrum(sites, SectorAlpha::Zero, g)).max(max_pairwise(
            &minus,
            &occupation_spectrum(sites, SectorAlpha::Half, g),
        ));

    Ok(SectorAudit {
        sites,
        g,
        operator_deviation,
        spectrum_deviation,
        mode_spectrum_deviation,
    })
}
