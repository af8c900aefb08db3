//! Exact ground-state vectors in the spin-z product basis.
//!
//! The lowest state of the `n`-fermion sector is `prod_a c^dag_{k_a} |vac>`
//! with the shifted momenta of [`ModeSet`]. Expanded on site occupations
//! `j_1 < ... < j_n`, its amplitude is a Slater determinant of plane waves
//! times the Jordan-Wigner sign `(-1)^{n j_1 + (n-1)(j_2 - j_1) + ...}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::{self, ModeSet};
use crate::basis;
use crate::error::{check_size, Error, Result};

/// Largest ring for which a full state vector is assembled.
pub const MAX_STATE_SITES: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    sites: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis::dimension(sites) {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {sites} sites (expected {})",
                amplitudes.len(),
                basis::dimension(sites)
            )));
        }
        Ok(Self { sites, amplitudes })
    }

    /// The product state `index` with unit amplitude.
    pub fn basis_state(sites: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis::dimension(sites)];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { sites, amplitudes }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            self.amplitudes.iter_mut().for_each(|a| *a /= norm);
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.sites != other.sites {
            return Err(Error::DimensionMismatch(format!(
                "inner product of {}-site and {}-site states",
                self.sites, other.sites
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Fermion numbers carrying nonzero weight.
    pub fn support_popcounts(&self) -> Vec<usize> {
        let mut counts: Vec<usize> = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(b, _)| basis::ups(b))
            .collect();
        counts.sort_unstable();
        counts.dedup();
        counts
    }

    /// Relabels site `j` as site `j + 1 (mod N)`.
    pub fn translated(&self) -> StateVector {
        let n = self.sites;
        let full = basis::dimension(n) - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (b, a) in self.amplitudes.iter().enumerate() {
            let shifted = ((b << 1) | (b >> (n - 1))) & full;
            out[shifted] = *a;
        }
        StateVector {
            sites: n,
            amplitudes: out,
        }
    }

    /// Global spin flip: index `b` maps to its complement.
    pub fn spin_flipped(&self) -> StateVector {
        let full = basis::dimension(self.sites) - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (b, a) in self.amplitudes.iter().enumerate() {
            out[b ^ full] = *a;
        }
        StateVector {
            sites: self.sites,
            amplitudes: out,
        }
    }
}

/// Determinant of a square row-major complex matrix by LU with partial
/// pivoting. Consumes the buffer.
pub(crate) fn determinant(mut m: Vec<Complex64>, dim: usize) -> Complex64 {
    debug_assert_eq!(m.len(), dim * dim);
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&a, &b| m[a * dim + col].norm().total_cmp(&m[b * dim + col].norm()))
            .unwrap();
        let p = m[pivot * dim + col];
        if p.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for c in 0..dim {
                m.swap(pivot * dim + c, col * dim + c);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..dim {
            let factor = m[row * dim + col] / p;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for c in col + 1..dim {
                let v = m[col * dim + c];
                m[row * dim + c] -= factor * v;
            }
        }
    }
    det
}

/// Unnormalized amplitude of the occupation `positions` in the Slater state
/// of `modes`: `det[exp(2 pi i (k_a + alpha) j_b / N)]` times the
/// Jordan-Wigner sign string.
pub fn slater_amplitude(sites: usize, modes: &ModeSet, positions: &[usize]) -> Complex64 {
    let n = modes.n();
    assert_eq!(positions.len(), n, "need one position per occupied mode");
    debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(positions.iter().all(|&j| j < sites));
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let scale = 2.0 * PI / sites as f64;
    let matrix: Vec<Complex64> = modes
        .momenta()
        .flat_map(|q| {
            positions
                .iter()
                .map(move |&j| Complex64::from_polar(1.0, scale * q * j as f64))
        })
        .collect();
    // n j_1 + (n-1)(j_2 - j_1) + ... + (j_n - j_{n-1}) telescopes to sum_b j_b.
    let sign_exponent: usize = positions.iter().sum();
    let det = determinant(matrix, n);
    if sign_exponent % 2 == 1 {
        -det
    } else {
        det
    }
}

/// Lowest state of the `n`-fermion sector, normalized.
pub fn sector_ground_state(sites: usize, n: usize) -> Result<StateVector> {
    check_size("state vector", sites, MAX_STATE_SITES)?;
    if n > sites {
        return Err(Error::InvalidChain(format!(
            "{n} fermions on {sites} sites"
        )));
    }
    let modes = analytic::occupied_modes(sites, n);
    let masks = basis::masks_with_popcount(sites, n);
    let values: Vec<Complex64> = masks
        .par_iter()
        .map(|&mask| slater_amplitude(sites, &modes, &basis::occupied_sites(mask)))
        .collect();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis::dimension(sites)];
    for (&mask, v) in masks.iter().zip(values) {
        amplitudes[mask] = v;
    }
    let mut state = StateVector { sites, amplitudes };
    state.normalize();
    Ok(state)
}

/// Ground state of the ring at field `g`.
pub fn ground_state(sites: usize, g: f64) -> Result<StateVector> {
    check_size("state vector", sites, MAX_STATE_SITES)?;
    let n = analytic::ground_sector(sites, g)?;
    sector_ground_state(sites, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{occupied_modes, SectorAlpha};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Permutation-sum determinant, for small matrices only.
    fn leibniz(m: &[Complex64], dim: usize) -> Complex64 {
        fn perms(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in 0..k {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    perms(k, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut all = Vec::new();
        perms(dim, &mut Vec::new(), &mut vec![false; dim], &mut all);
        all.iter()
            .map(|p| {
                let inversions = (0..dim)
                    .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let term: Complex64 = (0..dim).map(|r| m[r * dim + p[r]]).product();
                if inversions % 2 == 1 {
                    -term
                } else {
                    term
                }
            })
            .sum()
    }

    #[test]
    fn lu_matches_permutation_sum() {
        let m: Vec<Complex64> = (0..16)
            .map(|i| {
                c(
                    ((i * 7 + 3) % 11) as f64 - 5.0,
                    ((i * 5 + 1) % 7) as f64 - 3.0,
                )
            })
            .collect();
        let d = determinant(m.clone(), 4);
        assert!((d - leibniz(&m, 4)).norm() < 1e-9);
        assert_eq!(determinant(vec![c(0.0, 0.0); 4], 2), c(0.0, 0.0));
    }

    #[test]
    fn single_fermion_amplitude() {
        let modes = ModeSet {
            sites: 8,
            alpha: SectorAlpha::Zero,
            modes: vec![4],
        };
        let a = slater_amplitude(8, &modes, &[3]);
        assert!((a - c(1.0, 0.0)).norm() < 1e-12);
        for j in 0..8 {
            assert!((slater_amplitude(8, &modes, &[j]).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_configuration() {
        let modes = occupied_modes(6, 0);
        assert_eq!(slater_amplitude(6, &modes, &[]), c(1.0, 0.0));
    }

    #[test]
    fn mode_swap_flips_sign() {
        let ab = ModeSet {
            sites: 4,
            alpha: SectorAlpha::Half,
            modes: vec![1, 2],
        };
        let ba = ModeSet {
            modes: vec![2, 1],
            ..ab.clone()
        };
        for pos in [[0, 1], [0, 3], [1, 2]] {
            let x = slater_amplitude(4, &ab, &pos);
            let y = slater_amplitude(4, &ba, &pos);
            assert!((x + y).norm() < 1e-12);
        }
    }

    #[test]
    fn extreme_fields_are_product_states() {
        let s = ground_state(8, -2.0).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
        let s = ground_state(8, 2.0).unwrap();
        assert!((s.amplitudes()[255].norm() - 1.0).abs() < 1e-12);
        assert!(s.amplitudes()[..255].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn single_fermion_plane_wave() {
        let s = ground_state(8, -0.95).unwrap();
        let nonzero: Vec<_> = s.amplitudes().iter().filter(|a| a.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 8);
        for a in nonzero {
            assert!((a.norm() - 1.0 / 8f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            ground_state(15, 0.1),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(ground_state(2, 0.1), Err(Error::InvalidChain(_))));
        assert!(matches!(
            ground_state(8, 1.0),
            Err(Error::DegenerateAtCrossing { .. })
        ));
        assert!(ground_state(14, 0.1).is_ok());
    }

    #[test]
    fn normalized_and_sharp() {
        for n in 3..=10 {
            for &g in &[-0.7, -0.1, 0.33, 0.8] {
                let Ok(s) = ground_state(n, g) else { continue };
                assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
                let sector = analytic::ground_sector(n, g).unwrap();
                assert_eq!(s.support_popcounts(), vec![sector]);
            }
        }
    }

    #[test]
    fn translation_eigenstate() {
        for n in 3..=10 {
            for sector in 0..=n {
                let s = sector_ground_state(n, sector).unwrap();
                let t = s.translated();
                let overlap = s.inner(&t).unwrap();
                assert!((overlap.norm() - 1.0).abs() < 1e-10, "N={n} n={sector}");
            }
        }
    }

    #[test]
    fn colex_determinism_across_pools() {
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| sector_ground_state(12, 6).unwrap());
        let b = four.install(|| sector_ground_state(12, 6).unwrap());
        assert_eq!(a, b);
    }
}
