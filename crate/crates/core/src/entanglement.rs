//! Purity of the ground state across balanced bipartitions, and its mean and
//! spread over the complete set of such bipartitions.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic;
use crate::basis;
use crate::error::{check_size, Error, Result};
use crate::statevector::{self, StateVector};

pub const MAX_BIPARTITION_SITES: usize = 14;
pub const MAX_STATS_SITES: usize = 12;

/// Sweep grid points closer than this to a crossing are moved by
/// [`CROSSING_NUDGE`].
pub const NUDGE_WINDOW: f64 = 1e-9;
pub const CROSSING_NUDGE: f64 = 1e-6;

/// Subsystem `A` of a split of the ring; set bits of `mask` are the sites of
/// `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bipartition {
    pub sites: usize,
    pub mask: usize,
}

impl Bipartition {
    pub fn size_a(&self) -> usize {
        basis::ups(self.mask)
    }

    pub fn size_b(&self) -> usize {
        self.sites - self.size_a()
    }

    pub fn complement(&self) -> Bipartition {
        Bipartition {
            sites: self.sites,
            mask: !self.mask & (basis::dimension(self.sites) - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityStats {
    pub g: f64,
    pub n: usize,
    pub mu: f64,
    pub sigma: f64,
    /// `(mask, purity)` in ascending mask order.
    pub purities: Vec<(usize, f64)>,
}

/// Every split into `floor(N/2)` and `ceil(N/2)` sites, each unordered pair
/// once: for even `N` the half containing site 0 is `A`. Ascending mask order.
pub fn balanced_bipartitions(sites: usize) -> Result<Vec<Bipartition>> {
    check_size("bipartition enumeration", sites, MAX_BIPARTITION_SITES)?;
    let half = sites / 2;
    Ok(basis::masks_with_popcount(sites, half)
        .into_iter()
        .filter(|m| sites % 2 == 1 || m & 1 == 1)
        .map(|mask| Bipartition { sites, mask })
        .collect())
}

/// Coefficient matrix `M[a][b]` with `a` the compacted bits under `mask` and
/// `b` the compacted remaining bits, row-major.
pub fn coefficient_matrix(state: &StateVector, mask: usize) -> (usize, usize, Vec<Complex64>) {
    let sites = state.sites();
    let full = basis::dimension(sites) - 1;
    let rest = !mask & full;
    let rows = 1usize << basis::ups(mask);
    let cols = 1usize << basis::ups(rest);
    let mut m = vec![Complex64::new(0.0, 0.0); rows * cols];
    for (b, a) in state.amplitudes().iter().enumerate() {
        if a.norm_sqr() > 0.0 {
            m[basis::compact_bits(b, mask) * cols + basis::compact_bits(b, rest)] = *a;
        }
    }
    (rows, cols, m)
}

/// `Tr rho_A^2` for the reduced state on the sites of `mask`. The Gram matrix
/// is formed on whichever side is smaller.
pub fn purity_of_mask(state: &StateVector, mask: usize) -> Result<f64> {
    let full = basis::dimension(state.sites()) - 1;
    if mask & !full != 0 {
        return Err(Error::DimensionMismatch(format!(
            "mask {mask:#b} addresses sites beyond {}",
            state.sites()
        )));
    }
    let small = if basis::ups(mask) <= basis::ups(!mask & full) {
        mask
    } else {
        !mask & full
    };
    let (rows, cols, m) = coefficient_matrix(state, small);
    let nonzero_rows: Vec<usize> = (0..rows)
        .filter(|&r| {
            m[r * cols..(r + 1) * cols]
                .iter()
                .any(|a| a.norm_sqr() > 0.0)
        })
        .collect();
    let mut total = 0.0;
    for (i, &r) in nonzero_rows.iter().enumerate() {
        let row_r = &m[r * cols..(r + 1) * cols];
        for &s in &nonzero_rows[i..] {
            let row_s = &m[s * cols..(s + 1) * cols];
            let g: Complex64 = row_r.iter().zip(row_s).map(|(x, y)| x * y.conj()).sum();
            total += if r == s {
                g.norm_sqr()
            } else {
                2.0 * g.norm_sqr()
            };
        }
    }
    Ok(total)
}

pub fn purity(state: &StateVector, bipartition: &Bipartition) -> Result<f64> {
    if bipartition.sites != state.sites() {
        return Err(Error::DimensionMismatch(format!(
            "{}-site bipartition applied to a {}-site state",
            bipartition.sites,
            state.sites()
        )));
    }
    purity_of_mask(state, bipartition.mask)
}

/// Mean and population standard deviation.
pub fn mean_and_deviation(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
    (mu, var.sqrt())
}

/// Purity statistics of a given state over all balanced bipartitions.
pub fn stats_for_state(state: &StateVector, g: f64, n: usize) -> Result<PurityStats> {
    let parts = balanced_bipartitions(state.sites())?;
    let purities = parts
        .par_iter()
        .map(|p| purity(state, p).map(|v| (p.mask, v)))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = purities.iter().map(|(_, v)| *v).collect();
    let (mu, sigma) = mean_and_deviation(&values);
    Ok(PurityStats {
        g,
        n,
        mu,
        sigma,
        purities,
    })
}

pub fn purity_stats(sites: usize, g: f64) -> Result<PurityStats> {
    check_size("purity statistics", sites, MAX_STATS_SITES)?;
    let n = analytic::ground_sector(sites, g)?;
    let state = statevector::sector_ground_state(sites, n)?;
    stats_for_state(&state, g, n)
}

/// Evenly spaced field values including both ends.
pub fn grid(g_min: f64, g_max: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "a grid needs at least two points");
    (0..steps)
        .map(|i| g_min + (g_max - g_min) * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Moves `g` off a level crossing by [`CROSSING_NUDGE`] if it lies within
/// [`NUDGE_WINDOW`] of one.
pub fn nudge_off_crossing(sites: usize, g: f64) -> f64 {
    let hit = (0..sites).any(|m| (g - analytic::critical_point(sites, m)).abs() <= NUDGE_WINDOW);
    if hit {
        g + CROSSING_NUDGE
    } else {
        g
    }
}

/// Purity statistics along an evenly spaced field grid. The ground state is
/// constant inside a sector, so each sector's state is built once.
pub fn entanglement_sweep(
    sites: usize,
    g_min: f64,
    g_max: f64,
    steps: usize,
) -> Result<Vec<PurityStats>> {
    check_size("purity statistics", sites, MAX_STATS_SITES)?;
    let points: Vec<(f64, usize)> = grid(g_min, g_max, steps)
        .into_iter()
        .map(|g| {
            let g = nudge_off_crossing(sites, g);
            analytic::ground_sector(sites, g).map(|n| (g, n))
        })
        .collect::<Result<_>>()?;
    let mut sectors: Vec<usize> = points.iter().map(|&(_, n)| n).collect();
    sectors.sort_unstable();
    sectors.dedup();
    let per_sector: BTreeMap<usize, PurityStats> = sectors
        .par_iter()
        .map(|&n| {
            let state = statevector::sector_ground_state(sites, n)?;
            Ok((n, stats_for_state(&state, f64::NAN, n)?))
        })
        .collect::<Result<_>>()?;
    Ok(points
        .into_iter()
        .map(|(g, n)| PurityStats {
            g,
            ..per_sector[&n].clone()
        })
        .collect())
}

/// A field value strictly inside the sector of `n` fermions.
pub fn sector_midpoint(sites: usize, n: usize) -> f64 {
    let lower = if n == 0 {
        -1.5
    } else {
        analytic::critical_point(sites, n - 1)
    };
    let upper = if n >= sites {
        1.5
    } else {
        analytic::critical_point(sites, n)
    };
    match n {
        0 => upper - 0.5,
        _ if n >= sites => lower + 0.5,
        _ => 0.5 * (lower + upper),
    }
}

/// One statistics record per fermion sector `n = 0..=N`, evaluated at the
/// sector midpoint.
pub fn sector_plateaus(sites: usize) -> Result<Vec<PurityStats>> {
    check_size("purity statistics", sites, MAX_STATS_SITES)?;
    (0..=sites)
        .into_par_iter()
        .map(|n| {
            let state = statevector::sector_ground_state(sites, n)?;
            stats_for_state(&state, sector_midpoint(sites, n), n)
        })
        .collect()
}
