//! Closed-form spectrum of the XX ring with `J = 1`.
//!
//! After the Jordan-Wigner map and the parity-dependent shifted Fourier
//! transform, the Hamiltonian is diagonal in the mode occupations:
//!
//! ```text
//! H = -2 sum_k (n_k - 1/2) [g - cos(2 pi (k + alpha) / N)]
//! ```
//!
//! with `alpha = 0` when the number of holes `N - n` is odd and `alpha = 1/2`
//! when it is even. Everything here is a pure function of its arguments.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerance in `g` inside which a field value counts as sitting on a level
/// crossing.
pub const CROSSING_TOLERANCE: f64 = 1e-12;

/// Tolerance in `|g chi_N - 1|` inside which the envelope curvature is singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// A problem instance: ring size and dimensionless field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    sites: usize,
    coupling: f64,
}

impl ChainSpec {
    pub fn new(sites: usize, coupling: f64) -> Result<Self> {
        if sites < crate::MIN_SITES {
            return Err(Error::InvalidChain(format!(
                "a ring needs at least {} sites, got {sites}",
                crate::MIN_SITES
            )));
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidChain(format!(
                "coupling must be finite, got {coupling}"
            )));
        }
        Ok(Self { sites, coupling })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn ground_sector(&self) -> Result<usize> {
        ground_sector(self.sites, self.coupling)
    }

    pub fn ground_energy_density(&self) -> f64 {
        ground_energy_density(self.sites, self.coupling)
    }
}

/// Momentum offset of a parity sector, in units of `2 pi / N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectorAlpha {
    /// Odd number of holes (parity `+1`).
    Zero,
    /// Even number of holes (parity `-1`).
    Half,
}

impl SectorAlpha {
    pub fn value(self) -> f64 {
        match self {
            SectorAlpha::Zero => 0.0,
            SectorAlpha::Half => 0.5,
        }
    }

    /// `2 alpha`, as an integer.
    pub fn doubled(self) -> usize {
        match self {
            SectorAlpha::Zero => 0,
            SectorAlpha::Half => 1,
        }
    }
}

/// Occupied momenta of the lowest level in an `n`-fermion sector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub sites: usize,
    pub alpha: SectorAlpha,
    /// Sorted, distinct, each in `0..sites`.
    pub modes: Vec<usize>,
}

impl ModeSet {
    pub fn n(&self) -> usize {
        self.modes.len()
    }

    /// Shifted momenta `k + alpha`.
    pub fn momenta(&self) -> impl Iterator<Item = f64> + '_ {
        let alpha = self.alpha.value();
        self.modes.iter().map(move |&k| k as f64 + alpha)
    }

    /// `sum_k cos(2 pi (k + alpha) / N)` over the occupied modes.
    pub fn cosine_sum(&self) -> f64 {
        self.modes
            .iter()
            .map(|&k| mode_cosine(self.sites, self.alpha, k))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub n: usize,
    pub g_c: f64,
}

/// `chi_N = sin(pi/N) / (pi/N)`.
pub fn finite_size_parameter(sites: usize) -> f64 {
    let x = PI / sites as f64;
    x.sin() / x
}

pub fn alpha_for_sector(sites: usize, n: usize) -> SectorAlpha {
    debug_assert!(n <= sites);
    if (sites - n) % 2 == 1 {
        SectorAlpha::Zero
    } else {
        SectorAlpha::Half
    }
}

/// `cos(2 pi (k + alpha) / N)`.
pub fn mode_cosine(sites: usize, alpha: SectorAlpha, k: usize) -> f64 {
    (2.0 * PI * (k as f64 + alpha.value()) / sites as f64).cos()
}

/// The `n` momenta whose angle lies nearest `pi`, with the offset of the
/// `n`-fermion sector. Equal distances prefer the smaller `k`.
pub fn occupied_modes(sites: usize, n: usize) -> ModeSet {
    let alpha = alpha_for_sector(sites, n);
    occupied_modes_with_alpha(sites, n, alpha)
}

/// As [`occupied_modes`] but with an explicit offset.
pub fn occupied_modes_with_alpha(sites: usize, n: usize, alpha: SectorAlpha) -> ModeSet {
    assert!(n <= sites, "fermion count {n} exceeds {sites} sites");
    // Angle 2 pi (k + alpha) / N sits at distance |2k + 2 alpha - N| (in units
    // of pi / N) from pi; cosine is monotone in that distance on [0, 2 pi).
    let mut ks: Vec<usize> = (0..sites).collect();
    ks.sort_by_key(|&k| ((2 * k + alpha.doubled()).abs_diff(sites), k));
    ks.truncate(n);
    ks.sort_unstable();
    ModeSet {
        sites,
        alpha,
        modes: ks,
    }
}

/// Vacuum energy per site; equal to `g` for every `N` and offset.
pub fn vacuum_energy_density(_sites: usize, g: f64) -> f64 {
    g
}

/// Vacuum energy per site as the explicit mode sum
/// `(1/N) sum_k [g - cos(2 pi (alpha + k) / N)]`.
pub fn vacuum_energy_density_summed(sites: usize, alpha: SectorAlpha, g: f64) -> f64 {
    (0..sites)
        .map(|k| g - mode_cosine(sites, alpha, k))
        .sum::<f64>()
        / sites as f64
}

/// Energy per site with a single fermion in mode `k` of the one-particle
/// sector.
pub fn single_particle_energy(sites: usize, k: usize, g: f64) -> f64 {
    let alpha = alpha_for_sector(sites, 1);
    vacuum_energy_density(sites, g) - 2.0 / sites as f64 * (g - mode_cosine(sites, alpha, k))
}

/// Lowest energy per site in the `n`-fermion sector,
/// `g (1 - 2n/N) - (2/N) sin(n pi/N) / sin(pi/N)`.
///
/// Accepts `n = N + 1`, one step past the physical range; that line defines
/// `g_c(N)`.
pub fn min_energy_density(sites: usize, n: usize, g: f64) -> f64 {
    let nf = sites as f64;
    let n = n as f64;
    g * (1.0 - 2.0 * n / nf) - 2.0 / nf * (n * PI / nf).sin() / (PI / nf).sin()
}

/// `g_c(n) = [sin(n pi/N) - sin((n+1) pi/N)] / sin(pi/N)`: the field where the
/// `n` and `n + 1` lowest levels cross.
pub fn critical_point(sites: usize, n: usize) -> f64 {
    let nf = sites as f64;
    let s = |m: usize| (m as f64 * PI / nf).sin();
    (s(n) - s(n + 1)) / s(1)
}

/// `g_c(n)` for `n = 0..=N`.
///
/// `g_c(N - 1)` and `g_c(N)` both equal `+1`: the top entry is the formal
/// crossing with the unphysical `n = N + 1` line.
pub fn critical_points(sites: usize) -> Vec<CriticalPoint> {
    (0..=sites)
        .map(|n| CriticalPoint {
            n,
            g_c: critical_point(sites, n),
        })
        .collect()
}

/// Number of fermions in the ground state at field `g`.
///
/// The sector is `n` for `g_c(n-1) < g < g_c(n)`, with `n = 0` below `-1` and
/// `n = N` above `+1`. Fields within [`CROSSING_TOLERANCE`] of a crossing are
/// rejected.
pub fn ground_sector(sites: usize, g: f64) -> Result<usize> {
    let mut n = 0;
    for m in 0..sites {
        let gc = critical_point(sites, m);
        if (g - gc).abs() <= CROSSING_TOLERANCE {
            return Err(Error::DegenerateAtCrossing { g, crossing: m });
        }
        if gc < g {
            n = m + 1;
        }
    }
    Ok(n)
}

/// Ground-state energy per site. On a crossing the two adjacent sectors give
/// the same value and the lower one is used.
pub fn ground_energy_density(sites: usize, g: f64) -> f64 {
    let n = match ground_sector(sites, g) {
        Ok(n) => n,
        Err(Error::DegenerateAtCrossing { crossing, .. }) => crossing,
        Err(e) => unreachable!("{e}"),
    };
    min_energy_density(sites, n, g)
}

/// Smooth envelope of the sector levels.
pub fn envelope_energy(sites: usize, g: f64) -> f64 {
    envelope_with_chi(finite_size_parameter(sites), g)
}

fn envelope_with_chi(chi: f64, g: f64) -> f64 {
    let x = g * chi;
    if x.abs() < 1.0 {
        g * (1.0 - 2.0 / PI * (-x).acos()) - 2.0 / PI * (1.0 - x * x).sqrt() / chi
    } else {
        -g.abs()
    }
}

/// `d^2 eps_env / dg^2`: `-(2/pi) chi / sqrt(1 - g^2 chi^2)` inside, `0` outside.
pub fn envelope_second_derivative(sites: usize, g: f64) -> Result<f64> {
    let chi = finite_size_parameter(sites);
    let x = g * chi;
    if (x.abs() - 1.0).abs() <= SINGULAR_TOLERANCE {
        return Err(Error::SingularPoint { g });
    }
    if x.abs() < 1.0 {
        Ok(-2.0 / PI * chi / (1.0 - x * x).sqrt())
    } else {
        Ok(0.0)
    }
}

/// Ground-state energy per site of the infinite chain (`chi = 1`).
pub fn thermodynamic_energy(g: f64) -> f64 {
    envelope_with_chi(1.0, g)
}

/// Relative deviation of the finite envelope from the infinite chain at
/// `g = 0`: `-(1/chi_N - 1)`.
pub fn relative_error(sites: usize) -> f64 {
    -(1.0 / finite_size_parameter(sites) - 1.0)
}
