//! Operator algebra on the `2^N` product basis.
//!
//! Every Pauli, ladder and Jordan-Wigner operator sends each basis state to at
//! most one basis state, so it is stored as a [`BasisMap`]: for each column the
//! single nonzero row and its value. Sums of such operators are collected in a
//! [`SparseOperator`].

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::basis;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// An operator with at most one nonzero entry per column.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMap {
    columns: Vec<Option<(usize, Complex64)>>,
}

impl BasisMap {
    pub fn dimension(&self) -> usize {
        self.columns.len()
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            columns: (0..dim).map(|b| Some((b, ONE))).collect(),
        }
    }

    pub fn diagonal(dim: usize, f: impl Fn(usize) -> f64) -> Self {
        Self {
            columns: (0..dim)
                .map(|b| Some((b, Complex64::new(f(b), 0.0))))
                .collect(),
        }
    }

    fn from_fn(dim: usize, f: impl Fn(usize) -> Option<(usize, Complex64)>) -> Self {
        Self {
            columns: (0..dim).map(f).collect(),
        }
    }

    pub fn sigma_x(sites: usize, site: usize) -> Self {
        Self::from_fn(basis::dimension(sites), |b| Some((b ^ 1 << site, ONE)))
    }

    /// `sigma^y |up> = i |down>`, `sigma^y |down> = -i |up>`.
    pub fn sigma_y(sites: usize, site: usize) -> Self {
        Self::from_fn(basis::dimension(sites), |b| {
            let phase = if basis::is_up(b, site) {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, -1.0)
            };
            Some((b ^ 1 << site, phase))
        })
    }

    pub fn sigma_z(sites: usize, site: usize) -> Self {
        Self::diagonal(basis::dimension(sites), |b| {
            if basis::is_up(b, site) {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// Raising operator `sigma^+ = (sigma^x + i sigma^y) / 2`.
    pub fn sigma_plus(sites: usize, site: usize) -> Self {
        Self::from_fn(basis::dimension(sites), |b| {
            (!basis::is_up(b, site)).then_some((b | 1 << site, ONE))
        })
    }

    /// Lowering operator `sigma^- = (sigma^x - i sigma^y) / 2`.
    pub fn sigma_minus(sites: usize, site: usize) -> Self {
        Self::from_fn(basis::dimension(sites), |b| {
            basis::is_up(b, site).then_some((b & !(1 << site), ONE))
        })
    }

    /// `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &BasisMap) -> BasisMap {
        assert_eq!(self.dimension(), rhs.dimension());
        BasisMap {
            columns: rhs
                .columns
                .iter()
                .map(|entry| {
                    let (mid, v1) = (*entry)?;
                    let (row, v2) = self.columns[mid]?;
                    let v = v1 * v2;
                    (v != ZERO).then_some((row, v))
                })
                .collect(),
        }
    }

    /// Hermitian adjoint. Every operator built here is injective on its
    /// support, so the adjoint is again a `BasisMap`.
    pub fn adjoint(&self) -> BasisMap {
        let mut columns = vec![None; self.dimension()];
        for (col, entry) in self.columns.iter().enumerate() {
            if let Some((row, v)) = *entry {
                assert!(columns[row].is_none(), "operator is not injective");
                columns[row] = Some((col, v.conj()));
            }
        }
        BasisMap { columns }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .filter_map(|(col, e)| e.map(|(row, v)| (row, col, v)))
    }

    /// Product of a sequence, leftmost first.
    pub fn product<'a>(dim: usize, ops: impl IntoIterator<Item = &'a BasisMap>) -> BasisMap {
        ops.into_iter()
            .fold(BasisMap::identity(dim), |acc, op| acc.compose(op))
    }
}

/// A general operator as a map from `(row, col)` to value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        out.add_map(ONE, &BasisMap::identity(dim));
        out
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn add_entry(&mut self, row: usize, col: usize, value: Complex64) {
        *self.entries.entry((row, col)).or_insert(ZERO) += value;
    }

    /// `self += scale * op`.
    pub fn add_map(&mut self, scale: Complex64, op: &BasisMap) {
        assert_eq!(self.dim, op.dimension());
        for (row, col, v) in op.entries() {
            self.add_entry(row, col, scale * v);
        }
    }

    pub fn add(&mut self, scale: Complex64, other: &SparseOperator) {
        assert_eq!(self.dim, other.dim);
        for (&(row, col), &v) in &other.entries {
            self.add_entry(row, col, scale * v);
        }
    }

    /// Keeps only entries whose row and column both satisfy `keep`
    /// (conjugation by a diagonal projector).
    pub fn project(&self, keep: impl Fn(usize) -> bool) -> SparseOperator {
        SparseOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .filter(|(&(r, c), _)| keep(r) && keep(c))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries.get(&(row, col)).copied().unwrap_or(ZERO)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    /// Largest `|self_rc - other_rc|` and where it occurs.
    pub fn max_deviation(&self, other: &SparseOperator) -> (f64, usize, usize) {
        assert_eq!(self.dim, other.dim);
        let mut worst = (0.0, 0, 0);
        let keys = self.entries.keys().chain(other.entries.keys());
        for &(r, c) in keys {
            let d = (self.get(r, c) - other.get(r, c)).norm();
            if d > worst.0 {
                worst = (d, r, c);
            }
        }
        worst
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `a b + b a`.
pub fn anticommutator(a: &BasisMap, b: &BasisMap) -> SparseOperator {
    let mut out = SparseOperator::zeros(a.dimension());
    out.add_map(ONE, &a.compose(b));
    out.add_map(ONE, &b.compose(a));
    out
}

/// `a b - b a`.
pub fn commutator(a: &BasisMap, b: &BasisMap) -> SparseOperator {
    let mut out = SparseOperator::zeros(a.dimension());
    out.add_map(ONE, &a.compose(b));
    out.add_map(-ONE, &b.compose(a));
    out
}
