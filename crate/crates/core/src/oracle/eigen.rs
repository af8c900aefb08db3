//! Dense real symmetric eigensolver and the lowest eigenpair of an operator.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration with Wilkinson shifts (the EISPACK `tred2`/`tql2` pair). Before
//! solving, the matrix is split into the connected components of its nonzero
//! pattern and each block is solved on its own; for number-conserving
//! Hamiltonians the blocks are the fixed-magnetization sectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DenseOperator;
use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Lowest two eigenvalues closer than this are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

const RESIDUAL_FACTOR: f64 = 1e-10;
const MAX_QL_ITERATIONS: usize = 60;

#[derive(Debug, Clone)]
pub struct GroundEigenpair {
    pub energy: f64,
    pub vector: StateVector,
    /// Distance to the next eigenvalue (`inf` for a 1x1 operator).
    pub gap: f64,
    pub degenerate: bool,
    pub residual: f64,
}

/// Eigen-decomposition of a symmetric matrix: ascending `values` and the
/// matching orthonormal eigenvectors stored column-wise in `vectors`
/// (row-major, `n x n`).
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub dim: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, index: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|r| self.vectors[r * self.dim + index])
            .collect()
    }
}

/// Householder tridiagonalization. On return `v` holds the accumulated
/// orthogonal transform, `d` the diagonal and `e[1..]` the subdiagonal.
#[allow(clippy::needless_range_loop)]
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                let f = d[j];
                v[at(j, i)] = f;
                let mut g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal `(d, e)`, rotating the columns of `v`.
fn tridiagonal_ql(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let at = |i: usize, j: usize| i * n + j;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence(format!(
                        "QL iteration stalled on eigenvalue {l} of {n} after {MAX_QL_ITERATIONS} steps (|e| = {:e})",
                        e[l].abs()
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let h = v[at(k, i + 1)];
                        v[at(k, i + 1)] = s * v[at(k, i)] + c * h;
                        v[at(k, i)] = c * v[at(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Full eigen-decomposition of a real symmetric matrix (only the lower
/// triangle is read).
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<SymmetricEigen> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            n,
            m.ncols()
        )));
    }
    if n == 0 {
        return Ok(SymmetricEigen {
            values: Vec::new(),
            vectors: Vec::new(),
            dim: 0,
        });
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            v[i * n + j] = m[(i, j)];
            v[j * n + i] = m[(i, j)];
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n > 1 {
        tridiagonalize(n, &mut v, &mut d, &mut e);
        tridiagonal_ql(n, &mut v, &mut d, &mut e)?;
    } else {
        d[0] = v[0];
        v[0] = 1.0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + new] = v[r * n + old];
        }
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        dim: n,
    })
}

fn components(m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)] != 0.0 || m[(j, i)] != 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

struct Block {
    indices: Vec<usize>,
    eigen: SymmetricEigen,
}

fn decompose(op: &DenseOperator) -> Result<Vec<Block>> {
    let m = op.matrix();
    components(m)
        .into_iter()
        .map(|indices| {
            let k = indices.len();
            let sub = DMatrix::from_fn(k, k, |r, c| m[(indices[r], indices[c])]);
            let eigen = symmetric_eigen(&sub)?;
            Ok(Block { indices, eigen })
        })
        .collect()
}

/// All eigenvalues, ascending.
pub fn eigenvalues(op: &DenseOperator) -> Result<Vec<f64>> {
    let mut all: Vec<f64> = decompose(op)?
        .into_iter()
        .flat_map(|b| b.eigen.values)
        .collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

pub fn ground_eigenpair(op: &DenseOperator) -> Result<GroundEigenpair> {
    let asym = op.asymmetry();
    if asym > 1e-12 {
        return Err(Error::DimensionMismatch(format!(
            "operator is not symmetric (max asymmetry {asym:e})"
        )));
    }
    let blocks = decompose(op)?;
    let mut best: Option<(f64, usize, usize)> = None;
    let mut values: Vec<f64> = Vec::with_capacity(op.dimension());
    for (bi, block) in blocks.iter().enumerate() {
        for (ei, &v) in block.eigen.values.iter().enumerate() {
            values.push(v);
            if best.is_none_or(|(e, _, _)| v < e) {
                best = Some((v, bi, ei));
            }
        }
    }
    let (energy, bi, ei) = best.expect("empty operator");
    values.sort_by(f64::total_cmp);
    let gap = values.get(1).map_or(f64::INFINITY, |next| next - values[0]);

    let block = &blocks[bi];
    let column = block.eigen.vector(ei);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); op.dimension()];
    for (r, &idx) in block.indices.iter().enumerate() {
        amplitudes[idx] = Complex64::new(column[r], 0.0);
    }
    let mut vector = StateVector::new(op.sites(), amplitudes)?;
    vector.normalize();

    let m = op.matrix();
    let v =
        nalgebra::DVector::from_iterator(op.dimension(), vector.amplitudes().iter().map(|a| a.re));
    let residual = (m * &v - &v * energy).norm();
    let bound = RESIDUAL_FACTOR * m.norm().max(f64::MIN_POSITIVE);
    if residual > bound {
        return Err(Error::NoConvergence(format!(
            "residual {residual:e} exceeds {bound:e} at eigenvalue {energy}"
        )));
    }
    Ok(GroundEigenpair {
        energy,
        vector,
        gap,
        degenerate: gap < DEGENERACY_GAP,
        residual,
    })
}
