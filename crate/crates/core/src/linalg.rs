//! Dense complex linear algebra helpers on top of `nalgebra`.
//!
//! All Hermitian eigendecompositions in the crate go through [`eigh`], which
//! fixes the output order (ascending eigenvalues, ties by original position)
//! and the eigenvector phases, so repeated calls on the same input give
//! bit-identical results.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Components smaller than this are skipped when choosing the phase anchor.
const PHASE_ANCHOR_TOL: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Hermitian eigendecomposition with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the same order as `values`.
    pub vectors: CMatrix,
}

impl Eigh {
    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Column of the largest eigenvalue.
    pub fn top_vector(&self) -> CVector {
        self.vectors.column(self.values.len() - 1).into_owned()
    }
}

/// Deterministic eigendecomposition of the Hermitian part of `m`.
///
/// Each eigenvector is rotated so that its first component with modulus above
/// `1e-8` is real and positive.
pub fn eigh(m: &CMatrix) -> Eigh {
    let n = m.nrows();
    if n == 0 {
        return Eigh {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        };
    }
    let se = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[a]
            .total_cmp(&se.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = se.eigenvectors.column(src).into_owned();
        fix_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    Eigh { values, vectors }
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigvalsh(m).first().copied().unwrap_or(0.0)
}

pub fn fix_phase(v: &mut CVector) {
    if let Some(anchor) = v.iter().find(|z| z.norm() > PHASE_ANCHOR_TOL).copied() {
        let phase = anchor.conj() / anchor.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Largest entry-wise deviation `|m_ij - conj(m_ji)|`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn trace_re(m: &CMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// `Re tr(a b)`, without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            let x = a[(i, k)];
            let y = b[(k, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// Kronecker product of vectors in the big-endian convention.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&x| c(x, 0.0)),
    ))
}

/// Reconstructs `V diag(f(λ)) V†` from an eigendecomposition.
pub fn spectral_map(e: &Eigh, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = e.values.len();
    let mut scaled = e.vectors.clone();
    for j in 0..n {
        let s = f(e.values[j]);
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * e.vectors.adjoint()
}

/// Maximum of `|u†u - 1|` entries.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.ncols()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_orders_ascending_and_fixes_phase() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let e = eigh(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] - 3.0).abs() < 1e-12);
        for j in 0..2 {
            let first = e.vectors[(0, j)];
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
        }
        let back = spectral_map(&e, |x| x);
        assert!(max_abs_diff(&back, &m) < 1e-12);
    }

    #[test]
    fn eigh_is_repeatable() {
        let m = CMatrix::from_fn(5, 5, |i, j| c((i * j) as f64, i as f64 - j as f64));
        let a = eigh(&m);
        let b = eigh(&m);
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn trace_product_matches_dense() {
        let a = CMatrix::from_fn(3, 3, |i, j| c(i as f64 + 0.5, j as f64 - 1.0));
        let b = CMatrix::from_fn(3, 3, |i, j| c((i * j) as f64, 0.25 * i as f64));
        let dense = (&a * &b).trace().re;
        assert!((trace_product_re(&a, &b) - dense).abs() < 1e-12);
    }
}
