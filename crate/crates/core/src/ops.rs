//! Partial transpose and trace, Schmidt coefficients, supports and entropies.

use crate::linalg::{self, c, CMatrix};
use crate::space::{Bipartition, MultipartiteSpace};
use crate::state::{DensityOperator, PureState, SupportProjector};
use crate::{Error, Result, DEFAULT_RANK_TOL};

/// `m^{T_A}` for an operator on the cut's space: the digits of the parties in
/// `A` are exchanged between row and column index.
pub fn partial_transpose_matrix(m: &CMatrix, cut: &Bipartition) -> CMatrix {
    let d = cut.space().total_dim();
    debug_assert_eq!(m.nrows(), d);
    let parts = cut.side_parts();
    CMatrix::from_fn(d, d, |i, j| {
        let (ai, aj) = (parts[i], parts[j]);
        m[(i - ai + aj, j - aj + ai)]
    })
}

/// `ρ^{T_A}`. Hermitian with the same trace as `ρ`, but not positive in general.
pub fn partial_transpose(rho: &DensityOperator, cut: &Bipartition) -> Result<CMatrix> {
    if cut.space() != rho.space() {
        return Err(Error::InvalidCut(format!(
            "cut {} belongs to a different space",
            cut.label()
        )));
    }
    Ok(partial_transpose_matrix(rho.matrix(), cut))
}

/// Reduced operator on `keep` (any order; the result follows increasing party order).
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let space = rho.space();
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "partial trace must keep at least one party".into(),
        ));
    }
    let reduced = space.subspace(keep)?;
    let kept: Vec<usize> = {
        let mut k = keep.to_vec();
        k.sort_unstable();
        k.dedup();
        k
    };
    let traced: Vec<usize> = (0..space.parties()).filter(|p| !kept.contains(p)).collect();
    let d = space.total_dim();
    let reduced_index = |i: usize| -> usize {
        kept.iter()
            .enumerate()
            .map(|(slot, &p)| space.digit(i, p) * reduced.stride(slot))
            .sum()
    };
    let traced_key = |i: usize| -> usize {
        traced
            .iter()
            .map(|&p| space.digit(i, p) * space.stride(p))
            .sum()
    };
    let keys: Vec<usize> = (0..d).map(traced_key).collect();
    let rows: Vec<usize> = (0..d).map(reduced_index).collect();
    let mut out = CMatrix::zeros(reduced.total_dim(), reduced.total_dim());
    for i in 0..d {
        for j in 0..d {
            if keys[i] == keys[j] {
                out[(rows[i], rows[j])] += rho.matrix()[(i, j)];
            }
        }
    }
    DensityOperator::new(reduced, out)
}

/// Schmidt coefficients of `ψ` across `cut`, in descending order.
///
/// These are the singular values of the amplitude vector reshaped into a
/// `d_A × d_Ā` matrix; there are `min(d_A, d_Ā)` of them.
pub fn schmidt(psi: &PureState, cut: &Bipartition) -> Result<Vec<f64>> {
    let space = psi.space();
    if cut.space() != space {
        return Err(Error::InvalidCut(format!(
            "cut {} belongs to a different space",
            cut.label()
        )));
    }
    let side = space.subspace(&cut.side())?;
    let rest = space.subspace(&cut.complement())?;
    let (a_parties, b_parties) = (cut.side(), cut.complement());
    let mut reshaped = CMatrix::zeros(side.total_dim(), rest.total_dim());
    for (i, amp) in psi.amplitudes().iter().enumerate() {
        let row: usize = a_parties
            .iter()
            .enumerate()
            .map(|(slot, &p)| space.digit(i, p) * side.stride(slot))
            .sum();
        let col: usize = b_parties
            .iter()
            .enumerate()
            .map(|(slot, &p)| space.digit(i, p) * rest.stride(slot))
            .sum();
        reshaped[(row, col)] = *amp;
    }
    let mut values: Vec<f64> = reshaped.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Support projector of `ρ`: eigenvectors with eigenvalue above
/// `rank_tol · λ_max`.
pub fn support(rho: &DensityOperator, rank_tol: f64) -> Result<SupportProjector> {
    let e = rho.eigh();
    let top = e.max_value();
    if !(top > 0.0) {
        return Err(Error::ZeroOperator);
    }
    let threshold = rank_tol * top;
    let d = rho.dim();
    let range_cols: Vec<usize> = (0..d).filter(|&j| e.values[j] > threshold).collect();
    let kernel_cols: Vec<usize> = (0..d).filter(|&j| e.values[j] <= threshold).collect();
    let pick = |cols: &[usize]| {
        let mut m = CMatrix::zeros(d, cols.len());
        for (dst, &src) in cols.iter().enumerate() {
            m.set_column(dst, &e.vectors.column(src));
        }
        m
    };
    Ok(SupportProjector::from_bases(
        pick(&range_cols),
        pick(&kernel_cols),
    ))
}

fn entropy_of(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `S(ρ) = -Σ λ log₂ λ`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of(&linalg::eigvalsh(rho.matrix()))
}

/// `S(ρ‖σ) = -S(ρ) - tr ρ log₂ σ`, or `+∞` when the support of `ρ` is not
/// contained in the support of `σ`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    relative_entropy_with_tol(rho, sigma, DEFAULT_RANK_TOL)
}

pub fn relative_entropy_with_tol(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    rank_tol: f64,
) -> Result<f64> {
    if rho.space() != sigma.space() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let e = sigma.eigh();
    let threshold = rank_tol * e.max_value();
    let rho_top = linalg::eigvalsh(rho.matrix())
        .last()
        .copied()
        .unwrap_or(0.0);
    let mut cross = 0.0;
    let mut leak = 0.0;
    for (j, &lambda) in e.values.iter().enumerate() {
        let v = e.vectors.column(j);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if lambda > threshold {
            cross += weight * lambda.log2();
        } else {
            leak += weight.max(0.0);
        }
    }
    if leak > rank_tol * rho_top.max(f64::MIN_POSITIVE) * rho.dim() as f64 {
        return Ok(f64::INFINITY);
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

/// Removes every off-diagonal entry in the computational product basis. The
/// result is diagonal in a product basis, hence separable.
pub fn dephase(rho: &DensityOperator) -> DensityOperator {
    let d = rho.dim();
    let diag = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            c(rho.matrix()[(i, i)].re, 0.0)
        } else {
            linalg::ZERO
        }
    });
    DensityOperator::new(rho.space().clone(), diag).expect("diagonal of a density operator")
}

/// `⟨b|ρ|b⟩` for every computational basis state `b`.
pub fn computational_probabilities(rho: &DensityOperator) -> Vec<f64> {
    rho.matrix().diagonal().iter().map(|z| z.re).collect()
}

/// Operator `op` acting on `party`, identity elsewhere.
pub fn local_operator(space: &MultipartiteSpace, party: usize, op: &CMatrix) -> Result<CMatrix> {
    space.check_party(party)?;
    let d_local = space.dims()[party];
    if op.nrows() != d_local || op.ncols() != d_local {
        return Err(Error::DimensionMismatch {
            expected: d_local,
            found: op.nrows(),
        });
    }
    let mut out = CMatrix::from_element(1, 1, linalg::ONE);
    for (k, &dk) in space.dims().iter().enumerate() {
        let factor = if k == party {
            op.clone()
        } else {
            linalg::identity(dk)
        };
        out = linalg::kron(&out, &factor);
    }
    Ok(out)
}
