//! Primal-dual interior-point method for Hermitian cone programs.
//!
//! The decision variable is a `k × k` Hermitian matrix `W`, parameterised by
//! its real coordinates `y ∈ R^{k²}` in an orthonormal basis. Programs have the
//! form
//!
//! ```text
//! minimise    Re tr(C W)
//! subject to  Re tr(A_e W) = b_e             for each equality e
//!             S_j = s_j · T_j(L_j(W)) + K_j ⪰ 0  for each block j
//! ```
//!
//! where `L_j` is either the identity on `W` or the lift `W ↦ V W V†`, `T_j` is
//! the identity or a partial transpose, and `s_j = ±1`. The solver follows the
//! HKM search direction with a Mehrotra predictor-corrector step from an
//! infeasible start. Every operation runs in a fixed order on a single thread,
//! so identical inputs give bit-identical iterates.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::linalg::{self, c, CMatrix};
use crate::ops::partial_transpose_matrix;
use crate::space::Bipartition;

const STEP_FRACTION: f64 = 0.95;
const DIVERGENCE_LIMIT: f64 = 1e12;
const STALL_STEP: f64 = 1e-10;
const STALL_LIMIT: usize = 8;

#[derive(Debug, Clone)]
pub(crate) enum BlockMap {
    /// The variable `W` itself.
    Variable,
    /// `T(L(W))`, with `L` the program's lift (identity when it has none).
    Lifted { transpose: Option<Bipartition> },
}

#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub map: BlockMap,
    pub sign: f64,
    pub offset: CMatrix,
}

#[derive(Debug, Clone)]
pub(crate) struct ConeProgram {
    pub var_dim: usize,
    /// `V`, a `D × k` matrix with orthonormal columns.
    pub lift: Option<CMatrix>,
    pub objective: CMatrix,
    pub equalities: Vec<(CMatrix, f64)>,
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Converged,
    MaxIter,
    Stalled,
    Diverged,
}

#[derive(Debug, Clone)]
pub(crate) struct IpmSolution {
    pub variable: CMatrix,
    #[cfg_attr(not(test), allow(dead_code))]
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub outcome: Outcome,
    pub iterations: usize,
}

/// Maps real coordinates to a Hermitian matrix. Coordinates are the `k`
/// diagonal entries followed by `√2 Re w_ab, √2 Im w_ab` for `a < b` in
/// row-major order.
pub(crate) fn hvec_to_herm(y: &[f64], k: usize) -> CMatrix {
    let mut w = CMatrix::zeros(k, k);
    for a in 0..k {
        w[(a, a)] = c(y[a], 0.0);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut idx = k;
    for a in 0..k {
        for b in (a + 1)..k {
            let (re, im) = (y[idx], y[idx + 1]);
            w[(a, b)] = c(re * s, im * s);
            w[(b, a)] = c(re * s, -im * s);
            idx += 2;
        }
    }
    w
}

/// `Re tr(B_i G)` for every basis element `B_i`; the adjoint of
/// [`hvec_to_herm`] under the real trace pairing.
pub(crate) fn herm_adjoint(g: &CMatrix) -> DVector<f64> {
    let k = g.nrows();
    let mut out = DVector::zeros(k * k);
    for a in 0..k {
        out[a] = g[(a, a)].re;
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut idx = k;
    for a in 0..k {
        for b in (a + 1)..k {
            out[idx] = (g[(b, a)].re + g[(a, b)].re) * s;
            out[idx + 1] = (g[(a, b)].im - g[(b, a)].im) * s;
            idx += 2;
        }
    }
    out
}

impl ConeProgram {
    fn n(&self) -> usize {
        self.var_dim * self.var_dim
    }

    fn lift_apply(&self, w: &CMatrix) -> CMatrix {
        match &self.lift {
            Some(v) => v * w * v.adjoint(),
            None => w.clone(),
        }
    }

    fn lift_adjoint(&self, g: &CMatrix) -> CMatrix {
        match &self.lift {
            Some(v) => v.adjoint() * g * v,
            None => g.clone(),
        }
    }

    /// Linear part of block `j` evaluated at `w`.
    pub fn apply_block(&self, j: usize, w: &CMatrix) -> CMatrix {
        let block = &self.blocks[j];
        let x = match &block.map {
            BlockMap::Variable => w.clone(),
            BlockMap::Lifted { transpose } => {
                let lifted = self.lift_apply(w);
                match transpose {
                    Some(cut) => partial_transpose_matrix(&lifted, cut),
                    None => lifted,
                }
            }
        };
        x * c(block.sign, 0.0)
    }

    fn adjoint_block(&self, j: usize, g: &CMatrix) -> DVector<f64> {
        let block = &self.blocks[j];
        let h = match &block.map {
            BlockMap::Variable => g.clone(),
            BlockMap::Lifted { transpose } => {
                let t = match transpose {
                    Some(cut) => partial_transpose_matrix(g, cut),
                    None => g.clone(),
                };
                self.lift_adjoint(&t)
            }
        };
        herm_adjoint(&h) * block.sign
    }

    /// Full block value `S_j(W)` including the offset.
    pub fn block_value(&self, j: usize, w: &CMatrix) -> CMatrix {
        self.apply_block(j, w) + &self.blocks[j].offset
    }
}

struct Direction {
    dy: DVector<f64>,
    dnu: DVector<f64>,
    ds: Vec<CMatrix>,
    dz: Vec<CMatrix>,
}

struct Newton<'a> {
    prog: &'a ConeProgram,
    chol: Cholesky<f64, nalgebra::Dyn>,
    eq: DMatrix<f64>,
    /// Cholesky of `A M⁻¹ Aᵀ` when there are equalities.
    schur: Option<Cholesky<f64, nalgebra::Dyn>>,
}

impl Newton<'_> {
    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        rc: &[CMatrix],
        z: &[CMatrix],
        s_inv: &[CMatrix],
        r_blocks: &[CMatrix],
        r_dual: &DVector<f64>,
        r_eq: &DVector<f64>,
    ) -> Direction {
        let prog = self.prog;
        let mut h = -r_dual.clone();
        for j in 0..prog.blocks.len() {
            let g = (&rc[j] - &z[j] * &r_blocks[j]) * &s_inv[j];
            h += prog.adjoint_block(j, &g);
        }
        let (dy, dnu) = if let Some(schur) = &self.schur {
            let minv_h = self.chol.solve(&h);
            let rhs = r_eq - &self.eq * &minv_h;
            let dnu = schur.solve(&rhs);
            let dy = self.chol.solve(&(&h + self.eq.transpose() * &dnu));
            (dy, dnu)
        } else {
            (self.chol.solve(&h), DVector::zeros(0))
        };
        let w = hvec_to_herm(dy.as_slice(), prog.var_dim);
        let mut ds = Vec::with_capacity(prog.blocks.len());
        let mut dz = Vec::with_capacity(prog.blocks.len());
        for j in 0..prog.blocks.len() {
            let dsj = prog.apply_block(j, &w) + &r_blocks[j];
            let dzj = (&rc[j] - &z[j] * &dsj) * &s_inv[j];
            ds.push(dsj);
            dz.push(linalg::hermitian_part(&dzj));
        }
        Direction { dy, dnu, ds, dz }
    }
}

fn frob(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest `α` with `x + α dx ⪰ 0`, for `x ≻ 0`.
fn max_step(x: &CMatrix, dx: &CMatrix) -> f64 {
    let lmin = match Cholesky::new(x.clone()) {
        Some(ch) => {
            let l = ch.l();
            let t1 = l.solve_lower_triangular(dx).expect("nonsingular factor");
            let t2 = l
                .solve_lower_triangular(&t1.adjoint())
                .expect("nonsingular factor");
            linalg::min_eigenvalue(&t2)
        }
        None => return 0.0,
    };
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn factor_spd(m: &DMatrix<f64>) -> Cholesky<f64, nalgebra::Dyn> {
    let sym = (m + m.transpose()) * 0.5;
    if let Some(ch) = Cholesky::new(sym.clone()) {
        return ch;
    }
    let scale = sym
        .diagonal()
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(1e-300);
    let mut delta = 1e-14 * scale;
    loop {
        let mut reg = sym.clone();
        for i in 0..reg.nrows() {
            reg[(i, i)] += delta;
        }
        if let Some(ch) = Cholesky::new(reg) {
            return ch;
        }
        delta *= 10.0;
    }
}

fn inner_re(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::trace_product_re(a, b)
}

pub(crate) fn solve(prog: &ConeProgram, tol: f64, max_iter: usize) -> IpmSolution {
    let n = prog.n();
    let nb = prog.blocks.len();
    let cvec = herm_adjoint(&prog.objective);
    let p = prog.equalities.len();
    let mut eq = DMatrix::zeros(p, n);
    let mut b = DVector::zeros(p);
    for (e, (a, rhs)) in prog.equalities.iter().enumerate() {
        eq.set_row(e, &herm_adjoint(a).transpose());
        b[e] = *rhs;
    }
    let dims: Vec<usize> = prog.blocks.iter().map(|bl| bl.offset.nrows()).collect();
    let total_dim: usize = dims.iter().sum();

    let mut y = DVector::<f64>::zeros(n);
    let mut nu = DVector::<f64>::zeros(p);
    let mut s: Vec<CMatrix> = dims.iter().map(|&d| linalg::identity(d)).collect();
    let mut z: Vec<CMatrix> = dims.iter().map(|&d| linalg::identity(d)).collect();

    let norm_b = b.norm();
    let norm_k = prog
        .blocks
        .iter()
        .map(|bl| frob(&bl.offset))
        .fold(0.0, f64::max);
    let norm_c = cvec.norm();

    let mut outcome = Outcome::MaxIter;
    let mut iterations = 0;
    let mut stalls = 0;
    let mut pobj = 0.0;
    let mut dobj = 0.0;

    while iterations < max_iter {
        let w = hvec_to_herm(y.as_slice(), prog.var_dim);
        let r_blocks: Vec<CMatrix> = (0..nb).map(|j| prog.block_value(j, &w) - &s[j]).collect();
        let r_eq = &b - &eq * &y;
        let mut r_dual = cvec.clone() - eq.transpose() * &nu;
        for j in 0..nb {
            r_dual -= prog.adjoint_block(j, &z[j]);
        }
        pobj = cvec.dot(&y);
        dobj = b.dot(&nu)
            - (0..nb)
                .map(|j| inner_re(&z[j], &prog.blocks[j].offset))
                .sum::<f64>();
        let complementarity: f64 = (0..nb).map(|j| inner_re(&z[j], &s[j])).sum();
        let mu = complementarity / total_dim as f64;

        let primal_inf = (r_eq.norm()
            + r_blocks.iter().map(|r| frob(r).powi(2)).sum::<f64>().sqrt())
            / (1.0 + norm_b + norm_k);
        let dual_inf = r_dual.norm() / (1.0 + norm_c);
        let scale = 1.0 + pobj.abs() + dobj.abs();
        let gap = (pobj - dobj).abs().max(complementarity.abs()) / scale;
        if primal_inf <= tol && dual_inf <= tol && gap <= tol {
            outcome = Outcome::Converged;
            break;
        }
        if y.norm() > DIVERGENCE_LIMIT || z.iter().any(|zj| frob(zj) > DIVERGENCE_LIMIT) {
            outcome = Outcome::Diverged;
            break;
        }
        iterations += 1;

        let s_inv: Vec<CMatrix> = s
            .iter()
            .map(|sj| match Cholesky::new(sj.clone()) {
                Some(ch) => linalg::hermitian_part(&ch.inverse()),
                None => sj
                    .clone()
                    .try_inverse()
                    .unwrap_or_else(|| linalg::identity(sj.nrows())),
            })
            .collect();

        // Schur complement M[l, i] = Σ_j Re tr(F_{j,l} Z_j F_{j,i} S_j⁻¹)
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut unit = vec![0.0; n];
        for i in 0..n {
            unit[i] = 1.0;
            let basis = hvec_to_herm(&unit, prog.var_dim);
            unit[i] = 0.0;
            let mut col = DVector::zeros(n);
            for j in 0..nb {
                let f = prog.apply_block(j, &basis);
                let g = &z[j] * f * &s_inv[j];
                col += prog.adjoint_block(j, &g);
            }
            m.set_column(i, &col);
        }
        let chol = factor_spd(&m);
        let schur = if p > 0 {
            let minv_at = chol.solve(&eq.transpose());
            Some(factor_spd(&(&eq * minv_at)))
        } else {
            None
        };
        let newton = Newton {
            prog,
            chol,
            eq: eq.clone(),
            schur,
        };

        // predictor
        let zs: Vec<CMatrix> = (0..nb).map(|j| &z[j] * &s[j]).collect();
        let rc_aff: Vec<CMatrix> = zs.iter().map(|x| -x).collect();
        let aff = newton.direction(&rc_aff, &z, &s_inv, &r_blocks, &r_dual, &r_eq);
        let (ap_aff, ad_aff) = step_lengths(&s, &z, &aff, 1.0);
        let mu_aff: f64 = (0..nb)
            .map(|j| {
                let sj = &s[j] + &aff.ds[j] * c(ap_aff, 0.0);
                let zj = &z[j] + &aff.dz[j] * c(ad_aff, 0.0);
                inner_re(&zj, &sj)
            })
            .sum::<f64>()
            / total_dim as f64;
        let sigma = if mu > 0.0 {
            (mu_aff / mu).clamp(0.0, 1.0).powi(3)
        } else {
            0.0
        };

        // corrector
        let rc: Vec<CMatrix> = (0..nb)
            .map(|j| {
                let d = dims[j];
                linalg::identity(d) * c(sigma * mu, 0.0) - &zs[j] - &aff.dz[j] * &aff.ds[j]
            })
            .collect();
        let dir = newton.direction(&rc, &z, &s_inv, &r_blocks, &r_dual, &r_eq);
        let (ap, ad) = step_lengths(&s, &z, &dir, STEP_FRACTION);

        y += &dir.dy * ap;
        for j in 0..nb {
            s[j] += &dir.ds[j] * c(ap, 0.0);
            s[j] = linalg::hermitian_part(&s[j]);
            z[j] += &dir.dz[j] * c(ad, 0.0);
            z[j] = linalg::hermitian_part(&z[j]);
        }
        if p > 0 {
            nu += &dir.dnu * ad;
        }
        if ap < STALL_STEP && ad < STALL_STEP {
            stalls += 1;
            if stalls >= STALL_LIMIT {
                outcome = Outcome::Stalled;
                break;
            }
        } else {
            stalls = 0;
        }
    }

    IpmSolution {
        variable: hvec_to_herm(y.as_slice(), prog.var_dim),
        primal_objective: pobj,
        dual_objective: dobj,
        outcome,
        iterations,
    }
}

fn step_lengths(s: &[CMatrix], z: &[CMatrix], dir: &Direction, fraction: f64) -> (f64, f64) {
    let mut ap = f64::INFINITY;
    let mut ad = f64::INFINITY;
    for j in 0..s.len() {
        ap = ap.min(max_step(&s[j], &dir.ds[j]));
        ad = ad.min(max_step(&z[j], &dir.dz[j]));
    }
    ((fraction * ap).min(1.0), (fraction * ad).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hvec_roundtrip_and_adjointness() {
        let k = 3;
        let y: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37).sin()).collect();
        let w = hvec_to_herm(&y, k);
        assert!(linalg::hermiticity_error(&w) == 0.0);
        let back = herm_adjoint(&w);
        for i in 0..9 {
            assert!((back[i] - y[i]).abs() < 1e-14);
        }
        // <hvec_to_herm(y), G> = y · herm_adjoint(G) for non-Hermitian G
        let g = CMatrix::from_fn(k, k, |i, j| {
            c(i as f64 - 0.3 * j as f64, (i * j) as f64 + 0.1)
        });
        let lhs = linalg::trace_product_re(&w, &g);
        let rhs: f64 = herm_adjoint(&g).iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn solves_max_eigenvalue_program() {
        // maximise tr(ρW) over W ⪰ 0, tr W = 1  →  λ_max(ρ)
        let rho = linalg::real_diag(&[0.1, 0.6, 0.3]);
        let prog = ConeProgram {
            var_dim: 3,
            lift: None,
            objective: -rho.clone(),
            equalities: vec![(linalg::identity(3), 1.0)],
            blocks: vec![Block {
                map: BlockMap::Variable,
                sign: 1.0,
                offset: CMatrix::zeros(3, 3),
            }],
        };
        let sol = solve(&prog, 1e-9, 200);
        assert_eq!(sol.outcome, Outcome::Converged);
        assert!((sol.primal_objective + 0.6).abs() < 1e-7);
        assert!((sol.dual_objective + 0.6).abs() < 1e-7);
    }

    #[test]
    fn solves_box_program() {
        // minimise tr W over 0 ⪯ W ⪯ I, W ⪰ E  (E = diag(0.25, 0, 0.5))  →  0.75
        let e = linalg::real_diag(&[0.25, 0.0, 0.5]);
        let prog = ConeProgram {
            var_dim: 3,
            lift: None,
            objective: linalg::identity(3),
            equalities: vec![],
            blocks: vec![
                Block {
                    map: BlockMap::Variable,
                    sign: 1.0,
                    offset: CMatrix::zeros(3, 3),
                },
                Block {
                    map: BlockMap::Variable,
                    sign: -1.0,
                    offset: linalg::identity(3),
                },
                Block {
                    map: BlockMap::Lifted { transpose: None },
                    sign: 1.0,
                    offset: -e,
                },
            ],
        };
        let sol = solve(&prog, 1e-9, 200);
        assert_eq!(sol.outcome, Outcome::Converged);
        assert!((sol.primal_objective - 0.75).abs() < 1e-7);
    }
}
