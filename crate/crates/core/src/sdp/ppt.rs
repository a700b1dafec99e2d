use super::ipm::{self, Block, BlockMap, ConeProgram, Outcome};
use super::{CutMode, Residual, SolverConfig, SolverResult, SolverStatus};
use crate::linalg::{self, CMatrix};
use crate::ops::{self, partial_transpose_matrix};
use crate::space::{Bipartition, MultipartiteSpace};
use crate::state::DensityOperator;
use crate::{Error, Result};

/// Largest total dimension the cone programs accept.
pub const MAX_SDP_DIM: usize = 64;

pub fn cuts_for(space: &MultipartiteSpace, mode: CutMode) -> Vec<Bipartition> {
    match mode {
        CutMode::All => space.all_cuts(),
        CutMode::Single => space.first_party_cut().into_iter().collect(),
    }
}

/// Smallest eigenvalue of `m^{T_A}` over the given cuts (`+∞` with no cuts).
pub fn min_partial_transpose_eigenvalue(m: &CMatrix, cuts: &[Bipartition]) -> f64 {
    cuts.iter()
        .map(|cut| linalg::min_eigenvalue(&partial_transpose_matrix(m, cut)))
        .fold(f64::INFINITY, f64::min)
}

/// True iff `ρ^{T_A}` has no eigenvalue below `-tol` for every bipartition.
pub fn is_ppt(rho: &DensityOperator, tol: f64) -> bool {
    min_partial_transpose_eigenvalue(rho.matrix(), &rho.space().all_cuts()) >= -tol
}

fn check_size(rho: &DensityOperator) -> Result<()> {
    if rho.dim() > MAX_SDP_DIM {
        return Err(Error::InvalidParameter(format!(
            "cone programs support total dimension <= {MAX_SDP_DIM}, got {}",
            rho.dim()
        )));
    }
    Ok(())
}

fn zero_block(d: usize) -> CMatrix {
    CMatrix::zeros(d, d)
}

fn negative_part(m: &CMatrix) -> f64 {
    (-linalg::min_eigenvalue(m)).max(0.0)
}

fn cut_residuals(m: &CMatrix, cuts: &[Bipartition], out: &mut Vec<Residual>) {
    for cut in cuts {
        out.push(Residual {
            constraint: format!("pt{}", cut.label()),
            violation: negative_part(&partial_transpose_matrix(m, cut)),
        });
    }
}

fn finish(outcome: Outcome, residuals: &[Residual], tol: f64) -> SolverStatus {
    let clean = residuals.iter().all(|r| r.violation <= tol);
    match outcome {
        Outcome::Converged if clean => SolverStatus::Converged,
        Outcome::Diverged => SolverStatus::Infeasible,
        _ => SolverStatus::MaxIterReached,
    }
}

/// Constraint violations of an overlap certificate `ω`: unit trace, `ω ⪰ 0`
/// and `ω^{T_A} ⪰ 0` on each cut.
pub fn validate_overlap_certificate(omega: &CMatrix, cuts: &[Bipartition]) -> Vec<Residual> {
    let mut out = vec![
        Residual {
            constraint: "trace".into(),
            violation: (linalg::trace_re(omega) - 1.0).abs(),
        },
        Residual {
            constraint: "psd".into(),
            violation: negative_part(omega),
        },
    ];
    cut_residuals(omega, cuts, &mut out);
    out
}

/// Constraint violations of a robustness certificate `Y`: `Y ⪰ 0` and
/// `(ρ + Y)^{T_A} ⪰ 0` on each cut.
pub fn validate_robustness_certificate(
    rho: &DensityOperator,
    y: &CMatrix,
    cuts: &[Bipartition],
) -> Vec<Residual> {
    let mut out = vec![Residual {
        constraint: "psd".into(),
        violation: negative_part(y),
    }];
    cut_residuals(&(rho.matrix() + y), cuts, &mut out);
    out
}

/// Constraint violations of a discrimination certificate `M`: `0 ⪯ M ⪯ 1`,
/// `tr(ρM) = 1` and `M^{T_A} ⪰ 0` on each cut.
pub fn validate_d_certificate(
    rho: &DensityOperator,
    m: &CMatrix,
    cuts: &[Bipartition],
) -> Vec<Residual> {
    let top = linalg::eigvalsh(m).last().copied().unwrap_or(0.0);
    let mut out = vec![
        Residual {
            constraint: "psd".into(),
            violation: negative_part(m),
        },
        Residual {
            constraint: "below_identity".into(),
            violation: (top - 1.0).max(0.0),
        },
        Residual {
            constraint: "detection".into(),
            violation: (rho.expectation(m) - 1.0).abs(),
        },
    ];
    cut_residuals(m, cuts, &mut out);
    out
}

/// `Λ_ppt = max tr(ρω)` over states `ω` that are PPT on every cut.
///
/// Since PPT ⊇ SEP, `Λ_ppt` upper-bounds the separable overlap and
/// `-log₂ Λ_ppt` lower-bounds the geometric measure.
pub fn max_ppt_overlap(rho: &DensityOperator, cfg: &SolverConfig) -> Result<SolverResult> {
    cfg.validate()?;
    check_size(rho)?;
    let d = rho.dim();
    let cuts = cuts_for(rho.space(), cfg.cuts);
    let mut blocks = vec![Block {
        map: BlockMap::Variable,
        sign: 1.0,
        offset: zero_block(d),
    }];
    blocks.extend(cuts.iter().map(|cut| Block {
        map: BlockMap::Lifted {
            transpose: Some(cut.clone()),
        },
        sign: 1.0,
        offset: zero_block(d),
    }));
    let prog = ConeProgram {
        var_dim: d,
        lift: None,
        objective: -rho.matrix().clone(),
        equalities: vec![(linalg::identity(d), 1.0)],
        blocks,
    };
    let sol = ipm::solve(&prog, cfg.tol, cfg.max_iter);
    let omega = linalg::hermitian_part(&sol.variable);
    let residuals = validate_overlap_certificate(&omega, &cuts);
    Ok(SolverResult {
        value: rho.expectation(&omega),
        dual_value: -sol.dual_objective,
        status: finish(sol.outcome, &residuals, cfg.tol),
        certificate: omega,
        residuals,
        iterations: sol.iterations,
    })
}

/// `G_ppt = -log₂ Λ_ppt`, a certified lower bound on the geometric measure.
///
/// The primal value `tr(ρω)` approaches `Λ_ppt` from below, which would bias
/// `G_ppt` upwards; the larger of it and the dual bound is used instead.
pub fn geometric_measure_lower(
    rho: &DensityOperator,
    cfg: &SolverConfig,
) -> Result<(f64, SolverResult)> {
    let res = max_ppt_overlap(rho, cfg)?;
    let lam = if res.dual_value.is_finite() {
        res.value.max(res.dual_value)
    } else {
        res.value
    };
    let g = if lam > 0.0 {
        (-lam.log2()).max(0.0)
    } else {
        f64::INFINITY
    };
    Ok((g, res))
}

/// Smallest `t = tr Y` with `Y ⪰ 0` and `(ρ + Y)^{T_A} ⪰ 0` on every cut.
///
/// With `Δ = Y/t`, `(ρ + tΔ)/(1 + t)` is PPT, so `t` is the PPT global
/// robustness; it lower-bounds the separable global robustness.
pub fn global_robustness_ppt(rho: &DensityOperator, cfg: &SolverConfig) -> Result<SolverResult> {
    cfg.validate()?;
    check_size(rho)?;
    let d = rho.dim();
    let cuts = cuts_for(rho.space(), cfg.cuts);
    let mut blocks = vec![Block {
        map: BlockMap::Variable,
        sign: 1.0,
        offset: zero_block(d),
    }];
    blocks.extend(cuts.iter().map(|cut| Block {
        map: BlockMap::Lifted {
            transpose: Some(cut.clone()),
        },
        sign: 1.0,
        offset: partial_transpose_matrix(rho.matrix(), cut),
    }));
    let prog = ConeProgram {
        var_dim: d,
        lift: None,
        objective: linalg::identity(d),
        equalities: vec![],
        blocks,
    };
    let sol = ipm::solve(&prog, cfg.tol, cfg.max_iter);
    let y = linalg::hermitian_part(&sol.variable);
    let residuals = validate_robustness_certificate(rho, &y, &cuts);
    Ok(SolverResult {
        value: linalg::trace_re(&y),
        dual_value: sol.dual_objective,
        status: finish(sol.outcome, &residuals, cfg.tol),
        certificate: y,
        residuals,
        iterations: sol.iterations,
    })
}

/// PPT relaxation of the discrimination quantity: the smallest `tr M` over
/// `0 ⪯ M ⪯ 1` with `tr(ρM) = 1` and `M^{T_A} ⪰ 0` on every cut.
///
/// Any feasible `M` satisfies `(1 - M)P = 0` for the support projector `P` of
/// `ρ`, so `M = P + V W V†` with `V` spanning the kernel of `ρ` and
/// `0 ⪯ W ⪯ 1`. The program is solved in that form, which has a strictly
/// feasible point. `d_ppt ≤ d` because PPT ⊇ SEP.
pub fn d_ppt(rho: &DensityOperator, cfg: &SolverConfig) -> Result<SolverResult> {
    cfg.validate()?;
    check_size(rho)?;
    let cuts = cuts_for(rho.space(), cfg.cuts);
    let supp = ops::support(rho, cfg.rank_tol)?;
    let p = supp.projector().clone();
    let kernel = supp.kernel_basis().clone();
    let k = kernel.ncols();
    if k == 0 {
        let m = linalg::identity(rho.dim());
        let residuals = validate_d_certificate(rho, &m, &cuts);
        return Ok(SolverResult {
            value: rho.dim() as f64,
            dual_value: rho.dim() as f64,
            status: finish(Outcome::Converged, &residuals, cfg.tol),
            certificate: m,
            residuals,
            iterations: 0,
        });
    }
    let mut blocks = vec![
        Block {
            map: BlockMap::Variable,
            sign: 1.0,
            offset: zero_block(k),
        },
        Block {
            map: BlockMap::Variable,
            sign: -1.0,
            offset: linalg::identity(k),
        },
    ];
    blocks.extend(cuts.iter().map(|cut| Block {
        map: BlockMap::Lifted {
            transpose: Some(cut.clone()),
        },
        sign: 1.0,
        offset: partial_transpose_matrix(&p, cut),
    }));
    let prog = ConeProgram {
        var_dim: k,
        lift: Some(kernel.clone()),
        objective: linalg::identity(k),
        equalities: vec![],
        blocks,
    };
    let sol = ipm::solve(&prog, cfg.tol, cfg.max_iter);
    let w = linalg::hermitian_part(&sol.variable);
    let m = linalg::hermitian_part(&(&p + &kernel * &w * kernel.adjoint()));
    let residuals = validate_d_certificate(rho, &m, &cuts);
    Ok(SolverResult {
        value: linalg::trace_re(&m),
        dual_value: supp.size() + sol.dual_objective,
        status: finish(sol.outcome, &residuals, cfg.tol),
        certificate: m,
        residuals,
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn is_ppt_examples() {
        let s = MultipartiteSpace::qubits(2).unwrap();
        assert!(is_ppt(&DensityOperator::maximally_mixed(s), 1e-10));
        assert!(!is_ppt(&families::bell().density(), 1e-10));
        let deph = ops::dephase(&families::ghz(3).unwrap().density());
        assert!(is_ppt(&deph, 1e-12));
    }

    #[test]
    fn overlap_values() {
        let s = MultipartiteSpace::new(&[2, 3]).unwrap();
        let prod = families::basis_state(&s, &[0, 2]).unwrap().density();
        let r = max_ppt_overlap(&prod, &cfg()).unwrap();
        assert!(r.converged());
        assert!((r.value - 1.0).abs() < 1e-5);

        let r = max_ppt_overlap(&families::bell().density(), &cfg()).unwrap();
        assert!(r.converged(), "{:?}", r.status);
        assert!((r.value - 0.5).abs() < 1e-5, "{}", r.value);
        assert!(r.max_residual() <= cfg().tol);

        let r = max_ppt_overlap(&families::ghz(3).unwrap().density(), &cfg()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-5, "{}", r.value);
    }

    #[test]
    fn robustness_values() {
        let deph = ops::dephase(&families::ghz(3).unwrap().density());
        let r = global_robustness_ppt(&deph, &cfg()).unwrap();
        assert!(r.converged());
        assert!(r.value.abs() < 1e-5, "{}", r.value);

        let r = global_robustness_ppt(&families::bell().density(), &cfg()).unwrap();
        assert!(r.converged());
        assert!((r.value - 1.0).abs() < 1e-5, "{}", r.value);

        let r = global_robustness_ppt(&families::ghz(3).unwrap().density(), &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5, "{}", r.value);
    }

    #[test]
    fn d_values() {
        let s = MultipartiteSpace::qubits(2).unwrap();
        let mixed = DensityOperator::maximally_mixed(s);
        let r = d_ppt(&mixed, &cfg()).unwrap();
        assert_eq!(r.value, 4.0);
        assert!(r.converged());

        let r = d_ppt(&families::bell().density(), &cfg()).unwrap();
        assert!(r.converged(), "{:?} {:?}", r.status, r.residuals);
        assert!((r.value - 2.0).abs() < 1e-5, "{}", r.value);

        let r = d_ppt(&families::ghz(3).unwrap().density(), &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-5, "{}", r.value);
    }

    #[test]
    fn single_cut_mode_uses_one_cut() {
        let s = MultipartiteSpace::qubits(3).unwrap();
        assert_eq!(cuts_for(&s, CutMode::Single).len(), 1);
        assert_eq!(cuts_for(&s, CutMode::All).len(), 3);
        let cfg = SolverConfig {
            cuts: CutMode::Single,
            ..cfg()
        };
        let r = max_ppt_overlap(&families::ghz(3).unwrap().density(), &cfg).unwrap();
        assert!(r.value >= 0.5 - 1e-5);
    }

    #[test]
    fn rejects_oversized_input() {
        let s = MultipartiteSpace::qubits(7).unwrap();
        let rho = DensityOperator::maximally_mixed(s);
        assert!(max_ppt_overlap(&rho, &cfg()).is_err());
    }
}
