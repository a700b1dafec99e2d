//! PPT relaxations of the separable-cone programs.
//!
//! Separability constraints are replaced by positivity of the partial
//! transpose across every bipartition. The PPT set contains the separable
//! set, which fixes the direction of every bound computed here:
//!
//! | quantity | relaxed value | relation to the separable value |
//! |---|---|---|
//! | overlap `Λ_ppt = max tr(ρω)` | [`max_ppt_overlap`] | `Λ_ppt ≥ Λ_sep`, so `G_ppt ≤ G` |
//! | global robustness `t*` | [`global_robustness_ppt`] | `t* ≤ R_g` |
//! | discrimination quantity | [`d_ppt`] | `d_ppt ≤ d` |
//!
//! All three are solved by the interior-point method in [`ipm`]; returned
//! certificates are re-checked against the original constraints by code that
//! does not share the solver's internal representation.

mod ipm;
mod ppt;

pub use ppt::{
    cuts_for, d_ppt, geometric_measure_lower, global_robustness_ppt, is_ppt, max_ppt_overlap,
    min_partial_transpose_eigenvalue, validate_d_certificate, validate_overlap_certificate,
    validate_robustness_certificate, MAX_SDP_DIM,
};

use crate::CMatrix;

/// Which bipartitions carry a partial-transpose constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutMode {
    /// Every cut, `2^{m-1} - 1` of them.
    #[default]
    All,
    /// Only party 0 against the rest.
    Single,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Target for relative duality gap, primal and dual infeasibility, and for
    /// every residual of the returned certificate.
    pub tol: f64,
    pub max_iter: usize,
    pub cuts: CutMode,
    /// Relative eigenvalue threshold for support decisions.
    pub rank_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 50_000,
            cuts: CutMode::All,
            rank_tol: crate::DEFAULT_RANK_TOL,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.tol > 0.0) {
            return Err(crate::Error::InvalidParameter("tol must be > 0".into()));
        }
        if self.max_iter == 0 {
            return Err(crate::Error::InvalidParameter(
                "max_iter must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Converged,
    MaxIterReached,
    Infeasible,
}

impl SolverStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverStatus::Converged => "converged",
            SolverStatus::MaxIterReached => "maxIterReached",
            SolverStatus::Infeasible => "infeasible",
        }
    }
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Violation of one constraint by a certificate (zero when satisfied).
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub constraint: String,
    pub violation: f64,
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    /// Objective value at the certificate.
    pub value: f64,
    /// The value bound obtained from the dual iterate, in the same units as
    /// `value` (an upper bound for maximisations, a lower bound for
    /// minimisations, up to the dual residual).
    pub dual_value: f64,
    /// The optimal variable: `ω` for the overlap, `Y` for the robustness, `M`
    /// for the discrimination quantity.
    pub certificate: CMatrix,
    pub status: SolverStatus,
    pub residuals: Vec<Residual>,
    pub iterations: usize,
}

impl SolverResult {
    pub fn converged(&self) -> bool {
        self.status == SolverStatus::Converged
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.violation)
            .fold(0.0, f64::max)
    }
}
