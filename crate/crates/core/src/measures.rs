//! Per-state measure records and the hierarchy check
//! `d ≥ r ≥ 2^{E_R + S} ≥ 2^G`, evaluated with PPT relaxations.
//!
//! The relaxed chain holds for the same reasons as the separable one: the
//! arguments only use convexity of the feasible set and monotonicity and
//! concavity of the logarithm. So for every state
//! `d_ppt ≥ r_ppt ≥ 2^{G_ppt}`, with `r_ppt = |P|(1 + R_ppt(P/|P|))`.
//!
//! The relative entropy of entanglement is never optimised directly. It is
//! sandwiched between `max(G_ppt - S, 0)`, which is certified because
//! `E_R + S ≥ G ≥ G_ppt`, and the relative entropy to an explicit separable
//! state.

use crate::ops;
use crate::product_opt::{self, ProductOptConfig};
use crate::sdp::{self, SolverConfig, SolverStatus};
use crate::state::{DensityOperator, PureState};
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasureConfig {
    pub product: ProductOptConfig,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ghz,
    W,
}

/// Exact values of the relative entropy of entanglement and geometric measure
/// for a named family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticValues {
    pub family: Family,
    pub parties: usize,
    pub relative_entropy: f64,
    pub geometric: f64,
}

/// GHZ: both measures equal 1. W on `m` parties: both equal
/// `(m-1) log₂(m/(m-1))`.
pub fn analytic_family_values(family: Family, m: usize) -> Result<AnalyticValues> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "family values need m >= 2, got {m}"
        )));
    }
    let v = match family {
        Family::Ghz => 1.0,
        Family::W => {
            let mf = m as f64;
            (mf - 1.0) * (mf / (mf - 1.0)).log2()
        }
    };
    Ok(AnalyticValues {
        family,
        parties: m,
        relative_entropy: v,
        geometric: v,
    })
}

/// `(Σ α_i)² - 1` from the Schmidt coefficients of a two-party pure state.
pub fn analytic_bipartite_robustness(psi: &PureState) -> Result<f64> {
    let space = psi.space();
    if space.parties() != 2 {
        return Err(Error::InvalidParameter(format!(
            "bipartite robustness needs exactly 2 parties, got {}",
            space.parties()
        )));
    }
    let cut = crate::space::Bipartition::new(space, &[0])?;
    let alphas = ops::schmidt(psi, &cut)?;
    let sum: f64 = alphas.iter().sum();
    Ok(sum * sum - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRecord {
    pub entropy: f64,
    /// `|P|`, the rank of `ρ`.
    pub support_size: f64,
    /// `G_ppt = -log₂ Λ_ppt`.
    pub g_lower: f64,
    /// `-log₂ Λ_found` from the product search.
    pub g_upper: f64,
    pub e_r_lower: f64,
    pub e_r_upper: f64,
    /// PPT global robustness of `P/|P|`.
    pub robustness_ppt: f64,
    pub r_ppt: f64,
    pub d_ppt: f64,
    pub overlap_status: SolverStatus,
    pub robustness_status: SolverStatus,
    pub d_status: SolverStatus,
    pub product_converged: bool,
    pub analytic: Option<AnalyticValues>,
}

impl MeasureRecord {
    /// All three cone programs converged.
    pub fn converged(&self) -> bool {
        [self.overlap_status, self.robustness_status, self.d_status]
            .iter()
            .all(|s| *s == SolverStatus::Converged)
    }

    pub fn with_analytic(mut self, values: AnalyticValues) -> Self {
        self.analytic = Some(values);
        self
    }
}

/// Computes every field of the record. `candidate` is the separable state
/// used for the upper end of the relative-entropy sandwich; the dephased state
/// is used when none is given.
pub fn measure_state(
    rho: &DensityOperator,
    cfg: &MeasureConfig,
    candidate: Option<&DensityOperator>,
) -> Result<MeasureRecord> {
    let entropy = ops::von_neumann_entropy(rho);
    let support = ops::support(rho, cfg.solver.rank_tol)?;

    let (g_lower, overlap) = sdp::geometric_measure_lower(rho, &cfg.solver)?;
    let product = product_opt::max_product_overlap(rho, &cfg.product)?;
    if product.best_overlap <= 0.0 {
        return Err(Error::ZeroOverlap);
    }
    let g_upper = (-product.best_overlap.log2()).max(0.0);

    let dephased;
    let sigma = match candidate {
        Some(s) => s,
        None => {
            dephased = ops::dephase(rho);
            &dephased
        }
    };
    let e_r_upper = ops::relative_entropy_with_tol(rho, sigma, cfg.solver.rank_tol)?;
    let e_r_lower = (g_lower - entropy).max(0.0);

    let support_state = if support.rank() == 1 {
        // P/|P| is the pure state itself; reuse ρ to avoid re-normalisation noise
        rho.clone()
    } else {
        support.normalized_state(rho.space())?
    };
    let robustness = sdp::global_robustness_ppt(&support_state, &cfg.solver)?;
    let r_ppt = support.size() * (1.0 + robustness.value);
    let d = sdp::d_ppt(rho, &cfg.solver)?;

    Ok(MeasureRecord {
        entropy,
        support_size: support.size(),
        g_lower,
        g_upper,
        e_r_lower,
        e_r_upper,
        robustness_ppt: robustness.value,
        r_ppt,
        d_ppt: d.value,
        overlap_status: overlap.status,
        robustness_status: robustness.status,
        d_status: d.status,
        product_converged: product.all_converged(),
        analytic: None,
    })
}

/// One link of the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainLink {
    /// `d_ppt ≥ r_ppt`
    DAboveR,
    /// `r_ppt ≥ 2^{G_ppt}`
    RAboveG,
    /// `G_ppt ≤ G_upper`
    GSandwich,
    /// `E_R` lower end `≤` upper end
    ERSandwich,
}

impl ChainLink {
    pub fn as_str(self) -> &'static str {
        match self {
            ChainLink::DAboveR => "d >= r",
            ChainLink::RAboveG => "r >= 2^G",
            ChainLink::GSandwich => "gLower <= gUpper",
            ChainLink::ERSandwich => "eRLower <= eRUpper",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainCheck {
    pub violations: Vec<ChainLink>,
}

impl ChainCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d_ppt ≥ r_ppt - slack`, `r_ppt ≥ 2^{G_ppt} - slack`,
/// `G_ppt ≤ G_upper + slack` and, when the upper end is finite, the
/// relative-entropy sandwich.
pub fn verify_chain(record: &MeasureRecord, slack: f64) -> ChainCheck {
    let mut violations = Vec::new();
    if record.d_ppt < record.r_ppt - slack {
        violations.push(ChainLink::DAboveR);
    }
    if record.r_ppt < record.g_lower.exp2() - slack {
        violations.push(ChainLink::RAboveG);
    }
    if record.g_lower > record.g_upper + slack {
        violations.push(ChainLink::GSandwich);
    }
    if record.e_r_upper.is_finite() && record.e_r_lower > record.e_r_upper + slack {
        violations.push(ChainLink::ERSandwich);
    }
    ChainCheck { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::space::MultipartiteSpace;

    #[test]
    fn family_values() {
        for m in 2..7 {
            let v = analytic_family_values(Family::Ghz, m).unwrap();
            assert_eq!(v.geometric, 1.0);
        }
        let w3 = analytic_family_values(Family::W, 3).unwrap();
        assert!((w3.geometric - (9.0f64 / 4.0).log2()).abs() < 1e-14);
        let w4 = analytic_family_values(Family::W, 4).unwrap();
        assert!((w4.relative_entropy - (64.0f64 / 27.0).log2()).abs() < 1e-14);
        assert!(analytic_family_values(Family::W, 1).is_err());
    }

    #[test]
    fn bipartite_robustness_formula() {
        let s = MultipartiteSpace::qubits(2).unwrap();
        let prod = families::basis_state(&s, &[0, 1]).unwrap();
        assert!(analytic_bipartite_robustness(&prod).unwrap().abs() < 1e-12);
        assert!((analytic_bipartite_robustness(&families::bell()).unwrap() - 1.0).abs() < 1e-12);
        for d in 2..6 {
            let r = analytic_bipartite_robustness(&families::max_entangled(d).unwrap()).unwrap();
            assert!((r - (d as f64 - 1.0)).abs() < 1e-12);
        }
        assert!(analytic_bipartite_robustness(&families::ghz(3).unwrap()).is_err());
    }

    #[test]
    fn ghz3_record() {
        let rho = families::ghz(3).unwrap().density();
        let rec = measure_state(&rho, &MeasureConfig::default(), None).unwrap();
        assert!(rec.converged());
        assert!(rec.entropy.abs() < 1e-10);
        assert_eq!(rec.support_size, 1.0);
        assert!((rec.g_lower - 1.0).abs() < 1e-5);
        assert!((rec.g_upper - 1.0).abs() < 1e-9);
        assert!((rec.e_r_lower - 1.0).abs() < 1e-5);
        assert!((rec.e_r_upper - 1.0).abs() < 1e-9);
        assert!((rec.r_ppt - 2.0).abs() < 1e-4);
        assert!((rec.d_ppt - 2.0).abs() < 1e-4);
        assert!(verify_chain(&rec, 1e-4).passed());
    }

    #[test]
    fn w3_record_brackets() {
        let rho = families::w(3).unwrap().density();
        let rec = measure_state(&rho, &MeasureConfig::default(), None).unwrap();
        let exact = (9.0f64 / 4.0).log2();
        assert!((rec.g_upper - exact).abs() < 1e-6);
        assert!((rec.e_r_lower - exact).abs() < 1e-4);
        assert!((rec.e_r_upper - 3f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn maximally_mixed_record() {
        let s = MultipartiteSpace::qubits(2).unwrap();
        let rho = DensityOperator::maximally_mixed(s);
        let rec = measure_state(&rho, &MeasureConfig::default(), None).unwrap();
        assert_eq!(rec.d_ppt, 4.0);
        assert!((rec.entropy - 2.0).abs() < 1e-12);
        assert!((rec.r_ppt - 4.0).abs() < 1e-5);
        assert!(rec.robustness_ppt.abs() < 1e-5);
        assert!(verify_chain(&rec, 1e-4).passed());
    }

    #[test]
    fn decremented_d_is_flagged() {
        let rho = families::ghz(3).unwrap().density();
        let mut rec = measure_state(&rho, &MeasureConfig::default(), None).unwrap();
        rec.d_ppt -= 1.0;
        let check = verify_chain(&rec, 1e-4);
        assert_eq!(check.violations, vec![ChainLink::DAboveR]);
    }
}
