//! Maximisation of `⟨φ|ρ|φ⟩` over pure product states `|φ⟩ = ⊗_k |φ_k⟩`.
//!
//! Because the objective is linear in `ω` and the separable set is the convex
//! hull of pure product states, this maximum equals `max_{ω ∈ SEP} tr(ρω)`.
//! The problem is nonconvex; the search below is a local ascent with random
//! restarts, so its result is a feasible point: a lower bound on the separable
//! overlap and hence an upper bound on the geometric measure.
//!
//! Each update fixes every party but one, contracts `ρ` with the fixed local
//! vectors into a `d_k × d_k` positive matrix and replaces party `k`'s vector
//! by its top eigenvector, which never decreases the overlap.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::families::haar_vector;
use crate::linalg::{self, CMatrix, CVector};
use crate::state::{DensityOperator, ProductState};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ProductOptConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// A restart stops once a full sweep improves the overlap by less than this.
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for ProductOptConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_sweeps: 500,
            convergence_tol: 1e-12,
            seed: 0,
        }
    }
}

impl ProductOptConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be >= 1".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "convergence tolerance must be > 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ProductOptResult {
    /// Best overlap found, `Λ_found`.
    pub best_overlap: f64,
    pub argmax: ProductState,
    /// Sweeps performed by each restart.
    pub sweep_counts: Vec<usize>,
    /// Whether each restart met the convergence tolerance before `max_sweeps`.
    pub converged: Vec<bool>,
    /// Largest decrease of the overlap observed across all single-party
    /// updates (zero up to round-off for a monotone ascent).
    pub max_descent: f64,
}

impl ProductOptResult {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

struct Restart {
    overlap: f64,
    locals: Vec<CVector>,
    sweeps: usize,
    converged: bool,
    max_descent: f64,
}

/// Best product overlap `Λ_found ≤ max_{ω∈SEP} tr(ρω)`.
pub fn max_product_overlap(
    rho: &DensityOperator,
    cfg: &ProductOptConfig,
) -> Result<ProductOptResult> {
    cfg.validate()?;
    let m = rho.space().parties();
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "product optimisation needs at least 2 parties, got {m}"
        )));
    }
    let mut best: Option<Restart> = None;
    let mut sweep_counts = Vec::with_capacity(cfg.restarts);
    let mut converged = Vec::with_capacity(cfg.restarts);
    let mut max_descent = 0.0f64;
    for restart in 0..cfg.restarts {
        let run = run_restart(rho, cfg, restart as u64);
        sweep_counts.push(run.sweeps);
        converged.push(run.converged);
        max_descent = max_descent.max(run.max_descent);
        if best.as_ref().is_none_or(|b| run.overlap > b.overlap) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let argmax = ProductState::new(best.locals)?;
    let best_overlap = product_overlap(rho, &argmax);
    Ok(ProductOptResult {
        best_overlap,
        argmax,
        sweep_counts,
        converged,
        max_descent,
    })
}

/// `-log₂ Λ_found`, an upper bound on the geometric measure `G(ρ)`.
pub fn geometric_measure_upper(rho: &DensityOperator, cfg: &ProductOptConfig) -> Result<f64> {
    let res = max_product_overlap(rho, cfg)?;
    if res.best_overlap <= 0.0 {
        return Err(Error::ZeroOverlap);
    }
    Ok((-res.best_overlap.log2()).max(0.0))
}

/// `⟨φ|ρ|φ⟩` for a product state on `ρ`'s space.
pub fn product_overlap(rho: &DensityOperator, phi: &ProductState) -> f64 {
    let v = phi.amplitudes();
    (v.adjoint() * rho.matrix() * &v)[(0, 0)].re
}

fn run_restart(rho: &DensityOperator, cfg: &ProductOptConfig, restart: u64) -> Restart {
    let space = rho.space();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart);
    let mut locals: Vec<CVector> = space
        .dims()
        .iter()
        .map(|&d| haar_vector(d, &mut rng))
        .collect();
    let mut overlap = overlap_of(rho, &locals);
    let mut max_descent = 0.0f64;
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        let start = overlap;
        for k in 0..space.parties() {
            let local = contract_except(rho, &locals, k);
            let e = linalg::eigh(&local);
            locals[k] = e.top_vector();
            let updated = e.max_value();
            max_descent = max_descent.max(overlap - updated);
            overlap = updated;
        }
        if overlap - start < cfg.convergence_tol {
            converged = true;
            break;
        }
    }
    Restart {
        overlap,
        locals,
        sweeps,
        converged,
        max_descent,
    }
}

fn overlap_of(rho: &DensityOperator, locals: &[CVector]) -> f64 {
    let phi = ProductState::new(locals.to_vec()).expect("unit local vectors");
    product_overlap(rho, &phi)
}

/// `(⊗_{l≠k} ⟨φ_l|) ρ (⊗_{l≠k} |φ_l⟩)` as a `d_k × d_k` matrix.
fn contract_except(rho: &DensityOperator, locals: &[CVector], k: usize) -> CMatrix {
    let space = rho.space();
    let d = space.total_dim();
    let dk = space.dims()[k];
    let mut rest = vec![linalg::ONE; d];
    let mut digit_k = vec![0usize; d];
    for (i, (r, dig)) in rest.iter_mut().zip(digit_k.iter_mut()).enumerate() {
        for (l, v) in locals.iter().enumerate() {
            let digit = space.digit(i, l);
            if l == k {
                *dig = digit;
            } else {
                *r *= v[digit];
            }
        }
    }
    let m = rho.matrix();
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..d {
        let wi = rest[i].conj();
        for j in 0..d {
            out[(digit_k[i], digit_k[j])] += wi * m[(i, j)] * rest[j];
        }
    }
    out
}
