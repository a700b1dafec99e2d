//! Named states, local operators and seeded random states.
//!
//! All constructors return normalized states in the big-endian convention.
//! Parties are indexed from 0.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, CMatrix, CVector};
use crate::ops;
use crate::space::MultipartiteSpace;
use crate::state::{DensityOperator, PureState};
use crate::{Error, Result};

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `m` qubits.
pub fn ghz(m: usize) -> Result<PureState> {
    require(m >= 2, format!("GHZ needs m >= 2, got {m}"))?;
    let space = MultipartiteSpace::qubits(m)?;
    let mut amps = CVector::zeros(space.total_dim());
    amps[0] = linalg::ONE;
    amps[space.total_dim() - 1] = linalg::ONE;
    PureState::normalized(space, amps)
}

/// Equal superposition of the `m` single-excitation basis states.
pub fn w(m: usize) -> Result<PureState> {
    require(m >= 2, format!("W needs m >= 2, got {m}"))?;
    let space = MultipartiteSpace::qubits(m)?;
    let mut amps = CVector::zeros(space.total_dim());
    for k in 0..m {
        amps[1 << k] = linalg::ONE;
    }
    PureState::normalized(space, amps)
}

/// `Σ_i |ii⟩/√d` on `d × d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    require(
        d >= 2,
        format!("maximally entangled state needs d >= 2, got {d}"),
    )?;
    let space = MultipartiteSpace::new(&[d, d])?;
    let mut amps = CVector::zeros(d * d);
    for i in 0..d {
        amps[i * d + i] = linalg::ONE;
    }
    PureState::normalized(space, amps)
}

/// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell() -> PureState {
    max_entangled(2).expect("d = 2 is valid")
}

/// `|Φ⁺⟩, |Φ⁻⟩, |Ψ⁺⟩, |Ψ⁻⟩`.
pub fn bell_basis() -> Vec<PureState> {
    let space = MultipartiteSpace::qubits(2).expect("two qubits");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rows = [
        [h, 0.0, 0.0, h],
        [h, 0.0, 0.0, -h],
        [0.0, h, h, 0.0],
        [0.0, h, -h, 0.0],
    ];
    rows.iter()
        .map(|r| {
            let amps = CVector::from_iterator(4, r.iter().map(|&x| c(x, 0.0)));
            PureState::normalized(space.clone(), amps).expect("unit vector")
        })
        .collect()
}

pub const BELL_LABELS: [&str; 4] = ["phi+", "phi-", "psi+", "psi-"];

/// Computational basis state `|digits⟩`.
pub fn basis_state(space: &MultipartiteSpace, digits: &[usize]) -> Result<PureState> {
    let idx = space.index(digits)?;
    let mut amps = CVector::zeros(space.total_dim());
    amps[idx] = linalg::ONE;
    PureState::new(space.clone(), amps)
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[linalg::ZERO, linalg::ONE, linalg::ONE, linalg::ZERO],
    )
}

pub fn sigma_z() -> CMatrix {
    linalg::real_diag(&[1.0, -1.0])
}

/// `σ_x` on `party`, identity elsewhere (qubit parties only).
pub fn pauli_x(space: &MultipartiteSpace, party: usize) -> Result<CMatrix> {
    ops::local_operator(space, party, &sigma_x())
}

/// `σ_z` on `party`, identity elsewhere (qubit parties only).
pub fn pauli_z(space: &MultipartiteSpace, party: usize) -> Result<CMatrix> {
    ops::local_operator(space, party, &sigma_z())
}

/// Applies the unitary `u` to one party of `psi`.
pub fn apply_local_unitary(psi: &PureState, party: usize, u: &CMatrix) -> Result<PureState> {
    let err = linalg::unitarity_error(u);
    if u.nrows() != u.ncols() || err > 1e-10 {
        return Err(Error::NotUnitary(err));
    }
    let full = ops::local_operator(psi.space(), party, u)?;
    PureState::normalized(psi.space().clone(), full * psi.amplitudes())
}

/// Applies `u_k` to party `k` for every party.
pub fn apply_product_unitary(psi: &PureState, us: &[CMatrix]) -> Result<PureState> {
    if us.len() != psi.space().parties() {
        return Err(Error::DimensionMismatch {
            expected: psi.space().parties(),
            found: us.len(),
        });
    }
    let mut out = psi.clone();
    for (k, u) in us.iter().enumerate() {
        out = apply_local_unitary(&out, k, u)?;
    }
    Ok(out)
}

/// Conjugates `rho` by `u_0 ⊗ … ⊗ u_{m-1}`.
pub fn conjugate_by_product(rho: &DensityOperator, us: &[CMatrix]) -> Result<DensityOperator> {
    let space = rho.space();
    if us.len() != space.parties() {
        return Err(Error::DimensionMismatch {
            expected: space.parties(),
            found: us.len(),
        });
    }
    let mut full = CMatrix::from_element(1, 1, linalg::ONE);
    for u in us {
        full = linalg::kron(&full, u);
    }
    if full.nrows() != space.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.total_dim(),
            found: full.nrows(),
        });
    }
    let m = &full * rho.matrix() * full.adjoint();
    DensityOperator::new(space.clone(), linalg::hermitian_part(&m))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> crate::C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in `C^d`.
pub fn haar_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(d, |_, _| gaussian(rng));
        let n = v.norm();
        if n > 1e-12 {
            return v / c(n, 0.0);
        }
    }
}

/// Haar-random `d × d` unitary (QR of a Ginibre matrix with phase fix).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let diag = r[(j, j)];
        let n = diag.norm();
        if n > 0.0 {
            let phase = diag / n;
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// One Haar-random unitary per party.
pub fn random_local_unitaries<R: Rng + ?Sized>(
    space: &MultipartiteSpace,
    rng: &mut R,
) -> Vec<CMatrix> {
    space.dims().iter().map(|&d| haar_unitary(d, rng)).collect()
}

pub fn random_pure<R: Rng + ?Sized>(space: &MultipartiteSpace, rng: &mut R) -> PureState {
    PureState::normalized(space.clone(), haar_vector(space.total_dim(), rng))
        .expect("nonzero Gaussian vector")
}

/// Random density operator of the given rank: `G G† / tr(G G†)` with a
/// `D × rank` Ginibre matrix `G`.
pub fn random_mixed<R: Rng + ?Sized>(
    space: &MultipartiteSpace,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let d = space.total_dim();
    require(
        (1..=d).contains(&rank),
        format!("rank {rank} outside 1..={d}"),
    )?;
    let g = CMatrix::from_fn(d, rank, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = linalg::trace_re(&m);
    DensityOperator::new(space.clone(), linalg::hermitian_part(&(m / c(tr, 0.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ghz2_is_bell() {
        assert!(
            linalg::max_abs_diff(
                &linalg::outer(ghz(2).unwrap().amplitudes()),
                &linalg::outer(bell().amplitudes())
            ) < 1e-15
        );
    }

    #[test]
    fn w3_amplitudes() {
        let s = w(3).unwrap();
        let a = 1.0 / 3f64.sqrt();
        for (i, z) in s.amplitudes().iter().enumerate() {
            let expect = if [1, 2, 4].contains(&i) { a } else { 0.0 };
            assert!((z - c(expect, 0.0)).norm() < 1e-15, "index {i}");
        }
    }

    #[test]
    fn local_sigma_x_on_ghz() {
        let s = apply_local_unitary(&ghz(3).unwrap(), 1, &sigma_x()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (i, z) in s.amplitudes().iter().enumerate() {
            let expect = if i == 0b010 || i == 0b101 { h } else { 0.0 };
            assert!((z - c(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ghz(1).is_err());
        assert!(w(1).is_err());
        assert!(max_entangled(1).is_err());
        let not_unitary = linalg::real_diag(&[1.0, 2.0]);
        assert!(matches!(
            apply_local_unitary(&bell(), 0, &not_unitary),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        let b = bell_basis();
        for i in 0..4 {
            for j in 0..4 {
                let ip = b[i].inner(&b[j]).norm();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let space = MultipartiteSpace::new(&[2, 3]).unwrap();
        for rank in 1..=6 {
            let rho = random_mixed(&space, rank, &mut rng).unwrap();
            let p = ops::support(&rho, crate::DEFAULT_RANK_TOL).unwrap();
            assert_eq!(p.rank(), rank);
        }
        let u = haar_unitary(4, &mut rng);
        assert!(linalg::unitarity_error(&u) < 1e-12);
        assert!(random_mixed(&space, 7, &mut rng).is_err());
    }
}
