use crate::linalg::{self, c, CMatrix, CVector};
use crate::space::MultipartiteSpace;
use crate::{Error, Result};

pub const NORM_TOL: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Normalized state vector on a multipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space: MultipartiteSpace,
    amplitudes: CVector,
}

impl PureState {
    /// Wraps amplitudes that must already have unit norm (within `1e-8`).
    pub fn new(space: MultipartiteSpace, amplitudes: CVector) -> Result<Self> {
        check_len(&space, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { space, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(space: MultipartiteSpace, amplitudes: CVector) -> Result<Self> {
        check_len(&space, amplitudes.len())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            space,
            amplitudes: amplitudes / c(norm, 0.0),
        })
    }

    pub fn space(&self) -> &MultipartiteSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> crate::C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            space: self.space.clone(),
            matrix: linalg::outer(&self.amplitudes),
        }
    }
}

/// Unit-trace positive semidefinite operator on a multipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    space: MultipartiteSpace,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity (`1e-10` max entry deviation), unit trace (`1e-8`)
    /// and positivity (eigenvalues `>= -1e-8`). The stored matrix is the exact
    /// Hermitian part of the input.
    pub fn new(space: MultipartiteSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NotHermitian(f64::NAN));
        }
        let herr = linalg::hermiticity_error(&matrix);
        if herr > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herr));
        }
        let tr = linalg::trace_re(&matrix);
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let matrix = linalg::hermitian_part(&matrix);
        let min = linalg::min_eigenvalue(&matrix);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { space, matrix })
    }

    pub fn maximally_mixed(space: MultipartiteSpace) -> Self {
        let d = space.total_dim();
        Self {
            matrix: linalg::identity(d) * c(1.0 / d as f64, 0.0),
            space,
        }
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let space = first.1.space.clone();
        let d = space.total_dim();
        let mut m = CMatrix::zeros(d, d);
        for (w, rho) in parts {
            if rho.space != space {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: rho.space.total_dim(),
                });
            }
            if *w < 0.0 {
                return Err(Error::InvalidParameter(format!("negative weight {w}")));
            }
            m += &rho.matrix * c(*w, 0.0);
        }
        Self::new(space, m)
    }

    pub fn space(&self) -> &MultipartiteSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn eigh(&self) -> linalg::Eigh {
        linalg::eigh(&self.matrix)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        linalg::trace_product_re(&self.matrix, &self.matrix)
    }

    /// `Re tr(ρ σ)` for an operator on the same space.
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        linalg::trace_product_re(&self.matrix, op)
    }
}

/// A member of a state set: kept as a vector when pure.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl QuantumState {
    pub fn space(&self) -> &MultipartiteSpace {
        match self {
            QuantumState::Pure(p) => p.space(),
            QuantumState::Mixed(m) => m.space(),
        }
    }

    pub fn density(&self) -> DensityOperator {
        match self {
            QuantumState::Pure(p) => p.density(),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    /// Born-rule probabilities of the computational basis outcomes.
    pub fn computational_probabilities(&self) -> Vec<f64> {
        match self {
            QuantumState::Pure(p) => p.amplitudes().iter().map(|z| z.norm_sqr()).collect(),
            QuantumState::Mixed(m) => m.matrix().diagonal().iter().map(|z| z.re).collect(),
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(p: PureState) -> Self {
        QuantumState::Pure(p)
    }
}

impl From<DensityOperator> for QuantumState {
    fn from(m: DensityOperator) -> Self {
        QuantumState::Mixed(m)
    }
}

/// One local unit vector per party; embeds as their Kronecker product.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    locals: Vec<CVector>,
}

impl ProductState {
    pub fn new(locals: Vec<CVector>) -> Result<Self> {
        if locals.is_empty() {
            return Err(Error::EmptySpace);
        }
        for v in &locals {
            let n = v.norm();
            if (n - 1.0).abs() > 1e-10 {
                return Err(Error::NotNormalized(n));
            }
        }
        Ok(Self { locals })
    }

    pub fn locals(&self) -> &[CVector] {
        &self.locals
    }

    pub fn dims(&self) -> Vec<usize> {
        self.locals.iter().map(|v| v.len()).collect()
    }

    /// Tensor product in the fixed index convention, checked against `space`.
    pub fn embed(&self, space: &MultipartiteSpace) -> Result<PureState> {
        if self.dims() != space.dims() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                found: self.dims().iter().product(),
            });
        }
        let amps = self.amplitudes();
        PureState::normalized(space.clone(), amps)
    }

    pub(crate) fn amplitudes(&self) -> CVector {
        let mut acc = CVector::from_element(1, linalg::ONE);
        for v in &self.locals {
            acc = linalg::kron_vec(&acc, v);
        }
        acc
    }
}

/// Projector onto the range of a density operator.
#[derive(Debug, Clone)]
pub struct SupportProjector {
    projector: CMatrix,
    /// Orthonormal basis of the range, as columns.
    range: CMatrix,
    /// Orthonormal basis of the kernel, as columns.
    kernel: CMatrix,
}

impl SupportProjector {
    pub(crate) fn from_bases(range: CMatrix, kernel: CMatrix) -> Self {
        let projector = &range * range.adjoint();
        Self {
            projector,
            range,
            kernel,
        }
    }

    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    /// Rank of the projector.
    pub fn rank(&self) -> usize {
        self.range.ncols()
    }

    /// `|P| = tr P`.
    pub fn size(&self) -> f64 {
        self.rank() as f64
    }

    pub fn range_basis(&self) -> &CMatrix {
        &self.range
    }

    pub fn kernel_basis(&self) -> &CMatrix {
        &self.kernel
    }

    /// The normalized support state `P/|P|`.
    pub fn normalized_state(&self, space: &MultipartiteSpace) -> Result<DensityOperator> {
        DensityOperator::new(space.clone(), &self.projector * c(1.0 / self.size(), 0.0))
    }
}

fn check_len(space: &MultipartiteSpace, len: usize) -> Result<()> {
    if len != space.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.total_dim(),
            found: len,
        });
    }
    Ok(())
}
