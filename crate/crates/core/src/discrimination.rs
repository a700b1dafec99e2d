//! Perfect-discrimination instances.
//!
//! A set of `N` states on a space of dimension `D` can only be discriminated
//! perfectly by LOCC if `Σ d(ρ_i) ≤ D`. Since `d_ppt ≤ d`, a PPT sum above `D`
//! is a certificate of impossibility; a sum at or below `D` proves nothing,
//! and is reported as inconclusive.
//!
//! The averaged form `N ≤ D / avg(d) ≤ D / avg(r) ≤ D / avg(2^{E_R+S}) ≤
//! D / avg(2^G)` yields one count bound per measure column.

use std::collections::BTreeMap;

use crate::linalg::{self, c, CMatrix, CVector};
use crate::measures::{self, MeasureConfig, MeasureRecord};
use crate::sdp::{self, SolverConfig, SolverStatus, MAX_SDP_DIM};
use crate::space::MultipartiteSpace;
use crate::state::{PureState, QuantumState};
use crate::{families, Error, Result};

/// Largest party count accepted by [`build_ghz_set`].
pub const MAX_GHZ_PARTIES: usize = 10;

/// Relative slack, in units of the solver tolerance, subtracted from solver
/// values before they are used as certified lower bounds.
pub const CERTIFICATE_SLACK: f64 = 10.0;

/// Sums within `N · SATURATION_TOL` of `D` are reported as saturating.
pub const SATURATION_TOL: f64 = 1e-3;

/// `N` states on a common space. Orthogonality is not required here.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    space: MultipartiteSpace,
    states: Vec<QuantumState>,
    labels: Vec<String>,
}

impl StateSet {
    /// Missing labels default to `s0, s1, …`.
    pub fn new(
        space: MultipartiteSpace,
        states: Vec<QuantumState>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        for s in &states {
            if s.space() != &space {
                return Err(Error::DimensionMismatch {
                    expected: space.total_dim(),
                    found: s.space().total_dim(),
                });
            }
        }
        let labels = match labels {
            Some(l) if l.len() != states.len() => {
                return Err(Error::InvalidParameter(format!(
                    "{} labels for {} states",
                    l.len(),
                    states.len()
                )))
            }
            Some(l) => l,
            None => (0..states.len()).map(|i| format!("s{i}")).collect(),
        };
        Ok(Self {
            space,
            states,
            labels,
        })
    }

    pub fn from_pure(space: MultipartiteSpace, states: Vec<PureState>) -> Result<Self> {
        Self::new(space, states.into_iter().map(Into::into).collect(), None)
    }

    pub fn space(&self) -> &MultipartiteSpace {
        &self.space
    }

    pub fn states(&self) -> &[QuantumState] {
        &self.states
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }
}

/// Measurement operators, each Hermitian within `1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        let d = elements.first().map(|m| m.nrows()).unwrap_or(0);
        for m in &elements {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: m.nrows().max(m.ncols()),
                });
            }
            let herr = linalg::hermiticity_error(m);
            if herr > 1e-10 {
                return Err(Error::NotHermitian(herr));
            }
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    /// Rank-one projectors onto the given states.
    pub fn projective(states: &[PureState]) -> Result<Self> {
        Self::new(
            states
                .iter()
                .map(|s| linalg::outer(s.amplitudes()))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionResult {
    pub passed: bool,
    pub worst_violation: f64,
}

impl ConditionResult {
    fn from_violation(v: f64, tol: f64) -> Self {
        Self {
            passed: v <= tol,
            worst_violation: v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PovmReport {
    /// `Σ M_i = 1`
    pub completeness: ConditionResult,
    /// `0 ⪯ M_i ⪯ 1`
    pub positivity: ConditionResult,
    /// `tr(M_i ρ_i) = 1`; `None` when element and state counts differ.
    pub perfect_detection: Option<ConditionResult>,
    /// Every element PPT on every cut, standing in for separability.
    pub ppt: ConditionResult,
}

impl PovmReport {
    pub fn all_passed(&self) -> bool {
        self.completeness.passed
            && self.positivity.passed
            && self.perfect_detection.is_none_or(|r| r.passed)
            && self.ppt.passed
    }
}

pub fn povm_conditions_check(povm: &Povm, set: &StateSet, tol: f64) -> Result<PovmReport> {
    let d = set.total_dim();
    if povm.elements.is_empty() {
        return Err(Error::InvalidParameter("empty POVM".into()));
    }
    if povm.elements[0].nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: povm.elements[0].nrows(),
        });
    }

    let mut sum = CMatrix::zeros(d, d);
    for m in &povm.elements {
        sum += m;
    }
    let completeness = linalg::max_abs_diff(&sum, &linalg::identity(d));

    let mut positivity = 0.0f64;
    for m in &povm.elements {
        let ev = linalg::eigvalsh(m);
        let lo = ev.first().copied().unwrap_or(0.0);
        let hi = ev.last().copied().unwrap_or(0.0);
        positivity = positivity.max(-lo).max(hi - 1.0);
    }

    let perfect_detection = (povm.elements.len() == set.len()).then(|| {
        let worst = povm
            .elements
            .iter()
            .zip(&set.states)
            .map(|(m, s)| (s.density().expectation(m) - 1.0).abs())
            .fold(0.0, f64::max);
        ConditionResult::from_violation(worst, tol)
    });

    let cuts = set.space.all_cuts();
    let ppt = povm
        .elements
        .iter()
        .map(|m| (-sdp::min_partial_transpose_eigenvalue(m, &cuts)).max(0.0))
        .fold(0.0, f64::max);

    Ok(PovmReport {
        completeness: ConditionResult::from_violation(completeness, tol),
        positivity: ConditionResult::from_violation(positivity.max(0.0), tol),
        perfect_detection,
        ppt: ConditionResult::from_violation(ppt, tol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The necessary condition holds; nothing is claimed either way.
    Inconclusive,
    ProvablyNotDiscriminable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inconclusive => "inconclusive",
            Verdict::ProvablyNotDiscriminable => "provablyNotDiscriminable",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A solver value lowered by `CERTIFICATE_SLACK · tol · (1 + |value|)`, so
/// that it stays below the true optimum when the solver stopped within `tol`.
pub fn certified_lower(value: f64, tol: f64) -> f64 {
    value - CERTIFICATE_SLACK * tol * (1.0 + value.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    pub total_dim: usize,
    pub count: usize,
    pub d_values: Vec<f64>,
    pub statuses: Vec<SolverStatus>,
    pub sum: f64,
    /// Sum of the certified lower bounds on `d_ppt`.
    pub certified_sum: f64,
    pub verdict: Verdict,
    /// `|Σ d_ppt − D| ≤ N · 1e-3`.
    pub saturated: bool,
}

impl Theorem1Report {
    fn from_values(
        total_dim: usize,
        d_values: Vec<f64>,
        statuses: Vec<SolverStatus>,
        tol: f64,
    ) -> Self {
        let count = d_values.len();
        let sum: f64 = d_values.iter().sum();
        let certified_sum: f64 = d_values.iter().map(|&v| certified_lower(v, tol)).sum();
        // only converged solves may certify anything
        let all_converged = statuses.iter().all(|s| *s == SolverStatus::Converged);
        let verdict = if all_converged && certified_sum > total_dim as f64 {
            Verdict::ProvablyNotDiscriminable
        } else {
            Verdict::Inconclusive
        };
        let saturated = (sum - total_dim as f64).abs() <= count as f64 * SATURATION_TOL;
        Self {
            total_dim,
            count,
            d_values,
            statuses,
            sum,
            certified_sum,
            verdict,
            saturated,
        }
    }

    pub fn all_converged(&self) -> bool {
        self.statuses.iter().all(|s| *s == SolverStatus::Converged)
    }
}

fn check_sdp_size(set: &StateSet) -> Result<()> {
    if set.total_dim() > MAX_SDP_DIM {
        return Err(Error::TooLarge(set.total_dim(), MAX_SDP_DIM));
    }
    Ok(())
}

/// Evaluates `Σ d_ppt(ρ_i)` against `D`.
pub fn theorem1_check(set: &StateSet, cfg: &SolverConfig) -> Result<Theorem1Report> {
    check_sdp_size(set)?;
    let mut values = Vec::with_capacity(set.len());
    let mut statuses = Vec::with_capacity(set.len());
    for s in &set.states {
        let r = sdp::d_ppt(&s.density(), cfg)?;
        values.push(r.value);
        statuses.push(r.status);
    }
    Ok(Theorem1Report::from_values(
        set.total_dim(),
        values,
        statuses,
        cfg.tol,
    ))
}

/// Column of the averaged bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundColumn {
    DPpt,
    RPpt,
    EntropyProxy,
    GeometricPpt,
}

impl BoundColumn {
    pub const ALL: [BoundColumn; 4] = [
        BoundColumn::DPpt,
        BoundColumn::RPpt,
        BoundColumn::EntropyProxy,
        BoundColumn::GeometricPpt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundColumn::DPpt => "d_ppt",
            BoundColumn::RPpt => "r_ppt",
            BoundColumn::EntropyProxy => "2^{E_R+S} lower proxy",
            BoundColumn::GeometricPpt => "2^{G_ppt}",
        }
    }

    fn value(self, r: &MeasureRecord) -> f64 {
        match self {
            BoundColumn::DPpt => r.d_ppt,
            BoundColumn::RPpt => r.r_ppt,
            BoundColumn::EntropyProxy => (r.e_r_lower + r.entropy).exp2(),
            BoundColumn::GeometricPpt => r.g_lower.exp2(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnBound {
    pub column: BoundColumn,
    /// Average of the certified lower values.
    pub average: f64,
    /// `D / average`.
    pub ratio: f64,
    pub n_max: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub total_dim: usize,
    pub count: usize,
    pub records: Vec<MeasureRecord>,
    pub theorem1: Theorem1Report,
    pub bounds: Vec<ColumnBound>,
}

impl BoundReport {
    /// Assembles the report from per-state records.
    pub fn from_records(total_dim: usize, records: Vec<MeasureRecord>, tol: f64) -> Self {
        let theorem1 = Theorem1Report::from_values(
            total_dim,
            records.iter().map(|r| r.d_ppt).collect(),
            records.iter().map(|r| r.d_status).collect(),
            tol,
        );
        let n = records.len();
        let bounds = BoundColumn::ALL
            .iter()
            .map(|&column| {
                let average = if n == 0 {
                    f64::NAN
                } else {
                    records
                        .iter()
                        .map(|r| certified_lower(column.value(r), tol))
                        .sum::<f64>()
                        / n as f64
                };
                let ratio = total_dim as f64 / average;
                let n_max = if ratio.is_finite() && ratio >= 0.0 {
                    ratio.floor() as u64
                } else {
                    total_dim as u64
                };
                ColumnBound {
                    column,
                    average,
                    ratio,
                    n_max,
                }
            })
            .collect();
        Self {
            total_dim,
            count: n,
            records,
            theorem1,
            bounds,
        }
    }

    /// `Σ d_ppt ≤ D`.
    pub fn theorem1_pass(&self) -> bool {
        self.theorem1.verdict == Verdict::Inconclusive
    }

    pub fn bound(&self, column: BoundColumn) -> Option<&ColumnBound> {
        self.bounds.iter().find(|b| b.column == column)
    }

    /// Column ratios are nonincreasing left to right, within `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.bounds
            .windows(2)
            .all(|w| w[0].ratio <= w[1].ratio + slack)
    }
}

/// Measures every state and assembles the averaged count bounds.
pub fn corollary_bounds(set: &StateSet, cfg: &MeasureConfig) -> Result<BoundReport> {
    check_sdp_size(set)?;
    let mut records = Vec::with_capacity(set.len());
    for s in &set.states {
        records.push(measures::measure_state(&s.density(), cfg, None)?);
    }
    Ok(BoundReport::from_records(
        set.total_dim(),
        records,
        cfg.solver.tol,
    ))
}

/// `d₁d₂ / (Σα)²` for Schmidt coefficients `α` with `Σα² = 1`.
pub fn bipartite_bound(coeffs: &[f64], d1: usize, d2: usize) -> Result<f64> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidParameter("dimensions must be >= 1".into()));
    }
    if coeffs.is_empty() || coeffs.len() > d1.min(d2) {
        return Err(Error::InvalidParameter(format!(
            "{} Schmidt coefficients for {d1}x{d2}",
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|a| !a.is_finite() || *a < 0.0) {
        return Err(Error::InvalidParameter(
            "Schmidt coefficients must be finite and nonnegative".into(),
        ));
    }
    let norm: f64 = coeffs.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(norm.sqrt()));
    }
    let s: f64 = coeffs.iter().sum();
    Ok((d1 * d2) as f64 / (s * s))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhzWBounds {
    pub parties: usize,
    /// `2^{m-1}`
    pub n_ghz: f64,
    /// `2^m ((m-1)/m)^{m-1}`
    pub n_w: f64,
    pub floor_ghz: u64,
    pub floor_w: u64,
    /// `n_w` as a reduced fraction when it fits in `u128`.
    pub w_fraction: Option<(u128, u128)>,
}

impl GhzWBounds {
    /// `floor(n_w) < n_ghz`.
    pub fn w_strictly_below(&self) -> bool {
        (self.floor_w as f64) < self.n_ghz
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `2^m (m-1)^{m-1} / m^{m-1}` reduced, or `None` on overflow.
pub fn w_bound_fraction(m: usize) -> Option<(u128, u128)> {
    if m < 2 {
        return None;
    }
    let e = u32::try_from(m - 1).ok()?;
    let num = 2u128
        .checked_pow(u32::try_from(m).ok()?)?
        .checked_mul((m as u128 - 1).checked_pow(e)?)?;
    let den = (m as u128).checked_pow(e)?;
    let g = gcd(num, den);
    Some((num / g, den / g))
}

pub fn ghz_w_bounds(m: usize) -> Result<GhzWBounds> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
    }
    let mf = m as f64;
    let n_ghz = (mf - 1.0).exp2();
    let n_w = mf.exp2() * ((mf - 1.0) / mf).powf(mf - 1.0);
    let w_fraction = w_bound_fraction(m);
    let floor_w = match w_fraction {
        Some((p, q)) => (p / q) as u64,
        None => n_w.floor() as u64,
    };
    Ok(GhzWBounds {
        parties: m,
        n_ghz,
        n_w,
        floor_ghz: n_ghz as u64,
        floor_w,
        w_fraction,
    })
}

/// Bits `u_0 … u_{m-2}` of `u`, most significant first.
fn u_bits(u: usize, m: usize) -> Vec<usize> {
    (0..m - 1).map(|k| (u >> (m - 2 - k)) & 1).collect()
}

/// `(1 ⊗ σ_x^{u_0} ⊗ … ⊗ σ_x^{u_{m-2}}) |GHZ⟩` for `u` read big-endian.
pub fn ghz_variant(m: usize, u: usize) -> Result<PureState> {
    if !(2..=MAX_GHZ_PARTIES).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "GHZ set needs 2 <= m <= {MAX_GHZ_PARTIES}, got {m}"
        )));
    }
    if u >= 1 << (m - 1) {
        return Err(Error::InvalidParameter(format!("index {u} out of range")));
    }
    let space = MultipartiteSpace::qubits(m)?;
    let d = space.total_dim();
    let low = (1usize << (m - 1)) - 1;
    // flipping parties 1..m of |0…0⟩ gives |0u⟩; of |1…1⟩ gives |1ū⟩
    let a = u;
    let b = (1 << (m - 1)) | (!u & low);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = CVector::zeros(d);
    amps[a] = c(h, 0.0);
    amps[b] = c(h, 0.0);
    PureState::new(space, amps)
}

/// The `2^{m-1}` orthogonal GHZ variants, labelled by their bit strings.
pub fn build_ghz_set(m: usize) -> Result<StateSet> {
    let n = 1usize << (m.clamp(2, MAX_GHZ_PARTIES) - 1);
    let states: Vec<PureState> = (0..n).map(|u| ghz_variant(m, u)).collect::<Result<_>>()?;
    debug_assert!(states
        .iter()
        .enumerate()
        .all(|(i, a)| states[..i].iter().all(|b| a.inner(b).norm() <= 1e-12)));
    let labels = (0..n)
        .map(|u| {
            let bits: String = u_bits(u, m)
                .iter()
                .map(|b| if *b == 1 { '1' } else { '0' })
                .collect();
            format!("ghz_{bits}")
        })
        .collect();
    let space = states[0].space().clone();
    StateSet::new(
        space,
        states.into_iter().map(Into::into).collect(),
        Some(labels),
    )
}

/// Checks that the Gram matrix of pure members is the identity within `tol`.
pub fn gram_deviation(states: &[PureState]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b) - c(target, 0.0)).norm());
        }
    }
    worst
}

/// Maps a measured bit string (party 0 most significant) to a set index.
pub fn ghz_decode(outcome: usize, m: usize) -> usize {
    let low = (1usize << (m - 1)) - 1;
    let rest = outcome & low;
    if outcome >> (m - 1) & 1 == 0 {
        rest
    } else {
        !rest & low
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoccSimResult {
    pub per_state_success: Vec<f64>,
    /// Total probability of all outcomes, per state.
    pub total_probability: Vec<f64>,
    /// Outcome bit string → decoded index.
    pub outcome_table: BTreeMap<String, usize>,
}

impl LoccSimResult {
    pub fn min_success(&self) -> f64 {
        self.per_state_success
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_ghz_form(set: &StateSet) -> Result<usize> {
    let space = set.space();
    let m = space.parties();
    if !space.dims().iter().all(|&d| d == 2) || !(2..=MAX_GHZ_PARTIES).contains(&m) {
        return Err(Error::NotGhzSet(format!(
            "expected 2..={MAX_GHZ_PARTIES} qubits, got dims {:?}",
            space.dims()
        )));
    }
    if set.len() != 1 << (m - 1) {
        return Err(Error::NotGhzSet(format!(
            "expected {} states, got {}",
            1usize << (m - 1),
            set.len()
        )));
    }
    for (u, s) in set.states().iter().enumerate() {
        let expect = ghz_variant(m, u)?;
        let dev = match s {
            QuantumState::Pure(p) => 1.0 - p.inner(&expect).norm_sqr(),
            QuantumState::Mixed(rho) => {
                linalg::max_abs_diff(rho.matrix(), expect.density().matrix())
            }
        };
        if dev > 1e-10 {
            return Err(Error::NotGhzSet(format!(
                "state {u} deviates from the constructed variant by {dev:.3e}"
            )));
        }
    }
    Ok(m)
}

/// Exact Born-rule simulation of per-party `σ_z` measurements followed by
/// the complement decoder.
pub fn simulate_local_z_discrimination(set: &StateSet) -> Result<LoccSimResult> {
    simulate_with_decoder(set, &ghz_decode)
}

/// Same simulation with a caller-chosen decoder `(outcome, m) → index`.
pub fn simulate_with_decoder(
    set: &StateSet,
    decoder: &dyn Fn(usize, usize) -> usize,
) -> Result<LoccSimResult> {
    let m = check_ghz_form(set)?;
    let d = set.total_dim();
    let mut per_state_success = Vec::with_capacity(set.len());
    let mut total_probability = Vec::with_capacity(set.len());
    for (u, s) in set.states().iter().enumerate() {
        let probs = s.computational_probabilities();
        let mut hit = 0.0;
        let mut total = 0.0;
        for (b, p) in probs.iter().enumerate() {
            total += p;
            if decoder(b, m) == u {
                hit += p;
            }
        }
        per_state_success.push(hit);
        total_probability.push(total);
    }
    let outcome_table = (0..d)
        .map(|b| (format!("{b:0m$b}"), decoder(b, m)))
        .collect();
    Ok(LoccSimResult {
        per_state_success,
        total_probability,
        outcome_table,
    })
}

/// Coarse-grained computational-basis POVM for the GHZ set: element `u` is the
/// sum of the two projectors decoding to `u`.
pub fn ghz_povm(m: usize) -> Result<Povm> {
    if !(2..=MAX_GHZ_PARTIES).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "GHZ set needs 2 <= m <= {MAX_GHZ_PARTIES}, got {m}"
        )));
    }
    let d = 1usize << m;
    let mut diag = vec![vec![0.0; d]; d / 2];
    for b in 0..d {
        diag[ghz_decode(b, m)][b] = 1.0;
    }
    Povm::new(diag.iter().map(|v| linalg::real_diag(v)).collect())
}

/// Theorem 1 on a complete orthonormal basis of pure states.
pub fn entangled_basis_check(basis: &StateSet, cfg: &SolverConfig) -> Result<Theorem1Report> {
    let d = basis.total_dim();
    if basis.len() != d {
        return Err(Error::NotOrthonormal(format!(
            "a basis needs {d} states, got {}",
            basis.len()
        )));
    }
    let mut pure = Vec::with_capacity(d);
    for (i, s) in basis.states().iter().enumerate() {
        match s {
            QuantumState::Pure(p) => pure.push(p.clone()),
            QuantumState::Mixed(rho) => {
                let e = rho.eigh();
                if (e.max_value() - 1.0).abs() > 1e-8 {
                    return Err(Error::NotOrthonormal(format!("state {i} is not pure")));
                }
                let v = e.top_vector();
                pure.push(PureState::normalized(rho.space().clone(), v)?);
            }
        }
    }
    let dev = gram_deviation(&pure);
    if dev > 1e-8 {
        return Err(Error::NotOrthonormal(format!(
            "Gram matrix deviates from identity by {dev:.3e}"
        )));
    }
    theorem1_check(basis, cfg)
}

/// `{|00⟩, |11⟩, (|01⟩ ± |10⟩)/√2}`: two product and two entangled members.
pub fn mixed_entanglement_basis() -> StateSet {
    let space = MultipartiteSpace::qubits(2).expect("two qubits");
    let bell = families::bell_basis();
    let states = vec![
        families::basis_state(&space, &[0, 0]).expect("valid digits"),
        families::basis_state(&space, &[1, 1]).expect("valid digits"),
        bell[2].clone(),
        bell[3].clone(),
    ];
    StateSet::from_pure(space, states).expect("same space")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solver() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn ghz_set_m2_and_m3() {
        let s = build_ghz_set(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let QuantumState::Pure(p0) = &s.states()[0] else {
            panic!()
        };
        let QuantumState::Pure(p1) = &s.states()[1] else {
            panic!()
        };
        assert_eq!(p0.amplitudes()[0], c(h, 0.0));
        assert_eq!(p0.amplitudes()[3], c(h, 0.0));
        assert_eq!(p1.amplitudes()[1], c(h, 0.0));
        assert_eq!(p1.amplitudes()[2], c(h, 0.0));

        let s = build_ghz_set(3).unwrap();
        assert_eq!(s.len(), 4);
        let pure: Vec<PureState> = s
            .states()
            .iter()
            .map(|q| match q {
                QuantumState::Pure(p) => p.clone(),
                _ => unreachable!(),
            })
            .collect();
        assert!(gram_deviation(&pure) <= 1e-12);
        assert!(build_ghz_set(1).is_err());
        assert!(build_ghz_set(11).is_err());
    }

    #[test]
    fn ghz_variant_matches_sigma_x_construction() {
        for m in 2..5 {
            let ghz = families::ghz(m).unwrap();
            for u in 0..1 << (m - 1) {
                let mut psi = ghz.clone();
                for (k, bit) in u_bits(u, m).iter().enumerate() {
                    if *bit == 1 {
                        psi = families::apply_local_unitary(&psi, k + 1, &families::sigma_x())
                            .unwrap();
                    }
                }
                let v = ghz_variant(m, u).unwrap();
                assert!((v.amplitudes() - psi.amplitudes()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn simulation_example_m3() {
        let set = build_ghz_set(3).unwrap();
        let sim = simulate_local_z_discrimination(&set).unwrap();
        // σ_x on party 1: (|010⟩ + |101⟩)/√2, index u = (1,0)
        assert_eq!(sim.outcome_table["010"], 0b10);
        assert_eq!(sim.outcome_table["101"], 0b10);
        let probs = set.states()[0b10].computational_probabilities();
        assert!((probs[0b010] - 0.5).abs() < 1e-15);
        assert!((probs[0b101] - 0.5).abs() < 1e-15);
        assert_eq!(sim.outcome_table["001"], 0b01);
        assert_eq!(sim.outcome_table["110"], 0b01);
        for (s, t) in sim.per_state_success.iter().zip(&sim.total_probability) {
            assert!((s - 1.0).abs() <= 1e-12);
            assert!((t - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn wrong_decoder_halves_success() {
        let set = build_ghz_set(3).unwrap();
        let naive = |b: usize, m: usize| b & ((1 << (m - 1)) - 1);
        let sim = simulate_with_decoder(&set, &naive).unwrap();
        for s in &sim.per_state_success {
            assert!((s - 0.5).abs() <= 1e-12);
        }
    }

    #[test]
    fn simulator_rejects_foreign_sets() {
        let s = MultipartiteSpace::qubits(2).unwrap();
        let bell = families::bell_basis();
        let set = StateSet::from_pure(s.clone(), vec![bell[0].clone(), bell[2].clone()]).unwrap();
        assert!(simulate_local_z_discrimination(&set).is_ok());
        let set = StateSet::from_pure(s, bell[..2].to_vec()).unwrap();
        assert!(matches!(
            simulate_local_z_discrimination(&set),
            Err(Error::NotGhzSet(_))
        ));
    }

    #[test]
    fn large_ghz_sets_simulate_exactly() {
        for m in [6, 10] {
            let set = build_ghz_set(m).unwrap();
            let sim = simulate_local_z_discrimination(&set).unwrap();
            assert_eq!(sim.per_state_success.len(), 1 << (m - 1));
            assert!((sim.min_success() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn bounds_for_ghz_and_w() {
        let b = ghz_w_bounds(3).unwrap();
        assert_eq!(b.n_ghz, 4.0);
        assert_eq!(b.w_fraction, Some((32, 9)));
        assert_eq!(b.floor_w, 3);
        assert!(b.w_strictly_below());
        let b = ghz_w_bounds(2).unwrap();
        assert_eq!((b.n_ghz, b.n_w), (2.0, 2.0));
        let b = ghz_w_bounds(4).unwrap();
        assert_eq!(b.n_ghz, 8.0);
        assert!((b.n_w - 6.75).abs() < 1e-12);
        assert_eq!(b.w_fraction, Some((27, 4)));
        for m in 3..30 {
            assert!(ghz_w_bounds(m).unwrap().w_strictly_below());
        }
        assert!(ghz_w_bounds(1).is_err());
    }

    #[test]
    fn bipartite_examples() {
        assert_eq!(bipartite_bound(&[1.0, 0.0], 2, 2).unwrap(), 4.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((bipartite_bound(&[h, h], 2, 2).unwrap() - 2.0).abs() < 1e-12);
        let t = 1.0 / 3f64.sqrt();
        assert!((bipartite_bound(&[t, t, t], 3, 3).unwrap() - 3.0).abs() < 1e-12);
        assert!(bipartite_bound(&[0.5, 0.5], 2, 2).is_err());
        assert!(bipartite_bound(&[1.0, 0.0, 0.0], 2, 2).is_err());
        assert!(bipartite_bound(&[-1.0], 2, 2).is_err());
    }

    #[test]
    fn povm_examples() {
        let s = MultipartiteSpace::qubits(2).unwrap();
        let basis: Vec<PureState> = (0..4)
            .map(|i| families::basis_state(&s, &[i >> 1, i & 1]).unwrap())
            .collect();
        let set = StateSet::from_pure(s.clone(), basis.clone()).unwrap();
        let rep = povm_conditions_check(&Povm::projective(&basis).unwrap(), &set, 1e-9).unwrap();
        assert!(rep.all_passed());

        let bell = families::bell_basis();
        let set = StateSet::from_pure(s, bell.clone()).unwrap();
        let rep = povm_conditions_check(&Povm::projective(&bell).unwrap(), &set, 1e-9).unwrap();
        assert!(rep.completeness.passed && rep.positivity.passed);
        assert_eq!(rep.perfect_detection.map(|r| r.passed), Some(true));
        assert!(!rep.ppt.passed);
        assert!((rep.ppt.worst_violation - 0.5).abs() < 1e-12);

        let set = build_ghz_set(3).unwrap();
        let rep = povm_conditions_check(&ghz_povm(3).unwrap(), &set, 1e-12).unwrap();
        assert!(rep.all_passed());
    }

    #[test]
    fn povm_dimension_mismatch() {
        let set = build_ghz_set(3).unwrap();
        let povm = Povm::new(vec![linalg::identity(4)]).unwrap();
        assert!(matches!(
            povm_conditions_check(&povm, &set, 1e-9),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut bad = linalg::identity(2);
        bad[(0, 1)] = c(0.3, 0.0);
        assert!(matches!(Povm::new(vec![bad]), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn bell_sets() {
        let s = MultipartiteSpace::qubits(2).unwrap();
        let all = StateSet::from_pure(s.clone(), families::bell_basis()).unwrap();
        let r = theorem1_check(&all, &solver()).unwrap();
        assert_eq!(r.verdict, Verdict::ProvablyNotDiscriminable);
        assert!((r.sum - 8.0).abs() < 1e-3);

        let two = StateSet::from_pure(s, families::bell_basis()[..2].to_vec()).unwrap();
        let r = theorem1_check(&two, &solver()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!((r.sum - 4.0).abs() < 1e-3);
        assert!(r.saturated);
    }

    #[test]
    fn ghz_set_saturates() {
        for m in [2, 3] {
            let set = build_ghz_set(m).unwrap();
            let r = theorem1_check(&set, &solver()).unwrap();
            assert_eq!(r.verdict, Verdict::Inconclusive);
            assert!(r.saturated, "m={m}: sum {}", r.sum);
        }
    }

    #[test]
    fn basis_checks() {
        let s = MultipartiteSpace::qubits(2).unwrap();
        let comp: Vec<PureState> = (0..4)
            .map(|i| families::basis_state(&s, &[i >> 1, i & 1]).unwrap())
            .collect();
        let r = entangled_basis_check(&StateSet::from_pure(s.clone(), comp).unwrap(), &solver())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!((r.sum - 4.0).abs() < 1e-4);

        let r = entangled_basis_check(&mixed_entanglement_basis(), &solver()).unwrap();
        assert_eq!(r.verdict, Verdict::ProvablyNotDiscriminable);
        assert!((r.sum - 6.0).abs() < 1e-3);

        let partial = StateSet::from_pure(s.clone(), families::bell_basis()[..3].to_vec()).unwrap();
        assert!(matches!(
            entangled_basis_check(&partial, &solver()),
            Err(Error::NotOrthonormal(_))
        ));
        let mut dup = families::bell_basis();
        dup[1] = dup[0].clone();
        let dup = StateSet::from_pure(s, dup).unwrap();
        assert!(matches!(
            entangled_basis_check(&dup, &solver()),
            Err(Error::NotOrthonormal(_))
        ));
    }

    #[test]
    fn ghz_set_bound_report() {
        let set = build_ghz_set(3).unwrap();
        let rep = corollary_bounds(&set, &MeasureConfig::default()).unwrap();
        assert_eq!(rep.bound(BoundColumn::DPpt).unwrap().n_max, 4);
        assert!(rep.theorem1_pass());
        assert!(rep.is_monotone(1e-4));
        for b in &rep.bounds {
            assert!(b.n_max >= 4, "{:?}", b);
        }
    }

    #[test]
    fn homogeneous_w_set_geometric_column() {
        let w = families::w(3).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let mut states = vec![w.clone()];
        for _ in 0..2 {
            let us = families::random_local_unitaries(w.space(), &mut rng);
            states.push(families::apply_product_unitary(&w, &us).unwrap());
        }
        let set = StateSet::from_pure(w.space().clone(), states).unwrap();
        let rep = corollary_bounds(&set, &MeasureConfig::default()).unwrap();
        assert_eq!(rep.bound(BoundColumn::GeometricPpt).unwrap().n_max, 3);
        assert!(rep.is_monotone(1e-4));
    }

    #[test]
    fn max_entangled_set_column() {
        let psi = families::max_entangled(3).unwrap();
        let set = StateSet::from_pure(psi.space().clone(), vec![psi]).unwrap();
        let rep = corollary_bounds(&set, &MeasureConfig::default()).unwrap();
        assert_eq!(rep.bound(BoundColumn::DPpt).unwrap().n_max, 3);
        assert_eq!(rep.bound(BoundColumn::RPpt).unwrap().n_max, 3);
    }

    #[test]
    fn certified_lower_is_below() {
        assert!(certified_lower(2.0, 1e-6) < 2.0);
        assert!(certified_lower(2.0, 1e-6) > 2.0 - 1e-4);
    }
}
