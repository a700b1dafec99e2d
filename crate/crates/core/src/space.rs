//! Tensor-product spaces and bipartitions.
//!
//! The basis index of `|i_0 i_1 … i_{m-1}⟩` is `Σ_k i_k · Π_{l>k} d_l`: party 0
//! is the most significant digit. Every reshape, partial transpose and file
//! format in the crate uses this convention.

use crate::{Error, Result};

/// Largest total dimension accepted by [`MultipartiteSpace::new`].
pub const MAX_TOTAL_DIM: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultipartiteSpace {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl MultipartiteSpace {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut total = 1usize;
        for &d in dims {
            if d < 2 {
                return Err(Error::InvalidDimension(d));
            }
            total = total.saturating_mul(d);
        }
        if total > MAX_TOTAL_DIM {
            return Err(Error::TooLarge(total, MAX_TOTAL_DIM));
        }
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Ok(Self {
            dims: dims.to_vec(),
            strides,
            total,
        })
    }

    /// `m` qubits.
    pub fn qubits(m: usize) -> Result<Self> {
        // reject before allocating `m` entries
        if m >= usize::BITS as usize || 1usize << m > MAX_TOTAL_DIM {
            return Err(Error::TooLarge(
                1usize.checked_shl(m as u32).unwrap_or(usize::MAX),
                MAX_TOTAL_DIM,
            ));
        }
        Self::new(&vec![2; m])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension `D`.
    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn stride(&self, party: usize) -> usize {
        self.strides[party]
    }

    pub fn digit(&self, index: usize, party: usize) -> usize {
        (index / self.strides[party]) % self.dims[party]
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.parties()).map(|k| self.digit(index, k)).collect()
    }

    pub fn index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.parties() {
            return Err(Error::DimensionMismatch {
                expected: self.parties(),
                found: digits.len(),
            });
        }
        let mut idx = 0;
        for (k, &i) in digits.iter().enumerate() {
            if i >= self.dims[k] {
                return Err(Error::InvalidParameter(format!(
                    "digit {i} out of range for party {k} of dimension {}",
                    self.dims[k]
                )));
            }
            idx += i * self.strides[k];
        }
        Ok(idx)
    }

    pub fn check_party(&self, party: usize) -> Result<()> {
        if party >= self.parties() {
            return Err(Error::PartyOutOfRange {
                party,
                parties: self.parties(),
            });
        }
        Ok(())
    }

    /// Subspace made of the given parties, in increasing party order.
    pub fn subspace(&self, parties: &[usize]) -> Result<Self> {
        let mut sorted = parties.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &p in &sorted {
            self.check_party(p)?;
        }
        Self::new(&sorted.iter().map(|&p| self.dims[p]).collect::<Vec<_>>())
    }

    /// All bipartitions, one per cut up to complement (`2^{m-1} - 1` of them).
    ///
    /// Cuts are ordered by their canonical mask (which never contains the last
    /// party), ascending.
    pub fn all_cuts(&self) -> Vec<Bipartition> {
        let m = self.parties();
        if m < 2 {
            return Vec::new();
        }
        // canonical masks: subsets of parties 0..m-1 excluding the last party
        (1u64..(1u64 << (m - 1)))
            .map(|bits| Bipartition {
                space: self.clone(),
                mask: bits << 1,
            })
            .collect()
    }

    /// The single cut separating party 0 from the rest.
    pub fn first_party_cut(&self) -> Option<Bipartition> {
        if self.parties() < 2 {
            return None;
        }
        Bipartition::new(self, &[0]).ok()
    }
}

/// A cut `A | Ā` of the parties. `A` and its complement denote the same cut;
/// the stored mask is canonicalised so that it never contains the last party.
///
/// Bit `m-1-k` of the mask stands for party `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    space: MultipartiteSpace,
    mask: u64,
}

impl Bipartition {
    pub fn new(space: &MultipartiteSpace, side: &[usize]) -> Result<Self> {
        let m = space.parties();
        let mut mask = 0u64;
        for &p in side {
            space.check_party(p)?;
            mask |= 1 << (m - 1 - p);
        }
        let full = (1u64 << m) - 1;
        if mask == 0 || mask == full {
            return Err(Error::InvalidCut(format!(
                "side {side:?} must be a nonempty proper subset of {m} parties"
            )));
        }
        if mask & 1 == 1 {
            mask = full & !mask;
        }
        Ok(Self {
            space: space.clone(),
            mask,
        })
    }

    pub fn space(&self) -> &MultipartiteSpace {
        &self.space
    }

    pub fn contains(&self, party: usize) -> bool {
        let m = self.space.parties();
        self.mask >> (m - 1 - party) & 1 == 1
    }

    /// Parties on the canonical side `A`.
    pub fn side(&self) -> Vec<usize> {
        (0..self.space.parties())
            .filter(|&p| self.contains(p))
            .collect()
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.space.parties())
            .filter(|&p| !self.contains(p))
            .collect()
    }

    /// Part of the basis index carried by the parties in `A`.
    pub(crate) fn side_part(&self, index: usize) -> usize {
        self.side()
            .iter()
            .map(|&p| self.space.digit(index, p) * self.space.stride(p))
            .sum()
    }

    /// For each basis index, the contribution of the `A` digits.
    pub(crate) fn side_parts(&self) -> Vec<usize> {
        (0..self.space.total_dim())
            .map(|i| self.side_part(i))
            .collect()
    }

    pub fn label(&self) -> String {
        let fmt = |ps: Vec<usize>| {
            ps.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{{{}}}|{{{}}}", fmt(self.side()), fmt(self.complement()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_index_convention() {
        let s = MultipartiteSpace::new(&[2, 3, 2]).unwrap();
        assert_eq!(s.total_dim(), 12);
        assert_eq!(s.index(&[1, 2, 1]).unwrap(), 6 + 4 + 1);
        assert_eq!(s.digits(11), vec![1, 2, 1]);
        for i in 0..12 {
            assert_eq!(s.index(&s.digits(i)).unwrap(), i);
        }
    }

    #[test]
    fn rejects_bad_dims() {
        assert!(matches!(
            MultipartiteSpace::new(&[]),
            Err(Error::EmptySpace)
        ));
        assert!(matches!(
            MultipartiteSpace::new(&[2, 1]),
            Err(Error::InvalidDimension(1))
        ));
        assert!(matches!(
            MultipartiteSpace::new(&[32, 33]),
            Err(Error::TooLarge(..))
        ));
    }

    #[test]
    fn cut_count_and_complement_identity() {
        for m in 2..=6 {
            let s = MultipartiteSpace::qubits(m).unwrap();
            assert_eq!(s.all_cuts().len(), (1 << (m - 1)) - 1);
        }
        let s = MultipartiteSpace::qubits(3).unwrap();
        let a = Bipartition::new(&s, &[0]).unwrap();
        let b = Bipartition::new(&s, &[1, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.side(), vec![0]);
        assert!(Bipartition::new(&s, &[]).is_err());
        assert!(Bipartition::new(&s, &[0, 1, 2]).is_err());
        assert!(Bipartition::new(&s, &[3]).is_err());
    }
}
