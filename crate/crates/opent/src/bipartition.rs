//! Bipartite factorizations and the swap operators built on them.

use crate::error::{Error, Result};
use crate::linalg::{permutation_matrix, CMatrix};

/// A factorization H = H_A (x) H_B with d = d_A * d_B.
///
/// The doubled space carries the fixed factor order (A, B, A', B') of
/// dimension d^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bipartition {
    da: usize,
    db: usize,
}

/// Which factor pair a doubled-space swap exchanges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapKind {
    /// Exchange A with A'.
    AaPrime,
    /// Exchange B with B'.
    BbPrime,
    /// Exchange the full copy AB with A'B'.
    Full,
}

impl Bipartition {
    pub fn new(da: usize, db: usize) -> Result<Self> {
        if da == 0 || db == 0 {
            return Err(Error::InvalidArgument(
                "bipartition factors must be positive".into(),
            ));
        }
        Ok(Self { da, db })
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    /// Total dimension d = d_A * d_B.
    pub fn d(&self) -> usize {
        self.da * self.db
    }

    pub fn is_symmetric(&self) -> bool {
        self.da == self.db
    }

    /// Half-chain split of L sites with local dimension q.
    pub fn half_chain(l: usize, q: usize) -> Result<Self> {
        if l == 0 || l % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "half-chain bipartition needs an even positive L, got {l}"
            )));
        }
        let half = q.pow((l / 2) as u32);
        Self::new(half, half)
    }

    /// Check that a matrix acts on this space.
    pub fn check_matrix(&self, m: &CMatrix) -> Result<()> {
        if m.dim() != (self.d(), self.d()) {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but the bipartition has d = {}",
                m.nrows(),
                m.ncols(),
                self.d()
            )));
        }
        Ok(())
    }

    /// Swap operator on the doubled space (A, B, A', B'), as a d^2 x d^2
    /// permutation matrix. Hermitian, unitary, and an involution.
    pub fn subsystem_swap(&self, which: SwapKind) -> CMatrix {
        let dims = [self.da, self.db, self.da, self.db];
        match which {
            SwapKind::AaPrime => permutation_matrix(&dims, &[2, 1, 0, 3]),
            SwapKind::BbPrime => permutation_matrix(&dims, &[0, 3, 2, 1]),
            SwapKind::Full => permutation_matrix(&dims, &[2, 3, 0, 1]),
        }
    }

    /// Swap between A and B on the base space; needs d_A = d_B.
    pub fn swap_ab(&self) -> Result<CMatrix> {
        if !self.is_symmetric() {
            return Err(Error::Dimension(format!(
                "A<->B swap needs a symmetric bipartition, got ({}, {})",
                self.da, self.db
            )));
        }
        Ok(permutation_matrix(&[self.da, self.db], &[1, 0]))
    }
}
