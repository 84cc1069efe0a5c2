//! Affine Cartan data for the cyclic Dynkin diagram on nodes 0..=n.
//!
//! Index arithmetic throughout the crate is mod n+1, with node 0 the affine
//! node. Rank n >= 2 is required: the n = 1 diagram has a doubled bond and
//! none of the formulas in this crate apply to it.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CartanData {
    n: usize,
}

impl CartanData {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        Ok(CartanData { n })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Index set {0, 1, ..., n}.
    pub fn nodes(&self) -> impl Iterator<Item = usize> {
        0..=self.n
    }

    /// Cartan matrix entry a_{ij}: 2 on the diagonal, -1 for cyclic
    /// neighbours, 0 otherwise. At n = 2 the off-diagonal entries are all -1
    /// because every pair of distinct nodes is adjacent on the triangle.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i <= self.n && j <= self.n);
        if i == j {
            return 2;
        }
        let m = self.n + 1;
        let d = (i + m - j) % m;
        if d == 1 || d == m - 1 {
            -1
        } else {
            0
        }
    }

    /// Full (n+1) x (n+1) matrix, rows and columns ordered 0..=n.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.nodes()
            .map(|i| self.nodes().map(|j| self.a(i, j)).collect())
            .collect()
    }
}
