use log::debug;

use crate::algebra::{solve_particular, IntMatrix, Ring};
use crate::error::{Error, Result};

/// A block linear system over `Z/M` assembled from cochain-level maps.
pub(crate) struct BlockSystem {
    cols: usize,
    rows: Vec<Vec<(usize, i64)>>,
    rhs: Vec<i64>,
}

impl BlockSystem {
    pub fn new() -> Self {
        BlockSystem {
            cols: 0,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// Reserve `len` unknowns; returns their offset.
    pub fn block(&mut self, len: usize) -> usize {
        self.cols += len;
        self.cols - len
    }

    /// Append rows `Σ sign·A_i x_{offset_i} = rhs`; all `A_i` share a row count.
    pub fn equations(&mut self, parts: &[(usize, &IntMatrix, i64)], rhs: &[i64]) {
        let start = self.rows.len();
        self.rows.extend((0..rhs.len()).map(|_| Vec::new()));
        self.rhs.extend_from_slice(rhs);
        for &(off, a, sign) in parts {
            assert_eq!(a.rows(), rhs.len());
            for r in 0..a.rows() {
                self.rows[start + r].extend(a.row(r).iter().map(|&(c, v)| (off + c, sign * v)));
            }
        }
    }

    pub fn solve(self, modulus: u64) -> Result<Vec<i64>> {
        let (nr, nc) = (self.rows.len(), self.cols);
        debug!("block system: {nr} x {nc} over Z/{modulus}");
        let trip = self
            .rows
            .into_iter()
            .enumerate()
            .flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v)));
        let a = IntMatrix::from_triplets(nr, nc, trip);
        solve_particular(&a, &[self.rhs], Ring::Modular(modulus))?
            .pop()
            .flatten()
            .ok_or_else(|| Error::no_solution(Some(modulus)))
    }
}
