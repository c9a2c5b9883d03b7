/// Sparse integer matrix in compressed row form, optionally over `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    modulus: Option<u64>,
    /// Per row: sorted `(column, value)` pairs with nonzero values.
    data: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            modulus: None,
            data: vec![Vec::new(); rows],
        }
    }

    /// Build from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut data: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of bounds");
            data[r].push((c, v));
        }
        let mut m = IntMatrix {
            rows,
            cols,
            modulus: None,
            data,
        };
        m.normalize_rows();
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        IntMatrix::from_triplets(
            rows.len(),
            cols,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v))),
        )
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, 1)))
    }

    /// Same entries read over `Z/m`, reduced into `[0, m)`.
    pub fn over_modulus(mut self, m: u64) -> Self {
        assert!(m > 0);
        self.modulus = Some(m);
        self.normalize_rows();
        self
    }

    fn normalize_rows(&mut self) {
        let m = self.modulus;
        for row in &mut self.data {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            if let Some(m) = m {
                merged.iter_mut().for_each(|e| e.1 = e.1.rem_euclid(m as i64));
            }
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r]
            .binary_search_by_key(&c, |e| e.0)
            .map_or(0, |i| self.data[r][i].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                out[r][c] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let t = IntMatrix::from_triplets(
            self.cols,
            self.rows,
            self.data
                .iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (c, r, v))),
        );
        IntMatrix { modulus: self.modulus, ..t }
    }

    /// `A x`, reduced when the matrix carries a modulus.
    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let s: i128 = row.iter().map(|&(c, v)| v as i128 * x[c] as i128).sum();
                match self.modulus {
                    Some(m) => s.rem_euclid(m as i128) as i64,
                    None => i64::try_from(s).expect("matrix-vector product overflows i64"),
                }
            })
            .collect()
    }

    pub fn push_row(&mut self, entries: Vec<(usize, i64)>) {
        self.data.push(entries);
        self.rows += 1;
        let last = self.data.len() - 1;
        let m = self.modulus;
        let row = &mut self.data[last];
        row.sort_unstable_by_key(|e| e.0);
        if let Some(m) = m {
            row.iter_mut().for_each(|e| e.1 = e.1.rem_euclid(m as i64));
        }
        row.retain(|e| e.1 != 0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let m = IntMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 0, -1), (1, 1, 3), (1, 0, 2)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.to_dense(), vec![vec![0, 0], vec![2, 3]]);
    }

    #[test]
    fn modular_reduction() {
        let m = IntMatrix::from_dense(&[vec![5, -1], vec![4, 2]]).over_modulus(4);
        assert_eq!(m.to_dense(), vec![vec![1, 3], vec![0, 2]]);
        assert_eq!(m.mul_vec(&[1, 1]), vec![0, 2]);
    }
}
