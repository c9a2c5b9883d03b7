//! Smith normal form over Z.
//!
//! Two entry points: a dense routine that tracks both transforms, and a
//! sparse routine for tall coboundary matrices that tracks only the column
//! transform and its inverse. The sparse routine eliminates unit pivots first
//! and hands the small remaining block to the dense routine.

use log::debug;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `U * A * V = D` with `D` diagonal, `d_i | d_{i+1}`, `d_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

/// Row-major dense matrix used internally.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Dense::zeros(n, n);
        for i in 0..n {
            d.data[i * n + i] = 1;
        }
        d
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, q: i128) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c];
            if s != 0 {
                let d = &mut self.data[dst * self.cols + c];
                *d = checked_axpy(*d, q, s)?;
            }
        }
        Ok(())
    }

    /// `col[dst] += q * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, q: i128) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for r in 0..self.rows {
            let s = self.data[r * self.cols + src];
            if s != 0 {
                let d = &mut self.data[r * self.cols + dst];
                *d = checked_axpy(*d, q, s)?;
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self.data[r * self.cols + c] = -self.data[r * self.cols + c];
        }
    }
}

#[inline]
fn checked_axpy(d: i128, q: i128, s: i128) -> Result<i128> {
    q.checked_mul(s)
        .and_then(|p| d.checked_add(p))
        .ok_or_else(|| Error::Overflow("Smith normal form".into()))
}

/// Transforms tracked by [`dense_smith`].
pub(crate) struct Tracking<'a> {
    pub u: Option<&'a mut Dense>,
    pub v: Option<&'a mut Dense>,
    pub v_inv: Option<&'a mut Dense>,
}

/// In-place Smith normal form of `a`; returns the diagonal (length `min(rows, cols)`).
pub(crate) fn dense_smith(a: &mut Dense, mut tr: Tracking<'_>) -> Result<Vec<i128>> {
    let n = a.rows.min(a.cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize, i128)> = None;
            for r in t..a.rows {
                for c in t..a.cols {
                    let x = a.at(r, c).abs();
                    if x != 0 && best.is_none_or(|b| x < b.2) {
                        best = Some((r, c, x));
                        if x == 1 {
                            break;
                        }
                    }
                }
                if best.is_some_and(|b| b.2 == 1) {
                    break;
                }
            }
            let Some((pr, pc, _)) = best else {
                diag.resize(n, 0);
                return Ok(diag);
            };
            a.swap_rows(t, pr);
            if let Some(u) = tr.u.as_deref_mut() {
                u.swap_rows(t, pr);
            }
            a.swap_cols(t, pc);
            if let Some(v) = tr.v.as_deref_mut() {
                v.swap_cols(t, pc);
            }
            if let Some(vi) = tr.v_inv.as_deref_mut() {
                vi.swap_rows(t, pc);
            }
            let p = a.at(t, t);
            let mut clean = true;
            for r in t + 1..a.rows {
                let x = a.at(r, t);
                if x != 0 {
                    let q = x / p;
                    a.add_row(r, t, -q)?;
                    if let Some(u) = tr.u.as_deref_mut() {
                        u.add_row(r, t, -q)?;
                    }
                    clean &= a.at(r, t) == 0;
                }
            }
            for c in t + 1..a.cols {
                let x = a.at(t, c);
                if x != 0 {
                    let q = x / p;
                    a.add_col(c, t, -q)?;
                    if let Some(v) = tr.v.as_deref_mut() {
                        v.add_col(c, t, -q)?;
                    }
                    if let Some(vi) = tr.v_inv.as_deref_mut() {
                        vi.add_row(t, c, q)?;
                    }
                    clean &= a.at(t, c) == 0;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and redo.
            let offending = (t + 1..a.rows).find(|&r| (t + 1..a.cols).any(|c| a.at(r, c) % p != 0));
            if let Some(r) = offending {
                a.add_row(t, r, 1)?;
                if let Some(u) = tr.u.as_deref_mut() {
                    u.add_row(t, r, 1)?;
                }
                continue;
            }
            if p < 0 {
                a.negate_row(t);
                if let Some(u) = tr.u.as_deref_mut() {
                    u.negate_row(t);
                }
            }
            diag.push(a.at(t, t));
            break;
        }
    }
    Ok(diag)
}

fn to_i64_rows(d: &Dense) -> Result<Vec<Vec<i64>>> {
    (0..d.rows)
        .map(|r| {
            (0..d.cols)
                .map(|c| i64::try_from(d.at(r, c)).map_err(|_| Error::Overflow("Smith transform entry".into())))
                .collect()
        })
        .collect()
}

/// Smith normal form with both unimodular transforms. Entries are read over
/// Z even if the matrix carries a modulus.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithForm> {
    let mut d = Dense::zeros(a.rows(), a.cols());
    for r in 0..a.rows() {
        for &(c, v) in a.row(r) {
            d.set(r, c, v as i128);
        }
    }
    let mut u = Dense::identity(a.rows());
    let mut v = Dense::identity(a.cols());
    let diag = dense_smith(
        &mut d,
        Tracking {
            u: Some(&mut u),
            v: Some(&mut v),
            v_inv: None,
        },
    )?;
    Ok(SmithForm {
        diagonal: diag
            .into_iter()
            .map(|x| i64::try_from(x).map_err(|_| Error::Overflow("invariant factor".into())))
            .collect::<Result<_>>()?,
        u: to_i64_rows(&u)?,
        v: to_i64_rows(&v)?,
    })
}

/// Column-transform Smith data for a tall sparse matrix `A` (rows x cols):
/// there is a unimodular `U` (not stored) with `U A V = D`.
pub struct ColumnSmith {
    pub cols: usize,
    /// `(column of V, invariant factor)` for every nonzero diagonal entry,
    /// ordered so that the factors form a divisibility chain.
    pub factors: Vec<(usize, i64)>,
    /// Column-major `V`.
    v: Vec<i64>,
    /// Row-major `V^{-1}`.
    v_inv: Vec<i64>,
}

impl ColumnSmith {
    pub fn v_column(&self, c: usize) -> &[i64] {
        &self.v[c * self.cols..(c + 1) * self.cols]
    }

    pub fn v_inv_row(&self, c: usize) -> &[i64] {
        &self.v_inv[c * self.cols..(c + 1) * self.cols]
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn torsion(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.factors.iter().copied().filter(|&(_, d)| d > 1)
    }
}

fn sparse_get(row: &[(usize, i64)], c: usize) -> i64 {
    row.binary_search_by_key(&c, |e| e.0).map_or(0, |i| row[i].1)
}

/// `dst - q * src` for sorted sparse rows; reports newly created columns.
fn sparse_axpy(dst: &[(usize, i64)], q: i64, src: &[(usize, i64)], created: &mut Vec<usize>) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    let sub = |a: i64, b: i64| -> Result<i64> {
        q.checked_mul(b)
            .and_then(|p| a.checked_sub(p))
            .ok_or_else(|| Error::Overflow("sparse elimination".into()))
    };
    while i < dst.len() || j < src.len() {
        let ci = dst.get(i).map_or(usize::MAX, |e| e.0);
        let cj = src.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(dst[i]);
            i += 1;
        } else if cj < ci {
            let v = sub(0, src[j].1)?;
            if v != 0 {
                out.push((cj, v));
                created.push(cj);
            }
            j += 1;
        } else {
            let v = sub(dst[i].1, src[j].1)?;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// Smith data of a sparse integer matrix tracking only `V` and `V^{-1}`.
pub fn smith_columns(a: &IntMatrix) -> Result<ColumnSmith> {
    let (nr, nc) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<(usize, i64)>> = (0..nr).map(|r| a.row(r).to_vec()).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].push(r);
        }
    }
    let mut alive = vec![true; nr];
    let mut done = vec![false; nc];
    let mut v = vec![0i64; nc * nc];
    let mut v_inv = vec![0i64; nc * nc];
    for i in 0..nc {
        v[i * nc + i] = 1;
        v_inv[i * nc + i] = 1;
    }
    let mut factors = Vec::new();
    let mut order: Vec<usize> = (0..nc).collect();
    order.sort_by_key(|&c| col_rows[c].len());
    let overflow = || Error::Overflow("Smith transform".into());

    loop {
        let mut progress = false;
        for &c in &order {
            if done[c] {
                continue;
            }
            col_rows[c].retain(|&r| alive[r] && sparse_get(&rows[r], c) != 0);
            let pick = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| sparse_get(&rows[r], c).abs() == 1)
                .min_by_key(|&r| rows[r].len());
            let Some(pr) = pick else { continue };
            progress = true;
            let s = sparse_get(&rows[pr], c);
            let pivot_row = std::mem::take(&mut rows[pr]);
            alive[pr] = false;
            let others: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != pr).collect();
            let mut created = Vec::new();
            for r in others {
                let x = sparse_get(&rows[r], c);
                created.clear();
                rows[r] = sparse_axpy(&rows[r], x * s, &pivot_row, &mut created)?;
                for &k in &created {
                    col_rows[k].push(r);
                }
            }
            // Clear the pivot row with column operations col_k -= t col_c.
            for &(k, x) in &pivot_row {
                if k == c {
                    continue;
                }
                let t = x * s;
                let (src, dst) = (c * nc, k * nc);
                for i in 0..nc {
                    let sv = v[src + i];
                    if sv != 0 {
                        v[dst + i] = t.checked_mul(sv).and_then(|p| v[dst + i].checked_sub(p)).ok_or_else(overflow)?;
                    }
                }
                for i in 0..nc {
                    let sv = v_inv[dst + i];
                    if sv != 0 {
                        v_inv[src + i] = t.checked_mul(sv).and_then(|p| v_inv[src + i].checked_add(p)).ok_or_else(overflow)?;
                    }
                }
            }
            done[c] = true;
            col_rows[c].clear();
            factors.push((c, 1i64));
        }
        if !progress {
            break;
        }
    }

    let remaining: Vec<usize> = (0..nc).filter(|&c| !done[c]).collect();
    let live: Vec<usize> = (0..nr).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
    debug!(
        "smith_columns: {}x{} matrix, {} unit pivots, dense tail {}x{}",
        nr,
        nc,
        factors.len(),
        live.len(),
        remaining.len()
    );
    if !remaining.is_empty() && !live.is_empty() {
        let pos: std::collections::HashMap<usize, usize> = remaining.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut b = Dense::zeros(live.len(), remaining.len());
        for (i, &r) in live.iter().enumerate() {
            for &(c, x) in &rows[r] {
                b.set(i, pos[&c], x as i128);
            }
        }
        let f = remaining.len();
        let mut w = Dense::identity(f);
        let mut w_inv = Dense::identity(f);
        let diag = dense_smith(
            &mut b,
            Tracking {
                u: None,
                v: Some(&mut w),
                v_inv: Some(&mut w_inv),
            },
        )?;
        // V[:, R] <- V[:, R] W and V^{-1}[R, :] <- W^{-1} V^{-1}[R, :].
        let old_v: Vec<Vec<i64>> = remaining.iter().map(|&c| v[c * nc..(c + 1) * nc].to_vec()).collect();
        let old_vi: Vec<Vec<i64>> = remaining.iter().map(|&c| v_inv[c * nc..(c + 1) * nc].to_vec()).collect();
        for (j, &cj) in remaining.iter().enumerate() {
            let mut col = vec![0i128; nc];
            let mut row = vec![0i128; nc];
            for i in 0..f {
                let wij = w.at(i, j);
                if wij != 0 {
                    for (x, &o) in col.iter_mut().zip(&old_v[i]) {
                        *x = checked_axpy(*x, wij, o as i128)?;
                    }
                }
                let wji = w_inv.at(j, i);
                if wji != 0 {
                    for (x, &o) in row.iter_mut().zip(&old_vi[i]) {
                        *x = checked_axpy(*x, wji, o as i128)?;
                    }
                }
            }
            for i in 0..nc {
                v[cj * nc + i] = i64::try_from(col[i]).map_err(|_| overflow())?;
                v_inv[cj * nc + i] = i64::try_from(row[i]).map_err(|_| overflow())?;
            }
        }
        for (j, &d) in diag.iter().enumerate() {
            if d != 0 {
                factors.push((remaining[j], i64::try_from(d).map_err(|_| overflow())?));
            }
        }
    }
    Ok(ColumnSmith {
        cols: nc,
        factors,
        v,
        v_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let k = b.len();
        a.iter()
            .map(|row| (0..b[0].len()).map(|j| (0..k).map(|i| row[i] * b[i][j]).sum()).collect())
            .collect()
    }

    fn check(a: Vec<Vec<i64>>, expected: &[i64]) {
        let m = IntMatrix::from_dense(&a);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, expected);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(x, want, "U A V mismatch at ({i},{j})");
            }
        }
    }

    #[test]
    fn identity_factors() {
        check(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[1, 1, 1]);
    }

    #[test]
    fn diag_with_zero() {
        check(vec![vec![2, 0], vec![0, 0]], &[2, 0]);
    }

    #[test]
    fn two_by_two_example() {
        check(vec![vec![2, 4], vec![6, 8]], &[2, 4]);
    }

    #[test]
    fn divisibility_fixup() {
        check(vec![vec![2, 0], vec![0, 3]], &[1, 6]);
    }

    #[test]
    fn column_smith_matches_dense() {
        let a = vec![vec![1, 2, 0], vec![0, 2, 4], vec![3, 0, 6], vec![1, 1, 1]];
        let m = IntMatrix::from_dense(&a);
        let cs = smith_columns(&m).unwrap();
        let mut f: Vec<i64> = cs.factors.iter().map(|x| x.1).collect();
        f.sort();
        let mut g: Vec<i64> = smith_normal_form(&m).unwrap().diagonal.into_iter().filter(|&x| x != 0).collect();
        g.sort();
        assert_eq!(f, g);
        // V V^{-1} = I
        for i in 0..3 {
            for j in 0..3 {
                let s: i64 = (0..3).map(|k| cs.v_column(k)[i] * cs.v_inv_row(k)[j]).sum();
                assert_eq!(s, (i == j) as i64);
            }
        }
    }
}
