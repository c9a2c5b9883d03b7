//! Exact solutions of `A x = b` over Z or Z/m.
//!
//! Sparse forward elimination on unit pivots, then a dense diagonalization of
//! the remaining block by unimodular row and column operations. The verdict is
//! read off the diagonal, so "no solution" is definitive over the stated ring.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use log::debug;
use num::integer::Integer;

use super::matrix::IntMatrix;
use super::snf::Dense;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Integers,
    Modular(u64),
}

impl Ring {
    fn modulus(self) -> Option<u64> {
        match self {
            Ring::Integers => None,
            Ring::Modular(m) => Some(m),
        }
    }
}

/// One solution plus generators of the solution module of `A x = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub x: Vec<i64>,
    pub kernel: Vec<Vec<i64>>,
}

/// Result of solving several right-hand sides against one matrix.
#[derive(Clone, Debug)]
pub struct MultiSolution {
    pub solutions: Vec<Option<Vec<i64>>>,
    pub kernel: Vec<Vec<i64>>,
}

pub fn solve_linear(a: &IntMatrix, b: &[i64], ring: Ring) -> Result<LinearSolution> {
    let mut multi = solve_linear_multi(a, &[b.to_vec()], ring)?;
    match multi.solutions.pop().flatten() {
        Some(x) => Ok(LinearSolution { x, kernel: multi.kernel }),
        None => Err(Error::no_solution(ring.modulus())),
    }
}

struct Arith {
    m: Option<i128>,
}

impl Arith {
    #[inline]
    fn norm(&self, x: i128) -> Result<i64> {
        match self.m {
            Some(m) => Ok(x.rem_euclid(m) as i64),
            None => i64::try_from(x).map_err(|_| Error::Overflow("linear solve".into())),
        }
    }

    /// Symmetric representative, used to keep Euclid steps shrinking.
    #[inline]
    fn sym(&self, x: i128) -> i128 {
        match self.m {
            Some(m) => {
                let r = x.rem_euclid(m);
                if r > m / 2 {
                    r - m
                } else {
                    r
                }
            }
            None => x,
        }
    }

    fn is_unit(&self, x: i64) -> bool {
        match self.m {
            Some(m) => (x as i128).gcd(&m) == 1,
            None => x.abs() == 1,
        }
    }

    fn inverse(&self, x: i64) -> i64 {
        match self.m {
            Some(m) => {
                let e = (x as i128).rem_euclid(m).extended_gcd(&m);
                debug_assert_eq!(e.gcd, 1);
                e.x.rem_euclid(m) as i64
            }
            None => x.signum(),
        }
    }
}

fn axpy_rows(
    ar: &Arith,
    dst: &[(usize, i64)],
    q: i64,
    src: &[(usize, i64)],
    created: &mut Vec<usize>,
) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let ci = dst.get(i).map_or(usize::MAX, |e| e.0);
        let cj = src.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(dst[i]);
            i += 1;
        } else if cj < ci {
            let v = ar.norm(-(q as i128) * src[j].1 as i128)?;
            if v != 0 {
                out.push((cj, v));
                created.push(cj);
            }
            j += 1;
        } else {
            let v = ar.norm(dst[i].1 as i128 - q as i128 * src[j].1 as i128)?;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

fn get(row: &[(usize, i64)], c: usize) -> i64 {
    row.binary_search_by_key(&c, |e| e.0).map_or(0, |i| row[i].1)
}

/// Solve `A x = b_k` for every right-hand side `b_k` with one elimination.
pub fn solve_linear_multi(a: &IntMatrix, bs: &[Vec<i64>], ring: Ring) -> Result<MultiSolution> {
    solve_impl(a, bs, ring, true)
}

/// Like [`solve_linear_multi`] but skips the kernel, which can be large.
pub fn solve_particular(a: &IntMatrix, bs: &[Vec<i64>], ring: Ring) -> Result<Vec<Option<Vec<i64>>>> {
    Ok(solve_impl(a, bs, ring, false)?.solutions)
}

fn solve_impl(a: &IntMatrix, bs: &[Vec<i64>], ring: Ring, with_kernel: bool) -> Result<MultiSolution> {
    let (nr, nc) = (a.rows(), a.cols());
    let nb = bs.len();
    if bs.iter().any(|b| b.len() != nr) {
        return Err(Error::DegreeMismatch {
            expected: nr,
            found: bs.iter().map(Vec::len).find(|&l| l != nr).unwrap_or(0),
        });
    }
    let ar = Arith {
        m: ring.modulus().map(|m| m as i128),
    };
    let mut rows: Vec<Vec<(usize, i64)>> = Vec::with_capacity(nr);
    for r in 0..nr {
        let mut row = Vec::with_capacity(a.row(r).len());
        for &(c, v) in a.row(r) {
            let v = ar.norm(v as i128)?;
            if v != 0 {
                row.push((c, v));
            }
        }
        rows.push(row);
    }
    let mut rhs: Vec<Vec<i64>> = (0..nr)
        .map(|r| bs.iter().map(|b| ar.norm(b[r] as i128)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].push(r);
        }
    }
    let started = std::time::Instant::now();
    let mut alive = vec![true; nr];
    let mut is_pivot_col = vec![false; nc];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    // Sparsest column first. Counts go stale as rows fill in.
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    loop {
        heap.extend((0..nc).filter(|&c| !is_pivot_col[c]).map(|c| Reverse((col_rows[c].len(), c))));
        let mut progress = false;
        while let Some(Reverse((count, c))) = heap.pop() {
            if is_pivot_col[c] {
                continue;
            }
            col_rows[c].sort_unstable();
            col_rows[c].dedup();
            col_rows[c].retain(|&r| alive[r] && get(&rows[r], c) != 0);
            if col_rows[c].len() > count {
                heap.push(Reverse((col_rows[c].len(), c)));
                continue;
            }
            let pick = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| ar.is_unit(get(&rows[r], c)))
                .min_by_key(|&r| rows[r].len());
            let Some(pr) = pick else { continue };
            progress = true;
            let inv = ar.inverse(get(&rows[pr], c));
            if inv != 1 {
                for e in rows[pr].iter_mut() {
                    e.1 = ar.norm(e.1 as i128 * inv as i128)?;
                }
                for x in rhs[pr].iter_mut() {
                    *x = ar.norm(*x as i128 * inv as i128)?;
                }
            }
            alive[pr] = false;
            let pivot_row = rows[pr].clone();
            let pivot_rhs = rhs[pr].clone();
            let others: Vec<usize> = col_rows[c].iter().copied().filter(|&r| r != pr).collect();
            let mut created = Vec::new();
            for r in others {
                let q = get(&rows[r], c);
                created.clear();
                rows[r] = axpy_rows(&ar, &rows[r], q, &pivot_row, &mut created)?;
                for &k in &created {
                    col_rows[k].push(r);
                }
                for (x, &p) in rhs[r].iter_mut().zip(&pivot_rhs) {
                    *x = ar.norm(*x as i128 - q as i128 * p as i128)?;
                }
            }
            is_pivot_col[c] = true;
            col_rows[c].clear();
            pivots.push((pr, c));
        }
        if !progress {
            break;
        }
    }

    let remaining: Vec<usize> = (0..nc).filter(|&c| !is_pivot_col[c]).collect();
    let mut feasible = vec![true; nb];
    let mut live = Vec::new();
    for r in 0..nr {
        if !alive[r] {
            continue;
        }
        if rows[r].is_empty() {
            for (k, &x) in rhs[r].iter().enumerate() {
                if x != 0 {
                    feasible[k] = false;
                }
            }
        } else {
            live.push(r);
        }
    }
    debug!(
        "solve_linear: {}x{} over {:?}, {} unit pivots in {:?}, dense tail {}x{}",
        nr,
        nc,
        ring,
        pivots.len(),
        started.elapsed(),
        live.len(),
        remaining.len()
    );

    // Dense block on the remaining columns.
    let f = remaining.len();
    let pos: HashMap<usize, usize> = remaining.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut b = Dense::zeros(live.len(), f);
    let mut brhs = Dense::zeros(live.len(), nb);
    for (i, &r) in live.iter().enumerate() {
        for &(c, x) in &rows[r] {
            b.set(i, pos[&c], ar.sym(x as i128));
        }
        for k in 0..nb {
            brhs.set(i, k, rhs[r][k] as i128);
        }
    }
    let mut w = Dense::identity(f);
    let rank = diagonalize(&ar, &mut b, &mut brhs, &mut w)?;

    let mut y_particular: Vec<Option<Vec<i128>>> = Vec::with_capacity(nb);
    for k in 0..nb {
        if !feasible[k] || (rank..live.len()).any(|i| ar.sym(brhs.at(i, k)) != 0) {
            y_particular.push(None);
            continue;
        }
        let mut y = vec![0i128; f];
        let mut ok = true;
        for t in 0..rank {
            match solve_scalar(&ar, b.at(t, t), brhs.at(t, k)) {
                Some(v) => y[t] = v,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        y_particular.push(ok.then_some(y));
    }

    // Kernel generators in the remaining coordinates.
    let mut kernel_y: Vec<Vec<i128>> = Vec::new();
    for t in (0..f).filter(|_| with_kernel) {
        let scale = if t < rank {
            match ar.m {
                Some(m) => {
                    let g = ar.sym(b.at(t, t)).abs().gcd(&m);
                    if g == 1 {
                        continue;
                    }
                    m / g
                }
                None => continue,
            }
        } else {
            1
        };
        let mut y = vec![0i128; f];
        y[t] = scale;
        kernel_y.push(y);
    }

    let lift = |y: &[i128], rhs_k: Option<usize>| -> Result<Vec<i64>> {
        let mut x = vec![0i64; nc];
        for (j, &cj) in remaining.iter().enumerate() {
            let mut s: i128 = 0;
            for (i, &yi) in y.iter().enumerate() {
                if yi != 0 {
                    let wij = w.at(j, i);
                    if wij != 0 {
                        s = wij
                            .checked_mul(yi)
                            .and_then(|p| s.checked_add(p))
                            .ok_or_else(|| Error::Overflow("linear solve".into()))?;
                    }
                }
            }
            x[cj] = ar.norm(s)?;
        }
        for &(r, c) in pivots.iter().rev() {
            let mut s: i128 = rhs_k.map_or(0, |k| rhs[r][k] as i128);
            for &(k, v) in &rows[r] {
                if k != c {
                    s -= v as i128 * x[k] as i128;
                }
            }
            x[c] = ar.norm(s)?;
        }
        Ok(x)
    };

    let mut solutions = Vec::with_capacity(nb);
    for (k, y) in y_particular.iter().enumerate() {
        match y {
            Some(y) => {
                let x = lift(y, Some(k))?;
                let check = a.mul_vec(&x);
                let ok = check
                    .iter()
                    .zip(&bs[k])
                    .all(|(&l, &r)| ar.norm(l as i128 - r as i128) == Ok(0));
                if !ok {
                    return Err(Error::Overflow("linear solve verification failed".into()));
                }
                solutions.push(Some(x));
            }
            None => solutions.push(None),
        }
    }
    let kernel = kernel_y.iter().map(|y| lift(y, None)).collect::<Result<Vec<_>>>()?;
    Ok(MultiSolution { solutions, kernel })
}

/// Solve `p y = r` in the ring; `None` if impossible.
fn solve_scalar(ar: &Arith, p: i128, r: i128) -> Option<i128> {
    match ar.m {
        None => (r % p == 0).then(|| r / p),
        Some(m) => {
            let p = p.rem_euclid(m);
            let r = r.rem_euclid(m);
            let g = p.gcd(&m);
            if r % g != 0 {
                return None;
            }
            let mg = m / g;
            if mg == 1 {
                return Some(0);
            }
            let e = (p / g).extended_gcd(&mg);
            Some(((r / g) * e.x).rem_euclid(mg))
        }
    }
}

/// Diagonalize `b` in place with unimodular row operations (mirrored on
/// `rhs`) and column operations (accumulated in `w`). Returns the number of
/// nonzero diagonal entries; they occupy `(t, t)` for `t < rank`.
fn diagonalize(ar: &Arith, b: &mut Dense, rhs: &mut Dense, w: &mut Dense) -> Result<usize> {
    let n = b.rows.min(b.cols);
    let ovf = || Error::Overflow("linear solve".into());
    let row_op = |m: &mut Dense, dst: usize, src: usize, q: i128| -> Result<()> {
        for c in 0..m.cols {
            let s = m.at(src, c);
            if s != 0 {
                let v = q.checked_mul(s).and_then(|p| m.at(dst, c).checked_sub(p)).ok_or_else(ovf)?;
                m.set(dst, c, ar.sym(v));
            }
        }
        Ok(())
    };
    let col_op = |m: &mut Dense, dst: usize, src: usize, q: i128| -> Result<()> {
        for r in 0..m.rows {
            let s = m.at(r, src);
            if s != 0 {
                let v = q.checked_mul(s).and_then(|p| m.at(r, dst).checked_sub(p)).ok_or_else(ovf)?;
                m.set(r, dst, ar.sym(v));
            }
        }
        Ok(())
    };
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, i128)> = None;
            'scan: for r in t..b.rows {
                for c in t..b.cols {
                    let x = b.at(r, c).abs();
                    if x != 0 && best.is_none_or(|bb| x < bb.2) {
                        best = Some((r, c, x));
                        if x == 1 {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((pr, pc, _)) = best else {
                return Ok(t);
            };
            if pr != t {
                for c in 0..b.cols {
                    b.data.swap(pr * b.cols + c, t * b.cols + c);
                }
                for c in 0..rhs.cols {
                    rhs.data.swap(pr * rhs.cols + c, t * rhs.cols + c);
                }
            }
            if pc != t {
                for r in 0..b.rows {
                    b.data.swap(r * b.cols + pc, r * b.cols + t);
                }
                for r in 0..w.rows {
                    w.data.swap(r * w.cols + pc, r * w.cols + t);
                }
            }
            let p = b.at(t, t);
            let mut clean = true;
            for r in t + 1..b.rows {
                let x = b.at(r, t);
                if x != 0 {
                    let q = x / p;
                    row_op(b, r, t, q)?;
                    row_op(rhs, r, t, q)?;
                    clean &= b.at(r, t) == 0;
                }
            }
            for c in t + 1..b.cols {
                let x = b.at(t, c);
                if x != 0 {
                    let q = x / p;
                    col_op(b, c, t, q)?;
                    col_op(w, c, t, q)?;
                    clean &= b.at(t, c) == 0;
                }
            }
            if clean {
                break;
            }
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let a = IntMatrix::identity(3);
        let s = solve_linear(&a, &[4, -2, 7], Ring::Integers).unwrap();
        assert_eq!(s.x, vec![4, -2, 7]);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn two_x_equals_two_mod_four() {
        let a = IntMatrix::from_dense(&[vec![2]]);
        let s = solve_linear(&a, &[2], Ring::Modular(4)).unwrap();
        assert_eq!(s.x, vec![1]);
        assert_eq!(s.kernel, vec![vec![2]]);
    }

    #[test]
    fn two_x_equals_one_mod_four() {
        let a = IntMatrix::from_dense(&[vec![2]]);
        let err = solve_linear(&a, &[1], Ring::Modular(4)).unwrap_err();
        assert!(err.is_no_solution());
    }

    #[test]
    fn integer_no_solution_by_divisibility() {
        let a = IntMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert!(solve_linear(&a, &[1, 0], Ring::Integers).is_err());
        let s = solve_linear(&a, &[2, 6], Ring::Integers).unwrap();
        assert_eq!(a.mul_vec(&s.x), vec![2, 6]);
    }

    #[test]
    fn integer_kernel() {
        let a = IntMatrix::from_dense(&[vec![1, 1, 1]]);
        let s = solve_linear(&a, &[3], Ring::Integers).unwrap();
        assert_eq!(a.mul_vec(&s.x), vec![3]);
        assert_eq!(s.kernel.len(), 2);
        for k in &s.kernel {
            assert_eq!(a.mul_vec(k), vec![0]);
        }
    }

    #[test]
    fn zero_row_inconsistency() {
        let a = IntMatrix::from_dense(&[vec![1, 0], vec![1, 0]]);
        assert!(solve_linear(&a, &[1, 2], Ring::Modular(5)).is_err());
    }
}
