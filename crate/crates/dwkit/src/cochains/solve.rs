use log::debug;
use num::integer::Integer;

use super::cochain::{coboundary, coboundary_matrix, Cochain};
use crate::algebra::{solve_linear, solve_particular, Ring};
use crate::error::{Error, Result};

/// Default working modulus for a Q/Z system whose data has denominators
/// dividing `m`: `m * |G|`.
pub fn default_working_modulus(m: u64, group_order: usize) -> u64 {
    m * group_order as u64
}

/// Find `x` with `δx = y` in Q/Z.
///
/// The system is solved over Z/M with `M = working_modulus`, or
/// `lcm(denominators of y) * |G|` when `None`; a supplied modulus is raised
/// to a multiple of the denominators if necessary.
pub fn solve_coboundary(y: &Cochain, working_modulus: Option<u64>) -> Result<Cochain> {
    let n = y.degree();
    let g = y.group();
    if n == 0 {
        return if y.is_zero() {
            Ok(Cochain::zero(g.clone(), 0, 1))
        } else {
            Err(Error::no_solution(Some(y.modulus())))
        };
    }
    let y = y.reduced();
    let m = y.modulus();
    let big = match working_modulus {
        Some(w) => w.lcm(&m),
        None => default_working_modulus(m, g.order()),
    };
    let yy = y.with_modulus(big).expect("multiple of the denominator");
    let a = coboundary_matrix(g, n - 1);
    let b: Vec<i64> = yy.numerators().iter().map(|&v| v as i64).collect();
    debug!("solve_coboundary: degree {n} on {}, modulus {big}", g.label());
    let sol = solve_particular(&a, &[b], Ring::Modular(big))?;
    let x = sol
        .into_iter()
        .next()
        .flatten()
        .ok_or_else(|| Error::no_solution(Some(big)))?;
    let x = Cochain::from_numerators(g.clone(), n - 1, big, &x);
    debug_assert_eq!(coboundary(&x), yy);
    Ok(x.reduced())
}

/// Integral Bockstein test: a Q/Z-cocycle `y = Y/m` is a coboundary iff
/// `δY/m` is the coboundary of an integral cochain. Solved exactly over Z.
pub fn bockstein_is_coboundary(y: &Cochain) -> Result<bool> {
    y.ensure_cocycle()?;
    let n = y.degree();
    let y = y.reduced();
    let m = y.modulus() as i64;
    let a = coboundary_matrix(y.group(), n);
    let big_y: Vec<i64> = y.numerators().iter().map(|&v| v as i64).collect();
    let dy = a.mul_vec(&big_y);
    let rhs: Vec<i64> = dy
        .iter()
        .map(|&v| {
            debug_assert_eq!(v % m, 0);
            v / m
        })
        .collect();
    match solve_linear(&a, &rhs, Ring::Integers) {
        Ok(_) => Ok(true),
        Err(e) if e.is_no_solution() => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic, product, FiniteGroup};
    use std::sync::Arc;

    fn z2z2() -> Arc<FiniteGroup> {
        Arc::new(product(&[cyclic(2).unwrap(), cyclic(2).unwrap()]).unwrap())
    }

    #[test]
    fn zero_is_a_coboundary() {
        let y = Cochain::zero(z2z2(), 2, 2);
        assert!(solve_coboundary(&y, None).unwrap().is_zero());
    }

    #[test]
    fn coboundaries_are_recognized() {
        let g = z2z2();
        let x0 = Cochain::from_fn(g.clone(), 1, 4, |t| t[0] as i64 + 1);
        let y = coboundary(&x0);
        let x = solve_coboundary(&y, None).unwrap();
        assert_eq!(coboundary(&x), y);
        assert!(bockstein_is_coboundary(&y).unwrap());
    }

    #[test]
    fn antisymmetric_class_is_not_a_coboundary() {
        // (a1, b1), (a2, b2) -> a1 b2 / 2 with index a*2 + b.
        let y = Cochain::from_fn(z2z2(), 2, 2, |t| ((t[0] / 2) * (t[1] % 2)) as i64);
        y.ensure_cocycle().unwrap();
        assert!(solve_coboundary(&y, None).unwrap_err().is_no_solution());
        assert!(!bockstein_is_coboundary(&y).unwrap());
    }

    #[test]
    fn degree_one_needs_zero() {
        let g = Arc::new(cyclic(3).unwrap());
        let y = Cochain::from_fn(g, 1, 3, |t| t[0] as i64);
        assert!(solve_coboundary(&y, None).is_err());
    }
}
