use std::sync::Arc;

use crate::algebra::{CycloNumber, FiniteGroup, PhaseValue};
use crate::cochains::{evaluate, torus_fundamental_cycle, Cochain};
use crate::error::{Error, Result};
use crate::groupoids::commuting_tuples;

/// `⟨θ, [T^n]_φ⟩` for a commuting tuple `φ`.
pub fn torus_holonomy(theta: &Cochain, tuple: &[usize]) -> Result<PhaseValue> {
    evaluate(theta, &torus_fundamental_cycle(theta.group(), tuple)?)
}

/// `Z_θ(T^n) = (1/|G|) Σ_φ exp(2πi ⟨θ, [T^n]_φ⟩)` over commuting `n`-tuples,
/// kept as an exact cyclotomic sum.
pub fn dw_partition_torus(theta: &Cochain) -> Result<CycloNumber> {
    theta.ensure_cocycle()?;
    let g = theta.group();
    let m = theta.modulus();
    let mut counts = vec![0i64; m as usize];
    for t in commuting_tuples(g, theta.degree()) {
        counts[torus_holonomy(theta, &t)?.numerator() as usize] += 1;
    }
    Ok(CycloNumber::from_counts(m, counts).div_integer(g.order() as u64))
}

/// The torus partition function as a nonnegative integer.
pub fn dw_torus_count(theta: &Cochain) -> Result<u64> {
    let z = dw_partition_torus(theta)?;
    match z.as_integer() {
        Some(k) if k >= 0 => Ok(k as u64),
        _ => Err(Error::NotACocycle(format!("torus partition function {z} is not a nonnegative integer"))),
    }
}

fn expect_degree(c: &Cochain, n: usize) -> Result<()> {
    if c.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: c.degree(),
        });
    }
    Ok(())
}

/// Number of irreducible `ω`-projective representations, `Z_ω(T^2)`.
pub fn twisted_irrep_count(omega: &Cochain) -> Result<u64> {
    expect_degree(omega, 2)?;
    dw_torus_count(omega)
}

/// Number of simple modules of the twisted Drinfeld double, `Z_θ(T^3)`.
pub fn drinfeld_double_simple_count(theta: &Cochain) -> Result<u64> {
    expect_degree(theta, 3)?;
    dw_torus_count(theta)
}

/// Untwisted count, `|Hom(Z^n, G)| / |G|`.
pub fn untwisted_torus_count(group: &Arc<FiniteGroup>, n: usize) -> Result<u64> {
    dw_torus_count(&Cochain::zero(group.clone(), n, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic, dihedral, symmetric};
    use crate::cochains::catalog_cocycle;
    use serde_json::json;

    #[test]
    fn untwisted_counts() {
        let s3 = Arc::new(symmetric(3).unwrap());
        assert_eq!(untwisted_torus_count(&s3, 1).unwrap(), 1);
        assert_eq!(untwisted_torus_count(&s3, 2).unwrap(), 3);
        assert_eq!(untwisted_torus_count(&s3, 3).unwrap(), 8);
        let d8 = Arc::new(dihedral(8).unwrap());
        assert_eq!(untwisted_torus_count(&d8, 2).unwrap(), 5);
    }

    #[test]
    fn twisted_z2_squared() {
        let w = catalog_cocycle("omega2", &json!({"n": 2, "k": 1})).unwrap();
        assert_eq!(twisted_irrep_count(&w).unwrap(), 1);
        let z = dw_partition_torus(&w).unwrap();
        assert_eq!(z.as_integer(), Some(1));
    }

    #[test]
    fn cyclic_double_is_abelian() {
        for n in 2..=4 {
            for k in 0..n as i64 {
                let w = catalog_cocycle("omega3", &json!({"n": n, "k": k})).unwrap();
                assert_eq!(drinfeld_double_simple_count(&w).unwrap(), (n * n) as u64);
            }
        }
    }

    #[test]
    fn iterated_transgression_is_holonomy() {
        let cases = [
            catalog_cocycle("omega_d8", &json!({"k": 1})).unwrap(),
            catalog_cocycle("omega3", &json!({"n": 4, "k": 3})).unwrap(),
            Cochain::from_fn(Arc::new(symmetric(3).unwrap()), 2, 6, |t| (t[0] * 2 + t[1]) as i64),
        ];
        for w in cases {
            let w = if w.is_cocycle() { w } else { crate::cochains::coboundary(&w) };
            let top = crate::dw::transgress_iterated(&w, w.degree()).unwrap();
            for (x, t) in top.space().tuples().iter().enumerate() {
                assert_eq!(top.value(x, &[]), torus_holonomy(&w, t).unwrap());
            }
        }
    }

    #[test]
    fn degree_checked() {
        let z = Arc::new(cyclic(3).unwrap());
        let c = Cochain::zero(z, 3, 1);
        assert!(matches!(twisted_irrep_count(&c), Err(Error::DegreeMismatch { .. })));
    }
}
