use std::sync::Arc;

use log::info;
use num::integer::Integer;

use super::cochain::{coboundary_matrix, BarIndex, Cochain};
use crate::algebra::{smith_columns, FiniteGroup};
use crate::error::{Error, Result};

/// Default cap on the nonzero entries of the bar matrices a cohomology
/// computation touches.
pub const DEFAULT_BUDGET: usize = 1 << 22;

/// `H^n(G; U(1))` with explicit generators and a class map.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    group: Arc<FiniteGroup>,
    degree: usize,
    factors: Vec<u64>,
    generators: Vec<Cochain>,
    /// Rows of `V^{-1}` for the torsion columns, paired with the factors.
    class_rows: Vec<Vec<i64>>,
}

/// Nonzero entries of `δ_n` and `δ_{n+1}` on normalized cochains.
pub fn bar_work_estimate(order: usize, n: usize) -> (usize, usize, usize) {
    let b = order.saturating_sub(1);
    let rows = b.saturating_pow(n as u32 + 1);
    let cols = b.saturating_pow(n as u32);
    let nnz = rows
        .saturating_mul(n + 2)
        .saturating_add(b.saturating_pow(n as u32 + 2).saturating_mul(n + 3));
    (rows, cols, nnz)
}

/// `H^n(G;U(1))` under the default budget.
pub fn cohomology(group: &Arc<FiniteGroup>, n: usize) -> Result<CohomologyGroup> {
    cohomology_with_budget(group, n, Some(DEFAULT_BUDGET))
}

/// `H^n(G;U(1)) ≅ H^{n+1}(G;Z)`, read off the torsion of `coker δ_n` over Z.
/// `budget: None` lifts the size limit.
pub fn cohomology_with_budget(group: &Arc<FiniteGroup>, n: usize, budget: Option<usize>) -> Result<CohomologyGroup> {
    if n == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let (rows, cols, nnz) = bar_work_estimate(group.order(), n);
    if let Some(b) = budget {
        if nnz > b {
            return Err(Error::BudgetExceeded {
                what: format!("H^{n}({})", group.label()),
                rows,
                cols,
                nnz,
                budget: b,
            });
        }
    }
    let delta = coboundary_matrix(group, n);
    let snf = smith_columns(&delta)?;
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    let mut class_rows = Vec::new();
    for (c, d) in snf.torsion() {
        let d = d as u64;
        let v = snf.v_column(c);
        let nums: Vec<i64> = v.iter().map(|&x| x.rem_euclid(d as i64)).collect();
        let gen = Cochain::from_numerators(group.clone(), n, d, &nums);
        gen.ensure_cocycle()?;
        factors.push(d);
        generators.push(gen);
        class_rows.push(snf.v_inv_row(c).to_vec());
    }
    info!("H^{n}({}) = {:?}", group.label(), factors);
    Ok(CohomologyGroup {
        group: group.clone(),
        degree: n,
        factors,
        generators,
        class_rows,
    })
}

impl CohomologyGroup {
    /// Reassemble from stored parts; everything is re-verified.
    pub fn from_parts(
        group: Arc<FiniteGroup>,
        degree: usize,
        factors: Vec<u64>,
        generators: Vec<Cochain>,
        class_rows: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let len = BarIndex::new(&group).len(degree);
        if generators.len() != factors.len()
            || class_rows.len() != factors.len()
            || class_rows.iter().any(|r| r.len() != len)
        {
            return Err(Error::Format("inconsistent cohomology record".into()));
        }
        let h = CohomologyGroup {
            group,
            degree,
            factors,
            generators,
            class_rows,
        };
        h.verify()?;
        Ok(h)
    }

    /// Each generator is a cocycle of exactly its stated order and `classify`
    /// sends it to the matching unit vector.
    pub fn verify(&self) -> Result<()> {
        for (i, (g, &d)) in self.generators.iter().zip(&self.factors).enumerate() {
            if *g.group() != self.group || g.degree() != self.degree {
                return Err(Error::GroupMismatch("generator on the wrong group".into()));
            }
            g.ensure_cocycle()?;
            if !g.scale(d as i64).is_zero() {
                return Err(Error::NotACocycle(format!("generator {i} does not have order {d}")));
            }
            let mut e = vec![0; self.factors.len()];
            e[i] = 1;
            if self.classify(g)? != e {
                return Err(Error::NotACocycle(format!("generator {i} misclassified")));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than 1.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn generators(&self) -> &[Cochain] {
        &self.generators
    }

    /// Integer functionals on cocycle numerators behind [`Self::classify`].
    pub fn class_rows(&self) -> &[Vec<i64>] {
        &self.class_rows
    }

    /// Coordinates of `[c]` with respect to the generators, each reduced mod
    /// its invariant factor.
    pub fn classify(&self, c: &Cochain) -> Result<Vec<u64>> {
        if *c.group() != self.group || c.degree() != self.degree {
            return Err(Error::GroupMismatch("classify: cochain lives elsewhere".into()));
        }
        c.ensure_cocycle()?;
        let m = c.modulus() as i128;
        let x = c.numerators();
        self.factors
            .iter()
            .zip(&self.class_rows)
            .map(|(&d, row)| {
                let s = row
                    .iter()
                    .zip(x)
                    .fold(0i128, |acc, (&a, &b)| (acc + a as i128 * b as i128).rem_euclid(m));
                let t = d as i128 * s;
                if t % m != 0 {
                    return Err(Error::NotACocycle("class map hit a non-integral Bockstein".into()));
                }
                Ok(((t / m).rem_euclid(d as i128)) as u64)
            })
            .collect()
    }

    pub fn is_trivial_class(&self, c: &Cochain) -> Result<bool> {
        Ok(self.classify(c)?.iter().all(|&k| k == 0))
    }

    /// `Σ k_i g_i` as a cochain over the lcm of the factors.
    pub fn representative(&self, coeffs: &[u64]) -> Cochain {
        let m = self.factors.iter().fold(1u64, |a, &b| a.lcm(&b));
        let mut out = Cochain::zero(self.group.clone(), self.degree, m);
        for (g, &k) in self.generators.iter().zip(coeffs) {
            out = out.add(&g.scale(k as i64)).expect("same group");
        }
        out
    }

    /// Every coefficient vector, in lexicographic order.
    pub fn all_classes(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

/// True when `c` is a coboundary, decided through the class map.
pub fn is_cohomologous_to_zero(c: &Cochain) -> Result<bool> {
    let h = cohomology_with_budget(c.group(), c.degree(), None)?;
    h.is_trivial_class(c)
}
