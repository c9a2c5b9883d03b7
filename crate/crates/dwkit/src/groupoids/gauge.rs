use std::collections::HashMap;
use std::sync::Arc;

use num::rational::Ratio;

use super::groupoid::{cardinality, FinGroupoid, Functor};
use crate::algebra::{FiniteGroup, GroupHom};
use crate::error::{Error, Result};

/// Largest `|G|^n` for which commuting tuples are enumerated.
pub const GAUGE_TUPLE_BUDGET: usize = 1_000_000;

/// `Bun_G(T^n)`: commuting `n`-tuples, with `k: x -> x·k = k^{-1} x k`.
#[derive(Clone, Debug)]
pub struct GaugeGroupoid {
    group: Arc<FiniteGroup>,
    dim: usize,
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    groupoid: Arc<FinGroupoid>,
}

/// Commuting `n`-tuples in lexicographic order.
pub fn commuting_tuples(group: &FiniteGroup, n: usize) -> Vec<Vec<usize>> {
    fn rec(g: &FiniteGroup, n: usize, cur: &mut Vec<usize>, allowed: &[usize], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for &x in allowed {
            let next: Vec<usize> = allowed.iter().copied().filter(|&y| g.commutes(x, y)).collect();
            cur.push(x);
            rec(g, n, cur, &next, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..group.order()).collect();
    rec(group, n, &mut Vec::with_capacity(n), &all, &mut out);
    out
}

pub fn gauge_groupoid(group: &Arc<FiniteGroup>, n: usize) -> Result<GaugeGroupoid> {
    let size = group.order().checked_pow(n as u32).unwrap_or(usize::MAX);
    if size > GAUGE_TUPLE_BUDGET {
        return Err(Error::BudgetExceeded {
            what: format!("Bun_{}(T^{n})", group.label()),
            rows: size,
            cols: group.order(),
            nnz: size,
            budget: GAUGE_TUPLE_BUDGET,
        });
    }
    let tuples = commuting_tuples(group, n);
    let index: HashMap<Vec<usize>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let labels = tuples
        .iter()
        .map(|t| t.iter().map(|&x| group.element_label(x)).collect::<Vec<_>>().join(" "))
        .collect();
    let g = group.clone();
    let groupoid = FinGroupoid::action(group.clone(), labels, |x, k| {
        let moved: Vec<usize> = tuples[x].iter().map(|&y| g.conj(g.inv(k), y)).collect();
        index[&moved]
    })?;
    Ok(GaugeGroupoid {
        group: group.clone(),
        dim: n,
        tuples,
        index,
        groupoid: Arc::new(groupoid),
    })
}

impl GaugeGroupoid {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn tuple(&self, x: usize) -> &[usize] {
        &self.tuples[x]
    }

    pub fn index_of(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn groupoid(&self) -> &Arc<FinGroupoid> {
        &self.groupoid
    }

    /// `x·k`.
    pub fn act(&self, x: usize, k: usize) -> usize {
        self.groupoid.target(self.morphism(x, k))
    }

    /// Morphism id of `k: x -> x·k`.
    pub fn morphism(&self, x: usize, k: usize) -> usize {
        x * self.group.order() + k
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        self.group.joint_centralizer(&self.tuples[x])
    }

    pub fn cardinality(&self) -> Ratio<i64> {
        cardinality(&self.groupoid)
    }

    /// Representatives of the conjugacy classes of tuples.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        self.groupoid.components().into_iter().map(|c| c[0]).collect()
    }
}

/// The functor `Bun_Ĝ(T^n) -> Bun_G(T^n)` induced by a homomorphism.
pub fn gauge_functor(hom: &GroupHom, source: &GaugeGroupoid, target: &GaugeGroupoid) -> Result<Functor> {
    if **hom.source() != *source.group || **hom.target() != *target.group || source.dim != target.dim {
        return Err(Error::GroupMismatch("gauge_functor: groups or dimensions differ".into()));
    }
    let objects: Vec<usize> = source
        .tuples
        .iter()
        .map(|t| {
            let img: Vec<usize> = t.iter().map(|&x| hom.apply(x)).collect();
            target.index[&img]
        })
        .collect();
    let k = source.group.order();
    let morphisms = (0..source.groupoid.morphism_count())
        .map(|m| target.morphism(objects[m / k], hom.apply(m % k)))
        .collect();
    Functor::new(source.groupoid.clone(), target.groupoid.clone(), objects, morphisms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic, symmetric};

    #[test]
    fn abelian_counts() {
        let z4 = Arc::new(cyclic(4).unwrap());
        for n in 1..=3 {
            let b = gauge_groupoid(&z4, n).unwrap();
            assert_eq!(b.tuples().len(), 4usize.pow(n as u32));
            assert_eq!(b.cardinality(), Ratio::from_integer(4i64.pow(n as u32 - 1)));
        }
    }

    #[test]
    fn symmetric_three() {
        let s3 = Arc::new(symmetric(3).unwrap());
        assert_eq!(gauge_groupoid(&s3, 1).unwrap().cardinality(), Ratio::from_integer(1));
        let b2 = gauge_groupoid(&s3, 2).unwrap();
        assert_eq!(b2.tuples().len(), 18);
        assert_eq!(b2.cardinality(), Ratio::from_integer(3));
        let b3 = gauge_groupoid(&s3, 3).unwrap();
        assert_eq!(b3.tuples().len(), 48);
        assert_eq!(b3.cardinality(), Ratio::from_integer(8));
    }

    #[test]
    fn budget() {
        let z16 = Arc::new(cyclic(16).unwrap());
        assert!(matches!(gauge_groupoid(&z16, 5), Err(Error::BudgetExceeded { .. })));
    }
}
