use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Orders up to this bound get an exhaustive associativity check.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 64;
const SAMPLED_TRIPLES: usize = 1000;

/// How a group was built. Used to resolve named cocycle families and to
/// serialize builtins back to their compact form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupShape {
    Table,
    Cyclic(usize),
    /// Dihedral group of the given order (2n).
    Dihedral(usize),
    Pauli,
    Symmetric(usize),
    Product(Vec<GroupShape>),
}

impl GroupShape {
    /// `Some(n)` when the shape is `Z_n x Z_n`.
    pub fn as_square_cyclic(&self) -> Option<usize> {
        match self {
            GroupShape::Product(f) if f.len() == 2 => match (&f[0], &f[1]) {
                (GroupShape::Cyclic(a), GroupShape::Cyclic(b)) if a == b => Some(*a),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_cyclic(&self) -> Option<usize> {
        match self {
            GroupShape::Cyclic(n) => Some(*n),
            _ => None,
        }
    }

    pub fn contains_table(&self) -> bool {
        match self {
            GroupShape::Table => true,
            GroupShape::Product(f) => f.iter().any(|s| s.contains_table()),
            _ => false,
        }
    }
}

/// A finite group given by its multiplication table on dense element indices.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverses: Vec<usize>,
    label: String,
    element_labels: Vec<String>,
    label_index: HashMap<String, usize>,
    shape: GroupShape,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

/// Build and validate a group from an `order x order` table (`table[g][h] = g*h`).
pub fn group_from_table(order: usize, table: &[Vec<usize>]) -> Result<FiniteGroup> {
    if order == 0 {
        return Err(not_a_group("order must be positive", None));
    }
    if table.len() != order || table.iter().any(|r| r.len() != order) {
        return Err(not_a_group("table is not order x order", None));
    }
    let mut flat = Vec::with_capacity(order * order);
    for row in table {
        for &x in row {
            if x >= order {
                return Err(not_a_group(&format!("entry {x} out of range"), None));
            }
            flat.push(x as u32);
        }
    }
    FiniteGroup::new(order, flat, format!("table({order})"), None, GroupShape::Table)
}

fn not_a_group(reason: &str, witness: Option<(usize, usize, usize)>) -> Error {
    Error::NotAGroup {
        reason: reason.to_string(),
        witness,
    }
}

impl FiniteGroup {
    /// Validate a flat row-major table. `element_labels` default to the indices.
    pub(crate) fn new(
        order: usize,
        table: Vec<u32>,
        label: String,
        element_labels: Option<Vec<String>>,
        shape: GroupShape,
    ) -> Result<Self> {
        let n = order;
        // Latin square: every row and column is a permutation.
        let mut seen = vec![usize::MAX; n];
        for g in 0..n {
            for h in 0..n {
                let x = table[g * n + h] as usize;
                if seen[x] == g {
                    let other = (0..h).find(|&k| table[g * n + k] as usize == x).unwrap_or(0);
                    return Err(not_a_group(
                        &format!("row {g} is not a permutation: {g}*{other} = {g}*{h} = {x}"),
                        Some((g, other, h)),
                    ));
                }
                seen[x] = g;
            }
        }
        seen.iter_mut().for_each(|s| *s = usize::MAX);
        for h in 0..n {
            for g in 0..n {
                let x = table[g * n + h] as usize;
                if seen[x] == h {
                    let other = (0..g).find(|&k| table[k * n + h] as usize == x).unwrap_or(0);
                    return Err(not_a_group(
                        &format!("column {h} is not a permutation: {other}*{h} = {g}*{h} = {x}"),
                        Some((other, g, h)),
                    ));
                }
                seen[x] = h;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e * n + g] as usize == g))
            .ok_or_else(|| not_a_group("no left identity", None))?;
        if let Some(g) = (0..n).find(|&g| table[g * n + identity] as usize != g) {
            return Err(not_a_group(
                &format!("identity {identity} is not a right identity for {g}"),
                Some((g, identity, table[g * n + identity] as usize)),
            ));
        }
        let mut inverses = vec![0; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| table[g * n + h] as usize == identity)
                .expect("latin rows contain the identity");
            if table[h * n + g] as usize != identity {
                return Err(not_a_group(
                    &format!("{h} is a right but not a left inverse of {g}"),
                    Some((h, g, table[h * n + g] as usize)),
                ));
            }
            inverses[g] = h;
        }
        let element_labels = element_labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        let label_index = element_labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let group = FiniteGroup {
            order,
            table,
            identity,
            inverses,
            label,
            element_labels,
            label_index,
            shape,
        };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(not_a_group(
                    &format!("associativity fails at ({a}, {b}, {c})"),
                    Some((a, b, c)),
                ))
            } else {
                Ok(())
            }
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..SAMPLED_TRIPLES {
            check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
        }
        // Light's test: the elements s with (xy)s = x(ys) for all x, y form a
        // closed subset, so checking a generating set suffices.
        for s in self.generators() {
            for a in 0..n {
                for b in 0..n {
                    check(a, b, s)?;
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn shape(&self) -> &GroupShape {
        &self.shape
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    /// `g x g^{-1}`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    #[inline]
    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn product_of(&self, elems: &[usize]) -> usize {
        elems.iter().fold(self.identity, |acc, &g| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commutes(a, b)))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|g| (0..self.order).map(|h| self.mul(g, h)).collect())
            .collect()
    }

    pub fn element_label(&self, g: usize) -> &str {
        &self.element_labels[g]
    }

    /// Resolve an element descriptor: a builtin label such as `1,0` or a bare index.
    pub fn parse_element(&self, s: &str) -> Option<usize> {
        let s = s.trim();
        if let Some(&i) = self.label_index.get(s) {
            return Some(i);
        }
        s.parse::<usize>().ok().filter(|&i| i < self.order)
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order).filter(|&h| self.commutes(g, h)).collect()
    }

    /// Elements commuting with every entry of `elems`.
    pub fn joint_centralizer(&self, elems: &[usize]) -> Vec<usize> {
        (0..self.order)
            .filter(|&h| elems.iter().all(|&g| self.commutes(g, h)))
            .collect()
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| (0..self.order).all(|h| self.commutes(g, h)))
            .collect()
    }

    /// Conjugacy classes, each sorted, listed by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|k| self.conj(k, g)).collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                class_of[x] = classes.len();
            }
            classes.push(class);
        }
        classes
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut stack = vec![self.identity];
        let mut out = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    out.push(y);
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The subgroup on `elems` as a group in its own right; element `i` of
    /// the result is the `i`-th smallest of `elems`, labels kept.
    pub fn subgroup(&self, elems: &[usize]) -> Result<FiniteGroup> {
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let pos = |x: usize| elems.binary_search(&x).ok();
        let mut table = Vec::with_capacity(elems.len() * elems.len());
        for &a in &elems {
            for &b in &elems {
                let c = pos(self.mul(a, b)).ok_or_else(|| not_a_group("subset is not closed", Some((a, b, self.mul(a, b)))))?;
                table.push(c as u32);
            }
        }
        let labels = elems.iter().map(|&x| self.element_label(x).to_string()).collect();
        FiniteGroup::new(elems.len(), table, format!("sub({})", self.label), Some(labels), GroupShape::Table)
    }

    /// A small generating set found greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        self.generators_of(&(0..self.order).collect::<Vec<_>>())
    }

    /// A greedy generating set for the subgroup whose elements are `elems`.
    pub fn generators_of(&self, elems: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for &g in elems {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.generated_subgroup(&gens);
                if span.len() == elems.len() {
                    break;
                }
            }
        }
        gens
    }

    /// Hex SHA-256 over the order and the row-major table bytes.
    pub fn canonical_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"dwkit-group-v1");
        h.update((self.order as u64).to_le_bytes());
        for &x in &self.table {
            h.update(x.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// Relabel elements by a permutation: element `g` of `self` becomes `perm[g]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<FiniteGroup> {
        let n = self.order;
        let mut inv = vec![0; n];
        for (g, &p) in perm.iter().enumerate() {
            inv[p] = g;
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = perm[self.mul(inv[a], inv[b])] as u32;
            }
        }
        let labels = (0..n).map(|i| self.element_labels[inv[i]].clone()).collect();
        FiniteGroup::new(n, table, format!("{}~", self.label), Some(labels), GroupShape::Table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn trivial_group() {
        let g = group_from_table(1, &[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn z4_inverses() {
        let g = group_from_table(4, &cyclic_table(4)).unwrap();
        assert_eq!(g.inverses(), &[0, 3, 2, 1]);
    }

    #[test]
    fn rejects_non_latin_row() {
        let err = group_from_table(2, &[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, Error::NotAGroup { .. }), "{err}");
    }

    #[test]
    fn rejects_non_associative_quasigroup() {
        // A Latin square with identity 0 that is not associative (order 5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = group_from_table(5, &t).unwrap_err();
        match err {
            Error::NotAGroup { witness: Some(_), .. } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn large_cyclic_uses_sampled_check() {
        let g = group_from_table(100, &cyclic_table(100)).unwrap();
        assert_eq!(g.element_order(1), 100);
        assert_eq!(g.generators(), vec![1]);
    }

    #[test]
    fn canonical_hash_is_stable_and_table_sensitive() {
        let a = group_from_table(4, &cyclic_table(4)).unwrap();
        let b = group_from_table(4, &cyclic_table(4)).unwrap();
        assert_eq!(a.canonical_hash(), b.canonical_hash());
        let k4: Vec<Vec<usize>> = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        let c = group_from_table(4, &k4).unwrap();
        assert_ne!(a.canonical_hash(), c.canonical_hash());
    }
}
