use std::sync::Arc;

use super::group::FiniteGroup;
use crate::error::{Error, Result};

/// A group homomorphism stored as an image table.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::InvalidHom(format!(
                "map has length {} but source has order {}",
                map.len(),
                source.order()
            )));
        }
        if let Some(&x) = map.iter().find(|&&x| x >= target.order()) {
            return Err(Error::InvalidHom(format!("image {x} out of range")));
        }
        if map[source.identity()] != target.identity() {
            return Err(Error::InvalidHom("identity not preserved".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidHom(format!("f({a}*{b}) != f({a})*f({b})")));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let map = (0..g.order()).collect();
        GroupHom {
            source: g.clone(),
            target: g,
            map,
        }
    }

    /// The homomorphism `d -> s d s^{-1}` of `g` to itself.
    pub fn conjugation(g: Arc<FiniteGroup>, s: usize) -> Self {
        let map = (0..g.order()).map(|x| g.conj(s, x)).collect();
        GroupHom {
            source: g.clone(),
            target: g,
            map,
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if **other.source() != *self.target {
            return Err(Error::GroupMismatch("composition of incompatible homomorphisms".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&x| other.apply(x)).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map.iter().for_each(|&x| seen[x] = true);
        seen.into_iter().all(|s| s)
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.source.order())
            .filter(|&x| self.map[x] == self.target.identity())
            .collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut im = self.map.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    /// Preimage table for an injective map (`None` off the image).
    pub fn inverse_table(&self) -> Vec<Option<usize>> {
        let mut inv = vec![None; self.target.order()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = Some(x);
        }
        inv
    }
}

/// Search for an isomorphism `a -> b` by backtracking on images of generators.
pub fn find_isomorphism(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Option<GroupHom> {
    if a.order() != b.order() {
        return None;
    }
    let gens = a.generators();
    let orders: Vec<usize> = gens.iter().map(|&g| a.element_order(g)).collect();
    let mut images = Vec::with_capacity(gens.len());
    search_iso(a, b, &gens, &orders, &mut images)
}

fn search_iso(
    a: &Arc<FiniteGroup>,
    b: &Arc<FiniteGroup>,
    gens: &[usize],
    orders: &[usize],
    images: &mut Vec<usize>,
) -> Option<GroupHom> {
    if images.len() == gens.len() {
        let map = extend_on_generators(a, b, gens, images)?;
        let hom = GroupHom::new(a.clone(), b.clone(), map).ok()?;
        return hom.is_injective().then_some(hom);
    }
    let k = images.len();
    for y in 0..b.order() {
        if b.element_order(y) != orders[k] {
            continue;
        }
        images.push(y);
        if let Some(h) = search_iso(a, b, gens, orders, images) {
            return Some(h);
        }
        images.pop();
    }
    None
}

/// Extend an assignment on generators along a spanning tree of the Cayley
/// graph; returns `None` if the assignment is inconsistent.
pub(crate) fn extend_on_generators(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    map[a.identity()] = b.identity();
    let mut queue = std::collections::VecDeque::from([a.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = a.mul(x, s);
            let fy = b.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}
