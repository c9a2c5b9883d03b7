use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use super::cochain::{bar_faces, Cochain};
use crate::algebra::{FiniteGroup, GroupHom, PhaseValue};
use crate::error::{Error, Result};

/// A finite integer combination of normalized bar simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalChain {
    group: Arc<FiniteGroup>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, i64>,
}

impl FormalChain {
    pub fn zero(group: Arc<FiniteGroup>, degree: usize) -> Self {
        FormalChain {
            group,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A single simplex with coefficient 1 (zero if degenerate).
    pub fn simplex(group: Arc<FiniteGroup>, tuple: Vec<usize>) -> Self {
        let mut c = FormalChain::zero(group, tuple.len());
        c.add_term(tuple, 1);
        c
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], i64)> {
        self.terms.iter().map(|(t, &c)| (t.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, t: &[usize]) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    /// Add `coeff * t`; degenerate simplices are zero in the normalized complex.
    pub fn add_term(&mut self, t: Vec<usize>, coeff: i64) {
        assert_eq!(t.len(), self.degree);
        if coeff == 0 || t.contains(&self.group.identity()) {
            return;
        }
        match self.terms.entry(t) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &FormalChain) -> FormalChain {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (t, c) in other.terms() {
            out.add_term(t.to_vec(), c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> FormalChain {
        let mut out = FormalChain::zero(self.group.clone(), self.degree);
        for (t, c) in self.terms() {
            out.add_term(t.to_vec(), c * k);
        }
        out
    }

    /// Bar boundary, the adjoint of the coboundary.
    pub fn boundary(&self) -> FormalChain {
        if self.degree == 0 {
            return FormalChain::zero(self.group.clone(), 0);
        }
        let mut out = FormalChain::zero(self.group.clone(), self.degree - 1);
        let mut buf = Vec::new();
        for (t, c) in self.terms() {
            bar_faces(&self.group, t, &mut buf, |face, sign| out.add_term(face.to_vec(), sign * c));
        }
        out
    }
}

fn shuffles(p: usize, q: usize, f: &mut impl FnMut(&[bool], i64)) {
    // `pattern[k]` is true when slot k takes the next letter of the first factor.
    fn rec(pattern: &mut Vec<bool>, left: usize, right: usize, inversions: usize, f: &mut impl FnMut(&[bool], i64)) {
        if left == 0 && right == 0 {
            f(pattern, if inversions.is_multiple_of(2) { 1 } else { -1 });
            return;
        }
        if left > 0 {
            pattern.push(true);
            // Every second-factor letter already placed precedes this one.
            let placed_right = pattern.iter().filter(|&&b| !b).count();
            rec(pattern, left - 1, right, inversions + placed_right, f);
            pattern.pop();
        }
        if right > 0 {
            pattern.push(false);
            rec(pattern, left, right - 1, inversions, f);
            pattern.pop();
        }
    }
    rec(&mut Vec::with_capacity(p + q), p, q, 0, f);
}

/// Shuffle cross product with both factors mapped into a common group.
pub fn shuffle_cross_embedded(a: &FormalChain, b: &FormalChain, fa: &GroupHom, fb: &GroupHom) -> Result<FormalChain> {
    if **fa.source() != *a.group || **fb.source() != *b.group || **fa.target() != **fb.target() {
        return Err(Error::GroupMismatch("shuffle_cross: embeddings do not match".into()));
    }
    let target = fa.target().clone();
    let (p, q) = (a.degree, b.degree);
    let mut out = FormalChain::zero(target, p + q);
    for (ta, ca) in a.terms() {
        for (tb, cb) in b.terms() {
            shuffles(p, q, &mut |pattern, sign| {
                let (mut i, mut j) = (0, 0);
                let t: Vec<usize> = pattern
                    .iter()
                    .map(|&first| {
                        if first {
                            i += 1;
                            fa.apply(ta[i - 1])
                        } else {
                            j += 1;
                            fb.apply(tb[j - 1])
                        }
                    })
                    .collect();
                out.add_term(t, sign * ca * cb);
            });
        }
    }
    Ok(out)
}

/// Shuffle cross product of chains on the same group: signed interleavings.
pub fn shuffle_cross(a: &FormalChain, b: &FormalChain) -> Result<FormalChain> {
    if *a.group != *b.group {
        return Err(Error::GroupMismatch("shuffle_cross on different groups".into()));
    }
    let id = GroupHom::identity(a.group.clone());
    shuffle_cross_embedded(a, b, &id, &id)
}

/// `Σ_π sgn(π) (g_π(1), .., g_π(n))`, the shuffle product of the loops `(g_i)`.
pub fn torus_fundamental_cycle(group: &Arc<FiniteGroup>, tuple: &[usize]) -> Result<FormalChain> {
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if !group.commutes(tuple[i], tuple[j]) {
                return Err(Error::NonCommuting(tuple[i], tuple[j]));
            }
        }
    }
    let mut acc = FormalChain::zero(group.clone(), 0);
    acc.terms.insert(Vec::new(), 1);
    for &g in tuple {
        acc = shuffle_cross(&acc, &FormalChain::simplex(group.clone(), vec![g]))?;
    }
    Ok(acc)
}

/// `⟨c, z⟩ = Σ coeff * c(tuple)`.
pub fn evaluate(c: &Cochain, z: &FormalChain) -> Result<PhaseValue> {
    if c.degree() != z.degree {
        return Err(Error::DegreeMismatch {
            expected: c.degree(),
            found: z.degree,
        });
    }
    if **c.group() != *z.group {
        return Err(Error::GroupMismatch("evaluate: chain and cochain on different groups".into()));
    }
    let m = c.modulus() as i128;
    let s = z
        .terms()
        .fold(0i128, |acc, (t, k)| (acc + k as i128 * c.numerator_at(t) as i128).rem_euclid(m));
    Ok(PhaseValue::new(s as i64, c.modulus()))
}

/// Slant of `ω̂` against the interval labelled `ĝ`: an `(n-1)`-cochain `Φ` on
/// `D` with `δΦ = ι^*ω̂ - c_ĝ^* ι^*ω̂`, where `c_ĝ(d) = ĝ d ĝ^{-1}`.
pub fn interval_pairing(omega_hat: &Cochain, g_hat: usize, iota: &GroupHom) -> Result<Cochain> {
    let gh = omega_hat.group();
    if **iota.target() != **gh {
        return Err(Error::GroupMismatch("interval_pairing: ι does not land in ω̂'s group".into()));
    }
    let n = omega_hat.degree();
    if n == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let ginv = gh.inv(g_hat);
    let m = omega_hat.modulus() as i64;
    let mut buf = vec![0; n];
    Ok(Cochain::from_fn(iota.source().clone(), n - 1, omega_hat.modulus(), |d| {
        let h: Vec<usize> = d.iter().map(|&x| iota.apply(x)).collect();
        let mut s: i64 = 0;
        for i in 0..n {
            buf[..i].copy_from_slice(&h[..i]);
            buf[i] = ginv;
            for k in i..n - 1 {
                buf[k + 1] = gh.conj(g_hat, h[k]);
            }
            let v = omega_hat.numerator_at(&buf) as i64;
            s += if i % 2 == 0 { v } else { -v };
        }
        (-s).rem_euclid(m)
    }))
}
