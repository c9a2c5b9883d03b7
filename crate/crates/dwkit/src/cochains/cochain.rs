use std::fmt;
use std::sync::Arc;

use num::integer::Integer;

use crate::algebra::{FiniteGroup, GroupHom, IntMatrix, PhaseValue};
use crate::error::{Error, Result};

/// Dense indexing of normalized bar tuples: tuples of non-identity elements,
/// row-major in the order of the non-identity elements.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BarIndex {
    identity: usize,
    base: usize,
}

impl BarIndex {
    pub fn new(group: &FiniteGroup) -> Self {
        BarIndex {
            identity: group.identity(),
            base: group.order() - 1,
        }
    }

    pub fn len(&self, n: usize) -> usize {
        self.base.pow(n as u32)
    }

    /// Index of a tuple, or `None` when some entry is the identity.
    #[inline]
    pub fn index(&self, t: &[usize]) -> Option<usize> {
        let mut idx = 0usize;
        for &g in t {
            if g == self.identity {
                return None;
            }
            idx = idx * self.base + g - (g > self.identity) as usize;
        }
        Some(idx)
    }

    #[inline]
    pub fn tuple_into(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            let p = idx % self.base;
            *slot = p + (p >= self.identity) as usize;
            idx /= self.base;
        }
    }

    pub fn tuple(&self, idx: usize, n: usize) -> Vec<usize> {
        let mut t = vec![0; n];
        self.tuple_into(idx, &mut t);
        t
    }
}

/// Calls `f(face, sign)` for every face of the bar differential applied to the
/// `(n+1)`-tuple `t`: `c(t2..) + Σ (-1)^i c(..t_i t_{i+1}..) + (-1)^{n+1} c(..t_n)`.
#[inline]
pub(crate) fn bar_faces(group: &FiniteGroup, t: &[usize], buf: &mut Vec<usize>, mut f: impl FnMut(&[usize], i64)) {
    let k = t.len();
    buf.clear();
    buf.extend_from_slice(&t[1..]);
    f(buf, 1);
    for i in 0..k - 1 {
        buf.clear();
        buf.extend_from_slice(&t[..i]);
        buf.push(group.mul(t[i], t[i + 1]));
        buf.extend_from_slice(&t[i + 2..]);
        f(buf, if (i + 1) % 2 == 0 { 1 } else { -1 });
    }
    buf.clear();
    buf.extend_from_slice(&t[..k - 1]);
    f(buf, if k.is_multiple_of(2) { 1 } else { -1 });
}

/// A normalized `n`-cochain on a finite group with values in `(1/M)Z/Z`.
///
/// Values are stored densely as numerators over the normalized tuples.
#[derive(Clone)]
pub struct Cochain {
    group: Arc<FiniteGroup>,
    degree: usize,
    modulus: u64,
    values: Vec<u64>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz: Vec<String> = self
            .entries()
            .take(8)
            .map(|(t, v)| format!("{t:?}->{v}"))
            .collect();
        write!(
            f,
            "Cochain(deg {} on {}, mod {}, {} nonzero: {}{})",
            self.degree,
            self.group.label(),
            self.modulus,
            self.values.iter().filter(|&&v| v != 0).count(),
            nz.join(", "),
            if nz.len() == 8 { ", .." } else { "" }
        )
    }
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        if self.degree != other.degree || *self.group != *other.group {
            return false;
        }
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (m / self.modulus, m / other.modulus);
        self.values.iter().zip(&other.values).all(|(&x, &y)| x * a == y * b)
    }
}

impl Eq for Cochain {}

impl Cochain {
    pub fn zero(group: Arc<FiniteGroup>, degree: usize, modulus: u64) -> Self {
        assert!(modulus > 0, "cochain modulus must be positive");
        let len = BarIndex::new(&group).len(degree);
        Cochain {
            group,
            degree,
            modulus,
            values: vec![0; len],
        }
    }

    /// Build from a numerator function; tuples containing the identity are
    /// skipped, so the result is normalized whatever `f` returns there.
    pub fn from_fn(group: Arc<FiniteGroup>, degree: usize, modulus: u64, mut f: impl FnMut(&[usize]) -> i64) -> Self {
        let bar = BarIndex::new(&group);
        let m = modulus as i64;
        let mut t = vec![0; degree];
        let values = (0..bar.len(degree))
            .map(|i| {
                bar.tuple_into(i, &mut t);
                f(&t).rem_euclid(m) as u64
            })
            .collect();
        Cochain {
            group,
            degree,
            modulus,
            values,
        }
    }

    /// Numerators in dense normalized order, reduced mod `modulus`.
    pub(crate) fn from_numerators(group: Arc<FiniteGroup>, degree: usize, modulus: u64, nums: &[i64]) -> Self {
        debug_assert_eq!(nums.len(), BarIndex::new(&group).len(degree));
        let m = modulus as i64;
        Cochain {
            group,
            degree,
            modulus,
            values: nums.iter().map(|&x| x.rem_euclid(m) as u64).collect(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub(crate) fn numerators(&self) -> &[u64] {
        &self.values
    }

    pub(crate) fn bar(&self) -> BarIndex {
        BarIndex::new(&self.group)
    }

    /// Numerator over `modulus` at a tuple (0 for degenerate tuples).
    pub fn numerator_at(&self, t: &[usize]) -> u64 {
        assert_eq!(t.len(), self.degree, "tuple length must equal the degree");
        match self.bar().index(t) {
            Some(i) => self.values[i],
            None => 0,
        }
    }

    pub fn value(&self, t: &[usize]) -> PhaseValue {
        PhaseValue::new(self.numerator_at(t) as i64, self.modulus)
    }

    /// Set the value at a non-degenerate tuple; the modulus grows if needed.
    pub fn set(&mut self, t: &[usize], v: PhaseValue) -> Result<()> {
        if t.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: t.len(),
            });
        }
        let Some(i) = self.bar().index(t) else {
            return if v.is_zero() {
                Ok(())
            } else {
                Err(Error::Format("normalized cochains vanish on tuples containing the identity".into()))
            };
        };
        let r = v.reduced();
        if !self.modulus.is_multiple_of(r.modulus()) {
            *self = self.with_modulus(self.modulus.lcm(&r.modulus())).expect("multiple");
        }
        self.values[i] = r.with_modulus(self.modulus).expect("divides").numerator();
        Ok(())
    }

    /// Nonzero values keyed by tuple, in dense order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, PhaseValue)> + '_ {
        let bar = self.bar();
        let n = self.degree;
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, &v)| (bar.tuple(i, n), PhaseValue::new(v as i64, self.modulus)))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Smallest modulus over which every value is representable.
    pub fn minimal_modulus(&self) -> u64 {
        let g = self.values.iter().fold(self.modulus, |g, &v| g.gcd(&v));
        self.modulus / g
    }

    pub fn reduced(&self) -> Cochain {
        self.with_modulus(self.minimal_modulus()).expect("minimal modulus")
    }

    /// The same cochain over modulus `m`, if every value fits.
    pub fn with_modulus(&self, m: u64) -> Option<Cochain> {
        let mm = self.minimal_modulus();
        if !m.is_multiple_of(mm) {
            return None;
        }
        let values = if m >= self.modulus && m.is_multiple_of(self.modulus) {
            let f = m / self.modulus;
            self.values.iter().map(|&v| v * f).collect()
        } else {
            let down = self.modulus / mm;
            let up = m / mm;
            self.values.iter().map(|&v| v / down * up).collect()
        };
        Some(Cochain {
            group: self.group.clone(),
            degree: self.degree,
            modulus: m,
            values,
        })
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if *self.group != *other.group {
            return Err(Error::GroupMismatch(format!(
                "{} vs {}",
                self.group.label(),
                other.group.label()
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Cochain, sign: i128) -> Result<Cochain> {
        self.check_compatible(other)?;
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = ((m / self.modulus) as i128, (m / other.modulus) as i128);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| (x as i128 * a + sign * y as i128 * b).rem_euclid(m as i128) as u64)
            .collect();
        Ok(Cochain {
            group: self.group.clone(),
            degree: self.degree,
            modulus: m,
            values,
        })
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> Cochain {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Cochain {
        let m = self.modulus as i128;
        Cochain {
            values: self
                .values
                .iter()
                .map(|&v| (v as i128 * k as i128).rem_euclid(m) as u64)
                .collect(),
            ..self.clone()
        }
    }

    pub fn is_cocycle(&self) -> bool {
        coboundary(self).is_zero()
    }

    /// Fail with `NotACocycle` unless `δc = 0`.
    pub fn ensure_cocycle(&self) -> Result<()> {
        let d = coboundary(self);
        let first = d.entries().next();
        match first {
            None => Ok(()),
            Some((t, v)) => Err(Error::NotACocycle(format!(
                "degree-{} cochain on {} has coboundary {v} at {:?}",
                self.degree,
                self.group.label(),
                t
            ))),
        }
    }
}

/// Bar differential with trivial coefficients.
pub fn coboundary(c: &Cochain) -> Cochain {
    let g = &c.group;
    let bar = c.bar();
    let n = c.degree + 1;
    let m = c.modulus as i64;
    let mut t = vec![0; n];
    let mut buf = Vec::with_capacity(n);
    let values = (0..bar.len(n))
        .map(|i| {
            bar.tuple_into(i, &mut t);
            let mut s: i64 = 0;
            bar_faces(g, &t, &mut buf, |face, sign| {
                if let Some(j) = bar.index(face) {
                    s += sign * c.values[j] as i64;
                }
            });
            s.rem_euclid(m) as u64
        })
        .collect();
    Cochain {
        group: g.clone(),
        degree: n,
        modulus: c.modulus,
        values,
    }
}

/// Matrix of `δ: C^n -> C^{n+1}` on normalized integral cochains.
pub fn coboundary_matrix(group: &FiniteGroup, n: usize) -> IntMatrix {
    let bar = BarIndex::new(group);
    let rows = bar.len(n + 1);
    let mut t = vec![0; n + 1];
    let mut buf = Vec::with_capacity(n + 1);
    let mut trip = Vec::with_capacity(rows * (n + 2));
    for r in 0..rows {
        bar.tuple_into(r, &mut t);
        bar_faces(group, &t, &mut buf, |face, sign| {
            if let Some(j) = bar.index(face) {
                trip.push((r, j, sign));
            }
        });
    }
    IntMatrix::from_triplets(rows, bar.len(n), trip)
}

/// Matrix of `f^*` on normalized `n`-cochains.
pub(crate) fn pullback_matrix(f: &GroupHom, n: usize) -> IntMatrix {
    let (sb, tb) = (BarIndex::new(f.source()), BarIndex::new(f.target()));
    let mut t = vec![0; n];
    let mut img = vec![0; n];
    let trip = (0..sb.len(n)).filter_map(|r| {
        sb.tuple_into(r, &mut t);
        for (slot, &x) in img.iter_mut().zip(&t) {
            *slot = f.apply(x);
        }
        tb.index(&img).map(|c| (r, c, 1))
    });
    let trip: Vec<_> = trip.collect();
    IntMatrix::from_triplets(sb.len(n), tb.len(n), trip)
}

/// `(f^*c)(g1..gn) = c(f g1, .., f gn)`.
pub fn pullback(f: &GroupHom, c: &Cochain) -> Result<Cochain> {
    if **f.target() != *c.group {
        return Err(Error::GroupMismatch(format!(
            "pullback along a map into {} of a cochain on {}",
            f.target().label(),
            c.group.label()
        )));
    }
    let tb = c.bar();
    let mut img = vec![0; c.degree];
    Ok(Cochain::from_fn(f.source().clone(), c.degree, c.modulus, |t| {
        for (slot, &x) in img.iter_mut().zip(t) {
            *slot = f.apply(x);
        }
        tb.index(&img).map_or(0, |j| c.values[j] as i64)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic, product};

    fn z2z2() -> Arc<FiniteGroup> {
        Arc::new(product(&[cyclic(2).unwrap(), cyclic(2).unwrap()]).unwrap())
    }

    #[test]
    fn normalization_is_structural() {
        let g = z2z2();
        let c = Cochain::from_fn(g.clone(), 2, 2, |_| 1);
        assert_eq!(c.numerator_at(&[0, 1]), 0);
        assert_eq!(c.numerator_at(&[1, 2]), 1);
    }

    #[test]
    fn coboundary_of_zero() {
        let c = Cochain::zero(z2z2(), 2, 4);
        assert!(coboundary(&c).is_zero());
    }

    #[test]
    fn coboundary_matrix_matches_direct() {
        let g = Arc::new(cyclic(3).unwrap());
        let c = Cochain::from_fn(g.clone(), 2, 7, |t| (t[0] * 3 + t[1] * t[1]) as i64);
        let m = coboundary_matrix(&g, 2);
        let x: Vec<i64> = c.numerators().iter().map(|&v| v as i64).collect();
        let y: Vec<i64> = m.mul_vec(&x).iter().map(|v| v.rem_euclid(7)).collect();
        let d = coboundary(&c);
        assert_eq!(y, d.numerators().iter().map(|&v| v as i64).collect::<Vec<_>>());
    }

    #[test]
    fn modulus_rescaling_keeps_equality() {
        let g = z2z2();
        let c = Cochain::from_fn(g, 1, 2, |t| t[0] as i64);
        let d = c.with_modulus(8).unwrap();
        assert_eq!(c, d);
        assert_eq!(d.minimal_modulus(), 2);
        assert!(c.with_modulus(3).is_none());
    }

    #[test]
    fn set_grows_modulus() {
        let mut c = Cochain::zero(z2z2(), 1, 2);
        c.set(&[1], PhaseValue::new(1, 3)).unwrap();
        assert_eq!(c.modulus(), 6);
        assert_eq!(c.value(&[1]), PhaseValue::new(1, 3));
        assert!(c.set(&[0], PhaseValue::new(1, 2)).is_err());
    }
}
