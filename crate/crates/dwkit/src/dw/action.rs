use std::fmt;
use std::sync::Arc;

use num::integer::Integer;

use crate::algebra::{FiniteGroup, PhaseValue};
use crate::cochains::{bar_faces, BarIndex, Cochain};
use crate::error::{Error, Result};
use crate::groupoids::{gauge_groupoid, GaugeGroupoid};

/// A normalized `k`-cochain on the gauge groupoid `Bun_G(T^m)`: a phase for
/// every object `x` and chain of `k` morphisms `x --h1--> x·h1 --h2--> ..`.
#[derive(Clone)]
pub struct ActionCochain {
    space: Arc<GaugeGroupoid>,
    degree: usize,
    modulus: u64,
    values: Vec<u64>,
}

/// Cochains on the loop groupoid `G⫽G = Bun_G(S^1)`.
pub type LoopCochain = ActionCochain;

impl fmt::Debug for ActionCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ActionCochain(deg {} on Bun_{}(T^{}), mod {}, {} nonzero)",
            self.degree,
            self.space.group().label(),
            self.space.dim(),
            self.modulus,
            self.values.iter().filter(|&&v| v != 0).count()
        )
    }
}

impl PartialEq for ActionCochain {
    fn eq(&self, other: &Self) -> bool {
        if self.degree != other.degree
            || self.space.dim() != other.space.dim()
            || **self.space.group() != **other.space.group()
        {
            return false;
        }
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (m / self.modulus, m / other.modulus);
        self.values.iter().zip(&other.values).all(|(&x, &y)| x * a == y * b)
    }
}

impl Eq for ActionCochain {}

impl ActionCochain {
    fn bar(&self) -> BarIndex {
        BarIndex::new(self.space.group())
    }

    fn block(&self) -> usize {
        self.bar().len(self.degree)
    }

    pub fn zero(space: Arc<GaugeGroupoid>, degree: usize, modulus: u64) -> Self {
        let len = space.tuples().len() * BarIndex::new(space.group()).len(degree);
        ActionCochain {
            space,
            degree,
            modulus,
            values: vec![0; len],
        }
    }

    /// Numerators from `f(object, morphisms)`; degenerate chains are skipped.
    pub fn from_fn(
        space: Arc<GaugeGroupoid>,
        degree: usize,
        modulus: u64,
        mut f: impl FnMut(usize, &[usize]) -> i64,
    ) -> Self {
        let bar = BarIndex::new(space.group());
        let block = bar.len(degree);
        let m = modulus as i64;
        let mut t = vec![0; degree];
        let mut values = Vec::with_capacity(space.tuples().len() * block);
        for x in 0..space.tuples().len() {
            for i in 0..block {
                bar.tuple_into(i, &mut t);
                values.push(f(x, &t).rem_euclid(m) as u64);
            }
        }
        ActionCochain {
            space,
            degree,
            modulus,
            values,
        }
    }

    /// A group cochain viewed on `Bun_G(T^0) = ⋆⫽G`.
    pub fn from_group_cochain(c: &Cochain) -> Result<Self> {
        let space = Arc::new(gauge_groupoid(c.group(), 0)?);
        Ok(ActionCochain::from_fn(space, c.degree(), c.modulus(), |_, t| {
            c.numerator_at(t) as i64
        }))
    }

    /// The group cochain behind a cochain on `⋆⫽G`.
    pub fn to_group_cochain(&self) -> Result<Cochain> {
        if self.space.dim() != 0 {
            return Err(Error::DegreeMismatch {
                expected: 0,
                found: self.space.dim(),
            });
        }
        Ok(Cochain::from_fn(self.space.group().clone(), self.degree, self.modulus, |t| {
            self.numerator_at(0, t) as i64
        }))
    }

    pub fn space(&self) -> &Arc<GaugeGroupoid> {
        &self.space
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.space.group()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn numerator_at(&self, x: usize, t: &[usize]) -> u64 {
        assert_eq!(t.len(), self.degree);
        match self.bar().index(t) {
            Some(i) => self.values[x * self.block() + i],
            None => 0,
        }
    }

    pub fn value(&self, x: usize, t: &[usize]) -> PhaseValue {
        PhaseValue::new(self.numerator_at(x, t) as i64, self.modulus)
    }

    /// Nonzero values as `(object, morphisms, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Vec<usize>, PhaseValue)> + '_ {
        let bar = self.bar();
        let block = self.block();
        let n = self.degree;
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, &v)| (i / block, bar.tuple(i % block, n), PhaseValue::new(v as i64, self.modulus)))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn minimal_modulus(&self) -> u64 {
        self.modulus / self.values.iter().fold(self.modulus, |g, &v| g.gcd(&v))
    }

    pub fn with_modulus(&self, m: u64) -> Option<Self> {
        let mm = self.minimal_modulus();
        if !m.is_multiple_of(mm) {
            return None;
        }
        let down = self.modulus / mm;
        let up = m / mm;
        Some(ActionCochain {
            values: self.values.iter().map(|&v| v / down * up).collect(),
            modulus: m,
            ..self.clone()
        })
    }

    fn combine(&self, other: &Self, sign: i128) -> Result<Self> {
        if self.degree != other.degree
            || self.space.dim() != other.space.dim()
            || **self.space.group() != **other.space.group()
        {
            return Err(Error::GroupMismatch("action cochains on different groupoids".into()));
        }
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = ((m / self.modulus) as i128, (m / other.modulus) as i128);
        Ok(ActionCochain {
            space: self.space.clone(),
            degree: self.degree,
            modulus: m,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| (x as i128 * a + sign * y as i128 * b).rem_euclid(m as i128) as u64)
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn scale(&self, k: i64) -> Self {
        let m = self.modulus as i128;
        ActionCochain {
            values: self
                .values
                .iter()
                .map(|&v| (v as i128 * k as i128).rem_euclid(m) as u64)
                .collect(),
            ..self.clone()
        }
    }

    /// `(δc)(x; h1..h_{k+1}) = c(x·h1; h2..) + Σ (-1)^i c(x; ..h_i h_{i+1}..)
    /// + (-1)^{k+1} c(x; h1..h_k)`.
    pub fn coboundary(&self) -> Self {
        let g = self.space.group().clone();
        let bar = self.bar();
        let n = self.degree + 1;
        let m = self.modulus as i64;
        let mut buf = Vec::with_capacity(n);
        ActionCochain::from_fn(self.space.clone(), n, self.modulus, |x, t| {
            let mut s: i64 = 0;
            let mut first = true;
            bar_faces(&g, t, &mut buf, |face, sign| {
                // The first face starts at the moved object.
                let obj = if first { self.space.act(x, t[0]) } else { x };
                first = false;
                if let Some(j) = bar.index(face) {
                    s += sign * self.values[obj * bar.len(n - 1) + j] as i64;
                }
            });
            s.rem_euclid(m)
        })
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }

    /// Circle transgression to `Bun_G(T^{m+1})`, the new loop appended last:
    /// `τc(φ, g)(h1..h_{k-1}) = Σ_i (-1)^i c(φ; h1..h_i, g_i, h_{i+1}..)`
    /// with `g_i = (h1..h_i)^{-1} g (h1..h_i)`.
    pub fn transgress(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let g = self.space.group().clone();
        let up = Arc::new(gauge_groupoid(&g, self.space.dim() + 1)?);
        let k = self.degree;
        let m = self.modulus as i64;
        let mut buf = vec![0; k];
        let out = ActionCochain::from_fn(up.clone(), k - 1, self.modulus, |y, h| {
            let t = up.tuple(y);
            let (phi, loop_g) = (&t[..t.len() - 1], t[t.len() - 1]);
            let x = self.space.index_of(phi).expect("sub-tuple of a commuting tuple commutes");
            let mut s: i64 = 0;
            let mut prefix = g.identity();
            for i in 0..k {
                buf[..i].copy_from_slice(&h[..i]);
                buf[i] = g.conj(g.inv(prefix), loop_g);
                buf[i + 1..].copy_from_slice(&h[i..]);
                let v = self.numerator_at(x, &buf) as i64;
                s += if i % 2 == 0 { v } else { -v };
                if i < k - 1 {
                    prefix = g.mul(prefix, h[i]);
                }
            }
            s.rem_euclid(m)
        });
        Ok(out)
    }
}

/// `τθ` on the loop groupoid; `θ` must be a cocycle.
pub fn transgress_circle(theta: &Cochain) -> Result<LoopCochain> {
    theta.ensure_cocycle()?;
    ActionCochain::from_group_cochain(theta)?.transgress()
}

/// The twisted-double 2-cochain on `G⫽G` for a 3-cocycle,
/// `c_g(x, y) = θ(g, x, y) - θ(x, x^{-1}gx, y) + θ(x, y, (xy)^{-1}gxy)`.
pub fn dpr_loop_cocycle(theta: &Cochain) -> Result<LoopCochain> {
    if theta.degree() != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            found: theta.degree(),
        });
    }
    theta.ensure_cocycle()?;
    let g = theta.group().clone();
    let space = Arc::new(gauge_groupoid(&g, 1)?);
    let s = space.clone();
    Ok(ActionCochain::from_fn(space, 2, theta.modulus(), move |o, h| {
        let (a, x, y) = (s.tuple(o)[0], h[0], h[1]);
        let xy = g.mul(x, y);
        let v = |t: [usize; 3]| theta.numerator_at(&t) as i64;
        v([a, x, y]) - v([x, g.conj(g.inv(x), a), y]) + v([x, y, g.conj(g.inv(xy), a)])
    }))
}

/// `τ^m θ` on `Bun_G(T^m)`.
pub fn transgress_iterated(theta: &Cochain, m: usize) -> Result<ActionCochain> {
    theta.ensure_cocycle()?;
    if m > theta.degree() {
        return Err(Error::DegreeMismatch {
            expected: theta.degree(),
            found: m,
        });
    }
    let mut c = ActionCochain::from_group_cochain(theta)?;
    for _ in 0..m {
        c = c.transgress()?;
    }
    Ok(c)
}
