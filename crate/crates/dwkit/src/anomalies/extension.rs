use std::sync::Arc;

use crate::algebra::{cyclic, extend_on_generators, product, FiniteGroup, GroupHom, GroupShape};
use crate::error::{Error, Result};

/// A non-abelian 2-cocycle of `G` with values in `D`: automorphisms `α(g)`
/// and a twist `σ: G × G -> D`.
#[derive(Clone, Debug)]
pub struct NonAbelianCocycle {
    g: Arc<FiniteGroup>,
    d: Arc<FiniteGroup>,
    alpha: Vec<GroupHom>,
    sigma: Vec<usize>,
}

impl NonAbelianCocycle {
    /// Checks `α(1) = id`, `σ(1,1) = 1`,
    /// `α(g1 g2)[d] = σ(g1,g2)^{-1} α(g1)[α(g2)[d]] σ(g1,g2)` and
    /// `σ(g1,g2) σ(g1 g2,g3) = α(g1)[σ(g2,g3)] σ(g1,g2 g3)`.
    pub fn new(g: Arc<FiniteGroup>, d: Arc<FiniteGroup>, alpha: Vec<GroupHom>, sigma: Vec<Vec<usize>>) -> Result<Self> {
        let n = g.order();
        let bad = |msg: String| Err(Error::InvalidCocycle(msg));
        if alpha.len() != n || sigma.len() != n || sigma.iter().any(|r| r.len() != n) {
            return bad("α and σ must be indexed by G".into());
        }
        for (x, a) in alpha.iter().enumerate() {
            if **a.source() != *d || **a.target() != *d || !a.is_injective() {
                return bad(format!("α({x}) is not an automorphism of D"));
            }
        }
        if sigma.iter().flatten().any(|&s| s >= d.order()) {
            return bad("σ takes values outside D".into());
        }
        let e = g.identity();
        if alpha[e].map().iter().enumerate().any(|(i, &x)| i != x) {
            return bad("α(1) is not the identity".into());
        }
        if sigma[e][e] != d.identity() {
            return bad("σ(1,1) is not 1".into());
        }
        for g1 in 0..n {
            for g2 in 0..n {
                let s = sigma[g1][g2];
                let a12 = &alpha[g.mul(g1, g2)];
                for x in 0..d.order() {
                    let rhs = d.mul(d.mul(d.inv(s), alpha[g1].apply(alpha[g2].apply(x))), s);
                    if a12.apply(x) != rhs {
                        return bad(format!("α({g1}·{g2}) relation fails at d = {x}"));
                    }
                }
                for g3 in 0..n {
                    let lhs = d.mul(s, sigma[g.mul(g1, g2)][g3]);
                    let rhs = d.mul(alpha[g1].apply(sigma[g2][g3]), sigma[g1][g.mul(g2, g3)]);
                    if lhs != rhs {
                        return bad(format!("σ cocycle relation fails at ({g1}, {g2}, {g3})"));
                    }
                }
            }
        }
        Ok(NonAbelianCocycle {
            g,
            d,
            alpha,
            sigma: sigma.into_iter().flatten().collect(),
        })
    }

    /// `α` trivial and `σ = 1`.
    pub fn trivial(g: Arc<FiniteGroup>, d: Arc<FiniteGroup>) -> Self {
        let n = g.order();
        NonAbelianCocycle {
            alpha: vec![GroupHom::identity(d.clone()); n],
            sigma: vec![d.identity(); n * n],
            g,
            d,
        }
    }

    pub fn g(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn d(&self) -> &Arc<FiniteGroup> {
        &self.d
    }

    pub fn alpha(&self, g: usize) -> &GroupHom {
        &self.alpha[g]
    }

    pub fn alphas(&self) -> &[GroupHom] {
        &self.alpha
    }

    pub fn sigma(&self, g1: usize, g2: usize) -> usize {
        self.sigma[g1 * self.g.order() + g2]
    }
}

/// A short exact sequence `1 -> D -ι-> Ĝ -λ-> G -> 1` with a set-theoretic
/// section `s` of `λ`, `s(1) = 1`.
#[derive(Clone, Debug)]
pub struct Extension {
    iota: GroupHom,
    lambda: GroupHom,
    section: Vec<usize>,
}

impl Extension {
    /// Validates exactness. Without a section the first preimage of each
    /// element (in element order) is used.
    pub fn new(iota: GroupHom, lambda: GroupHom, section: Option<Vec<usize>>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidExtension(msg.into()));
        if **iota.target() != **lambda.source() {
            return bad("ι and λ do not compose");
        }
        if !iota.is_injective() {
            return bad("ι is not injective");
        }
        if !lambda.is_surjective() {
            return bad("λ is not surjective");
        }
        let mut image = iota.image();
        image.sort_unstable();
        let mut kernel = lambda.kernel();
        kernel.sort_unstable();
        if image != kernel {
            return bad("image of ι differs from kernel of λ");
        }
        let (ghat, g) = (lambda.source().clone(), lambda.target().clone());
        let section = match section {
            Some(s) => {
                if s.len() != g.order() || s.iter().any(|&x| x >= ghat.order()) {
                    return Err(Error::SectionNotValid("section must map G into Ĝ".into()));
                }
                if s.iter().enumerate().any(|(x, &y)| lambda.apply(y) != x) {
                    return Err(Error::SectionNotValid("λ∘s is not the identity".into()));
                }
                if s[g.identity()] != ghat.identity() {
                    return Err(Error::SectionNotValid("s(1) is not 1".into()));
                }
                s
            }
            None => (0..g.order())
                .map(|x| {
                    if x == g.identity() {
                        ghat.identity()
                    } else {
                        (0..ghat.order()).find(|&y| lambda.apply(y) == x).expect("λ is surjective")
                    }
                })
                .collect(),
        };
        Ok(Extension { iota, lambda, section })
    }

    pub fn d(&self) -> &Arc<FiniteGroup> {
        self.iota.source()
    }

    pub fn ghat(&self) -> &Arc<FiniteGroup> {
        self.iota.target()
    }

    pub fn g(&self) -> &Arc<FiniteGroup> {
        self.lambda.target()
    }

    pub fn iota(&self) -> &GroupHom {
        &self.iota
    }

    pub fn lambda(&self) -> &GroupHom {
        &self.lambda
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    pub fn s(&self, g: usize) -> usize {
        self.section[g]
    }

    /// Search for `θ: Ĝ -> Ĝ'` with `θ∘ι = ι'` and `λ'∘θ = λ`.
    pub fn find_equivalence(&self, other: &Extension) -> Option<GroupHom> {
        if **self.d() != **other.d() || **self.g() != **other.g() || self.ghat().order() != other.ghat().order() {
            return None;
        }
        let (a, b) = (self.ghat(), other.ghat());
        let dgens = self.d().generators();
        let ggens = self.g().generators();
        let mut gens: Vec<usize> = dgens.iter().map(|&x| self.iota.apply(x)).collect();
        let mut fixed: Vec<usize> = dgens.iter().map(|&x| other.iota.apply(x)).collect();
        gens.extend(ggens.iter().map(|&x| self.s(x)));
        let choices: Vec<Vec<usize>> = ggens
            .iter()
            .map(|&x| (0..b.order()).filter(|&y| other.lambda.apply(y) == x).collect())
            .collect();
        let base = fixed.len();
        fixed.resize(base + ggens.len(), 0);
        let mut idx = vec![0; ggens.len()];
        loop {
            for (k, &i) in idx.iter().enumerate() {
                fixed[base + k] = choices[k][i];
            }
            if let Some(map) = extend_on_generators(a, b, &gens, &fixed) {
                if let Ok(h) = GroupHom::new(a.clone(), b.clone(), map) {
                    let commutes = (0..a.order()).all(|x| other.lambda.apply(h.apply(x)) == self.lambda.apply(x));
                    if h.is_injective() && commutes {
                        return Some(h);
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return None;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// `Ĝ` on the set `G × D` with `(g2,d2)(g1,d1) = (g2 g1, d2·α(g2)[d1]·σ(g2,g1))`;
/// `(g, d)` has index `g·|D| + d`.
pub fn extension_from_cocycle(nc: &NonAbelianCocycle) -> Result<Extension> {
    let (g, d) = (&nc.g, &nc.d);
    let (ng, nd) = (g.order(), d.order());
    let mut table = vec![vec![0usize; ng * nd]; ng * nd];
    for (x2, row) in table.iter_mut().enumerate() {
        let (g2, d2) = (x2 / nd, x2 % nd);
        for (x1, cell) in row.iter_mut().enumerate() {
            let (g1, d1) = (x1 / nd, x1 % nd);
            let dd = d.mul(d.mul(d2, nc.alpha[g2].apply(d1)), nc.sigma(g2, g1));
            *cell = g.mul(g2, g1) * nd + dd;
        }
    }
    let flat = table.into_iter().flatten().map(|x| x as u32).collect();
    let labels = (0..ng * nd)
        .map(|x| format!("{};{}", g.element_label(x / nd), d.element_label(x % nd)))
        .collect();
    let ghat = Arc::new(FiniteGroup::new(
        ng * nd,
        flat,
        format!("{}.{}", d.label(), g.label()),
        Some(labels),
        GroupShape::Table,
    )?);
    let iota = GroupHom::new(d.clone(), ghat.clone(), (0..nd).map(|x| g.identity() * nd + x).collect())?;
    let lambda = GroupHom::new(ghat.clone(), g.clone(), (0..ng * nd).map(|x| x / nd).collect())?;
    let section = (0..ng).map(|x| x * nd + d.identity()).collect();
    Extension::new(iota, lambda, Some(section))
}

/// `α(g) = c_{s(g)}` on `ι(D)`, `σ(g1,g2) = ι^{-1}(s(g1) s(g2) s(g1 g2)^{-1})`.
pub fn cocycle_from_extension(ext: &Extension) -> Result<NonAbelianCocycle> {
    let (ghat, g, d) = (ext.ghat(), ext.g(), ext.d());
    let back = ext.iota.inverse_table();
    let pre = |y: usize| back[y].ok_or_else(|| Error::SectionNotValid("element outside ι(D)".into()));
    let alpha = (0..g.order())
        .map(|x| {
            let map = (0..d.order())
                .map(|y| pre(ghat.conj(ext.s(x), ext.iota.apply(y))))
                .collect::<Result<Vec<_>>>()?;
            GroupHom::new(d.clone(), d.clone(), map)
        })
        .collect::<Result<Vec<_>>>()?;
    let sigma = (0..g.order())
        .map(|g1| {
            (0..g.order())
                .map(|g2| {
                    let p = ghat.mul(ghat.mul(ext.s(g1), ext.s(g2)), ghat.inv(ext.s(g.mul(g1, g2))));
                    pre(p)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    NonAbelianCocycle::new(g.clone(), d.clone(), alpha, sigma)
}

/// `D8 -> P1 -> Z2` with `ι(d) = (d, 0)` and section `1 ↦ (1, 1)`.
pub fn pauli_extension() -> Result<Extension> {
    let p = Arc::new(crate::algebra::pauli()?);
    let d8 = Arc::new(crate::algebra::dihedral(8)?);
    let z2 = Arc::new(cyclic(2)?);
    let iota = GroupHom::new(d8, p.clone(), (0..8).map(|d| 2 * d).collect())?;
    let lambda = GroupHom::new(p, z2, (0..16).map(|x| x % 2).collect())?;
    Extension::new(iota, lambda, Some(vec![0, 1]))
}

/// `Z_N -M·-> Z_{NM} -> Z_M` with section `a ↦ a`.
pub fn abelian_extension(n: usize, m: usize) -> Result<Extension> {
    let d = Arc::new(cyclic(n)?);
    let ghat = Arc::new(cyclic(n * m)?);
    let g = Arc::new(cyclic(m)?);
    let iota = GroupHom::new(d, ghat.clone(), (0..n).map(|x| x * m).collect())?;
    let lambda = GroupHom::new(ghat, g, (0..n * m).map(|x| x % m).collect())?;
    Extension::new(iota, lambda, Some((0..m).collect()))
}

/// `Z_N² -(M,M)·-> Z_{NM}² -> Z_M²` with section `(a, b) ↦ (a, b)`.
pub fn abelian_square_extension(n: usize, m: usize) -> Result<Extension> {
    let d = Arc::new(product(&[cyclic(n)?, cyclic(n)?])?);
    let ghat = Arc::new(product(&[cyclic(n * m)?, cyclic(n * m)?])?);
    let g = Arc::new(product(&[cyclic(m)?, cyclic(m)?])?);
    let nm = n * m;
    let iota = GroupHom::new(d, ghat.clone(), (0..n * n).map(|x| (x / n) * m * nm + (x % n) * m).collect())?;
    let lambda = GroupHom::new(ghat, g, (0..nm * nm).map(|x| (x / nm % m) * m + x % nm % m).collect())?;
    Extension::new(iota, lambda, Some((0..m * m).map(|x| (x / m) * nm + x % m).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dihedral, find_isomorphism, pauli};
    use crate::cochains::catalog_sigma;

    #[test]
    fn trivial_cocycle_gives_product() {
        let g = Arc::new(cyclic(2).unwrap());
        let d = Arc::new(cyclic(3).unwrap());
        let ext = extension_from_cocycle(&NonAbelianCocycle::trivial(g, d)).unwrap();
        assert!(ext.ghat().is_abelian());
        assert_eq!(ext.ghat().order(), 6);
        let back = cocycle_from_extension(&ext).unwrap();
        assert!((0..2).all(|x| (0..2).all(|y| back.sigma(x, y) == 0)));
    }

    #[test]
    fn floor_cocycle() {
        for (n, m) in [(2, 2), (3, 2), (2, 3), (4, 4)] {
            let ext = abelian_extension(n, m).unwrap();
            let nc = cocycle_from_extension(&ext).unwrap();
            let sig = catalog_sigma(n, m);
            for a in 0..m {
                for b in 0..m {
                    assert_eq!(nc.sigma(a, b), sig[a][b]);
                }
            }
            let built = extension_from_cocycle(&nc).unwrap();
            assert!(find_isomorphism(built.ghat(), &Arc::new(cyclic(n * m).unwrap())).is_some());
            assert!(built.find_equivalence(&ext).is_some());
        }
    }

    #[test]
    fn pauli_from_inner_action() {
        let d8 = Arc::new(dihedral(8).unwrap());
        let z2 = Arc::new(cyclic(2).unwrap());
        let a = 1;
        let alpha = vec![GroupHom::identity(d8.clone()), GroupHom::conjugation(d8.clone(), a)];
        let nc = NonAbelianCocycle::new(z2, d8, alpha, vec![vec![0, 0], vec![0, 0]]).unwrap();
        let ext = extension_from_cocycle(&nc).unwrap();
        assert!(find_isomorphism(ext.ghat(), &Arc::new(pauli().unwrap())).is_some());
        let p = pauli_extension().unwrap();
        assert!(ext.find_equivalence(&p).is_some());
        let round = extension_from_cocycle(&cocycle_from_extension(&p).unwrap()).unwrap();
        assert!(round.find_equivalence(&p).is_some());
    }

    #[test]
    fn invalid_data_rejected() {
        let z2 = Arc::new(cyclic(2).unwrap());
        let z4 = Arc::new(cyclic(4).unwrap());
        let bad = NonAbelianCocycle::new(
            z2.clone(),
            z4.clone(),
            vec![GroupHom::identity(z4.clone()); 2],
            vec![vec![0, 1], vec![0, 0]],
        );
        assert!(matches!(bad, Err(Error::InvalidCocycle(_))));
        let iota = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let lambda = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(matches!(
            Extension::new(iota.clone(), lambda.clone(), Some(vec![0, 2])),
            Err(Error::SectionNotValid(_))
        ));
        let ext = Extension::new(iota, lambda, None).unwrap();
        assert_eq!(ext.section(), &[0, 1]);
        let zero = GroupHom::new(z4.clone(), z2.clone(), vec![0; 4]).unwrap();
        let inc = GroupHom::new(z2, z4, vec![0, 2]).unwrap();
        assert!(matches!(Extension::new(inc, zero, None), Err(Error::InvalidExtension(_))));
    }

    #[test]
    fn square_extension_shape() {
        let ext = abelian_square_extension(2, 2).unwrap();
        assert_eq!(ext.ghat().order(), 16);
        assert_eq!(ext.d().element_label(1), "0,1");
        assert_eq!(ext.ghat().element_label(ext.iota().apply(1)), "0,2");
        assert_eq!(ext.ghat().element_label(ext.s(2)), "1,0");
    }
}
