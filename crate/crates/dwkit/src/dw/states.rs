use std::fmt;
use std::sync::Arc;

use super::action::{transgress_iterated, ActionCochain};
use super::torus::torus_holonomy;
use crate::algebra::{FiniteGroup, GroupHom, PhaseValue};
use crate::cochains::{coboundary, pullback, Cochain};
use crate::error::{Error, Result};
use crate::groupoids::GaugeGroupoid;

/// The state space `Z_θ(T^{n-1})`: parallel sections of the line bundle on
/// `Bun_G(T^{n-1})` whose transport along `k: x -> x·k` is `exp(2πi ℓ(x; k))`,
/// with `ℓ = τ^{n-1}θ`.
///
/// Basis vector `i` is supported on one orbit and equals 1 at its
/// representative.
#[derive(Clone)]
pub struct StateSpace {
    theta: Cochain,
    ell: ActionCochain,
    reps: Vec<usize>,
    /// `transport[y]` is `(basis index, phase)` for objects in basis orbits.
    transport: Vec<Option<(usize, PhaseValue)>>,
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StateSpace(T^{} over {}, dim {})",
            self.ell.space().dim(),
            self.theta.group().label(),
            self.reps.len()
        )
    }
}

pub fn state_space_torus(theta: &Cochain) -> Result<StateSpace> {
    if theta.degree() == 0 {
        return Err(Error::DegreeMismatch { expected: 1, found: 0 });
    }
    let ell = transgress_iterated(theta, theta.degree() - 1)?;
    let space = ell.space().clone();
    let g = space.group().clone();
    let mut transport = vec![None; space.tuples().len()];
    let mut reps = Vec::new();
    for x in space.orbit_representatives() {
        let trivial = space.stabilizer(x).iter().all(|&k| ell.value(x, &[k]).is_zero());
        if !trivial {
            continue;
        }
        let i = reps.len();
        reps.push(x);
        for k in 0..g.order() {
            let y = space.act(x, k);
            let p = ell.value(x, &[k]);
            match transport[y] {
                None => transport[y] = Some((i, p)),
                Some((_, q)) => debug_assert_eq!(p, q),
            }
        }
    }
    Ok(StateSpace {
        theta: theta.clone(),
        ell,
        reps,
        transport,
    })
}

impl StateSpace {
    pub fn dimension(&self) -> usize {
        self.reps.len()
    }

    pub fn theta(&self) -> &Cochain {
        &self.theta
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.theta.group()
    }

    pub fn space(&self) -> &Arc<GaugeGroupoid> {
        self.ell.space()
    }

    /// The transport cochain `ℓ = τ^{n-1}θ`.
    pub fn transport_cochain(&self) -> &ActionCochain {
        &self.ell
    }

    /// Orbit representative carrying basis vector `i`.
    pub fn basis_object(&self, i: usize) -> usize {
        self.reps[i]
    }

    /// The holonomy tuples of the basis representatives.
    pub fn basis_tuples(&self) -> Vec<Vec<usize>> {
        self.reps.iter().map(|&x| self.space().tuple(x).to_vec()).collect()
    }

    /// `(i, e_i(y))` when `y` lies in the support of basis vector `i`.
    pub fn section_value(&self, y: usize) -> Option<(usize, PhaseValue)> {
        self.transport[y]
    }
}

/// A monomial matrix with phase entries; `None` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseMatrix {
    dim: usize,
    entries: Vec<Option<PhaseValue>>,
}

impl PhaseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![None; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Some(PhaseValue::zero());
        }
        PhaseMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Column `c` sent to row `images[c].0` with phase `images[c].1`.
    pub(crate) fn from_images(images: &[(usize, PhaseValue)]) -> Self {
        let dim = images.len();
        let mut entries = vec![None; dim * dim];
        for (c, &(r, p)) in images.iter().enumerate() {
            entries[r * dim + c] = Some(p);
        }
        PhaseMatrix { dim, entries }
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<PhaseValue> {
        self.entries[row * self.dim + col]
    }

    /// Row of the nonzero entry in column `col`.
    pub fn image(&self, col: usize) -> Option<(usize, PhaseValue)> {
        (0..self.dim).find_map(|r| self.entry(r, col).map(|p| (r, p)))
    }

    pub fn is_monomial(&self) -> bool {
        let mut rows = vec![false; self.dim];
        for c in 0..self.dim {
            let nz: Vec<usize> = (0..self.dim).filter(|&r| self.entry(r, c).is_some()).collect();
            if nz.len() != 1 || rows[nz[0]] {
                return false;
            }
            rows[nz[0]] = true;
        }
        true
    }

    /// Product of monomial matrices.
    pub fn mul(&self, other: &PhaseMatrix) -> PhaseMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = PhaseMatrix {
            dim: self.dim,
            entries: vec![None; self.dim * self.dim],
        };
        for c in 0..self.dim {
            if let Some((k, p)) = other.image(c) {
                if let Some((r, q)) = self.image(k) {
                    out.entries[r * self.dim + c] = Some(p + q);
                }
            }
        }
        out
    }
}

/// Matrices `ρ(g)` and the defect `ρ(g1)ρ(g2) = ρ(g1 g2)·diag(c(g1, g2))`.
#[derive(Clone, Debug)]
pub struct SymmetryAction {
    group: Arc<FiniteGroup>,
    matrices: Vec<PhaseMatrix>,
    defect: Vec<Vec<Vec<PhaseValue>>>,
}

impl SymmetryAction {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn matrix(&self, g: usize) -> &PhaseMatrix {
        &self.matrices[g]
    }

    /// Per basis vector defect phases.
    pub fn defect(&self, g1: usize, g2: usize) -> &[PhaseValue] {
        &self.defect[g1][g2]
    }

    /// The defect when it is a scalar.
    pub fn scalar_defect(&self, g1: usize, g2: usize) -> Option<PhaseValue> {
        let d = &self.defect[g1][g2];
        match d.first() {
            None => Some(PhaseValue::zero()),
            Some(&p) => d.iter().all(|&q| q == p).then_some(p),
        }
    }

    pub fn is_representation(&self) -> bool {
        self.defect.iter().flatten().flatten().all(|p| p.is_zero())
    }
}

/// `(g▷f)(φ) = f(α(g^{-1})φ) · exp(2πi (-1)^{n-1} ⟨Φ_g, [T^{n-1}]_φ⟩)`, where
/// `α(g)` are automorphisms of `D` and `δΦ_g = ω - α(g^{-1})^*ω`.
pub fn symmetry_action(
    state: &StateSpace,
    group: &Arc<FiniteGroup>,
    alpha: &[GroupHom],
    phi: &[Cochain],
) -> Result<SymmetryAction> {
    let omega = &state.theta;
    let d = omega.group();
    let n = omega.degree();
    if alpha.len() != group.order() || phi.len() != group.order() {
        return Err(Error::GroupMismatch("symmetry_action: one α and one Φ per element".into()));
    }
    for (g, (a, p)) in alpha.iter().zip(phi).enumerate() {
        if **a.source() != **d || **a.target() != **d || !a.is_injective() {
            return Err(Error::GroupMismatch(format!("α({g}) is not an automorphism of D")));
        }
        if p.degree() + 1 != n || **p.group() != **d {
            return Err(Error::DegreeMismatch {
                expected: n - 1,
                found: p.degree(),
            });
        }
    }
    for (g, p) in phi.iter().enumerate() {
        let target = omega.sub(&pullback(&alpha[group.inv(g)], omega)?)?;
        if coboundary(p) != target {
            return Err(Error::IncompatiblePhases(format!("δΦ_{g} differs from ω - α(g^-1)^*ω")));
        }
    }
    let space = state.space();
    let dim = state.dimension();
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let moved = |a: &GroupHom, y: usize| -> usize {
        let t: Vec<usize> = space.tuple(y).iter().map(|&x| a.apply(x)).collect();
        space.index_of(&t).expect("automorphisms preserve commuting tuples")
    };
    let mut matrices = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let a = &alpha[group.inv(g)];
        let mut m = PhaseMatrix {
            dim,
            entries: vec![None; dim * dim],
        };
        for y in 0..space.tuples().len() {
            let Some((j, p)) = state.transport[moved(a, y)] else {
                continue;
            };
            let value = p + torus_holonomy(&phi[g], space.tuple(y))?.scale(sign);
            let Some((i, q)) = state.transport[y] else {
                return Err(Error::IncompatiblePhases(format!(
                    "g = {g} maps a state onto an unsupported orbit"
                )));
            };
            let coeff = value - q;
            match m.entries[i * dim + j] {
                None => m.entries[i * dim + j] = Some(coeff),
                Some(c) if c == coeff => {}
                Some(_) => {
                    return Err(Error::IncompatiblePhases(format!("g = {g} does not map parallel sections to parallel sections")))
                }
            }
        }
        if !m.is_monomial() {
            return Err(Error::IncompatiblePhases(format!("ρ({g}) is not invertible")));
        }
        matrices.push(m);
    }
    let mut defect = vec![vec![Vec::new(); group.order()]; group.order()];
    for g1 in 0..group.order() {
        for g2 in 0..group.order() {
            let lhs = matrices[g1].mul(&matrices[g2]);
            let rhs = &matrices[group.mul(g1, g2)];
            let mut col = Vec::with_capacity(dim);
            for j in 0..dim {
                let (r1, p1) = lhs.image(j).expect("monomial");
                let (r2, p2) = rhs.image(j).expect("monomial");
                if r1 != r2 {
                    return Err(Error::IncompatiblePhases(format!(
                        "ρ({g1})ρ({g2}) and ρ({g1}{g2}) permute the basis differently"
                    )));
                }
                col.push(p1 - p2);
            }
            defect[g1][g2] = col;
        }
    }
    Ok(SymmetryAction {
        group: group.clone(),
        matrices,
        defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic, dihedral, product, symmetric};
    use crate::cochains::catalog_cocycle;
    use crate::dw::torus::dw_torus_count;
    use serde_json::json;

    #[test]
    fn dimension_matches_partition_function() {
        let cases = vec![
            catalog_cocycle("omega2", &json!({"n": 2, "k": 1})).unwrap(),
            catalog_cocycle("omega2", &json!({"n": 4, "k": 2})).unwrap(),
            catalog_cocycle("omega_d8", &json!({"k": 1})).unwrap(),
            catalog_cocycle("omega3", &json!({"n": 3, "k": 2})).unwrap(),
            Cochain::zero(Arc::new(symmetric(3).unwrap()), 3, 1),
        ];
        for w in cases {
            let s = state_space_torus(&w).unwrap();
            assert_eq!(s.dimension() as u64, dw_torus_count(&w).unwrap(), "{:?}", w);
        }
    }

    #[test]
    fn trivial_symmetry_is_identity() {
        let w = catalog_cocycle("omega_d8", &json!({"k": 1})).unwrap();
        let s = state_space_torus(&w).unwrap();
        let z2 = Arc::new(cyclic(2).unwrap());
        let id = GroupHom::identity(w.group().clone());
        let zero = Cochain::zero(w.group().clone(), 1, 1);
        let act = symmetry_action(&s, &z2, &[id.clone(), id], &[zero.clone(), zero]).unwrap();
        assert!(act.is_representation());
        assert_eq!(*act.matrix(1), PhaseMatrix::identity(s.dimension()));
    }

    #[test]
    fn swap_on_z2_squared() {
        // α swaps the factors; ω1 is antisymmetric so Φ must absorb ω - α^*ω.
        let g = Arc::new(product(&[cyclic(2).unwrap(), cyclic(2).unwrap()]).unwrap());
        let w = Cochain::zero(g.clone(), 2, 1);
        let s = state_space_torus(&w).unwrap();
        assert_eq!(s.dimension(), 4);
        let swap = GroupHom::new(g.clone(), g.clone(), vec![0, 2, 1, 3]).unwrap();
        let z2 = Arc::new(cyclic(2).unwrap());
        let zero = Cochain::zero(g.clone(), 1, 1);
        let act = symmetry_action(&s, &z2, &[GroupHom::identity(g.clone()), swap], &[zero.clone(), zero]).unwrap();
        assert!(act.is_representation());
        assert_eq!(act.matrix(1).image(1).unwrap().0, 2);
        // A character on the identity breaks ρ(e)ρ(e) = ρ(e).
        let chi = Cochain::from_fn(g.clone(), 1, 2, |t| (t[0] >= 2) as i64);
        let zero = Cochain::zero(g.clone(), 1, 1);
        let id = GroupHom::identity(g.clone());
        let act = symmetry_action(&s, &z2, &[id.clone(), id], &[chi, zero]).unwrap();
        assert!(!act.is_representation());
        assert_eq!(act.scalar_defect(0, 0), None);
    }

    #[test]
    fn bad_phi_rejected() {
        let d8 = Arc::new(dihedral(8).unwrap());
        let w = catalog_cocycle("omega_d8", &json!({"k": 1})).unwrap();
        let s = state_space_torus(&w).unwrap();
        let z2 = Arc::new(cyclic(2).unwrap());
        let id = GroupHom::identity(d8.clone());
        let junk = Cochain::from_fn(d8.clone(), 1, 4, |t| t[0] as i64);
        let zero = Cochain::zero(d8, 1, 1);
        assert!(matches!(
            symmetry_action(&s, &z2, &[id.clone(), id], &[zero, junk]),
            Err(Error::IncompatiblePhases(_))
        ));
    }
}
