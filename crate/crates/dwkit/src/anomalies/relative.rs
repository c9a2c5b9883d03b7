use std::collections::HashMap;
use std::sync::Arc;

use num::integer::Integer;

use super::extension::Extension;
use crate::algebra::{CycloNumber, FiniteGroup, PhaseValue};
use crate::cochains::{coboundary, pullback, solve_coboundary, Cochain};
use crate::dw::{transgress_iterated, ActionCochain, PhaseMatrix};
use crate::error::{Error, Result};
use crate::groupoids::{fiber_object_parts, gauge_functor, gauge_groupoid, homotopy_fiber, integrate, GaugeGroupoid};

fn check_pair(ext: &Extension, omega_prime: &Cochain, theta: &Cochain) -> Result<()> {
    let bad = |m: &str| Err(Error::NotABoundaryPair(m.into()));
    if **omega_prime.group() != **ext.ghat() || **theta.group() != **ext.g() {
        return bad("ω' must live on Ĝ and θ on G");
    }
    if theta.degree() != omega_prime.degree() + 1 {
        return bad("deg θ must be deg ω' + 1");
    }
    if !theta.is_cocycle() {
        return bad("θ is not closed");
    }
    if coboundary(omega_prime) != pullback(ext.lambda(), theta)? {
        return bad("δω' differs from λ^*θ");
    }
    Ok(())
}

/// `τ^m c` for a cochain that need not be closed.
fn transgress_open(c: &Cochain, m: usize) -> Result<ActionCochain> {
    let mut a = ActionCochain::from_group_cochain(c)?;
    for _ in 0..m {
        a = a.transgress()?;
    }
    Ok(a)
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Relative partition function of a boundary pair on `T^m`, `m = deg ω'`, at
/// the `G`-bundle with holonomies `φ`:
///
/// `Z(φ) = Σ_{[(φ̂, h)]} exp(2πi (τ^m ω'(φ̂) + (-1)^m τ^m θ(λφ̂; h))) / |Aut(φ̂, h)|`
///
/// over the homotopy fibre of `λ_*: Bun_Ĝ(T^m) -> Bun_G(T^m)` at `φ`, where
/// `h: λφ̂ -> φ` is a gauge transformation. The integrand is checked on every
/// fibre morphism before summing.
pub fn relative_partition_torus(ext: &Extension, omega_prime: &Cochain, theta: &Cochain, phi: &[usize]) -> Result<CycloNumber> {
    check_pair(ext, omega_prime, theta)?;
    let m = omega_prime.degree();
    if phi.len() != m {
        return Err(Error::DegreeMismatch {
            expected: m,
            found: phi.len(),
        });
    }
    let g = ext.g();
    if let Some(&bad) = phi.iter().find(|&&x| x >= g.order()) {
        return Err(Error::GroupMismatch(format!("{bad} is not an element of G")));
    }
    for (i, &a) in phi.iter().enumerate() {
        if let Some(&b) = phi[i + 1..].iter().find(|&&b| !g.commutes(a, b)) {
            return Err(Error::NonCommuting(a, b));
        }
    }
    let up = gauge_groupoid(ext.ghat(), m)?;
    let down = gauge_groupoid(g, m)?;
    let f = gauge_functor(ext.lambda(), &up, &down)?;
    let y = down.index_of(phi).expect("commuting tuple");
    let fibre = homotopy_fiber(&f, y);
    let top = transgress_open(omega_prime, m)?;
    let beta = transgress_iterated(theta, m)?;
    let s = sign(m);
    integrate(&fibre, |obj| {
        let (x, hm) = fiber_object_parts(fibre.label(obj));
        let h = hm % g.order();
        let p = top.value(x, &[]) + beta.value(f.on_object(x), &[h]).scale(s);
        CycloNumber::from_phase(p)
    })
}

/// The projective action of `Aut(φ)` on the relative state space over one
/// conjugacy class of `G`-bundles on `T^k`.
#[derive(Clone, Debug)]
pub struct StateSector {
    /// Representative holonomies `φ`.
    pub object: Vec<usize>,
    /// `Aut(φ)` as elements of `G`, sorted; index `i` here is element `i` of
    /// the cochains below.
    pub stabilizer: Vec<usize>,
    pub dimension: usize,
    /// `ρ(a)` for `a` in stabilizer order.
    pub matrices: Vec<PhaseMatrix>,
    /// `D(b, a)` with `ρ(a)ρ(b) = exp(2πi D(b, a)) ρ(ba)`; absent when the
    /// state space is zero.
    pub defect: Option<Cochain>,
    /// `τ^k θ` at `φ`, as a 2-cocycle on `Aut(φ)`.
    pub transgressed: Cochain,
    /// `[D] = (-1)^k [τ^k θ]`, absent when the state space is zero.
    pub same_class: Option<bool>,
    pub transgressed_trivial: bool,
}

#[derive(Clone, Debug)]
pub struct ProjectiveStateCocycle {
    /// Torus dimension `k = deg ω' - 1`.
    pub k: usize,
    /// `τ^k θ` on `Bun_G(T^k)`.
    pub transgressed: ActionCochain,
    pub sectors: Vec<StateSector>,
}

impl ProjectiveStateCocycle {
    /// Every nonzero sector's defect is in the class of `(-1)^k τ^k θ`.
    pub fn same_class(&self) -> bool {
        self.sectors.iter().all(|s| s.same_class != Some(false))
    }

    pub fn transgressed_is_trivial(&self) -> bool {
        self.sectors.iter().all(|s| s.transgressed_trivial)
    }
}

fn restrict(beta: &ActionCochain, x: usize, sub: &Arc<FiniteGroup>, elems: &[usize], modulus: u64) -> Cochain {
    let scale = (modulus / beta.modulus()) as i64;
    Cochain::from_fn(sub.clone(), 2, modulus, |t| {
        beta.numerator_at(x, &[elems[t[0]], elems[t[1]]]) as i64 * scale
    })
}

fn class_is_trivial(c: &Cochain) -> Result<bool> {
    match solve_coboundary(c, None) {
        Ok(_) => Ok(true),
        Err(e) if e.is_no_solution() => Ok(false),
        Err(e) => Err(e),
    }
}

struct Sector<'a> {
    ext: &'a Extension,
    down: &'a GaugeGroupoid,
    a_top: &'a ActionCochain,
    beta: &'a ActionCochain,
    s: i64,
}

impl Sector<'_> {
    /// State space over `φ = down[y]` and the matrices of its automorphisms.
    fn build(&self, f: &crate::groupoids::Functor, y: usize) -> Result<StateSector> {
        let (g, gh) = (self.ext.g(), self.ext.ghat());
        let fibre = homotopy_fiber(f, y);
        let parts: Vec<(usize, usize)> = (0..fibre.object_count())
            .map(|o| {
                let (x, hm) = fiber_object_parts(fibre.label(o));
                (x, hm % g.order())
            })
            .collect();
        let index: HashMap<(usize, usize), usize> = parts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        // ℓ(x̂, h; ĝ) = τ^k ω'(x̂; ĝ) - (-1)^k τ^k θ(λx̂; λĝ, λĝ^{-1} h)
        let transport = |o: usize, mor: usize| -> PhaseValue {
            let (x, h) = parts[o];
            let gh_el = fibre.underlying(mor).expect("fibre morphism") % gh.order();
            let l = self.ext.lambda().apply(gh_el);
            let psi = f.on_object(x);
            self.a_top.value(x, &[gh_el]) - self.beta.value(psi, &[l, g.mul(g.inv(l), h)]).scale(self.s)
        };
        let comps = fibre.components();
        let mut comp_of = vec![0; fibre.object_count()];
        let mut section: Vec<Option<PhaseValue>> = vec![None; fibre.object_count()];
        let mut basis = Vec::new();
        for (ci, comp) in comps.iter().enumerate() {
            for &o in comp {
                comp_of[o] = ci;
            }
            section[comp[0]] = Some(PhaseValue::zero());
            let mut stack = vec![comp[0]];
            let mut flat = true;
            while let Some(o) = stack.pop() {
                let p = section[o].expect("visited");
                for &mor in fibre.outgoing(o) {
                    let t = fibre.target(mor);
                    let q = p + transport(o, mor);
                    match section[t] {
                        None => {
                            section[t] = Some(q);
                            stack.push(t);
                        }
                        Some(r) if r == q => {}
                        Some(_) => flat = false,
                    }
                }
            }
            if flat {
                basis.push(ci);
            }
        }
        let basis_pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let stabilizer = {
            let mut v = self.down.stabilizer(y);
            v.sort_unstable();
            v
        };
        let mut matrices = Vec::with_capacity(stabilizer.len());
        for &a in &stabilizer {
            let mut images = Vec::with_capacity(basis.len());
            for &c in &basis {
                let rep = comps[c][0];
                let (x, h) = parts[rep];
                let moved = index[&(x, g.mul(h, a))];
                let target = *basis_pos.get(&comp_of[moved]).ok_or_else(|| {
                    Error::IncompatiblePhases("automorphism moves a state onto a non-flat component".into())
                })?;
                let c_a = self.beta.value(f.on_object(x), &[h, a]).scale(self.s);
                images.push((target, c_a - section[moved].expect("visited")));
            }
            matrices.push(PhaseMatrix::from_images(&images));
        }
        let sub = Arc::new(g.subgroup(&stabilizer)?);
        let dim = basis.len();
        let (defect, same_class) = if dim == 0 {
            (None, None)
        } else {
            let mut table = vec![vec![PhaseValue::zero(); stabilizer.len()]; stabilizer.len()];
            for (bi, &b) in stabilizer.iter().enumerate() {
                for (ai, &a) in stabilizer.iter().enumerate() {
                    let lhs = matrices[ai].mul(&matrices[bi]);
                    let ba = stabilizer.binary_search(&g.mul(b, a)).expect("closed");
                    let rhs = &matrices[ba];
                    let mut scalar = None;
                    for col in 0..dim {
                        let (r1, p1) = lhs.image(col).expect("monomial");
                        let (r2, p2) = rhs.image(col).expect("monomial");
                        if r1 != r2 {
                            return Err(Error::IncompatiblePhases("ρ(a)ρ(b) and ρ(ba) permute states differently".into()));
                        }
                        let d = p1 - p2;
                        match scalar {
                            None => scalar = Some(d),
                            Some(e) if e == d => {}
                            Some(_) => return Err(Error::IncompatiblePhases("defect is not a scalar".into())),
                        }
                    }
                    table[bi][ai] = scalar.expect("dim > 0");
                }
            }
            let modulus = table.iter().flatten().fold(self.beta.modulus(), |m, p| m.lcm(&p.modulus()));
            let d = Cochain::from_fn(sub.clone(), 2, modulus, |t| {
                table[t[0]][t[1]].with_modulus(modulus).expect("lcm").numerator() as i64
            });
            let expected = restrict(self.beta, y, &sub, &stabilizer, modulus).scale(self.s);
            let same = class_is_trivial(&d.sub(&expected)?)?;
            (Some(d), Some(same))
        };
        let transgressed = restrict(self.beta, y, &sub, &stabilizer, self.beta.modulus());
        let transgressed_trivial = class_is_trivial(&transgressed)?;
        Ok(StateSector {
            object: self.down.tuple(y).to_vec(),
            stabilizer,
            dimension: dim,
            matrices,
            defect,
            transgressed,
            same_class,
            transgressed_trivial,
        })
    }
}

/// For a boundary pair with `k = deg ω' - 1 ≥ 1`: the relative state space
/// over each conjugacy class of `G`-bundles on `T^k`, the projective action
/// of the automorphisms and its defect 2-cocycle, compared with the
/// transgression `τ^k θ`.
pub fn projective_state_cocycle(ext: &Extension, omega_prime: &Cochain, theta: &Cochain) -> Result<ProjectiveStateCocycle> {
    check_pair(ext, omega_prime, theta)?;
    let n = omega_prime.degree();
    if n < 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: n });
    }
    let k = n - 1;
    let up = gauge_groupoid(ext.ghat(), k)?;
    let down = gauge_groupoid(ext.g(), k)?;
    let f = gauge_functor(ext.lambda(), &up, &down)?;
    let a_top = transgress_open(omega_prime, k)?;
    let beta = transgress_iterated(theta, k)?;
    let ctx = Sector {
        ext,
        down: &down,
        a_top: &a_top,
        beta: &beta,
        s: sign(k),
    };
    let sectors = down
        .orbit_representatives()
        .into_iter()
        .map(|y| ctx.build(&f, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectiveStateCocycle {
        k,
        transgressed: beta,
        sectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic, dihedral, GroupHom};
    use crate::anomalies::extension::{abelian_extension, pauli_extension};
    use crate::cochains::{catalog_cocycle, cohomology};
    use crate::dw::{dw_partition_torus, torus_holonomy};
    use crate::groupoids::commuting_tuples;
    use serde_json::json;

    fn trivial_extension(g: FiniteGroup) -> Extension {
        let g = Arc::new(g);
        let one = Arc::new(cyclic(1).unwrap());
        let iota = GroupHom::new(one, g.clone(), vec![g.identity()]).unwrap();
        Extension::new(iota, GroupHom::identity(g), None).unwrap()
    }

    #[test]
    fn trivial_kernel_is_evaluation() {
        let w = catalog_cocycle("omega_d8", &json!({"k": 1})).unwrap();
        let ext = trivial_extension(dihedral(8).unwrap());
        let theta = Cochain::zero(ext.g().clone(), 3, 1);
        for t in commuting_tuples(ext.g(), 2) {
            let z = relative_partition_torus(&ext, &w, &theta, &t).unwrap();
            assert!(z.exact_eq(&CycloNumber::from_phase(torus_holonomy(&w, &t).unwrap())));
        }
    }

    #[test]
    fn trivial_bundle_sees_kernel_theory() {
        let ext = pauli_extension().unwrap();
        let zero = Cochain::zero(ext.ghat().clone(), 2, 1);
        let theta = Cochain::zero(ext.g().clone(), 3, 1);
        let z = relative_partition_torus(&ext, &zero, &theta, &[0, 0]).unwrap();
        let d0 = Cochain::zero(ext.d().clone(), 2, 1);
        assert!(z.exact_eq(&dw_partition_torus(&d0).unwrap()));
    }

    /// `(ω', θ)` over `ω = 0` for `Z_2 -> Z_4 -> Z_2` with `θ` the generator
    /// of `H^3(Z_2; U(1))`, which dies on `Z_4`.
    fn z4_pair() -> (Extension, Cochain, Cochain) {
        let ext = abelian_extension(2, 2).unwrap();
        let theta = catalog_cocycle("omega3", &json!({"n": 2, "k": 1})).unwrap();
        let w = solve_coboundary(&pullback(ext.lambda(), &theta).unwrap(), None).unwrap();
        let r = pullback(ext.iota(), &w).unwrap();
        let b = solve_coboundary(&r, None).unwrap();
        let back = ext.iota().inverse_table();
        let bh = Cochain::from_fn(ext.ghat().clone(), 1, b.modulus(), |t| match back[t[0]] {
            Some(d) => b.numerator_at(&[d]) as i64,
            None => 0,
        });
        let w = w.sub(&coboundary(&bh)).unwrap();
        assert!(pullback(ext.iota(), &w).unwrap().is_zero());
        (ext, w, theta)
    }

    #[test]
    fn anomalous_pair_is_gauge_invariant() {
        let (ext, w, theta) = z4_pair();
        let h = cohomology(ext.g(), 3).unwrap();
        assert!(!h.is_trivial_class(&theta).unwrap());
        let mut seen = Vec::new();
        for t in commuting_tuples(ext.g(), 2) {
            seen.push(relative_partition_torus(&ext, &w, &theta, &t).unwrap());
        }
        // Trivial sector reduces to the untwisted Z_2 theory.
        assert_eq!(seen[0].as_integer(), Some(2));
    }

    #[test]
    fn defect_matches_transgression() {
        let (ext, w, theta) = z4_pair();
        let p = projective_state_cocycle(&ext, &w, &theta).unwrap();
        assert_eq!(p.k, 1);
        assert!(p.same_class());
        for s in &p.sectors {
            if let Some(d) = &s.defect {
                let expected = s.transgressed.scale(-1);
                assert_eq!(d, &expected);
            }
        }
    }

    /// `Z_2 -> D_8 x Z_2 -> Z_2^3` with `D` the centre of `D_8`.
    fn central_d8_z2() -> Extension {
        let z2 = || cyclic(2).unwrap();
        let gh = Arc::new(crate::algebra::product(&[dihedral(8).unwrap(), z2()]).unwrap());
        let g = Arc::new(crate::algebra::product(&[z2(), z2(), z2()]).unwrap());
        let iota = GroupHom::new(Arc::new(z2()), gh.clone(), vec![0, 4]).unwrap();
        // (a^i b^j, c) has index 2(i + 4j) + c
        let lambda = (0..16)
            .map(|x| {
                let (d, c) = (x / 2, x % 2);
                4 * (d % 2) + 2 * (d / 4) + c
            })
            .collect();
        let lambda = GroupHom::new(gh, g, lambda).unwrap();
        Extension::new(iota, lambda, None).unwrap()
    }

    #[test]
    fn nontrivial_transgression_with_anomaly() {
        let ext = central_d8_z2();
        // Type III: a1 c2 (a3 + b3) / 2, with x = 4a + 2b + c. Dies on D8 x Z2.
        let theta = Cochain::from_fn(ext.g().clone(), 3, 2, |t| ((t[0] / 4) * (t[1] % 2) * ((t[2] / 4 + t[2] / 2) % 2)) as i64);
        assert!(!cohomology(ext.g(), 3).unwrap().is_trivial_class(&theta).unwrap());
        {
            let w = solve_coboundary(&pullback(ext.lambda(), &theta).unwrap(), None).unwrap();
            let r = pullback(ext.iota(), &w).unwrap();
            let b = solve_coboundary(&r, None).unwrap();
            let bh = Cochain::from_fn(ext.ghat().clone(), 1, b.modulus(), |t| match t[0] {
                4 => b.numerator_at(&[1]) as i64,
                _ => 0,
            });
            let w = w.sub(&coboundary(&bh)).unwrap();
            let p = projective_state_cocycle(&ext, &w, &theta).unwrap();
            assert!(p.same_class());
            assert!(!p.transgressed_is_trivial());
            let dims: Vec<usize> = p.sectors.iter().map(|s| s.dimension).collect();
            assert_eq!(dims, vec![2, 0, 2, 0, 2, 0, 2, 0]);
            for t in commuting_tuples(ext.g(), 2).into_iter().step_by(7) {
                relative_partition_torus(&ext, &w, &theta, &t).unwrap();
            }
        }
    }

    #[test]
    fn rejects_non_pairs() {
        let ext = abelian_extension(2, 2).unwrap();
        let theta = catalog_cocycle("omega3", &json!({"n": 2, "k": 1})).unwrap();
        let zero = Cochain::zero(ext.ghat().clone(), 2, 1);
        assert!(matches!(
            relative_partition_torus(&ext, &zero, &theta, &[0, 0]),
            Err(Error::NotABoundaryPair(_))
        ));
        assert!(matches!(projective_state_cocycle(&ext, &zero, &theta), Err(Error::NotABoundaryPair(_))));
    }
}
