//! Fixtures, brute-force oracles and property checks shared by the
//! integration test targets.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use dwkit::algebra::{cyclic, dihedral, pauli, product, symmetric, FiniteGroup, GroupHom};
use dwkit::anomalies::{
    abelian_extension, abelian_square_extension, cocycle_from_extension, find_closed_lift,
    fixed_point_family_from_lift, relative_partition_torus, Extension,
};
use dwkit::cochains::{
    catalog_cocycle, coboundary, cohomology, is_cohomologous_to_zero, pullback, solve_coboundary, Cochain,
    CohomologyGroup,
};
use dwkit::dw::{dw_torus_count, state_space_torus, symmetry_action, torus_holonomy, transgress_circle, transgress_iterated};
use dwkit::groupoids::{cardinality, gauge_functor, gauge_groupoid, homotopy_fiber, integrate, GaugeGroupoid};
use dwkit::{CycloNumber, PhaseValue};
use num::rational::Ratio;
use proptest::prelude::*;
use serde_json::json;

pub fn arc(g: dwkit::Result<FiniteGroup>) -> Arc<FiniteGroup> {
    Arc::new(g.unwrap())
}

fn z(n: usize) -> FiniteGroup {
    cyclic(n).unwrap()
}

/// Builtin groups and products of builtins of order at most 16.
pub fn small_builtins() -> Vec<Arc<FiniteGroup>> {
    let mut out: Vec<Arc<FiniteGroup>> = (1..=16).map(|n| arc(cyclic(n))).collect();
    out.extend((2..=16).step_by(2).map(|o| arc(dihedral(o))));
    out.extend((1..=3).map(|n| arc(symmetric(n))));
    out.push(arc(pauli()));
    let products = [
        vec![z(2), z(2)],
        vec![z(2), z(4)],
        vec![z(2), z(2), z(2)],
        vec![z(3), z(3)],
        vec![z(2), z(6)],
        vec![z(4), z(4)],
        vec![z(2), z(8)],
        vec![z(2), z(2), z(4)],
        vec![z(2), z(2), z(2), z(2)],
        vec![z(2), symmetric(3).unwrap()],
        vec![dihedral(8).unwrap(), z(2)],
    ];
    out.extend(products.iter().map(|fs| arc(product(fs))));
    out
}

/// Groups of order at most 8, for the heavier property checks.
pub fn tiny_groups() -> Vec<Arc<FiniteGroup>> {
    let mut out: Vec<Arc<FiniteGroup>> = (1..=8).map(|n| arc(cyclic(n))).collect();
    out.push(arc(product(&[z(2), z(2)])));
    out.push(arc(product(&[z(2), z(4)])));
    out.push(arc(product(&[z(2), z(2), z(2)])));
    out.push(arc(symmetric(3)));
    out.push(arc(dihedral(8)));
    out
}

/// Cached `H^n(G; U(1))` keyed by group label.
pub fn cached_cohomology(g: &Arc<FiniteGroup>, n: usize) -> CohomologyGroup {
    static CACHE: OnceLock<Mutex<HashMap<(String, usize), CohomologyGroup>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (g.canonical_hash(), n);
    if let Some(h) = cache.lock().unwrap().get(&key) {
        return h.clone();
    }
    let h = cohomology(g, n).unwrap();
    cache.lock().unwrap().insert(key, h.clone());
    h
}

pub fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// A normalized cochain with pseudo-random values.
pub fn random_cochain(g: &Arc<FiniteGroup>, degree: usize, modulus: u64, seed: u64) -> Cochain {
    Cochain::from_fn(g.clone(), degree, modulus, |t| {
        let h = t.iter().fold(seed, |acc, &x| splitmix(acc ^ x as u64));
        (h % modulus) as i64
    })
}

// ---- oracles ----

/// Conjugacy class representatives by orbit enumeration.
pub fn class_reps(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        reps.push(x);
        for k in 0..n {
            seen[g.mul(g.mul(g.inv(k), x), k)] = true;
        }
    }
    reps
}

/// Number of pairwise commuting `n`-tuples.
pub fn commuting_tuple_count(g: &FiniteGroup, n: usize) -> u64 {
    fn go(g: &FiniteGroup, chosen: &mut Vec<usize>, n: usize) -> u64 {
        if chosen.len() == n {
            return 1;
        }
        let mut total = 0;
        for x in 0..g.order() {
            if chosen.iter().all(|&y| g.mul(x, y) == g.mul(y, x)) {
                chosen.push(x);
                total += go(g, chosen, n);
                chosen.pop();
            }
        }
        total
    }
    go(g, &mut Vec::new(), n)
}

/// Classes of `g` with `ω(g, h) = ω(h, g)` for every `h` commuting with `g`.
pub fn omega_regular_class_count(omega: &Cochain) -> u64 {
    let g = omega.group();
    class_reps(g)
        .into_iter()
        .filter(|&x| {
            (0..g.order())
                .filter(|&h| g.mul(x, h) == g.mul(h, x))
                .all(|h| omega.value(&[x, h]) == omega.value(&[h, x]))
        })
        .count() as u64
}

/// Twisted-double 2-cochain of a 3-cocycle at object `g` along `x` then `y`.
pub fn dpr_oracle(theta: &Cochain, g: usize, x: usize, y: usize) -> PhaseValue {
    let grp = theta.group();
    let conj = |k: usize| grp.mul(grp.mul(grp.inv(k), g), k);
    let xy = grp.mul(x, y);
    theta.value(&[g, x, y]) - theta.value(&[x, conj(x), y]) + theta.value(&[x, y, conj(xy)])
}

/// Every homomorphism between two small groups, by extension along
/// generators.
pub fn all_homs(src: &Arc<FiniteGroup>, tgt: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let gens = src.generators();
    let mut out = Vec::new();
    let total = tgt.order().pow(gens.len() as u32);
    'outer: for code in 0..total {
        let imgs: Vec<usize> = (0..gens.len()).map(|i| code / tgt.order().pow(i as u32) % tgt.order()).collect();
        let mut map = vec![usize::MAX; src.order()];
        map[src.identity()] = tgt.identity();
        let mut queue = vec![src.identity()];
        while let Some(u) = queue.pop() {
            for (s, &i) in gens.iter().zip(&imgs) {
                let v = src.mul(u, *s);
                let w = tgt.mul(map[u], i);
                if map[v] == usize::MAX {
                    map[v] = w;
                    queue.push(v);
                } else if map[v] != w {
                    continue 'outer;
                }
            }
        }
        if let Ok(h) = GroupHom::new(src.clone(), tgt.clone(), map) {
            out.push(h);
        }
    }
    out
}

// ---- fixtures ----

/// `ω'` over `ω` with `δω' = λ^*θ`, or `None` if the direct construction
/// does not close.
pub fn boundary_lift(ext: &Extension, omega: &Cochain, theta: &Cochain) -> Option<Cochain> {
    let w = solve_coboundary(&pullback(ext.lambda(), theta).unwrap(), None).ok()?;
    let r = pullback(ext.iota(), &w).unwrap().sub(omega).unwrap();
    let b = solve_coboundary(&r, None).ok()?;
    let back = ext.iota().inverse_table();
    let bh = Cochain::from_fn(ext.ghat().clone(), b.degree(), b.modulus(), |t| {
        let ds: Option<Vec<usize>> = t.iter().map(|&x| back[x]).collect();
        ds.map_or(0, |d| b.numerator_at(&d) as i64)
    });
    let w = w.sub(&coboundary(&bh)).unwrap();
    (pullback(ext.iota(), &w).unwrap() == *omega).then_some(w)
}

/// `Z_2 -> D_8 x Z_2 -> Z_2^3`, `D` the centre of `D_8`.
pub fn central_d8_z2() -> Extension {
    let gh = arc(product(&[dihedral(8).unwrap(), z(2)]));
    let g = arc(product(&[z(2), z(2), z(2)]));
    let iota = GroupHom::new(arc(cyclic(2)), gh.clone(), vec![0, 4]).unwrap();
    let lambda = (0..16)
        .map(|x| {
            let (d, c) = (x / 2, x % 2);
            4 * (d % 2) + 2 * (d / 4) + c
        })
        .collect();
    Extension::new(iota, GroupHom::new(gh, g, lambda).unwrap(), None).unwrap()
}

/// `a1 c2 (a3 + b3) / 2` on `Z_2^3`, with `x = 4a + 2b + c`. Pulls back to a coboundary on `D8 x Z2`.
pub fn type_three(g: &Arc<FiniteGroup>) -> Cochain {
    Cochain::from_fn(g.clone(), 3, 2, |t| ((t[0] / 4) * (t[1] % 2) * ((t[2] / 4 + t[2] / 2) % 2)) as i64)
}

/// A boundary pair `(ext, ω', θ)`.
pub struct PairFixture {
    pub name: String,
    pub ext: Extension,
    pub omega_prime: Cochain,
    pub theta: Cochain,
}

/// Pairs over `ω = 0` for every class of `H^3(G)` on extensions with
/// `|G| <= 4`, plus one type III class on the central `D_8 x Z_2` case.
pub fn pair_fixtures() -> &'static [PairFixture] {
    static PAIRS: OnceLock<Vec<PairFixture>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        let exts = [
            ("Z2->Z4->Z2", abelian_extension(2, 2).unwrap()),
            ("Z3->Z6->Z2", abelian_extension(3, 2).unwrap()),
            ("Z2->Z6->Z3", abelian_extension(2, 3).unwrap()),
            ("Z2->Z8->Z4", abelian_extension(2, 4).unwrap()),
            ("Z2^2->Z4^2->Z2^2", abelian_square_extension(2, 2).unwrap()),
        ];
        let mut out = Vec::new();
        for (name, ext) in exts {
            let h = cached_cohomology(ext.g(), 3);
            let omega = Cochain::zero(ext.d().clone(), 2, 1);
            for c in h.all_classes() {
                let theta = h.representative(&c);
                if let Some(w) = boundary_lift(&ext, &omega, &theta) {
                    out.push(PairFixture {
                        name: format!("{name} θ={c:?}"),
                        ext: ext.clone(),
                        omega_prime: w,
                        theta,
                    });
                }
            }
        }
        let ext = central_d8_z2();
        let theta = type_three(ext.g());
        let omega = Cochain::zero(ext.d().clone(), 2, 1);
        let w = boundary_lift(&ext, &omega, &theta).expect("type III class lifts");
        out.push(PairFixture {
            name: "Z2->D8xZ2->Z2^3 type III".into(),
            ext,
            omega_prime: w,
            theta,
        });
        out
    })
}

/// Catalog cocycles used for the state-space checks.
pub fn catalog_cases() -> Vec<(String, Cochain)> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for k in 0..n {
            out.push((format!("omega2 n={n} k={k}"), catalog_cocycle("omega2", &json!({"n": n, "k": k})).unwrap()));
        }
    }
    for k in 0..2 {
        out.push((format!("omega_d8 k={k}"), catalog_cocycle("omega_d8", &json!({"k": k})).unwrap()));
    }
    for n in 1..=4 {
        for k in 0..n {
            out.push((format!("omega3 n={n} k={k}"), catalog_cocycle("omega3", &json!({"n": n, "k": k})).unwrap()));
        }
    }
    out
}

/// Central extensions with a cocycle that has a closed lift.
pub fn coherent_cases() -> Vec<(String, Extension, Cochain)> {
    let mut out = Vec::new();
    for (n, m) in [(2, 2), (3, 2), (2, 3), (4, 2)] {
        for k in 0..n {
            let w = catalog_cocycle("omega3", &json!({"n": n, "k": k})).unwrap();
            out.push((format!("Z{n}->Z{}->Z{m} omega3 k={k}", n * m), abelian_extension(n, m).unwrap(), w));
        }
    }
    for (n, m, k) in [(2, 3, 1), (3, 2, 1), (3, 2, 2), (2, 2, 0)] {
        let w = catalog_cocycle("omega2", &json!({"n": n, "k": k})).unwrap();
        out.push((format!("Z{n}^2->Z{}^2->Z{m}^2 omega2 k={k}", n * m), abelian_square_extension(n, m).unwrap(), w));
    }
    out
}

// ---- property checks ----

pub fn check_coboundary_squared(g: &Arc<FiniteGroup>, degree: usize, modulus: u64, seed: u64) -> Result<(), TestCaseError> {
    let c = random_cochain(g, degree, modulus, seed);
    let dd = coboundary(&coboundary(&c));
    prop_assert!(dd.is_zero(), "δδc != 0 on {} in degree {}", g.label(), degree);
    Ok(())
}

fn primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    out
}

/// Each generator is a cocycle whose class has exactly the stated order.
pub fn check_generator_orders(g: &Arc<FiniteGroup>, degree: usize) -> Result<(), TestCaseError> {
    let h = cached_cohomology(g, degree);
    prop_assert_eq!(h.generators().len(), h.invariant_factors().len());
    for (gen, &f) in h.generators().iter().zip(h.invariant_factors()) {
        prop_assert!(gen.is_cocycle());
        prop_assert!(is_cohomologous_to_zero(&gen.scale(f as i64)).unwrap());
        for p in primes(f) {
            prop_assert!(
                !is_cohomologous_to_zero(&gen.scale((f / p) as i64)).unwrap(),
                "generator of order {} on {} dies at {}",
                f,
                g.label(),
                f / p
            );
        }
    }
    Ok(())
}

fn invariant_weight(space: &GaugeGroupoid, y: usize, seed: u64) -> i64 {
    let orbit_min = (0..space.group().order()).map(|k| space.act(y, k)).min().unwrap();
    (splitmix(seed ^ orbit_min as u64) % 7) as i64 - 3
}

/// `∫_X F^*f = ∫_Y f |F^{-1}(y)|` for the functor `Bun_H(T^d) -> Bun_G(T^d)`
/// of a homomorphism, and `|X| = ∫_Y |F^{-1}(y)|`.
pub fn check_cavalieri(hom: &GroupHom, dim: usize, seed: u64) -> Result<(), TestCaseError> {
    let x = gauge_groupoid(hom.source(), dim).unwrap();
    let y = gauge_groupoid(hom.target(), dim).unwrap();
    let f = gauge_functor(hom, &x, &y).unwrap();
    let fibres: Vec<Ratio<i64>> = (0..y.tuples().len()).map(|o| cardinality(&homotopy_fiber(&f, o))).collect();
    let lhs = integrate(x.groupoid(), |o| CycloNumber::from_integer(invariant_weight(&y, f.on_object(o), seed))).unwrap();
    let rhs = integrate(y.groupoid(), |o| {
        CycloNumber::from_rational(fibres[o] * Ratio::from_integer(invariant_weight(&y, o, seed)))
    })
    .unwrap();
    prop_assert!(lhs.exact_eq(&rhs), "generalized Cavalieri: {} vs {}", lhs, rhs);
    let total = integrate(y.groupoid(), |o| CycloNumber::from_rational(fibres[o])).unwrap();
    prop_assert!(total.exact_eq(&CycloNumber::from_rational(cardinality(x.groupoid()))));
    Ok(())
}

/// `Z(φ) = Z(k^{-1} φ k)` for a boundary pair.
pub fn check_relative_gauge_invariance(p: &PairFixture, phi: usize, k: usize) -> Result<(), TestCaseError> {
    let g = p.ext.g();
    let tuples = dwkit::groupoids::commuting_tuples(g, p.omega_prime.degree());
    let t = &tuples[phi % tuples.len()];
    let k = k % g.order();
    let moved: Vec<usize> = t.iter().map(|&x| g.mul(g.mul(g.inv(k), x), k)).collect();
    let a = relative_partition_torus(&p.ext, &p.omega_prime, &p.theta, t).unwrap();
    let b = relative_partition_torus(&p.ext, &p.omega_prime, &p.theta, &moved).unwrap();
    prop_assert!(a.exact_eq(&b), "{}: Z({:?}) = {} but Z({:?}) = {}", p.name, t, a, moved, b);
    Ok(())
}

/// `τθ` is closed and `τ^n θ` is the torus holonomy.
pub fn check_transgression(g: &Arc<FiniteGroup>, degree: usize, seed: u64) -> Result<(), TestCaseError> {
    let h = cached_cohomology(g, degree);
    let coeffs: Vec<u64> = h
        .invariant_factors()
        .iter()
        .enumerate()
        .map(|(i, &f)| splitmix(seed ^ i as u64) % f)
        .collect();
    let theta = h.representative(&coeffs);
    prop_assert!(transgress_circle(&theta).unwrap().is_cocycle());
    let top = transgress_iterated(&theta, degree).unwrap();
    prop_assert_eq!(top.degree(), 0);
    for (x, t) in top.space().tuples().iter().enumerate() {
        prop_assert_eq!(top.value(x, &[]), torus_holonomy(&theta, t).unwrap());
    }
    Ok(())
}

pub fn check_state_dimension(theta: &Cochain) -> Result<(), TestCaseError> {
    let dim = state_space_torus(theta).unwrap().dimension() as u64;
    prop_assert_eq!(dim, dw_torus_count(theta).unwrap());
    Ok(())
}

/// With `Φ_g` read off a closed lift the action composes exactly.
pub fn check_symmetry_composition(ext: &Extension, omega: &Cochain) -> Result<(), TestCaseError> {
    let lift = find_closed_lift(ext, omega, None).unwrap();
    let phi = fixed_point_family_from_lift(ext, &lift).unwrap();
    let alpha = cocycle_from_extension(ext).unwrap().alphas().to_vec();
    let state = state_space_torus(omega).unwrap();
    let g = ext.g();
    let rho = symmetry_action(&state, g, &alpha, &phi).unwrap();
    prop_assert!(rho.is_representation());
    for a in 0..g.order() {
        for b in 0..g.order() {
            prop_assert_eq!(rho.matrix(a).mul(rho.matrix(b)), rho.matrix(g.mul(a, b)).clone());
        }
    }
    Ok(())
}

// ---- strategies ----

pub fn tiny_group() -> impl Strategy<Value = Arc<FiniteGroup>> {
    let gs = tiny_groups();
    (0..gs.len()).prop_map(move |i| gs[i].clone())
}

pub fn hom_between_tiny_groups() -> impl Strategy<Value = GroupHom> {
    let gs: Vec<Arc<FiniteGroup>> = tiny_groups().into_iter().filter(|g| g.order() <= 6 || g.order() == 8).collect();
    (0..gs.len(), 0..gs.len(), any::<u64>()).prop_map(move |(i, j, pick)| {
        let homs = all_homs(&gs[i], &gs[j]);
        homs[(pick % homs.len() as u64) as usize].clone()
    })
}

pub fn pair_and_probe() -> impl Strategy<Value = (usize, usize, usize)> {
    (0..pair_fixtures().len(), any::<usize>(), any::<usize>())
}
