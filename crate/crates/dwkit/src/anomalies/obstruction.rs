use std::fmt;
use std::time::Instant;

use log::info;
use num::integer::Integer;

use super::extension::Extension;
use super::system::BlockSystem;
use crate::algebra::{GroupHom, IntMatrix};
use crate::cochains::{
    coboundary, coboundary_matrix, cohomology, interval_pairing, pullback, pullback_matrix, solve_coboundary, Cochain,
};
use crate::error::{Error, Result};

/// Outcome of the obstruction pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    AnomalyFree,
    ThooftAnomalousWithBulk,
    InvarianceFails,
    FirstObstructionFails,
    /// The first obstruction vanishes but no boundary pair exists at the
    /// working modulus.
    HigherObstructionFails,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::AnomalyFree => "anomaly_free",
            Verdict::ThooftAnomalousWithBulk => "thooft_anomalous_with_bulk",
            Verdict::InvarianceFails => "invariance_fails",
            Verdict::FirstObstructionFails => "first_obstruction_fails",
            Verdict::HigherObstructionFails => "higher_obstruction_fails",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `ω'` on `Ĝ` and `θ` on `G` with `ι^*ω' = ω`, `δω' = λ^*θ`, `δθ = 0`.
#[derive(Clone, Debug)]
pub struct BoundaryPair {
    pub omega_prime: Cochain,
    pub theta: Cochain,
    /// Invariant factors of `H^{n+1}(G; U(1))`.
    pub theta_factors: Vec<u64>,
    /// Coordinates of `[θ]` against those factors.
    pub theta_class: Vec<u64>,
}

impl BoundaryPair {
    pub fn theta_is_trivial(&self) -> bool {
        self.theta_class.iter().all(|&k| k == 0)
    }

    /// Re-check the defining equations.
    pub fn verify(&self, ext: &Extension, omega: &Cochain) -> Result<()> {
        verify_boundary_pair(ext, omega, &self.omega_prime, &self.theta)
    }
}

pub(crate) fn verify_boundary_pair(ext: &Extension, omega: &Cochain, omega_prime: &Cochain, theta: &Cochain) -> Result<()> {
    let bad = |m: &str| Err(Error::NotABoundaryPair(m.into()));
    if omega_prime.degree() != omega.degree() || theta.degree() != omega.degree() + 1 {
        return bad("degrees do not match");
    }
    if pullback(ext.iota(), omega_prime)? != *omega {
        return bad("ι^*ω' differs from ω");
    }
    if coboundary(omega_prime) != pullback(ext.lambda(), theta)? {
        return bad("δω' differs from λ^*θ");
    }
    if !theta.is_cocycle() {
        return bad("θ is not closed");
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub degree: usize,
    /// Working modulus of the lift searches.
    pub modulus: u64,
    pub invariant_class: bool,
    /// `Φ'_g` with `δΦ'_g = ω - α(g^{-1})^*ω`.
    pub invariance_witnesses: Option<Vec<Cochain>>,
    pub first_obstruction_trivial: Option<bool>,
    /// A coherent family `Φ_g` when the first obstruction vanishes.
    pub fixed_point_family: Option<Vec<Cochain>>,
    pub closed_lift: Option<Cochain>,
    pub boundary_pair: Option<BoundaryPair>,
    pub verdict: Verdict,
}

fn ensure_on_d(ext: &Extension, omega: &Cochain) -> Result<()> {
    if **omega.group() != **ext.d() {
        return Err(Error::GroupMismatch("ω must live on D".into()));
    }
    omega.ensure_cocycle()
}

/// `α(g)` as automorphisms of `D`.
pub(crate) fn alphas(ext: &Extension) -> Result<Vec<GroupHom>> {
    let (ghat, d) = (ext.ghat(), ext.d());
    let back = ext.iota().inverse_table();
    (0..ext.g().order())
        .map(|g| {
            let map = (0..d.order())
                .map(|x| back[ghat.conj(ext.s(g), ext.iota().apply(x))].expect("ι(D) is normal"))
                .collect();
            GroupHom::new(d.clone(), d.clone(), map)
        })
        .collect()
}

/// Solve `δΦ'_g = ω - α(g^{-1})^*ω` for every `g`; `None` when some `g` moves the class.
pub fn is_invariant_class(ext: &Extension, omega: &Cochain) -> Result<Option<Vec<Cochain>>> {
    ensure_on_d(ext, omega)?;
    let g = ext.g();
    let alpha = alphas(ext)?;
    let mut out = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let y = omega.sub(&pullback(&alpha[g.inv(x)], omega)?)?;
        match solve_coboundary(&y, None) {
            Ok(phi) => out.push(phi),
            Err(e) if e.is_no_solution() => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(out))
}

/// `U(g1,g2) = Φ_{g1} + α(g1^{-1})^*Φ_{g2} - Φ_{g1g2} - β^*(P_s ω)` with
/// `β = α((g1g2)^{-1})`, `s = σ(g2^{-1}, g1^{-1})` and `P_s` the interval
/// pairing on `D`, so that `δU = 0`. Indexed by `g1·|G| + g2`.
pub fn coherence_defect(ext: &Extension, omega: &Cochain, family: &[Cochain]) -> Result<Vec<Cochain>> {
    ensure_on_d(ext, omega)?;
    let (g, d) = (ext.g(), ext.d());
    let alpha = alphas(ext)?;
    let back = ext.iota().inverse_table();
    let ghat = ext.ghat();
    let id = GroupHom::identity(d.clone());
    let mut out = Vec::with_capacity(g.order() * g.order());
    for g1 in 0..g.order() {
        for g2 in 0..g.order() {
            let (i1, i2) = (g.inv(g1), g.inv(g2));
            let s_hat = ghat.mul(ghat.mul(ext.s(i2), ext.s(i1)), ghat.inv(ext.s(g.mul(i2, i1))));
            let s = back[s_hat].expect("σ lands in ι(D)");
            let p = pullback(&alpha[g.inv(g.mul(g1, g2))], &interval_pairing(omega, s, &id)?)?;
            let u = family[g1]
                .add(&pullback(&alpha[i1], &family[g2])?)?
                .sub(&family[g.mul(g1, g2)])?
                .sub(&p)?;
            if !u.is_cocycle() {
                return Err(Error::IncompatiblePhases(format!("U({g1},{g2}) is not closed")));
            }
            out.push(u);
        }
    }
    Ok(out)
}

fn lcm_moduli<'a>(cs: impl IntoIterator<Item = &'a Cochain>) -> u64 {
    cs.into_iter().fold(1u64, |m, c| m.lcm(&c.minimal_modulus()))
}

fn scaled(c: &Cochain, modulus: u64) -> Vec<i64> {
    let c = c.with_modulus(modulus).expect("modulus is a multiple of the denominators");
    c.numerators().iter().map(|&v| v as i64).collect()
}

/// Whether the corrections `z_g ∈ Z^{n-1}(D)` can make every `U(g1,g2)`
/// exact. Returns the corrected family `Φ'_g + z_g` on success.
pub fn is_first_obstruction_trivial(
    ext: &Extension,
    omega: &Cochain,
    witnesses: &[Cochain],
    modulus: Option<u64>,
) -> Result<Option<Vec<Cochain>>> {
    let u = coherence_defect(ext, omega, witnesses)?;
    let (g, d) = (ext.g(), ext.d());
    let n = omega.degree();
    if n == 0 {
        return Ok(Some(witnesses.to_vec()));
    }
    let big = match modulus {
        Some(m) => m.lcm(&lcm_moduli(&u)),
        None => lcm_moduli(u.iter().chain(witnesses)) * d.order() as u64,
    };
    let alpha = alphas(ext)?;
    let len = crate::cochains::BarIndex::new(d).len(n - 1);
    let mut sys = BlockSystem::new();
    let z: Vec<usize> = (0..g.order()).map(|_| sys.block(len)).collect();
    let id = IntMatrix::identity(len);
    let dz = coboundary_matrix(d, n - 1);
    let dy = (n >= 2).then(|| coboundary_matrix(d, n - 2));
    let pulls: Vec<IntMatrix> = alpha.iter().map(|a| pullback_matrix(a, n - 1)).collect();
    for g1 in 0..g.order() {
        for g2 in 0..g.order() {
            let rhs: Vec<i64> = scaled(&u[g1 * g.order() + g2], big).iter().map(|v| -v).collect();
            let mut parts = vec![
                (z[g1], &id, 1),
                (z[g2], &pulls[g.inv(g1)], 1),
                (z[g.mul(g1, g2)], &id, -1),
            ];
            if let Some(dy) = &dy {
                let y = sys.block(dy.cols());
                parts.push((y, dy, -1));
            }
            sys.equations(&parts, &rhs);
        }
    }
    for &off in &z {
        sys.equations(&[(off, &dz, 1)], &vec![0; dz.rows()]);
    }
    let x = match sys.solve(big) {
        Ok(x) => x,
        Err(e) if e.is_no_solution() => return Ok(None),
        Err(e) => return Err(e),
    };
    let family = witnesses
        .iter()
        .zip(&z)
        .map(|(phi, &off)| {
            let zc = Cochain::from_numerators(d.clone(), n - 1, big, &x[off..off + len]);
            phi.add(&zc).map(|c| c.reduced())
        })
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(coherence_defect(ext, omega, &family)?
        .iter()
        .all(|u| solve_coboundary(u, None).is_ok()));
    Ok(Some(family))
}

/// `Φ_g = P_{s(g^{-1})} ω̂` restricted along `ι`, for a closed lift `ω̂`.
pub fn fixed_point_family_from_lift(ext: &Extension, omega_hat: &Cochain) -> Result<Vec<Cochain>> {
    let g = ext.g();
    (0..g.order())
        .map(|x| interval_pairing(omega_hat, ext.s(g.inv(x)), ext.iota()))
        .collect()
}

/// Default working modulus of the lift searches, `lcm(denominators of ω)·|Ĝ|`.
pub fn lift_modulus(ext: &Extension, omega: &Cochain) -> u64 {
    omega.minimal_modulus() * ext.ghat().order() as u64
}

fn working(ext: &Extension, omega: &Cochain, modulus: Option<u64>) -> u64 {
    match modulus {
        Some(m) => m.lcm(&omega.minimal_modulus()),
        None => lift_modulus(ext, omega),
    }
}

/// A cocycle `ω̂` on `Ĝ` with `ι^*ω̂ = ω`, solved over `Z/M`.
pub fn find_closed_lift(ext: &Extension, omega: &Cochain, modulus: Option<u64>) -> Result<Cochain> {
    ensure_on_d(ext, omega)?;
    let n = omega.degree();
    let big = working(ext, omega, modulus);
    let start = Instant::now();
    let mut sys = BlockSystem::new();
    let dw = coboundary_matrix(ext.ghat(), n);
    let w = sys.block(dw.cols());
    sys.equations(&[(w, &dw, 1)], &vec![0; dw.rows()]);
    sys.equations(&[(w, &pullback_matrix(ext.iota(), n), 1)], &scaled(omega, big));
    let x = sys.solve(big);
    info!("closed lift search over Z/{big}: {:?}", start.elapsed());
    let lift = Cochain::from_numerators(ext.ghat().clone(), n, big, &x?).reduced();
    if !lift.is_cocycle() || pullback(ext.iota(), &lift)? != *omega {
        return Err(Error::NotACocycle("closed lift failed verification".into()));
    }
    Ok(lift)
}

/// A boundary pair `(ω', θ)`, solved jointly over `Z/M`.
pub fn find_boundary_pair(ext: &Extension, omega: &Cochain, modulus: Option<u64>) -> Result<BoundaryPair> {
    ensure_on_d(ext, omega)?;
    let n = omega.degree();
    let big = working(ext, omega, modulus);
    let start = Instant::now();
    let mut sys = BlockSystem::new();
    let dw = coboundary_matrix(ext.ghat(), n);
    let dt = coboundary_matrix(ext.g(), n + 1);
    let lam = pullback_matrix(ext.lambda(), n + 1);
    let w = sys.block(dw.cols());
    let t = sys.block(dt.cols());
    sys.equations(&[(w, &pullback_matrix(ext.iota(), n), 1)], &scaled(omega, big));
    sys.equations(&[(w, &dw, 1), (t, &lam, -1)], &vec![0; dw.rows()]);
    sys.equations(&[(t, &dt, 1)], &vec![0; dt.rows()]);
    let x = sys.solve(big);
    info!("boundary pair search over Z/{big}: {:?}", start.elapsed());
    let x = x?;
    let omega_prime = Cochain::from_numerators(ext.ghat().clone(), n, big, &x[w..t]).reduced();
    let theta = Cochain::from_numerators(ext.g().clone(), n + 1, big, &x[t..]).reduced();
    verify_boundary_pair(ext, omega, &omega_prime, &theta)?;
    let h = cohomology(ext.g(), n + 1)?;
    let theta_class = h.classify(&theta)?;
    Ok(BoundaryPair {
        omega_prime,
        theta,
        theta_factors: h.invariant_factors().to_vec(),
        theta_class,
    })
}

fn no_solution_to_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(e) if e.is_no_solution() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Invariance, first obstruction, closed lift and boundary pair, in order.
/// `multiplier` scales the default working modulus.
pub fn anomaly_report(ext: &Extension, omega: &Cochain, multiplier: u64) -> Result<ObstructionReport> {
    ensure_on_d(ext, omega)?;
    let modulus = lift_modulus(ext, omega) * multiplier.max(1);
    let mut report = ObstructionReport {
        degree: omega.degree(),
        modulus,
        invariant_class: false,
        invariance_witnesses: None,
        first_obstruction_trivial: None,
        fixed_point_family: None,
        closed_lift: None,
        boundary_pair: None,
        verdict: Verdict::InvarianceFails,
    };
    let Some(witnesses) = is_invariant_class(ext, omega)? else {
        return Ok(report);
    };
    report.invariant_class = true;
    report.invariance_witnesses = Some(witnesses.clone());
    let first_modulus = (multiplier > 1).then(|| lcm_moduli(&witnesses).lcm(&omega.minimal_modulus()) * ext.d().order() as u64 * multiplier);
    let family = is_first_obstruction_trivial(ext, omega, &witnesses, first_modulus)?;
    report.first_obstruction_trivial = Some(family.is_some());
    if family.is_none() {
        report.verdict = Verdict::FirstObstructionFails;
        return Ok(report);
    }
    report.fixed_point_family = family;
    if let Some(lift) = no_solution_to_none(find_closed_lift(ext, omega, Some(modulus)))? {
        let theta = Cochain::zero(ext.g().clone(), omega.degree() + 1, 1);
        let h = cohomology(ext.g(), omega.degree() + 1)?;
        report.boundary_pair = Some(BoundaryPair {
            omega_prime: lift.clone(),
            theta_class: vec![0; h.invariant_factors().len()],
            theta_factors: h.invariant_factors().to_vec(),
            theta,
        });
        report.closed_lift = Some(lift);
        report.verdict = Verdict::AnomalyFree;
        return Ok(report);
    }
    report.boundary_pair = no_solution_to_none(find_boundary_pair(ext, omega, Some(modulus)))?;
    report.verdict = if report.boundary_pair.is_some() {
        Verdict::ThooftAnomalousWithBulk
    } else {
        Verdict::HigherObstructionFails
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anomalies::extension::{abelian_extension, abelian_square_extension, pauli_extension};
    use crate::cochains::{catalog_cocycle, is_cohomologous_to_zero};
    use serde_json::json;

    #[test]
    fn zero_cocycle_lifts() {
        let ext = pauli_extension().unwrap();
        let w = Cochain::zero(ext.d().clone(), 2, 1);
        assert!(find_closed_lift(&ext, &w, None).unwrap().is_zero());
        let r = anomaly_report(&ext, &w, 1).unwrap();
        assert_eq!(r.verdict, Verdict::AnomalyFree);
    }

    #[test]
    fn pauli_case() {
        let ext = pauli_extension().unwrap();
        let w = catalog_cocycle("omega_d8", &json!({"k": 1})).unwrap();
        assert!(is_invariant_class(&ext, &w).unwrap().is_some());
        assert!(find_closed_lift(&ext, &w, None).unwrap_err().is_no_solution());
        let r = anomaly_report(&ext, &w, 1).unwrap();
        assert_eq!(r.first_obstruction_trivial, Some(false));
        assert_eq!(r.verdict, Verdict::FirstObstructionFails);
        assert!(find_boundary_pair(&ext, &w, None).unwrap_err().is_no_solution());
    }

    /// The Pauli extension splits, so `λ^*` is injective on cohomology and a
    /// boundary pair would force `θ` to be exact.
    #[test]
    fn pauli_extension_splits() {
        let ext = pauli_extension().unwrap();
        let gh = ext.ghat();
        let split = (0..gh.order()).find(|&x| ext.lambda().apply(x) == 1 && gh.element_order(x) == 2);
        assert!(split.is_some());
        let h = cohomology(ext.g(), 3).unwrap();
        let theta = h.representative(&[1]);
        let pulled = pullback(ext.lambda(), &theta).unwrap();
        assert!(!crate::cochains::bockstein_is_coboundary(&pulled).unwrap());
    }

    #[test]
    fn square_two_two() {
        let ext = abelian_square_extension(2, 2).unwrap();
        let w = catalog_cocycle("omega2", &json!({"n": 2, "k": 1})).unwrap();
        let r = anomaly_report(&ext, &w, 1).unwrap();
        assert!(r.invariant_class);
        assert_eq!(r.verdict, Verdict::FirstObstructionFails);
        assert!(find_boundary_pair(&ext, &w, None).unwrap_err().is_no_solution());
    }

    #[test]
    fn cyclic_degree_three_lifts() {
        let ext = abelian_extension(2, 2).unwrap();
        let w = catalog_cocycle("omega3", &json!({"n": 2, "k": 1})).unwrap();
        let lift = find_closed_lift(&ext, &w, None).unwrap();
        let family = fixed_point_family_from_lift(&ext, &lift).unwrap();
        for u in coherence_defect(&ext, &w, &family).unwrap() {
            assert!(is_cohomologous_to_zero(&u).unwrap());
        }
        assert_eq!(anomaly_report(&ext, &w, 1).unwrap().verdict, Verdict::AnomalyFree);
    }
}
