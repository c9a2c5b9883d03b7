//! Exact elements of the cyclotomic field `Q(ζ_M)` kept as rational multiples
//! of group-ring vectors in `Z[Z_M]`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num::integer::Integer;
use num::rational::Ratio;

use super::phase::PhaseValue;

/// `(1/denominator) * Σ_r coeffs[r] ζ_M^r`.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    modulus: u64,
    denominator: u64,
    coeffs: Vec<i64>,
}

impl CycloNumber {
    pub fn zero() -> Self {
        CycloNumber {
            modulus: 1,
            denominator: 1,
            coeffs: vec![0],
        }
    }

    pub fn from_phase(p: PhaseValue) -> Self {
        let mut coeffs = vec![0; p.modulus() as usize];
        coeffs[p.numerator() as usize] = 1;
        CycloNumber {
            modulus: p.modulus(),
            denominator: 1,
            coeffs,
        }
    }

    pub fn from_integer(k: i64) -> Self {
        CycloNumber {
            modulus: 1,
            denominator: 1,
            coeffs: vec![k],
        }
    }

    pub fn from_rational(r: Ratio<i64>) -> Self {
        CycloNumber {
            modulus: 1,
            denominator: *r.denom() as u64,
            coeffs: vec![*r.numer()],
        }
    }

    /// Group-ring counts over `Z_M`: `counts[r]` copies of `ζ_M^r`.
    pub fn from_counts(modulus: u64, counts: Vec<i64>) -> Self {
        assert_eq!(counts.len() as u64, modulus);
        CycloNumber {
            modulus,
            denominator: 1,
            coeffs: counts,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn counts(&self) -> &[i64] {
        &self.coeffs
    }

    fn rescaled(&self, modulus: u64, denominator: u64) -> Vec<i64> {
        let step = (modulus / self.modulus) as usize;
        let factor = (denominator / self.denominator) as i64;
        let mut out = vec![0; modulus as usize];
        for (r, &c) in self.coeffs.iter().enumerate() {
            out[r * step] += c * factor;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        let d = self.denominator.lcm(&other.denominator);
        let a = self.rescaled(m, d);
        let b = other.rescaled(m, d);
        CycloNumber {
            modulus: m,
            denominator: d,
            coeffs: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CycloNumber {
            modulus: self.modulus,
            denominator: self.denominator,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiply by `ζ^p`.
    pub fn rotate(&self, p: PhaseValue) -> Self {
        let m = self.modulus.lcm(&p.modulus());
        let mut base = self.rescaled(m, self.denominator);
        let shift = (p.numerator() * (m / p.modulus())) as usize;
        base.rotate_right(shift % m as usize);
        CycloNumber {
            modulus: m,
            denominator: self.denominator,
            coeffs: base,
        }
    }

    pub fn div_integer(&self, k: u64) -> Self {
        CycloNumber {
            modulus: self.modulus,
            denominator: self.denominator * k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale_integer(&self, k: i64) -> Self {
        CycloNumber {
            modulus: self.modulus,
            denominator: self.denominator,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Coefficients of the numerator reduced modulo the cyclotomic polynomial
    /// `Φ_M`: the unique representative of degree below `φ(M)`.
    pub fn reduced_numerator(&self) -> Vec<i128> {
        let phi = cyclotomic_polynomial(self.modulus);
        let mut p: Vec<i128> = self.coeffs.iter().map(|&c| c as i128).collect();
        let deg = phi.len() - 1;
        for top in (deg..p.len()).rev() {
            let c = p[top];
            if c != 0 {
                for (i, &f) in phi.iter().enumerate() {
                    p[top - deg + i] -= c * f;
                }
            }
        }
        p.truncate(deg.max(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.reduced_numerator().iter().all(|&c| c == 0)
    }

    /// `Some(q)` when the number is rational.
    pub fn as_rational(&self) -> Option<Ratio<i128>> {
        let r = self.reduced_numerator();
        r[1..]
            .iter()
            .all(|&c| c == 0)
            .then(|| Ratio::new(r[0], self.denominator as i128))
    }

    pub fn as_integer(&self) -> Option<i128> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn exact_eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            if q.is_integer() {
                return write!(f, "{}", q.to_integer());
            }
            return write!(f, "{}/{}", q.numer(), q.denom());
        }
        let terms: Vec<String> = self
            .reduced_numerator()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(r, c)| format!("{c}*z^{r}"))
            .collect();
        write!(f, "({})/{} with z = exp(2 pi i/{})", terms.join(" + "), self.denominator, self.modulus)
    }
}

static CYCLOTOMIC_CACHE: Mutex<Option<HashMap<u64, Vec<i128>>>> = Mutex::new(None);

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i128> {
    if let Some(p) = CYCLOTOMIC_CACHE.lock().unwrap().as_ref().and_then(|m| m.get(&n)) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = divide_monic(&p, &cyclotomic_polynomial(d));
        }
    }
    CYCLOTOMIC_CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(n, p.clone());
    p
}

fn divide_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i128; num.len() - dd];
    for top in (dd..num.len()).rev() {
        let c = rem[top];
        q[top - dd] = c;
        if c != 0 {
            for (i, &f) in den.iter().enumerate() {
                rem[top - dd + i] -= c * f;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let s = CycloNumber::from_counts(6, vec![1; 6]);
        assert!(s.is_zero());
        let t = CycloNumber::from_counts(4, vec![3, 1, 1, 1]);
        assert_eq!(t.as_integer(), Some(2));
    }

    #[test]
    fn non_rational_detected() {
        let z = CycloNumber::from_phase(PhaseValue::new(1, 4));
        assert!(z.as_rational().is_none());
        let w = z.add(&CycloNumber::from_phase(PhaseValue::new(3, 4)));
        assert_eq!(w.as_integer(), Some(0));
    }

    #[test]
    fn mixed_moduli_and_denominators() {
        let a = CycloNumber::from_phase(PhaseValue::new(1, 2)).div_integer(2);
        let b = CycloNumber::from_rational(Ratio::new(1, 3));
        assert_eq!(a.add(&b).as_rational(), Some(Ratio::new(-1, 6)));
    }
}
