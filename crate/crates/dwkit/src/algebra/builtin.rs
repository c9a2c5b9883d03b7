//! Named groups: cyclic, direct products, dihedral, symmetric and the Pauli group.

use serde_json::Value;

use super::group::{FiniteGroup, GroupShape};
use crate::error::{Error, Result};

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::UnknownBuiltin("cyclic(0)".into()));
    }
    let table = (0..n)
        .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
        .collect();
    FiniteGroup::new(n, table, format!("Z{n}"), None, GroupShape::Cyclic(n))
}

/// Direct product; element `(x_1, .., x_k)` has mixed-radix index with the
/// first factor most significant. Labels join the factor labels with commas.
pub fn product(factors: &[FiniteGroup]) -> Result<FiniteGroup> {
    if factors.is_empty() {
        return cyclic(1);
    }
    let order: usize = factors.iter().map(|f| f.order()).product();
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; factors.len()];
        for (i, f) in factors.iter().enumerate().rev() {
            d[i] = x % f.order();
            x /= f.order();
        }
        d
    };
    let index = |d: &[usize]| -> usize { d.iter().zip(factors).fold(0, |acc, (&x, f)| acc * f.order() + x) };
    let decoded: Vec<Vec<usize>> = (0..order).map(digits).collect();
    let mut table = Vec::with_capacity(order * order);
    for a in &decoded {
        for b in &decoded {
            let c: Vec<usize> = a
                .iter()
                .zip(b)
                .zip(factors)
                .map(|((&x, &y), f)| f.mul(x, y))
                .collect();
            table.push(index(&c) as u32);
        }
    }
    let labels = decoded
        .iter()
        .map(|d| {
            d.iter()
                .zip(factors)
                .map(|(&x, f)| f.element_label(x).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let label = factors.iter().map(|f| f.label().to_string()).collect::<Vec<_>>().join("x");
    let shape = GroupShape::Product(factors.iter().map(|f| f.shape().clone()).collect());
    FiniteGroup::new(order, table, label, Some(labels), shape)
}

/// Dihedral group of order `2n` with `a^n = b^2 = 1`, `b a b^{-1} = a^{-1}`.
/// Element `a^i b^j` has index `i + n*j` and label `i,j`.
pub fn dihedral(order: usize) -> Result<FiniteGroup> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::UnknownBuiltin(format!("dihedral({order})")));
    }
    let n = order / 2;
    let mul = |(i, j): (usize, usize), (k, l): (usize, usize)| -> (usize, usize) {
        let k = if j == 0 { k } else { (n - k) % n };
        ((i + k) % n, (j + l) % 2)
    };
    let elems: Vec<(usize, usize)> = (0..order).map(|x| (x % n, x / n)).collect();
    let table = elems
        .iter()
        .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
        .map(|(a, b)| {
            let (i, j) = mul(a, b);
            (i + n * j) as u32
        })
        .collect();
    let labels = elems.iter().map(|(i, j)| format!("{i},{j}")).collect();
    FiniteGroup::new(order, table, format!("D{order}"), Some(labels), GroupShape::Dihedral(order))
}

/// `D8 x| Z2` with the generator of `Z2` acting by conjugation with `a`.
/// Element `(a^i b^j, k)` has index `2*(i + 4j) + k` and label `i,j,k`.
pub fn pauli() -> Result<FiniteGroup> {
    let d8 = dihedral(8)?;
    let a = 1;
    let act = |k: usize, d: usize| if k == 0 { d } else { d8.conj(a, d) };
    let mut table = Vec::with_capacity(256);
    for x in 0..16 {
        for y in 0..16 {
            let (d1, k1) = (x / 2, x % 2);
            let (d2, k2) = (y / 2, y % 2);
            let d = d8.mul(d1, act(k1, d2));
            table.push((2 * d + (k1 + k2) % 2) as u32);
        }
    }
    let labels = (0..16)
        .map(|x| format!("{},{}", d8.element_label(x / 2), x % 2))
        .collect();
    FiniteGroup::new(16, table, "P1".into(), Some(labels), GroupShape::Pauli)
}

/// Symmetric group on `n` letters, permutations in lexicographic order,
/// composed as `(s t)(x) = s(t(x))`. Labels are the one-line images.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 6 {
        return Err(Error::UnknownBuiltin(format!("symmetric({n})")));
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    perms.sort();
    let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    let mut table = Vec::with_capacity(perms.len() * perms.len());
    for s in &perms {
        for t in &perms {
            let st: Vec<usize> = (0..n).map(|x| s[t[x]]).collect();
            table.push(index(&st) as u32);
        }
    }
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
        .collect();
    FiniteGroup::new(perms.len(), table, format!("S{n}"), Some(labels), GroupShape::Symmetric(n))
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

fn param_usize(params: &Value, key: &str, name: &str) -> Result<usize> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Format(format!("builtin `{name}` needs integer param `{key}`")))
}

fn check_keys(params: &Value, allowed: &[&str], name: &str) -> Result<()> {
    match params {
        Value::Null => Ok(()),
        Value::Object(map) => match map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Format(format!("unknown param `{k}` for builtin `{name}`"))),
            None => Ok(()),
        },
        _ => Err(Error::Format(format!("params of builtin `{name}` must be an object"))),
    }
}

/// Construct a builtin by name. `params` follows the group file format:
/// `cyclic {n}`, `dihedral {order}`, `symmetric {n}`, `pauli {}`,
/// `product {factors: [group file, ..]}`.
pub fn builtin_group(name: &str, params: &Value) -> Result<FiniteGroup> {
    match name {
        "cyclic" => {
            check_keys(params, &["n"], name)?;
            cyclic(param_usize(params, "n", name)?)
        }
        "dihedral" => {
            check_keys(params, &["order"], name)?;
            dihedral(param_usize(params, "order", name)?)
        }
        "symmetric" => {
            check_keys(params, &["n"], name)?;
            symmetric(param_usize(params, "n", name)?)
        }
        "pauli" => {
            check_keys(params, &[], name)?;
            pauli()
        }
        "product" => {
            check_keys(params, &["factors"], name)?;
            let factors = params
                .get("factors")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Format("builtin `product` needs a `factors` array".into()))?;
            let groups = factors
                .iter()
                .map(crate::format::group_from_json)
                .collect::<Result<Vec<_>>>()?;
            product(&groups)
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_one_is_trivial() {
        assert_eq!(cyclic(1).unwrap().order(), 1);
    }

    #[test]
    fn dihedral_presentation() {
        let d8 = dihedral(8).unwrap();
        let a = d8.parse_element("1,0").unwrap();
        let b = d8.parse_element("0,1").unwrap();
        assert_eq!(d8.element_order(a), 4);
        assert_eq!(d8.element_order(b), 2);
        assert_eq!(d8.conj(b, a), d8.inv(a));
        assert_eq!(d8.conjugacy_classes().len(), 5);
    }

    #[test]
    fn pauli_center_has_order_four() {
        let p = pauli().unwrap();
        assert_eq!(p.order(), 16);
        assert_eq!(p.center().len(), 4);
        assert!(!p.is_abelian());
    }

    #[test]
    fn symmetric_three() {
        let s3 = symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        assert_eq!(s3.conjugacy_classes().len(), 3);
    }

    #[test]
    fn product_labels() {
        let z2 = cyclic(2).unwrap();
        let k = product(&[z2.clone(), z2]).unwrap();
        assert_eq!(k.parse_element("1,0"), Some(2));
        assert_eq!(k.shape().as_square_cyclic(), Some(2));
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(
            builtin_group("mystery", &Value::Null),
            Err(Error::UnknownBuiltin(_))
        ));
    }
}
