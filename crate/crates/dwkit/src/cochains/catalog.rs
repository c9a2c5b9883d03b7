//! Named cocycle families.
//!
//! * `omega2 {n, k}` on `Z_n x Z_n`: `k a1 b2 / n`.
//! * `omega_d8 {k}` on the dihedral group of order 8: `k j_g i_h / 4` for
//!   `g = a^{i_g} b^{j_g}`, `h = a^{i_h} b^{j_h}`.
//! * `omega3 {n, k}` on `Z_n`: `k a floor((b + c)/n) / n`.
//!
//! The `Z_n`-valued extension cocycle `floor((a + b)/m) mod n` on `Z_m` is
//! a table, see [`catalog_sigma`].

use std::sync::Arc;

use serde_json::Value;

use super::cochain::Cochain;
use crate::algebra::{cyclic, dihedral, product, FiniteGroup, GroupShape};
use crate::error::{Error, Result};

fn param(params: &Value, key: &str, family: &str, default: Option<i64>) -> Result<i64> {
    match params.get(key) {
        Some(v) => v
            .as_i64()
            .ok_or_else(|| Error::Format(format!("`{family}` param `{key}` must be an integer"))),
        None => default.ok_or_else(|| Error::Format(format!("`{family}` needs param `{key}`"))),
    }
}

fn check_keys(params: &Value, allowed: &[&str], family: &str) -> Result<()> {
    match params {
        Value::Null => Ok(()),
        Value::Object(map) => match map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Format(format!("unknown param `{k}` for `{family}`"))),
            None => Ok(()),
        },
        _ => Err(Error::Format(format!("params of `{family}` must be an object"))),
    }
}

fn positive(n: i64, family: &str) -> Result<usize> {
    if n < 1 {
        return Err(Error::Format(format!("`{family}` needs n >= 1")));
    }
    Ok(n as usize)
}

/// Construct a catalog cocycle together with its group.
pub fn catalog_cocycle(name: &str, params: &Value) -> Result<Cochain> {
    match name {
        "omega2" => {
            check_keys(params, &["n", "k"], name)?;
            let n = positive(param(params, "n", name, None)?, name)?;
            let g = Arc::new(product(&[cyclic(n)?, cyclic(n)?])?);
            Ok(omega2(&g, n, param(params, "k", name, Some(1))?))
        }
        "omega_d8" => {
            check_keys(params, &["k"], name)?;
            let g = Arc::new(dihedral(8)?);
            Ok(omega_d8(&g, param(params, "k", name, Some(1))?))
        }
        "omega3" => {
            check_keys(params, &["n", "k"], name)?;
            let n = positive(param(params, "n", name, None)?, name)?;
            let g = Arc::new(cyclic(n)?);
            Ok(omega3(&g, n, param(params, "k", name, Some(1))?))
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

/// `omega<k>` on a builtin group, picked by the group's shape: the degree-2
/// family on `Z_n x Z_n` and on `D8`, the degree-3 family on `Z_n`.
pub fn named_cocycle(group: &Arc<FiniteGroup>, name: &str) -> Result<Cochain> {
    let k: i64 = name
        .strip_prefix("omega")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
    if let Some(n) = group.shape().as_square_cyclic() {
        return Ok(omega2(group, n, k));
    }
    if let Some(n) = group.shape().as_cyclic() {
        return Ok(omega3(group, n, k));
    }
    if *group.shape() == GroupShape::Dihedral(8) {
        return Ok(omega_d8(group, k));
    }
    Err(Error::UnknownFamily(format!("{name} on {}", group.label())))
}

pub(crate) fn omega2(g: &Arc<FiniteGroup>, n: usize, k: i64) -> Cochain {
    Cochain::from_fn(g.clone(), 2, n as u64, |t| {
        let a1 = (t[0] / n) as i64;
        let b2 = (t[1] % n) as i64;
        k * a1 * b2
    })
}

pub(crate) fn omega_d8(g: &Arc<FiniteGroup>, k: i64) -> Cochain {
    Cochain::from_fn(g.clone(), 2, 4, |t| {
        let j = (t[0] / 4) as i64;
        let i = (t[1] % 4) as i64;
        k * j * i
    })
}

pub(crate) fn omega3(g: &Arc<FiniteGroup>, n: usize, k: i64) -> Cochain {
    Cochain::from_fn(g.clone(), 3, n as u64, |t| {
        let carry = ((t[1] + t[2]) / n) as i64;
        k * t[0] as i64 * carry
    })
}

/// `σ(a, b) = floor((a + b)/m) mod n` on `Z_m`, valued in `Z_n`.
pub fn catalog_sigma(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0..m)
        .map(|a| (0..m).map(|b| ((a + b) / m) % n).collect())
        .collect()
}
