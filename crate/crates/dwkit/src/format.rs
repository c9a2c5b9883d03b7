//! JSON file formats for groups and cochains, plus the short group names
//! accepted on the command line.
//!
//! Group file:
//! `{"kind":"table","order":N,"table":[[..],..]}` or
//! `{"kind":"builtin","name":"cyclic","params":{"n":4}}`.
//!
//! Cochain file:
//! `{"group":<group file or canonical hash>,"degree":n,"modulus":M,"values":{"1,0|0,1":"1/2"}}`.
//! Keys are `|`-separated element labels; omitted keys are 0.
//!
//! Extension file:
//! `{"D":<group>,"Ghat":<group>,"G":<group>,"iota":[..],"lambda":[..],"section":[..]}`
//! with maps given as element indices and `section` optional.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{builtin_group, group_from_table, FiniteGroup, GroupHom, GroupShape, PhaseValue};
use crate::anomalies::{
    abelian_extension, abelian_square_extension, pauli_extension, BoundaryPair, Extension, ObstructionReport,
};
use crate::cochains::Cochain;
use crate::error::{Error, Result};

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| fmt_err(format!("{what} must be a JSON object")))
}

fn reject_unknown(map: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(fmt_err(format!("unknown key `{k}` in {what}"))),
        None => Ok(()),
    }
}

fn get_u64(map: &Map<String, Value>, key: &str, what: &str) -> Result<u64> {
    map.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| fmt_err(format!("{what} needs a nonnegative integer `{key}`")))
}

pub fn group_from_json(v: &Value) -> Result<FiniteGroup> {
    let map = as_object(v, "group")?;
    match map.get("kind").and_then(Value::as_str) {
        Some("table") => {
            reject_unknown(map, &["kind", "order", "table"], "table group")?;
            let order = get_u64(map, "order", "table group")? as usize;
            let rows = map
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| fmt_err("table group needs a `table` array"))?;
            let table = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| fmt_err("table rows must be arrays"))?
                        .iter()
                        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| fmt_err("table entries must be integers")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            group_from_table(order, &table)
        }
        Some("builtin") => {
            reject_unknown(map, &["kind", "name", "params"], "builtin group")?;
            let name = map
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| fmt_err("builtin group needs a `name`"))?;
            builtin_group(name, map.get("params").unwrap_or(&Value::Null))
        }
        Some(k) => Err(fmt_err(format!("unknown group kind `{k}`"))),
        None => Err(fmt_err("group needs a `kind`")),
    }
}

fn shape_to_json(shape: &GroupShape) -> Option<Value> {
    Some(match shape {
        GroupShape::Table => return None,
        GroupShape::Cyclic(n) => json!({"kind": "builtin", "name": "cyclic", "params": {"n": n}}),
        GroupShape::Dihedral(o) => json!({"kind": "builtin", "name": "dihedral", "params": {"order": o}}),
        GroupShape::Pauli => json!({"kind": "builtin", "name": "pauli"}),
        GroupShape::Symmetric(n) => json!({"kind": "builtin", "name": "symmetric", "params": {"n": n}}),
        GroupShape::Product(fs) => {
            let factors = fs.iter().map(shape_to_json).collect::<Option<Vec<_>>>()?;
            json!({"kind": "builtin", "name": "product", "params": {"factors": factors}})
        }
    })
}

/// Builtin description when the group has one, otherwise its table.
pub fn group_to_json(g: &FiniteGroup) -> Value {
    shape_to_json(g.shape()).unwrap_or_else(|| json!({"kind": "table", "order": g.order(), "table": g.table_rows()}))
}

/// Short names: `z4`, `cyclic 4`, `d8`, `dihedral 8`, `s3`, `symmetric 3`,
/// `pauli`, `product z2 z2`.
pub fn group_from_shorthand(s: &str) -> Result<FiniteGroup> {
    let words: Vec<String> = s.split_whitespace().map(str::to_lowercase).collect();
    let bad = || fmt_err(format!("cannot parse group `{s}`"));
    let num = |w: &str| w.parse::<usize>().map_err(|_| bad());
    match words.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["pauli"] | ["p1"] => crate::algebra::pauli(),
        ["cyclic", n] => crate::algebra::cyclic(num(n)?),
        ["dihedral", n] => crate::algebra::dihedral(num(n)?),
        ["symmetric", n] => crate::algebra::symmetric(num(n)?),
        ["product", rest @ ..] if !rest.is_empty() => {
            let fs = rest.iter().map(|w| group_from_shorthand(w)).collect::<Result<Vec<_>>>()?;
            crate::algebra::product(&fs)
        }
        [w] => {
            let (head, tail) = w.split_at(w.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
            match head {
                "z" | "c" => crate::algebra::cyclic(num(tail)?),
                "d" => crate::algebra::dihedral(num(tail)?),
                "s" => crate::algebra::symmetric(num(tail)?),
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}

fn tuple_key(g: &FiniteGroup, t: &[usize]) -> String {
    t.iter().map(|&x| g.element_label(x)).collect::<Vec<_>>().join("|")
}

/// Cochain file with the group embedded.
pub fn cochain_to_json(c: &Cochain) -> Value {
    cochain_to_json_with(c, group_to_json(c.group()))
}

/// Cochain file with a caller-chosen group reference, e.g. the canonical hash.
pub fn cochain_to_json_with(c: &Cochain, group: Value) -> Value {
    let values: Map<String, Value> = c
        .entries()
        .map(|(t, p)| (tuple_key(c.group(), &t), Value::String(p.to_string())))
        .collect();
    json!({
        "group": group,
        "degree": c.degree(),
        "modulus": c.modulus(),
        "values": values,
    })
}

/// Parse a cochain file. A hash reference resolves against `known`.
pub fn cochain_from_json(v: &Value, known: Option<&Arc<FiniteGroup>>) -> Result<Cochain> {
    let map = as_object(v, "cochain")?;
    reject_unknown(map, &["group", "degree", "modulus", "values"], "cochain")?;
    let group = match map.get("group") {
        Some(Value::String(h)) => match known {
            Some(g) if g.canonical_hash() == *h => g.clone(),
            Some(_) => return Err(Error::GroupMismatch(format!("cochain refers to group hash {h}"))),
            None => return Err(fmt_err("cochain refers to a group hash but no group was given")),
        },
        Some(gv) => {
            let g = Arc::new(group_from_json(gv)?);
            match known {
                Some(k) if **k != *g => return Err(Error::GroupMismatch("cochain group differs from the given group".into())),
                Some(k) => k.clone(),
                None => g,
            }
        }
        None => return Err(fmt_err("cochain needs a `group`")),
    };
    let degree = get_u64(map, "degree", "cochain")? as usize;
    let modulus = get_u64(map, "modulus", "cochain")?;
    if modulus == 0 {
        return Err(fmt_err("cochain modulus must be positive"));
    }
    let mut c = Cochain::zero(group.clone(), degree, modulus);
    let values = match map.get("values") {
        None => return Ok(c),
        Some(v) => as_object(v, "cochain values")?,
    };
    for (key, val) in values {
        let parts: Vec<&str> = if degree == 0 { Vec::new() } else { key.split('|').collect() };
        if parts.len() != degree || (degree == 0 && !key.is_empty()) {
            return Err(fmt_err(format!("key `{key}` does not have {degree} entries")));
        }
        let t = parts
            .iter()
            .map(|p| group.parse_element(p).ok_or_else(|| fmt_err(format!("unknown element `{p}` in key `{key}`"))))
            .collect::<Result<Vec<_>>>()?;
        let p = PhaseValue::parse(val.as_str().ok_or_else(|| fmt_err(format!("value at `{key}` must be a string")))?)?;
        if modulus % p.reduced().modulus() != 0 {
            return Err(fmt_err(format!("value {p} at `{key}` has denominator not dividing {modulus}")));
        }
        if t.contains(&group.identity()) {
            if p.is_zero() {
                continue;
            }
            return Err(fmt_err(format!("key `{key}` is degenerate; cochains are normalized")));
        }
        c.set(&t, p)?;
    }
    Ok(c)
}

fn index_list(map: &Map<String, Value>, key: &str) -> Result<Option<Vec<usize>>> {
    let Some(v) = map.get(key) else {
        return Ok(None);
    };
    let arr = v
        .as_array()
        .ok_or_else(|| fmt_err(format!("extension `{key}` must be an array")))?;
    arr.iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| fmt_err(format!("`{key}` entries must be integers"))))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

pub fn extension_from_json(v: &Value) -> Result<Extension> {
    let map = as_object(v, "extension")?;
    reject_unknown(map, &["D", "Ghat", "G", "iota", "lambda", "section"], "extension")?;
    let group = |k: &str| -> Result<Arc<FiniteGroup>> {
        let gv = map.get(k).ok_or_else(|| fmt_err(format!("extension needs `{k}`")))?;
        Ok(Arc::new(group_from_json(gv)?))
    };
    let (d, gh, g) = (group("D")?, group("Ghat")?, group("G")?);
    let need = |k: &str| index_list(map, k)?.ok_or_else(|| fmt_err(format!("extension needs `{k}`")));
    let iota = GroupHom::new(d, gh.clone(), need("iota")?)?;
    let lambda = GroupHom::new(gh, g, need("lambda")?)?;
    Extension::new(iota, lambda, index_list(map, "section")?)
}

pub fn extension_to_json(ext: &Extension) -> Value {
    json!({
        "D": group_to_json(ext.d()),
        "Ghat": group_to_json(ext.ghat()),
        "G": group_to_json(ext.g()),
        "iota": ext.iota().map(),
        "lambda": ext.lambda().map(),
        "section": ext.section(),
    })
}

/// `pauli`, `cyclic N M` for `Z_N -> Z_{NM} -> Z_M`, and `square N M` for
/// the same on squares.
pub fn extension_from_shorthand(s: &str) -> Result<Extension> {
    let words: Vec<String> = s.split_whitespace().map(str::to_lowercase).collect();
    let bad = || fmt_err(format!("cannot parse extension `{s}`"));
    let num = |w: &str| w.parse::<usize>().map_err(|_| bad());
    match words.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["pauli"] => pauli_extension(),
        ["cyclic", n, m] => abelian_extension(num(n)?, num(m)?),
        ["square", n, m] => abelian_square_extension(num(n)?, num(m)?),
        _ => Err(bad()),
    }
}

fn cochains_json(cs: &Option<Vec<Cochain>>) -> Value {
    match cs {
        Some(cs) => Value::Array(cs.iter().map(cochain_to_json).collect()),
        None => Value::Null,
    }
}

fn boundary_pair_json(bp: &BoundaryPair) -> Value {
    json!({
        "omega_prime": cochain_to_json(&bp.omega_prime),
        "theta": cochain_to_json(&bp.theta),
        "theta_factors": bp.theta_factors,
        "theta_class": bp.theta_class,
        "theta_trivial": bp.theta_is_trivial(),
    })
}

/// The obstruction report with every witness inlined as a cochain file.
pub fn report_to_json(r: &ObstructionReport) -> Value {
    json!({
        "verdict": r.verdict.as_str(),
        "degree": r.degree,
        "modulus": r.modulus,
        "invariant_class": r.invariant_class,
        "invariance_witnesses": cochains_json(&r.invariance_witnesses),
        "first_obstruction_trivial": r.first_obstruction_trivial,
        "fixed_point_family": cochains_json(&r.fixed_point_family),
        "closed_lift": r.closed_lift.as_ref().map(cochain_to_json),
        "boundary_pair": r.boundary_pair.as_ref().map(boundary_pair_json),
    })
}

/// `{"invariant": name, "group": .., "degree": n, "value": ".."}`.
pub fn invariant_record(name: &str, group: &FiniteGroup, degree: usize, value: &str) -> Value {
    json!({
        "invariant": name,
        "group": group_to_json(group),
        "degree": degree,
        "value": value,
    })
}
