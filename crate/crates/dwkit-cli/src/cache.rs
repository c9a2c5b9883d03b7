//! On-disk cache of cohomology computations, one JSON file per
//! (group, degree, budget).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dwkit::cochains::{cohomology_with_budget, CohomologyGroup};
use dwkit::format::{cochain_from_json, cochain_to_json_with};
use dwkit::{FiniteGroup, Result};
use log::{info, warn};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const VERSION: &str = "dwkit-cohomology-v1";

pub struct Cache {
    dir: PathBuf,
}

fn key(group: &FiniteGroup, degree: usize, budget: Option<usize>) -> String {
    let mut h = Sha256::new();
    h.update(VERSION.as_bytes());
    h.update(group.canonical_hash().as_bytes());
    h.update((degree as u64).to_le_bytes());
    h.update(budget.map_or(u64::MAX, |b| b as u64).to_le_bytes());
    hex::encode(h.finalize())
}

fn encode(h: &CohomologyGroup, budget: Option<usize>) -> Value {
    let hash = Value::String(h.group().canonical_hash());
    json!({
        "version": VERSION,
        "group": h.group().canonical_hash(),
        "degree": h.degree(),
        "budget": budget,
        "factors": h.invariant_factors(),
        "generators": h.generators().iter().map(|c| cochain_to_json_with(c, hash.clone())).collect::<Vec<_>>(),
        "class_rows": h.class_rows(),
    })
}

fn decode(v: &Value, group: &Arc<FiniteGroup>, degree: usize) -> Option<CohomologyGroup> {
    if v.get("version")?.as_str()? != VERSION || v.get("degree")?.as_u64()? != degree as u64 {
        return None;
    }
    let factors = v
        .get("factors")?
        .as_array()?
        .iter()
        .map(Value::as_u64)
        .collect::<Option<Vec<_>>>()?;
    let generators = v
        .get("generators")?
        .as_array()?
        .iter()
        .map(|c| cochain_from_json(c, Some(group)).ok())
        .collect::<Option<Vec<_>>>()?;
    let rows = v
        .get("class_rows")?
        .as_array()?
        .iter()
        .map(|r| r.as_array()?.iter().map(Value::as_i64).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    CohomologyGroup::from_parts(group.clone(), degree, factors, generators, rows).ok()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    fn path(&self, k: &str) -> PathBuf {
        self.dir.join(format!("{k}.json"))
    }

    fn load(&self, path: &Path, group: &Arc<FiniteGroup>, degree: usize) -> Option<CohomologyGroup> {
        let text = fs::read_to_string(path).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        let h = decode(&v, group, degree);
        if h.is_none() {
            warn!("ignoring stale or invalid cache entry {}", path.display());
        }
        h
    }

    fn store(&self, path: &Path, v: &Value) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(v)?.as_bytes())?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached `H^n(G;U(1))`, computed and stored on a miss.
    pub fn cohomology(&self, group: &Arc<FiniteGroup>, degree: usize, budget: Option<usize>) -> Result<CohomologyGroup> {
        let path = self.path(&key(group, degree, budget));
        if let Some(h) = self.load(&path, group, degree) {
            info!("cache hit: {}", path.display());
            return Ok(h);
        }
        info!("cache miss: {}", path.display());
        let h = cohomology_with_budget(group, degree, budget)?;
        if let Err(e) = self.store(&path, &encode(&h, budget)) {
            warn!("could not write cache entry {}: {e}", path.display());
        }
        Ok(h)
    }
}
