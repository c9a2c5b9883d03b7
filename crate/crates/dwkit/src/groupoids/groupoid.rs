use std::collections::HashMap;
use std::sync::Arc;

use num::rational::Ratio;

use crate::algebra::{CycloNumber, FiniteGroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Law {
    /// `(first, second) -> second ∘ first` for every composable pair.
    Table(HashMap<(usize, usize), usize>),
    /// Right action groupoid: morphism `x * |G| + g` goes `x -> x·g`.
    Action { group: Arc<FiniteGroup> },
    /// Homotopy fibre: each morphism sits over a morphism of `base`.
    Fibre {
        base: Arc<FinGroupoid>,
        underlying: Vec<usize>,
        lookup: HashMap<(usize, usize), usize>,
    },
}

/// An explicit finite groupoid. Objects are `0..object_count`.
#[derive(Clone, Debug)]
pub struct FinGroupoid {
    labels: Vec<String>,
    ends: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    identities: Vec<usize>,
    law: Law,
}

/// A functor given on objects and morphisms.
#[derive(Clone, Debug)]
pub struct Functor {
    source: Arc<FinGroupoid>,
    target: Arc<FinGroupoid>,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

fn build_out(n: usize, ends: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (m, &(s, _)) in ends.iter().enumerate() {
        out[s].push(m);
    }
    out
}

impl FinGroupoid {
    /// Build from morphism endpoints, identities and a composition table of
    /// `((first, second), second ∘ first)`; all axioms are checked.
    pub fn new(
        labels: Vec<String>,
        ends: Vec<(usize, usize)>,
        identities: Vec<usize>,
        composition: impl IntoIterator<Item = ((usize, usize), usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        let bad = |s: String| Error::Format(format!("not a groupoid: {s}"));
        if identities.len() != n {
            return Err(bad("one identity per object required".into()));
        }
        if ends.iter().any(|&(s, t)| s >= n || t >= n) {
            return Err(bad("morphism endpoint out of range".into()));
        }
        for (x, &i) in identities.iter().enumerate() {
            if ends.get(i) != Some(&(x, x)) {
                return Err(bad(format!("identity of object {x} is not an endomorphism of it")));
            }
        }
        let table: HashMap<(usize, usize), usize> = composition.into_iter().collect();
        let out = build_out(n, &ends);
        let g = FinGroupoid {
            labels,
            ends,
            out,
            identities,
            law: Law::Table(table),
        };
        g.check_axioms()?;
        Ok(g)
    }

    /// The right action groupoid of `group` on `n` objects, `x -> act(x, g)`.
    pub fn action(group: Arc<FiniteGroup>, labels: Vec<String>, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = labels.len();
        let k = group.order();
        let mut ends = Vec::with_capacity(n * k);
        for x in 0..n {
            for g in 0..k {
                let y = act(x, g);
                if y >= n {
                    return Err(Error::Format("action leaves the object set".into()));
                }
                ends.push((x, y));
            }
        }
        for x in 0..n {
            if ends[x * k + group.identity()].1 != x {
                return Err(Error::Format("identity does not act trivially".into()));
            }
            for a in 0..k {
                let y = ends[x * k + a].1;
                for b in 0..k {
                    if ends[y * k + b].1 != ends[x * k + group.mul(a, b)].1 {
                        return Err(Error::Format("not a right action".into()));
                    }
                }
            }
        }
        let identities = (0..n).map(|x| x * k + group.identity()).collect();
        let out = build_out(n, &ends);
        Ok(FinGroupoid {
            labels,
            ends,
            out,
            identities,
            law: Law::Action { group },
        })
    }

    fn check_axioms(&self) -> Result<()> {
        let bad = |s: String| Error::Format(format!("not a groupoid: {s}"));
        for f in 0..self.ends.len() {
            let (s, t) = self.ends[f];
            for &g in &self.out[t] {
                let c = self
                    .compose(f, g)
                    .ok_or_else(|| bad(format!("missing composite of {f} then {g}")))?;
                if self.ends[c] != (s, self.ends[g].1) {
                    return Err(bad(format!("composite of {f} then {g} has wrong endpoints")));
                }
                for &h in &self.out[self.ends[g].1] {
                    let l = self.compose(c, h);
                    let r = self.compose(g, h).and_then(|gh| self.compose(f, gh));
                    if l.is_none() || l != r {
                        return Err(bad(format!("composition not associative at ({f}, {g}, {h})")));
                    }
                }
            }
            if self.compose(self.identities[s], f) != Some(f) || self.compose(f, self.identities[t]) != Some(f) {
                return Err(bad(format!("identities not neutral for {f}")));
            }
            if !self.out[t].iter().any(|&g| self.compose(f, g) == Some(self.identities[s])) {
                return Err(bad(format!("morphism {f} has no inverse")));
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.labels.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.ends.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn source(&self, m: usize) -> usize {
        self.ends[m].0
    }

    pub fn target(&self, m: usize) -> usize {
        self.ends[m].1
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn outgoing(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    /// `second ∘ first`, if composable.
    pub fn compose(&self, first: usize, second: usize) -> Option<usize> {
        if self.ends[first].1 != self.ends[second].0 {
            return None;
        }
        match &self.law {
            Law::Table(t) => t.get(&(first, second)).copied(),
            Law::Action { group } => {
                let k = group.order();
                let (x, a) = (first / k, first % k);
                Some(x * k + group.mul(a, second % k))
            }
            Law::Fibre {
                base,
                underlying,
                lookup,
            } => {
                let c = base.compose(underlying[first], underlying[second])?;
                lookup.get(&(self.ends[first].0, c)).copied()
            }
        }
    }

    pub fn inverse(&self, m: usize) -> usize {
        let (s, t) = self.ends[m];
        self.out[t]
            .iter()
            .copied()
            .find(|&g| self.compose(m, g) == Some(self.identities[s]))
            .expect("groupoid morphisms are invertible")
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.out[x].iter().copied().filter(|&m| self.ends[m].1 == y).collect()
    }

    pub fn automorphisms(&self, x: usize) -> Vec<usize> {
        self.hom(x, x)
    }

    /// The acting group element of a morphism of an action groupoid.
    pub fn action_element(&self, m: usize) -> Option<usize> {
        match &self.law {
            Law::Action { group } => Some(m % group.order()),
            _ => None,
        }
    }

    /// The source morphism behind a morphism of a homotopy fibre.
    pub fn underlying(&self, m: usize) -> Option<usize> {
        match &self.law {
            Law::Fibre { underlying, .. } => Some(underlying[m]),
            _ => None,
        }
    }

    /// Connected components by union-find, each sorted, ordered by least object.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.object_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(s, t) in &self.ends {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            let i = *by_root.entry(r).or_insert_with(|| {
                comps.push(Vec::new());
                comps.len() - 1
            });
            comps[i].push(x);
        }
        comps
    }

    pub fn disjoint_union(&self, other: &FinGroupoid) -> FinGroupoid {
        let (n, m) = (self.object_count(), self.morphism_count());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut ends = self.ends.clone();
        ends.extend(other.ends.iter().map(|&(s, t)| (s + n, t + n)));
        let mut identities = self.identities.clone();
        identities.extend(other.identities.iter().map(|&i| i + m));
        let mut table = HashMap::new();
        for (g, shift) in [(self, 0), (other, m)] {
            for f in 0..g.morphism_count() {
                for &h in g.outgoing(g.target(f)) {
                    table.insert((f + shift, h + shift), g.compose(f, h).unwrap() + shift);
                }
            }
        }
        FinGroupoid {
            out: build_out(labels.len(), &ends),
            labels,
            ends,
            identities,
            law: Law::Table(table),
        }
    }

    pub fn product(&self, other: &FinGroupoid) -> FinGroupoid {
        let (n2, m2) = (other.object_count(), other.morphism_count());
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("({a}, {b})")))
            .collect::<Vec<_>>();
        let ends = (0..self.morphism_count())
            .flat_map(|f| {
                (0..m2).map(move |g| {
                    let (s1, t1) = self.ends[f];
                    let (s2, t2) = other.ends[g];
                    (s1 * n2 + s2, t1 * n2 + t2)
                })
            })
            .collect::<Vec<_>>();
        let identities = (0..self.object_count())
            .flat_map(|x| (0..n2).map(move |y| self.identities[x] * m2 + other.identities[y]))
            .collect();
        let mut table = HashMap::new();
        for f in 0..self.morphism_count() {
            for &f2 in self.outgoing(self.target(f)) {
                let c1 = self.compose(f, f2).unwrap();
                for g in 0..m2 {
                    for &g2 in other.outgoing(other.target(g)) {
                        let c2 = other.compose(g, g2).unwrap();
                        table.insert((f * m2 + g, f2 * m2 + g2), c1 * m2 + c2);
                    }
                }
            }
        }
        FinGroupoid {
            out: build_out(labels.len(), &ends),
            labels,
            ends,
            identities,
            law: Law::Table(table),
        }
    }
}

impl Functor {
    /// Checks endpoints, identities and composition.
    pub fn new(source: Arc<FinGroupoid>, target: Arc<FinGroupoid>, objects: Vec<usize>, morphisms: Vec<usize>) -> Result<Self> {
        let bad = |s: String| Error::Format(format!("not a functor: {s}"));
        if objects.len() != source.object_count() || morphisms.len() != source.morphism_count() {
            return Err(bad("object or morphism map has the wrong length".into()));
        }
        if objects.iter().any(|&y| y >= target.object_count()) || morphisms.iter().any(|&m| m >= target.morphism_count()) {
            return Err(bad("image out of range".into()));
        }
        for f in 0..source.morphism_count() {
            let (s, t) = source.ends[f];
            if target.ends[morphisms[f]] != (objects[s], objects[t]) {
                return Err(bad(format!("morphism {f} lands on the wrong endpoints")));
            }
            for &g in source.outgoing(t) {
                let c = source.compose(f, g).unwrap();
                if target.compose(morphisms[f], morphisms[g]) != Some(morphisms[c]) {
                    return Err(bad(format!("composition not preserved at ({f}, {g})")));
                }
            }
        }
        for x in 0..source.object_count() {
            if morphisms[source.identities[x]] != target.identities[objects[x]] {
                return Err(bad(format!("identity of {x} not preserved")));
            }
        }
        Ok(Functor {
            source,
            target,
            objects,
            morphisms,
        })
    }

    pub fn source(&self) -> &Arc<FinGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinGroupoid> {
        &self.target
    }

    pub fn on_object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn on_morphism(&self, m: usize) -> usize {
        self.morphisms[m]
    }
}

/// `Σ_{[x] ∈ π0} 1/|Aut x|`.
pub fn cardinality(x: &FinGroupoid) -> Ratio<i64> {
    x.components()
        .iter()
        .map(|c| Ratio::new(1, x.automorphisms(c[0]).len() as i64))
        .fold(Ratio::from_integer(0), |a, b| a + b)
}

/// `Σ_{[x] ∈ π0} f(x)/|Aut x|`, after checking `f` along every morphism.
pub fn integrate(x: &FinGroupoid, f: impl Fn(usize) -> CycloNumber) -> Result<CycloNumber> {
    let values: Vec<CycloNumber> = (0..x.object_count()).map(&f).collect();
    for m in 0..x.morphism_count() {
        let (s, t) = x.ends[m];
        if s != t && !values[s].exact_eq(&values[t]) {
            return Err(Error::NotGaugeInvariant(m));
        }
    }
    let mut acc = CycloNumber::zero();
    for c in x.components() {
        let aut = x.automorphisms(c[0]).len() as u64;
        acc = acc.add(&values[c[0]].div_integer(aut));
    }
    Ok(acc)
}

/// Objects `(x, h: F(x) -> y)`, morphisms `g: x -> x'` with `h' ∘ F(g) = h`.
/// Object labels are `"{x}|{h}"` with `h` a morphism id of the target.
pub fn homotopy_fiber(f: &Functor, y: usize) -> FinGroupoid {
    let src = &f.source;
    let tgt = &f.target;
    let mut objects: Vec<(usize, usize)> = Vec::new();
    let mut obj_index: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..src.object_count() {
        for h in tgt.hom(f.objects[x], y) {
            obj_index.insert((x, h), objects.len());
            objects.push((x, h));
        }
    }
    let mut ends = Vec::new();
    let mut underlying = Vec::new();
    let mut lookup = HashMap::new();
    for (i, &(x, h)) in objects.iter().enumerate() {
        for &g in src.outgoing(x) {
            let x2 = src.target(g);
            // h' = h ∘ F(g)^{-1}
            let h2 = tgt
                .compose(tgt.inverse(f.morphisms[g]), h)
                .expect("composable by construction");
            let j = obj_index[&(x2, h2)];
            lookup.insert((i, g), ends.len());
            ends.push((i, j));
            underlying.push(g);
        }
    }
    let identities = objects
        .iter()
        .enumerate()
        .map(|(i, &(x, _))| lookup[&(i, src.identity(x))])
        .collect();
    let labels = objects.iter().map(|&(x, h)| format!("{x}|{h}")).collect::<Vec<_>>();
    FinGroupoid {
        out: build_out(labels.len(), &ends),
        labels,
        ends,
        identities,
        law: Law::Fibre {
            base: src.clone(),
            underlying,
            lookup,
        },
    }
}

/// The object `x` of the source and morphism `h` of the target behind a
/// fibre object.
pub fn fiber_object_parts(label: &str) -> (usize, usize) {
    let (a, b) = label.split_once('|').expect("fibre label");
    (a.parse().unwrap(), b.parse().unwrap())
}
