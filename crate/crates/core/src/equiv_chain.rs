//! Chains of simple-equivalence certificates between fields in `A(Y)`.
//!
//! Fields are nodes of a [`NodeRegistry`]. Each node stores the Brauer
//! class restricted to it, the tower leading to it from the base and the
//! set of registry nodes it contains. Intersections are read off those
//! sets: the intersection of two nodes is the largest node both contain.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, is_prime, log_exact, prime_power};
use crate::error::{Error, Result};
use crate::global_brauer::{
    compositum, construct_extension_lemma, construct_power_extension, global_restrict, FormalExtension,
    GlobalBrauerClass,
};

pub const BASE_ID: &str = "F";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerStep {
    pub node: String,
    /// Degree over the previous step (1 for the base).
    pub relative_degree: u64,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldNode {
    pub id: String,
    pub degree_over_base: u64,
    /// From the base up to this node.
    pub tower: Vec<TowerStep>,
    /// Extension over the previous tower step.
    pub local_model: Option<FormalExtension>,
    pub declared_index: u64,
    pub contains: BTreeSet<String>,
    pub class: GlobalBrauerClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleEquivCertificate {
    pub left: FieldNode,
    pub right: FieldNode,
    pub common_subfield: FieldNode,
    /// Generators `(alpha, gamma)` of `left` and `right` over the common
    /// subfield, standing for the two ends of the interpolating polynomial.
    pub interpolation_note: (String, String),
    pub splitting_witness: FieldNode,
    pub membership_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivChain {
    pub p: u64,
    pub m: u32,
    pub k: u32,
    pub nodes: Vec<FieldNode>,
    pub certificates: Vec<SimpleEquivCertificate>,
    /// `(parent, child)` induction measures of every recursive call.
    pub measure_trace: Vec<(u32, u32)>,
}

#[derive(Debug, Clone)]
struct Link {
    /// Explicit components above every place of the parent.
    extension: FormalExtension,
    /// Parent place to the names of the child places above it.
    place_map: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone)]
struct Record {
    node: FieldNode,
    links: BTreeMap<String, Link>,
}

/// Fields over a base carrying a class of index `p^m`, all of `p`-power
/// degree.
#[derive(Debug, Clone)]
pub struct NodeRegistry {
    p: u64,
    m: u32,
    records: BTreeMap<String, Record>,
    counter: usize,
}

impl NodeRegistry {
    pub fn new(base: GlobalBrauerClass) -> Result<Self> {
        let index = base.index_u64()?;
        let (p, m) = prime_power(index)
            .ok_or_else(|| Error::InvalidTarget(format!("base index {index} is not a nontrivial prime power")))?;
        let node = FieldNode {
            id: BASE_ID.into(),
            degree_over_base: 1,
            tower: vec![TowerStep { node: BASE_ID.into(), relative_degree: 1, index }],
            local_model: None,
            declared_index: index,
            contains: BTreeSet::from([BASE_ID.to_string()]),
            class: base,
        };
        let records = BTreeMap::from([(BASE_ID.to_string(), Record { node, links: BTreeMap::new() })]);
        Ok(NodeRegistry { p, m, records, counter: 0 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn node(&self, id: &str) -> Option<&FieldNode> {
        self.records.get(id).map(|r| &r.node)
    }

    pub fn ids(&self) -> impl Iterator<Item = &String> {
        self.records.keys()
    }

    fn record(&self, id: &str) -> Result<&Record> {
        self.records.get(id).ok_or_else(|| Error::InvalidExtension(format!("unknown node `{id}`")))
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    /// Adds `id` as the extension `ext` of `parent`.
    pub fn add_extension(&mut self, parent: &str, id: &str, ext: &FormalExtension) -> Result<()> {
        if self.records.contains_key(id) {
            return Err(Error::InvalidExtension(format!("node `{id}` already exists")));
        }
        ext.validate()?;
        if ext.degree < self.p || log_exact(ext.degree, self.p).is_none() {
            return Err(Error::InvalidExtension(format!("degree {} is not a power of {}", ext.degree, self.p)));
        }
        let parent_class = &self.record(parent)?.node.class;
        if let Some(bad) = ext.local_data.keys().find(|l| !parent_class.places().contains_key(*l)) {
            return Err(Error::InvalidExtension(format!("`{bad}` is not a place of `{parent}`")));
        }
        self.insert_primary(parent, id.to_string(), ext)
    }

    fn insert_primary(&mut self, parent: &str, id: String, ext: &FormalExtension) -> Result<()> {
        let parent_node = self.record(parent)?.node.clone();
        let class = global_restrict(&parent_node.class, ext)?;
        let declared_index = class.index_u64()?;
        let link = explicit_link(&parent_node.class, ext);
        let mut tower = parent_node.tower.clone();
        tower.push(TowerStep { node: id.clone(), relative_degree: ext.degree, index: declared_index });
        let mut contains = parent_node.contains.clone();
        contains.insert(id.clone());
        let node = FieldNode {
            id: id.clone(),
            degree_over_base: parent_node.degree_over_base * ext.degree,
            tower,
            local_model: Some(link.extension.clone()),
            declared_index,
            contains,
            class,
        };
        self.records.insert(id, Record { node, links: BTreeMap::from([(parent.to_string(), link)]) });
        Ok(())
    }

    /// Relative degree `[a : b]` when `b` is contained in `a`.
    fn relative_degree(&self, a: &str, b: &str) -> Result<u64> {
        let (ra, rb) = (&self.record(a)?.node, &self.record(b)?.node);
        if !ra.contains.contains(b) {
            return Err(Error::ConstructionFailed(format!("`{b}` is not contained in `{a}`")));
        }
        Ok(ra.degree_over_base / rb.degree_over_base)
    }

    /// Largest node contained in both `a` and `b`.
    pub fn intersection(&self, a: &str, b: &str) -> Result<String> {
        let (ca, cb) = (&self.record(a)?.node.contains, &self.record(b)?.node.contains);
        let common = ca.intersection(cb).map(|id| (self.records[id].node.degree_over_base, id));
        let best = common.fold(None::<(u64, &String)>, |acc, (d, id)| match acc {
            Some((bd, _)) if bd >= d => acc,
            _ => Some((d, id)),
        });
        Ok(best.expect("the base is common to all nodes").1.clone())
    }

    /// A node `L'` with `K ⊂ L' ⊂ L` and `[L' : K] = p`.
    pub fn subextension_of_degree_p(&self, l: &str, k: &str) -> Result<String> {
        let degree = self.relative_degree(l, k)?;
        if degree == 1 {
            return Err(Error::NoProperSubextension(format!("[{l} : {k}] = 1")));
        }
        let record = self.record(l)?;
        let on_tower = record.node.tower.iter().map(|s| &s.node);
        let others = record.node.contains.iter();
        on_tower
            .chain(others)
            .find(|id| self.records[*id].links.get(k).is_some_and(|link| link.extension.degree == self.p))
            .cloned()
            .ok_or_else(|| Error::ConstructionFailed(format!("no degree-{} step from `{k}` towards `{l}`", self.p)))
    }

    fn link(&self, child: &str, parent: &str) -> Result<&Link> {
        self.record(child)?
            .links
            .get(parent)
            .ok_or_else(|| Error::ConstructionFailed(format!("`{child}` has no link over `{parent}`")))
    }

    /// Adds the compositum of `a` and `b`, both linked over `base`, with
    /// `base` as primary parent and links over `a` and `b`.
    fn add_compositum(&mut self, base: &str, a: &str, b: &str) -> Result<String> {
        let base_class = self.record(base)?.node.class.clone();
        let (la, lb) = (self.link(a, base)?.clone(), self.link(b, base)?.clone());
        let comp = compositum(&base_class, &la.extension, &lb.extension)?;
        let id = self.fresh("C");
        self.insert_primary(base, id.clone(), &comp.as_extension())?;

        let model = base_class.model();
        let mut over_a = (FormalExtension::new(lb.extension.degree), BTreeMap::new());
        let mut over_b = (FormalExtension::new(la.extension.degree), BTreeMap::new());
        for (w, pieces) in &comp.pieces {
            let ca = la.extension.components(w, model);
            let cb = lb.extension.components(w, model);
            for (side, own, other, link, out) in
                [(0, &ca, &cb, &la, &mut over_a), (1, &cb, &ca, &lb, &mut over_b)]
            {
                for (i, &(d_own, _)) in own.iter().enumerate() {
                    let mut degrees = Vec::new();
                    let mut labels = Vec::new();
                    let mut names = Vec::new();
                    for (j, piece) in pieces.iter().enumerate() {
                        let (mine, theirs) = if side == 0 { (piece.left, piece.right) } else { (piece.right, piece.left) };
                        if mine != i {
                            continue;
                        }
                        let rel = piece.degree / d_own;
                        degrees.push(rel);
                        labels.push(if rel > 1 { other[theirs].1 } else { None });
                        names.push(format!("{w}.{}", j + 1));
                    }
                    let place = link.place_map[w][i].clone();
                    if labels.iter().any(Option::is_some) {
                        out.0.labels.insert(place.clone(), labels);
                    }
                    out.0.local_data.insert(place.clone(), degrees);
                    out.1.insert(place, names);
                }
            }
        }
        let (ext_a, map_a) = over_a;
        let (ext_b, map_b) = over_b;
        ext_a.validate()?;
        ext_b.validate()?;
        let (ca, cb) = (self.record(a)?.node.contains.clone(), self.record(b)?.node.contains.clone());
        let record = self.records.get_mut(&id).expect("just inserted");
        record.node.contains.extend(ca);
        record.node.contains.extend(cb);
        record.links.insert(a.to_string(), Link { extension: ext_a, place_map: map_a });
        record.links.insert(b.to_string(), Link { extension: ext_b, place_map: map_b });
        Ok(id)
    }

    /// Degree-`p` steps from `start` until the class drops by `p^steps`.
    fn add_power_steps(&mut self, start: &str, steps: u32) -> Result<String> {
        let mut current = start.to_string();
        for _ in 0..steps {
            let class = self.record(&current)?.node.class.clone();
            let ext = construct_power_extension(&class, 1)?;
            let id = self.fresh("P");
            self.insert_primary(&current, id.clone(), &ext)?;
            current = id;
        }
        Ok(current)
    }

    /// `n - log_p [a ∩ b : base]` for nodes of degree `p^n`.
    fn measure(&self, a: &str, b: &str) -> Result<u32> {
        let meet = self.intersection(a, b)?;
        let n = log_exact(self.record(a)?.node.degree_over_base, self.p).expect("p-power degree");
        let j = log_exact(self.record(&meet)?.node.degree_over_base, self.p).expect("p-power degree");
        Ok(n - j)
    }

    fn check_membership(&self, id: &str, k: u32) -> Result<()> {
        let node = &self.record(id)?.node;
        let n = self.m - k;
        let bound = checked_pow(self.p, k).expect("below the index");
        if node.degree_over_base != checked_pow(self.p, n).expect("below the index") {
            return Err(Error::NotInAY(format!("{id} has degree {}, expected {}^{n}", node.degree_over_base, self.p)));
        }
        if bound % node.declared_index != 0 {
            return Err(Error::NotInAY(format!("{id} has index {}, not dividing {bound}", node.declared_index)));
        }
        Ok(())
    }

    /// Connects `l0` and `l1`, both of degree `p^{m-k}` with index `p^k`.
    pub fn build_chain(&mut self, k: u32, l0: &str, l1: &str) -> Result<EquivChain> {
        if k == 0 || k >= self.m {
            return Err(Error::InvalidTarget(format!("k = {k} must lie in 1..{}", self.m)));
        }
        self.check_membership(l0, k)?;
        self.check_membership(l1, k)?;
        let mut trace = Vec::new();
        let start = if l0 == l1 { 0 } else { self.measure(l0, l1)? };
        let certs = self.connect(k, l0, l1, None, &mut trace)?;
        let mut nodes = vec![self.record(l0)?.node.clone()];
        nodes.extend(certs.iter().map(|c| c.right.clone()));
        let cap = 3usize.pow(start) * 3;
        if nodes.len() > cap {
            return Err(Error::ConstructionFailed(format!("chain of length {} exceeds {cap}", nodes.len())));
        }
        Ok(EquivChain { p: self.p, m: self.m, k, nodes, certificates: certs, measure_trace: trace })
    }

    fn connect(
        &mut self,
        k: u32,
        l0: &str,
        l1: &str,
        parent: Option<u32>,
        trace: &mut Vec<(u32, u32)>,
    ) -> Result<Vec<SimpleEquivCertificate>> {
        if l0 == l1 {
            return Ok(Vec::new());
        }
        let ell = self.measure(l0, l1)?;
        if let Some(parent) = parent {
            trace.push((parent, ell));
            if ell >= parent {
                return Err(Error::ConstructionFailed(format!("measure did not decrease: {parent} -> {ell}")));
            }
        }
        let base = self.intersection(l0, l1)?;
        let s0 = self.subextension_of_degree_p(l0, &base)?;
        let s1 = self.subextension_of_degree_p(l1, &base)?;
        let class = self.record(&base)?.node.class.clone();
        let lemma = construct_extension_lemma(
            &class,
            &self.link(&s0, &base)?.extension.clone(),
            &self.link(&s1, &base)?.extension.clone(),
        )?;
        for (s, normalized) in [(&s0, &lemma.l0), (&s1, &lemma.l1)] {
            let record = self.records.get_mut(s.as_str()).expect("known node");
            if record.node.tower.iter().rev().nth(1).is_some_and(|t| t.node == base) {
                record.node.local_model = Some(normalized.clone());
            }
            record.links.get_mut(&base).expect("linked").extension = normalized.clone();
        }
        let kp = self.fresh("K");
        self.insert_primary(&base, kp.clone(), &lemma.extension)?;
        let steps = if ell == 1 { k - 1 } else { ell - 2 };
        let mut witnesses = Vec::new();
        for s in [&s0, &s1] {
            let c = self.add_compositum(&base, &kp, s)?;
            witnesses.push(self.add_power_steps(&c, steps)?);
        }
        if ell == 1 {
            let bound = checked_pow(self.p, k).expect("below the index");
            let cert = |left: &str, right: &str, witness: &str| -> Result<SimpleEquivCertificate> {
                Ok(SimpleEquivCertificate {
                    left: self.record(left)?.node.clone(),
                    right: self.record(right)?.node.clone(),
                    common_subfield: self.record(&base)?.node.clone(),
                    interpolation_note: (format!("{left}/{base}"), format!("{right}/{base}")),
                    splitting_witness: self.record(witness)?.node.clone(),
                    membership_bound: bound,
                })
            };
            return Ok(vec![cert(l0, &kp, &witnesses[0])?, cert(&kp, l1, &witnesses[1])?]);
        }
        for w in &witnesses {
            self.check_membership(w, k)?;
        }
        let (m0, m1) = (witnesses[0].clone(), witnesses[1].clone());
        let mut certs = self.connect(k, l0, &m0, Some(ell), trace)?;
        certs.extend(self.connect(k, &m0, &m1, Some(ell), trace)?);
        certs.extend(self.connect(k, &m1, l1, Some(ell), trace)?);
        Ok(certs)
    }
}

fn explicit_link(parent: &GlobalBrauerClass, ext: &FormalExtension) -> Link {
    let model = parent.model();
    let mut extension = FormalExtension::new(ext.degree);
    extension.distinguishing_place = ext.distinguishing_place.clone();
    let mut place_map = BTreeMap::new();
    for place in parent.places().keys() {
        let comps = ext.components(place, model);
        extension.local_data.insert(place.clone(), comps.iter().map(|c| c.0).collect());
        if comps.iter().any(|c| c.1.is_some()) {
            extension.labels.insert(place.clone(), comps.iter().map(|c| c.1).collect());
        }
        place_map.insert(place.clone(), (1..=comps.len()).map(|i| format!("{place}.{i}")).collect());
    }
    Link { extension, place_map }
}

/// Outcome of a validation: valid iff no diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

impl Validation {
    fn from(diagnostics: Vec<String>) -> Self {
        Validation { valid: diagnostics.is_empty(), diagnostics }
    }
}

fn node_diagnostics(node: &FieldNode, out: &mut Vec<String>) {
    let id = &node.id;
    let tower_ok = !node.tower.is_empty()
        && node.tower[0].relative_degree == 1
        && node.tower.last().is_some_and(|s| s.node == *id && s.index == node.declared_index)
        && node.tower.iter().map(|s| s.relative_degree).product::<u64>() == node.degree_over_base
        && node.tower.windows(2).all(|w| {
            w[1].index > 0 && w[0].index % w[1].index == 0 && (w[1].relative_degree * w[1].index) % w[0].index == 0
        })
        && node.tower.iter().all(|s| node.contains.contains(&s.node))
        && match (&node.local_model, node.tower.last()) {
            (Some(e), Some(last)) => e.degree == last.relative_degree,
            (None, _) => node.tower.len() == 1,
            (Some(_), None) => false,
        };
    if !tower_ok {
        out.push(format!("tower-inconsistent: {id}"));
    }
    if node.class.index_u64().ok() != Some(node.declared_index) {
        out.push(format!("index-mismatch: {id}"));
    }
}

/// Checks one certificate using only the data it carries.
pub fn validate_certificate(c: &SimpleEquivCertificate) -> Validation {
    let mut out = Vec::new();
    for node in [&c.left, &c.right, &c.common_subfield, &c.splitting_witness] {
        node_diagnostics(node, &mut out);
    }
    let (l, r, k, w) = (&c.left, &c.right, &c.common_subfield, &c.splitting_witness);
    if l.degree_over_base != r.degree_over_base {
        out.push(format!("degree-mismatch: [{}] = {} but [{}] = {}", l.id, l.degree_over_base, r.id, r.degree_over_base));
    }
    let over_k = |x: &FieldNode| {
        (x.contains.contains(&k.id) && k.degree_over_base > 0 && x.degree_over_base % k.degree_over_base == 0)
            .then(|| x.degree_over_base / k.degree_over_base)
    };
    match (over_k(l), over_k(r)) {
        (Some(a), Some(b)) if a == b && is_prime(a) => {}
        _ => out.push(format!("common-subfield-mismatch: {} is not a common subfield of prime codegree", k.id)),
    }
    if !w.contains.contains(&l.id) || !w.contains.contains(&r.id) {
        out.push(format!("witness-containment: {} does not contain both endpoints", w.id));
    }
    let rel = (l.degree_over_base > 0 && w.degree_over_base % l.degree_over_base == 0)
        .then(|| w.degree_over_base / l.degree_over_base);
    if rel != Some(c.membership_bound) {
        out.push(format!("witness-degree-mismatch: [{} : {}] is not {}", w.id, l.id, c.membership_bound));
    }
    let forced = rel.and_then(|r| r.checked_mul(w.declared_index));
    if !forced.is_some_and(|f| f > 0 && c.membership_bound % f == 0) {
        out.push(format!("witness-index: {} does not force the index into {}", w.id, c.membership_bound));
    }
    for x in [l, r] {
        if x.declared_index == 0 || c.membership_bound % x.declared_index != 0 {
            out.push(format!("not-in-AY: {}", x.id));
        }
    }
    Validation::from(out)
}

/// Checks the chain shape and every certificate.
pub fn validate_chain(chain: &EquivChain) -> Validation {
    let mut out = Vec::new();
    if chain.nodes.len() != chain.certificates.len() + 1 {
        out.push("length-mismatch".to_string());
    }
    let n = chain.m.checked_sub(chain.k);
    let degree = n.and_then(|n| checked_pow(chain.p, n));
    let bound = checked_pow(chain.p, chain.k);
    for node in &chain.nodes {
        node_diagnostics(node, &mut out);
        if Some(node.degree_over_base) != degree || !bound.is_some_and(|b| b % node.declared_index.max(1) == 0) {
            out.push(format!("not-in-AY: {}", node.id));
        }
    }
    for (i, c) in chain.certificates.iter().enumerate() {
        let ends = chain.nodes.get(i).map(|n| &n.id) == Some(&c.left.id)
            && chain.nodes.get(i + 1).map(|n| &n.id) == Some(&c.right.id);
        if !ends {
            out.push(format!("endpoint-mismatch: certificate {i}"));
        }
        if Some(c.membership_bound) != bound {
            out.push(format!("bound-mismatch: certificate {i}"));
        }
        out.extend(validate_certificate(c).diagnostics.into_iter().map(|d| format!("certificate {i}: {d}")));
    }
    Validation::from(out)
}
