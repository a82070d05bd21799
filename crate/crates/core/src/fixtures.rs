//! Fixed problem instances shared by the test suites, the CLI and the
//! benchmarks.

use serde::Serialize;

use crate::equiv_chain::{NodeRegistry, BASE_ID};
use crate::error::Result;
use crate::global_brauer::{place_catalog, validate_class, FieldModel, FormalExtension, GlobalBrauerClass, Place};
use crate::invariants::QZInvariant;
use crate::local_brauer::{ExtensionFamily, LocalExtensionLabel, LocalField};

/// A class of index `p^m` with two extensions satisfying the hypotheses of
/// [`crate::global_brauer::construct_extension_lemma`].
#[derive(Debug, Clone, Serialize)]
pub struct LemmaFixture {
    pub name: String,
    pub p: u64,
    pub m: u32,
    pub class: GlobalBrauerClass,
    pub l0: FormalExtension,
    pub l1: FormalExtension,
}

fn descriptors(p: u64) -> [LocalField; 3] {
    let na = |r, q, c| LocalField::non_archimedean(r, q, c).expect("valid descriptor");
    match p {
        2 => [na(5, 5, 0), na(3, 9, 0), na(2, 4, 2)],
        _ => [na(7, 7, 0), na(5, 5, 0), na(3, 3, 3)],
    }
}

fn q(num: i64, den: u64) -> QZInvariant {
    QZInvariant::new(num, den).expect("positive denominator")
}

fn class_with(places: &[(&str, LocalField, QZInvariant)]) -> GlobalBrauerClass {
    validate_class(
        FieldModel::Global,
        places.iter().map(|(l, d, _)| Place::new(*l, d.clone())).collect(),
        places.iter().map(|(l, _, v)| (l.to_string(), v.clone())).collect(),
    )
    .expect("fixture classes are valid")
}

/// Lemma instances for `p` in {2, 3}, `m` in {2, 3, 4}, with two or three
/// places.
pub fn lemma_fixtures() -> Vec<LemmaFixture> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let [d0, d1, d2] = descriptors(p);
        for m in 2..=4u32 {
            let n = p.pow(m);
            let small = (n / p) as i64;
            let variants = [
                ("two-place", vec![("v0", d0.clone(), q(1, n)), ("v1", d1.clone(), q(-1, n))]),
                (
                    "three-place",
                    vec![("v0", d0.clone(), q(1, n)), ("v1", d1.clone(), q(1, n)), ("v2", d2.clone(), q(-2, n))],
                ),
                (
                    "mixed-index",
                    vec![
                        ("v0", d0.clone(), q(1, n)),
                        ("v1", d1.clone(), q(small, n)),
                        ("v2", d2.clone(), q(-1 - small, n)),
                    ],
                ),
            ];
            for (variant, places) in variants {
                let class = class_with(&places);
                let mut l0 = FormalExtension::new(p);
                let mut l1 = FormalExtension::new(p);
                for (i, (label, descriptor, inv)) in places.iter().enumerate() {
                    let catalog = place_catalog(descriptor, p).expect("catalog");
                    l0 = l0.with_field(label, catalog[0]);
                    let last = i + 1 == places.len();
                    l1 = if i == 0 {
                        l1.with_field(label, catalog[1])
                    } else if inv.order_u64() == Some(p) {
                        l1.with_local(label, vec![1; p as usize])
                    } else if last {
                        l1.with_local(label, vec![p])
                    } else {
                        l1.with_field(label, catalog[0])
                    };
                }
                out.push(LemmaFixture { name: format!("p{p}-m{m}-{variant}"), p, m, class, l0, l1 });
            }
        }
    }
    out
}

/// A node registry with endpoints of degree `p^{m-k}` and index `p^k`.
#[derive(Debug, Clone)]
pub struct ChainFixture {
    pub name: String,
    pub p: u64,
    pub m: u32,
    pub k: u32,
    pub class: GlobalBrauerClass,
    /// `(id, parent, extension over parent)` in insertion order.
    pub steps: Vec<(String, String, FormalExtension)>,
    pub endpoints: Vec<String>,
}

impl ChainFixture {
    pub fn registry(&self) -> Result<NodeRegistry> {
        let mut r = NodeRegistry::new(self.class.clone())?;
        for (id, parent, ext) in &self.steps {
            r.add_extension(parent, id, ext)?;
        }
        Ok(r)
    }

    /// Every unordered pair of distinct endpoints plus one reflexive pair.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![(self.endpoints[0].clone(), self.endpoints[0].clone())];
        for (i, a) in self.endpoints.iter().enumerate() {
            for b in &self.endpoints[i + 1..] {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }
}

fn field_everywhere(degree: u64, places: &[&str], labels: &[LocalExtensionLabel]) -> FormalExtension {
    places.iter().zip(labels).fold(FormalExtension::new(degree), |e, (pl, l)| e.with_field(pl, *l))
}

fn generic(i: u64) -> LocalExtensionLabel {
    LocalExtensionLabel::new(ExtensionFamily::Generic, i)
}

/// Chain instances for `(p, m, k)` in {(2,2,1), (2,3,1), (3,2,1)}.
pub fn chain_fixtures() -> Vec<ChainFixture> {
    let mut out = Vec::new();
    for (p, m) in [(2u64, 2u32), (3, 2)] {
        let [d0, d1, _] = descriptors(p);
        let n = p.pow(m);
        let class = class_with(&[("v0", d0.clone(), q(1, n)), ("v1", d1.clone(), q(-1, n))]);
        let c0 = place_catalog(&d0, p).expect("catalog");
        let c1 = place_catalog(&d1, p).expect("catalog");
        let picks = [(0, 0), (1, 1), (2, 0)];
        let steps: Vec<_> = picks
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                (format!("L{i}"), BASE_ID.to_string(), field_everywhere(p, &["v0", "v1"], &[c0[a], c1[b]]))
            })
            .collect();
        let endpoints = steps.iter().map(|s| s.0.clone()).collect();
        out.push(ChainFixture { name: format!("p{p}-m{m}-k1"), p, m, k: 1, class, steps, endpoints });
    }

    let [d0, d1, _] = descriptors(2);
    let class = class_with(&[("v0", d0.clone(), q(1, 8)), ("v1", d1.clone(), q(-1, 8))]);
    let c0 = place_catalog(&d0, 2).expect("catalog");
    let c1 = place_catalog(&d1, 2).expect("catalog");
    let mut steps = Vec::new();
    for (i, j) in [(0usize, 0usize), (1, 1)] {
        steps.push((format!("A{i}"), BASE_ID.to_string(), field_everywhere(2, &["v0", "v1"], &[c0[i], c1[j]])));
    }
    let mut endpoints = Vec::new();
    for a in 0..2 {
        for t in 0..2u64 {
            let id = format!("L{a}{t}");
            let ext = field_everywhere(2, &["v0.1", "v1.1"], &[generic(t), generic(t)]);
            steps.push((id.clone(), format!("A{a}"), ext));
            endpoints.push(id);
        }
    }
    out.push(ChainFixture { name: "p2-m3-k1".into(), p: 2, m: 3, k: 1, class, steps, endpoints });
    out
}
