//! Constructive index-reduction lemmas over local and global fields.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{compositum, global_restrict, realize, FieldModel, FormalExtension, GlobalBrauerClass, LocalRequirement};
use crate::arith::{checked_pow, prime_power};
use crate::error::{Error, Result};
use crate::local_brauer::{ExtensionFamily, LocalExtensionLabel, LocalField};

/// Output of [`construct_extension_lemma`] together with every choice made.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCertificate {
    pub p: u64,
    pub m: u32,
    /// The new degree-`p` extension `K`.
    pub extension: FormalExtension,
    /// Place of full local index where `K` differs from both inputs.
    pub distinguishing_place: String,
    /// Inputs with every unlabeled full-degree local field given a label.
    pub l0: FormalExtension,
    pub l1: FormalExtension,
    /// Local field chosen for `K` at each support place.
    pub choices: BTreeMap<String, LocalExtensionLabel>,
    pub index_k: u64,
    pub index_kl0: u64,
    pub index_kl1: u64,
}

/// Degree-`p` local fields available at a place, in catalog order, at most
/// `p + 1` of them.
pub fn place_catalog(descriptor: &LocalField, p: u64) -> Result<Vec<LocalExtensionLabel>> {
    match descriptor {
        // The only proper extension of R is C.
        LocalField::Real if p == 2 => Ok(vec![LocalExtensionLabel::new(ExtensionFamily::Generic, 0)]),
        LocalField::Real | LocalField::Complex => Ok(Vec::new()),
        d => d.guaranteed_catalog(p, p + 1),
    }
}

fn full_field_label(e: &FormalExtension, place: &str, model: FieldModel) -> Option<Option<LocalExtensionLabel>> {
    match e.components(place, model).as_slice() {
        [(d, l)] if *d == e.degree => Some(*l),
        _ => None,
    }
}

fn set_label(e: &mut FormalExtension, place: &str, label: LocalExtensionLabel) {
    e.local_data.insert(place.to_string(), vec![e.degree]);
    e.labels.insert(place.to_string(), vec![Some(label)]);
}

/// Labels every unlabeled full-degree local field of `l0`, `l1` at support
/// places with the first catalog entry not used by the other input.
fn normalize_inputs(
    c: &GlobalBrauerClass,
    l0: &FormalExtension,
    l1: &FormalExtension,
    p: u64,
) -> Result<(FormalExtension, FormalExtension)> {
    let (mut a, mut b) = (l0.clone(), l1.clone());
    let model = c.model();
    for place in c.support().keys() {
        let catalog = place_catalog(&c.places()[place], p)?;
        for which in 0..2 {
            let (this, other) = if which == 0 { (&mut a, &b) } else { (&mut b, &a) };
            if let Some(None) = full_field_label(this, place, model) {
                let taken = full_field_label(other, place, model).flatten();
                let pick = catalog
                    .iter()
                    .find(|l| Some(**l) != taken)
                    .or_else(|| catalog.first())
                    .copied()
                    .ok_or_else(|| Error::ConstructionFailed(format!("no degree-{p} local field at `{place}`")))?;
                set_label(this, place, pick);
            }
        }
    }
    Ok((a, b))
}

fn prime_power_index(c: &GlobalBrauerClass) -> Result<(u64, u32)> {
    let index = c.index_u64()?;
    prime_power(index)
        .ok_or_else(|| Error::LemmaPreconditionsFailed(format!("index {index} is not a prime power")))
}

/// Recomputes all index targets of a lemma instance from scratch and
/// returns `(ind(c_K), ind(c_{K L0}), ind(c_{K L1}))`.
pub fn verify_extension_lemma(
    c: &GlobalBrauerClass,
    l0: &FormalExtension,
    l1: &FormalExtension,
    k: &FormalExtension,
    distinguishing_place: &str,
) -> Result<(u64, u64, u64)> {
    let (p, m) = prime_power_index(c)?;
    let fail = |m: String| Err(Error::ConstructionFailed(m));
    if k.degree != p {
        return fail(format!("K has degree {}, expected {p}", k.degree));
    }
    let model = c.model();
    let Some(Some(k_label)) = full_field_label(k, distinguishing_place, model) else {
        return fail(format!("K is not a labeled field at `{distinguishing_place}`"));
    };
    for l in [l0, l1] {
        if full_field_label(l, distinguishing_place, model).flatten() == Some(k_label) {
            return fail(format!("K coincides with an input at `{distinguishing_place}`"));
        }
    }
    let target = |e: u32| checked_pow(p, e).expect("targets are below the index");
    let index_k = global_restrict(c, k)?.index_u64()?;
    if index_k != target(m - 1) {
        return fail(format!("ind(c_K) = {index_k}, expected {}", target(m - 1)));
    }
    let mut kl = [0; 2];
    for (i, l) in [l0, l1].into_iter().enumerate() {
        let comp = compositum(c, k, l)?;
        kl[i] = global_restrict(c, &comp.as_extension())?.index_u64()?;
        if kl[i] != target(m - 2) {
            return fail(format!("ind(c_(K L{i})) = {}, expected {}", kl[i], target(m - 2)));
        }
    }
    Ok((index_k, kl[0], kl[1]))
}

/// Given distinct degree-`p` extensions `l0`, `l1` each lowering the index
/// `p^m` of `c` to `p^{m-1}`, builds a third degree-`p` extension `K` with
/// `ind(c_K) = p^{m-1}` and `ind(c_{K L_i}) = p^{m-2}`.
///
/// At every support place `K` is a degree-`p` local field taken from the
/// place's catalog; at the first place of full local index it must differ
/// from both inputs. Label tuples are tried in lexicographic catalog order
/// and the first admissible one is returned.
pub fn construct_extension_lemma(
    c: &GlobalBrauerClass,
    l0: &FormalExtension,
    l1: &FormalExtension,
) -> Result<LemmaCertificate> {
    let pre = |m: String| Error::LemmaPreconditionsFailed(m);
    let (p, m) = prime_power_index(c)?;
    if m < 2 {
        return Err(pre(format!("index p^m = {p}^{m} needs m >= 2")));
    }
    l0.validate()?;
    l1.validate()?;
    if l0.degree != p || l1.degree != p {
        return Err(pre(format!("inputs must have degree {p}")));
    }
    let model = c.model();
    if !l0.is_distinct_from(l1, model) {
        return Err(pre("L0 and L1 are not distinct".into()));
    }
    let expect = checked_pow(p, m - 1).expect("below index");
    for (i, l) in [l0, l1].into_iter().enumerate() {
        let got = global_restrict(c, l)?.index_u64()?;
        if got != expect {
            return Err(pre(format!("ind(c_L{i}) = {got}, expected {expect}")));
        }
    }
    let full = checked_pow(p, m).expect("index fits");
    let v0 = c
        .support()
        .iter()
        .find(|(_, inv)| inv.order_u64() == Some(full))
        .map(|(l, _)| l.clone())
        .expect("some place attains the index");

    let (l0, l1) = normalize_inputs(c, l0, l1, p)?;
    let places: Vec<&String> = c.support().keys().collect();
    let mut options = Vec::with_capacity(places.len());
    for place in &places {
        let mut catalog = place_catalog(&c.places()[*place], p)?;
        if **place == v0 {
            let used: BTreeSet<_> =
                [&l0, &l1].iter().filter_map(|l| full_field_label(l, &v0, model).flatten()).collect();
            catalog.retain(|l| !used.contains(l));
        }
        if catalog.is_empty() {
            return Err(Error::ConstructionFailed(format!("no admissible local field at `{place}`")));
        }
        options.push(catalog);
    }

    // Odometer over label tuples, last place varying fastest.
    let mut cursor = vec![0usize; places.len()];
    loop {
        let choices: BTreeMap<String, LocalExtensionLabel> =
            places.iter().zip(&cursor).map(|(pl, &i)| ((*pl).clone(), options_at(&options, pl, &places, i))).collect();
        let requirements = choices
            .iter()
            .map(|(pl, l)| (pl.clone(), LocalRequirement { degree: p, label: Some(*l) }))
            .collect();
        let k = realize(&requirements, p, Some(&v0))?;
        if let Ok((index_k, index_kl0, index_kl1)) = verify_extension_lemma(c, &l0, &l1, &k, &v0) {
            return Ok(LemmaCertificate {
                p,
                m,
                extension: k,
                distinguishing_place: v0,
                l0,
                l1,
                choices,
                index_k,
                index_kl0,
                index_kl1,
            });
        }
        let mut pos = places.len();
        loop {
            if pos == 0 {
                return Err(Error::ConstructionFailed(
                    "no admissible local pattern found for the extension lemma".into(),
                ));
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < options[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
    }
}

fn options_at(options: &[Vec<LocalExtensionLabel>], place: &String, places: &[&String], i: usize) -> LocalExtensionLabel {
    let pos = places.iter().position(|p| *p == place).expect("place listed");
    options[pos][i]
}

/// Extension of degree `p^k` reducing the index `p^m` of `c` to `p^{m-k}`,
/// obtained by prescribing local degree `p^k` at every support place.
pub fn construct_power_extension(c: &GlobalBrauerClass, k: u32) -> Result<FormalExtension> {
    let index = c.index_u64()?;
    if index == 1 {
        return if k == 0 {
            Ok(FormalExtension::new(1))
        } else {
            Err(Error::InvalidTarget(format!("k = {k} exceeds m = 0 for the split class")))
        };
    }
    let (p, m) = prime_power(index)
        .ok_or_else(|| Error::InvalidTarget(format!("index {index} is not a prime power")))?;
    if k > m {
        return Err(Error::InvalidTarget(format!("k = {k} exceeds m = {m}")));
    }
    let degree = checked_pow(p, k).expect("p^k divides the index");
    if k == 0 {
        return Ok(FormalExtension::new(1));
    }
    let requirements = c.support().keys().map(|pl| (pl.clone(), LocalRequirement::degree(degree))).collect();
    realize(&requirements, degree, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::global_brauer::Place;
    use crate::invariants::QZInvariant;

    fn q(n: i64, d: u64) -> QZInvariant {
        QZInvariant::new(n, d).unwrap()
    }

    fn with_descriptors(pairs: &[(&str, QZInvariant)]) -> GlobalBrauerClass {
        let places = pairs
            .iter()
            .map(|(l, _)| Place::new(*l, LocalField::non_archimedean(5, 5, 0).unwrap()))
            .collect();
        super::super::validate_class(
            FieldModel::Global,
            places,
            pairs.iter().map(|(l, v)| (l.to_string(), v.clone())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn lemma_p2_m2() {
        let c = with_descriptors(&[("v0", q(1, 4)), ("v1", q(3, 4))]);
        let l0 = FormalExtension::new(2)
            .with_local("v0", vec![2])
            .with_field("v1", LocalExtensionLabel::new(ExtensionFamily::Kummer, 0));
        let l1 = l0.clone().with_field("v1", LocalExtensionLabel::new(ExtensionFamily::Kummer, 1));
        let cert = construct_extension_lemma(&c, &l0, &l1).unwrap();
        assert_eq!(cert.extension.degree, 2);
        assert_eq!(cert.extension.local_data["v0"], vec![2]);
        assert_eq!(cert.distinguishing_place, "v0");
        assert_eq!((cert.index_k, cert.index_kl0, cert.index_kl1), (2, 1, 1));
        let k0 = full_field_label(&cert.extension, "v0", FieldModel::Global).flatten().unwrap();
        for l in [&cert.l0, &cert.l1] {
            assert_ne!(full_field_label(l, "v0", FieldModel::Global).flatten(), Some(k0));
        }
    }

    #[test]
    fn lemma_p3_m2() {
        let c = with_descriptors(&[("v0", q(1, 9)), ("v1", q(8, 9))]);
        let l0 = FormalExtension::new(3)
            .with_local("v0", vec![3])
            .with_field("v1", LocalExtensionLabel::new(ExtensionFamily::Unramified, 0));
        let l1 = l0.clone().with_field("v1", LocalExtensionLabel::new(ExtensionFamily::EisensteinRoot, 2));
        let cert = construct_extension_lemma(&c, &l0, &l1).unwrap();
        assert_eq!(cert.extension.degree, 3);
        assert_eq!((cert.index_k, cert.index_kl0, cert.index_kl1), (3, 1, 1));
    }

    #[test]
    fn lemma_rejects_equal_inputs() {
        let c = with_descriptors(&[("v0", q(1, 4)), ("v1", q(3, 4))]);
        let l = FormalExtension::new(2).with_local("v0", vec![2]).with_local("v1", vec![2]);
        assert!(matches!(construct_extension_lemma(&c, &l, &l), Err(Error::LemmaPreconditionsFailed(_))));
    }

    #[test]
    fn lemma_rejects_wrong_index_drop() {
        let c = with_descriptors(&[("v0", q(1, 4)), ("v1", q(3, 4))]);
        let l0 = FormalExtension::new(2).with_local("v0", vec![2]).with_local("v1", vec![2]);
        let l1 = FormalExtension::new(2).with_local("v0", vec![1, 1]).with_local("v1", vec![2]);
        assert!(matches!(construct_extension_lemma(&c, &l0, &l1), Err(Error::LemmaPreconditionsFailed(_))));
    }

    #[test]
    fn local_model_lemma() {
        let place = Place::new("v", LocalField::non_archimedean(7, 7, 0).unwrap());
        let c = GlobalBrauerClass::local(place, q(1, 8)).unwrap();
        let l0 = FormalExtension::new(2).with_field("v", LocalExtensionLabel::new(ExtensionFamily::Kummer, 0));
        let l1 = FormalExtension::new(2).with_field("v", LocalExtensionLabel::new(ExtensionFamily::Kummer, 1));
        let cert = construct_extension_lemma(&c, &l0, &l1).unwrap();
        assert_eq!(cert.choices["v"], LocalExtensionLabel::new(ExtensionFamily::Kummer, 2));
        assert_eq!((cert.index_k, cert.index_kl0, cert.index_kl1), (4, 2, 2));
    }

    #[test]
    fn power_extension_examples() {
        let c = GlobalBrauerClass::from_invariants([("v0", q(1, 8)), ("v1", q(7, 8))]).unwrap();
        let e = construct_power_extension(&c, 2).unwrap();
        assert_eq!(e.degree, 4);
        assert_eq!(e.local_data["v0"], vec![4]);
        let r = global_restrict(&c, &e).unwrap();
        let invs: Vec<String> = r.support().values().map(|v| v.to_string()).collect();
        assert_eq!(invs, ["1/2", "1/2"]);
        assert_eq!(r.index_u64().unwrap(), 2);
        let id = construct_power_extension(&c, 0).unwrap();
        assert_eq!(global_restrict(&c, &id).unwrap().index_u64().unwrap(), 8);
        let full = construct_power_extension(&c, 3).unwrap();
        assert!(global_restrict(&c, &full).unwrap().is_trivial());
        assert!(matches!(construct_power_extension(&c, 4), Err(Error::InvalidTarget(_))));
    }
}
