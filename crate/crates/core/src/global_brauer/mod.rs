//! Global Brauer classes as zero-sum tuples of local invariants.
//!
//! Places are formal labels carrying a [`LocalField`] descriptor. Places
//! outside a class's support have invariant zero and are split completely
//! in every extension unless stated otherwise.

mod extension;
mod lemma;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::QZInvariant;
use crate::local_brauer::LocalField;

pub use extension::{compositum, realize, Compositum, CompositumPiece, FormalExtension, LocalRequirement};
pub use lemma::{
    construct_extension_lemma, construct_power_extension, place_catalog, verify_extension_lemma, LemmaCertificate,
};

/// Whether a class lives over a global field or a single local field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldModel {
    #[default]
    Global,
    /// One place, no reciprocity constraint. Extensions are fields, so a
    /// missing partition means `[n]` instead of "split completely".
    Local,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Place {
    pub label: String,
    pub descriptor: LocalField,
}

impl Place {
    pub fn new(label: impl Into<String>, descriptor: LocalField) -> Self {
        Place { label: label.into(), descriptor }
    }
}

/// A Brauer class given by its local invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawClass", into = "RawClass")]
pub struct GlobalBrauerClass {
    model: FieldModel,
    places: BTreeMap<String, LocalField>,
    invariants: BTreeMap<String, QZInvariant>,
}

#[derive(Serialize, Deserialize)]
struct RawClass {
    #[serde(default, skip_serializing_if = "is_global")]
    model: FieldModel,
    #[serde(default)]
    places: Vec<Place>,
    #[serde(default)]
    invariants: BTreeMap<String, QZInvariant>,
}

fn is_global(m: &FieldModel) -> bool {
    *m == FieldModel::Global
}

impl TryFrom<RawClass> for GlobalBrauerClass {
    type Error = Error;

    fn try_from(raw: RawClass) -> Result<Self> {
        validate_class(raw.model, raw.places, raw.invariants)
    }
}

impl From<GlobalBrauerClass> for RawClass {
    fn from(c: GlobalBrauerClass) -> Self {
        RawClass {
            model: c.model,
            places: c.places.into_iter().map(|(label, descriptor)| Place { label, descriptor }).collect(),
            invariants: c.invariants,
        }
    }
}

/// Checks reciprocity and the archimedean constraints and builds the class.
///
/// Places named only in `invariants` get an [`LocalField::Unspecified`]
/// descriptor. Zero invariants are dropped from the support.
pub fn validate_class(
    model: FieldModel,
    places: Vec<Place>,
    invariants: BTreeMap<String, QZInvariant>,
) -> Result<GlobalBrauerClass> {
    let mut descriptors = BTreeMap::new();
    for place in places {
        place.descriptor.validate()?;
        if descriptors.insert(place.label.clone(), place.descriptor).is_some() {
            return Err(Error::InvalidLocalInvariant { place: place.label, reason: "duplicate place label".into() });
        }
    }
    for label in invariants.keys() {
        descriptors.entry(label.clone()).or_insert(LocalField::Unspecified);
    }
    for (label, inv) in &invariants {
        if let Some(bound) = descriptors[label].invariant_group_order() {
            if inv.scale(bound) != QZInvariant::zero() {
                return Err(Error::InvalidLocalInvariant {
                    place: label.clone(),
                    reason: format!("invariant {inv} does not lie in the subgroup of order {bound}"),
                });
            }
        }
    }
    match model {
        FieldModel::Global => {
            let total = QZInvariant::sum(invariants.values());
            if !total.is_zero() {
                return Err(Error::NotInBrauerGroup(total.to_string()));
            }
        }
        FieldModel::Local => {
            if descriptors.len() != 1 {
                return Err(Error::InvalidLocalInvariant {
                    place: descriptors.keys().cloned().collect::<Vec<_>>().join(","),
                    reason: "a local field model has exactly one place".into(),
                });
            }
        }
    }
    let invariants = invariants.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    Ok(GlobalBrauerClass { model, places: descriptors, invariants })
}

impl GlobalBrauerClass {
    /// Global class from `(label, invariant)` pairs with unspecified descriptors.
    pub fn from_invariants<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, QZInvariant)>,
    {
        let invariants = pairs.into_iter().map(|(l, v)| (l.to_string(), v)).collect();
        validate_class(FieldModel::Global, Vec::new(), invariants)
    }

    /// Class over a local field with a single place.
    pub fn local(place: Place, invariant: QZInvariant) -> Result<Self> {
        let label = place.label.clone();
        validate_class(FieldModel::Local, vec![place], BTreeMap::from([(label, invariant)]))
    }

    pub fn trivial() -> Self {
        GlobalBrauerClass { model: FieldModel::Global, places: BTreeMap::new(), invariants: BTreeMap::new() }
    }

    pub fn model(&self) -> FieldModel {
        self.model
    }

    pub fn places(&self) -> &BTreeMap<String, LocalField> {
        &self.places
    }

    pub fn descriptor(&self, label: &str) -> Option<&LocalField> {
        self.places.get(label)
    }

    /// Nonzero local invariants, keyed by place label.
    pub fn support(&self) -> &BTreeMap<String, QZInvariant> {
        &self.invariants
    }

    pub fn invariant(&self, label: &str) -> QZInvariant {
        self.invariants.get(label).cloned().unwrap_or_default()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Index as the lcm of local indices (`1` for the trivial class).
    pub fn index(&self) -> BigUint {
        self.invariants.values().fold(BigUint::one(), |acc, v| acc.lcm(&v.order()))
    }

    pub fn index_u64(&self) -> Result<u64> {
        self.index()
            .to_u64()
            .ok_or_else(|| Error::InvalidAlgebra("index does not fit in 64 bits".into()))
    }

    /// Order of the class in the group of invariant tuples: the least `N`
    /// annihilating every local invariant, found by stepping through the
    /// local orders.
    pub fn period(&self) -> BigUint {
        let mut n = BigUint::one();
        for inv in self.invariants.values() {
            let scaled = inv.scale_big(&n);
            n *= scaled.order();
        }
        n
    }

    /// Local index at `label`.
    pub fn local_index(&self, label: &str) -> BigUint {
        self.invariant(label).order()
    }

    pub fn scale(&self, m: u64) -> GlobalBrauerClass {
        GlobalBrauerClass {
            model: self.model,
            places: self.places.clone(),
            invariants: self
                .invariants
                .iter()
                .map(|(k, v)| (k.clone(), v.scale(m)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &GlobalBrauerClass) -> Result<GlobalBrauerClass> {
        let mut invariants = self.invariants.clone();
        for (k, v) in &other.invariants {
            let e = invariants.entry(k.clone()).or_default();
            *e = e.add(v);
        }
        let mut places: Vec<Place> = self.places.iter().map(|(l, d)| Place::new(l.clone(), d.clone())).collect();
        places.extend(
            other
                .places
                .iter()
                .filter(|(l, _)| !self.places.contains_key(*l))
                .map(|(l, d)| Place::new(l.clone(), d.clone())),
        );
        validate_class(self.model, places, invariants)
    }

    /// Place-wise primary components, one class per prime of the index.
    pub fn primary_components(&self) -> BTreeMap<u64, GlobalBrauerClass> {
        let mut parts: BTreeMap<u64, BTreeMap<String, QZInvariant>> = BTreeMap::new();
        for (label, inv) in &self.invariants {
            for (p, comp) in inv.primary_split() {
                let p = p.to_u64().expect("prime factors of a local order fit in u64");
                parts.entry(p).or_default().insert(label.clone(), comp);
            }
        }
        parts
            .into_iter()
            .map(|(p, invariants)| {
                (p, GlobalBrauerClass { model: self.model, places: self.places.clone(), invariants })
            })
            .collect()
    }
}

/// Index of `c` (`global_index`); period equals index for these classes.
pub fn global_index(c: &GlobalBrauerClass) -> BigUint {
    c.index()
}

/// Restriction along a formal extension, place by place.
///
/// The place of `E` above `v` carrying the `i`-th local degree is named
/// `"{v}.{i}"` (1-based).
pub fn global_restrict(c: &GlobalBrauerClass, e: &FormalExtension) -> Result<GlobalBrauerClass> {
    e.validate()?;
    if c.model == FieldModel::Local {
        if let Some(parts) = e.local_data.keys().find(|l| !c.places.contains_key(*l)) {
            return Err(Error::InvalidExtension(format!("place `{parts}` is not part of the local model")));
        }
    }
    let mut places = BTreeMap::new();
    let mut invariants = BTreeMap::new();
    for (label, descriptor) in &c.places {
        let inv = c.invariant(label);
        for (i, (degree, _)) in e.components(label, c.model).into_iter().enumerate() {
            let name = format!("{label}.{}", i + 1);
            places.insert(name.clone(), descriptor.after_extension(degree));
            let scaled = inv.scale(degree);
            if !scaled.is_zero() {
                invariants.insert(name, scaled);
            }
        }
    }
    let restricted = GlobalBrauerClass { model: c.model, places, invariants };
    debug_assert!(c.model == FieldModel::Local || QZInvariant::sum(restricted.invariants.values()).is_zero());
    Ok(restricted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> QZInvariant {
        QZInvariant::new(n, d).unwrap()
    }

    fn class(pairs: &[(&str, i64, u64)]) -> Result<GlobalBrauerClass> {
        GlobalBrauerClass::from_invariants(pairs.iter().map(|&(l, n, d)| (l, q(n, d))))
    }

    #[test]
    fn validate_examples() {
        assert!(class(&[("v1", 1, 4), ("v2", 3, 4)]).is_ok());
        assert!(matches!(class(&[("v1", 1, 3)]), Err(Error::NotInBrauerGroup(_))));
        assert!(class(&[]).unwrap().is_trivial());
    }

    #[test]
    fn archimedean_constraints() {
        let real = vec![Place::new("inf", LocalField::Real)];
        let ok = BTreeMap::from([("inf".to_string(), q(1, 2)), ("v".to_string(), q(1, 2))]);
        assert!(validate_class(FieldModel::Global, real.clone(), ok).is_ok());
        let bad = BTreeMap::from([("inf".to_string(), q(1, 4)), ("v".to_string(), q(3, 4))]);
        assert!(matches!(
            validate_class(FieldModel::Global, real, bad),
            Err(Error::InvalidLocalInvariant { .. })
        ));
        let cplx = vec![Place::new("c", LocalField::Complex)];
        let bad = BTreeMap::from([("c".to_string(), q(1, 2)), ("v".to_string(), q(1, 2))]);
        assert!(validate_class(FieldModel::Global, cplx, bad).is_err());
    }

    #[test]
    fn index_examples() {
        assert_eq!(class(&[("v1", 1, 4), ("v2", 3, 4)]).unwrap().index(), BigUint::from(4u32));
        let c = class(&[("v1", 1, 2), ("v2", 1, 3), ("v3", 1, 6)]).unwrap();
        assert_eq!(c.index(), BigUint::from(6u32));
        assert_eq!(c.period(), c.index());
        assert_eq!(class(&[]).unwrap().index(), BigUint::one());
    }

    #[test]
    fn restrict_examples() {
        let c = class(&[("v1", 1, 4), ("v2", 3, 4)]).unwrap();
        let e = FormalExtension::new(2).with_local("v1", vec![2]).with_local("v2", vec![1, 1]);
        let r = global_restrict(&c, &e).unwrap();
        let got: Vec<(String, String)> = r.support().iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
        assert_eq!(
            got,
            [("v1.1".into(), "1/2".into()), ("v2.1".into(), "3/4".into()), ("v2.2".into(), "3/4".into())]
        );
        assert_eq!(r.index(), BigUint::from(4u32));

        let e = FormalExtension::new(4).with_local("v1", vec![4]).with_local("v2", vec![4]);
        assert!(global_restrict(&c, &e).unwrap().is_trivial());
        assert!(global_restrict(&GlobalBrauerClass::trivial(), &e).unwrap().is_trivial());

        let bad = FormalExtension::new(3).with_local("v1", vec![2]);
        assert!(matches!(global_restrict(&c, &bad), Err(Error::InvalidExtension(_))));
    }

    #[test]
    fn local_model_restriction_defaults_to_a_field() {
        let place = Place::new("v", LocalField::non_archimedean(5, 5, 0).unwrap());
        let c = GlobalBrauerClass::local(place, q(1, 4)).unwrap();
        let r = global_restrict(&c, &FormalExtension::new(2)).unwrap();
        assert_eq!(r.index(), BigUint::from(2u32));
        assert_eq!(r.model(), FieldModel::Local);
    }

    #[test]
    fn primary_components_are_valid_classes() {
        let c = class(&[("v1", 1, 12), ("v2", 11, 12)]).unwrap();
        let parts = c.primary_components();
        assert_eq!(parts[&2].support()["v1"], q(3, 4));
        assert_eq!(parts[&2].support()["v2"], q(1, 4));
        assert_eq!(parts[&3].support()["v1"], q(1, 3));
        assert_eq!(parts[&3].support()["v2"], q(2, 3));
        for part in parts.values() {
            assert!(QZInvariant::sum(part.support().values()).is_zero());
        }
    }

    #[test]
    fn serde_round_trip() {
        let json = r#"{"places":[{"label":"v1","descriptor":{"residue_char":5,"residue_size":5,"field_char":0,"zeta_flags":{}}}],"invariants":{"v1":"1/4","v2":"3/4"}}"#;
        let c: GlobalBrauerClass = serde_json::from_str(json).unwrap();
        assert_eq!(c.index(), BigUint::from(4u32));
        let back = serde_json::to_string(&c).unwrap();
        let again: GlobalBrauerClass = serde_json::from_str(&back).unwrap();
        assert_eq!(again, c);
        assert!(serde_json::from_str::<GlobalBrauerClass>(r#"{"invariants":{"v1":"1/3"}}"#).is_err());
    }
}
