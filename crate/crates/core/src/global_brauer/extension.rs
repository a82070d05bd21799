//! Formal extensions: a degree plus per-place local-degree partitions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FieldModel, GlobalBrauerClass};
use crate::error::{Error, Result};
use crate::local_brauer::LocalExtensionLabel;

/// A degree-`n` extension described by the local degrees above each place.
///
/// `labels[v][i]` optionally names the local field of the `i`-th component
/// above `v` (used to certify distinctness of equal-degree components).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalExtension {
    pub degree: u64,
    #[serde(default)]
    pub local_data: BTreeMap<String, Vec<u64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, Vec<Option<LocalExtensionLabel>>>,
    #[serde(default)]
    pub distinguishing_place: Option<String>,
}

impl FormalExtension {
    pub fn new(degree: u64) -> Self {
        FormalExtension { degree, local_data: BTreeMap::new(), labels: BTreeMap::new(), distinguishing_place: None }
    }

    pub fn with_local(mut self, place: &str, degrees: Vec<u64>) -> Self {
        self.local_data.insert(place.to_string(), degrees);
        self
    }

    /// Marks the place as a single local field of full degree with `label`.
    pub fn with_field(mut self, place: &str, label: LocalExtensionLabel) -> Self {
        self.local_data.insert(place.to_string(), vec![self.degree]);
        self.labels.insert(place.to_string(), vec![Some(label)]);
        self
    }

    pub fn with_distinguishing_place(mut self, place: &str) -> Self {
        self.distinguishing_place = Some(place.to_string());
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidExtension(m));
        if self.degree == 0 {
            return bad("degree must be positive".into());
        }
        for (place, parts) in &self.local_data {
            if parts.is_empty() || parts.contains(&0) {
                return bad(format!("local degrees at `{place}` must be positive"));
            }
            let sum: u64 = parts.iter().sum();
            if sum != self.degree {
                return bad(format!("local degrees at `{place}` sum to {sum}, not {}", self.degree));
            }
        }
        for (place, labels) in &self.labels {
            let Some(parts) = self.local_data.get(place) else {
                return bad(format!("labels given at `{place}` without local data"));
            };
            if labels.len() != parts.len() {
                return bad(format!("label count at `{place}` does not match its partition"));
            }
        }
        Ok(())
    }

    /// Local components above `place` as `(degree, label)`, applying the
    /// model's default for places without data.
    pub fn components(&self, place: &str, model: FieldModel) -> Vec<(u64, Option<LocalExtensionLabel>)> {
        match self.local_data.get(place) {
            Some(parts) => {
                let labels = self.labels.get(place);
                parts
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| (d, labels.and_then(|l| l[i])))
                    .collect()
            }
            None => match model {
                FieldModel::Global => vec![(1, None); self.degree as usize],
                FieldModel::Local => vec![(self.degree, None)],
            },
        }
    }

    /// Structural distinctness: different degree, different local data, or
    /// different labels on a component both sides label.
    pub fn is_distinct_from(&self, other: &FormalExtension, model: FieldModel) -> bool {
        if self.degree != other.degree {
            return true;
        }
        let places = self.local_data.keys().chain(other.local_data.keys());
        for place in places {
            let a = self.components(place, model);
            let b = other.components(place, model);
            if a.len() != b.len() {
                return true;
            }
            for ((da, la), (db, lb)) in a.iter().zip(&b) {
                if da != db {
                    return true;
                }
                if let (Some(x), Some(y)) = (la, lb) {
                    if x != y {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// A required completion for [`realize`]: local degree and optional label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRequirement {
    pub degree: u64,
    #[serde(default)]
    pub label: Option<LocalExtensionLabel>,
}

impl LocalRequirement {
    pub fn degree(degree: u64) -> Self {
        LocalRequirement { degree, label: None }
    }
}

/// Global extension of degree `degree` whose completion at each required
/// place is the prescribed local field; every other place splits completely.
pub fn realize(
    requirements: &BTreeMap<String, LocalRequirement>,
    degree: u64,
    distinguishing_place: Option<&str>,
) -> Result<FormalExtension> {
    if degree == 0 {
        return Err(Error::UnrealizableRequest("degree must be positive".into()));
    }
    let mut ext = FormalExtension::new(degree);
    for (place, req) in requirements {
        if req.degree != degree {
            return Err(Error::UnrealizableRequest(format!(
                "local degree {} at `{place}` differs from the target degree {degree}",
                req.degree
            )));
        }
        ext.local_data.insert(place.clone(), vec![degree]);
        if req.label.is_some() {
            ext.labels.insert(place.clone(), vec![req.label]);
        }
    }
    ext.distinguishing_place = distinguishing_place.map(str::to_string);
    Ok(ext)
}

/// One local component of a compositum: the product of the `left`-th
/// component of the first factor with the `right`-th of the second,
/// `degree` over the base place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositumPiece {
    pub left: usize,
    pub right: usize,
    pub degree: u64,
}

/// Place-by-place model of the compositum of two formal extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compositum {
    pub degree: u64,
    pub pieces: BTreeMap<String, Vec<CompositumPiece>>,
    /// Place at which two full-degree local fields are distinct, which
    /// certifies the global degree as the product.
    pub certified_at: String,
}

impl Compositum {
    pub fn as_extension(&self) -> FormalExtension {
        let mut ext = FormalExtension::new(self.degree);
        for (place, pieces) in &self.pieces {
            ext.local_data.insert(place.clone(), pieces.iter().map(|p| p.degree).collect());
        }
        ext.distinguishing_place = Some(self.certified_at.clone());
        ext
    }
}

/// Compositum of `e1` and `e2` over the base carrying `base`.
///
/// Components `a` (of `e1`) and `b` (of `e2`) above a place combine as:
/// if either has degree 1, a single piece of degree `a * b`; if they are
/// the same local field (equal degree and equal labels, or both unlabeled
/// at the same position of identical partitions away from a
/// distinguishing place), `a` pieces of degree `a`; otherwise a single
/// piece of degree `a * b`. The local degrees above every place therefore
/// sum to `deg(e1) * deg(e2)`.
pub fn compositum(base: &GlobalBrauerClass, e1: &FormalExtension, e2: &FormalExtension) -> Result<Compositum> {
    e1.validate()?;
    e2.validate()?;
    let model = base.model();
    let degree = e1.degree * e2.degree;
    let mut pieces = BTreeMap::new();
    let mut certified_at = None;
    for place in base.places().keys() {
        let a = e1.components(place, model);
        let b = e2.components(place, model);
        let flagged = e1.distinguishing_place.as_deref() == Some(place)
            || e2.distinguishing_place.as_deref() == Some(place);
        let same_data = a.iter().map(|c| c.0).eq(b.iter().map(|c| c.0));
        let mut out = Vec::new();
        for (i, &(da, la)) in a.iter().enumerate() {
            for (j, &(db, lb)) in b.iter().enumerate() {
                let identical = da == db
                    && da > 1
                    && match (la, lb) {
                        (Some(x), Some(y)) => x == y,
                        (None, None) => i == j && same_data && !flagged,
                        _ => false,
                    };
                if identical {
                    out.extend((0..da).map(|_| CompositumPiece { left: i, right: j, degree: da }));
                } else {
                    out.push(CompositumPiece { left: i, right: j, degree: da * db });
                }
            }
        }
        if certified_at.is_none() && out.len() == 1 && out[0].degree == degree && e1.degree > 1 && e2.degree > 1 {
            certified_at = Some(place.clone());
        }
        pieces.insert(place.clone(), out);
    }
    let certified_at = certified_at.ok_or_else(|| {
        Error::InvalidExtension("no place certifies linear disjointness of the two extensions".into())
    })?;
    Ok(Compositum { degree, pieces, certified_at })
}
