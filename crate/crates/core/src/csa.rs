//! Central simple algebras described by their numerical invariants.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, valuation};
use crate::error::{Error, Result};
use crate::global_brauer::{global_restrict, FormalExtension, GlobalBrauerClass};
use crate::invariants::QZInvariant;
use crate::local_brauer::LocalBrauerClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseKind {
    Abstract,
    Local,
    Global,
}

impl std::fmt::Display for BaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BaseKind::Abstract => "abstract",
            BaseKind::Local => "local",
            BaseKind::Global => "global",
        })
    }
}

impl std::str::FromStr for BaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abstract" => Ok(BaseKind::Abstract),
            "local" => Ok(BaseKind::Local),
            "global" => Ok(BaseKind::Global),
            other => Err(Error::InvalidAlgebra(format!("unknown base kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BrauerData {
    Local(LocalBrauerClass),
    Global(GlobalBrauerClass),
}

/// An algebra `A` by degree, index and exponent, optionally backed by an
/// explicit Brauer class from which index and exponent are derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra", into = "RawAlgebra")]
pub struct AlgebraDescriptor {
    kind: BaseKind,
    degree: u64,
    index: u64,
    exponent: u64,
    char_divides_index: Option<bool>,
    brauer_data: Option<BrauerData>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    kind: BaseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponent: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    char_divides_index: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    brauer_data: Option<BrauerData>,
}

impl TryFrom<RawAlgebra> for AlgebraDescriptor {
    type Error = Error;

    fn try_from(raw: RawAlgebra) -> Result<Self> {
        let built = match (raw.kind, raw.brauer_data) {
            (BaseKind::Abstract, None) => {
                let index = raw.index.ok_or_else(|| Error::InvalidAlgebra("abstract algebra needs an index".into()))?;
                AlgebraDescriptor::abstract_algebra(index, raw.exponent.unwrap_or(index), raw.degree, raw.char_divides_index)?
            }
            (BaseKind::Abstract, Some(_)) => {
                return Err(Error::InvalidAlgebra("abstract algebras carry no Brauer data".into()))
            }
            (BaseKind::Local, Some(BrauerData::Local(c))) => AlgebraDescriptor::local(c, raw.degree)?,
            (BaseKind::Global, Some(BrauerData::Global(c))) => AlgebraDescriptor::global(c, raw.degree)?,
            (kind, _) => return Err(Error::InvalidAlgebra(format!("{kind} algebra needs matching Brauer data"))),
        };
        if built.kind != BaseKind::Abstract {
            if raw.char_divides_index.is_some() {
                return Err(Error::InvalidAlgebra("char_divides_index applies to abstract algebras only".into()));
            }
            for (name, given, derived) in [("index", raw.index, built.index), ("exponent", raw.exponent, built.exponent)] {
                if given.is_some_and(|g| g != derived) {
                    return Err(Error::InvalidAlgebra(format!(
                        "{name} {} disagrees with the Brauer data ({derived})",
                        given.unwrap()
                    )));
                }
            }
        }
        Ok(built)
    }
}

impl From<AlgebraDescriptor> for RawAlgebra {
    fn from(a: AlgebraDescriptor) -> Self {
        RawAlgebra {
            kind: a.kind,
            degree: Some(a.degree),
            index: Some(a.index),
            exponent: Some(a.exponent),
            char_divides_index: a.char_divides_index,
            brauer_data: a.brauer_data,
        }
    }
}

fn same_primes(a: u64, b: u64) -> bool {
    let pa: Vec<u64> = factorize(a).into_iter().map(|(p, _)| p).collect();
    let pb: Vec<u64> = factorize(b).into_iter().map(|(p, _)| p).collect();
    pa == pb
}

fn check_degree(index: u64, degree: Option<u64>) -> Result<u64> {
    let degree = degree.unwrap_or(index);
    if degree == 0 || degree % index != 0 {
        return Err(Error::InvalidAlgebra(format!("index {index} does not divide degree {degree}")));
    }
    Ok(degree)
}

fn to_u64(n: num_bigint::BigUint) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::InvalidAlgebra("index does not fit in 64 bits".into()))
}

impl AlgebraDescriptor {
    /// Algebra over an unspecified field, given only by its invariants.
    pub fn abstract_algebra(
        index: u64,
        exponent: u64,
        degree: Option<u64>,
        char_divides_index: Option<bool>,
    ) -> Result<Self> {
        if index == 0 || exponent == 0 {
            return Err(Error::InvalidAlgebra("index and exponent must be positive".into()));
        }
        if index % exponent != 0 || !same_primes(index, exponent) {
            return Err(Error::InvalidAlgebra(format!(
                "exponent {exponent} must divide index {index} and share its prime divisors"
            )));
        }
        let degree = check_degree(index, degree)?;
        Ok(AlgebraDescriptor { kind: BaseKind::Abstract, degree, index, exponent, char_divides_index, brauer_data: None })
    }

    pub fn local(class: LocalBrauerClass, degree: Option<u64>) -> Result<Self> {
        let index = to_u64(class.local_index())?;
        let degree = check_degree(index, degree)?;
        Ok(AlgebraDescriptor {
            kind: BaseKind::Local,
            degree,
            index,
            exponent: index,
            char_divides_index: None,
            brauer_data: Some(BrauerData::Local(class)),
        })
    }

    pub fn global(class: GlobalBrauerClass, degree: Option<u64>) -> Result<Self> {
        let index = class.index_u64()?;
        let degree = check_degree(index, degree)?;
        Ok(AlgebraDescriptor {
            kind: BaseKind::Global,
            degree,
            index,
            exponent: index,
            char_divides_index: None,
            brauer_data: Some(BrauerData::Global(class)),
        })
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn char_divides_index(&self) -> Option<bool> {
        self.char_divides_index
    }

    pub fn brauer_data(&self) -> Option<&BrauerData> {
        self.brauer_data.as_ref()
    }

    /// Same algebra with a different degree (a matrix algebra over the same
    /// division algebra).
    pub fn with_degree(&self, degree: u64) -> Result<Self> {
        let degree = check_degree(self.index, Some(degree))?;
        Ok(AlgebraDescriptor { degree, ..self.clone() })
    }
}

pub fn algebra_index(a: &AlgebraDescriptor) -> u64 {
    a.index
}

/// Prime-power components of the underlying division algebra, by prime.
pub fn primary_decompose(a: &AlgebraDescriptor) -> Vec<AlgebraDescriptor> {
    match &a.brauer_data {
        None => factorize(a.index)
            .into_iter()
            .map(|(p, e)| {
                let index = p.pow(e);
                let exponent = p.pow(valuation(a.exponent, p));
                let char_flag = match a.char_divides_index {
                    Some(false) => Some(false),
                    _ => None,
                };
                AlgebraDescriptor::abstract_algebra(index, exponent, None, char_flag)
                    .expect("p-parts satisfy the divisibility laws")
            })
            .collect(),
        Some(BrauerData::Local(c)) => c
            .invariant
            .primary_split()
            .into_values()
            .map(|inv| AlgebraDescriptor::local(LocalBrauerClass::new(inv), None).expect("component of a valid class"))
            .collect(),
        Some(BrauerData::Global(c)) => c
            .primary_components()
            .into_values()
            .map(|comp| AlgebraDescriptor::global(comp, None).expect("component of a valid class"))
            .collect(),
    }
}

/// `A ⊗ E`, with index and exponent recomputed from the restricted class.
pub fn restrict_algebra(a: &AlgebraDescriptor, e: &FormalExtension) -> Result<AlgebraDescriptor> {
    e.validate()?;
    match &a.brauer_data {
        None => Err(Error::UnsupportedForAbstract),
        Some(BrauerData::Local(c)) => {
            let restricted = c.local_restrict(e.degree)?;
            AlgebraDescriptor::local(restricted, Some(a.degree))
        }
        Some(BrauerData::Global(c)) => {
            let restricted = global_restrict(c, e)?;
            AlgebraDescriptor::global(restricted, Some(a.degree))
        }
    }
}

/// Local invariant as a descriptor.
pub fn local_algebra(num: i64, den: u64) -> Result<AlgebraDescriptor> {
    AlgebraDescriptor::local(LocalBrauerClass::new(QZInvariant::new(num, den)?), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::global_brauer::construct_power_extension;

    fn q(n: i64, d: u64) -> QZInvariant {
        QZInvariant::new(n, d).unwrap()
    }

    #[test]
    fn index_examples() {
        let a = AlgebraDescriptor::abstract_algebra(12, 12, None, None).unwrap();
        assert_eq!(algebra_index(&a), 12);
        assert_eq!(a.degree(), 12);
        let c = GlobalBrauerClass::from_invariants([("v1", q(1, 4)), ("v2", q(3, 4))]).unwrap();
        let g = AlgebraDescriptor::global(c, None).unwrap();
        assert_eq!((algebra_index(&g), g.exponent()), (4, 4));
        assert_eq!(algebra_index(&local_algebra(1, 6).unwrap()), 6);
    }

    #[test]
    fn abstract_validation() {
        assert!(AlgebraDescriptor::abstract_algebra(12, 6, None, None).is_ok());
        assert!(AlgebraDescriptor::abstract_algebra(12, 2, None, None).is_err());
        assert!(AlgebraDescriptor::abstract_algebra(12, 5, None, None).is_err());
        assert!(AlgebraDescriptor::abstract_algebra(4, 4, Some(6), None).is_err());
        assert_eq!(AlgebraDescriptor::abstract_algebra(4, 2, Some(8), None).unwrap().degree(), 8);
    }

    #[test]
    fn decompose_abstract() {
        let a = AlgebraDescriptor::abstract_algebra(12, 6, None, None).unwrap();
        let parts: Vec<(u64, u64)> = primary_decompose(&a).iter().map(|d| (d.index(), d.exponent())).collect();
        assert_eq!(parts, [(4, 2), (3, 3)]);
        assert!(primary_decompose(&AlgebraDescriptor::abstract_algebra(1, 1, None, None).unwrap()).is_empty());
    }

    #[test]
    fn decompose_global() {
        let c = GlobalBrauerClass::from_invariants([("v1", q(1, 12)), ("v2", q(11, 12))]).unwrap();
        let parts = primary_decompose(&AlgebraDescriptor::global(c, None).unwrap());
        let shown: Vec<Vec<String>> = parts
            .iter()
            .map(|d| match d.brauer_data() {
                Some(BrauerData::Global(c)) => c.support().values().map(|v| v.to_string()).collect(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(shown, [vec!["3/4", "1/4"], vec!["1/3", "2/3"]]);
    }

    #[test]
    fn restriction_examples() {
        let c = GlobalBrauerClass::from_invariants([("v1", q(1, 4)), ("v2", q(3, 4))]).unwrap();
        let e = construct_power_extension(&c, 2).unwrap();
        let a = AlgebraDescriptor::global(c, None).unwrap();
        assert_eq!(restrict_algebra(&a, &e).unwrap().index(), 1);
        let l = local_algebra(1, 4).unwrap();
        assert_eq!(restrict_algebra(&l, &FormalExtension::new(2)).unwrap().index(), 2);
        let abs = AlgebraDescriptor::abstract_algebra(4, 4, None, None).unwrap();
        assert!(matches!(restrict_algebra(&abs, &FormalExtension::new(2)), Err(Error::UnsupportedForAbstract)));
    }

    #[test]
    fn serde_round_trip() {
        let a = AlgebraDescriptor::abstract_algebra(16, 2, None, Some(false)).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"kind":"abstract","degree":16,"index":16,"exponent":2,"char_divides_index":false}"#);
        assert_eq!(serde_json::from_str::<AlgebraDescriptor>(&s).unwrap(), a);
        let g: AlgebraDescriptor = serde_json::from_str(
            r#"{"kind":"global","brauer_data":{"invariants":{"v1":"1/4","v2":"3/4"}}}"#,
        )
        .unwrap();
        assert_eq!(g.index(), 4);
        let bad = r#"{"kind":"global","index":2,"brauer_data":{"invariants":{"v1":"1/4","v2":"3/4"}}}"#;
        assert!(serde_json::from_str::<AlgebraDescriptor>(bad).is_err());
        let local: AlgebraDescriptor =
            serde_json::from_str(r#"{"kind":"local","brauer_data":{"invariant":"1/6"}}"#).unwrap();
        assert_eq!(local.index(), 6);
    }
}
