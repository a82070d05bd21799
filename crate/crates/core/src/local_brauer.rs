//! Local Brauer classes and degree-`p` extension counting over local fields.
//!
//! Local fields are descriptors, never constructed fields: the only
//! questions asked of them are "how many degree-`p` extensions are
//! guaranteed" and "give me that many formally distinct labels".

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{is_prime, log_exact};
use crate::error::{Error, Result};
use crate::invariants::QZInvariant;

/// Data of a non-archimedean local field that decides which of the three
/// extension-counting cases applies.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonArchimedean {
    pub residue_char: u64,
    pub residue_size: u64,
    /// `0` or `residue_char`.
    pub field_char: u64,
    /// User-supplied `zeta_p in F` flags; only consulted where the
    /// descriptor cannot decide membership on its own.
    pub zeta_flags: BTreeMap<u64, bool>,
}

/// A completion of a field model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalField {
    NonArchimedean(NonArchimedean),
    Real,
    Complex,
    /// A non-archimedean completion whose residue data is not tracked,
    /// e.g. a completion of a formal extension.
    Unspecified,
}

/// Guaranteed number of degree-`p` extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "at_least")]
pub enum ExtensionCount {
    Infinite,
    AtLeast(u64),
}

impl ExtensionCount {
    pub fn admits(&self, count: u64) -> bool {
        match *self {
            ExtensionCount::Infinite => true,
            ExtensionCount::AtLeast(n) => count <= n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtensionFamily {
    ArtinSchreier,
    Kummer,
    Unramified,
    EisensteinRoot,
    /// Labels for [`LocalField::Unspecified`] completions.
    Generic,
}

impl ExtensionFamily {
    fn name(self) -> &'static str {
        match self {
            ExtensionFamily::ArtinSchreier => "artin-schreier",
            ExtensionFamily::Kummer => "kummer",
            ExtensionFamily::Unramified => "unramified",
            ExtensionFamily::EisensteinRoot => "eisenstein-root",
            ExtensionFamily::Generic => "generic",
        }
    }
}

/// Formal name of one degree-`p` extension of a local field.
///
/// Artin-Schreier labels carry the exponent `k` of `t^{-k}`; Kummer labels
/// index a line in a two-dimensional `F_p`-subspace of `F^x/(F^x)^p`;
/// Eisenstein labels index a root of `x^p - pi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalExtensionLabel {
    pub family: ExtensionFamily,
    pub parameter: u64,
}

impl LocalExtensionLabel {
    pub fn new(family: ExtensionFamily, parameter: u64) -> Self {
        LocalExtensionLabel { family, parameter }
    }
}

impl fmt::Display for LocalExtensionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            ExtensionFamily::Unramified => f.write_str("unramified"),
            fam => write!(f, "{}({})", fam.name(), self.parameter),
        }
    }
}

impl FromStr for LocalExtensionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidExtension(format!("bad extension label `{s}`"));
        if s == "unramified" {
            return Ok(Self::new(ExtensionFamily::Unramified, 0));
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let param: u64 = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let family = [
            ExtensionFamily::ArtinSchreier,
            ExtensionFamily::Kummer,
            ExtensionFamily::EisensteinRoot,
            ExtensionFamily::Generic,
        ]
        .into_iter()
        .find(|f| f.name() == name)
        .ok_or_else(bad)?;
        Ok(Self::new(family, param))
    }
}

impl Serialize for LocalExtensionLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LocalExtensionLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Which branch of the degree-`p` counting argument applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingCase {
    /// `char F = p`: Artin-Schreier extensions, infinitely many.
    ArtinSchreier,
    /// `char F != p`, `zeta_p in F`: Kummer theory, at least `p + 1`.
    Kummer,
    /// `char F != p`, `zeta_p not in F`: unramified plus `p` Eisenstein roots.
    UnramifiedPlusEisenstein,
}

impl LocalField {
    pub fn non_archimedean(residue_char: u64, residue_size: u64, field_char: u64) -> Result<Self> {
        let f = LocalField::NonArchimedean(NonArchimedean {
            residue_char,
            residue_size,
            field_char,
            zeta_flags: BTreeMap::new(),
        });
        f.validate()?;
        Ok(f)
    }

    pub fn with_zeta_flag(mut self, p: u64, present: bool) -> Result<Self> {
        if let LocalField::NonArchimedean(na) = &mut self {
            na.zeta_flags.insert(p, present);
        }
        self.validate()?;
        Ok(self)
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, LocalField::Real | LocalField::Complex)
    }

    pub fn validate(&self) -> Result<()> {
        let LocalField::NonArchimedean(na) = self else {
            return Ok(());
        };
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        if !is_prime(na.residue_char) {
            return bad(format!("residue characteristic {} is not prime", na.residue_char));
        }
        match log_exact(na.residue_size, na.residue_char) {
            Some(e) if e >= 1 => {}
            _ => {
                return bad(format!(
                    "residue field size {} is not a power of {}",
                    na.residue_size, na.residue_char
                ))
            }
        }
        if na.field_char != 0 && na.field_char != na.residue_char {
            return bad(format!("field characteristic {} must be 0 or {}", na.field_char, na.residue_char));
        }
        for (&p, &flag) in &na.zeta_flags {
            if !is_prime(p) {
                return bad(format!("zeta flag key {p} is not prime"));
            }
            if let Some(derived) = self.derived_zeta(p) {
                if derived != flag {
                    return bad(format!("zeta_{p} flag {flag} contradicts the residue field (derived {derived})"));
                }
            }
        }
        Ok(())
    }

    /// Membership of `zeta_p` when the descriptor alone decides it.
    fn derived_zeta(&self, p: u64) -> Option<bool> {
        let LocalField::NonArchimedean(na) = self else {
            return None;
        };
        if p != na.residue_char {
            // Hensel: the prime-to-residue roots of unity are those of the residue field.
            Some((na.residue_size - 1) % p == 0)
        } else if na.field_char == p {
            None
        } else if p == 2 {
            Some(true)
        } else {
            None
        }
    }

    /// Classifies the local field for the degree-`p` counting argument.
    pub fn counting_case(&self, p: u64) -> Result<CountingCase> {
        if !is_prime(p) {
            return Err(Error::InvalidDescriptor(format!("{p} is not prime")));
        }
        self.validate()?;
        match self {
            LocalField::Real | LocalField::Complex => Err(Error::InvalidDescriptor(
                "extension counting is not defined for archimedean places".into(),
            )),
            LocalField::Unspecified => Ok(CountingCase::UnramifiedPlusEisenstein),
            LocalField::NonArchimedean(na) => {
                if na.field_char == p {
                    return Ok(CountingCase::ArtinSchreier);
                }
                let zeta = match self.derived_zeta(p) {
                    Some(z) => z,
                    None => *na.zeta_flags.get(&p).ok_or_else(|| {
                        Error::InvalidDescriptor(format!("zeta_{p} membership must be supplied for this field"))
                    })?,
                };
                Ok(if zeta { CountingCase::Kummer } else { CountingCase::UnramifiedPlusEisenstein })
            }
        }
    }

    /// Lower bound on the number of degree-`p` extensions inside a fixed
    /// separable closure.
    pub fn count_degree_p_extensions(&self, p: u64) -> Result<ExtensionCount> {
        Ok(match self.counting_case(p)? {
            CountingCase::ArtinSchreier => ExtensionCount::Infinite,
            // Lines in a 2-dimensional F_p-space: (p^2 - 1)/(p - 1).
            CountingCase::Kummer => ExtensionCount::AtLeast((p * p - 1) / (p - 1)),
            CountingCase::UnramifiedPlusEisenstein => ExtensionCount::AtLeast(p + 1),
        })
    }

    /// `count` pairwise distinct degree-`p` extension labels, in a fixed order.
    pub fn catalog_degree_p_extensions(&self, p: u64, count: u64) -> Result<Vec<LocalExtensionLabel>> {
        let case = self.counting_case(p)?;
        let bound = self.count_degree_p_extensions(p)?;
        if !bound.admits(count) {
            let available = match bound {
                ExtensionCount::AtLeast(n) => n,
                ExtensionCount::Infinite => u64::MAX,
            };
            return Err(Error::InsufficientExtensions { requested: count, available });
        }
        let generic = matches!(self, LocalField::Unspecified);
        let labels = match case {
            CountingCase::ArtinSchreier => (1..)
                .filter(|k| k % p != 0)
                .take(count as usize)
                .map(|k| LocalExtensionLabel::new(ExtensionFamily::ArtinSchreier, k))
                .collect(),
            CountingCase::Kummer => (0..count)
                .map(|i| LocalExtensionLabel::new(ExtensionFamily::Kummer, i))
                .collect(),
            CountingCase::UnramifiedPlusEisenstein if generic => (0..count)
                .map(|i| LocalExtensionLabel::new(ExtensionFamily::Generic, i))
                .collect(),
            CountingCase::UnramifiedPlusEisenstein => std::iter::once(LocalExtensionLabel::new(ExtensionFamily::Unramified, 0))
                .chain((0..p).map(|i| LocalExtensionLabel::new(ExtensionFamily::EisensteinRoot, i)))
                .take(count as usize)
                .collect(),
        };
        Ok(labels)
    }

    /// Largest guaranteed catalog, capped at `cap` for the infinite case.
    pub fn guaranteed_catalog(&self, p: u64, cap: u64) -> Result<Vec<LocalExtensionLabel>> {
        let n = match self.count_degree_p_extensions(p)? {
            ExtensionCount::Infinite => cap,
            ExtensionCount::AtLeast(n) => n.min(cap),
        };
        self.catalog_degree_p_extensions(p, n)
    }

    /// Order of the local invariant group, `None` meaning all of `Q/Z`.
    pub fn invariant_group_order(&self) -> Option<u64> {
        match self {
            LocalField::Real => Some(2),
            LocalField::Complex => Some(1),
            _ => None,
        }
    }

    /// Descriptor of a completion of local degree `degree` above this one.
    pub fn after_extension(&self, degree: u64) -> LocalField {
        match (self, degree) {
            (f, 1) => f.clone(),
            (LocalField::Real, 2) | (LocalField::Complex, _) => LocalField::Complex,
            _ => LocalField::Unspecified,
        }
    }
}

#[derive(Serialize, Deserialize, Default)]
struct RawDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    residue_char: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    residue_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field_char: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zeta_flags: Option<BTreeMap<u64, bool>>,
}

impl Serialize for LocalField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match self {
            LocalField::NonArchimedean(na) => RawDescriptor {
                residue_char: Some(na.residue_char),
                residue_size: Some(na.residue_size),
                field_char: Some(na.field_char),
                zeta_flags: Some(na.zeta_flags.clone()),
                ..Default::default()
            },
            LocalField::Real => RawDescriptor { kind: Some("real".into()), ..Default::default() },
            LocalField::Complex => RawDescriptor { kind: Some("complex".into()), ..Default::default() },
            LocalField::Unspecified => RawDescriptor { kind: Some("unspecified".into()), ..Default::default() },
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawDescriptor::deserialize(d)?;
        let field = match raw.kind.as_deref() {
            Some("real") => LocalField::Real,
            Some("complex") => LocalField::Complex,
            Some("unspecified") => LocalField::Unspecified,
            Some("non-archimedean") | None => {
                let (Some(residue_char), Some(residue_size)) = (raw.residue_char, raw.residue_size) else {
                    return Err(D::Error::custom("descriptor needs residue_char and residue_size"));
                };
                LocalField::NonArchimedean(NonArchimedean {
                    residue_char,
                    residue_size,
                    field_char: raw.field_char.unwrap_or(0),
                    zeta_flags: raw.zeta_flags.unwrap_or_default(),
                })
            }
            Some(other) => return Err(D::Error::custom(format!("unknown descriptor kind `{other}`"))),
        };
        field.validate().map_err(D::Error::custom)?;
        Ok(field)
    }
}

/// Brauer class of a local field: a single invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalBrauerClass {
    pub invariant: QZInvariant,
}

impl LocalBrauerClass {
    pub fn new(invariant: QZInvariant) -> Self {
        LocalBrauerClass { invariant }
    }

    /// Over a local field the index is the order of the invariant.
    pub fn local_index(&self) -> BigUint {
        self.invariant.order()
    }

    /// Restriction to an extension of the given degree scales the invariant.
    pub fn local_restrict(&self, degree: u64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidExtension("degree must be positive".into()));
        }
        Ok(LocalBrauerClass { invariant: self.invariant.scale(degree) })
    }
}
