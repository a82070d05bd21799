//! Exact index and torsion calculus for central simple algebras and
//! Severi-Brauer flag varieties.
//!
//! The crate is organised bottom-up:
//!
//! * [`invariants`] - exact arithmetic in `Q/Z`.
//! * [`local_brauer`] - local Brauer classes and degree-`p` extension catalogs.
//! * [`global_brauer`] - place-indexed invariant tuples, formal extensions,
//!   restriction, composita and the constructive extension lemmas.
//! * [`csa`] - algebra descriptors over abstract, local and global bases.
//! * [`sb_calculus`] - flag descriptors, index formulas and torsion rules.
//! * [`equiv_chain`] - chains of simple-equivalence certificates.
//! * [`oracle`] - brute-force verifiers used by tests and the CLI.

pub mod arith;
pub mod csa;
pub mod equiv_chain;
pub mod error;
pub mod fixtures;
pub mod global_brauer;
pub mod invariants;
pub mod local_brauer;
pub mod oracle;
pub mod sb_calculus;

pub use csa::{AlgebraDescriptor, BaseKind, BrauerData};
pub use equiv_chain::{EquivChain, FieldNode, SimpleEquivCertificate};
pub use error::{Error, Result};
pub use global_brauer::{FormalExtension, GlobalBrauerClass, Place};
pub use invariants::QZInvariant;
pub use local_brauer::{ExtensionCount, LocalBrauerClass, LocalExtensionLabel, LocalField};
pub use sb_calculus::{FlagDescriptor, NormalForm, TorsionBound};

/// Version tag written into every serialized record.
pub const SCHEMA_VERSION: u32 = 1;
