//! Finite linear and permutation groups over small finite fields.
//!
//! The crate builds matrix groups over GF(p^a), computes exact orbit
//! partitions of the full vector space, stabilizer-chain orders and
//! module decompositions, and checks p-exceptionality (every orbit on
//! vectors has size coprime to p while p divides the group order).

pub mod catalog;
pub mod constructions;
pub mod error;
pub mod extraspecial;
pub mod field;
pub mod formats;
pub mod group;
pub mod jordan;
pub mod matrix;
pub mod perm;
pub mod schreier;
pub mod space;
pub mod subspace;

pub use catalog::{catalog, catalog_entries, catalog_names, catalog_verify, CatalogEntry, CatalogReport};
pub use error::{Error, Result};
pub use extraspecial::{Extraspecial, ExtraspecialSpec, ExtraspecialVariant};
pub use field::{Elem, FieldSpec};
pub use formats::{BigCount, GroupFile, OrbitReport, PermFile};
pub use group::{Limits, MatGroup, OrbitPartition, PexcStatus, PexcVerdict, Split};
pub use jordan::jordan_tensor;
pub use matrix::{JordanType, Matrix};
pub use perm::{PermGroup, SubsetOrbitReport};
pub use space::SemilinearMap;
pub use subspace::Subspace;
