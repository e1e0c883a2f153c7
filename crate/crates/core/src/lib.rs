//! Finite-depth construction of perfect branch groups acting on
//! spherically homogeneous rooted trees, together with machine-checkable
//! verifications of the section calculus, length bookkeeping, shrinking
//! prefixes and finite-order certificates.

pub mod altembed;
pub mod error;
pub mod fpwords;
pub mod gammalab;
pub mod permcore;
pub mod shrinklab;
pub mod treeauto;

pub use error::{Error, Result};
