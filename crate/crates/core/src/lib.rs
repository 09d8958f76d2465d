//! Exact intersection theory on smooth quadrics and products of projective
//! spaces: Chern and Segre classes, numerical dimension and bigness of vector
//! bundles, spinor bundles, and the classification of non-big Ulrich bundles.

pub mod bundles;
pub mod classifier;
pub mod expr;
pub mod products;
pub mod report;
pub mod ring;
pub mod spinor;
pub mod suites;

pub use bundles::{BundleClass, BundleError};
pub use report::{Check, Provenance, VerificationReport};
pub use ring::{CohClass, Family, Ring, RingDescriptor, RingError};
pub use spinor::{Spinor, SpinorEngine, SpinorError, SpinorKind};
