//! Exact combinatorics of alcove galleries in affine Weyl groups.
//!
//! The crate covers root data and their Weyl groups, the extended affine
//! Weyl group, Newton and Kottwitz invariants with standard representatives,
//! conjugacy classes of rank-one representatives, galleries with chimney
//! orientations and root operators, an explicit folded-gallery construction
//! for `x0 = t^lambda w0`, and an exhaustive enumerator used to certify
//! nonemptiness of affine Deligne-Lusztig varieties.
//!
//! All arithmetic is exact: integers and `Ratio<i64>`.

pub mod adlv;
pub mod conj;
pub mod construct;
pub mod eaw;
pub mod gallery;
pub mod linalg;
pub mod newton;
pub mod rootdata;

pub use eaw::{ExtAffine, Hyperplane};
pub use gallery::{Action, ChimneySpec, FoldStats, Gallery, Orientation};
pub use rootdata::{Kind, LatticeClass, RootDatum, Weyl};

/// Exact rationals used for coweights.
pub type Q = num_rational::Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration of {len} panels exceeds the cap {cap} (about {masks} masks)")]
    CapExceeded { len: usize, cap: usize, masks: u128 },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
