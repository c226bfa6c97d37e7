// Negated float comparisons are how NaN inputs get rejected throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod liouville;
pub mod quad;
pub mod units;

pub mod otto;
pub mod wigner;

pub mod correlations;
pub mod engines;
pub mod exchangers;
pub mod friction;

pub mod bench;

pub use error::{Error, Result};
