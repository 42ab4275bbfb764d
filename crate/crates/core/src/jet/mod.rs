//! Truncated Taylor series and jets of submanifolds.

mod graph;
mod layout;
mod multi;
mod series;
mod taylor;

pub use graph::{generic_value, Derivation, GraphJet, JetData};
pub use layout::{jet_dim, layout, Layout};
pub use multi::{MultiJet, EXACT};
pub use series::{compose_many, invert_series};
pub use taylor::TaylorJet;

use crate::error::JetError;
use crate::scalar::Scalar;

/// Total derivative in direction `var` of a series along a submanifold.
pub fn total_derivative<T: Scalar>(f: &MultiJet<T>, var: usize) -> Result<MultiJet<T>, JetError> {
    f.partial(var)
}
