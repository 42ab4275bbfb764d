//! Differential invariants of linear symplectic group actions.

pub mod checks;
pub mod error;
pub mod expr;
pub mod group;
pub mod inv;
pub mod jet;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod signature;

pub use expr::ExprAst;
pub use group::{AlgebraElement, Flavor, Geometry, GroupElement, SymplecticSpace};
pub use inv::{Evaluation, Family};
pub use poly::Poly;
pub use signature::{SamplePlan, SignatureCloud, Submanifold, Verdict};
pub use error::{ExprError, GroupError, InvariantError, JetError, SignatureError};
pub use jet::{Derivation, GraphJet, JetData, MultiJet, TaylorJet};
pub use scalar::{Elementary, Rational, Scalar};
pub use twofloat::TwoFloat;
