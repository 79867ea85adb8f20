//! Exact minus class numbers and Hasse unit indices of abelian CM-fields.
//!
//! Fields are described by their groups of Dirichlet characters. The
//! minus class number is computed from generalized Bernoulli numbers with
//! exact cyclotomic arithmetic, and the unit index by a rule cascade over
//! the field's character group and its real quadratic data.

pub mod arith;
pub mod cli;
pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod fieldlat;
pub mod hminus;
pub mod quadratic;
pub mod theorems;
pub mod unitindex;

pub use error::{Error, Result};
