//! Stability analysis of strongly continuous semigroups on locally convex
//! spaces, decided numerically at finite truncation.

pub mod certify;
pub mod datko;
pub mod error;
pub mod field;
pub mod kothe;
pub mod fit;
pub mod func;
pub mod heat;
pub mod quad;
pub mod scenario;
pub mod seminorm;
pub mod seq;
pub mod stability;
pub mod verdict;

pub use error::{Error, Result};
pub use kothe::{builtin_matrix, seminorm_eval, KotheMatrix, SeqVector};
pub use seminorm::{BoundedSetGen, SeminormTag, WeightFn};
pub use verdict::{hierarchy_check, HierarchyCheck, Property, Verdicts};
