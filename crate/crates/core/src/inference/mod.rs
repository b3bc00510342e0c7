//! Posterior laws, discovery-probability estimators, tail approximations
//! and parameter fitting.

mod estimators;
mod fit;
mod posterior;
mod tail;

pub use estimators::*;
pub use fit::*;
pub use posterior::*;
pub use tail::*;
